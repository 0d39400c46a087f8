"""Exponentially accurate reconstruction of bandlimited functions from
finitely many local-average samples."""

from .errors import *  # noqa: F401,F403
from .extension import ExtensionPlan, build_plan, hilbert_inverse, phi_hat, phi_hat_derivative
from .kernel import KernelTable, l1_norm_phik, phi_value, phi_values, tail_l2
from .measures import (
    AveragingMeasure,
    MeasureContext,
    experiment1_measure,
    experiment2_measure,
    validate_measure,
    w_derivative,
)
from .reconstruct import (
    ErrorReport,
    ReconstructionConfig,
    choose_k,
    error_bound,
    reconstruct_at,
    sinc_baseline,
)
from .signals import BandSignal, SampleVector, average_sample, collect_samples, eval_signal, signal_norm

__version__ = "0.1.0"
