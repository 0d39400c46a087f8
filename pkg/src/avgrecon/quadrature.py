"""Gauss-Legendre helpers."""

from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss


@lru_cache(maxsize=None)
def gauss_legendre(num_nodes):
    """Nodes and weights on [-1, 1]. Cached; callers must not mutate."""
    nodes, weights = leggauss(num_nodes)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def panel_rule(a, b, num_panels, nodes_per_panel=32):
    """Composite Gauss-Legendre nodes and weights for [a, b]."""
    x, w = gauss_legendre(nodes_per_panel)
    edges = np.linspace(a, b, num_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    pts = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wts = (half[:, None] * w[None, :]).ravel()
    return pts, wts
