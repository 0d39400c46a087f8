"""Flat sectioned key-value config files.

Example::

    [measure]
    atom = [-1/4, 1/8]
    atom = [0, 3/4]
    atom = [1/4, 1/8]
    sigma = 1/2

    [signal]
    target = "sinc"

    [run]
    delta = pi/3, pi/2, 2pi/3
    n = 2, 4, 6, 8, 10, 12
    c_h = 1.0
    quad_tol = 1e-12
    output = exp2.csv

Repeated keys accumulate. Numbers may be decimals, fractions (``1/12``)
or rational multiples of pi (``2pi/3``, ``pi/4``, ``0.5*pi``).
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .measures import AveragingMeasure, experiment1_measure, experiment2_measure, measure_from_spec, parse_number
from .signals import BandSignal

PRESETS = {
    "experiment1": experiment1_measure,
    "experiment2": experiment2_measure,
    "point": AveragingMeasure.point_mass,
}

_PI_RE = re.compile(r"^\s*([+-]?[0-9.]*)\s*\*?\s*pi\s*(?:/\s*([0-9.]+))?\s*$")


def parse_real(text) -> float:
    """Float from a decimal, fraction or rational multiple of pi."""
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip().strip('"')
    m = _PI_RE.match(s)
    if m:
        num = m.group(1)
        coef = Fraction(1) if num in ("", "+") else Fraction(-1) if num == "-" else parse_number(num)
        den = parse_number(m.group(2)) if m.group(2) else Fraction(1)
        return float(coef) * math.pi / float(den)
    return float(parse_number(s))


def parse_list(text, conv=parse_real):
    s = str(text).strip()
    if s.startswith("[") and s.endswith("]"):
        s = s[1:-1]
    return [conv(part) for part in s.split(",") if part.strip()]


def parse_int_list(text):
    out = []
    for part in parse_list(text, conv=lambda v: v.strip()):
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            try:
                out.append(int(part))
            except ValueError as exc:
                raise ConfigError(f"not an integer: {part!r}") from exc
    return out


def read_sections(path) -> dict[str, dict[str, list[str]]]:
    """``{section: {key: [raw values in order]}}``."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    sections: dict[str, dict[str, list[str]]] = {}
    current = sections.setdefault("", {})
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = sections.setdefault(line[1:-1].strip(), {})
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        current.setdefault(key, []).append(value)
    return sections


def _last(sec, key, default=None):
    vals = sec.get(key)
    return vals[-1] if vals else default


def measure_from_section(sec: dict[str, list[str]]) -> AveragingMeasure:
    preset = _last(sec, "preset")
    if preset is not None:
        name = preset.strip('"')
        if name not in PRESETS:
            raise ConfigError(f"unknown measure preset {name!r}")
        return PRESETS[name]()
    uniform = str(_last(sec, "uniform", "false")).lower() == "true"
    atoms = []
    for raw in sec.get("atom", []):
        atoms.append(parse_list(raw, conv=lambda v: v.strip()))
    for raw in sec.get("atoms", []):
        try:
            atoms.extend(json.loads(raw.replace("'", '"')))
        except json.JSONDecodeError:
            atoms.extend(
                [p.strip() for p in pair.split(",")]
                for pair in re.findall(r"\[([^\[\]]+)\]", raw)
            )
    return measure_from_spec(atoms, _last(sec, "sigma"), uniform)


def load_measure(spec: str) -> AveragingMeasure:
    """A preset name or a config file with a ``[measure]`` section."""
    if spec in PRESETS:
        return PRESETS[spec]()
    sections = read_sections(spec)
    if "measure" not in sections:
        raise ConfigError(f"{spec} has no [measure] section")
    return measure_from_section(sections["measure"])


def signal_from_section(sec: dict[str, list[str]], delta: float) -> BandSignal:
    target = _last(sec, "target")
    if target is not None:
        if target.strip('"') != "sinc":
            raise ConfigError(f"unknown target {target!r}")
        return BandSignal.sinc_target(delta)
    terms = _last(sec, "terms")
    if terms is None:
        raise ConfigError("signal needs target = \"sinc\" or terms = [[x, a], ...]")
    pairs = re.findall(r"\[([^\[\]]+)\]", terms)
    return BandSignal.from_terms(delta, [parse_list(p) for p in pairs])


def parse_grid(text) -> np.ndarray:
    """``default`` (j/10, j=1..9), ``a:b:m`` (m points strictly inside) or a list."""
    s = str(text).strip()
    if s in ("", "default"):
        return np.arange(1, 10) / 10
    if ":" in s:
        a, b, m = s.split(":")
        return np.linspace(parse_real(a), parse_real(b), int(m) + 2)[1:-1]
    return np.array(parse_list(s))


@dataclass
class ExperimentConfig:
    measure: AveragingMeasure
    deltas: list[float]
    ns: list[int]
    target: dict = field(default_factory=lambda: {"target": ['"sinc"']})
    x_grid: np.ndarray = field(default_factory=lambda: np.arange(1, 10) / 10)
    c_h: float = 1.0
    quad_tol: float = 1e-12
    output: str | None = None

    def signal(self, delta):
        return signal_from_section(self.target, delta)


def load_experiment_config(path) -> ExperimentConfig:
    sections = read_sections(path)
    if "measure" not in sections:
        raise ConfigError("config needs a [measure] section")
    run = sections.get("run", {})
    deltas = parse_list(_last(run, "delta", "")) if "delta" in run else []
    ns = parse_int_list(_last(run, "n", "")) if "n" in run else []
    if not deltas or not ns:
        raise ConfigError("[run] needs delta and n")
    output = _last(run, "output")
    return ExperimentConfig(
        measure=measure_from_section(sections["measure"]),
        deltas=deltas,
        ns=ns,
        target=sections.get("signal", {"target": ['"sinc"']}),
        x_grid=parse_grid(_last(run, "x_grid", "default")),
        c_h=parse_real(_last(run, "c_h", "1.0")),
        quad_tol=parse_real(_last(run, "quad_tol", "1e-12")),
        output=output.strip('"') if output else None,
    )
