"""External drive fields B(t) and the area f(t) of x-polarized drives."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import OutOfRange, UnsupportedPulse


@dataclass(frozen=True)
class ConstantZ:
    B0: float


@dataclass(frozen=True)
class SechX:
    """Hyperbolic secant pulse a / cosh((t - t0) / tau) along x."""

    a: float
    tau: float
    t0: float = 0.0

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")


@dataclass(frozen=True)
class CosXZ:
    """Drive (-a cos(omega t), 0, epsilon)."""

    a: float
    omega: float
    epsilon: float

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")


@dataclass(frozen=True, eq=False)
class TabulatedX:
    """x-polarized field given by samples, linearly interpolated."""

    t: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        b = np.asarray(self.b, dtype=float)
        if t.ndim != 1 or t.shape != b.shape:
            raise ValueError("t and b must be 1-D arrays of equal length")
        if len(t) < 2:
            raise ValueError("need at least two samples")
        if np.any(np.diff(t) <= 0):
            raise ValueError("sample times must be strictly increasing")
        t.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_pairs(cls, pairs) -> "TabulatedX":
        arr = np.asarray(list(pairs), dtype=float)
        return cls(arr[:, 0], arr[:, 1])

    def value(self, t: float) -> float:
        if t < self.t[0] or t > self.t[-1]:
            raise OutOfRange(f"t={t} outside tabulated range [{self.t[0]}, {self.t[-1]}]")
        return float(np.interp(t, self.t, self.b))


Pulse = Union[ConstantZ, SechX, CosXZ, TabulatedX]

X_POLARIZED = (SechX, TabulatedX)


def _sech(s: float) -> float:
    e = math.exp(-abs(s))
    return 2.0 * e / (1.0 + e * e)


def field_at(p: Pulse, t: float) -> np.ndarray:
    """B(t) as a length-3 array."""
    if isinstance(p, ConstantZ):
        return np.array([0.0, 0.0, p.B0])
    if isinstance(p, SechX):
        return np.array([p.a * _sech((t - p.t0) / p.tau), 0.0, 0.0])
    if isinstance(p, CosXZ):
        return np.array([-p.a * math.cos(p.omega * t), 0.0, p.epsilon])
    if isinstance(p, TabulatedX):
        return np.array([p.value(t), 0.0, 0.0])
    raise TypeError(f"not a pulse: {p!r}")


def _sech_antiderivative(p: SechX, t: float) -> float:
    return 2.0 * p.a * p.tau * math.atan(math.tanh((t - p.t0) / (2.0 * p.tau)))


def _tabulated_area(p: TabulatedX, t_from: float, t: float) -> float:
    if t < t_from:
        return -_tabulated_area(p, t, t_from)
    lo, hi = p.t[0], p.t[-1]
    if t_from < lo or t > hi:
        raise OutOfRange(f"[{t_from}, {t}] not inside tabulated range [{lo}, {hi}]")
    inside = (p.t > t_from) & (p.t < t)
    ts = np.concatenate(([t_from], p.t[inside], [t]))
    bs = np.interp(ts, p.t, p.b)
    return float(np.sum(0.5 * (bs[1:] + bs[:-1]) * np.diff(ts)))


def pulse_area(p: Pulse, t0: float, t: float) -> float:
    """f(t) = integral of the x-amplitude from ``t0`` to ``t``.

    Closed form for the sech pulse, trapezoidal quadrature on the samples for
    a tabulated field (exact for the piecewise-linear interpolant).
    """
    if isinstance(p, SechX):
        return _sech_antiderivative(p, t) - _sech_antiderivative(p, t0)
    if isinstance(p, TabulatedX):
        return _tabulated_area(p, t0, t)
    raise UnsupportedPulse(f"pulse area is defined only for x-polarized drives, not {type(p).__name__}")


def load_tabulated_csv(path) -> TabulatedX:
    """Read a two-column ``t,b`` CSV; a non-numeric first row is taken as a header."""
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise ValueError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
            try:
                rows.append((float(row[0]), float(row[1])))
            except ValueError:
                if lineno == 1 and not rows:
                    continue
                raise ValueError(f"{path}:{lineno}: non-numeric value in {row!r}") from None
    return TabulatedX.from_pairs(rows)


def parse_pulse(text: str) -> Pulse:
    """Parse the ``kind:key=val,...`` mini-language.

    ``constz:1.0`` / ``constz:B0=1.0``, ``sech:a=1,tau=1,t0=0``,
    ``cos:a=1,omega=3.14,epsilon=0.1``, ``tab:path/to/file.csv``.
    """
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind == "tab":
        if not rest:
            raise ValueError("tab pulse needs a CSV path")
        return load_tabulated_csv(rest)
    params = {}
    if rest:
        for item in rest.split(","):
            key, eq, val = item.partition("=")
            if not eq:
                params[""] = float(key)
            else:
                params[key.strip()] = float(val)
    for v in params.values():
        if not math.isfinite(v):
            raise ValueError(f"non-finite parameter in {text!r}")
    try:
        if kind == "constz":
            if "" in params:
                params["B0"] = params.pop("")
            return ConstantZ(**params)
        if kind == "sech":
            return SechX(**params)
        if kind == "cos":
            return CosXZ(**params)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {kind!r} pulse: {exc}") from None
    raise ValueError(f"unknown pulse kind {kind!r}")
