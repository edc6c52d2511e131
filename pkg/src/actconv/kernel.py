"""Closed-form evaluation of the deformed sigmoid kernel family.

The building blocks are a two-parameter sigmoid ``nu``, the bell-shaped
density ``g`` obtained as a central difference of the sigmoid, and the
symmetrized density ``psi`` (the even average of ``g`` at ``q`` and
``1/q``).  Alongside the point evaluators, this module carries the analytic
constants attached to the family: the global maximum of ``g``, an
exponential envelope valid for arguments >= 1, and closed-form upper bounds
for tail mass and absolute moments of ``psi``.

All evaluators accept scalars or numpy arrays and are pure functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import HypothesisNotMetError

__all__ = [
    "KernelParams",
    "nu",
    "g",
    "psi",
    "psi_envelope",
    "tail_mass_bound",
    "moment_bound",
]

# float(math.factorial(k)) overflows beyond this
_MAX_MOMENT_ORDER = 170


@dataclass(frozen=True)
class KernelParams:
    """Deformation ``q`` and rate ``beta`` of the kernel family, both > 0."""

    q: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        for name in ("q", "beta"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise ValueError(f"{name} must be a positive real, got {value!r}") from None
            if not math.isfinite(value) or value <= 0.0:
                raise ValueError(f"{name} must be a positive finite real, got {value!r}")
            object.__setattr__(self, name, value)

    @property
    def q_sum(self) -> float:
        """q + 1/q; appears in every tail and moment constant. Always >= 2."""
        return self.q + 1.0 / self.q

    @property
    def g_max_value(self) -> float:
        """Height of the density g at its peak: (1 - e^-beta) / (2 (1 + e^-beta))."""
        e = math.exp(-self.beta)
        return (1.0 - e) / (2.0 * (1.0 + e))

    @property
    def g_argmax(self) -> float:
        """Location of the peak of g: ln(q) / beta."""
        return math.log(self.q) / self.beta


def _prepare(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("x must be finite")
    scalar = arr.ndim == 0
    return (arr.reshape(1) if scalar else arr), scalar


def _ret(out: np.ndarray, scalar: bool):
    return float(out[0]) if scalar else out


def nu(params: KernelParams, x) -> float | np.ndarray:
    """Sigmoid (1 - q e^{-beta x}) / (1 + q e^{-beta x}).

    Saturates to +-1 for large |beta x| without overflow: the negative axis
    is evaluated as (e^{beta x} - q) / (e^{beta x} + q).
    """
    arr, scalar = _prepare(x)
    bx = params.beta * arr
    out = np.empty_like(bx)
    pos = bx >= 0
    if pos.any():
        e = np.exp(-bx[pos])
        out[pos] = (1.0 - params.q * e) / (1.0 + params.q * e)
    neg = ~pos
    if neg.any():
        e = np.exp(bx[neg])
        out[neg] = (e - params.q) / (e + params.q)
    return _ret(out, scalar)


def _g_right(q: float, beta: float, t: np.ndarray) -> np.ndarray:
    # Cancellation-free form of (nu(t+1) - nu(t-1)) / 4, valid for t >= 0.
    # With w = q e^{-beta t}: g = w sinh(beta) / (1 + 2 w cosh(beta) + w^2).
    w = q * np.exp(-beta * t)
    return w * math.sinh(beta) / (1.0 + 2.0 * math.cosh(beta) * w + w * w)


def g(params: KernelParams, x) -> float | np.ndarray:
    """Density (nu(x+1) - nu(x-1)) / 4; strictly positive on the real line.

    The negative axis is routed through the reflection g_q(-x) = g_{1/q}(x),
    so the deformed symmetry holds bit-exactly.
    """
    arr, scalar = _prepare(x)
    out = np.empty_like(arr)
    pos = arr >= 0
    if pos.any():
        out[pos] = _g_right(params.q, params.beta, arr[pos])
    neg = ~pos
    if neg.any():
        out[neg] = _g_right(1.0 / params.q, params.beta, -arr[neg])
    return _ret(out, scalar)


def psi(params: KernelParams, x) -> float | np.ndarray:
    """Symmetrized density (g_q(x) + g_{1/q}(x)) / 2; even, positive, unit mass.

    Evaluated through |x|, so psi(x) == psi(-x) holds exactly in floating
    point.
    """
    arr, scalar = _prepare(x)
    t = np.abs(arr)
    out = 0.5 * (_g_right(params.q, params.beta, t) + _g_right(1.0 / params.q, params.beta, t))
    return _ret(out, scalar)


def psi_envelope(params: KernelParams, x) -> float | np.ndarray:
    """Exponential majorant (q + 1/q) beta e^{-beta (x - 1)} / 2 for x >= 1.

    Strictly dominates psi on [1, inf); undefined (raises) below 1.
    """
    arr, scalar = _prepare(x)
    if np.any(arr < 1.0):
        raise ValueError("psi_envelope is only valid for x >= 1")
    out = 0.5 * params.q_sum * params.beta * np.exp(-params.beta * (arr - 1.0))
    return _ret(out, scalar)


def tail_mass_bound(params: KernelParams, n: int, alpha: float) -> float:
    """Upper bound (q + 1/q) e^{-beta (n^{1-alpha} - 1)} on the kernel mass
    outside the window |h| >= n^{1-alpha}.

    Requires n^{1-alpha} > 2.
    """
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
    m = float(n) ** (1.0 - alpha)
    if m <= 2.0:
        raise HypothesisNotMetError(
            f"tail bound requires n**(1 - alpha) > 2; "
            f"got n={n}, alpha={alpha}, n**(1 - alpha)={m:.6g}"
        )
    return params.q_sum * math.exp(-params.beta * (m - 1.0))


def moment_bound(params: KernelParams, k: int) -> float:
    """Upper bound on the k-th absolute moment of psi, k >= 1:

        (1 - e^-beta) / (1 + e^-beta) * 1/(k+1)  +  (q + 1/q) e^beta k! / beta^k
    """
    if not (isinstance(k, (int, np.integer)) and k >= 1):
        raise ValueError(
            f"k must be a positive integer, got {k!r}; "
            "the k = 0 integral is the unit normalization of psi"
        )
    if k > _MAX_MOMENT_ORDER:
        raise ValueError(f"k = {k} overflows the float factorial (max {_MAX_MOMENT_ORDER})")
    e = math.exp(-params.beta)
    flat = (1.0 - e) / (1.0 + e) / (k + 1.0)
    tail = params.q_sum * math.exp(params.beta) * float(math.factorial(int(k))) / params.beta**k
    return flat + tail
