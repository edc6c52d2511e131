"""The three convolution operators and their grid-based compositions.

All three operators convolve samples of a bounded continuous function
against the symmetrized kernel ``psi`` at resolution ``n``:

* basic:        point samples f(x - h/n),
* kantorovich:  local averages n * integral of f over [u, u + 1/n],
* quadrature:   convex combinations sum_s w_s f(u + s/(n r)).

The latter two reduce to the basic operator applied to a transformed
sample function, which is how they are evaluated here.

Two evaluation paths share the same nested Kronrod rule:

* ``apply`` (and the kind-specific wrappers) integrate a single point
  adaptively in the kernel variable h,
* ``apply_on_grid`` evaluates a whole grid of points at once by sharing
  one panel decomposition in the sample variable u, where the sample
  function's kinks sit at fixed locations; panels refine until the
  worst grid point meets tolerance.

Iterated and mixed compositions are made tractable by interpolating each
stage on a Chebyshev (or uniform) grid; the interpolation residual is
measured on a doubled validation grid and carried on the approximant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from . import kernel
from .errors import FlaggedApproximantError, QuadratureNonConvergedError
from .kernel import KernelParams
from .quadrature import (
    DEFAULT_CONFIG,
    G7_WEIGHTS,
    GK15_NODES,
    GK15_WEIGHTS,
    QuadratureConfig,
    TailEnvelope,
    gauss_legendre_01,
    integrate_interval,
    integrate_real_line,
    moment_truncation_radius,
    truncation_radius,
)

__all__ = [
    "OperatorKind",
    "OperatorSpec",
    "TestFunction",
    "GridApproximant",
    "apply",
    "apply_basic",
    "apply_kantorovich",
    "apply_quadrature_kind",
    "apply_on_grid",
    "apply_derivative",
    "central_moment",
    "make_grid_approximant",
    "iterate",
    "compose_mixed",
]


class OperatorKind(str, Enum):
    BASIC = "basic"
    KANTOROVICH = "kantorovich"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class OperatorSpec:
    """Operator kind, resolution n, kernel parameters and bound exponent.

    ``weights`` is required for (and only for) the quadrature kind: a
    nonnegative tuple summing to 1 within ``weight_tol``.  ``inner_order``
    is the fixed Gauss-Legendre order of the kantorovich inner average.
    """

    kind: OperatorKind
    n: int
    params: KernelParams
    alpha: float = 0.5
    weights: tuple[float, ...] | None = None
    inner_order: int = 12
    weight_tol: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "kind", OperatorKind(self.kind))
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 1):
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if self.inner_order < 1:
            raise ValueError("inner_order must be >= 1")
        if self.kind is OperatorKind.QUADRATURE:
            if not self.weights:
                raise ValueError("quadrature kind requires a nonempty weights tuple")
            w = tuple(float(v) for v in self.weights)
            if any(v < 0.0 for v in w):
                raise ValueError(f"weights must be nonnegative, got {w}")
            if abs(math.fsum(w) - 1.0) > self.weight_tol:
                raise ValueError(f"weights must sum to 1 within {self.weight_tol}, got {math.fsum(w)!r}")
            object.__setattr__(self, "weights", w)
        elif self.weights is not None:
            raise ValueError(f"weights are only meaningful for the quadrature kind, got kind={self.kind.value}")

    @property
    def r(self) -> int:
        """Number of quadrature shifts (1 outside the quadrature kind)."""
        return len(self.weights) if self.weights else 1


@dataclass(frozen=True)
class TestFunction:
    """A catalog function: vectorized evaluator plus known analytic facts.

    ``sup_norm`` bounds |f| on the working domain, ``modulus`` (when
    present) is a closed-form value of, or certified upper bound on, the
    modulus of continuity, and ``kinks`` lists points where f is not
    smooth (used to seed panel boundaries).  ``derivatives`` hold
    analytic derivative evaluators with their own sup norms and moduli.
    """

    name: str
    eval: Callable[[np.ndarray], np.ndarray]
    sup_norm: float
    derivatives: tuple[Callable, ...] = ()
    derivative_sup_norms: tuple[float, ...] = ()
    modulus: Callable[[float], float] | None = None
    derivative_moduli: tuple = ()
    kinks: tuple[float, ...] = ()

    __test__ = False  # not a pytest test class despite the name

    def __call__(self, x):
        return self.eval(x)

    def derivative(self, k: int) -> "TestFunction":
        """The k-th derivative as a TestFunction (requires analytic data)."""
        if not (isinstance(k, (int, np.integer)) and k >= 1):
            raise ValueError(f"derivative order must be a positive integer, got {k!r}")
        if k > len(self.derivatives):
            raise ValueError(
                f"{self.name} carries {len(self.derivatives)} analytic derivative(s); "
                f"order {k} requires supplying one (no silent finite differencing)"
            )
        return TestFunction(
            name=f"{self.name}^({k})",
            eval=self.derivatives[k - 1],
            sup_norm=self.derivative_sup_norms[k - 1],
            derivatives=self.derivatives[k:],
            derivative_sup_norms=self.derivative_sup_norms[k:],
            modulus=self.derivative_moduli[k - 1] if k <= len(self.derivative_moduli) else None,
            derivative_moduli=self.derivative_moduli[k:],
            kinks=(),
        )

    @classmethod
    def from_callable(cls, name: str, fn: Callable, sup_norm: float, **kwargs) -> "TestFunction":
        return cls(name=name, eval=fn, sup_norm=float(sup_norm), **kwargs)


def _transformed(f: TestFunction, spec: OperatorSpec):
    """Reduce any kind to the basic form: a sample function F of u, the
    kink locations of F, and the sup-norm budget for tail truncation."""
    n = spec.n
    if spec.kind is OperatorKind.BASIC:
        return f.eval, tuple(f.kinks), f.sup_norm
    if spec.kind is OperatorKind.KANTOROVICH:
        nodes, weights = gauss_legendre_01(spec.inner_order)
        shifts = nodes / n

        def averaged(u, _s=shifts, _w=weights, _f=f.eval):
            u = np.asarray(u, dtype=float)
            return np.asarray(_f(u[..., None] + _s), dtype=float) @ _w

        kinks = tuple(k - s for k in f.kinks for s in shifts)
        return averaged, kinks, f.sup_norm
    shifts = np.arange(1, spec.r + 1) / (n * spec.r)
    wq = np.asarray(spec.weights, dtype=float)

    def combined(u, _s=shifts, _w=wq, _f=f.eval):
        u = np.asarray(u, dtype=float)
        return np.asarray(_f(u[..., None] + _s), dtype=float) @ _w

    kinks = tuple(k - s for k in f.kinks for s in shifts)
    return combined, kinks, f.sup_norm


def _check_kind(spec: OperatorSpec, expected: OperatorKind):
    if spec.kind is not expected:
        raise ValueError(f"spec.kind must be {expected.value}, got {spec.kind.value}")


def _apply_scalar(f: TestFunction, spec: OperatorSpec, x: float, cfg: QuadratureConfig) -> float:
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    sample, _, scale = _transformed(f, spec)
    params, n = spec.params, spec.n

    def integrand(h):
        return np.asarray(sample(x - h / n), dtype=float) * kernel.psi(params, h)

    res = integrate_real_line(integrand, TailEnvelope(params, max(scale, 1.0)), cfg)
    if not res.converged:
        raise QuadratureNonConvergedError(
            f"operator quadrature did not converge (operator={spec.kind.value}, x={x}, n={n})"
        )
    return res.value


def apply(f: TestFunction, spec: OperatorSpec, x: float, cfg: QuadratureConfig | None = None) -> float:
    """Evaluate the operator named by ``spec.kind`` at a single point."""
    return _apply_scalar(f, spec, float(x), cfg or DEFAULT_CONFIG)


def apply_basic(f: TestFunction, spec: OperatorSpec, x: float, cfg: QuadratureConfig | None = None) -> float:
    """Point-sample convolution: integral of f(x - h/n) psi(h) dh."""
    _check_kind(spec, OperatorKind.BASIC)
    return apply(f, spec, x, cfg)


def apply_kantorovich(f: TestFunction, spec: OperatorSpec, x: float, cfg: QuadratureConfig | None = None) -> float:
    """Local-average convolution: n * inner averages of f over [., . + 1/n]."""
    _check_kind(spec, OperatorKind.KANTOROVICH)
    return apply(f, spec, x, cfg)


def apply_quadrature_kind(f: TestFunction, spec: OperatorSpec, x: float, cfg: QuadratureConfig | None = None) -> float:
    """Shifted-sample convolution with convex weights w_s at shifts s/(n r)."""
    _check_kind(spec, OperatorKind.QUADRATURE)
    return apply(f, spec, x, cfg)


def apply_derivative(f: TestFunction, spec: OperatorSpec, k: int, x: float, cfg: QuadratureConfig | None = None) -> float:
    """k-th derivative of the operator output, via the commuting identity
    (B f)^{(k)} = B(f^{(k)}).  Requires analytic derivatives on f."""
    return apply(f.derivative(k), spec, x, cfg)


class _Panel:
    __slots__ = ("a", "b", "values", "errors", "err_max")

    def __init__(self, a, b, values, errors):
        self.a = a
        self.b = b
        self.values = values
        self.errors = errors
        self.err_max = float(errors.max())


def _panel_batch(sample, params: KernelParams, n: int, xs: np.ndarray, a: float, b: float) -> _Panel:
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    u = mid + half * GK15_NODES
    fu = np.asarray(sample(u), dtype=float)
    weight_matrix = kernel.psi(params, n * (xs[:, None] - u[None, :]))
    scale = half * n
    k15 = scale * (weight_matrix @ (GK15_WEIGHTS * fu))
    g7 = scale * (weight_matrix @ (G7_WEIGHTS * fu))
    return _Panel(a, b, k15, np.abs(k15 - g7))


_MAX_REFINE_ROUNDS = 48
_MAX_SEED_PANELS = 512
_MAX_KINK_SEEDS = 256


def apply_on_grid(f: TestFunction, spec: OperatorSpec, xs, cfg: QuadratureConfig | None = None) -> np.ndarray:
    """Evaluate the operator at every point of ``xs`` in one pass.

    All points share a single panel decomposition in the sample variable;
    panels are seeded at the kernel's resolution scale 1/n plus the sample
    function's kink locations, then bisected greedily until the worst
    point's accumulated error estimate meets tolerance.
    """
    cfg = cfg or DEFAULT_CONFIG
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if xs.size == 0:
        return np.empty(0)
    if not np.all(np.isfinite(xs)):
        raise ValueError("grid points must be finite")
    sample, kinks, scale = _transformed(f, spec)
    params, n = spec.params, spec.n

    eps = min(max(cfg.truncation_eps / max(scale, 1.0), 1e-300), 0.5)
    radius = truncation_radius(params, eps)
    lo = float(xs.min()) - radius / n
    hi = float(xs.max()) + radius / n

    count = int(np.ceil((hi - lo) * n))
    count = max(2, min(max(count, 8), _MAX_SEED_PANELS, cfg.max_subdivisions))
    edges = np.linspace(lo, hi, count + 1)
    kink_budget = min(_MAX_KINK_SEEDS, max(0, cfg.max_subdivisions - count))
    inner = sorted({k for k in kinks if lo < k < hi})[:kink_budget]
    if inner:
        edges = np.unique(np.concatenate((edges, np.asarray(inner))))

    panels = [
        _panel_batch(sample, params, n, xs, edges[i], edges[i + 1])
        for i in range(len(edges) - 1)
    ]

    converged = True
    for _ in range(_MAX_REFINE_ROUNDS):
        total_err = np.zeros_like(xs)
        total_val = np.zeros_like(xs)
        for p in panels:
            total_err += p.errors
            total_val += p.values
        tol = max(cfg.abs_tol, cfg.rel_tol * float(np.abs(total_val).max()))
        worst = float(total_err.max())
        if worst <= tol:
            break
        peak = max(p.err_max for p in panels)
        cutoff = max(0.25 * peak, tol / (4.0 * len(panels)))
        to_split = [p for p in panels if p.err_max >= cutoff and (p.b - p.a) > 1e-14]
        if not to_split or len(panels) + len(to_split) > cfg.max_subdivisions:
            converged = False
            break
        keep = [p for p in panels if p not in set(to_split)]
        for p in to_split:
            mid = 0.5 * (p.a + p.b)
            keep.append(_panel_batch(sample, params, n, xs, p.a, mid))
            keep.append(_panel_batch(sample, params, n, xs, mid, p.b))
        panels = keep
    else:
        converged = False

    if not converged:
        total_err = np.zeros_like(xs)
        for p in panels:
            total_err += p.errors
        worst_x = float(xs[int(np.argmax(total_err))])
        raise QuadratureNonConvergedError(
            f"operator quadrature did not converge on the grid "
            f"(operator={spec.kind.value}, x={worst_x}, n={n})"
        )

    panels.sort(key=lambda p: p.a)
    out = np.zeros_like(xs)
    for p in panels:
        out += p.values
    return out


def central_moment(spec: OperatorSpec, x: float, k: int, cfg: QuadratureConfig | None = None) -> float:
    """The operator applied to v -> (v - x)^k, evaluated at x.

    By the kernel's evenness these moments are independent of x; for the
    basic kind the odd ones vanish.  They are the correction coefficients
    of the Taylor-refined error bounds.
    """
    if not (isinstance(k, (int, np.integer)) and k >= 1):
        raise ValueError(f"k must be a positive integer, got {k!r}")
    cfg = cfg or DEFAULT_CONFIG
    params, n = spec.params, spec.n
    k = int(k)

    if spec.kind is OperatorKind.BASIC:
        def integrand(h):
            return (-h / n) ** k * kernel.psi(params, h)
        degree = k
    elif spec.kind is OperatorKind.KANTOROVICH:
        # inner integral of (t - h/n)^k over [0, 1/n], done in closed form
        coeff = n ** (-k) / (k + 1.0)

        def integrand(h):
            return coeff * ((1.0 - h) ** (k + 1) - (-h) ** (k + 1)) * kernel.psi(params, h)
        degree = k + 1
    else:
        shifts = np.arange(1, spec.r + 1) / (n * spec.r)
        wq = np.asarray(spec.weights, dtype=float)

        def integrand(h):
            h = np.asarray(h, dtype=float)
            poly = ((shifts - h[..., None] / n) ** k) @ wq
            return poly * kernel.psi(params, h)
        degree = k

    radius = moment_truncation_radius(params, degree, cfg.truncation_eps)
    res = integrate_interval(integrand, -radius, radius, cfg)
    if not res.converged:
        raise QuadratureNonConvergedError(
            f"central moment quadrature did not converge (operator={spec.kind.value}, k={k}, n={n})"
        )
    return res.value


def _chebyshev_nodes(a: float, b: float, count: int) -> np.ndarray:
    j = np.arange(count)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return mid - half * np.cos(np.pi * j / (count - 1))


@dataclass
class GridApproximant:
    """Interpolant of operator output on [a, b], clamped outside.

    Evaluation at the stored nodes reproduces the stored values exactly;
    evaluation outside the domain returns the nearest endpoint value and
    latches ``extrapolated``.
    """

    domain: tuple[float, float]
    nodes: np.ndarray
    values: np.ndarray
    interpolation: str
    residual: float = math.nan
    flagged: bool = False
    extrapolated: bool = field(default=False, compare=False)
    _bary_weights: np.ndarray | None = field(default=None, repr=False, compare=False)
    _spline: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if nodes.ndim != 1 or nodes.size < 2 or np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must be strictly increasing with at least 2 entries")
        if values.shape != nodes.shape:
            raise ValueError("values must match nodes in shape")
        self.nodes = nodes
        self.values = values
        if self.interpolation == "barycentric-chebyshev":
            m = nodes.size
            w = np.ones(m)
            w[1::2] = -1.0
            w[0] *= 0.5
            w[-1] *= 0.5
            self._bary_weights = w
        elif self.interpolation == "cubic-spline":
            self._spline = CubicSpline(nodes, values)
        else:
            raise ValueError(f"unknown interpolation {self.interpolation!r}")

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        scalar = arr.ndim == 0
        flat = arr.reshape(-1).copy()
        a, b = self.domain
        below = flat < a
        above = flat > b
        if below.any() or above.any():
            self.extrapolated = True
            flat[below] = a
            flat[above] = b
        out = np.empty_like(flat)

        # exact node hits return stored values verbatim
        idx = np.searchsorted(self.nodes, flat)
        idx_c = np.clip(idx, 0, self.nodes.size - 1)
        exact = self.nodes[idx_c] == flat
        out[exact] = self.values[idx_c[exact]]

        rest = ~exact
        if rest.any():
            xr = flat[rest]
            if self._bary_weights is not None:
                ratios = self._bary_weights / (xr[:, None] - self.nodes[None, :])
                out[rest] = (ratios @ self.values) / ratios.sum(axis=1)
            else:
                out[rest] = self._spline(xr)
        result = out.reshape(arr.shape)
        return float(result) if scalar else result


def make_grid_approximant(
    f: TestFunction,
    spec: OperatorSpec,
    domain: tuple[float, float],
    node_count: int = 64,
    interpolation: str = "barycentric-chebyshev",
    cfg: QuadratureConfig | None = None,
    residual_ceiling: float = 1e-6,
) -> GridApproximant:
    """Sample the operator on ``node_count`` nodes over ``domain`` and wrap
    an interpolant; the max residual against direct evaluation on a doubled
    validation grid is recorded, and the approximant is flagged when it
    exceeds ``residual_ceiling``."""
    a, b = float(domain[0]), float(domain[1])
    if not b > a:
        raise ValueError(f"domain must satisfy b > a, got {domain!r}")
    if node_count < 8:
        raise ValueError(f"node_count must be >= 8, got {node_count}")
    if interpolation == "barycentric-chebyshev":
        nodes = _chebyshev_nodes(a, b, node_count)
        check = _chebyshev_nodes(a, b, 2 * node_count)
    elif interpolation == "cubic-spline":
        nodes = np.linspace(a, b, node_count)
        check = np.linspace(a, b, 2 * node_count)
    else:
        raise ValueError(f"unknown interpolation {interpolation!r}")
    # guard against roundoff pushing the edge nodes outside [a, b]
    nodes[0], nodes[-1] = a, b
    check[0], check[-1] = a, b

    values = apply_on_grid(f, spec, nodes, cfg)
    approx = GridApproximant((a, b), nodes, values, interpolation)
    direct = apply_on_grid(f, spec, check, cfg)
    residual = float(np.abs(approx(check) - direct).max())
    approx.residual = residual
    approx.flagged = residual > residual_ceiling
    return approx


def _as_test_function(approx: GridApproximant, name: str) -> TestFunction:
    sup = float(np.abs(approx.values).max())

    def evaluator(x, _a=approx):
        return _a(x)

    return TestFunction.from_callable(name, evaluator, sup)


def iterate(
    f: TestFunction,
    spec: OperatorSpec,
    r: int,
    domain: tuple[float, float],
    node_count: int = 64,
    interpolation: str = "barycentric-chebyshev",
    cfg: QuadratureConfig | None = None,
    residual_ceiling: float = 1e-6,
) -> GridApproximant:
    """The r-fold self-composition of the operator, via chained approximants.

    Stages beyond the first consume the previous approximant (with its
    clamped extension) as a bounded continuous function.  For r >= 2 all
    stages are built on the domain padded by the truncation radius over n,
    so clamping only ever sits in negligible-kernel-mass territory relative
    to the requested domain.
    """
    if not (isinstance(r, (int, np.integer)) and r >= 1):
        raise ValueError(f"r must be a positive integer, got {r!r}")
    if r == 1:
        approx = make_grid_approximant(f, spec, domain, node_count, interpolation, cfg, residual_ceiling)
        if approx.flagged:
            raise FlaggedApproximantError(
                f"stage 1 approximant residual {approx.residual:.3e} exceeds ceiling {residual_ceiling:.3e}",
                stage=1,
            )
        return approx
    cfg = cfg or DEFAULT_CONFIG
    pad = truncation_radius(spec.params, cfg.truncation_eps) / spec.n
    padded = (float(domain[0]) - pad, float(domain[1]) + pad)
    current: TestFunction = f
    approx = None
    for stage in range(1, r + 1):
        approx = make_grid_approximant(current, spec, padded, node_count, interpolation, cfg, residual_ceiling)
        if approx.flagged:
            raise FlaggedApproximantError(
                f"stage {stage} approximant residual {approx.residual:.3e} "
                f"exceeds ceiling {residual_ceiling:.3e}",
                stage=stage,
            )
        current = _as_test_function(approx, f"{f.name}.stage{stage}")
    return approx


def compose_mixed(
    f: TestFunction,
    kind: OperatorKind | str,
    ns: Sequence[int],
    params: KernelParams,
    alpha: float = 0.5,
    domain: tuple[float, float] = (-3.0, 3.0),
    node_count: int = 64,
    weights: tuple[float, ...] | None = None,
    interpolation: str = "barycentric-chebyshev",
    cfg: QuadratureConfig | None = None,
    residual_ceiling: float = 1e-6,
) -> GridApproximant:
    """Chain the operator at ascending resolutions k_1 <= ... <= k_r,
    applying the coarsest first."""
    ns = [int(v) for v in ns]
    if not ns:
        raise ValueError("ns must be a nonempty ascending list")
    if any(b < a for a, b in zip(ns, ns[1:])):
        raise ValueError(f"ns must be ascending (ties allowed), got {ns}")
    kind = OperatorKind(kind)

    def spec_for(n):
        return OperatorSpec(kind=kind, n=n, params=params, alpha=alpha, weights=weights)

    if len(ns) == 1:
        return make_grid_approximant(f, spec_for(ns[0]), domain, node_count, interpolation, cfg, residual_ceiling)
    cfg = cfg or DEFAULT_CONFIG
    pad = truncation_radius(params, cfg.truncation_eps) / min(ns)
    padded = (float(domain[0]) - pad, float(domain[1]) + pad)
    current: TestFunction = f
    approx = None
    for stage, n in enumerate(ns, start=1):
        approx = make_grid_approximant(current, spec_for(n), padded, node_count, interpolation, cfg, residual_ceiling)
        if approx.flagged:
            raise FlaggedApproximantError(
                f"stage {stage} (n={n}) approximant residual {approx.residual:.3e} "
                f"exceeds ceiling {residual_ceiling:.3e}",
                stage=stage,
            )
        current = _as_test_function(approx, f"{f.name}.stage{stage}")
    return approx
