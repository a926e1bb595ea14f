"""Shared numerical kernel: Bessel functions and their zeros, adaptive and
oscillatory quadrature, Gegenbauer polynomials, and a dense symmetric /
Hermitian eigensolver.

All routines are pure; the only module state is a read-only node cache.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate as _integrate
from scipy import optimize as _optimize
from scipy import special as _special

DEFAULT_TOL = 1e-9

_TWO_PI = 2.0 * math.pi


class DomainError(ValueError):
    """Argument outside the supported range of an operation."""


class BudgetExceededError(RuntimeError):
    """Quadrature did not converge within its evaluation budget.

    Carries the partial estimate in ``partial``.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ConsistencyError(RuntimeError):
    """Two independent routes to the same quantity disagree."""


class InternalError(RuntimeError):
    """Invariant violated inside a numerical routine (e.g. bracketing failure)."""


@dataclass(frozen=True)
class QuadratureResult:
    """Value of an integral together with an a-posteriori error estimate."""

    value: float
    abs_error_estimate: float
    evaluations: int

    def __post_init__(self):
        if not math.isfinite(self.abs_error_estimate) or self.abs_error_estimate < 0:
            raise ValueError("abs_error_estimate must be finite and nonnegative")


@dataclass(frozen=True)
class SpectrumReport:
    """Sorted eigenvalues of one Hermitian matrix plus residual diagnostics."""

    eigenvalues: tuple
    min_eigenvalue: float
    residual_bound: float
    dimension: int

    @classmethod
    def empty(cls):
        return cls(eigenvalues=(), min_eigenvalue=math.nan, residual_bound=0.0, dimension=0)


# ---------------------------------------------------------------------------
# Bessel functions
# ---------------------------------------------------------------------------

def bessel_j(order: int, x: float) -> float:
    """Bessel function J_order(x) for integer order >= 0."""
    if not (0 <= order <= 512):
        raise DomainError(f"order {order} outside supported range [0, 512]")
    if not (0.0 <= x <= 1.0e4):
        raise DomainError(f"argument {x} outside supported range [0, 1e4]")
    return float(_special.jv(order, x))


def bessel_j_table(max_order: int, x: np.ndarray) -> np.ndarray:
    """J_k(x) for k = 0..max_order on an array of points, shape (max_order+1, len(x))."""
    x = np.asarray(x, dtype=float)
    orders = np.arange(max_order + 1)
    return _special.jv(orders[:, None], x[None, :])


def bessel_zero(order: int, k: int) -> float:
    """k-th positive zero of J_order, verified by sign changes on a bracketing grid."""
    if not (0 <= order <= 8):
        raise DomainError(f"order {order} outside supported range [0, 8]")
    if not (1 <= k <= 64):
        raise DomainError(f"zero index {k} outside supported range [1, 64]")
    z = float(_special.jn_zeros(order, k)[k - 1])
    # verification: |J(z)| small and exactly k sign changes of J on (0, z + pi/4]
    if abs(_special.jv(order, z)) > 1e-12:
        raise InternalError(f"candidate zero J_{order} #{k} fails residual check at {z}")
    grid = np.linspace(1e-9, z + math.pi / 4.0, max(64, int(8 * (z + 1))))
    vals = _special.jv(order, grid)
    signs = np.sign(vals)
    signs[signs == 0] = 1
    changes = np.nonzero(np.diff(signs))[0]
    if len(changes) < k:
        raise InternalError(
            f"bracketing grid found {len(changes)} sign changes before {z}, expected {k}; "
            f"grid step {grid[1] - grid[0]:.3e}"
        )
    lo, hi = grid[changes[k - 1]], grid[changes[k - 1] + 1]
    if not (lo <= z <= hi):
        # re-polish from the bracketing interval
        z = float(_optimize.brentq(lambda t: _special.jv(order, t), lo, hi, xtol=1e-14))
    return z


def gegenbauer(n: int, lam: float, x) -> float:
    """Gegenbauer polynomial C_n^lam(x) via the three-term recurrence."""
    if n < 0 or n > 64:
        raise DomainError(f"degree {n} outside supported range [0, 64]")
    if lam <= 0:
        raise DomainError("lambda must be positive")
    x = np.asarray(x, dtype=float)
    c_prev = np.ones_like(x)
    if n == 0:
        return c_prev if c_prev.ndim else float(c_prev)
    c = 2.0 * lam * x
    for m in range(2, n + 1):
        c, c_prev = (2.0 * x * (m + lam - 1.0) * c - (m + 2.0 * lam - 2.0) * c_prev) / m, c
    return c if c.ndim else float(c)


def legendre_p(n: int, x) -> float:
    """Legendre polynomial P_n(x) (the lambda = 1/2 Gegenbauer)."""
    return gegenbauer(n, 0.5, x)


# ---------------------------------------------------------------------------
# Fixed Gauss-Legendre panel machinery
# ---------------------------------------------------------------------------

_GL_CACHE: dict = {}
_GL_LOCK = threading.Lock()


def _gl_rule(n: int):
    with _GL_LOCK:
        rule = _GL_CACHE.get(n)
        if rule is None:
            rule = np.polynomial.legendre.leggauss(n)
            _GL_CACHE[n] = rule
    return rule


def gauss_panels(edges, nodes_per_panel: int = 16):
    """Composite Gauss-Legendre nodes/weights on consecutive [edges] panels."""
    edges = np.asarray(edges, dtype=float)
    xg, wg = _gl_rule(nodes_per_panel)
    a = edges[:-1][:, None]
    b = edges[1:][:, None]
    x = 0.5 * (b - a) * (xg[None, :] + 1.0) + a
    w = 0.5 * (b - a) * wg[None, :]
    return x.ravel(), w.ravel()


def graded_edges(a: float, b: float, toward_a: bool, depth: int = 12, ratio: float = 0.5):
    """Panel edges on [a, b] geometrically refined toward one endpoint."""
    fracs = [ratio ** i for i in range(depth, 0, -1)]
    if toward_a:
        pts = [a] + [a + (b - a) * f for f in fracs] + [b]
    else:
        pts = [a] + [b - (b - a) * f for f in reversed(fracs)] + [b]
    return np.array(sorted(set(pts)))


def richardson_limit(xs: np.ndarray, ys: np.ndarray):
    """Neville extrapolation of y(x) to x = 0; returns (limit, error_estimate)."""
    n = len(xs)
    tab = np.array(ys, dtype=float)
    xs = np.asarray(xs, dtype=float)
    diag = [tab[-1]]
    for m in range(1, n):
        tab = (xs[m:] * tab[:-1] - xs[: n - m] * tab[1:]) / (xs[m:] - xs[: n - m])
        diag.append(tab[-1])
    if n >= 2:
        err = abs(diag[-1] - diag[-2])
    else:
        err = abs(diag[-1])
    return diag[-1], err


class OscillatoryRadialGrid:
    """Composite quadrature grid for integrals of Bessel-product type on (0, inf).

    The integrand is assumed to decay like an inverse power with bounded
    trigonometric oscillation of period dividing ``period`` beyond ``t0``.
    The core region [0, t0] is covered by Gauss panels; the tail is split
    into full-period segments whose partial sums are Richardson-extrapolated
    (the segment sums are smooth in 1/t because every harmonic completes an
    integer number of periods per segment).
    """

    def __init__(self, t0: float, n_tail: int = 32, nodes: int = 16,
                 period: float = math.pi, window: int = 12):
        n_core = max(4, int(math.ceil(t0 / period)))
        self.t0 = n_core * period
        core_edges = np.linspace(0.0, self.t0, n_core + 1)
        self.x_core, self.w_core = gauss_panels(core_edges, nodes)
        tail_edges = self.t0 + period * np.arange(n_tail + 1)
        xt, wt = gauss_panels(tail_edges, nodes)
        self.x_tail = xt.reshape(n_tail, nodes)
        self.w_tail = wt.reshape(n_tail, nodes)
        self.tail_ends = tail_edges[1:]
        self.n_tail = n_tail
        self.window = min(window, n_tail)

    @property
    def all_nodes(self) -> np.ndarray:
        return np.concatenate([self.x_core, self.x_tail.ravel()])

    def integrate_values(self, values: np.ndarray):
        """Integrate from sampled values on all_nodes; returns (value, error)."""
        nc = self.x_core.size
        core = float(np.dot(self.w_core, values[:nc]))
        seg = (values[nc:].reshape(self.x_tail.shape) * self.w_tail).sum(axis=1)
        partial = core + np.cumsum(seg)
        xs = 1.0 / self.tail_ends[-self.window:]
        limit, err = richardson_limit(xs, partial[-self.window:])
        return limit, err + abs(seg[-1]) * 1e-3


def oscillatory_integral(f, t0: float, *, n_tail: int = 32, nodes: int = 16,
                         period: float = math.pi) -> QuadratureResult:
    """Integral of f over (0, inf) for oscillatory integrands with power decay."""
    grid = OscillatoryRadialGrid(t0, n_tail=n_tail, nodes=nodes, period=period)
    x = grid.all_nodes
    vals = np.asarray(f(x), dtype=float)
    value, err = grid.integrate_values(vals)
    return QuadratureResult(value=value, abs_error_estimate=err, evaluations=x.size)


# ---------------------------------------------------------------------------
# General adaptive quadrature
# ---------------------------------------------------------------------------

def integrate(f, a: float, b: float, tol: float = DEFAULT_TOL, *,
              singularity_a: float | None = None,
              singularity_b: float | None = None,
              points=None,
              tail: str | None = None,
              period: float = math.pi,
              budget: int = 500_000) -> QuadratureResult:
    """Adaptive integral of f over (a, b); b may be math.inf.

    Endpoint singularities of algebraic type (x-a)^alpha with alpha > -1 are
    declared by the caller through ``singularity_a`` / ``singularity_b`` and
    removed by a power substitution.  For b = inf the caller declares the tail
    class: ``tail="decay"`` (integrable decay, handled by the library
    transformation) or ``tail="oscillatory"`` (power decay times oscillation
    of period dividing ``period``).
    """
    count = [0]

    def g(x):
        count[0] += 1
        if count[0] > budget:
            raise BudgetExceededError(
                f"evaluation budget {budget} exceeded on [{a}, {b}]",
                partial=None,
            )
        return f(x)

    if math.isinf(b):
        if tail == "oscillatory":
            t0 = max(40.0, 8 * period) + a
            res = oscillatory_integral(lambda x: np.vectorize(f)(x), t0, period=period)
            if a > 0:
                head, head_err = _quad_finite(g, 0.0, a, tol, singularity_a=None)
                res = QuadratureResult(res.value - head, res.abs_error_estimate + head_err,
                                       res.evaluations + count[0])
            return res
        val, err = _integrate.quad(g, a, b, epsabs=tol, epsrel=tol, limit=400)
        return QuadratureResult(val, err, count[0])

    val, err = _quad_finite(g, a, b, tol, singularity_a=singularity_a,
                            singularity_b=singularity_b, points=points)
    if err > max(tol, abs(val) * tol) * 1e3:
        raise BudgetExceededError(
            f"requested tolerance {tol} not met (error estimate {err})",
            partial=QuadratureResult(val, err, count[0]),
        )
    return QuadratureResult(val, err, count[0])


def _quad_finite(g, a, b, tol, singularity_a=None, singularity_b=None, points=None):
    if singularity_a is not None and singularity_b is not None:
        mid = 0.5 * (a + b)
        v1, e1 = _quad_finite(g, a, mid, tol / 2, singularity_a=singularity_a)
        v2, e2 = _quad_finite(g, mid, b, tol / 2, singularity_b=singularity_b)
        return v1 + v2, e1 + e2
    if singularity_a is not None:
        gamma = 1.0 / (1.0 + singularity_a)
        gamma = max(gamma, 1.0)
        umax = (b - a) ** (1.0 / gamma)
        return _integrate.quad(lambda u: g(a + u ** gamma) * gamma * u ** (gamma - 1.0),
                               0.0, umax, epsabs=tol, epsrel=tol, limit=400)
    if singularity_b is not None:
        gamma = 1.0 / (1.0 + singularity_b)
        gamma = max(gamma, 1.0)
        umax = (b - a) ** (1.0 / gamma)
        return _integrate.quad(lambda u: g(b - u ** gamma) * gamma * u ** (gamma - 1.0),
                               0.0, umax, epsabs=tol, epsrel=tol, limit=400)
    kwargs = {}
    if points is not None:
        interior = [p for p in points if a < p < b]
        if interior:
            kwargs["points"] = interior
    return _integrate.quad(g, a, b, epsabs=tol, epsrel=tol, limit=400, **kwargs)


# ---------------------------------------------------------------------------
# Dense symmetric / Hermitian eigensolver
# ---------------------------------------------------------------------------

def sym_eig(matrix, tol: float = 1e-12) -> SpectrumReport:
    """Eigenvalues of a dense Hermitian matrix with residual diagnostics."""
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError("matrix must be square")
    n = m.shape[0]
    if n > 5000:
        raise DomainError(f"dimension {n} exceeds supported maximum 5000")
    if n == 0:
        return SpectrumReport.empty()
    scale = np.linalg.norm(m, ord="fro")
    herm_defect = np.linalg.norm(m - m.conj().T, ord="fro")
    if scale > 0 and herm_defect > 1e-12 * max(scale, 1.0):
        raise DomainError(
            f"matrix is not Hermitian within tolerance (defect {herm_defect:.3e}, scale {scale:.3e})"
        )
    h = 0.5 * (m + m.conj().T)
    w, v = np.linalg.eigh(h)
    norm2 = max(abs(w[0]), abs(w[-1]))
    if norm2 == 0.0:
        residual = 0.0
    else:
        r = h @ v - v * w[None, :]
        residual = float(np.max(np.linalg.norm(r, axis=0)) / norm2)
    return SpectrumReport(
        eigenvalues=tuple(float(x) for x in w),
        min_eigenvalue=float(w[0]),
        residual_bound=residual,
        dimension=n,
    )


def sphere_area(d: int) -> float:
    """Surface measure of the unit sphere S^d embedded in R^{d+1}."""
    if d < 0:
        raise DomainError("dimension must be nonnegative")
    return 2.0 * math.pi ** ((d + 1) / 2.0) / _special.gamma((d + 1) / 2.0)
