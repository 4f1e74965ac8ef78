"""Scaled Hermite eigenfunctions and the closed-form sequences built on them.

The functions ``u_n`` defined here form an orthonormal basis of
``L^2(R)`` and diagonalize the Schrodinger operator with harmonic
potential

    L = -d^2/dx^2 + (x^2 - 6)/4,        L u_n = (n - 1) u_n.

They are Hermite functions rescaled by ``x = sqrt(2) z``:

    u_n(x) = H_n(x / sqrt(2)) exp(-x^2/4) / sqrt(2^n n! sqrt(2 pi)).

Evaluation is always done through the normalized three-term recurrence

    u_0(x) = (2 pi)^(-1/4) exp(-x^2/4),
    u_1(x) = x u_0(x),
    u_{n+1}(x) = x u_n(x) / sqrt(n + 1) - sqrt(n / (n + 1)) u_{n-1}(x),

never by forming ``H_n`` and ``n!`` separately, which overflow near
n ~ 150.  The recurrence carries a per-point base-2 exponent so that the
Gaussian prefactor cannot underflow at large ``|x|`` before the
polynomial growth catches up; rescalings are exact binary shifts, so the
results bit-match the plain recurrence wherever the plain recurrence
stays inside double range.

The module also provides the two closed-form scalar sequences that the
rest of the package consumes: products of ``sqrt(2k - a)/sqrt(2k + b)``
and the projections ``f_n = <antideriv(u_0), u_n>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: Largest basis index accepted by default.
MAX_INDEX = 10_000

# Renormalize the carried exponents every this many recurrence steps.
# Between renormalizations the values can grow or shrink by at most
# ~(|x| + 1)**64, which stays far inside double range for |x| <~ 1e3.
_RENORM_EVERY = 64

_LOG2E = 1.0 / np.log(2.0)


@dataclass(frozen=True)
class RealGrid:
    """Sampling grid on the real line with quadrature weights.

    Parameters
    ----------
    nodes : ndarray
        Strictly increasing abscissas.
    weights : ndarray, optional
        Non-negative quadrature weights, one per node.  When omitted,
        trapezoidal weights are derived from the nodes.  For integrands
        with Gaussian decay (everything in this package) the trapezoidal
        rule on a uniform grid converges faster than any power of the
        spacing, so it doubles as the high-order rule.
    """

    nodes: np.ndarray
    weights: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 2:
            raise ValueError("grid needs at least two nodes")
        if not np.all(np.diff(nodes) > 0):
            raise ValueError("grid nodes must be strictly increasing")
        weights = self.weights
        if weights is None:
            d = np.diff(nodes)
            weights = np.empty_like(nodes)
            weights[0] = 0.5 * d[0]
            weights[-1] = 0.5 * d[-1]
            weights[1:-1] = 0.5 * (d[:-1] + d[1:])
        else:
            weights = np.asarray(weights, dtype=float)
            if weights.shape != nodes.shape:
                raise ValueError("weights must match nodes in length")
            if np.any(weights < 0):
                raise ValueError("weights must be non-negative")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, x_max: float = 16.0, num: int = 3201) -> "RealGrid":
        """Uniform grid on [-x_max, x_max] with trapezoidal weights.

        The default extent satisfies exp(-x_max^2/4) < 1e-16 relative to
        order-one values, so Gaussian-weighted integrands are fully
        contained.
        """
        return cls(np.linspace(-x_max, x_max, num))

    @property
    def spacing(self) -> float:
        return float(self.nodes[1] - self.nodes[0])

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))

    def inner(self, f, g) -> float:
        return float(np.dot(self.weights, np.asarray(f) * np.asarray(g)))

    def norm(self, f) -> float:
        return float(np.sqrt(self.inner(f, f)))


def _check_index(n: int, max_index: int) -> int:
    n = int(n)
    if n < 0:
        raise ValueError(f"basis index must be non-negative, got {n}")
    if n > max_index:
        raise ValueError(f"basis index {n} above configured maximum {max_index}")
    return n


def _start_scaled(x: np.ndarray):
    """u_0 split as mantissa * 2**exponent, robust to Gaussian underflow."""
    mant = (2.0 * np.pi) ** -0.25 * np.exp(-0.25 * x * x)
    expo = np.zeros(x.shape, dtype=np.int64)
    tiny = 0.25 * x * x > 600.0  # exp(-600) ~ 1e-261, still normal; split beyond
    if np.any(tiny):
        g = 0.25 * x[tiny] * x[tiny] * _LOG2E
        e = np.floor(g)
        mant[tiny] = (2.0 * np.pi) ** -0.25 * np.exp2(-(g - e))
        expo[tiny] = -e.astype(np.int64)
    return mant, expo


def basis_rows(x, n_max: int, max_index: int = MAX_INDEX):
    """Yield ``(n, u_n(x))`` for n = 0..n_max over an array of points.

    Single pass of the normalized recurrence; each yielded row is a fresh
    array of the actual function values.
    """
    _check_index(n_max, max_index)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    u_prev = np.zeros_like(x)
    u_cur, expo = _start_scaled(x)
    for n in range(n_max + 1):
        yield n, np.ldexp(u_cur, expo)
        u_next = x * u_cur / np.sqrt(n + 1.0) - np.sqrt(n / (n + 1.0)) * u_prev
        u_prev, u_cur = u_cur, u_next
        if (n + 1) % _RENORM_EVERY == 0:
            m, e = np.frexp(u_cur)
            u_cur = m
            expo = expo + e
            u_prev = np.ldexp(u_prev, -e)


def _eval_rows(x, wanted, max_index):
    """Evaluate u_n(x) for each n in ``wanted`` (an iterable of indices)."""
    wanted = sorted(set(int(n) for n in wanted))
    out = {}
    for n, row in basis_rows(x, wanted[-1], max_index=max_index):
        if n == wanted[0]:
            out[n] = row
            wanted.pop(0)
            if not wanted:
                break
    return out


def hermite_function(n: int, x, max_index: int = MAX_INDEX):
    """Evaluate the n-th basis function u_n at x.

    Parameters
    ----------
    n : int
        Basis index, ``0 <= n <= max_index``.
    x : float or ndarray
        Evaluation points.

    Returns
    -------
    float or ndarray
        ``u_n(x)``.  Uniformly bounded: ``|u_n(x)| <= 1`` everywhere.
    """
    n = _check_index(n, max_index)
    scalar = np.isscalar(x) or np.ndim(x) == 0
    vals = _eval_rows(x, [n], max_index)[n]
    return float(vals[0]) if scalar else vals


def hermite_derivative(n: int, x, max_index: int = MAX_INDEX):
    """Evaluate u_n'(x) through the ladder relation.

    Uses ``2 u_n' = -sqrt(n+1) u_{n+1} + sqrt(n) u_{n-1}``; for n = 0
    only the first term is present.
    """
    n = _check_index(n, max_index)
    scalar = np.isscalar(x) or np.ndim(x) == 0
    # the ladder needs one neighbor above n, so allow max_index + 1 internally
    if n == 0:
        vals = -0.5 * _eval_rows(x, [1], max_index + 1)[1]
    else:
        rows = _eval_rows(x, [n - 1, n + 1], max_index + 1)
        vals = 0.5 * (np.sqrt(n) * rows[n - 1] - np.sqrt(n + 1.0) * rows[n + 1])
    return float(vals[0]) if scalar else vals


def product_sequence(a: float, b: float, m_max: int) -> np.ndarray:
    """Partial products ``f_m = prod_{k=1}^m sqrt(2k - a)/sqrt(2k + b)``.

    Returns an array of length ``m_max + 1`` with ``f_0 = 1`` (empty
    product) and ``f_m`` at index m.  Accumulated in log space, i.e. as
    ``exp(cumsum(0.5 * (log(2k - a) - log(2k + b))))``, so arbitrarily
    long products neither underflow nor lose the tail exponent.  The
    sequence decays like ``m**(-(a+b)/4)``.

    Raises
    ------
    ValueError
        If ``a >= 2`` (the k = 1 factor would be non-positive), b < 0,
        or ``m_max < 1``.
    """
    if not a < 2.0:
        raise ValueError(f"need a < 2 so every factor stays positive, got a={a}")
    if a < 0 or b < 0:
        raise ValueError("a and b must be non-negative")
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    k = np.arange(1, m_max + 1, dtype=float)
    logs = 0.5 * (np.log(2.0 * k - a) - np.log(2.0 * k + b))
    out = np.empty(m_max + 1)
    out[0] = 1.0
    np.exp(np.cumsum(logs), out=out[1:])
    return out


def projection_sequence(n_max: int) -> np.ndarray:
    """Projections ``f_n`` of the antiderivative of u_0 onto the basis.

    With ``F(x) = int_{-inf}^x u_0``, the values ``f_n = <F, u_n>``
    start from

        f_0 = sqrt(2 pi),   f_1 = 2,

    and obey ``f_{n+1} = sqrt(n/(n+1)) f_{n-1}``, which is how they are
    generated here.  All entries are strictly positive and decay like
    ``n**(-1/4)``.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    f = np.empty(n_max + 1)
    f[0] = np.sqrt(2.0 * np.pi)
    f[1] = 2.0
    for n in range(1, n_max):
        f[n + 1] = np.sqrt(n / (n + 1.0)) * f[n - 1]
    return f


def ground_state_antiderivative(grid: RealGrid) -> np.ndarray:
    """Antiderivative of u_0 vanishing at -infinity, on the grid nodes.

    Composite-Simpson cumulative quadrature (u_0 is evaluated at the
    interval midpoints as well), fourth-order accurate, so quadrature
    checks against :func:`projection_sequence` can be pushed well below
    1e-8.
    """
    x = grid.nodes

    def u0(t):
        return (2.0 * np.pi) ** -0.25 * np.exp(-0.25 * t * t)

    h = np.diff(x)
    mid = 0.5 * (x[:-1] + x[1:])
    incr = h / 6.0 * (u0(x[:-1]) + 4.0 * u0(mid) + u0(x[1:]))
    out = np.empty_like(x)
    out[0] = 0.0
    np.cumsum(incr, out=out[1:])
    return out


def fit_loglog_slope(values, positions=None, tail_fraction: float = 0.5) -> float:
    """Least-squares slope of log|values| against log(position) on the tail.

    Zero entries are skipped.  ``positions`` defaults to 1-based ranks.
    """
    v = np.abs(np.asarray(values, dtype=float))
    if positions is None:
        positions = np.arange(1, v.size + 1, dtype=float)
    else:
        positions = np.asarray(positions, dtype=float)
    if not 0.0 < tail_fraction <= 1.0:
        raise ValueError("tail_fraction must lie in (0, 1]")
    start = int((1.0 - tail_fraction) * v.size)
    v, positions = v[start:], positions[start:]
    keep = v > 0
    if np.count_nonzero(keep) < 10:
        raise ValueError("fewer than 10 usable tail points for a slope fit")
    slope = np.polyfit(np.log(positions[keep]), np.log(v[keep]), 1)[0]
    return float(slope)
