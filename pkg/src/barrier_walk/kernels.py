"""Stable evaluation of the drift-ratio coefficients, plus a small dense solver.

Every coefficient the solvers need is a ratio of the polynomials

    g_m(rho) = sum_{k<m} rho**k                      (geometric sum)
    h_m(rho) = sum_{k<m} (k+1) rho**k                (weighted_geom)
    G_m(rho) = sum_{k=1..m} g_k(rho)                 (weighted_geom_rev)

times powers of rho.  Writing them this way removes the removable
singularity at rho = 1: the driftless case is just the value of the
polynomial there.  Near rho = 1 the polynomials are summed as binomial
series in eps = rho - 1; for rho > 1 they are evaluated at 1/rho and the
power of rho is carried separately, so long chains do not overflow.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import SingularSystem

# (m + 1) * |rho - 1| below this switches to the binomial series; this
# covers every |rho - 1| < 1e-8 unless m exceeds 5e7
_SERIES_RADIUS = 0.5
_PIVOT_TOL = 1e-13


def _binomial_series(top: int, shift: int, eps: float, weighted: bool) -> float:
    """sum_j w_j * C(top, j + shift) * eps**j, with w_j = j + 1 if weighted."""
    if top < shift:
        return 0.0
    # C(top, shift)
    c = float(math.comb(top, shift))
    total = 0.0
    j = 0
    pw = 1.0
    while True:
        term = c * pw * (j + 1 if weighted else 1)
        total += term
        k = j + shift
        if k >= top:
            break
        c = c * (top - k) / (k + 1)
        pw *= eps
        j += 1
        if abs(c * pw) * (j + 1) <= 1e-17 * abs(total):
            break
    return total


def _near(m: int, eps: float) -> bool:
    return (m + 1) * abs(eps) < _SERIES_RADIUS


def _g_low(m: int, rho: float, eps: float) -> float:
    """g_m for 0 < rho <= 1 (eps = rho - 1, supplied accurately)."""
    if m <= 0:
        return 0.0
    if eps == 0.0:
        return float(m)
    if _near(m, eps):
        return _binomial_series(m, 1, eps, weighted=False)
    return math.expm1(m * math.log1p(eps)) / eps


def _h_low(m: int, rho: float, eps: float) -> float:
    if m <= 0:
        return 0.0
    if eps == 0.0:
        return m * (m + 1) / 2.0
    if _near(m, eps):
        return _binomial_series(m + 1, 2, eps, weighted=True)
    # (1 - rho) h_m = g_m - m rho^m
    return (_g_low(m, rho, eps) - m * math.exp(m * math.log1p(eps))) / (-eps)


def _G_low(m: int, rho: float, eps: float) -> float:
    if m <= 0:
        return 0.0
    if eps == 0.0:
        return m * (m + 1) / 2.0
    if _near(m, eps):
        return _binomial_series(m + 1, 2, eps, weighted=False)
    # (1 - rho) G_m = m - rho g_m
    return (m - rho * _g_low(m, rho, eps)) / (-eps)


class Drift:
    """Scaled polynomial evaluator for one drift ratio.

    Each kernel returns ``(v, e)`` with value ``rho**e * v``; ``v`` stays
    bounded for any chain length.  :meth:`combine` multiplies and divides
    such pairs and applies the net power once.
    """

    __slots__ = ("rho", "up", "base", "eps", "log_rho")

    def __init__(self, rho: float):
        if not rho > 0:
            raise ValueError(f"drift ratio must be positive, got {rho!r}")
        self.rho = float(rho)
        self.up = rho > 1.0
        if self.up:
            self.base = 1.0 / rho
            self.eps = (1.0 - rho) / rho
        else:
            self.base = self.rho
            self.eps = self.rho - 1.0
        self.log_rho = math.log(rho)

    def g(self, m: int) -> tuple[float, int]:
        return _g_low(m, self.base, self.eps), (m - 1 if self.up and m > 0 else 0)

    def h(self, m: int) -> tuple[float, int]:
        # h_m(rho) = rho^(m-1) G_m(1/rho)
        if self.up:
            return _G_low(m, self.base, self.eps), (m - 1 if m > 0 else 0)
        return _h_low(m, self.base, self.eps), 0

    def G(self, m: int) -> tuple[float, int]:
        if self.up:
            return _h_low(m, self.base, self.eps), (m - 1 if m > 0 else 0)
        return _G_low(m, self.base, self.eps), 0

    def power(self, e: float) -> float:
        if e == 0:
            return 1.0
        if self.rho == 1.0:
            return 1.0
        x = e * self.log_rho
        if x > 709.0:
            return math.inf
        return math.exp(x)

    def combine(self, e: float, num=(), den=()) -> float:
        """rho**e * prod(num) / prod(den) for scaled ``(v, e)`` pairs."""
        v = 1.0
        for val, ex in num:
            if val == 0.0:
                return 0.0
            v *= val
            e += ex
        for val, ex in den:
            v /= val
            e -= ex
        return v * self.power(e)


def geom_sum(m: int, rho: float) -> float:
    """g_m(rho) = 1 + rho + ... + rho**(m-1); exactly m at rho = 1."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    d = Drift(rho)
    return d.combine(0, [d.g(m)])


def weighted_geom(n: int, rho: float) -> float:
    """h_n(rho) = sum_{k=0}^{n} rho**k g_{n-k}(rho) = sum_{k<n} (k+1) rho**k."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    d = Drift(rho)
    return d.combine(0, [d.h(n)])


def weighted_geom_rev(n: int, rho: float) -> float:
    """G_n(rho) = g_1 + ... + g_n = sum_{k<n} (n-k) rho**k."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    d = Drift(rho)
    return d.combine(0, [d.G(n)])


# -- composite coefficients for an interval of n interior states --------------

def interval_couplings(n: int, rho: float) -> tuple[float, float, float, float]:
    """Return ``(fwd, back, keep_lo, keep_hi)``.

    ``fwd = rho^n/g_{n+1}``: chance a walker entering at state 1 reaches the
    far barrier first; ``back = 1/g_{n+1}``: same from state n to the near
    one; ``keep_lo = g_n/g_{n+1}`` and ``keep_hi = rho g_n/g_{n+1}``: the
    respective return chances.
    """
    d = Drift(rho)
    gn1 = d.g(n + 1)
    gn = d.g(n)
    fwd = d.combine(n, den=[gn1])
    back = d.combine(0, den=[gn1])
    keep_lo = d.combine(0, [gn], [gn1])
    keep_hi = d.combine(1, [gn], [gn1])
    return fwd, back, keep_lo, keep_hi


def interval_profile_weights(n: int, rho: float, k: int) -> tuple[float, float]:
    """(rho^k g_{n+1-k}/g_{n+1}, g_k/g_{n+1}): harmonic profile on the edge."""
    d = Drift(rho)
    gn1 = d.g(n + 1)
    w_lo = d.combine(k, [d.g(n + 1 - k)], [gn1])
    w_hi = d.combine(0, [d.g(k)], [gn1])
    return w_lo, w_hi


def interval_source(n: int, rho: float, i0: int, k: int) -> float:
    """q times the expected visits to k from a unit source at i0 (killed at 0, n+1)."""
    d = Drift(rho)
    gn1 = d.g(n + 1)
    if k <= i0:
        return d.combine(0, [d.g(k), d.g(n + 1 - i0)], [gn1])
    return d.combine(k - i0, [d.g(i0), d.g(n + 1 - k)], [gn1])


def interval_time_offset(n: int, rho: float, k: int) -> float:
    """q times the expected steps from k before leaving ``[1..n]``.

    Equals [k h_{n-k} + (n+1-k) rho^{n-k} G_k] / g_{n+1}; at rho = 1 this
    is k(n+1-k)/2.
    """
    if n == 0 or k <= 0 or k > n:
        return 0.0
    d = Drift(rho)
    gn1 = d.g(n + 1)
    a = k * d.combine(0, [d.h(n - k)], [gn1])
    b = (n + 1 - k) * d.combine(n - k, [d.G(k)], [gn1])
    return a + b


def halfline_source(rho: float, i0: int, k: int) -> float:
    """q times the expected visits to k from a unit source at i0 on a half-line killed at 0."""
    d = Drift(rho)
    if d.up:
        if k <= i0:
            return d.combine(-i0, [d.g(k)])
        return d.combine(-i0, [d.g(i0)])
    if k <= i0:
        return d.combine(0, [d.g(k)])
    return d.combine(k - i0, [d.g(i0)])


# -- dense solver --------------------------------------------------------------

def linear_solve(matrix, rhs) -> np.ndarray:
    """Solve ``matrix @ x = rhs`` by Gaussian elimination with partial pivoting.

    Raises SingularSystem when a pivot is below 1e-13 times the largest
    entry of its original row.
    """
    a = np.array(matrix, dtype=float, copy=True)
    b = np.array(rhs, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or b.shape != (a.shape[0],):
        raise ValueError(f"expected square system, got {a.shape} and {b.shape}")
    size = a.shape[0]
    scale = np.abs(a).max(axis=1)
    if np.any(scale == 0.0):
        raise SingularSystem(f"row {int(np.argmin(scale))} of the system is zero")
    for col in range(size):
        piv = col + int(np.argmax(np.abs(a[col:, col])))
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            b[[col, piv]] = b[[piv, col]]
            scale[[col, piv]] = scale[[piv, col]]
        pivot = a[col, col]
        if abs(pivot) < _PIVOT_TOL * scale[col]:
            raise SingularSystem(f"pivot {pivot:.3e} in column {col} is numerically zero")
        if col + 1 < size:
            f = a[col + 1:, col] / pivot
            a[col + 1:, col:] -= np.outer(f, a[col, col:])
            b[col + 1:] -= f * b[col]
    x = np.empty(size)
    for row in range(size - 1, -1, -1):
        x[row] = (b[row] - a[row, row + 1:] @ x[row + 1:]) / a[row, row]
    return x
