"""Dense real-coefficient polynomial arithmetic and root finding.

Coefficients are stored in ascending degree order (coeffs[k] multiplies w^k).
The empty tuple is the zero polynomial; construction strips exact trailing
zeros only, so degree is always meaningful.

Real roots on [0, inf) are isolated by recursive monotone-piece bracketing
(critical points of p come from the roots of p', down to linear base cases)
and polished by bisection; complex roots come from companion-matrix
eigenvalues with a Newton cleanup pass.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DidNotConverge, ZeroPolynomial

BISECT_RTOL = 1e-12
BISECT_ATOL = 1e-12
RESIDUAL_RTOL = 1e-10


@dataclass(frozen=True)
class RealPolynomial:
    """Immutable dense polynomial with real coefficients, ascending order."""

    coeffs: tuple

    def __init__(self, coeffs=()):
        cs = [float(c) for c in coeffs]
        if not all(math.isfinite(c) for c in cs):
            raise ValueError("polynomial coefficients must be finite")
        while cs and cs[-1] == 0.0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self):
        """Degree, or -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __call__(self, s):
        return eval_at_complex(self, s)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return RealPolynomial(out)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, other):
        if isinstance(other, RealPolynomial):
            if self.is_zero() or other.is_zero():
                return RealPolynomial()
            return RealPolynomial(np.convolve(self.coeffs, other.coeffs))
        return RealPolynomial([other * c for c in self.coeffs])

    __rmul__ = __mul__


def eval_at_complex(p, s):
    """Horner evaluation of p at a real or complex point."""
    acc = 0.0 if not isinstance(s, complex) else 0.0 + 0.0j
    for c in reversed(p.coeffs):
        acc = acc * s + c
    return acc


def derivative(p):
    """Formal derivative."""
    return RealPolynomial([k * c for k, c in enumerate(p.coeffs)][1:])


def _fujiwara_bound_log(coeffs):
    """log of the Fujiwara root bound, safe for huge coefficient ranges."""
    deg = len(coeffs) - 1
    lead = math.log(abs(coeffs[-1]))
    best = -math.inf
    for k, c in enumerate(coeffs[:-1]):
        if c == 0.0:
            continue
        num = math.log(abs(c)) - (math.log(2.0) if k == 0 else 0.0)
        best = max(best, (num - lead) / (deg - k))
    if best == -math.inf:
        return 0.0
    return math.log(2.0) + best


def _horner_arr(coeffs, x):
    acc = np.zeros_like(np.asarray(x, dtype=float))
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _residual_tol(coeffs, x):
    # backward-error scale of Horner evaluation at x
    mag = 0.0
    ax = abs(x)
    for c in reversed(coeffs):
        mag = mag * ax + abs(c)
    return 1e-13 * mag + 1e-300


def _bisect_poly(coeffs, a, b, fa, fb):
    # sign change guaranteed: fa * fb < 0
    while (b - a) > BISECT_ATOL + BISECT_RTOL * (abs(a) + abs(b)):
        mid = 0.5 * (a + b)
        fm = _horner_arr(coeffs, mid)
        if fm == 0.0:
            return mid
        if (fa < 0) != (fm < 0):
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    return 0.5 * (a + b)


def _real_roots_on(coeffs, lo, hi):
    """All real roots of the ascending-coefficient polynomial in [lo, hi].

    Recurses on the derivative so every monotone piece is bracketed; even-
    multiplicity roots are picked up at critical points where |p| vanishes.
    """
    deg = len(coeffs) - 1
    if deg <= 0:
        return []
    if deg == 1:
        r = -coeffs[0] / coeffs[1]
        return [r] if lo - 1e-15 <= r <= hi + 1e-15 else []
    dcoeffs = [k * c for k, c in enumerate(coeffs)][1:]
    top = max(abs(c) for c in dcoeffs)
    if top > 0.0:  # roots are scale-free; keep magnitudes bounded down the recursion
        dcoeffs = [c / top for c in dcoeffs]
    crit = _real_roots_on(dcoeffs, lo, hi)
    pts = sorted({lo, hi, *crit})
    vals = [_horner_arr(coeffs, x) for x in pts]
    roots = []
    for x, v in zip(pts, vals):
        if abs(v) <= _residual_tol(coeffs, x):
            roots.append(x)
    for (a, fa), (b, fb) in zip(zip(pts, vals), zip(pts[1:], vals[1:])):
        if abs(fa) <= _residual_tol(coeffs, a) or abs(fb) <= _residual_tol(coeffs, b):
            continue
        if (fa < 0) != (fb < 0):
            roots.append(_bisect_poly(coeffs, a, b, fa, fb))
    return sorted(roots)


def _cluster(roots, cluster_tol):
    out = []
    group = []
    for r in roots:
        tol = cluster_tol if cluster_tol is not None else 1e-7 * (1.0 + abs(r))
        if group and r - group[-1] > tol:
            out.append(sum(group) / len(group))
            group = []
        group.append(r)
    if group:
        out.append(sum(group) / len(group))
    return out


def nonnegative_real_roots(p, cluster_tol=None):
    """Distinct real roots of p in [0, inf), ascending, multiplicities merged.

    The variable is rescaled by the Fujiwara root bound (computed in log
    space) so every root maps into [0, 1] and Horner evaluation stays finite
    regardless of coefficient dynamic range. Roots closer than `cluster_tol`
    (default 1e-7 * (1 + |root|)) collapse to their mean. Raises
    ZeroPolynomial for the identically-zero input.
    """
    if p.is_zero():
        raise ZeroPolynomial("nonnegative_real_roots of the zero polynomial")
    if p.degree == 0:
        return []
    log_scale = max(_fujiwara_bound_log(p.coeffs), 0.0)
    scale = math.exp(min(log_scale, 300.0))
    # scaled coefficients c_k * scale^k, normalized, built in log space
    logs = [
        (math.log(abs(c)) + k * math.log(scale) if c != 0.0 else -math.inf)
        for k, c in enumerate(p.coeffs)
    ]
    top = max(logs)
    coeffs = [
        (math.copysign(math.exp(lg - top), c) if lg - top > -700.0 else 0.0)
        for lg, c in zip(logs, p.coeffs)
    ]
    roots = _real_roots_on(coeffs, 0.0, 1.0000001)
    roots = [r * scale for r in roots if r >= -1e-15]
    return _cluster(sorted(max(r, 0.0) for r in roots), cluster_tol)


def _polish_newton(coeffs_desc, roots):
    dcoeffs = np.polyder(coeffs_desc)
    for _ in range(3):
        pv = np.polyval(coeffs_desc, roots)
        dv = np.polyval(dcoeffs, roots)
        step = np.where(dv != 0, pv / np.where(dv != 0, dv, 1.0), 0.0)
        # damp steps so clustered roots do not overshoot
        big = np.abs(step) > 0.1 * (1.0 + np.abs(roots))
        step = np.where(big, 0.0, step)
        roots = roots - step
    return roots


def all_complex_roots(p):
    """All complex roots of p (with multiplicity) via companion eigenvalues.

    Conjugate symmetry is inherited from the real Hessenberg eigensolver and
    preserved by the Newton cleanup. Raises DidNotConverge if any normalized
    residual stays above 1e-10.
    """
    if p.is_zero():
        raise ZeroPolynomial("all_complex_roots of the zero polynomial")
    if p.degree == 0:
        return []
    coeffs_desc = np.array(p.coeffs[::-1], dtype=float)
    coeffs_desc /= np.max(np.abs(coeffs_desc))
    roots = np.roots(coeffs_desc).astype(complex)
    roots = _polish_newton(coeffs_desc, roots)
    res = np.abs(np.polyval(coeffs_desc, roots))
    scale = np.max(np.abs(coeffs_desc)) * np.maximum(1.0, np.abs(roots)) ** p.degree
    worst = np.max(res / scale)
    if worst > RESIDUAL_RTOL:
        raise DidNotConverge(
            f"root residual {worst:.3e} above {RESIDUAL_RTOL:.0e} "
            f"for degree-{p.degree} polynomial",
            residual=float(worst),
        )
    return sorted(roots.tolist(), key=lambda r: (r.real, r.imag))
