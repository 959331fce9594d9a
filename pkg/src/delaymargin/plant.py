"""Open-loop plant in pole-zero-gain form and its derived quantities.

The plant is G(s) = gain * prod(s - z_k) / prod(s - p_i) with real gain and
conjugate-closed zero/pole sets. Evaluation always works in product form;
coefficient expansion happens only where a polynomial is genuinely needed
(the zero-delay characteristic polynomial).
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import poly
from .errors import (
    DegenerateClosedLoop,
    NotConjugateClosed,
    NotProper,
    PoleEvaluation,
    PoleZeroCancellation,
    ZeroGain,
)

CONJUGATE_TOL = 1e-12
REALNESS_SNAP = 1e-9
CANCELLATION_TOL = 1e-9


@dataclass(frozen=True)
class PoleZeroGain:
    """Plant G as gain, zeros and poles (rad/s, conjugate-closed)."""

    gain: float
    zeros: tuple = ()
    poles: tuple = ()

    def __init__(self, gain, zeros=(), poles=()):
        object.__setattr__(self, "gain", float(gain))
        object.__setattr__(self, "zeros", tuple(complex(z) for z in zeros))
        object.__setattr__(self, "poles", tuple(complex(p) for p in poles))

    @property
    def m(self):
        return len(self.zeros)

    @property
    def n(self):
        return len(self.poles)


@dataclass(frozen=True)
class BoundaryConfig:
    """Relative stability boundary Re(s) = sigma0 and clearance policy."""

    sigma0: float
    clearance_tol: float = 1e-8

    def __post_init__(self):
        if not self.sigma0 <= 0.0:
            raise ValueError("sigma0 must be <= 0")
        if not self.clearance_tol > 0.0:
            raise ValueError("clearance_tol must be positive")


def _conjugate_closed(roots, tol=CONJUGATE_TOL):
    pending = [r for r in roots if r.imag != 0.0]
    while pending:
        r = pending.pop()
        want = r.conjugate()
        best, dist = None, math.inf
        for k, other in enumerate(pending):
            d = abs(other - want)
            if d < dist:
                best, dist = k, d
        if best is None or dist > tol * (1.0 + abs(r)):
            return False
        pending.pop(best)
    return True


def validate(G):
    """Check properness, conjugate closure and nonzero gain; raise otherwise."""
    if G.gain == 0.0:
        raise ZeroGain("plant gain must be nonzero")
    if G.m > G.n:
        raise NotProper(f"plant has {G.m} zeros but only {G.n} poles")
    for name, roots in (("zeros", G.zeros), ("poles", G.poles)):
        if not _conjugate_closed(roots):
            raise NotConjugateClosed(f"{name} are not closed under conjugation")


def _ordered_by_magnitude(roots):
    return tuple(sorted(roots, key=abs, reverse=True))


def evaluate(G, s):
    """G(s) in product form, zero and pole factors interleaved.

    Interleaving keeps partial products bounded for high-order plants.
    Raises PoleEvaluation when s is numerically on a pole.
    """
    s = complex(s)
    if G.poles:
        if min(abs(s - p) for p in G.poles) < 1e-14 * (1.0 + abs(s)):
            raise PoleEvaluation(f"evaluation point {s} is on a pole")
    zs = _ordered_by_magnitude(G.zeros)
    ps = _ordered_by_magnitude(G.poles)
    acc = complex(G.gain)
    for k in range(max(len(zs), len(ps))):
        if k < len(zs):
            acc *= s - zs[k]
        if k < len(ps):
            acc /= s - ps[k]
    return acc


def feedthrough(G):
    """d = G(inf): the gain for bi-proper plants, zero when strictly proper."""
    return G.gain if G.m == G.n else 0.0


def boundary_clearance(G, cfg):
    """Smallest horizontal distance from any pole or zero to Re(s) = sigma0."""
    dists = [abs(r.real - cfg.sigma0) for r in (*G.zeros, *G.poles)]
    return min(dists) if dists else math.inf


def _real_coeffs_from_roots(roots):
    """Ascending real coefficients of the monic polynomial with these roots.

    Conjugate pairs are multiplied into real quadratics first so the result
    is exactly real.
    """
    factors = []
    pending = sorted((r for r in roots if r.imag != 0.0), key=lambda r: (r.real, abs(r.imag), r.imag))
    while pending:
        r = pending.pop()
        want = r.conjugate()
        k = min(range(len(pending)), key=lambda i: abs(pending[i] - want))
        pending.pop(k)
        factors.append([abs(r) ** 2, -2.0 * r.real, 1.0])
    for r in roots:
        if r.imag == 0.0:
            factors.append([-r.real, 1.0])
    acc = np.array([1.0])
    for f in factors:
        acc = np.convolve(acc, f)
    return acc


def char_poly_at_zero_delay(G):
    """Characteristic polynomial of the closed loop at h = 0.

    Expands prod(s - p_i) + gain * prod(s - z_k); degree n unless the plant
    is bi-proper with gain -1, in which case the loop is degenerate.
    """
    if G.m == G.n and abs(1.0 + G.gain) < 1e-15 * (1.0 + abs(G.gain)):
        raise DegenerateClosedLoop("1 + feedthrough vanishes; leading coefficient is zero")
    den = _real_coeffs_from_roots(G.poles)
    num = G.gain * _real_coeffs_from_roots(G.zeros)
    out = np.zeros(max(len(den), len(num)))
    out[: len(den)] += den
    out[: len(num)] += num
    return poly.RealPolynomial(out)


def from_rational(num_coeffs, den_coeffs):
    """Build a PoleZeroGain from ascending numerator/denominator coefficients.

    Roots are re-paired into exact conjugates, near-real roots snapped onto
    the real axis. Close pole-zero pairs are rejected: a cancellation on or
    right of the boundary would silently change root counts.
    """
    num = poly.RealPolynomial(num_coeffs)
    den = poly.RealPolynomial(den_coeffs)
    if den.is_zero():
        raise ValueError("denominator must not be the zero polynomial")
    if num.is_zero():
        raise ZeroGain("numerator is identically zero")
    gain = num.coeffs[-1] / den.coeffs[-1]
    zeros = _snap_conjugates(poly.all_complex_roots(num))
    poles = _snap_conjugates(poly.all_complex_roots(den))
    for z in zeros:
        for p in poles:
            if abs(z - p) < CANCELLATION_TOL * (1.0 + abs(p)):
                raise PoleZeroCancellation(f"zero {z} nearly cancels pole {p}")
    G = PoleZeroGain(gain, zeros, poles)
    validate(G)
    return G


def _snap_conjugates(roots):
    out = []
    pending = []
    for r in roots:
        if abs(r.imag) <= REALNESS_SNAP * (1.0 + abs(r)):
            out.append(complex(r.real, 0.0))
        else:
            pending.append(r)
    pending.sort(key=lambda r: (r.imag > 0, r.real, abs(r.imag)))
    neg = [r for r in pending if r.imag < 0]
    pos = [r for r in pending if r.imag > 0]
    for r in pos:
        want = r.conjugate()
        k = min(range(len(neg)), key=lambda i: abs(neg[i] - want))
        mate = neg.pop(k)
        re = 0.5 * (r.real + mate.real)
        im = 0.5 * (r.imag - mate.imag)
        out.extend([complex(re, im), complex(re, -im)])
    out.extend(neg)  # unmatched; validate() will reject
    return tuple(sorted(out, key=lambda r: (r.real, r.imag)))


def log_derivative(G, s):
    """G'(s)/G(s) = sum 1/(s - z_k) - sum 1/(s - p_i)."""
    s = complex(s)
    acc = 0.0 + 0.0j
    for z in G.zeros:
        acc += 1.0 / (s - z)
    for p in G.poles:
        acc -= 1.0 / (s - p)
    return acc


def phase_at(G, s):
    """Principal phase of G(s); helper for the imaginary-axis path."""
    return cmath.phase(evaluate(G, s))
