"""Independent verification of root counts and crossing directions.

Counts come from the winding number of the characteristic function
f(s) = 1 + G(s) e^{-hs} around a rectangle truncating the region right of
the boundary; since f inherits G's poles, the zero count is the winding
number plus the number of plant poles inside the rectangle. Crossing
directions are re-derived by Newton-tracking the root across the critical
delay. Nothing here shares code with the enumeration path beyond plant
evaluation.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from . import plant as _plant
from .errors import BoundaryRoot, DidNotConverge, UnboundedRegion

EDGE_START = 64            # initial samples per rectangle edge
EVAL_CAP = 1 << 20         # refinement gives up beyond this many points
PHASE_STEP_MAX = 0.5 * math.pi
NUDGE = 1e-3
MAX_NUDGES = 5
NEWTON_TOL = 1e-12
NEWTON_MAXIT = 50


@dataclass(frozen=True)
class CountRegion:
    """Rectangle [sigma_lo, sigma_hi] x [omega_lo, omega_hi]."""

    sigma_lo: float
    sigma_hi: float
    omega_lo: float
    omega_hi: float

    def contains(self, s):
        return (
            self.sigma_lo <= s.real <= self.sigma_hi
            and self.omega_lo <= s.imag <= self.omega_hi
        )

    def grown(self, factor):
        w = self.sigma_hi - self.sigma_lo
        return CountRegion(
            self.sigma_lo,
            self.sigma_lo + factor * w,
            factor * self.omega_lo,
            factor * self.omega_hi,
        )


def _sorted_roots(roots):
    return np.array(sorted(roots, key=abs, reverse=True), dtype=np.complex128)


def enclosure_bounds(G, h, sigma0):
    """Rectangle containing every root of 1 + G e^{-hs} with Re(s) >= sigma0.

    Any such root satisfies |G(s)| = e^{h Re(s)} >= e^{h sigma0}; the product
    envelope of |G| falls below that level outside a disc, which bounds the
    rectangle (10% margin added). Bi-proper plants past the point where the
    envelope limit |d| reaches the level have unbounded root chains.
    """
    if h < 0.0:
        raise ValueError("delay must be nonnegative")
    d = _plant.feedthrough(G)
    if abs(d) >= 1.0 and d != 0.0:
        raise UnboundedRegion("|G(inf)| >= 1: root chains fill the region")
    rho = math.exp(h * sigma0)
    if d != 0.0 and abs(d) >= 0.9 * rho:
        raise UnboundedRegion(
            f"|G(inf)| = {abs(d):.3g} >= 0.9 e^(h sigma0) = {0.9 * rho:.3g}; "
            "roots are not enclosable at this delay"
        )
    zmag = [abs(z) for z in G.zeros]
    pmag = [abs(p) for p in G.poles]
    lead = math.log(abs(G.gain))

    def log_envelope(R):
        return (
            lead
            + sum(math.log(R + zm) for zm in zmag)
            - sum(math.log(R - pm) for pm in pmag)
        )

    R = 2.0 * (1.0 + max([*zmag, *pmag, abs(sigma0)], default=0.0))
    for _ in range(200):
        if log_envelope(R) < math.log(0.9 * rho):
            break
        R *= 2.0
    else:
        raise UnboundedRegion("envelope never falls below the root level")
    R *= 1.1
    return CountRegion(sigma0, R, -R, R)


def _contour_points(region, ts):
    """Map contour parameters t in [0, 4) to rectangle points, ccw."""
    s = np.empty(ts.shape, dtype=np.complex128)
    a, b = region.sigma_lo, region.sigma_hi
    c, d = region.omega_lo, region.omega_hi
    for k, (lo, hi, horiz, fixed) in enumerate(
        ((a, b, True, c), (c, d, False, b), (b, a, True, d), (d, c, False, a))
    ):
        mask = (ts >= k) & (ts < k + 1)
        u = ts[mask] - k
        coord = lo + (hi - lo) * u
        s[mask] = coord + 1j * fixed if horiz else fixed + 1j * coord
    return s


def _initial_params(G, h, region):
    """Per-edge sample counts resolving the a-priori phase rate.

    Along any straight edge arg G varies by at most (m+n) pi; the delay
    factor adds h * length on the vertical edges (it is constant in phase
    on horizontal ones). Sampling below ~0.4 rad per step leaves only the
    near-zero excursions of f to adaptive refinement.
    """
    arg_budget = (G.m + G.n + 1) * math.pi
    v_len = region.omega_hi - region.omega_lo
    n_h = min(max(EDGE_START, int(arg_budget / 0.4) + 1), 1 << 17)
    n_v = min(max(EDGE_START, int((arg_budget + h * v_len) / 0.4) + 1), 1 << 17)
    parts = [
        np.linspace(0.0, 1.0, n_h, endpoint=False),
        np.linspace(1.0, 2.0, n_v, endpoint=False),
        np.linspace(2.0, 3.0, n_h, endpoint=False),
        np.linspace(3.0, 4.0, n_v, endpoint=False),
    ]
    return np.concatenate(parts)


def _winding(G, h, region):
    """Winding number of f = 1 + G e^{-hs} along the rectangle, adaptive.

    Segments refine on two criteria: the measured phase step reaching pi/2,
    and an a-priori drift bound. The loop factor W = G e^{-hs} rotates at
    rate at most h + sum 1/|s - root|, so a segment whose drift exceeds a
    third of a radian while |W| passes near the unit circle could wind f
    around zero invisibly; those are split until the drift is resolved.
    """
    gain = G.gain
    zeros = _sorted_roots(G.zeros)
    poles = _sorted_roots(G.poles)
    allroots = np.concatenate([zeros, poles]) if G.m + G.n else np.zeros(0, complex)
    ts = _initial_params(G, h, region)
    fvals = _k.charfun(_contour_points(region, ts), h, gain, zeros, poles)

    def drift_mask(ts_arr, f_arr):
        pts = _contour_points(region, ts_arr % 4.0)
        nxt = np.roll(pts, -1)
        gap_s = np.abs(nxt - pts)
        mids = _contour_points(region, (ts_arr + 0.5 * np.diff(ts_arr, append=ts_arr[:1] + 4.0)) % 4.0)
        rate = np.full(mids.shape, h, dtype=float)
        if allroots.size:
            rate += (1.0 / np.abs(mids[:, None] - allroots[None, :])).sum(axis=1)
        drift = gap_s * rate
        with np.errstate(divide="ignore"):
            band = np.abs(np.log(np.abs(f_arr - 1.0)))
        band_next = np.roll(band, -1)
        near_unit = np.minimum(band, band_next) < 0.7 + drift
        return (drift > 0.35) & near_unit

    for _ in range(64):
        args = np.angle(fvals)
        d = np.diff(args, append=args[:1])
        d = (d + math.pi) % (2.0 * math.pi) - math.pi
        bad = np.abs(d) >= PHASE_STEP_MAX
        bad |= drift_mask(ts, fvals)
        if not np.any(bad):
            return d.sum() / (2.0 * math.pi)
        gaps = np.diff(ts, append=ts[:1] + 4.0)
        if np.min(gaps[bad]) < 1e-13:
            raise BoundaryRoot("contour refinement stalled; root on the rectangle")
        mids = (ts[bad] + 0.5 * gaps[bad]) % 4.0
        if ts.size + mids.size > EVAL_CAP:
            raise DidNotConverge(
                f"contour needs more than {EVAL_CAP} samples", iterations=ts.size
            )
        mid_f = _k.charfun(_contour_points(region, mids), h, gain, zeros, poles)
        order = np.argsort(np.concatenate([ts, mids]), kind="stable")
        ts = np.concatenate([ts, mids])[order]
        fvals = np.concatenate([fvals, mid_f])[order]
    raise DidNotConverge("contour refinement did not settle")


def _poles_inside(G, region):
    return sum(1 for p in G.poles if region.contains(p))


def count_roots(G, h, region):
    """Characteristic roots of 1 + G e^{-hs} inside the rectangle.

    Winding number of f along the boundary plus the enclosed plant poles
    (f is meromorphic with exactly G's poles). Retries with a slightly
    inflated rectangle when a root sits on the contour.
    """
    reg = region
    last = None
    for attempt in range(MAX_NUDGES + 1):
        try:
            winding = _winding(G, h, reg)
        except BoundaryRoot as exc:
            last = exc
            bump = NUDGE * (1 + attempt)
            reg = CountRegion(
                reg.sigma_lo,
                reg.sigma_hi * (1.0 + bump) + bump,
                reg.omega_lo * (1.0 + bump) - bump,
                reg.omega_hi * (1.0 + bump) + bump,
            )
            continue
        nearest = round(winding)
        if abs(winding - nearest) > 0.05:
            raise DidNotConverge(
                f"winding number {winding:.4f} is not close to an integer"
            )
        return int(nearest) + _poles_inside(G, reg)
    raise BoundaryRoot(f"rectangle nudging exhausted: {last}")


def refine_root(G, h, s_guess):
    """Newton-polish a characteristic root of 1 + G e^{-hs}.

    Uses the analytic derivative through the logarithmic derivative of G;
    converges to |f| < 1e-12 or raises DidNotConverge.
    """
    s = complex(s_guess)
    for it in range(NEWTON_MAXIT):
        f = 1.0 + _plant.evaluate(G, s) * cmath.exp(-h * s)
        if abs(f) < NEWTON_TOL:
            return s
        fp = (f - 1.0) * (_plant.log_derivative(G, s) - h)
        if fp == 0:
            break
        s = s - f / fp
    raise DidNotConverge(
        f"Newton stalled at |f| = {abs(f):.3e} after {it + 1} iterations",
        iterations=it + 1,
        residual=abs(f),
    )


def numeric_crossing_direction(G, h0, s0, delta=1e-4):
    """Ground-truth crossing direction by tracking the root across h0.

    Returns sign(Re s(h0 + delta) - Re s(h0 - delta)); 0 when the real part
    did not move (tangential touch).
    """
    s_plus = refine_root(G, h0 + delta, s0)
    s_minus = refine_root(G, h0 - delta, s0)
    diff = s_plus.real - s_minus.real
    if abs(diff) < 1e-12:
        return 0
    return 1 if diff > 0 else -1
