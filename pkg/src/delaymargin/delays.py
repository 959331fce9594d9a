"""Critical-delay enumeration and the two relative-stability analyses.

Crossings are generated per boundary interval by intersecting the phase
curve with horizontal lines (2l+1)pi - phi0, walked in the direction of
increasing delay, and merged across intervals through a priority queue.
Counts of characteristic roots right of the boundary start from the
zero-delay configuration and change by +-2 (complex pair) or +-1 (real
root) at every crossing.

Stopping: a bounded-horizon analysis runs until the next critical delay
exceeds h_max; the all-delays analysis stops once the current count
exceeds the worst-case number of roots that can still leave the region
(finite, from the phase ranges of the leaving-direction intervals).
"""

import cmath
import heapq
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import boundary as _boundary
from . import plant as _plant
from . import poly
from .errors import (
    BoundaryClearance,
    DidNotConverge,
    BoundaryPerturbationWarning,
    BoundaryRoot,
    NegativeCount,
    NoIntersection,
    PerturbationFailed,
    RootOnBoundary,
    UnboundedLeavingInterval,
)
from .numutil import INF, bisect_monotone, bracket_right, sign

TWO_PI = 2.0 * math.pi
LINE_SLACK = 1e-9          # revolutions of slack for endpoint line hits
OMEGA_REAL_TOL = 1e-10     # below this a crossing counts as a real root
TIE_TOL = 1e-10            # delays closer than this are processed together
DUP_OMEGA_RTOL = 1e-9      # same-root detection across adjacent intervals
EVENT_RESIDUAL = 1e-8
PERTURB_STEP = 1e-6
MAX_PERTURB = 8
HIGH_ORDER_COUNT = 60      # above this the h=0 count uses the winding oracle


@dataclass(frozen=True)
class CrossingEvent:
    """One boundary-crossing characteristic root at its critical delay."""

    delay: float
    omega: float
    root: complex
    direction: int
    interval_index: int
    line_level: float


@dataclass(frozen=True)
class DelayIntervalReport:
    """A delay interval with the constant root count inside the region.

    count is None on a capped tail where a bi-proper loop carries
    infinitely many roots. event_at_hi is the crossing that closes the
    interval (None for the last one).
    """

    h_lo: float
    h_hi: float
    count: object
    event_at_hi: object = None


@dataclass(frozen=True)
class AnalysisResult:
    """Bounded-horizon analysis output (reports tile [0, h_max])."""

    reports: tuple
    events: tuple
    sigma0: float
    h_max: float
    capped: bool = False
    verdict_flag: str = "normal"

    def __iter__(self):
        return iter(self.reports)


@dataclass(frozen=True)
class AllDelaysVerdict:
    """All-delays stability verdict."""

    stable_intervals: tuple
    leaving_budget: int
    termination_delay: float
    verdict_flag: str
    reports: tuple = ()
    events: tuple = ()
    sigma0: float = 0.0


@dataclass(frozen=True)
class ImaginaryAxisResult:
    """sigma0 = 0 analysis: reports plus zero-measure tangential exclusions."""

    reports: tuple
    events: tuple
    tangential_delays: tuple
    critical_frequencies: tuple
    zero_frequency_hit: bool = False


# ---------------------------------------------------------------------------
# phase bookkeeping


def phase_offset(G, sigma0):
    """Offset phi0 between the loop phase and phi: 0 if G(sigma0) > 0 else pi."""
    value = _plant.evaluate(G, complex(sigma0, 0.0)).real
    return 0.0 if value > 0.0 else math.pi


def _line_index_range(phi_min, phi_max, phi0):
    """Integer l range with phi_min <= (2l+1)pi - phi0 <= phi_max.

    Returns (l_lo, l_hi); either side is None when the phase range is
    unbounded on that side. Endpoint hits get LINE_SLACK revolutions of
    tolerance so exact-endpoint lines are kept.
    """
    l_lo = None
    if not math.isinf(phi_min):
        l_lo = math.ceil((phi_min + phi0) / TWO_PI - 0.5 - LINE_SLACK)
    l_hi = None
    if not math.isinf(phi_max):
        l_hi = math.floor((phi_max + phi0) / TWO_PI - 0.5 + LINE_SLACK)
    return l_lo, l_hi


def line_count(interval, phi0):
    """Number of horizontal lines intersecting phi on the interval (>= 0)."""
    if math.isinf(interval.phi_min) or math.isinf(interval.phi_max):
        raise UnboundedLeavingInterval(
            f"interval [{interval.omega_lo}, {interval.omega_hi}] has infinite phase range"
        )
    l_lo, l_hi = _line_index_range(interval.phi_min, interval.phi_max, phi0)
    return max(l_hi - l_lo + 1, 0)


def leaving_count_total(intervals, phi0):
    """Total crossings that ever leave the region (finite by the last-interval
    asymptotics: the unbounded interval always has entering direction)."""
    total = 0
    for iv in intervals:
        if iv.tangential or iv.crossing_direction != -1:
            continue
        total += line_count(iv, phi0)
    return total


def _root_leaving_budget(bf, intervals, phi0):
    # worst-case decrement of the root count: 2 per complex leaving crossing,
    # 1 when the crossing sits at omega = 0
    budget = 0
    for iv in intervals:
        if iv.tangential or iv.crossing_direction != -1:
            continue
        l_lo, l_hi = _line_index_range(iv.phi_min, iv.phi_max, phi0)
        for l in range(l_lo, l_hi + 1):
            level = (2 * l + 1) * math.pi - phi0
            real_hit = iv.omega_lo < OMEGA_REAL_TOL and abs(level - iv.phi_lo) <= 1e-9
            budget += 1 if real_hit else 2
    return budget


class IntervalCursor:
    """Walks the horizontal lines of one interval in increasing-delay order."""

    def __init__(self, bf, interval, index, phi0):
        self.bf = bf
        self.interval = interval
        self.index = index
        self.phi0 = phi0
        self.exhausted = False
        self.omega_current = None
        self.delay_current = None
        self._l = None
        iv = interval
        if iv.tangential:
            self.exhausted = True
            return
        if iv.unbounded and iv.h_sign < 0:
            # bi-proper tail with delays decreasing toward ln|d|/sigma0:
            # every crossing lies beyond the bi-proper delay cap
            self.exhausted = True
            return
        self._l_lo, self._l_hi = _line_index_range(iv.phi_min, iv.phi_max, phi0)
        self._step = 1 if iv.phi_sign * iv.h_sign > 0 else -1
        start = self._l_lo if self._step > 0 else self._l_hi
        if start is None:
            self.exhausted = True
            return
        if not self._in_range(start):
            self.exhausted = True
            return
        self._l = start
        self._solve()

    @property
    def line(self):
        """Current horizontal level (2l+1)pi - phi0."""
        if self._l is None:
            raise NoIntersection("no admissible horizontal line on this interval")
        return (2 * self._l + 1) * math.pi - self.phi0

    def _in_range(self, l):
        if self._l_lo is not None and l < self._l_lo:
            return False
        if self._l_hi is not None and l > self._l_hi:
            return False
        return True

    def _solve(self):
        iv, bf = self.interval, self.bf
        level = self.line
        slack = 1e-9 * (1.0 + abs(level))
        if abs(level - iv.phi_lo) <= slack:
            w = iv.omega_lo
        elif not iv.unbounded and abs(level - iv.phi_hi) <= slack:
            w = iv.omega_hi
        else:
            hi = iv.omega_hi
            if iv.unbounded:
                # phi heads toward phi_sign * inf; probe until the level is passed
                hi = bracket_right(
                    bf.phi, iv.omega_lo, level, iv.phi_sign, step=1.0 + iv.omega_lo
                )
            w = bisect_monotone(bf.phi, iv.omega_lo, hi, target=level)
            w = self._polish(w, level, iv.omega_lo, hi)
        self.omega_current = w
        self.delay_current = max(bf.H(w), 0.0)

    def _polish(self, w, level, lo, hi):
        # bisection is relative in omega; a Newton step pins the phase residual
        # (and hence the characteristic-equation residual) to evaluation noise
        bf = self.bf
        for _ in range(3):
            err = bf.phi(w) - level
            slope = bf.phi_prime(w)
            if err == 0.0 or slope == 0.0:
                break
            step = err / slope
            if abs(step) > 0.5 * (hi - lo):
                break
            w2 = min(max(w - step, lo), hi)
            if abs(bf.phi(w2) - level) >= abs(err):
                break
            w = w2
        return w

    def advance(self):
        """Move to the next line toward larger delay; may exhaust the cursor."""
        if self.exhausted:
            return
        nxt = self._l + self._step
        if not self._in_range(nxt):
            self.exhausted = True
            self._l = None
            self.omega_current = None
            self.delay_current = None
            return
        self._l = nxt
        self._solve()


# ---------------------------------------------------------------------------
# zero-delay root count


def _strict_root_count(G, sigma0, boundary_band):
    """Roots of the h=0 characteristic polynomial with Re > sigma0.

    Returns (count, on_boundary) where on_boundary is the number of roots
    inside the boundary band (counted by neither side).
    """
    if G.n > HIGH_ORDER_COUNT:
        from . import oracle

        region = oracle.enclosure_bounds(G, 0.0, sigma0)
        return oracle.count_roots(G, 0.0, region), 0
    cp = _plant.char_poly_at_zero_delay(G)
    if cp.degree <= 0:
        return 0, 0
    roots = poly.all_complex_roots(cp)
    on_boundary = sum(1 for r in roots if abs(r.real - sigma0) < boundary_band)
    count = sum(1 for r in roots if r.real - sigma0 >= boundary_band)
    return count, on_boundary


def initial_root_count(G, sigma0):
    """Number of zero-delay characteristic roots with Re(s) >= sigma0.

    Raises RootOnBoundary when a root sits on the boundary itself (the
    orchestration layer then perturbs sigma0).
    """
    band = 1e-9 * (1.0 + abs(sigma0))
    try:
        count, on_boundary = _strict_root_count(G, sigma0, band)
    except BoundaryRoot as exc:
        raise RootOnBoundary(str(exc)) from exc
    if on_boundary:
        raise RootOnBoundary(
            f"{on_boundary} zero-delay root(s) within {band:.1e} of Re(s) = {sigma0}"
        )
    return count


# ---------------------------------------------------------------------------
# the enumeration loop


@dataclass(frozen=True)
class StopRule:
    """Stopping policy: bounded horizon and/or leaving-root budget."""

    horizon: float = INF
    leaving_budget: object = None  # in root units; None disables the rule


def _event_residual(G, event):
    s = event.root
    return abs(1.0 + _plant.evaluate(G, s) * cmath.exp(-event.delay * s))


def enumerate_crossings(bf, intervals, phi0, stop, n_initial):
    """All crossings in nondecreasing delay order plus the delay reports.

    Ties within TIE_TOL are processed in ascending omega; the same physical
    root reported by two adjacent intervals (shared endpoint) is counted
    once. Returns (events, reports, stopped_by_budget).
    """
    cursors = [
        IntervalCursor(bf, iv, i, phi0)
        for i, iv in enumerate(intervals)
        if not iv.tangential
    ]
    heap = []
    for c in cursors:
        if not c.exhausted:
            heapq.heappush(heap, (c.delay_current, c.omega_current, id(c), c))
    events = []
    boundaries = []  # (delay, event, count_after)
    n = n_initial
    budget = stop.leaving_budget
    stopped = False
    while heap and not stopped:
        h0, w0, _, c0 = heapq.heappop(heap)
        if h0 > stop.horizon * (1.0 + 1e-12) + 1e-12:
            break
        group = [(h0, w0, c0)]
        while heap and heap[0][0] - h0 <= TIE_TOL:
            hh, ww, _, cc = heapq.heappop(heap)
            group.append((hh, ww, cc))
        group.sort(key=lambda t: t[1])
        for h, w, cur in group:
            iv = cur.interval
            duplicate = any(
                abs(e.delay - h) <= TIE_TOL
                and abs(e.omega - w) <= DUP_OMEGA_RTOL * (1.0 + abs(w))
                for e in events[-4:]
            )
            if not duplicate:
                cd = iv.crossing_direction
                step = 1 if w < OMEGA_REAL_TOL else 2
                new_n = n + step * cd
                if new_n < 0:
                    raise NegativeCount(
                        f"count {n} would drop to {new_n} at delay {h:.6g}"
                    )
                event = CrossingEvent(
                    delay=h,
                    omega=w,
                    root=complex(bf.sigma0, w),
                    direction=cd,
                    interval_index=cur.index,
                    line_level=cur.line,
                )
                residual = _event_residual(bf.plant, event)
                if residual > EVENT_RESIDUAL:
                    raise DidNotConverge(
                        f"crossing at h={h:.6g} fails the characteristic "
                        f"equation (residual {residual:.2e})",
                        residual=residual,
                    )
                events.append(event)
                n = new_n
                boundaries.append((h, event, n))
                if budget is not None:
                    if cd < 0:
                        budget -= step
                    if n > budget:
                        stopped = True
                        break
            cur.advance()
            if not cur.exhausted:
                heapq.heappush(
                    heap, (cur.delay_current, cur.omega_current, id(cur), cur)
                )
    reports = _assemble_reports(boundaries, n_initial, stop.horizon, stopped)
    return tuple(events), tuple(reports), stopped


def _assemble_reports(boundaries, n_initial, horizon, stopped):
    reports = []
    lo, count = 0.0, n_initial
    for h, event, count_after in boundaries:
        if h > lo:  # zero-width rows (simultaneous crossings) are skipped
            reports.append(DelayIntervalReport(lo, h, count, event_at_hi=event))
        lo, count = h, count_after
    end = INF if (stopped or math.isinf(horizon)) else horizon
    if end > lo or not reports:
        reports.append(DelayIntervalReport(lo, end, count))
    return reports


# ---------------------------------------------------------------------------
# orchestration


def _prepared(G, cfg):
    """Validated BoundaryFunctions with clearance / simple-root assumptions.

    Perturbs sigma0 leftward (warning) until the plant clears the boundary,
    no zero-delay root sits on it and the multiplicity guard is silent.
    """
    _plant.validate(G)
    sigma = cfg.sigma0
    reason = None
    for _ in range(MAX_PERTURB):
        try:
            bcfg = _plant.BoundaryConfig(sigma, cfg.clearance_tol)
            bf = _boundary.boundary_functions(G, bcfg)
            n1 = initial_root_count(G, sigma)
            hits = _boundary.multiplicity_guard(bf)
            if hits:
                reason = f"multiple boundary root at omega={hits[0][0]:.6g}"
                raise RootOnBoundary(reason)
        except (BoundaryClearance, RootOnBoundary) as exc:
            reason = str(exc)
            sigma = sigma - PERTURB_STEP * (1.0 + abs(sigma))
            warnings.warn(
                BoundaryPerturbationWarning(
                    f"boundary perturbed to sigma0 = {sigma!r}: {reason}",
                    sigma0_requested=cfg.sigma0,
                    sigma0_used=sigma,
                )
            )
            continue
        return bf, n1, sigma
    raise PerturbationFailed(
        f"could not satisfy boundary assumptions after {MAX_PERTURB} perturbations: {reason}"
    )


def _intervals_for(bf, omega_cap=None):
    cap = omega_cap if omega_cap is not None else _boundary.default_omega_cap(bf)
    ih = _boundary.feasible_intervals(bf, cap)
    idir = _boundary.direction_intervals(bf, cap)
    return _boundary.intersect(ih, idir, bf)


@dataclass(frozen=True)
class IntervalsResult:
    """Boundary interval tables: I_h, I_d and their annotated intersection."""

    sigma0: float
    feasible: tuple
    direction: tuple
    intervals: tuple
    omega_cap: float


def prepare_intervals(G, cfg, omega_cap=None):
    """Compute I_h, I_d and I = I_h ∩ I_d for a validated, cleared boundary."""
    bf, _, sigma = _prepared(G, cfg)
    cap = omega_cap if omega_cap is not None else _boundary.default_omega_cap(bf)
    ih = _boundary.feasible_intervals(bf, cap)
    idir = _boundary.direction_intervals(bf, cap)
    intervals = _boundary.intersect(ih, idir, bf)
    return IntervalsResult(
        sigma0=sigma,
        feasible=tuple(ih),
        direction=tuple(idir),
        intervals=tuple(intervals),
        omega_cap=cap,
    )


def _biproper_cap(G, sigma0):
    d = _plant.feedthrough(G)
    if d == 0.0 or abs(d) >= 1.0:
        return None
    return math.log(abs(d)) / sigma0


def analyze_up_to(G, cfg, h_max, omega_cap=None):
    """Delay intervals and root counts for h in [0, h_max] (problem 1)."""
    if h_max <= 0.0:
        raise ValueError("h_max must be positive")
    _plant.validate(G)
    d = _plant.feedthrough(G)
    if abs(d) >= 1.0 and d != 0.0:
        report = DelayIntervalReport(0.0, h_max, None)
        return AnalysisResult(
            reports=(report,),
            events=(),
            sigma0=cfg.sigma0,
            h_max=h_max,
            verdict_flag="biproper_unit_or_more",
        )
    bf, n1, sigma = _prepared(G, cfg)
    intervals = _intervals_for(bf, omega_cap)
    phi0 = phase_offset(G, sigma)
    cap = _biproper_cap(G, sigma)
    horizon = h_max
    capped = False
    if cap is not None and h_max >= cap:
        horizon = cap * (1.0 - 1e-9)
        capped = True
    events, reports, _ = enumerate_crossings(
        bf, intervals, phi0, StopRule(horizon=horizon), n1
    )
    reports = list(reports)
    if capped:
        lo = reports[-1].h_hi
        reports.append(DelayIntervalReport(lo, h_max, None))
    else:
        last = reports[-1]
        if math.isinf(last.h_hi):
            reports[-1] = DelayIntervalReport(last.h_lo, h_max, last.count)
    return AnalysisResult(
        reports=tuple(reports),
        events=events,
        sigma0=sigma,
        h_max=h_max,
        capped=capped,
        verdict_flag="biproper_capped" if capped else "normal",
    )


def stable_from_reports(reports):
    out = []
    for rep in reports:
        if rep.count != 0 or rep.h_hi <= rep.h_lo:
            continue
        if out and out[-1][1] == rep.h_lo:
            out[-1] = (out[-1][0], rep.h_hi)
        else:
            out.append((rep.h_lo, rep.h_hi))
    return tuple(out)


def analyze_all_delays(G, cfg, omega_cap=None):
    """Stable delay intervals over all h in [0, inf) (problem 2)."""
    _plant.validate(G)
    d = _plant.feedthrough(G)
    if abs(d) >= 1.0 and d != 0.0:
        return AllDelaysVerdict(
            stable_intervals=(),
            leaving_budget=0,
            termination_delay=0.0,
            verdict_flag="biproper_unit_or_more",
            sigma0=cfg.sigma0,
        )
    bf, n1, sigma = _prepared(G, cfg)
    intervals = _intervals_for(bf, omega_cap)
    phi0 = phase_offset(G, sigma)
    n_s = leaving_count_total(intervals, phi0)
    budget = _root_leaving_budget(bf, intervals, phi0)
    cap = _biproper_cap(G, sigma)
    horizon = INF if cap is None else cap * (1.0 - 1e-9)
    events, reports, stopped = enumerate_crossings(
        bf, intervals, phi0, StopRule(horizon=horizon, leaving_budget=budget), n1
    )
    reports = list(reports)
    if cap is not None and not stopped:
        # beyond the cap the loop carries infinitely many roots
        last = reports[-1]
        if math.isinf(last.h_hi):
            reports[-1] = DelayIntervalReport(last.h_lo, cap, last.count)
        reports.append(DelayIntervalReport(cap, INF, None))
    return AllDelaysVerdict(
        stable_intervals=stable_from_reports(reports),
        leaving_budget=n_s,
        termination_delay=events[-1].delay if events else 0.0,
        verdict_flag="biproper_capped" if cap is not None else "normal",
        reports=tuple(reports),
        events=events,
        sigma0=sigma,
    )


# ---------------------------------------------------------------------------
# sigma0 = 0: the imaginary-axis special case


def _base_delay(G, w0):
    """Smallest h >= 0 with angle(G(j w0)) - h w0 = pi (mod 2 pi).

    Values within 1e-9 of zero or of the full period snap to exactly zero:
    a crossing root sitting on the axis at h = 0 must not leak a sliver
    interval or a spurious full-period shift from bisection fuzz.
    """
    angle = _plant.phase_at(G, complex(0.0, w0))
    base = (angle - math.pi) % TWO_PI
    if base > TWO_PI - 1e-9 * (1.0 + TWO_PI) or base < 1e-9 * (1.0 + TWO_PI):
        base = 0.0
    return base / w0


def _axis_functions(G):
    return _boundary.BoundaryFunctions(
        plant=G,
        sigma0=-0.0,  # unused for the axis path
        lnk=math.log(abs(G.gain)),
        zs=np.array([-z.real for z in G.zeros], dtype=float),
        zw=np.array([z.imag for z in G.zeros], dtype=float),
        ps=np.array([-p.real for p in G.poles], dtype=float),
        pw=np.array([p.imag for p in G.poles], dtype=float),
    )


def _axis_logmag(af):
    from . import _kernels as _k

    def val(w):
        arr = np.ascontiguousarray(np.atleast_1d(np.asarray(w, dtype=float)))
        out = _k.logmag(arr, af.lnk, af.zs, af.zw, af.ps, af.pw)
        return float(out[0]) if np.isscalar(w) else out

    def d1(w):
        arr = np.ascontiguousarray(np.atleast_1d(np.asarray(w, dtype=float)))
        out = _k.logmag_d1(arr, af.zs, af.zw, af.ps, af.pw)
        return float(out[0]) if np.isscalar(w) else out

    return val, d1


def _axis_critical_points(G, origin_singular, cap):
    if G.m + G.n <= _boundary.POLY_ROUTE_MAX_ROOTS:
        numer = _boundary._hprime_numerator(0.0, G.zeros, G.poles)
        roots = poly.nonnegative_real_roots(numer)
    else:
        af = _axis_functions(G)
        _, d1 = _axis_logmag(af)
        roots = _boundary._scan_zeros(d1, cap, 2 * (G.m + G.n) - 1)
    if origin_singular:
        roots = [r for r in roots if r > 1e-9 * cap]
    return _boundary._dedup([r for r in roots if r <= cap])


def imaginary_axis_analysis(G, h_max, clearance_tol=1e-8):
    """Critical frequencies, periodic delays and root counts for sigma0 = 0.

    Critical frequencies solve |G(jw)| = 1; each yields delays h0 + 2 pi k / w0
    with a fixed crossing direction sign(-d/dw ln|G(jw)|). Tangential
    touchings (|G| = 1 without crossing) are returned as zero-measure
    exclusions. A pole or zero exactly at the origin is tolerated
    (integrators); anywhere else on the axis it violates the assumptions.
    """
    if h_max <= 0.0:
        raise ValueError("h_max must be positive")
    _plant.validate(G)
    for r in (*G.zeros, *G.poles):
        if abs(r) > 1e-12 and abs(r.real) < clearance_tol:
            raise BoundaryClearance(f"pole/zero at {r} lies on the imaginary axis")
    origin_pole = any(abs(p) <= 1e-12 for p in G.poles)
    origin_zero = any(abs(z) <= 1e-12 for z in G.zeros)
    af = _axis_functions(G)
    him, him_d1 = _axis_logmag(af)

    roots = (*G.zeros, *G.poles)
    extent = max((abs(r.imag) + abs(r.real) for r in roots), default=0.0)
    cap = 10.0 * (1.0 + extent)
    for _ in range(40):
        band = np.linspace(cap, 2.0 * cap, 257)
        v = him_d1(band)
        v = v[v != 0.0]
        if not (v.size and np.any(np.signbit(v[:-1]) != np.signbit(v[1:]))):
            break
        cap *= 2.0

    origin_singular = origin_pole or origin_zero
    crit = _axis_critical_points(G, origin_singular, cap)
    pts = _boundary._dedup([0.0, *crit]) if not origin_singular else crit
    d = _plant.feedthrough(G)
    him_inf = math.log(abs(d)) if d != 0.0 else -INF

    # endpoint values of ln|G| on the monotone pieces
    left = []
    if origin_singular:
        left_val = INF if origin_pole else -INF
        start = 0.0
    else:
        left_val = him(0.0)
        start = 0.0
        pts = [p for p in pts if p > 0.0]
    nodes = [start, *pts, INF]
    vals = [left_val, *[him(p) for p in pts], him_inf]

    freqs = []       # (omega0, direction)
    tangential = []  # omega0 with |G| touching 1
    for x, v in zip(nodes[1:-1], vals[1:-1]):
        if abs(v) <= _boundary.TOUCH_TOL:
            tangential.append(x)
    for (a, va), (b, vb) in zip(zip(nodes, vals), zip(nodes[1:], vals[1:])):
        fa = va if not math.isinf(va) else math.copysign(1.0, va)
        fb = vb if not math.isinf(vb) else math.copysign(1.0, vb)
        if abs(va) <= _boundary.TOUCH_TOL and not math.isinf(va):
            continue
        if abs(vb) <= _boundary.TOUCH_TOL and not math.isinf(vb):
            continue
        if (fa < 0.0) == (fb < 0.0):
            continue
        lo = a
        if math.isinf(va):
            # shrink toward the origin singularity until him matches va's sign
            probe = b / 2.0 if math.isfinite(b) and b > 0 else 1.0
            for _ in range(2000):
                v = him(probe)
                if math.isfinite(v) and v != 0.0 and (v < 0.0) == (fa < 0.0):
                    break
                probe /= 2.0
            lo = probe
        hi = b
        if math.isinf(b):
            hi = bracket_right(him, max(lo, 1.0), 0.0, sign(fb))
        w0 = bisect_monotone(him, lo, hi, target=0.0)
        freqs.append(w0)

    zero_frequency_hit = False
    events_spec = []  # (delay, omega, direction)
    crit_freqs = []
    for w0 in freqs:
        if w0 <= 1e-9:
            zero_frequency_hit = True
            continue
        direction = sign(-him_d1(w0))
        h0 = _base_delay(G, w0)
        crit_freqs.append((w0, h0, direction))
        k = 0
        while h0 + k * TWO_PI / w0 <= h_max * (1.0 + 1e-12):
            events_spec.append((h0 + k * TWO_PI / w0, w0, direction))
            k += 1

    tangential_delays = []
    for w0 in tangential:
        h0 = _base_delay(G, w0)
        crit_freqs.append((w0, h0, 0))
        k = 0
        while h0 + k * TWO_PI / w0 <= h_max * (1.0 + 1e-12):
            tangential_delays.append(h0 + k * TWO_PI / w0)
            k += 1

    n1, _ = _strict_root_count(G, 0.0, 1e-9)
    events_spec.sort()
    events = []
    boundaries = []
    n = n1
    for h, w0, direction in events_spec:
        if h <= 1e-12 and direction < 0:
            # the pair sits on the axis at h = 0 and departs without having
            # been counted
            events.append(
                CrossingEvent(h, w0, complex(0.0, w0), direction, -1, math.nan)
            )
            continue
        new_n = n + 2 * direction
        if new_n < 0:
            raise NegativeCount(f"count {n} would drop below zero at delay {h:.6g}")
        event = CrossingEvent(h, w0, complex(0.0, w0), direction, -1, math.nan)
        events.append(event)
        n = new_n
        boundaries.append((h, event, n))
    reports = _assemble_reports(boundaries, n1, h_max, stopped=False)
    return ImaginaryAxisResult(
        reports=tuple(reports),
        events=tuple(events),
        tangential_delays=tuple(sorted(tangential_delays)),
        critical_frequencies=tuple(sorted(crit_freqs)),
        zero_frequency_hit=zero_frequency_hit,
    )
