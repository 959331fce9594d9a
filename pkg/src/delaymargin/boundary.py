"""Magnitude/phase function families on the shifted boundary and the
feasible / invariant-direction interval machinery.

For a plant G and boundary Re(s) = sigma0 < 0 this module evaluates

    H(w)   = ln|G(sigma0 + jw)| / sigma0          (candidate delay at w)
    phi(w) = sum atan terms - w H(w)              (phase curve)

and their first two derivatives in closed form, locates the monotonicity
breakpoints (zeros of H' and phi''), and produces the intervals where
H >= 0 and where the crossing direction sign(sigma0 * phi') is invariant.

Breakpoints come from explicit numerator polynomials for small plants and
from an adaptive sign-change scan of the (numerically stable) sum forms for
large ones; expanding the numerators in the monomial basis is hostile above
a few dozen roots.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from . import plant as _plant
from . import poly
from .errors import BoundaryClearance
from .numutil import INF, bisect_monotone, bracket_right, sign

POLY_ROUTE_MAX_ROOTS = 30
SCAN_START = 4097
SCAN_MAX = 1 << 21
TOUCH_TOL = 1e-10
GUARD_TOL = 1e-9
GUARD_RESIDUAL = 1e-8


def _as_array(w):
    arr = np.ascontiguousarray(np.atleast_1d(np.asarray(w, dtype=np.float64)))
    return arr, np.isscalar(w) or (hasattr(w, "ndim") and w.ndim == 0)


@dataclass(frozen=True, eq=False)
class BoundaryFunctions:
    """Precomputed per-root terms of G on the boundary Re(s) = sigma0 < 0."""

    plant: object
    sigma0: float
    lnk: float
    zs: np.ndarray  # sigma0 - Re(zero_k)
    zw: np.ndarray  # Im(zero_k)
    ps: np.ndarray  # sigma0 - Re(pole_i)
    pw: np.ndarray  # Im(pole_i)

    def _sums(self, w, fn, *extra):
        arr, scalar = _as_array(w)
        out = fn(arr, *extra, self.zs, self.zw, self.ps, self.pw)
        return float(out[0]) if scalar else out

    def H(self, w):
        """Candidate critical delay ln|G(sigma0 + jw)| / sigma0."""
        return self._sums(w, _k.logmag, self.lnk) / self.sigma0

    def H_prime(self, w):
        return self._sums(w, _k.logmag_d1) / self.sigma0

    def H_double_prime(self, w):
        return self._sums(w, _k.logmag_d2) / self.sigma0

    def phi(self, w):
        """Phase curve: arctangent sum minus w H(w), continuous on [0, inf)."""
        arr, scalar = _as_array(w)
        out = _k.argsum(arr, self.zs, self.zw, self.ps, self.pw) - arr * (
            _k.logmag(arr, self.lnk, self.zs, self.zw, self.ps, self.pw) / self.sigma0
        )
        return float(out[0]) if scalar else out

    def phi_prime(self, w):
        arr, scalar = _as_array(w)
        lm = _k.logmag(arr, self.lnk, self.zs, self.zw, self.ps, self.pw)
        d1 = _k.logmag_d1(arr, self.zs, self.zw, self.ps, self.pw)
        out = (
            _k.argsum_d1(arr, self.zs, self.zw, self.ps, self.pw)
            - lm / self.sigma0
            - arr * d1 / self.sigma0
        )
        return float(out[0]) if scalar else out

    def phi_double_prime(self, w):
        arr, scalar = _as_array(w)
        d1 = _k.logmag_d1(arr, self.zs, self.zw, self.ps, self.pw)
        d2 = _k.logmag_d2(arr, self.zs, self.zw, self.ps, self.pw)
        out = (
            _k.argsum_d2(arr, self.zs, self.zw, self.ps, self.pw)
            - 2.0 * d1 / self.sigma0
            - arr * d2 / self.sigma0
        )
        return float(out[0]) if scalar else out

    @property
    def feedthrough(self):
        return _plant.feedthrough(self.plant)

    def H_at_inf(self):
        """Limit of H: ln|d|/sigma0 for bi-proper plants, +inf otherwise."""
        d = self.feedthrough
        if d == 0.0:
            return INF
        return math.log(abs(d)) / self.sigma0

    def phi_prime_sign_at_inf(self):
        """Sign of phi' in the tail: sigma0 * phi' -> ln(1/|d|)."""
        d = self.feedthrough
        if d == 0.0 or abs(d) < 1.0:
            return -1 if self.sigma0 < 0 else 1
        if abs(d) > 1.0:
            return 1 if self.sigma0 < 0 else -1
        return 0


def boundary_functions(G, cfg):
    """Build BoundaryFunctions, enforcing sigma0 < 0 and boundary clearance."""
    if not cfg.sigma0 < 0.0:
        raise ValueError("boundary_functions requires sigma0 < 0; use the imaginary-axis path for sigma0 = 0")
    clearance = _plant.boundary_clearance(G, cfg)
    if clearance < cfg.clearance_tol:
        raise BoundaryClearance(
            f"pole/zero within {clearance:.3e} of the boundary Re(s) = {cfg.sigma0}"
        )
    s0 = cfg.sigma0
    return BoundaryFunctions(
        plant=G,
        sigma0=s0,
        lnk=math.log(abs(G.gain)),
        zs=np.array([s0 - z.real for z in G.zeros], dtype=float),
        zw=np.array([z.imag for z in G.zeros], dtype=float),
        ps=np.array([s0 - p.real for p in G.poles], dtype=float),
        pw=np.array([p.imag for p in G.poles], dtype=float),
    )


@dataclass(frozen=True)
class BoundaryInterval:
    """A feasible boundary interval with invariant signs.

    h_sign / phi_sign are the signs of H' / phi' on the interior;
    crossing_direction = sign(sigma0 * phi') = -phi_sign for sigma0 < 0.
    Endpoint values of phi and H are stored (limits when omega_hi = inf).
    Tangential entries are isolated touch points excluded from enumeration.
    """

    omega_lo: float
    omega_hi: float
    h_sign: int
    phi_sign: int
    crossing_direction: int
    phi_lo: float
    phi_hi: float
    h_lo: float
    h_hi: float
    tangential: bool = False

    @property
    def unbounded(self):
        return math.isinf(self.omega_hi)

    @property
    def phi_min(self):
        return min(self.phi_lo, self.phi_hi)

    @property
    def phi_max(self):
        return max(self.phi_lo, self.phi_hi)


# ---------------------------------------------------------------------------
# explicit numerator polynomials of the derivative rationals


def _quad_gamma(offs, imag):
    # (offs^2 + (w - imag)^2) as ascending coefficients in w
    return poly.RealPolynomial([offs * offs + imag * imag, -2.0 * imag, 1.0])


def _hprime_numerator(sigma0, zeros, poles):
    gz = [_quad_gamma(sigma0 - z.real, z.imag) for z in zeros]
    gp = [_quad_gamma(sigma0 - p.real, p.imag) for p in poles]

    def prod(polys, skip=None):
        acc = poly.RealPolynomial([1.0])
        for i, q in enumerate(polys):
            if i != skip:
                acc = acc * q
        return acc

    big_z, big_p = prod(gz), prod(gp)
    term_z = poly.RealPolynomial()
    for k, z in enumerate(zeros):
        term_z = term_z + poly.RealPolynomial([-z.imag, 1.0]) * prod(gz, skip=k)
    term_p = poly.RealPolynomial()
    for i, p in enumerate(poles):
        term_p = term_p + poly.RealPolynomial([-p.imag, 1.0]) * prod(gp, skip=i)
    return big_p * term_z - big_z * term_p


def _phi_cubic(sigma0, offs, imag):
    # (2 w_r - 3 w) offs^2 + (2 w_r - w)(w - w_r)^2 - 2 sigma0 offs (w - w_r)
    A, B, C = offs * offs, imag, sigma0 * offs
    t1 = np.convolve([2.0 * B, -3.0], [A])
    t2 = np.convolve([2.0 * B, -1.0], np.convolve([-B, 1.0], [-B, 1.0]))
    t3 = np.convolve([-B, 1.0], [-2.0 * C])
    out = np.zeros(4)
    for t in (t1, t2, t3):
        out[: len(t)] += t
    return poly.RealPolynomial(out)


def _phi_dd_numerator(sigma0, zeros, poles):
    gz = [_quad_gamma(sigma0 - z.real, z.imag) for z in zeros]
    gp = [_quad_gamma(sigma0 - p.real, p.imag) for p in poles]

    def prod_sq(polys, skip=None):
        acc = poly.RealPolynomial([1.0])
        for i, q in enumerate(polys):
            if i != skip:
                acc = acc * q
        return acc * acc

    big_z2, big_p2 = prod_sq(gz), prod_sq(gp)
    term_z = poly.RealPolynomial()
    for k, z in enumerate(zeros):
        cubic = _phi_cubic(sigma0, sigma0 - z.real, z.imag)
        term_z = term_z + cubic * prod_sq(gz, skip=k)
    term_p = poly.RealPolynomial()
    for i, p in enumerate(poles):
        cubic = _phi_cubic(sigma0, sigma0 - p.real, p.imag)
        term_p = term_p + cubic * prod_sq(gp, skip=i)
    return big_p2 * term_z - big_z2 * term_p


def h_prime_numerator(bf):
    """Polynomial whose nonnegative real roots are the zeros of H'."""
    return _hprime_numerator(bf.sigma0, bf.plant.zeros, bf.plant.poles)


def phi_dd_numerator(bf):
    """Polynomial whose nonnegative real roots are the zeros of phi''."""
    return _phi_dd_numerator(bf.sigma0, bf.plant.zeros, bf.plant.poles)


# ---------------------------------------------------------------------------
# zero location: explicit polynomial route or adaptive scan


def _scan_grid(hi, npts):
    # log-spaced so features at all scales below hi are resolved
    return np.concatenate(([0.0], np.geomspace(hi * 1e-12, hi, npts)))


def _scan_zeros(fn_arr, omega_cap, degree_bound):
    """Sign-change zeros of fn on [0, omega_cap] by grid refinement.

    The grid doubles until the bracket count is stable across a refinement
    and does not exceed the degree bound of the matching numerator
    polynomial; each bracket is then bisected.
    """
    npts = SCAN_START
    prev_count = -1
    while True:
        grid = _scan_grid(omega_cap, npts)
        vals = fn_arr(grid)
        exact = grid[vals == 0.0]
        nz = vals != 0.0
        g, v = grid[nz], vals[nz]
        flips = np.nonzero(np.signbit(v[:-1]) != np.signbit(v[1:]))[0]
        count = len(flips) + len(exact)
        if count == prev_count and count <= degree_bound:
            break
        prev_count = count
        npts *= 2
        if npts > SCAN_MAX:
            break
    roots = [float(x) for x in exact]
    for i in flips:
        roots.append(
            bisect_monotone(lambda w: float(fn_arr(np.array([w]))[0]), g[i], g[i + 1], v[i], v[i + 1])
        )
    return sorted(roots)


def _dedup(points, rel=1e-10):
    out = []
    for x in sorted(points):
        if not out or x - out[-1] > rel * (1.0 + abs(x)):
            out.append(x)
    return out


def critical_points_H(bf, omega_cap):
    """Sorted distinct zeros of H' in [0, omega_cap]."""
    if bf.plant.m + bf.plant.n <= POLY_ROUTE_MAX_ROOTS:
        roots = poly.nonnegative_real_roots(h_prime_numerator(bf))
        return _dedup(r for r in roots if r <= omega_cap)
    return _dedup(_scan_zeros(bf.H_prime, omega_cap, 2 * (bf.plant.m + bf.plant.n) - 1))


def _phi_dd_zeros(bf, omega_cap):
    if bf.plant.m + bf.plant.n <= POLY_ROUTE_MAX_ROOTS:
        roots = poly.nonnegative_real_roots(phi_dd_numerator(bf))
        return _dedup(r for r in roots if r <= omega_cap)
    return _dedup(_scan_zeros(bf.phi_double_prime, omega_cap, 4 * (bf.plant.m + bf.plant.n) - 1))


def default_omega_cap(bf):
    """Finite stand-in for the unbounded boundary.

    Starts at 10 * (1 + widest pole/zero extent) and doubles while any of
    H', phi', phi'' still changes sign in the appended band; beyond the cap
    the tail behavior is governed by the feedthrough asymptotics.
    """
    roots = (*bf.plant.zeros, *bf.plant.poles)
    extent = max((abs(r.imag) + abs(r.real - bf.sigma0) for r in roots), default=0.0)
    cap = 10.0 * (1.0 + extent)
    for _ in range(40):
        band = np.linspace(cap, 2.0 * cap, 257)
        quiet = True
        for fn in (bf.H_prime, bf.phi_prime, bf.phi_double_prime):
            v = fn(band)
            v = v[v != 0.0]
            if v.size and np.any(np.signbit(v[:-1]) != np.signbit(v[1:])):
                quiet = False
                break
        if quiet:
            return cap
        cap *= 2.0
    return cap


# ---------------------------------------------------------------------------
# Algorithm 1: feasible intervals


def feasible_intervals(bf, omega_cap):
    """Intervals on [0, inf) where H >= 0, one entry per monotone piece.

    Returned as (omega_lo, omega_hi) pairs, omega_hi = inf on the last piece;
    isolated tangential touch points appear as degenerate pairs (lo == hi).
    """
    breaks = _dedup([0.0, *critical_points_H(bf, omega_cap)])
    pts = breaks + [INF]
    vals = [bf.H(x) for x in breaks] + [bf.H_at_inf()]
    out = []
    for (a, va), (b, vb) in zip(zip(pts, vals), zip(pts[1:], vals[1:])):
        za, zb = abs(va) <= TOUCH_TOL, (not math.isinf(vb)) and abs(vb) <= TOUCH_TOL
        if va >= -TOUCH_TOL and vb >= -TOUCH_TOL:
            out.append((a, b))
        elif za and vb < 0.0:
            out.append((a, a))
        elif zb and va < 0.0:
            out.append((b, b))
        elif va < 0.0 and vb < 0.0:
            continue
        else:
            b_fin = b if not math.isinf(b) else bracket_right(bf.H, a, 0.0, sign(vb))
            w0 = bisect_monotone(bf.H, a, b_fin, bf.H(a), bf.H(b_fin))
            out.append((w0, b) if va < 0.0 else (a, w0))
    # drop isolated points already covered by a neighboring interval
    kept = [iv for iv in out if iv[0] < iv[1]]
    for lo, hi in out:
        if lo == hi and not any(a - 1e-12 <= lo <= b + 1e-12 for a, b in kept):
            kept.append((lo, hi))
    return sorted(kept)


# ---------------------------------------------------------------------------
# Algorithm 2: invariant crossing-direction intervals


def phi_prime_zeros(bf, omega_cap):
    """Nonnegative zeros of phi', bracketed between zeros of phi''."""
    breaks = _dedup([0.0, *_phi_dd_zeros(bf, omega_cap)])
    vals = [bf.phi_prime(x) for x in breaks]
    zeros = [x for x, v in zip(breaks, vals) if abs(v) <= TOUCH_TOL]
    pts = breaks + [INF]
    ends = vals + [bf.phi_prime_sign_at_inf() * INF if bf.phi_prime_sign_at_inf() else 0.0]
    for (a, va), (b, vb) in zip(zip(pts, ends), zip(pts[1:], ends[1:])):
        if abs(va) <= TOUCH_TOL or (not math.isinf(vb) and abs(vb) <= TOUCH_TOL):
            continue
        if (va < 0.0) != (vb < 0.0):
            b_fin = b if not math.isinf(b) else bracket_right(bf.phi_prime, a, 0.0, sign(vb))
            zeros.append(bisect_monotone(bf.phi_prime, a, b_fin, va, bf.phi_prime(b_fin)))
    return _dedup(zeros)


def direction_intervals(bf, omega_cap):
    """Partition of [0, inf) into intervals of constant sign(phi').

    Returns (omega_lo, omega_hi, phi_sign) triples; the last entry is
    unbounded and its sign follows the feedthrough asymptotics.
    """
    zeros = [z for z in phi_prime_zeros(bf, omega_cap) if z > 1e-12]
    pts = _dedup([0.0, *zeros]) + [INF]
    out = []
    for a, b in zip(pts, pts[1:]):
        if math.isinf(b):
            s = bf.phi_prime_sign_at_inf()
            probe = max(2.0 * a, a + 1.0, omega_cap)
            sp = sign(bf.phi_prime(probe))
            out.append((a, b, sp if sp != 0 else s))
        else:
            out.append((a, b, sign(bf.phi_prime(0.5 * (a + b)))))
    return out


def crossing_direction(sigma0, phi_sign):
    """Crossing-direction sign rule: CD = sign(sigma0 * phi') = -phi_sign for sigma0 < 0."""
    if not sigma0 < 0.0:
        raise ValueError("crossing_direction requires sigma0 < 0")
    return -phi_sign


# ---------------------------------------------------------------------------
# intersection


def _interior_samples(lo, hi, count=5):
    if math.isinf(hi):
        return lo + np.geomspace(0.5, 10.0 * (1.0 + lo), count)
    return np.linspace(lo, hi, count + 2)[1:-1]


def intersect(I_h, I_d, bf):
    """I = I_h ∩ I_d with per-interval sign annotations, sorted by omega_lo.

    Degenerate overlaps are dropped; isolated feasible touch points survive
    as tangential entries excluded from crossing enumeration.
    """
    out = []
    isolated = [iv for iv in I_h if iv[0] == iv[1]]
    solid = [iv for iv in I_h if iv[0] < iv[1]]
    for a, b in solid:
        for c, d, phi_sgn in I_d:
            lo, hi = max(a, c), min(b, d)
            if math.isinf(hi):
                if not lo < hi:
                    continue
            elif hi - lo <= 1e-12 * (1.0 + abs(lo)):
                continue
            out.append(_annotate(bf, lo, hi, phi_sgn))
    for w0, _ in isolated:
        out.append(
            BoundaryInterval(
                omega_lo=w0,
                omega_hi=w0,
                h_sign=0,
                phi_sign=sign(bf.phi_prime(w0)),
                crossing_direction=0,
                phi_lo=bf.phi(w0),
                phi_hi=bf.phi(w0),
                h_lo=bf.H(w0),
                h_hi=bf.H(w0),
                tangential=True,
            )
        )
    return sorted(out, key=lambda iv: (iv.omega_lo, iv.omega_hi))


def _annotate(bf, lo, hi, phi_sgn):
    samples = _interior_samples(lo, hi)
    h_vals = bf.H(samples)
    if np.min(h_vals) < -1e-9 * (1.0 + np.max(np.abs(h_vals))):
        raise ValueError(f"feasibility violated on [{lo}, {hi}]")
    mid = samples[len(samples) // 2]
    h_sgn = sign(bf.H_prime(mid))
    pp = bf.phi_prime(samples)
    if phi_sgn == 0:
        phi_sgn = sign(pp[len(pp) // 2])
    if hi == INF:
        phi_hi = INF * phi_sgn
        h_hi = bf.H_at_inf()
    else:
        phi_hi = bf.phi(hi)
        h_hi = bf.H(hi)
    return BoundaryInterval(
        omega_lo=lo,
        omega_hi=hi,
        h_sign=h_sgn,
        phi_sign=phi_sgn,
        crossing_direction=crossing_direction(bf.sigma0, phi_sgn),
        phi_lo=bf.phi(lo),
        phi_hi=phi_hi,
        h_lo=bf.H(lo),
        h_hi=h_hi,
    )


# ---------------------------------------------------------------------------
# multiple-root guard


def guard_candidates(bf, omega_cap=None):
    """Frequencies where H' and phi' vanish together (within 1e-9).

    These are the only places a boundary root of multiplicity > 1 can sit;
    whether one actually does is decided by the delay admissibility and the
    characteristic-equation residual in multiplicity_guard.
    """
    cap = omega_cap if omega_cap is not None else default_omega_cap(bf)
    zh = critical_points_H(bf, cap)
    zp = phi_prime_zeros(bf, cap)
    out = []
    for wh in zh:
        for wp in zp:
            if abs(wh - wp) <= GUARD_TOL * (1.0 + abs(wh)):
                out.append(0.5 * (wh + wp))
    return out


def multiplicity_guard(bf, omega_cap=None):
    """Confirmed boundary roots of multiplicity > 1: H' = phi' = 0 jointly.

    Returns (omega0, h0) pairs where both derivatives vanish at the same
    frequency, the delay is admissible and the characteristic equation
    residual confirms an actual crossing; empty means the simple-root
    assumption holds.
    """
    hits = []
    for w0 in guard_candidates(bf, omega_cap):
        h0 = bf.H(w0)
        if h0 < -1e-12:
            continue
        s0 = complex(bf.sigma0, w0)
        residual = abs(1.0 + _plant.evaluate(bf.plant, s0) * np.exp(-h0 * s0))
        if residual < GUARD_RESIDUAL:
            hits.append((w0, max(h0, 0.0)))
    return hits
