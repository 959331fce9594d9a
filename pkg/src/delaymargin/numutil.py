"""Scalar bracketing and bisection helpers shared by the analysis modules."""

import math

BISECT_RTOL = 1e-12
BISECT_ATOL = 1e-12


def set_bisect_tol(tol):
    """Override the global bisection tolerance (reproducibility experiments)."""
    global BISECT_ATOL, BISECT_RTOL
    BISECT_ATOL = BISECT_RTOL = float(tol)


def bisect_monotone(f, a, b, fa=None, fb=None, target=0.0):
    """Root of f(w) = target on [a, b] where f - target changes sign once.

    Plain bisection to absolute + relative width 1e-12; endpoint values may
    be passed to save two evaluations.
    """
    fa = (f(a) if fa is None else fa) - target
    fb = (f(b) if fb is None else fb) - target
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa < 0) == (fb < 0):
        raise ValueError(f"no sign change on [{a}, {b}] for target {target}")
    while (b - a) > BISECT_ATOL + BISECT_RTOL * (abs(a) + abs(b)):
        mid = 0.5 * (a + b)
        fm = f(mid) - target
        if fm == 0.0:
            return mid
        if (fa < 0) != (fm < 0):
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    return 0.5 * (a + b)


def bracket_right(f, a, target, want_sign, step=1.0, factor=2.0, max_steps=200):
    """Smallest probed b > a with sign(f(b) - target) == want_sign.

    Walks right with geometrically growing steps; used to replace the
    infinite endpoint of an unbounded interval by a finite bracket.
    """
    b = a + step
    for _ in range(max_steps):
        v = f(b) - target
        if v == 0.0 or (v < 0) == (want_sign < 0):
            return b
        b = a + (b - a) * factor
    raise ValueError("failed to bracket a sign change on the unbounded tail")


def sign(x):
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def is_close(a, b, rtol=1e-9, atol=1e-12):
    return abs(a - b) <= atol + rtol * max(abs(a), abs(b))


INF = math.inf
