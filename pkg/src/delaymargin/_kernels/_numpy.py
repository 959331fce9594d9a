"""NumPy implementation of the evaluation kernels.

All kernels take a 1-D float64 (or complex128) abscissa array plus flat
per-root data arrays and return a 1-D result array. `zs`/`ps` hold the
horizontal offsets sigma0 - Re(root); `zw`/`pw` hold Im(root). Callers
guarantee the offsets are nonzero (boundary clearance), so no term is
singular on the evaluation line.
"""

import numpy as np

BACKEND = "numpy"


def _gamma(w, offs, imag):
    # squared distance from sigma0 + j*w to each root: offs^2 + (w - imag)^2
    dw = w[None, :] - imag[:, None]
    return offs[:, None] ** 2 + dw * dw, dw


def logmag(w, lnk, zs, zw, ps, pw):
    """ln|G(sigma0 + j w)| as a sum of per-root log terms."""
    w = np.ascontiguousarray(w, dtype=np.float64)
    out = np.full(w.shape, lnk)
    if zs.size:
        gz, _ = _gamma(w, zs, zw)
        out += 0.5 * np.log(gz).sum(axis=0)
    if ps.size:
        gp, _ = _gamma(w, ps, pw)
        out -= 0.5 * np.log(gp).sum(axis=0)
    return out


def logmag_d1(w, zs, zw, ps, pw):
    """d/dw ln|G(sigma0 + j w)|."""
    w = np.ascontiguousarray(w, dtype=np.float64)
    out = np.zeros(w.shape)
    if zs.size:
        gz, dwz = _gamma(w, zs, zw)
        out += (dwz / gz).sum(axis=0)
    if ps.size:
        gp, dwp = _gamma(w, ps, pw)
        out -= (dwp / gp).sum(axis=0)
    return out


def logmag_d2(w, zs, zw, ps, pw):
    """d^2/dw^2 ln|G(sigma0 + j w)|."""
    w = np.ascontiguousarray(w, dtype=np.float64)
    out = np.zeros(w.shape)
    if zs.size:
        gz, dwz = _gamma(w, zs, zw)
        out += ((zs[:, None] ** 2 - dwz * dwz) / (gz * gz)).sum(axis=0)
    if ps.size:
        gp, dwp = _gamma(w, ps, pw)
        out -= ((ps[:, None] ** 2 - dwp * dwp) / (gp * gp)).sum(axis=0)
    return out


def argsum(w, zs, zw, ps, pw):
    """Continuous per-root arctangent sum (single-argument branch)."""
    w = np.ascontiguousarray(w, dtype=np.float64)
    out = np.zeros(w.shape)
    if zs.size:
        out += np.arctan((w[None, :] - zw[:, None]) / zs[:, None]).sum(axis=0)
    if ps.size:
        out -= np.arctan((w[None, :] - pw[:, None]) / ps[:, None]).sum(axis=0)
    return out


def argsum_d1(w, zs, zw, ps, pw):
    """First derivative of the arctangent sum."""
    w = np.ascontiguousarray(w, dtype=np.float64)
    out = np.zeros(w.shape)
    if zs.size:
        gz, _ = _gamma(w, zs, zw)
        out += (zs[:, None] / gz).sum(axis=0)
    if ps.size:
        gp, _ = _gamma(w, ps, pw)
        out -= (ps[:, None] / gp).sum(axis=0)
    return out


def argsum_d2(w, zs, zw, ps, pw):
    """Second derivative of the arctangent sum."""
    w = np.ascontiguousarray(w, dtype=np.float64)
    out = np.zeros(w.shape)
    if zs.size:
        gz, dwz = _gamma(w, zs, zw)
        out -= 2.0 * (zs[:, None] * dwz / (gz * gz)).sum(axis=0)
    if ps.size:
        gp, dwp = _gamma(w, ps, pw)
        out += 2.0 * (ps[:, None] * dwp / (gp * gp)).sum(axis=0)
    return out


def rational_eval(s, gain, zeros, poles):
    """Product-form G(s) on a complex array.

    Zero and pole factors are interleaved so partial products stay bounded
    for high-order plants (never form the full numerator alone).
    """
    s = np.ascontiguousarray(s, dtype=np.complex128)
    out = np.full(s.shape, complex(gain))
    m, n = len(zeros), len(poles)
    for k in range(max(m, n)):
        if k < m:
            out = out * (s - zeros[k])
        if k < n:
            out = out / (s - poles[k])
    return out


def charfun(s, h, gain, zeros, poles):
    """Characteristic function 1 + G(s) e^{-h s} on a complex array."""
    s = np.ascontiguousarray(s, dtype=np.complex128)
    return 1.0 + rational_eval(s, gain, zeros, poles) * np.exp(-h * s)
