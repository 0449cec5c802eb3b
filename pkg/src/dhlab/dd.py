"""Vectorised double-double arithmetic and compensated reductions.

Only the handful of error-free transformations the phase computations
need: exact products of a double by a double-double, and reduction of
such a product modulo 1 without losing the fractional digits.
"""

import math

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1
TWO_PI = 2.0 * math.pi


def two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def dd_mul(a_hi, a_lo, b_hi, b_lo):
    p, e = two_prod(a_hi, b_hi)
    e = e + (a_hi * b_lo + a_lo * b_hi)
    return two_sum(p, e)


def dd_add(a_hi, a_lo, b_hi, b_lo):
    s, e = two_sum(a_hi, b_hi)
    e = e + (a_lo + b_lo)
    return two_sum(s, e)


def frac_dd(hi, lo):
    """Signed fractional part in [-1/2, 1/2] of the double-double ``hi + lo``."""
    r = hi - np.round(hi)
    r = r + lo
    return r - np.round(r)


def scaled_frac(k, a_hi, a_lo):
    """frac(k * a) for integer-valued doubles ``k`` (|k| < 2**53) and a = a_hi + a_lo."""
    p, e = two_prod(k, a_hi)
    r = p - np.round(p)
    r = r + (e + k * a_lo)
    return r - np.round(r)


def unit_phase(frac):
    """e(x) = exp(2 pi i x) for already reduced arguments."""
    t = TWO_PI * frac
    return np.cos(t) + 1j * np.sin(t)


def compensated_sum(values, axis=-1, block=256):
    """Deterministic compensated sum along ``axis``.

    Fixed-size blocks (a power of two) are reduced by a pairwise cascade of
    error-free additions, then block partials and their error terms are
    combined in index order with Neumaier compensation.  Works for real or
    complex input; the result does not depend on thread count or call site.
    """
    if block & (block - 1):
        raise ValueError("block must be a power of two")
    v = np.moveaxis(np.asarray(values), axis, -1)
    n = v.shape[-1]
    if n == 0:
        return np.zeros(v.shape[:-1], dtype=v.dtype if v.dtype.kind == "c" else float)
    if v.dtype.kind not in "fc":
        v = v.astype(np.float64)
    nb = -(-n // block)
    pad = nb * block - n
    if pad:
        v = np.concatenate([v, np.zeros(v.shape[:-1] + (pad,), dtype=v.dtype)], axis=-1)
    s = v.reshape(v.shape[:-1] + (nb, block))
    e = np.zeros_like(s[..., 0::2])
    first = True
    while s.shape[-1] > 1:
        t, err = two_sum(s[..., 0::2], s[..., 1::2])
        e = err if first else e[..., 0::2] + e[..., 1::2] + err
        s, first = t, False
    partial = np.concatenate([s, e], axis=-1).reshape(s.shape[:-2] + (2 * nb,))
    if np.iscomplexobj(partial):
        return _neumaier(partial.real) + 1j * _neumaier(partial.imag)
    return _neumaier(partial)


def _neumaier(partial):
    s = partial[..., 0].copy()
    c = np.zeros_like(s)
    for i in range(1, partial.shape[-1]):
        x = partial[..., i]
        t = s + x
        big = np.abs(s) >= np.abs(x)
        c += np.where(big, (s - t) + x, (x - t) + s)
        s = t
    return s + c
