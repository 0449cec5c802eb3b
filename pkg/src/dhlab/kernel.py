"""The Fejer kernel K_eta and its Fourier transform, the tent function."""

import math

import numpy as np

from .errors import DomainError

_SERIES_CUTOFF = 1e-4


def _check(eta):
    if not eta > 0:
        raise DomainError(f"eta must be positive, got {eta}")


def fejer(eta: float, alpha):
    """K_eta(alpha) = (sin(pi eta alpha) / (pi alpha))^2, equal to eta^2 at 0.

    Evaluated as eta^2 sinc^2(pi eta alpha); a short Taylor series is used
    below ``_SERIES_CUTOFF`` to avoid 0/0.
    """
    _check(eta)
    a = np.asarray(alpha, dtype=np.float64)
    x = math.pi * eta * a
    small = np.abs(x) < _SERIES_CUTOFF
    safe = np.where(small, 1.0, x)
    x2 = x * x
    sinc = np.where(small, 1 - x2 / 6 + x2 * x2 / 120, np.sin(safe) / safe)
    out = eta * eta * sinc * sinc
    return float(out) if out.ndim == 0 else out


def fejer_hat(eta: float, theta):
    _check(eta)
    out = np.maximum(0.0, eta - np.abs(np.asarray(theta, dtype=np.float64)))
    return float(out) if out.ndim == 0 else out


def fejer_tail_bound(eta: float, A: float) -> float:
    """Upper bound 2/(pi^2 A) for the integral of K_eta over |alpha| > A."""
    if not A > 0:
        raise DomainError("A must be positive")
    return 2.0 / (math.pi**2 * A)


def fejer_pointwise_bound(eta: float, alpha):
    """min(eta^2, 1/(pi^2 alpha^2)), which dominates K_eta everywhere."""
    a = np.abs(np.asarray(alpha, dtype=np.float64))
    with np.errstate(divide="ignore"):
        tail = np.where(a > 0, 1.0 / (math.pi**2 * np.where(a > 0, a, 1.0) ** 2), np.inf)
    out = np.minimum(eta * eta, tail)
    return float(out) if out.ndim == 0 else out


def fejer_transform_quadrature(eta: float, theta: float, A: float, step: float | None = None):
    """Trapezoid value of int_{-A}^{A} K_eta(a) e(theta a) da and the allowance
    against max(0, eta - |theta|): tail bound 2/(pi^2 A) plus the end-node weight.

    K_eta e(theta .) has spectrum inside |freq| <= eta + |theta|, so the full-line
    trapezoid sum with step below 1/(eta + |theta|) is exact.
    """
    _check(eta)
    B = eta + abs(theta)
    h = step if step is not None else 1.0 / (4.0 * B)
    if h * B >= 1:
        raise DomainError("step too coarse for the kernel bandwidth")
    J = math.ceil(A / h)
    a = h * np.arange(-J, J + 1)
    # the integral is real by symmetry: keep cos only
    vals = fejer(eta, a) * np.cos(2 * math.pi * theta * a)
    vals[0] *= 0.5
    vals[-1] *= 0.5
    value = h * math.fsum(vals)
    allowance = fejer_tail_bound(eta, J * h) + h * float(fejer_pointwise_bound(eta, J * h))
    return value, allowance
