"""R-matrix kernels, vacuum eigenvalues and reconstruction points.

Rational kernels (QNLS and XXX), with ``x = mu - lambda``::

    f = (x + ic) / x      g = ic / x      h = (x + ic) / ic      t = g / h

Trigonometric kernels (XXZ) replace ``x`` by ``sinh x`` and ``ic`` by
``i sin gamma`` with the shift ``x + i gamma``.
"""
from __future__ import annotations

import numpy as np

from .errors import PoleError
from .models import ModelSpec

KERNELS = ("f", "g", "h", "t")


def _check_pole(den, mu, lam, what):
    den = np.asarray(den)
    scale = 1e-10 * np.maximum(1.0, np.maximum(np.abs(mu), np.abs(lam)))
    if np.any(np.abs(den) <= scale):
        raise PoleError(f"kernel {what} evaluated at a pole (mu - lambda too close)")


def _parts(model: ModelSpec, mu, lam):
    """Return (s, s_shift, eta) with s = phi(mu - lam), s_shift = phi(mu - lam + shift)."""
    mu = np.asarray(mu, dtype=complex)
    lam = np.asarray(lam, dtype=complex)
    x = mu - lam
    if model.rational:
        return x, x + 1j * model.c, 1j * model.c
    return np.sinh(x), np.sinh(x + 1j * model.gamma), 1j * np.sin(model.gamma)


def _squeeze(v):
    return complex(v) if np.ndim(v) == 0 else v


def f(model: ModelSpec, mu, lam):
    s, s1, _ = _parts(model, mu, lam)
    _check_pole(s, mu, lam, "f")
    return _squeeze(s1 / s)


def g(model: ModelSpec, mu, lam):
    s, _, eta = _parts(model, mu, lam)
    _check_pole(s, mu, lam, "g")
    return _squeeze(eta / s)


def h(model: ModelSpec, mu, lam):
    """f/g; entire in both variants, so h(lambda, lambda) = 1 without special casing."""
    _, s1, eta = _parts(model, mu, lam)
    return _squeeze(s1 / eta)


def t(model: ModelSpec, mu, lam):
    s, s1, eta = _parts(model, mu, lam)
    _check_pole(s, mu, lam, "t")
    _check_pole(s1, mu, lam, "t")
    return _squeeze(eta * eta / (s * s1))


_DISPATCH = {"f": f, "g": g, "h": h, "t": t}


def kernel(model: ModelSpec, which: str, mu, lam):
    """Evaluate one of the kernels ``f, g, h, t`` at ``(mu, lam)``."""
    try:
        fn = _DISPATCH[which]
    except KeyError:
        raise ValueError(f"unknown kernel {which!r}; expected one of {KERNELS}") from None
    return fn(model, mu, lam)


def dlog_f(model: ModelSpec, x):
    """Derivative of ``log f`` with respect to its difference argument ``x = mu - lambda``."""
    x = np.asarray(x, dtype=complex)
    if model.rational:
        return _squeeze(1.0 / (x + 1j * model.c) - 1.0 / x)
    return _squeeze(1.0 / np.tanh(x + 1j * model.gamma) - 1.0 / np.tanh(x))


def vacuum_eigen(model: ModelSpec, lam):
    """Pseudovacuum eigenvalues ``(a, d)`` of the diagonal monodromy blocks.

    The XXZ values carry the factor ``i**M`` that comes with the L-operator.
    """
    lam = np.asarray(lam, dtype=complex)
    if model.kind == "qnls":
        a = np.exp(-0.5j * lam * model.L)
        d = np.exp(0.5j * lam * model.L)
    else:
        x = lam[..., None] - np.asarray(model.xi)
        if model.kind == "xxx":
            hc = 0.5j * model.c
            a = np.prod(x - hc, axis=-1)
            d = np.prod(x + hc, axis=-1)
        else:
            hg = 0.5j * model.gamma
            pref = 1j ** model.M
            a = pref * np.prod(np.cosh(x - hg), axis=-1)
            d = pref * np.prod(np.cosh(x + hg), axis=-1)
    return _squeeze(a), _squeeze(d)


def ratio_r(model: ModelSpec, lam):
    """``r = a / d``; convention factors cancel."""
    lam = np.asarray(lam, dtype=complex)
    if model.kind == "qnls":
        return _squeeze(np.exp(-1j * lam * model.L))
    x = lam[..., None] - np.asarray(model.xi)
    if model.kind == "xxx":
        hc = 0.5j * model.c
        num, den = x - hc, x + hc
    else:
        hg = 0.5j * model.gamma
        num, den = np.cosh(x - hg), np.cosh(x + hg)
    if np.any(np.abs(den) <= 1e-14 * np.maximum(1.0, np.abs(x))):
        raise PoleError("d(lambda) vanishes; r is undefined")
    return _squeeze(np.prod(num / den, axis=-1))


def reconstruction_points(model: ModelSpec) -> np.ndarray:
    """Zeros of ``d``, one per site, where the L-operator degenerates to a permutation.

    At these points the transfer matrix and B reconstruct local spin operators.
    """
    if not model.is_chain:
        raise ValueError("reconstruction points exist only for spin chains")
    xi = np.asarray(model.xi)
    if model.kind == "xxx":
        return xi - 0.5j * model.c
    return xi + 0.5j * (np.pi - model.gamma)
