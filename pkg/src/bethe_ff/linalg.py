"""Determinants in log form and elementary symmetric polynomials."""
from __future__ import annotations

import math
import warnings
from typing import NamedTuple, Sequence

import numpy as np
import scipy.linalg


class DetResult(NamedTuple):
    log_magnitude: float
    phase: complex
    value: complex
    condition: float


def log_det(m) -> DetResult:
    """Determinant of a square complex matrix via pivoted LU.

    The condition estimate is the ratio of extreme pivot magnitudes. A
    singular matrix gives ``log_magnitude = -inf`` and value 0. When the
    magnitude overflows a double, ``value`` is ``inf`` times the phase.
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"log_det needs a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        return DetResult(0.0, 1.0 + 0j, 1.0 + 0j, 1.0)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    diag = np.diag(lu)
    mags = np.abs(diag)
    if np.any(mags == 0.0):
        return DetResult(-math.inf, 1.0 + 0j, 0j, math.inf)
    swaps = int(np.count_nonzero(piv != np.arange(n)))
    phase = complex(np.prod(diag / mags)) * (-1) ** swaps
    phase /= abs(phase)
    logmag = float(np.sum(np.log(mags)))
    value = phase * math.exp(logmag) if logmag < 709.0 else phase * math.inf
    return DetResult(logmag, phase, value, float(mags.max() / mags.min()))


def det(m) -> complex:
    return log_det(m).value


def elementary_symmetric_all(xs: Sequence[complex]) -> np.ndarray:
    """All ``sigma_k`` for ``k = 0..n``: coefficients of ``prod(x + x_m)`` in falling powers."""
    e = np.zeros(len(xs) + 1, dtype=complex)
    e[0] = 1.0
    for x in xs:
        e[1:] = e[1:] + x * e[:-1]
    return e


def elementary_symmetric(xs: Sequence[complex], k: int) -> complex:
    n = len(xs)
    if not 0 <= k <= n:
        raise IndexError(f"k={k} outside 0..{n}")
    return complex(elementary_symmetric_all(xs)[k])


def poly_coeffs(roots: Sequence[complex], n: int) -> np.ndarray:
    """Coefficients of ``prod(p + r)`` as a length ``n+1`` vector, entry ``j`` at ``p**(n-j)``."""
    e = elementary_symmetric_all(np.asarray(roots, dtype=complex))
    if len(e) > n + 1:
        raise ValueError("polynomial degree exceeds the coefficient space")
    out = np.zeros(n + 1, dtype=complex)
    out[n + 1 - len(e):] = e
    return out


def vandermonde(x: Sequence[complex]) -> complex:
    """``prod_{a>b} (x_a - x_b)``."""
    x = np.asarray(x, dtype=complex)
    out = 1.0 + 0j
    for a in range(len(x)):
        for b in range(a):
            out *= x[a] - x[b]
    return out


def hadamard_bound(m) -> float:
    """Product of row norms; an upper bound for ``|det m|``."""
    a = np.asarray(m, dtype=complex)
    return float(np.prod(np.linalg.norm(a, axis=1))) if a.size else 1.0
