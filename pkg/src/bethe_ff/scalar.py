"""Determinant representation of scalar products and the orthogonality machinery."""
from __future__ import annotations

import numpy as np

from . import kernels as K
from .bethe import bethe_residual
from .errors import CoincidenceError, OffShellError
from .linalg import hadamard_bound, log_det
from .models import FormFactorResult, ModelSpec, as_array, coincidence_tol

ONSHELL_TOL = 1e-10
_UNIT_RATIONAL = ModelSpec.qnls(L=1.0, c=1.0)


def require_onshell(model: ModelSpec, state, tol: float = ONSHELL_TOL, name: str = "mu") -> np.ndarray:
    """Return the rapidities of ``state`` after checking the Bethe residual."""
    x = as_array(state)
    if len(x):
        res = float(np.max(bethe_residual(model, x)))
        if res > tol:
            raise OffShellError(f"{name} set is off-shell (residual {res:.3e} > {tol:.1e})")
    return x


def require_distinct(*sets) -> None:
    allv = np.concatenate([as_array(s) for s in sets]) if sets else np.zeros(0)
    for a in range(len(allv)):
        for b in range(a):
            if abs(allv[a] - allv[b]) <= coincidence_tol(allv[a], allv[b]):
                raise CoincidenceError("rapidities must be pairwise distinct across all sets")


def _slavnov_terms(model: ModelSpec, mu: np.ndarray, lam: np.ndarray):
    n = len(mu)
    first = np.empty((n, n), dtype=complex)
    second = np.empty((n, n), dtype=complex)
    for j in range(n):
        ratio = K.ratio_r(model, lam[j]) * np.prod(K.f(model, lam[j], mu) / K.f(model, mu, lam[j]))
        first[j] = K.t(model, mu, lam[j])
        second[j] = ratio * K.t(model, lam[j], mu)
    return first, second


def slavnov_matrix(model: ModelSpec, mus, lambdas, onshell_tol: float = ONSHELL_TOL) -> np.ndarray:
    """``M_jk = t(mu_k,l_j) - r(l_j) t(l_j,mu_k) prod_m f(l_j,mu_m)/f(mu_m,l_j)``."""
    mu = require_onshell(model, mus, onshell_tol)
    lam = as_array(lambdas)
    if len(mu) != len(lam):
        raise ValueError("scalar products need sets of equal size")
    first, second = _slavnov_terms(model, mu, lam)
    return first - second


def scalar_prefactor(model: ModelSpec, mu: np.ndarray, lam: np.ndarray) -> complex:
    n = len(mu)
    _, dmu = K.vacuum_eigen(model, mu)
    _, dla = K.vacuum_eigen(model, lam)
    pre = np.prod(dmu) * np.prod(dla) * np.prod(K.h(model, mu[:, None], lam[None, :]))
    for a in range(n):
        for b in range(a):
            pre *= K.g(model, lam[a], lam[b]) * K.g(model, mu[b], mu[a])
    return complex(pre)


def scalar_product(model: ModelSpec, mus, lambdas, onshell_tol: float = ONSHELL_TOL) -> FormFactorResult:
    """``<0| prod C(mu) prod B(l) |0>`` for on-shell ``mu`` and arbitrary ``l``.

    ``diagnostics['scale']`` is the prefactor modulus times the Hadamard bound
    of the entrywise term magnitudes ``|t(mu_k,l_j)| + |second term|``; it is
    the yardstick for orthogonality, where the determinant cancels to zero.
    """
    mu = as_array(mus)
    lam = as_array(lambdas)
    if len(mu) == 0 and len(lam) == 0:
        return FormFactorResult(1.0, "slavnov-det", 1.0, "empty sets", {"scale": 1.0})
    m = slavnov_matrix(model, mus, lam, onshell_tol)
    pre = scalar_prefactor(model, mu, lam)
    d = log_det(m)
    first, second = _slavnov_terms(model, mu, lam)
    scale = abs(pre) * hadamard_bound(np.abs(first) + np.abs(second))
    return FormFactorResult(pre * d.value, "slavnov-det", d.condition, "", {"scale": scale})


def orthogonality_V(model: ModelSpec, mu: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """``V_j = prod_m h(l_j,mu_m) h(l_m,l_j) / (h(mu_m,l_j) h(l_j,l_m))``."""
    n = len(lam)
    V = np.empty(n, dtype=complex)
    for j in range(n):
        V[j] = np.prod(
            K.h(model, lam[j], mu) * K.h(model, lam, lam[j]) / (K.h(model, mu, lam[j]) * K.h(model, lam[j], lam))
        )
    return V


def orthogonality_matrix(model: ModelSpec, mus, lambdas) -> np.ndarray:
    """``M~_jk = t(mu_k,l_j) + V_j t(l_j,mu_k)`` for arbitrary parameters."""
    mu, lam = as_array(mus), as_array(lambdas)
    require_distinct(mu, lam)
    if len(mu) != len(lam):
        raise ValueError("sets must have equal size")
    V = orthogonality_V(model, mu, lam)
    return np.array([K.t(model, mu, lam[j]) + V[j] * K.t(model, lam[j], mu) for j in range(len(lam))]).reshape(
        len(lam), len(mu)
    )


def zero_eigenvector(mus, lambdas, model: ModelSpec = _UNIT_RATIONAL) -> np.ndarray:
    """``xi_k = prod_{m!=k} g(mu_k,mu_m) / prod_m g(mu_k,l_m)``, a null vector of ``M~``."""
    mu, lam = as_array(mus), as_array(lambdas)
    require_distinct(mu, lam)
    out = np.empty(len(mu), dtype=complex)
    for k in range(len(mu)):
        others = np.delete(mu, k)
        out[k] = np.prod(K.g(model, mu[k], others)) / np.prod(K.g(model, mu[k], lam))
    return out


def zero_eigenvector_residual(model: ModelSpec, mus, lambdas) -> float:
    """``|M~ xi| / (|S| |xi|)`` in 2-norms, ``S_jk = |t(mu_k,l_j)| + |V_j t(l_j,mu_k)|``.

    The term-magnitude matrix ``S`` is used as the scale because ``M~`` itself
    can vanish identically (``N = 1``).
    """
    mu, lam = as_array(mus), as_array(lambdas)
    m = orthogonality_matrix(model, mu, lam)
    V = orthogonality_V(model, mu, lam)
    n = len(mu)
    S = np.array([np.abs(K.t(model, mu, lam[j])) + np.abs(V[j] * K.t(model, lam[j], mu)) for j in range(n)]).reshape(n, n)
    v = zero_eigenvector(mu, lam, model)
    return float(np.linalg.norm(m @ v) / (np.linalg.norm(S, 2) * np.linalg.norm(v)))


def appendix_g_sums(mus, lambdas, j: int, sign: int, c: float = 1.0):
    """Partial-fraction sum and its residue closed form.

    Returns ``(sum_form, closed_form)`` where ``sum_form`` is
    ``sum_k [(mu_k-l_j)(mu_k-l_j+s ic)]^{-1} prod_m(mu_k-l_m) / prod_{m!=k}(mu_k-mu_m)``
    and ``closed_form = (s/ic) prod_m (l_m-l_j+s ic)/(mu_m-l_j+s ic)``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    mu, lam = as_array(mus), as_array(lambdas)
    require_distinct(mu, lam)
    sic = sign * 1j * c
    for m_ in mu:
        if abs(m_ - lam[j] + sic) <= coincidence_tol(m_, lam[j]):
            raise CoincidenceError("mu_m coincides with l_j -+ ic")
    total = 0j
    for k in range(len(mu)):
        term = np.prod(mu[k] - lam) / np.prod(mu[k] - np.delete(mu, k))
        total += term / ((mu[k] - lam[j]) * (mu[k] - lam[j] + sic))
    closed = (sign / (1j * c)) * np.prod((lam - lam[j] + sic) / (mu - lam[j] + sic))
    return complex(total), complex(closed)
