"""Form factor of sigma_- in the inhomogeneous XXX/XXZ chain as a determinant ratio."""
from __future__ import annotations

import numpy as np

from . import kernels as K
from .bethe import theta_derivative_matrix
from .errors import SiteRangeError
from .linalg import log_det, vandermonde
from .models import FormFactorResult, ModelSpec, as_array
from .scalar import ONSHELL_TOL, require_distinct, require_onshell


def _phi(model: ModelSpec, x):
    return x if model.rational else np.sinh(x)


def cauchy_matrix(model: ModelSpec, mus, nus) -> np.ndarray:
    """``K_jk = 1 / phi(mu_j - nu_k)`` with ``phi = id`` (XXX) or ``sinh`` (XXZ)."""
    mu, nu = as_array(mus), as_array(nus)
    if len(mu) != len(nu):
        raise ValueError("Cauchy matrix needs sets of equal size")
    require_distinct(mu, nu) if len(set(mu) & set(nu)) else None
    diff = _phi(model, mu[:, None] - nu[None, :])
    K._check_pole(diff, mu[:, None], nu[None, :], "Cauchy")
    return 1.0 / diff


def cauchy_determinant(model: ModelSpec, mus, nus) -> complex:
    """Closed form ``prod_{a>b} phi(mu_a-mu_b) phi(nu_b-nu_a) / prod_{a,b} phi(mu_a-nu_b)``."""
    mu, nu = as_array(mus), as_array(nus)
    num = 1.0 + 0j
    for a in range(len(mu)):
        for b in range(a):
            num *= _phi(model, mu[a] - mu[b]) * _phi(model, nu[b] - nu[a])
    return complex(num / np.prod(_phi(model, mu[:, None] - nu[None, :])))


def ff_sigma_minus(
    model: ModelSpec, mus, lambdas, m: int, onshell_tol: float = ONSHELL_TOL
) -> FormFactorResult:
    """``<0| prod C(mu) sigma_-^(m) prod B(l) |0>`` for on-shell sets of sizes N+1 and N.

    With ``theta_b`` the zeros of ``d`` and ``nu = (theta_m, l_1..l_N)``::

        F = [prod_{b<m} prod_a f(theta_b, mu_a) / prod_{b<=m} prod_a f(theta_b, l_a)]
            * (-1)^(N+1) prod_a d(mu_a) / a(theta_m) * det T / det K

    where ``T_jk = d theta(nu_j|{mu}) / d mu_k`` and ``K`` is the Cauchy matrix of ``mu`` and ``nu``.
    """
    if not model.is_chain:
        raise ValueError("sigma_- form factors need a spin chain")
    if not 1 <= m <= model.M:
        raise SiteRangeError(f"site {m} outside 1..{model.M}")
    mu = require_onshell(model, mus, onshell_tol, "mu")
    lam = require_onshell(model, lambdas, onshell_tol, "lambda")
    if len(mu) != len(lam) + 1:
        raise ValueError("needs N+1 mu's and N lambda's")
    th = K.reconstruction_points(model)
    nu = np.concatenate([[th[m - 1]], lam])
    require_distinct(mu, nu)
    T = theta_derivative_matrix(model, nu, mu)
    Kc = cauchy_matrix(model, mu, nu)
    dT, dK = log_det(T), log_det(Kc)
    n = len(lam)
    pre = 1.0 + 0j
    for b in range(m - 1):
        pre *= np.prod(K.f(model, th[b], mu))
    for b in range(m):
        pre /= np.prod(K.f(model, th[b], lam)) if n else 1.0
    a_th, _ = K.vacuum_eigen(model, th[m - 1])
    pre *= (-1) ** (n + 1) * np.prod(K.vacuum_eigen(model, mu)[1]) / a_th
    value = pre * dT.phase / dK.phase * np.exp(dT.log_magnitude - dK.log_magnitude)
    return FormFactorResult(complex(value), "spin-det-ratio", max(dT.condition, dK.condition))
