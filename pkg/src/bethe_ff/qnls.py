"""Form factors of the QNLS field and of the particle number in an interval.

Two families of representations are provided: determinants built from the
Slavnov matrix, and the ``Sigma^alpha`` functions written through elementary
symmetric polynomials (a big ``Omega`` determinant, or a reduced N x N one).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels as K
from .errors import CoincidenceError
from .linalg import elementary_symmetric_all, log_det, poly_coeffs, vandermonde
from .models import FormFactorResult, ModelSpec, as_array, coincidence_tol
from .scalar import ONSHELL_TOL, require_distinct, require_onshell

FD_STEP = 1e-5


def _require_qnls(model: ModelSpec):
    if model.kind != "qnls":
        raise ValueError("QNLS model required")


def _esp(xs, j: int) -> complex:
    e = elementary_symmetric_all(xs)
    return complex(e[j]) if 0 <= j < len(e) else 0j


# --- field form factor, Slavnov-type representation -------------------------


def psi_action_coeffs(model: ModelSpec, lambdas):
    """Coefficients of ``Psi(0,0) prod B(l)|0>`` on the states with ``l_ell`` removed."""
    _require_qnls(model)
    lam = as_array(lambdas)
    out = []
    for ell in range(len(lam)):
        a, _ = K.vacuum_eigen(model, lam[ell])
        others = np.delete(lam, ell)
        coef = -1j * math.sqrt(model.c) * a * np.prod(K.f(model, lam[ell], others))
        out.append((complex(coef), ell))
    return out


def psi_s_rows(model: ModelSpec, mu: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """The ``(N+1) x N`` matrix whose row ``j`` is ``S_{jk}`` evaluated at ``l_j``."""
    n = len(mu)
    rows = np.empty((len(lam), n), dtype=complex)
    for j, lj in enumerate(lam):
        left = np.prod(K.h(model, mu, lj)) / np.prod(K.h(model, lam, lj))
        right = np.prod(K.h(model, lj, mu)) / np.prod(K.h(model, lj, lam))
        rows[j] = K.t(model, mu, lj) * left - K.t(model, lj, mu) * right if n else rows[j]
    return rows


def psi_alternating_sum(rows: np.ndarray) -> complex:
    """``sum_ell (-1)^(N+1-ell) det S^(ell)``, ``S^(ell)`` being the rows other than ``ell`` (1-based).

    Brute-force cofactor expansion of ``det(S_jk - S_{N+1,k})``.
    """
    n = rows.shape[1]
    total = 0j
    for ell in range(rows.shape[0]):
        total += (-1) ** (n - ell) * log_det(np.delete(rows, ell, axis=0)).value
    return total


def psi_rank_one_det(rows: np.ndarray):
    """``det(S_jk - S_{N+1,k})``."""
    return log_det(rows[:-1] - rows[-1][None, :])


def _psi_prefactor(model: ModelSpec, mu: np.ndarray, lam: np.ndarray) -> complex:
    pre = -1j * math.sqrt(model.c)
    for a in range(len(mu)):
        for b in range(a):
            pre *= K.g(model, mu[a], mu[b])
    for a in range(len(lam)):
        for b in range(a):
            pre *= K.g(model, lam[b], lam[a])
    pre *= np.prod(K.h(model, lam[:, None], lam[None, :]))
    pre *= np.prod(K.vacuum_eigen(model, mu)[1]) * np.prod(K.vacuum_eigen(model, lam)[1])
    return complex(pre)


def _psi_inputs(model, mus, lambdas, onshell_tol):
    _require_qnls(model)
    mu = require_onshell(model, mus, onshell_tol, "mu")
    lam = require_onshell(model, lambdas, onshell_tol, "lambda")
    if len(lam) != len(mu) + 1:
        raise ValueError("the field form factor needs N mu's and N+1 lambda's")
    require_distinct(mu, lam)
    return mu, lam


def ff_psi_zero(model: ModelSpec, mus, lambdas, onshell_tol: float = ONSHELL_TOL) -> FormFactorResult:
    """``<mu| Psi(0,0) |lambda>`` as a single N x N determinant."""
    mu, lam = _psi_inputs(model, mus, lambdas, onshell_tol)
    rows = psi_s_rows(model, mu, lam)
    d = psi_rank_one_det(rows)
    return FormFactorResult(_psi_prefactor(model, mu, lam) * d.value, "slavnov-det", d.condition)


def psi_phase(x: float, t: float, mus, lambdas) -> complex:
    mu, lam = as_array(mus), as_array(lambdas)
    expo = np.sum(1j * t * mu**2 - 1j * x * mu) - np.sum(1j * t * lam**2 - 1j * x * lam)
    return complex(np.exp(expo))


def ff_psi_xt(x: float, t: float, model: ModelSpec, mus, lambdas, onshell_tol: float = ONSHELL_TOL):
    base = ff_psi_zero(model, mus, lambdas, onshell_tol)
    if x == 0 and t == 0:
        return base
    base.value = base.value * psi_phase(x, t, mus, lambdas)
    return base


# --- Sigma^alpha functions ---------------------------------------------------


@dataclass(frozen=True)
class SigmaConfig:
    alpha: complex
    mus: tuple
    lambdas: tuple
    c: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "mus", tuple(complex(z) for z in as_array(self.mus)))
        object.__setattr__(self, "lambdas", tuple(complex(z) for z in as_array(self.lambdas)))
        object.__setattr__(self, "alpha", complex(self.alpha))
        if not self.c > 0:
            raise ValueError("c must be positive")
        require_distinct(self.mu, self.lam)

    @property
    def mu(self) -> np.ndarray:
        return np.array(self.mus, dtype=complex)

    @property
    def lam(self) -> np.ndarray:
        return np.array(self.lambdas, dtype=complex)

    @property
    def model(self) -> ModelSpec:
        return ModelSpec.qnls(L=1.0, c=self.c)


def omega_matrix(cfg: SigmaConfig, e_alpha: complex | None = None) -> np.ndarray:
    """``Omega_{jk}``: row ``j`` holds ``sigma_j`` of shifted argument sets, ``j = 0..n-1``."""
    mu, lam, hc = cfg.mu, cfg.lam, 0.5j * cfg.c
    ea = cmath.exp(cfg.alpha) if e_alpha is None else e_alpha
    nm, nl = len(mu), len(lam)
    n = nm + nl
    out = np.zeros((n, n), dtype=complex)
    for k in range(nm):
        mk = np.delete(mu, k)
        e1 = elementary_symmetric_all(np.concatenate([mk - hc, lam + hc]))
        e2 = elementary_symmetric_all(np.concatenate([mk + hc, lam - hc]))
        out[:, k] = e1[:n] - ea * e2[:n]
    for k in range(nl):
        lk = np.delete(lam, k)
        e1 = elementary_symmetric_all(np.concatenate([mu + hc, lk - hc]))
        e2 = elementary_symmetric_all(np.concatenate([mu - hc, lk + hc]))
        out[:, nm + k] = e1[:n] - e2[:n]
    return out


def sigma_denominator(mu: np.ndarray, lam: np.ndarray) -> complex:
    """``Delta(mu) Delta(lam) prod_{a,b} (l_b - mu_a)``."""
    return vandermonde(mu) * vandermonde(lam) * complex(np.prod(lam[None, :] - mu[:, None]))


def sigma_alpha_omega(cfg: SigmaConfig) -> complex:
    """``Sigma^alpha`` as ``det Omega`` over Vandermonde and cross products."""
    den = sigma_denominator(cfg.mu, cfg.lam)
    if abs(den) == 0:
        raise CoincidenceError("vanishing Sigma denominator")
    return log_det(omega_matrix(cfg)).value / den


def reduced_V(model: ModelSpec, mu: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """``V_j = prod_m h(mu_m,l_j) h(l_j,l_m) / (h(l_j,mu_m) h(l_m,l_j))``."""
    return np.array(
        [
            np.prod(K.h(model, mu, lj) * K.h(model, lj, lam) / (K.h(model, lj, mu) * K.h(model, lam, lj)))
            for lj in lam
        ],
        dtype=complex,
    )


def reduced_parts(cfg: SigmaConfig):
    """Prefactor and the two alpha-free pieces ``A, B`` with matrix ``e^alpha A + B``."""
    model, mu, lam = cfg.model, cfg.mu, cfg.lam
    if len(mu) != len(lam):
        raise ValueError("the reduced representation needs equal set sizes")
    n = len(mu)
    V = reduced_V(model, mu, lam)
    A = np.array([V[j] * K.t(model, mu, lam[j]) for j in range(n)], dtype=complex).reshape(n, n)
    B = np.array([K.t(model, lam[j], mu) for j in range(n)], dtype=complex).reshape(n, n)
    pre = complex(np.prod(K.h(model, lam[:, None], mu[None, :])))
    for a in range(n):
        for b in range(a):
            pre *= K.g(model, lam[a], lam[b]) * K.g(model, mu[b], mu[a])
    return pre, A, B


def reduced_matrix(cfg: SigmaConfig) -> np.ndarray:
    _, A, B = reduced_parts(cfg)
    return cmath.exp(cfg.alpha) * A + B


def sigma_alpha_reduced(cfg: SigmaConfig) -> complex:
    pre, A, B = reduced_parts(cfg)
    return pre * log_det(cmath.exp(cfg.alpha) * A + B).value


def dsigma_dalpha(cfg: SigmaConfig) -> complex:
    """Exact alpha-derivative: each row of the reduced matrix carries one factor ``e^alpha``."""
    pre, A, B = reduced_parts(cfg)
    ea = cmath.exp(cfg.alpha)
    base = ea * A + B
    total = 0j
    for j in range(base.shape[0]):
        m = base.copy()
        m[j] = ea * A[j]
        total += log_det(m).value
    return pre * total


def dsigma_dalpha_fd(cfg: SigmaConfig, step: float = FD_STEP) -> complex:
    """Central difference of the Omega representation in alpha."""
    up = SigmaConfig(cfg.alpha + step, cfg.mus, cfg.lambdas, cfg.c)
    dn = SigmaConfig(cfg.alpha - step, cfg.mus, cfg.lambdas, cfg.c)
    return (sigma_alpha_omega(up) - sigma_alpha_omega(dn)) / (2 * step)


# --- field form factor through Sigma ----------------------------------------


def _omega_pieces(mu: np.ndarray, lam: np.ndarray, c: float):
    """Columns of Omega for the sets ``{mu, Lambda}`` and ``{lam}`` expanded in ``s = 1/Lambda`` and ``e^alpha``.

    Each column is ``C0 + s Cs + e^alpha (Ca + s Csa)`` up to an overall
    ``Lambda`` per column (only the orders needed below are kept).
    """
    n_mu = len(mu)
    deg = 2 * n_mu + 1
    hc = 0.5j * c
    A = np.concatenate([mu - hc, lam + hc])
    B = np.concatenate([mu + hc, lam - hc])
    c0, cs, ca, csa = [], [], [], []
    z = np.zeros(deg + 1, dtype=complex)
    for k in range(n_mu):
        Ak, Bk = np.delete(A, k), np.delete(B, k)
        c0.append(poly_coeffs(Ak, deg))
        cs.append(poly_coeffs(np.append(Ak, -hc), deg))
        ca.append(-poly_coeffs(Bk, deg))
        csa.append(-poly_coeffs(np.append(Bk, hc), deg))
    c0.append(poly_coeffs(A, deg))
    cs.append(z)
    ca.append(-poly_coeffs(B, deg))
    csa.append(z)
    for k in range(len(lam)):
        Ak, Bk = np.delete(A, n_mu + k), np.delete(B, n_mu + k)
        c0.append(poly_coeffs(Bk, deg) - poly_coeffs(Ak, deg))
        cs.append(poly_coeffs(np.append(Bk, hc), deg) - poly_coeffs(np.append(Ak, -hc), deg))
        ca.append(z)
        csa.append(z)
    return tuple(np.array(x).T for x in (c0, cs, ca, csa))


def sigma_psi_limit(mus, lambdas, c: float = 1.0) -> complex:
    """``(1/ic) lim_{Lambda->inf} Lambda d/dalpha Sigma^alpha({mu, Lambda}, {lam})`` at ``alpha = 0``.

    Evaluated exactly as a mixed derivative in ``(s, alpha)`` with ``s = 1/Lambda``,
    using multilinearity of the determinant in its columns.
    """
    mu, lam = as_array(mus), as_array(lambdas)
    if len(lam) != len(mu) + 1:
        raise ValueError("needs N mu's and N+1 lambda's")
    require_distinct(mu, lam)
    C0, Cs, Ca, Csa = _omega_pieces(mu, lam, c)
    base = C0 + Ca
    m = base.shape[1]
    total = 0j
    for i in range(m):
        for k in range(m):
            X = base.copy()
            if i == k:
                if not np.any(Csa[:, i]):
                    continue
                X[:, i] = Csa[:, i]
            else:
                if not np.any(Ca[:, k]):
                    continue
                X[:, i] = Cs[:, i] + Csa[:, i]
                X[:, k] = Ca[:, k]
            total += log_det(X).value
    den = sigma_denominator(mu, lam)
    return (-1) ** (len(mu) + 1) / (1j * c) * total / den


def ff_psi_via_sigma(model: ModelSpec, mus, lambdas, onshell_tol: float = ONSHELL_TOL) -> FormFactorResult:
    """Field form factor through the Omega determinant of the Sigma functions."""
    mu, lam = _psi_inputs(model, mus, lambdas, onshell_tol)
    pref = -1j * math.sqrt(model.c) * np.prod(K.vacuum_eigen(model, mu)[1]) * np.prod(K.vacuum_eigen(model, lam)[1])
    return FormFactorResult(complex(pref) * sigma_psi_limit(mu, lam, model.c), "sigma-omega", 1.0)


def sigma_zero_literal(mus, lambdas, c: float = 1.0) -> complex:
    """``Sigma^0({mu}_N, {lam}_{N+1})`` straight from the Omega determinant (vanishes identically)."""
    return sigma_alpha_omega(SigmaConfig(0.0, mus, lambdas, c))


# --- particle number in an interval -----------------------------------------


def _same_set(a: np.ndarray, b: np.ndarray) -> bool:
    if len(a) != len(b):
        return False
    used = set()
    for x in a:
        hit = [k for k, y in enumerate(b) if k not in used and abs(x - y) <= coincidence_tol(x, y)]
        if not hit:
            return False
        used.add(hit[0])
    return True


def ff_q1(x: float, model: ModelSpec, mus, lambdas, onshell_tol: float = ONSHELL_TOL) -> FormFactorResult:
    """Form factor of the number of particles in ``[0, x]``.

    The alpha-derivative comes from the reduced determinant; a central
    difference of the Omega representation is kept in the diagnostics.
    """
    _require_qnls(model)
    mu = require_onshell(model, mus, onshell_tol, "mu")
    lam = require_onshell(model, lambdas, onshell_tol, "lambda")
    if len(mu) != len(lam):
        raise ValueError("F_Q1 needs sets of equal size")
    if _same_set(mu, lam):
        return FormFactorResult(0.0, "sigma-reduced", 1.0, "diagonal matrix element: bracket vanishes")
    bracket = cmath.exp(1j * x * complex(np.sum(lam - mu))) - 1.0
    cfg = SigmaConfig(0.0, mu, lam, model.c)
    analytic = dsigma_dalpha(cfg)
    fd = dsigma_dalpha_fd(cfg)
    gap = abs(analytic - fd) / max(abs(analytic), 1e-300)
    pref = np.prod(K.vacuum_eigen(model, mu)[1]) * np.prod(K.vacuum_eigen(model, lam)[1])
    value = complex(pref) * bracket * analytic
    return FormFactorResult(
        value,
        "sigma-reduced",
        1.0,
        "",
        {"dsigma_analytic": complex(analytic), "dsigma_fd": complex(fd), "route_gap": gap},
    )


# --- step-by-step check of the Omega -> reduced reduction -------------------


@dataclass
class TraceReport:
    steps: list = field(default_factory=list)

    def add(self, name: str, lhs, rhs):
        lhs = np.asarray(lhs, dtype=complex)
        rhs = np.asarray(rhs, dtype=complex)
        scale = max(float(np.max(np.abs(rhs), initial=0.0)), 1e-300)
        self.steps.append((name, float(np.max(np.abs(lhs - rhs), initial=0.0)) / scale))

    @property
    def max_discrepancy(self) -> float:
        return max(d for _, d in self.steps)

    def as_dict(self) -> dict:
        return dict(self.steps)


def _poly_eval_cols(cfg: SigmaConfig, z: np.ndarray) -> np.ndarray:
    """Columns of ``U Omega`` evaluated directly as products ``prod(z + x)``."""
    mu, lam, hc = cfg.mu, cfg.lam, 0.5j * cfg.c
    ea = cmath.exp(cfg.alpha)
    n = len(mu)
    out = np.zeros((len(z), 2 * n), dtype=complex)
    for i, p in enumerate(z):
        for k in range(n):
            mk = np.delete(mu, k)
            out[i, k] = np.prod(p + mk - hc) * np.prod(p + lam + hc) - ea * np.prod(p + mk + hc) * np.prod(p + lam - hc)
            lk = np.delete(lam, k)
            out[i, n + k] = np.prod(p + mu + hc) * np.prod(p + lk - hc) - np.prod(p + mu - hc) * np.prod(p + lk + hc)
    return out


def theorem1_trace(cfg: SigmaConfig, perturb: tuple | None = None) -> TraceReport:
    """Check each identity of the reduction ``Omega -> reduced matrix`` numerically.

    ``perturb = (j, k, eps)`` adds ``eps`` to ``Omega[j, k]`` as a negative control.
    """
    mu, lam, c = cfg.mu, cfg.lam, cfg.c
    n = len(mu)
    if len(lam) != n or n == 0:
        raise ValueError("the trace needs equal non-empty sets")
    ic = 1j * c
    ea = cmath.exp(cfg.alpha)
    p = -lam - 0.5 * ic
    q = -lam + 0.5 * ic
    z = np.concatenate([p, q])
    require_distinct(z, mu)
    rep = TraceReport()

    omega = omega_matrix(cfg)
    if perturb is not None:
        j, k, eps = perturb
        omega[j, k] += eps
    U = z[:, None] ** np.arange(2 * n - 1, -1, -1)[None, :]
    UO = U @ omega
    direct = _poly_eval_cols(cfg, z)
    rep.add("block_closed_forms", UO, direct)

    rep.add("det_U", log_det(U).value, vandermonde(p) * vandermonde(q) * np.prod(p[:, None] - q[None, :]))

    PM, PL, QM, QL = UO[:n, :n], UO[:n, n:], UO[n:, :n], UO[n:, n:]
    lab = lam[:, None] - lam[None, :]  # lab[a, b] = l_a - l_b
    u = np.array([np.prod((lab[:, j] + ic) / (lab[:, j] - ic)) for j in range(n)]) / ea
    rep.add("observe", QM, -u[:, None] * PM)

    det_uo = log_det(UO).value
    rep.add("block_determinant", det_uo, log_det(PM).value * log_det(QL + u[:, None] * PL).value)

    W = complex(np.prod((mu[:, None] - lam[None, :]) * (lab - ic) * (lab + ic)))
    W *= vandermonde(mu) * vandermonde(-lam)
    G = np.empty((n, n), dtype=complex)
    for j in range(n):
        for k in range(n):
            G[j, k] = ea / (lab[j, k] - ic) - 1.0 / (lab[j, k] + ic)
        others = np.prod(np.delete(lab[:, j], j))
        G[j, j] += others / np.prod(mu - lam[j]) * (
            ea * np.prod((mu - lam[j] + ic) / (lab[:, j] + ic)) - np.prod((mu - lam[j] - ic) / (lab[:, j] - ic))
        )
    det_G = log_det(G).value
    rep.add("W_detG", det_uo, (-1) ** n * W * det_G)

    Gam = np.array(
        [
            [np.prod(lam[j] - mu) / ((lam[j] - mu[k]) * np.prod(np.delete(lam[j] - lam, j))) for k in range(n)]
            for j in range(n)
        ]
    )
    det_gam = vandermonde(mu) / vandermonde(lam)
    rep.add("det_Gamma", log_det(Gam).value, det_gam)

    R = reduced_matrix(cfg)
    rho = np.array([np.prod((lam[j] - mu + ic) / (lam[j] - lam + ic)) for j in range(n)]) / ic
    rep.add("G_Gamma_rows", G @ Gam, rho[:, None] * R)

    pre, _, _ = reduced_parts(cfg)
    det_u_closed = vandermonde(p) * vandermonde(q) * np.prod(p[:, None] - q[None, :])
    chain = (-1) ** n * W * np.prod(rho) * log_det(R).value / det_gam
    chain /= det_u_closed * sigma_denominator(mu, lam)
    rep.add("final", chain, sigma_alpha_reduced(cfg))
    return rep
