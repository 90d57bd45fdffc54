"""Exact construction of spin-chain monodromy operators on the full 2^M space.

Basis: site ``m`` (1-based) is tensor factor ``m-1``; spin up is index 0, so
the all-up pseudovacuum is basis vector 0. ``T(l) = L_M ... L_1``.
"""
from __future__ import annotations

import cmath
import math
from functools import reduce

import numpy as np

from . import kernels as K
from .bethe import transfer_eigenvalue
from .errors import ConventionError, ResourceError, SiteRangeError
from .models import ModelSpec, as_array

MAX_SITES = 12
MAX_APPLY_SITES = 16

SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _require_chain(model: ModelSpec, limit: int = MAX_SITES):
    if not model.is_chain:
        raise ValueError("the oracle handles spin chains only")
    if model.M > limit:
        raise ResourceError(f"M={model.M} exceeds the dense guard of {limit} sites")


def local_blocks(model: ModelSpec, m: int, lam: complex, flip_c: bool = False):
    """2x2 site-local blocks ``[[A, B], [C, D]]`` of ``L_m(lam)`` (each a 2x2 matrix)."""
    x = lam - model.xi[m - 1]
    if model.kind == "xxx":
        hc = 0.5j * model.c
        A = np.diag([x - hc, x + hc])
        D = np.diag([x + hc, x - hc])
        B = -1j * model.c * SIGMA_MINUS
        C = -1j * model.c * SIGMA_PLUS
    else:
        hg = 0.5j * model.gamma
        s = math.sin(model.gamma)
        A = 1j * np.diag([cmath.cosh(x - hg), cmath.cosh(x + hg)])
        D = 1j * np.diag([cmath.cosh(x + hg), cmath.cosh(x - hg)])
        B = 1j * s * SIGMA_MINUS
        C = 1j * s * SIGMA_PLUS
    if flip_c:
        C = -C
    return [[A.astype(complex), B.astype(complex)], [C.astype(complex), D.astype(complex)]]


def embed(op: np.ndarray, m: int, M: int) -> np.ndarray:
    """Site-local 2x2 operator acting on site ``m`` of ``M``."""
    if not 1 <= m <= M:
        raise SiteRangeError(f"site {m} outside 1..{M}")
    return reduce(np.kron, [op if k == m - 1 else np.eye(2) for k in range(M)])


def l_operator(model: ModelSpec, m: int, lam: complex, flip_c: bool = False):
    _require_chain(model)
    blocks = local_blocks(model, m, lam, flip_c)
    return [[embed(blocks[a][b], m, model.M) for b in range(2)] for a in range(2)]


def build_monodromy(model: ModelSpec, lam: complex, flip_c: bool = False):
    """Dense ``(A, B, C, D)`` of ``T(lam) = L_M ... L_1``."""
    _require_chain(model)
    T = None
    for m in range(1, model.M + 1):
        L = l_operator(model, m, lam, flip_c)
        if T is None:
            T = L
        else:
            T = [[L[a][0] @ T[0][b] + L[a][1] @ T[1][b] for b in range(2)] for a in range(2)]
    return T[0][0], T[0][1], T[1][0], T[1][1]


def _apply_local(op: np.ndarray, m: int, M: int, v: np.ndarray) -> np.ndarray:
    t = v.reshape((2,) * M)
    t = np.moveaxis(np.tensordot(op, t, axes=([1], [m - 1])), 0, m - 1)
    return t.reshape(-1)


def apply_monodromy(model: ModelSpec, lam: complex, v: np.ndarray):
    """``[[A v, B v], [C v, D v]]`` without forming dense operators."""
    _require_chain(model, MAX_APPLY_SITES)
    M = model.M
    zero = np.zeros_like(v)
    w = [[v, zero], [zero, v]]
    for m in range(1, M + 1):
        L = local_blocks(model, m, lam)
        w = [
            [_apply_local(L[a][0], m, M, w[0][b]) + _apply_local(L[a][1], m, M, w[1][b]) for b in range(2)]
            for a in range(2)
        ]
    return w


def vacuum(M: int) -> np.ndarray:
    v = np.zeros(2**M, dtype=complex)
    v[0] = 1.0
    return v


def apply_B(model: ModelSpec, lams, v: np.ndarray) -> np.ndarray:
    for lam in as_array(lams):
        v = apply_monodromy(model, lam, v)[0][1]
    return v


def apply_C(model: ModelSpec, mus, v: np.ndarray) -> np.ndarray:
    for mu in as_array(mus):
        v = apply_monodromy(model, mu, v)[1][0]
    return v


def apply_tau(model: ModelSpec, mu: complex, v: np.ndarray) -> np.ndarray:
    w = apply_monodromy(model, mu, v)
    return w[0][0] + w[1][1]


def bethe_vector(model: ModelSpec, lams) -> np.ndarray:
    return apply_B(model, lams, vacuum(model.M))


def _transpose_blocks(model: ModelSpec, lam: complex, u: np.ndarray):
    """``[[A^T u, B^T u], [C^T u, D^T u]]``: row-vector action ``u^T T``."""
    M = model.M
    zero = np.zeros_like(u)
    w = [[u, zero], [zero, u]]
    for m in range(M, 0, -1):
        L = local_blocks(model, m, lam)
        w = [
            [_apply_local(L[0][b].T, m, M, w[a][0]) + _apply_local(L[1][b].T, m, M, w[a][1]) for b in range(2)]
            for a in range(2)
        ]
    return w


def dual_bethe_vector(model: ModelSpec, mus) -> np.ndarray:
    """Components ``u`` with ``<0| prod C(mu) |psi> = u . psi`` (no conjugation)."""
    _require_chain(model, MAX_APPLY_SITES)
    u = vacuum(model.M)
    for mu in as_array(mus):
        u = _transpose_blocks(model, mu, u)[1][0]
    return u


def verify_rtt(model: ModelSpec, lam: complex, mu: complex, flip_c: bool = False) -> float:
    """Relative residual of ``R (T(l) (x) T(mu)) - (T(mu) (x) T(l)) R`` in operator norm."""
    _require_chain(model)
    f = K.f(model, mu, lam)
    g = K.g(model, mu, lam)
    R = np.array([[f, 0, 0, 0], [0, g, 1, 0], [0, 1, g, 0], [0, 0, 0, f]], dtype=complex)
    dim = 2**model.M

    def aux(T):
        return np.block([[T[0], T[1]], [T[2], T[3]]])

    Tl = aux(build_monodromy(model, lam, flip_c))
    Tm = aux(build_monodromy(model, mu, flip_c))
    RR = np.kron(R, np.eye(dim))
    lhs = RR @ _aux_embed(Tl, 0, dim) @ _aux_embed(Tm, 1, dim)
    rhs = _aux_embed(Tm, 0, dim) @ _aux_embed(Tl, 1, dim) @ RR
    scale = np.linalg.norm(lhs, 2) + np.linalg.norm(rhs, 2)
    return float(np.linalg.norm(lhs - rhs, 2) / scale)


def _aux_embed(T: np.ndarray, which: int, dim: int) -> np.ndarray:
    """Embed a (2 dim)x(2 dim) aux-quantum operator into aux1 (x) aux2 (x) quantum."""
    out = np.zeros((4 * dim, 4 * dim), dtype=complex)
    for a in range(2):
        for b in range(2):
            blk = T[a * dim:(a + 1) * dim, b * dim:(b + 1) * dim]
            for s in range(2):
                if which == 0:
                    r, c = 2 * a + s, 2 * b + s
                else:
                    r, c = 2 * s + a, 2 * s + b
                out[r * dim:(r + 1) * dim, c * dim:(c + 1) * dim] = blk
    return out


def vacuum_eigen_empirical(model: ModelSpec, lam: complex, tol: float = 1e-13):
    """Read ``(a, d)`` off the pseudovacuum, asserting the vacuum triple."""
    _require_chain(model, MAX_APPLY_SITES)
    v = vacuum(model.M)
    w = apply_monodromy(model, lam, v)
    a, d = w[0][0][0], w[1][1][0]
    scale = max(1.0, abs(a), abs(d))
    offA = np.linalg.norm(w[0][0] - a * v)
    offD = np.linalg.norm(w[1][1] - d * v)
    cv = np.linalg.norm(w[1][0])
    # <0| B = 0  <=>  B^T e_0 = 0
    bt = np.linalg.norm(_transpose_blocks(model, lam, v)[0][1])
    if max(offA, offD, cv, bt) > tol * scale:
        raise ConventionError("pseudovacuum is not an eigenvector of A and D or is not annihilated by C")
    return complex(a), complex(d)


def oracle_scalar_product(model: ModelSpec, mus, lambdas) -> complex:
    """``<0| prod C(mu) prod B(l) |0>`` by explicit operator application."""
    mu, lam = as_array(mus), as_array(lambdas)
    if len(mu) != len(lam):
        return 0j
    v = bethe_vector(model, lam)
    return complex(apply_C(model, mu, v)[0])


def oracle_eigencheck(model: ModelSpec, mu: complex, roots) -> float:
    """``|tau(mu) Psi - theta(mu) Psi| / |Psi|`` for ``Psi = prod B(l)|0>``."""
    psi = bethe_vector(model, roots)
    theta = transfer_eigenvalue(model, mu, roots)
    return float(np.linalg.norm(apply_tau(model, mu, psi) - theta * psi) / np.linalg.norm(psi))


def _check_site(model: ModelSpec, m: int):
    if not 1 <= m <= model.M:
        raise SiteRangeError(f"site {m} outside 1..{model.M}")


def sigma_minus_reconstructed(model: ModelSpec, m: int, v: np.ndarray) -> np.ndarray:
    """``sigma_-^(m) v`` from ``prod_{a<m} tau(theta_a) B(theta_m) prod_{a>m} tau(theta_a)``.

    ``theta_a`` are the zeros of ``d``; the result is divided by ``prod_a a(theta_a)``.
    """
    _check_site(model, m)
    th = K.reconstruction_points(model)
    w = v
    for a in range(model.M, m, -1):
        w = apply_tau(model, th[a - 1], w)
    w = apply_monodromy(model, th[m - 1], w)[0][1]
    for a in range(m - 1, 0, -1):
        w = apply_tau(model, th[a - 1], w)
    norm = np.prod(K.vacuum_eigen(model, th)[0])
    return w / norm


def local_operator_reconstructed(model: ModelSpec, which: str, m: int) -> np.ndarray:
    """Dense ``sigma_-``, ``sigma_+`` or ``sigma_z`` at site ``m`` from monodromy entries."""
    _require_chain(model)
    _check_site(model, m)
    th = K.reconstruction_points(model)
    taus = [sum(build_monodromy(model, x)[i] for i in (0, 3)) for x in th]
    A, B, C, D = build_monodromy(model, th[m - 1])
    mid = {"minus": B, "plus": C, "z": A - D}[which]
    left = reduce(np.matmul, taus[: m - 1], np.eye(2**model.M))
    right = reduce(np.matmul, taus[m:], np.eye(2**model.M))
    return left @ mid @ right / np.prod(K.vacuum_eigen(model, th)[0])


def local_operator_direct(model: ModelSpec, which: str, m: int) -> np.ndarray:
    op = {"minus": SIGMA_MINUS, "plus": SIGMA_PLUS, "z": SIGMA_Z}[which]
    return embed(op, m, model.M)


def oracle_sigma_minus(model: ModelSpec, mus, lambdas, m: int, tol: float = 1e-10) -> complex:
    """``<0| prod C(mu) sigma_-^(m) prod B(l) |0>`` via Pauli embedding.

    The reconstruction through transfer matrices is evaluated as well and
    must agree to ``tol`` relative to the state norms.
    """
    _check_site(model, m)
    mu, lam = as_array(mus), as_array(lambdas)
    if len(mu) != len(lam) + 1:
        return 0j
    psi = bethe_vector(model, lam)
    dual = dual_bethe_vector(model, mu)
    direct = _apply_local(SIGMA_MINUS, m, model.M, psi)
    recon = sigma_minus_reconstructed(model, m, psi)
    gap = np.linalg.norm(direct - recon) / max(np.linalg.norm(psi), 1e-300)
    if gap > tol:
        raise ConventionError(f"local-operator reconstruction disagrees by {gap:.2e}")
    return complex(dual @ direct)
