"""Bethe equations: residuals, Newton solvers and transfer-matrix eigenvalues."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels as K
from .errors import NoConvergence, OffShellError, RootCollision
from .models import ModelSpec, RapiditySet, as_array, coincidence_tol, complex_from_json, complex_to_json

CERT_TOL = 1e-12
MAX_ITER = 200
MAX_HALVINGS = 8
# beyond these the Bethe equations cannot tell a root from one at infinity
# at the certification tolerance (exp(-2 Re l) ~ 1e-11 for the trig chain)
FAR_TRIG = 12.0
FAR_RATIONAL = 1e6


@dataclass(frozen=True)
class BetheState:
    """A rapidity set certified against the Bethe equations."""

    model: ModelSpec
    roots: RapiditySet
    quantum_numbers: tuple = ()
    residual: float = 0.0

    @property
    def N(self) -> int:
        return len(self.roots)

    @property
    def array(self) -> np.ndarray:
        return self.roots.array

    def to_dict(self) -> dict:
        return {
            "model": self.model.to_dict(),
            "roots": [complex_to_json(z) for z in self.roots],
            "quantum_numbers": [float(q) for q in self.quantum_numbers],
            "residual": float(self.residual),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BetheState":
        model = ModelSpec.from_dict(d["model"])
        roots = RapiditySet(tuple(complex_from_json(z) for z in d["roots"]))
        res = float(np.max(bethe_residual(model, roots), initial=0.0))
        return cls(model, roots, tuple(d.get("quantum_numbers", ())), res)

    @classmethod
    def certify(cls, model: ModelSpec, roots, quantum_numbers=(), tol: float = CERT_TOL) -> "BetheState":
        """Wrap ``roots`` as a state, raising OffShellError if the residual exceeds ``tol``."""
        roots = roots if isinstance(roots, RapiditySet) else RapiditySet(as_array(roots))
        res = float(np.max(bethe_residual(model, roots), initial=0.0))
        if res > tol:
            raise OffShellError(f"Bethe residual {res:.3e} exceeds {tol:.1e}")
        return cls(model, roots, tuple(quantum_numbers), res)


def _bethe_products(model: ModelSpec, lam: np.ndarray):
    """``r(l_j) prod_{k!=j} f(l_j,l_k)/f(l_k,l_j)`` and the equivalent h-ratio form."""
    n = len(lam)
    r = np.atleast_1d(K.ratio_r(model, lam))
    p_f = r.astype(complex).copy()
    p_h = r.astype(complex).copy()
    for j in range(n):
        for k in range(n):
            if k != j:
                p_f[j] *= K.f(model, lam[j], lam[k]) / K.f(model, lam[k], lam[j])
                p_h[j] *= -K.h(model, lam[j], lam[k]) / K.h(model, lam[k], lam[j])
    return p_f, p_h


def bethe_residual(model: ModelSpec, roots) -> np.ndarray:
    """Per-root deviation ``|r(l_j) prod f(l_j,l_k)/f(l_k,l_j) - 1|``."""
    lam = as_array(roots)
    if len(lam) == 0:
        return np.zeros(0)
    p_f, p_h = _bethe_products(model, lam)
    gap = np.abs(p_f - p_h) / np.maximum(1.0, np.abs(p_f))
    if np.any(gap > 1e-12):
        warnings.warn(f"f-ratio and h-ratio Bethe forms disagree by {gap.max():.2e}", RuntimeWarning)
    return np.abs(p_f - 1.0)


def _check_quantum_numbers(qn) -> np.ndarray:
    raw = [float(q) for q in qn]
    qn = [Fraction(q).limit_denominator(2) for q in raw]
    if any(abs(float(f) - q) > 1e-12 for f, q in zip(qn, raw)):
        raise ValueError("quantum numbers must be integers or half-odd-integers")
    n = len(qn)
    if len(set(qn)) != n:
        raise ValueError("quantum numbers must be distinct")
    want_half = n % 2 == 0
    for q in qn:
        if (q.denominator == 2) != want_half:
            kind = "half-odd-integers" if want_half else "integers"
            raise ValueError(f"for N={n} quantum numbers must be {kind}")
    return np.array([float(q) for q in qn])


def solve_bethe_qnls(
    model: ModelSpec, quantum_numbers: Sequence, tol: float = CERT_TOL, max_iter: int = MAX_ITER
) -> BetheState:
    """Real Newton iteration on the logarithmic Lieb-Liniger equations.

    ``L l_j + sum_k 2 arctan((l_j - l_k)/c) = 2 pi I_j`` seeded at ``2 pi I_j / L``.
    """
    if model.kind != "qnls":
        raise ValueError("solve_bethe_qnls needs a QNLS model")
    I = _check_quantum_numbers(quantum_numbers)
    n, L, c = len(I), model.L, model.c
    if n == 0:
        return BetheState(model, RapiditySet(()), (), 0.0)

    def F(x):
        d = x[:, None] - x[None, :]
        return L * x + 2.0 * np.arctan(d / c).sum(axis=1) - 2.0 * np.pi * I

    def J(x):
        d = x[:, None] - x[None, :]
        w = 2.0 * c / (c * c + d * d)
        np.fill_diagonal(w, 0.0)
        out = -w
        out[np.diag_indices(n)] = L + w.sum(axis=1)
        return out

    x = 2.0 * np.pi * I / L
    res = math.inf
    for it in range(max_iter + 1):
        res = float(np.max(bethe_residual(model, x.astype(complex))))
        if res <= tol:
            # one polishing step, kept only if it does not hurt
            x2 = x - np.linalg.solve(J(x), F(x))
            if float(np.max(bethe_residual(model, x2.astype(complex)))) <= res:
                x = x2
            break
        if it == max_iter:
            break
        fx = F(x)
        step = np.linalg.solve(J(x), fx)
        norm0 = np.linalg.norm(fx)
        lam_step = 1.0
        for _ in range(MAX_HALVINGS):
            if np.linalg.norm(F(x - lam_step * step)) <= norm0:
                break
            lam_step *= 0.5
        x = x - lam_step * step
    res = float(np.max(bethe_residual(model, x.astype(complex))))
    if res > tol:
        raise NoConvergence(f"QNLS Newton stopped with residual {res:.3e}", res, max_iter)
    order = np.argsort(I)
    if np.any(np.diff(x[order]) <= 0):
        raise NoConvergence("QNLS roots are not strictly ordered", res, max_iter)
    return BetheState(model, RapiditySet(tuple(x.astype(complex))), tuple(float(q) for q in I), res)


def _log_r_parts(model: ModelSpec, lam: np.ndarray):
    """Sum of principal logs of the site factors of r, and its derivative."""
    if model.kind == "qnls":
        return -1j * lam * model.L, np.full(len(lam), -1j * model.L)
    x = lam[:, None] - np.asarray(model.xi)[None, :]
    if model.kind == "xxx":
        hc = 0.5j * model.c
        num, den = x - hc, x + hc
        dnum, dden = 1.0 / num, 1.0 / den
    else:
        hg = 0.5j * model.gamma
        num, den = np.cosh(x - hg), np.cosh(x + hg)
        dnum, dden = np.tanh(x - hg), np.tanh(x + hg)
    return (np.log(num) - np.log(den)).sum(axis=1), (dnum - dden).sum(axis=1)


def _log_f(model: ModelSpec, x):
    return np.log(np.atleast_1d(K.f(model, x, 0.0)))


def _log_system(model: ModelSpec, lam: np.ndarray):
    with np.errstate(all="ignore"):
        return _log_system_raw(model, lam)


def _log_system_raw(model: ModelSpec, lam: np.ndarray):
    n = len(lam)
    lr, dlr = _log_r_parts(model, lam)
    G = lr.astype(complex).copy()
    J = np.diag(dlr).astype(complex)
    for j in range(n):
        for k in range(n):
            if k == j:
                continue
            x = lam[j] - lam[k]
            G[j] += _log_f(model, x)[0] - _log_f(model, -x)[0]
            dd = K.dlog_f(model, x) + K.dlog_f(model, -x)
            J[j, j] += dd
            J[j, k] -= dd
    return G, J


def _check_collision(lam):
    for a in range(len(lam)):
        for b in range(a):
            if abs(lam[a] - lam[b]) <= coincidence_tol(lam[a], lam[b]):
                raise RootCollision(f"roots {b} and {a} collided", math.nan, 0)


def solve_bethe_newton(
    model: ModelSpec, seed, tol: float = CERT_TOL, max_iter: int = MAX_ITER, quantum_numbers=()
) -> BetheState:
    """Complex Newton iteration on the logarithm of the Bethe equations.

    The branch integers are fixed once from the seed, so the logarithm is
    followed continuously. Steps are halved (at most 8 times) whenever the
    log-residual grows.
    """
    lam = as_array(seed).copy()
    n = len(lam)
    if n == 0:
        return BetheState(model, RapiditySet(()), tuple(quantum_numbers), 0.0)
    _check_collision(lam)
    G, J = _log_system(model, lam)
    target = 2j * np.pi * np.round(G.imag / (2 * np.pi))
    res = math.inf
    for it in range(max_iter + 1):
        with np.errstate(all="ignore"):
            res = float(np.max(bethe_residual(model, lam)))
        if res <= tol:
            try:
                G, J = _log_system(model, lam)
                lam2 = lam - np.linalg.solve(J, G - target)
                if float(np.max(bethe_residual(model, lam2))) <= res:
                    lam = lam2
            except (np.linalg.LinAlgError, ZeroDivisionError):
                pass
            break
        if it == max_iter:
            break
        G, J = _log_system(model, lam)
        rhs = G - target
        try:
            step = np.linalg.solve(J, rhs)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence("singular Bethe Jacobian", res, it) from exc
        norm0 = np.linalg.norm(rhs)
        s = 1.0
        for _ in range(MAX_HALVINGS):
            trial = lam - s * step
            try:
                _check_collision(trial)
                with np.errstate(all="ignore"):
                    val = np.linalg.norm(_log_system(model, trial)[0] - target)
                ok = bool(np.isfinite(val) and val <= norm0)
            except (ZeroDivisionError, RootCollision):
                ok = False
            if ok:
                break
            s *= 0.5
        lam = lam - s * step
        _check_collision(lam)
        if not np.all(np.isfinite(lam)):
            raise NoConvergence("Newton iterate diverged", res, it)
    res = float(np.max(bethe_residual(model, lam)))
    if res > tol:
        raise NoConvergence(f"Newton stopped with residual {res:.3e}", res, max_iter)
    far = np.abs(lam.real) > FAR_TRIG if model.kind == "xxz" else np.abs(lam) > FAR_RATIONAL
    if np.any(far):
        raise NoConvergence("a root escaped to infinity", res, max_iter)
    return BetheState(model, RapiditySet(tuple(lam)), tuple(quantum_numbers), res)


def magnon_seed(model: ModelSpec, ks: Sequence[int]) -> np.ndarray:
    """Free-magnon rapidities of a homogeneous chain with momenta ``2 pi k / M``.

    Used as Newton seeds; inhomogeneities enter only through their mean.
    """
    if not model.is_chain:
        raise ValueError("magnon seeds are for spin chains")
    M = model.M
    shift = np.mean(model.xi)
    out = []
    for k in ks:
        if k % M == 0:
            raise ValueError("k = 0 mod M has an infinite rapidity")
        w = np.exp(2j * np.pi * k / M)
        if model.kind == "xxx":
            lam = 0.5j * model.c * (1 + w) / (1 - w)
        else:
            e = np.exp(0.5j * model.gamma)
            u = (w / e - e) / (1 / e - w * e)
            lam = 0.5 * np.log(u)
        out.append(lam + shift)
    return np.array(out, dtype=complex)


def solve_magnons(model: ModelSpec, ks: Sequence[int], **kw) -> BetheState:
    return solve_bethe_newton(model, magnon_seed(model, ks), quantum_numbers=tuple(ks), **kw)


def transfer_eigenvalue(model: ModelSpec, mu: complex, roots) -> complex:
    """``theta(mu|{l}) = a(mu) prod f(mu,l) + d(mu) prod f(l,mu)``."""
    lam = as_array(roots)
    a, d = K.vacuum_eigen(model, mu)
    if len(lam) == 0:
        return complex(a + d)
    return complex(a * np.prod(K.f(model, mu, lam)) + d * np.prod(K.f(model, lam, mu)))


def theta_derivative(model: ModelSpec, mu: complex, nus, k: int) -> complex:
    """Analytic ``d theta(mu|{nu}) / d nu_k`` by the product rule."""
    nu = as_array(nus)
    a, d = K.vacuum_eigen(model, mu)
    t1 = a * np.prod(K.f(model, mu, nu))
    t2 = d * np.prod(K.f(model, nu, mu))
    return complex(-t1 * K.dlog_f(model, mu - nu[k]) + t2 * K.dlog_f(model, nu[k] - mu))


def theta_derivative_matrix(model: ModelSpec, points, nus) -> np.ndarray:
    """``T_jk = d theta(points_j|{nu}) / d nu_k``."""
    p = as_array(points)
    nu = as_array(nus)
    return np.array([[theta_derivative(model, p[j], nu, k) for k in range(len(nu))] for j in range(len(p))])
