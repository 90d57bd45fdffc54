"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line."""
import functools
import itertools
import time

import numpy as np
import pytest

from bethe_ff import kernels as K
from bethe_ff import oracle as O
from bethe_ff.bethe import CERT_TOL, bethe_residual, solve_bethe_qnls
from bethe_ff.models import ModelSpec
from bethe_ff.qnls import (
    SigmaConfig,
    dsigma_dalpha,
    dsigma_dalpha_fd,
    ff_psi_via_sigma,
    ff_psi_zero,
    ff_q1,
    psi_alternating_sum,
    psi_rank_one_det,
    psi_s_rows,
    sigma_alpha_omega,
    sigma_alpha_reduced,
    theorem1_trace,
)
from bethe_ff.scalar import appendix_g_sums, scalar_product, zero_eigenvector_residual
from bethe_ff.spin import ff_sigma_minus
from bethe_ff.verify import chain_models, onshell_states

from conftest import cplx, rel

EIG_POINT = 0.31 + 0.17j


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail, elapsed, budget):
        ok = ok and elapsed < budget
        with capsys.disabled():
            print(f"\ncriterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}  [{elapsed:.2f} s / {budget:g} s]")
        return ok

    return emit


def disk(rng, radius=2.0):
    return radius * np.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random())


@functools.lru_cache(maxsize=None)
def slavnov_states():
    out = []
    for M in (2, 4, 6, 8):
        for model in chain_models(M):
            for N in (1, 2, 3):
                if N <= M // 2:
                    out.extend(onshell_states(model, N, limit=3))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def spin_configs():
    out = []
    for M in (2, 4, 6):
        for model in chain_models(M):
            for N in (0, 1, 2):
                if N + 1 > M // 2 + 1:
                    continue
                mus = onshell_states(model, N + 1, limit=3)
                las = onshell_states(model, N, limit=3) if N else [None]
                out.extend((model, mu, la) for mu in mus for la in las)
    return tuple(out)


def test_criterion_01_kernels(report):
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    worst = 0.0
    for model in (ModelSpec.qnls(1.0, 1.3), ModelSpec.xxz(0.9, [0.0])):
        mu, lam = cplx(rng, 10_000), cplx(rng, 10_000)
        f, g, h, t = (K.kernel(model, w, mu, lam) for w in "fght")
        worst = max(
            worst,
            float(np.max(np.abs(h - f / g) / np.abs(h))),
            float(np.max(np.abs(t - g / h) / np.abs(t))),
            float(np.max(np.abs(g + K.g(model, lam, mu)) / np.abs(g))),
        )
    ok = report(1, worst <= 1e-13, f"kernel identities max rel err {worst:.2e} (tol 1e-13)", time.perf_counter() - t0, 1)
    assert ok


def test_criterion_02_slavnov_vs_oracle(report):
    rng = np.random.default_rng(102)
    t0 = time.perf_counter()
    worst, count, kinds, sizes = 0.0, 0, set(), set()
    for st in slavnov_states():
        assert st.residual <= CERT_TOL
        for _ in range(2):
            lam = cplx(rng, st.N, 0.5)
            err = rel(scalar_product(st.model, st, lam).value, O.oracle_scalar_product(st.model, st, lam))
            worst = max(worst, err)
            count += 1
        kinds.add(st.model.kind)
        sizes.add((st.model.M, st.N))
    good = worst <= 1e-8 and count >= 50 and kinds == {"xxx", "xxz"}
    detail = f"{count} configs, (M,N) {sorted(sizes)}, max rel err {worst:.2e} (tol 1e-8)"
    assert report(2, good, detail, time.perf_counter() - t0, 120)


def test_criterion_03_orthogonality(report):
    rng = np.random.default_rng(103)
    t0 = time.perf_counter()
    worst_pair, pairs = 0.0, 0
    for M in (2, 4, 6):
        for model in chain_models(M):
            for N in (1, 2):
                for a, b in itertools.combinations(onshell_states(model, N), 2):
                    sp = scalar_product(model, a, b)
                    worst_pair = max(worst_pair, abs(sp.value) / sp.diagnostics["scale"])
                    pairs += 1
    worst_null, points = 0.0, 0
    for model in (ModelSpec.qnls(1.0, 1.0), ModelSpec.xxz(0.7, [0.0])):
        for i in range(100):
            N = 1 + i % 8
            worst_null = max(worst_null, zero_eigenvector_residual(model, cplx(rng, N), cplx(rng, N)))
            points += 1
    good = worst_pair <= 1e-8 and worst_null <= 1e-11 and pairs > 0
    detail = f"{pairs} on-shell pairs |S|/scale {worst_pair:.2e} (tol 1e-8); {points} null-vector points {worst_null:.2e} (tol 1e-11)"
    assert report(3, good, detail, time.perf_counter() - t0, 60)


def test_criterion_04_g_sums(report):
    rng = np.random.default_rng(104)
    t0 = time.perf_counter()
    worst = 0.0
    for i in range(200):
        N = 1 + i % 8
        mu, lam = cplx(rng, N), cplx(rng, N)
        for j in range(N):
            for sign in (1, -1):
                worst = max(worst, rel(*appendix_g_sums(mu, lam, j, sign)))
    detail = f"200 configs N<=8, max rel err {worst:.2e} (tol 1e-11)"
    assert report(4, worst <= 1e-11, detail, time.perf_counter() - t0, 10)


def test_criterion_05_sigma_reduction(report):
    rng = np.random.default_rng(105)
    t0 = time.perf_counter()
    worst, worst_trace = 0.0, 0.0
    for i in range(200):
        N = 1 + i % 6
        cfg = SigmaConfig(disk(rng), cplx(rng, N), cplx(rng, N), 1.0)
        worst = max(worst, rel(sigma_alpha_omega(cfg), sigma_alpha_reduced(cfg)))
        if N <= 4:
            worst_trace = max(worst_trace, theorem1_trace(cfg).max_discrepancy)
    good = worst <= 1e-9 and worst_trace <= 1e-10
    detail = f"200 configs N<=6 |alpha|<=2, Omega vs reduced {worst:.2e} (tol 1e-9); per-step trace {worst_trace:.2e} (tol 1e-10)"
    assert report(5, good, detail, time.perf_counter() - t0, 60)


def test_criterion_06_field_routes(report):
    rng = np.random.default_rng(106)
    model = ModelSpec.qnls(10.0, 1.0)
    qsets = {
        1: [[0], [1], [-2]],
        2: [[-0.5, 0.5], [-0.5, 1.5], [-2.5, 0.5]],
        3: [[-1, 0, 1], [-1, 0, 2], [-2, 0, 1]],
        4: [[-1.5, -0.5, 0.5, 1.5], [-1.5, -0.5, 0.5, 2.5]],
    }
    t0 = time.perf_counter()
    worst, pairs = 0.0, 0
    for N in (1, 2, 3):
        for Im, Il in itertools.product(qsets[N], qsets[N + 1]):
            mu, lam = solve_bethe_qnls(model, Im), solve_bethe_qnls(model, Il)
            worst = max(worst, rel(ff_psi_via_sigma(model, mu, lam).value, ff_psi_zero(model, mu, lam).value))
            pairs += 1
    worst_rank = 0.0
    for N in range(1, 6):
        for _ in range(10):
            rows = psi_s_rows(model, cplx(rng, N), cplx(rng, N + 1))
            worst_rank = max(worst_rank, rel(psi_rank_one_det(rows).value, psi_alternating_sum(rows)))
    good = worst <= 1e-9 and worst_rank <= 1e-11
    detail = f"{pairs} on-shell pairs, routes {worst:.2e} (tol 1e-9); rank-one identity N<=5 {worst_rank:.2e} (tol 1e-11)"
    assert report(6, good, detail, time.perf_counter() - t0, 30)


def test_criterion_07_spin_kappa(report):
    t0 = time.perf_counter()
    kappas = []
    configs = spin_configs()
    for model, mu, la in configs:
        lam = la if la is not None else []
        for m in range(1, model.M + 1):
            kappas.append(ff_sigma_minus(model, mu, lam, m).value / O.oracle_sigma_minus(model, mu, lam, m))
    kappas = np.array(kappas)
    mean = kappas.mean()
    spread = float(np.max(np.abs(kappas - mean)) / abs(mean))
    is_one = float(np.max(np.abs(kappas - 1)))
    good = spread <= 1e-8 and len(configs) >= 30
    detail = (
        f"{len(configs)} configs ({len(kappas)} site values), kappa spread {spread:.2e} (tol 1e-8); "
        f"kappa = {mean.real:.15f}{mean.imag:+.1e}j, kappa == 1 to {is_one:.1e}"
    )
    assert report(7, good, detail, time.perf_counter() - t0, 120)


def test_criterion_08_rtt_and_conventions(report):
    rng = np.random.default_rng(108)
    t0 = time.perf_counter()
    worst_rtt = worst_vac = worst_rec = 0.0
    for M in (1, 2, 3):
        for model in chain_models(M):
            for _ in range(50):
                worst_rtt = max(worst_rtt, O.verify_rtt(model, *cplx(rng, 2)))
            for lam in cplx(rng, 5):
                a, d = O.vacuum_eigen_empirical(model, lam)
                ae, de = K.vacuum_eigen(model, lam)
                worst_vac = max(worst_vac, rel(a, ae), rel(d, de))
    for M in range(1, 7):
        for model in chain_models(M):
            for which in ("minus", "plus", "z"):
                for m in range(1, M + 1):
                    diff = O.local_operator_reconstructed(model, which, m) - O.local_operator_direct(model, which, m)
                    worst_rec = max(worst_rec, float(np.linalg.norm(diff, 2)))
    good = worst_rtt <= 1e-10 and worst_vac <= 1e-13 and worst_rec <= 1e-10
    detail = f"RTT {worst_rtt:.2e} (tol 1e-10); vacuum {worst_vac:.2e} (tol 1e-13); reconstruction M<=6 {worst_rec:.2e} (tol 1e-10)"
    assert report(8, good, detail, time.perf_counter() - t0, 120)


def test_criterion_09_solver_certification(report):
    t0 = time.perf_counter()
    used = {id(s): s for s in slavnov_states()}
    for _, mu, la in spin_configs():
        used[id(mu)] = mu
        if la is not None:
            used[id(la)] = la
    worst_res = worst_eig = 0.0
    for st in used.values():
        worst_res = max(worst_res, float(np.max(bethe_residual(st.model, st))), st.residual)
        worst_eig = max(worst_eig, O.oracle_eigencheck(st.model, EIG_POINT, st))
    good = worst_res <= 1e-12 and worst_eig <= 1e-11
    detail = f"{len(used)} chain states, residual {worst_res:.2e} (tol 1e-12), eigencheck {worst_eig:.2e} (tol 1e-11)"
    assert report(9, good, detail, time.perf_counter() - t0, 60)


def test_criterion_10_q1(report):
    model = ModelSpec.qnls(10.0, 1.0)
    qsets = {1: [[0], [1], [-2]], 2: [[-0.5, 0.5], [-0.5, 1.5], [-2.5, 0.5]], 3: [[-1, 0, 1], [-1, 0, 2]]}
    t0 = time.perf_counter()
    zero_ok, worst = True, 0.0
    for N, sets in qsets.items():
        states = [solve_bethe_qnls(model, I) for I in sets]
        for a in states:
            zero_ok &= ff_q1(3.7, model, a, a).value == 0
        for a, b in itertools.permutations(states, 2):
            zero_ok &= ff_q1(0.0, model, a, b).value == 0
            cfg = SigmaConfig(0.0, a.array, b.array, model.c)
            worst = max(worst, rel(dsigma_dalpha(cfg), dsigma_dalpha_fd(cfg)))
    good = zero_ok and worst <= 1e-6
    detail = f"exact zeros {'yes' if zero_ok else 'no'}; derivative routes N<=3 {worst:.2e} (tol 1e-6)"
    assert report(10, good, detail, time.perf_counter() - t0, 10)
