import numpy as np
import pytest

from bethe_ff import kernels as K
from bethe_ff import oracle as O
from bethe_ff.errors import ResourceError, SiteRangeError
from bethe_ff.models import ModelSpec

from conftest import chain, cplx, rel, states


def test_xxz_single_site_blocks():
    m = ModelSpec.xxz(np.pi / 3, [0.1])
    lam = 0.4 - 0.2j
    L = O.l_operator(m, 1, lam)
    up = O.vacuum(1)
    assert np.allclose(L[0][0] @ up, 1j * np.cosh(lam - 0.1 - 1j * np.pi / 6) * up)
    assert np.allclose(L[1][0] @ up, 0)


def test_c_block_annihilates_vacuum_each_site():
    m = chain("xxz", 3)
    for s in range(1, 4):
        assert np.allclose(O.l_operator(m, s, 0.3)[1][0] @ O.vacuum(3), 0)


def test_xxx_a_block_factor():
    m = ModelSpec.xxx([0.2])
    L = O.l_operator(m, 1, 0.7)
    assert (L[0][0] @ O.vacuum(1))[0] == pytest.approx(0.7 - 0.2 - 0.5j)


def test_two_site_block_product():
    m = chain("xxx", 2)
    lam = 0.3 + 0.1j
    A, B, C, D = O.build_monodromy(m, lam)
    L1, L2 = O.l_operator(m, 1, lam), O.l_operator(m, 2, lam)
    assert np.allclose(A, L2[0][0] @ L1[0][0] + L2[0][1] @ L1[1][0])


def test_single_site_monodromy_is_l():
    m = chain("xxz", 1)
    T = O.build_monodromy(m, 0.2)
    L = O.l_operator(m, 1, 0.2)
    assert np.allclose(T[1], L[0][1]) and np.allclose(T[2], L[1][0])


def test_apply_matches_dense(rng):
    m = chain("xxz", 4)
    v = cplx(rng, 16)
    lam = 0.3 - 0.4j
    dense = O.build_monodromy(m, lam)
    w = O.apply_monodromy(m, lam, v)
    for i, (a, b) in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
        assert np.allclose(w[a][b], dense[i] @ v)


def test_resource_guard():
    with pytest.raises(ResourceError):
        O.build_monodromy(ModelSpec.xxx(np.arange(13) * 0.1), 0.1)


@pytest.mark.parametrize("kind", ["xxx", "xxz"])
@pytest.mark.parametrize("M", [1, 2, 3])
def test_rtt(rng, kind, M):
    m = chain(kind, M)
    for _ in range(4):
        assert O.verify_rtt(m, *cplx(rng, 2)) <= 1e-12


@pytest.mark.parametrize("kind", ["xxx", "xxz"])
def test_rtt_negative_control(rng, kind):
    assert O.verify_rtt(chain(kind, 2), *cplx(rng, 2), flip_c=True) > 1e-2


@pytest.mark.parametrize("kind", ["xxx", "xxz"])
def test_vacuum_convention(rng, kind):
    m = chain(kind, 3)
    for lam in cplx(rng, 20, 0.7):
        a, d = O.vacuum_eigen_empirical(m, lam)
        ae, de = K.vacuum_eigen(m, lam)
        assert rel(a, ae) < 1e-13 and rel(d, de) < 1e-13
        assert rel(a / d, K.ratio_r(m, lam)) < 1e-12


def test_vacuum_example_xxz():
    m = ModelSpec.xxz(np.pi / 3, [0.0, 1e-8])
    a, _ = O.vacuum_eigen_empirical(m, 0.2)
    assert a == pytest.approx(-np.cosh(0.2 - 1j * np.pi / 6) ** 2, rel=1e-7)


@pytest.mark.parametrize("kind", ["xxx", "xxz"])
def test_b_and_c_commute(rng, kind):
    m = chain(kind, 3)
    l, u = cplx(rng, 2, 0.6)
    _, B1, C1, _ = O.build_monodromy(m, l)
    _, B2, C2, _ = O.build_monodromy(m, u)
    assert np.linalg.norm(B1 @ B2 - B2 @ B1, 2) <= 1e-11 * np.linalg.norm(B1 @ B2, 2)
    assert np.linalg.norm(C1 @ C2 - C2 @ C1, 2) <= 1e-11 * np.linalg.norm(C1 @ C2, 2)


def test_scalar_product_basics(rng):
    m = chain("xxz", 3)
    assert O.oracle_scalar_product(m, [], []) == 1
    mu, lam = cplx(rng, 2, 0.5), cplx(rng, 2, 0.5)
    ref = O.oracle_scalar_product(m, mu, lam)
    assert rel(O.oracle_scalar_product(m, mu[::-1], lam[::-1]), ref) < 1e-12


def test_dual_vector_consistent(rng):
    m = chain("xxx", 3)
    mu = cplx(rng, 2, 0.5)
    u = O.dual_bethe_vector(m, mu)
    C = [O.build_monodromy(m, x)[2] for x in mu]
    ref = O.vacuum(3) @ C[0] @ C[1]
    assert np.allclose(u, ref)


def test_eigencheck():
    m = chain("xxx", 4)
    assert O.oracle_eigencheck(m, 0.3, []) < 1e-14
    st = states("xxx", 4, 1)[0]
    assert O.oracle_eigencheck(m, 0.3, st) <= 1e-11
    assert O.oracle_eigencheck(m, 0.3, st.array + 0.05) > 1e-3


@pytest.mark.parametrize("kind", ["xxx", "xxz"])
@pytest.mark.parametrize("M", [2, 5])
def test_local_operator_reconstruction(kind, M):
    m = chain(kind, M)
    for which in ("minus", "plus", "z"):
        for s in range(1, M + 1):
            diff = O.local_operator_reconstructed(m, which, s) - O.local_operator_direct(m, which, s)
            assert np.linalg.norm(diff, 2) <= 1e-10


def test_sigma_minus_selection_rule():
    st = states("xxx", 4, 1)[0]
    assert O.oracle_sigma_minus(st.model, st, st, 1) == 0


def test_site_range():
    m = chain("xxx", 3)
    with pytest.raises(SiteRangeError):
        O.oracle_sigma_minus(m, [0.1], [], 4)
