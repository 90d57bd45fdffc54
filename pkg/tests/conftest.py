import itertools
from functools import lru_cache

import numpy as np
import pytest

from bethe_ff.bethe import solve_magnons
from bethe_ff.errors import BetheFFError
from bethe_ff.models import ModelSpec


def cplx(rng, n, scale=1.0):
    return scale * (rng.normal(size=n) + 1j * rng.normal(size=n))


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def cofactor_det(m):
    """Laplace expansion along the first row; independent of LU."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    if n == 0:
        return 1.0 + 0j
    if n == 1:
        return m[0, 0]
    return sum((-1) ** k * m[0, k] * cofactor_det(np.delete(m[1:], k, axis=1)) for k in range(n))


def small_xi(M):
    return 0.07 * np.cos(np.arange(M) * 1.7) + 0.01 * np.arange(M)


def chain(kind, M, gamma=np.pi / 3):
    return ModelSpec.xxx(small_xi(M)) if kind == "xxx" else ModelSpec.xxz(gamma, small_xi(M))


@lru_cache(maxsize=None)
def states(kind, M, N, limit=4):
    """Certified on-shell states from magnon seeds (cached per session)."""
    model = chain(kind, M)
    out = []
    for ks in itertools.combinations(range(1, M), N):
        try:
            out.append(solve_magnons(model, ks))
        except BetheFFError:
            continue
        if len(out) >= limit:
            break
    return tuple(out)


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)
