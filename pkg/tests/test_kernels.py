"""Backend agreement: the compiled kernels must match the pure ones bit-for-bit."""

import random

import pytest

from compatsplit import kernels
from compatsplit.kernels import pure

try:
    from compatsplit.kernels import _core
except ImportError:
    _core = None

needs_core = pytest.mark.skipif(_core is None, reason="compiled kernels not built")


def test_backend_is_valid():
    assert kernels.BACKEND in ("pure", "compiled")


@needs_core
@pytest.mark.parametrize("p", [2, 3, 5, 97, 2147483647])
def test_mat_mul_agreement(p):
    rng = random.Random(p)
    for _ in range(150):
        m, n, k = rng.randrange(8), rng.randrange(8), rng.randrange(8)
        a = [rng.randrange(p) for _ in range(m * n)]
        b = [rng.randrange(p) for _ in range(n * k)]
        assert _core.mat_mul(p, m, n, k, a, b) == pure.mat_mul(p, m, n, k, a, b)


@needs_core
@pytest.mark.parametrize("p", [2, 3, 5, 97])
def test_rref_agreement(p):
    rng = random.Random(100 + p)
    for _ in range(150):
        m, n = rng.randrange(9), rng.randrange(9)
        a = [rng.randrange(p) for _ in range(m * n)]
        assert _core.rref(p, m, n, a) == pure.rref(p, m, n, a)


@needs_core
@pytest.mark.parametrize("p", [2, 3, 5])
def test_kron_sum_agreement(p):
    rng = random.Random(200 + p)
    for _ in range(100):
        sr, sc = rng.randrange(5), rng.randrange(5)
        br, bc = rng.randrange(5), rng.randrange(5)
        terms = [
            ([rng.randrange(p) for _ in range(sr * sc)], [rng.randrange(p) for _ in range(br * bc)])
            for _ in range(rng.randrange(4))
        ]
        assert _core.kron_sum(p, sr, sc, br, bc, terms) == pure.kron_sum(p, sr, sc, br, bc, terms)


@needs_core
def test_kron_sum_word_boundaries():
    # shifts that straddle 64-bit word boundaries in the packed GF(2) path
    rng = random.Random(7)
    for sr, sc, br, bc in [(3, 11, 4, 13), (2, 40, 2, 5), (1, 70, 3, 3), (2, 9, 2, 64)]:
        terms = [
            ([rng.randrange(2) for _ in range(sr * sc)], [rng.randrange(2) for _ in range(br * bc)])
            for _ in range(3)
        ]
        assert _core.kron_sum(2, sr, sc, br, bc, terms) == pure.kron_sum(2, sr, sc, br, bc, terms)


@needs_core
def test_big_gf2_rref_sane():
    rng = random.Random(11)
    m, n = 120, 200
    a = [rng.randrange(2) for _ in range(m * n)]
    flat, pivots = _core.rref(2, m, n, a)
    assert flat == pure.rref(2, m, n, a)[0]
    # pivot columns of an rref carry exactly one 1
    for r, c in enumerate(pivots):
        col = [flat[i * n + c] for i in range(m)]
        assert col[r] == 1 and sum(col) == 1
