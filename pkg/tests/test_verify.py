import math
import random

import numpy as np
import pytest

from hecke_clifford import affine_rewrite as ar
from hecke_clifford import scalars as sc
from hecke_clifford import verify as vf

CONFIGS = sc.default_configs(3)


@pytest.fixture(params=list(CONFIGS), scope="module")
def params(request):
    return CONFIGS[request.param]


def test_represent_identity_and_cyclotomic(params):
    R = vf.realization(params)
    assert R.represent(R.proto.one()).close_to(R.identity())
    f = R.represent(vf.cyclotomic_element(R.proto, params))
    assert f.maxabs() < vf.TOLERANCE


def test_represent_is_multiplicative(params):
    R = vf.realization(params)
    rng = random.Random(4)
    for _ in range(5):
        a = vf.random_element(params, rng)
        b = vf.random_element(params, rng)
        assert R.represent(a * b).close_to(R.represent(a) @ R.represent(b))


def test_quadratic_relation_operator(params):
    R = vf.realization(params)
    T1 = R.T(1)
    rhs = T1 * params.eps + R.identity() if params.nondegenerate else R.identity()
    assert (T1 @ T1).close_to(rhs)


def test_frame_rank_is_full(params):
    R = vf.realization(params)
    rank, smallest = R.frame_rank()
    assert rank == params.level ** 3 * 8 * 6
    assert smallest > 1e-12


@pytest.mark.parametrize("n", [1, 2])
def test_frame_rank_small_n(n):
    for p in sc.default_configs(n).values():
        rank, _ = vf.realization(p).frame_rank()
        assert rank == p.level ** n * 2 ** n * math.factorial(n)


def test_extract_identity(params):
    R = vf.realization(params)
    coords = R.extract_pbw(R.identity())
    unit = ((0, 0, 0), 0, (1, 2, 3))
    assert np.allclose(coords[unit], [1, 0, 0, 0], atol=1e-28)
    others = max(np.max(np.abs(v)) for k, v in coords.items() if k != unit) if len(coords) > 1 else 0
    assert others < 1e-25


def test_extract_round_trip_random_product(params):
    R = vf.realization(params)
    rng = random.Random(9)
    gens = list(ar.generators(R.proto).values())
    elem = R.proto.one()
    for _ in range(4):
        elem = elem * rng.choice(gens)
    op = R.represent(elem)
    back = R.represent(R.element_from_coords(R.extract_pbw(op)))
    assert back.close_to(op)


def test_extract_rejects_foreign_operator(params):
    R = vf.realization(params)
    # type Q blocks are a proper subalgebra of the full matrix algebra,
    # so a single perturbed entry leaves the image
    op = R.identity()
    op.blocks[0] = op.blocks[0].copy()
    op.blocks[0][0, 0, -1] += 1.0
    dims = R.dims
    frame_dim = params.level ** 3 * 48
    if sum(d * d for d in dims) == frame_dim:
        pytest.skip("the algebra is the full block matrix algebra")
    with pytest.raises(ValueError):
        R.extract_pbw(op)


def test_dimension_ledger_examples():
    led = vf.dimension_ledger(CONFIGS["nd-s"])
    # the shifted (2,1) diagram has one standard filling, so N = 8 + 4
    assert led["N"] == 12
    assert led["dim"] == led["pbw_dim"] == 48
    p = sc.Params("nd", "0", (3,), 2, 3)
    led = vf.dimension_ledger(p)
    assert led["N"] == 32
    assert led["dim"] == 384
    assert vf.dimension_ledger(sc.Params("nd", "ss", (), 2, 2))["balanced"]


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_dimension_identity_up_to_four(n):
    for p in sc.default_configs(n).values():
        led = vf.dimension_ledger(p)
        # right side independently: level^n * 2^n * n!
        assert led["dim"] == p.level ** n * 2 ** n * math.factorial(n)
        assert led["N"] == sum(M["module_dim"] for M in led["blocks"])


def test_ledger_matches_modules(params):
    led = vf.dimension_ledger(params)
    R = vf.realization(params)
    assert led["N"] == R.N
    assert sum(d * d // (1 + m["t_prime"] % 2) for d, m in zip(R.dims, led["blocks"])) == led["dim"]


def test_oracle_concordance(params):
    report = vf.oracle_concordance(params, count=100, seed=0)
    assert report["passed"], report


def test_star_descends_to_quotient(params):
    R = vf.realization(params)
    rng = random.Random(2)
    for _ in range(3):
        e = vf.random_element(params, rng)
        lhs = vf.star_operator(R, R.represent(e))
        rhs = R.represent(ar.star(e))
        assert lhs.close_to(rhs)


def test_parity_operator(params):
    R = vf.realization(params)
    P = R.parity_operator()
    assert (P @ P).close_to(R.identity())
    for i in range(1, 4):
        assert (P @ R.C(i)).close_to(-(R.C(i) @ P))
        assert (P @ R.X(i)).close_to(R.X(i) @ P)
    for i in (1, 2):
        assert (P @ R.T(i)).close_to(R.T(i) @ P)
