import numpy as np
import pytest

from hecke_clifford import combinatorics as cb
from hecke_clifford import idempotents as idm
from hecke_clifford import scalars as sc
from hecke_clifford import verify as vf

CONFIGS = sc.default_configs(3)
TOL = 1e-25


@pytest.fixture(params=list(CONFIGS), scope="module")
def params(request):
    return CONFIGS[request.param]


def test_report_passes(params):
    report = idm.idempotent_report(params)
    assert report["passed"], report["residuals"]
    for block in report["blocks"]:
        assert block["count"] == block["expected"]


def test_counts_match_multiplicities(params):
    led = vf.dimension_ledger(params)
    for shape, info in zip(cb.enumerate_multipartitions(params), led["blocks"]):
        assert len(idm.tri(shape)) == info["idempotents"]
        tri1 = idm.tri(shape, 1)
        if info["t_prime"] % 2:
            assert len(tri1) == len(idm.tri(shape))
        else:
            assert tri1 == []


def test_action_on_basis_vectors(params):
    """F_T fixes the basis vector of T (or of T_0, T_1) and kills the rest."""
    R = vf.realization(params)
    for T in idm.tri_all(params):
        op = idm.F(T, params)
        shifts = {T}
        if cb.diagonal_data(T.t).d_lambda:
            shifts.add(idm.shifted(T, 1))
        for k, M in enumerate(R.modules):
            expect = np.zeros((4, M.dim, M.dim))
            for S in shifts:
                if M.shape == T.t.shape:
                    j = M.index[(S.t, S.beta, S.alpha)]
                    expect[0, j, j] = 1.0
            assert np.max(np.abs(op.block(k) - expect)) < TOL


def test_type_q_and_type_m_blocks_present():
    p = CONFIGS["nd-s"]
    types = {b["type"] for b in idm.idempotent_report(p, check_star=False)["blocks"]}
    assert types == {"M", "Q"}


def test_star_on_strict_21_block():
    p = CONFIGS["nd-s"]
    shape = next(s for s in cb.enumerate_multipartitions(p) if s.parts == ((2, 1),))
    R = vf.realization(p)
    for T in idm.tri(shape):
        H = idm.star_F(T)
        assert H.alpha != T.alpha
        assert idm.star_F(H) == T
        lhs = vf.star_operator(R, idm.F(T, p))
        assert lhs.close_to(idm.F(H, p))
        assert not lhs.close_to(idm.F(T, p))


def test_star_fixes_self_paired():
    p = CONFIGS["nd-0"]
    T = idm.tri_all(p)[0]
    assert idm.star_F(T) == T
    R = vf.realization(p)
    assert vf.star_operator(R, idm.F(T, p)).close_to(idm.F(T, p))


def _even_hom_nonzero(params, T, S):
    """Is there an even h with F_T h F_S != 0?  Searched over the PBW frame."""
    R = vf.realization(params)
    ft, fs = idm.F(T, params), idm.F(S, params)
    for alpha, beta, w in R.frame_keys():
        if cb.popcount(beta) % 2:
            continue
        if (ft @ R.monomial(alpha, beta, w) @ fs).maxabs() > 1e-20:
            return True
    return False


def test_iso_class_matches_even_homs():
    p = CONFIGS["nd-s"]
    triples = idm.tri_all(p)
    for T in triples:
        for S in triples:
            cls = idm.iso_class(T, S)
            assert cls == idm.iso_class(S, T)
            assert (cls == idm.EVEN) == _even_hom_nonzero(p, T, S)


def test_iso_class_examples():
    p = CONFIGS["nd-0"]
    T = idm.tri_all(p)[0]
    assert idm.iso_class(T, T) == idm.EVEN
    flipped = idm.Triple(T.t, T.alpha, T.beta ^ 1)
    assert idm.iso_class(T, flipped) == idm.SHIFTED
    other = next(S for S in idm.tri_all(p) if S.t.shape != T.t.shape)
    assert idm.iso_class(T, other) == idm.DIFFERENT


def test_polynomial_part_is_sum_over_alpha(params):
    for t in cb.std_all(params):
        betas, _, even, _ = cb.z2_sets(t)
        for beta in betas[:2]:
            total = vf.Operator.zero(vf.realization(params).dims)
            for alpha in even:
                total = total + idm.F(idm.Triple(t, alpha, beta), params)
            assert total.close_to(idm.polynomial_part(t, beta, params))


def test_eigenvalue_sets_contain_plus_roots(params):
    sets = idm.eigenvalue_sets(params)
    for t in cb.std_all(params):
        for k in range(1, 4):
            target = idm._plus_root(t, k, params)
            assert any(sc.close(target, b) for b in sets[k])


def test_addable_box_product_n1():
    p = sc.Params("d", "s", (), 0, 1)
    (t,) = cb.std_all(p)
    E = idm.addable_box_product(t, 0, p)
    assert E.close_to(vf.realization(p).identity())
    assert E.close_to(idm.F(idm.Triple(t, 0, 0), p))


def test_addable_box_product_n3():
    report = idm.addable_box_report(CONFIGS["d-s"])
    assert report["passed"], report
    assert report["pairs"] == 6


def test_addable_box_product_rejects_other_algebras():
    with pytest.raises(sc.DomainError):
        idm.addable_box_product(cb.std_all(CONFIGS["nd-s"])[0], 0, CONFIGS["nd-s"])


def test_addable_boxes_of_strict_shape():
    p = CONFIGS["d-s"]
    t = cb.row_tableau(next(s for s in cb.enumerate_multipartitions(p) if s.parts == ((3,),)))
    assert idm.addable_boxes(t, 0, p) == [(1, 1, 0)]
    assert idm.addable_boxes(t, 2, p) == [(1, 3, 0), (2, 2, 0)]
