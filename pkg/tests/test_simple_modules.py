import numpy as np
import pytest

from hecke_clifford import affine_rewrite as ar
from hecke_clifford import combinatorics as cb
from hecke_clifford import scalars as sc
from hecke_clifford import simple_modules as sm
from hecke_clifford import verify as vf

CONFIGS = sc.default_configs(3)
TOL = 1e-25


@pytest.fixture(params=list(CONFIGS), scope="module")
def params(request):
    return CONFIGS[request.param]


def test_dimension_formula(params):
    for M in sm.all_modules(params):
        std = cb.enumerate_std(M.shape)
        tt = cb.diagonal_data(std[0]).size
        assert M.dim == 2 ** (3 - tt // 2) * len(std)
        assert M.dim == sm.expected_dim(M.shape, params)
        if params.bullet == "0":
            assert M.dim == 8 * len(std)


def test_small_dimensions():
    p = sc.Params("nd", "s", (), 2, 1)
    (M,) = sm.all_modules(p)
    assert M.dim == 2
    dims = {str(M.shape): M.dim for M in sm.all_modules(CONFIGS["nd-s"])}
    # the shifted diagram (2,1) has a single standard filling
    assert dims == {"((3))": 8, "((2,1))": 4}


def _sum_terms(pairs):
    out = {}
    for c, tr in pairs:
        out[tr] = out.get(tr, 0) + c
    return sm.ModuleVector(out)


def test_clifford_relations_on_basis(params):
    for M in sm.all_modules(params):
        for triple in M.basis:
            v = sm.ModuleVector.basis(triple)
            for i in range(1, 4):
                assert M.act_C(i, M.act_C(i, v)).close_to(v)
                for j in range(i + 1, 4):
                    lhs = M.act_C(i, M.act_C(j, v))
                    rhs = M.act_C(j, M.act_C(i, v)) * -1
                    assert lhs.close_to(rhs)


def test_c1_on_row_tableau_of_strict_row():
    p = CONFIGS["nd-s"]
    M = next(M for M in sm.all_modules(p) if M.shape.parts == ((3,),))
    t = cb.row_tableau(M.shape)
    assert M.diagonal(t).dseq == (1,)
    v = sm.ModuleVector.basis((t, 0, 0))
    assert M.act_C(1, v).close_to(sm.ModuleVector.basis((t, 0, 1)))


def test_r_table_equals_cc(params):
    for M in sm.all_modules(params):
        for triple in M.basis:
            for i in (1, 2):
                lhs = _sum_terms(M.r_basis(i, triple))
                rhs = _sum_terms(M.cc_basis(i, triple))
                assert lhs.close_to(rhs)


def test_diagonal_letters_have_unit_eigenvalue(params):
    if not params.nondegenerate:
        return
    for M in sm.all_modules(params):
        for t, beta, _ in M.basis:
            for k in M.diagonal(t).D:
                ev = M.eigen.eigenvalue(t, k, beta)
                assert sc.close(ev, 1) or sc.close(ev, -1)


def test_eigenvalue_on_v_t_is_b_plus(params):
    if not params.nondegenerate:
        return
    for M in sm.all_modules(params):
        for t in M.tableaux:
            for i in range(1, 4):
                r = cb.residue(t.box_of[i], t.shape, params)
                assert sc.close(M.eigen.eigenvalue(t, i, 0), sc.b_pm(r, 1, params))


def test_sergeev_n2_eigenvalue():
    p = sc.Params("d", "s", (), 0, 2)
    M = next(M for M in sm.all_modules(p) if M.shape.parts == ((2,),))
    t = M.tableaux[0]
    v = sm.ModuleVector.basis((t, 0, 0))
    assert M.act_x(2, v).close_to(v * sc.sqrt(2))


def test_relation_suite_per_flavor(params):
    report = vf.relation_suite(params)
    assert report["passed"], report["residuals"]


def test_cyclotomic_relation_vanishes(params):
    R = vf.realization(params)
    f = R.represent(vf.cyclotomic_element(R.proto, params))
    assert f.maxabs() < TOL


def test_sqrt_c_is_shared_and_symmetric(params):
    ev = sm.eigen_data(params)
    for M in sm.all_modules(params):
        for t in M.tableaux:
            for i in (1, 2):
                u = t.swap(i)
                if u in M._std:
                    assert ev.sqrt_c(t, i) is ev.sqrt_c(u, i)
                    assert sc.close(ev.c(t, i), ev.c(u, i))
                    assert sc.close(ev.sqrt_c(t, i) ** 2, ev.c(t, i))


def test_intertwiner_action_on_weight_vectors(params):
    """Phi_i(b_{t,i}, b_{t,i+1}) v_t = delta(s_i t) sqrt(c_t(i)) v_{s_i t}."""
    R = vf.realization(params)
    ev = sm.eigen_data(params)
    for k, M in enumerate(R.modules):
        for t in M.tableaux:
            col = M.index[(t, 0, 0)]
            for i in (1, 2):
                x, y = ev.base(t, i), ev.base(t, i + 1)
                phi = R.represent(ar.intertwiner_fn(R.proto, i, x, y, params)).block(k)
                expect = np.zeros((4, M.dim))
                u = t.swap(i)
                if u in M._std:
                    expect[:, M.index[(u, 0, 0)]] = vf.dd_scalar(ev.sqrt_c(t, i))
                got = phi[:, :, col]
                assert np.max(np.abs(got - expect)) < TOL


def _commutant_dim(mats):
    d = mats[0].shape[0]
    eye = np.eye(d)
    rows = [np.kron(A, eye) - np.kron(eye, A.T) for A in mats]
    s = np.linalg.svd(np.vstack(rows), compute_uv=False)
    return int(np.sum(s < 1e-9 * s[0]))


def test_commutant_dimension_detects_type(params):
    for M in sm.all_modules(params):
        mats = []
        for kind, rng in (("X", range(1, 4)), ("C", range(1, 4)), ("T", range(1, 3))):
            for i in rng:
                block = vf.dd_from_sparse(M.matrix(kind, i), M.dim)
                mats.append(block[0] + 1j * block[2])
        assert _commutant_dim(mats) == 1 + M.d_lambda


def test_eigen_table_json(params):
    M = sm.all_modules(params)[0]
    table = M.eigen_table()
    assert len(table) == len(M.tableaux)
    assert len(table[0]["values"]) == 3


def test_non_separate_parameters_raise():
    p = sc.Params("nd", "0", (1,), 2, 3)
    with pytest.raises(sc.DomainError):
        sm.all_modules(p)
