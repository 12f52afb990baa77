import random

import pytest

from hecke_clifford import affine_rewrite as ar
from hecke_clifford import scalars as sc

F = sc.Fraction
ND = sc.Params("nd", "s", (), 2, 3)
DG = sc.Params("d", "s", (), 0, 3)


def _proto(params):
    return ar.AffineElement.for_params(params)


@pytest.fixture(params=[ND, DG], ids=["nd", "d"])
def proto(request):
    return _proto(request.param)


def test_quadratic_relation(proto):
    T1 = proto.T(1)
    if proto.flavor == sc.NONDEGENERATE:
        assert (T1 * T1).close_to(T1 * proto.eps + 1)
    else:
        assert (T1 * T1).close_to(proto.one())


def test_t_x_relation_nondegenerate():
    p = _proto(ND)
    e = p.eps
    lhs = p.T(1) * p.X(1)
    rhs = p.X(2) * p.T(1) - p.X(2) * e - p.C(1) * p.C(2) * p.X(1) * e
    assert lhs.close_to(rhs)
    lhs = p.T(1) * p.X(2)
    rhs = p.X(1) * p.T(1) + (p.one() - p.C(1) * p.C(2)) * p.X(2) * e
    assert lhs.close_to(rhs)


def test_t_x_relation_degenerate():
    p = _proto(DG)
    lhs = p.T(2) * p.X(2)
    rhs = p.X(3) * p.T(2) - 1 - p.C(2) * p.C(3)
    assert lhs.close_to(rhs)
    lhs = p.T(2) * p.X(3)
    rhs = p.X(2) * p.T(2) + 1 - p.C(2) * p.C(3)
    assert lhs.close_to(rhs)


def test_x_inverse_and_clifford():
    p = _proto(ND)
    assert (p.X(2) * p.X(2, -1)).close_to(p.one())
    assert (p.C(1) * p.X(1)).close_to(p.X(1, -1) * p.C(1))
    assert (p.C(1) * p.X(2)).close_to(p.X(2) * p.C(1))
    d = _proto(DG)
    assert (d.C(1) * d.X(1)).close_to(-(d.X(1) * d.C(1)))


def test_t_clifford_relations(proto):
    T1, C1, C2 = proto.T(1), proto.C(1), proto.C(2)
    assert (T1 * C1).close_to(C2 * T1)
    if proto.flavor == sc.NONDEGENERATE:
        rhs = C1 * T1 - (C1 - C2) * proto.eps
    else:
        rhs = C1 * T1
    assert (T1 * C2).close_to(rhs)
    assert (C1 * C1).close_to(proto.one())
    assert (C1 * C2).close_to(-(C2 * C1))


def test_braid_relations(proto):
    T1, T2 = proto.T(1), proto.T(2)
    assert (T1 * T2 * T1).close_to(T2 * T1 * T2)


def _random(params, rng, k=3):
    n = params.n
    lo = -1 if params.nondegenerate else 0
    terms = {}
    for _ in range(k):
        alpha = tuple(rng.randint(lo, 1) for _ in range(n))
        w = tuple(rng.sample(range(1, n + 1), n))
        terms[(alpha, rng.randrange(1 << n), w)] = F(rng.choice([-2, -1, 1, 3]))
    return ar.AffineElement.for_params(params, terms)


@pytest.mark.parametrize("params", [ND, DG], ids=["nd", "d"])
def test_associativity_random(params):
    rng = random.Random(11)
    for _ in range(6):
        a, b, c = (_random(params, rng) for _ in range(3))
        assert ((a * b) * c).close_to(a * (b * c))


@pytest.mark.parametrize("params", [ND, DG], ids=["nd", "d"])
def test_star_is_an_anti_involution(params):
    rng = random.Random(5)
    for _ in range(4):
        a, b = _random(params, rng), _random(params, rng)
        assert ar.star(ar.star(a)).close_to(a)
        assert ar.star(a * b).close_to(ar.star(b) * ar.star(a))


def test_star_on_generators():
    p = _proto(ND)
    assert ar.star(p.T(1)).close_to(p.T(1) + p.C(1) * p.C(2) * p.eps)
    assert ar.star(p.C(1) * p.C(2)).close_to(-(p.C(1) * p.C(2)))
    assert ar.star(p.X(1) * p.C(1)).close_to(p.C(1) * p.X(1))


def test_polynomial_intertwiner_nondegenerate():
    p = _proto(ND)
    e = p.eps
    for i in (1, 2):
        phi = ar.intertwiner_tilde(p, i)
        z = ar.z_element(p, i)
        xi, xj = p.X(i), p.X(i + 1)
        a = p.X(i, -1) * p.X(i + 1, -1) * (xi * xj - 1) ** 2
        b = p.X(i, -1) * p.X(i + 1) * (xi * p.X(i + 1, -1) - 1) ** 2
        # the sign of the second term agrees with the scalar square identity
        assert (phi * phi).close_to(z * z * (z * z - (a + b) * (e * e)))
        assert (phi * xi).close_to(xj * phi)
        assert (phi * p.X(i, -1)).close_to(p.X(i + 1, -1) * phi)
        assert (phi * xj).close_to(xi * phi)
        assert (phi * p.C(i)).close_to(p.C(i + 1) * phi)
        assert (phi * p.C(i + 1)).close_to(p.C(i) * phi)
    p1, p2 = ar.intertwiner_tilde(p, 1), ar.intertwiner_tilde(p, 2)
    assert (p1 * p2 * p1).close_to(p2 * p1 * p2)
    assert (p.X(3) * p1).close_to(p1 * p.X(3))
    assert (p.C(3) * p1).close_to(p1 * p.C(3))


def test_polynomial_intertwiner_degenerate():
    p = _proto(DG)
    for i in (1, 2):
        phi = ar.intertwiner_tilde(p, i)
        xi, xj = p.X(i), p.X(i + 1)
        expect = (xi * xi + xj * xj) * 2 - (xi * xi - xj * xj) ** 2
        assert (phi * phi).close_to(expect)
        assert (phi * xi).close_to(xj * phi)
        assert (phi * p.C(i)).close_to(p.C(i + 1) * phi)
    p1, p2 = ar.intertwiner_tilde(p, 1), ar.intertwiner_tilde(p, 2)
    assert (p1 * p2 * p1).close_to(p2 * p1 * p2)


X0, Y0, Z0 = F(3), F(5, 7), F(-2, 9)


def _c_nd(x, y, e):
    a = y / x
    return 1 - e * e * (a / (a - 1) ** 2 + x * y / (x * y - 1) ** 2)


def _c_d(x, y):
    return 1 - 1 / (x - y) ** 2 - 1 / (x + y) ** 2


def test_scalar_intertwiner_square_nondegenerate():
    p = _proto(ND)
    Phi = lambda i, x, y: ar.intertwiner_fn(p, i, x, y)
    e = p.eps
    assert (Phi(1, X0, Y0) * Phi(1, Y0, X0)).close_to(p.one() * _c_nd(X0, Y0, e))
    lhs = Phi(1, X0, Y0) * Phi(1, X0, Y0)
    rhs = Phi(1, X0, Y0) * (-e * (X0 + Y0) / (X0 - Y0)) + _c_nd(X0, Y0, e)
    assert lhs.close_to(rhs)


def test_scalar_intertwiner_braid_nondegenerate():
    p = _proto(ND)
    Phi = lambda i, x, y: ar.intertwiner_fn(p, i, x, y)
    lhs = Phi(1, X0, Y0) * Phi(2, Z0, Y0) * Phi(1, Z0, X0)
    rhs = Phi(2, Z0, X0) * Phi(1, Z0, Y0) * Phi(2, X0, Y0)
    assert lhs.close_to(rhs)


def test_scalar_intertwiner_clifford_and_star_nondegenerate():
    p = _proto(ND)
    Phi = lambda i, x, y: ar.intertwiner_fn(p, i, x, y)
    assert (p.C(1) * Phi(1, X0, Y0)).close_to(Phi(1, X0, 1 / Y0) * p.C(2))
    assert (p.C(2) * Phi(1, X0, Y0)).close_to(Phi(1, 1 / X0, Y0) * p.C(1))
    assert (p.C(3) * Phi(1, X0, Y0)).close_to(Phi(1, X0, Y0) * p.C(3))
    assert ar.star(Phi(1, X0, Y0)).close_to(Phi(1, 1 / Y0, 1 / X0))


def test_scalar_intertwiner_inverse_nondegenerate():
    p = _proto(ND)
    e = p.eps
    phi = ar.intertwiner_fn(p, 2, X0, Y0)
    inv = (phi + e * (X0 + Y0) / (X0 - Y0)) * (1 / _c_nd(X0, Y0, e))
    assert (phi * inv).close_to(p.one())
    assert (inv * phi).close_to(p.one())


def test_scalar_intertwiner_degenerate():
    p = _proto(DG)
    phi = lambda i, x, y: ar.intertwiner_fn(p, i, x, y)
    assert (phi(1, X0, Y0) * phi(1, Y0, X0)).close_to(p.one() * _c_d(X0, Y0))
    lhs = phi(1, X0, Y0) * phi(1, X0, Y0)
    rhs = phi(1, X0, Y0) * (2 / (X0 - Y0)) + _c_d(X0, Y0)
    assert lhs.close_to(rhs)
    assert (p.C(1) * phi(1, X0, Y0)).close_to(phi(1, X0, -Y0) * p.C(2))
    assert (p.C(2) * phi(1, X0, Y0)).close_to(phi(1, -X0, Y0) * p.C(1))
    inv = (phi(1, X0, Y0) - 2 / (X0 - Y0)) * (1 / _c_d(X0, Y0))
    assert (phi(1, X0, Y0) * inv).close_to(p.one())
    lhs = phi(1, X0, Y0) * phi(2, Z0, Y0) * phi(1, Z0, X0)
    rhs = phi(2, Z0, X0) * phi(1, Z0, Y0) * phi(2, X0, Y0)
    assert lhs.close_to(rhs)


def test_scalar_intertwiner_domain():
    p = _proto(ND)
    with pytest.raises(sc.DomainError):
        ar.intertwiner_fn(p, 1, X0, 1 / X0)
    with pytest.raises(sc.DomainError):
        ar.intertwiner_fn(_proto(DG), 1, X0, -X0)


def test_json_terms():
    p = _proto(ND)
    out = (p.T(1) * p.X(1)).to_json()
    assert len(out) == 3
    assert {"alpha", "beta", "word", "coeff"} <= set(out[0])
