import random

import pytest

from hecke_clifford import clifford as cl
from hecke_clifford import combinatorics as cb
from hecke_clifford import scalars as sc

C = cl.CliffordElement


def _dense(e, n):
    """Brute-force oracle: coefficients over all monomials as complex numbers."""
    return [sc.to_complex(e.coefficient(m)) for m in range(1 << n)]


def _matrix_of_gen(k, n):
    """Left multiplication by C_k on the monomial basis, computed by sorting letters."""
    cols = []
    for m in range(1 << n):
        letters = [k] + [j for j in range(1, n + 1) if cb.has(m, j)]
        sign = 1
        # bubble sort with cancellation of equal neighbours
        out = []
        for x in letters:
            out.append(x)
        changed = True
        while changed:
            changed = False
            for i in range(len(out) - 1):
                if out[i] > out[i + 1]:
                    out[i], out[i + 1] = out[i + 1], out[i]
                    sign = -sign
                    changed = True
                    break
                if out[i] == out[i + 1]:
                    del out[i:i + 2]
                    changed = True
                    break
        cols.append((cb.mask_of(out), sign))
    return cols


def test_relations():
    n = 3
    one = C.one(n)
    assert (C.gen(1, n) * C.gen(1, n)).close_to(one)
    assert (C.gen(2, n) * C.gen(1, n)).close_to(-(C.gen(1, n) * C.gen(2, n)))
    lhs = (C.gen(1, n) * C.gen(2, n)) * (C.gen(2, n) * C.gen(3, n))
    assert lhs.close_to(C.gen(1, n) * C.gen(3, n))


def test_product_matches_sorting_oracle():
    n = 4
    for k in range(1, n + 1):
        for m, (target, sign) in enumerate(_matrix_of_gen(k, n)):
            prod = C.gen(k, n) * C.monomial(m, n)
            assert prod.terms == {target: sign}


def test_associativity_random():
    rng = random.Random(3)
    n = 4
    for _ in range(20):
        a, b, c = (C({m: sc.Fraction(rng.randint(-3, 3)) for m in rng.sample(range(16), 4)}, n)
                   for _ in range(3))
        assert ((a * b) * c).close_to(a * (b * c))


def test_monomial_inverse():
    n = 4
    for m in range(16):
        assert (C.monomial(m, n) * cl.monomial_inverse(m, n)).close_to(C.one(n))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_primitive_idempotents(n):
    idem = cl.primitive_idempotents(n)
    assert len(idem) == 2 ** (n // 2)
    total = C({}, n)
    for i, g in enumerate(idem):
        assert (g * g).close_to(g)
        total = total + g
        for j, h in enumerate(idem):
            if i != j:
                assert (g * h).close_to(C({}, n))
    assert total.close_to(C.one(n))


def test_n2_idempotents_explicit():
    a, b = cl.primitive_idempotents(2)
    half = sc.Fraction(1, 2)
    assert sc.close(a.coefficient(0), half)
    assert sc.close(a.coefficient(0b11), cl.I / 2)
    assert sc.close(b.coefficient(0b11), -cl.I / 2)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_conjugators_exist_and_are_unique(n):
    idem = cl.primitive_idempotents(n)
    variants = [False, True] if n % 2 else [False]
    for g1 in idem:
        for g2 in idem:
            for with_last in variants:
                M = cl.conjugator(g1, g2, n, with_last=with_last)
                assert (M * g1 * M.inverse_monomial()).close_to(g2)
                count = 0
                for bits in range(1 << (n // 2)):
                    mask = cb.mask_of(2 * k + 1 for k in range(n // 2) if bits >> k & 1)
                    if with_last:
                        mask |= cb.bit(n)
                    N = C.monomial(mask, n)
                    count += (N * g1 * N.inverse_monomial()).close_to(g2)
                assert count == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_module_basis_rank(n):
    for g in cl.primitive_idempotents(n):
        basis = cl.module_basis(g, n)
        assert len(basis) == 2 ** ((n + 1) // 2)
        assert cl.rank(basis, n) == len(basis)
        # the left ideal is spanned by C^b g over all b
        span = [C.monomial(m, n) * g for m in range(1 << n)]
        assert cl.rank(span, n) == len(basis)


def _all_tableaux():
    out = []
    for p in (sc.Params("nd", "s", (), 2, 4), sc.Params("nd", "ss", (), 2, 4),
              sc.Params("nd", "s", (3,), 2, 3)):
        out.extend(cb.std_all(p))
    return out


def test_gamma_t_properties():
    for t in _all_tableaux():
        g = cl.gamma_t(t)
        dd = cb.diagonal_data(t)
        assert (g * g).close_to(g)
        if dd.size == 0:
            assert g.close_to(C.one(t.n))
        for p in range(2, dd.size + 1, 2):
            lhs = C.gen(dd.dseq[p - 1], t.n) * g
            rhs = C.gen(dd.dseq[p - 2], t.n) * g * (-cl.I)
            assert lhs.close_to(rhs)


def test_gamma_for_small_strict_shape():
    shape = cb.Shape("s", ("0",), ((2, 1),))
    t = cb.row_tableau(shape)
    dd = cb.diagonal_data(t)
    assert dd.dseq == (1, 3)
    g = cl.gamma_t(t)
    expect = (C.one(3) + C.gen(1, 3) * C.gen(3, 3) * cl.I) * sc.Fraction(1, 2)
    assert g.close_to(expect)


def test_sign_identity_even():
    checked = 0
    for t in _all_tableaux():
        dd = cb.diagonal_data(t)
        if dd.size == 0 or dd.d_lambda:
            continue
        prod = C.ordered_product(dd.dseq[0::2], t.n)
        for a in cb.z2_sets(t)[2]:
            h = cb.hat(a, dd)
            lhs = cl.monomial_inverse(h, t.n) * C.monomial(a, t.n)
            assert lhs.close_to(prod * cb.sgn(h, dd))
            checked += 1
    assert checked > 0


def test_sign_identity_odd():
    checked = 0
    for t in _all_tableaux():
        dd = cb.diagonal_data(t)
        if not dd.d_lambda:
            continue
        n = t.n
        prod = C.ordered_product(dd.dseq[0:2 * (dd.size // 2):2], n)
        for a in cb.z2_sets(t)[2]:
            for x in (0, 1):
                for y in (0, 1):
                    h = cb.hat(cb.shift_sector(a, dd, x), dd)
                    lhs = cl.monomial_inverse(h, n) * C.monomial(cb.shift_sector(a, dd, y), n)
                    e = (x + y + 1) * (dd.size // 2 + cb.count_gt(a, dd.last))
                    s = (-1) ** e * cb.sgn(cb.hat(cb.shift_sector(a, dd, (y + 1) % 2), dd), dd, (x + y) % 2)
                    tail = C.gen(dd.last, n) if (x + y) % 2 else C.one(n)
                    assert lhs.close_to(prod * tail * s)
                    checked += 1
    assert checked > 0
