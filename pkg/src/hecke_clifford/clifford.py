"""The Clifford superalgebra C_n with C_i^2 = 1 and C_i C_j = -C_j C_i.

Monomials C^b are bitmasks; C^b means the generators of ``b`` multiplied in
increasing order.
"""
from itertools import product

import mpmath

from . import combinatorics as cb
from . import scalars as sc

I = mpmath.mpc(0, 1)


def reorder_sign(a, b):
    """Sign with C^a C^b = sign * C^(a xor b)."""
    swaps = 0
    while b:
        low = b & -b
        swaps += cb.popcount(a & ~((low << 1) - 1))
        b ^= low
    return -1 if swaps & 1 else 1


class CliffordElement:
    """A linear combination of Clifford monomials."""

    def __init__(self, terms=None, n=None):
        self.terms = {}
        for mask, coeff in (terms or {}).items():
            if not sc.is_zero(coeff, 0):
                self.terms[mask] = coeff
        self.n = n

    @classmethod
    def one(cls, n=None):
        return cls({0: sc.Fraction(1)}, n)

    @classmethod
    def gen(cls, i, n=None):
        return cls({cb.bit(i): sc.Fraction(1)}, n)

    @classmethod
    def monomial(cls, mask, n=None, coeff=1):
        return cls({mask: sc.parse(coeff) if isinstance(coeff, int) else coeff}, n)

    @classmethod
    def ordered_product(cls, letters, n=None):
        """C_{k1} C_{k2} ... in the given order."""
        out = cls.one(n)
        for k in letters:
            out = out * cls.gen(k, n)
        return out

    def __add__(self, other):
        other = _lift(other, self.n)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return CliffordElement(terms, self.n)

    __radd__ = __add__

    def __neg__(self):
        return CliffordElement({m: -c for m, c in self.terms.items()}, self.n)

    def __sub__(self, other):
        return self + (-_lift(other, self.n))

    def __rsub__(self, other):
        return _lift(other, self.n) - self

    def __mul__(self, other):
        if not isinstance(other, CliffordElement):
            return CliffordElement({m: c * other for m, c in self.terms.items()}, self.n)
        terms = {}
        for ma, ca in self.terms.items():
            for mb, cb_ in other.terms.items():
                m = ma ^ mb
                terms[m] = terms.get(m, 0) + reorder_sign(ma, mb) * ca * cb_
        return CliffordElement(terms, self.n or other.n)

    def __rmul__(self, other):
        return CliffordElement({m: other * c for m, c in self.terms.items()}, self.n)

    def inverse_monomial(self):
        """Inverse of a single monomial c*C^b: (C^b)^-1 = sign * C^b."""
        if len(self.terms) != 1:
            raise ValueError("only monomials are inverted here")
        (m, c), = self.terms.items()
        return CliffordElement({m: reorder_sign(m, m) * sc.inv(c)}, self.n)

    def coefficient(self, mask):
        return self.terms.get(mask, 0)

    def close_to(self, other, tol=sc.DEFAULT_TOLERANCE):
        diff = self - _lift(other, self.n)
        return all(sc.is_zero(c, tol) for c in diff.terms.values())

    def __repr__(self):
        parts = []
        for m in sorted(self.terms):
            letters = [str(k) for k in range(1, 64) if cb.has(m, k)]
            parts.append(f"{self.terms[m]}*C[{','.join(letters)}]")
        return " + ".join(parts) or "0"


def _lift(x, n):
    if isinstance(x, CliffordElement):
        return x
    return CliffordElement({0: sc.parse(x) if isinstance(x, int) else x}, n)


def mul(a, b):
    return a * b


def monomial_inverse(mask, n=None):
    return CliffordElement.monomial(mask, n).inverse_monomial()


def _pair_idempotent(a, b, sign, n):
    """(1 + sign*i*C_a C_b)/2."""
    cc = CliffordElement.gen(a, n) * CliffordElement.gen(b, n)
    return (CliffordElement.one(n) + cc * (sign * I)) * sc.Fraction(1, 2)


def primitive_idempotents(n):
    """The set I_n of super primitive idempotents of C_n."""
    if n == 1:
        return [CliffordElement.one(n)]
    out = []
    for signs in product((1, -1), repeat=n // 2):
        g = CliffordElement.one(n)
        for k, s in enumerate(signs, start=1):
            g = g * _pair_idempotent(2 * k - 1, 2 * k, s, n)
        out.append(g)
    return out


def gamma_from_letters(dseq, n):
    """2^{-floor(t/2)} * ordered product of (1 + i C_{d_{2k-1}} C_{d_{2k}})."""
    g = CliffordElement.one(n)
    for k in range(len(dseq) // 2):
        g = g * _pair_idempotent(dseq[2 * k], dseq[2 * k + 1], 1, n)
    return g


def gamma_t(t):
    return gamma_from_letters(cb.diagonal_data(t).dseq, t.n)


def conjugator(g1, g2, n, with_last=False):
    """The monomial M = C_1^b1 C_3^b3 ... with M g1 M^-1 = g2.

    With ``with_last`` (n odd) the monomial also carries C_n.
    """
    odds = list(range(1, 2 * (n // 2), 2))
    for bits in product((0, 1), repeat=len(odds)):
        mask = cb.mask_of(k for k, b in zip(odds, bits) if b)
        if with_last:
            if n % 2 == 0:
                raise ValueError("the extra generator exists only for odd n")
            mask |= cb.bit(n)
        M = CliffordElement.monomial(mask, n)
        if (M * g1 * M.inverse_monomial()).close_to(g2):
            return M
    raise RuntimeError("no conjugating monomial found")


def module_basis(gamma, n):
    """The basis C_1^b1 C_3^b3 ... C_{2 ceil(n/2)-1} gamma of C_n gamma."""
    odds = list(range(1, 2 * ((n + 1) // 2), 2))
    out = []
    for bits in product((0, 1), repeat=len(odds)):
        mask = cb.mask_of(k for k, b in zip(odds, bits) if b)
        out.append(CliffordElement.monomial(mask, n) * gamma)
    return out


def coefficient_matrix(elements, n):
    """Rows of coefficients over all 2^n monomials (as an mpmath matrix)."""
    M = mpmath.matrix(len(elements), 1 << n)
    for r, e in enumerate(elements):
        for m, c in e.terms.items():
            M[r, m] = sc.to_mpc(c)
    return M


def rank(elements, n, tol=sc.DEFAULT_TOLERANCE):
    """Numerical rank of a list of Clifford elements."""
    if not elements:
        return 0
    M = coefficient_matrix(elements, n)
    rows = [[M[r, c] for c in range(M.cols)] for r in range(M.rows)]
    rk = 0
    ncols = M.cols
    for col in range(ncols):
        piv = None
        best = tol
        for r in range(rk, len(rows)):
            if abs(rows[r][col]) > best:
                best, piv = abs(rows[r][col]), r
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        for r in range(rk + 1, len(rows)):
            f = rows[r][col] / rows[rk][col]
            if f != 0:
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rk])]
        rk += 1
    return rk
