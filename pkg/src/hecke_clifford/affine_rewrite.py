"""PBW normal forms in the affine Hecke-Clifford and affine Sergeev superalgebras.

An element is a dict mapping ``(alpha, beta, w)`` to a coefficient, standing
for ``X^alpha C^beta T_w`` (non-degenerate) or ``x^alpha c^beta w``
(degenerate).  ``alpha`` is a tuple of exponents, ``beta`` a bitmask and ``w``
a permutation tuple.  Products straighten the right factor from the left:
letters of ``T_w`` are pushed through ``X`` powers, then through Clifford
generators, and finally merged into the group part.
"""
from functools import lru_cache

from . import combinatorics as cb
from . import scalars as sc
from .clifford import reorder_sign

PRUNE = 1e-60


def _is_zero(c):
    if sc.is_exact(c):
        return c == 0
    return abs(c) <= PRUNE


class AffineElement:
    """A linear combination of PBW monomials."""

    def __init__(self, n, flavor, eps=None, terms=None):
        self.n = n
        self.flavor = flavor
        self.eps = eps
        self.terms = {}
        for key, c in (terms or {}).items():
            if not _is_zero(c):
                self.terms[key] = c

    # constructors

    @classmethod
    def for_params(cls, params, terms=None):
        eps = params.eps if params.nondegenerate else None
        return cls(params.n, params.flavor, eps, terms)

    def _new(self, terms):
        return AffineElement(self.n, self.flavor, self.eps, terms)

    def scalar(self, c):
        return self._new({self._unit_key(): sc.parse(c) if isinstance(c, int) else c})

    def _unit_key(self):
        return ((0,) * self.n, 0, cb.identity_perm(self.n))

    def one(self):
        return self.scalar(1)

    def X(self, i, power=1):
        alpha = [0] * self.n
        alpha[i - 1] = power
        if power < 0 and self.flavor == sc.DEGENERATE:
            raise ValueError("negative powers need the non-degenerate flavor")
        return self._new({(tuple(alpha), 0, cb.identity_perm(self.n)): sc.Fraction(1)})

    def C(self, i):
        return self._new({((0,) * self.n, cb.bit(i), cb.identity_perm(self.n)): sc.Fraction(1)})

    def T(self, i):
        return self._new({((0,) * self.n, 0, cb.transposition(self.n, i)): sc.Fraction(1)})

    def monomial(self, alpha, beta, w, coeff=1):
        return self._new({(tuple(alpha), beta, tuple(w)): sc.parse(coeff) if isinstance(coeff, int) else coeff})

    # arithmetic

    def _check(self, other):
        if other.flavor != self.flavor or other.n != self.n:
            raise ValueError("elements belong to different algebras")

    def __add__(self, other):
        if not isinstance(other, AffineElement):
            other = self.scalar(other)
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0) + c
        return self._new(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._new({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, AffineElement):
            other = self.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return self.scalar(other) - self

    def __mul__(self, other):
        if not isinstance(other, AffineElement):
            return self._new({k: c * other for k, c in self.terms.items()})
        return mul(self, other)

    def __rmul__(self, other):
        return self._new({k: other * c for k, c in self.terms.items()})

    def __pow__(self, k):
        out = self.one()
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self, tol=sc.DEFAULT_TOLERANCE):
        return all(sc.is_zero(c, tol) for c in self.terms.values())

    def close_to(self, other, tol=sc.DEFAULT_TOLERANCE):
        diff = self - other
        scale = max([1] + [float(sc.absval(c)) for c in self.terms.values()])
        return diff.is_zero(tol * scale)

    def coefficient(self, alpha, beta, w):
        return self.terms.get((tuple(alpha), beta, tuple(w)), 0)

    def to_json(self):
        out = []
        for (alpha, beta, w), c in sorted(self.terms.items(), key=lambda kv: repr(kv[0])):
            out.append({"alpha": list(alpha), "beta": [k for k in range(1, self.n + 1) if cb.has(beta, k)],
                        "word": cb.reduced_word(w), "coeff": sc.to_json(c)})
        return out

    def __repr__(self):
        parts = []
        for (alpha, beta, w), c in self.terms.items():
            parts.append(f"{c}*X{list(alpha)}C{[k for k in range(1, self.n + 1) if cb.has(beta, k)]}"
                         f"T{cb.reduced_word(w)}")
        return " + ".join(parts) or "0"


# ------------------------------------------------------------------ rewriting

# T_i X_i = X_{i+1} T_i - eps (X_{i+1} + C_iC_{i+1} X_i)
# T_i X_{i+1} = X_i T_i + eps (1 - C_iC_{i+1}) X_{i+1}
# The minus sign in the second rule is forced by associativity.
# T_i X_i^{+-1}, T_i X_{i+1}^{+-1} as lists of (da, db, cc, t, coeff-kind):
# X_i^da X_{i+1}^db (C_i C_{i+1})^cc T_i^t, coefficient 1, +eps or -eps.
_PUSH_ND = {
    ("i", 1): [(0, 1, 0, 1, 1), (0, 1, 0, 0, -1), (-1, 0, 1, 0, -1)],
    ("i", -1): [(0, -1, 0, 1, 1), (-1, 0, 0, 0, 1), (0, -1, 1, 0, 1)],
    ("j", 1): [(1, 0, 0, 1, 1), (0, 1, 0, 0, 1), (0, -1, 1, 0, -1)],
    ("j", -1): [(-1, 0, 0, 1, 1), (-1, 0, 0, 0, -1), (-1, 0, 1, 0, 1)],
}
# s_i x_i = x_{i+1} s_i - 1 - c_i c_{i+1};  s_i x_{i+1} = x_i s_i + 1 - c_i c_{i+1}
_PUSH_D = {
    ("i", 1): [(0, 1, 0, 1, 1), (0, 0, 0, 0, -1), (0, 0, 1, 0, -1)],
    ("j", 1): [(1, 0, 0, 1, 1), (0, 0, 0, 0, 1), (0, 0, 1, 0, -1)],
}


def _cc_past(flavor, a, b):
    """C_iC_{i+1} X_i^a X_{i+1}^b = sign * X_i^a' X_{i+1}^b' C_iC_{i+1}."""
    if flavor == sc.NONDEGENERATE:
        return 1, -a, -b
    return (-1) ** ((a + b) % 2), a, b


@lru_cache(maxsize=None)
def _push_poly(flavor, a, b):
    """T_i X_i^a X_{i+1}^b as {(da, db, cc, t): (unit, eps_power)} with integer units.

    Coefficients are polynomials in eps; they are stored as dicts eps_power -> int.
    """
    if a == 0 and b == 0:
        return {(0, 0, 0, 1): {0: 1}}
    rules = _PUSH_ND if flavor == sc.NONDEGENERATE else _PUSH_D
    if a != 0:
        s = 1 if a > 0 else -1
        rule, rest = rules[("i", s)], (a - s, b)
    else:
        s = 1 if b > 0 else -1
        rule, rest = rules[("j", s)], (a, b - s)
    out = {}

    def acc(key, poly):
        slot = out.setdefault(key, {})
        for p, v in poly.items():
            slot[p] = slot.get(p, 0) + v

    for da, db, cc, t, kind in rule:
        epow = 0 if kind == 1 and t == 1 else 1
        unit = kind if flavor == sc.NONDEGENERATE else kind
        if flavor == sc.DEGENERATE:
            epow = 0
        if t == 1:
            for (ra, rb, rcc, rt), poly in _push_poly(flavor, *rest).items():
                sign, ra2, rb2 = (1, ra, rb) if cc == 0 else _cc_past(flavor, ra, rb)
                ncc = cc + rcc
                if ncc == 2:
                    sign, ncc = -sign, 0
                acc((da + ra2, db + rb2, ncc, rt),
                    {p + epow: unit * sign * v for p, v in poly.items()})
        else:
            sign, ra2, rb2 = (1, rest[0], rest[1]) if cc == 0 else _cc_past(flavor, *rest)
            acc((da + ra2, db + rb2, cc, 0), {epow: unit * sign})
    return {k: {p: v for p, v in poly.items() if v} for k, poly in out.items()
            if any(poly.values())}


def _eval_poly(poly, eps):
    total = 0
    for p, v in poly.items():
        total = total + v * (sc.power(eps, p) if p else 1)
    return total


@lru_cache(maxsize=None)
def _push_clifford(flavor, n, i, beta):
    """T_i C^beta as {(beta', t): poly in eps}: sum of C^beta' T_i^t."""
    letters = [k for k in range(1, n + 1) if cb.has(beta, k)]
    # state: list of (prefix mask, t, poly) after processing letters from the left
    states = {(0, 1): {0: 1}}
    for k in letters:
        new = {}

        def acc(key, poly):
            slot = new.setdefault(key, {})
            for p, v in poly.items():
                slot[p] = slot.get(p, 0) + v

        for (mask, t), poly in states.items():
            if t == 0:
                sign = reorder_sign(mask, cb.bit(k))
                acc((mask ^ cb.bit(k), 0), {p: sign * v for p, v in poly.items()})
                continue
            if k == i:
                targets = [(i + 1, 1, 0, 1)]
            elif k == i + 1:
                targets = [(i, 1, 0, 1)]
                if flavor == sc.NONDEGENERATE:
                    targets += [(i, 0, 1, -1), (i + 1, 0, 1, 1)]
            else:
                targets = [(k, 1, 0, 1)]
            for letter, t2, epow, unit in targets:
                sign = reorder_sign(mask, cb.bit(letter))
                acc((mask ^ cb.bit(letter), t2), {p + epow: unit * sign * v for p, v in poly.items()})
        states = new
    return {k: {p: v for p, v in poly.items() if v} for k, poly in states.items() if any(poly.values())}


def _left_T(i, elem):
    """T_i * elem (or s_i * elem)."""
    n, flavor, eps = elem.n, elem.flavor, elem.eps
    si = cb.transposition(n, i)
    out = {}
    for (alpha, beta, w), c in elem.terms.items():
        a, b = alpha[i - 1], alpha[i]
        for (da, db, cc, t), poly in _push_poly(flavor, a, b).items():
            coeff = c * _eval_poly(poly, eps) if flavor == sc.NONDEGENERATE else c * poly.get(0, 0)
            new_alpha = list(alpha)
            new_alpha[i - 1], new_alpha[i] = da, db
            new_alpha = tuple(new_alpha)
            # now X^new_alpha (C_iC_{i+1})^cc T_i^t C^beta T_w
            if t == 0:
                pieces = {(beta, 0): {0: 1}}
            else:
                pieces = _push_clifford(flavor, n, i, beta)
            ccmask = (cb.bit(i) | cb.bit(i + 1)) if cc else 0
            for (bmask, tt), poly2 in pieces.items():
                c2 = coeff * (_eval_poly(poly2, eps) if flavor == sc.NONDEGENERATE else poly2.get(0, 0))
                sign = reorder_sign(ccmask, bmask) if cc else 1
                bmask2 = bmask ^ ccmask
                if tt == 0:
                    key = (new_alpha, bmask2, w)
                    out[key] = out.get(key, 0) + sign * c2
                    continue
                sw = cb.compose(si, w)
                if cb.length(sw) > cb.length(w):
                    key = (new_alpha, bmask2, sw)
                    out[key] = out.get(key, 0) + sign * c2
                else:
                    key = (new_alpha, bmask2, sw)
                    out[key] = out.get(key, 0) + sign * c2
                    if flavor == sc.NONDEGENERATE:
                        key = (new_alpha, bmask2, w)
                        out[key] = out.get(key, 0) + sign * c2 * eps
    return elem._new(out)


def _left_C(k, elem):
    out = {}
    for (alpha, beta, w), c in elem.terms.items():
        if elem.flavor == sc.NONDEGENERATE:
            alpha2 = list(alpha)
            alpha2[k - 1] = -alpha2[k - 1]
            alpha2, sign = tuple(alpha2), 1
        else:
            alpha2, sign = alpha, (-1) ** (alpha[k - 1] % 2)
        sign *= reorder_sign(cb.bit(k), beta)
        key = (alpha2, beta ^ cb.bit(k), w)
        out[key] = out.get(key, 0) + sign * c
    return elem._new(out)


def _left_X(alpha, elem):
    out = {}
    for (a2, beta, w), c in elem.terms.items():
        key = (tuple(x + y for x, y in zip(alpha, a2)), beta, w)
        out[key] = out.get(key, 0) + c
    return elem._new(out)


def _mul_monomial(key, elem):
    alpha, beta, w = key
    res = elem
    for j in reversed(cb.reduced_word(w)):
        res = _left_T(j, res)
    for k in reversed([k for k in range(1, elem.n + 1) if cb.has(beta, k)]):
        res = _left_C(k, res)
    if any(alpha):
        res = _left_X(alpha, res)
    return res


def mul(a, b):
    """Normal form of the product a*b."""
    a._check(b)
    out = {}
    for key, c in a.terms.items():
        part = _mul_monomial(key, b)
        for k2, c2 in part.terms.items():
            out[k2] = out.get(k2, 0) + c * c2
    return a._new(out)


def star(a):
    """The anti-involution: T_i* = T_i + eps C_iC_{i+1} (s_i* = s_i), C and X fixed."""
    out = a._new({})
    for (alpha, beta, w), c in a.terms.items():
        piece = a.one()
        for j in cb.reduced_word(w):
            tj = a.T(j)
            if a.flavor == sc.NONDEGENERATE:
                tj = tj + a.C(j) * a.C(j + 1) * a.eps
            piece = tj * piece
        letters = [k for k in range(1, a.n + 1) if cb.has(beta, k)]
        for k in reversed(letters):
            piece = piece * a.C(k)
        piece = piece * a.monomial(alpha, 0, cb.identity_perm(a.n))
        out = out + piece * c
    return out


# ------------------------------------------------------------ intertwiners

def z_element(proto, i):
    """z_i = X_i + X_i^-1 - X_{i+1} - X_{i+1}^-1."""
    return proto.X(i) + proto.X(i, -1) - proto.X(i + 1) - proto.X(i + 1, -1)


def intertwiner_tilde(proto, i):
    """The polynomial intertwiner (non-degenerate or degenerate, per flavor)."""
    if proto.flavor == sc.NONDEGENERATE:
        eps = proto.eps
        xi_inv2 = proto.X(i, -2)
        plus = proto.X(i) * proto.X(i + 1) - 1
        minus = proto.X(i) * proto.X(i + 1, -1) - 1
        z = z_element(proto, i)
        cc = proto.C(i) * proto.C(i + 1)
        return (z * z * proto.T(i) + xi_inv2 * plus * plus * minus * eps
                - xi_inv2 * plus * minus * minus * cc * eps)
    xi, xj = proto.X(i), proto.X(i + 1)
    return (proto.T(i) * (xi * xi - xj * xj) + (xi + xj)
            + proto.C(i) * proto.C(i + 1) * (xi - xj))


def intertwiner_fn(proto, i, x, y, params=None):
    """Phi_i(x, y) (non-degenerate) or phi_i(x, y) (degenerate)."""
    tol = params.tolerance if params is not None else sc.DEFAULT_TOLERANCE
    cc = proto.C(i) * proto.C(i + 1)
    if proto.flavor == sc.NONDEGENERATE:
        if sc.close(y, x, tol) or sc.close(y, sc.inv(x), tol):
            raise sc.DomainError("need y not in {x, 1/x}")
        eps = proto.eps
        return proto.T(i) + eps / (sc.inv(x) * y - 1) - cc * (eps / (x * y - 1))
    if sc.close(y, x, tol) or sc.close(y, -x, tol):
        raise sc.DomainError("need y not in {x, -x}")
    return proto.T(i) + sc.inv(x - y) + cc * sc.inv(x + y)


def generators(proto):
    """Named algebra generators used by the relation suites."""
    out = {}
    for i in range(1, proto.n + 1):
        out[f"X{i}"] = proto.X(i)
        out[f"C{i}"] = proto.C(i)
        if proto.flavor == sc.NONDEGENERATE:
            out[f"X{i}^-1"] = proto.X(i, -1)
    for i in range(1, proto.n):
        out[f"T{i}"] = proto.T(i)
    return out
