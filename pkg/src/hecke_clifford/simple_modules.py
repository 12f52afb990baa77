"""The simple modules D(lambda) with their explicit generator actions.

A basis vector is a triple ``(t, beta, alpha)`` standing for
``C^beta C^alpha v_t``: ``beta`` is a mask supported off the diagonal letters
of ``t`` and ``alpha`` a mask supported on the odd-position diagonal letters.
"""
from . import combinatorics as cb
from . import scalars as sc
from .clifford import I


class EigenData:
    """Eigenvalues b_{t,i} (or u_{t,i}), the coefficients c_t(i) and their roots.

    One instance is shared per parameter set so every consumer of a square
    root ``sqrt(c_t(i))`` sees the same branch.
    """

    def __init__(self, params):
        self.params = params
        self._base = {}
        self._roots = {}

    def base(self, t, i):
        """b_{t,i} = b_-(res_t(i)) or u_{t,i} = u_+(res_t(i))."""
        key = (t, i)
        if key not in self._base:
            r = cb.residue(t.box_of[i], t.shape, self.params)
            if self.params.nondegenerate:
                self._base[key] = sc.b_pm(r, -1, self.params)
            else:
                self._base[key] = sc.u_pm(r, 1)
        return self._base[key]

    def eigenvalue(self, t, i, beta):
        """Eigenvalue of X_i (x_i) on C^beta C^alpha v_t."""
        nu = cb.nu(beta, i)
        b = self.base(t, i)
        if self.params.nondegenerate:
            return b if nu < 0 else sc.inv(b)
        return b if nu > 0 else -b

    def c(self, t, i):
        b, b2 = self.base(t, i), self.base(t, i + 1)
        if self.params.nondegenerate:
            e = self.params.eps
            a = sc.inv(b) * b2
            p = b * b2
            return 1 - e * e * (a / (a - 1) ** 2 + p / (p - 1) ** 2)
        return 1 - sc.inv((b - b2) ** 2) - sc.inv((b + b2) ** 2)

    def sqrt_c(self, t, i):
        """sqrt(c_t(i)), memoized on the unordered pair {t, s_i t}."""
        u = t.swap(i)
        key = (i, frozenset((t, u)))
        if key not in self._roots:
            # compute from a fixed representative of the pair
            rep = min((t, u), key=lambda x: x.entries)
            self._roots[key] = sc.sqrt(self.c(rep, i))
        return self._roots[key]


def eigen_data(params):
    cache = params._cache
    if "eigen" not in cache:
        cache["eigen"] = EigenData(params)
    return cache["eigen"]


class ModuleVector:
    """A finite linear combination of basis triples."""

    def __init__(self, coeffs=None):
        self.coeffs = {}
        for k, c in (coeffs or {}).items():
            if not sc.is_zero(c, 1e-60):
                self.coeffs[k] = c

    @classmethod
    def basis(cls, triple):
        return cls({triple: sc.Fraction(1)})

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, 0) + c
        return ModuleVector(out)

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, c):
        return ModuleVector({k: v * c for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    @property
    def parity(self):
        """Parity of a homogeneous vector, None for zero or mixed vectors."""
        pars = {(cb.popcount(b) + cb.popcount(a)) % 2 for (_, b, a) in self.coeffs}
        return pars.pop() if len(pars) == 1 else None

    def close_to(self, other, tol=1e-25):
        diff = self - other
        return all(sc.is_zero(c, tol) for c in diff.coeffs.values())

    def __repr__(self):
        return " + ".join(f"{c}*[{t.entries},{b},{a}]" for (t, b, a), c in self.coeffs.items()) or "0"


class SimpleModule:
    """The simple module indexed by a multipartition."""

    def __init__(self, shape, params):
        self.shape = shape
        self.params = params
        self.eigen = eigen_data(params)
        self.tableaux = cb.enumerate_std(shape)
        self._std = set(self.tableaux)
        self._dd = {t: cb.diagonal_data(t) for t in self.tableaux}
        self.basis = []
        for t in self.tableaux:
            betas, alphas, _, _ = cb.z2_sets(t)
            for beta in betas:
                for alpha in alphas:
                    self.basis.append((t, beta, alpha))
        self.index = {b: k for k, b in enumerate(self.basis)}

    @property
    def dim(self):
        return len(self.basis)

    @property
    def d_lambda(self):
        return self._dd[self.tableaux[0]].d_lambda

    def diagonal(self, t):
        return self._dd[t]

    def parity(self, triple):
        _, beta, alpha = triple
        return (cb.popcount(beta) + cb.popcount(alpha)) % 2

    # --- actions on basis triples, returning lists of (coeff, triple)

    def c_basis(self, i, triple):
        t, beta, alpha = triple
        dd = self._dd[t]
        p = dd.position(i)
        if p is None:
            sign = (-1) ** cb.count_lt(beta, i)
            return [(sc.Fraction(sign), (t, beta ^ cb.bit(i), alpha))]
        if p % 2:
            sign = (-1) ** (cb.popcount(beta) + cb.count_lt(alpha, i))
            return [(sc.Fraction(sign), (t, beta, alpha ^ cb.bit(i)))]
        j = dd.dseq[p - 2]
        sign = (-1) ** (cb.popcount(beta) + cb.count_le(alpha, j))
        return [(-I * sign, (t, beta, alpha ^ cb.bit(j)))]

    def x_basis(self, i, triple):
        t, beta, _ = triple
        return [(self.eigen.eigenvalue(t, i, beta), triple)]

    def cc_basis(self, i, triple):
        """C_i C_{i+1} applied through the C action."""
        out = {}
        for c1, tr1 in self.c_basis(i + 1, triple):
            for c2, tr2 in self.c_basis(i, tr1):
                out[tr2] = out.get(tr2, 0) + c1 * c2
        return [(c, tr) for tr, c in out.items()]

    def r_basis(self, i, triple):
        """The element R(i, beta, alpha, t) from its closed-form case table."""
        t, beta, alpha = triple
        dd = self._dd[t]
        p, p2 = dd.position(i), dd.position(i + 1)
        e_i, e_j = cb.bit(i), cb.bit(i + 1)

        def dpos(k):
            return dd.dseq[k - 1]

        if p is None and p2 is None:
            sign = -1 if cb.has(beta, i) else 1
            return [(sc.Fraction(sign), (t, beta ^ e_i ^ e_j, alpha))]
        if p is not None and p2 is None:
            # one more sign than the count of beta letters above i suggests:
            # C_{i+1} must also pass C_i's own slot, see the module tests
            if p % 2:
                sign = (-1) ** (1 + cb.count_gt(beta, i) + cb.count_lt(alpha, i))
                return [(sc.Fraction(sign), (t, beta ^ e_j, alpha ^ e_i))]
            k = dpos(p - 1)
            sign = (-1) ** (1 + cb.count_gt(beta, i) + cb.count_le(alpha, k))
            return [(-I * sign, (t, beta ^ e_j, alpha ^ cb.bit(k)))]
        if p is None and p2 is not None:
            if p2 % 2:
                sign = (-1) ** (cb.count_ge(beta, i) + cb.count_lt(alpha, i + 1))
                return [(sc.Fraction(sign), (t, beta ^ e_i, alpha ^ e_j))]
            k = dpos(p2 - 1)
            sign = (-1) ** (cb.count_ge(beta, i) + cb.count_le(alpha, k))
            return [(-I * sign, (t, beta ^ e_i, alpha ^ cb.bit(k)))]
        if not self.params.nondegenerate:
            raise AssertionError("consecutive diagonal letters cannot occur here")
        if p % 2 and p2 % 2:
            sign = -1 if cb.has(alpha, i) else 1
            return [(sc.Fraction(sign), (t, beta, alpha ^ e_i ^ e_j))]
        if p % 2 == 0 and p2 % 2:
            k = dpos(p - 1)
            sign = (-1) ** (cb.count_lt(alpha, i + 1) + cb.count_le(alpha ^ e_j, k))
            return [(-I * sign, (t, beta, alpha ^ cb.bit(k) ^ e_j))]
        if p % 2 and p2 % 2 == 0:
            k = dpos(p2 - 1)
            sign = (-1) ** (cb.count_le(alpha, k) + cb.count_lt(alpha ^ cb.bit(k), i))
            return [(-I * sign, (t, beta, alpha ^ e_i ^ cb.bit(k)))]
        k, k2 = dpos(p - 1), dpos(p2 - 1)
        sign = (-1) ** (1 + cb.count_le(alpha, k2) + cb.count_le(alpha ^ cb.bit(k2), k))
        return [(sc.Fraction(sign), (t, beta, alpha ^ cb.bit(k) ^ cb.bit(k2)))]

    def t_basis(self, i, triple):
        """T_i (or s_i) on a basis vector."""
        t, beta, alpha = triple
        ev = self.eigen
        b, b2 = ev.base(t, i), ev.base(t, i + 1)
        nu, nu2 = cb.nu(beta, i), cb.nu(beta, i + 1)
        out = {}
        if self.params.nondegenerate:
            e = self.params.eps
            diag = -e * sc.inv(sc.power(b, -nu) * sc.power(b2, nu2) - 1)
            rco = e * sc.inv(sc.power(b, nu) * sc.power(b2, nu2) - 1)
        else:
            diag = -sc.inv(nu * b - nu2 * b2)
            rco = -sc.inv(nu * b + nu2 * b2)
        out[triple] = diag
        for c, tr in self.r_basis(i, triple):
            out[tr] = out.get(tr, 0) + rco * c
        u = t.swap(i)
        if u in self._std:
            db = cb.has(beta, i) and cb.has(beta, i + 1)
            da = cb.has(alpha, i) and cb.has(alpha, i + 1)
            if self.params.nondegenerate:
                sign = -1 if (db + da) % 2 else 1
            else:
                sign = -1 if db else 1
            tr = (u, cb.swap_bits(beta, i), cb.swap_bits(alpha, i))
            out[tr] = out.get(tr, 0) + sign * ev.sqrt_c(t, i)
        return [(c, tr) for tr, c in out.items()]

    # --- vector-level actions

    def _apply(self, fn, i, v):
        out = {}
        for triple, c in v.coeffs.items():
            for c2, tr in fn(i, triple):
                out[tr] = out.get(tr, 0) + c * c2
        return ModuleVector(out)

    def act_X(self, i, v):
        return self._apply(self.x_basis, i, v)

    def act_C(self, i, v):
        return self._apply(self.c_basis, i, v)

    def act_T(self, i, v):
        return self._apply(self.t_basis, i, v)

    def act_R(self, i, v):
        return self._apply(self.r_basis, i, v)

    # degenerate names
    act_x, act_c, act_s = act_X, act_C, act_T

    def matrix(self, kind, i):
        """Sparse matrix {(row, col): coeff} of a generator on this module."""
        fn = {"X": self.x_basis, "C": self.c_basis, "T": self.t_basis, "R": self.r_basis}[kind]
        out = {}
        for col, triple in enumerate(self.basis):
            for c, tr in fn(i, triple):
                out[(self.index[tr], col)] = c
        return out

    def eigen_table(self):
        """JSON-ready table of b_{t,i} (or u_{t,i})."""
        return [{"tableau": t.rows(),
                 "values": [sc.to_json(self.eigen.base(t, i)) for i in range(1, t.n + 1)]}
                for t in self.tableaux]


def build_module(shape, params):
    if not cb.separate_check(params):
        raise sc.DomainError("parameters are not separate")
    return SimpleModule(shape, params)


def all_modules(params):
    """Simple modules for every multipartition of size n, cached per parameter set."""
    cache = params._cache
    if "modules" not in cache:
        if not cb.separate_check(params):
            raise sc.DomainError("parameters are not separate")
        cache["modules"] = [SimpleModule(s, params) for s in cb.enumerate_multipartitions(params)]
    return cache["modules"]


def expected_dim(shape, params):
    std = cb.enumerate_std(shape)
    tt = cb.diagonal_data(std[0]).size
    return 2 ** (shape.n - tt // 2) * len(std)
