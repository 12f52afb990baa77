"""Operators on the sum of all simple modules, and the checks built on them.

Two algebra elements are equal in the cyclotomic quotient exactly when they
act the same way on every simple module, so an ``Operator`` (one dense block
per simple module) is the equality oracle for everything else.  Blocks are
complex double-double arrays, see ``_kernels``.
"""
import math
import random
import time
from itertools import permutations, product

import mpmath
import numpy as np

from . import _kernels as kn
from . import affine_rewrite as ar
from . import combinatorics as cb
from . import scalars as sc
from .simple_modules import all_modules

TOLERANCE = 1e-25


def dd_scalar(x):
    """A scalar as a length-4 dd vector (dd vectors pass through)."""
    if isinstance(x, np.ndarray):
        return x
    if isinstance(x, (int, sc.Fraction)):
        hi = float(x)
        lo = float(sc.Fraction(x) - sc.Fraction(hi))
        return np.array([hi, lo, 0.0, 0.0])
    if isinstance(x, complex):
        return np.array([x.real, 0.0, x.imag, 0.0])
    z = sc.to_mpc(x)
    rh = float(z.real)
    ih = float(z.imag)
    return np.array([rh, float(z.real - rh), ih, float(z.imag - ih)])


def dd_to_mpc(v):
    return mpmath.mpc(mpmath.mpf(v[0]) + mpmath.mpf(v[1]), mpmath.mpf(v[2]) + mpmath.mpf(v[3]))


def dd_from_sparse(entries, d):
    out = np.zeros((4, d, d))
    for (r, c), val in entries.items():
        out[:, r, c] = dd_scalar(val)
    return out


class Operator:
    """A block-diagonal operator, one dd block per simple module."""

    def __init__(self, blocks):
        self.blocks = list(blocks)

    @property
    def dims(self):
        return tuple(b.shape[-1] for b in self.blocks)

    @classmethod
    def identity(cls, dims):
        blocks = []
        for d in dims:
            b = np.zeros((4, d, d))
            b[0] = np.eye(d)
            blocks.append(b)
        return cls(blocks)

    @classmethod
    def zero(cls, dims):
        return cls([np.zeros((4, d, d)) for d in dims])

    @classmethod
    def diagonal(cls, values):
        """From per-block lists of scalars."""
        blocks = []
        for vals in values:
            d = len(vals)
            b = np.zeros((4, d, d))
            for k, v in enumerate(vals):
                b[:, k, k] = dd_scalar(v)
            blocks.append(b)
        return cls(blocks)

    def __add__(self, other):
        if not isinstance(other, Operator):
            other = Operator.identity(self.dims) * other
        return Operator([kn.add(a, b) for a, b in zip(self.blocks, other.blocks)])

    __radd__ = __add__

    def __neg__(self):
        return Operator([-a for a in self.blocks])

    def __sub__(self, other):
        if not isinstance(other, Operator):
            other = Operator.identity(self.dims) * other
        return Operator([kn.sub(a, b) for a, b in zip(self.blocks, other.blocks)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Operator):
            return self @ other
        s = dd_scalar(other)[:, None, None]
        return Operator([kn.mul(a, s) for a in self.blocks])

    def __rmul__(self, other):
        return self * other

    def __matmul__(self, other):
        return Operator([kn.matmul(a, b) for a, b in zip(self.blocks, other.blocks)])

    def scale_rows(self, diag_blocks):
        """diag(values) @ self, with values given as dd vectors per block."""
        return Operator([kn.mul(v[:, :, None], a) for v, a in zip(diag_blocks, self.blocks)])

    def maxabs(self):
        return max((kn.absmax(b) for b in self.blocks if b.size), default=0.0)

    def residual(self, other):
        return (self - other).maxabs()

    def close_to(self, other, tol=TOLERANCE):
        return self.residual(other) <= tol * max(1.0, self.maxabs(), other.maxabs())

    def vector(self):
        """All block entries flattened into a (4, sum d^2) array."""
        return np.concatenate([b.reshape(4, -1) for b in self.blocks], axis=1)

    def to_complex(self):
        return [kn.to_complex(b) for b in self.blocks]

    def block(self, k):
        return self.blocks[k]

    @classmethod
    def from_vector(cls, vec, dims):
        """Inverse of ``vector``."""
        blocks = []
        start = 0
        for d in dims:
            blocks.append(vec[:, start:start + d * d].reshape(4, d, d).copy())
            start += d * d
        return cls(blocks)


def cyclotomic_element(proto, params):
    """f(X_1) (non-degenerate) or g(x_1) (degenerate) as an affine element."""
    one = proto.one()
    out = one
    if params.nondegenerate:
        x = proto.X(1)
        if params.bullet in ("s", "ss"):
            out = out * (x - 1)
        if params.bullet == "ss":
            out = out * (x + 1)
        for Qi in params.Q:
            out = out * (x + proto.X(1, -1) - sc.q_of(Qi, params))
        return out
    x = proto.X(1)
    if params.bullet == "s":
        out = out * x
    for Qi in params.Q:
        out = out * (x * x - sc.q_of(Qi, params))
    return out


class Realization:
    """The faithful representation of the cyclotomic quotient on the sum of simples."""

    def __init__(self, params):
        self.params = params
        self.modules = all_modules(params)
        self.dims = tuple(M.dim for M in self.modules)
        self.n = params.n
        self.proto = ar.AffineElement.for_params(params)
        self._x_diag = {}
        self._c = {}
        self._t = {}
        self._mono = {}
        self._frame = None
        self._lu = None
        self._star_frame = None

    @property
    def N(self):
        return sum(self.dims)

    def _sparse_op(self, kind, i):
        return Operator([dd_from_sparse(M.matrix(kind, i), M.dim) for M in self.modules])

    def X(self, i, power=1):
        alpha = [0] * self.n
        alpha[i - 1] = power
        return self.monomial(tuple(alpha), 0, cb.identity_perm(self.n))

    def C(self, i):
        if i not in self._c:
            self._c[i] = self._sparse_op("C", i)
        return self._c[i]

    def T(self, i):
        if i not in self._t:
            self._t[i] = self._sparse_op("T", i)
        return self._t[i]

    def identity(self):
        return Operator.identity(self.dims)

    def _xdiag(self, alpha):
        """Per-block dd vectors of the eigenvalue of X^alpha on each basis vector."""
        if alpha not in self._x_diag:
            blocks = []
            for M in self.modules:
                vals = np.zeros((4, M.dim))
                for k, (t, beta, _) in enumerate(M.basis):
                    v = sc.Fraction(1)
                    for i, a in enumerate(alpha, start=1):
                        if a:
                            v = v * sc.power(M.eigen.eigenvalue(t, i, beta), a)
                    vals[:, k] = dd_scalar(v)
                blocks.append(vals)
            self._x_diag[alpha] = blocks
        return self._x_diag[alpha]

    def _ct(self, beta, w):
        key = (beta, w)
        if key not in self._mono:
            op = self.identity()
            for k in range(1, self.n + 1):
                if cb.has(beta, k):
                    op = op @ self.C(k)
            for j in cb.reduced_word(w):
                op = op @ self.T(j)
            self._mono[key] = op
        return self._mono[key]

    def monomial(self, alpha, beta, w):
        """The operator of X^alpha C^beta T_w."""
        return self._ct(beta, tuple(w)).scale_rows(self._xdiag(tuple(alpha)))

    def represent(self, e):
        out = Operator.zero(self.dims)
        for (alpha, beta, w), c in e.terms.items():
            out = out + self.monomial(alpha, beta, w) * c
        return out

    def parity_operator(self):
        return Operator.diagonal([[(-1) ** M.parity(b) for b in M.basis] for M in self.modules])

    # --- PBW frame

    def frame_keys(self):
        r = self.params.level
        keys = []
        for w in permutations(range(1, self.n + 1)):
            for beta in range(1 << self.n):
                for alpha in product(range(r), repeat=self.n):
                    keys.append((alpha, beta, w))
        return keys

    def frame(self):
        """(keys, matrix of shape (4, sum d^2, #keys))."""
        if self._frame is None:
            keys = self.frame_keys()
            cols = [self.monomial(*k).vector() for k in keys]
            self._frame = (keys, np.stack(cols, axis=2))
        return self._frame

    def frame_rank(self):
        """Numerical rank of the frame with the pivot gap that certifies it."""
        _, mat = self.frame()
        lu = self._factor()
        _, _, _, rank, pivots = lu
        scale = pivots[0] if len(pivots) else 0.0
        smallest = pivots[rank - 1] / scale if rank else 0.0
        return rank, smallest

    def _factor(self):
        if self._lu is None:
            self._lu = kn.lu_full(self.frame()[1])
        return self._lu

    def _solve_frame(self, op, tol):
        _, mat = self.frame()
        lu, rows, cols, rank, _ = self._factor()
        b = op.vector()[:, :, None]
        x = kn.lu_solve(lu, rows, cols, rank, b)
        back = kn.matmul(mat, x)
        res = kn.absmax(kn.sub(back, b))
        if res > tol * max(1.0, kn.absmax(b)):
            raise ValueError(f"operator is not in the image of the algebra (residual {res:.2e})")
        return x

    def extract_pbw(self, op, tol=TOLERANCE):
        """Coordinates of an operator over the frame; raises if it is not in the span."""
        keys, _ = self.frame()
        x = self._solve_frame(op, tol)
        coords = {}
        for k, key in enumerate(keys):
            v = x[:, k, 0]
            if np.any(v != 0.0):
                coords[key] = v
        return coords

    def star_frame(self):
        """Images of the starred frame monomials, in frame order."""
        if self._star_frame is None:
            keys, _ = self.frame()
            cols = [self.represent(ar.star(self.proto.monomial(*k))).vector() for k in keys]
            self._star_frame = np.stack(cols, axis=2)
        return self._star_frame

    def element_from_coords(self, coords):
        terms = {k: dd_to_mpc(v) for k, v in coords.items()}
        return ar.AffineElement.for_params(self.params, terms)


def realization(params):
    cache = params._cache
    if "realization" not in cache:
        cache["realization"] = Realization(params)
    return cache["realization"]


# ------------------------------------------------------------------ reports

def dimension_ledger(params):
    """N, per-block multiplicities and the dimension identity, computed independently."""
    shapes = cb.enumerate_multipartitions(params)
    blocks = []
    total = 0
    N = 0
    for shape in shapes:
        std = cb.enumerate_std(shape)
        tt = cb.diagonal_data(std[0]).size
        n = shape.n
        blocks.append({"shape": shape.to_json(), "std": len(std), "t_prime": tt,
                       "module_dim": 2 ** (n - tt // 2) * len(std),
                       "idempotents": 2 ** (n - (tt + 1) // 2) * len(std),
                       "block_dim": 2 ** (2 * n - tt) * len(std) ** 2})
        total += blocks[-1]["block_dim"]
        N += blocks[-1]["module_dim"]
    r = params.level
    rhs = r ** params.n * 2 ** params.n * math.factorial(params.n)
    return {"N": N, "dim": total, "pbw_dim": rhs, "balanced": total == rhs, "blocks": blocks}


def relation_residuals(params):
    """Max residual of each defining relation on the faithful module."""
    R = realization(params)
    n = params.n
    one = R.identity()
    X = {i: R.X(i) for i in range(1, n + 1)}
    C = {i: R.C(i) for i in range(1, n + 1)}
    T = {i: R.T(i) for i in range(1, n)}
    out = {}

    def rec(name, lhs, rhs):
        out[name] = max(out.get(name, 0.0), lhs.residual(rhs))

    nd = params.nondegenerate
    e = params.eps if nd else None
    for i in range(1, n):
        cc = C[i] @ C[i + 1]
        if nd:
            rec("quadratic", T[i] @ T[i], T[i] * e + one)
            rec("T_i X_i", T[i] @ X[i], X[i + 1] @ T[i] - (X[i + 1] + cc @ X[i]) * e)
            rec("T_i X_i+1", T[i] @ X[i + 1], X[i] @ T[i] + (one - cc) @ X[i + 1] * e)
            rec("T_i C_i+1", T[i] @ C[i + 1], C[i] @ T[i] - (C[i] - C[i + 1]) * e)
        else:
            rec("quadratic", T[i] @ T[i], one)
            rec("T_i X_i", T[i] @ X[i], X[i + 1] @ T[i] - one - cc)
            rec("T_i X_i+1", T[i] @ X[i + 1], X[i] @ T[i] + one - cc)
            rec("T_i C_i+1", T[i] @ C[i + 1], C[i] @ T[i])
        rec("T_i C_i", T[i] @ C[i], C[i + 1] @ T[i])
        for j in range(1, n + 1):
            if j not in (i, i + 1):
                rec("T_i X_j", T[i] @ X[j], X[j] @ T[i])
                rec("T_i C_j", T[i] @ C[j], C[j] @ T[i])
        for j in range(i + 2, n):
            rec("far commutation", T[i] @ T[j], T[j] @ T[i])
        if i + 1 < n:
            rec("braid", T[i] @ T[i + 1] @ T[i], T[i + 1] @ T[i] @ T[i + 1])
    for i in range(1, n + 1):
        rec("C_i^2", C[i] @ C[i], one)
        if nd:
            rec("X_i X_i^-1", X[i] @ R.X(i, -1), one)
            rec("X_i C_i", X[i] @ C[i], C[i] @ R.X(i, -1))
        else:
            rec("X_i C_i", X[i] @ C[i], -(C[i] @ X[i]))
        for j in range(1, n + 1):
            if j != i:
                rec("X_i X_j", X[i] @ X[j], X[j] @ X[i])
                rec("C_i C_j", C[i] @ C[j], -(C[j] @ C[i]))
                rec("X_i C_j", X[i] @ C[j], C[j] @ X[i])
    rec("cyclotomic", R.represent(cyclotomic_element(R.proto, params)), Operator.zero(R.dims))
    return out


def relation_suite(params, tol=TOLERANCE):
    start = time.perf_counter()
    res = relation_residuals(params)
    worst = max(res.values())
    return {"residuals": res, "max_residual": worst, "passed": worst < tol,
            "seconds": time.perf_counter() - start}


def random_element(params, rng, degree=3, terms=2):
    """A short random element with generators of total degree at most ``degree``."""
    proto = ar.AffineElement.for_params(params)
    gens = list(ar.generators(proto).values())
    out = proto.scalar(0)
    for _ in range(terms):
        word = proto.one()
        for _ in range(rng.randint(1, degree)):
            word = word * rng.choice(gens)
        out = out + word * sc.Fraction(rng.randint(1, 5), rng.randint(1, 3))
    return out


def oracle_concordance(params, count=100, seed=0, tol=TOLERANCE):
    """Compare rewriting-then-representing against composing operators directly."""
    rng = random.Random(seed)
    R = realization(params)
    proto = R.proto
    gens = ar.generators(proto)
    names = list(gens)
    worst = 0.0
    for _ in range(count):
        word = [rng.choice(names) for _ in range(rng.randint(1, 3))]
        coeff = sc.Fraction(rng.randint(1, 7), rng.randint(1, 4))
        elem = proto.one()
        op = R.identity()
        for g in word:
            elem = elem * gens[g]
            op = op @ R.represent(gens[g])
        worst = max(worst, R.represent(elem * coeff).residual(op * coeff))
    return {"max_residual": worst, "passed": worst < tol, "count": count}


def star_operator(R, op):
    """Star of an operator via PBW extraction, the affine star and re-representation."""
    x = R._solve_frame(op, TOLERANCE)
    return Operator.from_vector(kn.matmul(R.star_frame(), x)[:, :, 0], R.dims)
