"""Primitive and central idempotents, realized as operators on the simple modules.

An index triple ``(t, alpha, beta)`` pairs a standard tableau with a Clifford
mask ``alpha`` on the odd diagonal letters and a mask ``beta`` off the
diagonal.  The idempotent F_T is the Clifford projector C^alpha gamma_t
C^-alpha times a Lagrange-type polynomial in X_k^{+-1} (or x_k) that picks
out the eigenvalue pattern of ``(t, beta)``.
"""
from collections import namedtuple

import numpy as np

from . import clifford as cl
from . import combinatorics as cb
from . import scalars as sc
from .simple_modules import all_modules, eigen_data
from .verify import TOLERANCE, Operator, realization, star_operator

Triple = namedtuple("Triple", "t alpha beta")

EVEN, SHIFTED, DIFFERENT = "evenly-isomorphic", "pi-shifted", "different-block"


def tri(shape, sector=0):
    """Tri_a(lambda) in tableau order."""
    out = []
    for t in cb.enumerate_std(shape):
        betas, _, even, odd = cb.z2_sets(t)
        alphas = even if sector % 2 == 0 else odd
        for alpha in alphas:
            for beta in betas:
                out.append(Triple(t, alpha, beta))
    return out


def tri_all(params, sector=0):
    out = []
    for shape in cb.enumerate_multipartitions(params):
        out.extend(tri(shape, sector))
    return out


def shifted(T, a):
    """T_a: move alpha into sector a."""
    dd = cb.diagonal_data(T.t)
    return Triple(T.t, cb.shift_sector(T.alpha, dd, a), T.beta)


def hat_triple(T):
    return Triple(T.t, cb.hat(T.alpha, cb.diagonal_data(T.t)), T.beta)


def expected_count(shape):
    """2^{n - ceil(t'/2)} |Std(lambda)| primitive idempotents per block."""
    std = cb.enumerate_std(shape)
    tt = cb.diagonal_data(std[0]).size
    return 2 ** (shape.n - (tt + 1) // 2) * len(std)


def _dedup(values, tol):
    out = []
    for v in values:
        if not any(sc.close(v, w, tol) for w in out):
            out.append(v)
    return out


def eigenvalue_sets(params):
    """B(k) (or U(k)): both eigenvalue roots of every residue at position k."""
    cache = params._cache
    if "eigen_sets" not in cache:
        sets = {}
        for k in range(1, params.n + 1):
            vals = []
            for t in cb.std_all(params):
                r = cb.residue(t.box_of[k], t.shape, params)
                for sign in (1, -1):
                    if params.nondegenerate:
                        vals.append(sc.b_pm(r, sign, params))
                    else:
                        vals.append(sc.u_pm(r, sign))
            sets[k] = _dedup(vals, params.tolerance)
        cache["eigen_sets"] = sets
    return cache["eigen_sets"]


def _plus_root(t, k, params):
    r = cb.residue(t.box_of[k], t.shape, params)
    return sc.b_pm(r, 1, params) if params.nondegenerate else sc.u_pm(r, 1)


def _lagrange_factor(params, k, target, exclude, nu_k):
    """x -> prod_{b in exclude} (x' - b)/(target - b) with x' = x^nu or nu*x."""
    dens = []
    for b in exclude:
        d = target - b
        if sc.is_zero(d, params.tolerance):
            raise sc.DomainError(f"eigenvalue collision at position {k}: parameters are not separate")
        dens.append((b, d))

    def value(x):
        if params.nondegenerate:
            y = x if nu_k > 0 else sc.inv(x)
        else:
            y = nu_k * x
        out = sc.Fraction(1)
        for b, d in dens:
            out = out * (y - b) / d
        return out
    return value


def _polynomial_values(params, factors):
    """Per-block diagonal values of prod_k factors[k](X_k) on every basis vector."""
    ev = eigen_data(params)
    values = []
    for M in all_modules(params):
        vals = []
        for s, beta_s, _ in M.basis:
            v = sc.Fraction(1)
            for k, f in factors.items():
                v = v * f(ev.eigenvalue(s, k, beta_s))
                if sc.is_zero(v, 1e-60):
                    break
            vals.append(v)
        values.append(vals)
    return values


def polynomial_part(t, beta, params):
    """The Lagrange product selecting (t, beta), which equals F_(t, beta) = sum_alpha F_(t, alpha, beta)."""
    sets = eigenvalue_sets(params)
    factors = {}
    for k in range(1, params.n + 1):
        target = _plus_root(t, k, params)
        exclude = [b for b in sets[k] if not sc.close(b, target, params.tolerance)]
        factors[k] = _lagrange_factor(params, k, target, exclude, cb.nu(beta, k))
    return Operator.diagonal(_polynomial_values(params, factors))


def clifford_factor(t, alpha):
    """C^alpha gamma_t (C^alpha)^-1 as a Clifford element."""
    n = t.n
    ca = cl.CliffordElement.monomial(alpha, n)
    return ca * cl.gamma_t(t) * cl.monomial_inverse(alpha, n)


def clifford_operator(R, elem):
    out = Operator.zero(R.dims)
    for mask, c in elem.terms.items():
        out = out + R._ct(mask, cb.identity_perm(R.n)) * c
    return out


def F(T, params, commuted=False):
    """The primitive idempotent F_T as an operator.

    With ``commuted`` the polynomial part is written to the left of the
    Clifford projector instead of to the right.
    """
    cache = params._cache.setdefault("F", {})
    key = (T, commuted)
    if key not in cache:
        R = realization(params)
        cliff = clifford_operator(R, clifford_factor(T.t, T.alpha))
        poly = polynomial_part(T.t, T.beta, params)
        cache[key] = poly @ cliff if commuted else cliff @ poly
    return cache[key]


def F_lambda(shape, params):
    out = Operator.zero(realization(params).dims)
    for T in tri(shape):
        out = out + F(T, params)
    return out


def block_of(T):
    return T.t.shape


def star_F(T):
    """The index of F_T^*: the triple with alpha replaced by its hat."""
    return hat_triple(T)


def iso_class(T, S):
    """How the simple left ideals generated by F_T and F_S compare."""
    if T.t.shape != S.t.shape:
        return DIFFERENT
    if cb.diagonal_data(T.t).d_lambda:
        return EVEN
    pt = cb.popcount(T.alpha) + cb.popcount(T.beta)
    ps = cb.popcount(S.alpha) + cb.popcount(S.beta)
    return EVEN if (pt - ps) % 2 == 0 else SHIFTED


def addable_box_product(t, beta, params):
    """The addable-box product of the Sergeev algebra (g = x_1)."""
    if params.nondegenerate or params.bullet != "s" or params.m:
        raise sc.DomainError("the addable-box idempotent is defined for the Sergeev algebra")
    factors = {}
    for k in range(1, params.n + 1):
        target = _plus_root(t, k, params)
        exclude = []
        for box in addable_boxes(t, k - 1, params):
            r = cb.residue(box, t.shape, params)
            exclude.extend([sc.u_pm(r, 1), sc.u_pm(r, -1)])
        exclude = [u for u in _dedup(exclude, params.tolerance)
                   if not sc.close(u, target, params.tolerance)]
        factors[k] = _lagrange_factor(params, k, target, exclude, cb.nu(beta, k))
    return Operator.diagonal(_polynomial_values(params, factors))


def addable_boxes(t, k, params):
    """Boxes that can be added to the subtableau of t holding 1..k."""
    inner = {t.box_of[j] for j in range(1, k + 1)}
    out = set()
    for shape in cb.enumerate_multipartitions(params, k + 1):
        boxes = set(shape.boxes)
        if inner <= boxes:
            out |= boxes - inner
    return sorted(out)


# ------------------------------------------------------------------ reports

def idempotent_report(params, check_star=True):
    """Completeness, orthogonality, block structure and star behavior of all F_T."""
    R = realization(params)
    triples = tri_all(params)
    ops = {T: F(T, params) for T in triples}
    total = Operator.zero(R.dims)
    for op in ops.values():
        total = total + op
    res = {"sum": total.residual(R.identity())}
    worst = 0.0
    for S in triples:
        for T in triples:
            prod = ops[S] @ ops[T]
            target = ops[S] if S == T else Operator.zero(R.dims)
            worst = max(worst, prod.residual(target))
    res["orthogonality"] = worst
    P = R.parity_operator()
    res["even"] = max(((P @ op) - (op @ P)).maxabs() for op in ops.values())
    res["commuted_form"] = max(F(T, params, commuted=True).residual(op) for T, op in ops.items())
    gens = [R.X(k) for k in range(1, R.n + 1)]
    res["commutes_with_X"] = max((g @ op).residual(op @ g) for op in ops.values() for g in gens)

    blocks = []
    central = 0.0
    block_id = 0.0
    all_gens = gens + [R.C(k) for k in range(1, R.n + 1)] + [R.T(k) for k in range(1, R.n)]
    for k, shape in enumerate(cb.enumerate_multipartitions(params)):
        Fl = F_lambda(shape, params)
        central = max(central, max((g @ Fl).residual(Fl @ g) for g in all_gens))
        for j, b in enumerate(Fl.blocks):
            target = np.zeros_like(b)
            if j == k:
                target[0] = np.eye(b.shape[-1])
            block_id = max(block_id, float(np.max(np.abs(b - target))) if b.size else 0.0)
        found = len(tri(shape))
        blocks.append({"shape": shape.to_json(), "count": found, "expected": expected_count(shape),
                       "type": "Q" if cb.diagonal_data(cb.row_tableau(shape)).d_lambda else "M"})
    res["central"] = central
    res["block_identity"] = block_id
    if check_star:
        res["star"] = max(star_operator(R, op).residual(ops[star_F(T)]) for T, op in ops.items())
    worst = max(res.values())
    counts_ok = all(b["count"] == b["expected"] for b in blocks)
    return {"residuals": res, "max_residual": worst, "blocks": blocks,
            "passed": worst < TOLERANCE and counts_ok}


def addable_box_report(params):
    """Compare the addable-box product with F_(t, beta) for every (t, beta)."""
    worst = 0.0
    idem = 0.0
    count = 0
    for t in cb.std_all(params):
        betas, _, even, _ = cb.z2_sets(t)
        for beta in betas:
            E = addable_box_product(t, beta, params)
            total = Operator.zero(E.dims)
            for alpha in even:
                total = total + F(Triple(t, alpha, beta), params)
            worst = max(worst, E.residual(total))
            idem = max(idem, (E @ E).residual(E))
            count += 1
    return {"pairs": count, "max_residual": worst, "idempotent_residual": idem,
            "passed": max(worst, idem) < TOLERANCE}
