"""Command line front end.

Every subcommand prints one JSON document (or writes it with ``--output``)
carrying ``"schema": "v1"``.  Exit codes: 0 when every checked identity
holds, 1 for a bad configuration or a failed check, 2 when the parameters
are not separate.
"""
import itertools
import json
import math
import os
import sys
import time
from fractions import Fraction

import click
import mpmath
import numpy as np

from . import combinatorics as cb
from . import idempotents as idm
from . import scalars as sc
from . import seminormal as sn
from . import verify as vf
from .simple_modules import all_modules

SCHEMA = "v1"
PRECISION_ENV = "HECKE_CLIFFORD_PRECISION"


class NotSeparate(Exception):
    def __init__(self, tableau, k):
        super().__init__(f"parameters are not separate: letters {k} and {k + 1} of {tableau}")
        self.tableau = tableau
        self.k = k


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (Fraction, mpmath.mpc, mpmath.mpf)):
        return sc.to_json(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def default_Q(m, flavor):
    """Q_l = 2l + 1 (non-degenerate) or l + 3/2 (degenerate) when only m is given."""
    if flavor == sc.NONDEGENERATE:
        return tuple(str(2 * l + 1) for l in range(1, m + 1))
    return tuple(str(Fraction(2 * l + 3, 2)) for l in range(1, m + 1))


def build_params(flavor, bullet, m, q, Q, n, precision, tolerance):
    """Params from CLI strings; raises click.BadParameter naming the violated invariant."""
    Qs = tuple(x for x in Q.split(",") if x.strip()) if Q else ()
    if m is None:
        m = len(Qs)
    if not Qs:
        Qs = default_Q(m, flavor)
    if len(Qs) != m:
        raise click.BadParameter(f"--m {m} does not match the {len(Qs)} values given to --Q")
    if q is None:
        q = "2" if flavor == sc.NONDEGENERATE else "0"
    try:
        return sc.Params(flavor, bullet, Qs, q, n, precision, tolerance)
    except (ValueError, TypeError) as err:
        raise click.BadParameter(str(err)) from err


def require_separate(params):
    ok, bad = cb.separate_check(params, detail=True)
    if not ok:
        raise NotSeparate(*bad)


def config_options(fn):
    options = [
        click.option("--flavor", type=click.Choice(["nd", "d"]), default="nd", show_default=True,
                     help="nd: Hecke-Clifford, d: Sergeev."),
        click.option("--type", "bullet", type=click.Choice(["0", "s", "ss"]), default="s",
                     show_default=True, help="Cyclotomic type."),
        click.option("--m", type=int, default=None, help="Number of Q parameters."),
        click.option("--q", default=None, help="Exact decimal or rational q (default 2)."),
        click.option("--Q", "Q", default=None, help="Comma separated Q_1,...,Q_m."),
        click.option("--n", type=int, default=3, show_default=True),
        click.option("--precision", type=int, default=None,
                     help=f"Working bits (default ${PRECISION_ENV} or 256)."),
        click.option("--tolerance", type=float, default=sc.DEFAULT_TOLERANCE, show_default=True,
                     help="Scalar comparison tolerance."),
        click.option("--seed", type=int, default=0, show_default=True),
        click.option("--output", type=click.Path(dir_okay=False), default=None),
    ]
    for opt in reversed(options):
        fn = opt(fn)
    return fn


class Context:
    def __init__(self, flavor, bullet, m, q, Q, n, precision, tolerance, seed, output):
        if precision is None:
            precision = int(os.environ.get(PRECISION_ENV, sc.DEFAULT_PRECISION))
        self.params = build_params(flavor, bullet, m, q, Q, n, precision, tolerance)
        self.seed = seed
        self.output = output

    def config_json(self):
        p = self.params
        return {"flavor": p.flavor, "type": p.bullet, "m": p.m, "q": str(p.q),
                "Q": [str(x) for x in p.Q], "n": p.n, "precision": p.precision,
                "tolerance": p.tolerance, "seed": self.seed}

    def emit(self, command, body, passed=True):
        doc = {"schema": SCHEMA, "command": command, "config": self.config_json()}
        doc.update(body)
        doc["passed"] = bool(passed)
        text = json.dumps(_jsonable(doc), indent=2, sort_keys=False)
        if self.output:
            with open(self.output, "w") as fh:
                fh.write(text + "\n")
        else:
            click.echo(text)
        if not passed:
            sys.exit(1)


@click.group()
def cli():
    """Verification tools for cyclotomic Hecke-Clifford and Sergeev superalgebras."""


@cli.command()
@config_options
def tableaux(**kw):
    """Standard tableaux of every shape with their diagonal letters D_t."""
    ctx = Context(**kw)
    shapes = []
    for shape in cb.enumerate_multipartitions(ctx.params):
        std = cb.enumerate_std(shape)
        shapes.append({"shape": shape.to_json(), "diagonal_boxes": [list(b) for b in shape.diagonal_boxes],
                       "count": len(std),
                       "tableaux": [{"rows": t.rows(), "D_t": sorted(cb.diagonal_data(t).D)}
                                    for t in std]})
    ctx.emit("tableaux", {"shapes": shapes})


@cli.command()
@config_options
def dims(**kw):
    """The dimension ledger: N, per-block multiplicities and the PBW count."""
    ctx = Context(**kw)
    led = vf.dimension_ledger(ctx.params)
    ctx.emit("dims", {"ledger": led}, led["balanced"])


@cli.command()
@config_options
def module(**kw):
    """Simple modules: dimension, type and eigenvalue tables."""
    ctx = Context(**kw)
    require_separate(ctx.params)
    mods = []
    for M in all_modules(ctx.params):
        mods.append({"shape": M.shape.to_json(), "dim": M.dim, "type": "Q" if M.d_lambda else "M",
                     "eigenvalues": M.eigen_table()})
    suite = vf.relation_suite(ctx.params)
    ctx.emit("module", {"modules": mods, "relations": suite}, suite["passed"])


@cli.command()
@config_options
def idempotents(**kw):
    """Primitive idempotents: completeness, orthogonality, blocks and star."""
    ctx = Context(**kw)
    require_separate(ctx.params)
    report = idm.idempotent_report(ctx.params)
    body = {"idempotents": report}
    passed = report["passed"]
    if not ctx.params.nondegenerate and ctx.params.bullet == "s" and not ctx.params.m:
        body["addable_box"] = idm.addable_box_report(ctx.params)
        passed = passed and body["addable_box"]["passed"]
    ctx.emit("idempotents", body, passed)


def _triple_json(T):
    return {"t": T.t.rows(), "alpha": T.alpha, "beta": T.beta}


def structure_constants(shape, w, params):
    """Nonzero products f^w_{S,T} f^w_{U,V} = coefficient * f^w_{S,V'} of one block."""
    keys = sn.index_pairs(shape)
    out = []
    for S, T in keys:
        for U, V in keys:
            rule = sn.product_rule(S, T, U, V, w, params)
            if rule is None:
                continue
            coeff, (left, right) = rule
            out.append({"S": _triple_json(S), "T": _triple_json(T), "U": _triple_json(U),
                        "V": _triple_json(V), "result": [_triple_json(left), _triple_json(right)],
                        "coefficient": sc.to_json(coeff)})
    return out


@cli.command()
@config_options
@click.option("--reference", type=click.Choice(["row", "column"]), default="row", show_default=True,
              help="Reference tableau w: row reading t^lambda or column reading t_lambda.")
@click.option("--check/--no-check", default=True, show_default=True,
              help="Verify the bases and multiplication laws on operators.")
def seminormal(reference, check, **kw):
    """Structure constants of the f^w bases, block by block."""
    ctx = Context(**kw)
    require_separate(ctx.params)
    blocks = []
    passed = True
    for shape in cb.enumerate_multipartitions(ctx.params):
        top, bottom = sn.standard_choices(shape)
        w = top if reference == "row" else bottom
        block = {"shape": shape.to_json(), "w": w.rows(),
                 "constants": structure_constants(shape, w, ctx.params)}
        if check:
            block["check"] = sn.verify_seminormal_basis(shape, w, ctx.params)
            passed = passed and block["check"]["passed"]
        blocks.append(block)
    ctx.emit("seminormal", {"blocks": blocks}, passed)


@cli.command()
@config_options
def subalgebras(**kw):
    """Dimensions of G, P, A and C(P) with the centralizer identities."""
    ctx = Context(**kw)
    require_separate(ctx.params)
    report = sn.subalgebra_bases(ctx.params)
    ctx.emit("subalgebras", {"subalgebras": report}, report["passed"])


def run_suite(params, seed=0):
    """Every operator identity, with the largest residual and timing of each."""
    suites = {}

    def record(name, fn):
        start = time.perf_counter()
        report = fn()
        report = dict(report)
        report["seconds"] = round(time.perf_counter() - start, 3)
        suites[name] = report

    R = vf.realization(params)
    record("relations", lambda: vf.relation_suite(params))

    def frame():
        rank, gap = R.frame_rank()
        expected = params.level ** params.n * 2 ** params.n * math.factorial(params.n)
        return {"rank": rank, "expected": expected, "pivot_gap": gap, "passed": rank == expected}

    record("pbw_frame", frame)
    record("dimension_ledger", lambda: dict(vf.dimension_ledger(params),
                                            passed=vf.dimension_ledger(params)["balanced"]))
    record("oracle_concordance", lambda: vf.oracle_concordance(params, 100, seed))
    record("idempotents", lambda: idm.idempotent_report(params))
    if not params.nondegenerate and params.bullet == "s" and not params.m:
        record("addable_box", lambda: idm.addable_box_report(params))
    record("intertwiners", lambda: sn.phi_report(params))
    record("seminormal_bases", lambda: sn.seminormal_report(params))
    record("remark_law", lambda: sn.remark_report(params))
    record("star", lambda: sn.star_report(params))
    record("generator_actions", lambda: sn.generator_report(params))
    record("subalgebras", lambda: sn.subalgebra_bases(params))
    record("laurent", lambda: sn.laurent_report(params, seed=seed))
    return suites


def _max_residual(report):
    """The largest float residual anywhere inside a report."""
    best = 0.0
    if isinstance(report, dict):
        for key, value in report.items():
            if key in ("seconds", "pivot_gap", "tolerance"):
                continue
            best = max(best, _max_residual(value))
    elif isinstance(report, list):
        for value in report:
            best = max(best, _max_residual(value))
    elif isinstance(report, float):
        best = report
    return best


@cli.command()
@config_options
def verify(**kw):
    """Run the full identity suite and report the max residual per check."""
    ctx = Context(**kw)
    require_separate(ctx.params)
    suites = run_suite(ctx.params, ctx.seed)
    summary = {name: {"passed": bool(r["passed"]), "max_residual": _max_residual(r),
                      "seconds": r["seconds"]} for name, r in suites.items()}
    passed = all(s["passed"] for s in summary.values())
    worst = max(s["max_residual"] for s in summary.values())
    ctx.emit("verify", {"summary": summary, "max_residual": worst, "reports": suites}, passed)


def parse_grid(text):
    """'q=2,3;Q=3,5' -> {'q': ['2', '3'], 'Q': ['3', '5']}."""
    grid = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        if "=" not in part:
            raise click.BadParameter(f"grid entry {part!r} is not of the form key=v1,v2")
        key, values = part.split("=", 1)
        key = key.strip()
        if key not in ("q", "Q"):
            raise click.BadParameter(f"grid key {key!r} must be q or Q")
        grid[key] = [v.strip() for v in values.split(",") if v.strip()]
    return grid


@cli.command()
@config_options
@click.option("--grid", required=True, help="Parameter grid such as 'q=2,3;Q=3,5'.")
def conjecture(grid, **kw):
    """Recompute the dimension ledgers over a grid and compare them.

    A value listed under Q is used for every Q_l, so with m = 0 the Q axis
    is ignored.  Grid points that fail separateness are reported and skipped.
    """
    base = Context(**kw)
    axes = parse_grid(grid)
    p0 = base.params
    qs = axes.get("q", [str(p0.q)])
    Qs = axes.get("Q", [None])
    points = []
    ledgers = []
    for q, Qv in itertools.product(qs, Qs):
        Q = ",".join([Qv] * p0.m) if (Qv is not None and p0.m) else ",".join(str(x) for x in p0.Q)
        point = {"q": q, "Q": Q}
        try:
            params = build_params(p0.flavor, p0.bullet, p0.m, q, Q, p0.n, p0.precision, p0.tolerance)
        except click.BadParameter as err:
            point["error"] = str(err)
            points.append(point)
            continue
        ok, bad = cb.separate_check(params, detail=True)
        if not ok:
            point["error"] = f"not separate at letters {bad[1]}, {bad[1] + 1} of {bad[0]}"
            points.append(point)
            continue
        report = sn.subalgebra_bases(params)
        led = vf.dimension_ledger(params)
        point["dims"] = report["dims"]
        point["N"] = led["N"]
        point["dim"] = led["dim"]
        point["passed"] = report["passed"] and led["balanced"]
        points.append(point)
        ledgers.append((report["dims"], led["N"], led["dim"]))
    identical = bool(ledgers) and all(x == ledgers[0] for x in ledgers)
    passed = identical and all(p.get("passed", False) for p in points if "error" not in p)
    base.emit("conjecture", {"points": points, "identical": identical}, passed)


def main(argv=None):
    try:
        cli.main(args=argv, prog_name="hecke-clifford", standalone_mode=False)
    except NotSeparate as err:
        click.echo(json.dumps({"schema": SCHEMA, "error": str(err), "tableau": err.tableau.rows(),
                               "letters": [err.k, err.k + 1]}), err=True)
        sys.exit(2)
    except click.exceptions.Abort:
        sys.exit(1)
    except click.ClickException as err:
        err.show()
        sys.exit(1)
    except sc.DomainError as err:
        click.echo(f"Error: {err}", err=True)
        sys.exit(1)
    sys.exit(0)


if __name__ == "__main__":
    main()
