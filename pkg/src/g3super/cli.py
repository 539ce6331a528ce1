"""
Command-line driver.  Every command builds a JSON report

  {"command", "task", "status", "result", "witness", "engine"}

printed as a short human summary, or as sorted-key JSON with --json.  Timing
is left out unless --timing is given, so reports are byte-stable.
Exit codes: 0 pass, 1 verification failure, 2 input error.
"""

import json
import sys
import time
from fractions import Fraction

import click

from . import __version__

ENGINE = {"name": "g3super", "version": __version__}


class InputError(click.ClickException):
    exit_code = 2


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (set, frozenset, tuple)):
        return list(x)
    if hasattr(x, "to_json"):
        return x.to_json()
    return str(x)


def dumps(report):
    return json.dumps(report, sort_keys=True, indent=2, default=_jsonable)


def parse_range(text):
    """'2' -> [2]; '0..4' -> [0, 1, 2, 3, 4]."""
    try:
        if ".." in text:
            lo, hi = (int(s) for s in text.split(".."))
        else:
            lo = hi = int(text)
    except ValueError:
        raise InputError("range must look like 3 or -2..4, got %r" % text)
    if lo > hi:
        raise InputError("empty range %r" % text)
    return list(range(lo, hi + 1))


class Ctx:
    def __init__(self, as_json, timing, output):
        self.as_json, self.timing, self.output = as_json, timing, output


def emit(ctx, command, task, passed, result, summary, witness=None, status=None, seconds=None):
    report = {"command": command, "task": task,
              "status": status or ("pass" if passed else "fail"),
              "result": result, "witness": witness, "engine": ENGINE}
    if ctx.timing and seconds is not None:
        report["timing"] = {"seconds": round(seconds, 3)}
    text = dumps(report)
    if ctx.output:
        with open(ctx.output, "w") as fh:
            fh.write(text + "\n")
    if ctx.as_json:
        click.echo(text)
    else:
        for line in summary:
            click.echo(line)
        if witness:
            click.echo("witness: %s" % witness)
        click.echo("status: %s" % report["status"])
    sys.exit(0 if report["status"] in ("pass", "truncated") and passed else 1)


def _run(fn):
    """Call fn, mapping user-input errors to exit code 2."""
    try:
        t0 = time.time()
        out = fn()
        return out, time.time() - t0
    except KeyError as e:
        raise InputError(str(e.args[0]) if e.args else "unknown key")
    except (ValueError, FileNotFoundError) as e:
        raise InputError(str(e))


@click.group()
@click.option("--json", "as_json", is_flag=True, help="Print the JSON report.")
@click.option("--timing", is_flag=True, help="Include wall-clock timing in the report.")
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="Also write the report here.")
@click.version_option(__version__, prog_name="g3super")
@click.pass_context
def main(ctx, as_json, timing, output):
    """Exact verification engine for G(3) geometries."""
    ctx.obj = Ctx(as_json, timing, output)


# ------------------------------------------------------------------ verify

@main.group()
def verify():
    """Verification suites."""


@verify.command("shc")
@click.pass_obj
def verify_shc_cmd(ctx):
    """The (17|14) algebra of the SHC symmetries."""
    from .modelszoo import verify_shc
    rep, sec = _run(verify_shc)
    bad = [n for n, r in sorted(rep["residues"].items()) if r]
    wit = None
    if not rep["passed"]:
        wit = ("%s is not a symmetry" % bad[0] if bad else
               "%d Jacobi violations" % rep["jacobi_violations"] if rep["jacobi_violations"]
               else "graded dims %s" % rep["graded_dims"])
    lines = ["dim (%d|%d), Jacobi violations %d" % (*rep["dim"], rep["jacobi_violations"]),
             "graded dims " + ", ".join("%s:(%d|%d)" % (k, *v)
                                        for k, v in sorted(rep["graded_dims"].items(),
                                                           key=lambda kv: int(kv[0])))]
    emit(ctx, "verify shc", {}, rep["passed"], rep, lines, wit, seconds=sec)


@verify.command("g3contact")
@click.pass_obj
def verify_g3contact_cmd(ctx):
    """Tangency and closure of the 31 generating functions."""
    from .contactjets import verify_g3contact
    rep, sec = _run(verify_g3contact)
    wit = None
    if not rep["passed"]:
        wit = ("%s is not tangent" % sorted(rep["not_tangent"])[0] if rep["not_tangent"]
               else "graded dims %s" % rep["graded_dims"])
    lines = ["%d functions, not tangent: %d" % (rep["functions"], len(rep["not_tangent"])),
             "graded dims " + ", ".join("%s:(%d|%d)" % (k, *v)
                                        for k, v in sorted(rep["graded_dims"].items(),
                                                           key=lambda kv: int(kv[0])))]
    emit(ctx, "verify g3contact", {}, rep["passed"], rep, lines, wit, seconds=sec)


@verify.command("identities")
@click.pass_obj
def verify_identities_cmd(ctx):
    """The three cubic-form identities."""
    from .contactjets import verify_key_identities
    rep, sec = _run(verify_key_identities)
    wit = rep["witnesses"][0] if rep["witnesses"] else None
    lines = ["id%d %s" % (i, "pass" if rep["id%d" % i] else "fail") for i in (1, 2, 3)]
    emit(ctx, "verify identities", {}, rep["pass"], rep, lines, wit, seconds=sec)


@verify.command("osp32")
@click.option("--c1", default="1/36", show_default=True, help="Constant of the action.")
@click.option("--c2", default="-216", show_default=True, help="Constant of eta.")
@click.pass_obj
def verify_osp32_cmd(ctx, c1, c2):
    """Invariance of eta, the osp(3|2) matrices and the Kaplansky table."""
    from .contactjets import osp32_checks
    try:
        a, b = Fraction(c1), Fraction(c2)
    except ValueError:
        raise InputError("constants must be rationals, got %r, %r" % (c1, c2))
    rep, sec = _run(lambda: osp32_checks(a, b))
    wit = None
    if not rep["pass"]:
        wit = (rep["defects"][0] if rep["defects"] else
               "mismatched %s" % rep["mismatched"] if rep["mismatched"] else "Kaplansky table")
    lines = ["c1c2 = %s: invariant %s, closed %s, dim (%d|%d), Kaplansky %s"
             % (rep["c1c2"], rep["invariant"], rep["closed"], *rep["dim"], rep["kaplansky_match"])]
    emit(ctx, "verify osp32", {"c1": str(a), "c2": str(b)}, rep["pass"], rep, lines, wit,
         seconds=sec)


@verify.command("submax")
@click.option("--m", "m", type=int, required=True, help="Exponent m >= 2.")
@click.pass_obj
def verify_submax_cmd(ctx, m):
    """The listed symmetries of the submaximal model m."""
    from .modelszoo import verify_submaximal_generators
    rep, sec = _run(lambda: verify_submaximal_generators(m))
    js = rep.to_json()
    wit = None
    if not rep.passed:
        bad = [n for n, r in rep.residues.items() if r]
        failed = [k for k, v in rep.sp2.items() if not v]
        wit = ("%s is not a symmetry" % bad[0] if bad else "dim %s" % (rep.dims,)
               if rep.dims != (10, 8) else "sp(2) check %s" % failed[0] if failed
               else "%d Jacobi violations" % rep.jacobi_violations)
    lines = ["m = %d: dim (%d|%d), Jacobi violations %d, sp(2) split %s"
             % (m, *rep.dims, rep.jacobi_violations, all(rep.sp2.values()))]
    emit(ctx, "verify submax", {"m": m}, rep.passed, js, lines, wit, seconds=sec)


@verify.command("solutions")
@click.pass_obj
def verify_solutions_cmd(ctx):
    """The five-constant solution family of the SHC system."""
    from .modelszoo import verify_solutions
    rep, sec = _run(verify_solutions)
    bad = [k for k, v in rep.residues.items() if v != "0"]
    wit = None if rep.passed else ("residue of %s" % bad[0] if bad
                                   else "solution space dimension %d" % rep.free_parameters)
    lines = ["residues zero: %s" % (not bad),
             "cubic ansatz: %d free of %d unknowns, %d branch(es)"
             % (rep.free_parameters, rep.ansatz_unknowns, rep.branches)]
    emit(ctx, "verify solutions", {}, rep.passed, rep.to_json(), lines, wit, seconds=sec)


# -------------------------------------------------------------- cohomology

def _grading_algebra(name):
    if name == "p2iv":
        from .modelszoo import shc_algebra
        return shc_algebra()
    from .contactjets import contact_g3
    return contact_g3()


@main.command()
@click.option("--grading", type=click.Choice(["p2iv", "p1iv"]), required=True)
@click.option("--n", "n", type=click.IntRange(1, 2), required=True, help="Cochain order.")
@click.option("--d", "d", required=True, help="Degree or range LO..HI.")
@click.option("--restricted", is_flag=True, help="Use the restricted complex.")
@click.pass_obj
def cohomology(ctx, grading, n, d, restricted):
    """Spencer cohomology H^{d,n} of G(3) in a parabolic grading."""
    from .spencer import cohomology_table
    degs = parse_range(d)
    res, sec = _run(lambda: cohomology_table(_grading_algebra(grading), degs, [n], restricted))
    lines = ["H^{%d,%d}: even %d, odd %d" % (k[0], k[1], *v) for k, v in sorted(res.dims.items())]
    emit(ctx, "cohomology", {"grading": grading, "n": n, "d": degs, "restricted": restricted},
         True, res.to_json(), lines, seconds=sec)


# ------------------------------------------------------------------ growth

@main.command()
@click.option("--parabolic", help="Simple system and subset, e.g. IV:2 or I:1,3.")
@click.option("--all", "all_rows", is_flag=True, help="Recompute and diff the whole table.")
@click.pass_obj
def growth(ctx, parabolic, all_rows):
    """Growth vectors of G(3)/P from root data."""
    from .geometry import format_growth
    from .liesuper import parabolic_atlas, parabolic_growth, parse_parabolic
    if bool(parabolic) == bool(all_rows):
        raise InputError("give exactly one of --parabolic or --all")
    if all_rows:
        rows, sec = _run(parabolic_atlas)
        bad = [r for r in rows if not r["match"]]
        wit = "%s: computed %s" % (bad[0]["type"], bad[0]["computed"]) if bad else None
        lines = ["%-8s %s %s" % (r["type"], r["computed"]["growth"], "ok" if r["match"] else "DIFF")
                 for r in rows]
        lines.append("%d types, %d mismatches" % (len(rows), len(bad)))
        emit(ctx, "growth", {"all": True}, not bad, {"rows": rows}, lines, wit, seconds=sec)
    sysname, subset = _run(lambda: parse_parabolic(parabolic))[0]
    (g, zero), sec = _run(lambda: parabolic_growth(sysname, subset))
    res = {"system": sysname, "subset": sorted(subset), "growth": format_growth(g),
           "depth": len(g), "g0": list(zero)}
    emit(ctx, "growth", {"parabolic": parabolic}, True, res, [format_growth(g)], seconds=sec)


# ------------------------------------------------------------- prolongation

def _negative_with_g0(name, g0):
    from .acceptance import negative_part
    from .contactjets import degree_zero_action
    if name in ("p2iv", "p1iv"):
        A = _grading_algebra(name)
        if g0 == "g3":
            return degree_zero_action(A)
        return negative_part(A), None
    if g0 == "g3":
        raise InputError("--g0 g3 needs --model p2iv or p1iv")
    from .geometry import symbol_algebra
    from .liesuper import GradedLSA
    from .modelszoo import load_model
    model = load_model(name)
    labels, pars, degs, br, _ = symbol_algebra(model.distribution, model.point())
    return GradedLSA(list(zip(labels, pars, degs)), br), None


@main.command()
@click.option("--model", required=True,
              help="p2iv, p1iv, a shipped model name or a model file.")
@click.option("--max-degree", type=int, default=4, show_default=True)
@click.option("--g0", type=click.Choice(["all", "g3"]), default="all", show_default=True,
              help="Degree-zero part: all derivations, or the one of G(3).")
@click.pass_obj
def prolong(ctx, model, max_degree, g0):
    """Tanaka prolongation of a symbol."""
    from .liesuper import tanaka_prolongation

    def go():
        m, g = _negative_with_g0(model, g0)
        return m, tanaka_prolongation(m, g, max_degree)
    (m, P), sec = _run(go)
    dims = {k: v for k, v in sorted(m.graded_dims().items())}
    dims.update(P.dims)
    res = {"dims": {str(k): list(v) for k, v in sorted(dims.items())},
           "total": list(P.algebra.dim), "terminated": P.terminated}
    lines = ["g_%d: (%d|%d)" % (k, *v) for k, v in sorted(dims.items())]
    lines.append("total (%d|%d), %s" % (*P.algebra.dim,
                                         "terminated" if P.terminated else "not terminated"))
    emit(ctx, "prolong", {"model": model, "max_degree": max_degree, "g0": g0}, True, res, lines,
         status="pass" if P.terminated else "truncated", seconds=sec)


# ------------------------------------------------------------- symbol/solve

@main.command()
@click.option("--model", required=True, help="Shipped model name or model file.")
@click.option("--point", default=None, help="Named point of the model (default: its own).")
@click.pass_obj
def symbol(ctx, model, point):
    """Symbol algebra at a point and its M1..M4 tag."""
    from .modelszoo import load_model, model_symbol

    def go():
        mdl = load_model(model)
        return model_symbol(mdl, mdl.point(point))
    rep, sec = _run(go)
    js = rep.to_json()
    failed = [k for k, v in sorted(rep.checks.items()) if not v]
    lines = ["growth %s" % js["growth"], "classification %s" % rep.classification]
    emit(ctx, "symbol", {"model": model, "point": point}, rep.classification != "other", js,
         lines, "failed check %s" % failed[0] if failed else None, seconds=sec)


@main.command()
@click.option("--model", required=True, help="Shipped model name or model file.")
@click.option("--bound", type=int, required=True, help="Largest coefficient weight.")
@click.option("--degrees", required=True, help="Weighted degrees LO..HI.")
@click.option("--workers", type=int, default=None,
              help="Worker processes (default: $G3SUPER_WORKERS or 1).")
@click.pass_obj
def solve(ctx, model, bound, degrees, workers):
    """Symmetries of a model, one weighted degree at a time."""
    from .modelszoo import load_model, solve_symmetries
    degs = parse_range(degrees)
    r, sec = _run(lambda: solve_symmetries(load_model(model), bound, (degs[0], degs[-1]), workers))
    js = r.to_json()
    missing = [n for n, ok in sorted(r.contains_listed.items()) if not ok]
    passed = r.closure_ok and not missing
    wit = ("listed %s not found" % missing[0] if missing else
           None if r.closure_ok else "solution space not closed under brackets")
    lines = ["degree %d: (%d|%d)" % (k, *v) for k, v in sorted(r.dims.items())]
    lines.append("total (%d|%d)%s" % (*r.total, ", truncated at %s" % r.truncated
                                       if r.truncated else ""))
    emit(ctx, "solve", {"model": model, "bound": bound, "degrees": [degs[0], degs[-1]]},
         passed, js, lines, wit, status=js["status"] if passed else "fail", seconds=sec)


# ------------------------------------------------------------------- suite

@main.group()
def suite():
    """Batch suites."""


@suite.command("acceptance")
@click.option("--keep-going", is_flag=True, help="Run every criterion even after a failure.")
@click.pass_obj
def suite_acceptance(ctx, keep_going):
    """All acceptance criteria, stopping at the first failure."""
    from .acceptance import run_suite

    def line(rec):
        if not ctx.as_json:
            click.echo("[%s] %2d %s" % ("PASS" if rec["passed"] else "FAIL", rec["criterion"],
                                        rec["title"]))
    t0 = time.time()
    recs = run_suite(stop_on_fail=not keep_going, echo=line)
    sec = time.time() - t0
    if not ctx.timing:
        for r in recs:
            r.pop("seconds")
    bad = [r for r in recs if not r["passed"]]
    wit = "criterion %d: %s" % (bad[0]["criterion"], bad[0]["witness"]) if bad else None
    emit(ctx, "suite acceptance", {"keep_going": keep_going}, not bad, {"criteria": recs},
         ["%d/%d criteria passed" % (len(recs) - len(bad), len(recs))], wit, seconds=sec)


if __name__ == "__main__":
    main()
