"""Command-line front end.

Every command prints a short human-readable summary and can also write a
JSON report (``--json PATH``, or ``--json -`` for stdout only).  Exact
quantities are serialized as fraction strings; decimals are annotations.

Exit codes: 0 success, 1 a reproduction check failed, 2 precondition
violation (bad input, map or field), 3 an internal size cap was hit.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__, hpoly
from .cremona import (
    CremonaMap,
    DegreeSequence,
    MapError,
    StableProven,
    StableUpTo,
    UnstableAt,
    change_field,
    find_inverse,
    indeterminacy_points,
    iterate_degrees,
    reduce_mod_p,
    stability_witness,
    verify_inverse,
)
from .dyndeg import (
    bounds_from_sequence,
    classify_growth,
    largest_real_root,
    root_bracket_check,
)
from .example_map import example_maps
from .fields import QQ, Field, FieldError, field_make, multiplicative_order
from .findyn import census_records, density_check, pgl3_stability_sweep
from .hpoly import DegreeOverflow
from .parsing import MapFile, ParseError, read_map_file
from .points import ProjPoint

EXIT_OK, EXIT_CHECK, EXIT_PRECONDITION, EXIT_CAP = 0, 1, 2, 3


class CapHit(Exception):
    """A computation stopped at a size cap; the partial report is still written."""


class CheckFailed(Exception):
    pass


# -- helpers ---------------------------------------------------------------------


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError as exc:
        raise ValueError(f"expected a comma-separated integer list, got {text!r}") from exc


def _load(source: str, seed: int) -> tuple[CremonaMap, CremonaMap | None, MapFile | None]:
    """A map file path, or ``example`` for the built-in quadratic map over QQ."""
    if source == "example":
        ex = example_maps()
        return ex.f, ex.f_inv, None
    mf = read_map_file(source, seed=seed)
    return mf.to_map(), mf.inverse_map(), mf


def _over(f: CremonaMap, inv: CremonaMap | None, p: int | None, k: int, seed: int):
    """Reduce a map over QQ to GF(p) and embed it in GF(p^k) when asked."""
    if p is None:
        if k != 1:
            raise ValueError("--k needs --p")
        return f, inv, None
    if f.field != QQ:
        raise FieldError("--p applies to maps over QQ; this map already has field " + str(f.field))
    g, rep = reduce_mod_p(f, p, inv)
    ginv = None
    if inv is not None and rep.birational_verified:
        ginv, _ = reduce_mod_p(inv, p)
    if k > 1:
        K = field_make(f"GF({p},{k})", seed=seed)
        g = change_field(g, K)
        ginv = change_field(ginv, K) if ginv is not None else None
    return g, ginv, rep


def _points(text: str, field: Field) -> list[ProjPoint]:
    out = []
    for chunk in text.split(";"):
        if chunk.strip():
            cs = _ints(chunk)
            if len(cs) != 3:
                raise ValueError(f"a point needs three coordinates, got {chunk!r}")
            out.append(ProjPoint.of(field, [field.from_int(c) for c in cs]))
    return out


def _seq_json(seq: DegreeSequence) -> dict:
    return {
        "degrees": seq.degrees,
        "method": seq.method,
        "termination": seq.termination,
        "stopped_at": seq.stopped_at,
        "first_drop": seq.first_drop(),
        "notes": seq.notes,
    }


def _bracket_json(lo: Fraction, hi: Fraction) -> dict:
    return {"lo": str(lo), "hi": str(hi), "decimal": f"{float((lo + hi) / 2):.12f}"}


def _verdict_json(v) -> dict:
    orbits = {str(k): [str(p) for p in path] for k, path in sorted(v.orbits.items(), key=lambda kv: kv[0].sort_key())}
    if isinstance(v, UnstableAt):
        return {"verdict": "UnstableAt", "step": v.step, "witness": str(v.witness), "path": [str(p) for p in v.path], "orbits": orbits}
    if isinstance(v, StableUpTo):
        return {"verdict": "StableUpTo", "N": v.N, "orbits": orbits}
    return {"verdict": "StableProven", "orbits": orbits}


def _verdict_text(v) -> str:
    if isinstance(v, UnstableAt):
        return f"UnstableAt({v.step}) witness {v.witness}: " + " -> ".join(map(str, v.path))
    if isinstance(v, StableUpTo):
        return f"StableUpTo({v.N})"
    return "StableProven"


# -- commands --------------------------------------------------------------------
# each returns (inputs echo, results, human-readable lines)


def cmd_degseq(args):
    f, inv, _ = _load(args.map, args.seed)
    f, _, _ = _over(f, inv, args.p, 1, args.seed)
    seq = iterate_degrees(f, args.N, method=args.method, seed=args.seed)
    res = {"map": str(f), "field": str(f.field), "sequence": _seq_json(seq)}
    lines = [f"map {f} over {f.field}", "n  deg f^n"]
    lines += [f"{n:<3}{d}" for n, d in seq.records]
    if seq.termination != "completed":
        lines.append(f"stopped at n = {seq.stopped_at}: {seq.termination}")
    b = bounds_from_sequence(seq)
    res["bounds"] = b.to_json()
    lo, hi = b.best_lower, b.best_upper
    lines.append(f"lambda_1 in [{float(lo.value) if lo else 1:.9f}, {float(hi.value):.9f}]")
    if len(seq) >= 6:
        g = classify_growth(seq)
        res["growth"] = g.to_json()
        lines.append(f"growth (heuristic): {g.kind}")
    if seq.termination == "term_cap_hit":
        raise CapHit((args_echo(args), res, lines))
    return args_echo(args), res, lines


def cmd_lambda1(args):
    if args.degrees:
        degs = _ints(args.degrees)
        source = "given"
    elif args.geometric:
        degs = [args.geometric**n for n in range(1, args.N + 1)]
        source = f"{args.geometric}^n"
    elif args.map:
        f, _, _ = _load(args.map, args.seed)
        seq = iterate_degrees(f, args.N, seed=args.seed)
        degs = seq.degrees
        source = str(f)
    else:
        raise ValueError("give --degrees, --geometric or a map")
    b = bounds_from_sequence(degs)
    res = {"source": source, "degrees": degs, "bounds": b.to_json(), "consistent": b.consistent()}
    lines = [f"{len(degs)} degrees from {source}"]
    for kind in ("thm31", "cor32"):
        first = b.first(kind)
        lines.append(f"{kind}: " + (f"first useful at n = {first.n}" if first else "never useful"))
    lo, hi = b.best_lower, b.best_upper
    lines.append(f"best lower {float(lo.value):.9f} (n={lo.n}, {lo.kind})" if lo else "best lower: none (1 is trivial)")
    lines.append(f"best upper {float(hi.value):.9f} (n={hi.n})")
    return args_echo(args), res, lines


def cmd_reduce(args):
    f, inv, _ = _load(args.map, args.seed)
    g, rep = reduce_mod_p(f, args.p, inv)
    res = {
        "map": str(g),
        "prime": rep.prime,
        "degree_before": rep.degree_before,
        "degree_after": rep.degree_after,
        "birational_verified": rep.birational_verified,
        "degenerate": rep.degenerate,
        "notes": rep.notes,
    }
    lines = [f"f mod {args.p} = {g}", f"degree {rep.degree_before} -> {rep.degree_after}"]
    lines.append(f"inverse verified: {rep.birational_verified}")
    lines += rep.notes
    return args_echo(args), res, lines


def cmd_stability(args):
    f, inv, _ = _load(args.map, args.seed)
    f, inv, _ = _over(f, inv, args.p, 1, args.seed)
    if args.points:
        pts = _points(args.points, f.field)
    elif args.map == "example" and f.field == QQ:
        pts = list(example_maps().inverse_indeterminacy)
    elif f.field.is_finite:
        inv = inv or find_inverse(f)
        if inv is None:
            raise MapError("no inverse of the same degree; pass --points")
        pts = indeterminacy_points(inv)
    else:
        raise ValueError("over QQ pass the points of I(f^-1) with --points")
    v = stability_witness(f, pts, N=args.N)
    res = {"map": str(f), "field": str(f.field), "start_points": [str(p) for p in pts], **_verdict_json(v)}
    return args_echo(args), res, [f"{f} over {f.field}", _verdict_text(v)]


def cmd_periodic(args):
    f, inv, _ = _load(args.map, args.seed)
    f, _, _ = _over(f, inv, args.p, args.k, args.seed)
    recs = census_records(f, args.max_period, threads=args.threads)
    if args.noncritical:
        recs = [r for r in recs if not r[2]]
    by_period: dict[int, int] = {}
    for _, n, _ in recs:
        by_period[n] = by_period.get(n, 0) + 1
    pts = [pt for pt, _, _ in recs]
    density = [density_check(pts, D).to_json() for D in _ints(args.D)] if pts else []
    res = {
        "field": str(f.field),
        "count": len(recs),
        "by_period": {str(k): v for k, v in sorted(by_period.items())},
        "points": [{"coords": pt.to_json(), "period": n, "critical": c} for pt, n, c in recs],
        "density": density,
    }
    if args.jsonl:
        _write_jsonl(args.jsonl, res["points"])
    lines = [f"{len(recs)} {'non-critical ' if args.noncritical else ''}periodic points over {f.field}"]
    lines += [f"  period {k}: {v}" for k, v in sorted(by_period.items())]
    lines += [f"  D={d['D']}: {d['verdict']} (rank {d['rank']}/{d['monomials']})" for d in density]
    return args_echo(args), res, lines


def _write_jsonl(path: str, records: list[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r, sort_keys=True) + "\n")


def _read_point(field: Field, coords) -> ProjPoint:
    vals = []
    for c in coords:
        if isinstance(c, list):
            vals.append(tuple(c))
        elif isinstance(c, str):
            vals.append(Fraction(c))
        else:
            vals.append(c)
    return ProjPoint.of(field, [field.coerce(v) for v in vals])


def cmd_density(args):
    field = field_make(args.field, seed=args.seed)
    pts = []
    with open(args.points, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                pts.append(_read_point(field, json.loads(line)["coords"]))
    reports = [density_check(pts, D) for D in _ints(args.D)]
    res = {"field": str(field), "points": len(pts), "density": [r.to_json() for r in reports]}
    lines = [f"{len(pts)} points over {field}"]
    for r in reports:
        lines.append(f"  D={r.D}: {r.verdict}" + (f" curve {r.curve}" if r.curve is not None else ""))
    return args_echo(args), res, lines


def cmd_sweep(args):
    f, inv, _ = _load(args.map, args.seed)
    f, _, _ = _over(f, inv, args.p, args.k, args.seed)
    st = pgl3_stability_sweep(f, args.trials, args.N, seed=args.seed)
    res = st.to_json()
    lines = [f"{st.full_growth}/{st.trials} maps A o f over {st.field} keep degree {st.degree}^n up to n = {st.N}"]
    return args_echo(args), res, lines


def cmd_root(args):
    lo, hi = largest_real_root(args.n, Fraction(args.tol))
    res = {"n": args.n, "root": _bracket_json(lo, hi), **_inequalities(args.n, lo, hi)}
    return args_echo(args), res, [f"largest root of x^{args.n} - 2x^{args.n - 1} + 1: {float((lo + hi) / 2):.12f}"]


def _inequalities(n: int, lo: Fraction, hi: Fraction) -> dict:
    if n <= 2:
        return {"inequalities": "skipped (n <= 2)", "inside": None}
    left = 2 - Fraction(2, 3) ** (n - 1)
    right = 2 - Fraction(1, 2) ** (n - 1)
    if not (left < lo and hi < right):
        # the root sits within about n 4^-n of the right end; refine before judging
        lo, hi = largest_real_root(n, min(hi - lo, Fraction(1, 4 ** (n + 2))))
    return {
        "interval": [str(left), str(right)],
        "inside": left < lo and hi < right,
        "sign_change": root_bracket_check(n, lo, hi),
    }


def cmd_example_sec5(args):
    ex = example_maps()
    res: dict = {"map": str(ex.f), "inverse": str(ex.f_inv)}
    lines = [f"f = {ex.f}", f"f^-1 = {ex.f_inv}"]
    failures: list[str] = []

    def check(ok: bool, what: str) -> bool:
        if not ok:
            failures.append(what)
        return ok

    check(verify_inverse(ex.f, ex.f_inv), "inverse over QQ")
    if args.qq_steps:
        seq = iterate_degrees(ex.f, args.qq_steps)
        v = stability_witness(ex.f, ex.inverse_indeterminacy, N=args.qq_steps)
        check(seq.degrees == [2**n for n in range(1, args.qq_steps + 1)], "deg f^n = 2^n over QQ")
        check(isinstance(v, (StableUpTo, StableProven)), "stability over QQ")
        res["QQ"] = {"sequence": _seq_json(seq), **_verdict_json(v)}
        lines.append(f"QQ: degrees {seq.degrees}; {_verdict_text(v)}")
    rows = []
    for p in _ints(args.primes):
        if p < 3:
            raise ValueError("the example needs odd primes")
        rows.append(_example_prime(ex, p, args.seed, check))
        r = rows[-1]
        lines.append(
            f"p={p}: n_p={r['n_p']}, unstable at {r['stability'].get('step')}, "
            f"first drop at {r['sequence']['first_drop']}, root {r['root']['decimal']}"
        )
    res["primes"] = rows
    res["failures"] = failures
    if failures:
        lines.append("FAILED: " + "; ".join(failures))
        raise CheckFailed((args_echo(args), res, lines))
    lines.append("all checks passed")
    return args_echo(args), res, lines


def _example_prime(ex, p: int, seed: int, check) -> dict:
    n_p = multiplicative_order(2, p)
    fp, rep = reduce_mod_p(ex.f, p, ex.f_inv)
    Fp = fp.field
    check(bool(rep.birational_verified), f"p={p}: inverse")
    inv_p, _ = reduce_mod_p(ex.f_inv, p)
    I_f = indeterminacy_points(fp)
    I_inv = indeterminacy_points(inv_p)
    check(I_f == sorted(pt.over(Fp) for pt in ex.indeterminacy), f"p={p}: I(f)")
    check(sorted(I_inv) == sorted(pt.over(Fp) for pt in ex.inverse_indeterminacy), f"p={p}: I(f^-1)")
    v = stability_witness(fp, I_inv)
    witness = ProjPoint.of(Fp, [0, Fp.from_int(-2), 3])
    check(isinstance(v, UnstableAt) and v.step == n_p - 2 and v.witness == witness, f"p={p}: instability step")
    # one step past the expected drop shows the drop itself
    seq = iterate_degrees(fp, n_p + 1, method="line", seed=seed)
    check(seq.first_drop() == n_p, f"p={p}: first degree drop at n_p")
    lo, hi = largest_real_root(n_p, Fraction(1, 10**12))
    ineq = _inequalities(n_p, lo, hi)
    if n_p > 2:
        check(bool(ineq["inside"]) and ineq["sign_change"], f"p={p}: root inequalities")
    else:
        check(lo == hi == 1, f"p={p}: root equals 1")
    b = bounds_from_sequence(seq)
    check(all(x.value <= hi for x in b.lowers if x.useful), f"p={p}: lower bounds below root")
    check(all(x.value >= lo for x in b.uppers), f"p={p}: upper bounds above root")
    return {
        "p": p,
        "n_p": n_p,
        "reduced_map": str(fp),
        "inverse_verified": rep.birational_verified,
        "indeterminacy": [str(x) for x in I_f],
        "inverse_indeterminacy": [str(x) for x in sorted(I_inv)],
        "stability": _verdict_json(v),
        "sequence": _seq_json(seq),
        "root": _bracket_json(lo, hi),
        **ineq,
        "bounds": b.to_json(),
    }


# -- driver ----------------------------------------------------------------------


def args_echo(args) -> dict:
    skip = {"func", "json", "threads", "command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the command name
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for modulus search, random lines and sweeps")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker threads for the periodic census")
    common.add_argument("--term-cap", type=int, default=argparse.SUPPRESS, help="maximum number of terms in a composed polynomial")
    common.add_argument("--json", metavar="PATH", default=argparse.SUPPRESS, help="write the JSON report here ('-' for stdout)")
    ap = argparse.ArgumentParser(
        prog="p2dyn", description="Dynamics of birational maps of the projective plane.", parents=[common]
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_, parents=[common])
        p.set_defaults(func=func)
        return p

    mhelp = "map file, or 'example' for the built-in quadratic map"
    p = add("degseq", cmd_degseq, "degree sequence and lambda_1 bounds")
    p.add_argument("map", help=mhelp)
    p.add_argument("--N", type=int, default=8)
    p.add_argument("--p", type=int, default=None, help="reduce modulo this prime first")
    p.add_argument("--method", choices=["compose", "line"], default="compose")

    p = add("lambda1", cmd_lambda1, "certified lambda_1 bounds from a degree sequence")
    p.add_argument("map", nargs="?", default=None, help=mhelp)
    p.add_argument("--degrees", help="comma-separated degrees deg f, deg f^2, ...")
    p.add_argument("--geometric", type=int, help="use the degrees B^n for n = 1..N")
    p.add_argument("--N", type=int, default=8)

    p = add("reduce", cmd_reduce, "reduce a map over QQ modulo a prime")
    p.add_argument("map", help=mhelp)
    p.add_argument("--p", type=int, required=True)

    p = add("stability", cmd_stability, "follow the orbits of I(f^-1)")
    p.add_argument("map", help=mhelp)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--points", help="start points, e.g. '1,1,0;0,-2,3'")
    p.add_argument("--N", type=int, default=64, help="orbit length over QQ")

    p = add("periodic", cmd_periodic, "exhaustive periodic-point census over GF(p^k)")
    p.add_argument("map", help=mhelp)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--max-period", type=int, default=None)
    p.add_argument("--noncritical", action="store_true", help="keep only cycles avoiding the Jacobian locus")
    p.add_argument("--D", default="1,2", help="curve degrees for the density check")
    p.add_argument("--jsonl", help="also write one JSON line per periodic point")

    p = add("density", cmd_density, "does a point set lie on a curve of degree D?")
    p.add_argument("--points", required=True, help="JSON-lines file with a 'coords' field per line")
    p.add_argument("--field", required=True, help="QQ, GF(p) or GF(p,k)")
    p.add_argument("--D", default="1,2")

    p = add("sweep", cmd_sweep, "random PGL_3 perturbations and full degree growth")
    p.add_argument("map", help=mhelp)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--N", type=int, default=3)

    p = add("root", cmd_root, "largest real root of x^n - 2x^(n-1) + 1")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tol", default="1/1000000000", help="bracket width, as a fraction or decimal")

    p = add("example-sec5", cmd_example_sec5, "reproduce the quadratic example modulo primes")
    p.add_argument("--primes", default="3,5,7,11,13")
    p.add_argument("--qq-steps", type=int, default=8, help="iterates checked over QQ (0 skips)")
    return ap


def _emit(args, command: str, payload, t0: float) -> None:
    out = sys.stdout
    inputs, results, lines = payload
    report = {
        "command": command,
        "version": __version__,
        "seed": args.seed,
        "inputs": inputs,
        "results": results,
        "wall_time": round(time.perf_counter() - t0, 3),
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.json == "-":
        out.write(text + "\n")
        return
    out.write("\n".join(lines) + "\n")
    if args.json:
        Path(args.json).write_text(text + "\n", encoding="utf-8")


GLOBAL_DEFAULTS = {"seed": 0, "threads": 1, "term_cap": None, "json": None}


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    args = build_parser().parse_args(argv)
    for k, v in GLOBAL_DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    return args


def main(argv: list[str] | None = None) -> int:
    args = parse_args(argv)
    t0 = time.perf_counter()
    old_cap = hpoly.get_term_cap()
    if args.term_cap is not None:
        hpoly.set_term_cap(args.term_cap)
    try:
        payload = args.func(args)
        code = EXIT_OK
    except CapHit as exc:
        payload, code = exc.args[0], EXIT_CAP
    except CheckFailed as exc:
        payload, code = exc.args[0], EXIT_CHECK
    except DegreeOverflow as exc:
        print(f"p2dyn: size cap hit: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ParseError, MapError, FieldError, ValueError, OSError, ZeroDivisionError) as exc:
        print(f"p2dyn: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    finally:
        hpoly.set_term_cap(old_cap)
    _emit(args, args.command, payload, t0)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
