"""Command-line interface.

Exit codes: 0 success or positive verdict, 1 negative verdict (violation,
not found, not realizable, failed verification), 2 input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import report
from .designs import (
    develop_difference_family,
    parse_design,
    pg2_f3,
    search_base_blocks,
    validate,
    write_design,
)
from .errors import InputError, PreconditionError
from .gradings import (
    component_scalars,
    grading_from_design,
    grading_from_subgroup,
    line_sum_matrix,
    parse_subgroup,
)
from .lattice import elementary_divisors, parse_matrix, smith_normal_form
from .liealg import check_automorphism, sigma, tau
from .unigroup import realizability_verdict


def _digest(path: str) -> dict:
    data = Path(path).read_bytes()
    return {"path": path, "sha256": hashlib.sha256(data).hexdigest()}


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_design(source: str):
    if source == "pg23":
        return pg2_f3(), {"design": "pg23"}
    d = parse_design(_read(source))
    return d, {"design": _digest(source)}


def _report(command: str, inputs: dict, results: dict, verdict: str | None) -> dict:
    out = {
        "schema_version": report.SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "results": results,
    }
    if verdict is not None:
        out["verdict"] = verdict
    return out


def _parse_elem(tok: str):
    if ":" in tok:
        return tuple(int(x) for x in tok.split(":"))
    return int(tok)


def _parse_moduli(s: str | None):
    if s is None:
        return None
    try:
        return tuple(int(x) for x in s.split(","))
    except ValueError:
        raise InputError(f"bad --moduli {s!r}; expected e.g. 5,5") from None


# ---------------------------------------------------------------------------
# Commands


def cmd_demo_d13(args) -> tuple[dict, int]:
    d = pg2_f3()
    g = grading_from_design(d)
    grading = report.grading_json(g)
    A = line_sum_matrix(d)
    divs = elementary_divisors(A)
    verdict = realizability_verdict(g)
    auto = {}
    for name, phi in (("sigma", sigma), ("tau", tau)):
        scalars = component_scalars(g, phi)
        auto[name] = {
            "automorphism": check_automorphism(phi, d.n),
            "diagonal": scalars is not None,
            "eigenvalues": sorted({int(s) for s in scalars}) if scalars else [],
        }
    results = {
        "design": {"n": d.n, "block_count": len(d.blocks), "valid": validate(d) is None},
        "grading": grading,
        "line_sum_matrix": {
            "shape": [len(A), d.n],
            "elementary_divisors": divs,
            "nonzero_divisors": [x for x in divs if x],
        },
        "diagonal_automorphisms": auto,
        "universal_group": report.verdict_json(verdict, g),
    }
    name = "Realizable" if verdict.realizable else "NotRealizable"
    return _report("demo-d13", {}, results, name), 0


def cmd_design(args) -> tuple[dict, int]:
    sub = args.design_cmd
    if sub == "pg23":
        d = pg2_f3()
        _maybe_write(args.out, write_design(d))
        bad = validate(d)
        return _report("design pg23", {}, report.design_json(d), "Ok" if bad is None else "Violation"), 0
    if sub == "validate":
        d = parse_design(_read(args.file))
        bad = validate(d)
        res = {"n": d.n, "block_count": len(d.blocks), "violation": report.violation_json(bad)}
        verdict = "Ok" if bad is None else "Violation"
        return _report("design validate", {"file": _digest(args.file)}, res, verdict), int(bad is not None)
    if sub == "develop":
        moduli = _parse_moduli(args.moduli)
        blocks = [[_parse_elem(t) for t in b.split(",")] for b in args.blocks]
        d = develop_difference_family(args.n, blocks, moduli)
        _maybe_write(args.out, write_design(d))
        inputs = {"n": args.n, "blocks": args.blocks, "moduli": list(moduli or (args.n,))}
        return _report("design develop", inputs, report.design_json(d), "Ok"), 0
    if sub == "search":
        moduli = _parse_moduli(args.moduli)
        fam = search_base_blocks(args.n, moduli, seed=args.seed)
        inputs = {"n": args.n, "moduli": list(moduli) if moduli else None, "seed": args.seed}
        if fam is None:
            return _report("design search", inputs, {"family": None}, "NotFound"), 1
        d = fam.develop()
        _maybe_write(args.out, write_design(d))
        res = {
            "family": report.family_json(fam),
            "design": report.design_json(d),
            "valid": validate(d) is None,
        }
        return _report("design search", inputs, res, "Found"), 0
    raise InputError(f"unknown design subcommand {sub!r}")


def _maybe_write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")


def cmd_grade(args) -> tuple[dict, int]:
    if (args.design is None) == (args.subgroup is None):
        raise InputError("give exactly one of --design or --subgroup")
    if args.design is not None:
        d, inputs = _load_design(args.design)
        g = grading_from_design(d)
        res = report.grading_json(g, verify=args.verify)
        ok = res.get("set_grading", "ok") == "ok"
    else:
        n, E = parse_subgroup(_read(args.subgroup))
        if args.n is not None and args.n != n:
            raise InputError(f"--n {args.n} disagrees with the subgroup file (n = {n})")
        gg = grading_from_subgroup(n, E)
        inputs = {"subgroup": _digest(args.subgroup), "n": n}
        res = report.group_grading_json(gg, verify=args.verify)
        ok = res.get("set_grading", "ok") == "ok" and res.get("group_grading", "ok") == "ok"
    verdict = ("Ok" if ok else "Counterexample") if args.verify else None
    return _report("grade", inputs, res, verdict), int(not ok)


def cmd_nongroup(args) -> tuple[dict, int]:
    d, inputs = _load_design(args.design)
    g = grading_from_design(d)
    v = realizability_verdict(g)
    res = report.verdict_json(v, g)
    return _report("nongroup", inputs, res, res["verdict"]), int(not v.realizable)


def cmd_pure(args) -> tuple[dict, int]:
    n, E = parse_subgroup(_read(args.subgroup))
    if args.n is not None and args.n != n:
        raise InputError(f"--n {args.n} disagrees with the subgroup file (n = {n})")
    gg = grading_from_subgroup(n, E)
    res = report.pure_json(n, E, gg)
    ok = res["set_grading"] == "ok" and res["group_grading"] == "ok"
    inputs = {"subgroup": _digest(args.subgroup), "n": n}
    return _report("pure", inputs, res, "Ok" if ok else "Counterexample"), int(not ok)


def cmd_snf(args) -> tuple[dict, int]:
    A = parse_matrix(_read(args.file))
    cols = len(A[0]) if A else 0
    snf = smith_normal_form(A)
    divs = snf.diagonal
    res = {
        "shape": [len(A), cols],
        "elementary_divisors": divs,
        "nonzero_divisors": [x for x in divs if x],
        "rank": snf.rank,
    }
    if args.transforms:
        res["U"] = snf.U
        res["V"] = snf.V
    return _report("snf", {"file": _digest(args.file)}, res, None), 0


# ---------------------------------------------------------------------------
# Rendering and entry point


def render_text(rep: dict) -> str:
    lines = [f"# {rep['command']}"]
    if "verdict" in rep:
        lines.append(f"verdict: {rep['verdict']}")

    def walk(obj, indent):
        pad = "  " * indent
        for k, v in obj.items():
            if isinstance(v, dict):
                lines.append(f"{pad}{k}:")
                walk(v, indent + 1)
            elif isinstance(v, list) and v and isinstance(v[0], list) and len(v) > 4:
                lines.append(f"{pad}{k}: ({len(v)} rows)")
                lines.extend(f"{pad}  {' '.join(map(str, r))}" for r in v)
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")

    walk(rep["results"], 0)
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the full JSON report")

    p = argparse.ArgumentParser(
        prog="setgrading",
        description="Set gradings on so(2n) from Steiner systems S(2,4,n).",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("demo-d13", parents=[common], help="full pipeline on the D13 grading")

    pd = sub.add_parser("design", help="Steiner systems S(2,4,n)")
    dsub = pd.add_subparsers(dest="design_cmd", required=True)
    x = dsub.add_parser("pg23", parents=[common], help="the 13 lines of PG(2,3)")
    x.add_argument("--out", help="also write the design file here")
    x = dsub.add_parser("validate", parents=[common], help="check the Steiner property")
    x.add_argument("file")
    x = dsub.add_parser("develop", parents=[common], help="develop a difference family")
    x.add_argument("--n", type=int, required=True)
    x.add_argument(
        "--blocks", nargs="+", required=True,
        help="base blocks as comma-separated elements, e.g. 0,1,3,9 (use a:b for Z_m x Z_k)",
    )
    x.add_argument("--moduli", help="group moduli, e.g. 5,5 (default: cyclic)")
    x.add_argument("--out")
    x = dsub.add_parser("search", parents=[common], help="search for a difference family")
    x.add_argument("--n", type=int, required=True)
    x.add_argument("--moduli", help="restrict to one group, e.g. 25 or 5,5")
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--out")

    x = sub.add_parser("grade", parents=[common], help="build (and verify) a grading")
    x.add_argument("--design", help="design file, or 'pg23'")
    x.add_argument("--subgroup", help="subgroup file (2Q is added implicitly)")
    x.add_argument("--n", type=int)
    x.add_argument("--verify", action="store_true")

    x = sub.add_parser("nongroup", parents=[common], help="group-realizability verdict")
    x.add_argument("--design", required=True, help="design file, or 'pg23'")

    x = sub.add_parser("pure", parents=[common], help="pure grading of a subgroup 2Q <= E <= Q")
    x.add_argument("--n", type=int)
    x.add_argument("--subgroup", required=True)

    x = sub.add_parser("snf", parents=[common], help="elementary divisors of a matrix file")
    x.add_argument("file")
    x.add_argument("--transforms", action="store_true", help="include U and V")
    return p


HANDLERS = {
    "demo-d13": cmd_demo_d13,
    "design": cmd_design,
    "grade": cmd_grade,
    "nongroup": cmd_nongroup,
    "pure": cmd_pure,
    "snf": cmd_snf,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        rep, code = HANDLERS[args.command](args)
    except (InputError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        sys.stdout.write(json.dumps(rep, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(render_text(rep))
    return code


if __name__ == "__main__":
    sys.exit(main())
