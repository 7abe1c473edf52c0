"""Machine-readable reports shared by the CLI and the tests.

Every builder returns plain dicts/lists of ints and strings, so
``json.dumps(..., sort_keys=True)`` is byte-deterministic.
"""

from __future__ import annotations

from .designs import Design, DifferenceFamily, Violation
from .gradings import (
    GroupGrading,
    SetGrading,
    diag_invariants,
    e_from_grading,
    ecirc,
    verify_group_grading,
    verify_set_grading,
)
from .lattice import Lattice, index
from .roots import root_lattice, weight_lattice
from .unigroup import NotRealizable, Realizable

SCHEMA_VERSION = "1"


def _num(x):
    return "inf" if x == float("inf") else int(x)


def lattice_json(L: Lattice) -> dict:
    return {"ambient_rank": L.ambient_rank, "basis": [list(r) for r in L.basis]}


def violation_json(v: Violation | None) -> dict | None:
    if v is None:
        return None
    out = {"kind": v.kind, "message": v.describe()}
    if v.pair is not None:
        out["pair"] = list(v.pair)
    if v.blocks:
        out["blocks"] = [list(b) for b in v.blocks]
    if v.kind == "block_count":
        out["expected"] = v.expected
        out["actual"] = v.actual
    return out


def design_json(d: Design) -> dict:
    return {"n": d.n, "block_count": len(d.blocks), "blocks": [list(b) for b in d.blocks]}


def family_json(f: DifferenceFamily) -> dict:
    def elem(e):
        return e if isinstance(e, int) else list(e)

    return {
        "n": f.n,
        "moduli": list(f.moduli),
        "base_blocks": [[elem(e) for e in b] for b in f.base_blocks],
    }


def grading_json(g: SetGrading, verify: bool = True) -> dict:
    out: dict = {
        "n": g.n,
        "basis": g.basis.kind,
        "component_count": len(g.components),
        "dimension_histogram": {str(k): v for k, v in g.dimension_histogram().items()},
        "total_dimension": sum(len(c) for c in g.components),
    }
    if verify:
        cex = verify_set_grading(g)
        out["set_grading"] = "ok" if cex is None else "counterexample"
        if cex is not None:
            out["counterexample"] = {
                "components": [cex.first, cex.second],
                "hits": list(cex.hits),
            }
    if g.basis.kind == "adapted" and g.cartan_component() is not None:
        E = e_from_grading(g)
        Q = root_lattice(g.n)
        out["E"] = lattice_json(E)
        out["index_Q_E"] = _num(index(E, Q))
        out["index_W_E"] = _num(index(E, weight_lattice(g.n)))
        out["diag_invariants"] = diag_invariants(g)
    return out


def group_grading_json(gg: GroupGrading, verify: bool = True) -> dict:
    out = grading_json(gg.underlying, verify)
    out["group"] = {
        "invariant_factors": list(gg.group.torsion),
        "free_rank": gg.group.free_rank,
    }
    out["labels"] = [list(a) for a in gg.assignment]
    if verify:
        cex = verify_group_grading(gg)
        out["group_grading"] = "ok" if cex is None else "counterexample"
        if cex is not None:
            out["group_counterexample"] = {
                "components": [cex.first, cex.second],
                "hits": list(cex.hits),
                "expected_label": list(cex.expected_label),
            }
    return out


def pure_json(n: int, E: Lattice, gg: GroupGrading) -> dict:
    Q = root_lattice(n)
    Ec = ecirc(n, E)
    out = group_grading_json(gg)
    out.update(
        {
            "E": lattice_json(E),
            "E_circ": lattice_json(Ec),
            "E_circ_equals_E": Ec == E,
            "E_circ_equals_2Q": Ec == Q.scaled(2),
            "index_Q_E": _num(index(E, Q)),
            "index_Q_E_circ": _num(index(Ec, Q)),
        }
    )
    return out


def verdict_json(v: Realizable | NotRealizable, g: SetGrading) -> dict:
    u = v.universal
    out = {
        "component_count": len(g.components),
        "free_rank": u.free_rank,
        "invariant_factors": list(u.invariant_factors),
        "verdict": "Realizable" if v.realizable else "NotRealizable",
    }
    if isinstance(v, NotRealizable):
        out["certificate"] = {"components": list(v.certificate), "image": list(v.image)}
    else:
        out["induced_labels"] = [list(a) for a in v.grading.assignment]
    return out
