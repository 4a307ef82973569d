"""Named experiments: each builds a construction, runs the checks and reports.

A report is a plain dict with a fixed key order. Everything except
``runtime_ms`` is deterministic for fixed parameters.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import io
from .constructions import (
    LeveledTemplate,
    TreeEdgeGraph,
    coloured_template_product,
    complete_template,
    hexagon_template,
    mckay_praeger,
    template_product,
    tensor_z_kbar,
    tree_edge_graph,
)
from .geometry import incidence_template
from .graph import FiniteDigraph, PeriodicDigraph, tile, underlying_components, window
from .groups import (
    Perm,
    cayley_coset_graph,
    clone_expansion_check,
    double_coset,
    generate_group,
    left_action_is_automorphic,
    parse_cycles,
)
from .reachability import is_complete_bipartite, r_digraph, reach_partition, universality_certificate
from .symmetry import clone_classes, isomorphic, property_z_check, s_arc_transitivity_report, walk_displacement

__all__ = ["ExperimentReport", "EXPERIMENTS", "run_experiment", "build_construction", "named_template", "cayley_witnesses"]

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"

CONSTRUCTION_ALIASES = {"1": "mckay", "2": "template", "3": "template", "4": "coloured"}


@dataclass
class ExperimentReport:
    experiment: str
    params: dict[str, Any]
    verdicts: dict[str, str] = field(default_factory=dict)
    metrics: dict[str, Any] = field(default_factory=dict)
    files: list[str] = field(default_factory=list)
    runtime_ms: float = 0.0

    def as_dict(self) -> dict[str, Any]:
        return {
            "experiment": self.experiment,
            "params": self.params,
            "verdicts": self.verdicts,
            "metrics": self.metrics,
            "files": self.files,
            "runtime_ms": self.runtime_ms,
        }

    def to_json(self, include_runtime: bool = True) -> str:
        doc = self.as_dict()
        if not include_runtime:
            del doc["runtime_ms"]
        return json.dumps(doc, indent=2, default=_default) + "\n"

    @property
    def exit_code(self) -> int:
        values = set(self.verdicts.values())
        if FAIL in values:
            return 1
        if INCONCLUSIVE in values:
            return 2
        return 0


def _default(x: Any) -> Any:
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not serialisable: {type(x)}")


def _v(ok: bool) -> str:
    return PASS if ok else FAIL


def named_template(name: str) -> LeveledTemplate:
    """``hexagon``, ``complete:2,2,2``, ``pg:n,q`` or a path to a JSON template."""
    if name == "hexagon":
        return hexagon_template()
    if name.startswith("complete:"):
        return complete_template([int(x) for x in name.split(":", 1)[1].split(",")])
    if name.startswith("pg:"):
        n, q = (int(x) for x in name.split(":", 1)[1].split(","))
        return incidence_template(n, q)
    return io.load_template(name)


def build_construction(construction: str, **p: Any) -> PeriodicDigraph | TreeEdgeGraph:
    construction = CONSTRUCTION_ALIASES.get(str(construction), construction)
    if construction == "tensor":
        return tensor_z_kbar(int(p.get("k", 2)))
    if construction == "tree":
        return tree_edge_graph(int(p.get("a", 3)), int(p.get("b", 3)), int(p.get("R", 5)))
    if construction == "mckay":
        return mckay_praeger(int(p.get("s", 2)), int(p.get("n", 3)))
    if construction == "template":
        return template_product(named_template(p.get("template", "hexagon")))
    if construction == "coloured":
        return coloured_template_product(named_template(p["template"]))
    if construction == "geometry":
        return template_product(incidence_template(int(p.get("n", 3)), int(p.get("q", 2))))
    raise ValueError(f"unknown construction {construction!r}")


def as_window(obj: PeriodicDigraph | TreeEdgeGraph, lo: int = 0, hi: int = 4, margin: int = 1) -> FiniteDigraph:
    if isinstance(obj, TreeEdgeGraph):
        return obj.graph
    return window(obj, lo, hi, margin=margin)


# -- experiments -------------------------------------------------------------


def _hat_universal(rep: ExperimentReport, a: int = 3, b: int = 3, R: int = 5) -> None:
    tg = tree_edge_graph(a, b, R)
    G = tg.graph
    d = (a - 1) * (b - 1)
    core = G.core_vertices
    degrees_ok = bool(np.all(G.in_degree[core] == d) and np.all(G.out_degree[core] == d))
    cert = universality_certificate(G)
    lev = property_z_check(G)
    rep.verdicts["core_degrees"] = _v(degrees_ok)
    rep.verdicts["universal_on_core"] = PASS if cert.kind == "UniversalOnCore" else (
        INCONCLUSIVE if cert.kind == "Inconclusive" else FAIL
    )
    rep.verdicts["property_z_conflict"] = _v(not lev.consistent and walk_displacement(G, lev.walk) != 0)
    rep.metrics.update(
        vertices=G.n, arcs=G.num_arcs, core_size=len(core), degree=d,
        universality=cert.kind, core_arcs=cert.core_arcs,
        conflict_walk_length=0 if lev.walk is None else len(lev.walk),
        conflict_displacement=lev.displacement,
    )


def _conjecture_counterexample(rep: ExperimentReport, levels: int = 5) -> None:
    P = template_product(hexagon_template())
    B = tile(P)
    comps = underlying_components(B)
    W = window(P, 0, levels - 1)
    part = reach_partition(W, witnesses_per_class=0)
    R = r_digraph(B, check_isomorphism=False).graph
    bip = is_complete_bipartite(R)
    outdeg = sorted(set(R.out_degree[R.out_degree > 0].tolist()))
    rep.verdicts["tile_connected"] = _v(len(comps) == 1)
    rep.verdicts["one_class_per_tile"] = _v(part.num_classes == levels - 1)
    rep.verdicts["parts_9_9"] = _v(len(bip.sources) == 9 and len(bip.sinks) == 9)
    rep.verdicts["out_degree_6"] = _v(outdeg == [6])
    rep.verdicts["not_complete_bipartite"] = _v(not bip.complete and bip.missing is not None)
    rep.metrics.update(
        tile_components=len(comps), window_classes=part.num_classes,
        r_sources=len(bip.sources), r_sinks=len(bip.sinks), r_out_degrees=outdeg,
        missing_pair=None if bip.missing is None else [R.labels[bip.missing[0]], R.labels[bip.missing[1]]],
    )


def _mckay_tiles(rep: ExperimentReport, s: int = 2, n: int = 3) -> None:
    P = mckay_praeger(s, n)
    B = tile(P)
    comps = underlying_components(B)
    kss = FiniteDigraph(2 * s, [(i, s + j) for i in range(s) for j in range(s)])
    each_kss = all(isomorphic(B.induced_subgraph(c), kss) for c in comps)
    rr = r_digraph(B)
    rep.verdicts["component_count"] = _v(len(comps) == s ** (n - 1))
    rep.verdicts["components_are_Kss"] = _v(each_kss)
    rep.verdicts["class_count"] = _v(rr.num_classes == s ** (n - 1))
    rep.verdicts["classes_isomorphic"] = _v(bool(rr.all_isomorphic))
    rep.verdicts["R_is_Kss"] = _v(isomorphic(rr.graph, kss))
    rep.metrics.update(components=len(comps), class_count=rr.num_classes, class_sizes=rr.class_sizes)


def _clones_geometry(rep: ExperimentReport, n: int = 3, q: int = 2) -> None:
    T = incidence_template(n, q)
    W = window(template_product(T), 0, 2)
    cr = clone_classes(W)
    V0 = int(np.prod(T.levels))
    rep.verdicts["c_plus_is_last_level"] = _v(cr.c_plus == T.levels[-1])
    rep.verdicts["c_minus_is_first_level"] = _v(cr.c_minus == T.levels[0])
    rep.verdicts["product_below_level_size"] = _v(cr.c_plus is not None and cr.c_minus is not None and cr.c_plus * cr.c_minus < V0)
    H = hexagon_template()
    Wh = window(template_product(H), 0, 2)
    ch = clone_classes(Wh)
    V0h = int(np.prod(H.levels))
    rep.verdicts["hexagon_product_at_least_level_size"] = _v(
        ch.c_plus is not None and ch.c_minus is not None and ch.c_plus * ch.c_minus >= V0h
    )
    rep.metrics.update(
        levels=list(T.levels), c_plus=cr.c_plus, c_minus=cr.c_minus, level_size=V0,
        hexagon_c_plus=ch.c_plus, hexagon_c_minus=ch.c_minus, hexagon_level_size=V0h,
    )


def _s_arc_window(rep: ExperimentReport, levels: int = 6, s_max: int = 3, cap: int = 10**6) -> None:
    cases = {
        "tensor2": tensor_z_kbar(2),
        "complete222": template_product(complete_template((2, 2, 2))),
    }
    for name, P in cases.items():
        W = window(P, 0, levels - 1)
        for s in range(1, s_max + 1):
            r = s_arc_transitivity_report(W, s, cap=cap)
            key = f"{name}_s{s}"
            rep.verdicts[key] = PASS if r.verdict == "Transitive" else (INCONCLUSIVE if r.cap_hit else FAIL)
            rep.metrics[key] = r.as_dict()


def cayley_witnesses() -> list[dict[str, Any]]:
    """The small groups used to check the clone-expansion property."""
    c4 = Perm((1, 2, 3, 0))
    C4 = generate_group([c4])
    C4_half = C4.subgroup([c4 * c4])
    C4_triv = C4.subgroup([])
    A_c4 = frozenset({c4, c4 * c4 * c4})  # odd rotations, a union of cosets of the half-turn

    S3 = generate_group([parse_cycles("(0 1)", 3), parse_cycles("(0 1 2)", 3)])
    S3_two = S3.subgroup([parse_cycles("(0 1)", 3)])
    S3_triv = S3.subgroup([])
    A_s3 = double_coset(S3_two, parse_cycles("(0 2)", 3))
    return [
        {"name": "identity-index", "group": S3, "sub": S3_two, "smaller": S3_two, "A": A_s3},
        {"name": "cyclic4", "group": C4, "sub": C4_half, "smaller": C4_triv, "A": A_c4},
        {"name": "S3-double-coset", "group": S3, "sub": S3_two, "smaller": S3_triv, "A": A_s3},
    ]


def _cayley_clone(rep: ExperimentReport) -> None:
    for w in cayley_witnesses():
        v = clone_expansion_check(w["group"], w["sub"], w["smaller"], w["A"])
        C = cayley_coset_graph(w["group"], w["smaller"], w["A"])
        Cs = cayley_coset_graph(w["group"], w["sub"], w["A"])
        rep.verdicts[f"{w['name']}_clone_expansion"] = _v(v.passed)
        rep.verdicts[f"{w['name']}_vertex_transitive"] = _v(left_action_is_automorphic(C) and left_action_is_automorphic(Cs))
        rep.metrics[w["name"]] = {
            "k": v.k, "cosets": C.graph.n, "arcs": C.graph.num_arcs,
            "quotient_vertices": Cs.graph.n, "loops_removed": list(v.loops_removed),
        }


def _property_z(rep: ExperimentReport, construction: str = "tensor", lo: int = 0, hi: int = 4, **p: Any) -> None:
    obj = build_construction(construction, **p)
    G = as_window(obj, lo, hi)
    lev = property_z_check(G)
    expect_conflict = isinstance(obj, TreeEdgeGraph)
    if lev.consistent:
        ok = not expect_conflict and (G.level is None or np.array_equal(lev.f, G.level))
    else:
        ok = expect_conflict and walk_displacement(G, lev.walk) != 0
    rep.verdicts["leveling"] = _v(ok)
    rep.metrics.update(result="Consistent" if lev.consistent else "Conflict", vertices=G.n, arcs=G.num_arcs)


EXPERIMENTS: dict[str, Callable[..., None]] = {
    "hat-universal": _hat_universal,
    "conjecture-counterexample": _conjecture_counterexample,
    "mckay-tiles": _mckay_tiles,
    "clones-geometry": _clones_geometry,
    "s-arc-window": _s_arc_window,
    "cayley-clone": _cayley_clone,
    "property-z": _property_z,
}


def run_experiment(name: str, out: str | Path | None = None, **params: Any) -> ExperimentReport:
    """Run one named experiment; with ``out`` the JSON report is written there."""
    if name not in EXPERIMENTS:
        raise ValueError(f"unknown experiment {name!r}; choose from {sorted(EXPERIMENTS)}")
    rep = ExperimentReport(name, dict(sorted(params.items())))
    t0 = time.perf_counter()
    try:
        EXPERIMENTS[name](rep, **params)
    except TypeError as exc:
        raise ValueError(f"invalid parameters for {name}: {exc}") from exc
    rep.runtime_ms = round((time.perf_counter() - t0) * 1000, 3)
    if out is not None:
        out = Path(out)
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"{name}.json"
        rep.files.append(str(path))
        path.write_text(rep.to_json())
    return rep
