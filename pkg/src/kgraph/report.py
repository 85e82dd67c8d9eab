"""Machine-readable analysis reports.

Reports hold only JSON-native values; every real number is a fixed-width
decimal string paired with an error bound, so serialisation is byte-stable and
``AnalysisReport.from_json(r.to_json()) == r``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from importlib import metadata

import mpmath

from .classify import Classification, Dense, Discrete, TypeIFinite, TypeIII, classify, connes_invariant
from .graph import KGraph
from .periodicity import periodicity_group
from .periods import period_group, positive_period, structure_flags, vertex_classes
from .spectral import decimal, pf_eigenvector

REPORT_VERSION = 1

# plain-language basis for each report field
BASIS = {
    "rho": "spectral radii of the coordinate connectivity matrices",
    "pf_vector": "common positive eigenvector of the connectivity matrices, unit 1-norm",
    "period_group": "group generated by differences of cycle degrees",
    "classes": "vertices related by paths whose degree lies in the group of periods",
    "positive_period": "strictly positive period whose paths join exactly the same-class vertices",
    "flags": "primitive iff the group of periods is Z^k; simple cycle iff one edge of each colour at every vertex",
    "periodicity_group": "degree differences m - n with equal shifts on every infinite path",
    "connes_invariant": "closure of rho^g over g in the group of periods",
    "factor_types": "factor type of the extremal KMS states of the preferred dynamics",
}


def tool_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0.0.0"


def real(x, err, precision_bits: int) -> dict:
    return {"value": decimal(x, precision_bits), "error": mpmath.nstr(err, 5)}


def connes_dict(inv, precision_bits: int) -> dict:
    gens = [decimal(x, precision_bits) for x in inv.generators]
    out = {"tag": inv.tag, "generators": gens}
    if isinstance(inv, Discrete):
        out["c"] = real(inv.c, inv.c_error, precision_bits)
    elif isinstance(inv, Dense):
        out["caveat"] = inv.caveat
        out["denominator_bound"] = inv.denominator_bound
    return out


def classification_dict(c: Classification, precision_bits: int) -> dict:
    f = c.factor
    out = {"beta": str(c.beta), "type": f.tag, "extremal_states": c.extremal_index, "basis": c.basis}
    if isinstance(f, TypeIFinite):
        out["n"] = f.n
    if isinstance(f, TypeIII):
        out["lambda"] = real(f.lam, f.lam_error, precision_bits)
        out["dense"] = f.dense
        if f.dense:
            out["caveat"] = "numeric, bound Q"
    if c.extremal_labels:
        out["extremal_labels"] = list(c.extremal_labels)
    if c.connes is not None:
        out["connes_invariant"] = connes_dict(c.connes, precision_bits)
    return out


def graph_summary(g: KGraph) -> dict:
    return {
        "rank": g.rank,
        "vertices": len(g.vertices),
        "edges_per_color": [sum(e.color == c for e in g.edges) for c in range(1, g.rank + 1)],
    }


@dataclass
class AnalysisReport:
    graph: dict
    rho: list
    pf_vector: dict
    period_group: dict
    classes: list
    positive_period: dict
    flags: dict
    periodicity_group: dict
    connes_invariant: dict
    factor_types: list
    settings: dict
    tool_version: str = field(default_factory=tool_version)
    report_version: int = REPORT_VERSION
    basis: dict = field(default_factory=lambda: dict(BASIS))

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "AnalysisReport":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in names})

    @classmethod
    def from_json(cls, text: str) -> "AnalysisReport":
        return cls.from_dict(json.loads(text))


def analyze(
    g: KGraph,
    betas=(1, 2),
    precision_bits: int = 256,
    denominator_bound: int = 10_000,
    per_box: int = 5,
    seed: int | None = None,
) -> AnalysisReport:
    spec = pf_eigenvector(g, precision_bits)
    P = period_group(g)
    vc = vertex_classes(g)
    pp = positive_period(g)
    flags = structure_flags(g)
    per = periodicity_group(g, per_box, precision_bits)
    inv = connes_invariant(g, precision_bits, denominator_bound)
    return AnalysisReport(
        graph=graph_summary(g),
        rho=[real(r, e, precision_bits) for r, e in zip(spec.rho, spec.rho_error)],
        pf_vector={v: decimal(x, precision_bits) for v, x in zip(g.vertices, spec.x)},
        period_group={"basis": [list(b) for b in P.basis], "index": P.index,
                      "invariant_factors": list(P.invariant_factors())},
        classes=[{"vertices": list(om), "label": list(lab)} for om, lab in zip(vc.classes, vc.labels)],
        positive_period={"p": list(pp.p), "method": pp.method, "search_bound": pp.bound},
        flags={"is_primitive": flags.is_primitive, "is_simple_cycle": flags.is_simple_cycle},
        periodicity_group={
            "basis": [list(b) for b in per.basis],
            "box": per.box,
            "caveat": f"complete only for generators inside [-{per.box}, {per.box}]^k",
        },
        connes_invariant=connes_dict(inv, precision_bits),
        factor_types=[
            classification_dict(classify(g, b, precision_bits, denominator_bound), precision_bits)
            for b in betas
        ],
        settings={"precision_bits": precision_bits, "denominator_bound": denominator_bound,
                  "per_box": per_box, "seed": seed},
    )
