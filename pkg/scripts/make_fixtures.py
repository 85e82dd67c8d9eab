"""Regenerate the JSON fixtures shipped in src/kgraph/fixtures."""

from pathlib import Path

from kgraph import generators
from kgraph.io import dump_kgraph

OUT = Path(__file__).resolve().parents[1] / "src" / "kgraph" / "fixtures"


def fixture_graphs():
    out = {name.lower(): generators.named_example(name) for name in generators.NAMED_EXAMPLES}
    out["delta2_G"] = generators.cycle(2, [(2, 0), (0, 1)])
    for counts in [(2, 2), (2, 3), (2, 8), (4, 8), (3, 9)]:
        out["sv_%d_%d" % counts] = generators.single_vertex(2, counts)
    out["sv_o2"] = generators.single_vertex(1, (2,))
    # 1-graphs with known period: a 3-cycle with a chord (period 1) and a
    # bipartite graph (period 2)
    out["one_graph_chord"] = generators.one_graph(
        ["x0", "x1", "x2"], [("x0", "x1"), ("x1", "x2"), ("x2", "x0"), ("x0", "x2")]
    )
    out["one_graph_bipartite"] = generators.one_graph(
        ["x0", "x1", "x2"], [("x0", "x1"), ("x1", "x0"), ("x0", "x2"), ("x2", "x0"), ("x1", "x0")]
    )
    return out


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    for name, g in fixture_graphs().items():
        (OUT / f"{name}.json").write_text(dump_kgraph(g), encoding="utf-8")
        print(name)
