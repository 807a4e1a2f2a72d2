"""Plain-text instance files shared by the CLI and the suites.

Formats (blank lines and ``#`` comments are ignored)::

    matroid linear q=<q> rank=<r> cols=<m>      then m lines of r entries
    matroid graphic vertices=<n>                then edge lines "u v"
    biasedgraph vertices=<n> group=cyclic <k>   then "edge id u v g" / "loop id v g"
    biasedgraph vertices=<n> group=table <r0;r1;...>   rows comma separated
    biasedgraph vertices=<n> group=explicit     gains omitted, plus "balanced id id ..."
    graph vertices=<n>                          then edge lines "u v"
    tower n=<n>                                 then "<mask> <element id>"
"""

from __future__ import annotations

import re
from pathlib import Path

from .algebra import KLEIN_FOUR, GroupTable, cyclic_group, group_make
from .frame import BiasedGraph, explicit_biased_graph, gain_biased_graph
from .graphs import SimpleGraph
from .linear import LinearMatroid, as_linear, linear_matroid
from .matroid import GraphicBackend, MatroidHandle, as_handle, graphic
from .towers import Tower


class FormatError(ValueError):
    pass


def _rows(text: str) -> list[str]:
    out = []
    for ln in text.splitlines():
        ln = ln.split("#", 1)[0].strip()
        if ln:
            out.append(ln)
    if not out:
        raise FormatError("empty instance file")
    return out


def _fields(header: str) -> dict[str, str]:
    return dict(m.groups() for m in re.finditer(r"(\w+)=(\S+)", header))


def parse_group(spec: str) -> GroupTable:
    """'cyclic3', 'Z3', 'cyclic 3', 'klein' or 'table 0,1;1,0'."""
    s = spec.strip().lower()
    m = re.fullmatch(r"(?:cyclic|z)\s*(\d+)", s)
    if m:
        return cyclic_group(int(m.group(1)))
    if s in ("klein", "v4", "klein4"):
        return group_make("explicit", KLEIN_FOUR)
    if s.startswith("table"):
        body = s[5:].strip()
        rows = [[int(x) for x in r.split(",")] for r in body.split(";") if r.strip()]
        return group_make("explicit", rows)
    raise FormatError(f"unknown group {spec!r}")


def _group_text(G: GroupTable) -> str:
    if G.name == f"Z{G.order}":
        return f"cyclic {G.order}"
    return "table " + ";".join(",".join(map(str, row)) for row in G.op)


# ---------------------------------------------------------------- writers


def dumps(obj) -> str:
    if isinstance(obj, (Tower, SimpleGraph)):
        return obj.to_text()
    if isinstance(obj, BiasedGraph):
        return _biased_text(obj)
    if isinstance(obj, LinearMatroid):
        return _linear_text(obj)
    if isinstance(obj, MatroidHandle):
        lm = as_linear(obj)
        if lm is not None:
            return _linear_text(lm)
        if isinstance(obj.backend, GraphicBackend) and not (obj.contracted or obj.deleted):
            b = obj.backend
            return f"matroid graphic vertices={b.n_vertices}\n" + "".join(f"{u} {v}\n" for u, v in b.edges)
        raise FormatError("only linear and graphic matroids can be written")
    raise FormatError(f"cannot serialize {type(obj).__name__}")


def _linear_text(lm: LinearMatroid) -> str:
    head = f"matroid linear q={lm.field.q} rank={lm.nrows} cols={len(lm.columns)}\n"
    return head + "".join(" ".join(map(str, c)) + "\n" for c in lm.columns)


def _biased_text(B: BiasedGraph) -> str:
    G = B.graph
    n = max(G.vertices) + 1 if G.vertices else 0
    if set(G.vertices) != set(range(n)):
        raise FormatError("vertices must be 0..n-1 to be written")
    if B.gain is not None:
        gains = B.gain.gain()
        out = [f"biasedgraph vertices={n} group={_group_text(B.gain.group)}"]
        for i, u, v in G.edges:
            out.append(f"loop {i} {u} {gains[i]}" if u == v else f"edge {i} {u} {v} {gains[i]}")
    else:
        out = [f"biasedgraph vertices={n} group=explicit"]
        for i, u, v in G.edges:
            out.append(f"loop {i} {u}" if u == v else f"edge {i} {u} {v}")
        for c in sorted(B.explicit, key=sorted):
            out.append("balanced " + " ".join(map(str, sorted(c))))
    return "\n".join(out) + "\n"


def write(obj, path) -> Path:
    p = Path(path)
    p.write_text(dumps(obj))
    return p


# ---------------------------------------------------------------- readers


def loads(text: str):
    rows = _rows(text)
    head = rows[0]
    kind = head.split()[0]
    if kind == "tower":
        return Tower.from_text("\n".join(rows))
    if kind == "graph":
        return SimpleGraph.from_text("\n".join(rows))
    if kind == "matroid":
        return _read_matroid(head, rows[1:])
    if kind == "biasedgraph":
        return _read_biased(head, rows[1:])
    raise FormatError(f"unknown header {head!r}")


def _read_matroid(head: str, body: list[str]):
    f = _fields(head)
    sub = head.split()[1]
    if sub == "linear":
        q, r, m = int(f["q"]), int(f["rank"]), int(f["cols"])
        cols = [tuple(int(x) for x in ln.split()) for ln in body]
        if len(cols) != m:
            raise FormatError(f"header says {m} columns, found {len(cols)}")
        return linear_matroid(q, cols, r)
    if sub == "graphic":
        n = int(f["vertices"])
        return graphic(n, [tuple(int(x) for x in ln.split()) for ln in body])
    raise FormatError(f"unknown matroid kind {sub!r}")


def _read_biased(head: str, body: list[str]) -> BiasedGraph:
    m = re.match(r"biasedgraph\s+vertices=(\d+)\s+group=(.*)$", head)
    if not m:
        raise FormatError(f"bad biased graph header {head!r}")
    n = int(m.group(1))
    gspec = m.group(2).strip()
    explicit = gspec == "explicit"
    edges, balanced = [], []
    for ln in body:
        parts = ln.split()
        tag, nums = parts[0], [int(x) for x in parts[1:]]
        if tag == "edge":
            i, u, v, *g = nums
            edges.append((i, u, v, g[0] if g else 0))
        elif tag == "loop":
            i, v, *g = nums
            edges.append((i, v, v, g[0] if g else 0))
        elif tag == "balanced":
            balanced.append(nums)
        else:
            raise FormatError(f"unknown line {ln!r}")
    if explicit:
        return explicit_biased_graph(range(n), [(i, u, v) for i, u, v, _ in edges], balanced)
    return gain_biased_graph(range(n), edges, parse_group(gspec))


def read(path):
    return loads(Path(path).read_text())


def matroid_of(obj) -> MatroidHandle:
    """The matroid carried by a parsed instance (cycle matroid for graphs)."""
    if isinstance(obj, (SimpleGraph, BiasedGraph, LinearMatroid)):
        return obj.handle()
    return as_handle(obj)

