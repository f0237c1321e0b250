"""The catalog of diagram families and their structure constants.

Numbers live in ``data/table1.json``; the diagram shape of each family is
built here so lookups can match a user diagram up to relabelling.
"""
from __future__ import annotations

import ast
import json
import math
import operator
from dataclasses import dataclass, replace
from functools import lru_cache
from importlib import resources
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Tuple

import networkx as nx

from pgo.diagrams import (
    OneType,
    WeightedSatakeDiagram,
    descent_classify,
    satake,
    type_a,
    type_b,
    type_c,
    type_d,
    type_e7,
)
from pgo.errors import DomainError

GTYPES = ("I", "II", "III")


@dataclass(frozen=True)
class GradedDescriptor:
    case_id: str
    k: int
    ell: int
    d: Optional[int]
    e: Optional[int]
    one_type: OneType
    gtype: str
    params: Tuple[Tuple[str, int], ...] = ()
    realization_tag: Optional[str] = None
    source: str = ""

    @property
    def rank(self) -> int:
        return self.k + 1

    @property
    def kappa(self) -> int:
        return self.one_type.kappa

    def param(self, name: str) -> int:
        return dict(self.params)[name]

    def to_json(self) -> dict:
        return {
            "case_id": self.case_id,
            "params": dict(self.params),
            "rank": self.rank,
            "k": self.k,
            "ell": self.ell,
            "d": self.d,
            "e": self.e,
            "one_type": self.one_type.label(),
            "kappa": self.kappa,
            "type": self.gtype,
            "realization": self.realization_tag,
            "source": self.source,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "GradedDescriptor":
        return cls(
            case_id=str(data["case_id"]),
            k=int(data["k"]),
            ell=int(data["ell"]),
            d=None if data.get("d") is None else int(data["d"]),
            e=None if data.get("e") is None else int(data["e"]),
            one_type=OneType.parse(data["one_type"]),
            gtype=data["type"],
            params=tuple(sorted((str(a), int(b)) for a, b in data.get("params", {}).items())),
            realization_tag=data.get("realization"),
            source=data.get("source", ""),
        )


def classify_type(ell: int, e: Optional[int]) -> str:
    if ell == 3:
        return "III"
    if ell == 1 and e in (1, 2, 3):
        return "II"
    root = math.isqrt(ell)
    if root * root == ell and e in (0, 4):
        return "I"
    raise DomainError(f"no type for (ell, e) = ({ell}, {e})")


def dim_vplus(desc: GradedDescriptor) -> int:
    d = desc.d or 0
    twice = (desc.k + 1) * (2 * desc.ell + desc.k * d)
    if twice % 2:
        raise DomainError("non-integral dim V+; inconsistent descriptor")
    return twice // 2


# expression evaluation for the catalog file

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.FloorDiv: operator.floordiv, ast.Pow: operator.pow}


def eval_expr(expr: str, env: Mapping[str, int]) -> int:
    """Evaluate integer arithmetic over named parameters."""
    def walk(node: ast.AST) -> int:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise DomainError(f"unknown parameter {node.id!r}")
            return env[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](walk(node.left), walk(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -walk(node.operand)
        raise DomainError(f"unsupported catalog expression {expr!r}")

    return walk(ast.parse(expr, mode="eval"))


# diagram families, keyed by row id

def _row1(n: int, delta: int) -> WeightedSatakeDiagram:
    size = 2 * n * delta - 1
    black = [i for i in range(1, size + 1) if i % delta]
    return satake(type_a(size), n * delta, black=black)


def _row2(n: int) -> WeightedSatakeDiagram:
    size = 2 * n - 1
    return satake(type_a(size), n, arrows=[(i, size + 1 - i) for i in range(1, n)])


FAMILIES: Dict[str, Callable[..., WeightedSatakeDiagram]] = {
    "1": _row1,
    "2": _row2,
    "3": lambda m: satake(type_b(m), 1),
    "4": lambda m: satake(type_b(m), 1, black=[m]),
    "5": lambda: satake(type_b(2), 1, black=[2]),
    "6": lambda n: satake(type_c(n), n),
    "7": lambda n: satake(type_c(2 * n), 2 * n, black=range(1, 2 * n, 2)),
    "8": lambda m: satake(type_d(m), 1),
    "9": lambda m: satake(type_d(m), 1, arrows=[(m - 1, m)]),
    "10": lambda m: satake(type_d(m), 1, black=[m - 1, m]),
    "11": lambda n: satake(type_d(2 * n), 2 * n),
    "12": lambda n: satake(type_d(2 * n), 2 * n, black=range(1, 2 * n, 2)),
    "13": lambda: satake(type_e7(), 7),
}

VERTEX_COUNT: Dict[str, Callable[..., int]] = {
    "1": lambda n, delta: 2 * n * delta - 1,
    "2": lambda n: 2 * n - 1,
    "3": lambda m: m, "4": lambda m: m, "5": lambda: 2,
    "6": lambda n: n, "7": lambda n: 2 * n,
    "8": lambda m: m, "9": lambda m: m, "10": lambda m: m,
    "11": lambda n: 2 * n, "12": lambda n: 2 * n, "13": lambda: 7,
}


@dataclass(frozen=True)
class CatalogRow:
    id: str
    algebra: str
    minimums: Tuple[Tuple[str, int], ...]
    exprs: Tuple[Tuple[str, Optional[str]], ...]
    one_type: str
    realization: Optional[str]
    source: str
    note: str = ""

    def descriptor(self, **params: int) -> GradedDescriptor:
        mins = dict(self.minimums)
        if set(params) != set(mins):
            raise DomainError(f"row {self.id} needs parameters {sorted(mins)}")
        for name, low in mins.items():
            if params[name] < low:
                raise DomainError(f"row {self.id}: {name} must be >= {low}")
        ex = dict(self.exprs)
        val = {key: (None if ex[key] is None else eval_expr(ex[key], params))
               for key in ("k", "ell", "d", "e", "delta")}
        one = OneType("A", val["delta"]) if self.one_type == "A" else OneType("B")
        return GradedDescriptor(
            case_id=self.id, k=val["k"], ell=val["ell"], d=val["d"], e=val["e"],
            one_type=one, gtype=classify_type(val["ell"], val["e"]),
            params=tuple(sorted(params.items())),
            realization_tag=self._realization(params), source=self.source,
        )

    def _realization(self, params: Mapping[str, int]) -> Optional[str]:
        if self.realization == "gl if delta == 1":
            return "gl" if params["delta"] == 1 else None
        return self.realization

    def diagram(self, **params: int) -> WeightedSatakeDiagram:
        self.descriptor(**params)  # validates the parameters
        return FAMILIES[self.id](**params)

    def params_for_size(self, n_vertices: int) -> Iterator[Dict[str, int]]:
        """Every admissible parameter choice giving ``n_vertices`` vertices."""
        mins = dict(self.minimums)
        names = sorted(mins)
        count = VERTEX_COUNT[self.id]
        if not names:
            if count() == n_vertices:
                yield {}
            return
        if names == ["delta", "n"]:
            for n in range(mins["n"], n_vertices + 2):
                for delta in range(mins["delta"], n_vertices + 2):
                    if count(n=n, delta=delta) == n_vertices:
                        yield {"n": n, "delta": delta}
            return
        (name,) = names
        for v in range(mins[name], n_vertices + 2):
            if count(**{name: v}) == n_vertices:
                yield {name: v}


@lru_cache(maxsize=1)
def load_catalog() -> Tuple[CatalogRow, ...]:
    text = resources.files("pgo").joinpath("data/table1.json").read_text()
    data = json.loads(text)
    rows = []
    for r in data["rows"]:
        rows.append(CatalogRow(
            id=r["id"], algebra=r["algebra"],
            minimums=tuple(sorted(r["params"].items())),
            exprs=tuple((key, r[key]) for key in ("k", "ell", "d", "e", "delta")),
            one_type=r["one_type"], realization=r["realization"],
            source=r["source"], note=r.get("note", ""),
        ))
    return tuple(rows)


def row(case_id: str) -> CatalogRow:
    for r in load_catalog():
        if r.id == str(case_id):
            return r
    raise DomainError(f"no catalog row {case_id!r}")


def _graph(s: WeightedSatakeDiagram) -> nx.DiGraph:
    g = nx.DiGraph()
    for v in s.vertices:
        g.add_node(v, color=s.color[v], circled=(v == s.circled))
    labels: Dict[Tuple[str, str], List[str]] = {}
    for i, j, mult, direction in s.base.edges:
        fwd, back = ("long", "short") if direction else ("eq", "eq")
        labels.setdefault((i, j), []).append(f"bond{mult}{fwd}")
        labels.setdefault((j, i), []).append(f"bond{mult}{back}")
    for a, b in s.pairing.items():
        if a != b:
            labels.setdefault((a, b), []).append("arrow")
    for (a, b), lab in labels.items():
        g.add_edge(a, b, label=tuple(sorted(lab)))
    return g


def same_diagram(s1: WeightedSatakeDiagram, s2: WeightedSatakeDiagram) -> bool:
    """Isomorphism of weighted diagrams (colors, circle, bonds and arrows)."""
    if len(s1.vertices) != len(s2.vertices) or len(s1.base.edges) != len(s2.base.edges):
        return False
    return nx.is_isomorphic(
        _graph(s1), _graph(s2),
        node_match=lambda a, b: a == b,
        edge_match=lambda a, b: a["label"] == b["label"],
    )


def lookup(diagram: WeightedSatakeDiagram, check_rank: bool = True) -> GradedDescriptor:
    """Match ``diagram`` against every family and return the row's descriptor."""
    target = diagram.circled_component()
    n = len(target.vertices)
    for r in load_catalog():
        for params in r.params_for_size(n):
            if same_diagram(target, FAMILIES[r.id](**params)):
                desc = r.descriptor(**params)
                if check_rank:
                    rank, one = descent_classify(target)
                    if rank != desc.rank or one != desc.one_type:
                        raise DomainError(
                            f"descent gives rank {rank}, {one.label()} but row {r.id} "
                            f"lists rank {desc.rank}, {desc.one_type.label()}")
                return desc
    raise DomainError("not a regular parabolic commutative grading")


def realized_descriptor(tag: str, size: int) -> GradedDescriptor:
    """Descriptor of a matrix model; ``size`` is n for gl/sp/unitary and k for type3."""
    tag = tag.lower()
    if tag == "gl":
        return row("1").descriptor(n=size, delta=1)
    if tag == "sp":
        if size == 1:
            return replace(row("1").descriptor(n=1, delta=1), realization_tag="sp")
        return row("6").descriptor(n=size)
    if tag == "unitary":
        if size == 1:
            return replace(row("1").descriptor(n=1, delta=1), realization_tag="unitary")
        return row("2").descriptor(n=size)
    if tag == "type3":
        if size == 0:
            return row("5").descriptor()
        return row("7").descriptor(n=size + 1)
    if tag == "ortho1":
        return row("5").descriptor()
    raise DomainError(f"unknown realization tag {tag!r}")

