"""Dynkin and weighted Satake diagrams: root systems, affine extension, descent.

Vertex ids are strings. An edge ``(i, j, mult, ">")`` says ``i`` is the long
end; ``None`` direction means equal lengths (``mult`` 1, or 4 for the affine
A1 double link).
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from pgo.errors import DomainError

Edge = Tuple[str, str, int, Optional[str]]
WHITE, BLACK = "white", "black"


def _norm_edge(e: Sequence) -> Edge:
    i, j, mult = str(e[0]), str(e[1]), int(e[2])
    direction = e[3] if len(e) > 3 else None
    if direction in (None, "", "-", "none"):
        direction = None
    elif direction == "<":
        i, j, direction = j, i, ">"
    elif direction != ">":
        raise DomainError(f"bad edge direction {direction!r}")
    if mult not in (1, 2, 3, 4):
        raise DomainError(f"bad bond multiplicity {mult}")
    if direction is None and mult not in (1, 4):
        raise DomainError(f"bond of multiplicity {mult} needs a direction")
    return i, j, mult, direction


@dataclass(frozen=True)
class DynkinDiagram:
    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self) -> None:
        verts = tuple(str(v) for v in self.vertices)
        if len(set(verts)) != len(verts):
            raise DomainError("duplicate vertex id")
        edges = tuple(_norm_edge(e) for e in self.edges)
        vs = set(verts)
        seen = set()
        for i, j, _, _ in edges:
            if i not in vs or j not in vs or i == j:
                raise DomainError(f"edge ({i}, {j}) has unknown or repeated endpoint")
            if frozenset((i, j)) in seen:
                raise DomainError(f"duplicate edge ({i}, {j})")
            seen.add(frozenset((i, j)))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)

    def neighbours(self, v: str) -> List[str]:
        return [j if i == v else i for i, j, _, _ in self.edges if v in (i, j)]

    def components(self) -> List[List[str]]:
        seen: set = set()
        comps = []
        for v in self.vertices:
            if v in seen:
                continue
            comp, queue = [], deque([v])
            seen.add(v)
            while queue:
                x = queue.popleft()
                comp.append(x)
                for y in self.neighbours(x):
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            comps.append([w for w in self.vertices if w in set(comp)])
        return comps

    def induced(self, keep: Iterable[str]) -> "DynkinDiagram":
        keep = set(keep)
        return DynkinDiagram(tuple(v for v in self.vertices if v in keep),
                             tuple(e for e in self.edges if e[0] in keep and e[1] in keep))

    @cached_property
    def lengths(self) -> Dict[str, Fraction]:
        """Squared root lengths, shortest root of each component normalised to 2."""
        out: Dict[str, Fraction] = {}
        for comp in self.components():
            rel = {comp[0]: Fraction(1)}
            queue = deque([comp[0]])
            while queue:
                x = queue.popleft()
                for i, j, mult, direction in self.edges:
                    if x not in (i, j):
                        continue
                    y = j if x == i else i
                    if direction is None:
                        want = rel[x]
                    elif x == i:
                        want = rel[x] / mult
                    else:
                        want = rel[x] * mult
                    if y in rel:
                        if rel[y] != want:
                            raise DomainError("inconsistent root lengths")
                    else:
                        rel[y] = want
                        queue.append(y)
            low = min(rel.values())
            for v, r in rel.items():
                out[v] = 2 * r / low
        return out

    @cached_property
    def gram(self) -> Dict[Tuple[str, str], Fraction]:
        """Symmetric bilinear form on simple roots (missing pairs are zero)."""
        L = self.lengths
        g: Dict[Tuple[str, str], Fraction] = {(v, v): L[v] for v in self.vertices}
        for i, j, mult, direction in self.edges:
            if direction is None:
                val = -L[i] if mult == 4 else -L[i] / 2
            else:
                val = -L[i] / 2
                if L[i] != mult * L[j]:
                    raise DomainError("edge multiplicity disagrees with root lengths")
            g[(i, j)] = g[(j, i)] = val
        return g

    def pairing_value(self, a: str, b: str) -> Fraction:
        return self.gram.get((a, b), Fraction(0))

    def cartan(self, a: str, b: str) -> Fraction:
        """Cartan integer 2(a, b)/(b, b)."""
        return 2 * self.pairing_value(a, b) / self.gram[(b, b)]

    def is_finite_type(self) -> bool:
        from pgo.linalg import leading_minor, mat

        verts = self.vertices
        if not verts:
            return True
        m = mat([[self.pairing_value(a, b) for b in verts] for a in verts])
        return all(leading_minor(m, s) > 0 for s in range(1, len(verts) + 1))


@dataclass(frozen=True)
class RootSystemData:
    simple: Tuple[str, ...]
    positive: Tuple[Tuple[int, ...], ...]
    highest_root: Tuple[int, ...]

    @property
    def all_roots(self) -> Tuple[Tuple[int, ...], ...]:
        return self.positive + tuple(tuple(-c for c in r) for r in self.positive)


def roots_from_cartan(d: DynkinDiagram) -> RootSystemData:
    """Positive roots by root-string closure, in simple-root coordinates."""
    if not d.is_finite_type():
        raise DomainError("diagram is not of finite type")
    verts = d.vertices
    n = len(verts)
    G = [[d.pairing_value(a, b) for b in verts] for a in verts]
    simple = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(n):
                ip = sum(beta[j] * G[j][i] for j in range(n))
                coroot_pair = 2 * ip / G[i][i]
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in roots:
                        p += 1
                    else:
                        break
                if p - coroot_pair > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in roots:
                        roots.add(up)
                        nxt.append(up)
        layer = nxt
    positive = tuple(sorted(roots, key=lambda r: (sum(r), r)))
    highest = max(positive, key=sum)
    if any(any(h < c for h, c in zip(highest, r)) for r in positive):
        raise DomainError("no dominating highest root (diagram disconnected?)")
    return RootSystemData(verts, positive, highest)


@dataclass(frozen=True)
class WeightedSatakeDiagram:
    base: DynkinDiagram
    color: Mapping[str, str]
    pairing: Mapping[str, str]
    circled: Optional[str]

    def __post_init__(self) -> None:
        verts = self.base.vertices
        color = {str(k): v for k, v in self.color.items()}
        for v in verts:
            color.setdefault(v, WHITE)
        if set(color) != set(verts):
            raise DomainError("color map mentions unknown vertices")
        if any(c not in (WHITE, BLACK) for c in color.values()):
            raise DomainError("colors must be 'white' or 'black'")
        pairing = {str(k): str(v) for k, v in self.pairing.items()}
        for v in verts:
            pairing.setdefault(v, v)
        for a, b in pairing.items():
            if a not in color or b not in color or pairing.get(b) != a:
                raise DomainError("pairing must be an involution on the vertices")
            if a != b and (color[a] != WHITE or color[b] != WHITE):
                raise DomainError("only white vertices may be paired")
        circled = None if self.circled is None else str(self.circled)
        if verts:
            if circled not in color:
                raise DomainError("circled vertex missing")
            if color[circled] != WHITE:
                raise DomainError("circled vertex must be white")
            if pairing[circled] != circled:
                raise DomainError("circled vertex must not carry an arrow")
        object.__setattr__(self, "color", color)
        object.__setattr__(self, "pairing", pairing)
        object.__setattr__(self, "circled", circled)

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self.base.vertices

    def is_empty(self) -> bool:
        return not self.base.vertices

    def restrict(self, keep: Iterable[str], circled: Optional[str]) -> "WeightedSatakeDiagram":
        keep = set(keep)
        base = self.base.induced(keep)
        return WeightedSatakeDiagram(
            base,
            {v: self.color[v] for v in base.vertices},
            {v: self.pairing[v] for v in base.vertices if self.pairing[v] in keep},
            circled if base.vertices else None,
        )

    def circled_component(self) -> "WeightedSatakeDiagram":
        for comp in self.base.components():
            if self.circled in comp:
                return self.restrict(comp, self.circled)
        raise DomainError("circled vertex not found")

    # serialisation

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [[i, j, m, d] for i, j, m, d in self.base.edges],
            "color": dict(self.color),
            "pairing": {a: b for a, b in self.pairing.items() if a != b},
            "circled": self.circled,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "WeightedSatakeDiagram":
        """Accepts a bare diagram or a fixture wrapping it under ``"diagram"``."""
        if isinstance(data, Mapping) and "diagram" in data:
            data = data["diagram"]
        try:
            base = DynkinDiagram(tuple(data["vertices"]), tuple(tuple(e) for e in data.get("edges", [])))
            return cls(base, data.get("color", {}), data.get("pairing", {}) or {}, data.get("circled"))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"malformed diagram JSON: {exc}") from exc

    @classmethod
    def load(cls, path: Union[str, Path]) -> "WeightedSatakeDiagram":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def extend_diagram(s: WeightedSatakeDiagram, new_id: str = "-w") -> WeightedSatakeDiagram:
    """Attach the white vertex ``-omega`` to the circled component."""
    comp = s.circled_component()
    if new_id in comp.vertices:
        raise DomainError(f"vertex id {new_id!r} already used")
    d = comp.base
    rs = roots_from_cartan(d)
    omega = rs.highest_root
    verts = d.vertices
    om_len = sum(omega[a] * omega[b] * d.pairing_value(verts[a], verts[b])
                 for a in range(len(verts)) for b in range(len(verts)))
    new_edges = list(d.edges)
    for idx, v in enumerate(verts):
        ip = -sum(omega[a] * d.pairing_value(verts[a], v) for a in range(len(verts)))
        if ip == 0:
            continue
        a_v = 2 * ip / d.gram[(v, v)]
        a_w = 2 * ip / om_len
        mult = int(a_v * a_w)
        if a_v == a_w:
            new_edges.append((new_id, v, mult, None))
        elif om_len > d.gram[(v, v)]:
            new_edges.append((new_id, v, mult, ">"))
        else:
            new_edges.append((v, new_id, mult, ">"))
    base = DynkinDiagram(verts + (new_id,), tuple(new_edges))
    color = dict(comp.color)
    color[new_id] = WHITE
    pairing = dict(comp.pairing)
    pairing[new_id] = new_id
    return WeightedSatakeDiagram(base, color, pairing, comp.circled)


def descent_step(s: WeightedSatakeDiagram, step: int = 1) -> WeightedSatakeDiagram:
    """One pass of extend / remove / recircle, keeping the new circled component."""
    new_id = f"-w{step}"
    ext = extend_diagram(s, new_id)
    d = ext.base
    alpha0 = ext.circled
    # alpha0 together with the black vertices reachable from it through black vertices
    chain = {alpha0}
    queue = deque([alpha0])
    while queue:
        x = queue.popleft()
        for y in d.neighbours(x):
            if y not in chain and ext.color[y] == BLACK:
                chain.add(y)
                queue.append(y)
    removed = set(chain)
    for x in chain:
        removed.update(d.neighbours(x))
    removed.update(ext.pairing[v] for v in list(removed) if ext.color[v] == WHITE)
    if new_id in removed:
        return WeightedSatakeDiagram(DynkinDiagram(()), {}, {}, None)
    kept = [v for v in d.vertices if v not in removed]
    out = ext.restrict(kept, new_id).circled_component()
    return out


@dataclass(frozen=True)
class OneType:
    kind: str  # "A" or "B"
    delta: int = 1

    def __post_init__(self) -> None:
        if self.kind not in ("A", "B"):
            raise DomainError(f"unknown 1-type {self.kind!r}")
        if self.kind == "B" and self.delta != 1:
            object.__setattr__(self, "delta", 1)

    @property
    def kappa(self) -> int:
        return self.delta if self.kind == "A" else 2

    def label(self) -> str:
        return f"(A,{self.delta})" if self.kind == "A" else "B"

    @classmethod
    def parse(cls, text: str) -> "OneType":
        t = text.replace(" ", "")
        if t == "B":
            return cls("B")
        if t.startswith("(A,") and t.endswith(")"):
            return cls("A", int(t[3:-1]))
        raise DomainError(f"cannot parse 1-type {text!r}")


def read_one_type(s: WeightedSatakeDiagram) -> OneType:
    """Recognise the rank-one diagrams: chain A_{2delta-1} or the B2 pair."""
    d = s.base
    n = len(d.vertices)
    others_black = all(s.color[v] == BLACK for v in d.vertices if v != s.circled)
    if not others_black or any(s.pairing[v] != v for v in d.vertices):
        raise DomainError("last diagram of the descent is not a rank-one diagram")
    if n == 2 and len(d.edges) == 1 and d.edges[0][2] == 2:
        i, j, _, direction = d.edges[0]
        if direction == ">" and i == s.circled:
            return OneType("B")
        raise DomainError("B2 rank-one diagram must circle the long root")
    if n % 2 == 1 and _is_simple_chain(d):
        order = _chain_order(d)
        if order[n // 2] == s.circled:
            return OneType("A", (n + 1) // 2)
    raise DomainError("last diagram of the descent is not a rank-one diagram")


def _is_simple_chain(d: DynkinDiagram) -> bool:
    n = len(d.vertices)
    if any(m != 1 for _, _, m, _ in d.edges) or len(d.edges) != n - 1:
        return False
    degs = [len(d.neighbours(v)) for v in d.vertices]
    return len(d.components()) == 1 and max(degs, default=0) <= 2


def _chain_order(d: DynkinDiagram) -> List[str]:
    if len(d.vertices) == 1:
        return list(d.vertices)
    start = next(v for v in d.vertices if len(d.neighbours(v)) == 1)
    order, prev = [start], None
    while len(order) < len(d.vertices):
        cur = order[-1]
        nxt = next(y for y in d.neighbours(cur) if y != prev)
        prev = cur
        order.append(nxt)
    return order


def descent_sequence(s: WeightedSatakeDiagram) -> List[WeightedSatakeDiagram]:
    """All diagrams visited, starting with ``s`` (restricted to its circled part)."""
    cur = s.circled_component()
    seq = [cur]
    limit = len(cur.vertices) + 1
    step = 0
    while not cur.is_empty():
        step += 1
        if step > limit:
            raise DomainError("descent did not terminate")
        cur = descent_step(cur, step)
        seq.append(cur)
    return seq


def descent_classify(s: WeightedSatakeDiagram) -> Tuple[int, OneType]:
    seq = descent_sequence(s)
    rank = len(seq) - 1
    return rank, read_one_type(seq[-2])


# diagram builders used by the catalog and the fixtures

def _ids(n: int) -> List[str]:
    return [f"a{i}" for i in range(1, n + 1)]


def chain_edges(ids: Sequence[str]) -> List[Edge]:
    return [(ids[i], ids[i + 1], 1, None) for i in range(len(ids) - 1)]


def type_a(n: int) -> DynkinDiagram:
    ids = _ids(n)
    return DynkinDiagram(tuple(ids), tuple(chain_edges(ids)))


def type_b(n: int) -> DynkinDiagram:
    """B_n: a_{n-1} long, a_n short."""
    ids = _ids(n)
    edges = chain_edges(ids[:-1]) + [(ids[-2], ids[-1], 2, ">")]
    return DynkinDiagram(tuple(ids), tuple(edges))


def type_c(n: int) -> DynkinDiagram:
    """C_n: a_n long, a_{n-1} short."""
    ids = _ids(n)
    edges = chain_edges(ids[:-1]) + [(ids[-1], ids[-2], 2, ">")]
    return DynkinDiagram(tuple(ids), tuple(edges))


def type_d(n: int) -> DynkinDiagram:
    ids = _ids(n)
    edges = chain_edges(ids[:-1]) + [(ids[-3], ids[-1], 1, None)]
    return DynkinDiagram(tuple(ids), tuple(edges))


def type_e7() -> DynkinDiagram:
    ids = _ids(7)
    a = dict(zip(range(1, 8), ids))
    edges = [(a[1], a[3], 1, None), (a[3], a[4], 1, None), (a[4], a[5], 1, None),
             (a[5], a[6], 1, None), (a[6], a[7], 1, None), (a[2], a[4], 1, None)]
    return DynkinDiagram(tuple(ids), tuple(edges))


def satake(base: DynkinDiagram, circled: int, black: Iterable[int] = (),
           arrows: Iterable[Tuple[int, int]] = ()) -> WeightedSatakeDiagram:
    """Build a diagram from 1-based Bourbaki indices."""
    ids = base.vertices
    color = {v: WHITE for v in ids}
    for b in black:
        color[ids[b - 1]] = BLACK
    pairing = {}
    for a, b in arrows:
        pairing[ids[a - 1]] = ids[b - 1]
        pairing[ids[b - 1]] = ids[a - 1]
    return WeightedSatakeDiagram(base, color, pairing, ids[circled - 1])
