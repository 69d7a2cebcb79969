"""Signed graph data model: switching, balance, components, JSON I/O.

A signed graph carries a positive vertex measure ``mu``, a real vertex
potential ``kappa``, positive edge weights and an edge signature in {-1,+1}.
Vertices have string ids at the boundary and dense indices 0..n-1 internally.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "GraphError",
    "ParseError",
    "SignedGraph",
    "BalanceState",
    "BalanceResult",
    "switch",
    "balance_state",
    "components",
    "cycle_surplus",
    "parse_graph",
    "serialize_graph",
    "parse_function",
    "serialize_function",
]


class GraphError(ValueError):
    """Invalid graph construction or operation input."""


class ParseError(GraphError):
    """Malformed graph or function document."""


@dataclass(frozen=True)
class SignedGraph:
    """Immutable vertex- and edge-weighted graph with a +-1 signature.

    ``edges`` is a tuple of ``(u, v, w, sigma)`` with dense indices
    ``u < v``, weight ``w > 0`` and ``sigma in {-1, +1}``.
    """

    ids: tuple[str, ...]
    mu: tuple[float, ...]
    kappa: tuple[float, ...]
    edges: tuple[tuple[int, int, float, int], ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.ids)
        if len(set(self.ids)) != n:
            raise GraphError("vertex ids must be unique")
        if len(self.mu) != n or len(self.kappa) != n:
            raise GraphError("mu/kappa must match the vertex set")
        for m in self.mu:
            if not m > 0:
                raise GraphError(f"vertex measure must be positive, got {m}")
        seen = set()
        for u, v, w, s in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge endpoint out of range: ({u},{v})")
            if u == v:
                raise GraphError(f"self-loop at vertex {self.ids[u]}")
            if u > v:
                raise GraphError("edges must be stored with u < v")
            if (u, v) in seen:
                raise GraphError(f"parallel edge {{{self.ids[u]},{self.ids[v]}}}")
            seen.add((u, v))
            if not w > 0:
                raise GraphError(f"edge weight must be positive, got {w}")
            if s not in (-1, 1):
                raise GraphError(f"signature must be -1 or +1, got {s}")
        object.__setattr__(self, "_index", {vid: i for i, vid in enumerate(self.ids)})

    @property
    def n(self) -> int:
        return len(self.ids)

    def index(self, vid: str) -> int:
        try:
            return self._index[vid]
        except KeyError:
            raise GraphError(f"unknown vertex id {vid!r}") from None

    def neighbors(self, x: int) -> list[tuple[int, float, int]]:
        """Adjacency of vertex ``x`` as ``(y, w, sigma)`` triples."""
        out = []
        for u, v, w, s in self.edges:
            if u == x:
                out.append((v, w, s))
            elif v == x:
                out.append((u, w, s))
        return out

    def adjacency(self) -> list[list[tuple[int, float, int]]]:
        adj: list[list[tuple[int, float, int]]] = [[] for _ in range(self.n)]
        for u, v, w, s in self.edges:
            adj[u].append((v, w, s))
            adj[v].append((u, w, s))
        return adj

    def mu_array(self) -> np.ndarray:
        return np.asarray(self.mu, dtype=float)

    def kappa_array(self) -> np.ndarray:
        return np.asarray(self.kappa, dtype=float)

    def weighted_degrees(self) -> np.ndarray:
        deg = np.zeros(self.n)
        for u, v, w, _ in self.edges:
            deg[u] += w
            deg[v] += w
        return deg

    @staticmethod
    def build(
        ids: Sequence[str],
        edges: Iterable[tuple[str, str, float, int]],
        mu: Mapping[str, float] | Sequence[float] | float = 1.0,
        kappa: Mapping[str, float] | Sequence[float] | float = 0.0,
    ) -> "SignedGraph":
        """Construct from string ids; edges as ``(u_id, v_id, w, sigma)``."""
        ids = tuple(str(i) for i in ids)
        idx = {vid: i for i, vid in enumerate(ids)}

        def per_vertex(spec, default_name):
            if isinstance(spec, Mapping):
                return tuple(float(spec.get(vid, 1.0 if default_name == "mu" else 0.0)) for vid in ids)
            if isinstance(spec, (int, float)):
                return tuple(float(spec) for _ in ids)
            vals = tuple(float(v) for v in spec)
            if len(vals) != len(ids):
                raise GraphError(f"{default_name} length mismatch")
            return vals

        edge_list = []
        for a, b, w, s in edges:
            a, b = str(a), str(b)
            if a not in idx or b not in idx:
                raise GraphError(f"edge references unknown vertex {a!r} or {b!r}")
            u, v = sorted((idx[a], idx[b]))
            edge_list.append((u, v, float(w), int(s)))
        return SignedGraph(
            ids=ids,
            mu=per_vertex(mu, "mu"),
            kappa=per_vertex(kappa, "kappa"),
            edges=tuple(sorted(edge_list)),
        )


class BalanceState(Enum):
    BALANCED = "balanced"
    ANTIBALANCED = "antibalanced"
    BOTH = "both"
    NEITHER = "neither"


@dataclass(frozen=True)
class BalanceResult:
    state: BalanceState
    balancing_tau: tuple[int, ...] | None
    antibalancing_tau: tuple[int, ...] | None


def switch(g: SignedGraph, tau: Sequence[int]) -> SignedGraph:
    """Switch the signature: sigma'_xy = tau(x) * sigma_xy * tau(y)."""
    if len(tau) != g.n:
        raise GraphError("switching function must be defined on exactly the vertex set")
    for t in tau:
        if t not in (-1, 1):
            raise GraphError(f"switching values must be -1 or +1, got {t}")
    new_edges = tuple((u, v, w, tau[u] * s * tau[v]) for u, v, w, s in g.edges)
    return SignedGraph(ids=g.ids, mu=g.mu, kappa=g.kappa, edges=new_edges)


def _spanning_tree_tau(g: SignedGraph, target_sign: int) -> tuple[int, ...] | None:
    """tau making every edge sign equal to ``target_sign``, or None.

    Signed BFS: fix tau on a spanning tree per component, then verify
    every non-tree edge.
    """
    tau = [0] * g.n
    adj = g.adjacency()
    for root in range(g.n):
        if tau[root] != 0:
            continue
        tau[root] = 1
        queue = [root]
        while queue:
            x = queue.pop()
            for y, _, s in adj[x]:
                want = tau[x] if s == target_sign else -tau[x]
                if tau[y] == 0:
                    tau[y] = want
                    queue.append(y)
                elif tau[y] != want:
                    return None
    return tuple(tau)


def balance_state(g: SignedGraph) -> BalanceResult:
    """Classify the switching class of ``g``.

    Balanced means some tau switches every edge positive; antibalanced
    means the negated signature is balanced. Both can hold at once
    (e.g. bipartite all-positive graphs).
    """
    bal = _spanning_tree_tau(g, +1)
    anti = _spanning_tree_tau(g, -1)
    if bal is not None and anti is not None:
        state = BalanceState.BOTH
    elif bal is not None:
        state = BalanceState.BALANCED
    elif anti is not None:
        state = BalanceState.ANTIBALANCED
    else:
        state = BalanceState.NEITHER
    return BalanceResult(state=state, balancing_tau=bal, antibalancing_tau=anti)


def components(g: SignedGraph) -> list[list[int]]:
    """Connected components (sign-blind), each as a sorted index list."""
    adj = g.adjacency()
    seen = [False] * g.n
    comps = []
    for root in range(g.n):
        if seen[root]:
            continue
        seen[root] = True
        comp = [root]
        queue = [root]
        while queue:
            x = queue.pop()
            for y, _, _ in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def cycle_surplus(g: SignedGraph) -> int:
    """l(G) = |E| - |V| + c(G); zero exactly on forests."""
    return len(g.edges) - g.n + len(components(g))


def induced_subgraph(g: SignedGraph, keep: Sequence[int]) -> SignedGraph:
    """Subgraph induced on the index set ``keep`` (mu, kappa carried over)."""
    keep = sorted(set(keep))
    remap = {old: new for new, old in enumerate(keep)}
    edges = tuple(
        (remap[u], remap[v], w, s)
        for u, v, w, s in g.edges
        if u in remap and v in remap
    )
    return SignedGraph(
        ids=tuple(g.ids[i] for i in keep),
        mu=tuple(g.mu[i] for i in keep),
        kappa=tuple(g.kappa[i] for i in keep),
        edges=edges,
    )


def parse_graph(data: bytes | str) -> SignedGraph:
    """Parse the JSON graph document (see README for the schema)."""
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict) or "vertices" not in doc:
        raise ParseError("graph document must be an object with a 'vertices' list")
    ids, mu, kappa = [], [], []
    for i, v in enumerate(doc["vertices"]):
        if not isinstance(v, dict) or "id" not in v:
            raise ParseError(f"vertices[{i}]: each vertex needs an 'id'")
        ids.append(str(v["id"]))
        m = float(v.get("mu", 1.0))
        if not m > 0:
            raise ParseError(f"vertices[{i}]: mu must be positive, got {m}")
        mu.append(m)
        kappa.append(float(v.get("kappa", 0.0)))
    idx = {vid: j for j, vid in enumerate(ids)}
    if len(idx) != len(ids):
        raise ParseError("duplicate vertex id")
    edges = []
    seen = set()
    for i, e in enumerate(doc.get("edges", [])):
        loc = f"edges[{i}]"
        if not isinstance(e, dict) or "u" not in e or "v" not in e:
            raise ParseError(f"{loc}: each edge needs 'u' and 'v'")
        a, b = str(e["u"]), str(e["v"])
        if a not in idx:
            raise ParseError(f"{loc}: unknown vertex {a!r}")
        if b not in idx:
            raise ParseError(f"{loc}: unknown vertex {b!r}")
        if a == b:
            raise ParseError(f"{loc}: self-loop at {a!r}")
        u, v = sorted((idx[a], idx[b]))
        if (u, v) in seen:
            raise ParseError(f"{loc}: parallel edge {{{a},{b}}}")
        seen.add((u, v))
        w = float(e.get("w", 1.0))
        if not w > 0:
            raise ParseError(f"{loc}: weight must be positive, got {w}")
        s = e.get("sigma", 1)
        if s not in (-1, 1):
            raise ParseError(f"{loc}: signature must be ±1, got {s}")
        edges.append((u, v, w, int(s)))
    return SignedGraph(ids=tuple(ids), mu=tuple(mu), kappa=tuple(kappa), edges=tuple(sorted(edges)))


def serialize_graph(g: SignedGraph) -> bytes:
    """Canonical JSON bytes; parse(serialize(g)) == g."""
    doc = {
        "vertices": [
            {"id": vid, "mu": g.mu[i], "kappa": g.kappa[i]}
            for i, vid in enumerate(g.ids)
        ],
        "edges": [
            {"u": g.ids[u], "v": g.ids[v], "w": w, "sigma": s}
            for u, v, w, s in g.edges
        ],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()


def parse_function(data: bytes | str, g: SignedGraph) -> np.ndarray:
    """Parse ``{"values": {id: value}}`` into a dense vector over g."""
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("values"), dict):
        raise ParseError("function document must be an object with a 'values' map")
    vals = doc["values"]
    f = np.zeros(g.n)
    seen = set()
    for vid, value in vals.items():
        i = g.index(str(vid))
        f[i] = float(value)
        seen.add(i)
    if len(seen) != g.n:
        missing = [g.ids[i] for i in range(g.n) if i not in seen]
        raise ParseError(f"function missing values for vertices {missing}")
    return f


def serialize_function(f: Sequence[float], g: SignedGraph) -> bytes:
    return json.dumps(
        {"values": {vid: float(f[i]) for i, vid in enumerate(g.ids)}},
        sort_keys=True,
        separators=(",", ":"),
    ).encode()
