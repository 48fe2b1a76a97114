"""Generic crystal machinery over any element kind with raise/lower maps.

An element kind ("ops" object) exposes ``indices``, ``key``, ``wt``,
``eps``, ``phi``, ``e``, ``f`` and ``pairing``; infinite kinds also
expose ``level`` and are generated inside an explicit window on the
absolute level.  Closure generation, the tensor product rule, the
affinisation, audits and labelled-graph isomorphism all work against
that surface, so paths, graph-backed tensors and ad hoc test crystals
plug into the same engine.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .cartan import Weight

DEFAULT_NODE_CAP = 10**6


class NodeCapError(RuntimeError):
    """Closure generation exceeded the configured node budget."""


def _exact_int(x) -> int:
    if isinstance(x, Fraction):
        if x.denominator != 1:
            raise GenerationError("expected an integer, got %s" % x)
        return x.numerator
    return int(x)


class GenerationError(ValueError):
    """Invalid generation request."""


@dataclass(frozen=True)
class Node:
    element: object
    wt: object
    eps: tuple[int, ...]
    phi: tuple[int, ...]


@dataclass(eq=False)
class CrystalGraph:
    """Finite labelled digraph of canonical elements.

    Edges point in the lowering direction: ``(x, i) -> y`` means the
    i-th lowering operator maps x to y.  For untruncated graphs the node
    set is closed under all operators; truncated graphs keep only edges
    between in-window nodes.
    """

    label: str
    indices: tuple[int, ...]
    nodes: dict
    f_edges: dict
    seed: object
    truncated: bool = False
    window: int | None = None
    e_edges: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.e_edges:
            for (src, i), dst in self.f_edges.items():
                self.e_edges[(dst, i)] = src

    def sorted_keys(self) -> list:
        return sorted(self.nodes)

    def __len__(self):
        return len(self.nodes)

    def f(self, key, i):
        return self.f_edges.get((key, i))

    def e(self, key, i):
        return self.e_edges.get((key, i))

    def edge_count(self) -> int:
        return len(self.f_edges)

    # -- structure checks ------------------------------------------------

    def components(self) -> list[set]:
        """Connected components of the underlying undirected graph."""
        adj: dict = {k: set() for k in self.nodes}
        for (src, i), dst in self.f_edges.items():
            adj[src].add(dst)
            adj[dst].add(src)
        seen = set()
        out = []
        for start in self.sorted_keys():
            if start in seen:
                continue
            comp = set()
            stack = [start]
            while stack:
                k = stack.pop()
                if k in comp:
                    continue
                comp.add(k)
                stack.extend(adj[k] - comp)
            seen |= comp
            out.append(comp)
        return out

    def is_indecomposable(self) -> bool:
        if self.truncated:
            raise GenerationError(
                "indecomposability is only defined for untruncated graphs; "
                "use window_connected for windows"
            )
        return len(self.components()) == 1

    def window_connected(self) -> bool:
        return len(self.components()) == 1

    def normality_audit(self) -> list[str]:
        """Check string lengths and quasi-inverse edges; empty means clean."""
        if self.truncated:
            raise GenerationError("normality audit needs an untruncated graph")
        problems = []
        for key in self.sorted_keys():
            node = self.nodes[key]
            for pos, i in enumerate(self.indices):
                up = 0
                k = key
                while (k, i) in self.e_edges:
                    k = self.e_edges[(k, i)]
                    up += 1
                    if up > len(self.nodes):
                        problems.append("cycle in raising chain at %r, i=%d" % (key, i))
                        break
                if up != node.eps[pos]:
                    problems.append(
                        "eps mismatch at %r, i=%d: table %d, chain %d"
                        % (key, i, node.eps[pos], up)
                    )
                down = 0
                k = key
                while (k, i) in self.f_edges:
                    k = self.f_edges[(k, i)]
                    down += 1
                    if down > len(self.nodes):
                        problems.append("cycle in lowering chain at %r, i=%d" % (key, i))
                        break
                if down != node.phi[pos]:
                    problems.append(
                        "phi mismatch at %r, i=%d: table %d, chain %d"
                        % (key, i, node.phi[pos], down)
                    )
        for (src, i), dst in self.f_edges.items():
            if self.e_edges.get((dst, i)) != src:
                problems.append("edge (%r, %d) is not quasi-inverse" % (src, i))
        return problems

    # -- isomorphism ------------------------------------------------------

    def isomorphic(self, other: "CrystalGraph"):
        """A label, weight and string preserving bijection, or None.

        Anchored on invariant signatures (weight and both string length
        vectors), with backtracking over whatever ambiguity is left.
        Crystal graphs are sparse and weight labels usually separate the
        nodes outright, so the search rarely branches.
        """
        if self.indices != other.indices or len(self.nodes) != len(other.nodes):
            return None
        sig1 = {k: (n.wt, n.eps, n.phi) for k, n in self.nodes.items()}
        sig2 = {k: (n.wt, n.eps, n.phi) for k, n in other.nodes.items()}
        if sorted(map(repr, sig1.values())) != sorted(map(repr, sig2.values())):
            return None

        cls2: dict = {}
        for k, s in sig2.items():
            cls2.setdefault(repr(s), []).append(k)
        order = sorted(self.nodes, key=lambda k: (len(cls2.get(repr(sig1[k]), [])), repr(k)))

        mapping: dict = {}
        used: set = set()

        def compatible(a, b):
            if repr(sig1[a]) != repr(sig2[b]):
                return False
            for i in self.indices:
                fa = self.f_edges.get((a, i))
                fb = other.f_edges.get((b, i))
                if (fa is None) != (fb is None):
                    return False
                if fa is not None and fa in mapping and mapping[fa] != fb:
                    return False
                ea = self.e_edges.get((a, i))
                eb = other.e_edges.get((b, i))
                if (ea is None) != (eb is None):
                    return False
                if ea is not None and ea in mapping and mapping[ea] != eb:
                    return False
            return True

        def place(idx):
            if idx == len(order):
                return True
            a = order[idx]
            for b in sorted(cls2.get(repr(sig1[a]), []), key=repr):
                if b in used or not compatible(a, b):
                    continue
                mapping[a] = b
                used.add(b)
                if place(idx + 1):
                    return True
                del mapping[a]
                used.discard(b)
            return False

        return dict(mapping) if place(0) else None

    # -- export -----------------------------------------------------------

    def to_json(self):
        keys = self.sorted_keys()
        ids = {k: key_str(k) for k in keys}
        nodes = []
        for k in keys:
            n = self.nodes[k]
            entry = {"id": ids[k], "eps": list(n.eps), "phi": list(n.phi)}
            if isinstance(n.wt, Weight):
                wt = n.wt.to_json()
                entry["wt"] = wt["lam"]
                if "delta" in wt:
                    entry["wt_delta"] = wt["delta"]
            else:
                entry["wt"] = repr(n.wt)
            nodes.append(entry)
        edges = sorted(
            ({"src": ids[s], "dst": ids[d], "i": i} for (s, i), d in self.f_edges.items()),
            key=lambda e: (e["src"], e["i"], e["dst"]),
        )
        return {
            "label": self.label,
            "nodes": nodes,
            "edges": edges,
            "seed": key_str(self.seed),
            "truncated": self.truncated,
            "window": self.window,
        }

    def to_dot(self) -> str:
        palette = [
            "#e41a1c", "#377eb8", "#4daf4a", "#984ea3",
            "#ff7f00", "#a65628", "#f781bf", "#999999",
        ]
        keys = self.sorted_keys()
        ids = {k: key_str(k) for k in keys}
        lines = ["digraph crystal {"]
        for k in keys:
            lines.append('  "%s";' % ids[k])
        for (s, i), d in sorted(self.f_edges.items(), key=lambda kv: (key_str(kv[0][0]), kv[0][1])):
            color = palette[i % len(palette)]
            lines.append('  "%s" -> "%s" [label="%d", color="%s"];' % (ids[s], ids[d], i, color))
        lines.append("}")
        return "\n".join(lines) + "\n"


def key_str(key) -> str:
    """Deterministic compact rendering of a canonical key."""
    if isinstance(key, tuple):
        return "(" + ",".join(key_str(k) for k in key) + ")"
    if isinstance(key, Weight):
        body = ",".join("%d/%d" % (c.numerator, c.denominator) for c in key.coords)
        if key.delta is not None:
            body += "|%d/%d" % (key.delta.numerator, key.delta.denominator)
        return "w[" + body + "]"
    if isinstance(key, Fraction):
        return "%d/%d" % (key.numerator, key.denominator)
    return str(key)


def generate(ops, seed, *, window=None, node_cap=None, threads=1,
             label="") -> CrystalGraph:
    """Breadth-first closure of a seed under all raising and lowering maps.

    Deterministic: frontiers are processed in sorted key order, and the
    optional thread pool only parallelises the per-node operator
    applications, whose results are merged in frontier order.
    """
    if node_cap is None:
        node_cap = DEFAULT_NODE_CAP
    if getattr(ops, "infinite", False) and window is None:
        raise GenerationError("an infinite kind needs an explicit window")
    if window is not None and window < 0:
        raise GenerationError("window must be non-negative")

    def in_window(x):
        return window is None or abs(ops.level(x)) <= window

    if not in_window(seed):
        raise GenerationError("seed lies outside the window")

    idx = ops.indices

    def expand(x):
        moves = []
        for i in idx:
            moves.append((i, "e", ops.e(x, i)))
            moves.append((i, "f", ops.f(x, i)))
        return moves

    seed_key = ops.key(seed)
    nodes = {
        seed_key: Node(seed, ops.wt(seed),
                       tuple(ops.eps(seed, i) for i in idx),
                       tuple(ops.phi(seed, i) for i in idx))
    }
    f_edges: dict = {}
    truncated = False
    frontier = [(seed_key, seed)]
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        while frontier:
            frontier.sort(key=lambda kv: kv[0])
            elements = [x for _, x in frontier]
            if pool is not None:
                results = list(pool.map(expand, elements))
            else:
                results = [expand(x) for x in elements]
            fresh: dict = {}
            for (key, _), moves in zip(frontier, results):
                for i, kind, y in moves:
                    if y is None:
                        continue
                    if not in_window(y):
                        truncated = True
                        continue
                    ykey = ops.key(y)
                    if ykey not in nodes and ykey not in fresh:
                        fresh[ykey] = y
                    edge = (key, i) if kind == "f" else (ykey, i)
                    dst = ykey if kind == "f" else key
                    if f_edges.setdefault(edge, dst) != dst:
                        raise GenerationError(
                            "conflicting lowering edges at %r, i=%d" % (edge[0], i)
                        )
            frontier = []
            for ykey in sorted(fresh):
                y = fresh[ykey]
                nodes[ykey] = Node(y, ops.wt(y),
                                   tuple(ops.eps(y, i) for i in idx),
                                   tuple(ops.phi(y, i) for i in idx))
                frontier.append((ykey, y))
                if len(nodes) > node_cap:
                    raise NodeCapError(
                        "closure exceeded the node cap of %d" % node_cap
                    )
    finally:
        if pool is not None:
            pool.shutdown()
    return CrystalGraph(
        label=label, indices=tuple(idx), nodes=nodes, f_edges=f_edges,
        seed=seed_key, truncated=truncated, window=window,
    )


class GraphOps:
    """Crystal operations read off a generated finite graph."""

    def __init__(self, graph: CrystalGraph, pairing):
        self.graph = graph
        self.indices = graph.indices
        self._pairing = pairing
        self.infinite = False
        self._pos = {i: p for p, i in enumerate(graph.indices)}

    def key(self, x):
        return x

    def wt(self, x):
        return self.graph.nodes[x].wt

    def eps(self, x, i):
        return self.graph.nodes[x].eps[self._pos[i]]

    def phi(self, x, i):
        return self.graph.nodes[x].phi[self._pos[i]]

    def e(self, x, i):
        return self.graph.e(x, i)

    def f(self, x, i):
        return self.graph.f(x, i)

    def pairing(self, i, w):
        return self._pairing(i, w)


class TensorOps:
    """Kashiwara tensor product rule over a list of component kinds.

    Elements are tuples, one entry per component.  The raising operator
    acts in the leftmost place where the running maximum of the string
    functions is attained, the lowering operator in the rightmost.
    """

    def __init__(self, components):
        if not components:
            raise GenerationError("tensor product needs at least one factor")
        self.components = list(components)
        self.indices = self.components[0].indices
        for c in self.components:
            if tuple(c.indices) != tuple(self.indices):
                raise GenerationError("tensor factors have different index sets")
        self.infinite = any(getattr(c, "infinite", False) for c in self.components)

    def key(self, b):
        return tuple(c.key(x) for c, x in zip(self.components, b))

    def wt(self, b):
        total = None
        for c, x in zip(self.components, b):
            w = c.wt(x)
            total = w if total is None else total + w
        return total

    def pairing(self, i, w):
        return self.components[0].pairing(i, w)

    def _string_funcs(self, b, i):
        vals = []
        shift = 0
        for c, x in zip(self.components, b):
            vals.append(_exact_int(c.eps(x, i) - shift))
            shift += self.pairing(i, c.wt(x))
        return vals

    def eps(self, b, i):
        return max(self._string_funcs(b, i))

    def phi(self, b, i):
        return self.eps(b, i) + _exact_int(self.pairing(i, self.wt(b)))

    def e_position(self, b, i) -> int:
        vals = self._string_funcs(b, i)
        return vals.index(max(vals))

    def f_position(self, b, i) -> int:
        vals = self._string_funcs(b, i)
        top = max(vals)
        return len(vals) - 1 - vals[::-1].index(top)

    def e(self, b, i):
        k = self.e_position(b, i)
        moved = self.components[k].e(b[k], i)
        if moved is None:
            return None
        return tuple(moved if j == k else x for j, x in enumerate(b))

    def f(self, b, i):
        k = self.f_position(b, i)
        moved = self.components[k].f(b[k], i)
        if moved is None:
            return None
        return tuple(moved if j == k else x for j, x in enumerate(b))


class AffineOps:
    """Affinisation of a kind with classical weights.

    Elements are pairs (x, n); the 0-labelled operators shift the integer
    degree, every other label leaves it alone, and the weight picks up n
    times the null root.
    """

    def __init__(self, base):
        self.base = base
        self.indices = base.indices
        self.infinite = True

    def key(self, xn):
        x, n = xn
        return (self.base.key(x), n)

    def wt(self, xn) -> Weight:
        x, n = xn
        w = self.base.wt(x)
        if not w.is_classical:
            raise GenerationError("affinisation needs classical base weights")
        return Weight(w.coords, Fraction(n))

    def level(self, xn) -> int:
        return xn[1]

    def eps(self, xn, i):
        return self.base.eps(xn[0], i)

    def phi(self, xn, i):
        return self.base.phi(xn[0], i)

    def e(self, xn, i):
        x, n = xn
        moved = self.base.e(x, i)
        if moved is None:
            return None
        return (moved, n + (1 if i == 0 else 0))

    def f(self, xn, i):
        x, n = xn
        moved = self.base.f(x, i)
        if moved is None:
            return None
        return (moved, n - (1 if i == 0 else 0))

    def pairing(self, i, w):
        return self.base.pairing(i, w)
