"""Gaifman graphs of rules and heuristic tree decomposition.

Decompositions come from bucket elimination along a min-fill or min-degree
ordering with lexicographic tie-breaking, so results are reproducible.
Exact treewidth (brute force over elimination orderings via subset dynamic
programming) is provided for small graphs as a test yardstick.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NoCoveringBagError, TooManyVerticesError
from .syntax import Rule, variables_of


@dataclass(frozen=True, slots=True)
class GaifmanGraph:
    """Variables of one rule; edges join variables co-occurring in the head
    or in a single body atom (arithmetic and aggregate atoms count as one
    unit each)."""

    vertices: frozenset[str]
    edges: frozenset[tuple[str, str]]

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {vtx: set() for vtx in self.vertices}
        for u, w in self.edges:
            adj[u].add(w)
            adj[w].add(u)
        return adj


def _edge(u: str, w: str) -> tuple[str, str]:
    return (u, w) if u < w else (w, u)


def _clique(names, edges: set[tuple[str, str]]):
    names = sorted(set(names))
    for i, u in enumerate(names):
        for w in names[i + 1:]:
            edges.add(_edge(u, w))


def gaifman(rule: Rule) -> GaifmanGraph:
    """Gaifman graph of a rule. Head variables form one clique; each body
    element contributes a clique over its own variables."""
    edges: set[tuple[str, str]] = set()
    _clique(variables_of(list(rule.head)) if rule.head else (), edges)
    for element in rule.body_elements():
        _clique(variables_of(element), edges)
    return GaifmanGraph(frozenset(variables_of(rule)), frozenset(edges))


class TreeDecomposition:
    """Rooted tree of bags. Nodes are indices into `bags`."""

    __slots__ = ("bags", "edges", "root")

    def __init__(self, bags, edges, root: int):
        self.bags: tuple[frozenset[str], ...] = tuple(frozenset(b) for b in bags)
        self.edges: tuple[tuple[int, int], ...] = tuple(tuple(sorted(e)) for e in edges)
        self.root = root
        if not self.bags:
            raise ValueError("a tree decomposition needs at least one node")
        if not 0 <= root < len(self.bags):
            raise ValueError("root out of range")

    def __repr__(self):
        shown = ", ".join("{" + ",".join(sorted(b)) + "}" for b in self.bags)
        return f"TreeDecomposition(root={self.root}, bags=[{shown}])"

    @property
    def width(self) -> int:
        return max(len(b) for b in self.bags) - 1

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.bags]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def parents(self) -> list[int]:
        """Parent index per node, -1 for the root, via BFS from the root."""
        adj = self.neighbors()
        parent = [-2] * len(self.bags)
        parent[self.root] = -1
        queue = [self.root]
        while queue:
            node = queue.pop(0)
            for nxt in sorted(adj[node]):
                if parent[nxt] == -2:
                    parent[nxt] = node
                    queue.append(nxt)
        if any(p == -2 for p in parent):
            raise ValueError("tree decomposition is not connected")
        return parent

    def children(self) -> list[list[int]]:
        parent = self.parents()
        out: list[list[int]] = [[] for _ in self.bags]
        for node, par in enumerate(parent):
            if par >= 0:
                out[par].append(node)
        return out

    def postorder(self) -> list[int]:
        children = self.children()
        order: list[int] = []
        stack = [(self.root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
            else:
                stack.append((node, True))
                for child in reversed(children[node]):
                    stack.append((child, False))
        return order

    def preorder(self) -> list[int]:
        children = self.children()
        order: list[int] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            order.append(node)
            for child in reversed(children[node]):
                stack.append(child)
        return order


def decompose_graph(g: GaifmanGraph, heuristic: str = "min-fill", seed: int = 0) -> TreeDecomposition:
    """Bucket elimination along the chosen heuristic ordering. Ties are
    broken by the lexicographically smallest vertex name, which makes the
    result deterministic; the seed is accepted for interface stability."""
    if heuristic not in ("min-fill", "min-degree"):
        raise ValueError(f"unknown heuristic {heuristic!r}")
    del seed
    if not g.vertices:
        return TreeDecomposition([frozenset()], [], 0)

    adj = {vtx: set(nb) for vtx, nb in g.adjacency().items()}
    position: dict[str, int] = {}
    bags: list[frozenset[str]] = []
    eliminated: list[str] = []

    def fill_in(vtx: str) -> int:
        nbs = sorted(adj[vtx])
        count = 0
        for i, u in enumerate(nbs):
            for w in nbs[i + 1:]:
                if w not in adj[u]:
                    count += 1
        return count

    while adj:
        if heuristic == "min-degree":
            best = min(adj, key=lambda vtx: (len(adj[vtx]), vtx))
        else:
            best = min(adj, key=lambda vtx: (fill_in(vtx), vtx))
        nbs = adj[best]
        bags.append(frozenset(nbs | {best}))
        position[best] = len(eliminated)
        eliminated.append(best)
        for u in nbs:
            adj[u].discard(best)
            adj[u].update(nbs - {u})
        del adj[best]

    edges: list[tuple[int, int]] = []
    roots: list[int] = []
    for i, vtx in enumerate(eliminated):
        rest = bags[i] - {vtx}
        if rest:
            parent_vertex = min(rest, key=lambda u: position[u])
            edges.append((i, position[parent_vertex]))
        else:
            roots.append(i)
    main_root = roots[-1]
    for extra in roots[:-1]:
        edges.append((extra, main_root))
    td = TreeDecomposition(bags, edges, main_root)
    return _merge_comparable_adjacent(td)


def _merge_comparable_adjacent(td: TreeDecomposition) -> TreeDecomposition:
    """Contract tree edges whose endpoint bags are comparable (one contains
    the other), keeping the larger bag. Elimination produces a tail of
    shrinking bags; without this a single edge would yield two nodes."""
    while True:
        contract = None
        for a, b in td.edges:
            if td.bags[a] <= td.bags[b]:
                contract = (a, b)
                break
            if td.bags[b] <= td.bags[a]:
                contract = (b, a)
                break
        if contract is None:
            return td
        gone, keep = contract
        remap = {}
        bags = []
        for i, bag in enumerate(td.bags):
            if i == gone:
                continue
            remap[i] = len(bags)
            bags.append(bag)
        remap[gone] = remap[keep]
        edges = set()
        for a, b in td.edges:
            ra, rb = remap[a], remap[b]
            if ra != rb:
                edges.add((min(ra, rb), max(ra, rb)))
        td = TreeDecomposition(bags, sorted(edges), remap[td.root])


def validate_td(g: GaifmanGraph, td: TreeDecomposition) -> tuple[bool, str | None]:
    """Check vertex coverage, edge coverage, and connectedness. Returns the
    first violated condition with a witness."""
    union = frozenset().union(*td.bags) if td.bags else frozenset()
    for vtx in sorted(g.vertices):
        if vtx not in union:
            return False, f"condition (i): vertex {vtx} occurs in no bag"
    for u, w in sorted(g.edges):
        if not any(u in bag and w in bag for bag in td.bags):
            return False, f"condition (ii): edge ({u},{w}) covered by no bag"
    adj = td.neighbors()
    for vtx in sorted(g.vertices):
        holding = [i for i, bag in enumerate(td.bags) if vtx in bag]
        reached = {holding[0]}
        queue = [holding[0]]
        while queue:
            node = queue.pop()
            for nxt in adj[node]:
                if nxt not in reached and vtx in td.bags[nxt]:
                    reached.add(nxt)
                    queue.append(nxt)
        missing = [i for i in holding if i not in reached]
        if missing:
            return False, (
                f"condition (iii): bags {holding[0]} and {missing[0]} both hold "
                f"{vtx} but are separated by {vtx}-free bags"
            )
    return True, None


def root_at_head(td: TreeDecomposition, head_vars) -> TreeDecomposition:
    """Re-root at a node whose bag covers the head variables. Such a node
    exists for any valid decomposition because head variables form a clique
    in the Gaifman graph."""
    head_vars = frozenset(head_vars)
    if head_vars <= td.bags[td.root]:
        return td
    for node in td.preorder():
        if head_vars <= td.bags[node]:
            return TreeDecomposition(td.bags, td.edges, node)
    raise NoCoveringBagError(
        f"no bag covers head variables {{{','.join(sorted(head_vars))}}}"
    )


def exact_treewidth(g: GaifmanGraph, max_vertices: int = 8) -> int:
    """Exact treewidth by dynamic programming over elimination subsets.
    Test-support only; hard-capped because the table is exponential."""
    verts = sorted(g.vertices)
    count = len(verts)
    if count > max_vertices:
        raise TooManyVerticesError(f"{count} vertices exceeds cap {max_vertices}")
    if count == 0:
        return -1
    index = {vtx: i for i, vtx in enumerate(verts)}
    adj_mask = [0] * count
    for u, w in g.edges:
        adj_mask[index[u]] |= 1 << index[w]
        adj_mask[index[w]] |= 1 << index[u]

    def reach_degree(done: int, vtx: int) -> int:
        # Neighbors of vtx in the graph where `done` vertices are eliminated:
        # vertices outside done reachable from vtx through done.
        seen = 1 << vtx
        frontier = adj_mask[vtx] & ~seen
        result = 0
        while frontier:
            low = frontier & -frontier
            i = low.bit_length() - 1
            frontier &= frontier - 1
            if seen & low:
                continue
            seen |= low
            if done & low:
                frontier |= adj_mask[i] & ~seen
            else:
                result += 1
        return result

    memo = {0: -1}

    def solve(subset: int) -> int:
        cached = memo.get(subset)
        if cached is not None:
            return cached
        best = count
        rest = subset
        while rest:
            low = rest & -rest
            vtx = low.bit_length() - 1
            rest &= rest - 1
            without = subset & ~low
            value = max(solve(without), reach_degree(without, vtx))
            if value < best:
                best = value
        memo[subset] = best
        return best

    full = (1 << count) - 1
    for size_mask in range(full + 1):
        solve(size_mask)
    return memo[full]
