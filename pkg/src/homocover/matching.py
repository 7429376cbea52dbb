"""Maximum-cardinality matching in general graphs (Edmonds' blossom algorithm) with a Tutte-Berge certificate."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field


@dataclass
class Matching:
    edges: list
    mate: list
    tutte_set: list = field(default_factory=list)
    odd_components: int = 0
    certified: bool = False

    def __len__(self):
        return len(self.edges)


class _Search:
    """Alternating forest grown from a set of exposed roots, contracting blossoms on the fly."""

    def __init__(self, adj, mate, roots):
        n = len(adj)
        self.adj, self.mate = adj, mate
        self.parent = [-1] * n
        self.base = list(range(n))
        self.even = [False] * n
        self.queue = deque()
        for r in roots:
            self.even[r] = True
            self.queue.append(r)

    def _root_path(self, a):
        path = []
        while True:
            a = self.base[a]
            path.append(a)
            if self.mate[a] == -1:
                return path
            a = self.parent[self.mate[a]]

    def _lca(self, a, b):
        seen = set(self._root_path(a))
        for x in self._root_path(b):
            if x in seen:
                return x
        return None

    def _mark(self, v, b, child, inblossom):
        while self.base[v] != b:
            inblossom[self.base[v]] = inblossom[self.base[self.mate[v]]] = True
            self.parent[v] = child
            child = self.mate[v]
            v = self.parent[self.mate[v]]

    def run(self):
        """Grow until an augmenting path appears.

        Returns ("end", v) for a path ending at exposed v, ("bridge", v, w) for an
        even-even edge joining two different trees, or None when the forest is
        complete.
        """
        mate, parent, base, even = self.mate, self.parent, self.base, self.even
        while self.queue:
            v = self.queue.popleft()
            for to in self.adj[v]:
                if base[v] == base[to] or mate[v] == to:
                    continue
                if even[to] or (mate[to] != -1 and parent[mate[to]] != -1):
                    b = self._lca(v, to)
                    if b is None:
                        return ("bridge", v, to)
                    inblossom = [False] * len(base)
                    self._mark(v, b, to, inblossom)
                    self._mark(to, b, v, inblossom)
                    for i in range(len(base)):
                        if inblossom[base[i]]:
                            base[i] = b
                            if not even[i]:
                                even[i] = True
                                self.queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    if mate[to] == -1:
                        return ("end", to)
                    even[mate[to]] = True
                    self.queue.append(mate[to])
        return None


def _augment(mate, parent, v):
    while v != -1:
        pv = parent[v]
        nxt = mate[pv]
        mate[v] = pv
        mate[pv] = v
        v = nxt


def _components(adj, removed):
    n = len(adj)
    seen = list(removed)
    sizes = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        stack, size = [s], 0
        while stack:
            v = stack.pop()
            size += 1
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        sizes.append(size)
    return sizes


def adjacency(n, edges):
    adj = [[] for _ in range(n)]
    for u, v in edges:
        if u == v:
            raise ValueError("self-loops are not allowed")
        adj[u].append(v)
        adj[v].append(u)
    return [sorted(set(a)) for a in adj]


def max_matching(n: int, edges) -> Matching:
    """Maximum matching of the simple graph ({0..n-1}, edges).

    After the last augmentation, a search rooted at every exposed vertex yields
    the Gallai-Edmonds set A (odd vertices of the final forest); the matching is
    certified when odd(G - A) - |A| equals the number of exposed vertices.
    """
    adj = adjacency(n, edges)
    mate = [-1] * n
    for v in range(n):
        if mate[v] == -1:
            for w in adj[v]:
                if mate[w] == -1:
                    mate[v], mate[w] = w, v
                    break
    for r in range(n):
        if mate[r] != -1:
            continue
        search = _Search(adj, mate, [r])
        hit = search.run()
        if hit is not None:
            _augment(mate, search.parent, hit[1])
    exposed = [v for v in range(n) if mate[v] == -1]
    final = _Search(adj, mate, exposed)
    certified = final.run() is None
    even = [final.even[v] for v in range(n)]
    tutte = sorted({w for v in range(n) if even[v] for w in adj[v] if not even[w]})
    removed = [False] * n
    for a in tutte:
        removed[a] = True
    odd = sum(1 for s in _components(adj, removed) if s % 2 == 1)
    certified = certified and odd - len(tutte) == len(exposed)
    pairs = sorted((v, mate[v]) for v in range(n) if mate[v] > v)
    return Matching(pairs, mate, tutte, odd, certified)


def components_after_removal(n, edges, removed) -> int:
    adj = adjacency(n, edges)
    mask = [False] * n
    for u in removed:
        mask[u] = True
    return len(_components(adj, mask))
