"""Graph families for quantum-walk tasks and their Laplacians.

Vertices are 0-based.  The glued-trees builder follows the deterministic
cyclic leaf gluing of the 14-node reference instance; a seeded random
perfect-cycle gluing is available for generality.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import ShapeError, SparseHermitian


class SaturationError(RuntimeError):
    """A scanned quantity never reached its threshold inside the window."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]
    kind: str = "generic"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for a, b in self.edges:
            if a == b:
                raise ShapeError("self-loops are not allowed")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ShapeError("edge endpoint out of range")

    @property
    def degree(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=int)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg


def _edge(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def chain_graph(n: int) -> Graph:
    if n < 2:
        raise ShapeError("chain needs n >= 2")
    return Graph(n, frozenset(_edge(j, j + 1) for j in range(n - 1)), "chain")


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ShapeError("cycle needs n >= 3")
    return Graph(n, frozenset(_edge(j, (j + 1) % n) for j in range(n)), "cycle")


def lattice_graph(n_side: int, d: int, periodic: bool = False) -> Graph:
    """d-dimensional grid with n_side vertices per axis; open or periodic."""
    if n_side < 2 or d < 1:
        raise ShapeError("need n_side >= 2 and d >= 1")
    n = n_side**d
    edges = set()
    for v in range(n):
        coords = [(v // n_side**k) % n_side for k in range(d)]
        for k in range(d):
            c = coords[k]
            if c + 1 < n_side:
                edges.add(_edge(v, v + n_side**k))
            elif periodic and n_side > 2:
                edges.add(_edge(v, v - (n_side - 1) * n_side**k))
    kind = "periodic-lattice" if periodic else "regular-lattice"
    return Graph(n, frozenset(edges), kind, {"n_side": n_side, "d": d})


def binary_tree_graph(h: int) -> Graph:
    """Perfect binary tree of height h, root 0, children 2j+1 and 2j+2."""
    if h < 1:
        raise ShapeError("height must be >= 1")
    n = 2 ** (h + 1) - 1
    edges = {_edge(j, 2 * j + 1) for j in range((n - 1) // 2)}
    edges |= {_edge(j, 2 * j + 2) for j in range((n - 1) // 2)}
    return Graph(n, frozenset(edges), "binary-tree", {"h": h})


# Cyclic gluing of the two height-2 trees in the 14-node reference instance:
# left leaf (local 1-based 4..7) -> right leaves it connects to.
_GLUED_H2 = {4: (4, 5), 5: (4, 6), 6: (5, 7), 7: (6, 7)}


def glued_trees_graph(h: int, seed: int | None = None) -> Graph:
    """Two height-h binary trees glued leaf-to-leaf along a single cycle.

    Default gluing is deterministic (for h == 2, the reference W pattern);
    pass a seed for a random perfect-cycle gluing.
    """
    if h < 1:
        raise ShapeError("height must be >= 1")
    m = 2**h                      # leaves per tree
    t = 2 ** (h + 1) - 1          # vertices per tree
    left = binary_tree_graph(h)
    edges = set(left.edges)
    edges |= {_edge(a + t, b + t) for a, b in left.edges}
    left_leaves = list(range(t - m, t))
    right_leaves = [v + t for v in range(t - m, t)]
    if seed is not None:
        rng = np.random.default_rng(seed)
        order_l = rng.permutation(m)
        order_r = rng.permutation(m)
        for k in range(m):
            edges.add(_edge(left_leaves[order_l[k]], right_leaves[order_r[k]]))
            edges.add(_edge(left_leaves[order_l[(k + 1) % m]], right_leaves[order_r[k]]))
    elif h == 2:
        for lv, targets in _GLUED_H2.items():
            for tv in targets:
                edges.add(_edge(left_leaves[lv - 4], right_leaves[tv - 4]))
    else:
        for k in range(m):
            edges.add(_edge(left_leaves[k], right_leaves[k]))
            edges.add(_edge(left_leaves[(k + 1) % m], right_leaves[k]))
    return Graph(2 * t, frozenset(edges), "glued-trees", {"h": h})


def build_graph(kind: str, **params) -> Graph:
    builders = {
        "chain": lambda: chain_graph(params["n"]),
        "cycle": lambda: cycle_graph(params["n"]),
        "regular-lattice": lambda: lattice_graph(params["n"], params.get("d", 1)),
        "periodic-lattice": lambda: lattice_graph(params["n"], params.get("d", 1), periodic=True),
        "binary-tree": lambda: binary_tree_graph(params["h"]),
        "glued-trees": lambda: glued_trees_graph(params["h"], params.get("seed")),
    }
    try:
        builder = builders[kind]
    except KeyError:
        raise ShapeError(f"unknown graph kind {kind!r}") from None
    return builder()


def adjacency(G: Graph) -> SparseHermitian:
    A = SparseHermitian(G.n)
    for a, b in G.edges:
        A.set(a, b, 1.0)
    return A


def laplacian(G: Graph) -> SparseHermitian:
    """Off-diagonal 1 on edges, -deg(j) on the diagonal."""
    L = adjacency(G)
    for j, d in enumerate(G.degree):
        L.set(j, j, -float(d))
    return L


def graph_distances(G: Graph, start: int) -> np.ndarray:
    """BFS distances from `start` (-1 where unreachable)."""
    adj: list[list[int]] = [[] for _ in range(G.n)]
    for a, b in G.edges:
        adj[a].append(b)
        adj[b].append(a)
    dist = np.full(G.n, -1, dtype=int)
    dist[start] = 0
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = nxt
    return dist


def propagation_time(G: Graph, start: int = 0, use_adjacency: bool = False,
                     step: float = 0.01) -> float:
    """Smallest grid time with expected propagation distance above n/4.

    Evolves exactly in the n-dimensional vertex space under the Laplacian
    (or the adjacency matrix when use_adjacency is set).
    """
    dist = graph_distances(G, start)
    if (dist < 0).any():
        raise ShapeError("graph must be connected")
    H = adjacency(G) if use_adjacency else laplacian(G)
    w, V = np.linalg.eigh(H.to_dense())
    psi0 = np.zeros(G.n, dtype=complex)
    psi0[start] = 1.0
    coeff = V.conj().T @ psi0
    threshold = G.n / 4.0
    t_max = 10.0 * G.n
    t = 0.0
    while t <= t_max:
        psi = V @ (np.exp(-1j * w * t) * coeff)
        if float(dist @ (np.abs(psi) ** 2)) > threshold:
            return t
        t += step
    raise SaturationError(f"propagation distance never exceeded {threshold}")


def glued_trees_layers(h: int) -> list[list[int]]:
    layers = []
    t = 2 ** (h + 1) - 1
    for j in range(h + 1):
        layers.append(list(range(2**j - 1, 2 ** (j + 1) - 1)))
    for j in range(h + 1):
        mirrored = [t + v for v in layers[h - j]]
        layers.append(mirrored)
    return layers


def glued_trees_traversal_time(h: int, s: float, step: float = 0.01,
                               t_max: float | None = None, seed: int | None = None) -> float:
    """Min grid time with exit-node probability at least s, from the entrance."""
    if not 0 < s < 1:
        raise ShapeError("s must be in (0, 1)")
    G = glued_trees_graph(h, seed)
    A = adjacency(G)
    entrance, exit_node = 0, 2 ** (h + 1) - 1 + 0  # root of the right tree
    w, V = np.linalg.eigh(A.to_dense())
    coeff = V.conj().T @ np.eye(G.n, dtype=complex)[:, entrance]
    if t_max is None:
        t_max = 50.0 * (h + 1)
    t = step
    while t <= t_max:
        amp = V[exit_node] @ (np.exp(-1j * w * t) * coeff)
        if abs(amp) ** 2 >= s:
            return t
        t += step
    raise SaturationError(f"exit probability never reached {s}")
