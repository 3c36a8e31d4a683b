"""Morgenstern graphs X^{q,g} as Cayley graphs, built by breadth-first closure.

The q+1 generators come from the norm-t quaternions x = (1, 0, x3, x4) with
x3, x4 constants and nu x4^2 - x3^2 = 1, pushed through

    x1 + i x2 + j x3 + k x4  ->  [[x1 - x2 i, x3 - x4 i], [(t-1)(x3 + x4 i), x1 + x2 i]]

with i a square root of nu modulo g.  The determinant of the image is F(x) = t.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from ..characters import BudgetError
from ..ffcore import GF, Poly, gcd_monic, is_irreducible
from .pgl import PGL2, ProjMat

DEFAULT_MAX_VERTICES = int(os.environ.get("FFCIRCLE_MAX_VERTICES", 2 * 10**6))


class ConstructionError(RuntimeError):
    pass


def default_nu(q: int) -> int:
    """-1 when q = 3 mod 4 (the choice used for the lower-bound families), else the first non-square."""
    F = GF.get(q)
    if q % 4 == 3:
        return F.neg(1)
    return F.first_nonsquare()


def _as_poly(F: GF, g) -> Poly:
    return g if isinstance(g, Poly) else Poly.parse(F, str(g))


def sqrt_nu(group: PGL2, nu: int) -> list[int]:
    """The lexicographically smaller square root of nu in each residue field."""
    out = []
    for R in group.rings:
        roots = R.sqrt_all(R.elem(Poly.const(group.F, nu)))
        if not roots:
            raise ConstructionError(f"nu = {group.F.format(nu)} is not a square modulo {R.M}")
        out.append(roots[0])
    return out


def norm_one_pairs(F: GF, nu: int) -> list[tuple[int, int]]:
    """(x3, x4) in F_q^2 with nu x4^2 - x3^2 = 1."""
    one = 1
    return [
        (x3, x4)
        for x3 in F.elements()
        for x4 in F.elements()
        if F.sub(F.mul(nu, F.mul(x4, x4)), F.mul(x3, x3)) == one
    ]


def generators(q: int, g, nu: int | None = None) -> list[ProjMat]:
    """The q+1 Morgenstern generators, checked for count, determinant and inverses."""
    F = GF.get(q)
    nu = default_nu(q) if nu is None else nu
    if F.chi(nu) != -1:
        raise ValueError(f"nu = {F.format(nu)} is a square in F_{q}")
    g = _as_poly(F, g).monic()
    s1 = Poly(F, [F.neg(1), 1])
    tt = Poly.t(F)
    if gcd_monic(g, tt * s1).deg > 0:
        raise ConstructionError("g must be prime to t(t-1)")
    group = PGL2(g)
    roots = sqrt_nu(group, nu)
    mats = []
    for x3, x4 in norm_one_pairs(F, nu):
        M = np.zeros((1, len(group.rings), 4), dtype=np.int64)
        for j, R in enumerate(group.rings):
            i = roots[j]
            c3, c4 = R.elem(Poly.const(F, x3)), R.elem(Poly.const(F, x4))
            M[0, j, 0] = R.elem(1)
            M[0, j, 1] = R.sub(c3, R.mul(c4, i))
            M[0, j, 2] = R.mul(R.elem(s1), R.add(c3, R.mul(c4, i)))
            M[0, j, 3] = R.elem(1)
        if (group.det(M) != np.array([R.elem(tt) for R in group.rings])).any():
            raise ConstructionError("generator determinant is not t")
        mats.append(ProjMat.from_array(group, M))
    gens = sorted(set(mats), key=lambda m: m.key)
    if len(gens) != q + 1:
        raise ConstructionError(f"expected {q + 1} distinct generators, found {len(gens)}")
    if {m.inverse() for m in gens} != set(gens):
        raise ConstructionError("generator set is not closed under inverses")
    return gens


@dataclass
class CayleyGraph:
    q: int
    g: Poly
    nu: int
    group: PGL2
    gens: list
    keys: np.ndarray  # sorted vertex keys; vertex i has key keys[i]
    adj: np.ndarray  # (n, q+1) int32, adj[v, s] = v * gens[s]
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return int(self.keys.size)

    @property
    def degree(self) -> int:
        return self.adj.shape[1]

    def index(self, M: ProjMat) -> int:
        k = M.key
        i = int(np.searchsorted(self.keys, k))
        if i >= self.n or self.keys[i] != k:
            raise KeyError(f"{M} is not a vertex of this component")
        return i

    def vertex(self, i: int) -> ProjMat:
        return ProjMat.from_array(self.group, self.group.unkey(self.keys[i : i + 1]))

    def matrix(self, entries) -> ProjMat:
        return ProjMat.make(self.group, entries)

    @property
    def identity(self) -> int:
        return self.index(self.matrix((1, 0, 0, 1)))


def build_graph(q: int, g, nu: int | None = None, max_vertices: int = DEFAULT_MAX_VERTICES) -> CayleyGraph:
    """Closure of the identity under right multiplication by the generators."""
    F = GF.get(q)
    nu = default_nu(q) if nu is None else nu
    g = _as_poly(F, g).monic()
    gens = generators(q, g, nu)
    group = gens[0].group
    G = np.concatenate([m.array for m in gens], axis=0)
    if group.order // 2 > max_vertices:
        raise BudgetError(f"group of order {group.order} exceeds the vertex budget {max_vertices}")

    def step(frontier: np.ndarray) -> np.ndarray:
        out = [group.key(group.canon(group.mul(frontier, G[s : s + 1]))) for s in range(G.shape[0])]
        return np.stack(out, axis=1)

    seen = group.key(group.identity())
    frontier = group.identity()
    while frontier.shape[0]:
        nb = np.unique(step(frontier))
        new = np.setdiff1d(nb, seen, assume_unique=True)
        if seen.size + new.size > max_vertices:
            raise BudgetError(f"more than {max_vertices} vertices")
        seen = np.union1d(seen, new)
        frontier = group.unkey(new)
    keys = seen
    nbr = step(group.unkey(keys))
    adj = np.searchsorted(keys, nbr).astype(np.int32)
    if not (keys[adj] == nbr).all():
        raise ConstructionError("neighbour outside the closure")
    meta = {
        "irreducible": is_irreducible(g),
        "pgl_order": group.order,
        "component_index": group.order // keys.size if group.order % keys.size == 0 else None,
    }
    return CayleyGraph(q, g, nu, group, gens, keys, adj, meta)


# breadth-first search -------------------------------------------------------

def bfs(G: CayleyGraph, source: int) -> np.ndarray:
    """Distances from ``source`` (-1 for unreachable)."""
    dist = np.full(G.n, -1, dtype=np.int64)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    d = 0
    while frontier.size:
        d += 1
        nb = np.unique(G.adj[frontier].reshape(-1))
        nb = nb[dist[nb] < 0]
        dist[nb] = d
        frontier = nb
    return dist


def distance(G: CayleyGraph, A, B) -> int:
    a = A if isinstance(A, (int, np.integer)) else G.index(A)
    b = B if isinstance(B, (int, np.integer)) else G.index(B)
    d = int(bfs(G, a)[b])
    if d < 0:
        raise KeyError("vertices lie in different components")
    return d


def diameter(G: CayleyGraph) -> int:
    """Eccentricity of the identity; equals the diameter since Cayley graphs are vertex-transitive."""
    dist = bfs(G, G.identity)
    if (dist < 0).any():
        raise ConstructionError("graph is not connected")
    return int(dist.max())


def is_connected(G: CayleyGraph) -> bool:
    return bool((bfs(G, G.identity) >= 0).all())


def is_symmetric(G: CayleyGraph) -> bool:
    """Every edge v -> w has a matching edge w -> v (with multiplicity)."""
    u = np.repeat(np.arange(G.n), G.degree)
    v = G.adj.reshape(-1).astype(np.int64)
    fwd = np.sort(u * G.n + v)
    bwd = np.sort(v * G.n + u)
    return bool((fwd == bwd).all())


def two_coloring(G: CayleyGraph) -> np.ndarray | None:
    """A proper 2-coloring from BFS parity, or None if some edge joins equal parities."""
    par = bfs(G, G.identity) % 2
    if (par[G.adj] == par[:, None]).any():
        return None
    return par


def determinant_classes(G: CayleyGraph) -> np.ndarray:
    """Square class (+1/-1) of det per vertex, one column per prime factor of g."""
    return G.group.square_class(G.group.unkey(G.keys))


def t_is_square(q: int, g) -> list[bool]:
    """Whether t is a square modulo each prime factor of g."""
    F = GF.get(q)
    group = PGL2(_as_poly(F, g))
    tt = Poly.t(F)
    return [bool(R.euler_is_square(R.elem(tt))) for R in group.rings]


def determinant_flip_check(G: CayleyGraph) -> bool:
    """Each edge multiplies the determinant class by the class of t (all factors)."""
    cls = determinant_classes(G)
    tcls = np.array([1 if s else -1 for s in t_is_square(G.q, G.g)])
    return bool((cls[G.adj] == (cls * tcls)[:, None, :]).all())


def group_orders(q: int, g) -> dict:
    F = GF.get(q)
    group = PGL2(_as_poly(F, g))
    return {"PGL2": group.order, "PSL2": group.order // 2 ** len(group.rings)}


__all__ = [
    "CayleyGraph",
    "ConstructionError",
    "bfs",
    "build_graph",
    "default_nu",
    "determinant_classes",
    "determinant_flip_check",
    "diameter",
    "distance",
    "generators",
    "group_orders",
    "is_connected",
    "is_symmetric",
    "norm_one_pairs",
    "sqrt_nu",
    "t_is_square",
    "two_coloring",
]
