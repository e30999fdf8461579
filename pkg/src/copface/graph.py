"""Minimal-zeros graph, its maximal cliques and the derived index sets.

Vertices are catalog positions (0-based); index sets over ``[n]`` are
0-based tuples.  JSON output shifts everything to 1-based.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import networkx as nx
import numpy as np
from scipy.optimize import nnls

from .linalg import DEFAULT_TOL, TolerancePolicy, support
from .zeros import MinimalZeroCatalog, NormalizedZero, verify_zero

HULL_TOL = 1e-8


class NotAZeroError(ValueError):
    pass


@dataclass(frozen=True)
class ZerosGraph:
    catalog: MinimalZeroCatalog
    edges: tuple[tuple[int, int], ...]

    @property
    def vertices(self) -> range:
        return range(len(self.catalog))

    def adjacent(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in set(self.edges)


@dataclass(frozen=True)
class Clique:
    members: tuple[int, ...]
    p_star: tuple[int, ...]
    t_s: np.ndarray


@dataclass(frozen=True)
class CliqueCover:
    graph: ZerosGraph
    cliques: tuple[Clique, ...]

    @property
    def catalog(self) -> MinimalZeroCatalog:
        return self.graph.catalog

    def __len__(self):
        return len(self.cliques)

    def to_json(self) -> dict:
        g = self.graph
        return {
            "vertices": [v + 1 for v in g.vertices],
            "edges": [[i + 1, j + 1] for i, j in g.edges],
            "cliques": [
                {
                    "members": [m + 1 for m in c.members],
                    "p_star": [k + 1 for k in c.p_star],
                    "t_s": [float(x) for x in c.t_s],
                }
                for c in self.cliques
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def build_graph(catalog: MinimalZeroCatalog, tol: TolerancePolicy = DEFAULT_TOL) -> ZerosGraph:
    """Edges join minimal zeros ``i < j`` with ``tau_i^T A tau_j`` numerically zero."""
    if len(catalog) == 0:
        raise ValueError("catalog has no zeros")
    a = catalog.matrix.entries
    thr = tol.zero_tol * catalog.matrix.norm2()
    X = catalog.vectors()
    G = X @ a @ X.T
    p = len(catalog)
    edges = tuple((i, j) for i in range(p) for j in range(i + 1, p) if G[i, j] <= thr)
    return ZerosGraph(catalog, edges)


def maximal_cliques(graph: ZerosGraph) -> CliqueCover:
    """All maximal cliques (pivoting Bron-Kerbosch), with ``P*(s)`` and ``t(s)``."""
    g = nx.Graph()
    g.add_nodes_from(graph.vertices)
    g.add_edges_from(graph.edges)
    found = sorted(tuple(sorted(c)) for c in nx.find_cliques(g))
    X = graph.catalog.vectors()
    cliques = []
    for members in found:
        p_star = tuple(sorted(set().union(*(graph.catalog[j].support for j in members))))
        t_s = X[list(members)].sum(axis=0)
        t_s.setflags(write=False)
        cliques.append(Clique(members, p_star, t_s))
    return CliqueCover(graph, tuple(cliques))


def in_clique_hull(cover: CliqueCover, clique: Clique, t) -> bool:
    """NNLS test of ``t`` against ``conv{tau_j : j in clique}``."""
    x = np.asarray(t.vec if isinstance(t, NormalizedZero) else t, dtype=float)
    V = cover.catalog.vectors()[list(clique.members)].T
    # the sum-to-one row is weighted heavily so it acts as a constraint
    w = 1e4
    M = np.vstack([V, w * np.ones(V.shape[1])])
    rhs = np.concatenate([x, [w]])
    lam, _ = nnls(M, rhs)
    return bool(np.max(np.abs(V @ lam - x)) <= HULL_TOL and abs(lam.sum() - 1) <= HULL_TOL)


def zero_set_contains(cover: CliqueCover, t) -> bool:
    """Membership in ``Z(A)`` via the union of clique hulls."""
    return any(in_clique_hull(cover, c, t) for c in cover.cliques)


def _supp(t, zero_tol: float) -> set[int]:
    if isinstance(t, NormalizedZero):
        return set(t.support)
    return set(support(t, zero_tol))


def s_of_tau(cover: CliqueCover, tau, tol: TolerancePolicy = DEFAULT_TOL) -> tuple[int, ...]:
    """Clique indices ``s`` with ``supp(tau)`` contained in ``P*(s)``."""
    if not verify_zero(cover.catalog.matrix, tau, tol):
        raise NotAZeroError("vector is not a normalized zero of the matrix")
    sp = _supp(tau, tol.zero_tol)
    return tuple(s for s, c in enumerate(cover.cliques) if sp <= set(c.p_star))


def j_set(cover: CliqueCover, tau, tol: TolerancePolicy = DEFAULT_TOL) -> tuple[int, ...]:
    """The index set ``J(tau, A)``: union of ``P*(s)`` over ``s`` in ``S(tau)``."""
    out: set[int] = set()
    for s in s_of_tau(cover, tau, tol):
        out |= set(cover.cliques[s].p_star)
    return tuple(sorted(out))


def m_set(catalog: MinimalZeroCatalog, j: int, tol: TolerancePolicy = DEFAULT_TOL) -> tuple[int, ...]:
    """``[n] \\ supp(A tau_j)``."""
    if not 0 <= j < len(catalog):
        raise IndexError(f"zero index {j} out of range")
    a = catalog.matrix.entries
    r = a @ catalog[j].vec
    hit = set(support(r, tol.zero_tol * catalog.matrix.norm2()))
    return tuple(k for k in range(catalog.matrix.order) if k not in hit)


def m_sets(
    catalog: MinimalZeroCatalog, cover: CliqueCover, j: int, tol: TolerancePolicy = DEFAULT_TOL
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``(M(j), M*(j))`` where ``M*(j)`` unions ``P*(s)`` over cliques holding ``j``."""
    m = m_set(catalog, j, tol)
    star: set[int] = set()
    for c in cover.cliques:
        if j in c.members:
            star |= set(c.p_star)
    return m, tuple(sorted(star))


def zero_graph(catalog: MinimalZeroCatalog, tol: TolerancePolicy = DEFAULT_TOL) -> CliqueCover:
    """Convenience: graph plus clique cover for a catalog (empty catalogs allowed)."""
    if len(catalog) == 0:
        return CliqueCover(ZerosGraph(catalog, ()), ())
    return maximal_cliques(build_graph(catalog, tol))

