"""Face dimensions of CP(n) and extreme/exposed certificates for COP(n).

The certificates are homogeneous linear systems in an unknown symmetric
matrix ``D`` (handled in ``svec`` coordinates), built from the minimal
zeros of ``A``:

* extremality -- ``e_k^T D tau = 0`` for every zero ``tau`` and every
  ``k`` outside ``supp(A tau)``; ``A`` is extreme iff the solutions are the
  multiples of ``A``.
* exposedness -- the same equations restricted to ``k`` in ``J(tau, A)``,
  together with ``e_k^T D tau >= 0`` for the remaining ``k`` outside
  ``supp(A tau)``; ``A`` is exposed iff again only multiples of ``A``
  survive.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .graph import CliqueCover, j_set, m_set, zero_graph
from .linalg import (
    DEFAULT_TOL,
    RankDecision,
    SymMatrix,
    TolerancePolicy,
    family_rank_decision,
    nullspace,
    svec,
    svec_index,
)
from .zeros import MinimalZeroCatalog

SPAN_COS_TOL = 1e-8


class IncompleteCatalogError(ValueError):
    """The zero catalog does not describe every zero of the matrix."""


class CertificateError(RuntimeError):
    """The certificate system is inconsistent with its own input."""


class InconclusiveError(RuntimeError):
    """A numerical subproblem could not be decided."""


class NotExposedError(ValueError):
    """Maximality of the face was requested for a matrix not certified exposed."""


class ExposednessMethod(enum.Enum):
    EQUALITY_ONLY = "EqualityOnly"
    SUPPORT_CRITERION = "SupportCriterion"
    CONE_PROBE = "ConeProbe"


@dataclass(frozen=True)
class FaceDescriptor:
    matrix: SymMatrix
    dimension: int
    generator_pairs: tuple[tuple[tuple[int, int], ...], ...]
    maximal: bool = False
    rank: RankDecision | None = field(default=None, compare=False, repr=False)

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "maximal": self.maximal,
            "generator_pairs": [[[i + 1, j + 1] for i, j in grp] for grp in self.generator_pairs],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


@dataclass(frozen=True)
class RayCertificate:
    matrix: SymMatrix
    extreme: bool
    exposed: bool | None
    equality_nullity: int
    method: ExposednessMethod | None = None
    nullspace_rep: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)), repr=False)
    extreme_nullity: int | None = None
    residual: float = 0.0
    rank_gaps: tuple[float, ...] = field(default=(), compare=False, repr=False)

    def to_json(self) -> dict:
        return {
            "extreme": self.extreme,
            "exposed": self.exposed,
            "method": self.method.value if self.method else None,
            "equality_nullity": self.equality_nullity,
            "extreme_nullity": self.extreme_nullity,
            "residuals": {"max_abs_row_residual": self.residual},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


# -- face dimension ------------------------------------------------------------

def face_dimension(
    catalog: MinimalZeroCatalog,
    cover: CliqueCover | None = None,
    tol: TolerancePolicy = DEFAULT_TOL,
    *,
    maximal: bool = False,
) -> FaceDescriptor:
    """Dimension of ``CP(n) ∩ A^⊥`` from the clique representation of the zeros.

    The dimension is the rank of the matrices ``(tau_i + tau_j)(tau_i + tau_j)^T``
    over all pairs ``i <= j`` drawn from a common maximal clique.
    """
    if not catalog.complete:
        raise IncompleteCatalogError(
            "zero catalog is incomplete (complete=False); inspect its anomalies before computing a face dimension"
        )
    if cover is None:
        cover = zero_graph(catalog, tol)
    X = catalog.vectors()
    groups = []
    mats = []
    seen: set[tuple[int, int]] = set()
    for c in cover.cliques:
        pairs = tuple((i, j) for k, i in enumerate(c.members) for j in c.members[k:])
        groups.append(pairs)
        for i, j in pairs:
            if (i, j) in seen:
                continue
            seen.add((i, j))
            v = X[i] + X[j]
            mats.append(np.outer(v, v))
    dec = family_rank_decision(mats, tol)
    return FaceDescriptor(catalog.matrix, dec.rank, tuple(groups), maximal, dec)


# -- certificate systems -------------------------------------------------------

def _rows(n: int, tau: np.ndarray, ks) -> np.ndarray:
    """Rows of ``e_k^T D tau`` as linear functionals on ``svec(D)``."""
    index = svec_index(n)
    r2 = math.sqrt(2.0)
    out = np.zeros((len(ks), n * (n + 1) // 2))
    for r, k in enumerate(ks):
        for l in range(n):
            if tau[l] == 0:
                continue
            if k == l:
                out[r, index[(k, k)]] += tau[l]
            else:
                out[r, index[(min(k, l), max(k, l))]] += tau[l] / r2
    return out


def _require_complete(catalog: MinimalZeroCatalog):
    if not catalog.complete:
        raise IncompleteCatalogError("certificates need a complete zero catalog")


def _spans_matrix(basis: np.ndarray, a_vec: np.ndarray) -> bool:
    v = basis[:, 0]
    c = abs(v @ a_vec) / (np.linalg.norm(v) * np.linalg.norm(a_vec))
    return bool(c >= 1 - SPAN_COS_TOL)


def extreme_system(catalog: MinimalZeroCatalog, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    n = catalog.matrix.order
    blocks = [_rows(n, z.vec, m_set(catalog, j, tol)) for j, z in enumerate(catalog.zeros)]
    blocks = [b for b in blocks if b.size]
    return np.vstack(blocks) if blocks else np.zeros((0, n * (n + 1) // 2))


def certify_extreme(
    A, catalog: MinimalZeroCatalog, tol: TolerancePolicy = DEFAULT_TOL
) -> RayCertificate:
    """Extremality of ``A`` in COP(n) via the equality system on its zeros."""
    _require_complete(catalog)
    M = A if isinstance(A, SymMatrix) else SymMatrix(A)
    n = M.order
    rows = extreme_system(catalog, tol)
    basis, dec = nullspace(rows, tol, ncols=n * (n + 1) // 2)
    nullity = basis.shape[1]
    a_vec = svec(M)
    residual = _residual(rows, a_vec)
    if nullity == 0:
        raise CertificateError("equality system has only the trivial solution, yet A solves it")
    extreme = nullity == 1 and _spans_matrix(basis, a_vec)
    return RayCertificate(
        M,
        extreme=extreme,
        exposed=None,
        equality_nullity=nullity,
        nullspace_rep=basis,
        extreme_nullity=nullity,
        residual=residual,
        rank_gaps=(dec.gap,),
    )


def _residual(rows: np.ndarray, a_vec: np.ndarray) -> float:
    if rows.size == 0:
        return 0.0
    return float(np.max(np.abs(rows @ (a_vec / np.linalg.norm(a_vec)))))


def support_criterion(
    A, catalog: MinimalZeroCatalog, tol: TolerancePolicy = DEFAULT_TOL
) -> bool:
    """True iff ``supp(tau) == [n] \\ supp(A tau)`` for every catalog zero."""
    return all(set(z.support) == set(m_set(catalog, j, tol)) for j, z in enumerate(catalog.zeros))


def certify_exposed(
    A,
    catalog: MinimalZeroCatalog,
    cover: CliqueCover | None = None,
    tol: TolerancePolicy = DEFAULT_TOL,
) -> RayCertificate:
    """Exposedness of ``A`` in COP(n).

    Tried in order: the equality part alone (nullity one), the support
    criterion on top of a positive extremality certificate, and finally a
    feasibility probe of the inequality part over the equality nullspace.
    """
    _require_complete(catalog)
    M = A if isinstance(A, SymMatrix) else SymMatrix(A)
    if cover is None:
        cover = zero_graph(catalog, tol)
    n = M.order
    dim = n * (n + 1) // 2
    a_vec = svec(M)
    ext = certify_extreme(M, catalog, tol)

    eq_blocks, ineq_blocks = [], []
    for j, z in enumerate(catalog.zeros):
        J = j_set(cover, z, tol)
        rest = [k for k in m_set(catalog, j, tol) if k not in set(J)]
        eq_blocks.append(_rows(n, z.vec, J))
        ineq_blocks.append(_rows(n, z.vec, rest))
    eq = np.vstack([b for b in eq_blocks if b.size] or [np.zeros((0, dim))])
    ineq = np.vstack([b for b in ineq_blocks if b.size] or [np.zeros((0, dim))])
    basis, dec = nullspace(eq, tol, ncols=dim)
    nullity = basis.shape[1]
    gaps = ext.rank_gaps + (dec.gap,)
    common = dict(
        extreme=ext.extreme,
        equality_nullity=nullity,
        nullspace_rep=basis,
        extreme_nullity=ext.extreme_nullity,
        residual=max(ext.residual, _residual(eq, a_vec)),
        rank_gaps=gaps,
    )
    if nullity == 0:
        raise CertificateError("exposedness equality system has only the trivial solution, yet A solves it")
    if nullity == 1:
        return RayCertificate(M, exposed=_spans_matrix(basis, a_vec), method=ExposednessMethod.EQUALITY_ONLY, **common)
    if ext.extreme and support_criterion(M, catalog, tol):
        return RayCertificate(M, exposed=True, method=ExposednessMethod.SUPPORT_CRITERION, **common)
    exposed = _cone_probe(basis, ineq, a_vec, tol)
    return RayCertificate(M, exposed=exposed, method=ExposednessMethod.CONE_PROBE, **common)


def _cone_probe(basis: np.ndarray, ineq: np.ndarray, a_vec: np.ndarray, tol: TolerancePolicy) -> bool:
    """True iff the inequality system leaves only multiples of ``A`` in ``span(basis)``.

    Adding multiples of ``A`` does not change the inequality rows (they sit
    on indices where ``A tau`` vanishes), so it suffices to look at the part
    of the nullspace orthogonal to ``A``: exposedness means the polyhedral
    cone ``{c : G c >= 0}`` there is trivial.
    """
    a_unit = a_vec / np.linalg.norm(a_vec)
    coords = basis.T @ a_unit
    if np.linalg.norm(coords) < 1 - 1e-8:
        raise CertificateError("A does not lie in the equality nullspace")
    # orthonormal basis of span(basis) ∩ A^⊥
    W, _ = nullspace(coords[None, :], tol)
    W = basis @ W
    if W.shape[1] == 0:
        return True
    if ineq.size == 0:
        return False
    G = ineq @ W
    G_norm = np.linalg.norm(G, 2)
    if G_norm == 0:
        return False
    G = G / G_norm
    kernel, _ = nullspace(G, tol, ncols=W.shape[1])
    if kernel.shape[1]:
        return False
    # a nonzero c with G c >= 0 exists iff {G c >= 0, sum(G c) = 1} is feasible
    d = G.shape[1]
    res = linprog(
        np.zeros(d),
        A_ub=-G,
        b_ub=np.zeros(G.shape[0]),
        A_eq=G.sum(axis=0)[None, :],
        b_eq=[1.0],
        bounds=[(None, None)] * d,
        method="highs",
    )
    if res.status == 0:
        return False
    if res.status == 2:
        return True
    raise InconclusiveError(f"cone probe LP failed: {res.message}")


def maximal_face_of(
    A,
    catalog: MinimalZeroCatalog,
    cover: CliqueCover | None = None,
    tol: TolerancePolicy = DEFAULT_TOL,
) -> FaceDescriptor:
    """The maximal face ``CP(n) ∩ A^⊥`` exposed by an exposed ray ``A`` of COP(n)."""
    if cover is None:
        cover = zero_graph(catalog, tol)
    cert = certify_exposed(A, catalog, cover, tol)
    if not cert.exposed:
        raise NotExposedError("matrix is not certified exposed; maximality of its face is not established")
    return face_dimension(catalog, cover, tol, maximal=True)
