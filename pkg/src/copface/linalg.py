"""Dense symmetric-matrix primitives.

Everything downstream works in floating point, so rank and kernel decisions
go through the SVD with a relative singular-value threshold.  The
``TolerancePolicy`` carries the two thresholds used across the package.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class DimensionMismatch(ValueError):
    """Raised when matrices or vectors of incompatible orders are combined."""


@dataclass(frozen=True)
class TolerancePolicy:
    """Thresholds for zero tests and rank decisions.

    Parameters
    ----------
    zero_tol : float
        Absolute threshold below which a scalar counts as zero.  Quadratic
        and bilinear forms are compared against ``zero_tol * ||A||_2``.
    rank_tol_rel : float
        Singular values at or below ``rank_tol_rel * s_max`` count as zero.
    """

    zero_tol: float = 1e-9
    rank_tol_rel: float = 1e-8

    def __post_init__(self):
        if not (0 < self.zero_tol < 1):
            raise ValueError(f"zero_tol must lie in (0, 1), got {self.zero_tol}")
        if not self.rank_tol_rel > 0:
            raise ValueError(f"rank_tol_rel must be positive, got {self.rank_tol_rel}")


DEFAULT_TOL = TolerancePolicy()


class SymMatrix:
    """Real symmetric matrix of order ``n`` stored densely.

    The input is checked for symmetry (relative to its largest entry) and
    then symmetrized exactly by averaging with its transpose, so downstream
    code can rely on ``entries == entries.T`` bit for bit.
    """

    __slots__ = ("_a",)

    def __init__(self, entries, *, sym_tol: float = 1e-9):
        a = np.array(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise DimensionMismatch(f"expected a non-empty square matrix, got shape {a.shape}")
        scale = max(1.0, float(np.max(np.abs(a))))
        if np.max(np.abs(a - a.T)) > sym_tol * scale:
            raise ValueError("matrix is not symmetric")
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        self._a = a

    @property
    def order(self) -> int:
        return self._a.shape[0]

    @property
    def entries(self) -> np.ndarray:
        """Read-only ``(n, n)`` array."""
        return self._a

    def __array__(self, dtype=None, copy=None):
        return self._a if dtype is None else self._a.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, SymMatrix):
            return NotImplemented
        return self._a.shape == other._a.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self):
        return hash(self._a.tobytes())

    def __repr__(self):
        return f"SymMatrix(order={self.order})"

    def scaled(self, c: float) -> "SymMatrix":
        return SymMatrix(c * self._a)

    def norm2(self) -> float:
        """Spectral norm; 1.0 for the zero matrix so it can serve as a scale."""
        s = float(np.linalg.norm(self._a, 2))
        return s if s > 0 else 1.0


def as_array(A) -> np.ndarray:
    return A.entries if isinstance(A, SymMatrix) else np.asarray(A, dtype=float)


def svec(A) -> np.ndarray:
    """Symmetric vectorization, row-major over the upper triangle.

    Off-diagonal entries are scaled by sqrt(2) so that
    ``trace(A @ B) == svec(A) @ svec(B)``.
    """
    a = as_array(A)
    n = a.shape[0]
    iu = np.triu_indices(n)
    v = a[iu].copy()
    v[iu[0] != iu[1]] *= np.sqrt(2.0)
    return v


def smat(v: Sequence[float]) -> np.ndarray:
    """Inverse of :func:`svec`."""
    v = np.asarray(v, dtype=float)
    n = int(round((np.sqrt(8 * v.size + 1) - 1) / 2))
    if n * (n + 1) // 2 != v.size:
        raise DimensionMismatch(f"length {v.size} is not a triangular number")
    iu = np.triu_indices(n)
    a = np.zeros((n, n))
    w = v.copy()
    w[iu[0] != iu[1]] /= np.sqrt(2.0)
    a[iu] = w
    return a + np.triu(a, 1).T


def svec_index(n: int) -> dict[tuple[int, int], int]:
    """Map ``(i, j)`` with ``i <= j`` (0-based) to its position in ``svec``."""
    iu = np.triu_indices(n)
    return {(int(i), int(j)): k for k, (i, j) in enumerate(zip(*iu))}


@dataclass(frozen=True)
class RankDecision:
    """Outcome of a thresholded singular-value count.

    ``gap_above`` is the smallest retained singular value divided by the
    threshold and ``gap_below`` is the threshold divided by the largest
    discarded one (``inf`` when nothing falls on that side).
    """

    rank: int
    threshold: float
    singular_values: tuple[float, ...]

    @property
    def gap_above(self) -> float:
        if self.rank == 0:
            return float("inf")
        return self.singular_values[self.rank - 1] / self.threshold

    @property
    def gap_below(self) -> float:
        if self.rank == len(self.singular_values):
            return float("inf")
        s = self.singular_values[self.rank]
        return float("inf") if s == 0 else self.threshold / s

    @property
    def gap(self) -> float:
        return min(self.gap_above, self.gap_below)


def rank_decision(M, tol: TolerancePolicy = DEFAULT_TOL, ncols: int | None = None) -> RankDecision:
    """Numerical rank of the rows of ``M`` with a relative threshold."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.size == 0:
        return RankDecision(0, tol.rank_tol_rel, ())
    s = np.linalg.svd(M, compute_uv=False)
    thr = tol.rank_tol_rel * s[0] if s[0] > 0 else tol.rank_tol_rel
    r = int(np.sum(s > thr))
    return RankDecision(r, float(thr), tuple(float(x) for x in s))


def rank_of_family(mats: Iterable, tol: TolerancePolicy = DEFAULT_TOL) -> int:
    """Rank of a family of symmetric matrices, i.e. of their ``svec`` vectors."""
    return family_rank_decision(mats, tol).rank


def family_rank_decision(mats: Iterable, tol: TolerancePolicy = DEFAULT_TOL) -> RankDecision:
    rows = []
    order = None
    for m in mats:
        a = as_array(m)
        if order is None:
            order = a.shape[0]
        elif a.shape[0] != order:
            raise DimensionMismatch(f"mixed orders {order} and {a.shape[0]} in family")
        rows.append(svec(a))
    if not rows:
        return RankDecision(0, tol.rank_tol_rel, ())
    return rank_decision(np.vstack(rows), tol)


def nullspace(M, tol: TolerancePolicy = DEFAULT_TOL, ncols: int | None = None) -> tuple[np.ndarray, RankDecision]:
    """Orthonormal basis (as columns) of the numerical nullspace of ``M``.

    An ``M`` with no rows has the whole space as nullspace; pass ``ncols``
    in that case.
    """
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        if ncols is None:
            ncols = M.shape[1] if M.ndim == 2 else 0
        return np.eye(ncols), RankDecision(0, tol.rank_tol_rel, ())
    M = np.atleast_2d(M)
    _, s, vt = np.linalg.svd(M, full_matrices=True)
    thr = tol.rank_tol_rel * s[0] if s[0] > 0 else tol.rank_tol_rel
    r = int(np.sum(s > thr))
    return vt[r:].T.copy(), RankDecision(r, float(thr), tuple(float(x) for x in s))


def kernel_basis(A, tol: TolerancePolicy = DEFAULT_TOL) -> list[np.ndarray]:
    """Orthonormal basis of the numerical kernel of a symmetric matrix."""
    a = as_array(A)
    if not np.any(a):
        return [row for row in np.eye(a.shape[0])]
    basis, _ = nullspace(a, tol)
    return [basis[:, k] for k in range(basis.shape[1])]


def principal_submatrix(A, S: Sequence[int]) -> SymMatrix:
    """Principal submatrix on the 0-based, strictly increasing index list ``S``."""
    a = as_array(A)
    n = a.shape[0]
    idx = [int(i) for i in S]
    if not idx:
        raise ValueError("index set must be nonempty")
    if any(i < 0 or i >= n for i in idx):
        raise IndexError(f"index out of range for order {n}: {idx}")
    if any(b <= a_ for a_, b in zip(idx, idx[1:])):
        raise ValueError(f"index set must be strictly increasing: {idx}")
    return SymMatrix(a[np.ix_(idx, idx)])


def support(x, zero_tol: float) -> tuple[int, ...]:
    """0-based indices with ``|x_i| > zero_tol``."""
    x = np.asarray(x, dtype=float)
    return tuple(int(i) for i in np.flatnonzero(np.abs(x) > zero_tol))


# -- matrix text format ----------------------------------------------------

def format_matrix(A) -> str:
    a = as_array(A)
    lines = [str(a.shape[0])]
    lines += [" ".join(repr(float(x)) for x in row) for row in a]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str, tol: TolerancePolicy = DEFAULT_TOL) -> SymMatrix:
    """Parse the shared text format: ``n`` then ``n`` rows of ``n`` floats."""
    tokens = text.split()
    if not tokens:
        raise ValueError("empty matrix file")
    try:
        n = int(tokens[0])
    except ValueError:
        raise ValueError(f"first token must be the order, got {tokens[0]!r}") from None
    if n < 1:
        raise ValueError(f"order must be positive, got {n}")
    body = tokens[1:]
    if len(body) != n * n:
        raise ValueError(f"expected {n * n} entries for order {n}, got {len(body)}")
    a = np.array([float(t) for t in body]).reshape(n, n)
    if np.max(np.abs(a - a.T)) > tol.zero_tol:
        raise ValueError("matrix is not symmetric within zero_tol")
    return SymMatrix(0.5 * (a + a.T))


def read_matrix(path, tol: TolerancePolicy = DEFAULT_TOL) -> SymMatrix:
    return parse_matrix(Path(path).read_text(), tol)


def write_matrix(A, path) -> None:
    Path(path).write_text(format_matrix(A))
