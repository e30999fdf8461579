"""Copositivity tests and enumeration of normalized minimal zeros.

Zeros of a copositive matrix are found through principal-submatrix kernels:
if ``t >= 0`` is a zero of ``A`` then ``(A t)_k = 0`` for every ``k`` in its
support, so ``t`` restricted to its support lies in the kernel of the
corresponding principal submatrix.  Conversely a positive kernel vector of a
principal submatrix of a copositive matrix is a zero.  For the orders this
package targets (n <= 12) all ``2**n - 1`` supports can be scanned.
"""
from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .linalg import (
    DEFAULT_TOL,
    DimensionMismatch,
    SymMatrix,
    TolerancePolicy,
    as_array,
    nullspace,
    support,
)

MAX_ORDER = 12


class BudgetExceeded(RuntimeError):
    """The requested computation exceeds the configured size budget."""


class NotCopositiveError(ValueError):
    """A routine that requires a copositive matrix received one that is not."""


class CopositivityInconclusive(RuntimeError):
    """The copositivity test ran out of budget before reaching a verdict."""


class Verdict(enum.Enum):
    COPOSITIVE = "copositive"
    NOT_COPOSITIVE = "not_copositive"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CopositivityResult:
    verdict: Verdict
    witness: np.ndarray | None = None
    examined: int = 0
    method: str = "principal"

    def __bool__(self):
        return self.verdict is Verdict.COPOSITIVE


def _form_scale(a: np.ndarray) -> float:
    s = float(np.linalg.norm(a, 2))
    return s if s > 0 else 1.0


def quadratic_form(A, t) -> float:
    """``t^T A t``."""
    a = as_array(A)
    t = np.asarray(t.vec if isinstance(t, NormalizedZero) else t, dtype=float)
    if t.shape != (a.shape[0],):
        raise DimensionMismatch(f"vector of length {t.size} for order {a.shape[0]}")
    return float(t @ a @ t)


def is_copositive(
    A,
    tol: TolerancePolicy = DEFAULT_TOL,
    *,
    method: str = "principal",
    budget: int = 10**6,
) -> CopositivityResult:
    """Decide copositivity of a symmetric matrix.

    ``method="principal"`` scans principal submatrices by increasing order
    using the Cottle-Habetler-Lemke criterion: if every principal submatrix
    of order ``k - 1`` is copositive, a submatrix of order ``k`` fails to be
    copositive exactly when it is nonsingular with an entrywise nonpositive
    inverse.  The test is exact up to the tolerance used to call a
    submatrix singular, and it terminates on matrices with zeros.

    ``method="simplicial"`` bisects the standard simplex, pruning a
    subsimplex once all vertex pairings ``v_i^T A v_j`` are nonnegative.  It
    cannot prune around zeros of the form, so on matrices with zeros it
    runs out of ``budget`` and reports ``INCONCLUSIVE``.
    """
    a = as_array(A)
    if method == "principal":
        return _copositive_principal(a, tol, budget)
    if method == "simplicial":
        return _copositive_simplicial(a, tol, budget)
    raise ValueError(f"unknown method {method!r}")


def _copositive_principal(a: np.ndarray, tol: TolerancePolicy, budget: int) -> CopositivityResult:
    n = a.shape[0]
    scale = _form_scale(a)
    ztol = tol.zero_tol * scale
    examined = 0
    for i in range(n):
        if a[i, i] < -ztol:
            w = np.zeros(n)
            w[i] = 1.0
            return CopositivityResult(Verdict.NOT_COPOSITIVE, w, i + 1)
    examined = n
    for k in range(2, n + 1):
        for S in itertools.combinations(range(n), k):
            examined += 1
            if examined > budget:
                return CopositivityResult(Verdict.INCONCLUSIVE, None, examined)
            sub = a[np.ix_(S, S)]
            if np.all(sub >= -ztol):
                continue
            lam, V = np.linalg.eigh(sub)
            if lam[0] >= -ztol:
                continue
            if np.min(np.abs(lam)) <= tol.rank_tol_rel * scale:
                continue
            inv = (V / lam) @ V.T
            if np.max(inv) > tol.zero_tol * np.max(np.abs(inv)):
                continue
            x = np.clip(-inv.sum(axis=1), 0.0, None)
            w = np.zeros(n)
            w[list(S)] = x / x.sum()
            if w @ a @ w < -ztol:
                return CopositivityResult(Verdict.NOT_COPOSITIVE, w, examined)
    return CopositivityResult(Verdict.COPOSITIVE, None, examined)


def _copositive_simplicial(a: np.ndarray, tol: TolerancePolicy, budget: int) -> CopositivityResult:
    n = a.shape[0]
    ztol = tol.zero_tol * _form_scale(a)
    d = np.diag(a)
    if np.min(d) < -ztol:
        w = np.zeros(n)
        w[int(np.argmin(d))] = 1.0
        return CopositivityResult(Verdict.NOT_COPOSITIVE, w, 1, "simplicial")
    stack = [np.eye(n)]
    examined = 0
    while stack:
        examined += 1
        if examined > budget:
            return CopositivityResult(Verdict.INCONCLUSIVE, None, examined, "simplicial")
        V = stack.pop()
        Q = V @ a @ V.T
        vals = np.diag(Q)
        if np.min(vals) < -ztol:
            w = V[int(np.argmin(vals))]
            return CopositivityResult(Verdict.NOT_COPOSITIVE, w / w.sum(), examined, "simplicial")
        if np.min(Q) >= 0:
            continue
        # bisect the longest edge
        diff = V[:, None, :] - V[None, :, :]
        lengths = np.einsum("ijk,ijk->ij", diff, diff)
        i, j = np.unravel_index(int(np.argmax(lengths)), lengths.shape)
        mid = 0.5 * (V[i] + V[j])
        mid_val = mid @ a @ mid
        if mid_val < -ztol:
            return CopositivityResult(Verdict.NOT_COPOSITIVE, mid / mid.sum(), examined, "simplicial")
        V1, V2 = V.copy(), V.copy()
        V1[i] = mid
        V2[j] = mid
        stack.extend((V1, V2))
    return CopositivityResult(Verdict.COPOSITIVE, None, examined, "simplicial")


@dataclass(frozen=True, eq=False)
class NormalizedZero:
    """Nonnegative vector with unit 1-norm together with its support."""

    vec: np.ndarray
    support: tuple[int, ...]

    @classmethod
    def from_vector(cls, x, zero_tol: float = DEFAULT_TOL.zero_tol) -> "NormalizedZero":
        x = np.asarray(x, dtype=float).copy()
        if np.any(x < -zero_tol * max(1.0, np.max(np.abs(x)))):
            raise ValueError("vector has negative components")
        x[x < 0] = 0.0
        total = x.sum()
        if total <= 0:
            raise ValueError("zero vector cannot be normalized")
        x /= total
        x[x <= zero_tol] = 0.0
        x /= x.sum()
        x.setflags(write=False)
        return cls(x, support(x, zero_tol))

    @property
    def n(self) -> int:
        return self.vec.size

    def __eq__(self, other):
        if not isinstance(other, NormalizedZero):
            return NotImplemented
        return self.support == other.support and bool(np.array_equal(self.vec, other.vec))

    def __hash__(self):
        return hash((self.support, self.vec.tobytes()))

    def close_to(self, other: "NormalizedZero", atol: float = 1e-8) -> bool:
        return self.support == other.support and bool(np.max(np.abs(self.vec - other.vec)) <= atol)

    def to_json(self) -> dict:
        return {"support": [i + 1 for i in self.support], "values": [float(self.vec[i]) for i in self.support]}

    @classmethod
    def from_json(cls, obj: dict, n: int) -> "NormalizedZero":
        x = np.zeros(n)
        for i, v in zip(obj["support"], obj["values"]):
            x[int(i) - 1] = float(v)
        if np.any(x < 0) or abs(x.sum() - 1.0) > 1e-10 * max(1, n):
            raise ValueError("serialized zero is not a normalized nonnegative vector")
        x.setflags(write=False)
        return cls(x, tuple(int(i) - 1 for i in obj["support"]))


@dataclass(frozen=True)
class MinimalZeroCatalog:
    """Normalized minimal zeros of a copositive matrix.

    ``complete`` means the support scan found every minimal zero and every
    zero support it met is spanned by the minimal zeros it contains, so the
    clique representation built from the catalog describes all zeros.
    ``finite`` additionally requires that no non-minimal zero support exists,
    i.e. the set of normalized zeros is exactly the catalog.
    """

    matrix: SymMatrix
    zeros: tuple[NormalizedZero, ...]
    complete: bool = True
    nonminimal_supports: tuple[tuple[int, ...], ...] = ()
    anomalies: tuple[str, ...] = field(default=(), compare=False)

    def __len__(self):
        return len(self.zeros)

    def __iter__(self):
        return iter(self.zeros)

    def __getitem__(self, j):
        return self.zeros[j]

    @property
    def finite(self) -> bool:
        return self.complete and not self.nonminimal_supports

    @property
    def supports(self) -> list[tuple[int, ...]]:
        return [z.support for z in self.zeros]

    def vectors(self) -> np.ndarray:
        n = self.matrix.order
        if not self.zeros:
            return np.zeros((0, n))
        return np.vstack([z.vec for z in self.zeros])

    def to_json(self) -> list[dict]:
        return [z.to_json() for z in self.zeros]

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def verify_zero(A, t: NormalizedZero | Sequence[float], tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """True iff ``t`` is a normalized zero of ``A`` within tolerance."""
    a = as_array(A)
    x = np.asarray(t.vec if isinstance(t, NormalizedZero) else t, dtype=float)
    if x.shape != (a.shape[0],):
        raise DimensionMismatch(f"vector of length {x.size} for order {a.shape[0]}")
    if np.any(x < -tol.zero_tol):
        return False
    if abs(x.sum() - 1.0) > 1e-10 * max(1, x.size):
        return False
    return float(x @ a @ x) <= tol.zero_tol * _form_scale(a)


def _positive_kernel_vector(K: np.ndarray, outside: np.ndarray, tol: TolerancePolicy) -> np.ndarray | None:
    """A vector ``K c`` with every entry strictly positive and ``outside @ c >= 0``.

    ``K`` is an orthonormal kernel basis (columns).  The one-dimensional
    case is handled by a sign flip; higher dimensions go through an LP.
    """
    d = K.shape[1]
    thr = 10 * tol.zero_tol
    if d == 1:
        x = K[:, 0]
        if x.sum() < 0:
            x = -x
        if np.all(x > thr * np.max(np.abs(x))):
            return x
        return None
    # find c with K c >= 1 and outside c >= 0, minimizing nothing
    A_ub = np.vstack([-K, -outside]) if outside.size else -K
    b_ub = np.concatenate([-np.ones(K.shape[0]), np.zeros(outside.shape[0])])
    res = linprog(np.zeros(d), A_ub=A_ub, b_ub=b_ub, bounds=[(None, None)] * d, method="highs")
    if res.status != 0:
        return None
    x = K @ res.x
    if np.all(x > thr * np.max(np.abs(x))):
        return x
    return None


def enumerate_minimal_zeros(
    A,
    tol: TolerancePolicy = DEFAULT_TOL,
    *,
    max_order: int = MAX_ORDER,
    check_copositive: bool = True,
) -> MinimalZeroCatalog:
    """Enumerate all normalized minimal zeros of a copositive matrix.

    Supports are scanned by increasing cardinality.  A support ``S`` that
    contains no previously found zero support yields a minimal zero when the
    kernel of ``A[S, S]`` is one-dimensional and spanned by a positive
    vector.  Supports that do contain known zeros are checked as well: when
    they carry a zero of their own, its kernel must be spanned by the minimal
    zeros inside it, otherwise the catalog is marked incomplete.

    Raises
    ------
    BudgetExceeded
        If the order exceeds ``max_order``.
    NotCopositiveError
        If the matrix is not copositive.
    """
    M = A if isinstance(A, SymMatrix) else SymMatrix(A)
    a = M.entries
    n = M.order
    if n > max_order:
        raise BudgetExceeded(f"order {n} exceeds the enumeration budget (max_order={max_order})")
    if check_copositive:
        res = is_copositive(a, tol)
        if res.verdict is Verdict.INCONCLUSIVE:
            raise CopositivityInconclusive("copositivity test exhausted its budget")
        if res.verdict is Verdict.NOT_COPOSITIVE:
            raise NotCopositiveError("matrix is not copositive")
    scale = M.norm2()
    ztol = tol.zero_tol * scale

    found: list[tuple[tuple[int, ...], np.ndarray]] = []
    nonminimal: list[tuple[int, ...]] = []
    anomalies: list[str] = []
    complete = True

    for k in range(1, n + 1):
        for S in itertools.combinations(range(n), k):
            sub = a[np.ix_(S, S)]
            if np.any(sub):
                K, _ = nullspace(sub, tol)
            else:
                K = np.eye(k)
            if K.shape[1] == 0:
                continue
            rest = [i for i in range(n) if i not in S]
            outside = a[np.ix_(rest, S)] @ K if rest else np.zeros((0, K.shape[1]))
            x = _positive_kernel_vector(K, outside, tol)
            if x is None:
                continue
            full = np.zeros(n)
            full[list(S)] = x / x.sum()
            if np.min(a @ full) < -10 * ztol:
                raise NotCopositiveError(f"support {S} carries a kernel vector with negative A x")
            Sset = set(S)
            inside = [z for (supp, z) in found if set(supp) <= Sset]
            if not inside:
                if K.shape[1] != 1:
                    complete = False
                    anomalies.append(f"minimal support {tuple(i + 1 for i in S)} has kernel dimension {K.shape[1]}")
                    continue
                found.append((S, full))
            else:
                nonminimal.append(S)
                span = np.linalg.matrix_rank(np.vstack(inside)[:, list(S)], tol=1e-8)
                if K.shape[1] > span:
                    complete = False
                    anomalies.append(
                        f"zero support {tuple(i + 1 for i in S)}: kernel dimension {K.shape[1]} exceeds "
                        f"span {span} of the minimal zeros it contains"
                    )

    zeros = sorted((NormalizedZero.from_vector(x, tol.zero_tol) for _, x in found), key=lambda z: z.support)
    return MinimalZeroCatalog(M, tuple(zeros), complete, tuple(nonminimal), tuple(anomalies))
