"""Odd-order circulant extremal matrices and the order-raising lift ``B(A, I)``.

Index sets are 0-based tuples throughout; ``index_sets(n)[j]`` is the
support of the ``(j+1)``-th circulant zero.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .graph import build_graph, m_set
from .linalg import DEFAULT_TOL, SymMatrix, TolerancePolicy, as_array, format_matrix, kernel_basis
from .zeros import MinimalZeroCatalog, NormalizedZero, enumerate_minimal_zeros, verify_zero

PALINDROME_TOL = 1e-10


class ConstructionError(RuntimeError):
    """A construction violated one of its defining properties numerically."""


class LiftError(ValueError):
    pass


@dataclass(frozen=True)
class CirculantParams:
    n: int
    alpha: float
    beta: float

    @classmethod
    def for_order(cls, n: int) -> "CirculantParams":
        _check_order(n)
        c1 = math.cos(math.pi / (n + 1))
        c3 = math.cos(3 * math.pi / (n + 1))
        return cls(n, 2 * (1 + 2 * c1 * c3), -2 * (c1 + c3))

    @property
    def identity_gap(self) -> float:
        """``alpha + 2 beta + 2`` minus its closed form ``4(1 - c1)(1 - c3)``."""
        n = self.n
        c1 = math.cos(math.pi / (n + 1))
        c3 = math.cos(3 * math.pi / (n + 1))
        return (self.alpha + 2 * self.beta + 2) - 4 * (1 - c1) * (1 - c3)


def _check_order(n: int):
    if not isinstance(n, (int, np.integer)) or n < 5 or n % 2 == 0:
        raise ValueError(f"circulant construction needs an odd order n >= 5, got {n}")


def build_circulant(n: int) -> tuple[SymMatrix, CirculantParams]:
    """Symmetric circulant with ``alpha`` on the diagonal, ``beta`` at cyclic
    distance 1, ``1`` at cyclic distance 2 and ``0`` elsewhere."""
    p = CirculantParams.for_order(n)
    first = np.zeros(n)
    first[0] = p.alpha
    first[1] = first[n - 1] = p.beta
    first[2] = first[n - 2] = 1.0
    a = np.array([np.roll(first, i) for i in range(n)])
    return SymMatrix(a), p


def index_sets(n: int) -> list[tuple[int, ...]]:
    """The supports ``I(1), ..., I(n)`` as 0-based tuples in cyclic order.

    ``I(i)`` removes the cyclically adjacent pair ``{n-i, n-i+1}`` (1-based;
    ``{n, 1}`` for ``i = n``) and lists the remaining ``n - 2`` indices
    starting right after the removed pair, wrapping around.  That order is
    the one in which the shared kernel vector ``u`` is laid out.
    """
    _check_order(n)
    out = []
    for i in range(1, n + 1):
        first_removed = n - i if i < n else n  # 1-based; pair is (r, r % n + 1)
        start = (first_removed + 1) % n  # 0-based position after the pair
        out.append(tuple((start + k) % n for k in range(n - 2)))
    return out


@dataclass(frozen=True)
class PalindromicVector:
    u: np.ndarray

    @property
    def palindrome_residual(self) -> float:
        return float(np.max(np.abs(self.u - self.u[::-1])))


def palindromic_u(A, sets: Sequence[Sequence[int]] | None = None, tol: TolerancePolicy = DEFAULT_TOL) -> PalindromicVector:
    """Positive palindromic kernel vector shared by the submatrices ``A[I(j), I(j)]``."""
    a = as_array(A)
    n = a.shape[0]
    if sets is None:
        sets = index_sets(n)
    basis = kernel_basis(a[np.ix_(sets[0], sets[0])], tol)
    if len(basis) != 1:
        raise ConstructionError(f"kernel of A[I(1)] has dimension {len(basis)}, expected 1")
    u = basis[0]
    if u.sum() < 0:
        u = -u
    u = u / u.sum()
    if np.any(u <= 10 * tol.zero_tol):
        raise ConstructionError("kernel vector is not strictly positive")
    if np.max(np.abs(u - u[::-1])) > PALINDROME_TOL:
        raise ConstructionError("kernel vector is not palindromic")
    scale = float(np.linalg.norm(a, 2))
    for j, S in enumerate(sets):
        r = a[np.ix_(S, S)] @ u
        if np.max(np.abs(r)) > 10 * tol.zero_tol * scale:
            raise ConstructionError(f"u does not lie in the kernel of A[I({j + 1})]")
    u.setflags(write=False)
    return PalindromicVector(u)


def circulant_minimal_zeros(
    n: int, tol: TolerancePolicy = DEFAULT_TOL, *, cross_check: bool = True
) -> MinimalZeroCatalog:
    """Catalog of the ``n`` circulant zeros, in the order ``j = 1..n`` of ``I(j)``.

    With ``cross_check`` the catalog is compared against a full support
    enumeration and a :class:`ConstructionError` is raised on mismatch.
    """
    A, _ = build_circulant(n)
    sets = index_sets(n)
    u = palindromic_u(A, sets, tol).u
    zeros = []
    for S in sets:
        x = np.zeros(n)
        x[list(S)] = u
        zeros.append(NormalizedZero.from_vector(x, tol.zero_tol))
    catalog = MinimalZeroCatalog(A, tuple(zeros), True, ())
    if cross_check:
        found = enumerate_minimal_zeros(A, tol)
        if not found.finite:
            raise ConstructionError("enumeration reports zeros beyond the minimal ones")
        by_support = {z.support: z for z in found.zeros}
        if len(found) != n or any(not (z.support in by_support and z.close_to(by_support[z.support])) for z in zeros):
            raise ConstructionError("constructed zeros do not match the enumerated catalog")
    return catalog


# -- lift ----------------------------------------------------------------------

def lift_matrix(A, a_star: Sequence[float]) -> SymMatrix:
    """``[[A, A a], [a^T A, a^T A a]]`` for a nonnegative vector ``a``."""
    a = as_array(A)
    v = np.asarray(a_star, dtype=float)
    if v.shape != (a.shape[0],) or np.any(v < 0):
        raise LiftError("lift vector must be nonnegative with length equal to the order")
    av = a @ v
    n = a.shape[0]
    b = np.empty((n + 1, n + 1))
    b[:n, :n] = a
    b[:n, n] = av
    b[n, :n] = av
    b[n, n] = v @ av
    return SymMatrix(b)


@dataclass(frozen=True)
class LiftResult:
    base: SymMatrix
    base_catalog: MinimalZeroCatalog
    index_set: tuple[int, ...]
    lifted: SymMatrix
    e_star: np.ndarray
    J0: tuple[int, ...]
    sigma: dict[int, float]
    mu: dict[int, float]
    lifted_catalog: MinimalZeroCatalog = field(repr=False)

    @property
    def tau_bar_index(self) -> dict[int, int]:
        """Base zero ``j`` -> position of ``(tau_j; 0)`` in the lifted catalog."""
        return {j: j for j in range(len(self.base_catalog))}

    @property
    def y_bar_index(self) -> dict[int, int]:
        """``j`` in ``J0`` -> position of the second lifted zero ``y_j``."""
        p = len(self.base_catalog)
        return {j: p + k for k, j in enumerate(self.J0)}

    def expected_edges(self) -> set[tuple[int, int]]:
        yb = self.y_bar_index
        return {(j, yb[j]) for j in self.J0}

    def to_json(self) -> dict:
        return {
            "I": [i + 1 for i in self.index_set],
            "J0": [j + 1 for j in self.J0],
            "sigma": {str(j + 1): self.sigma[j] for j in self.J0},
            "mu": {str(j + 1): self.mu[j] for j in self.J0},
            "B": format_matrix(self.lifted),
            "lifted_zeros": self.lifted_catalog.to_json(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def build_lift(
    A, catalog: MinimalZeroCatalog, I: Sequence[int], tol: TolerancePolicy = DEFAULT_TOL
) -> LiftResult:
    """Lift ``A`` to ``B(A, I)`` of order ``n + 1`` together with its minimal zeros.

    ``I`` is a nonempty 0-based index set.  The lifted catalog lists
    ``(tau_j; 0)`` for every base zero followed by
    ``(tau_j - sigma_j e*; sigma_j) / mu_j`` for ``j`` in ``J0``, where ``J0``
    collects the zeros whose support contains ``I``.
    """
    M = A if isinstance(A, SymMatrix) else SymMatrix(A)
    n = M.order
    I = tuple(sorted({int(i) for i in I}))
    if not I:
        raise LiftError("index set I must be nonempty")
    if I[0] < 0 or I[-1] >= n:
        raise LiftError(f"index set {[i + 1 for i in I]} out of range for order {n}")
    if not catalog.finite:
        raise LiftError("base catalog must be complete with finitely many zeros")
    if catalog.matrix != M:
        raise LiftError("catalog belongs to a different matrix")
    e_star = np.zeros(n)
    e_star[list(I)] = 1.0
    B = lift_matrix(M, e_star)

    J0 = tuple(j for j, z in enumerate(catalog.zeros) if set(I) <= set(z.support))
    sigma, mu = {}, {}
    lifted = [NormalizedZero.from_vector(np.append(z.vec, 0.0), tol.zero_tol) for z in catalog.zeros]
    for j in J0:
        tau = catalog[j].vec
        s = float(min(tau[i] for i in I))
        m = 1.0 - s * (len(I) - 1)
        if s <= tol.zero_tol or m <= tol.zero_tol:
            raise LiftError(f"lift degenerates at zero {j + 1}: sigma={s}, mu={m}")
        sigma[j], mu[j] = s, m
        y = np.append(tau - s * e_star, s) / m
        lifted.append(NormalizedZero.from_vector(y, tol.zero_tol))
    for k, z in enumerate(lifted):
        if not verify_zero(B, z, tol):
            raise ConstructionError(f"lifted vector {k + 1} is not a zero of B")
    lifted_catalog = MinimalZeroCatalog(B, tuple(lifted), True, ())
    return LiftResult(M, catalog, I, B, e_star, J0, sigma, mu, lifted_catalog)


def bracket_form(lift: LiftResult, z) -> float:
    """``(t + t0 e*)^T A (t + t0 e*)`` for ``z = (t; t0)``."""
    z = np.asarray(z, dtype=float)
    w = z[:-1] + z[-1] * lift.e_star
    return float(w @ lift.base.entries @ w)


@dataclass(frozen=True)
class LiftHypotheses:
    finite_zero_set: bool
    support_cover: bool
    base_extreme: bool
    j0_support_cover: bool
    j0_m_cover: bool

    @property
    def all_hold(self) -> bool:
        return self.finite_zero_set and self.support_cover and self.base_extreme and self.j0_support_cover

    def to_json(self) -> dict:
        return {
            "a_finite_zero_set": self.finite_zero_set,
            "b_support_cover": self.support_cover,
            "c_base_extreme": self.base_extreme,
            "d_j0_support_cover": self.j0_support_cover,
            "j0_m_cover": self.j0_m_cover,
        }


def check_lift_hypotheses(
    lift: LiftResult | None,
    catalog: MinimalZeroCatalog,
    tol: TolerancePolicy = DEFAULT_TOL,
    *,
    I: Sequence[int] | None = None,
) -> LiftHypotheses:
    """Evaluate the sufficient conditions for ``B(A, I)`` to be extreme and exposed.

    a) the base zero set is finite and fully enumerated; b)
    ``supp(tau) ∪ supp(A tau) = [n]`` for every zero; c) ``A`` is extreme;
    d) the supports of the zeros in ``J0`` cover ``[n]``.  The weaker
    extremality condition (the sets ``M(j)`` over ``J0`` cover ``[n]``) is
    reported alongside.  ``lift`` may be ``None`` when it could not be
    built; ``I`` is then required.
    """
    from .faces import certify_extreme

    A = catalog.matrix
    n = A.order
    if lift is not None:
        I = lift.index_set
    full = set(range(n))
    a_ok = catalog.finite and len(catalog) > 0
    if len(catalog) == 0:
        return LiftHypotheses(False, False, False, False, False)
    b_ok = all(
        set(z.support) | (full - set(m_set(catalog, j, tol))) == full for j, z in enumerate(catalog.zeros)
    )
    try:
        c_ok = catalog.complete and bool(certify_extreme(A, catalog, tol).extreme)
    except (ValueError, RuntimeError):
        c_ok = False
    J0 = [j for j, z in enumerate(catalog.zeros) if set(I) <= set(z.support)]
    d_ok = set().union(*(catalog[j].support for j in J0)) == full if J0 else False
    m_ok = set().union(*(m_set(catalog, j, tol) for j in J0)) == full if J0 else False
    return LiftHypotheses(a_ok, b_ok, c_ok, d_ok, m_ok)


@dataclass
class ZeroSetShapeReport:
    ok: bool
    lifted_minimal_count: int
    problems: list[str]

    def __bool__(self):
        return self.ok


def verify_zeroset_shape(
    lift: LiftResult,
    tol: TolerancePolicy = DEFAULT_TOL,
    *,
    n_random_pairs: int = 50,
    seed: int = 0,
) -> ZeroSetShapeReport:
    """Check the lifted zero set against an independent enumeration of ``B``.

    The enumerated minimal zeros of ``B`` must be exactly the lifted catalog,
    the graph of ``B`` must join each ``(tau_j; 0)`` to its partner ``y_j``
    and nothing else, edge midpoints must be zeros, and midpoints of
    non-adjacent pairs must not be.
    """
    problems: list[str] = []
    B = lift.lifted
    found = enumerate_minimal_zeros(B, tol)
    expected = lift.lifted_catalog
    if not found.complete:
        problems.append("enumeration of B is incomplete: " + "; ".join(found.anomalies))
    by_support = {z.support: z for z in found.zeros}
    if len(found) != len(expected):
        problems.append(f"B has {len(found)} minimal zeros, expected {len(expected)}")
    for k, z in enumerate(expected.zeros):
        other = by_support.get(z.support)
        if other is None or not z.close_to(other):
            problems.append(f"lifted zero {k + 1} with support {[i + 1 for i in z.support]} not found")

    graph = build_graph(expected, tol)
    if set(graph.edges) != lift.expected_edges():
        problems.append(f"edges {sorted(graph.edges)} differ from expected {sorted(lift.expected_edges())}")
    X = expected.vectors()
    for i, j in graph.edges:
        if not verify_zero(B, 0.5 * (X[i] + X[j]), tol):
            problems.append(f"midpoint of edge ({i + 1}, {j + 1}) is not a zero")
    non_adjacent = [
        (i, j) for i in range(len(expected)) for j in range(i + 1, len(expected)) if (i, j) not in set(graph.edges)
    ]
    if non_adjacent:
        rng = np.random.default_rng(seed)
        thr = 10 * tol.zero_tol
        for idx in rng.integers(len(non_adjacent), size=n_random_pairs):
            i, j = non_adjacent[int(idx)]
            m = 0.5 * (X[i] + X[j])
            if float(m @ B.entries @ m) <= thr:
                problems.append(f"midpoint of non-adjacent pair ({i + 1}, {j + 1}) is a zero")
                break
    return ZeroSetShapeReport(not problems, len(found), problems)

