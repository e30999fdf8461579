"""End-to-end constructions behind the bounds report.

Odd ``n``: the circulant matrix, its zeros, exposedness and face dimension.
Even ``n``: the circulant of order ``n - 1`` lifted with ``I = [n - 5]``
(the first ``n - 5`` indices, i.e. ``[m - 4]`` for the base order ``m``).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .constructions import (
    LiftHypotheses,
    LiftResult,
    build_lift,
    check_lift_hypotheses,
    circulant_minimal_zeros,
)
from .faces import FaceDescriptor, RayCertificate, certify_exposed, face_dimension, support_criterion
from .graph import CliqueCover, zero_graph
from .linalg import DEFAULT_TOL, TolerancePolicy
from .zeros import MinimalZeroCatalog

MIN_ORDER = 5
MAX_ORDER = 12


@dataclass(frozen=True)
class PipelineResult:
    n: int
    catalog: MinimalZeroCatalog
    cover: CliqueCover
    certificate: RayCertificate
    face: FaceDescriptor
    support_criterion: bool
    lift: LiftResult | None = None
    hypotheses: LiftHypotheses | None = None


def odd_pipeline(n: int, tol: TolerancePolicy = DEFAULT_TOL) -> PipelineResult:
    catalog = circulant_minimal_zeros(n, tol)
    cover = zero_graph(catalog, tol)
    cert = certify_exposed(catalog.matrix, catalog, cover, tol)
    face = face_dimension(catalog, cover, tol, maximal=bool(cert.exposed))
    return PipelineResult(n, catalog, cover, cert, face, support_criterion(catalog.matrix, catalog, tol))


def even_pipeline(
    n_bar: int, tol: TolerancePolicy = DEFAULT_TOL, index_set: Sequence[int] | None = None
) -> PipelineResult:
    """Lift the circulant of order ``n_bar - 1``; ``index_set`` is 0-based."""
    n = n_bar - 1
    base = circulant_minimal_zeros(n, tol)
    I = tuple(range(n - 4)) if index_set is None else tuple(index_set)
    lift = build_lift(base.matrix, base, I, tol)
    hyp = check_lift_hypotheses(lift, base, tol)
    catalog = lift.lifted_catalog
    cover = zero_graph(catalog, tol)
    cert = certify_exposed(lift.lifted, catalog, cover, tol)
    face = face_dimension(catalog, cover, tol, maximal=bool(cert.exposed))
    return PipelineResult(
        n_bar, catalog, cover, cert, face, support_criterion(lift.lifted, catalog, tol), lift, hyp
    )


def prior_upper(n: int) -> int | None:
    """Previously published upper estimate ``(n^2 - 5n + 8) / 2``, stated for ``n >= 6``."""
    return (n * n - 5 * n + 8) // 2 if n >= 6 else None


@dataclass(frozen=True)
class BoundsReport:
    n: int
    parity: str
    lower_bound: int
    upper_bound_constructed: int
    prior_upper: int | None
    construction: dict
    certificates: dict

    @property
    def improves_prior(self) -> bool | None:
        if self.prior_upper is None:
            return None
        return self.upper_bound_constructed < self.prior_upper

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "parity": self.parity,
            "lower_bound": self.lower_bound,
            "upper_bound_constructed": self.upper_bound_constructed,
            "prior_upper": self.prior_upper,
            "smaller_upper": _smaller(self),
            "construction": self.construction,
            "certificates": self.certificates,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def _smaller(r: BoundsReport) -> str:
    if r.prior_upper is None:
        return "constructed"
    if r.upper_bound_constructed < r.prior_upper:
        return "constructed"
    if r.upper_bound_constructed > r.prior_upper:
        return "prior"
    return "equal"


def bounds_report(
    n: int, tol: TolerancePolicy = DEFAULT_TOL, index_set: Sequence[int] | None = None
) -> BoundsReport:
    if not MIN_ORDER <= n <= MAX_ORDER:
        raise ValueError(f"bounds are computed for {MIN_ORDER} <= n <= {MAX_ORDER}, got {n}")
    if n % 2:
        if index_set is not None:
            raise ValueError("--index-set applies to even n only")
        res = odd_pipeline(n, tol)
        construction = {"kind": "circulant", "order": n}
    else:
        res = even_pipeline(n, tol, index_set)
        construction = {
            "kind": "lift",
            "base_order": n - 1,
            "I": [i + 1 for i in res.lift.index_set],
            "J0": [j + 1 for j in res.lift.J0],
            "hypotheses": res.hypotheses.to_json(),
        }
    cert = res.certificate
    return BoundsReport(
        n=n,
        parity="odd" if n % 2 else "even",
        lower_bound=n,
        upper_bound_constructed=res.face.dimension,
        prior_upper=prior_upper(n),
        construction=construction,
        certificates={
            "extreme": cert.extreme,
            "exposed": cert.exposed,
            "method": cert.method.value if cert.method else None,
            "support_criterion": res.support_criterion,
            "minimal_zeros": len(res.catalog),
            "maximal_face": res.face.maximal,
        },
    )


def format_bounds_table(reports: Sequence[BoundsReport]) -> str:
    """Tab-delimited table, one row per order."""
    header = ["n", "parity", "lower", "constructed", "prior_upper", "smaller", "construction", "exposed"]
    lines = ["\t".join(header)]
    for r in reports:
        c = r.construction
        how = "circulant" if c["kind"] == "circulant" else "lift(I=" + ",".join(map(str, c["I"])) + ")"
        lines.append(
            "\t".join(
                [
                    str(r.n),
                    r.parity,
                    str(r.lower_bound),
                    str(r.upper_bound_constructed),
                    "-" if r.prior_upper is None else str(r.prior_upper),
                    _smaller(r),
                    how,
                    str(r.certificates["exposed"]).lower(),
                ]
            )
        )
    return "\n".join(lines) + "\n"
