import numpy as np
import pytest

from copface.faces import (
    ExposednessMethod,
    IncompleteCatalogError,
    NotExposedError,
    _cone_probe,
    certify_exposed,
    certify_extreme,
    face_dimension,
    maximal_face_of,
    support_criterion,
)
from copface.graph import zero_graph
from copface.linalg import DEFAULT_TOL, SymMatrix, smat, svec
from copface.zeros import MinimalZeroCatalog, enumerate_minimal_zeros

from oracles import HORN, sampled_zero_rank


def hulls(cover):
    X = cover.catalog.vectors()
    return [X[list(c.members)] for c in cover.cliques]


@pytest.mark.parametrize("n", [5, 7, 9])
def test_circulant_face_dimension(n, circulant):
    cat = circulant(n)
    face = face_dimension(cat)
    assert face.dimension == n
    assert face.rank.gap >= 1e3


@pytest.mark.parametrize("n,I,expected", [(5, [0], 9), (7, [0, 1, 2], 11), (7, [0], 13)])
def test_lift_face_dimension(n, I, expected, lifted):
    lift, cover = lifted(n, I)
    assert face_dimension(lift.lifted_catalog, cover).dimension == expected


@pytest.mark.parametrize("kind,n", [("odd", 5), ("odd", 7), ("lift", 5), ("lift", 7), ("horn", 5)])
def test_face_dimension_matches_sampled_oracle(kind, n, circulant, lifted):
    if kind == "odd":
        cover = zero_graph(circulant(n))
    elif kind == "lift":
        cover = lifted(n, range(n - 4))[1]
    else:
        cover = zero_graph(enumerate_minimal_zeros(HORN))
    got = face_dimension(cover.catalog, cover).dimension
    assert got == sampled_zero_rank(hulls(cover), samples=6, seed=n)


def test_identity_is_neither_extreme_nor_exposed():
    cat = enumerate_minimal_zeros(np.eye(2))
    ext = certify_extreme(np.eye(2), cat)
    assert not ext.extreme and ext.extreme_nullity == 3
    cert = certify_exposed(np.eye(2), cat)
    assert cert.exposed is False
    assert face_dimension(cat).dimension == 0


def test_rank_one_diagonal_is_extreme_but_not_exposed():
    A = np.diag([0.0, 1.0])
    cat = enumerate_minimal_zeros(A)
    assert not support_criterion(A, cat)
    assert certify_extreme(A, cat).extreme
    cert = certify_exposed(A, cat)
    assert cert.method is ExposednessMethod.CONE_PROBE
    assert cert.exposed is False
    with pytest.raises(NotExposedError):
        maximal_face_of(A, cat)


def test_cone_probe_detects_trivial_cone():
    basis = np.eye(2)
    a_vec = np.array([1.0, 0.0])
    ineq = np.array([[0.0, 1.0], [0.0, -1.0]])
    assert _cone_probe(basis, ineq, a_vec, DEFAULT_TOL) is True
    assert _cone_probe(basis, ineq[:1], a_vec, DEFAULT_TOL) is False


def test_horn_matrix_is_extreme():
    cat = enumerate_minimal_zeros(HORN)
    assert cat.complete
    assert certify_extreme(HORN, cat).extreme


def test_incomplete_catalog_is_rejected(circulant):
    cat = circulant(5)
    broken = MinimalZeroCatalog(cat.matrix, cat.zeros, complete=False)
    with pytest.raises(IncompleteCatalogError):
        face_dimension(broken)
    with pytest.raises(IncompleteCatalogError):
        certify_exposed(broken.matrix, broken)


def test_certificate_invariant_under_scaling_and_permutation(circulant):
    cat = circulant(7)
    A = cat.matrix.entries
    P = np.random.default_rng(5).permutation(7)
    for B in (3.5 * A, A[np.ix_(P, P)]):
        c2 = enumerate_minimal_zeros(B)
        cert = certify_exposed(B, c2)
        assert cert.extreme and cert.exposed
        assert face_dimension(c2).dimension == 7


@pytest.mark.parametrize("n", [5, 7, 9])
def test_nullspace_reconstructs_matrix(n, circulant):
    cat = circulant(n)
    cert = certify_exposed(cat.matrix, cat)
    assert cert.method is ExposednessMethod.EQUALITY_ONLY and cert.equality_nullity == 1
    v = cert.nullspace_rep[:, 0]
    a = svec(cat.matrix)
    R = smat(v * (v @ a) / (v @ v))
    assert np.max(np.abs(R - cat.matrix.entries)) <= 1e-7 * np.max(np.abs(cat.matrix.entries))
    assert cert.residual <= 1e-10


@pytest.mark.parametrize("kind,n", [("odd", 5), ("odd", 7), ("odd", 9), ("odd", 11), ("lift", 5), ("lift", 7), ("lift", 9)])
def test_certified_maximal_faces_respect_floor(kind, n, circulant, lifted):
    if kind == "odd":
        cat = circulant(n)
        A = cat.matrix
    else:
        lift, _ = lifted(n, range(n - 4))
        cat, A = lift.lifted_catalog, lift.lifted
    face = maximal_face_of(A, cat)
    assert face.maximal
    assert face.dimension >= A.order


def test_face_json_shape(circulant):
    face = face_dimension(circulant(5), maximal=True)
    data = face.to_json()
    assert data["dimension"] == 5 and data["maximal"] is True
    assert data["generator_pairs"][0] == [[1, 1]]


def test_certificate_json_shape(circulant):
    cat = circulant(5)
    data = certify_exposed(SymMatrix(cat.matrix.entries), cat).to_json()
    assert data["extreme"] is True and data["exposed"] is True
    assert data["method"] == "EqualityOnly"
    assert data["equality_nullity"] == 1 and data["extreme_nullity"] == 1
