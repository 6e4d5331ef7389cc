from __future__ import annotations

import numpy as np
import pytest

from hamembed.codes import Scheme, SchemeError, make_code
from hamembed.embeddings import StructureError, EmbeddingArtifact, embed_matrix, validate_embedding
from hamembed.linalg import SparseHermitian, leakage_norm, restrict

from conftest import random_hermitian

ALL_SCHEMES = list(Scheme)
PENALTY_SCHEMES = [Scheme.UNARY, Scheme.ANTIFERROMAGNETIC, Scheme.CIRCULANT_UNARY,
                   Scheme.CIRCULANT_ANTIFERROMAGNETIC, Scheme.ONE_HOT]


def chain_laplacian(n: int) -> SparseHermitian:
    H = SparseHermitian(n)
    for j in range(n - 1):
        H.set(j, j + 1, 1.0)
        H.add(j, j, -1.0)
        H.add(j + 1, j + 1, -1.0)
    return H


def cycle_matrix(n: int, a: float = 1.0, b: float = 0.0) -> SparseHermitian:
    H = SparseHermitian(n)
    for j in range(n):
        H.set(j, (j + 1) % n, a)
    for j in range(n):
        H.set(j, j, b)
    return H


def restriction_error(art: EmbeddingArtifact, A: SparseHermitian) -> float:
    return float(np.abs(art.logical_matrix().to_dense() - A.to_dense()).max())


def admissible_matrix(rng, scheme: Scheme, n: int) -> SparseHermitian:
    if scheme.is_circulant:
        return cycle_matrix(n, rng.standard_normal(), rng.standard_normal())
    if scheme.is_one_hot:
        return SparseHermitian.from_dense(random_hermitian(rng, n))
    return SparseHermitian.from_dense(random_hermitian(rng, n, band=2))


def test_chain_unary_matches_table():
    # Q = -n1 + n4 + sum X_j, H_pen = -sum ZZ + Z1 - Z4 for the 5-node chain
    art = embed_matrix(chain_laplacian(5), Scheme.UNARY)
    q = art.q_op
    assert q.coefficient("IIIX") == pytest.approx(1.0)
    assert q.coefficient("IIXI") == pytest.approx(1.0)
    assert q.coefficient("IXII") == pytest.approx(1.0)
    assert q.coefficient("XIII") == pytest.approx(1.0)
    # -n1 + n4 = -(I - Z1)/2 + (I - Z4)/2 = Z1/2 - Z4/2
    assert q.coefficient("IIIZ") == pytest.approx(0.5)
    assert q.coefficient("ZIII") == pytest.approx(-0.5)
    assert art.offset == pytest.approx(-1.0)
    pen = art.h_pen
    assert pen.coefficient("IIZZ") == pytest.approx(-1.0)
    assert pen.coefficient("IZZI") == pytest.approx(-1.0)
    assert pen.coefficient("ZZII") == pytest.approx(-1.0)
    assert pen.coefficient("IIIZ") == pytest.approx(1.0)
    assert pen.coefficient("ZIII") == pytest.approx(-1.0)
    assert restriction_error(art, chain_laplacian(5)) < 1e-12


def test_chain_antiferro_matches_table():
    # Q = -n1 - n4 + sum X_j per the tridiagonal embedding table
    art = embed_matrix(chain_laplacian(5), Scheme.ANTIFERROMAGNETIC)
    q = art.q_op
    assert q.coefficient("IIIZ") == pytest.approx(0.5)
    assert q.coefficient("ZIII") == pytest.approx(0.5)
    for w in ["IIIX", "IIXI", "IXII", "XIII"]:
        assert q.coefficient(w) == pytest.approx(1.0)
    assert restriction_error(art, chain_laplacian(5)) < 1e-12


def test_chain_one_hot_matches_table():
    art = embed_matrix(chain_laplacian(5), Scheme.ONE_HOT)
    q = art.q_op
    for j in range(4):
        w = ["I"] * 5
        w[4 - j], w[3 - j] = "X", "X"
        assert q.coefficient("".join(w)) == pytest.approx(1.0)
    # diagonal -n1 - n5 - 2(n2+n3+n4): Z coefficients are +a/2
    assert q.coefficient("IIIIZ") == pytest.approx(0.5)
    assert q.coefficient("ZIIII") == pytest.approx(0.5)
    assert q.coefficient("IIZII") == pytest.approx(1.0)
    assert restriction_error(art, chain_laplacian(5)) < 1e-12


def test_chain_penalty_free_one_hot_matches_table():
    art = embed_matrix(chain_laplacian(5), Scheme.PENALTY_FREE_ONE_HOT)
    q = art.q_op
    for j in range(4):
        wx = ["I"] * 5
        wx[4 - j], wx[3 - j] = "X", "X"
        wy = ["I"] * 5
        wy[4 - j], wy[3 - j] = "Y", "Y"
        assert q.coefficient("".join(wx)) == pytest.approx(0.5)
        assert q.coefficient("".join(wy)) == pytest.approx(0.5)
    assert len(art.h_pen) == 0 and art.penalty_free


def test_diagonal_1x1_one_hot():
    A = SparseHermitian(1)
    A.set(0, 0, 3.0)
    art = embed_matrix(A, Scheme.ONE_HOT)
    assert art.offset == pytest.approx(3.0)
    assert len(art.q_op) == 0
    assert restriction_error(art, A) < 1e-12


def test_glued_trees_term_count():
    from hamembed.graphs import adjacency, build_graph

    G = build_graph("glued-trees", h=2)
    art = embed_matrix(adjacency(G), Scheme.PENALTY_FREE_ONE_HOT)
    assert art.qubits == 14
    xx = [s for _, s in art.q_op.terms if set(s.letter(k) for k in s.sites) == {"X"}]
    yy = [s for _, s in art.q_op.terms if set(s.letter(k) for k in s.sites) == {"Y"}]
    assert len(xx) == 20 and len(yy) == 20
    assert all(s.weight == 2 for _, s in art.q_op.terms)
    # invariant subspace: leakage block exactly zero
    assert art.leakage(0.0) == 0.0


@pytest.mark.parametrize("scheme", ALL_SCHEMES)
def test_restriction_exact_on_random_admissible(rng, scheme):
    sizes = (4, 6, 8) if scheme.is_circulant else (2, 3, 5, 8)
    for n in sizes:
        for _ in range(6):
            A = admissible_matrix(rng, scheme, n)
            art = embed_matrix(A, scheme)
            assert restriction_error(art, A) < 1e-12


@pytest.mark.parametrize("scheme", PENALTY_SCHEMES)
def test_ground_space_degeneracy(rng, scheme):
    sizes = (4, 6, 8) if scheme.is_circulant else (3, 5, 8)
    for n in sizes:
        A = admissible_matrix(rng, scheme, n)
        art = embed_matrix(A, scheme)
        rep = validate_embedding(art, A, g=4.0)
        assert rep.ground_space_ok and rep.ground_is_minimal


def test_one_hot_sum_z_not_minimal(rng):
    A = SparseHermitian.from_dense(random_hermitian(rng, 4))
    art = embed_matrix(A, Scheme.ONE_HOT, one_hot_form="sum_z")
    rep = validate_embedding(art, A, g=4.0)
    assert rep.ground_space_ok and not rep.ground_is_minimal


def test_max_weight_matches_table(rng):
    # band inputs: artifact weight max(d, 2); one-hot: exactly 2
    for d in (1, 2, 3):
        A = SparseHermitian.from_dense(random_hermitian(rng, 6, band=d))
        for scheme in (Scheme.UNARY, Scheme.ANTIFERROMAGNETIC):
            art = embed_matrix(A, scheme)
            full = max(art.q_op.max_weight, art.h_pen.max_weight)
            assert full == max(d, 2)
    A = SparseHermitian.from_dense(random_hermitian(rng, 6))
    for scheme in (Scheme.ONE_HOT, Scheme.PENALTY_FREE_ONE_HOT):
        art = embed_matrix(A, scheme)
        assert max(art.q_op.max_weight, art.h_pen.max_weight) == 2
    for n in (6, 8):
        art = embed_matrix(cycle_matrix(n), Scheme.CIRCULANT_UNARY)
        assert max(art.q_op.max_weight, art.h_pen.max_weight) == 2


def test_circulant_structure_rejected():
    with pytest.raises(StructureError):
        embed_matrix(chain_laplacian(6), Scheme.CIRCULANT_UNARY)  # not circulant
    with pytest.raises(SchemeError):
        embed_matrix(chain_laplacian(5), Scheme.CIRCULANT_UNARY)  # odd n


def test_validate_flags_wrong_matrix(rng):
    A = chain_laplacian(5)
    art = embed_matrix(A, Scheme.UNARY)
    wrong = chain_laplacian(5)
    wrong.set(0, 0, 5.0)
    rep = validate_embedding(art, wrong, g=8.0)
    assert rep.restriction_error > 1.0


def test_unary_leakage_positive_penalty_free_zero():
    A = chain_laplacian(5)
    art = embed_matrix(A, Scheme.UNARY)
    rep = validate_embedding(art, A, g=8.0)
    assert rep.leakage > 0
    art2 = embed_matrix(A, Scheme.PENALTY_FREE_ONE_HOT)
    rep2 = validate_embedding(art2, A, g=0.0)
    assert rep2.leakage == 0.0


def test_artifact_json_round_trip():
    art = embed_matrix(chain_laplacian(4), Scheme.UNARY)
    art2 = EmbeddingArtifact.from_json(art.to_json())
    assert art2.code == art.code
    assert art2.q_op.terms == art.q_op.terms
    assert art2.offset == art.offset
