from __future__ import annotations

import numpy as np
import pytest

from hamembed.paulis import PauliString, PauliSum, decompose_dense, number_operator

from conftest import kron_oracle, pauli_sum_oracle, random_hermitian


def test_letters_round_trip():
    for word in ["I", "X", "ZZY", "IXYZ", "YIIX"]:
        s = PauliString.from_letters(word)
        assert s.letters == word
        assert s.qubits == len(word)


def test_weight_and_sites():
    s = PauliString.from_letters("ZIXY")
    assert s.weight == 3
    assert s.n_y == 1
    assert s.sites == (0, 1, 3)  # Y at 0, X at 1, Z at 3


def test_single_letter_matrices_match_oracle():
    for word in ["X", "Y", "Z", "I"]:
        s = PauliSum(1, [(1.0, word)])
        np.testing.assert_allclose(s.to_dense(), kron_oracle(word), atol=0)


def test_zz_diagonal():
    s = PauliSum(2, [(1.0, "ZZ")])
    np.testing.assert_allclose(s.to_dense(), np.diag([1, -1, -1, 1]).astype(complex))


def test_random_sums_match_kron_oracle(rng):
    q = 3
    words = ["XYZ", "IZX", "YYI", "ZII"]
    coeffs = rng.standard_normal(len(words))
    P = PauliSum(q, list(zip(coeffs, words)))
    np.testing.assert_allclose(
        P.to_dense(), pauli_sum_oracle(zip(coeffs, words), q), atol=1e-14
    )


def test_apply_matches_dense(rng):
    q = 4
    P = PauliSum(q)
    for _ in range(6):
        word = "".join(rng.choice(list("IXYZ"), q))
        P.add_term(rng.standard_normal(), word)
    v = rng.standard_normal(2**q) + 1j * rng.standard_normal(2**q)
    np.testing.assert_allclose(P.apply(v), P.to_dense() @ v, atol=1e-12)


def test_duplicate_terms_merge():
    P = PauliSum(2, [(1.0, "XZ"), (2.5, "XZ")])
    assert len(P) == 1
    assert P.coefficient("XZ") == pytest.approx(3.5)


def test_complex_coefficient_rejected():
    with pytest.raises(ValueError):
        PauliSum(1, [(1j, "X")])


def test_tensor_matches_kron(rng):
    A = PauliSum(2, [(0.7, "XI"), (-1.2, "ZY")])
    B = PauliSum(1, [(2.0, "X"), (0.5, "Z")])
    np.testing.assert_allclose(
        A.tensor(B).to_dense(), np.kron(A.to_dense(), B.to_dense()), atol=1e-14
    )


def test_shifted_embeds_on_high_qubits():
    B = PauliSum(1, [(1.0, "X")])
    shifted = B.shifted(2, 3)
    np.testing.assert_allclose(shifted.to_dense(), kron_oracle("XII"), atol=0)


def test_number_operator():
    n0 = number_operator(1, 0)
    np.testing.assert_allclose(n0.to_dense(), np.diag([0.0, 1.0]).astype(complex))


def test_diagonal_fast_path(rng):
    P = PauliSum(3, [(1.5, "ZIZ"), (-0.5, "IZI"), (2.0, "III")])
    np.testing.assert_allclose(np.diag(P.to_dense()).real, P.diagonal())
    with pytest.raises(ValueError):
        PauliSum(2, [(1.0, "XI")]).diagonal()


def test_decompose_round_trip_random(rng):
    for q in range(1, 6):
        A = random_hermitian(rng, 2**q)
        P = decompose_dense(A)
        np.testing.assert_allclose(P.to_dense(), A, atol=1e-10)


def test_decompose_identity_and_zero():
    P = decompose_dense(np.zeros((2, 2)))
    assert len(P.normalize()) == 0
    P = decompose_dense(np.diag([1.0, -1.0]).astype(complex))
    assert len(P) == 1
    assert P.coefficient("Z") == pytest.approx(1.0)
