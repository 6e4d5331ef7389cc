from __future__ import annotations

import numpy as np
import pytest

PAULI_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_oracle(word: str) -> np.ndarray:
    """Independent Kronecker-product evaluation of a Pauli word.

    Site 0 is the rightmost character, i.e. the last kron factor.
    """
    out = np.array([[1.0 + 0j]])
    for ch in word:
        out = np.kron(out, PAULI_MATS[ch])
    return out


def pauli_sum_oracle(terms, qubits: int) -> np.ndarray:
    dim = 2**qubits
    out = np.zeros((dim, dim), dtype=complex)
    for coeff, word in terms:
        out += coeff * kron_oracle(word)
    return out


def random_hermitian(rng: np.random.Generator, n: int, band: int | None = None,
                     real: bool = False) -> np.ndarray:
    A = rng.standard_normal((n, n))
    if not real:
        A = A + 1j * rng.standard_normal((n, n))
    A = (A + A.conj().T) / 2
    if band is not None:
        for r in range(n):
            for c in range(n):
                if abs(r - c) > band:
                    A[r, c] = 0.0
    return A


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
