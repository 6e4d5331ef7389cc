"""Hamiltonian embeddings of sparse Hermitian matrices.

Compiles structured Hermitian matrices into penalty/perturbation pairs over
six bitstring codes, composes them algebraically, simulates the embedded
dynamics with exact and product-formula evolvers, verifies leakage bounds,
and counts native-gate resources against a standard-binary baseline.
"""
from .paulis import PauliString, PauliSum, identity_sum, number_operator
from .linalg import (
    Observable,
    SparseHermitian,
    StateVector,
    evolve_exact,
    pauli_decompose,
    pauli_sum_to_matrix,
    restrict,
    spectral_norm,
)
from .codes import Code, Scheme, make_code, penalty_hamiltonian
from .embeddings import EmbeddingArtifact, embed_matrix, validate_embedding

__all__ = [
    "PauliString",
    "PauliSum",
    "identity_sum",
    "number_operator",
    "Observable",
    "SparseHermitian",
    "StateVector",
    "evolve_exact",
    "pauli_decompose",
    "pauli_sum_to_matrix",
    "restrict",
    "spectral_norm",
    "Code",
    "Scheme",
    "make_code",
    "penalty_hamiltonian",
    "EmbeddingArtifact",
    "embed_matrix",
    "validate_embedding",
]

__version__ = "0.1.0"
