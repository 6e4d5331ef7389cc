"""Sparse Hermitian matrices, statevectors, and the exact-evolution oracle.

Every other module tests against the dense/Krylov propagator defined here.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .paulis import PauliString, PauliSum, decompose_dense

DENSE_EVOLVE_LIMIT = 4096  # above this, switch to Krylov expm-times-vector
PAULI_MATRIX_LIMIT = 24    # qubits
PAULI_DECOMPOSE_LIMIT = 12


class CapacityError(ValueError):
    """Requested dimension exceeds a documented guard."""


class ShapeError(ValueError):
    """Incompatible or malformed dimensions."""


class SparseHermitian:
    """Coordinate-format Hermitian matrix; upper triangle plus diagonal stored."""

    __slots__ = ("dim", "_entries", "_eig")

    def __init__(self, dim: int, entries=None):
        if dim < 1:
            raise ShapeError("dimension must be >= 1")
        self.dim = dim
        self._entries: dict[tuple[int, int], complex] = {}
        self._eig = None
        if entries:
            for r, c, v in entries:
                self.set(r, c, v)

    def set(self, r: int, c: int, v: complex) -> None:
        if not (0 <= r < self.dim and 0 <= c < self.dim):
            raise ShapeError(f"index ({r},{c}) out of range for dim {self.dim}")
        if r > c:
            r, c, v = c, r, np.conj(v)
        if r == c and abs(complex(v).imag) > 1e-12:
            raise ShapeError("diagonal entries must be real")
        v = complex(v)
        if v == 0:
            self._entries.pop((r, c), None)
        else:
            self._entries[(r, c)] = v
        self._eig = None

    def add(self, r: int, c: int, v: complex) -> None:
        if r > c:
            r, c, v = c, r, np.conj(v)
        self.set(r, c, self._entries.get((r, c), 0.0) + v)

    def get(self, r: int, c: int) -> complex:
        if r > c:
            return np.conj(self._entries.get((c, r), 0.0))
        return self._entries.get((r, c), 0.0)

    @property
    def entries(self) -> list[tuple[int, int, complex]]:
        return [(r, c, v) for (r, c), v in sorted(self._entries.items())]

    @classmethod
    def from_dense(cls, A: np.ndarray, tol: float = 0.0) -> "SparseHermitian":
        A = np.asarray(A)
        n = A.shape[0]
        if A.shape != (n, n):
            raise ShapeError("matrix must be square")
        if not np.allclose(A, A.conj().T, atol=1e-10):
            raise ShapeError("matrix is not Hermitian")
        H = cls(n)
        rows, cols = np.nonzero(np.abs(np.triu(A)) > tol)
        for r, c in zip(rows, cols):
            H.set(int(r), int(c), complex(A[r, c]))
        return H

    @classmethod
    def diagonal(cls, values: np.ndarray) -> "SparseHermitian":
        H = cls(len(values))
        for j, v in enumerate(values):
            H.set(j, j, float(np.real(v)))
        return H

    def to_dense(self) -> np.ndarray:
        A = np.zeros((self.dim, self.dim), dtype=complex)
        for (r, c), v in self._entries.items():
            A[r, c] = v
            if r != c:
                A[c, r] = np.conj(v)
        return A

    def to_csr(self) -> sp.csr_matrix:
        rows, cols, vals = [], [], []
        for (r, c), v in self._entries.items():
            rows.append(r)
            cols.append(c)
            vals.append(v)
            if r != c:
                rows.append(c)
                cols.append(r)
                vals.append(np.conj(v))
        return sp.csr_matrix((vals, (rows, cols)), shape=(self.dim, self.dim))

    def scaled(self, alpha: float) -> "SparseHermitian":
        out = SparseHermitian(self.dim)
        for (r, c), v in self._entries.items():
            out._entries[(r, c)] = alpha * v
        return out

    def __add__(self, other: "SparseHermitian") -> "SparseHermitian":
        if other.dim != self.dim:
            raise ShapeError("dimension mismatch")
        out = SparseHermitian(self.dim)
        out._entries = dict(self._entries)
        for (r, c), v in other._entries.items():
            w = out._entries.get((r, c), 0.0) + v
            if w == 0:
                out._entries.pop((r, c), None)
            else:
                out._entries[(r, c)] = w
        return out

    def _eigh(self):
        if self._eig is None:
            self._eig = np.linalg.eigh(self.to_dense())
        return self._eig

    # -- serialization ----------------------------------------------------
    def to_json(self) -> str:
        ent = [[r, c, float(np.real(v)), float(np.imag(v))] for r, c, v in self.entries]
        return json.dumps({"dim": self.dim, "entries": ent})

    @classmethod
    def from_json(cls, text: str) -> "SparseHermitian":
        obj = json.loads(text)
        return cls(int(obj["dim"]), [(r, c, complex(re, im)) for r, c, re, im in obj["entries"]])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["row", "col", "re", "im"])
        for r, c, v in self.entries:
            w.writerow([r, c, repr(float(np.real(v))), repr(float(np.imag(v)))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SparseHermitian":
        rows = list(csv.reader(io.StringIO(text)))
        dim = 1 + max(max(int(r[0]), int(r[1])) for r in rows[1:])
        H = cls(dim)
        for r in rows[1:]:
            H.set(int(r[0]), int(r[1]), complex(float(r[2]), float(r[3])))
        return H


@dataclass
class StateVector:
    amplitudes: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        self.dim = len(self.amplitudes)

    @classmethod
    def basis(cls, dim: int, index: int) -> "StateVector":
        v = np.zeros(dim, dtype=complex)
        v[index] = 1.0
        return cls(v)

    @classmethod
    def uniform(cls, dim: int) -> "StateVector":
        return cls(np.full(dim, 1.0 / np.sqrt(dim), dtype=complex))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def overlap(self, other: "StateVector") -> complex:
        return complex(np.vdot(other.amplitudes, self.amplitudes))


@dataclass
class Observable:
    """A SparseHermitian tagged as a measurement operator."""

    matrix: SparseHermitian

    def expectation(self, psi: StateVector) -> float:
        v = psi.amplitudes
        return float(np.real(np.vdot(v, self.matrix.to_csr() @ v)))


# -- operations -----------------------------------------------------------

def pauli_sum_to_matrix(P: PauliSum) -> SparseHermitian:
    """2^q-dimensional matrix of a PauliSum via per-string bit action."""
    if P.qubits > PAULI_MATRIX_LIMIT:
        raise CapacityError(f"{P.qubits} qubits exceeds the {PAULI_MATRIX_LIMIT}-qubit guard")
    dim = 1 << P.qubits
    idx = np.arange(dim, dtype=np.uint64)
    acc: dict[tuple[int, int], complex] = {}
    for coeff, s in P.terms:
        signs = 1.0 - 2.0 * (np.bitwise_count(idx & np.uint64(s.z)) & 1)
        vals = coeff * (1j ** s.n_y) * signs
        rows = idx ^ np.uint64(s.x)
        for r, c, v in zip(rows, idx, vals):
            r, c = int(r), int(c)
            if r > c:
                continue  # the conjugate partner fills it in
            acc[(r, c)] = acc.get((r, c), 0.0) + v
    H = SparseHermitian(dim)
    for (r, c), v in acc.items():
        if v != 0:
            H.set(r, c, v)
    return H


def pauli_sum_to_csr(P: PauliSum) -> sp.csr_matrix:
    """Vectorized sparse matrix build; preferred above ~12 qubits."""
    if P.qubits > PAULI_MATRIX_LIMIT:
        raise CapacityError(f"{P.qubits} qubits exceeds the {PAULI_MATRIX_LIMIT}-qubit guard")
    dim = 1 << P.qubits
    idx = np.arange(dim, dtype=np.uint64)
    rows, cols, vals = [], [], []
    for coeff, s in P.terms:
        signs = 1.0 - 2.0 * (np.bitwise_count(idx & np.uint64(s.z)) & 1)
        rows.append((idx ^ np.uint64(s.x)).astype(np.int64))
        cols.append(idx.astype(np.int64))
        vals.append(coeff * (1j**s.n_y) * signs)
    if not rows:
        return sp.csr_matrix((dim, dim), dtype=complex)
    M = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(dim, dim),
    )
    return M.tocsr()


def pauli_decompose(A: SparseHermitian, tol: float = 1e-12) -> PauliSum:
    """All Pauli terms of A with |a_s| > tol; round-trips within 1e-10."""
    q = int(round(np.log2(A.dim)))
    if (1 << q) != A.dim:
        raise ShapeError("dimension must be a power of two")
    if q > PAULI_DECOMPOSE_LIMIT:
        raise CapacityError(f"{q} qubits exceeds the {PAULI_DECOMPOSE_LIMIT}-qubit guard")
    return decompose_dense(A.to_dense(), tol)


def evolve_exact(H: SparseHermitian, t: float, psi0: StateVector) -> StateVector:
    """e^{-iHt} psi0 by dense eigendecomposition (dim <= 4096) or Krylov."""
    if H.dim != psi0.dim:
        raise ShapeError("Hamiltonian and state dimensions differ")
    if H.dim <= DENSE_EVOLVE_LIMIT:
        w, V = H._eigh()
        phases = np.exp(-1j * w * t)
        out = V @ (phases * (V.conj().T @ psi0.amplitudes))
    else:
        out = spla.expm_multiply(-1j * t * H.to_csr(), psi0.amplitudes)
    return StateVector(out)


def evolution_unitary(H: SparseHermitian, t: float) -> np.ndarray:
    """Dense e^{-iHt}; intended for testbed dimensions."""
    w, V = H._eigh()
    return (V * np.exp(-1j * w * t)) @ V.conj().T


def spectral_norm(H: SparseHermitian, tol: float = 1e-9, seed: int = 7) -> float:
    """Largest |eigenvalue|; dense below the evolve limit, Lanczos above."""
    if not H._entries:
        return 0.0
    if H.dim <= DENSE_EVOLVE_LIMIT:
        w, _ = H._eigh()
        return float(np.max(np.abs(w)))
    rng = np.random.default_rng(seed)
    v0 = rng.standard_normal(H.dim)
    w = spla.eigsh(H.to_csr(), k=1, which="LM", v0=v0, tol=tol, return_eigenvectors=False)
    return float(abs(w[0]))


def restrict(H: SparseHermitian, codewords: list[int]) -> SparseHermitian:
    """|codewords|-dimensional matrix with entries H[c_j, c_k]."""
    if len(set(codewords)) != len(codewords):
        raise ShapeError("codeword indices must be distinct")
    if any(not 0 <= c < H.dim for c in codewords):
        raise ShapeError("codeword index out of range")
    out = SparseHermitian(len(codewords))
    for j, cj in enumerate(codewords):
        for k, ck in enumerate(codewords):
            if j > k:
                continue
            v = H.get(cj, ck)
            if v != 0:
                out.set(j, k, v)
    return out


def leakage_norm(H: SparseHermitian, codewords: list[int]) -> float:
    """2-norm of the off-block P_perp H P_S."""
    A = H.to_dense()
    comp = [j for j in range(H.dim) if j not in set(codewords)]
    if not comp:
        return 0.0
    block = A[np.ix_(comp, codewords)]
    return float(np.linalg.norm(block, 2))
