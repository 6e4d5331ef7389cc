"""Embedding artifacts: perturbation operator Q, penalty, and validation.

embed_matrix(A, scheme) produces Q such that the restriction of Q (plus a
tracked scalar offset) to the code subspace reproduces A entry-wise; the
penalty's relevant eigenspace is the code span.  Identity contributions are
kept out of the Pauli term list so they never reach gate counting.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .codes import Code, Scheme, SchemeError, make_code, penalty_hamiltonian
from .linalg import SparseHermitian, leakage_norm, pauli_sum_to_matrix, restrict
from .paulis import PauliString, PauliSum


class StructureError(ValueError):
    """Input matrix does not have the sparsity structure the scheme needs."""


@dataclass
class EmbeddingArtifact:
    scheme: Scheme
    code: Code
    h_pen: PauliSum
    q_op: PauliSum
    offset: float = 0.0            # identity component of Q
    penalty_free: bool = False
    pen_code_energy: float = 0.0   # penalty eigenvalue on the code subspace

    @property
    def qubits(self) -> int:
        return self.code.q

    def full_operator(self, g: float) -> PauliSum:
        """g * h_pen + q_op (offset excluded; it is a logical global phase)."""
        return g * self.h_pen + self.q_op

    def q_matrix(self) -> SparseHermitian:
        M = pauli_sum_to_matrix(self.q_op)
        if self.offset:
            for j in range(M.dim):
                M.add(j, j, self.offset)
        return M

    def embedded_matrix(self, g: float) -> SparseHermitian:
        M = pauli_sum_to_matrix(self.full_operator(g))
        shift = self.offset - g * self.pen_code_energy
        if shift:
            for j in range(M.dim):
                M.add(j, j, shift)
        return M

    def logical_matrix(self) -> SparseHermitian:
        """restrict(Q, code) + offset, via column applications (any q)."""
        n = self.code.n
        words = list(self.code.words)
        R = np.zeros((n, n), dtype=complex)
        dim = 1 << self.qubits
        for k, ck in enumerate(words):
            e = np.zeros(dim, dtype=complex)
            e[ck] = 1.0
            col = self.q_op.apply(e)
            R[:, k] = col[words]
        R += self.offset * np.eye(n)
        return SparseHermitian.from_dense(R)

    def leakage(self, g: float) -> float:
        """||P_perp (g h_pen + Q) P_S||, computed column-wise."""
        words = list(self.code.words)
        dim = 1 << self.qubits
        H = self.full_operator(g)
        block = np.zeros((dim, len(words)), dtype=complex)
        for k, ck in enumerate(words):
            e = np.zeros(dim, dtype=complex)
            e[ck] = 1.0
            block[:, k] = H.apply(e)
        block[words, :] = 0.0
        return float(np.linalg.norm(block, 2))

    def to_json(self) -> str:
        return json.dumps(
            {
                "scheme": self.scheme.value,
                "n": self.code.n,
                "q": self.code.q,
                "codewords": list(self.code.strings),
                "offset": self.offset,
                "penalty_free": self.penalty_free,
                "pen_code_energy": self.pen_code_energy,
                "q_op": [[c, str(s)] for c, s in self.q_op.terms],
                "h_pen": [[c, str(s)] for c, s in self.h_pen.terms],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "EmbeddingArtifact":
        obj = json.loads(text)
        scheme = Scheme(obj["scheme"])
        code = Code(scheme, obj["n"], obj["q"], tuple(int(w, 2) for w in obj["codewords"]))
        q_op = PauliSum(obj["q"], [(c, w) for c, w in obj["q_op"]])
        h_pen = PauliSum(obj["q"], [(c, w) for c, w in obj["h_pen"]])
        return cls(scheme, code, h_pen, q_op, obj["offset"], obj["penalty_free"],
                   obj["pen_code_energy"])


def _entry_parts(A: SparseHermitian, j: int, k: int) -> tuple[float, float]:
    v = A.get(j, k)
    return float(np.real(v)), float(np.imag(v))


def _band_chain_string(q: int, j: int, k: int, last: str) -> PauliString:
    """X on 0-based sites j..k-2 with `last` at site j-1 (1-based paper sites)."""
    sites = {m: "X" for m in range(j, k - 1)}
    sites[j - 1] = last
    return PauliString.from_sites(q, sites)


def _embed_band(A: SparseHermitian, scheme: Scheme) -> tuple[PauliSum, float]:
    """Unary / antiferromagnetic Q for an arbitrary Hermitian matrix."""
    n = A.dim
    q = max(n - 1, 1)
    Q = PauliSum(q)
    alpha = [float(np.real(A.get(j, j))) for j in range(n)]
    # Diagonal: alpha_1 I + sum_j (alpha_j - alpha_{j-1}) (I -+ Z_{j-1}) / 2,
    # where the Z sign alternates for the antiferromagnetic code (bit j-1 of
    # the k-th codeword indicates k >= j for even j and k < j for odd j).
    offset = alpha[0]
    for j in range(2, n + 1):  # 1-based logical index
        d = alpha[j - 1] - alpha[j - 2]
        if d:
            sign = -1.0 if scheme is Scheme.UNARY else (-1.0) ** (j + 1)
            Q.add_term(sign * d / 2.0, PauliString.from_sites(q, {j - 2: "Z"}))
            offset += d / 2.0
    for r, c, v in A.entries:
        if r == c:
            continue
        j, k = r + 1, c + 1  # 1-based, j < k
        re, im = float(np.real(v)), float(np.imag(v))
        if re:
            Q.add_term(re, _band_chain_string(q, j, k, "X"))
        if im:
            # The Y element <a_j|X..X Y_j|a_k> is -i on the unary code (bit j
            # of u_k is always set) but alternates with the parity of j on the
            # antiferromagnetic code, whose flipped-region bits are [b odd].
            sign = -1.0 if scheme is Scheme.UNARY else (-1.0) ** j
            Q.add_term(sign * im, _band_chain_string(q, j, k, "Y"))
    return Q.normalize(), offset


def _embed_one_hot(A: SparseHermitian, penalty_free: bool) -> tuple[PauliSum, float]:
    n = A.dim
    Q = PauliSum(n)
    offset = 0.0
    for j in range(n):
        a = float(np.real(A.get(j, j)))
        if a:
            Q.add_term(-a / 2.0, PauliString.from_sites(n, {j: "Z"}))
            offset += a / 2.0
    for r, c, v in A.entries:
        if r == c:
            continue
        j, k = r, c  # 0-based sites, j < k
        re, im = float(np.real(v)), float(np.imag(v))
        if penalty_free:
            if re:
                Q.add_term(re / 2.0, PauliString.from_sites(n, {k: "X", j: "X"}))
                Q.add_term(re / 2.0, PauliString.from_sites(n, {k: "Y", j: "Y"}))
            if im:
                Q.add_term(im / 2.0, PauliString.from_sites(n, {k: "X", j: "Y"}))
                Q.add_term(-im / 2.0, PauliString.from_sites(n, {k: "Y", j: "X"}))
        else:
            if re:
                Q.add_term(re, PauliString.from_sites(n, {k: "X", j: "X"}))
            if im:
                Q.add_term(im, PauliString.from_sites(n, {k: "X", j: "Y"}))
    return Q.normalize(), offset


def _circulant_pattern(A: SparseHermitian) -> tuple[float, float]:
    """Validate A = a*C + b*I for the cycle adjacency C; return (a, b)."""
    n = A.dim
    if n < 2 or n % 2:
        raise SchemeError("circulant schemes require even n >= 2")
    b = float(np.real(A.get(0, 0)))
    a = float(np.real(A.get(0, 1)))
    dense = A.to_dense()
    if np.abs(dense.imag).max() > 0:
        raise StructureError("circulant embedding requires a real symmetric matrix")
    C = np.zeros((n, n))
    for j in range(n):
        C[j, (j + 1) % n] = 1.0
        C[(j + 1) % n, j] = 1.0
    expect = a * C + b * np.eye(n)
    if not np.array_equal(dense.real, expect):
        raise StructureError("matrix is not of the banded-circulant cycle form a*C + b*I")
    return a, b


def _embed_circulant(A: SparseHermitian) -> tuple[PauliSum, float]:
    a, b = _circulant_pattern(A)
    q = A.dim // 2
    Q = PauliSum(q)
    for j in range(q):
        Q.add_term(a, PauliString.from_sites(q, {j: "X"}))
    return Q.normalize(), b


def embed_matrix(A: SparseHermitian, scheme: Scheme, *, one_hot_form: str = "ground") -> EmbeddingArtifact:
    """Embedding artifact for A; restriction of Q to the code equals A."""
    n = A.dim
    code = make_code(scheme, n)
    if n == 1:
        # Degenerate logical dimension: diagonal-only Q on one qubit.
        q_op = PauliSum(code.q)
        offset = float(np.real(A.get(0, 0)))
        h_pen = penalty_hamiltonian(scheme, 1, one_hot_form=one_hot_form)
        pen_energy = float(h_pen.diagonal()[code.words[0]]) if len(h_pen) else 0.0
        return EmbeddingArtifact(scheme, code, h_pen, q_op, offset,
                                 scheme.penalty_free, pen_energy)
    if scheme in (Scheme.UNARY, Scheme.ANTIFERROMAGNETIC):
        q_op, offset = _embed_band(A, scheme)
    elif scheme.is_circulant:
        q_op, offset = _embed_circulant(A)
    else:
        q_op, offset = _embed_one_hot(A, scheme.penalty_free)
    h_pen = penalty_hamiltonian(scheme, n, one_hot_form=one_hot_form)
    pen_energy = 0.0
    if len(h_pen):
        diag = h_pen.diagonal()
        pen_energy = float(diag[code.words[0]])
    return EmbeddingArtifact(scheme, code, h_pen, q_op, offset,
                             scheme.penalty_free, pen_energy)


@dataclass
class ValidationReport:
    restriction_error: float        # max |restrict(Q) - A|
    ground_space_ok: bool           # span(code) is the penalty's relevant eigenspace
    ground_is_minimal: bool         # ... and it is the minimal-eigenvalue subspace
    leakage: float                  # ||P_perp (g h_pen + Q) P_S||
    penalty_free: bool

    @property
    def ok(self) -> bool:
        return self.restriction_error < 1e-12 and (self.penalty_free or self.ground_space_ok)


def validate_embedding(art: EmbeddingArtifact, A: SparseHermitian, g: float) -> ValidationReport:
    if A.dim != art.code.n:
        raise SchemeError("logical dimension mismatch")
    words = list(art.code.words)
    err = float(np.abs(art.logical_matrix().to_dense() - A.to_dense()).max())

    ground_ok = minimal = art.penalty_free
    if not len(art.h_pen) and not art.penalty_free:
        # zero penalty: happens when the code fills the whole qubit space
        ground_ok = True
        minimal = len(words) == (1 << art.code.q)
    if len(art.h_pen):
        diag = art.h_pen.diagonal()
        vals = np.array([diag[w] for w in words])
        ground_ok = bool(vals.max() - vals.min() < 1e-9)
        code_set = set(words)
        rest = np.array([diag[j] for j in range(1 << art.code.q) if j not in code_set])
        minimal = ground_ok and (rest.size == 0 or rest.min() > vals[0] + 1e-12)
    leak = art.leakage(g)
    return ValidationReport(err, ground_ok, minimal, leak, art.penalty_free)
