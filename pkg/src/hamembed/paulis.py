"""Phase-free Pauli strings and real-weighted Pauli sums.

A Pauli string is stored as an (x, z) bitmask pair over little-endian
qubit indices (site 0 is the least significant bit, the rightmost
character of a displayed word).  A site with both bits set carries the
literal Pauli Y, so every string is Hermitian and a PauliSum with real
coefficients is Hermitian by construction.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LETTERS = "IXYZ"

_LETTER_TO_XZ = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_XZ_TO_LETTER = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}

COEFF_TOL = 1e-12


def _popcount(arr: np.ndarray) -> np.ndarray:
    return np.bitwise_count(arr)


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-site Pauli letters over `qubits` sites."""

    qubits: int
    x: int
    z: int

    def __post_init__(self):
        if self.qubits < 1:
            raise ValueError("need at least one qubit")
        mask = (1 << self.qubits) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("bitmask exceeds qubit count")

    @classmethod
    def from_letters(cls, word: str, qubits: int | None = None) -> "PauliString":
        """Parse a word like 'XIY' (site 0 is the rightmost character)."""
        q = len(word) if qubits is None else qubits
        if len(word) != q:
            raise ValueError(f"word length {len(word)} != qubits {q}")
        x = z = 0
        for k, ch in enumerate(reversed(word.upper())):
            try:
                xb, zb = _LETTER_TO_XZ[ch]
            except KeyError:
                raise ValueError(f"unknown Pauli letter {ch!r}") from None
            x |= xb << k
            z |= zb << k
        return cls(q, x, z)

    @classmethod
    def from_sites(cls, qubits: int, sites: dict[int, str]) -> "PauliString":
        """Build from a {site: letter} mapping; unlisted sites are I."""
        x = z = 0
        for k, ch in sites.items():
            if not 0 <= k < qubits:
                raise ValueError(f"site {k} out of range for {qubits} qubits")
            xb, zb = _LETTER_TO_XZ[ch.upper()]
            x |= xb << k
            z |= zb << k
        return cls(qubits, x, z)

    @property
    def letters(self) -> str:
        return "".join(
            _XZ_TO_LETTER[((self.x >> k) & 1, (self.z >> k) & 1)]
            for k in reversed(range(self.qubits))
        )

    def letter(self, site: int) -> str:
        return _XZ_TO_LETTER[((self.x >> site) & 1, (self.z >> site) & 1)]

    @property
    def weight(self) -> int:
        return int(bin(self.x | self.z).count("1"))

    @property
    def n_y(self) -> int:
        return int(bin(self.x & self.z).count("1"))

    @property
    def sites(self) -> tuple[int, ...]:
        m = self.x | self.z
        return tuple(k for k in range(self.qubits) if (m >> k) & 1)

    def is_diagonal(self) -> bool:
        return self.x == 0

    def shifted(self, offset: int, qubits: int) -> "PauliString":
        """Re-embed on `qubits` sites with all sites moved up by `offset`."""
        if offset + self.qubits > qubits:
            raise ValueError("shifted string does not fit")
        return PauliString(qubits, self.x << offset, self.z << offset)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """Matrix-vector product P @ vec on a dense statevector."""
        dim = 1 << self.qubits
        if vec.shape[0] != dim:
            raise ValueError("dimension mismatch")
        idx = np.arange(dim, dtype=np.uint64)
        signs = 1.0 - 2.0 * (_popcount(idx & np.uint64(self.z)) & 1)
        out = np.empty(dim, dtype=complex)
        out[idx ^ np.uint64(self.x)] = (1j ** self.n_y) * signs * vec
        return out

    def diagonal(self) -> np.ndarray:
        """Diagonal of the matrix (only valid for x == 0 strings)."""
        if self.x != 0:
            raise ValueError("string is not diagonal")
        idx = np.arange(1 << self.qubits, dtype=np.uint64)
        return 1.0 - 2.0 * (_popcount(idx & np.uint64(self.z)) & 1)

    def __str__(self) -> str:
        return self.letters


class PauliSum:
    """Real linear combination of Pauli strings on a fixed qubit count.

    Duplicate strings merge on insertion; terms with |coefficient| below
    COEFF_TOL are dropped by normalize().  Insertion order is preserved,
    which downstream compilation relies on for determinism.
    """

    __slots__ = ("qubits", "_terms")

    def __init__(self, qubits: int, terms=None):
        if qubits < 1:
            raise ValueError("need at least one qubit")
        self.qubits = qubits
        self._terms: dict[tuple[int, int], float] = {}
        if terms:
            for coeff, string in terms:
                self.add_term(coeff, string)

    @classmethod
    def zero(cls, qubits: int) -> "PauliSum":
        return cls(qubits)

    def add_term(self, coeff: float, string: PauliString | str) -> "PauliSum":
        if isinstance(string, str):
            string = PauliString.from_letters(string, self.qubits)
        if string.qubits != self.qubits:
            raise ValueError("qubit count mismatch")
        if abs(complex(coeff).imag) > 1e-9:
            raise ValueError("coefficients must be real (Hermiticity)")
        key = (string.x, string.z)
        self._terms[key] = self._terms.get(key, 0.0) + float(np.real(coeff))
        return self

    @property
    def terms(self) -> list[tuple[float, PauliString]]:
        return [
            (c, PauliString(self.qubits, x, z)) for (x, z), c in self._terms.items()
        ]

    def __len__(self) -> int:
        return len(self._terms)

    def coefficient(self, string: PauliString | str) -> float:
        if isinstance(string, str):
            string = PauliString.from_letters(string, self.qubits)
        return self._terms.get((string.x, string.z), 0.0)

    def normalize(self, tol: float = COEFF_TOL) -> "PauliSum":
        """Drop terms with |c| <= tol (returns self)."""
        self._terms = {k: c for k, c in self._terms.items() if abs(c) > tol}
        return self

    def copy(self) -> "PauliSum":
        out = PauliSum(self.qubits)
        out._terms = dict(self._terms)
        return out

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if other.qubits != self.qubits:
            raise ValueError("qubit count mismatch")
        out = self.copy()
        for k, c in other._terms.items():
            out._terms[k] = out._terms.get(k, 0.0) + c
        return out

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-1.0) * other

    def __mul__(self, scalar: float) -> "PauliSum":
        out = PauliSum(self.qubits)
        out._terms = {k: scalar * c for k, c in self._terms.items()}
        return out

    __rmul__ = __mul__

    def shifted(self, offset: int, qubits: int) -> "PauliSum":
        out = PauliSum(qubits)
        for (x, z), c in self._terms.items():
            out._terms[(x << offset, z << offset)] = c
        return out

    def tensor(self, other: "PauliSum") -> "PauliSum":
        """Kronecker product; self occupies the high qubits (kron order)."""
        q = self.qubits + other.qubits
        out = PauliSum(q)
        for (x1, z1), c1 in self._terms.items():
            for (x2, z2), c2 in other._terms.items():
                key = ((x1 << other.qubits) | x2, (z1 << other.qubits) | z2)
                out._terms[key] = out._terms.get(key, 0.0) + c1 * c2
        return out

    def apply(self, vec: np.ndarray) -> np.ndarray:
        out = np.zeros_like(vec, dtype=complex)
        for (x, z), c in self._terms.items():
            out += c * PauliString(self.qubits, x, z).apply(vec)
        return out

    def diagonal(self) -> np.ndarray:
        """Diagonal vector; requires every term to be Z-type."""
        out = np.zeros(1 << self.qubits)
        for (x, z), c in self._terms.items():
            if x != 0:
                raise ValueError("sum has non-diagonal terms")
            out += c * PauliString(self.qubits, x, z).diagonal()
        return out

    def is_diagonal(self) -> bool:
        return all(x == 0 for (x, _) in self._terms)

    @property
    def max_weight(self) -> int:
        return max((PauliString(self.qubits, x, z).weight for x, z in self._terms), default=0)

    def to_dense(self) -> np.ndarray:
        dim = 1 << self.qubits
        idx = np.arange(dim, dtype=np.uint64)
        out = np.zeros((dim, dim), dtype=complex)
        for (x, z), c in self._terms.items():
            s = PauliString(self.qubits, x, z)
            signs = 1.0 - 2.0 * (_popcount(idx & np.uint64(z)) & 1)
            out[idx ^ np.uint64(x), idx] += c * (1j ** s.n_y) * signs
        return out

    def __repr__(self) -> str:
        parts = [f"{c:+.6g}*{PauliString(self.qubits, x, z)}" for (x, z), c in self._terms.items()]
        return f"PauliSum({self.qubits}q: {' '.join(parts) if parts else '0'})"


def identity_sum(qubits: int, coeff: float = 1.0) -> PauliSum:
    return PauliSum(qubits, [(coeff, PauliString(qubits, 0, 0))])


def number_operator(qubits: int, site: int, coeff: float = 1.0) -> PauliSum:
    """coeff * (I - Z_site) / 2, the occupation of one site."""
    out = PauliSum(qubits)
    out.add_term(coeff / 2.0, PauliString(qubits, 0, 0))
    out.add_term(-coeff / 2.0, PauliString.from_sites(qubits, {site: "Z"}))
    return out


def decompose_dense(A: np.ndarray, tol: float = COEFF_TOL) -> PauliSum:
    """Pauli coefficients of a 2^q-dimensional matrix, a_s = tr(A Q_s)/2^q.

    Works one qubit at a time on 2x2 blocks, pruning all-zero branches, so
    sparse inputs stay cheap; dense worst case is O(q 4^q).
    """
    dim = A.shape[0]
    q = int(round(np.log2(dim)))
    if (1 << q) != dim or A.shape != (dim, dim):
        raise ValueError("matrix dimension must be a power of two")
    blocks = A.reshape(1, dim, dim).astype(complex)
    masks = np.zeros((1, 2), dtype=np.int64)  # (x, z) accumulated, msb first
    for _ in range(q):
        d = blocks.shape[1] // 2
        b = blocks.reshape(-1, 2, d, 2, d)
        b00, b01 = b[:, 0, :, 0, :], b[:, 0, :, 1, :]
        b10, b11 = b[:, 1, :, 0, :], b[:, 1, :, 1, :]
        new = np.stack(
            [
                (b00 + b11) / 2,           # I
                (b01 + b10) / 2,           # X
                1j * (b01 - b10) / 2,      # Y
                (b00 - b11) / 2,           # Z
            ],
            axis=1,
        ).reshape(-1, d, d)
        xbit = np.array([0, 1, 1, 0], dtype=np.int64)
        zbit = np.array([0, 0, 1, 1], dtype=np.int64)
        m = np.repeat(masks, 4, axis=0)
        m[:, 0] = (m[:, 0] << 1) | np.tile(xbit, len(masks))
        m[:, 1] = (m[:, 1] << 1) | np.tile(zbit, len(masks))
        keep = np.abs(new).max(axis=(1, 2)) > tol if d >= 1 else np.abs(new[:, 0, 0]) > tol
        blocks, masks = new[keep], m[keep]
    out = PauliSum(q)
    for (xm, zm), val in zip(masks, blocks[:, 0, 0]):
        if abs(val.imag) > 1e-9:
            raise ValueError("matrix is not Hermitian: complex Pauli coefficient")
        out.add_term(val.real, PauliString(q, int(xm), int(zm)))
    return out.normalize(tol)
