"""The six embedding schemes: codewords and penalty Hamiltonians.

Bit order is little-endian throughout ("first bit" = site 0 = rightmost
character of a displayed codeword), matching the codeword tables.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .paulis import PauliString, PauliSum, identity_sum


class SchemeError(ValueError):
    """Scheme constraint violated (e.g. odd n with a circulant code)."""


class Scheme(enum.Enum):
    UNARY = "unary"
    ANTIFERROMAGNETIC = "antiferromagnetic"
    CIRCULANT_UNARY = "circulant-unary"
    CIRCULANT_ANTIFERROMAGNETIC = "circulant-antiferromagnetic"
    ONE_HOT = "one-hot"
    PENALTY_FREE_ONE_HOT = "penalty-free-one-hot"

    @property
    def is_circulant(self) -> bool:
        return self in (Scheme.CIRCULANT_UNARY, Scheme.CIRCULANT_ANTIFERROMAGNETIC)

    @property
    def is_one_hot(self) -> bool:
        return self in (Scheme.ONE_HOT, Scheme.PENALTY_FREE_ONE_HOT)

    @property
    def penalty_free(self) -> bool:
        return self is Scheme.PENALTY_FREE_ONE_HOT


def qubit_count(scheme: Scheme, n: int) -> int:
    if scheme.is_circulant:
        return n // 2
    if scheme.is_one_hot:
        return n
    return max(n - 1, 1)


@dataclass(frozen=True)
class Code:
    """Ordered codewords (as basis indices) for logical dimension n."""

    scheme: Scheme
    n: int
    q: int
    words: tuple[int, ...]

    @property
    def strings(self) -> tuple[str, ...]:
        return tuple(format(w, f"0{self.q}b") for w in self.words)

    def __post_init__(self):
        if len(set(self.words)) != len(self.words):
            raise SchemeError("codewords must be distinct")


def _alternating(q: int) -> int:
    """0-1 alternating bits starting with 0 at site 0."""
    word = 0
    for k in range(1, q, 2):
        word |= 1 << k
    return word


def make_code(scheme: Scheme, n: int) -> Code:
    """Codewords for logical indices 1..n under the given scheme."""
    if n < 1:
        raise SchemeError("n must be >= 1")
    if scheme.is_circulant and (n < 2 or n % 2):
        raise SchemeError(f"{scheme.value} requires even n >= 2, got {n}")
    q = qubit_count(scheme, n)

    if scheme is Scheme.UNARY:
        if n == 1:
            words = [0]
        else:
            words = [(1 << (j - 1)) - 1 for j in range(1, n + 1)]
    elif scheme is Scheme.ANTIFERROMAGNETIC:
        if n == 1:
            words = [0]
        else:
            words = [_alternating(q)]
            for j in range(2, n + 1):
                words.append(words[-1] ^ (1 << (j - 2)))
    elif scheme is Scheme.CIRCULANT_UNARY:
        half = [(1 << (j - 1)) - 1 for j in range(1, n // 2 + 1)]
        mask = (1 << q) - 1
        words = half + [w ^ mask for w in half]
    elif scheme is Scheme.CIRCULANT_ANTIFERROMAGNETIC:
        half = [_alternating(q)]
        for j in range(2, n // 2 + 1):
            half.append(half[-1] ^ (1 << (j - 2)))
        mask = (1 << q) - 1
        words = half + [w ^ mask for w in half]
    else:  # one-hot variants
        words = [1 << (j - 1) for j in range(1, n + 1)]

    return Code(scheme, n, q, tuple(words))


def penalty_hamiltonian(scheme: Scheme, n: int, *, one_hot_form: str = "ground") -> PauliSum:
    """Diagonal penalty whose relevant eigenspace is span(make_code(scheme, n)).

    For OneHot, `one_hot_form` selects the ground-projector form
    (sum n_j - 1)^2 (default; required for composition) or the sum-of-Z
    form, whose code subspace is an excited eigenspace.
    """
    if scheme.is_circulant and (n < 2 or n % 2):
        raise SchemeError(f"{scheme.value} requires even n >= 2, got {n}")
    q = qubit_count(scheme, n)
    H = PauliSum(q)
    if scheme is Scheme.PENALTY_FREE_ONE_HOT:
        return H

    def zz(a, b):
        return PauliString.from_sites(q, {a: "Z", b: "Z"})

    def z(a):
        return PauliString.from_sites(q, {a: "Z"})

    if n == 1 and not scheme.is_one_hot:
        # single codeword |0>: pin it as the ground state so composition
        # with a degenerate factor stays admissible
        H.add_term(0.5, PauliString(q, 0, 0))
        H.add_term(-0.5, z(0))
        return H

    if scheme is Scheme.UNARY:
        for j in range(q - 1):
            H.add_term(-1.0, zz(j, j + 1))
        H.add_term(1.0, z(0))
        H.add_term(-1.0, z(q - 1))
    elif scheme is Scheme.ANTIFERROMAGNETIC:
        for j in range(q - 1):
            H.add_term(1.0, zz(j, j + 1))
        H.add_term(1.0, z(0))
        H.add_term((-1.0) ** (n - 1), z(q - 1))
    elif scheme is Scheme.CIRCULANT_UNARY:
        for j in range(q - 1):
            H.add_term(-1.0, zz(j, j + 1))
        H.add_term(1.0, zz(q - 1, 0))
    elif scheme is Scheme.CIRCULANT_ANTIFERROMAGNETIC:
        for j in range(q - 1):
            H.add_term(1.0, zz(j, j + 1))
        H.add_term(-((-1.0) ** (n // 2)), zz(q - 1, 0))
    elif scheme is Scheme.ONE_HOT:
        if one_hot_form == "sum_z":
            for j in range(q):
                H.add_term(1.0, z(j))
        elif one_hot_form == "ground":
            # (sum_j n_j - 1)^2 = I - sum_j n_j + 2 sum_{j<k} n_j n_k expanded
            # in Paulis; eigenvalue (w - 1)^2 on Hamming-weight-w strings.
            H = identity_sum(q, 1.0 - n / 2.0 + n * (n - 1) / 4.0)
            for j in range(q):
                H.add_term((2.0 - n) / 2.0, z(j))
            for a in range(q):
                for b in range(a + 1, q):
                    H.add_term(0.5, zz(a, b))
        else:
            raise SchemeError(f"unknown one-hot penalty form {one_hot_form!r}")
    H.normalize()
    return H


def code_penalty_energy(scheme: Scheme, n: int, *, one_hot_form: str = "ground") -> float:
    """Penalty eigenvalue on the code subspace (diagonal evaluation)."""
    pen = penalty_hamiltonian(scheme, n, one_hot_form=one_hot_form)
    code = make_code(scheme, n)
    if len(pen) == 0:
        return 0.0
    diag = pen.diagonal()
    vals = [diag[w] for w in code.words]
    if max(vals) - min(vals) > 1e-9:
        raise SchemeError("code subspace is not an eigenspace of the penalty")
    return float(vals[0])
