"""Composition rules for embedding artifacts and the leakage-bound analysis.

The four rules (add, scale, cartesian/composition, tensor) act on the
perturbation operators while penalties combine as pen1 (x) I + I (x) pen2.
The perturbation report certifies the block-decomposition quantities (gap,
coupling norm, kappa) from exact spectra, so the 4*sqrt(2)*kappa*||R||*t
leakage bound can be checked rather than estimated.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .codes import Code, Scheme, SchemeError
from .embeddings import EmbeddingArtifact
from .linalg import SparseHermitian, restrict, spectral_norm
from .paulis import PauliSum

ETA_FACTOR = 2.0 * np.sqrt(2.0)
LEAKAGE_FACTOR = 4.0 * np.sqrt(2.0)


class CompositionError(ValueError):
    """Artifacts cannot be combined under the requested rule."""


def _same_code(a: Code, b: Code) -> bool:
    return a.n == b.n and a.q == b.q and a.words == b.words


def _same_terms(a: PauliSum, b: PauliSum, tol: float = 1e-12) -> bool:
    keys = set(dict(a._terms)) | set(dict(b._terms))
    return all(abs(a._terms.get(k, 0.0) - b._terms.get(k, 0.0)) <= tol for k in keys)


def compose_add(a1: EmbeddingArtifact, a2: EmbeddingArtifact) -> EmbeddingArtifact:
    """Embed A1 + A2 on the shared code; penalties must match structurally."""
    if not _same_code(a1.code, a2.code):
        raise CompositionError("addition requires identical codes")
    if not _same_terms(a1.h_pen, a2.h_pen):
        raise CompositionError("addition requires identical penalty Hamiltonians")
    return EmbeddingArtifact(
        a1.scheme,
        a1.code,
        a1.h_pen.copy(),
        (a1.q_op + a2.q_op).normalize(),
        a1.offset + a2.offset,
        a1.penalty_free and a2.penalty_free,
        a1.pen_code_energy,
    )


def compose_scale(a: EmbeddingArtifact, alpha: float) -> EmbeddingArtifact:
    """Embed alpha * A; the penalty is untouched."""
    return EmbeddingArtifact(
        a.scheme,
        a.code,
        a.h_pen.copy(),
        (alpha * a.q_op).normalize(),
        alpha * a.offset,
        a.penalty_free,
        a.pen_code_energy,
    )


def _check_composable(a: EmbeddingArtifact) -> None:
    if a.penalty_free:
        return
    if len(a.h_pen) == 0:
        # zero penalty with a full-space code is a valid ground space
        if len(a.code.words) == (1 << a.code.q):
            return
        raise CompositionError("penalty-bearing artifact with empty penalty")
    diag = a.h_pen.diagonal()
    vals = np.array([diag[w] for w in a.code.words])
    rest = np.delete(diag, list(a.code.words))
    if vals.max() - vals.min() > 1e-9 or (rest.size and rest.min() <= vals[0] + 1e-12):
        raise CompositionError(
            "composition requires the code to span the penalty ground space "
            "(one-hot sum-of-Z form is not admissible)"
        )


def _product_code(c1: Code, c2: Code) -> Code:
    scheme = c1.scheme if c1.scheme == c2.scheme else c1.scheme
    words = tuple(
        (w1 << c2.q) | w2 for w1 in c1.words for w2 in c2.words
    )
    return Code(scheme, c1.n * c2.n, c1.q + c2.q, words)


def _product_penalty(a1: EmbeddingArtifact, a2: EmbeddingArtifact) -> PauliSum:
    q = a1.qubits + a2.qubits
    return (a1.h_pen.shifted(a2.qubits, q) + a2.h_pen.shifted(0, q)).normalize()


def compose_cartesian(a1: EmbeddingArtifact, a2: EmbeddingArtifact) -> EmbeddingArtifact:
    """Embed A1 (x) I + I (x) A2 on the product code (graph Cartesian product)."""
    for a in (a1, a2):
        _check_composable(a)
    if a1.penalty_free != a2.penalty_free:
        raise CompositionError("mix of penalty-free and penalty-bearing factors")
    q = a1.qubits + a2.qubits
    q_op = (a1.q_op.shifted(a2.qubits, q) + a2.q_op.shifted(0, q)).normalize()
    # scalar offsets of each factor act as identity on the other
    offset = a1.offset + a2.offset
    return EmbeddingArtifact(
        a1.scheme,
        _product_code(a1.code, a2.code),
        _product_penalty(a1, a2),
        q_op,
        offset,
        a1.penalty_free and a2.penalty_free,
        a1.pen_code_energy + a2.pen_code_energy,
    )


def compose_tensor(a1: EmbeddingArtifact, a2: EmbeddingArtifact) -> EmbeddingArtifact:
    """Embed A1 (x) A2: q_op is the full product including scalar offsets."""
    for a in (a1, a2):
        _check_composable(a)
    if a1.penalty_free != a2.penalty_free:
        raise CompositionError("mix of penalty-free and penalty-bearing factors")
    from .paulis import identity_sum

    full1 = a1.q_op + identity_sum(a1.qubits, a1.offset) if a1.offset else a1.q_op
    full2 = a2.q_op + identity_sum(a2.qubits, a2.offset) if a2.offset else a2.q_op
    prod = full1.tensor(full2)
    offset = prod.coefficient("I" * (a1.qubits + a2.qubits))
    q_op = prod.copy()
    q_op._terms.pop((0, 0), None)
    return EmbeddingArtifact(
        a1.scheme,
        _product_code(a1.code, a2.code),
        _product_penalty(a1, a2),
        q_op.normalize(),
        offset,
        a1.penalty_free and a2.penalty_free,
        a1.pen_code_energy + a2.pen_code_energy,
    )


@dataclass
class PerturbationReport:
    delta: float          # spectral gap between the A block and G = B + gC
    delta0: float         # gap at g = 0
    r_norm: float         # coupling block norm ||R||
    kappa: float          # ||R|| / delta (inf when delta <= 0)
    eta_bound: float      # 2 sqrt(2) kappa
    sw_valid: bool        # delta > 0 and kappa < 1/2
    g: float

    def leakage_bound(self, t: float) -> float:
        return LEAKAGE_FACTOR * self.kappa * self.r_norm * abs(t)

    @property
    def cross_bound(self) -> float:
        return LEAKAGE_FACTOR * self.kappa

    def to_json(self) -> str:
        return json.dumps(
            {
                "g": self.g,
                "delta": self.delta,
                "delta0": self.delta0,
                "r_norm": self.r_norm,
                "kappa": self.kappa,
                "eta_bound": self.eta_bound,
                "sw_valid": self.sw_valid,
            }
        )


def perturbation_analysis(art: EmbeddingArtifact, A: SparseHermitian, g: float) -> PerturbationReport:
    """Block decomposition of g*h_pen + Q with the code energy shifted to zero.

    Dense block spectra up to dimension 4096; Lanczos extremal eigenvalues
    and an SVD of the coupling columns above that.
    """
    words = list(art.code.words)
    dim = 1 << art.qubits
    comp = [j for j in range(dim) if j not in set(words)]
    if not comp:
        return PerturbationReport(np.inf, np.inf, 0.0, 0.0, 0.0, True, g)
    if dim > 4096:
        return _perturbation_krylov(art, g, words, comp)
    Q = art.q_matrix().to_dense()
    pen = np.zeros(dim)
    if len(art.h_pen):
        pen = art.h_pen.diagonal() - art.pen_code_energy
    H = Q + g * np.diag(pen)
    A_blk = H[np.ix_(words, words)]
    lam_max_A = float(np.linalg.eigvalsh(A_blk).max())
    R = H[np.ix_(comp, words)]
    r_norm = float(np.linalg.norm(R, 2))
    G_blk = H[np.ix_(comp, comp)]
    B_blk = Q[np.ix_(comp, comp)]
    delta = float(np.linalg.eigvalsh(G_blk).min() - lam_max_A)
    delta0 = float(np.linalg.eigvalsh(B_blk).min() - lam_max_A)
    return _finish_report(delta, delta0, r_norm, g)


def _finish_report(delta: float, delta0: float, r_norm: float, g: float) -> PerturbationReport:
    if r_norm == 0.0:
        # exactly block-diagonal: the Schrieffer-Wolff rotation is the identity
        kappa = 0.0
        valid = True
    elif delta > 0:
        kappa = r_norm / delta
        valid = kappa < 0.5
    else:
        kappa = np.inf
        valid = False
    return PerturbationReport(delta, delta0, r_norm, kappa, ETA_FACTOR * kappa, valid, g)


def _perturbation_krylov(art: EmbeddingArtifact, g: float, words, comp) -> PerturbationReport:
    import scipy.sparse.linalg as spla

    from .linalg import pauli_sum_to_csr

    dim = 1 << art.qubits
    Q = pauli_sum_to_csr(art.q_op)
    if art.offset:
        import scipy.sparse as sp

        Q = Q + art.offset * sp.identity(dim, format="csr")
    pen = np.zeros(dim)
    if len(art.h_pen):
        pen = art.h_pen.diagonal() - art.pen_code_energy
    cols = np.zeros((dim, len(words)), dtype=complex)
    for k, c in enumerate(words):
        e = np.zeros(dim, dtype=complex)
        e[c] = 1.0
        cols[:, k] = Q @ e + g * pen * e
    A_blk = cols[words, :]
    lam_max_A = float(np.linalg.eigvalsh(A_blk).max())
    r_norm = float(np.linalg.norm(cols[comp, :], 2))

    comp_arr = np.array(comp)

    def block_matvec(v, with_pen):
        full = np.zeros(dim, dtype=complex)
        full[comp_arr] = v
        out = Q @ full
        if with_pen:
            out = out + g * pen * full
        return out[comp_arr]

    def lam_min(with_pen):
        op = spla.LinearOperator((len(comp), len(comp)),
                                 matvec=lambda v: block_matvec(v, with_pen),
                                 dtype=complex)
        vals = spla.eigsh(op, k=1, which="SA", return_eigenvectors=False, tol=1e-9)
        return float(vals[0])

    delta = lam_min(True) - lam_max_A
    delta0 = lam_min(False) - lam_max_A
    return _finish_report(delta, delta0, r_norm, g)


class PenaltySaturationError(RuntimeError):
    """No admissible penalty coefficient up to the search cap."""


def choose_penalty(art: EmbeddingArtifact, A: SparseHermitian, t: float,
                   delta_target: float, *, bisect_steps: int = 10) -> float:
    """Smallest g (doubling then bisection) with leakage bound <= delta_target.

    The Schrieffer-Wolff leakage bound 4 sqrt(2) kappa(g) ||R|| t decreases
    monotonically in g for fixed spectra, so a doubling bracket is sound.
    """
    if delta_target <= 0:
        raise ValueError("delta_target must be positive")
    if art.penalty_free or np.isinf(delta_target):
        return 0.0

    def bound(g: float) -> float:
        rep = perturbation_analysis(art, A, g)
        if not rep.sw_valid:
            return np.inf
        return rep.leakage_bound(t)

    if bound(0.0) <= delta_target:
        return 0.0
    cap = (2.0**20) * max(spectral_norm(art.q_matrix()), 1.0)
    g = 1.0
    while bound(g) > delta_target:
        g *= 2.0
        if g > cap:
            raise PenaltySaturationError(
                f"no penalty coefficient up to {cap:g} meets the target {delta_target:g}"
            )
    lo, hi = g / 2.0, g
    for _ in range(bisect_steps):
        mid = 0.5 * (lo + hi)
        if bound(mid) <= delta_target:
            hi = mid
        else:
            lo = mid
    return hi


def search_penalty_heuristic(gamma: float, n: int, d: int, t_p: float) -> float:
    """Spatial-search penalty policy g = gamma * n * d * T_p."""
    return gamma * n * d * t_p
