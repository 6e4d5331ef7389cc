from __future__ import annotations

import numpy as np
import pytest

from hamembed.codes import (
    Scheme,
    SchemeError,
    code_penalty_energy,
    make_code,
    penalty_hamiltonian,
)

# n = 8 codeword tables, index 1..8 (displayed strings, site 0 rightmost)
UNARY_8 = ["0000000", "0000001", "0000011", "0000111",
           "0001111", "0011111", "0111111", "1111111"]
ANTIFERRO_8 = ["0101010", "0101011", "0101001", "0101101",
               "0100101", "0110101", "0010101", "1010101"]
CIRC_UNARY_8 = ["0000", "0001", "0011", "0111", "1111", "1110", "1100", "1000"]
CIRC_ANTIFERRO_8 = ["1010", "1011", "1001", "1101", "0101", "0100", "0110", "0010"]
ONE_HOT_8 = ["00000001", "00000010", "00000100", "00001000",
             "00010000", "00100000", "01000000", "10000000"]


@pytest.mark.parametrize(
    "scheme,expected",
    [
        (Scheme.UNARY, UNARY_8),
        (Scheme.ANTIFERROMAGNETIC, ANTIFERRO_8),
        (Scheme.CIRCULANT_UNARY, CIRC_UNARY_8),
        (Scheme.CIRCULANT_ANTIFERROMAGNETIC, CIRC_ANTIFERRO_8),
        (Scheme.ONE_HOT, ONE_HOT_8),
        (Scheme.PENALTY_FREE_ONE_HOT, ONE_HOT_8),
    ],
)
def test_codeword_tables_n8(scheme, expected):
    code = make_code(scheme, 8)
    assert list(code.strings) == expected


def test_code_sizes():
    assert make_code(Scheme.UNARY, 8).q == 7
    assert make_code(Scheme.ANTIFERROMAGNETIC, 8).q == 7
    assert make_code(Scheme.CIRCULANT_UNARY, 8).q == 4
    assert make_code(Scheme.ONE_HOT, 8).q == 8


def test_circulant_rejects_odd_n():
    with pytest.raises(SchemeError):
        make_code(Scheme.CIRCULANT_UNARY, 7)
    with pytest.raises(SchemeError):
        penalty_hamiltonian(Scheme.CIRCULANT_ANTIFERROMAGNETIC, 5)


def test_unary_penalty_spectrum_n4():
    # eigenvalue -2 on {000,001,011,111}, +2 elsewhere, gap 4
    pen = penalty_hamiltonian(Scheme.UNARY, 4)
    diag = pen.diagonal()
    code = make_code(Scheme.UNARY, 4)
    for w in code.words:
        assert diag[w] == pytest.approx(-2.0)
    rest = [diag[j] for j in range(8) if j not in code.words]
    assert all(v == pytest.approx(2.0) for v in rest)


def test_antiferro_penalty_spectrum_n4():
    pen = penalty_hamiltonian(Scheme.ANTIFERROMAGNETIC, 4)
    diag = pen.diagonal()
    code = make_code(Scheme.ANTIFERROMAGNETIC, 4)
    assert sorted(int(w) for w in code.words) == [0b001, 0b010, 0b011, 0b101]
    for w in code.words:
        assert diag[w] == pytest.approx(-2.0)
    rest = [diag[j] for j in range(8) if j not in code.words]
    assert all(v == pytest.approx(2.0) for v in rest)


def test_circulant_unary_penalty_gap_n8():
    pen = penalty_hamiltonian(Scheme.CIRCULANT_UNARY, 8)
    diag = pen.diagonal()
    code = make_code(Scheme.CIRCULANT_UNARY, 8)
    vals = sorted(set(np.round(diag, 12)))
    assert vals == [-2.0, 2.0]
    for w in code.words:
        assert diag[w] == pytest.approx(-2.0)


def test_penalty_gap_always_4():
    for scheme in (Scheme.UNARY, Scheme.ANTIFERROMAGNETIC):
        for n in range(3, 9):
            diag = penalty_hamiltonian(scheme, n).diagonal()
            code = make_code(scheme, n)
            ground = diag[list(code.words)]
            rest = np.delete(diag, list(code.words))
            assert np.allclose(ground, ground[0])
            assert rest.min() - ground[0] == pytest.approx(4.0)
    for scheme in (Scheme.CIRCULANT_UNARY, Scheme.CIRCULANT_ANTIFERROMAGNETIC):
        for n in (4, 6, 8):
            diag = penalty_hamiltonian(scheme, n).diagonal()
            code = make_code(scheme, n)
            ground = diag[list(code.words)]
            rest = np.delete(diag, list(code.words))
            assert np.allclose(ground, ground[0])
            if rest.size:
                assert rest.min() - ground[0] == pytest.approx(4.0)


def test_one_hot_ground_form_enumeration():
    # eigenvalue (w-1)^2 on Hamming-weight-w strings, 0 exactly on weight 1
    pen = penalty_hamiltonian(Scheme.ONE_HOT, 3)
    diag = pen.diagonal()
    for b in range(8):
        w = bin(b).count("1")
        assert diag[b] == pytest.approx((w - 1) ** 2)


def test_one_hot_sum_z_form():
    pen = penalty_hamiltonian(Scheme.ONE_HOT, 3, one_hot_form="sum_z")
    diag = pen.diagonal()
    for b in range(8):
        assert diag[b] == pytest.approx(3 - 2 * bin(b).count("1"))


def test_penalty_free_returns_zero_sum():
    assert len(penalty_hamiltonian(Scheme.PENALTY_FREE_ONE_HOT, 6)) == 0


def test_code_penalty_energy():
    assert code_penalty_energy(Scheme.ONE_HOT, 5) == 0.0
    assert code_penalty_energy(Scheme.UNARY, 4) == -2.0
    assert code_penalty_energy(Scheme.ONE_HOT, 5, one_hot_form="sum_z") == 3.0
