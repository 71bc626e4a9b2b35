import itertools

import numpy as np
import pytest

from conftest import random_sl2
from projanosov.errors import BadInput
from projanosov.families import (
    Octonion,
    appendix_b,
    example_block_double,
    example_reducible,
    g2_element,
    octonion_mul,
    schottky_sl2,
    so_form,
    structure_constants,
    sym_square_rep,
    tau_d,
    verify_g2,
)
from projanosov.projlin import as_array, same_projective, spectrum
from projanosov.wordgroup import ball, evaluate


def test_tau3_diagonal():
    m = tau_d(np.diag([2.0, 0.5]), 3)
    assert np.allclose(m.entries, np.diag([0.25, 1.0, 4.0]))
    s = spectrum(m)
    assert np.allclose(np.abs(s.attracting_line), [0.0, 0.0, 1.0])


def test_tau_identity_and_dimensions():
    for d in (2, 3, 4, 7):
        assert np.allclose(tau_d(np.eye(2), d).entries, np.eye(d))
        assert tau_d(np.eye(2), d).dim == d
    with pytest.raises(BadInput):
        tau_d(np.diag([2.0, 1.0]), 3)
    with pytest.raises(BadInput):
        tau_d(np.eye(2), 1)


def test_tau_is_a_homomorphism(rng):
    gs = random_sl2(rng, 100)
    hs = random_sl2(rng, 100)
    for d in (3, 4):
        for g, h in zip(gs, hs):
            lhs = tau_d(g @ h, d)
            rhs = tau_d(g, d).entries @ tau_d(h, d).entries
            assert same_projective(lhs, rhs, 1e-8)


def test_tau_odd_has_positive_eigenvalues(rng):
    for g in random_sl2(rng, 50):
        if abs(np.trace(g)) <= 2.05:
            continue
        for d in (3, 5):
            vals = np.linalg.eigvals(tau_d(g, d).entries)
            assert np.all(np.abs(vals.imag) < 1e-8)
            assert np.all(vals.real > 0)


def test_schottky_generators():
    rep = schottky_sl2(3.0, np.pi / 4)
    for w in ("a", "b"):
        assert np.allclose(spectrum(as_array(evaluate(rep, w))).moduli, [3.0, 1 / 3])
    with pytest.raises(BadInput):
        schottky_sl2(1.0, 0.5)
    with pytest.raises(BadInput):
        schottky_sl2(3.0, 0.0)


def test_example_reducible_spectrum():
    rep = example_reducible()
    assert rep.dim == 3
    assert np.allclose(spectrum(as_array(evaluate(rep, "a"))).moduli, [3.0, 1.0, 1 / 3])


def test_example_block_double_duplicates_moduli():
    phi = sym_square_rep(schottky_sl2(3.0, np.pi / 4))
    rep = example_block_double(phi)
    assert rep.dim == 6
    for i, w in enumerate(ball(2, 3)):
        if not w or i > 50:
            continue
        big = spectrum(as_array(evaluate(rep, w))).moduli
        small = spectrum(as_array(evaluate(phi, w))).moduli
        assert big[0] == pytest.approx(big[1], rel=1e-9)
        assert np.allclose(big, np.repeat(small, 2), rtol=1e-8)


def test_sp_example():
    g = appendix_b("sp", [16, 2])
    m = spectrum(g).moduli
    assert np.allclose(m, [16, 2, 0.5, 1 / 16])
    assert m[0] / m[1] == pytest.approx(8) and m[1] / m[2] == pytest.approx(4)
    with pytest.raises(BadInput):
        appendix_b("sp", [2, 16])
    with pytest.raises(BadInput):
        appendix_b("sp", [16, 1])


def test_so_example_and_form():
    g = appendix_b("so", [2.0, 0.5])
    assert g.dim == 5
    assert np.allclose(spectrum(g).moduli, np.exp([2, 0.5, 0, -0.5, -2]))
    j = so_form(2)
    assert np.allclose(g.entries.T @ j @ g.entries, j, atol=1e-8)
    with pytest.raises(BadInput):
        appendix_b("so", [0.5, 2.0])


def test_g2_example_spectrum():
    m = spectrum(appendix_b("g2", 2.0, 0.5)).moduli
    assert np.allclose(m, np.exp([2.5, 2, 0.5, 0, -0.5, -2, -2.5]))
    assert m[0] / m[1] == pytest.approx(np.exp(0.5))
    assert m[1] / m[2] == pytest.approx(np.exp(1.5))


def test_unknown_family():
    with pytest.raises(BadInput):
        appendix_b("e8", 1.0)


def test_octonion_table_matches_golden(golden):
    table = structure_constants()
    for p, q in itertools.product(range(8), repeat=2):
        k, sign = golden["octonion_table"][p][q]
        expected = np.zeros(8)
        expected[k] = sign
        assert np.array_equal(table[p, q], expected), (p, q)


def test_octonion_basic_relations():
    one, i, j, k, e = (Octonion.basis(n) for n in range(5))
    for n in range(8):
        x = Octonion.basis(n)
        assert np.array_equal((one * x).coords, x.coords)
        assert np.array_equal((x * one).coords, x.coords)
    assert np.array_equal((e * e).coords, one.coords)
    assert np.array_equal((i * j).coords, k.coords)
    assert np.array_equal((i * i).coords, -one.coords)
    # conjugation negates the imaginary part
    x = Octonion(np.arange(1.0, 9.0))
    assert np.array_equal(x.conj().coords, np.concatenate([[1.0], -np.arange(2.0, 9.0)]))


def test_octonion_norm_is_split_and_multiplicative(rng):
    assert Octonion.basis(1).norm() == 1.0
    assert Octonion.basis(4).norm() == -1.0
    for _ in range(50):
        x, y = Octonion(rng.normal(size=8)), Octonion(rng.normal(size=8))
        assert octonion_mul(x, y).norm() == pytest.approx(x.norm() * y.norm(), abs=1e-10)


@pytest.mark.parametrize("t", np.linspace(-2, 2, 5))
@pytest.mark.parametrize("s", np.linspace(-2, 2, 5))
def test_g2_element_is_automorphism(t, s):
    assert verify_g2(appendix_b("g2", t, s))


def test_verify_g2_negative_cases():
    assert verify_g2(np.eye(7))
    naive = np.eye(7)
    naive[:4, :4] = appendix_b("sp", [16, 2]).entries
    assert not verify_g2(naive)
    assert not verify_g2(g2_element(1.0, 0.5, as_printed=True))
    assert not verify_g2(np.eye(6))


def test_printed_variant_has_same_spectrum():
    a = spectrum(g2_element(1.0, 0.5)).moduli
    b = spectrum(g2_element(1.0, 0.5, as_printed=True)).moduli
    assert np.allclose(a, b)
