"""Randomized invariants checked with hypothesis."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from projanosov.families import tau_d
from projanosov.hilbert import hilbert_distance, klein_disk
from projanosov.projlin import exterior_power, normalize, same_projective, spectrum
from projanosov.wordgroup import (
    cyclic_reduce,
    format_word,
    inverse_word,
    is_reduced,
    multiply,
    parse_word,
    reduce_word,
)

letters = st.sampled_from([1, -1, 2, -2, 3, -3])
words = st.lists(letters, max_size=12).map(tuple)
entries = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


def _usable(m):
    with np.errstate(all="ignore"):
        return abs(np.linalg.det(m)) > 0.05 and np.linalg.cond(m) < 1e3


def well_conditioned(d):
    return arrays(float, (d, d), elements=entries).filter(_usable)


@given(words)
def test_reduction_is_idempotent_and_reduced(w):
    r = reduce_word(w)
    assert is_reduced(r)
    assert reduce_word(r) == r


@given(words, words, words)
def test_multiplication_is_associative(u, v, w):
    assert multiply(multiply(u, v), w) == multiply(u, multiply(v, w))


@given(words)
def test_inverse_cancels(w):
    assert multiply(w, inverse_word(w)) == ()
    assert parse_word(format_word(reduce_word(w))) == reduce_word(w)


@given(words, words)
def test_conjugacy_class_is_conjugation_invariant(w, u):
    conj = multiply(multiply(u, w), inverse_word(u))
    assert cyclic_reduce(conj) == cyclic_reduce(w)
    assert cyclic_reduce(w, symmetric=True) == cyclic_reduce(inverse_word(w), symmetric=True)


@settings(max_examples=50)
@given(well_conditioned(4), st.floats(0.1, 10))
def test_normalize_is_scale_invariant(m, c):
    a = normalize(m)
    assert abs(abs(np.linalg.det(np.asarray(a))) - 1) < 1e-9
    assert same_projective(a, c * m)
    assert same_projective(a, -c * m)


@settings(max_examples=50)
@given(well_conditioned(4), well_conditioned(4))
def test_spectrum_is_conjugation_invariant(g, h):
    a = spectrum(g).moduli
    b = spectrum(h @ g @ np.linalg.inv(h)).moduli
    assert np.allclose(a, b, rtol=1e-6, atol=1e-9)
    assert abs(np.prod(a) - 1) < 1e-9


@settings(max_examples=30)
@given(well_conditioned(4))
def test_exterior_square_moduli_are_pair_products(g):
    m = spectrum(g).moduli
    pairs = np.sort([m[i] * m[j] for i in range(4) for j in range(i + 1, 4)])
    got = np.sort(spectrum(exterior_power(g, 2)).moduli)
    assert np.allclose(got, pairs, rtol=1e-6)


@settings(max_examples=30)
@given(st.floats(1.05, 4.0), st.integers(3, 7))
def test_tau_ladder(lam, d):
    mods = spectrum(tau_d(np.diag([lam, 1 / lam]), d)).moduli
    assert np.allclose(mods, lam ** np.arange(d - 1, -d, -2.0), rtol=1e-9)


disk_point = st.tuples(st.floats(0, 0.95), st.floats(0, 2 * np.pi)).map(
    lambda rt: np.array([rt[0] * np.cos(rt[1]), rt[0] * np.sin(rt[1]), 1.0])
)


@given(disk_point, disk_point, disk_point)
def test_klein_metric_axioms(p, q, r):
    body = klein_disk()
    pq = hilbert_distance(body, p, q)
    assert pq == hilbert_distance(body, q, p)
    assert pq >= 0
    assert hilbert_distance(body, p, r) <= pq + hilbert_distance(body, q, r) + 1e-9
