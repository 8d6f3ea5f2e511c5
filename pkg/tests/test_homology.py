import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistspec.errors import NotClosed, SingularLattice
from twistspec.graph import Graph, k4, theta_graph
from twistspec.homology import (
    Character,
    OneForm,
    abelianize,
    boundary_matrix,
    char_value,
    character_kernel,
    character_of,
    complexity,
    differential_matrix,
    form_of,
    harmonic_form_of,
    hodge_decompose,
    homology_data,
    is_harmonic,
    orthogonality_check,
    quotient_group,
    torus_volume,
)

from strategies import graphs


@settings(max_examples=40, deadline=None)
@given(graphs(min_genus=0), st.integers(0, 2**32 - 1))
def test_hodge_decomposition(G, seed):
    rng = np.random.default_rng(seed)
    omega = OneForm(rng.normal(size=G.m))
    harmonic, exact = hodge_decompose(G, omega)
    assert np.allclose(harmonic.coeffs + exact.coeffs, omega.coeffs)
    assert is_harmonic(G, harmonic)
    # exact part lies in the image of d
    d = differential_matrix(G).astype(float)
    f, *_ = np.linalg.lstsq(d, exact.coeffs, rcond=None)
    assert np.allclose(d @ f, exact.coeffs, atol=1e-9)
    # orthogonal pieces
    assert abs(np.dot(harmonic.coeffs, exact.coeffs)) < 1e-9


@settings(max_examples=40, deadline=None)
@given(graphs(min_genus=0))
def test_basis_and_dual_basis(G):
    H = homology_data(G)
    B = boundary_matrix(G)
    assert np.all(B @ H.basis.T == 0)  # every u_i is a cycle
    assert np.array_equal(H.abel_matrix @ H.basis.T, np.eye(H.g, dtype=int))
    # phi(de_i)(u_j) = delta_ij
    assert np.allclose(H.dual_basis @ H.basis.T, np.eye(H.g))
    for row in H.dual_basis:
        assert is_harmonic(G, OneForm(row))


def test_theta_basis_orientation():
    H = homology_data(theta_graph(1, 2, 3))
    assert H.basis.tolist() == [[-1, 1, 1, 0, 0, 0], [-1, 0, 0, 1, 1, 1]]


def test_abelianize_triangle(K4):
    H = homology_data(K4)
    tri = abelianize(H, [0, 1, 4 + K4.m])
    assert tri.tolist() == [1, 0, 0]
    with pytest.raises(NotClosed):
        abelianize(H, [0, 1])


@settings(max_examples=40, deadline=None)
@given(graphs(), st.integers(0, 2**32 - 1))
def test_gauge_invariance_of_characters(G, seed):
    rng = np.random.default_rng(seed)
    H = homology_data(G)
    omega = OneForm(rng.random(G.m))
    f = rng.normal(size=G.n)
    shift = rng.integers(-3, 4, size=G.m)
    moved = OneForm(omega.coeffs + differential_matrix(G) @ f + shift)
    assert character_of(H, moved) == character_of(H, omega)


@settings(max_examples=40, deadline=None)
@given(graphs(), st.integers(0, 2**32 - 1))
def test_form_and_harmonic_representatives(G, seed):
    rng = np.random.default_rng(seed)
    H = homology_data(G)
    chi = Character(tuple(rng.random(H.g)))
    assert character_of(H, form_of(H, chi)) == chi
    assert character_of(H, harmonic_form_of(H, chi)) == chi


@settings(max_examples=40, deadline=None)
@given(graphs(), st.integers(0, 2**32 - 1))
def test_char_value_on_chains_and_coordinates(G, seed):
    rng = np.random.default_rng(seed)
    H = homology_data(G)
    chi = Character(tuple(rng.random(H.g)))
    alpha = rng.integers(-3, 4, size=H.g)
    chain = H.basis.T @ alpha
    v = char_value(H, chi, alpha)
    assert abs(abs(v) - 1) < 1e-12
    if G.m != H.g:
        assert abs(char_value(H, chi, chain) - v) < 1e-9
    assert abs(char_value(H, form_of(H, chi), alpha) - v) < 1e-9


def test_character_wraps_and_compares():
    assert Character((1.0 - 1e-15, 0.25)) == Character((0.0, 0.25))
    assert Character((-0.25,)).coords == (0.75,)
    assert (Character((0.75,)) + Character((0.5,))).coords == (0.25,)
    assert Character((0.5, 0.5)).scaled(2).is_trivial()


def test_k4_quotients():
    G = k4()
    H = homology_data(G)
    w1 = OneForm(np.array([1, 1, 1, 1, 0, 0]) / 6)
    chi = character_of(H, w1)
    assert chi == Character((1 / 3, 1 / 3, 1 / 3))
    Q3 = quotient_group(H, character_kernel(chi, 3))
    assert Q3.invariants == (1, 1, 3) and Q3.order == 3
    Q6 = quotient_group(H, character_kernel(character_of(H, w1 * 0.5), 6))
    assert Q6.invariants == (1, 1, 6)


def test_singular_lattice():
    with pytest.raises(SingularLattice):
        quotient_group(2, [[1, 2], [2, 4]])
    with pytest.raises(SingularLattice):
        quotient_group(2, [[1, 0, 0]])


lattices = st.integers(1, 3).flatmap(
    lambda g: st.lists(st.lists(st.integers(-4, 4), min_size=g, max_size=g), min_size=g, max_size=g)
)


@settings(max_examples=60, deadline=None)
@given(lattices, st.integers(0, 2**32 - 1))
def test_quotient_group_structure(M, seed):
    try:
        Q = quotient_group(len(M), M)
    except SingularLattice:
        return
    rng = np.random.default_rng(seed)
    g = len(M)
    # lattice generators vanish in Q
    for j in range(g):
        assert all(x == 0 for x in Q.class_of([M[i][j] for i in range(g)]))
    alpha = rng.integers(-6, 7, size=g)
    beta = rng.integers(-6, 7, size=g)
    assert Q.class_of(alpha + beta) == Q.add(Q.class_of(alpha), Q.class_of(beta))
    # dual characters are the pairing, read through class_of
    if Q.order <= 64:
        for k in Q.elements:
            chi = Q.dual_character(k)
            assert abs(np.exp(2j * np.pi * np.dot(chi.coords, alpha)) - Q.pairing(k, Q.class_of(alpha))) < 1e-9
        ok, pair = orthogonality_check(Q)
        assert ok, pair


def test_divide_in_cyclic_group():
    Q = quotient_group(1, [[6]])
    assert Q.divide((0,), 2) == [(0,), (3,)]
    assert Q.divide((1,), 2) == []
    assert Q.divide((1,), 5) == [(5,)]


def test_complexity_and_volume(K4, G1):
    assert complexity(K4) == 16
    assert complexity(G1) == 11
    assert complexity(Graph(3, ((0, 1), (1, 2)))) == 1
    assert torus_volume(K4) == pytest.approx(0.25)
    Q = quotient_group(3, [[2, 0, 0], [0, 2, 0], [0, 0, 2]])
    assert torus_volume(K4, Q) == pytest.approx(0.25 / 8)


def test_complexity_of_multigraph():
    # two vertices joined by three parallel edges and a loop
    assert complexity(Graph(2, ((0, 1), (0, 1), (1, 0), (1, 1)))) == 3
