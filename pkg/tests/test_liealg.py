import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from setgrading.errors import InputError
from setgrading.liealg import (
    Character,
    OrthoElement,
    bracket,
    build_algebra,
    cartan_element,
    check_automorphism,
    rational_rank,
    root_vector,
    sigma,
    tau,
    tau_chi,
    unit,
)
from setgrading.roots import build_root_system, eps, inner


@pytest.mark.parametrize("n", range(2, 7))
def test_basis_spans_so2n(n):
    b = build_algebra(n)
    assert b.dimension == 2 * n * n - n
    assert all(x.is_orthogonal() for x in b.elements)
    assert rational_rank([x.entries for x in b.elements]) == b.dimension


@pytest.mark.parametrize("n", [2, 3, 4])
def test_antisymmetry_and_jacobi_exhaustive(n):
    els = build_algebra(n).elements
    for x, y in itertools.product(els, repeat=2):
        assert bracket(x, y) == -bracket(y, x)
    for x, y, z in itertools.combinations(els, 3):
        j = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
        assert not j


@pytest.mark.parametrize("n", [3, 4, 5])
def test_root_vectors_are_weight_vectors(n):
    for a in build_root_system(n).roots:
        x = root_vector(n, a)
        for i in range(n):
            assert bracket(cartan_element(n, i), x) == x * a[i]


@pytest.mark.parametrize("n", [3, 5])
def test_root_bracket_lands_in_sum_root_space(n):
    rs = build_root_system(n)
    for a, b in itertools.combinations(rs.roots, 2):
        s = tuple(x + y for x, y in zip(a, b))
        br = bracket(root_vector(n, a), root_vector(n, b))
        if inner(s, s) == 2:
            assert br and (br == root_vector(n, s) or br == -root_vector(n, s))
        elif any(s):
            assert not br


def test_sigma_signs_on_root_vectors():
    n = 5
    for i, j in itertools.permutations(range(1, n + 1), 2):
        assert sigma(root_vector(n, eps(n, i, -j))) == -root_vector(n, eps(n, j, -i))
    for i, j in itertools.combinations(range(1, n + 1), 2):
        assert sigma(root_vector(n, eps(n, i, j))) == root_vector(n, eps(n, -i, -j))
    for i in range(n):
        assert sigma(cartan_element(n, i)) == -cartan_element(n, i)


@pytest.mark.parametrize("n", [3, 4])
def test_sigma_and_tau_are_automorphisms(n):
    assert check_automorphism(sigma, n)
    assert check_automorphism(tau, n)
    for x in build_algebra(n).elements:
        assert sigma(sigma(x)) == x and tau(tau(x)) == x


def test_non_automorphisms_are_rejected():
    n = 3
    b = build_algebra(n)
    doubled = {k: (x * 2 if k == n else x) for k, x in enumerate(b.elements)}
    assert not check_automorphism(doubled, n)
    assert not check_automorphism(lambda x: x.transpose(), n)  # leaves so(2n)
    collapse = {k: b.elements[0] for k in range(b.dimension)}
    assert not check_automorphism(collapse, n)


@pytest.mark.parametrize("n", [3, 4])
def test_every_tau_chi_is_an_automorphism(n):
    for chi in list(Character.all(n))[:: 3 if n == 4 else 1]:
        assert check_automorphism(lambda x, chi=chi: tau_chi(chi, x), n)


def test_character_values_are_multiplicative():
    n = 4
    rs = build_root_system(n)
    for chi in Character.all(n):
        for a, b in itertools.product(rs.roots, repeat=2):
            s = tuple(x + y for x, y in zip(a, b))
            assert chi(s) == chi(a) * chi(b)


def test_character_from_function():
    n = 4
    parity_first = lambda v: -1 if v[0] % 2 else 1  # noqa: E731
    chi = Character.from_function(n, parity_first)
    assert chi.signs == (-1, 1, 1, 1)
    with pytest.raises(InputError):
        Character.from_function(n, lambda v: -1 if v == eps(n, 1, -2) else 1)
    with pytest.raises(InputError):
        Character(n, (1, 1))


def _element(n):
    b = build_algebra(n)
    return st.dictionaries(
        st.integers(0, b.dimension - 1),
        st.fractions(min_value=-3, max_value=3, max_denominator=3),
        max_size=6,
    ).map(b.combine)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_coordinates_invert_combine(data):
    n = data.draw(st.integers(2, 5))
    b = build_algebra(n)
    coords = data.draw(
        st.dictionaries(
            st.integers(0, b.dimension - 1),
            st.fractions(min_value=-3, max_value=3, max_denominator=4).filter(bool),
            max_size=8,
        )
    )
    assert b.coordinates(b.combine(coords)) == dict(sorted(coords.items()))


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 4).flatmap(lambda n: st.tuples(_element(n), _element(n), _element(n))))
def test_jacobi_on_random_combinations(xyz):
    x, y, z = xyz
    assert not (bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y)))
    assert bracket(x, y).is_orthogonal()


def test_orthogonality_test():
    n = 2
    assert unit(n, (0, 0, 1), (2, 2, -1)).is_orthogonal()
    assert not unit(n, (0, 0, 1)).is_orthogonal()
    assert not unit(n, (0, 2, 1)).is_orthogonal()  # B must be skew
    assert OrthoElement(n, {(0, 1): Fraction(1, 2), (3, 2): Fraction(-1, 2)}).is_orthogonal()


def test_rational_rank_dense_and_sparse():
    assert rational_rank([[1, 2], [2, 4]]) == 1
    assert rational_rank([{0: 1}, {1: Fraction(1, 3)}, {0: 2, 1: 1}]) == 2
    assert rational_rank([]) == 0
