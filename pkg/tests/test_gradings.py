import itertools
from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from setgrading.designs import Design, pg2_f3
from setgrading.errors import InputError, PreconditionError
from setgrading.gradings import (
    AbelianGroup,
    GroupGrading,
    SetGrading,
    adapted_basis,
    component_scalars,
    diag_invariants,
    e_from_grading,
    ecirc,
    grading_from_design,
    grading_from_subgroup,
    line_sum_matrix,
    pairs_from_block,
    parse_subgroup,
    root_basis,
    root_space_grading,
    structure_constants,
    two_q,
    verify_group_grading,
    verify_set_grading,
    write_subgroup,
)
from setgrading.lattice import elementary_divisors, index, lattice_from_rows
from setgrading.liealg import Character, bracket, check_automorphism, sigma, tau, tau_chi
from setgrading.roots import build_root_system, eps, inner, root_lattice, weight_lattice


# ---------------------------------------------------------------------------
# Rational containment oracle: coordinates by dense elimination over Q.


@lru_cache(maxsize=None)
def _solver(kind, n):
    basis = adapted_basis(n) if kind == "adapted" else root_basis(n)
    size = 2 * n
    cols = [[Fraction(v.entries.get((r, c), 0)) for r in range(size) for c in range(size)] for v in basis.vectors]
    # Reduce the transposed system once: rows = matrix positions, unknowns = basis coefficients.
    dim = len(cols)
    M = [[cols[k][p] for k in range(dim)] for p in range(size * size)]
    piv_rows, ops = [], []
    r = 0
    A = [row[:] + [Fraction(int(i == p)) for i in range(size * size)] for p, row in enumerate(M)]
    for c in range(dim):
        p = next(i for i in range(r, len(A)) if A[i][c])
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        r += 1
    # Row k (< dim) now expresses coefficient k as a functional on matrix entries.
    return basis, [row[dim:] for row in A[:dim]], size


def oracle_support(kind, n, x):
    basis, F, size = _solver(kind, n)
    flat = {r * size + c: v for (r, c), v in x.entries.items()}
    out = set()
    for k, f in enumerate(F):
        if sum(f[p] * v for p, v in flat.items()):
            out.add(k)
    return out


@lru_cache(maxsize=None)
def oracle_table(kind, n):
    basis, _, _ = _solver(kind, n)
    vecs = basis.vectors
    return {
        (i, j): frozenset(oracle_support(kind, n, bracket(vecs[i], vecs[j])))
        for i, j in itertools.combinations(range(len(vecs)), 2)
    }


def oracle_is_set_grading(g: SetGrading) -> bool:
    owner = g.component_of()
    hits: dict[tuple[int, int], set[int]] = {}
    for (i, j), supp in oracle_table(g.basis.kind, g.n).items():
        if supp:
            key = tuple(sorted((owner[i], owner[j])))
            hits.setdefault(key, set()).update(owner[k] for k in supp)
    return all(len(h) == 1 for h in hits.values())


def subgroups_between(n):
    """Every E with 2Q <= E <= Q, as lattices (spans of subsets of Q/2Q)."""
    rs = build_root_system(n)
    reps = []
    for mask in range(1, 2**n):
        reps.append([sum(a[i] for k, a in enumerate(rs.simple_roots) if mask >> k & 1) for i in range(n)])
    seen, out = set(), []
    for size in range(0, n + 1):
        for combo in itertools.combinations(reps, size):
            E = lattice_from_rows([list(r) for r in two_q(n).basis] + [list(c) for c in combo], n)
            if E not in seen:
                seen.add(E)
                out.append(E)
    return out


def base_gradings():
    out = [grading_from_design(Design(4, ((1, 2, 3, 4),)))]
    out += [root_space_grading(n) for n in (2, 3, 4)]
    for n in (2, 3, 4):
        out += [grading_from_subgroup(n, E).underlying for E in subgroups_between(n)]
    return out


BASE = base_gradings()


def mutate(g, moves, rnd):
    comps = [list(c) for c in g.components]
    for kind in moves:
        if len(comps) < 2:
            break
        a, b = rnd.sample(range(len(comps)), 2)
        if kind == "merge":
            moved = comps[b]
            comps[a] = comps[a] + moved
            del comps[b]
        elif len(comps[a]) > 1:
            k = rnd.choice(comps[a])
            comps[a].remove(k)
            comps[b].append(k)
    return SetGrading(g.basis, tuple(tuple(c) for c in comps))


@pytest.mark.parametrize("g", BASE, ids=lambda g: f"{g.basis.kind}-n{g.n}-{len(g.components)}")
def test_oracle_agrees_on_every_small_grading(g):
    assert (verify_set_grading(g) is None) == oracle_is_set_grading(g)
    assert verify_set_grading(g) is None


@settings(max_examples=150, deadline=None)
@given(
    st.sampled_from(BASE),
    st.lists(st.sampled_from(["merge", "move"]), min_size=1, max_size=3),
    st.randoms(use_true_random=False),
)
def test_oracle_agrees_on_mutated_partitions(g, moves, rnd):
    h = mutate(g, moves, rnd)
    assert (verify_set_grading(h) is None) == oracle_is_set_grading(h)


@pytest.mark.parametrize("kind, n", [("adapted", 3), ("root", 3), ("adapted", 4)])
def test_structure_table_matches_oracle(kind, n):
    basis = adapted_basis(n) if kind == "adapted" else root_basis(n)
    table = structure_constants(basis)
    for key, supp in oracle_table(kind, n).items():
        assert set(table.get(key, {})) == supp


# ---------------------------------------------------------------------------
# The adapted basis


@pytest.mark.parametrize("n", [3, 4, 6])
def test_adapted_coordinates_round_trip(n):
    b = adapted_basis(n)
    for k, v in enumerate(b.vectors):
        assert b.coordinates(v) == {k: 1}
        assert b.algebra.combine(b.to_algebra_coords({k: 1})) == v
    assert all(sigma(v) == (-v if b.labels[k][1] == "-" or k < n else v) for k, v in enumerate(b.vectors))


def test_pairs_from_block_are_orthogonal_and_partition_block_roots():
    n = 6
    pairs = pairs_from_block((1, 3, 4, 6), n)
    assert len(pairs) == 6
    for a, b in pairs:
        assert inner(a, b) == 0
        assert sum(a) >= 0 and sum(b) >= 0
    roots = sorted(r for p in pairs for r in p)
    support = {0, 2, 3, 5}
    expect = sorted(a for a in build_root_system(n).positive_roots if {i for i, x in enumerate(a) if x} <= support)
    assert roots == expect
    with pytest.raises(InputError):
        pairs_from_block((3, 2, 4, 5), n)


# ---------------------------------------------------------------------------
# The D13 grading


def test_d13_shape(d13):
    assert len(d13.components) == 157
    assert d13.dimension_histogram() == {13: 1, 2: 156}
    assert sum(map(len, d13.components)) == 325
    assert d13.cartan_component() == 0


def test_d13_verifies(d13):
    assert verify_set_grading(d13) is None


def test_d13_components_are_abelian(d13):
    vecs = d13.basis.vectors
    for comp in d13.components[1:]:
        a, b = comp
        assert not bracket(vecs[a], vecs[b])


def test_merging_pairs_across_lines_breaks_the_grading(d13):
    comps = [list(c) for c in d13.components]
    # components 1 and 13 belong to the first two lines (different blocks)
    assert d13.labels[1][0] != d13.labels[13][0]
    merged = comps[:1] + [comps[1] + comps[13]] + comps[2:13] + comps[14:]
    bad = SetGrading(d13.basis, tuple(map(tuple, merged)))
    cex = verify_set_grading(bad)
    assert cex is not None and len(cex.hits) > 1
    assert "meets components" in cex.describe()


def test_d13_lattice_and_line_sums(d13):
    E = e_from_grading(d13)
    assert index(E, root_lattice(13)) == 2
    assert index(E, weight_lattice(13)) == 4
    A = line_sum_matrix(pg2_f3())
    assert len(A) == 26
    assert [x for x in elementary_divisors(A) if x] == [1] * 12 + [4]
    assert lattice_from_rows(A, 13) == E


def test_d13_diagonal_group(d13):
    assert diag_invariants(d13) == [2, 2]
    for phi in (sigma, tau):
        s = component_scalars(d13, phi)
        assert s is not None and set(s) == {1, -1}


def test_sigma_tau_automorphisms_at_rank_13():
    assert check_automorphism(sigma, 13)
    assert check_automorphism(tau, 13)


def test_design_grading_requires_steiner_system():
    with pytest.raises(PreconditionError):
        grading_from_design(Design(13, pg2_f3().blocks[1:]))


# ---------------------------------------------------------------------------
# Pure gradings


def test_d4_example():
    E = lattice_from_rows([list(r) for r in two_q(4).basis] + [[1, 1, 1, 1]], 4)
    gg = grading_from_subgroup(4, E)
    assert verify_group_grading(gg) is None
    assert ecirc(4, E) == E
    assert diag_invariants(gg.underlying) == [2, 2, 2, 2]
    assert gg.group.torsion == (2, 2, 2, 2)
    single = grading_from_design(Design(4, ((1, 2, 3, 4),)))
    assert single.canonical() == gg.underlying.canonical()


def test_d6_example_has_ecirc_2q():
    E = lattice_from_rows([list(r) for r in two_q(6).basis] + [[1] * 6], 6)
    assert ecirc(6, E) == two_q(6)
    assert verify_group_grading(grading_from_subgroup(6, E)) is None


def test_gamma_q_is_the_sigma_eigenspace_grading():
    n = 5
    gg = grading_from_subgroup(n, root_lattice(n))
    assert gg.group.torsion == (2,)
    assert len(gg.underlying.components) == 2
    s = component_scalars(gg.underlying, sigma)
    assert sorted(s) == [-1, 1]


@pytest.mark.parametrize("n", range(4, 9))
def test_gamma_2w(n):
    E = lattice_from_rows([[2 * int(i == j) for j in range(n)] for i in range(n)], n)
    gg = grading_from_subgroup(n, E)
    assert len(gg.underlying.components) == 1 + n * (n - 1)
    assert gg.underlying.cartan_component() is not None
    assert verify_group_grading(gg) is None


@pytest.mark.parametrize("n", [2, 3, 4])
def test_e_read_back_from_pure_grading_is_ecirc(n):
    for E in subgroups_between(n):
        g = grading_from_subgroup(n, E).underlying
        assert e_from_grading(g) == ecirc(n, E)


def _chars_subgroups(n):
    rows = [list(r) for r in two_q(n).basis]
    cands = [lattice_from_rows(rows, n), root_lattice(n), lattice_from_rows(rows + [list(eps(n, 1, 2))], n)]
    cands.append(lattice_from_rows([[2 * int(i == j) for j in range(n)] for i in range(n)], n))
    if n % 2 == 0:
        cands.append(lattice_from_rows(rows + [[1] * n], n))
    if n >= 4:
        cands.append(lattice_from_rows(rows + [list(eps(n, 1, 2, 3, 4))], n))
    return cands


@pytest.mark.parametrize("n", range(2, 7))
def test_tau_chi_preserves_components_iff_it_kills_ecirc(n):
    for E in _chars_subgroups(n):
        g = grading_from_subgroup(n, E).underlying
        Ec = ecirc(n, E)
        for chi in Character.all(n):
            kills = all(chi(r) == 1 for r in Ec.basis)
            preserved = component_scalars(g, lambda x: tau_chi(chi, x)) is not None
            assert preserved == kills, (n, E, chi)


def test_subgroup_outside_range_is_refused():
    with pytest.raises(PreconditionError):
        grading_from_subgroup(4, lattice_from_rows([[1, 0, 0, 0]] + [list(r) for r in two_q(4).basis], 4))
    with pytest.raises(PreconditionError):
        ecirc(3, lattice_from_rows([[1, 1, 0]], 3))


def test_group_grading_needs_injective_labels():
    g = root_space_grading(3)
    with pytest.raises(InputError, match="cannot be labeled injectively"):
        GroupGrading(AbelianGroup((2, 2)), tuple([(0, 0)] * len(g.components)), g)


def test_subgroup_file_round_trip_and_errors():
    n, E = parse_subgroup(write_subgroup(4, [[1, 1, 1, 1]]))
    assert n == 4 and [1, 1, 1, 1] in E and list(eps(4, 1, -2)) not in E
    with pytest.raises(InputError, match="line 2"):
        parse_subgroup("4\n1 1 1\n")
    with pytest.raises(InputError, match="empty"):
        parse_subgroup("# nothing\n")


def test_set_grading_partition_checks():
    b = adapted_basis(2)
    with pytest.raises(InputError):
        SetGrading(b, ((0, 1),))
    with pytest.raises(InputError):
        SetGrading(b, ((0, 0), tuple(range(1, b.dimension))))
