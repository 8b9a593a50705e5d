from fractions import Fraction
from math import gcd

import pytest
from hypothesis import assume, given, strategies as st

from dedekind_todd.cones import (
    ConeChain, LatticeCone, boundary, cone_from_json, cone_to_json, dual_cone, hermite_diagonal,
    nonsingular_subdivision, outer_inner_split, parallelepiped_lattice_points,
    parallelepiped_points_bruteforce, standard_cone, subdivide, subdivision_tree,
)
from conftest import random_input


def unit(n):
    return LatticeCone([tuple(int(i == j) for j in range(n)) for i in range(n)])


@st.composite
def cones(draw, dims=(2, 3), maxdet=40):
    n = draw(st.sampled_from(dims))
    vec = st.tuples(*[st.integers(-4, 4)] * n).filter(any)
    gens = [tuple(x // gcd(*g) for x in g) for g in draw(st.lists(vec, min_size=n, max_size=n))]
    c = LatticeCone(gens)
    assume(c.det != 0 and abs(c.det) <= maxdet)
    return c


def test_standard_cone_examples():
    c = standard_cone(3, [1])
    assert c.generators == ((1, 0), (1, 3)) and c.det == 3
    assert standard_cone(5, [2, 3]).generators == ((1, 0, 0), (0, 1, 0), (2, 3, 5))
    assert standard_cone(5, [2, 3]).det == 5
    with pytest.raises(ValueError):
        standard_cone(4, [2])


def test_nonprimitive_generator_rejected():
    with pytest.raises(ValueError):
        LatticeCone([(2, 0), (0, 1)])


def test_dual_examples():
    assert dual_cone(standard_cone(7, [2, 3])).generators == ((7, 0, -2), (0, 7, -3), (0, 0, 1))
    assert dual_cone(unit(3)) == unit(3)
    assert dual_cone(LatticeCone([(1, 0), (1, 2)])).generators == ((2, -1), (0, 1))
    with pytest.raises(ValueError):
        dual_cone(LatticeCone([(1, 0), (1, 0)]))


@given(cones())
def test_dual_pairing_and_involution(c):
    d = dual_cone(c)
    for i, u in enumerate(d.generators):
        for j, v in enumerate(c.generators):
            s = sum(a * b for a, b in zip(u, v))
            assert (s > 0) if i == j else (s == 0)
    assert set(dual_cone(d).generators) == set(c.generators)


def test_parallelepiped_examples():
    assert parallelepiped_lattice_points(unit(3)) == [(0, 0, 0)]
    assert sorted(parallelepiped_lattice_points(LatticeCone([(1, 0), (1, 2)]))) == [(0, 0), (1, 1)]
    # dual of C(3;1): points (k/3) u_1 + <k/3> u_2 for k = 0, 1, 2
    d = dual_cone(standard_cone(3, [1]))
    expected = set()
    for k in range(3):
        pt = [Fraction(k, 3) * a + (Fraction(k, 3) % 1) * b for a, b in zip(*d.generators)]
        expected.add(tuple(int(x) for x in pt))
    assert set(parallelepiped_lattice_points(d)) == expected


@given(cones(dims=(2, 3, 4), maxdet=60))
def test_parallelepiped_matches_bruteforce(c):
    pts = parallelepiped_lattice_points(c)
    assert len(pts) == abs(c.det)
    assert sorted(pts) == sorted(parallelepiped_points_bruteforce(c))
    for w in pts:
        assert all(0 <= a < 1 for a in c.barycentric(w))


def test_hermite_diagonal_product():
    c = standard_cone(12, [5, 7])
    diag = hermite_diagonal(c.generators)
    assert abs(diag[0] * diag[1] * diag[2]) == 12


def test_boundary_examples():
    v1, v2 = (1, 0), (1, 2)
    assert boundary(LatticeCone([v1, v2])) == ConeChain({LatticeCone([v2]): 1, LatticeCone([v1]): -1})
    assert len(boundary(boundary(standard_cone(5, [2, 3])))) == 0
    assert len(boundary(ConeChain())) == 0


@given(st.lists(st.tuples(st.lists(st.tuples(*[st.integers(-2, 2)] * 4).filter(any), min_size=1,
                                   max_size=4), st.integers(-3, 3)), max_size=4))
def test_boundary_squared_is_zero(raw):
    chain = ConeChain()
    for gens, k in raw:
        gens = [tuple(x // gcd(*g) for x in g) for g in gens]
        chain = chain + ConeChain.of(LatticeCone(gens, 4), k)
    assert len(boundary(boundary(chain))) == 0


def test_subdivide_example():
    chain = subdivide(LatticeCone([(1, 0), (1, 2)]), (1, 1)).canonical()
    full = {c: k for c, k in chain if c.m == 2}
    assert {c.generators for c in full} == {((1, 0), (1, 1)), ((1, 1), (1, 2))}
    assert all(abs(c.det) == 1 for c in full)


def test_subdivide_unit_square():
    chain = subdivide(unit(2), (1, 1)).canonical()
    full = [c for c, _ in chain if c.m == 2]
    assert len(full) == 2 and all(abs(c.det) == 1 for c in full)


def test_subdivide_by_generator_leaves_degenerate_cones():
    c = LatticeCone([(1, 0), (1, 2)])
    chain = subdivide(c, (1, 0))
    assert any(k.is_degenerate for k, _ in chain if k.m == 2)
    with pytest.raises(ValueError):
        subdivide(c, (2, 2))


def _contains(cone, point, strict):
    a = cone.barycentric(point)
    return all(x > 0 for x in a) if strict else all(x >= 0 for x in a)


@given(cones(dims=(2, 3), maxdet=40), st.randoms(use_true_random=False))
def test_subdivision_is_a_partition(c, rnd):
    leaves = [d for _, d in nonsingular_subdivision(c)]
    assert all(abs(d.det) == 1 and d.orientation == c.orientation for d in leaves)
    # pieces cover the cone and their interiors are disjoint
    for _ in range(5):
        weights = [rnd.randint(1, 10 ** 6) for _ in c.generators]
        pt = [sum(w * g[i] for w, g in zip(weights, c.generators)) for i in range(c.dim)]
        assert sum(_contains(d, pt, False) for d in leaves) >= 1
        assert sum(_contains(d, pt, True) for d in leaves) <= 1


def test_nonsingular_cone_is_its_own_subdivision():
    c = LatticeCone([(2, 1), (1, 1)])
    assert nonsingular_subdivision(c) == [(1, c)]
    outer, inner = outer_inner_split(c, nonsingular_subdivision(c))
    assert outer == [c, c] and inner == []


def test_outer_cones_standard():
    c = standard_cone(3, [1])
    outer, inner = outer_inner_split(c, nonsingular_subdivision(c))
    assert len(outer) == 2
    for j, d in enumerate(outer):
        assert set(c.generators) - {c.generators[j]} <= set(d.generators)
    c = standard_cone(5, [2, 3])
    outer, inner = outer_inner_split(c, nonsingular_subdivision(c))
    assert len(outer) == 3 and all(abs(d.det) == 1 for d in outer)


def test_outer_split_rejects_uncovered_facet():
    c = standard_cone(3, [1])
    with pytest.raises(ValueError):
        outer_inner_split(c, [unit(2)])


def test_json_roundtrip():
    c = standard_cone(7, [2, 3])
    assert cone_from_json(cone_to_json(c)) == c
    with pytest.raises(ValueError):
        cone_from_json('{"generators": []}')


def test_subdivision_tree_rays_are_interior_points(rng):
    for _ in range(20):
        q, p = random_input(rng, 3, 20)
        node = subdivision_tree(standard_cone(q, p))
        if node.ray is not None:
            assert all(0 <= a < 1 for a in node.cone.barycentric(node.ray))
