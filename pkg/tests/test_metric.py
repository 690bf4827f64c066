import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from affine_cocycles.errors import BudgetExceeded, DomainError
from affine_cocycles.groups import FreeGroup, eval_word, load_finite_group, parse_group_spec
from affine_cocycles.metric import LengthFunction, ball, distance, growth_constant, length


def lattice_ball_count(d, R):
    """Brute-force oracle: integer points with l1 norm <= R."""
    return sum(1 for p in itertools.product(range(-R, R + 1), repeat=d)
               if sum(map(abs, p)) <= R)


def test_length_examples(f2, lf2):
    assert length(lf2, ()) == 0
    assert length(lf2, (1, 2, -1)) == 3
    z3 = parse_group_spec("zd:3")
    assert length(LengthFunction(z3), (1, -2, 3)) == 6


def test_distance_examples(f2, lf2, lz1):
    g = (1, 2)
    assert distance(lf2, g, g) == 0
    assert distance(lz1, (2,), (7,)) == 5
    assert distance(lf2, (1, 2), (2,)) == 3


def test_ball_examples(f2, lf2, lz1):
    for m in (f2, parse_group_spec("heis3"), parse_group_spec("zd:2")):
        c = m.random_element(random.Random(0), 5)
        B = ball(LengthFunction(m), c, 0)
        assert B.elements == {c} and B.cardinality == 1
    assert ball(lf2, (), 2).cardinality == 17
    assert ball(lz1, (0,), 3).elements == {(i,) for i in range(-3, 4)}


@pytest.mark.parametrize("rank", [1, 2, 3])
def test_free_sphere_counts(rank):
    L = LengthFunction(FreeGroup(rank))
    spheres = L.spheres(7)
    for R in range(1, 8):
        assert len(spheres[R]) == 2 * rank * (2 * rank - 1) ** (R - 1)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_lattice_ball_counts(d):
    L = LengthFunction(parse_group_spec(f"zd:{d}"))
    for R in range(0, 6):
        assert ball(L, L.model.identity, R).cardinality == lattice_ball_count(d, R)


def test_heisenberg_sphere_sizes():
    # independent BFS over 3x3 matrices
    def mm(x, y):
        return tuple(tuple(sum(x[i][k] * y[k][j] for k in range(3)) for j in range(3)) for i in range(3))
    I = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    X = ((1, 1, 0), (0, 1, 0), (0, 0, 1))
    Xi = ((1, -1, 0), (0, 1, 0), (0, 0, 1))
    Y = ((1, 0, 0), (0, 1, 1), (0, 0, 1))
    Yi = ((1, 0, 0), (0, 1, -1), (0, 0, 1))
    seen, frontier, sizes = {I}, [I], [1]
    for _ in range(6):
        nxt = []
        for g in frontier:
            for s in (X, Xi, Y, Yi):
                h = mm(g, s)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        sizes.append(len(nxt))
        frontier = nxt
    L = LengthFunction(parse_group_spec("heis3"))
    assert [len(s) for s in L.spheres(6)] == sizes == [1, 4, 12, 36, 82, 164, 294]


def test_bfs_matches_closed_form():
    for spec in ("free:2", "zd:2", "zd:3"):
        m = parse_group_spec(spec)
        closed, bfs = LengthFunction(m, "closed"), LengthFunction(m, "bfs")
        rng = random.Random(5)
        for _ in range(300):
            g = m.random_element(rng, rng.randint(0, 8))
            assert closed(g) == bfs(g)


def test_closed_mode_unavailable():
    with pytest.raises(ValueError):
        LengthFunction(parse_group_spec("heis3"), mode="closed")


def test_growth_examples(lz1, lf2, trivial_file):
    est = growth_constant(lz1, 5)
    assert est.a == pytest.approx(math.log(3), abs=1e-12)
    assert est.per_radius == tuple((R, 2 * R + 1) for R in range(1, 6))
    est = growth_constant(lf2, 5)
    assert est.a == pytest.approx(math.log(5), abs=1e-12)
    assert est.max_radius == 5
    m = load_finite_group(trivial_file)
    assert growth_constant(LengthFunction(m), 4).a == 1.0
    with pytest.raises(DomainError):
        growth_constant(lz1, 0)


def test_growth_bound_holds(infinite_model):
    L = LengthFunction(infinite_model)
    est = growth_constant(L, 6)
    for R, card in est.per_radius:
        assert math.log(card) <= est.a * R + 1e-12


def test_finite_group_balls(s3_file):
    m = load_finite_group(s3_file)
    L = LengthFunction(m)
    assert ball(L, m.identity, 10).cardinality == 6
    # {t, r, r^2} reaches 3 elements at distance 1, the last 2 at distance 2
    assert [len(s) for s in L.spheres(3)] == [1, 3, 2, 0]
    assert max(L((i,)) for i in range(6)) == 2


def test_budget_error(lf2):
    L = LengthFunction(lf2.model, budget=100)
    with pytest.raises(BudgetExceeded) as exc:
        ball(L, (), 5)
    assert exc.value.radius == 4
    assert exc.value.partial_count > 100
    # cache stays consistent after the failure
    assert ball(L, (), 3).cardinality == 53


def test_bfs_length_budget():
    m = parse_group_spec("heis3")
    L = LengthFunction(m, budget=1000)
    with pytest.raises(BudgetExceeded):
        L((0, 0, 10_000))


@pytest.mark.parametrize("spec", ["free:2", "zd:2", "heis3"])
def test_length_axioms_1000_samples(spec):
    m = parse_group_spec(spec)
    L = LengthFunction(m)
    rng = random.Random(2024)
    for _ in range(1000):
        g = m.random_element(rng, rng.randint(0, 10))
        h = m.random_element(rng, rng.randint(0, 10))
        assert isinstance(L(g), int) and L(g) >= 0
        assert (L(g) == 0) == (g == m.identity)
        assert L(m.inv(g)) == L(g)
        assert L(m.mul(g, h)) <= L(g) + L(h)


@pytest.mark.parametrize("spec", ["free:2", "zd:2", "heis3"])
def test_left_invariance_and_symmetry(spec):
    m = parse_group_spec(spec)
    L = LengthFunction(m)
    rng = random.Random(11)
    for _ in range(300):
        g, h, c = (m.random_element(rng, rng.randint(0, 8)) for _ in range(3))
        assert L.dist(m.mul(c, g), m.mul(c, h)) == L.dist(g, h) == L.dist(h, g)


def test_ball_nesting(infinite_model):
    L = LengthFunction(infinite_model)
    prev = frozenset()
    total = 0
    for R, sphere in enumerate(L.spheres(5)):
        B = ball(L, infinite_model.identity, R)
        total += len(sphere)
        assert prev <= B.elements and B.cardinality == total
        prev = B.elements


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 1), st.sampled_from([1, -1])), max_size=6),
       st.integers(0, 3))
def test_translated_ball_members(tokens, R):
    from affine_cocycles.groups import Word
    m = FreeGroup(2)
    L = LengthFunction(m)
    c = eval_word(m, Word(tuple(tokens)))
    B = ball(L, c, R)
    assert all(L.dist(c, g) <= R for g in B.elements)
    assert B.cardinality == 2 * 3 ** R - 1
