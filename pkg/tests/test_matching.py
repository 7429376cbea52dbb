import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from homocover.matching import components_after_removal, max_matching
from homocover.oracle import max_independent_bruteforce, max_matching_bruteforce

import reference as ref

PETERSEN = [(i, (i + 1) % 5) for i in range(5)] + [(i, i + 5) for i in range(5)] + \
           [(5 + i, 5 + (i + 2) % 5) for i in range(5)]


def _is_matching(n, edges, pairs):
    es = {frozenset(e) for e in edges}
    used = [v for e in pairs for v in e]
    return len(used) == len(set(used)) and all(frozenset(e) in es for e in pairs)


@pytest.mark.parametrize("n,edges,size", [
    (3, [(0, 1), (1, 2), (0, 2)], 1),
    (4, [(0, 1), (1, 2), (2, 3)], 2),
    (10, PETERSEN, 5),
    (4, list(itertools.combinations(range(4), 2)), 2),
    (6, [(0, i) for i in range(1, 6)], 1),
    (5, [], 0),
    (1, [], 0),
])
def test_known_graphs(n, edges, size):
    m = max_matching(n, edges)
    assert len(m) == size
    assert m.certified
    assert _is_matching(n, edges, m.edges)
    assert max_matching_bruteforce(n, edges) == size
    assert ref.max_matching(n, edges) == size


def test_independent_bruteforce_examples():
    assert max_independent_bruteforce(3, [(0, 1), (1, 2), (0, 2)]) == 1
    assert max_independent_bruteforce(5, []) == 5
    assert max_independent_bruteforce(5, [(i, (i + 1) % 5) for i in range(5)]) == 2
    assert max_independent_bruteforce(10, PETERSEN) == ref.max_independent(10, PETERSEN) == 4


def test_tutte_certificate_on_odd_components():
    # a claw plus a disjoint triangle: removing the centre leaves 3 singletons, and the triangle is odd
    edges = [(0, 1), (0, 2), (0, 3), (4, 5), (5, 6), (4, 6)]
    m = max_matching(7, edges)
    assert len(m) == ref.max_matching(7, edges) == 2
    assert m.tutte_set == [0]
    assert m.odd_components == 4
    assert m.odd_components - len(m.tutte_set) == sum(1 for v in m.mate if v == -1)


def _graphs(max_n):
    return st.integers(1, max_n).flatmap(lambda n: st.tuples(
        st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3 * n)))


@settings(max_examples=400, deadline=None)
@given(_graphs(12))
def test_blossom_equals_bruteforce(g):
    n, raw = g
    edges = sorted({(min(u, v), max(u, v)) for u, v in raw if u != v})
    m = max_matching(n, edges)
    assert _is_matching(n, edges, m.edges)
    assert len(m) == max_matching_bruteforce(n, edges) == ref.max_matching(n, edges)
    assert m.certified


@settings(max_examples=100, deadline=None)
@given(st.integers(20, 120), st.floats(0.01, 0.3), st.integers(0, 2**31 - 1))
def test_certificate_on_larger_random_graphs(n, p, seed):
    rng = np.random.default_rng(seed)
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    m = max_matching(n, edges)
    assert _is_matching(n, edges, m.edges)
    assert m.certified
    # Tutte-Berge: the certificate pins the matching size from above
    assert len(m) == (n - (m.odd_components - len(m.tutte_set))) // 2


def test_components_after_removal():
    assert components_after_removal(5, [(0, 1), (1, 2), (2, 3), (3, 4)], [2]) == 2
    assert components_after_removal(3, [], []) == 3
