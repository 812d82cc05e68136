import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realtriples.clifford import SIGMA
from realtriples.errors import DegreeZero, DimensionMismatch, ParseError
from realtriples.examples import TorusSpec, circle_cycle, torus_triple, two_point_triple
from realtriples.hochschild import (
    HochschildChain,
    boundary,
    chain_from_document,
    chain_tensor,
    chain_to_document,
    check_orientation,
    nu_normalization,
    pi_D,
    shuffle,
    shuffle_count,
    shuffles,
)
from realtriples.matrix_core import identity, kron, max_abs
from realtriples.product import product_triple


def int_matrix(draw, n):
    return np.array(draw(st.lists(st.integers(-3, 3), min_size=n * n, max_size=n * n))).reshape(n, n)


@st.composite
def int_chains(draw, degree, n=2, max_terms=2):
    """Chains with small integer entries, so cancellations are exact."""
    c = HochschildChain.zero(degree)
    for _ in range(draw(st.integers(1, max_terms))):
        coeff = draw(st.integers(-2, 2))
        c = c + HochschildChain.single(
            int_matrix(draw, n), int_matrix(draw, n), [int_matrix(draw, n) for _ in range(degree)], coeff
        )
    return c


def is_zero(c):
    return not c.terms or max_abs(chain_tensor(c)) == 0


def test_boundary_of_degree_one():
    x, y, a = np.diag([1, 2]), np.diag([3, 5]), np.array([[0, 1], [1, 0]])
    b = boundary(HochschildChain.single(x, y, [a]))
    assert b.degree == 0
    expected = kron(x @ a, y) - kron(a @ x, y)
    assert np.array_equal(chain_tensor(b), expected)


def test_boundary_degree_zero_raises():
    with pytest.raises(DegreeZero):
        boundary(HochschildChain.single(np.eye(2), np.eye(2), []))


def test_chain_degree_consistency():
    a = HochschildChain.single(np.eye(2), np.eye(2), [np.eye(2)])
    b = HochschildChain.single(np.eye(2), np.eye(2), [])
    with pytest.raises(DimensionMismatch):
        a + b


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3).flatmap(lambda p: int_chains(p)))
def test_boundary_squares_to_zero(c):
    if c.degree >= 2:
        assert is_zero(boundary(boundary(c)))
    else:
        assert boundary(c).degree == 0


@settings(max_examples=30, deadline=None)
@given(
    st.sampled_from([(1, 1), (1, 2), (2, 1)]).flatmap(
        lambda pq: st.tuples(int_chains(pq[0], max_terms=1), int_chains(pq[1], max_terms=1))
    )
)
def test_shuffle_leibniz(pair):
    x, y = pair
    lhs = boundary(shuffle(x, y))
    rhs = shuffle(boundary(x), y) + shuffle(x, boundary(y)) * (-1) ** x.degree
    assert is_zero(lhs - rhs)


@settings(max_examples=20, deadline=None)
@given(int_chains(0, max_terms=1), int_chains(2, max_terms=1))
def test_shuffle_leibniz_degree_zero_left(x, y):
    assert is_zero(boundary(shuffle(x, y)) - shuffle(x, boundary(y)))


def test_shuffle_signs():
    assert sorted(shuffles(1, 1)) == [((0,), 1), ((1,), -1)]
    signs = [s for _, s in shuffles(2, 1)]
    assert sorted(signs) == [-1, 1, 1]
    assert shuffle_count(2, 1) == 3 and len(list(shuffles(3, 2))) == 10


def test_shuffle_term_count():
    x = HochschildChain.single(np.eye(2), np.eye(2), [np.eye(2)] * 2)
    y = HochschildChain.single(np.eye(3), np.eye(3), [np.eye(3)])
    z = shuffle(x, y)
    assert z.degree == 3 and len(z.terms) == shuffle_count(2, 1)
    assert z.size == 6
    assert shuffle(HochschildChain.zero(1), y).terms == ()


def test_pi_d_degree_zero_is_tau():
    t = two_point_triple(1.0)
    one = identity(t.hilbert_dim)
    c = HochschildChain.single(one, one, [])
    assert max_abs(pi_D(t, c) - one) == 0


def test_pi_d_size_mismatch():
    t = two_point_triple(1.0)
    with pytest.raises(DimensionMismatch):
        pi_D(t, HochschildChain.single(np.eye(3), np.eye(3), []))


def test_zero_chain_is_degenerate():
    t = torus_triple(TorusSpec(1, 2, odd_sign=1))
    rep = check_orientation(t, HochschildChain.zero(1))
    assert rep.degenerate and rep.proportionality == 0


def test_non_proportional_value_reported():
    t = torus_triple(TorusSpec(1, 2, odd_sign=1))
    u = t.generator("u")
    rep = check_orientation(t, HochschildChain.single(u, identity(t.hilbert_dim), [u]))
    assert rep.proportionality is None


@pytest.mark.parametrize("s1,s2", [(1, 1), (1, -1), (-1, -1)])
@pytest.mark.parametrize("variant", ["oo+", "oo-"])
def test_circle_product_orientation(s1, s2, variant):
    c1 = torus_triple(TorusSpec(1, 2, odd_sign=s1))
    c2 = torus_triple(TorusSpec(1, 2, odd_sign=s2))
    t = product_triple(c1, c2, variant)
    c = shuffle(circle_cycle(c1), circle_cycle(c2), pad=2)
    grading = kron(identity(c1.hilbert_dim), identity(c2.hilbert_dim), SIGMA[3])
    rep = check_orientation(t, c, reference=grading)
    assert rep.is_cycle and rep.residual < 1e-9
    s = rep.proportionality
    assert abs(s) > 0.5
    # measured: two shuffles of weight i each; the closed-form normalization is i
    assert s == pytest.approx(2j * s1 * s2)
    assert nu_normalization(1, 1) == 1j
    rescaled = check_orientation(t, c * (1 / s), reference=grading)
    assert abs(rescaled.proportionality - 1) < 1e-9


def test_normalization_formula():
    assert nu_normalization(2, 2) == 6
    assert nu_normalization(1, 3) == 6j


def test_chain_document_round_trip():
    t = torus_triple(TorusSpec(1, 2, odd_sign=-1))
    c = circle_cycle(t)
    doc = json.loads(json.dumps(chain_to_document(c, t)))
    assert doc["terms"][0]["legs"] == ["u*"]
    back = chain_from_document(doc, t)
    assert np.array_equal(chain_tensor(back), chain_tensor(c))
    raw = chain_from_document(chain_to_document(c), None)
    assert np.array_equal(chain_tensor(raw), chain_tensor(c))


def test_chain_document_errors():
    t = torus_triple(TorusSpec(1, 1, odd_sign=1))
    with pytest.raises(ParseError):
        chain_from_document({"terms": []})
    with pytest.raises(ParseError):
        chain_from_document({"degree": 1, "terms": [{"coeff": [1, 0], "a0_left": "1", "a0_right": "1"}]}, t)
    with pytest.raises(ParseError):
        chain_from_document({"degree": 0, "terms": [{"coeff": [1, 0], "a0_left": "v", "a0_right": "1", "legs": []}]}, t)
    with pytest.raises(ParseError):
        chain_from_document({"degree": 0, "terms": [{"coeff": [1, 0], "a0_left": "1", "a0_right": "1", "legs": []}]})
    with pytest.raises(ParseError):
        chain_from_document({"degree": 1, "terms": [{"coeff": [1, 0], "a0_left": "1", "a0_right": "1", "legs": []}]}, t)
    with pytest.raises(ParseError):
        chain_from_document({"degree": 0, "terms": [{"coeff": [1, 0], "a0_left": [[1]], "a0_right": "1", "legs": []}]}, t)
