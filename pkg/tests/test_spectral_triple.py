import json

import numpy as np
import pytest

from realtriples.errors import DimensionMismatch, InvariantViolation, ParseError
from realtriples.examples import TorusSpec, random_triple, torus_triple, two_point_triple
from realtriples.matrix_core import AntiUnitaryOp, SpectrumReport
from realtriples.product import product_triple
from realtriples.real_structure import KOLabel
from realtriples.spectral_triple import (
    RealSpectralTriple,
    check_dimension_spectrum_additivity,
    check_first_order,
    check_reality,
    check_zero_order,
    deserialize,
    from_document,
    load,
    predicted_square_spectrum,
    save,
    serialize,
    to_document,
    triples_identical,
)


def tiny(**kw):
    fields = dict(
        algebra=(("1", np.eye(2)), ("e", np.diag([1, 0]))),
        D=np.zeros((2, 2)),
        J=AntiUnitaryOp(np.eye(2)),
    )
    fields.update(kw)
    return RealSpectralTriple(**fields)


def test_non_hermitian_d_rejected():
    with pytest.raises(InvariantViolation):
        tiny(D=np.array([[0, 1], [0, 0]]))


def test_chi_must_anticommute_with_d():
    with pytest.raises(InvariantViolation):
        tiny(D=np.eye(2), chi=np.diag([1, -1]))


def test_chi_cannot_be_identity():
    with pytest.raises(InvariantViolation):
        tiny(chi=np.eye(2))


def test_chi_must_commute_with_algebra():
    with pytest.raises(InvariantViolation):
        tiny(algebra=(("1", np.eye(2)), ("x", np.array([[0, 1], [1, 0]]))), chi=np.diag([1, -1]))


def test_algebra_must_be_unital():
    with pytest.raises(InvariantViolation):
        tiny(algebra=(("e", np.diag([1, 0])),))


def test_unital_through_span():
    t = tiny(algebra=(("e", np.diag([1, 0])), ("f", np.diag([0, 1]))))
    assert t.labels() == ["e", "f"]


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        tiny(J=AntiUnitaryOp(np.eye(3)))


def test_probe_must_be_projection():
    with pytest.raises(InvariantViolation):
        tiny(probe_subspace=np.diag([0.5, 1]))


def test_opposite_is_antilinear_transpose():
    t = tiny()
    b = np.array([[1, 2j], [3, 4]])
    assert np.allclose(t.opposite(b), b.T)


def test_two_point_checks_pass():
    t = two_point_triple(1.5)
    assert check_zero_order(t).passed
    assert check_first_order(t).passed
    rep, sig = check_reality(t)
    assert rep.passed and sig.as_tuple() == (1, 1, 1)


def test_reality_flags_wrong_claim():
    t = two_point_triple(1.0).with_(claimed_label=KOLabel.parse("4+"))
    rep, _ = check_reality(t)
    assert not rep.passed and "claimed 4+" in rep.note


def test_first_order_failure_is_reported():
    # D = sigma1 on two points with J = conjugation fails the first-order condition
    t = RealSpectralTriple(
        algebra=(("1", np.eye(2)), ("e", np.diag([1, 0]))),
        D=np.array([[0, 1], [1, 0]]),
        J=AntiUnitaryOp(np.eye(2)),
        chi=np.diag([1, -1]),
    )
    assert check_zero_order(t).passed
    rep = check_first_order(t)
    assert not rep.passed and rep.max_violation == pytest.approx(1.0)


def test_predicted_square_spectrum():
    s1 = SpectrumReport.from_values([-3, 3])
    s2 = SpectrumReport.from_values([4])
    assert predicted_square_spectrum(s1, s2).pairs == ((25.0, 2),)
    assert predicted_square_spectrum(s1, s2, 2).pairs == ((25.0, 4),)


def test_dimension_additivity_on_torus_product():
    c = torus_triple(TorusSpec(1, 2, odd_sign=1))
    t2 = torus_triple(TorusSpec(2, 1))
    t2m = torus_triple(TorusSpec(2, 1, j_variant=-1))
    for t1, t2_, v in ((t2, c, "D"), (c, c, "oo+"), (t2m, t2, "Dt")):
        prod = product_triple(t1, t2_, v)
        assert check_dimension_spectrum_additivity(t1, t2_, prod).passed


def example_triples():
    rng = np.random.default_rng(7)
    c = torus_triple(TorusSpec(1, 2, odd_sign=-1))
    t2 = torus_triple(TorusSpec(2, 1, j_variant=-1))
    tp = two_point_triple(2.0, -1)
    yield c
    yield t2
    yield tp
    yield random_triple("6-", 2, rng, kernel=True)
    yield product_triple(tp, t2, "D")
    yield product_triple(c, c, "oo-")


@pytest.mark.parametrize("t", list(example_triples()), ids=lambda t: t.metadata.get("model"))
def test_round_trip_bit_exact(t, tmp_path):
    assert triples_identical(deserialize(serialize(t)), t)
    path = tmp_path / "t.json"
    save(t, path)
    assert triples_identical(load(path), t)


def test_malformed_documents():
    good = to_document(two_point_triple())
    with pytest.raises(ParseError):
        deserialize("{not json")
    with pytest.raises(ParseError):
        from_document([])
    for key in ("version", "D", "J", "algebra", "hilbert_dim"):
        doc = dict(good)
        del doc[key]
        with pytest.raises(ParseError):
            from_document(doc)
    with pytest.raises(ParseError):
        from_document({**good, "version": 99})
    with pytest.raises(ParseError):
        from_document({**good, "D": [[1, 2], [3, 4]]})
    with pytest.raises(ParseError):
        from_document({**good, "J": [1]})
    with pytest.raises(ParseError):
        from_document({**good, "claimed_label": "1+"})
    with pytest.raises(InvariantViolation):
        from_document({**good, "hilbert_dim": 3})
    bad = json.loads(json.dumps(good))
    bad["D"][0][1] = [7.0, 0.0]
    with pytest.raises(InvariantViolation):
        from_document(bad)
