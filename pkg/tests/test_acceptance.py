"""Acceptance gate: one PASS/FAIL line per criterion.

Run with ``pytest -v tests/test_acceptance.py`` or directly as a script.
"""
from __future__ import annotations

import contextlib
import io
import json
import os
import sys
import tempfile

import numpy as np
import pytest

from realtriples.cli import main as cli_main
from realtriples.clifford import (
    SIGMA,
    alpha,
    anti_hermiticity_violation,
    build_gamma_rep,
    chirality_of,
    clifford_violation,
    gamma_product,
)
from realtriples.errors import InvariantViolation, ParseError
from realtriples.examples import (
    TorusSpec,
    circle_cycle,
    finite_triple,
    random_triple,
    torus_triple,
    two_point_triple,
)
from realtriples.hochschild import (
    HochschildChain,
    boundary,
    chain_tensor,
    check_orientation,
    nu_normalization,
    shuffle,
)
from realtriples.matrix_core import SpectrumReport, dagger, eigvalsh, identity, kron, max_abs, unitarity_violation
from realtriples.product import (
    eigenbasis_report,
    intertwiner_U,
    kernel_dimension,
    predicted_product_spectrum,
    product_eigenbasis,
    product_triple,
)
from realtriples.real_structure import ko_label, signature_of
from realtriples.spectral_triple import (
    check_dimension_spectrum_additivity,
    check_first_order,
    check_zero_order,
    deserialize,
    from_document,
    serialize,
    to_document,
    triples_identical,
)
from realtriples.verify import verify_product_table, verify_table1, verify_table6

TOL_GAMMA = 1e-12
TOL_EIGEN = 1e-9
TOL_INTERTWINER = 1e-12
TOL_CONDITIONS = 1e-10
TOL_ORIENTATION = 1e-9


def _tori():
    c = torus_triple(TorusSpec(1, 2, odd_sign=1))
    cm = torus_triple(TorusSpec(1, 2, odd_sign=-1))
    t2 = torus_triple(TorusSpec(2, 1))
    t2m = torus_triple(TorusSpec(2, 1, j_variant=-1))
    return c, cm, t2, t2m


def _product_instances():
    """(t1, t2, variant) covering all four parity cases, with tori and random factors."""
    c, cm, t2, t2m = _tori()
    rng = np.random.default_rng(2024)
    out = [
        (t2, c, "D"),
        (c, t2, "Dt"),
        (c, cm, "oo+"),
        (cm, c, "oo-"),
        (two_point_triple(1.5), t2, "D"),
        (t2m, two_point_triple(0.7, -1), "Dt"),
    ]
    for l1, l2, v, k1 in [
        ("0+", "2+", "D", True), ("4+", "6+", "D", False), ("2-", "0-", "Dt", True), ("6+", "4+", "Dt", True),
        ("2+", "1-", "D", True), ("4-", "1-", "D", False), ("5-", "0-", "Dt", False), ("7+", "0+", "Dt", False),
        ("1-", "3+", "oo+", False), ("5-", "7+", "oo-", False),
    ]:
        t1 = random_triple(l1, 2, rng, kernel=k1)
        t2r = random_triple(l2, 2 if k1 else 1, rng, kernel=k1 and l2[0] in "0246")
        out.append((t1, t2r, v))
    return out


# ---------------------------------------------------------------------------


def criterion_1():
    worst = 0.0
    count = 0
    for n in range(1, 9):
        for sign in ((None,) if n % 2 == 0 else (1, -1)):
            rep = build_gamma_rep(n, sign)
            worst = max(worst, clifford_violation(rep.matrices), anti_hermiticity_violation(rep.matrices))
            prod = alpha(n) * gamma_product(rep.matrices)
            if n % 2 == 0:
                chi = chirality_of(n).matrix
                worst = max(worst, max_abs(chi - prod))
                worst = max(worst, max(max_abs(chi @ g + g @ chi) for g in rep.matrices))
                worst = max(worst, max_abs(chi @ chi - identity(rep.size)))
            else:
                worst = max(worst, max_abs(prod - sign * identity(rep.size)))
            count += 1
    return worst <= TOL_GAMMA, f"{count} representations, max violation {worst:.1e}"


def criterion_2():
    cells = verify_table1()
    cols = [c for c in cells if not c.cell.startswith("eps")]
    rel = [c for c in cells if c.cell.startswith("eps")]
    a, b = sum(c.ok for c in cols), sum(c.ok for c in rel)
    ok = a == 12 and len(cols) == 12 and b == 4 and len(rel) == 4
    return ok, f"{a}/{len(cols)} columns, {b}/{len(rel)} negation relations"


def criterion_3():
    parts, ok = [], True
    expected_filled = {2: 32, 3: 32, 4: 16, 5: 16}
    for which in (2, 3, 4, 5):
        cells = verify_product_table(which)
        filled = [c for c in cells if c.expected != "blank"]
        blanks = [c for c in cells if c.expected == "blank"]
        f_ok, b_ok = sum(c.ok for c in filled), sum(c.ok for c in blanks)
        ok &= f_ok == len(filled) == expected_filled[which] and b_ok == len(blanks)
        parts.append(f"T{which} {f_ok}/{len(filled)}+{b_ok}/{len(blanks)} blank")
    return ok, ", ".join(parts)


def criterion_4():
    cells = verify_table6()
    good = sum(c.ok for c in cells)
    return good == len(cells) == 16, f"{good}/{len(cells)} cells, formula and both J recomputed"


def criterion_5():
    instances = _product_instances()
    worst_spec = worst_res = worst_gram = 0.0
    kernel_ok = label_ok = True
    kinds = set()
    for t1, t2, v in instances:
        t = product_triple(t1, t2, v)
        kinds.add((t1.is_even, t2.is_even))
        label_ok &= ko_label(signature_of(t.J, t.D, t.chi)) == t.claimed_label
        actual = SpectrumReport.from_values(eigvalsh(t.D))
        pred = predicted_product_spectrum(t1, t2, v)
        if not actual.matches(pred):
            worst_spec = max(worst_spec, 1.0)
        worst_spec = max(worst_spec, actual.max_deviation(pred))
        doubling = 2 if v.startswith("oo") else 1
        kernel_ok &= kernel_dimension(t) == doubling * kernel_dimension(t1) * kernel_dimension(t2)
        res, gram = eigenbasis_report(product_eigenbasis(t1, t2, v), t.D)
        worst_res, worst_gram = max(worst_res, res), max(worst_gram, gram)
    ok = (len(instances) >= 10 and len(kinds) == 4 and worst_spec <= 1e-8 and kernel_ok and label_ok
          and worst_res <= TOL_EIGEN and worst_gram <= TOL_EIGEN)
    return ok, (f"{len(instances)} instances, spectrum dev {worst_spec:.1e}, kernel {'ok' if kernel_ok else 'bad'}, "
                f"eigvec residual {worst_res:.1e}, Gram {worst_gram:.1e}")


def criterion_6():
    c, cm, t2, t2m = _tori()
    rng = np.random.default_rng(6)
    pairs = [(t2, t2m), (two_point_triple(1.5), t2)]
    for l1, l2 in [("0+", "2-"), ("4+", "6-"), ("2-", "0+"), ("6+", "4+"), ("2+", "2+"), ("0-", "4-")]:
        pairs.append((random_triple(l1, 2, rng, kernel=True), random_triple(l2, 2, rng)))
    worst_u = worst_c = 0.0
    for t1, t2_ in pairs:
        U = intertwiner_U(t1, t2_)
        D = product_triple(t1, t2_, "D", force=True).D
        Dt = product_triple(t1, t2_, "Dt", force=True).D
        worst_u = max(worst_u, unitarity_violation(U))
        worst_c = max(worst_c, max_abs(U @ D @ dagger(U) - Dt))
    ok = worst_u <= TOL_INTERTWINER and worst_c <= TOL_INTERTWINER
    return ok, f"{len(pairs)} even-even pairs, unitarity {worst_u:.1e}, conjugation {worst_c:.1e}"


def criterion_7():
    c, cm, t2, t2m = _tori()
    cases = [(t2, c, "D"), (c, t2, "Dt"), (c, cm, "oo+"), (cm, c, "oo-"), (two_point_triple(1.5), t2, "D")]
    for l1, l2, v in [("0+", "2+", "D"), ("1-", "3+", "oo+"), ("2-", "3+", "D"), ("3+", "4+", "Dt")]:
        cases.append((finite_triple(l1), finite_triple(l2), v))
    worst, count = 0.0, 0
    for t1, t2_, v in cases:
        if not (check_zero_order(t1).passed and check_first_order(t1).passed
                and check_zero_order(t2_).passed and check_first_order(t2_).passed):
            continue
        t = product_triple(t1, t2_, v)
        worst = max(worst, check_zero_order(t).max_violation, check_first_order(t).max_violation)
        count += 1
    return count == len(cases) and worst <= TOL_CONDITIONS, f"{count} products, max violation {worst:.1e}"


def _random_int_chain(rng, degree, n=2):
    def m():
        return rng.integers(-3, 4, size=(n, n))

    return HochschildChain.single(m(), m(), [m() for _ in range(degree)], int(rng.integers(-2, 3)))


def criterion_8():
    notes, ok = [], True
    # circle: pi_D(c) = s 1 on interior modes
    for s in (1, -1):
        t = torus_triple(TorusSpec(1, 3, odd_sign=s))
        rep = check_orientation(t, circle_cycle(t))
        ok &= rep.is_cycle and rep.proportionality is not None and abs(rep.proportionality - 1) <= TOL_ORIENTATION
        ok &= rep.residual <= TOL_ORIENTATION
    notes.append("circle ok" if ok else "circle FAILED")
    # product of two circles
    c1 = torus_triple(TorusSpec(1, 2, odd_sign=1))
    c2 = torus_triple(TorusSpec(1, 2, odd_sign=1))
    t = product_triple(c1, c2, "oo+")
    grading = kron(identity(c1.hilbert_dim), identity(c2.hilbert_dim), SIGMA[3])
    raw = shuffle(circle_cycle(c1), circle_cycle(c2), pad=2)
    rep = check_orientation(t, raw, reference=grading)
    s = rep.proportionality
    ok &= rep.is_cycle and s is not None and abs(s) > TOL_ORIENTATION
    if s is not None and abs(s) > 0:
        rescaled = check_orientation(t, raw * (1 / s))
        ok &= rescaled.proportionality is not None and abs(rescaled.proportionality - 1) <= TOL_ORIENTATION
        notes.append(f"circle x circle s = {s:.6g} (closed-form normalization {nu_normalization(1, 1):.6g})")
    # exact algebra on integer chains
    rng = np.random.default_rng(8)
    exact = True
    for _ in range(20):
        for p in (2, 3):
            c = _random_int_chain(rng, p) + _random_int_chain(rng, p)
            exact &= max_abs(chain_tensor(boundary(boundary(c)))) == 0
        for p, q in ((1, 1), (1, 2), (2, 1)):
            x, y = _random_int_chain(rng, p), _random_int_chain(rng, q)
            diff = boundary(shuffle(x, y)) - shuffle(boundary(x), y) - shuffle(x, boundary(y)) * (-1) ** p
            exact &= max_abs(chain_tensor(diff)) == 0
    ok &= exact
    notes.append("boundary^2 = 0 and Leibniz exact" if exact else "chain identities FAILED")
    return ok, "; ".join(notes)


def criterion_9():
    instances = _product_instances()
    worst = 0.0
    passed = 0
    for t1, t2, v in instances:
        rep = check_dimension_spectrum_additivity(t1, t2, product_triple(t1, t2, v))
        passed += rep.passed
        worst = max(worst, rep.max_violation)
    return passed == len(instances), f"{passed}/{len(instances)} instances, max deviation {worst:.1e}"


def _cli(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = cli_main([str(a) for a in argv])
    return code, out.getvalue()


def _cli_scenarios(d):
    p = lambda name: os.path.join(d, name)  # noqa: E731
    t2, p0, c, cyc = p("t2.json"), p("p0.json"), p("c.json"), p("cyc.json")
    corrupt = p("corrupt.json")
    scenarios = [
        (["gamma", 2], 0),
        (["gamma", 3, "--sign", "-"], 0),
        (["gamma", 3], 2),
        (["build", "torus", "-n", 2, "-K", 2, "--variant", "+", "-o", t2], 0),
        (["build", "two-point", "-m", 1.5, "-o", p0], 0),
        (["build", "torus", "-n", 1, "-K", 3, "--odd-sign", "+", "-o", c, "--cycle-out", cyc], 0),
        (["build", "torus", "-n", 4, "-K", 3, "-o", p("big.json")], 2),
        (["product", p0, t2, "--variant", "D", "-o", p("prod.json")], 0),
        (["product", p0, t2, "--variant", "Dt", "-o", p("blank.json")], 1),
        (["product", c, c, "--variant", "oo+", "-o", p("oo.json")], 0),
        (["check", t2], 0),
        (["check", t2, "--checks", "first", "--full-space"], 1),
        ("corrupt", 2),
        (["check", c, "--checks", "orientation", "--cycle", cyc], 0),
        (["spectrum", p("c.json")], 0),
        (["spectrum", "--s1=-3,3", "--s2", "4"], 0),
        (["spectrum", p0, t2, "--verify", p("prod.json")], 0),
        (["spectrum", p0, t2, "--verify", t2], 1),
        (["tables", "--which", 1, "--verify"], 0),
        (["tables", "--which", 6, "--verify"], 0),
        (["frobnicate"], 2),
    ]
    failures = []
    for argv, want in scenarios:
        if argv == "corrupt":
            doc = json.load(open(t2))
            doc["D"][0][1] = [5.0, 0.0]
            with open(corrupt, "w") as fh:
                json.dump(doc, fh)
            argv = ["check", corrupt]
        code, _ = _cli(argv)
        if code != want:
            failures.append(f"{' '.join(map(str, argv[:2]))} -> {code} (want {want})")
    return len(scenarios), failures


def criterion_10():
    c, cm, t2, t2m = _tori()
    rng = np.random.default_rng(10)
    triples = [c, cm, t2, t2m, two_point_triple(1.5), random_triple("6-", 2, rng, kernel=True)]
    triples += [finite_triple(label) for label in ("0-", "3+", "5-", "6+")]
    triples += [product_triple(t1, t2_, v) for t1, t2_, v in _product_instances()[:6]]
    exact = sum(triples_identical(deserialize(serialize(t)), t) for t in triples)
    good = to_document(two_point_triple())
    rejected = 0
    malformed = [
        ("{not json", ParseError, True),
        ({**good, "version": 99}, ParseError, False),
        ({k: v for k, v in good.items() if k != "D"}, ParseError, False),
        ({**good, "D": [[1, 2], [3, 4]]}, ParseError, False),
        ({**good, "claimed_label": "1+"}, ParseError, False),
        ({**good, "hilbert_dim": 3}, InvariantViolation, False),
    ]
    for doc, err, is_text in malformed:
        try:
            deserialize(doc) if is_text else from_document(doc)
        except err:
            rejected += 1
    with tempfile.TemporaryDirectory() as d:
        n_cli, failures = _cli_scenarios(d)
    ok = exact == len(triples) and rejected == len(malformed) and not failures
    detail = (f"{exact}/{len(triples)} bit-exact round trips, {rejected}/{len(malformed)} malformed rejected, "
              f"{n_cli - len(failures)}/{n_cli} CLI scenarios")
    if failures:
        detail += " [" + "; ".join(failures) + "]"
    return ok, detail


CRITERIA = {
    1: ("gamma identities", criterion_1),
    2: ("KO sign table", criterion_2),
    3: ("product tables vs matrices", criterion_3),
    4: ("odd-odd index table", criterion_4),
    5: ("product spectrum law", criterion_5),
    6: ("intertwiner", criterion_6),
    7: ("zero/first-order preservation", criterion_7),
    8: ("orientation and chain algebra", criterion_8),
    9: ("dimension additivity", criterion_9),
    10: ("serialization and CLI", criterion_10),
}


def evaluate(n: int) -> tuple[bool, str]:
    name, fn = CRITERIA[n]
    try:
        ok, detail = fn()
    except Exception as exc:  # report, do not hide
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    return ok, f"{'PASS' if ok else 'FAIL'} criterion {n}: {name}: {detail}"


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, capsys):
    ok, line = evaluate(n)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def main() -> int:
    results = [evaluate(n) for n in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    return 0 if all(ok for ok, _ in results) else 1


if __name__ == "__main__":
    sys.exit(main())
