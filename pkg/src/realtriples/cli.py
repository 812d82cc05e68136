"""Command-line front end.

Exit codes: 0 success, 1 a well-formed run whose check failed, 2 usage or
input error.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import hochschild, product, spectral_triple, verify
from .clifford import (
    anti_hermiticity_violation,
    build_gamma_rep,
    chirality_of,
    classify_odd_rep,
    clifford_violation,
    gamma_product,
)
from .errors import NoTableEntryError, NotASignature, TripleError
from .examples import (
    TorusSpec,
    circle_cycle,
    momentum_pair_triple,
    random_triple,
    torus2_cycle,
    torus_triple,
    two_point_triple,
)
from .matrix_core import SpectrumReport, eigvalsh, identity, max_abs
from .real_structure import KOLabel, ko_label, signature_of

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fmt_entry(z: complex) -> str:
    re, im = round(z.real, 12), round(z.imag, 12)
    if im == 0:
        return f"{re:g}"
    if re == 0:
        return {1.0: "i", -1.0: "-i"}.get(im, f"{im:g}i")
    return f"{re:g}{im:+g}i"


def _fmt_matrix(m) -> list[str]:
    cells = [[_fmt_entry(complex(z)) for z in row] for row in np.asarray(m)]
    width = max(len(c) for row in cells for c in row)
    return ["  [" + " ".join(c.rjust(width) for c in row) + "]" for row in cells]


def _encode(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _load(path):
    try:
        return spectral_triple.load(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


# ---------------------------------------------------------------------------
# commands


def cmd_gamma(args):
    rep = build_gamma_rep(args.n, args.sign)
    chi = chirality_of(args.n, args.sign)
    prod = gamma_product(rep.matrices)
    checks = {
        "clifford": clifford_violation(rep.matrices),
        "anti_hermitian": anti_hermiticity_violation(rep.matrices),
    }
    if args.n % 2 == 0:
        checks["chi = alpha * product"] = max_abs(chi.matrix - chi.alpha * prod)
        checks["chi anticommutes"] = max(max_abs(chi.matrix @ g + g @ chi.matrix) for g in rep.matrices)
    else:
        checks["alpha * product = sign"] = max_abs(chi.alpha * prod - rep.sign * identity(rep.size))
        checks["irrep label"] = 0.0 if classify_odd_rep(rep) == rep.sign else 1.0
    lines = [f"n = {args.n}" + ("" if rep.sign is None else f", sign {'+' if rep.sign > 0 else '-'}"),
             f"alpha_n = {_fmt_entry(chi.alpha)}"]
    for mu, g in enumerate(rep.matrices, start=1):
        lines.append(f"gamma^{mu} =")
        lines += _fmt_matrix(g)
    lines.append("chi =")
    lines += _fmt_matrix(chi.matrix)
    ok = all(v <= 1e-12 for v in checks.values())
    for name, v in checks.items():
        lines.append(f"{'PASS' if v <= 1e-12 else 'FAIL'}  {name}: {v:.3e}")
    report = {
        "n": args.n,
        "sign": rep.sign,
        "alpha": [chi.alpha.real, chi.alpha.imag],
        "gammas": [_encode(g) for g in rep.matrices],
        "chi": _encode(chi.matrix),
        "checks": checks,
    }
    return (EXIT_OK if ok else EXIT_FAIL), report, lines


def cmd_build(args):
    cycle = None
    if args.kind == "torus":
        spec = TorusSpec(
            args.n, args.cutoff, args.mode, args.variant, args.odd_sign, args.degree
        )
        t = torus_triple(spec, cap=args.cap)
        if args.cycle_out:
            if args.n == 1:
                cycle = circle_cycle(t)
            elif args.n == 2:
                cycle = torus2_cycle(t)
            else:
                raise UsageError("--cycle-out is available for n = 1 and n = 2")
    elif args.kind == "two-point":
        t = two_point_triple(args.mass, args.variant or "+")
    elif args.kind == "pair":
        t = momentum_pair_triple(args.n, args.variant, args.odd_sign)
    else:
        t = random_triple(KOLabel.parse(args.label), args.multiplicity, args.seed, args.kernel)
    if cycle is None and args.cycle_out:
        raise UsageError("--cycle-out needs a torus triple")
    spectral_triple.save(t, args.output)
    lines = [f"claimed_label: {t.claimed_label}", f"hilbert_dim: {t.hilbert_dim}", f"wrote {args.output}"]
    report = {"claimed_label": str(t.claimed_label), "hilbert_dim": t.hilbert_dim, "output": args.output}
    if cycle is not None:
        with open(args.cycle_out, "w") as fh:
            json.dump(hochschild.chain_to_document(cycle, t), fh)
        lines.append(f"wrote cycle {args.cycle_out}")
        report["cycle_output"] = args.cycle_out
    return EXIT_OK, report, lines


def _recipe(args):
    pauli = tuple(int(x) for x in args.pauli.split(","))
    return product.ProductRecipe(args.variant, pauli)


def cmd_product(args):
    t1, t2 = _load(args.file1), _load(args.file2)
    recipe = _recipe(args)
    try:
        t = product.product_triple(t1, t2, recipe)
    except NoTableEntryError as exc:
        lines = [f"FAIL  {exc.entry} (blank table cell)"]
        return EXIT_FAIL, {"predicted": None, "error": str(exc.entry)}, lines
    try:
        measured = ko_label(signature_of(t.J, t.D, t.chi))
    except NotASignature as exc:
        return EXIT_FAIL, {"predicted": str(t.claimed_label), "recomputed": None}, [f"FAIL  {exc}"]
    spectral_triple.save(t, args.output)
    ok = measured == t.claimed_label
    lines = [
        f"factors: {t.metadata['factor_labels'][0]} x {t.metadata['factor_labels'][1]} ({recipe.variant})",
        f"predicted: {t.claimed_label}",
        f"recomputed: {measured}",
        f"{'PASS' if ok else 'FAIL'}  wrote {args.output}",
    ]
    report = {"predicted": str(t.claimed_label), "recomputed": str(measured), "output": args.output}
    return (EXIT_OK if ok else EXIT_FAIL), report, lines


def _orientation_chain(t, path):
    if path:
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: invalid JSON") from exc
        return hochschild.chain_from_document(doc, t)
    if t.metadata.get("model") == "truncated torus" and t.metadata.get("n") == 1:
        return circle_cycle(t)
    try:
        return torus2_cycle(t)
    except TripleError:
        raise UsageError("orientation needs --cycle for this triple") from None


def cmd_check(args):
    t = _load(args.file)
    if args.full_space:
        t = t.with_(probe_subspace=None)
    names = [c.strip() for c in args.checks.split(",") if c.strip()]
    unknown = set(names) - {"reality", "zero", "first", "dimension", "orientation"}
    if unknown:
        raise UsageError(f"unknown checks: {', '.join(sorted(unknown))}")
    reports = []
    extra = {}
    for name in names:
        if name == "reality":
            rep, sig = spectral_triple.check_reality(t)
            reports.append(rep)
            extra["signature"] = None if sig is None else str(sig)
        elif name == "zero":
            reports.append(spectral_triple.check_zero_order(t))
        elif name == "first":
            rep = spectral_triple.check_first_order(t)
            if not rep.passed and t.probe_subspace is None and t.metadata.get("truncation_mode") == "hard":
                rep = spectral_triple.CheckReport(
                    rep.relation, False, rep.max_violation, rep.tolerance,
                    "boundary leakage: hard truncation breaks the shift algebra at the edge of the momentum box",
                )
            reports.append(rep)
        elif name == "dimension":
            if not args.factors:
                raise UsageError("the dimension check needs --factors FILE1 FILE2")
            t1, t2 = _load(args.factors[0]), _load(args.factors[1])
            reports.append(spectral_triple.check_dimension_spectrum_additivity(t1, t2, t))
        else:
            chain = _orientation_chain(t, args.cycle)
            o = hochschild.check_orientation(t, chain)
            s = o.proportionality
            passed = o.is_cycle and s is not None and abs(s - 1) <= 1e-9
            dev = float("inf") if s is None else abs(s - 1)
            reports.append(spectral_triple.CheckReport("orientation (pi_D(c) = chi)", passed, dev, 1e-9, str(o)))
            extra["proportionality"] = None if s is None else [s.real, s.imag]
    ok = all(r.passed for r in reports)
    lines = [r.line() for r in reports]
    report = {
        "checks": [
            {"relation": r.relation, "passed": r.passed, "max_violation": r.max_violation, "note": r.note}
            for r in reports
        ],
        **extra,
    }
    return (EXIT_OK if ok else EXIT_FAIL), report, lines


def _parse_values(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad value list {text!r}") from None


def _spectrum_lines(s: SpectrumReport, title):
    lines = [title, "  value          multiplicity"]
    lines += [f"  {v:>+13.9f}  {m}" for v, m in s.pairs]
    return lines


def cmd_spectrum(args):
    if args.s1 is not None or args.s2 is not None:
        if args.s1 is None or args.s2 is None:
            raise UsageError("--s1 and --s2 go together")
        s1 = SpectrumReport.from_values(_parse_values(args.s1))
        s2 = SpectrumReport.from_values(_parse_values(args.s2))
        split = None
        if args.kernel_split:
            split = tuple(int(x) for x in args.kernel_split.split(","))
        pred = product.predicted_spectrum(s1, s2, split, args.doubled)
        return EXIT_OK, {"predicted": pred.to_list()}, _spectrum_lines(pred, "predicted product spectrum")
    if not args.files:
        raise UsageError("give a triple file or --s1/--s2")
    if len(args.files) == 1:
        if args.predict or args.verify:
            raise UsageError("--predict and --verify need two factor files")
        t = _load(args.files[0])
        s = SpectrumReport.from_values(eigvalsh(t.D))
        return EXIT_OK, {"spectrum": s.to_list()}, _spectrum_lines(s, f"spectrum of D ({t.hilbert_dim} dims)")
    if len(args.files) != 2:
        raise UsageError("at most two files")
    t1, t2 = _load(args.files[0]), _load(args.files[1])
    recipe = _recipe(args)
    pred = product.predicted_product_spectrum(t1, t2, recipe)
    lines = _spectrum_lines(pred, f"predicted product spectrum ({recipe.variant})")
    report = {"predicted": pred.to_list()}
    code = EXIT_OK
    if args.verify:
        tp = _load(args.verify)
        actual = SpectrumReport.from_values(eigvalsh(tp.D))
        ok = actual.matches(pred)
        dev = actual.max_deviation(pred)
        lines.append(f"{'PASS' if ok else 'FAIL'}  product spectrum vs prediction: max deviation {dev:.3e}")
        report["verified"] = ok
        code = EXIT_OK if ok else EXIT_FAIL
    return code, report, lines


def cmd_tables(args):
    which = [args.which] if args.which else list(range(1, 7))
    lines, report, code = [], {}, EXIT_OK
    for w in which:
        lines.append(f"Table {w}")
        lines += verify.format_table(w)
        entry = {"stored": verify.format_table(w)}
        if args.verify:
            cells = verify.verify_table(w)
            good = sum(c.ok for c in cells)
            lines += [c.line() for c in cells]
            if w == 1:
                cols = [c for c in cells if not c.cell.startswith("eps")]
                rel = [c for c in cells if c.cell.startswith("eps")]
                lines.append(f"{sum(c.ok for c in cols)}/{len(cols)} columns confirmed")
                lines.append(f"{sum(c.ok for c in rel)}/{len(rel)} negation relations confirmed")
            else:
                summary = f"{good}/{len(cells)} cells confirmed"
                blanks = [c for c in cells if c.expected == "blank"]
                if blanks:
                    summary += f"; {sum(c.ok for c in blanks)}/{len(blanks)} blanks confirmed as NoTableEntry"
                lines.append(summary)
            entry["confirmed"] = good
            entry["total"] = len(cells)
            if good != len(cells):
                code = EXIT_FAIL
        report[str(w)] = entry
        lines.append("")
    return code, report, lines


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="realtriples", description="Real spectral triples and their products.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gamma", parents=[common], help="print gamma matrices and chirality")
    p.add_argument("n", type=int)
    p.add_argument("--sign", default=None, help="+ or - (odd n only)")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("build", parents=[common], help="build an example triple")
    p.add_argument("kind", choices=["torus", "two-point", "pair", "random"])
    p.add_argument("-n", type=int, default=1)
    p.add_argument("-K", "--cutoff", type=int, default=2)
    p.add_argument("--variant", default=None, help="J variant + or -")
    p.add_argument("--odd-sign", default=None)
    p.add_argument("--mode", choices=["hard", "cyclic"], default="hard")
    p.add_argument("--degree", type=int, default=1, help="generator degree")
    p.add_argument("--cap", type=int, default=4096, help="largest Hilbert dimension allowed")
    p.add_argument("-m", "--mass", type=float, default=1.0)
    p.add_argument("--label", default="0+")
    p.add_argument("--multiplicity", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kernel", action="store_true")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--cycle-out", default=None)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("product", parents=[common], help="tensor product of two triples")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--variant", choices=list(product.VARIANTS), default="D")
    p.add_argument("--pauli", default="1,2,3", help="odd-odd Pauli slots a,b,c")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("check", parents=[common], help="run axiom checks")
    p.add_argument("file")
    p.add_argument("--checks", default="reality,zero,first")
    p.add_argument("--factors", nargs=2, default=None)
    p.add_argument("--cycle", default=None, help="chain document for the orientation check")
    p.add_argument("--full-space", action="store_true", help="ignore the probe subspace")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("spectrum", parents=[common], help="spectra and product predictions")
    p.add_argument("files", nargs="*")
    p.add_argument("--predict", action="store_true")
    p.add_argument("--verify", default=None, help="product file to compare with the prediction")
    p.add_argument("--variant", choices=list(product.VARIANTS), default="D")
    p.add_argument("--pauli", default="1,2,3")
    p.add_argument("--s1", default=None, help="comma-separated eigenvalues of the graded factor")
    p.add_argument("--s2", default=None)
    p.add_argument("--kernel-split", default=None, help="K+,K-")
    p.add_argument("--doubled", action="store_true", help="odd-odd product")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("tables", parents=[common], help="print or verify the KO tables")
    p.add_argument("--which", type=int, choices=range(1, 7), default=None)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_tables)
    return parser


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(type(o).__name__)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        code, report, lines = args.func(args)
    except (UsageError, TripleError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        print(json.dumps({"exit_code": code, **report}, default=_json_default))
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
