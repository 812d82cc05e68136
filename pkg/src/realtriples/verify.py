"""Recompute the stored tables from matrix constructions."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import NotASignature
from .examples import TorusSpec, finite_triple, momentum_pair_triple, torus_triple
from .product import m_index, product_triple
from .real_structure import (
    LABELS,
    KOLabel,
    ko_label,
    signature_negation_check,
    signature_of,
    table1_signature,
)
from .tables import EVEN_ORDER, M_TABLE, ODD_ORDER, TABLES

TORUS_MAX_N = 5

_TABLE_VARIANT = {2: "D", 3: "Dt", 4: "D", 5: "Dt"}


@dataclass(frozen=True)
class CellResult:
    cell: str
    expected: str
    measured: str
    ok: bool
    source: str = ""

    def line(self) -> str:
        status = "ok " if self.ok else "BAD"
        src = f"  [{self.source}]" if self.source else ""
        return f"{status} {self.cell:<14} expected {self.expected:<12} measured {self.measured}{src}"


def table1_witness(label: KOLabel):
    """A triple carrying ``label``: a K = 1 torus when small enough, else a momentum pair."""
    n = label.n_mod8 if label.n_mod8 else 8
    odd_sign = 1 if n % 2 else None
    if n <= TORUS_MAX_N:
        return torus_triple(TorusSpec(n, 1, j_variant=label.variant, odd_sign=odd_sign)), f"torus n={n} K=1"
    return momentum_pair_triple(n, label.variant, odd_sign), f"momentum pair n={n}"


def verify_table1() -> list[CellResult]:
    out = []
    for label in LABELS:
        t, source = table1_witness(label)
        sig = signature_of(t.J, t.D, t.chi)
        expected = table1_signature(label)
        out.append(CellResult(str(label), str(expected), str(sig), sig == expected, source))
    for n in (0, 2, 4, 6):
        ok = signature_negation_check(n)
        out.append(CellResult(f"eps-({n})", f"-eps+({n + 2})", "holds" if ok else "fails", ok))
    return out


def _rows_cols(which: int):
    if which in (2, 3):
        return EVEN_ORDER, EVEN_ORDER
    if which == 4:
        return EVEN_ORDER, ODD_ORDER
    return ODD_ORDER, EVEN_ORDER


def measured_product_label(l1: KOLabel, l2: KOLabel, variant: str):
    """Label read off the product matrices, or None when no sign triple fits."""
    t = product_triple(finite_triple(l1), finite_triple(l2), variant, force=True)
    try:
        return ko_label(signature_of(t.J, t.D, t.chi))
    except NotASignature:
        return None


def verify_product_table(which: int) -> list[CellResult]:
    variant = _TABLE_VARIANT[which]
    rows, cols = _rows_cols(which)
    out = []
    for r in rows:
        for c in cols:
            stored = TABLES[which][(r, c)]
            measured = measured_product_label(r, c, variant)
            exp = "blank" if stored is None else str(stored)
            got = "no signature" if measured is None else str(measured)
            out.append(CellResult(f"{r} x {c}", exp, got, measured == stored))
    return out


def verify_table6() -> list[CellResult]:
    out = []
    for r in ODD_ORDER:
        for c in ODD_ORDER:
            jk = M_TABLE[(r, c)]
            formula = (m_index(r.n_mod8, c.n_mod8, "+"), m_index(r.n_mod8, c.n_mod8, "-"))
            consistent = []
            for variant, want in (("oo+", 1), ("oo-", -1)):
                t = product_triple(finite_triple(r), finite_triple(c), variant)
                try:
                    sig = signature_of(t.J, t.D, t.chi)
                    consistent.append(sig.eps_prime == want and ko_label(sig) == t.claimed_label)
                except NotASignature:
                    consistent.append(False)
            ok = formula == jk and all(consistent)
            measured = f"s{formula[0]}, s{formula[1]}" + ("" if all(consistent) else " (J inconsistent)")
            out.append(CellResult(f"{r} x {c}", f"s{jk[0]}, s{jk[1]}", measured, ok))
    return out


def verify_table(which: int) -> list[CellResult]:
    if which == 1:
        return verify_table1()
    if which == 6:
        return verify_table6()
    if which in TABLES:
        return verify_product_table(which)
    raise ValueError(f"no table {which}")


def format_table(which: int) -> list[str]:
    """Stored table as text rows."""
    if which == 1:
        lines = ["label  eps eps' eps''"]
        for label in LABELS:
            lines.append(f"{str(label):<6} {table1_signature(label)}")
        return lines
    if which == 6:
        head = "       " + " ".join(f"{str(c):<8}" for c in ODD_ORDER)
        lines = [head]
        for r in ODD_ORDER:
            cells = [f"s{M_TABLE[(r, c)][0]},s{M_TABLE[(r, c)][1]}" for c in ODD_ORDER]
            lines.append(f"{str(r):<6} " + " ".join(f"{x:<8}" for x in cells))
        return lines
    rows, cols = _rows_cols(which)
    lines = ["      " + " ".join(f"{str(c):<3}" for c in cols)]
    for r in rows:
        cells = [str(TABLES[which][(r, c)] or ".") for c in cols]
        lines.append(f"{str(r):<5} " + " ".join(f"{x:<3}" for x in cells))
    return lines


__all__ = [
    "CellResult",
    "table1_witness",
    "verify_table",
    "verify_table1",
    "verify_product_table",
    "verify_table6",
    "measured_product_label",
    "format_table",
]
