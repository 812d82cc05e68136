"""Finite real spectral triples, the axiom checks, and the JSON document format."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import DimensionMismatch, InvariantViolation, NotASignature, ParseError
from .matrix_core import (
    TAU_ALG,
    AntiUnitaryOp,
    SpectrumReport,
    anticommutator,
    as_matrix,
    commutator,
    dagger,
    eigvalsh,
    frozen,
    hermiticity_violation,
    identity,
    max_abs,
    restrict,
)
from .real_structure import KOLabel, KOSignature, ko_label, relation_violations, signature_of

FORMAT_VERSION = 1


@dataclass(frozen=True, eq=False)
class RealSpectralTriple:
    """(A, H, D, J[, chi]) with A given by labelled generator matrices.

    ``probe_subspace`` is an orthogonal projection; when present all algebraic
    relations are compared after compressing to it (``P X P``).
    """

    algebra: tuple
    D: np.ndarray
    J: AntiUnitaryOp
    chi: np.ndarray | None = None
    claimed_label: KOLabel | None = None
    metric_dim: int | None = None
    probe_subspace: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        D = frozen(as_matrix(self.D, square=True))
        object.__setattr__(self, "D", D)
        n = D.shape[0]
        gens = []
        for label, mat in self.algebra:
            mat = frozen(as_matrix(mat, square=True))
            if mat.shape[0] != n:
                raise DimensionMismatch(f"generator {label!r} has size {mat.shape[0]}, expected {n}")
            gens.append((str(label), mat))
        if not gens:
            raise InvariantViolation("algebra needs at least one generator")
        object.__setattr__(self, "algebra", tuple(gens))
        if not isinstance(self.J, AntiUnitaryOp):
            object.__setattr__(self, "J", AntiUnitaryOp(self.J))
        if self.J.dim != n:
            raise DimensionMismatch(f"J has size {self.J.dim}, expected {n}")
        if self.chi is not None:
            chi = frozen(as_matrix(self.chi, square=True))
            if chi.shape[0] != n:
                raise DimensionMismatch("chi has the wrong size")
            object.__setattr__(self, "chi", chi)
        if self.probe_subspace is not None:
            p = frozen(as_matrix(self.probe_subspace, square=True))
            if p.shape[0] != n:
                raise DimensionMismatch("probe_subspace has the wrong size")
            object.__setattr__(self, "probe_subspace", p)
        object.__setattr__(self, "metadata", dict(self.metadata))
        self._validate()

    def _validate(self):
        n = self.hilbert_dim
        scale = max(1.0, max_abs(self.D))
        viol = hermiticity_violation(self.D)
        if viol > TAU_ALG * scale:
            raise InvariantViolation(f"D is not Hermitian (violation {viol:.3e})")
        p = self.probe_subspace
        if p is not None and (max_abs(p @ p - p) > TAU_ALG or hermiticity_violation(p) > TAU_ALG):
            raise InvariantViolation("probe_subspace is not an orthogonal projection")
        if self.chi is not None:
            chi = self.chi
            one = identity(n)
            if hermiticity_violation(chi) > TAU_ALG:
                raise InvariantViolation("chi is not Hermitian")
            if max_abs(chi @ chi - one) > TAU_ALG:
                raise InvariantViolation("chi^2 != id")
            if max_abs(chi - one) <= TAU_ALG or max_abs(chi + one) <= TAU_ALG:
                raise InvariantViolation("chi must differ from +-id")
            for label, a in self.algebra:
                if max_abs(restrict(commutator(chi, a), p)) > TAU_ALG * max(1.0, max_abs(a)):
                    raise InvariantViolation(f"chi does not commute with generator {label!r}")
            if max_abs(restrict(anticommutator(chi, self.D), p)) > TAU_ALG * scale:
                raise InvariantViolation("chi does not anticommute with D")
        if not self._is_unital():
            raise InvariantViolation("identity is not in the span of the algebra generators")

    def _is_unital(self) -> bool:
        n = self.hilbert_dim
        one = identity(n)
        for _, a in self.algebra:
            z = a[0, 0]
            if abs(z) > TAU_ALG and max_abs(a - z * one) <= TAU_ALG * abs(z):
                return True
        basis = np.stack([a.ravel() for _, a in self.algebra], axis=1)
        coef, *_ = np.linalg.lstsq(basis, one.ravel(), rcond=None)
        return max_abs(basis @ coef - one.ravel()) <= 1e-9

    @property
    def hilbert_dim(self) -> int:
        return self.D.shape[0]

    @property
    def is_even(self) -> bool:
        return self.chi is not None

    @property
    def parity(self) -> str:
        return "even" if self.is_even else "odd"

    def generator(self, label: str) -> np.ndarray:
        for lab, mat in self.algebra:
            if lab == label:
                return mat
        raise KeyError(label)

    def labels(self) -> list[str]:
        return [lab for lab, _ in self.algebra]

    def opposite(self, b: np.ndarray) -> np.ndarray:
        """b° = J b^* J^{-1}."""
        return self.J.conjugate(dagger(b))

    def with_(self, **changes) -> "RealSpectralTriple":
        fields = dict(
            algebra=self.algebra,
            D=self.D,
            J=self.J,
            chi=self.chi,
            claimed_label=self.claimed_label,
            metric_dim=self.metric_dim,
            probe_subspace=self.probe_subspace,
            metadata=self.metadata,
        )
        fields.update(changes)
        return RealSpectralTriple(**fields)


@dataclass(frozen=True)
class CheckReport:
    relation: str
    passed: bool
    max_violation: float
    tolerance: float
    note: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.note})" if self.note else ""
        return f"{status}  {self.relation:<28} max violation {self.max_violation:.3e} (tol {self.tolerance:.1e}){extra}"


def _is_identity(a: np.ndarray) -> bool:
    z = a[0, 0]
    return max_abs(a - z * identity(a.shape[0])) == 0.0


def _pairwise_max(t: RealSpectralTriple, left_ops) -> float:
    worst = 0.0
    opp = [(lab, t.opposite(b)) for lab, b in t.algebra if not _is_identity(b)]
    for x in left_ops:
        for _, bo in opp:
            worst = max(worst, max_abs(restrict(commutator(x, bo), t.probe_subspace)))
    return worst


def check_zero_order(t: RealSpectralTriple, tol: float = TAU_ALG) -> CheckReport:
    """max over generator pairs of ||[a, J b^* J^-1]||_max."""
    left = [a for _, a in t.algebra if not _is_identity(a)]
    worst = _pairwise_max(t, left)
    return CheckReport("zero-order", worst <= tol, worst, tol)


def check_first_order(t: RealSpectralTriple, tol: float = TAU_ALG) -> CheckReport:
    """max over generator pairs of ||[[D, a], J b^* J^-1]||_max."""
    left = [commutator(t.D, a) for _, a in t.algebra if not _is_identity(a)]
    worst = _pairwise_max(t, left)
    note = "" if worst <= tol or t.probe_subspace is not None else "evaluated on the full space"
    return CheckReport("first-order", worst <= tol, worst, tol, note)


def check_reality(t: RealSpectralTriple, tol: float = TAU_ALG) -> tuple[CheckReport, KOSignature | None]:
    viol = relation_violations(t.J, t.D, t.chi)
    worst = max(viol.values())
    try:
        sig = signature_of(t.J, t.D, t.chi, tol)
    except NotASignature as exc:
        return CheckReport("reality", False, worst, tol, str(exc)), None
    label = ko_label(sig)
    note = f"signature {sig} -> {label}"
    if sig.degenerate:
        note += f" [degenerate: {', '.join(sig.degenerate)}]"
    passed = True
    if t.claimed_label is not None and label != t.claimed_label:
        passed = False
        note += f"; claimed {t.claimed_label}"
    return CheckReport("reality", passed, worst, tol, note), sig


def _doubling(t1, t2, tprod) -> int:
    d1, d2, d = t1.hilbert_dim, t2.hilbert_dim, tprod.hilbert_dim
    if d % (d1 * d2):
        raise DimensionMismatch(f"product dimension {d} is not a multiple of {d1} x {d2}")
    return d // (d1 * d2)


def predicted_square_spectrum(s1: SpectrumReport, s2: SpectrumReport, doubling: int = 1) -> SpectrumReport:
    """{lambda^2 + mu^2} with multiplicities M_lambda N_mu (times the doubling)."""
    pairs = [(l * l + m * m, a * b * doubling) for l, a in s1.pairs for m, b in s2.pairs]
    return SpectrumReport.from_pairs(pairs)


def check_dimension_spectrum_additivity(t1, t2, tprod) -> CheckReport:
    """Spectrum of D^2 on the product against sums of the factors' D^2 eigenvalues."""
    k = _doubling(t1, t2, tprod)
    s1 = SpectrumReport.from_values(eigvalsh(t1.D))
    s2 = SpectrumReport.from_values(eigvalsh(t2.D))
    predicted = predicted_square_spectrum(s1, s2, k)
    actual = SpectrumReport.from_values(eigvalsh(tprod.D) ** 2)
    passed = actual.matches(predicted)
    dev = actual.max_deviation(predicted)
    return CheckReport("dimension (spectrum of D^2 additive)", passed, dev, 1e-8)


# ---------------------------------------------------------------------------
# documents


def _encode_matrix(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _decode_matrix(data, name: str) -> np.ndarray:
    try:
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{name}: not a numeric nested array") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ParseError(f"{name}: expected rows of [re, im] pairs, got shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def to_document(t: RealSpectralTriple) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "version": FORMAT_VERSION,
        "hilbert_dim": t.hilbert_dim,
        "algebra": [{"label": lab, "matrix": _encode_matrix(a)} for lab, a in t.algebra],
        "D": _encode_matrix(t.D),
        "J": {"linear_part": _encode_matrix(t.J.linear_part)},
    }
    if t.metric_dim is not None:
        doc["metric_dim"] = t.metric_dim
    if t.claimed_label is not None:
        doc["claimed_label"] = str(t.claimed_label)
    if t.chi is not None:
        doc["chi"] = _encode_matrix(t.chi)
    if t.probe_subspace is not None:
        doc["probe_subspace"] = _encode_matrix(t.probe_subspace)
    if t.metadata:
        doc["metadata"] = t.metadata
    return doc


def from_document(doc: dict[str, Any]) -> RealSpectralTriple:
    if not isinstance(doc, dict):
        raise ParseError("triple document must be an object")
    for key in ("version", "hilbert_dim", "algebra", "D", "J"):
        if key not in doc:
            raise ParseError(f"missing field {key!r}")
    if doc["version"] != FORMAT_VERSION:
        raise ParseError(f"unsupported version {doc['version']!r}")
    if not isinstance(doc["J"], dict) or "linear_part" not in doc["J"]:
        raise ParseError("J must be an object with a linear_part")
    if not isinstance(doc["algebra"], list):
        raise ParseError("algebra must be a list")
    algebra = []
    for i, item in enumerate(doc["algebra"]):
        if not isinstance(item, dict) or "label" not in item or "matrix" not in item:
            raise ParseError(f"algebra[{i}] needs label and matrix")
        algebra.append((item["label"], _decode_matrix(item["matrix"], f"algebra[{i}]")))
    D = _decode_matrix(doc["D"], "D")
    if D.shape != (doc["hilbert_dim"], doc["hilbert_dim"]):
        raise InvariantViolation(f"D has shape {D.shape}, hilbert_dim is {doc['hilbert_dim']}")
    J = AntiUnitaryOp(_decode_matrix(doc["J"]["linear_part"], "J.linear_part"))
    chi = _decode_matrix(doc["chi"], "chi") if doc.get("chi") is not None else None
    probe = _decode_matrix(doc["probe_subspace"], "probe_subspace") if doc.get("probe_subspace") is not None else None
    label = KOLabel.parse(doc["claimed_label"]) if doc.get("claimed_label") is not None else None
    return RealSpectralTriple(
        algebra=tuple(algebra),
        D=D,
        J=J,
        chi=chi,
        claimed_label=label,
        metric_dim=doc.get("metric_dim"),
        probe_subspace=probe,
        metadata=doc.get("metadata", {}),
    )


def serialize(t: RealSpectralTriple) -> str:
    return json.dumps(to_document(t))


def deserialize(text: str) -> RealSpectralTriple:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return from_document(doc)


def save(t: RealSpectralTriple, path) -> None:
    with open(path, "w") as fh:
        fh.write(serialize(t))


def load(path) -> RealSpectralTriple:
    with open(path) as fh:
        return deserialize(fh.read())


def triples_identical(a: RealSpectralTriple, b: RealSpectralTriple) -> bool:
    """Bit-exact comparison of every field."""

    def same(x, y):
        if x is None or y is None:
            return x is None and y is None
        return np.array_equal(np.asarray(x), np.asarray(y))

    return (
        a.labels() == b.labels()
        and all(np.array_equal(x, y) for (_, x), (_, y) in zip(a.algebra, b.algebra))
        and same(a.D, b.D)
        and same(a.J.linear_part, b.J.linear_part)
        and same(a.chi, b.chi)
        and same(a.probe_subspace, b.probe_subspace)
        and a.claimed_label == b.claimed_label
        and a.metric_dim == b.metric_dim
        and a.metadata == b.metadata
    )
