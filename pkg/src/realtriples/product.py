"""Tensor products of real spectral triples.

Four parity cases:

* even x even: ``D = D1 (x) 1 + chi1 (x) D2`` or ``D~ = D1 (x) chi2 + 1 (x) D2``,
  ``J = J1 (x) J2``, ``chi = chi1 (x) chi2``;
* even x odd: ``D`` only, no grading;
* odd x even: ``D~`` only, no grading;
* odd x odd: ``H = H1 (x) H2 (x) C^2``, ``D = D1 (x) 1 (x) s_a + 1 (x) D2 (x) s_b``,
  ``chi = 1 (x) 1 (x) s_c`` and ``J = J1 (x) J2 (x) M K`` with M a Pauli matrix.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .clifford import SIGMA
from .errors import (
    AsymmetricSpectrum,
    MissingKernelSplit,
    NotASignature,
    NoTableEntryError,
    ParityMismatch,
    ParityRecipeMismatch,
)
from .matrix_core import (
    TAU_SPEC,
    AntiUnitaryOp,
    SpectrumReport,
    dagger,
    eigen_classes,
    eigvalsh,
    identity,
    kron,
    max_abs,
)
from .real_structure import KOLabel, ko_label, signature_of
from .spectral_triple import RealSpectralTriple
from .tables import TABLES

VARIANTS = ("D", "Dt", "oo+", "oo-")
_ALIASES = {"D": "D", "Dt": "Dt", "D~": "Dt", "oo+": "oo+", "oo_plus": "oo+", "oo-": "oo-", "oo_minus": "oo-"}


@dataclass(frozen=True)
class ProductRecipe:
    variant: str = "D"
    # Pauli indices (a, b, c): D1 rides on s_a, D2 on s_b, chi = s_c (odd-odd only)
    pauli_assignment: tuple = (1, 2, 3)

    def __post_init__(self):
        if self.variant not in _ALIASES:
            raise ValueError(f"unknown product variant {self.variant!r}")
        object.__setattr__(self, "variant", _ALIASES[self.variant])
        pa = tuple(int(x) for x in self.pauli_assignment)
        if sorted(pa) != [1, 2, 3]:
            raise ValueError("pauli_assignment must be a permutation of (1, 2, 3)")
        object.__setattr__(self, "pauli_assignment", pa)

    @property
    def is_odd_odd(self) -> bool:
        return self.variant.startswith("oo")


@dataclass(frozen=True)
class NoTableEntry:
    """Blank table cell: the two real structures do not combine for this Dirac operator."""

    left: KOLabel
    right: KOLabel
    variant: str

    def __str__(self):
        return f"no consistent real structure for {self.left} x {self.right} with {self.variant}"


def _parities(even1: bool, even2: bool) -> str:
    return {(True, True): "ee", (True, False): "eo", (False, True): "oe", (False, False): "oo"}[(even1, even2)]


_LEGAL = {"ee": ("D", "Dt"), "eo": ("D",), "oe": ("Dt",), "oo": ("oo+", "oo-")}


def _check_recipe(kind: str, recipe: ProductRecipe):
    if recipe.variant not in _LEGAL[kind]:
        raise ParityRecipeMismatch(
            f"variant {recipe.variant} is not available for {kind} factors (legal: {', '.join(_LEGAL[kind])})"
        )


def predicted_ko(l1: KOLabel, l2: KOLabel, recipe: ProductRecipe | str):
    """Table lookup of the product label; blank cells give a NoTableEntry."""
    recipe = ProductRecipe(recipe) if isinstance(recipe, str) else recipe
    kind = _parities(l1.is_even, l2.is_even)
    _check_recipe(kind, recipe)
    if kind == "oo":
        return KOLabel((l1.n_mod8 + l2.n_mod8) % 8, 1 if recipe.variant == "oo+" else -1)
    table = {("ee", "D"): 2, ("ee", "Dt"): 3, ("eo", "D"): 4, ("oe", "Dt"): 5}[(kind, recipe.variant)]
    out = TABLES[table][(l1, l2)]
    return NoTableEntry(l1, l2, recipe.variant) if out is None else out


def m_index(n1: int, n2: int, which) -> int:
    """Pauli index of M+ or M- from the half-dimensions of two odd factors."""
    if n1 % 2 == 0 or n2 % 2 == 0:
        raise ValueError("m_index needs two odd dimensions")
    m1, m2 = (n1 % 8) // 2, (n2 % 8) // 2
    plus = which in (1, "+", "plus")
    if plus:
        twice = 5 + (-1) ** (m2 + 1)
    else:
        twice = 1 + (-1) ** m2
    return (twice // 2 + 2 * m1) % 4


def m_matrix(n1: int, n2: int, which) -> np.ndarray:
    return SIGMA[m_index(n1, n2, which)]


def _factor_label(t: RealSpectralTriple) -> KOLabel:
    return ko_label(signature_of(t.J, t.D, t.chi))


def _find_m(l1: KOLabel, l2: KOLabel, t1, t2, recipe: ProductRecipe) -> np.ndarray:
    """Pauli matrix M making the odd-odd J consistent with the requested variant."""
    if recipe.pauli_assignment == (1, 2, 3):
        return m_matrix(l1.n_mod8, l2.n_mod8, "+" if recipe.variant == "oo+" else "-")
    want = 1 if recipe.variant == "oo+" else -1
    for idx in range(4):
        D, chi = _odd_odd_operators(t1, t2, recipe)
        J = AntiUnitaryOp(kron(t1.J.linear_part, t2.J.linear_part, SIGMA[idx]))
        try:
            sig = signature_of(J, D, chi)
        except NotASignature:
            continue
        if sig.eps_prime == want and not sig.degenerate:
            return SIGMA[idx]
    raise NotASignature(f"no Pauli matrix gives a {recipe.variant} real structure for this assignment")


def _odd_odd_operators(t1, t2, recipe):
    a, b, c = recipe.pauli_assignment
    one1, one2 = identity(t1.hilbert_dim), identity(t2.hilbert_dim)
    D = kron(t1.D, one2, SIGMA[a]) + kron(one1, t2.D, SIGMA[b])
    chi = kron(one1, one2, SIGMA[c])
    return D, chi


def _dirac(t1, t2, kind, recipe):
    one1, one2 = identity(t1.hilbert_dim), identity(t2.hilbert_dim)
    if kind == "oo":
        return _odd_odd_operators(t1, t2, recipe)
    if recipe.variant == "D":
        D = kron(t1.D, one2) + kron(t1.chi, t2.D)
    else:
        D = kron(t1.D, t2.chi) + kron(one1, t2.D)
    chi = kron(t1.chi, t2.chi) if kind == "ee" else None
    return D, chi


def product_triple(t1: RealSpectralTriple, t2: RealSpectralTriple, recipe: ProductRecipe | str = "D", force: bool = False):
    """Tensor product triple.

    Blank table cells raise NoTableEntryError unless ``force`` is set, in which
    case the matrices are assembled anyway with no claimed label.
    """
    recipe = ProductRecipe(recipe) if isinstance(recipe, str) else recipe
    kind = _parities(t1.is_even, t2.is_even)
    _check_recipe(kind, recipe)
    l1, l2 = _factor_label(t1), _factor_label(t2)
    predicted = predicted_ko(l1, l2, recipe)
    if isinstance(predicted, NoTableEntry):
        if not force:
            raise NoTableEntryError(predicted)
        predicted = None

    D, chi = _dirac(t1, t2, kind, recipe)
    pad = (identity(2),) if kind == "oo" else ()
    if kind == "oo":
        M = _find_m(l1, l2, t1, t2, recipe)
        J = AntiUnitaryOp(kron(t1.J.linear_part, t2.J.linear_part, M))
    else:
        J = AntiUnitaryOp(kron(t1.J.linear_part, t2.J.linear_part))

    algebra = tuple(
        (f"{la}⊗{lb}", kron(a, b, *pad)) for (la, a), (lb, b) in itertools.product(t1.algebra, t2.algebra)
    )
    probe = None
    if t1.probe_subspace is not None or t2.probe_subspace is not None:
        p1 = t1.probe_subspace if t1.probe_subspace is not None else identity(t1.hilbert_dim)
        p2 = t2.probe_subspace if t2.probe_subspace is not None else identity(t2.hilbert_dim)
        probe = kron(p1, p2, *pad)

    metadata = {
        "model": "product",
        "recipe": recipe.variant,
        "pauli_assignment": list(recipe.pauli_assignment),
        "factor_labels": [str(l1), str(l2)],
        "factor_dims": [t1.hilbert_dim, t2.hilbert_dim],
    }
    if kind in ("eo", "oe"):
        odd = t2 if kind == "eo" else t1
        metadata["odd_sign"] = odd.metadata.get("odd_sign", 1)
    metric = None
    if t1.metric_dim is not None and t2.metric_dim is not None:
        metric = t1.metric_dim + t2.metric_dim
    return RealSpectralTriple(
        algebra=algebra,
        D=D,
        J=J,
        chi=chi,
        claimed_label=predicted,
        metric_dim=metric,
        probe_subspace=probe,
        metadata=metadata,
    )


def intertwiner_U(t1: RealSpectralTriple, t2: RealSpectralTriple) -> np.ndarray:
    """U = (1 + chi1 (x) 1 + 1 (x) chi2 - chi1 (x) chi2) / 2, with U D U^* = D~."""
    if not (t1.is_even and t2.is_even):
        raise ParityMismatch("the intertwiner needs two even triples")
    one1, one2 = identity(t1.hilbert_dim), identity(t2.hilbert_dim)
    return 0.5 * (kron(one1, one2) + kron(t1.chi, one2) + kron(one1, t2.chi) - kron(t1.chi, t2.chi))


# ---------------------------------------------------------------------------
# spectra


def _kernel_tol(scale: float) -> float:
    return TAU_SPEC * (1.0 + scale)


def kernel_basis(t: RealSpectralTriple) -> np.ndarray:
    classes = eigen_classes(t.D)
    scale = max((abs(v) for v, _ in classes), default=0.0)
    for v, cols in classes:
        if abs(v) <= _kernel_tol(scale):
            return cols
    return np.zeros((t.hilbert_dim, 0), dtype=np.complex128)


def _chirality_split(t: RealSpectralTriple, kernel: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Kernel basis re-diagonalized under chi: (chi = +1 columns, chi = -1 columns)."""
    if kernel.shape[1] == 0:
        empty = kernel[:, :0]
        return empty, empty
    if t.chi is None:
        raise MissingKernelSplit("kernel split needs a grading")
    small = dagger(kernel) @ t.chi @ kernel
    if max_abs(small @ small - identity(small.shape[0])) > 1e-9:
        raise MissingKernelSplit("chi does not preserve ker D")
    w, u = np.linalg.eigh(0.5 * (small + dagger(small)))
    cols = kernel @ u
    return cols[:, w > 0], cols[:, w < 0]


def kernel_split(t: RealSpectralTriple) -> tuple[int, int]:
    plus, minus = _chirality_split(t, kernel_basis(t))
    return plus.shape[1], minus.shape[1]


def predicted_spectrum(s1: SpectrumReport, s2: SpectrumReport, kernel_split=None, doubled: bool = False) -> SpectrumReport:
    """Product Dirac spectrum from the factor spectra.

    ``s1`` is the graded factor (the one whose chirality multiplies the other
    Dirac operator); it must be symmetric, and its kernel enters through
    ``kernel_split = (K+, K-)``. With ``doubled`` (odd-odd) every pair of
    eigenvalues contributes ``+-sqrt(l^2 + m^2)``.
    """
    pairs = []
    if doubled:
        for lam, a in s1.pairs:
            for mu, b in s2.pairs:
                r = math.hypot(lam, mu)
                pairs += [(r, a * b), (-r, a * b)]
        return SpectrumReport.from_pairs(pairs)
    if not s1.is_symmetric():
        raise AsymmetricSpectrum("the graded factor must have a symmetric spectrum")
    scale = max((abs(v) for v, _ in s1.pairs), default=0.0)
    kernel_mult = sum(m for v, m in s1.pairs if abs(v) <= _kernel_tol(scale))
    if kernel_mult:
        if kernel_split is None:
            raise MissingKernelSplit("kernel of the graded factor needs a (K+, K-) split")
        kp, km = kernel_split
        if kp + km != kernel_mult:
            raise MissingKernelSplit(f"split {kernel_split} does not add up to kernel dimension {kernel_mult}")
    else:
        kp = km = 0
    for lam, a in s1.pairs:
        if lam <= _kernel_tol(scale):
            continue
        for mu, b in s2.pairs:
            r = math.hypot(lam, mu)
            pairs += [(r, a * b), (-r, a * b)]
    for mu, b in s2.pairs:
        pairs += [(mu, kp * b), (-mu, km * b)]
    return SpectrumReport.from_pairs(pairs)


def _graded_order(t1, t2, recipe: ProductRecipe):
    """(graded factor, other factor, doubled) for the spectrum formula."""
    if recipe.is_odd_odd:
        return t1, t2, True
    if recipe.variant == "D":
        return t1, t2, False
    return t2, t1, False


def predicted_product_spectrum(t1, t2, recipe: ProductRecipe | str = "D") -> SpectrumReport:
    recipe = ProductRecipe(recipe) if isinstance(recipe, str) else recipe
    _check_recipe(_parities(t1.is_even, t2.is_even), recipe)
    g, o, doubled = _graded_order(t1, t2, recipe)
    sg = SpectrumReport.from_values(eigvalsh(g.D))
    so = SpectrumReport.from_values(eigvalsh(o.D))
    split = None if doubled else kernel_split(g)
    return predicted_spectrum(sg, so, split, doubled)


# ---------------------------------------------------------------------------
# closed-form eigenbasis


@dataclass(frozen=True, eq=False)
class EigenPair:
    value: float
    vector: np.ndarray
    # (lambda of D1, mu of D2, branch): branch is "+" / "-" or "j+" / "j-" for kernel vectors
    tags: tuple

    def residual(self, D: np.ndarray) -> float:
        return float(np.linalg.norm(D @ self.vector - self.value * self.vector))


def _rotate(a, b, theta):
    c, s = math.cos(theta), math.sin(theta)
    return c * a + s * b, -s * a + c * b


def product_eigenbasis(t1, t2, recipe: ProductRecipe | str = "D") -> list[EigenPair]:
    """Explicit orthonormal eigenvectors of the product Dirac operator."""
    recipe = ProductRecipe(recipe) if isinstance(recipe, str) else recipe
    kind = _parities(t1.is_even, t2.is_even)
    _check_recipe(kind, recipe)
    c1, c2 = eigen_classes(t1.D), eigen_classes(t2.D)
    out: list[EigenPair] = []

    if kind == "oo":
        a, b, _ = recipe.pauli_assignment
        w, u = np.linalg.eigh(SIGMA[a])
        xi1 = u[:, np.argmax(w)]
        xi2 = SIGMA[b] @ xi1
        for lam, v_cols in c1:
            for mu, w_cols in c2:
                theta = 0.5 * math.atan2(mu, lam)
                r = math.hypot(lam, mu)
                for i, j in itertools.product(range(v_cols.shape[1]), range(w_cols.shape[1])):
                    vw = np.kron(v_cols[:, i], w_cols[:, j])
                    up, um = _rotate(np.kron(vw, xi1), np.kron(vw, xi2), theta)
                    out.append(EigenPair(r, up, (lam, mu, "+")))
                    out.append(EigenPair(-r, um, (lam, mu, "-")))
        return out

    graded_first = recipe.variant == "D"
    g = t1 if graded_first else t2
    cg, co = (c1, c2) if graded_first else (c2, c1)
    scale = max((abs(v) for v, _ in cg), default=0.0)

    def place(x_graded, x_other):
        return np.kron(x_graded, x_other) if graded_first else np.kron(x_other, x_graded)

    for lam, v_cols in cg:
        if lam <= _kernel_tol(scale):
            continue
        for mu, w_cols in co:
            theta = 0.5 * math.atan(mu / lam)
            r = math.hypot(lam, mu)
            for i, j in itertools.product(range(v_cols.shape[1]), range(w_cols.shape[1])):
                v, w = v_cols[:, i], w_cols[:, j]
                a = place(v, w)
                b = place(g.chi @ v, w)
                up, um = _rotate(a, b, theta)
                tags = (lam, mu) if graded_first else (mu, lam)
                out.append(EigenPair(r, up, (*tags, "+")))
                out.append(EigenPair(-r, um, (*tags, "-")))
    plus, minus = _chirality_split(g, kernel_basis(g))
    for sign, cols, flag in ((1, plus, "j+"), (-1, minus, "j-")):
        for mu, w_cols in co:
            for i, j in itertools.product(range(cols.shape[1]), range(w_cols.shape[1])):
                tags = (0.0, mu) if graded_first else (mu, 0.0)
                out.append(EigenPair(sign * mu, place(cols[:, i], w_cols[:, j]), (*tags, flag)))
    return out


def eigenbasis_report(pairs: list[EigenPair], D: np.ndarray) -> tuple[float, float]:
    """(max per-vector residual, max deviation of the Gram matrix from 1)."""
    V = np.stack([p.vector for p in pairs], axis=1)
    gram = dagger(V) @ V
    worst = max(p.residual(D) for p in pairs)
    return worst, max_abs(gram - identity(V.shape[1]))


def kernel_dimension(t: RealSpectralTriple) -> int:
    return kernel_basis(t).shape[1]


__all__ = [
    "ProductRecipe",
    "NoTableEntry",
    "EigenPair",
    "VARIANTS",
    "predicted_ko",
    "m_index",
    "m_matrix",
    "product_triple",
    "intertwiner_U",
    "kernel_basis",
    "kernel_split",
    "kernel_dimension",
    "predicted_spectrum",
    "predicted_product_spectrum",
    "product_eigenbasis",
    "eigenbasis_report",
]
