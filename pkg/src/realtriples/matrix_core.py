"""Dense complex linear algebra used by every other module.

All operators are plain ``numpy`` complex128 arrays. Values handed out by the
library are marked read-only so they can be shared freely.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import DimensionMismatch, InvariantViolation, NotHermitian

# Structural identities built from exact +-1 / +-i entries.
TAU_ALG = 1e-12
# Anything that goes through an eigensolver.
TAU_NUM = 1e-9
# Relative width of an eigenvalue multiplicity cluster.
TAU_SPEC = 1e-8


def as_matrix(a, *, square: bool = False) -> np.ndarray:
    """Coerce ``a`` to a finite 2-d complex128 array."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise InvariantViolation(f"expected a non-empty matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvariantViolation("matrix has non-finite entries")
    if square and m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    return m


def frozen(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    a.flags.writeable = False
    return a


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def kron(*mats) -> np.ndarray:
    """Kronecker product of one or more matrices, left to right."""
    if not mats:
        raise ValueError("kron needs at least one factor")
    return reduce(np.kron, (np.asarray(m, dtype=np.complex128) for m in mats))


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def commutator(a, b) -> np.ndarray:
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    return a @ b + b @ a


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def hermiticity_violation(h) -> float:
    return max_abs(h - dagger(h))


def unitarity_violation(u) -> float:
    return max_abs(dagger(u) @ u - identity(u.shape[0]))


def restrict(x: np.ndarray, probe: np.ndarray | None) -> np.ndarray:
    """``P x P`` for a probe projection ``P``; ``x`` itself when there is none."""
    if probe is None:
        return x
    d = np.diagonal(probe)
    if np.count_nonzero(probe) == np.count_nonzero(d):
        # diagonal projection: mask rows and columns
        return x * np.outer(d, d)
    return probe @ x @ probe


# ---------------------------------------------------------------------------
# spectra


def cluster_values(values, rel_tol: float = TAU_SPEC) -> list[tuple[float, list[int]]]:
    """Group sorted real values into multiplicity classes.

    Neighbours closer than ``rel_tol * (1 + |v|)`` join the same class
    (single linkage). Returns ``(mean value, indices)`` per class.
    """
    values = np.asarray(values, dtype=float)
    order = np.argsort(values, kind="stable")
    clusters: list[list[int]] = []
    for i in order:
        if clusters:
            last = values[clusters[-1][-1]]
            if abs(values[i] - last) <= rel_tol * (1.0 + abs(last)):
                clusters[-1].append(int(i))
                continue
        clusters.append([int(i)])
    return [(float(np.mean(values[c])), c) for c in clusters]


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalue multiset in canonical (ascending, clustered) form."""

    pairs: tuple[tuple[float, int], ...]

    @classmethod
    def from_values(cls, values, rel_tol: float = TAU_SPEC) -> "SpectrumReport":
        return cls(tuple((v, len(idx)) for v, idx in cluster_values(values, rel_tol)))

    @classmethod
    def from_pairs(cls, pairs, rel_tol: float = TAU_SPEC) -> "SpectrumReport":
        """Canonicalize (value, multiplicity) pairs, merging close values."""
        pairs = [(float(v), int(m)) for v, m in pairs if int(m) > 0]
        if not pairs:
            return cls(())
        vals = np.array([v for v, _ in pairs])
        out = []
        for _, idx in cluster_values(vals, rel_tol):
            mult = sum(pairs[i][1] for i in idx)
            # weight the representative by multiplicity
            v = sum(pairs[i][0] * pairs[i][1] for i in idx) / mult
            out.append((float(v), mult))
        return cls(tuple(out))

    @property
    def dim(self) -> int:
        return sum(m for _, m in self.pairs)

    def values(self) -> np.ndarray:
        return np.array([v for v, m in self.pairs for _ in range(m)])

    def multiplicity(self, value: float, rel_tol: float = TAU_SPEC) -> int:
        for v, m in self.pairs:
            if abs(v - value) <= rel_tol * (1.0 + abs(value)):
                return m
        return 0

    def squared(self) -> "SpectrumReport":
        return SpectrumReport.from_pairs([(v * v, m) for v, m in self.pairs])

    def is_symmetric(self, rel_tol: float = TAU_SPEC) -> bool:
        return all(self.multiplicity(-v, rel_tol) == m for v, m in self.pairs)

    def matches(self, other: "SpectrumReport", rel_tol: float = TAU_SPEC) -> bool:
        """Multiset equality under clustering tolerance."""
        if len(self.pairs) != len(other.pairs):
            return False
        for (v1, m1), (v2, m2) in zip(self.pairs, other.pairs):
            if m1 != m2 or abs(v1 - v2) > rel_tol * (1.0 + max(abs(v1), abs(v2))):
                return False
        return True

    def max_deviation(self, other: "SpectrumReport") -> float:
        """Largest gap between the expanded sorted value lists (inf if sizes differ)."""
        a, b = self.values(), other.values()
        if a.shape != b.shape:
            return float("inf")
        return float(np.max(np.abs(a - b))) if a.size else 0.0

    def to_list(self) -> list[list]:
        return [[v, m] for v, m in self.pairs]


def eigh(h, tol: float = TAU_ALG) -> tuple[SpectrumReport, np.ndarray]:
    """Hermitian eigendecomposition.

    Returns the canonical spectrum and the unitary whose columns are the
    eigenvectors, ordered by ascending eigenvalue.
    """
    h = as_matrix(h, square=True)
    scale = max(1.0, max_abs(h))
    viol = hermiticity_violation(h)
    if viol > tol * scale:
        raise NotHermitian(f"||h - h^dagger||_max = {viol:.3e}")
    w, v = np.linalg.eigh(0.5 * (h + dagger(h)))
    return SpectrumReport.from_values(w), v


def eigvalsh(h) -> np.ndarray:
    h = as_matrix(h, square=True)
    return np.linalg.eigvalsh(0.5 * (h + dagger(h)))


# ---------------------------------------------------------------------------
# antiunitary operators


@dataclass(frozen=True, eq=False)
class AntiUnitaryOp:
    """``x -> linear_part @ conj(x)`` with a unitary ``linear_part``."""

    linear_part: np.ndarray

    def __post_init__(self):
        lp = as_matrix(self.linear_part, square=True)
        viol = unitarity_violation(lp)
        if viol > TAU_ALG * 10:
            raise InvariantViolation(f"linear part is not unitary (violation {viol:.3e})")
        object.__setattr__(self, "linear_part", frozen(lp))

    @classmethod
    def conjugation(cls, n: int) -> "AntiUnitaryOp":
        return cls(identity(n))

    @property
    def dim(self) -> int:
        return self.linear_part.shape[0]

    def apply(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.complex128)
        if v.shape[0] != self.dim:
            raise DimensionMismatch(f"operator of size {self.dim} applied to vector of size {v.shape[0]}")
        return self.linear_part @ np.conj(v)

    def compose(self, other: "AntiUnitaryOp") -> np.ndarray:
        """``self o other`` which is linear: ``L1 @ conj(L2)``."""
        return self.linear_part @ np.conj(other.linear_part)

    def squared(self) -> np.ndarray:
        return self.compose(self)

    def conjugate(self, x: np.ndarray) -> np.ndarray:
        """``J x J^{-1}`` for a linear operator ``x``."""
        lp = self.linear_part
        return lp @ np.conj(x) @ dagger(lp)

    def kron(self, *others: "AntiUnitaryOp") -> "AntiUnitaryOp":
        return AntiUnitaryOp(kron(self.linear_part, *(o.linear_part for o in others)))

    def __eq__(self, other):
        return isinstance(other, AntiUnitaryOp) and np.array_equal(self.linear_part, other.linear_part)

    __hash__ = None


def apply_antiunitary(j: AntiUnitaryOp, v) -> np.ndarray:
    return j.apply(v)


def eigen_classes(h, rel_tol: float = TAU_SPEC) -> list[tuple[float, np.ndarray]]:
    """Eigenspaces of a Hermitian matrix: ``(eigenvalue, orthonormal columns)`` ascending."""
    h = as_matrix(h, square=True)
    if hermiticity_violation(h) > TAU_ALG * max(1.0, max_abs(h)):
        raise NotHermitian("eigen_classes needs a Hermitian matrix")
    w, v = np.linalg.eigh(0.5 * (h + dagger(h)))
    return [(val, v[:, idx]) for val, idx in cluster_values(w, rel_tol)]
