"""Irreducible gamma matrices for the Euclidean Clifford algebra.

Convention: gammas square to ``-1`` and are anti-Hermitian. For ``n = 2m``
the first ``m`` gammas are purely imaginary and the next ``m`` purely real;
for ``n = 2m + 1`` the extra gamma is ``+-i sigma3^{(x)m}`` which selects one
of the two inequivalent irreps.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import BadSign, DimensionMismatch, NotScalar, ParityMismatch
from .matrix_core import (
    TAU_ALG,
    anticommutator,
    dagger,
    frozen,
    identity,
    kron,
    max_abs,
)

MAX_DIM = 12

SIGMA = (
    frozen(np.eye(2, dtype=np.complex128)),
    frozen(np.array([[0, 1], [1, 0]], dtype=np.complex128)),
    frozen(np.array([[0, -1j], [1j, 0]], dtype=np.complex128)),
    frozen(np.array([[1, 0], [0, -1]], dtype=np.complex128)),
)


def parse_sign(sign) -> int | None:
    """Normalize ``'+'``, ``'-'``, ``+-1`` and ``None``/``'none'`` to ``+-1``/``None``."""
    if sign is None:
        return None
    if isinstance(sign, str):
        s = sign.strip().lower()
        if s in ("", "none"):
            return None
        if s in ("+", "+1", "plus", "p"):
            return 1
        if s in ("-", "-1", "minus", "m"):
            return -1
        raise BadSign(f"unrecognized sign {sign!r}")
    if sign in (1, -1):
        return int(sign)
    raise BadSign(f"unrecognized sign {sign!r}")


def sign_str(sign: int | None) -> str:
    return {1: "+", -1: "-", None: "none"}[sign]


def _check_sign(n: int, sign) -> int | None:
    sign = parse_sign(sign)
    if n % 2 == 1 and sign is None:
        raise BadSign(f"n = {n} is odd: a sign (+ or -) is required")
    if n % 2 == 0 and sign is not None:
        raise BadSign(f"n = {n} is even: no sign may be given")
    return sign


def alpha(n: int) -> complex:
    """Phase with chi = alpha_n gamma^1 ... gamma^n."""
    return (1, -1j, 1j, 1)[n % 4]


def gamma_product(mats) -> np.ndarray:
    out = identity(mats[0].shape[0])
    for g in mats:
        out = out @ g
    return out


@dataclass(frozen=True, eq=False)
class GammaRep:
    n: int
    sign: int | None
    matrices: tuple

    def __post_init__(self):
        object.__setattr__(self, "matrices", tuple(frozen(np.asarray(m, dtype=np.complex128)) for m in self.matrices))
        if len(self.matrices) != self.n:
            raise DimensionMismatch(f"{len(self.matrices)} matrices for n = {self.n}")

    @property
    def parity(self) -> str:
        return "even" if self.n % 2 == 0 else "odd"

    @property
    def size(self) -> int:
        return self.matrices[0].shape[0]

    def __getitem__(self, mu: int) -> np.ndarray:
        """1-based access: ``rep[1]`` is gamma^1."""
        return self.matrices[mu - 1]

    def __len__(self):
        return self.n


def build_gamma_rep(n: int, sign=None, max_dim: int = MAX_DIM) -> GammaRep:
    """Canonical gamma matrices Gamma_(n) or Gamma_(n, sign)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > max_dim:
        raise ValueError(f"n = {n} exceeds the cap {max_dim}")
    sign = _check_sign(n, sign)
    m = n // 2
    s1, s2, s3 = SIGMA[1], SIGMA[2], SIGMA[3]
    one = SIGMA[0]
    mats = []
    for pauli in (s1, s2):
        for j in range(1, m + 1):
            factors = [s3] * (m - j) + [pauli] + [one] * (j - 1)
            mats.append(1j * kron(*factors))
    if n % 2 == 1:
        last = kron(*([s3] * m)) if m else np.ones((1, 1), dtype=np.complex128)
        mats.append(sign * 1j * last)
    return GammaRep(n, sign, tuple(mats))


@dataclass(frozen=True, eq=False)
class Chirality:
    n: int
    matrix: np.ndarray
    alpha: complex


def chirality_of(n: int, sign=None) -> Chirality:
    """sigma3^{(x) n/2} for even n, ``sign * 1`` for odd n."""
    sign = _check_sign(n, sign)
    m = n // 2
    size = 2**m
    if n % 2 == 0:
        mat = kron(*([SIGMA[3]] * m))
    else:
        mat = sign * identity(size)
    return Chirality(n, frozen(mat), alpha(n))


def clifford_violation(mats) -> float:
    """max over mu, nu of ||{g_mu, g_nu} + 2 delta_mu_nu||_max."""
    size = mats[0].shape[0]
    one = identity(size)
    worst = 0.0
    for a, ga in enumerate(mats):
        for b in range(a, len(mats)):
            target = -2 * one if a == b else 0
            worst = max(worst, max_abs(anticommutator(ga, mats[b]) - target))
    return worst


def anti_hermiticity_violation(mats) -> float:
    return max(max_abs(dagger(g) + g) for g in mats)


def classify_odd_rep(mats, tol: float = TAU_ALG) -> int:
    """Return +1 or -1: which of the two odd irreps ``mats`` generate.

    gamma^1 ... gamma^n is central, hence a scalar s on an irrep, and
    alpha_n * s = +-1 names the rep. Unitary conjugation leaves s alone.
    """
    mats = [np.asarray(m) for m in (mats.matrices if isinstance(mats, GammaRep) else mats)]
    n = len(mats)
    if n % 2 == 0:
        raise ParityMismatch("classify_odd_rep needs an odd number of gammas")
    prod = gamma_product(mats)
    s = prod[0, 0]
    if max_abs(prod - s * identity(prod.shape[0])) > tol:
        raise NotScalar("gamma^1...gamma^n is not a multiple of the identity")
    z = alpha(n) * s
    if abs(z.imag) > tol or abs(abs(z.real) - 1.0) > tol:
        raise NotScalar(f"alpha_n * product = {z} is not +-1")
    return 1 if z.real > 0 else -1


def composed_sign(n1: int, n2: int, sign: int) -> int:
    """Irrep label of the literal ``eo``/``oe`` tensor gammas.

    The odd factor's label survives up to the phase alpha_n / (alpha_n1 alpha_n2),
    which is -1 exactly when both half-dimensions are odd (e.g. 2 + 3).
    """
    ratio = alpha(n1 + n2) / (alpha(n1) * alpha(n2))
    return sign if ratio.real > 0 else -sign


def compose_reps(g1: GammaRep, g2: GammaRep, scheme: str, orient: bool = False) -> GammaRep:
    """Gamma set on the product of two Euclidean spaces.

    ``eo`` / ``ee_left``: {g (x) 1, chi1 (x) g'}.
    ``oe`` / ``ee_right``: {1 (x) g', g (x) chi2}, second factor's directions first.
    ``oo``: {g (x) 1 (x) sigma1, 1 (x) g' (x) sigma2}.

    The matrices are returned as built. With ``orient=True`` an odd result whose
    irrep label differs from the odd factor's gets its first two directions
    swapped, which restores the label.
    """
    p1, p2 = g1.n % 2, g2.n % 2
    legal = {"eo": (0, 1), "oe": (1, 0), "ee_left": (0, 0), "ee_right": (0, 0), "oo": (1, 1)}
    if scheme not in legal:
        raise ValueError(f"unknown scheme {scheme!r}")
    if legal[scheme] != (p1, p2):
        raise ParityMismatch(f"scheme {scheme} needs parities {legal[scheme]}, got {(p1, p2)}")
    one1, one2 = identity(g1.size), identity(g2.size)
    n = g1.n + g2.n
    if scheme in ("eo", "ee_left"):
        chi1 = chirality_of(g1.n).matrix
        mats = [kron(g, one2) for g in g1.matrices] + [kron(chi1, g) for g in g2.matrices]
    elif scheme in ("oe", "ee_right"):
        chi2 = chirality_of(g2.n).matrix
        mats = [kron(one1, g) for g in g2.matrices] + [kron(g, chi2) for g in g1.matrices]
    else:
        mats = [kron(g, one2, SIGMA[1]) for g in g1.matrices] + [kron(one1, g, SIGMA[2]) for g in g2.matrices]
    sign = classify_odd_rep(mats) if n % 2 else None
    if orient and sign is not None:
        odd_sign = g2.sign if scheme == "eo" else g1.sign
        if sign != odd_sign and n >= 2:
            mats[0], mats[1] = mats[1], mats[0]
            sign = classify_odd_rep(mats)
    return GammaRep(n, sign, tuple(mats))


def monomial_traces(mats) -> np.ndarray:
    """Normalized traces of gamma^{mu1}...gamma^{muk} over all increasing index sets."""
    mats = list(mats.matrices if isinstance(mats, GammaRep) else mats)
    size = mats[0].shape[0]
    out = []
    for k in range(len(mats) + 1):
        for idx in itertools.combinations(range(len(mats)), k):
            prod = gamma_product([mats[i] for i in idx]) if idx else identity(size)
            out.append(np.trace(prod) / size)
    return np.array(out)


def unitarily_equivalent(a, b, tol: float = TAU_ALG) -> bool:
    """Decide unitary equivalence of two irreducible gamma sets by monomial traces."""
    ma = a.matrices if isinstance(a, GammaRep) else a
    mb = b.matrices if isinstance(b, GammaRep) else b
    if len(ma) != len(mb) or ma[0].shape != mb[0].shape:
        return False
    return max_abs(monomial_traces(ma) - monomial_traces(mb)) <= tol
