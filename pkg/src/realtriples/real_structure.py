"""Charge conjugations, KO sign triples and their labels.

The KO table lists, for every label ``n_v`` (n in Z_8, v = epsilon'), the
signs with ``J^2 = eps``, ``J D = eps' D J`` and, in the even case,
``J chi = eps'' chi J``. Even labels come in both variants; odd labels only
in the variant the odd gamma allows.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .clifford import build_gamma_rep, gamma_product, parse_sign
from .errors import NoSuchJ, NotASignature, ParseError
from .matrix_core import TAU_ALG, AntiUnitaryOp, identity, max_abs


@dataclass(frozen=True)
class KOSignature:
    eps: int
    eps_prime: int
    eps_dblprime: int | None = None
    # relation names whose sign was fixed by convention because both signs hold
    degenerate: tuple[str, ...] = field(default=(), compare=False)

    @property
    def is_even(self) -> bool:
        return self.eps_dblprime is not None

    def as_tuple(self) -> tuple:
        if self.is_even:
            return (self.eps, self.eps_prime, self.eps_dblprime)
        return (self.eps, self.eps_prime)

    def __neg__(self) -> "KOSignature":
        dbl = None if self.eps_dblprime is None else -self.eps_dblprime
        return KOSignature(-self.eps, -self.eps_prime, dbl)

    def __str__(self):
        return "(" + ", ".join("+" if s > 0 else "-" for s in self.as_tuple()) + ")"


@dataclass(frozen=True, order=True)
class KOLabel:
    n_mod8: int
    variant: int

    def __post_init__(self):
        if not 0 <= self.n_mod8 < 8 or self.variant not in (1, -1):
            raise ValueError(f"bad KO label ({self.n_mod8}, {self.variant})")

    @property
    def is_even(self) -> bool:
        return self.n_mod8 % 2 == 0

    def __str__(self):
        return f"{self.n_mod8}{'+' if self.variant > 0 else '-'}"

    @classmethod
    def parse(cls, text: str) -> "KOLabel":
        text = str(text).strip()
        try:
            n = int(text[:-1])
            v = parse_sign(text[-1])
        except Exception as exc:
            raise ParseError(f"bad KO label {text!r}") from exc
        if v is None or not 0 <= n < 8:
            raise ParseError(f"bad KO label {text!r}")
        label = cls(n, v)
        if label not in LABELS:
            raise ParseError(f"{text} is not one of the twelve KO labels")
        return label


# (n mod 8, eps, eps', eps'', True for the conventional choice of J)
KO_SIGNS = (
    (0, +1, +1, +1, True),
    (2, -1, +1, -1, True),
    (4, -1, +1, +1, True),
    (6, +1, +1, -1, True),
    (0, +1, -1, +1, False),
    (2, +1, -1, -1, False),
    (4, -1, -1, +1, False),
    (6, -1, -1, -1, False),
    (1, +1, -1, None, True),
    (3, -1, +1, None, True),
    (5, -1, -1, None, True),
    (7, +1, +1, None, True),
)

_BY_LABEL = {}
_BY_SIGNS = {}
for _n, _e, _ep, _epp, _sel in KO_SIGNS:
    _sig = KOSignature(_e, _ep, _epp)
    _lab = KOLabel(_n, _ep)
    _BY_LABEL[_lab] = _sig
    _BY_SIGNS[_sig.as_tuple()] = _lab

LABELS = tuple(_BY_LABEL)
EVEN_LABELS = tuple(sorted((l for l in LABELS if l.is_even), key=lambda l: (-l.variant, l.n_mod8)))
ODD_LABELS = tuple(sorted(l for l in LABELS if not l.is_even))


def table1_signature(label: KOLabel) -> KOSignature:
    return _BY_LABEL[label]


def ko_label(sig: KOSignature) -> KOLabel:
    try:
        return _BY_SIGNS[sig.as_tuple()]
    except KeyError:
        raise NotASignature(f"{sig} matches no KO table column") from None


def signature_negation_check(n: int) -> bool:
    """eps_-(n) == -eps_+(n + 2) componentwise, for even n."""
    if n % 2:
        raise ValueError("n must be even")
    minus = _BY_LABEL[KOLabel(n % 8, -1)]
    plus = _BY_LABEL[KOLabel((n + 2) % 8, +1)]
    return minus.as_tuple() == (-plus).as_tuple()


def odd_variant(n: int) -> int:
    """The only J variant available in odd dimension n."""
    return +1 if (n // 2) % 2 == 1 else -1


def _normalize_phase(c: np.ndarray) -> np.ndarray:
    flat = c.ravel()
    idx = np.flatnonzero(np.abs(flat) > TAU_ALG)[0]
    z = flat[idx]
    return c * (np.conj(z) / abs(z))


def charge_conjugation_matrix(n: int, variant, odd_sign=None) -> np.ndarray:
    """C with C conj(gamma^mu) = variant * gamma^mu C, phase-normalized."""
    variant = parse_sign(variant)
    if variant is None:
        raise ValueError("variant must be + or -")
    gammas = build_gamma_rep(n, odd_sign).matrices
    m = n // 2
    if n % 2 == 1 and variant != odd_variant(n):
        raise NoSuchJ(f"no J{'+' if variant > 0 else '-'} in odd dimension {n}")
    if m == 0:
        return identity(1)
    first, second = gammas[:m], gammas[m : 2 * m]
    use_first = (m % 2 == 0) == (variant > 0)
    c = gamma_product(first if use_first else second)
    c = _normalize_phase(c)
    for g in gammas:
        if max_abs(c @ np.conj(g) - variant * g @ c) > TAU_ALG:
            raise AssertionError(f"charge conjugation for n = {n} fails on a gamma")
    return c


def build_charge_conjugation(n: int, variant, odd_sign=None) -> AntiUnitaryOp:
    return AntiUnitaryOp(charge_conjugation_matrix(n, variant, odd_sign))


def _relation_sign(lhs: np.ndarray, rhs: np.ndarray, name: str, tol: float) -> tuple[int, bool]:
    """Sign s with lhs = s * rhs. Second value flags that both signs hold."""
    scale = max(1.0, max_abs(lhs), max_abs(rhs))
    if max_abs(rhs) <= tol * scale and max_abs(lhs) <= tol * scale:
        return 1, True
    plus = max_abs(lhs - rhs)
    minus = max_abs(lhs + rhs)
    if plus <= tol * scale:
        return 1, False
    if minus <= tol * scale:
        return -1, False
    raise NotASignature(f"{name}: no consistent sign (violations {plus:.3e} / {minus:.3e})")


def signature_of(J: AntiUnitaryOp, D, chi=None, tol: float = TAU_ALG) -> KOSignature:
    """Read (eps, eps', eps'') off concrete matrices."""
    D = np.asarray(D)
    size = J.dim
    degenerate = []
    eps, _ = _relation_sign(J.squared(), identity(size), "J^2 = eps", tol)
    eps_p, deg = _relation_sign(J.conjugate(D), D, "J D = eps' D J", tol)
    if deg:
        degenerate.append("eps_prime")
    eps_pp = None
    if chi is not None:
        eps_pp, deg = _relation_sign(J.conjugate(np.asarray(chi)), np.asarray(chi), "J chi = eps'' chi J", tol)
        if deg:
            degenerate.append("eps_dblprime")
    return KOSignature(eps, eps_p, eps_pp, tuple(degenerate))


def relation_violations(J: AntiUnitaryOp, D, chi=None) -> dict[str, float]:
    """Smallest violation over both signs for each relation (diagnostics)."""
    out = {}
    jj = J.squared()
    one = identity(J.dim)
    out["eps"] = min(max_abs(jj - one), max_abs(jj + one))
    jd = J.conjugate(D)
    out["eps_prime"] = min(max_abs(jd - D), max_abs(jd + D))
    if chi is not None:
        jc = J.conjugate(chi)
        out["eps_dblprime"] = min(max_abs(jc - chi), max_abs(jc + chi))
    return out
