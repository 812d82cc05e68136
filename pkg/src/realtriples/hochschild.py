"""Hochschild chains with coefficients in A (x) A°, the shuffle product, and pi_D.

Chains are kept as expanded term lists of representation matrices. The
coefficient bimodule is A (x) A° with A multiplying the A-slot on both sides,
``a (x (x) y°) b = a x b (x) y°``; the A° slot only enters through tau_J.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import DegreeZero, DimensionMismatch, ParseError
from .matrix_core import TAU_ALG, TAU_NUM, as_matrix, commutator, identity, kron, max_abs, restrict


@dataclass(frozen=True, eq=False)
class ChainTerm:
    coeff: complex
    a0_left: np.ndarray
    a0_right: np.ndarray
    legs: tuple
    # display names for a0_left, a0_right, legs; None when unknown
    names: tuple | None = field(default=None)

    @property
    def degree(self) -> int:
        return len(self.legs)


@dataclass(frozen=True, eq=False)
class HochschildChain:
    degree: int
    terms: tuple = ()

    def __post_init__(self):
        terms = tuple(self.terms)
        for t in terms:
            if t.degree != self.degree:
                raise DimensionMismatch(f"term of degree {t.degree} in a degree-{self.degree} chain")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def single(cls, a0_left, a0_right, legs, coeff=1.0, names=None) -> "HochschildChain":
        legs = tuple(as_matrix(a, square=True) for a in legs)
        term = ChainTerm(complex(coeff), as_matrix(a0_left, square=True), as_matrix(a0_right, square=True), legs, names)
        return cls(len(legs), (term,))

    @classmethod
    def zero(cls, degree: int) -> "HochschildChain":
        return cls(degree, ())

    @property
    def size(self) -> int | None:
        return self.terms[0].a0_left.shape[0] if self.terms else None

    def __add__(self, other: "HochschildChain") -> "HochschildChain":
        if other.degree != self.degree:
            raise DimensionMismatch("cannot add chains of different degree")
        return HochschildChain(self.degree, self.terms + other.terms)

    def __mul__(self, scalar) -> "HochschildChain":
        z = complex(scalar)
        return HochschildChain(
            self.degree,
            tuple(ChainTerm(t.coeff * z, t.a0_left, t.a0_right, t.legs, t.names) for t in self.terms),
        )

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)


def _name(names, i):
    return None if names is None else names[i]


def _prod_name(a, b):
    if a is None or b is None:
        return None
    return f"{a}·{b}"


def boundary(c: HochschildChain) -> HochschildChain:
    """Hochschild boundary b; the last leg wraps around onto the A slot from the left."""
    p = c.degree
    if p == 0:
        raise DegreeZero("the boundary of a degree-0 chain is not defined here")
    out = []
    for t in c.terms:
        x, y, legs, nm = t.a0_left, t.a0_right, list(t.legs), t.names
        leg_names = None if nm is None else list(nm[2:])
        # m . a1
        names = None if nm is None else (_prod_name(nm[0], leg_names[0]), nm[1], *leg_names[1:])
        out.append(ChainTerm(t.coeff, x @ legs[0], y, tuple(legs[1:]), names))
        for i in range(p - 1):
            new_legs = legs[:i] + [legs[i] @ legs[i + 1]] + legs[i + 2 :]
            names = None
            if nm is not None:
                ln = leg_names[:i] + [_prod_name(leg_names[i], leg_names[i + 1])] + leg_names[i + 2 :]
                names = (nm[0], nm[1], *ln)
            out.append(ChainTerm(t.coeff * (-1) ** (i + 1), x, y, tuple(new_legs), names))
        # a_p . m
        names = None if nm is None else (_prod_name(leg_names[-1], nm[0]), nm[1], *leg_names[:-1])
        out.append(ChainTerm(t.coeff * (-1) ** p, legs[-1] @ x, y, tuple(legs[:-1]), names))
    return HochschildChain(p - 1, tuple(out))


def shuffles(p: int, q: int):
    """Yield ``(positions of the first p letters, sign)`` for every (p, q)-shuffle.

    Positions are 0-based slots in the merged word of length p + q.
    """
    for first in itertools.combinations(range(p + q), p):
        inversions = sum(pos - i for i, pos in enumerate(first))
        yield first, (-1) ** inversions


def _default_embeddings(x: HochschildChain, y: HochschildChain, pad: int):
    n1, n2 = x.size, y.size
    one1 = identity(n1) if n1 else None
    one2 = identity(n2) if n2 else None
    onep = identity(pad)

    def left(a):
        return kron(a, one2, onep) if pad > 1 else kron(a, one2)

    def right(b):
        return kron(one1, b, onep) if pad > 1 else kron(one1, b)

    return left, right


def shuffle(x: HochschildChain, y: HochschildChain, embed_left=None, embed_right=None, pad: int = 1) -> HochschildChain:
    """Shuffle product x × y over the tensor product algebra.

    By default elements embed as ``a (x) 1`` and ``1 (x) b`` (with an extra
    ``(x) 1_pad`` factor if ``pad > 1``). Custom embeddings allow chains whose
    elements already live on the product space.
    """
    p, q = x.degree, y.degree
    if not x.terms or not y.terms:
        return HochschildChain.zero(p + q)
    if embed_left is None or embed_right is None:
        dl, dr = _default_embeddings(x, y, pad)
        embed_left = embed_left or dl
        embed_right = embed_right or dr
    shuffle_list = list(shuffles(p, q))
    out = []
    for tx in x.terms:
        for ty in y.terms:
            a0l = embed_left(tx.a0_left) @ embed_right(ty.a0_left)
            a0r = embed_left(tx.a0_right) @ embed_right(ty.a0_right)
            lx = [embed_left(a) for a in tx.legs]
            ly = [embed_right(b) for b in ty.legs]
            nx, ny = tx.names, ty.names
            for first, sign in shuffle_list:
                legs = [None] * (p + q)
                names = [None] * (p + q)
                rest = [k for k in range(p + q) if k not in first]
                for i, pos in enumerate(first):
                    legs[pos] = lx[i]
                    names[pos] = None if nx is None else f"{nx[2 + i]}⊗1"
                for j, pos in enumerate(rest):
                    legs[pos] = ly[j]
                    names[pos] = None if ny is None else f"1⊗{ny[2 + j]}"
                full_names = None
                if nx is not None and ny is not None:
                    full_names = (f"{nx[0]}⊗{ny[0]}", f"{nx[1]}⊗{ny[1]}", *names)
                out.append(ChainTerm(tx.coeff * ty.coeff * sign, a0l, a0r, tuple(legs), full_names))
    return HochschildChain(p + q, tuple(out))


def shuffle_count(p: int, q: int) -> int:
    return comb(p + q, p)


def chain_tensor(c: HochschildChain) -> np.ndarray:
    """Faithful linear image of the formal chain: sum of coeff * kron(a0_left, a0_right, legs...)."""
    if not c.terms:
        return np.zeros((1, 1), dtype=np.complex128)
    total = None
    for t in c.terms:
        k = t.coeff * kron(t.a0_left, t.a0_right, *t.legs)
        total = k if total is None else total + k
    return total


# ---------------------------------------------------------------------------
# evaluation on a triple


def tau_J(t, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """rho(x) J rho(y^*) J^{-1}."""
    return x @ t.opposite(y)


def pi_D(t, c: HochschildChain, project: bool = True) -> np.ndarray:
    """Sum over terms of coeff * tau_J(a0) [D, a1] ... [D, ap], compressed to the probe subspace."""
    n = t.hilbert_dim
    total = np.zeros((n, n), dtype=np.complex128)
    for term in c.terms:
        if term.a0_left.shape[0] != n:
            raise DimensionMismatch(f"chain elements of size {term.a0_left.shape[0]} on a triple of size {n}")
        op = tau_J(t, term.a0_left, term.a0_right)
        for a in term.legs:
            op = op @ commutator(t.D, a)
        total += term.coeff * op
    return restrict(total, t.probe_subspace) if project else total


@dataclass(frozen=True)
class OrientationReport:
    is_cycle: bool
    boundary_violation: float
    # None means pi_D(c) is not proportional to the reference grading
    proportionality: complex | None
    residual: float
    degenerate: bool = False

    def __str__(self):
        s = "n/a" if self.proportionality is None else f"{self.proportionality:.6g}"
        return (
            f"cycle={self.is_cycle} (boundary {self.boundary_violation:.2e}), "
            f"pi_D(c) = s * chi with s = {s}, residual {self.residual:.2e}"
            + (" [degenerate]" if self.degenerate else "")
        )


def orientation_reference(t) -> np.ndarray:
    """chi for even triples; ``odd_sign * 1`` for odd ones (sign from metadata, default +)."""
    if t.chi is not None:
        return np.asarray(t.chi)
    return t.metadata.get("odd_sign", 1) * identity(t.hilbert_dim)


def check_orientation(t, c: HochschildChain, reference=None) -> OrientationReport:
    ref = restrict(orientation_reference(t) if reference is None else np.asarray(reference), t.probe_subspace)
    if c.degree == 0 or not c.terms:
        bviol = 0.0
    else:
        bviol = max_abs(pi_D(t, boundary(c)))
    value = pi_D(t, c)
    scale = max(1.0, max_abs(value))
    is_cycle = bviol <= TAU_ALG * max(1.0, max_abs(t.D)) ** max(c.degree - 1, 0) * scale
    norm_ref = float(np.vdot(ref, ref).real)
    if not c.terms or max_abs(value) == 0.0:
        return OrientationReport(is_cycle, bviol, 0.0, 0.0, degenerate=True)
    s = complex(np.vdot(ref, value) / norm_ref) if norm_ref > 0 else 0.0
    residual = max_abs(value - s * ref)
    if residual > TAU_NUM * scale:
        return OrientationReport(is_cycle, bviol, None, residual)
    return OrientationReport(is_cycle, bviol, s, residual)


def nu_normalization(n1: int, n2: int) -> complex:
    """r = nu_{n1+n2}, times i when n1 n2 is odd, with nu_n = n(n-1)/2."""
    n = n1 + n2
    nu = n * (n - 1) / 2
    return 1j * nu if (n1 * n2) % 2 else complex(nu)


# ---------------------------------------------------------------------------
# documents


def _encode(mat, t):
    if t is not None:
        for label, g in t.algebra:
            if g.shape == mat.shape and np.array_equal(g, mat):
                return label
        if np.array_equal(mat, identity(mat.shape[0])):
            return "1"
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(mat)]


def _decode(item, t, where):
    if isinstance(item, str):
        if t is None:
            raise ParseError(f"{where}: label {item!r} needs a triple to resolve")
        try:
            return np.asarray(t.generator(item))
        except KeyError:
            if item == "1":
                return identity(t.hilbert_dim)
            raise ParseError(f"{where}: unknown generator label {item!r}") from None
    try:
        arr = np.array(item, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: bad matrix") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ParseError(f"{where}: expected rows of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def chain_to_document(c: HochschildChain, t=None) -> dict:
    return {
        "degree": c.degree,
        "terms": [
            {
                "coeff": [term.coeff.real, term.coeff.imag],
                "a0_left": _encode(term.a0_left, t),
                "a0_right": _encode(term.a0_right, t),
                "legs": [_encode(a, t) for a in term.legs],
            }
            for term in c.terms
        ],
    }


def chain_from_document(doc: dict, t=None) -> HochschildChain:
    if not isinstance(doc, dict) or "degree" not in doc or "terms" not in doc:
        raise ParseError("chain document needs degree and terms")
    terms = []
    for i, item in enumerate(doc["terms"]):
        try:
            re, im = item["coeff"]
            legs = item["legs"]
            a0l, a0r = item["a0_left"], item["a0_right"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"terms[{i}] is malformed") from exc
        if len(legs) != doc["degree"]:
            raise ParseError(f"terms[{i}] has {len(legs)} legs, degree is {doc['degree']}")
        terms.append(
            ChainTerm(
                complex(re, im),
                _decode(a0l, t, f"terms[{i}].a0_left"),
                _decode(a0r, t, f"terms[{i}].a0_right"),
                tuple(_decode(a, t, f"terms[{i}].legs[{k}]") for k, a in enumerate(legs)),
            )
        )
    return HochschildChain(int(doc["degree"]), tuple(terms))
