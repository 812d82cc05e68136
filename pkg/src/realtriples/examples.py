"""Concrete real spectral triples and orientation cycles.

* ``torus_triple``: flat torus with periodic spinors, truncated to the momentum
  box {-K..K}^n. ``H = modes (x) spinors``; the algebra is generated by the
  Fourier shifts ``e^{i x_mu}``.
* ``two_point_triple``: a metric-dimension-0 even triple in KO-dimension 0+-.
* ``momentum_pair_triple``: the torus Dirac operator restricted to the two
  modes {+k, -k}; a small triple in any KO label.
* ``random_triple``: random Dirac operator compatible with a given (J, chi).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .clifford import SIGMA, build_gamma_rep, chirality_of, parse_sign
from .errors import CapExceeded, InvariantViolation, WrongDimension
from .hochschild import HochschildChain, check_orientation, shuffle
from .matrix_core import AntiUnitaryOp, dagger, identity, kron, max_abs
from .real_structure import KOLabel, charge_conjugation_matrix, odd_variant
from .spectral_triple import RealSpectralTriple

DEFAULT_CAP = 4096


@dataclass(frozen=True)
class TorusSpec:
    n: int
    cutoff: int
    truncation_mode: str = "hard"
    j_variant: int | None = None
    odd_sign: int | None = None
    generator_degree: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.cutoff < 1:
            raise ValueError("cutoff must be positive")
        if self.truncation_mode not in ("hard", "cyclic"):
            raise ValueError(f"unknown truncation mode {self.truncation_mode!r}")
        if self.generator_degree < 1:
            raise ValueError("generator_degree must be positive")
        odd_sign = parse_sign(self.odd_sign)
        variant = parse_sign(self.j_variant)
        if self.n % 2:
            if odd_sign is None:
                raise ValueError(f"n = {self.n} is odd: odd_sign is required")
            forced = odd_variant(self.n)
            if variant is not None and variant != forced:
                raise ValueError(f"n = {self.n} only admits the {'+' if forced > 0 else '-'} variant")
            variant = forced
        else:
            if odd_sign is not None:
                raise ValueError(f"n = {self.n} is even: no odd_sign")
            if variant is None:
                variant = 1
        if self.truncation_mode == "hard" and self.cutoff < self.generator_degree:
            raise ValueError("hard truncation needs cutoff >= generator_degree")
        object.__setattr__(self, "odd_sign", odd_sign)
        object.__setattr__(self, "j_variant", variant)

    @property
    def label(self) -> KOLabel:
        return KOLabel(self.n % 8, self.j_variant)

    @property
    def hilbert_dim(self) -> int:
        return (2 * self.cutoff + 1) ** self.n * 2 ** (self.n // 2)


def _shift(size: int, cyclic: bool) -> np.ndarray:
    s = np.eye(size, k=-1, dtype=np.complex128)
    if cyclic:
        s[0, size - 1] = 1.0
    return s


def _axis_op(op: np.ndarray, axis: int, n: int, size: int) -> np.ndarray:
    one = identity(size)
    return kron(*[op if mu == axis else one for mu in range(n)])


def _generator_names(n: int, degree: int):
    """(label, axis, power) for the Fourier generators up to the given degree."""
    for mu in range(n):
        base = "u" if n == 1 else f"u{mu + 1}"
        for j in range(1, degree + 1):
            suffix = "" if j == 1 else f"^{j}"
            yield base + suffix, mu, j
            yield base + "*" + suffix, mu, -j


def torus_triple(spec: TorusSpec, cap: int = DEFAULT_CAP) -> RealSpectralTriple:
    dim = spec.hilbert_dim
    if dim > cap:
        raise CapExceeded(f"Hilbert dimension {dim} exceeds the cap {cap}")
    n, K = spec.n, spec.cutoff
    size = 2 * K + 1
    cyclic = spec.truncation_mode == "cyclic"
    gammas = build_gamma_rep(n, spec.odd_sign)
    spin = gammas.size
    ks = np.arange(-K, K + 1, dtype=float)
    modes = size**n

    D = np.zeros((dim, dim), dtype=np.complex128)
    for mu in range(n):
        D += kron(_axis_op(np.diag(ks).astype(np.complex128), mu, n, size), 1j * gammas.matrices[mu])

    one_spin = identity(spin)
    shift = _shift(size, cyclic)
    algebra = [("1", identity(dim))]
    for label, mu, power in _generator_names(n, spec.generator_degree):
        base = shift if power > 0 else dagger(shift)
        s = np.linalg.matrix_power(base, abs(power))
        algebra.append((label, kron(_axis_op(s, mu, n, size), one_spin)))

    flip = np.eye(modes, dtype=np.complex128)[::-1]
    C = charge_conjugation_matrix(n, spec.j_variant, spec.odd_sign)
    J = AntiUnitaryOp(kron(flip, C))
    chi = kron(identity(modes), chirality_of(n).matrix) if n % 2 == 0 else None

    probe = None
    if not cyclic:
        g = spec.generator_degree
        inside = np.array(
            [all(abs(k) <= K - g for k in ks_) for ks_ in itertools.product(ks, repeat=n)], dtype=float
        )
        probe = kron(np.diag(inside).astype(np.complex128), one_spin)

    metadata = {
        "model": "truncated torus",
        "n": n,
        "cutoff": K,
        "truncation_mode": spec.truncation_mode,
        "generator_degree": spec.generator_degree,
    }
    if spec.odd_sign is not None:
        metadata["odd_sign"] = spec.odd_sign
    return RealSpectralTriple(
        algebra=tuple(algebra),
        D=D,
        J=J,
        chi=chi,
        claimed_label=spec.label,
        metric_dim=n,
        probe_subspace=probe,
        metadata=metadata,
    )


def two_point_triple(mass: float = 1.0, j_variant=1) -> RealSpectralTriple:
    """Two points with the opposite algebra on a second C^2 factor.

    ``H = C^2 (x) C^2``, the algebra acts on the first factor, J swaps the
    factors, ``D = m (sigma1 (x) 1 + v 1 (x) sigma1)`` with ``v`` the variant.
    """
    if mass <= 0:
        raise ValueError("mass must be positive")
    v = parse_sign(j_variant)
    if v is None:
        raise ValueError("j_variant must be + or -")
    s0, s1, s3 = SIGMA[0], SIGMA[1], SIGMA[3]
    swap = np.zeros((4, 4), dtype=np.complex128)
    for i, j in itertools.product(range(2), repeat=2):
        swap[2 * j + i, 2 * i + j] = 1.0
    algebra = (
        ("1", identity(4)),
        ("e1", kron(np.diag([1, 0]), s0)),
        ("e2", kron(np.diag([0, 1]), s0)),
    )
    D = mass * (kron(s1, s0) + v * kron(s0, s1))
    return RealSpectralTriple(
        algebra=algebra,
        D=D,
        J=AntiUnitaryOp(swap),
        chi=kron(s3, s3),
        claimed_label=KOLabel(0, v),
        metric_dim=0,
        metadata={"model": "two-point", "mass": float(mass)},
    )


def momentum_pair_triple(n: int, j_variant=None, odd_sign=None, momentum=None) -> RealSpectralTriple:
    """Torus Dirac operator on the two modes +-k.

    ``H = C^2 (x) spinors`` with ``D = diag(1, -1) (x) sum_mu i k_mu gamma^mu``
    and ``J = sigma1 (x) C``. The algebra holds the two mode projections.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    odd_sign = parse_sign(odd_sign)
    if n % 2 and odd_sign is None:
        odd_sign = 1
    variant = parse_sign(j_variant)
    if n % 2:
        variant = odd_variant(n) if variant is None else variant
    elif variant is None:
        variant = 1
    k = np.arange(1, n + 1, dtype=float) if momentum is None else np.asarray(momentum, dtype=float)
    if k.shape != (n,):
        raise ValueError(f"momentum must have {n} components")
    gammas = build_gamma_rep(n, odd_sign)
    block = sum(1j * k[mu] * gammas.matrices[mu] for mu in range(n))
    spin = gammas.size
    C = charge_conjugation_matrix(n, variant, odd_sign)
    chi = kron(SIGMA[0], chirality_of(n).matrix) if n % 2 == 0 else None
    one = identity(spin)
    metadata = {"model": "momentum pair", "n": n, "momentum": [float(x) for x in k]}
    if odd_sign is not None:
        metadata["odd_sign"] = odd_sign
    return RealSpectralTriple(
        algebra=(
            ("1", identity(2 * spin)),
            ("p+", kron(np.diag([1, 0]), one)),
            ("p-", kron(np.diag([0, 1]), one)),
        ),
        D=kron(np.diag([1, -1]), block),
        J=AntiUnitaryOp(kron(SIGMA[1], C)),
        chi=chi,
        claimed_label=KOLabel(n % 8, variant),
        metric_dim=0,
        metadata=metadata,
    )


def finite_triple(label, odd_sign=1) -> RealSpectralTriple:
    """Smallest shipped triple carrying a given KO label."""
    label = KOLabel.parse(label) if isinstance(label, str) else label
    if label.n_mod8 == 0:
        return two_point_triple(1.0, label.variant)
    return momentum_pair_triple(label.n_mod8, label.variant, odd_sign if label.n_mod8 % 2 else None)


def random_triple(label, multiplicity: int = 2, rng=None, kernel: bool = False, odd_sign=1) -> RealSpectralTriple:
    """Random D on ``base (x) C^r`` with the base triple's J and chi.

    D is made chi-odd and J-symmetric with the label's eps'. With ``kernel``
    (even labels) D is compressed off span{x, Jx} for a chirality eigenvector x,
    which forces a nontrivial kernel.
    """
    rng = np.random.default_rng(rng)
    base = finite_triple(label, odd_sign)
    r = int(multiplicity)
    L = kron(base.J.linear_part, identity(r))
    J = AntiUnitaryOp(L)
    chi = None if base.chi is None else kron(base.chi, identity(r))
    d = L.shape[0]
    h = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    h = h + dagger(h)
    if chi is not None:
        h = 0.5 * (h - chi @ h @ chi)
    eps_prime = base.claimed_label.variant
    D = 0.5 * (h + eps_prime * J.conjugate(h))
    if kernel:
        if chi is None:
            raise ValueError("kernel option needs an even label")
        if r < 2:
            raise ValueError("kernel option needs multiplicity >= 2")
        plus = np.flatnonzero(np.isclose(np.diag(chi).real, 1.0))
        x = np.zeros(d, dtype=np.complex128)
        x[plus] = rng.normal(size=plus.size) + 1j * rng.normal(size=plus.size)
        span = np.stack([x, J.apply(x)], axis=1)
        q, _ = np.linalg.qr(span)
        rank = np.linalg.matrix_rank(span)
        q = q[:, :rank]
        comp = identity(d) - q @ dagger(q)
        D = comp @ D @ comp
    D = 0.5 * (D + dagger(D))
    if max_abs(D) < 1e-9:
        raise InvariantViolation("random Dirac operator vanished")
    metadata = {"model": "random", "multiplicity": r, "kernel": bool(kernel)}
    if base.chi is None:
        metadata["odd_sign"] = base.metadata.get("odd_sign", 1)
    return RealSpectralTriple(
        algebra=(("1", identity(d)),),
        D=D,
        J=J,
        chi=chi,
        claimed_label=base.claimed_label,
        metric_dim=0,
        metadata=metadata,
    )


# ---------------------------------------------------------------------------
# orientation cycles


def _is_circle(t) -> bool:
    return t.metadata.get("model") == "truncated torus" and t.metadata.get("n") == 1


def circle_cycle(t: RealSpectralTriple) -> HochschildChain:
    """``(u (x) 1°) (x) u*``, which evaluates to ``odd_sign * 1`` on interior modes.

    The reversed chain ``(u* (x) 1°) (x) u`` gives ``-odd_sign * 1``.
    """
    if not _is_circle(t):
        raise WrongDimension("circle_cycle needs a 1-dimensional torus triple")
    one = t.generator("1")
    return HochschildChain.single(t.generator("u"), one, [t.generator("u*")], names=("u", "1", "u*"))


def _identity_embed(a):
    return a


def torus2_cycle(t: RealSpectralTriple) -> HochschildChain:
    """Shuffle of the two circle cycles rescaled so that pi_D(c) = chi.

    Works on the odd-odd product of two circles (generators ``u(x)1``, ``1(x)u``)
    and on the native 2-torus (generators ``u1``, ``u2``).
    """
    labels = set(t.labels())
    if {"u⊗1", "u*⊗1", "1⊗u", "1⊗u*"} <= labels:
        names = ("u⊗1", "u*⊗1", "1⊗u", "1⊗u*")
    elif t.metadata.get("model") == "truncated torus" and t.metadata.get("n") == 2:
        names = ("u1", "u1*", "u2", "u2*")
    else:
        raise WrongDimension("torus2_cycle needs a product of two circles or a 2-torus")
    one = identity(t.hilbert_dim)
    u1, u1s, u2, u2s = (t.generator(x) for x in names)
    c1 = HochschildChain.single(u1, one, [u1s])
    c2 = HochschildChain.single(u2, one, [u2s])
    raw = shuffle(c1, c2, _identity_embed, _identity_embed)
    report = check_orientation(t, raw)
    s = report.proportionality
    if s is None or abs(s) == 0:
        raise InvariantViolation("pi_D of the shuffled cycle is not a nonzero multiple of chi")
    return raw * (1.0 / s)
