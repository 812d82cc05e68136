"""Finite real spectral triples, their tensor products and KO-dimension tables."""
from .clifford import GammaRep, build_gamma_rep, chirality_of, compose_reps
from .errors import TripleError
from .examples import (
    TorusSpec,
    circle_cycle,
    finite_triple,
    momentum_pair_triple,
    random_triple,
    torus2_cycle,
    torus_triple,
    two_point_triple,
)
from .hochschild import HochschildChain, boundary, check_orientation, pi_D, shuffle
from .matrix_core import AntiUnitaryOp, SpectrumReport, eigh
from .product import (
    EigenPair,
    NoTableEntry,
    ProductRecipe,
    intertwiner_U,
    m_matrix,
    predicted_ko,
    predicted_spectrum,
    product_eigenbasis,
    product_triple,
)
from .real_structure import KOLabel, KOSignature, build_charge_conjugation, ko_label, signature_of
from .spectral_triple import (
    RealSpectralTriple,
    check_first_order,
    check_reality,
    check_zero_order,
    deserialize,
    serialize,
)

__all__ = [name for name in dir() if not name.startswith("_")]
