"""Exact chain-level algebra for multicomplexes and their equivariant homology."""

from .chain_complex import (
    ChainComplex,
    ChainMap,
    GradedModule,
    HomologyGroup,
    ShortExactSequence,
    cone,
    connecting_map,
    homology,
    les_from_ses,
)
from .errors import (
    ChainMapError,
    NotAComplexError,
    RelationError,
    S1ChainsError,
    UnsupportedRingError,
    ValidationError,
)
from .exact_linear import GF, QQ, ZZ, Matrix, smith_normal_form
from .models import (
    Orbit,
    OrbitSpectrum,
    model_cbad,
    model_ck,
    sc_from_spectrum,
    sphere_spectrum,
    verify_pi_iso,
)
from .s1_complex import S1Complex, equivariant, equivariant_homology, gysin_les, quotient, verify_relations

__version__ = "0.1.0"
