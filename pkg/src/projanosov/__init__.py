"""Projective Anosov representations and Hilbert geometry at desk scale."""
from .anosov import (
    BoundarySample,
    GapCertificate,
    boundary_point,
    build_domain,
    classify_boundary_point,
    gap_certificate,
    invariant_sym_subspace,
    lift_boundary,
    positively_proximal_scan,
    sample_boundary,
)
from .errors import ProjAnosovError
from .families import (
    Octonion,
    appendix_b,
    example_block_double,
    example_reducible,
    octonion_mul,
    schottky_sl2,
    sym_square_rep,
    tau_d,
    tau_rep,
    verify_g2,
)
from .hilbert import (
    ConvexBody,
    dual_body,
    four_point_delta,
    gromov_product,
    hilbert_distance,
    hull_membership,
    klein_disk,
    translation_length,
)
from .projlin import ProjMat, Spectrum, exterior_power, is_proximal, normalize, spectrum, sym_square
from .rigidity import (
    entropy_estimate,
    entropy_scaling_check,
    flag_of,
    flag_transversality,
    hitchin_xi2_gap,
    rigidity_scan,
)
from .wordgroup import ConjClass, Representation, ball, cyclic_reduce, evaluate, parse_word

__version__ = "0.1.0"
