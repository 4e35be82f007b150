"""modalkit: a finite-model workbench for Kripke frames, modal algebras,
and the duality between them."""

from .errors import (
    InvalidInputError,
    MalformedMapError,
    ModalkitError,
    ParseError,
    SearchSpaceExceededError,
    UnsoundPresentationError,
    UnsupportedUltrafilterError,
)
from .formula import (
    BOT,
    Bot,
    Box,
    Formula,
    Imp,
    Var,
    conj,
    diamond,
    disj,
    iff,
    modal_depth,
    neg,
    node_count,
    parse,
    render,
    substitute,
    top,
    variables,
)
from .frame import (
    BoundedMorphism,
    Frame,
    Model,
    Validity,
    bit_list,
    bits,
    disjoint_union,
    find_bounded_morphisms,
    frame_from_dict,
    frame_to_dict,
    frame_valid,
    generated_subframe,
    is_bounded_morphism,
    is_isomorphic,
    truth,
    ultrafilter_extension,
    ultraproduct_principal,
    validates,
)
from .algebra import (
    Homomorphism,
    ModalAlgebra,
    algebra_from_dict,
    algebra_to_dict,
    algebra_validates,
    cf,
    cm,
    decompose_cf_of_power,
    direct_power,
    direct_product,
    dual_of_bounded_morphism,
    dual_of_homomorphism,
    em,
    is_homomorphism,
    jt_embedding,
)
from .firstorder import (
    FOFormula,
    check_translation_equivalence,
    fo_satisfies,
    frame_satisfies,
    is_quasi_modal,
    parse_fo,
    render_fo,
    simplify_fo,
    standard_translation,
)
from .variety import (
    FreeAlgebraResult,
    VarietyPresentation,
    canonical_frame_level_n,
    canonicity_report,
    free_algebra,
    power_commutation_probe,
)
from .definability import (
    FrameClass,
    closure_report,
    enumerate_frames,
    search_defining_formula,
)
from .limits import DEFAULT_LIMITS, Limits

__version__ = "0.1.0"
