"""Regular languages for positive cones: automata, fellow travellers, subgroup languages."""

from .cones import ConeReport, ConeSpec, classify_ball, cone_from_generators, registry, verify_cone
from .convexity import (
    SubgroupSpec,
    build_LH,
    build_Y,
    check_convexity,
    finite_index_transfer,
    kernel_mod,
    parse_subgroup,
    state_bound,
)
from .fsa import Alphabet, Fsa, minimize, semigroup_automaton, star_of_words
from .groups import CapacityError, GroupOracle, Presentation, gamma, klein_bottle, preset_oracle
from .schreier import (
    ModHom,
    SubgroupPresentation,
    Transversal,
    abelianization,
    h_presentation_closed_form,
    navas_cone_generators,
    rank_certificate,
    subgroup_presentation,
)
from .traveller import build_LM, build_tilde_L

__all__ = [
    "Alphabet",
    "CapacityError",
    "ConeReport",
    "ConeSpec",
    "Fsa",
    "GroupOracle",
    "ModHom",
    "Presentation",
    "SubgroupPresentation",
    "SubgroupSpec",
    "Transversal",
    "abelianization",
    "build_LH",
    "build_LM",
    "build_Y",
    "build_tilde_L",
    "check_convexity",
    "classify_ball",
    "cone_from_generators",
    "finite_index_transfer",
    "gamma",
    "h_presentation_closed_form",
    "kernel_mod",
    "klein_bottle",
    "minimize",
    "navas_cone_generators",
    "parse_subgroup",
    "preset_oracle",
    "rank_certificate",
    "registry",
    "semigroup_automaton",
    "star_of_words",
    "state_bound",
    "subgroup_presentation",
    "verify_cone",
]
