from .perm import Permutation
from .group import GroupTable, SubgroupHandle, enumerate_group
from .groupfile import load_group_file, parse_group_file, format_group_file
from .pstructure import (
    sylow_p,
    op_residual,
    hyperfocal_puig,
    hyperfocal_fusion,
    focal_subgroup,
    is_p_nilpotent,
    enumerate_subgroups,
    plocal_profile,
)
from .fusion import hom_set, aut_group, fusion_equal, is_essential, essential_classes, normalizer_system_group
from .control import (
    thm1_validate,
    thm1_essential_local_validate,
    thm2_validate,
    conj_automizer_control,
    main_lemma_verify,
)
from .critical import AutSetup, automizer_setup, certify_D, commutator_with_auts, find_thompson_D
from .field import GaloisField
from .corpus import build_agl_family, verify_agl_claims, build_sl23, verify_sl23_quillen, builtin_corpus, load_manifest
from .report import AnalysisReport, canonical_json

__all__ = [
    "Permutation",
    "GroupTable",
    "SubgroupHandle",
    "enumerate_group",
    "load_group_file",
    "parse_group_file",
    "format_group_file",
    "sylow_p",
    "op_residual",
    "hyperfocal_puig",
    "hyperfocal_fusion",
    "focal_subgroup",
    "is_p_nilpotent",
    "enumerate_subgroups",
    "plocal_profile",
    "hom_set",
    "aut_group",
    "fusion_equal",
    "is_essential",
    "essential_classes",
    "normalizer_system_group",
    "thm1_validate",
    "thm1_essential_local_validate",
    "thm2_validate",
    "conj_automizer_control",
    "main_lemma_verify",
    "AutSetup",
    "automizer_setup",
    "certify_D",
    "commutator_with_auts",
    "find_thompson_D",
    "GaloisField",
    "build_agl_family",
    "verify_agl_claims",
    "build_sl23",
    "verify_sl23_quillen",
    "builtin_corpus",
    "load_manifest",
    "AnalysisReport",
    "canonical_json",
]
