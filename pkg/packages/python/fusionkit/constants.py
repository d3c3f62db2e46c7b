from __future__ import annotations
import os

from .errors import PreconditionViolated

DEFAULT_MAX_ORDER = 20000
DEFAULT_SUBGROUP_CAP = 100000
# largest field order accepted by the affine semilinear family builder
AGL_MAX_FIELD = 512

ENV_MAX_ORDER = "FUSIONKIT_MAX_ORDER"
ENV_SUBGROUP_CAP = "FUSIONKIT_SUBGROUP_CAP"
ENV_LOG_LEVEL = "FUSIONKIT_LOG_LEVEL"

SubgroupFilters = {
    "ALL": "all",
    "ELEMENTARY_ABELIAN": "elementary_abelian",
    "ABELIAN_EXPONENT_LE_4": "abelian_exponent_le_4",
    "CYCLIC_P_OR_4": "cyclic_p_or_4",
    "MAXIMAL_ABELIAN": "maximal_abelian",
    # exponent p for odd p, exponent dividing 4 for p = 2; not necessarily abelian
    "SMALL_EXPONENT": "small_exponent",
}

TheoremIds = {
    "THM1": "thm1",
    "THM1_ESSENTIAL_LOCAL": "thm1_essential_local",
    "THM2_NORMALIZER": "thm2_normalizer",
    "THM2_INNER": "thm2_inner",
    "CONJ_AUTOMIZER": "conj_automizer",
}

ExitCodes = {
    "OK": 0,
    "IMPLICATION_VIOLATED": 1,
    "PARSE_ERROR": 2,
    "CAP_EXCEEDED": 3,
    "INVALID_PRIME": 4,
    "PRECONDITION": 5,
}


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise PreconditionViolated(f"{name} must be an integer, got {raw!r}")
    if value < 1:
        raise PreconditionViolated(f"{name} must be positive, got {value}")
    return value


def max_order(explicit: int | None = None) -> int:
    """Enumeration cap: explicit argument, then FUSIONKIT_MAX_ORDER, then the default."""
    if explicit is not None:
        return explicit
    return _env_int(ENV_MAX_ORDER, DEFAULT_MAX_ORDER)


def subgroup_cap(explicit: int | None = None) -> int:
    if explicit is not None:
        return explicit
    return _env_int(ENV_SUBGROUP_CAP, DEFAULT_SUBGROUP_CAP)
