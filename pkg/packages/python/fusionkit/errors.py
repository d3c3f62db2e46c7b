from __future__ import annotations
from typing import Optional


class FusionKitError(ValueError):
    code = "FUSIONKIT_ERROR"

    def __init__(self, detail: Optional[str] = None) -> None:
        self.detail = detail
        super().__init__(self.code if not detail else f"{self.code}: {detail}")


class InvalidPermutation(FusionKitError):
    code = "INVALID_PERMUTATION"


class CapExceeded(FusionKitError):
    code = "CAP_EXCEEDED"


class GroupFormatError(FusionKitError):
    code = "GROUP_FORMAT"

    def __init__(self, detail: Optional[str] = None, line: Optional[int] = None) -> None:
        self.line = line
        super().__init__(detail if line is None else f"line {line}: {detail}")


class PNotPrime(FusionKitError):
    code = "P_NOT_PRIME"


class SylowMismatch(FusionKitError):
    code = "SYLOW_MISMATCH"


class PreconditionViolated(FusionKitError):
    code = "PRECONDITION_VIOLATED"


class NotPGroup(FusionKitError):
    code = "NOT_P_GROUP"


class NotFound(FusionKitError):
    code = "NOT_FOUND"


class ClaimFailed(FusionKitError):
    code = "CLAIM_FAILED"
