"""Result container shared by the quadrature and dispatch layers."""

import enum
import math
from dataclasses import dataclass, field


class Method(str, enum.Enum):
    QUADRATURE = "quadrature"
    CLOSED_FORM = "closed_form"
    RECURRENCE_SHIFT = "recurrence_shift"
    TAYLOR_PATCH = "taylor_patch"


class Warn(str, enum.Enum):
    NEAR_POLE = "near_pole"
    LARGE_SHIFT = "large_shift"
    CANCELLATION = "cancellation"


@dataclass(frozen=True)
class KurepaResult:
    value: complex
    method: Method
    est_abs_error: float
    warnings: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not (math.isfinite(self.value.real) and math.isfinite(self.value.imag)):
            raise ValueError(f"non-finite value {self.value!r}")
        if not self.est_abs_error >= 0.0:
            raise ValueError(f"negative error estimate {self.est_abs_error!r}")
