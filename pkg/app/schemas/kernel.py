from typing import Literal

from pydantic import BaseModel, Field, model_validator


class KernelSpec(BaseModel):
    """
    Parameters of the frequency-localized wave kernel
    K(t, x) = int exp(i(x.xi +/- t|xi|)) |xi|^-iota (1 + |xi|^2)^-M profile(xi) dxi.

    Behaviors:
      - k = -1 with homogeneous=False → low-frequency lump (profile psi(|xi|))
      - iota = 2 only for the low-frequency lump
      - M > 0 rejected for the low-frequency lump
    """

    k: int = Field(..., description="Dyadic scale")
    iota: Literal[0, 1, 2] = Field(0, description="Power of |D|^-1")
    M: int = Field(0, ge=0, le=50, description="Power of (1 + |D|^2)^-1")
    sign: Literal[1, -1] = Field(1, description="+1 for exp(+it|D|), -1 for exp(-it|D|)")
    homogeneous: bool = Field(False, description="Use the homogeneous widened shell for every k")

    model_config = {"frozen": True}

    @property
    def is_low_frequency(self) -> bool:
        return self.k == -1 and not self.homogeneous

    @model_validator(mode="after")
    def check_combination(self):
        if self.k < -1 and not self.homogeneous:
            raise ValueError(f"k={self.k} < -1 requires homogeneous=True")
        if self.iota == 2 and not self.is_low_frequency:
            raise ValueError("iota=2 is only defined for the low-frequency lump (k=-1)")
        if self.is_low_frequency and self.M > 0:
            raise ValueError("M > 0 is not defined for the low-frequency lump")
        return self
