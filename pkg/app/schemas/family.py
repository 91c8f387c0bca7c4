from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field, model_validator


class FamilyProfile(str, Enum):
    GAUSSIAN_BUMP = "gaussian-bump"
    ANNULAR_SHELL = "annular-shell"
    RANDOM_BANDLIMITED = "random-bandlimited"
    SHIFTED_BUMP = "shifted-bump"


class TestFamily(BaseModel):
    """
    Seeded description of a family of test fields.

    Behaviors:
      - gaussian-bump / shifted-bump → numerically compact bumps of radius support_radius
        (centered at distance `radius` from the origin for shifted-bump)
      - annular-shell → spectrum inside the shell k annulus
      - random-bandlimited → random spectrum between shells k_lo and k_hi
    """

    __test__ = False  # not a pytest class

    seed: int = Field(0, description="Generator seed; same seed gives bit-identical fields")
    count: int = Field(1, ge=1, description="Number of members")
    profile: FamilyProfile
    support_radius: float = Field(1.0, gt=0, description="Bump radius")
    k: Optional[int] = Field(None, description="Shell index for annular-shell")
    k_lo: Optional[int] = Field(None, description="Lowest shell for random-bandlimited")
    k_hi: Optional[int] = Field(None, description="Highest shell for random-bandlimited")
    radius: float = Field(0.0, ge=0, description="Distance of the bump center from the origin")

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def check_profile_parameters(self):
        if self.profile == FamilyProfile.ANNULAR_SHELL and self.k is None:
            raise ValueError("annular-shell requires k")
        if self.profile == FamilyProfile.RANDOM_BANDLIMITED:
            if self.k_lo is None or self.k_hi is None:
                raise ValueError("random-bandlimited requires k_lo and k_hi")
            if self.k_lo > self.k_hi:
                raise ValueError(f"k_lo ({self.k_lo}) must not exceed k_hi ({self.k_hi})")
        return self
