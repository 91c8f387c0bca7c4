from typing import Iterable, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

# Flags raised by the numerical layers
FLAG_WRAPAROUND = "wraparound"
FLAG_RESOLUTION = "resolution"
FLAG_QUADRATURE = "quadrature"
FLAG_UNSTABLE = "unstable"
FLAG_BESOV_TAIL = "besov-tail"
FLAG_NON_FINITE = "non-finite"
FLAG_EMPTY = "empty"


class ConstantReport(BaseModel):
    """
    Empirical LHS/RHS ratio statistics of one inequality at one parameter point.

    Behaviors:
      - zero-field samples (LHS = RHS = 0) are counted in excluded_zero, never in ratios
      - any flag makes the report invalid for pass/fail aggregation
    """

    inequality: str = Field(..., description="Identifier of the checked inequality")
    parameters: dict[str, Optional[float | int | str]] = Field(default_factory=dict)
    ratios: list[float] = Field(default_factory=list, description="LHS / RHS per sample")
    sup_ratio: Optional[float] = None
    median_ratio: Optional[float] = None
    p90_ratio: Optional[float] = None
    excluded_zero: int = 0
    slope_fits: dict[str, float] = Field(default_factory=dict)
    extras: dict[str, float] = Field(default_factory=dict)
    flags: list[str] = Field(default_factory=list)
    refined_sup: Optional[float] = None

    @model_validator(mode="after")
    def check_sup_dominates(self):
        if self.ratios and self.sup_ratio is not None and max(self.ratios) > self.sup_ratio:
            raise ValueError("sup_ratio must dominate every ratio sample")
        return self

    @classmethod
    def from_samples(
        cls,
        inequality: str,
        parameters: dict,
        lhs: Iterable[float],
        rhs: Iterable[float],
        flags: Iterable[str] = (),
        **extra,
    ) -> "ConstantReport":
        """Build a report from paired LHS/RHS values."""
        ratios: list[float] = []
        excluded = 0
        report_flags = list(dict.fromkeys(flags))
        for left, right in zip(lhs, rhs):
            if left == 0 and right == 0:
                excluded += 1
                continue
            ratio = left / right if right else np.inf
            if not np.isfinite(ratio):
                if FLAG_NON_FINITE not in report_flags:
                    report_flags.append(FLAG_NON_FINITE)
                continue
            ratios.append(float(ratio))
        return cls.from_ratios(inequality, parameters, ratios, report_flags, excluded_zero=excluded, **extra)

    @classmethod
    def from_ratios(
        cls,
        inequality: str,
        parameters: dict,
        ratios: list[float],
        flags: Iterable[str] = (),
        **extra,
    ) -> "ConstantReport":
        report_flags = list(dict.fromkeys(flags))
        if not ratios and FLAG_EMPTY not in report_flags:
            report_flags.append(FLAG_EMPTY)
        values = np.asarray(ratios, dtype=float)
        return cls(
            inequality=inequality,
            parameters=parameters,
            ratios=[float(v) for v in values],
            sup_ratio=float(values.max()) if values.size else None,
            median_ratio=float(np.median(values)) if values.size else None,
            p90_ratio=float(np.percentile(values, 90)) if values.size else None,
            flags=report_flags,
            **extra,
        )

    @property
    def valid(self) -> bool:
        return not self.flags

    def add_flag(self, flag: str) -> None:
        if flag not in self.flags:
            self.flags.append(flag)

    def to_row(self) -> dict:
        """Flat record for the result tables."""
        row = {"inequality": self.inequality, **self.parameters}
        row.update(
            samples=len(self.ratios),
            excluded_zero=self.excluded_zero,
            sup_ratio=self.sup_ratio,
            median_ratio=self.median_ratio,
            p90_ratio=self.p90_ratio,
            refined_sup=self.refined_sup,
            flags=";".join(self.flags),
        )
        row.update({f"fit_{key}": value for key, value in self.slope_fits.items()})
        row.update(self.extras)
        return row
