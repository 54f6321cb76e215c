"""Operating domain of the uncertain parameters and its corner parameter sets.

Uncertainty is relative: a 5% domain scales each current component and the
vehicle speed by ``1 +/- 0.05``. A zero current component therefore carries no
uncertainty. Only the corners of the hyper-rectangle are used; that is an
optimistic design choice, so results should be analysed pessimistically.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List

from .errors import ConfigurationError
from .flowfield import FlowSample


@dataclass(frozen=True)
class UncertaintyDomain:
    rel_var_u: float = 0.0
    rel_var_v: float = 0.0
    rel_var_speed: float = 0.0

    def __post_init__(self):
        for name in ("rel_var_u", "rel_var_v", "rel_var_speed"):
            val = getattr(self, name)
            if not 0.0 <= val < 1.0:
                raise ConfigurationError(f"{name} must lie in [0, 1), got {val}")

    @classmethod
    def from_percent(cls, pct: float) -> UncertaintyDomain:
        """Same variance for u, v and vehicle speed, given in percent."""
        frac = pct / 100.0
        return cls(frac, frac, frac)

    @property
    def fractions(self):
        return (self.rel_var_u, self.rel_var_v, self.rel_var_speed)

    @property
    def is_nominal(self) -> bool:
        return not any(self.fractions)


@dataclass(frozen=True)
class ParameterSet:
    sign_u: int
    sign_v: int
    sign_speed: int
    rel_var_u: float = 0.0
    rel_var_v: float = 0.0
    rel_var_speed: float = 0.0

    def __post_init__(self):
        for sign, frac in zip((self.sign_u, self.sign_v, self.sign_speed),
                              (self.rel_var_u, self.rel_var_v, self.rel_var_speed)):
            if sign not in (-1, 0, 1):
                raise ConfigurationError(f"sign must be -1, 0 or +1, got {sign}")
            if sign == 0 and frac != 0.0:
                raise ConfigurationError("sign 0 is reserved for a degenerate axis")

    @property
    def u_factor(self) -> float:
        return 1.0 + self.sign_u * self.rel_var_u

    @property
    def v_factor(self) -> float:
        return 1.0 + self.sign_v * self.rel_var_v

    @property
    def speed_factor(self) -> float:
        return 1.0 + self.sign_speed * self.rel_var_speed


NOMINAL = ParameterSet(0, 0, 0)


def corner_sets(domain: UncertaintyDomain) -> List[ParameterSet]:
    """All corners of the operating domain, lexicographic in (sign_u, sign_v, sign_speed).

    Degenerate axes (fraction 0) contribute the single sign 0, so the result
    has ``2**m`` members for ``m`` non-degenerate axes.
    """
    choices = [(-1, 1) if frac > 0 else (0,) for frac in domain.fractions]
    return [ParameterSet(su, sv, ss, *domain.fractions)
            for su, sv, ss in itertools.product(*choices)]


def perturb_flow(sample: FlowSample, pset: ParameterSet) -> FlowSample:
    return FlowSample(sample.u * pset.u_factor, sample.v * pset.v_factor)


def perturb_speed(v_veh_bf: float, pset: ParameterSet) -> float:
    speed = v_veh_bf * pset.speed_factor
    if not speed > 0:
        raise ConfigurationError(f"perturbed vehicle speed {speed} is not positive")
    return speed
