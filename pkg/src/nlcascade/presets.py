"""
Run configurations and the named parameter presets.

Several published parameter sets leave some values open (|alpha|, phi,
beta for the canonical case, kappa of the GP coupling). Presets fill them
with documented choices; each such choice is listed in
``Preset.assumptions`` so the CLI can warn about it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .coherent_state import DEFAULT_EPS, FieldParams
from .dynamics import CouplingParams
from .errors import InvalidSpec, UnknownPreset
from .nonlinearity import NonlinearitySpec

__all__ = ["RunConfig", "Preset", "PRESETS", "load_preset", "get_preset"]


@dataclass(frozen=True)
class RunConfig:
    field: FieldParams
    coupling: CouplingParams
    phi: float | None = None  # defaults to the field phase
    tau_max: float = 50.0
    tau_steps: int = 2001
    eps: float = DEFAULT_EPS
    verify: bool = False
    output_path: str = "-"

    def __post_init__(self):
        if self.phi is None:
            object.__setattr__(self, "phi", self.field.alpha_phase)
        if not (self.tau_max > 0 and math.isfinite(self.tau_max)):
            raise InvalidSpec(f"tau_max must be positive, got {self.tau_max}")
        if int(self.tau_steps) != self.tau_steps or self.tau_steps < 2:
            raise InvalidSpec(f"tau_steps must be an integer >= 2, got {self.tau_steps}")
        if not 0 < self.eps < 1:
            raise InvalidSpec(f"eps must lie in (0, 1), got {self.eps}")

    def with_(self, **changes) -> RunConfig:
        return replace(self, **changes)


@dataclass(frozen=True)
class Preset:
    name: str
    config: RunConfig
    figure_note: str
    assumptions: dict[str, str] = field(default_factory=dict)


_GP = NonlinearitySpec.gilmore_perelomov(1.5)
_SQRT_N = NonlinearitySpec.barut_girardello(0.5)
_UNIT = NonlinearitySpec.unit()


def _bg(name, beta):
    return Preset(
        name,
        RunConfig(FieldParams(2.0, 0.0, _SQRT_N), CouplingParams(_SQRT_N, beta)),
        f"f = g = sqrt(n) (Barut-Girardello, kappa = 1/2), beta = {beta} (figures 10-13)",
        {
            "alpha_mag": "|alpha| = 2 is an assumed value, not a published one",
            "alpha_phase": "phi = 0 is an assumed value, not a published one",
        },
    )


PRESETS: dict[str, Preset] = {
    p.name: p
    for p in (
        Preset(
            "canonical",
            RunConfig(FieldParams(8.0, 0.0, _UNIT), CouplingParams(_UNIT, 0.01)),
            "f = g = 1, canonical coherent state (figures 2-5)",
            {
                "alpha_mag": "|alpha| = 8 is assumed (<n>(0) = 64, near the published "
                             "collapse plateau 63.5)",
                "alpha_phase": "phi = 0 is an assumed value, not a published one",
                "beta": "beta = 0.01 is an assumed value, not a published one",
            },
        ),
        Preset(
            "gp",
            RunConfig(FieldParams(0.9, math.pi / 2, _GP), CouplingParams(_GP, 0.01)),
            "f = g = Gilmore-Perelomov, kappa = 3/2, |alpha| = 0.9, beta = 0.01, "
            "phi = pi/2 (figures 6-9)",
        ),
        _bg("bg-01", 0.01),
        _bg("bg-1", 0.1),
        Preset(
            "cs-gp-coupling",
            RunConfig(FieldParams(2.0, 0.0, _UNIT), CouplingParams(_GP, 0.01)),
            "f = 1 (canonical state), g = Gilmore-Perelomov coupling (figures 14-17)",
            {
                "kappa_g": "kappa = 3/2 for the coupling is assumed",
                "alpha_mag": "|alpha| = 2 is an assumed value, not a published one",
                "alpha_phase": "phi = 0 is an assumed value, not a published one",
                "beta": "beta = 0.01 is an assumed value, not a published one",
            },
        ),
    )
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise UnknownPreset(
            f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}"
        ) from None


def load_preset(name: str) -> RunConfig:
    return get_preset(name).config
