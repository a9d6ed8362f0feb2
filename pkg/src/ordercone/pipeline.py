"""End-to-end: a regular cone of ``G`` restricted to a finite-index subgroup."""

from __future__ import annotations

from dataclasses import dataclass

from .cones import ConeReport, ConeSpec, classify_ball, registry, verify_cone
from .convexity import SubgroupSpec, build_LH, derive_coset_reps, finite_index_transfer, lh_state_bound
from .fsa import Fsa, Word
from .groups import GroupOracle


@dataclass
class PipelineConfig:
    radius: int = 2
    cap: int | None = None
    R: int | None = None  # None: use the derived transfer constant
    base_R: int = 0  # convexity constant of the ambient group inside itself
    compare: str | None = None  # registry cone to compare classifications with
    compare_cap: int | None = None


@dataclass
class PipelineReport:
    coset_reps: list[Word]
    derived_R: int
    R: int
    states: int
    bound: int
    cone: ConeReport
    language: Fsa
    agreement: bool | None = None
    disagreements: list[Word] | None = None

    @property
    def exit_code(self) -> int:
        if self.agreement is False:
            return 2
        return self.cone.exit_code


def finite_index_pipeline(
    oracle: GroupOracle, L: Fsa, h: SubgroupSpec, config: PipelineConfig | None = None
) -> PipelineReport:
    """Transfer constant, ``L_H``, the state bound, and a cone check on the subgroup ball."""
    config = config or PipelineConfig()
    reps = h.coset_reps or derive_coset_reps(h)
    derived = finite_index_transfer(config.base_R, h, reps)
    R = derived if config.R is None else config.R
    if R < 0:
        raise ValueError("R must be non-negative")
    lh = build_LH(L, h, R)
    bound = lh_state_bound(L, h, R)
    cap = config.cap if config.cap is not None else 4 * config.radius + 2
    cone = ConeSpec(oracle, lh, "L_H", subgroup=h)
    report = verify_cone(cone, config.radius, cap)
    out = PipelineReport(list(reps), derived, R, lh.num_states, bound, report, lh)
    if config.compare:
        other = registry(config.compare)
        if other.oracle.name != oracle.name:
            raise ValueError(f"comparison cone {config.compare!r} lives in another group")
        ours = classify_ball(cone, config.radius, cap, h)
        theirs = classify_ball(other, config.radius, config.compare_cap or 7 * config.radius, h)
        diff = sorted(g for g in ours if ours[g] != theirs.get(g))
        out.agreement = not diff
        out.disagreements = diff
    return out
