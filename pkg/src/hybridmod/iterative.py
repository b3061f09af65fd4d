"""Shift-and-subtract reduction over a w-bit input and an n-bit modulus."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigurationError, InvariantError
from .modmath import Modulus, Operand
from .trace import ReductionTrace, Unit


@dataclass(frozen=True)
class IterConfig:
    input_width: int
    modulus_width: int

    def __post_init__(self):
        if self.input_width <= self.modulus_width:
            raise ConfigurationError(
                f"input width {self.input_width} must exceed modulus width {self.modulus_width}"
            )

    @property
    def iterations(self) -> int:
        return self.input_width - self.modulus_width


def conditional_subtract_shift(state: int, shifted_m: int) -> tuple[int, bool]:
    if shifted_m <= 0:
        raise ConfigurationError("shifted modulus must be positive")
    if state >= shifted_m:
        return state - shifted_m, True
    return state, False


def reduce_iterative(
    a: Operand,
    m: Modulus,
    cfg: IterConfig,
    final_adjust: bool = True,
    check: bool = True,
) -> tuple[int, ReductionTrace]:
    """Run ``cfg.iterations`` align/subtract/shift steps.

    Without ``final_adjust`` the result is only guaranteed to be below 2M.
    The extra conditional subtract is charged to the last cycle so the cycle
    count stays equal to the iteration count.
    """
    if a.width != cfg.input_width or m.width_n != cfg.modulus_width:
        raise ConfigurationError(
            f"operand/modulus widths ({a.width}, {m.width_n}) do not match "
            f"config ({cfg.input_width}, {cfg.modulus_width})"
        )
    M = m.value
    state = a.value
    trace = ReductionTrace()
    shift = cfg.iterations
    shifted = M << shift
    for cycle in range(1, cfg.iterations + 1):
        if check and state >= 2 * shifted:
            raise InvariantError(f"state exceeds 2*(M << {shift}) before iteration {cycle}")
        before_low = state & ((1 << shift) - 1)
        state, fired = conditional_subtract_shift(state, shifted)
        if check:
            if state >= shifted:
                raise InvariantError(f"state exceeds M << {shift} after iteration {cycle}")
            # the aligned modulus has zero low bits, so only n+1 bits are touched
            if state & ((1 << shift) - 1) != before_low:
                raise InvariantError("subtraction disturbed bits below the shift offset")
        trace.add(cycle, Unit.SUBTRACT, f"shift {shift}: {'subtract' if fired else 'keep'}")
        trace.add(cycle, Unit.SHIFT, f"M >> 1 -> shift {shift - 1}")
        shift -= 1
        shifted >>= 1
    trace.stats["pre_adjust"] = state
    if final_adjust:
        state, fired = conditional_subtract_shift(state, M)
        trace.add(cfg.iterations, Unit.ADJUST, "final subtract" if fired else "final keep")
        trace.stats["adjust_subtractions"] = int(fired)
    return state, trace
