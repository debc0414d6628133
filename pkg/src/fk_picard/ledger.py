"""Rank bookkeeping for fibered surfaces.

A pure calculator over user-supplied invariants: the Hodge number h11,
the Picard number rho, and the component counts m_s of the singular
fibers. Nothing geometric is derived here; the module only applies

    rank MW = rho - 2 - sum(m_s - 1)        (Shioda-Tate)
    dim IH  = h11 - 2 - sum(m_s - 1)

and the two predicates built on them: extremal (the IH dimension
vanishes) and Picard maximal (rho = h11). Negative intermediate values
mean the input violates the hypotheses and raise; they are never
clamped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from .errors import InconsistentLedgerError, InputError


@dataclass(frozen=True)
class RankLedger:
    h11: int
    rho: int
    fiber_components: Tuple[int, ...] = ()
    has_fixed_part: bool = False

    def __post_init__(self):
        if self.h11 < 0 or self.rho < 0:
            raise InputError("h11 and rho must be nonnegative")
        if self.rho > self.h11:
            raise InputError(
                f"rho = {self.rho} exceeds h11 = {self.h11}; "
                "the Picard number is bounded by the Hodge number")
        object.__setattr__(self, "fiber_components",
                           tuple(int(m) for m in self.fiber_components))
        if any(m < 1 for m in self.fiber_components):
            raise InputError("every fiber component count is at least 1")

    @property
    def excess_components(self) -> int:
        return sum(m - 1 for m in self.fiber_components)


def mw_rank(ledger: RankLedger) -> int:
    """rho - 2 - sum(m_s - 1); requires no fixed part."""
    if ledger.has_fixed_part:
        raise InconsistentLedgerError(
            "Mordell-Weil rank formula assumes the Jacobian fibration "
            "has no fixed part")
    value = ledger.rho - 2 - ledger.excess_components
    if value < 0:
        raise InconsistentLedgerError(
            f"rank formula gives {value} < 0; ledger data inconsistent")
    return value


def ih11_dim(ledger: RankLedger) -> int:
    """h11 - 2 - sum(m_s - 1)."""
    value = ledger.h11 - 2 - ledger.excess_components
    if value < 0:
        raise InconsistentLedgerError(
            f"IH dimension formula gives {value} < 0; ledger data inconsistent")
    return value


def is_extremal(ledger: RankLedger) -> bool:
    return ih11_dim(ledger) == 0


def is_picard_maximal(ledger: RankLedger) -> bool:
    return ledger.rho == ledger.h11
