"""The seven candidate link families and their parameter constraints.

Each family is a continued-fraction template in integer parameters
(m, n, l); the two four-entry families additionally carry the sign of l
in their third entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .contfrac import ContinuedFraction


class InvalidParametersError(ValueError):
    """Family parameters violate the family's constraints."""


class Family(Enum):
    A1 = "a-1"
    B1 = "b-1"
    B2 = "b-2"
    B3 = "b-3"
    B4 = "b-4"
    C1 = "c-1"
    C2 = "c-2"

    @property
    def cli_name(self) -> str:
        return self.value.replace("-", "")

    @classmethod
    def from_cli(cls, name: str) -> "Family":
        for member in cls:
            if member.cli_name == name.lower() or member.value == name.lower():
                return member
        raise InvalidParametersError(f"unknown family {name!r}")

    @property
    def takes_l(self) -> bool:
        return self is not Family.A1


@dataclass(frozen=True, slots=True)
class FamilyMatch:
    """A family with concrete parameters.  ``l`` is absent for A1 only."""

    family: Family
    m: int
    n: int
    l: int | None = None

    @property
    def sgn_l(self) -> int:
        if self.l is None:
            raise InvalidParametersError("family without l has no sgn(l)")
        return 1 if self.l > 0 else -1

    def params(self) -> dict[str, int]:
        out = {"m": self.m, "n": self.n}
        if self.l is not None:
            out["l"] = self.l
        return out

    def check(self) -> "FamilyMatch":
        """Validate the family constraints, returning self."""
        f, m, n, l = self.family, self.m, self.n, self.l
        if f.takes_l and l is None:
            raise InvalidParametersError(f"{f.value} needs l")
        if not f.takes_l and l is not None:
            raise InvalidParametersError(f"{f.value} takes no l")
        ok = m >= 1
        if f is Family.A1:
            ok = ok and n not in (0, 1)
        elif f is Family.B1:
            ok = ok and abs(n) >= 2 and abs(l) >= 2 and (m > 1 or n <= -2)
        elif f in (Family.B2, Family.B3):
            ok = ok and abs(n) >= 2 and l >= 1 and (m > 1 or n <= -2)
        elif f is Family.B4:
            ok = ok and n != 0 and l not in (0, 1)
        elif f is Family.C1:
            ok = ok and n != 0 and l not in (0, 1)
        elif f is Family.C2:
            ok = ok and n not in (0, 1) and l != 0
        if not ok:
            raise InvalidParametersError(
                f"parameters {self.params()} violate the {f.value} constraints"
            )
        return self


def family_cf(match: FamilyMatch) -> ContinuedFraction:
    """The literal continued fraction of a family with given parameters."""
    match.check()
    f, m, n, l = match.family, match.m, match.n, match.l
    if f is Family.A1:
        return ContinuedFraction((2 * m + 1, 2 * n - 1))
    assert l is not None
    if f is Family.B1:
        return ContinuedFraction((2 * m, 2 * n, 2 * l))
    if f is Family.B2:
        return ContinuedFraction((2 * m, 2 * n - 1, -2 * l))
    if f is Family.B3:
        return ContinuedFraction((2 * m, 2 * n + 1, 2 * l))
    if f is Family.B4:
        return ContinuedFraction((2 * m + 1, 2 * n, 2 * l - 1))
    sgn = 1 if l > 0 else -1
    if f is Family.C1:
        return ContinuedFraction((2 * m + 1, 2 * n, -2 * sgn, 2 * l - 1))
    return ContinuedFraction((2 * m + 1, 2 * n - 1, -2 * sgn, 2 * l))
