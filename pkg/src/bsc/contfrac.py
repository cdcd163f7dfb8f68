"""Exact arithmetic for subtractive continued fractions over extended rationals.

Every continued fraction in this package uses the subtractive convention

    [a_1, ..., a_k] = 1 / (a_1 - 1/(a_2 - 1/(a_3 - ... - 1/a_k)))

with nonzero integer entries.  Values live in the extended rationals
Q ∪ {1/0}: inverting zero yields the point at infinity, so evaluation is
total and never raises.  A reduced fraction p/q with p odd and q even has a
unique expansion in which every entry is even; that expansion, and the
rewrite identities for runs of ±2, feed everything downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence, Union


class ZeroOverZeroError(ValueError):
    """The fraction 0/0 has no reduced representative."""


class BadParityError(ValueError):
    """A fraction does not have the odd-numerator/even-denominator shape."""


class OutOfRangeError(ValueError):
    """A fraction lies outside the open interval (0, 1)."""


class ZeroEntryProducedError(ValueError):
    """A run-collapse rewrite would emit a zero entry."""


class Parity(Enum):
    """Parity class of a reduced fraction (numerator mod 2, denominator mod 2).

    Both parts even is impossible for a reduced fraction, so there are
    exactly three classes.  ``OO`` vertices are the starred ones in strip
    diagrams.
    """

    OO = "o/o"
    OE = "o/e"
    EO = "e/o"

    @staticmethod
    def of(num: int, den: int) -> "Parity":
        if num & 1:
            return Parity.OO if den & 1 else Parity.OE
        if den & 1:
            return Parity.EO
        raise BadParityError(f"{num}/{den} is not reduced: both parts even")


@dataclass(frozen=True, slots=True)
class ExtRational:
    """A reduced fraction ``num/den`` with ``den >= 0``.

    ``den == 0`` encodes the single point at infinity, normalised to 1/0.
    The constructor reduces: gcd is divided out and a negative denominator
    is flipped into the numerator.
    """

    num: int
    den: int = 1

    def __post_init__(self) -> None:
        num, den = self.num, self.den
        if num == 0 and den == 0:
            raise ZeroOverZeroError("0/0 admits no reduced representative")
        if den < 0:
            num, den = -num, -den
        if den == 0:
            num = 1
        else:
            g = math.gcd(num, den)
            if g > 1:
                num //= g
                den //= g
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def parse(cls, text: str) -> "ExtRational":
        """Parse ``"p/q"`` (or a bare integer ``"p"``)."""
        s = text.strip()
        if "/" in s:
            a, _, b = s.partition("/")
            try:
                return cls(int(a), int(b))
            except ValueError as exc:
                if isinstance(exc, (ZeroOverZeroError,)):
                    raise
                raise ValueError(f"not a fraction: {text!r}") from None
        try:
            return cls(int(s))
        except ValueError:
            raise ValueError(f"not a fraction: {text!r}") from None

    @property
    def is_infinite(self) -> bool:
        return self.den == 0

    @property
    def parity(self) -> Parity:
        return Parity.of(self.num, self.den)

    def mediant(self, other: "ExtRational") -> "ExtRational":
        return ExtRational(self.num + other.num, self.den + other.den)

    def add_int(self, k: int) -> "ExtRational":
        return ExtRational(self.num + k * self.den, self.den)

    def __neg__(self) -> "ExtRational":
        return ExtRational(-self.num, self.den)

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"

    def compact(self) -> str:
        """Human-friendly form: integers drop the denominator."""
        return str(self.num) if self.den == 1 else f"{self.num}/{self.den}"


def reduce(p: int, q: int) -> ExtRational:
    """Canonical reduced form of p/q; sign lives in the numerator."""
    return ExtRational(p, q)


def parity(x: ExtRational) -> Parity:
    return x.parity


@dataclass(frozen=True, slots=True)
class ContinuedFraction:
    """A subtractive continued fraction: nonempty, nonzero integer entries."""

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        entries = tuple(int(e) for e in self.entries)
        if not entries:
            raise ValueError("continued fraction needs at least one entry")
        if any(e == 0 for e in entries):
            raise ValueError(f"zero entry in continued fraction {entries}")
        object.__setattr__(self, "entries", entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __str__(self) -> str:
        return "[" + ",".join(str(e) for e in self.entries) + "]"

    @property
    def value(self) -> ExtRational:
        return eval_cf(self)


@dataclass(frozen=True, slots=True)
class EvenCF(ContinuedFraction):
    """A continued fraction whose entries are all even (and nonzero).

    Expansions of odd/even fractions always come out with odd length; the
    classifier relies on that, but the type does not enforce it so that
    even-length gluing examples can be built directly for diagrams.
    """

    def __post_init__(self) -> None:
        ContinuedFraction.__post_init__(self)
        for e in self.entries:
            if e % 2:
                raise ValueError(f"odd entry {e} in even continued fraction")


CFLike = Union[ContinuedFraction, Sequence[int]]


def _entries(cf: CFLike) -> tuple[int, ...]:
    if isinstance(cf, ContinuedFraction):
        return cf.entries
    return tuple(int(e) for e in cf)


def eval_cf(cf: CFLike) -> ExtRational:
    """Evaluate a subtractive continued fraction in extended rationals.

    Folding right to left through t -> 1/(a - t) keeps the pair coprime,
    and a zero intermediate simply passes through 1/0, so this is total.
    """
    num, den = 0, 1
    for a in reversed(_entries(cf)):
        num, den = den, a * den - num
    return ExtRational(num, den)


def eval_with_tail(prefix: Sequence[int], tail: ExtRational) -> ExtRational:
    """Evaluate ``[a_1, ..., a_j, y]`` where the last entry y is rational.

    The tail sits in the innermost position, contributing 1/y; y = 0 and
    y = 1/0 are both legal thanks to the extended arithmetic.
    """
    num, den = tail.den, tail.num
    for a in reversed(tuple(prefix)):
        num, den = den, a * den - num
    return ExtRational(num, den)


def even_expansion(x: ExtRational) -> EvenCF:
    """The unique all-even expansion of p/q with 0 < p < q, p odd, q even.

    Greedy rule: each entry is the unique even integer within distance < 1
    of the current reciprocal.  The parity alternation of the reciprocals
    (e/o and o/e by turns) guarantees the reciprocal never lands on an odd
    integer, so the even choice always exists and is unique, and the
    expansion terminates with odd length.
    """
    p, q = x.num, x.den
    if q == 0 or q % 2 or p % 2 == 0:
        raise BadParityError(f"{x} is not odd/even")
    if not 0 < p < q:
        raise OutOfRangeError(f"{x} is not in (0, 1)")
    entries: list[int] = []
    num, den = q, p  # current reciprocal, den > 0
    while True:
        if den == 1:
            if num % 2:
                raise AssertionError(
                    f"even expansion hit the odd integer {num}; "
                    f"parity invariant broken for {x}"
                )
            entries.append(num)
            break
        fl = num // den
        b = fl if fl % 2 == 0 else fl + 1
        entries.append(b)
        # remainder y = b - num/den; next reciprocal is 1/y
        num, den = den, b * den - num
        if den < 0:
            num, den = -num, -den
    if len(entries) % 2 == 0:
        raise AssertionError(f"even expansion of {x} has even length {entries}")
    return EvenCF(tuple(entries))


def collapse_run(a: int, k: int, y: Union[int, ExtRational], sign: int) -> ContinuedFraction:
    """Collapse ``[a, (±2)^k, y]`` to its three-entry equivalent.

    sign=+1 rewrites a run of +2: [a, 2,..,2, y] = [a-1, -(k+1), y-1];
    sign=-1 rewrites a run of -2: [a, -2,..,-2, y] = [a+1, k+1, y+1].
    y must be an integer here (the generalised rational-tail identity is
    exercised through :func:`eval_with_tail`).  Raises
    :class:`ZeroEntryProducedError` when a∓1 or y∓1 vanishes.
    """
    if isinstance(y, ExtRational):
        if y.den != 1:
            raise ValueError(f"collapse_run needs an integer tail, got {y}")
        y = y.num
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if k < 1:
        raise ValueError("run length must be positive")
    if a == 0 or y == 0:
        raise ValueError("entries must be nonzero")
    if sign == 1:
        first, mid, last = a - 1, -(k + 1), y - 1
    else:
        first, mid, last = a + 1, k + 1, y + 1
    if first == 0 or last == 0:
        raise ZeroEntryProducedError(
            f"collapsing [a={a}, ({2 * sign})^{k}, y={y}] produces a zero entry"
        )
    return ContinuedFraction((first, mid, last))


def channel_indices(cf: CFLike) -> tuple[int, ...]:
    """Indices i (1-based) with b_i * b_{i+1} < 0 or > 4.

    Equivalently, i is omitted exactly when (b_i, b_{i+1}) is (2, 2) or
    (-2, -2).
    """
    b = _entries(cf)
    return tuple(
        i + 1
        for i in range(len(b) - 1)
        if b[i] * b[i + 1] < 0 or b[i] * b[i + 1] > 4
    )


@dataclass(frozen=True, slots=True)
class ExceptionalForm:
    """Decomposition of ``[a, 2^b, 4, 2^c]`` or ``[a', -2^b, -4, -2^c]``.

    ``sign`` is +1 for the positive shape (head >= 4) and -1 for the
    negative one (head >= 2); both runs are nonempty.
    """

    head: int
    pre_run: int
    post_run: int
    sign: int


def exceptional_form(cf: CFLike) -> ExceptionalForm | None:
    """Match the head-normalised shapes excluded from the 3-channel construction."""
    b = _entries(cf)
    if len(b) < 4:
        return None
    head = b[0]
    tail = b[1:]
    sign = 1 if tail[0] > 0 else -1
    if head < (4 if sign == 1 else 2):
        return None
    two, four = 2 * sign, 4 * sign
    four_at = [i for i, e in enumerate(tail) if e == four]
    if len(four_at) != 1:
        return None
    pos = four_at[0]
    if any(e != two for i, e in enumerate(tail) if i != pos):
        return None
    pre, post = pos, len(tail) - pos - 1
    if pre < 1 or post < 1:
        return None
    return ExceptionalForm(head, pre, post, sign)


@dataclass(frozen=True, slots=True)
class Ch3Rewrite:
    """Four-entry rewrite of an exceptional form, with its parameters."""

    cf: ContinuedFraction
    form_id: int  # 1..4
    m: int
    n: int
    l: int


def ch3_rewrite(form: ExceptionalForm) -> Ch3Rewrite:
    """Rewrite an exceptional form as ``[2m+1, *, ±2, *]``.

    Positive shapes become [a-1, -(b+1), 2, -(c+1)] (forms 1/2 split on
    the parity of b); negative ones become [a+1, b+1, -2, c+1] (forms
    3/4).  Requires b + c odd, which holds for every odd-length input.
    """
    a, b, c, sign = form.head, form.pre_run, form.post_run, form.sign
    if (b + c) % 2 == 0:
        raise ValueError(f"runs must have opposite parities, got ({b}, {c})")
    if sign == 1:
        entries = (a - 1, -(b + 1), 2, -(c + 1))
        m = (a - 2) // 2
        if b % 2:  # b odd, c even
            form_id, n, l = 1, -((b + 1) // 2), -(c // 2)
        else:
            form_id, n, l = 2, -(b // 2), -((c + 1) // 2)
    else:
        entries = (a + 1, b + 1, -2, c + 1)
        m = a // 2
        if b % 2:
            form_id, n, l = 3, (b + 1) // 2, (c + 2) // 2
        else:
            form_id, n, l = 4, (b + 2) // 2, (c + 1) // 2
    bounds = {
        1: m >= 1 and n <= -1 and l <= -1,
        2: m >= 1 and n <= -1 and l <= -1,
        3: m >= 1 and n >= 1 and l >= 2,
        4: m >= 1 and n >= 2 and l >= 1,
    }
    if not bounds[form_id]:
        raise AssertionError(f"rewrite of {form} broke form-{form_id} bounds")
    return Ch3Rewrite(ContinuedFraction(entries), form_id, m, n, l)
