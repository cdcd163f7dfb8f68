"""End-to-end classification of two-bridge links by their surgery prospects.

The pipeline is: validate the fraction (odd/even, non-torus), pick a
head-normalised representative of its symmetry orbit, expand it into the
even continued fraction, and branch on the channel indices.  Three or
more channel indices (outside the two excluded exceptional shapes) yield
a three-channel allowable path, which rules out a complete exceptional
surgery; otherwise the fraction is rewritten into one of the seven
candidate families and the table of candidate slope pairs applies.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import slopes as slopes_mod
from .contfrac import (
    CFLike,
    ContinuedFraction,
    EvenCF,
    ExtRational,
    _entries,
    channel_indices,
    ch3_rewrite,
    eval_cf,
    even_expansion,
    exceptional_form,
)
from .diagram import Diagram
from .families import Family, FamilyMatch, InvalidParametersError, family_cf
from .pathfinder import AllowablePath, construct_case_path

__all__ = [
    "Family",
    "FamilyMatch",
    "InvalidParametersError",
    "family_cf",
    "TorusLinkError",
    "TrivialLinkError",
    "NoCanonicalRepresentativeError",
    "NoMatchError",
    "Canonicalization",
    "Candidate",
    "NoCompleteExceptional",
    "validate",
    "canonicalize",
    "match_family",
    "classify",
]


class TorusLinkError(ValueError):
    """The fraction describes a torus link (numerator ≡ ±1 mod denominator)."""


class TrivialLinkError(ValueError):
    """The fraction is 1/0 or otherwise degenerate."""


class NoCanonicalRepresentativeError(RuntimeError):
    """No orbit representative satisfies the head condition (never observed)."""


class NoMatchError(RuntimeError):
    """A low-channel fraction failed to match any family; this is a bug."""


def validate(x: ExtRational) -> ExtRational:
    """Check and normalise a fraction for classification.

    The numerator is reduced into (0, q); torus links (p ≡ ±1 mod q) and
    fractions without the odd/even shape are rejected.
    """
    from .contfrac import BadParityError

    q = x.den
    if q == 0:
        raise TrivialLinkError("1/0 is the trivial case")
    if q % 2:
        raise BadParityError(f"{x} has odd denominator")
    p = x.num % q
    if p % 2 == 0:
        # reduced odd/even fractions stay odd after translation by q
        raise BadParityError(f"{x} is not an odd/even fraction")
    if p == 1 or p == q - 1:
        raise TorusLinkError(f"{x} is a torus link")
    return ExtRational(p, q)


@dataclass(frozen=True, slots=True)
class Canonicalization:
    """A head-normalised even expansion of an orbit representative."""

    cf: EvenCF
    mirrored: bool
    representative: ExtRational


def _head_ok(cf: EvenCF) -> bool:
    b = cf.entries
    return b[0] >= 4 or (b[0] == 2 and len(b) > 1 and b[1] <= -2)


def canonicalize(x: ExtRational) -> Canonicalization:
    """Pick the first orbit representative whose expansion is head-normalised.

    The orbit is {p, p^-1 mod q, q-p, (q-p)^-1 mod q}: translation by the
    denominator, reversal, and the mirror.  Representatives derived from
    q-p flag the result as mirrored.
    """
    v = validate(x)
    p, q = v.num, v.den
    orbit = [
        (p, False),
        (pow(p, -1, q), False),
        (q - p, True),
        (pow(q - p, -1, q), True),
    ]
    seen: set[int] = set()
    for rep, mirrored in orbit:
        if rep in seen:
            continue
        seen.add(rep)
        cf = even_expansion(ExtRational(rep, q))
        if _head_ok(cf):
            return Canonicalization(cf, mirrored, ExtRational(rep, q))
    raise NoCanonicalRepresentativeError(
        f"no representative of {x} satisfies the head condition"
    )


# -- family matching ----------------------------------------------------


def _tokens(rest: tuple[int, ...]) -> list[tuple[str, int, int]]:
    """Tokenise a tail: big entries one by one, ±2 entries as runs.

    Returns (kind, value, length) triples where kind is "big" or "run".
    """
    out: list[tuple[str, int, int]] = []
    for e in rest:
        if abs(e) >= 4:
            out.append(("big", e, 1))
        elif out and out[-1][0] == "run" and out[-1][1] == e:
            out[-1] = ("run", e, out[-1][2] + 1)
        else:
            out.append(("run", e, 1))
    return out


def _half(v: int, what: str) -> int:
    if v % 2:
        raise NoMatchError(f"{what} = {v} is odd; run parities are inconsistent")
    return v // 2


def match_family(cf: CFLike) -> FamilyMatch:
    """Rewrite a canonical low-channel fraction into its candidate family.

    Accepts head-normalised even fractions with at most two channel
    indices (length at least three), or an excluded exceptional shape.
    The result always satisfies the family constraints and evaluates to
    the input; any other outcome raises :class:`NoMatchError` loudly.
    """
    b = _entries(cf)
    form = exceptional_form(b)
    if form is not None:
        rw = ch3_rewrite(form)
        fam = Family.C1 if rw.form_id in (1, 3) else Family.C2
        return _checked(b, FamilyMatch(fam, rw.m, rw.n, rw.l))
    idx = channel_indices(b)
    k = len(b)
    if k < 3:
        raise NoMatchError(f"{list(b)} is too short to match a family")
    if len(idx) > 2:
        raise NoMatchError(
            f"{list(b)} has {len(idx)} channel indices and no exceptional shape"
        )
    if not idx:
        raise NoMatchError(f"{list(b)} has no channel index; torus shapes do not match")
    head = b[0]
    toks = _tokens(b[1:])
    if len(idx) == 1:
        if len(toks) != 1 or toks[0][0] != "run":
            raise NoMatchError(f"{list(b)} has one channel index but a broken tail")
        t, run = toks[0][1], toks[0][2]
        if t == 2:
            match = FamilyMatch(Family.A1, _half(head - 2, "head-2"), (1 - k) // 2)
        else:
            match = FamilyMatch(Family.A1, _half(head, "head"), (k + 1) // 2)
        return _checked(b, match)
    if len(toks) != 2:
        raise NoMatchError(f"{list(b)} has two channel indices but {len(toks)} tail runs")
    (k1, v1, n1), (k2, v2, n2) = toks
    if k1 == "big" and k2 == "big":
        match = FamilyMatch(Family.B1, _half(head, "head"), _half(v1, "mid"), _half(v2, "tail"))
    elif k1 == "big" and k2 == "run":
        fam = Family.B2 if v2 == 2 else Family.B3
        match = FamilyMatch(fam, _half(head, "head"), _half(v1, "mid"), (n2 + 1) // 2)
    elif k1 == "run" and k2 == "big":
        if v1 == 2:
            match = FamilyMatch(
                Family.B4, _half(head - 2, "head-2"), -((n1 + 1) // 2), _half(v2, "tail")
            )
        else:
            match = FamilyMatch(
                Family.B4, _half(head, "head"), (n1 + 1) // 2, _half(v2 + 2, "tail+2")
            )
    else:
        if v1 == -v2 and v1 == 2:
            if n2 == 1:
                match = FamilyMatch(Family.B4, _half(head - 2, "head-2"), -((n1 + 1) // 2), -1)
            elif n1 % 2:
                match = FamilyMatch(
                    Family.C1, _half(head - 2, "head-2"), -((n1 + 1) // 2), (n2 + 1) // 2
                )
            else:
                match = FamilyMatch(Family.C2, _half(head - 2, "head-2"), -(n1 // 2), n2 // 2)
        elif v1 == -v2 and v1 == -2:
            if n2 == 1:
                match = FamilyMatch(Family.B4, _half(head, "head"), (n1 + 1) // 2, 2)
            elif n1 % 2:
                match = FamilyMatch(Family.C1, _half(head, "head"), (n1 + 1) // 2, (1 - n2) // 2)
            else:
                match = FamilyMatch(Family.C2, _half(head, "head"), (n1 + 2) // 2, -(n2 // 2))
        else:
            raise NoMatchError(f"{list(b)} has an unrecognised two-run tail")
    return _checked(b, match)


def _checked(b: tuple[int, ...], match: FamilyMatch) -> FamilyMatch:
    try:
        match.check()
    except InvalidParametersError as exc:
        raise NoMatchError(f"match for {list(b)} broke family constraints: {exc}") from exc
    if eval_cf(family_cf(match)) != eval_cf(b):
        raise NoMatchError(
            f"match {match.family.value}{match.params()} does not evaluate to {list(b)}"
        )
    return match


# -- verdicts -----------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Candidate:
    """The link survives the path screen; candidate slopes apply."""

    match: FamilyMatch
    slopes: tuple
    mirrored: bool
    canonical_fraction: ExtRational
    even_cf: EvenCF
    policy: str


@dataclass(frozen=True, slots=True, eq=False)
class NoCompleteExceptional:
    """A three-channel allowable path certifies there is no such surgery."""

    witness: AllowablePath
    case: str
    branch: str | None
    mirrored: bool
    canonical_fraction: ExtRational
    even_cf: EvenCF
    diagram: Diagram


Verdict = Candidate | NoCompleteExceptional


def classify(x: ExtRational, policy: str = "union") -> Verdict:
    """Full pipeline: validate, canonicalise, and decide.

    Returns either a :class:`NoCompleteExceptional` verdict carrying a
    validated three-channel witness path, or a :class:`Candidate` verdict
    with the matched family and its table slopes.
    """
    canon = canonicalize(x)
    cf = canon.cf
    idx = channel_indices(cf)
    if len(idx) >= 3 and exceptional_form(cf) is None:
        built = construct_case_path(cf)
        return NoCompleteExceptional(
            witness=built.path,
            case=built.case,
            branch=built.branch,
            mirrored=canon.mirrored,
            canonical_fraction=canon.representative,
            even_cf=cf,
            diagram=built.diagram,
        )
    match = match_family(cf)
    pairs = slopes_mod.candidate_slopes(match, policy)
    return Candidate(
        match=match,
        slopes=tuple(pairs),
        mirrored=canon.mirrored,
        canonical_fraction=canon.representative,
        even_cf=cf,
        policy=policy,
    )
