"""Candidate surgery-slope tables and chain-link surgery descriptions.

Each table row applies to a sub-family of parameter tuples (equalities
and, for the one four-entry row, a sign condition) and lists slope pairs
as affine expressions in (m, n, l) over a fixed denominator.  Overlapping
rows are resolved by policy: ``union`` (default) merges every applicable
row and deduplicates, ``exact`` reports each row separately for auditing.
The c-2 family has no rows at all; an empty slope list is a meaningful
answer there, not an error.
"""

from __future__ import annotations

from dataclasses import dataclass

from .contfrac import ExtRational
from .families import Family, FamilyMatch, InvalidParametersError

TABLES_VERSION = "1"

# Affine slope expression: (cm*m + cn*n + cl*l + const) / den.
Expr = tuple[int, int, int, int, int]
# Row constraint: (parameter, op, bound) with op one of "==", "<=", ">=".
Constraint = tuple[str, str, int]


@dataclass(frozen=True, slots=True)
class SlopePair:
    gamma1: ExtRational
    gamma2: ExtRational

    def __str__(self) -> str:
        return f"({self.gamma1.compact()},{self.gamma2.compact()})"

    def negated(self) -> "SlopePair":
        return SlopePair(-self.gamma1, -self.gamma2)


@dataclass(frozen=True, slots=True)
class TableRow:
    family: Family
    row_id: str
    label: str
    constraints: tuple[Constraint, ...]
    pairs: tuple[tuple[Expr, Expr], ...]

    def applies(self, match: FamilyMatch) -> bool:
        values = {"m": match.m, "n": match.n, "l": match.l}
        for param, op, bound in self.constraints:
            v = values[param]
            if v is None:
                return False
            if op == "==" and v != bound:
                return False
            if op == "<=" and v > bound:
                return False
            if op == ">=" and v < bound:
                return False
        return True


def _const(v: int, den: int = 1) -> Expr:
    return (0, 0, 0, v, den)


def _pairs_const(*values: tuple) -> tuple[tuple[Expr, Expr], ...]:
    out = []
    for g1, g2 in values:
        e1 = g1 if isinstance(g1, tuple) else _const(g1)
        e2 = g2 if isinstance(g2, tuple) else _const(g2)
        out.append((e1, e2))
    return tuple(out)


TABLE_ROWS: tuple[TableRow, ...] = (
    # family a-1: [2m+1, 2n-1]
    TableRow(
        Family.A1, "a1.1", "[3,3]",
        (("m", "==", 1), ("n", "==", 2)),
        _pairs_const(
            (-2, -2), (-2, -1), (-1, -4), (-1, -3), (-1, -1),
            (_const(5), (0, 0, 0, 4, 3)),
        ),
    ),
    TableRow(
        Family.A1, "a1.2", "[3,2n-1]",
        (("m", "==", 1),),
        ((( 0, 1, 0, -2, 1), (0, 1, 0, -2, 1)),
         (( 0, 1, 0,  3, 1), (0, 2, 0, -1, 2))),
    ),
    TableRow(
        Family.A1, "a1.3", "[2m+1,-3]",
        (("n", "==", -1),),
        (((1, 0, 0, -3, 1), (2, 0, 0, 1, 2)),
         ((1, 0, 0, 2, 1), (1, 0, 0, 2, 1))),
    ),
    TableRow(
        Family.A1, "a1.4", "[2m+1,3]",
        (("n", "==", 2),),
        (((1, 0, 0, -1, 1), (1, 0, 0, -1, 1)),
         ((1, 0, 0, 4, 1), (2, 0, 0, 1, 2))),
    ),
    TableRow(
        Family.A1, "a1.5", "[2m+1,-5]",
        (("n", "==", -2),),
        (((1, 0, 0, -5, 1), (1, 0, 0, 0, 1)),),
    ),
    TableRow(
        Family.A1, "a1.6", "[5,2n-1]",
        (("m", "==", 2),),
        (((0, 1, 0, 0, 1), (0, 1, 0, 5, 1)),),
    ),
    TableRow(
        Family.A1, "a1.7", "[2m+1,5]",
        (("n", "==", 3),),
        (((1, 0, 0, 1, 1), (1, 0, 0, 6, 1)),),
    ),
    TableRow(
        Family.A1, "a1.8", "[2m+1,2n-1]",
        (),
        (((1, 1, 0, -2, 1), (1, 1, 0, 2, 1)),
         ((2, 2, 0, -1, 2), (2, 2, 0, 1, 2))),
    ),
    # family b-1: [2m, 2n, 2l]
    TableRow(
        Family.B1, "b1.1", "[2,2n,2l]",
        (("m", "==", 1),),
        (((0, 0, 1, -1, 1), (0, 0, 1, -1, 1)),),
    ),
    # family b-2: [2m, 2n-1, -2l]
    TableRow(
        Family.B2, "b2.1", "[2,2n-1,-2l]",
        (("m", "==", 1),),
        (((0, 0, -1, -1, 1), (0, 0, -1, -1, 1)),),
    ),
    TableRow(
        Family.B2, "b2.2", "[2m,2n-1,-2]",
        (("l", "==", 1),),
        (((1, 0, 0, 1, 1), (1, 0, 0, 1, 1)),),
    ),
    # family b-3: [2m, 2n+1, 2l]
    TableRow(
        Family.B3, "b3.1", "[2,2n+1,2]",
        (("m", "==", 1), ("l", "==", 1)),
        _pairs_const((-3, -1), (-2, -2), (-2, -1), (-1, -4), (-1, -1)),
    ),
    TableRow(
        Family.B3, "b3.2", "[2,2n+1,2l]",
        (("m", "==", 1),),
        (((0, 0, 1, -1, 1), (0, 0, 1, -1, 1)),),
    ),
    TableRow(
        Family.B3, "b3.3", "[2m,2n+1,2]",
        (("l", "==", 1),),
        (((1, 0, 0, -1, 1), (1, 0, 0, -1, 1)),),
    ),
    # family b-4: [2m+1, 2n, 2l-1]
    TableRow(
        Family.B4, "b4.1", "[3,2,3]",
        (("m", "==", 1), ("n", "==", 1), ("l", "==", 2)),
        _pairs_const((-3, -1), (-2, -2), (-2, -1), (-1, -4), (-1, -1)),
    ),
    TableRow(
        Family.B4, "b4.2", "[3,2,2l-1]",
        (("m", "==", 1), ("n", "==", 1)),
        (((0, 0, 1, -2, 1), (0, 0, 1, -2, 1)),),
    ),
    TableRow(
        Family.B4, "b4.3", "[2m+1,2,3]",
        (("n", "==", 1), ("l", "==", 2)),
        (((1, 0, 0, -1, 1), (1, 0, 0, -1, 1)),),
    ),
    TableRow(
        Family.B4, "b4.4", "[2m+1,2,2l-1]",
        (("n", "==", 1),),
        (((1, 0, 1, 0, 1), (1, 0, 1, 0, 1)),
         ((1, 0, 1, 0, 1), (1, 0, 1, 1, 1))),
    ),
    TableRow(
        Family.B4, "b4.5", "[2m+1,-2,-3]",
        (("n", "==", -1), ("l", "==", -1)),
        (((1, 0, 0, 2, 1), (1, 0, 0, 2, 1)),),
    ),
    TableRow(
        Family.B4, "b4.6", "[2m+1,-2,2l-1]",
        (("n", "==", -1),),
        (((1, 0, 1, -1, 1), (1, 0, 1, 0, 1)),
         ((1, 0, 1, 0, 1), (1, 0, 1, 0, 1))),
    ),
    TableRow(
        Family.B4, "b4.7", "[2m+1,2n,2l-1]",
        (),
        (((1, 1, 1, -2, 1), (1, 1, 1, 2, 1)),
         ((1, 1, 1, -1, 1), (1, 1, 1, 1, 1)),
         ((1, 1, 1, 0, 1), (1, 1, 1, 0, 1))),
    ),
    # family c-1: [2m+1, 2n, -2 sgn(l), 2l-1]
    TableRow(
        Family.C1, "c1.1", "[3,2,2,2l-1]",
        (("m", "==", 1), ("n", "==", 1), ("l", "<=", -1)),
        (((0, 0, 1, -2, 1), (0, 0, 1, -2, 1)),),
    ),
    # family c-2 has no rows: the computation yields no elements.
)


def _eval_expr(expr: Expr, m: int, n: int, l: int | None) -> ExtRational:
    cm, cn, cl, const, den = expr
    acc = cm * m + cn * n + const
    if cl:
        if l is None:
            raise InvalidParametersError("slope formula needs l")
        acc += cl * l
    return ExtRational(acc, den)


@dataclass(frozen=True, slots=True)
class RowSlopes:
    """One applicable row with its evaluated pairs (the ``exact`` policy)."""

    row_id: str
    label: str
    pairs: tuple[SlopePair, ...]


def applicable_rows(match: FamilyMatch) -> list[TableRow]:
    match.check()
    return [
        row
        for row in TABLE_ROWS
        if row.family is match.family and row.applies(match)
    ]


def _row_pairs(row: TableRow, match: FamilyMatch) -> tuple[SlopePair, ...]:
    return tuple(
        SlopePair(
            _eval_expr(e1, match.m, match.n, match.l),
            _eval_expr(e2, match.m, match.n, match.l),
        )
        for e1, e2 in row.pairs
    )


def candidate_slopes(match: FamilyMatch, policy: str = "union"):
    """Candidate slope pairs for a family match.

    ``union`` returns the deduplicated union of all applicable rows in
    table order; ``exact`` returns one :class:`RowSlopes` per applicable
    row.  An empty result is meaningful (c-2 always, and parameter tuples
    no row covers).
    """
    if policy not in ("union", "exact"):
        raise ValueError(f"unknown policy {policy!r}")
    rows = applicable_rows(match)
    if policy == "exact":
        return [RowSlopes(r.row_id, r.label, _row_pairs(r, match)) for r in rows]
    seen: set[tuple] = set()
    out: list[SlopePair] = []
    for row in rows:
        for pair in _row_pairs(row, match):
            key = (pair.gamma1, pair.gamma2)
            if key not in seen:
                seen.add(key)
                out.append(pair)
    return out


@dataclass(frozen=True, slots=True)
class SurgeryDescription:
    """Filling coefficients on the fixed chain link presenting a family."""

    family: Family
    coefficients: tuple[tuple[str, ExtRational], ...]


def surgery_description(match: FamilyMatch) -> SurgeryDescription:
    """Chain-link filling coefficients: two for a-1, three for b-*, four for c-*."""
    match.check()
    m, n, l = match.m, match.n, match.l
    coeffs: list[tuple[str, ExtRational]] = [
        ("-1/m", ExtRational(-1, m)),
        ("-1/n", ExtRational(-1, n)),
    ]
    f = match.family
    if f in (Family.B1, Family.B3, Family.B4):
        coeffs.append(("-1/l", ExtRational(-1, l)))
    elif f is Family.B2:
        coeffs.append(("1/l", ExtRational(1, l)))
    elif f in (Family.C1, Family.C2):
        coeffs.append(("sgn(l)", ExtRational(match.sgn_l)))
        coeffs.append(("-1/l", ExtRational(-1, l)))
    return SurgeryDescription(f, tuple(coeffs))


def tables_as_json() -> dict:
    """Lossless machine-readable dump of the slope tables."""
    return {
        "version": TABLES_VERSION,
        "expression": "(cm*m + cn*n + cl*l + const) / den",
        "rows": [
            {
                "family": row.family.value,
                "row_id": row.row_id,
                "label": row.label,
                "constraints": [list(c) for c in row.constraints],
                "pairs": [[list(e1), list(e2)] for e1, e2 in row.pairs],
            }
            for row in TABLE_ROWS
        ],
    }
