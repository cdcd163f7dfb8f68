"""Independent brute-force verification suites for the rewrite identities,
the family enumeration, and the three-channel path construction.

Each suite enumerates a bounded parameter range, checks both sides of the
claim with exact arithmetic, and reports counterexamples with enough data
to replay them.  The suites re-derive side conditions inline (channel
counts, head conditions, family constraints) instead of trusting the
library's own helpers, so a shared bug cannot confirm itself.  A
deliberately corrupted variant of the first suite doubles as a harness
self-test: a verifier that cannot fail proves nothing.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .classifier import canonicalize, match_family, validate
from .contfrac import (
    ExtRational,
    ZeroEntryProducedError,
    ch3_rewrite,
    collapse_run,
    eval_cf,
    eval_with_tail,
    exceptional_form,
)
from .diagram import build
from .families import Family, family_cf
from .pathfinder import (
    PathConstructionError,
    PreconditionViolatedError,
    construct_case_path,
    search_max_channels,
)

SUITE_NAMES = ("a1", "a2", "a3", "prop23", "canon")


@dataclass(slots=True)
class SuiteReport:
    """Outcome of one verification suite; empty failures means pass."""

    suite: str
    params: dict
    cases: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def merge(self, other: "SuiteReport") -> None:
        self.cases += other.cases
        self.failures.extend(other.failures)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "params": self.params,
            "cases": self.cases,
            "ok": self.ok,
            "failures": self.failures,
        }

    def summary(self) -> str:
        verdict = "PASS" if self.ok else f"FAIL ({len(self.failures)} failures)"
        return f"suite={self.suite} cases={self.cases} {verdict}"


def _chunked(items: Sequence, jobs: int) -> list[Sequence]:
    if jobs <= 1 or len(items) < 2 * jobs:
        return [items]
    size = (len(items) + jobs - 1) // jobs
    return [items[i : i + size] for i in range(0, len(items), size)]


def _run_parallel(
    report: SuiteReport,
    worker: Callable,
    items: Sequence,
    jobs: int,
) -> SuiteReport:
    chunks = _chunked(items, jobs)
    if len(chunks) == 1:
        cases, failures = worker(chunks[0])
        report.cases += cases
        report.failures.extend(failures)
        return report
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for cases, failures in pool.map(worker, chunks):
            report.cases += cases
            report.failures.extend(failures)
    return report


def _nonzero(bound: int) -> list[int]:
    return [a for a in range(-bound, bound + 1) if a != 0]


def _even_nonzero(bound: int) -> list[int]:
    return [a for a in range(-bound, bound + 1, 2) if a != 0]


# -- run-collapse identities --------------------------------------------


def _tail_pool(bound: int, depth: int) -> list[tuple[tuple[int, ...], ExtRational]]:
    """Rational tails drawn from continued-fraction suffixes of small depth.

    A suffix [u] contributes the tail u; a suffix [u, v] contributes
    u - 1/v, the generalised last entry whose reciprocal is the suffix
    value.  Zero tails are excluded by hypothesis.
    """
    pool: list[tuple[tuple[int, ...], ExtRational]] = []
    for u in _nonzero(bound):
        pool.append(((u,), ExtRational(u)))
    if depth >= 2:
        for u in _nonzero(bound):
            for v in _nonzero(bound):
                y = ExtRational(u * v - 1, v)
                if y.num != 0:
                    pool.append(((u, v), y))
    return pool


def verify_lemma_a1(
    a_bound: int = 6,
    k_max: int = 9,
    y_depth: int = 2,
    corrupt: bool = False,
    jobs: int = 1,
) -> SuiteReport:
    """Check the four run-collapse identities by exact evaluation.

    (1) a run of k twos evaluates to k/(k+1), (2) the negative run to
    -k/(k+1); (3) and (4) collapse a run after a head entry against a
    rational tail.  ``corrupt=True`` deliberately breaks identity (3)
    (negative control: the suite must then fail).
    """
    report = SuiteReport(
        "a1",
        {"a_bound": a_bound, "k_max": k_max, "y_depth": y_depth, "corrupt": corrupt},
    )
    for k in range(1, k_max + 1):
        report.cases += 2
        if eval_cf([2] * k) != ExtRational(k, k + 1):
            report.failures.append({"identity": 1, "k": k})
        if eval_cf([-2] * k) != ExtRational(-k, k + 1):
            report.failures.append({"identity": 2, "k": k})
    tails = _tail_pool(a_bound, y_depth)
    mid_shift = 2 if corrupt else 1
    for a in _nonzero(a_bound):
        for k in range(1, k_max + 1):
            for suffix, y in tails:
                report.cases += 2
                lhs3 = eval_with_tail([a] + [2] * k, y)
                rhs3 = eval_with_tail([a - 1, -(k + mid_shift)], y.add_int(-1))
                if lhs3 != rhs3:
                    report.failures.append(
                        {
                            "identity": 3,
                            "a": a,
                            "k": k,
                            "suffix": list(suffix),
                            "lhs": str(lhs3),
                            "rhs": str(rhs3),
                        }
                    )
                lhs4 = eval_with_tail([a] + [-2] * k, y)
                rhs4 = eval_with_tail([a + 1, k + 1], y.add_int(1))
                if lhs4 != rhs4:
                    report.failures.append(
                        {
                            "identity": 4,
                            "a": a,
                            "k": k,
                            "suffix": list(suffix),
                            "lhs": str(lhs4),
                            "rhs": str(rhs4),
                        }
                    )
                # cross-check the public collapse on integer tails
                if len(suffix) == 1 and not corrupt:
                    for sign in (1, -1):
                        try:
                            collapsed = collapse_run(a, k, suffix[0], sign)
                        except ZeroEntryProducedError:
                            continue
                        report.cases += 1
                        run = [2 * sign] * k
                        direct = eval_cf([a] + run + [suffix[0]])
                        if eval_cf(collapsed) != direct:
                            report.failures.append(
                                {
                                    "identity": 3 if sign == 1 else 4,
                                    "collapse_run": [a, k, suffix[0], sign],
                                    "lhs": str(direct),
                                    "rhs": str(eval_cf(collapsed)),
                                }
                            )
    return report


# -- exceptional-shape rewrites ------------------------------------------


def verify_lemma_a2(a_max: int = 12, run_sum_max: int = 9, jobs: int = 1) -> SuiteReport:
    """Check the four-entry rewrite of every exceptional shape in range.

    For each head and pair of opposite-parity run lengths, the rewrite
    must evaluate to the same fraction, land in the predicted form, and
    satisfy that form's parameter bounds.
    """
    report = SuiteReport("a2", {"a_max": a_max, "run_sum_max": run_sum_max})
    for sign in (1, -1):
        a_min = 4 if sign == 1 else 2
        for a in range(a_min, a_max + 1, 2):
            for b in range(1, run_sum_max):
                for c in range(1, run_sum_max - b + 1):
                    if (b + c) % 2 == 0:
                        continue
                    cf = (a,) + (2 * sign,) * b + (4 * sign,) + (2 * sign,) * c
                    report.cases += 1
                    form = exceptional_form(cf)
                    if form is None or (form.head, form.pre_run, form.post_run, form.sign) != (
                        a,
                        b,
                        c,
                        sign,
                    ):
                        report.failures.append(
                            {"cf": list(cf), "error": f"shape not detected: {form}"}
                        )
                        continue
                    try:
                        rw = ch3_rewrite(form)
                    except (AssertionError, ValueError) as exc:
                        report.failures.append({"cf": list(cf), "error": str(exc)})
                        continue
                    expected_form = (1 if b % 2 else 2) if sign == 1 else (3 if b % 2 else 4)
                    if rw.form_id != expected_form:
                        report.failures.append(
                            {
                                "cf": list(cf),
                                "error": f"form {rw.form_id}, expected {expected_form}",
                            }
                        )
                        continue
                    lhs, rhs = eval_cf(cf), eval_cf(rw.cf)
                    if lhs != rhs:
                        report.failures.append(
                            {
                                "cf": list(cf),
                                "rewrite": list(rw.cf.entries),
                                "lhs": str(lhs),
                                "rhs": str(rhs),
                            }
                        )
    _a2_spot_checks(report)
    return report


def _a2_spot_checks(report: SuiteReport) -> None:
    for cf, rewrite, value in (
        ((4, 2, 4, 2, 2), (3, -2, 2, -3), ExtRational(17, 58)),
        ((2, -2, -4, -2, -2), (3, 2, -2, 3), ExtRational(17, 44)),
    ):
        report.cases += 1
        form = exceptional_form(cf)
        rw = ch3_rewrite(form) if form else None
        if (
            rw is None
            or rw.cf.entries != rewrite
            or eval_cf(cf) != value
            or eval_cf(rw.cf) != value
        ):
            report.failures.append(
                {"cf": list(cf), "error": f"spot value {value} not reproduced"}
            )


# -- the family enumeration ----------------------------------------------


def _inline_channel_count(b: Sequence[int]) -> int:
    count = 0
    for i in range(len(b) - 1):
        prod = b[i] * b[i + 1]
        if prod < 0 or prod > 4:
            count += 1
    return count


def _head_normalized_cfs(
    bound: int, k: int, max_indices: int | None
) -> Iterator[tuple[int, ...]]:
    """Head-normalised even tuples, optionally pruned to few channel indices."""
    evens = _even_nonzero(bound)
    heads = [2] + [h for h in range(4, bound + 1, 2)]

    def extend(prefix: list[int], count: int) -> Iterator[tuple[int, ...]]:
        if len(prefix) == k:
            yield tuple(prefix)
            return
        for e in evens:
            if len(prefix) == 1 and prefix[0] == 2 and e > -2:
                continue
            prod = prefix[-1] * e
            add = 1 if (prod < 0 or prod > 4) else 0
            if max_indices is not None and count + add > max_indices:
                continue
            prefix.append(e)
            yield from extend(prefix, count + add)
            prefix.pop()

    for h in heads:
        yield from extend([h], 0)


_A3_CONSTRAINTS: dict[Family, Callable[[int, int, int | None], bool]] = {
    Family.A1: lambda m, n, l: m >= 1 and n not in (0, 1),
    Family.B1: lambda m, n, l: m >= 1 and abs(n) >= 2 and abs(l) >= 2 and (m > 1 or n <= -2),
    Family.B2: lambda m, n, l: m >= 1 and abs(n) >= 2 and l >= 1 and (m > 1 or n <= -2),
    Family.B3: lambda m, n, l: m >= 1 and abs(n) >= 2 and l >= 1 and (m > 1 or n <= -2),
    Family.B4: lambda m, n, l: m >= 1 and n != 0 and l not in (0, 1),
    Family.C1: lambda m, n, l: m >= 1 and n != 0 and l not in (0, 1),
    Family.C2: lambda m, n, l: m >= 1 and n not in (0, 1) and l != 0,
}


def _a3_worker(cfs: Sequence[tuple[int, ...]]) -> tuple[int, list[dict]]:
    cases = 0
    failures: list[dict] = []
    for cf in cfs:
        cases += 1
        try:
            match = match_family(cf)
        except Exception as exc:  # noqa: BLE001 - counterexamples must surface
            failures.append({"cf": list(cf), "error": str(exc)})
            continue
        checker = _A3_CONSTRAINTS[match.family]
        if not checker(match.m, match.n, match.l):
            failures.append(
                {
                    "cf": list(cf),
                    "family": match.family.value,
                    "params": match.params(),
                    "error": "constraints violated",
                }
            )
            continue
        if eval_cf(family_cf(match)) != eval_cf(cf):
            failures.append(
                {
                    "cf": list(cf),
                    "family": match.family.value,
                    "params": match.params(),
                    "error": "value mismatch",
                }
            )
    return cases, failures


def verify_lemma_a3(
    entry_bound: int = 8, k_set: Iterable[int] = (3, 5, 7), jobs: int = 1
) -> SuiteReport:
    """Every head-normalised low-channel fraction lands in exactly one family.

    Enumerates even tuples with at most two channel indices (recomputed
    inline), matches each, and verifies the family constraints and the
    exact value.
    """
    k_list = sorted(set(k_set))
    report = SuiteReport("a3", {"entry_bound": entry_bound, "k_set": k_list})
    cfs = [
        cf
        for k in k_list
        for cf in _head_normalized_cfs(entry_bound, k, max_indices=2)
        if _inline_channel_count(cf) <= 2
    ]
    return _run_parallel(report, _a3_worker, cfs, jobs)


# -- three-channel paths ---------------------------------------------------


def _is_exceptional_shape(b: Sequence[int]) -> bool:
    """Inline re-derivation of the two excluded shapes."""
    if len(b) < 4:
        return False
    sign = 1 if b[1] > 0 else -1
    if b[0] < (4 if sign == 1 else 2):
        return False
    tail = b[1:]
    fours = [i for i, e in enumerate(tail) if e == 4 * sign]
    return (
        len(fours) == 1
        and 1 <= fours[0] <= len(tail) - 2
        and all(e == 2 * sign for i, e in enumerate(tail) if i != fours[0])
    )


def _prop23_worker(cfs: Sequence[tuple[int, ...]]) -> tuple[int, list[dict]]:
    cases = 0
    failures: list[dict] = []
    for cf in cfs:
        cases += 1
        if _is_exceptional_shape(cf):
            result = search_max_channels(build(cf), target=3)
            if result.path is not None:
                failures.append(
                    {
                        "cf": list(cf),
                        "expected": "proven-absent at 3 channels",
                        "found_channels": result.path.channel_count,
                        "witness_vertices": list(result.path.vertices),
                    }
                )
            continue
        try:
            built = construct_case_path(cf)
        except (PreconditionViolatedError, PathConstructionError) as exc:
            failures.append({"cf": list(cf), "error": f"construction: {exc}"})
            continue
        if built.path.channel_count < 3:
            failures.append(
                {"cf": list(cf), "error": f"case path has {built.path.channel_count} channels"}
            )
            continue
        result = search_max_channels(built.diagram, target=3)
        if result.path is None:
            failures.append({"cf": list(cf), "error": "search found no 3-channel path"})
    return cases, failures


def cf_diagram(cf: Sequence[int]):
    from .diagram import build

    return build(cf)


def verify_prop_2_3(
    entry_bound: int = 6, k_set: Iterable[int] = (3, 5), jobs: int = 1
) -> SuiteReport:
    """Realise the three-channel construction over a full range.

    Every head-normalised even tuple with three or more channel indices
    and no exceptional shape must admit a validated three-channel path
    from both the case construction and the exhaustive search; the
    exceptional shapes are expected to come back proven-absent.  Any
    counterexample is reported with its witness, never suppressed.
    """
    k_list = sorted(set(k_set))
    report = SuiteReport("prop23", {"entry_bound": entry_bound, "k_set": k_list})
    cfs = [
        cf
        for k in k_list
        for cf in _head_normalized_cfs(entry_bound, k, max_indices=None)
        if _inline_channel_count(cf) >= 3
    ]
    return _run_parallel(report, _prop23_worker, cfs, jobs)


# -- canonicalisation totality ---------------------------------------------


def verify_canonicalization(q_max: int = 200, jobs: int = 1) -> SuiteReport:
    """Every valid fraction has an orbit representative with a good head."""
    import math

    report = SuiteReport("canon", {"q_max": q_max})
    for q in range(4, q_max + 1, 2):
        for p in range(3, q - 1, 2):
            if math.gcd(p, q) != 1:
                continue
            report.cases += 1
            x = ExtRational(p, q)
            try:
                validate(x)
            except Exception:
                continue
            try:
                canon = canonicalize(x)
            except Exception as exc:  # noqa: BLE001
                report.failures.append({"fraction": str(x), "error": str(exc)})
                continue
            b = canon.cf.entries
            head_ok = b[0] >= 4 or (b[0] == 2 and len(b) > 1 and b[1] <= -2)
            rt = eval_cf(canon.cf)
            if not head_ok or rt != canon.representative:
                report.failures.append(
                    {
                        "fraction": str(x),
                        "representative": str(canon.representative),
                        "cf": list(b),
                        "error": "head condition or round-trip failed",
                    }
                )
    return report


def run_suite(
    name: str,
    bound: int | None = None,
    k_max: int | None = None,
    jobs: int = 1,
) -> SuiteReport:
    """Dispatch a suite by name with its documented default ranges."""
    if name == "a1":
        return verify_lemma_a1(a_bound=bound or 6, k_max=k_max or 9, jobs=jobs)
    if name == "a2":
        return verify_lemma_a2(a_max=bound or 12, run_sum_max=k_max or 9, jobs=jobs)
    if name == "a3":
        ks = tuple(k for k in (3, 5, 7) if k <= (k_max or 7))
        return verify_lemma_a3(entry_bound=bound or 8, k_set=ks, jobs=jobs)
    if name == "prop23":
        ks = tuple(k for k in (3, 5) if k <= (k_max or 5))
        return verify_prop_2_3(entry_bound=bound or 6, k_set=ks, jobs=jobs)
    if name == "canon":
        return verify_canonicalization(q_max=bound or 200, jobs=jobs)
    raise ValueError(f"unknown suite {name!r} (want one of {', '.join(SUITE_NAMES)})")
