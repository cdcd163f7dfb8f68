"""Allowable paths: validation, exhaustive search, and direct construction.

A path runs from the 1/0 vertex to the terminal vertex of a strip diagram,
alternating diagram edges and channel arcs.  Allowability is the
combinatorial reading of the three geometric conditions:

  1. no vertex is visited twice, no two channels of the path cross a
     common triangle, and a channel's shared edge is never also traversed
     as an edge (the arc would meet the edge's midpoint);
  2. every triangle contributes at most one of its edges to the path
     (channel midpoint crossings are exempt, and an edge meeting a crossed
     triangle only at the channel's endpoint vertex is fine);
  3. the path contains at least one channel.

This ruleset accepts every hand-drawn reference path and reproduces the
single-channel ceiling of the [2,4,2] strip, which has exactly one
channel to begin with.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence, Union

from .contfrac import CFLike, _entries, channel_indices, exceptional_form
from .diagram import Channel, Diagram, build

DEFAULT_NODE_BUDGET = 10_000_000
_BUDGET_ENV = "BSC_NODE_BUDGET"


class DanglingReferenceError(LookupError):
    """An arc references an edge or channel the diagram does not have."""


class PreconditionViolatedError(ValueError):
    """The constructive path builder was handed an input outside its cases."""


class PathConstructionError(RuntimeError):
    """The constructive path builder failed; this signals a bug."""


class BudgetExhaustedError(RuntimeError):
    """The search hit its node budget before the frontier closed."""

    def __init__(self, nodes: int, budget: int) -> None:
        super().__init__(f"search budget of {budget} nodes exhausted")
        self.nodes = nodes
        self.budget = budget


@dataclass(frozen=True, slots=True)
class EdgeArc:
    edge: int


@dataclass(frozen=True, slots=True)
class ChannelArc:
    channel: int


Arc = Union[EdgeArc, ChannelArc]


@dataclass(frozen=True, slots=True)
class AllowablePath:
    """A validated path: its arcs, induced vertex sequence, and channel count."""

    arcs: tuple[Arc, ...]
    vertices: tuple[int, ...]
    channel_count: int


@dataclass(frozen=True, slots=True)
class AllowabilityReport:
    ok: bool
    violation: str | None
    channel_count: int
    vertices: tuple[int, ...]

    def __bool__(self) -> bool:
        return self.ok


def node_budget() -> int:
    raw = os.environ.get(_BUDGET_ENV)
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return DEFAULT_NODE_BUDGET


def _arc_endpoints(d: Diagram, arc: Arc) -> tuple[int, int]:
    if isinstance(arc, EdgeArc):
        if not 0 <= arc.edge < len(d.edges):
            raise DanglingReferenceError(f"edge {arc.edge} not in diagram")
        return d.edges[arc.edge]
    if isinstance(arc, ChannelArc):
        if not 0 <= arc.channel < len(d.channels):
            raise DanglingReferenceError(f"channel {arc.channel} not in diagram")
        ch = d.channels[arc.channel]
        return ch.star_left, ch.star_right
    raise DanglingReferenceError(f"not an arc: {arc!r}")


def is_allowable(d: Diagram, arcs: Sequence[Arc]) -> AllowabilityReport:
    """Check a candidate arc sequence; reports the first violation found."""
    cur = d.start
    vertices = [cur]
    visited = {cur}
    tri_edge_used = [0] * d.triangle_count
    used_edges: set[int] = set()
    channel_tris: set[int] = set()
    shared_edges: set[int] = set()
    channels = 0

    def fail(msg: str) -> AllowabilityReport:
        return AllowabilityReport(False, msg, channels, tuple(vertices))

    for pos, arc in enumerate(arcs):
        u, v = _arc_endpoints(d, arc)
        if cur == u:
            nxt = v
        elif cur == v:
            nxt = u
        else:
            return fail(f"arc {pos} does not touch the current vertex {cur}")
        if nxt in visited:
            return fail(f"arc {pos} revisits vertex {nxt}")
        if isinstance(arc, EdgeArc):
            if arc.edge in used_edges:
                return fail(f"arc {pos} repeats edge {arc.edge}")
            for tid in d.edge_tris[arc.edge]:
                if tri_edge_used[tid]:
                    return fail(
                        f"arc {pos}: triangle {tid} would carry two path edges"
                    )
            for tid in d.edge_tris[arc.edge]:
                tri_edge_used[tid] = 1
            used_edges.add(arc.edge)
        else:
            ch = d.channels[arc.channel]
            if ch.tri_left in channel_tris or ch.tri_right in channel_tris:
                return fail(
                    f"arc {pos}: channel {arc.channel} crosses a triangle "
                    f"already crossed by another channel"
                )
            channel_tris.update((ch.tri_left, ch.tri_right))
            shared_edges.add(ch.shared_edge)
            channels += 1
        visited.add(nxt)
        vertices.append(nxt)
        cur = nxt

    clash = used_edges & shared_edges
    if clash:
        return fail(f"edge {min(clash)} is both traversed and crossed by a channel")
    if cur != d.end:
        return fail(f"path ends at vertex {cur}, not the terminal vertex {d.end}")
    if channels == 0:
        return fail("path contains no channel")
    return AllowabilityReport(True, None, channels, tuple(vertices))


def make_path(d: Diagram, arcs: Sequence[Arc]) -> AllowablePath:
    """Validate and freeze an arc sequence; raises on violations."""
    report = is_allowable(d, arcs)
    if not report.ok:
        raise PathConstructionError(report.violation or "invalid path")
    return AllowablePath(tuple(arcs), report.vertices, report.channel_count)


# -- exhaustive search -------------------------------------------------


@dataclass(slots=True)
class SearchResult:
    """Outcome of a search: a path, or a proof of absence, plus node count.

    ``proven_absent`` is meaningful only when ``path`` is None: it is True
    when the whole frontier was explored within budget.
    """

    path: AllowablePath | None
    proven_absent: bool
    nodes: int


def search_max_channels(
    d: Diagram,
    target: int | None = None,
    budget: int | None = None,
) -> SearchResult:
    """Depth-first search over arc sequences for channel-rich paths.

    With ``target`` set, returns the first allowable path carrying at
    least that many channels, or a proven-absent result once the
    exhaustive frontier closes.  With ``target=None`` the search is run to
    exhaustion and the best path found (maximal channel count, ties broken
    by discovery order) is returned.  Raises :class:`BudgetExhaustedError`
    when the node budget trips first.
    """
    if budget is None:
        budget = node_budget()
    if target is not None and target < 1:
        raise ValueError("target must be at least 1")

    channels = d.channels
    n_ch = len(channels)
    # Per-vertex arcs, channels first so channel-rich paths surface early.
    adjacency: list[list[tuple[bool, int, int]]] = [
        [] for _ in range(d.vertex_count)
    ]
    for ch in channels:
        adjacency[ch.star_left].append((True, ch.index, ch.star_right))
        adjacency[ch.star_right].append((True, ch.index, ch.star_left))
    for eid, (u, v) in enumerate(d.edges):
        adjacency[u].append((False, eid, v))
        adjacency[v].append((False, eid, u))

    end = d.end
    visited = 1 << d.start
    tri_used = 0  # bit set when a triangle already carries a path edge
    used_edges = 0
    shared_edges = 0  # shared edges of channels already in the path
    crossed_tris = 0  # triangles already crossed by a path channel
    ch_used = 0
    arcs: list[Arc] = []
    nodes = 0
    best: tuple[int, tuple[Arc, ...]] | None = None
    found: list[Arc] | None = None

    def upper_bound(cur: int, used_count: int) -> int:
        avail = 0
        for ch in channels:
            if ch_used >> ch.index & 1:
                continue
            a, b = ch.star_left, ch.star_right
            if (a == cur or not visited >> a & 1) and (
                b == cur or not visited >> b & 1
            ):
                avail += 1
        return used_count + avail

    def dfs(cur: int, used_count: int) -> bool:
        nonlocal visited, tri_used, used_edges, shared_edges, ch_used
        nonlocal crossed_tris, nodes, best, found
        nodes += 1
        if nodes > budget:
            raise BudgetExhaustedError(nodes, budget)
        if cur == end:
            if used_count >= 1:
                if target is not None:
                    if used_count >= target:
                        found = list(arcs)
                        return True
                elif best is None or used_count > best[0]:
                    best = (used_count, tuple(arcs))
            return False
        bound = upper_bound(cur, used_count)
        if target is not None:
            if bound < target:
                return False
        elif best is not None and bound <= best[0]:
            return False
        elif bound == 0:
            return False
        for is_ch, aid, nxt in adjacency[cur]:
            if visited >> nxt & 1:
                continue
            if is_ch:
                ch = channels[aid]
                if used_edges >> ch.shared_edge & 1:
                    continue
                cmask = (1 << ch.tri_left) | (1 << ch.tri_right)
                if crossed_tris & cmask:
                    continue
                visited |= 1 << nxt
                ch_used |= 1 << aid
                shared_edges |= 1 << ch.shared_edge
                crossed_tris |= cmask
                arcs.append(ChannelArc(aid))
                if dfs(nxt, used_count + 1):
                    return True
                arcs.pop()
                crossed_tris &= ~cmask
                shared_edges &= ~(1 << ch.shared_edge)
                ch_used &= ~(1 << aid)
                visited &= ~(1 << nxt)
            else:
                if shared_edges >> aid & 1:
                    continue
                tris = d.edge_tris[aid]
                tmask = 0
                for tid in tris:
                    tmask |= 1 << tid
                if tri_used & tmask:
                    continue
                visited |= 1 << nxt
                tri_used |= tmask
                used_edges |= 1 << aid
                arcs.append(EdgeArc(aid))
                if dfs(nxt, used_count):
                    return True
                arcs.pop()
                used_edges &= ~(1 << aid)
                tri_used &= ~tmask
                visited &= ~(1 << nxt)
        return False

    if n_ch == 0 or (target is not None and n_ch < target):
        # No arrangement of arcs can help; the frontier is trivially closed.
        return SearchResult(None, True, 0)

    hit = dfs(d.start, 0)
    if target is not None:
        if hit and found is not None:
            return SearchResult(make_path(d, found), False, nodes)
        return SearchResult(None, True, nodes)
    if best is not None:
        return SearchResult(make_path(d, list(best[1])), True, nodes)
    return SearchResult(None, True, nodes)


# -- constructive paths ------------------------------------------------


@dataclass(frozen=True, slots=True)
class ConstructedPath:
    """A path from the case-by-case construction, with its case label."""

    path: AllowablePath
    case: str
    branch: str | None
    diagram: Diagram


_CASE_BY_PATTERN = {
    (True, True, True): "1",
    (True, True, False): "2",
    (True, False, True): "3",
    (False, True, True): "4",
    (False, False, True): "5",
    (False, True, False): "6",
    (True, False, False): "7",
    (False, False, False): "8",
}


def _fan_of_triangle(d: Diagram) -> list[list[int]]:
    fans: list[list[int]] = [[] for _ in range(d.triangle_count)]
    for f, (lo, hi) in enumerate(d.fan_spans):
        for t in range(lo, hi + 1):
            fans[t].append(f)
    return fans


def _channel_homes(d: Diagram) -> tuple[dict[int, list[Channel]], dict[int, Channel]]:
    """Sort channels into fan-internal ones and junction ones.

    A channel is internal to fan f when both its triangles lie in f's
    span; otherwise it straddles the glued edge between consecutive fans
    and is the junction channel of the 1-based index between them.
    """
    fan_of = _fan_of_triangle(d)
    internal: dict[int, list[Channel]] = {}
    junction: dict[int, Channel] = {}
    for ch in d.channels:
        common = set(fan_of[ch.tri_left]) & set(fan_of[ch.tri_right])
        if common:
            internal.setdefault(min(common), []).append(ch)
        else:
            left_fan = max(fan_of[ch.tri_left])
            junction[left_fan + 1] = ch  # 1-based channel index
    return internal, junction


def _case_and_branch(b: tuple[int, ...], idx: tuple[int, ...]) -> tuple[str, str | None]:
    i, j = idx[1], idx[2]
    pattern = (
        b[0] * b[1] < 0,
        b[i - 1] * b[i] < 0,
        b[j - 1] * b[j] < 0,
    )
    case = _CASE_BY_PATTERN[pattern]
    branch = None
    if case in ("7", "8"):
        s = -1 if case == "7" else 1
        if s * b[1] >= 4:
            branch = "second-entry-large"
        elif s * b[i] >= 6:
            branch = "middle-entry-six"
        elif s * b[j] >= 4:
            branch = "post-four-large"
        else:
            branch = "later-index"
    return case, branch


def _row_walk(d: Diagram, frm: int, to: int, arcs: list[Arc]) -> None:
    if frm == to:
        return
    if d.top_row[frm] != d.top_row[to]:
        raise PathConstructionError(
            f"cannot walk between rows ({frm} to {to})"
        )
    row = d.row_vertices[1 if d.top_row[frm] else 0]
    i, j = d.row_pos[frm], d.row_pos[to]
    if i > j:
        raise PathConstructionError(f"walk from {frm} to {to} runs leftward")
    for p in range(i, j):
        arcs.append(EdgeArc(d.edge_id(row[p], row[p + 1])))


def _route_through(d: Diagram, chosen: list[Channel]) -> list[Arc]:
    arcs: list[Arc] = []
    cur = d.start
    for ch in chosen:
        _row_walk(d, cur, ch.star_left, arcs)
        arcs.append(ChannelArc(ch.index))
        cur = ch.star_right
    if d.top_row[cur] == d.top_row[d.end]:
        _row_walk(d, cur, d.end, arcs)
    else:
        row = d.row_vertices[1 if d.top_row[cur] else 0]
        last = row[-1]
        _row_walk(d, cur, last, arcs)
        arcs.append(EdgeArc(d.edge_id(last, d.end)))
    return arcs


def construct_case_path(cf: CFLike) -> ConstructedPath:
    """Build a three-channel allowable path by the sign-pattern case split.

    Requires a head-normalised fraction (first entry >= 4, or equal to 2
    with a negative second entry) carrying at least three channel indices
    and not matching an excluded exceptional shape.  The three channels
    are drawn from the per-index supply: a sign change contributes its
    junction channel, an over-four product the internal channels of the
    larger fan; when an index's supply is exhausted (a 4-fan squeezed
    between two indices) the scan simply moves to the next channel index,
    which the non-exceptional hypothesis guarantees to exist.
    """
    b = _entries(cf)
    idx = channel_indices(b)
    if len(idx) < 3:
        raise PreconditionViolatedError(
            f"{list(b)} has only {len(idx)} channel indices; need 3"
        )
    if not (b[0] >= 4 or (b[0] == 2 and len(b) > 1 and b[1] <= -2)):
        raise PreconditionViolatedError(
            f"{list(b)} is not head-normalised"
        )
    if exceptional_form(b) is not None:
        raise PreconditionViolatedError(
            f"{list(b)} is an excluded exceptional shape"
        )
    d = build(b)
    internal, junction = _channel_homes(d)
    chosen: list[Channel] = []
    taken: set[int] = set()
    for t in idx:
        if len(chosen) == 3:
            break
        if b[t - 1] * b[t] < 0:
            candidates = [junction[t]] if t in junction else []
        else:
            candidates = internal.get(t - 1, []) + internal.get(t, [])
        for ch in candidates:
            if ch.index not in taken:
                chosen.append(ch)
                taken.add(ch.index)
                break
    if len(chosen) < 3:
        raise PathConstructionError(
            f"could not find three distinct channels for {list(b)}"
        )
    chosen.sort(key=lambda ch: ch.tri_left)
    arcs = _route_through(d, chosen)
    path = make_path(d, arcs)
    if path.channel_count < 3:
        raise PathConstructionError(
            f"constructed path for {list(b)} has {path.channel_count} channels"
        )
    case, branch = _case_and_branch(b, idx)
    return ConstructedPath(path, case, branch, d)
