"""Triangulated strip diagrams built from fans of an even continued fraction.

Each entry b contributes a fan of |b| triangles sharing one apex vertex.
Fans are glued left to right: opposite-sign neighbours share exactly one
edge, equal-sign neighbours share a whole triangle.  Positive fans have
their apex on the top row (so their rim, and its starred vertices, sit on
the bottom); negative fans open the other way.

Every vertex carries an exact label: the strip starts on the edge
{1/0, 0/1} and each new vertex is the mediant of the frontier edge it is
glued to, which keeps all edges unimodular and ends the strip at the value
of the continued fraction.  Parities are read off the labels; a vertex
with odd numerator and odd denominator is a star, and a channel is a pair
of edge-adjacent triangles whose two off-edge vertices are both stars.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from .contfrac import CFLike, ContinuedFraction, ExtRational, Parity, _entries, eval_cf

if TYPE_CHECKING:  # pragma: no cover
    from .pathfinder import AllowablePath

TOP = "top"
BOTTOM = "bottom"
ENDPOINT = "endpoint"


class UnknownFormatError(ValueError):
    """An unsupported output format was requested from :func:`emit`."""


@dataclass(frozen=True, slots=True)
class Channel:
    """An arc through two edge-adjacent triangles joining their off-edge stars.

    ``tri_left < tri_right`` in strip order, and ``star_left`` is the star
    belonging to the left triangle.
    """

    index: int
    tri_left: int
    tri_right: int
    shared_edge: int
    star_left: int
    star_right: int


class Diagram:
    """The strip of Farey triangles for a continued fraction with even entries.

    Vertices, triangles and edges are indexed in creation order, which is
    strip order; identical input always yields identical indexing.
    """

    __slots__ = (
        "entries",
        "labels",
        "top_row",
        "row_pos",
        "row_vertices",
        "triangles",
        "tri_edges",
        "edges",
        "edge_ids",
        "edge_tris",
        "fan_spans",
        "fan_edges",
        "start",
        "end",
        "_channels",
        "_vertex_edges",
    )

    def __init__(self, cf: CFLike) -> None:
        entries = _entries(cf)
        if not entries:
            raise ValueError("diagram needs at least one entry")
        for e in entries:
            if e == 0 or e % 2:
                raise ValueError(f"diagram entries must be even and nonzero: {entries}")
        self.entries = entries
        self.labels: list[tuple[int, int]] = []
        self.top_row: list[bool] = []
        self.row_pos: list[int] = []
        self.row_vertices: tuple[list[int], list[int]] = ([], [])  # (bottom, top)
        self.triangles: list[tuple[int, int, int]] = []
        self.tri_edges: list[tuple[int, int, int]] = []
        self.edges: list[tuple[int, int]] = []
        self.edge_ids: dict[tuple[int, int], int] = {}
        self.edge_tris: list[list[int]] = []
        self.fan_spans: list[tuple[int, int]] = []
        self.fan_edges: list[tuple[int, int]] = []
        self._channels: tuple[Channel, ...] | None = None
        self._vertex_edges: list[list[int]] | None = None
        self._build()

    # -- construction -------------------------------------------------

    def _new_vertex(self, num: int, den: int, top: bool) -> int:
        vid = len(self.labels)
        self.labels.append((num, den))
        self.top_row.append(top)
        row = self.row_vertices[1 if top else 0]
        self.row_pos.append(len(row))
        row.append(vid)
        return vid

    def _add_triangle(self, x: int, y: int, z: int) -> None:
        tid = len(self.triangles)
        self.triangles.append((x, y, z))
        eids = []
        for u, v in ((x, y), (x, z), (y, z)):
            key = (u, v) if u < v else (v, u)
            eid = self.edge_ids.get(key)
            if eid is None:
                eid = len(self.edges)
                self.edge_ids[key] = eid
                self.edges.append(key)
                self.edge_tris.append([])
            self.edge_tris[eid].append(tid)
            eids.append(eid)
        self.tri_edges.append(tuple(eids))

    def _build(self) -> None:
        b = self.entries
        k = len(b)
        apex_top = b[0] > 0
        start = self._new_vertex(1, 0, not apex_top)
        apex = self._new_vertex(0, 1, apex_top)
        prev = start
        fan_edge_pairs: list[tuple[tuple[int, int], tuple[int, int]]] = []
        shared_prev = False
        for i in range(k):
            e1_pair = (apex, prev)
            first_tri = len(self.triangles) - (1 if shared_prev else 0)
            shared_next = i + 1 < k and b[i] * b[i + 1] > 0
            pivots = abs(b[i]) - (1 if shared_prev else 0) - (1 if shared_next else 0)
            an, ad = self.labels[apex]
            pn, pd = self.labels[prev]
            rim_top = not self.top_row[apex]
            for _ in range(pivots):
                v = self._new_vertex(an + pn, ad + pd, rim_top)
                self._add_triangle(apex, prev, v)
                prev, pn, pd = v, an + pn, ad + pd
            if shared_next:
                v = self._new_vertex(an + pn, ad + pd, not rim_top)
                self._add_triangle(apex, prev, v)
                e2_pair = (apex, v)
                apex = v
            else:
                e2_pair = (apex, prev)
                if i + 1 < k:
                    apex, prev = prev, apex
            self.fan_spans.append((first_tri, len(self.triangles) - 1))
            fan_edge_pairs.append((e1_pair, e2_pair))
            shared_prev = shared_next
        self.start = start
        # the last fan never shares forward, so prev is the terminal vertex
        self.end = prev
        for (u1, v1), (u2, v2) in fan_edge_pairs:
            self.fan_edges.append((self.edge_id(u1, v1), self.edge_id(u2, v2)))

    # -- accessors ----------------------------------------------------

    @property
    def vertex_count(self) -> int:
        return len(self.labels)

    @property
    def triangle_count(self) -> int:
        return len(self.triangles)

    def label(self, v: int) -> ExtRational:
        num, den = self.labels[v]
        return ExtRational(num, den)

    def parity(self, v: int) -> Parity:
        num, den = self.labels[v]
        return Parity.of(num, den)

    def is_star(self, v: int) -> bool:
        num, den = self.labels[v]
        return bool(num & 1 and den & 1)

    @property
    def star_count(self) -> int:
        return sum(1 for n, d in self.labels if n & 1 and d & 1)

    def side(self, v: int) -> str:
        """Boundary side of a vertex: top, bottom, or endpoint."""
        if v == self.start or v == self.end:
            return ENDPOINT
        return TOP if self.top_row[v] else BOTTOM

    def edge_id(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        try:
            return self.edge_ids[key]
        except KeyError:
            raise KeyError(f"no edge between vertices {u} and {v}") from None

    def is_boundary_edge(self, eid: int) -> bool:
        return len(self.edge_tris[eid]) == 1

    def off_vertex(self, tid: int, eid: int) -> int:
        """The vertex of a triangle not on one of its edges."""
        u, v = self.edges[eid]
        for w in self.triangles[tid]:
            if w != u and w != v:
                return w
        raise ValueError(f"edge {eid} is not an edge of triangle {tid}")

    def vertex_edges(self, v: int) -> list[int]:
        if self._vertex_edges is None:
            incident: list[list[int]] = [[] for _ in range(len(self.labels))]
            for eid, (a, b) in enumerate(self.edges):
                incident[a].append(eid)
                incident[b].append(eid)
            self._vertex_edges = incident
        return self._vertex_edges[v]

    @property
    def channels(self) -> tuple[Channel, ...]:
        if self._channels is None:
            found = []
            for eid, tris in enumerate(self.edge_tris):
                if len(tris) != 2:
                    continue
                ta, tb = sorted(tris)
                off_a = self.off_vertex(ta, eid)
                off_b = self.off_vertex(tb, eid)
                if self.is_star(off_a) and self.is_star(off_b):
                    found.append((ta, tb, eid, off_a, off_b))
            found.sort()
            self._channels = tuple(
                Channel(i, ta, tb, eid, sa, sb)
                for i, (ta, tb, eid, sa, sb) in enumerate(found)
            )
        return self._channels

    @property
    def value(self) -> ExtRational:
        return eval_cf(self.entries)

    def __repr__(self) -> str:
        cf = "[" + ",".join(str(e) for e in self.entries) + "]"
        return (
            f"Diagram({cf}: {self.triangle_count} triangles, "
            f"{self.star_count} stars, {len(self.channels)} channels)"
        )


def build(cf: CFLike) -> Diagram:
    """Construct the strip diagram of a continued fraction with even entries."""
    return Diagram(cf)


def find_channels(d: Diagram) -> tuple[Channel, ...]:
    """All channels of the diagram, one per qualifying triangle pair."""
    return d.channels


# -- rendering ---------------------------------------------------------

_X_STEP = 48
_Y_TOP = 36
_Y_BOTTOM = 156
_MARGIN = 24


def _coords(d: Diagram) -> list[tuple[int, int]]:
    # Creation order is strip order, so the vertex id doubles as a column.
    return [
        (_MARGIN + v * _X_STEP, _Y_TOP if d.top_row[v] else _Y_BOTTOM)
        for v in range(d.vertex_count)
    ]


def _overlay_sets(overlay: "AllowablePath | None") -> tuple[set[int], set[int]]:
    edge_set: set[int] = set()
    chan_set: set[int] = set()
    if overlay is not None:
        for arc in overlay.arcs:
            if hasattr(arc, "edge"):
                edge_set.add(arc.edge)
            else:
                chan_set.add(arc.channel)
    return edge_set, chan_set


def _emit_svg(d: Diagram, overlay: "AllowablePath | None") -> str:
    pts = _coords(d)
    width = _MARGIN * 2 + (d.vertex_count - 1) * _X_STEP
    height = _Y_BOTTOM + 40
    path_edges, path_chans = _overlay_sets(overlay)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        "<style>"
        ".edge{stroke:#888;stroke-width:1;fill:none}"
        ".edge.used{stroke:#c22;stroke-width:3}"
        ".channel{stroke:#59f;stroke-width:1.5;fill:none;stroke-dasharray:4 3}"
        ".channel.used{stroke:#c22;stroke-width:3;stroke-dasharray:none}"
        ".label{font:10px sans-serif;fill:#333}"
        ".star{font:16px sans-serif;fill:#000}"
        "</style>",
    ]
    for eid, (u, v) in enumerate(d.edges):
        (x1, y1), (x2, y2) = pts[u], pts[v]
        cls = "edge used" if eid in path_edges else "edge"
        out.append(
            f'<line class="{cls}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>'
        )
    for ch in d.channels:
        (x1, y1), (x2, y2) = pts[ch.star_left], pts[ch.star_right]
        eu, ev = d.edges[ch.shared_edge]
        mx = (pts[eu][0] + pts[ev][0]) / 2
        my = (pts[eu][1] + pts[ev][1]) / 2
        cls = "channel used" if ch.index in path_chans else "channel"
        out.append(
            f'<path class="{cls}" d="M {x1} {y1} Q {mx:g} {my:g} {x2} {y2}"/>'
        )
    for v in range(d.vertex_count):
        x, y = pts[v]
        anchor = y - 8 if d.top_row[v] else y + 16
        num, den = d.labels[v]
        text = str(num) if den == 1 else f"{num}/{den}"
        out.append(f'<text class="label" x="{x - 8}" y="{anchor}">{text}</text>')
        if d.is_star(v):
            star_y = y - 18 if d.top_row[v] else y + 30
            out.append(f'<text class="star" x="{x - 4}" y="{star_y}">*</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _emit_dot(d: Diagram, overlay: "AllowablePath | None") -> str:
    path_edges, path_chans = _overlay_sets(overlay)
    cf = "[" + ",".join(str(e) for e in d.entries) + "]"
    out = [
        "graph strip {",
        f"  // diagram of {cf}: {d.triangle_count} triangles, "
        f"{d.star_count} stars, {len(d.channels)} channels",
        "  rankdir=LR;",
        '  node [shape=plaintext, fontsize=10];',
    ]
    for v in range(d.vertex_count):
        num, den = d.labels[v]
        text = str(num) if den == 1 else f"{num}/{den}"
        star = " *" if d.is_star(v) else ""
        out.append(f'  v{v} [label="{text}{star}"];')
    for eid, (u, v) in enumerate(d.edges):
        attrs = ' [color=red, penwidth=2]' if eid in path_edges else ""
        out.append(f"  v{u} -- v{v}{attrs};")
    for ch in d.channels:
        style = "bold" if ch.index in path_chans else "dashed"
        out.append(
            f"  v{ch.star_left} -- v{ch.star_right} "
            f'[style={style}, color=blue, label="ch{ch.index}"];'
        )
    for tid, (x, y, z) in enumerate(d.triangles):
        out.append(f"  // face t{tid}: v{x} v{y} v{z}")
    out.append("}")
    return "\n".join(out) + "\n"


def emit(d: Diagram, format: str, overlay: "AllowablePath | None" = None) -> bytes:
    """Render a diagram as SVG or DOT; deterministic for identical input.

    Stars are drawn as ``*`` glyphs and channels as arcs through the
    midpoint of their shared edge.  An overlay path highlights its edges
    and channels.
    """
    if format == "svg":
        return _emit_svg(d, overlay).encode()
    if format == "dot":
        return _emit_dot(d, overlay).encode()
    raise UnknownFormatError(f"unknown format {format!r} (want svg or dot)")
