"""Planar projection and classical Legendrian invariants of grid diagrams.

The torus is cut at the canonical-form origin and each level pair is joined by
a straight min-to-max segment, verticals crossing over horizontals.  The two
Legendrian fronts of the diagram are the two 45-degree rotations of this
picture; corners of one pair of shapes become cusps for one structure, the
other pair for the mirror structure.

Conventions (pinned jointly by the unknot values, the stabilization contract
and the flype scripts being "minus"-side; rederived by
tools/calibrate_conventions.py):

  tb_minus = writhe - (#NE + #SW corners)/2
  rot_minus = (#NE-white + #SW-black - #NE-black - #SW-white)/2
  tb_plus / rot_plus = the same computation on the vertically reflected
  diagram (the mirror realizes the opposite structure).

Crossing sign: +1 when the under strand, rotated 90 degrees counterclockwise,
aligns with the over strand.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

from .diagrams import GridDiagram, reflect_vertical


@dataclass(frozen=True)
class Crossing:
    column: int
    row: int
    sign: int


@dataclass(frozen=True)
class PlanarDiagram:
    """Edges, crossings and corner shapes of the cut-open diagram.

    vertical_edges[c] = (row_lo, row_hi, orient)   orient +1 = black at bottom
    horizontal_edges[r] = (col_lo, col_hi, orient) orient +1 = white at left
    corners: (column, row, shape, color) per vertex, shape in NE/NW/SE/SW
             naming the directions the two incident edges leave the vertex.
    """

    n: int
    vertical_edges: tuple[tuple[int, int, int], ...]
    horizontal_edges: tuple[tuple[int, int, int], ...]
    crossings: tuple[Crossing, ...]
    corners: tuple[tuple[int, int, str, str], ...]

    @property
    def writhe(self) -> int:
        return sum(c.sign for c in self.crossings)


def planarize(d: GridDiagram) -> PlanarDiagram:
    """Cut the torus and draw each edge as a straight min-to-max span."""
    n = d.n
    black_inv = [0] * n
    white_inv = [0] * n
    for c in range(n):
        black_inv[d.black[c]] = c
        white_inv[d.white[c]] = c

    verticals = []
    for c in range(n):
        lo, hi = sorted((d.black[c], d.white[c]))
        orient = 1 if d.black[c] == lo else -1
        verticals.append((lo, hi, orient))
    horizontals = []
    for r in range(n):
        lo, hi = sorted((black_inv[r], white_inv[r]))
        orient = 1 if white_inv[r] == lo else -1
        horizontals.append((lo, hi, orient))

    crossings = []
    for c in range(n):
        rlo, rhi, v_or = verticals[c]
        for r in range(rlo + 1, rhi):
            clo, chi, h_or = horizontals[r]
            if clo < c < chi:
                crossings.append(Crossing(c, r, v_or * h_or))

    corners = []
    for c in range(n):
        for r, color in ((d.black[c], "black"), (d.white[c], "white")):
            ns = "N" if r == verticals[c][0] else "S"
            ew = "E" if c == horizontals[r][0] else "W"
            corners.append((c, r, ns + ew, color))
    return PlanarDiagram(n, tuple(verticals), tuple(horizontals),
                         tuple(crossings), tuple(corners))


def _minus_invariants(d: GridDiagram) -> tuple[int, int]:
    p = planarize(d)
    counts = {("NE", "black"): 0, ("NE", "white"): 0,
              ("SW", "black"): 0, ("SW", "white"): 0}
    for _, _, shape, color in p.corners:
        if (shape, color) in counts:
            counts[(shape, color)] += 1
    cusps = sum(counts.values())
    down = counts[("NE", "white")] + counts[("SW", "black")]
    up = counts[("NE", "black")] + counts[("SW", "white")]
    assert cusps % 2 == 0 and (down - up) % 2 == 0
    return p.writhe - cusps // 2, (down - up) // 2


def classical_invariants(d: GridDiagram, structure: str) -> tuple[int, int]:
    """(tb, rot) of the diagram's link in the chosen contact structure.

    structure is "plus" or "minus".  The values do not depend on the cyclic
    shift chosen for the cut (verified property, not an assumption).
    """
    if structure == "minus":
        return _minus_invariants(d)
    if structure == "plus":
        return _minus_invariants(reflect_vertical(d))
    raise ValueError(f"unknown contact structure {structure!r}")


def invariant_quad(d: GridDiagram) -> tuple[int, int, int, int]:
    """(tb_plus, rot_plus, tb_minus, rot_minus)."""
    tp, rp = classical_invariants(d, "plus")
    tm, rm = classical_invariants(d, "minus")
    return (tp, rp, tm, rm)


def invariant_report(diagrams: list[tuple[str, GridDiagram]],
                     class_sizes: list[int | None] | None = None,
                     fmt: str = "text") -> str:
    """Tabulate (n, components, tb+, rot+, tb-, rot-, class size) per diagram."""
    rows = []
    for i, (name, d) in enumerate(diagrams):
        tp, rp, tm, rm = invariant_quad(d)
        size = class_sizes[i] if class_sizes else None
        rows.append((name, d.n, d.num_components, tp, rp, tm, rm,
                     "-" if size is None else size))
    header = ("name", "n", "k", "tb+", "rot+", "tb-", "rot-", "class")
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(",".join(header) + "\n")
        for row in rows:
            buf.write(",".join(str(x) for x in row) + "\n")
        return buf.getvalue()
    widths = [max(len(str(header[j])), max((len(str(r[j])) for r in rows), default=0))
              for j in range(len(header))]
    lines = ["  ".join(str(header[j]).ljust(widths[j]) for j in range(len(header)))]
    for row in rows:
        lines.append("  ".join(str(row[j]).ljust(widths[j]) for j in range(len(header))))
    return "\n".join(lines) + "\n"
