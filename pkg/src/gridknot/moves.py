"""Elementary moves on grid diagrams: exchanges, stabilizations, destabilizations.

A move is described by the corner set of one combinatorial rectangle on the
torus: the cells to delete (currently occupied) and the cells to add.  Cells
use doubled integer coordinates so that fresh levels stay exact: an even value
2k is the existing level k, an odd value 2k+1 is the free slot between levels
k and k+1 (cyclically; 2n-1 is the slot between the last level and level 0).
In serialized form fresh slots are written "k+1/2".

A move applies when some choice of column arc x row arc spans a closed
rectangle meeting the diagram's vertices exactly in the deletion set, and the
surgery leaves two opposite-colored vertices on every occupied level.

Stabilizations and destabilizations carry a type, I or II, read from an
8-entry (pivot color, corner) table.  The table is derived once from the
invariant oracle (a stabilization is type II iff it preserves the mirror-side
classical invariants); tools/calibrate_conventions.py reproduces the
derivation.  The derived table is color-independent: NE and SW corners give
type I, NW and SE give type II.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .diagrams import GridDiagram

Cell = tuple[int, int]


class MoveError(Exception):
    """A malformed or inapplicable move, carrying the violated clause."""


@dataclass(frozen=True)
class MoveSpec:
    """Deletion/addition cell sets of one elementary move (doubled coordinates)."""

    del_cells: tuple[Cell, ...]
    add_cells: tuple[Cell, ...]

    def __post_init__(self):
        object.__setattr__(self, "del_cells", tuple(sorted(self.del_cells)))
        object.__setattr__(self, "add_cells", tuple(sorted(self.add_cells)))

    def corners(self) -> tuple[Cell, ...]:
        return tuple(sorted(self.del_cells + self.add_cells))


@dataclass(frozen=True)
class MoveKind:
    """Classification of a move.

    kind       -- "exchange" | "stabilization" | "destabilization"
    axis       -- exchanges only: "vertical" (a column pair slides) or "horizontal"
    corner     -- (de)stabilizations: direction from the pivot vertex to the
                  opposite rectangle corner ("NE", "NW", "SE", "SW")
    pivot_color -- color of the deleted vertex (stabilization) or of the added
                  vertex (destabilization)
    stab_type  -- "I" or "II" per the calibrated table
    """

    kind: str
    axis: str | None = None
    corner: str | None = None
    pivot_color: str | None = None
    stab_type: str | None = None

    def short(self) -> str:
        if self.kind == "exchange":
            return f"exchange[{self.axis}]"
        tag = "stab" if self.kind == "stabilization" else "destab"
        return f"{tag}[{self.stab_type},{self.corner},{self.pivot_color}]"


# Calibrated (pivot_color, corner) -> type table; see tools/calibrate_conventions.py.
TYPE_TABLE: dict[tuple[str, str], str] = {
    ("black", "NE"): "I",
    ("white", "NE"): "I",
    ("black", "SW"): "I",
    ("white", "SW"): "I",
    ("black", "NW"): "II",
    ("white", "NW"): "II",
    ("black", "SE"): "II",
    ("white", "SE"): "II",
}

CORNERS = ("NE", "NW", "SE", "SW")


def _arc_contains(a: int, b: int, x: int, mod: int) -> bool:
    """x lies on the closed cyclic arc running from a to b in positive direction."""
    return (x - a) % mod <= (b - a) % mod


def _check_well_formed(m: MoveSpec) -> tuple[tuple[int, int], tuple[int, int]]:
    """Return ((colA, colB), (rowA, rowB)) of the rectangle or raise."""
    cells = m.corners()
    if len(set(cells)) != 4 or len(m.del_cells) + len(m.add_cells) != 4:
        raise MoveError("not a rectangle: need 4 distinct corner cells")
    cols = sorted({c for c, _ in cells})
    rows = sorted({r for _, r in cells})
    if len(cols) != 2 or len(rows) != 2:
        raise MoveError("not a rectangle: corners must span 2 columns x 2 rows")
    if {(c, r) for c in cols for r in rows} != set(cells):
        raise MoveError("not a rectangle: missing a corner combination")
    if not 1 <= len(m.del_cells) <= 3:
        raise MoveError("not a rectangle: deletion set must have 1, 2 or 3 cells")
    return (cols[0], cols[1]), (rows[0], rows[1])


def _vertex_cells(d: GridDiagram) -> dict[Cell, tuple[str, int]]:
    out = {}
    for c in range(d.n):
        out[(2 * c, 2 * d.black[c])] = ("black", d.comp[c])
        out[(2 * c, 2 * d.white[c])] = ("white", d.comp[c])
    return out


def witnesses(d: GridDiagram, m: MoveSpec) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Arc choices (column arc, row arc) whose closed rectangle meets the
    diagram's vertices exactly in the deletion set.

    Arcs are (start, end) in positive cyclic direction; candidates are ordered
    by arc length so the tightest rectangle comes first.
    """
    (ca, cb), (ra, rb) = _check_well_formed(m)
    mod = 2 * d.n
    verts = _vertex_cells(d)
    del_set = set(m.del_cells)
    if not del_set <= set(verts):
        return []
    found = []
    col_arcs = sorted([(ca, cb), (cb, ca)], key=lambda ab: (ab[1] - ab[0]) % mod)
    row_arcs = sorted([(ra, rb), (rb, ra)], key=lambda ab: (ab[1] - ab[0]) % mod)
    for col_arc in col_arcs:
        for row_arc in row_arcs:
            inside = {
                cell for cell in verts
                if _arc_contains(col_arc[0], col_arc[1], cell[0], mod)
                and _arc_contains(row_arc[0], row_arc[1], cell[1], mod)
            }
            if inside == del_set:
                found.append((col_arc, row_arc))
    return found


def _surgery(d: GridDiagram, m: MoveSpec):
    """Perform the cell surgery; returns (diagram, col_renum, row_renum) or raises.

    col_renum/row_renum map surviving doubled level values to integer levels of
    the result.  Colors of added vertices are forced by the two-per-level
    opposite-color constraint; component labels are carried along the orbits.
    """
    verts = _vertex_cells(d)
    for cell in m.del_cells:
        if cell not in verts:
            raise MoveError(f"deleted cell {cell} is not a vertex")
    for cell in m.add_cells:
        if cell in verts:
            raise MoveError(f"added cell {cell} is already a vertex")

    new_cells: dict[Cell, str | None] = {
        cell: color for cell, (color, _) in verts.items() if cell not in m.del_cells
    }
    for cell in m.add_cells:
        new_cells[cell] = None

    by_col: dict[int, list[Cell]] = defaultdict(list)
    by_row: dict[int, list[Cell]] = defaultdict(list)
    for cell in new_cells:
        by_col[cell[0]].append(cell)
        by_row[cell[1]].append(cell)
    for axis_name, groups in (("column", by_col), ("row", by_row)):
        for level, cells in groups.items():
            if len(cells) != 2:
                raise MoveError(f"{axis_name} {level} ends with {len(cells)} vertices")
    if len(by_col) != len(by_row):
        raise MoveError("column and row counts disagree after surgery")

    # force colors of added vertices
    pending = True
    while pending:
        pending = False
        for groups in (by_col, by_row):
            for cells in groups.values():
                a, b = cells
                if new_cells[a] is None and new_cells[b] is not None:
                    new_cells[a] = "white" if new_cells[b] == "black" else "black"
                    pending = True
                elif new_cells[b] is None and new_cells[a] is not None:
                    new_cells[b] = "white" if new_cells[a] == "black" else "black"
                    pending = True
    if any(color is None for color in new_cells.values()):
        raise MoveError("colors of added vertices are undetermined")
    for groups in (by_col, by_row):
        for cells in groups.values():
            if new_cells[cells[0]] == new_cells[cells[1]]:
                raise MoveError("two vertices of one level share a color")

    col_sorted = sorted(by_col)
    row_sorted = sorted(by_row)
    col_renum = {v: i for i, v in enumerate(col_sorted)}
    row_renum = {v: i for i, v in enumerate(row_sorted)}
    m_new = len(col_sorted)
    black = [-1] * m_new
    white = [-1] * m_new
    for (c, r), color in new_cells.items():
        if color == "black":
            black[col_renum[c]] = row_renum[r]
        else:
            white[col_renum[c]] = row_renum[r]

    # trace orbits and inherit component labels from surviving vertices
    black_inv = [0] * m_new
    for c in range(m_new):
        black_inv[black[c]] = c
    comp = [0] * m_new
    seen = [False] * m_new
    for start in range(m_new):
        if seen[start]:
            continue
        orbit = []
        c = start
        while not seen[c]:
            seen[c] = True
            orbit.append(c)
            c = black_inv[white[c]]
        labels = set()
        for c in orbit:
            for r, color in ((black[c], "black"), (white[c], "white")):
                cell = (col_sorted[c], row_sorted[r])
                if cell in verts and cell not in m.del_cells:
                    labels.add(verts[cell][1])
        if len(labels) != 1:
            raise MoveError(f"component labels {sorted(labels)} ambiguous on an orbit")
        label = labels.pop()
        for c in orbit:
            comp[c] = label

    return GridDiagram(tuple(black), tuple(white), tuple(comp)), col_renum, row_renum


def applicable(d: GridDiagram, m: MoveSpec) -> bool:
    """True iff some rectangle realizes the move and the surgery stays valid."""
    _check_well_formed(m)
    if not witnesses(d, m):
        return False
    try:
        _surgery(d, m)
    except MoveError:
        return False
    return True


def apply_move(d: GridDiagram, m: MoveSpec) -> GridDiagram:
    """Apply the move; raises MoveError naming the violated clause."""
    _check_well_formed(m)
    if not witnesses(d, m):
        raise MoveError("no rectangle meets the diagram exactly in the deletion set")
    return _surgery(d, m)[0]


def apply_move_detailed(d: GridDiagram, m: MoveSpec):
    """Like apply_move but also returns the level renumbering maps."""
    _check_well_formed(m)
    if not witnesses(d, m):
        raise MoveError("no rectangle meets the diagram exactly in the deletion set")
    return _surgery(d, m)


def _corner_direction(pivot: Cell, opposite: Cell,
                      witness: tuple[tuple[int, int], tuple[int, int]]) -> str:
    (ca, cb), (ra, rb) = witness
    ew = "E" if pivot[0] == ca else "W"
    ns = "N" if pivot[1] == ra else "S"
    return ns + ew


def classify(d: GridDiagram, m: MoveSpec) -> MoveKind:
    """Classify an applicable move as exchange / stabilization / destabilization."""
    wit = witnesses(d, m)
    if not wit or not applicable(d, m):
        raise MoveError("move is not applicable")
    verts = _vertex_cells(d)
    ndel = len(m.del_cells)
    if ndel == 2:
        a, b = m.del_cells
        if a[0] == b[0]:
            return MoveKind(kind="exchange", axis="vertical")
        if a[1] == b[1]:
            return MoveKind(kind="exchange", axis="horizontal")
        raise MoveError("not an elementary move: diagonal deletion pair")
    if ndel == 1:
        pivot = m.del_cells[0]
        opposite = next(c for c in m.add_cells if c[0] != pivot[0] and c[1] != pivot[1])
        corner = _corner_direction(pivot, opposite, wit[0])
        color = verts[pivot][0]
        return MoveKind(kind="stabilization", corner=corner,
                        pivot_color=color, stab_type=TYPE_TABLE[(color, corner)])
    added = m.add_cells[0]
    opposite = next(c for c in m.del_cells if c[0] != added[0] and c[1] != added[1])
    corner = _corner_direction(added, opposite, wit[0])
    # the added vertex takes the color opposite to the survivor of its column
    col_mates = [cell for cell in verts
                 if cell[0] == added[0] and cell not in m.del_cells]
    color = "white" if verts[col_mates[0]][0] == "black" else "black"
    return MoveKind(kind="destabilization", corner=corner,
                    pivot_color=color, stab_type=TYPE_TABLE[(color, corner)])


def enumerate_exchanges(d: GridDiagram) -> list[MoveSpec]:
    """Adjacent-level transpositions, columns first then rows, in index order.

    A cyclically adjacent pair of columns swaps iff their row pairs are
    disjoint and do not interleave cyclically; the MoveSpec slides the lower
    level across its neighbor into the fresh slot beyond it.  The closure of
    these swaps matches reachability by arbitrary single exchange moves.
    """
    n = d.n
    out: list[MoveSpec] = []
    npairs = n if n > 2 else 1

    def non_interleaving(pair_a: tuple[int, int], pair_b: tuple[int, int]) -> bool:
        a1, a2 = pair_a
        inside = sum(1 for x in pair_b if 0 < (x - a1) % n < (a2 - a1) % n)
        return inside == 0 or inside == 2

    for c in range(npairs):
        c2 = (c + 1) % n
        rows_a = (d.black[c], d.white[c])
        rows_b = (d.black[c2], d.white[c2])
        if set(rows_a) & set(rows_b):
            continue
        if not non_interleaving(rows_a, rows_b):
            continue
        slot = (2 * c2 + 1) % (2 * n)
        out.append(MoveSpec(
            del_cells=((2 * c, 2 * rows_a[0]), (2 * c, 2 * rows_a[1])),
            add_cells=((slot, 2 * rows_a[0]), (slot, 2 * rows_a[1]))))

    black_inv = [0] * n
    white_inv = [0] * n
    for c in range(n):
        black_inv[d.black[c]] = c
        white_inv[d.white[c]] = c
    for r in range(npairs):
        r2 = (r + 1) % n
        cols_a = (black_inv[r], white_inv[r])
        cols_b = (black_inv[r2], white_inv[r2])
        if set(cols_a) & set(cols_b):
            continue
        if not non_interleaving(cols_a, cols_b):
            continue
        slot = (2 * r2 + 1) % (2 * n)
        out.append(MoveSpec(
            del_cells=((2 * cols_a[0], 2 * r), (2 * cols_a[1], 2 * r)),
            add_cells=((2 * cols_a[0], slot), (2 * cols_a[1], slot))))
    return out


def enumerate_stabilizations(d: GridDiagram) -> list[tuple[MoveSpec, MoveKind]]:
    """All 4 corners x 2n vertices; every entry is applicable by construction."""
    n = d.n
    mod = 2 * n
    out = []
    for c in range(n):
        for r, color in ((d.black[c], "black"), (d.white[c], "white")):
            for corner in CORNERS:
                fc = (2 * c + (1 if corner[1] == "E" else -1)) % mod
                fr = (2 * r + (1 if corner[0] == "N" else -1)) % mod
                spec = MoveSpec(del_cells=((2 * c, 2 * r),),
                                add_cells=((2 * c, fr), (fc, 2 * r), (fc, fr)))
                kind = MoveKind(kind="stabilization", corner=corner,
                                pivot_color=color,
                                stab_type=TYPE_TABLE[(color, corner)])
                out.append((spec, kind))
    return out


def enumerate_destabilizations(d: GridDiagram) -> list[tuple[MoveSpec, MoveKind]]:
    """All rectangles with three corners in the diagram and a clean interior."""
    n = d.n
    black_inv = [0] * n
    white_inv = [0] * n
    for c in range(n):
        black_inv[d.black[c]] = c
        white_inv[d.white[c]] = c
    out = []
    for c1 in range(n):
        pair = (d.black[c1], d.white[c1])
        for r_shared, r_other in (pair, pair[::-1]):
            c2 = black_inv[r_shared] if black_inv[r_shared] != c1 else white_inv[r_shared]
            if d.color_at(c2, r_other) is not None:
                continue
            spec = MoveSpec(
                del_cells=((2 * c1, 2 * pair[0]), (2 * c1, 2 * pair[1]),
                           (2 * c2, 2 * r_shared)),
                add_cells=((2 * c2, 2 * r_other),))
            if applicable(d, spec):
                out.append((spec, classify(d, spec)))
    return out


def _slot_after_vanished(value: int, surviving: list[int], renum: dict[int, int],
                         mod: int) -> int:
    """Doubled coordinate of the slot where a vanished level used to sit."""
    preds = [v for v in surviving if v < value]
    pred = max(preds) if preds else max(surviving)
    return (2 * renum[pred] + 1) % (2 * len(surviving))


def invert(m: MoveSpec, d_pre: GridDiagram, d_post: GridDiagram) -> MoveSpec:
    """MoveSpec on d_post undoing m; its application is canonically equal to d_pre."""
    result, col_renum, row_renum = apply_move_detailed(d_pre, m)
    if result.encoding() != d_post.encoding():
        raise MoveError("d_post is not the result of applying m to d_pre")
    cols_surviving = sorted(col_renum)
    rows_surviving = sorted(row_renum)

    def forward(cell: Cell) -> Cell:
        return (2 * col_renum[cell[0]], 2 * row_renum[cell[1]])

    def backward(cell: Cell) -> Cell:
        c, r = cell
        if c in col_renum:
            nc = 2 * col_renum[c]
        else:
            nc = _slot_after_vanished(c, cols_surviving, col_renum, 2 * d_pre.n)
        if r in row_renum:
            nr = 2 * row_renum[r]
        else:
            nr = _slot_after_vanished(r, rows_surviving, row_renum, 2 * d_pre.n)
        return (nc, nr)

    return MoveSpec(del_cells=tuple(forward(c) for c in m.add_cells),
                    add_cells=tuple(backward(c) for c in m.del_cells))


def shift_move(m: MoveSpec, a: int, b: int, n: int) -> MoveSpec:
    """Transport a move along the cyclic shift (a, b) of an n-diagram."""
    mod = 2 * n
    sh = lambda cell: (((cell[0] + 2 * a) % mod), ((cell[1] + 2 * b) % mod))
    return MoveSpec(del_cells=tuple(sh(c) for c in m.del_cells),
                    add_cells=tuple(sh(c) for c in m.add_cells))


def reflect_spec(m: MoveSpec, n: int) -> MoveSpec:
    """Transport a move through reflect_vertical of an n-diagram."""
    mod = 2 * n
    rf = lambda cell: (((2 * (n - 1) - cell[0]) % mod), cell[1])
    return MoveSpec(del_cells=tuple(rf(c) for c in m.del_cells),
                    add_cells=tuple(rf(c) for c in m.add_cells))


def parse_mask(text: str) -> frozenset[str]:
    """Parse an allowed-kind mask like "exchange+II", "exchange+I", "any"."""
    if text in ("any", "", None):
        return frozenset({"exchange", "I", "II"})
    parts = [p.strip() for p in text.split("+") if p.strip()]
    allowed = set()
    for p in parts:
        if p not in ("exchange", "I", "II"):
            raise ValueError(f"unknown mask component {p!r}")
        allowed.add(p)
    return frozenset(allowed)


def kind_in_mask(kind: MoveKind, mask: frozenset[str]) -> bool:
    if kind.kind == "exchange":
        return "exchange" in mask
    return kind.stab_type in mask


def conjugate_by_reflection(script):
    """Conjugate a move script by the vertical reflection; see gridknot.scripts."""
    from .scripts import conjugate_by_reflection as impl
    return impl(script)
