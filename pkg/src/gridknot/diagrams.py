"""Rectangular (grid) diagrams of oriented links on the torus.

A diagram of size n places two vertices, one black and one white, on each of
n vertical levels (columns) and n horizontal levels (rows).  Column c holds a
black vertex at row ``black[c]`` and a white vertex at row ``white[c]``; both
``black`` and ``white`` are permutations of 0..n-1, so every row also carries
exactly one vertex of each color.  The link runs black->white along columns
and white->black along rows.

Columns and rows carry only a cyclic order: two diagrams are combinatorially
equivalent when independent cyclic shifts of the column and row labels map one
to the other, colors and component numbers included.  ``canonicalize`` picks
the lexicographically minimal encoding over all n*n shift pairs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class GridDiagram:
    """Immutable grid diagram.

    black[c] -- row of the black vertex in column c
    white[c] -- row of the white vertex in column c
    comp[c]  -- component number (1..k) of the two vertices in column c
                (the two vertices of a column always share a component:
                they are joined by the column edge)
    """

    black: tuple[int, ...]
    white: tuple[int, ...]
    comp: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.black)

    @property
    def num_components(self) -> int:
        return max(self.comp) if self.comp else 0

    def vertices(self) -> list[tuple[int, int, str, int]]:
        """All vertices as (column, row, color, component)."""
        out = []
        for c in range(self.n):
            out.append((c, self.black[c], "black", self.comp[c]))
            out.append((c, self.white[c], "white", self.comp[c]))
        return out

    def color_at(self, c: int, r: int) -> str | None:
        if self.black[c] == r:
            return "black"
        if self.white[c] == r:
            return "white"
        return None

    def encoding(self) -> tuple:
        return (self.black, self.white, self.comp)

    def __repr__(self) -> str:
        return f"GridDiagram(black={list(self.black)}, white={list(self.white)}, comp={list(self.comp)})"


def make_diagram(black: Iterable[int], white: Iterable[int],
                 comp: Iterable[int] | None = None) -> GridDiagram:
    """Build a diagram, tracing component numbers when none are given."""
    black_t = tuple(black)
    white_t = tuple(white)
    if comp is None:
        d = GridDiagram(black_t, white_t, (1,) * len(black_t))
        faults = validate(d, check_components=False)
        if faults:
            raise ValueError("invalid diagram: " + "; ".join(faults))
        return trace_components(d)
    return GridDiagram(black_t, white_t, tuple(comp))


def validate(d: GridDiagram, check_components: bool = True) -> list[str]:
    """Return a list of invariant violations; empty list means the diagram is valid.

    Total function: never raises on malformed content, it reports instead.
    """
    faults: list[str] = []
    n = d.n
    if n < 2:
        faults.append(f"grid size {n} < 2")
        return faults
    if len(d.white) != n or len(d.comp) != n:
        faults.append("field lengths disagree")
        return faults
    for name, perm in (("black", d.black), ("white", d.white)):
        if sorted(perm) != list(range(n)):
            faults.append(f"{name} not a bijection")
    if faults:
        return faults
    for c in range(n):
        if d.black[c] == d.white[c]:
            faults.append(f"black({c})=white({c})")
    if faults or not check_components:
        return faults

    orbits = _column_orbits(d)
    seen_labels = []
    for orbit in orbits:
        labels = {d.comp[c] for c in orbit}
        if len(labels) > 1:
            faults.append(f"component label not constant on orbit {sorted(orbit)}")
        else:
            seen_labels.append(labels.pop())
    if not faults:
        k = len(orbits)
        if sorted(set(seen_labels)) != list(range(1, k + 1)):
            faults.append(f"component labels {sorted(set(seen_labels))} not exactly 1..{k}")
    return faults


def is_valid(d: GridDiagram) -> bool:
    return not validate(d)


def _column_orbits(d: GridDiagram) -> list[list[int]]:
    """Orbits of columns under the traversal column -> black^-1(white(column)).

    Walking the link: up the black vertex of column c, down the white vertex,
    then along row white[c] to that row's black vertex.
    """
    n = d.n
    black_inv = [0] * n
    for c in range(n):
        black_inv[d.black[c]] = c
    seen = [False] * n
    orbits = []
    for start in range(n):
        if seen[start]:
            continue
        orbit = []
        c = start
        while not seen[c]:
            seen[c] = True
            orbit.append(c)
            c = black_inv[d.white[c]]
        orbits.append(orbit)
    return orbits


def trace_components(d: GridDiagram) -> GridDiagram:
    """Relabel components 1..k in first-occurrence order of the minimal column."""
    orbits = _column_orbits(d)
    orbits.sort(key=min)
    comp = [0] * d.n
    for label, orbit in enumerate(orbits, start=1):
        for c in orbit:
            comp[c] = label
    return GridDiagram(d.black, d.white, tuple(comp))


def component_orbits(d: GridDiagram) -> list[list[int]]:
    """Cyclic column order of each component, sorted by minimal column."""
    orbits = _column_orbits(d)
    orbits.sort(key=min)
    return orbits


def shift(d: GridDiagram, a: int, b: int) -> GridDiagram:
    """Cyclic relabeling: column c -> c+a, row r -> r+b (mod n)."""
    n = d.n
    black = [0] * n
    white = [0] * n
    comp = [0] * n
    for c in range(n):
        c2 = (c + a) % n
        black[c2] = (d.black[c] + b) % n
        white[c2] = (d.white[c] + b) % n
        comp[c2] = d.comp[c]
    return GridDiagram(tuple(black), tuple(white), tuple(comp))


def canonicalize(d: GridDiagram) -> GridDiagram:
    """Lexicographically minimal (black, white, comp) over all n*n cyclic shifts."""
    n = d.n
    best = None
    for a in range(n):
        for b in range(n):
            enc = shift(d, a, b).encoding()
            if best is None or enc < best:
                best = enc
    return GridDiagram(*best)


def equivalent(d1: GridDiagram, d2: GridDiagram) -> bool:
    """Combinatorial equivalence: equality of canonical forms."""
    if d1.n != d2.n:
        return False
    return canonicalize(d1).encoding() == canonicalize(d2).encoding()


def _rho(n: int, x: int) -> int:
    return n - 1 - x


def reflect_antidiagonal(d: GridDiagram) -> GridDiagram:
    """Reflection about the anti-diagonal: (c, r) -> (n-1-r, n-1-c), colors swapped.

    Component numbering is preserved.
    """
    n = d.n
    black_inv = [0] * n
    white_inv = [0] * n
    for c in range(n):
        black_inv[d.black[c]] = c
        white_inv[d.white[c]] = c
    black = [0] * n
    white = [0] * n
    comp = [0] * n
    for u in range(n):
        # new black vertex in column u is the image of the white vertex at
        # row n-1-u; likewise new white from old black
        black[u] = _rho(n, white_inv[_rho(n, u)])
        white[u] = _rho(n, black_inv[_rho(n, u)])
        comp[u] = d.comp[white_inv[_rho(n, u)]]
    return GridDiagram(tuple(black), tuple(white), tuple(comp))


def reflect_vertical(d: GridDiagram) -> GridDiagram:
    """Reverse the column order: (c, r) -> (n-1-c, r), colors preserved."""
    n = d.n
    black = tuple(d.black[_rho(n, c)] for c in range(n))
    white = tuple(d.white[_rho(n, c)] for c in range(n))
    comp = tuple(d.comp[_rho(n, c)] for c in range(n))
    return GridDiagram(black, white, comp)


def rotate180(d: GridDiagram) -> GridDiagram:
    """(c, r) -> (n-1-c, n-1-r), colors preserved."""
    n = d.n
    black = tuple(_rho(n, d.black[_rho(n, c)]) for c in range(n))
    white = tuple(_rho(n, d.white[_rho(n, c)]) for c in range(n))
    comp = tuple(d.comp[_rho(n, c)] for c in range(n))
    return GridDiagram(black, white, comp)


def swap_colors(d: GridDiagram) -> GridDiagram:
    """Exchange black and white roles: reverses the orientation of every component."""
    return GridDiagram(d.white, d.black, d.comp)


def random_diagram(n: int, rng: random.Random, knot_only: bool = False) -> GridDiagram:
    """Uniform-ish random valid diagram of size n (rejection sampling)."""
    while True:
        black = list(range(n))
        rng.shuffle(black)
        white = list(range(n))
        rng.shuffle(white)
        if any(black[c] == white[c] for c in range(n)):
            continue
        d = trace_components(GridDiagram(tuple(black), tuple(white), (1,) * n))
        if knot_only and d.num_components != 1:
            continue
        return d


UNKNOT_2 = GridDiagram((0, 1), (1, 0), (1, 1))
