"""Exchange classes: reachability by exchange moves alone.

Members are canonical forms; grid size is preserved by exchanges, so every
class is finite.  BFS deduplicates on the canonical encoding and expands the
frontier in lexicographic order, making runs reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagrams import GridDiagram, canonicalize
from .moves import apply_move, enumerate_exchanges

DEFAULT_MEMBER_LIMIT = 10 ** 6


class ClassLimitExceeded(Exception):
    """BFS hit member_limit; carries the non-closed partial class."""

    def __init__(self, partial: "ExchangeClass"):
        super().__init__(f"exchange class exceeds {len(partial.members)} members")
        self.partial = partial


@dataclass(frozen=True)
class ExchangeClass:
    """members: canonical forms sorted by encoding; edges: index pairs related
    by one exchange move; root: the seed's canonical form."""

    members: tuple[GridDiagram, ...]
    edges: frozenset[tuple[int, int]]
    root: GridDiagram
    closed: bool = True

    def __len__(self) -> int:
        return len(self.members)

    def index_of(self, d: GridDiagram) -> int | None:
        enc = canonicalize(d).encoding()
        for i, m in enumerate(self.members):
            if m.encoding() == enc:
                return i
        return None

    def __contains__(self, d: GridDiagram) -> bool:
        return self.index_of(d) is not None


def enumerate_class(d: GridDiagram, member_limit: int = DEFAULT_MEMBER_LIMIT) -> ExchangeClass:
    """BFS over canonical forms reachable by exchange moves.

    Raises ClassLimitExceeded (carrying the partial, non-closed class) when
    more than member_limit members appear.
    """
    root = canonicalize(d)
    seen: dict[tuple, GridDiagram] = {root.encoding(): root}
    edge_encs: set[frozenset] = set()
    frontier = [root]
    truncated = False
    while frontier:
        frontier.sort(key=lambda g: g.encoding())
        next_frontier = []
        for cur in frontier:
            for spec in enumerate_exchanges(cur):
                nxt = canonicalize(apply_move(cur, spec))
                enc = nxt.encoding()
                if enc != cur.encoding():
                    edge_encs.add(frozenset((cur.encoding(), enc)))
                if enc not in seen:
                    if len(seen) >= member_limit:
                        truncated = True
                        continue
                    seen[enc] = nxt
                    next_frontier.append(nxt)
        frontier = next_frontier
    members = tuple(sorted(seen.values(), key=lambda g: g.encoding()))
    index = {m.encoding(): i for i, m in enumerate(members)}
    edges = frozenset(
        tuple(sorted(index[e] for e in pair)) for pair in edge_encs
        if all(e in index for e in pair)
    )
    cls = ExchangeClass(members=members, edges=edges, root=root, closed=not truncated)
    if truncated:
        raise ClassLimitExceeded(cls)
    return cls


def same_class(d1: GridDiagram, d2: GridDiagram,
               member_limit: int = DEFAULT_MEMBER_LIMIT) -> bool:
    """True iff d2's canonical form is reachable from d1 by exchange moves."""
    if d1.n != d2.n:
        return False
    return canonicalize(d2) in enumerate_class(d1, member_limit)


def gap_obstruction(d: GridDiagram) -> bool:
    """Some vertical edge spans a pair of rows with exactly one occupied row
    strictly inside one of the two cyclic arcs between them.

    Every row of a grid diagram is occupied, so the predicate reduces to a
    column whose two vertices sit at cyclic row distance 2.
    """
    n = d.n
    for c in range(n):
        dist = (d.black[c] - d.white[c]) % n
        if dist == 2 or (n - dist) % n == 2:
            return True
    return False


def _emit_member(d: GridDiagram) -> str:
    return "n={} black={} white={} comp={}".format(
        d.n,
        ",".join(map(str, d.black)),
        ",".join(map(str, d.white)),
        ",".join(map(str, d.comp)))


def _parse_member(line: str, lineno: int) -> GridDiagram:
    try:
        fields = dict(part.split("=", 1) for part in line.split())
        n = int(fields["n"])
        black = tuple(int(x) for x in fields["black"].split(","))
        white = tuple(int(x) for x in fields["white"].split(","))
        comp = tuple(int(x) for x in fields["comp"].split(","))
    except (KeyError, ValueError) as exc:
        raise ValueError(f"line {lineno}: corrupt class member record: {exc}") from exc
    if not (len(black) == len(white) == len(comp) == n):
        raise ValueError(f"line {lineno}: field lengths disagree with n={n}")
    return GridDiagram(black, white, comp)


def store_class(cls: ExchangeClass) -> str:
    lines = [f"members: {len(cls.members)}"]
    lines += [_emit_member(m) for m in cls.members]
    lines.append("edges:")
    lines += [f"{i} {j}" for i, j in sorted(cls.edges)]
    return "\n".join(lines) + "\n"


def load_class(text: str) -> ExchangeClass:
    """Parse a stored class and verify closure and connectivity."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or not lines[0].startswith("members:"):
        raise ValueError("line 1: expected 'members: <count>'")
    count = int(lines[0].split(":")[1])
    members = tuple(_parse_member(lines[1 + i], 2 + i) for i in range(count))
    if lines[1 + count].strip() != "edges:":
        raise ValueError(f"line {2 + count}: expected 'edges:'")
    edges = set()
    for off, ln in enumerate(lines[2 + count:]):
        try:
            i, j = (int(x) for x in ln.split())
        except ValueError as exc:
            raise ValueError(f"line {3 + count + off}: corrupt edge record") from exc
        if not (0 <= i < count and 0 <= j < count):
            raise ValueError(f"line {3 + count + off}: edge index out of range")
        edges.add((min(i, j), max(i, j)))

    index = {m.encoding(): i for i, m in enumerate(members)}
    # closure: every exchange image of every member is a member, and the
    # recorded edges are exactly the adjacency found by replay
    replay_edges = set()
    for i, m in enumerate(members):
        if canonicalize(m).encoding() != m.encoding():
            raise ValueError(f"member {i} is not in canonical form")
        for spec in enumerate_exchanges(m):
            nxt = canonicalize(apply_move(m, spec)).encoding()
            j = index.get(nxt)
            if j is None:
                raise ValueError(f"closure violation: member {i} leaves the stored class")
            if j != i:
                replay_edges.add((min(i, j), max(i, j)))
    if replay_edges != edges:
        raise ValueError("edge list disagrees with replayed adjacency")
    # connectivity
    if members:
        seen = {0}
        stack = [0]
        adj: dict[int, list[int]] = {i: [] for i in range(count)}
        for i, j in edges:
            adj[i].append(j)
            adj[j].append(i)
        while stack:
            cur = stack.pop()
            for nb in adj[cur]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if len(seen) != count:
            raise ValueError("stored class is not connected")
    return ExchangeClass(members=members, edges=frozenset(edges), root=members[0])
