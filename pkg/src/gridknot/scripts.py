"""Move scripts: parsing, serialization and certification.

A script file holds an initial diagram, an optional allowed-kind mask, the
moves (one JSON object per line, replayed strictly in order against the
running diagram's current integer coordinates) and an optional declared final
diagram.  Fresh half-integer levels are written "k+1/2".

Diagram records are four lines:

    n=<int> components=<int>
    black: r0 r1 ... r(n-1)
    white: r0 r1 ... r(n-1)
    comp: c0 c1 ... c(n-1)

comp holds the component number of the black vertex in each column; the white
vertices inherit by tracing.  Lines starting with '#' are comments.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .diagrams import GridDiagram, canonicalize, equivalent, reflect_vertical, validate
from .invariants import invariant_quad
from .moves import (MoveError, MoveKind, MoveSpec, apply_move, classify,
                    kind_in_mask, parse_mask, reflect_spec)


@dataclass(frozen=True)
class MoveScript:
    initial: GridDiagram
    moves: tuple[MoveSpec, ...]
    declared_final: GridDiagram | None = None
    allowed_kinds: frozenset[str] | None = None


@dataclass(frozen=True)
class StepRecord:
    index: int
    kind: MoveKind
    quad: tuple[int, int, int, int]
    size: int


@dataclass(frozen=True)
class Certificate:
    """Successful verification: per-step kinds, invariant trace, endpoints."""

    initial: GridDiagram
    final: GridDiagram
    steps: tuple[StepRecord, ...]
    mask: frozenset[str] | None

    def kind_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for s in self.steps:
            counts[s.kind.short()] = counts.get(s.kind.short(), 0) + 1
        return counts

    def endpoint_canonical(self) -> GridDiagram:
        return canonicalize(self.final)

    def render(self) -> str:
        lines = [f"steps: {len(self.steps)}"]
        q = invariant_quad(self.initial)
        lines.append(f"  start  n={self.initial.n} (tb+,rot+,tb-,rot-)={q}")
        for s in self.steps:
            lines.append(f"  [{s.index}] {s.kind.short():28s} n={s.size} quad={s.quad}")
        counts = ", ".join(f"{k} x{v}" for k, v in sorted(self.kind_counts().items()))
        lines.append(f"kinds: {counts if counts else '(empty script)'}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Failure:
    """First invalid step (or endpoint/mask problem) of a script."""

    step: int | None
    reason: str

    def render(self) -> str:
        where = "endpoint" if self.step is None else f"step {self.step}"
        return f"FAILED at {where}: {self.reason}\n"


def verify_script(script: MoveScript) -> Certificate | Failure:
    """Replay the script; certify kinds, mask compliance and the endpoint."""
    faults = validate(script.initial)
    if faults:
        return Failure(step=None, reason="initial diagram invalid: " + "; ".join(faults))
    cur = script.initial
    steps: list[StepRecord] = []
    for i, spec in enumerate(script.moves):
        try:
            kind = classify(cur, spec)
            cur = apply_move(cur, spec)
        except MoveError as exc:
            return Failure(step=i, reason=str(exc))
        if script.allowed_kinds is not None and not kind_in_mask(kind, script.allowed_kinds):
            return Failure(step=i, reason=f"{kind.short()} violates mask")
        steps.append(StepRecord(index=i, kind=kind, quad=invariant_quad(cur), size=cur.n))
    if script.declared_final is not None and not equivalent(cur, script.declared_final):
        return Failure(step=None, reason="endpoint differs from declared final diagram")
    return Certificate(initial=script.initial, final=cur, steps=tuple(steps),
                       mask=script.allowed_kinds)


def conjugate_by_reflection(script: MoveScript) -> MoveScript:
    """Conjugate a script by the vertical reflection.

    The result runs from reflect_vertical(initial) to reflect_vertical(final);
    exchanges stay exchanges and every type-II (de)stabilization becomes
    type I and vice versa.
    """
    cert = verify_script(script)
    if isinstance(cert, Failure):
        raise MoveError("cannot conjugate an invalid script: " + cert.render().strip())
    cur = script.initial
    new_moves = []
    for spec in script.moves:
        new_moves.append(reflect_spec(spec, cur.n))
        cur = apply_move(cur, spec)
    mask = script.allowed_kinds
    if mask is not None:
        flipped = {"I": "II", "II": "I"}
        mask = frozenset(flipped.get(m, m) for m in mask)
    return MoveScript(initial=reflect_vertical(script.initial),
                      moves=tuple(new_moves),
                      declared_final=reflect_vertical(cert.final),
                      allowed_kinds=mask)


# ---------------------------------------------------------------- diagram io

def emit_diagram(d: GridDiagram) -> str:
    return ("n={} components={}\n".format(d.n, d.num_components)
            + "black: " + " ".join(map(str, d.black)) + "\n"
            + "white: " + " ".join(map(str, d.white)) + "\n"
            + "comp: " + " ".join(map(str, d.comp)) + "\n")


def _significant_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            out.append((i, line))
    return out


def _parse_diagram_lines(lines: list[tuple[int, str]]) -> GridDiagram:
    if len(lines) != 4:
        raise ValueError("diagram record needs 4 lines "
                         f"(n=.../black:/white:/comp:), got {len(lines)}")
    lineno, header = lines[0]
    m = re.fullmatch(r"n=(\d+)\s+components=(\d+)", header)
    if not m:
        raise ValueError(f"line {lineno}: expected 'n=<int> components=<int>'")
    n, k = int(m.group(1)), int(m.group(2))
    fields = {}
    for lineno, line in lines[1:]:
        name, _, rest = line.partition(":")
        name = name.strip()
        if name not in ("black", "white", "comp") or name in fields:
            raise ValueError(f"line {lineno}: unexpected field {name!r}")
        try:
            fields[name] = tuple(int(x) for x in rest.split())
        except ValueError as exc:
            raise ValueError(f"line {lineno}: non-integer entry in {name!r}") from exc
        if len(fields[name]) != n:
            raise ValueError(f"line {lineno}: {name!r} must list {n} values")
    d = GridDiagram(fields["black"], fields["white"], fields["comp"])
    faults = validate(d)
    if faults:
        raise ValueError("invalid diagram: " + "; ".join(faults))
    if d.num_components != k:
        raise ValueError(f"header declares {k} components, tracing finds {d.num_components}")
    return d


def parse_diagram(text: str) -> GridDiagram:
    return _parse_diagram_lines(_significant_lines(text))


def ingest_atlas(text: str) -> GridDiagram:
    """Read the compact X/O permutation notation; X maps to black, O to white.

        X: 0 1 2 3 4
        O: 2 3 4 0 1
    """
    fields = {}
    for lineno, line in _significant_lines(text):
        name, _, rest = line.partition(":")
        name = name.strip().upper()
        if name not in ("X", "O") or name in fields:
            raise ValueError(f"line {lineno}: expected one 'X:' and one 'O:' line")
        try:
            fields[name] = tuple(int(v) for v in rest.split())
        except ValueError as exc:
            raise ValueError(f"line {lineno}: non-integer entry") from exc
    if set(fields) != {"X", "O"}:
        raise ValueError("need both an X: line and an O: line")
    black, white = fields["X"], fields["O"]
    n = len(black)
    for name, perm in (("X", black), ("O", white)):
        if sorted(perm) != list(range(n)):
            raise ValueError(f"{name} row is not a permutation of 0..{n - 1}")
    d = GridDiagram(black, white, (1,) * n)
    faults = validate(d, check_components=False)
    if faults:
        raise ValueError("invalid diagram: " + "; ".join(faults))
    from .diagrams import trace_components
    return trace_components(d)


# ------------------------------------------------------------------ move io

def _coord_to_json(x: int):
    return x // 2 if x % 2 == 0 else f"{x // 2}+1/2"


def _coord_from_json(v) -> int:
    if isinstance(v, int):
        return 2 * v
    if isinstance(v, str):
        m = re.fullmatch(r"(-?\d+)\+1/2", v.strip())
        if m:
            return 2 * int(m.group(1)) + 1
    raise ValueError(f"bad coordinate {v!r}: expected integer or 'k+1/2'")


def emit_move(spec: MoveSpec) -> str:
    return json.dumps({
        "del": [[_coord_to_json(c), _coord_to_json(r)] for c, r in spec.del_cells],
        "add": [[_coord_to_json(c), _coord_to_json(r)] for c, r in spec.add_cells],
    }, separators=(", ", ": "))


def parse_move(line: str, lineno: int = 0) -> MoveSpec:
    try:
        obj = json.loads(line)
        del_cells = tuple((_coord_from_json(c), _coord_from_json(r)) for c, r in obj["del"])
        add_cells = tuple((_coord_from_json(c), _coord_from_json(r)) for c, r in obj["add"])
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise ValueError(f"line {lineno}: bad move record: {exc}") from exc
    return MoveSpec(del_cells=del_cells, add_cells=add_cells)


# ---------------------------------------------------------------- script io

def emit_script(script: MoveScript) -> str:
    parts = ["[initial]\n" + emit_diagram(script.initial)]
    if script.allowed_kinds is not None:
        parts.append("[mask] " + "+".join(sorted(script.allowed_kinds)) + "\n")
    parts.append("[moves]\n" + "".join(emit_move(m) + "\n" for m in script.moves))
    if script.declared_final is not None:
        parts.append("[final]\n" + emit_diagram(script.declared_final))
    return "".join(parts)


def parse_script(text: str) -> MoveScript:
    sections: dict[str, list[tuple[int, str]]] = {}
    current: str | None = None
    mask_text: str | None = None
    for lineno, line in _significant_lines(text):
        if line.startswith("["):
            m = re.fullmatch(r"\[(\w+)\]\s*(.*)", line)
            if not m:
                raise ValueError(f"line {lineno}: malformed section header")
            current = m.group(1)
            if current == "mask":
                mask_text = m.group(2).strip()
                current = None
            elif current in sections:
                raise ValueError(f"line {lineno}: duplicate section [{current}]")
            else:
                sections[current] = []
            continue
        if current is None:
            raise ValueError(f"line {lineno}: content outside any section")
        sections[current].append((lineno, line))
    if "initial" not in sections:
        raise ValueError("script is missing the [initial] section")
    initial = _parse_diagram_lines(sections["initial"])
    moves = tuple(parse_move(line, lineno) for lineno, line in sections.get("moves", ()))
    final = None
    if "final" in sections:
        final = _parse_diagram_lines(sections["final"])
    mask = parse_mask(mask_text) if mask_text else None
    return MoveScript(initial=initial, moves=moves, declared_final=final,
                      allowed_kinds=mask)
