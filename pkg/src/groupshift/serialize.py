"""JSON / CSV / PGM / DOT serialization and the run manifest.

All JSON is emitted with sorted keys and a trailing newline so repeated
runs with identical inputs produce byte-identical artifacts.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

from .exact import Quad
from .groups import GroupModel, InputError, IntegerLattice, parse_group_spec
from .lll import BadEvent, LLLInstance, Verdict
from .patterns import WindowConfig


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def quad_to_json(q: Quad):
    if q.is_rational:
        return str(q.a)
    return {"rational": str(q.a), "sqrt2": str(q.b)}


def fraction_from_str(text: str) -> Fraction:
    return Fraction(text)


# --- window configurations ---------------------------------------------

def window_to_json(x: WindowConfig) -> dict:
    return {
        "group": x.group.spec,
        "radius": x.window.radius,
        "alphabet_size": x.alphabet_size,
        "cells": [
            [x.group.element_word(g), x.cells[g]] for g in x.window.members
        ],
    }


def window_from_json(data: dict) -> WindowConfig:
    group = parse_group_spec(data["group"])
    cells = {}
    for word, symbol in data["cells"]:
        cells[group.canonicalize(word)] = symbol
    return WindowConfig(
        group=group,
        radius=data["radius"],
        cells=cells,
        alphabet_size=data["alphabet_size"],
    )


def window_to_csv(x: WindowConfig) -> str:
    """Grid export for Z^2 windows; cells outside the ball are blank."""
    if not isinstance(x.group, IntegerLattice) or x.group.d != 2:
        raise InputError("CSV grid export requires a z^2 window")
    r = x.window.radius
    lines = []
    for j in range(r, -r - 1, -1):
        row = []
        for i in range(-r, r + 1):
            row.append(str(x.cells[(i, j)]) if (i, j) in x.cells else "")
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def window_to_pgm(x: WindowConfig) -> str:
    """Binary-alphabet Z^2 windows as plain PGM; background = 2."""
    if not isinstance(x.group, IntegerLattice) or x.group.d != 2:
        raise InputError("PGM export requires a z^2 window")
    if x.alphabet_size != 2:
        raise InputError("PGM export requires a binary alphabet")
    r = x.window.radius
    side = 2 * r + 1
    rows = [f"P2", f"{side} {side}", "2"]
    for j in range(r, -r - 1, -1):
        rows.append(" ".join(
            str(x.cells.get((i, j), 2)) for i in range(-r, r + 1)
        ))
    return "\n".join(rows) + "\n"


# --- LLL instances and verdicts ----------------------------------------

def weight_to_json(q: Quad):
    return quad_to_json(q)


def weight_from_json(value) -> Quad:
    from .exact import half_power_of_two

    if isinstance(value, str):
        return Quad(Fraction(value))
    if "half_exp" in value:
        return half_power_of_two(value["half_exp"])
    return Quad(Fraction(value["rational"]), Fraction(value["sqrt2"]))


def instance_to_json(inst: LLLInstance) -> dict:
    var_ids = {v: f"v{i}" for i, v in enumerate(inst.variables)}
    return {
        "variables": [
            {"id": var_ids[v], "alphabet": inst.alphabet[v]}
            for v in inst.variables
        ],
        "events": [
            {
                "id": list(e.id),
                "support": [var_ids[v] for v in e.support],
                "probability": quad_to_json(e.probability),
                "weight": quad_to_json(e.weight),
            }
            for e in inst.events
        ],
    }


def instance_from_json(data: dict) -> LLLInstance:
    variables = tuple(v["id"] for v in data["variables"])
    alphabet = {v["id"]: v["alphabet"] for v in data["variables"]}
    events = []
    for e in data["events"]:
        events.append(BadEvent(
            id=tuple(e["id"]),
            support=tuple(e["support"]),
            probability=weight_from_json(e["probability"]),
            weight=weight_from_json(e["weight"]),
            violated=None,
        ))
    return LLLInstance(variables=variables, alphabet=alphabet, events=events)


def verdict_to_json(inst: LLLInstance, verdict: Verdict) -> dict:
    return {
        "holds": verdict.holds,
        "events": [
            {
                "id": list(e.id),
                "probability": quad_to_json(e.probability),
                "weight": quad_to_json(e.weight),
                "margin": quad_to_json(verdict.margins[e.id]),
                "margin_float": float(verdict.margins[e.id]),
                "ok": verdict.margins[e.id].sign() >= 0,
            }
            for e in inst.events
        ],
    }


# --- DOT exports --------------------------------------------------------

def path_to_dot(group: GroupModel, vertices) -> str:
    lines = ["graph witness {"]
    names = {v: f'"{group.element_word(v) or "e"}"' for v in vertices}
    for v in vertices:
        lines.append(f"  {names[v]};")
    for a, b in zip(vertices, vertices[1:]):
        lines.append(f"  {names[a]} -- {names[b]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def forest_to_dot(forest) -> str:
    group = forest.group
    lines = ["digraph forest {", "  rankdir=BT;"]

    def name(n, g):
        return f'"L{n}:{group.element_word(g) or "e"}"'

    for n in range(len(forest.levels)):
        lines.append("  { rank=same; " + " ".join(
            f"{name(n, g)};" for g in forest.levels[n].centers
        ) + " }")
    for n in range(1, len(forest.levels)):
        for child, par in sorted(
            forest.levels[n].parent.items(),
            key=lambda kv: group.canonical_key(kv[0]),
        ):
            lines.append(f"  {name(n - 1, child)} -> {name(n, par)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def forest_to_json(forest) -> dict:
    group = forest.group
    levels = []
    for n, level in enumerate(forest.levels):
        entry = {
            "centers": [group.element_word(g) for g in level.centers],
            "edges": sorted(
                sorted([group.element_word(a), group.element_word(b)])
                for a in level.edges
                for b in level.edges[a]
                if group.canonical_key(a) < group.canonical_key(b)
            ),
        }
        if level.parent is not None:
            entry["parent"] = {
                group.element_word(child) or "": group.element_word(par)
                for child, par in level.parent.items()
            }
        levels.append(entry)
    return {
        "group": group.spec,
        "radius": forest.window.radius,
        "levels": levels,
    }


# --- run manifest -------------------------------------------------------

def sha256_file(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(out_path: Path, argv: list[str], seed, caps: dict,
                   outputs: list[Path], duration: float) -> Path:
    manifest = {
        "argv": argv,
        "seed": seed,
        "caps": caps,
        "outputs": {str(p): sha256_file(p) for p in outputs},
        "duration_s": round(duration, 6),
    }
    path = Path(str(out_path) + ".manifest.json")
    path.write_text(dumps(manifest))
    return path
