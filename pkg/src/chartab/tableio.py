"""Reading and writing character tables as JSON files.

A table file holds one JSON object:

    {
      "id": "A5",
      "order": 60,
      "centralizers": [60, 4, 3, 5, 5],
      "orders": [1, 2, 3, 5, 5],
      "powerMaps": {"2": [1, 1, 3, 5, 4], ...},
      "irreducibles": [[1, 1, 1, 1, 1], ...],
      "fusions": [{"into": "S5", "map": [1, 2, 3, 4, 4]}]
    }

Conventions:
  * all class indices in files are 1-based;
  * integers beyond 2^63 are written as decimal strings (JSON parsers
    disagree about big number literals) and accepted in either form;
  * character values are integers, rational strings "num/den", or
    cyclotomic objects {"n": conductor, "c": [[exponent, num, den], ...]};
  * fusion map entries are a class index, a list of candidate indices,
    or null for a completely undetermined entry, so partial maps
    survive a round trip.

"powerMaps", "irreducibles" and "fusions" may be absent or empty.
"""

from __future__ import annotations

import json

from .cyclo import (
    decode_cyclotomic,
    decode_int,
    encode_cyclotomic,
    encode_int,
)
from .table import CharacterTable, ClassFunction, FusionRecord


# -- ParaMap entries (0-based in memory, 1-based in files) -------------------


def encode_map(pmap) -> list:
    out = []
    for e in pmap:
        if e is None:
            out.append(None)
        elif isinstance(e, int):
            out.append(e + 1)
        else:
            out.append([j + 1 for j in e])
    return out


def decode_map(entries) -> list:
    out = []
    for e in entries:
        if e is None:
            out.append(None)
        elif isinstance(e, list):
            out.append(tuple(sorted(j - 1 for j in e)))
        else:
            out.append(int(e) - 1)
    return out


# -- table <-> plain dict ----------------------------------------------------


def table_to_dict(t: CharacterTable) -> dict:
    d = {
        "id": t.identifier,
        "order": encode_int(t.order),
        "centralizers": [encode_int(c) for c in t.centralizers],
        "orders": list(t.orders),
    }
    if t.power_maps:
        d["powerMaps"] = {
            str(p): [j + 1 for j in t.power_maps[p]] for p in sorted(t.power_maps)
        }
    if t.irreducibles:
        d["irreducibles"] = [
            [encode_cyclotomic(v) for v in chi] for chi in t.irreducibles
        ]
    if t.fusions:
        d["fusions"] = [
            {"into": rec.into, "map": encode_map(rec.map)} for rec in t.fusions
        ]
    return d


def table_from_dict(d: dict) -> CharacterTable:
    for key in ("id", "order", "centralizers", "orders"):
        if key not in d:
            raise ValueError(f"table object lacks the {key!r} field")
    n = len(d["orders"])
    if len(d["centralizers"]) != n:
        raise ValueError("centralizers and orders have different lengths")
    power_maps = {}
    for p, m in (d.get("powerMaps") or {}).items():
        if len(m) != n:
            raise ValueError(f"power map for {p} has wrong length")
        power_maps[int(p)] = tuple(j - 1 for j in m)
    t = CharacterTable(
        identifier=d["id"],
        order=decode_int(d["order"]),
        centralizers=[decode_int(c) for c in d["centralizers"]],
        orders=[int(o) for o in d["orders"]],
        power_maps=power_maps,
    )
    irr = []
    for row in d.get("irreducibles") or []:
        if len(row) != n:
            raise ValueError("irreducible row has wrong length")
        irr.append(ClassFunction(t, [decode_cyclotomic(v) for v in row]))
    t.irreducibles = tuple(irr)
    for rec in d.get("fusions") or []:
        if len(rec["map"]) != n:
            raise ValueError(f"fusion into {rec['into']!r} has wrong length")
        t.fusions.append(FusionRecord(rec["into"], decode_map(rec["map"])))
    return t


# -- files -------------------------------------------------------------------


def _dumps(d: dict) -> str:
    """One top-level key per line, one row per line inside nested lists."""
    parts = []
    for key, value in d.items():
        if key in ("irreducibles", "fusions"):
            rows = ",\n  ".join(json.dumps(r, separators=(", ", ": ")) for r in value)
            parts.append(f'"{key}": [\n  {rows}\n ]')
        elif key == "powerMaps":
            rows = ",\n  ".join(
                f'"{p}": {json.dumps(m, separators=(", ", ": "))}'
                for p, m in value.items()
            )
            parts.append(f'"{key}": {{\n  {rows}\n }}')
        else:
            parts.append(f'"{key}": {json.dumps(value, separators=(", ", ": "))}')
    return "{\n " + ",\n ".join(parts) + "\n}\n"


def save_table(t: CharacterTable, path) -> None:
    with open(path, "w") as fh:
        fh.write(_dumps(table_to_dict(t)))


def load_table(path) -> CharacterTable:
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as err:
            raise ValueError(f"{path}: not a table file ({err})") from None
    return table_from_dict(d)
