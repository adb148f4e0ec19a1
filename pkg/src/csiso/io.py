"""JSON formats for groups and series.

A group file is ``{"name": str, "order": n, "table": [[int]*n]*n}`` with the
identity at index 0.  A series file is ``{"group": path-or-object, "series":
[[int, ...], ...]}`` listing ``G_1 .. G_m``; ``G_0`` is implied and the last
entry must be ``[0]``.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any

from .cayley import CayleyGroup, GroupError, make_subgroup
from .series import SeriesSpec, validate_series


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def group_to_obj(G: CayleyGroup) -> dict:
    return {"name": G.name, "order": G.order, "table": G.table.tolist()}


def group_from_obj(obj: Any, *, verify: bool = False) -> CayleyGroup:
    if not isinstance(obj, dict):
        raise GroupError("group must be a JSON object")
    for key in ("order", "table"):
        if key not in obj:
            raise GroupError(f"group is missing '{key}'")
    n, table = obj["order"], obj["table"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise GroupError("order must be a positive integer")
    if (not isinstance(table, list) or len(table) != n
            or any(not isinstance(r, list) or len(r) != n for r in table)):
        raise GroupError(f"table must be {n} rows of {n} entries")
    if any(not isinstance(x, int) or isinstance(x, bool) for r in table for x in r):
        raise GroupError("table entries must be integers")
    name = obj.get("name", "")
    if not isinstance(name, str):
        raise GroupError("name must be a string")
    G = CayleyGroup(table, name)
    if verify:
        G.verify()
    return G


def _read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise GroupError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise GroupError(f"{path} is not valid JSON: {exc.msg} at line {exc.lineno}") from None


def fixture_names() -> list[str]:
    root = resources.files("csiso") / "fixtures"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_fixture(name: str) -> CayleyGroup:
    root = resources.files("csiso") / "fixtures"
    f = root / f"{name}.json"
    if not f.is_file():
        raise GroupError(f"no fixture named {name!r}")
    return group_from_obj(json.loads(f.read_text(encoding="utf-8")))


def load_group(path: str | Path, *, verify: bool = False) -> CayleyGroup:
    """Read a group file; a bare fixture name is accepted when no such file exists."""
    p = Path(path)
    if not p.exists() and p.suffix == "" and str(path) in fixture_names():
        G = load_fixture(str(path))
        if verify:
            G.verify()
        return G
    return group_from_obj(_read_json(p), verify=verify)


def series_to_obj(spec: SeriesSpec, group_ref: Any = None) -> dict:
    out: dict[str, Any] = {"series": [list(S.elements) for S in spec.terms[1:]]}
    if group_ref is not None:
        out["group"] = group_ref
    return out


def series_from_obj(obj: Any, G: CayleyGroup | None = None, *, base: Path | None = None,
                    verify: bool = False) -> SeriesSpec:
    """Parse a series object; ``G`` overrides (and must agree with) an embedded group."""
    if not isinstance(obj, dict) or "series" not in obj:
        raise GroupError("series file must be an object with a 'series' list")
    ref = obj.get("group")
    if ref is not None:
        if isinstance(ref, str):
            p = Path(ref)
            if base is not None and not p.is_absolute():
                p = base / p
            embedded = load_group(p if p.exists() else ref, verify=verify)
        else:
            embedded = group_from_obj(ref, verify=verify)
        if G is None:
            G = embedded
        elif G.order != embedded.order or (G.table != embedded.table).any():
            raise GroupError("series file refers to a different group table")
    if G is None:
        raise GroupError("series file names no group")
    sets = obj["series"]
    if not isinstance(sets, list) or not sets:
        raise GroupError("'series' must be a non-empty list")
    if any(not isinstance(s, list) or any(not isinstance(x, int) or isinstance(x, bool) for x in s)
           for s in sets):
        raise GroupError("each series term must be a list of element indices")
    if sorted(set(sets[-1])) != [0]:
        raise GroupError("last series term must be [0]")
    terms = [G.whole]
    for i, s in enumerate(sets, start=1):
        if any(x < 0 or x >= G.order for x in s):
            raise GroupError(f"term {i} has an element index out of range")
        try:
            terms.append(make_subgroup(G, s))
        except GroupError as exc:
            raise GroupError(f"term {i}: {exc}") from None
    spec = SeriesSpec(G, tuple(terms))
    rep = validate_series(spec)
    if not rep.ok:
        raise GroupError(f"invalid series: {rep.problem}")
    return spec


def load_series(path: str | Path, G: CayleyGroup | None = None, *, verify: bool = False) -> SeriesSpec:
    p = Path(path)
    return series_from_obj(_read_json(p), G, base=p.parent, verify=verify)
