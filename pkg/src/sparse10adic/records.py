"""JSON persistence of run records.

Big integers are written as decimal strings.  The payload holds no
timestamps, so equal runs serialize to equal bytes.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Union

from .greedy_engine import RunRecord, replay_states
from .residue_core import ExponentClass

SCHEMA_VERSION = 1


class RecordFormatError(ValueError):
    pass


def to_json_obj(r: RunRecord) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "p1": r.p1,
        "digits": [{"b": b, "d": d} for b, d in r.digits],
        "gaps": list(r.gaps),
        "classes": [{"residue": str(c.residue), "level": c.level} for c in r.classes],
        "representatives": [str(p) for p in r.chosen_exponents],
        "incomplete": r.incomplete,
        "config": r.config,
    }


def from_json_obj(obj: dict) -> RunRecord:
    try:
        if obj["schema_version"] != SCHEMA_VERSION:
            raise RecordFormatError(f"unsupported schema_version {obj['schema_version']!r}")
        r = RunRecord(
            p1=int(obj["p1"]),
            digits=[(int(x["b"]), int(x["d"])) for x in obj["digits"]],
            gaps=[int(g) for g in obj["gaps"]],
            classes=[ExponentClass(int(c["residue"]), int(c["level"])) for c in obj["classes"]],
            chosen_exponents=[int(p) for p in obj["representatives"]],
            incomplete=bool(obj["incomplete"]),
            config=dict(obj.get("config", {})),
        )
    except RecordFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise RecordFormatError(f"malformed run record: {exc!r}") from exc
    n = len(r.digits)
    if not n or len(r.gaps) != n or len(r.classes) != n or len(r.chosen_exponents) != n:
        raise RecordFormatError("digits, gaps, classes and representatives must have equal, nonzero length")
    return r


def dumps(r: RunRecord) -> str:
    """One top-level field per line, values compact."""
    obj = to_json_obj(r)
    body = ",\n".join(f" {json.dumps(k)}: {json.dumps(v, separators=(',', ':'))}" for k, v in obj.items())
    return "{\n" + body + "\n}\n"


def dump(r: RunRecord, path: Union[str, os.PathLike]) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(dumps(r), encoding="utf-8")
    tmp.replace(path)


def loads(text: str) -> RunRecord:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RecordFormatError(f"not JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise RecordFormatError("run record must be a JSON object")
    return from_json_obj(obj)


def load(path: Union[str, os.PathLike]) -> RunRecord:
    return loads(Path(path).read_text(encoding="utf-8"))


def with_states(r: RunRecord) -> RunRecord:
    """Attach replayed snapshot states to a loaded record."""
    if not r.states:
        r.states = replay_states(r.p1, r.digits, r.classes)
    return r
