"""Input files and deterministic text / JSON rendering of duality reports."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import __version__
from .duality import DualityReport
from .exactalg import Field
from .quotient import SystemConfig
from .wpoly import ParseError, Ring, parse

KEYS = ("modulus", "weights", "vars", "polys")


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class InputFile:
    modulus: int
    weights: tuple[int, ...]
    vars: tuple[str, ...]
    polys: tuple[str, ...]

    def as_dict(self) -> dict:
        return {"modulus": self.modulus, "weights": list(self.weights),
                "vars": list(self.vars), "polys": list(self.polys)}


def read_input(text: str, source: str = "<input>") -> InputFile:
    values: dict = {}
    lines: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InputError(f"{source}:{lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in KEYS:
            raise InputError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise InputError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = json.loads(val.strip())
        except json.JSONDecodeError as exc:
            raise InputError(f"{source}:{lineno}: bad value for {key}: {exc.msg} at offset {exc.pos}") from None
        lines[key] = lineno
    missing = [k for k in KEYS if k not in values]
    if missing:
        raise InputError(f"{source}: missing keys {', '.join(missing)}")
    mod, weights, names, polys = (values[k] for k in KEYS)
    if not isinstance(mod, int) or mod < 0:
        raise InputError(f"{source}:{lines['modulus']}: modulus must be 0 or a prime")
    for key, val, typ in (("weights", weights, int), ("vars", names, str), ("polys", polys, str)):
        if not isinstance(val, list) or not all(isinstance(v, typ) and not isinstance(v, bool) for v in val):
            raise InputError(f"{source}:{lines[key]}: {key} must be a list of {typ.__name__}")
    if len(weights) != len(names):
        raise InputError(f"{source}: {len(weights)} weights for {len(names)} variables")
    return InputFile(mod, tuple(weights), tuple(names), tuple(polys))


def to_system(inp: InputFile, source: str = "<input>") -> SystemConfig:
    try:
        field = Field(inp.modulus)
        ring = Ring.make(inp.weights, inp.vars, field)
    except ValueError as exc:
        raise InputError(f"{source}: {exc}") from None
    polys = []
    for i, text in enumerate(inp.polys):
        try:
            polys.append(parse(text, ring))
        except ParseError as exc:
            raise InputError(f"{source}: polys[{i}] {text!r}: {exc}") from None
    for i, f in enumerate(polys):
        if not f:
            raise InputError(f"{source}: polys[{i}] {inp.polys[i]!r} is zero")
        if f.homogeneous_degree() is None:
            degs = {}
            for m in f.terms:
                degs.setdefault(ring.wdeg(m), []).append(_mono(ring, m))
            detail = "; ".join(f"degree {d}: {', '.join(ms)}" for d, ms in sorted(degs.items()))
            raise InputError(f"{source}: polys[{i}] {inp.polys[i]!r} is inhomogeneous ({detail})")
    try:
        return SystemConfig(ring, tuple(polys))
    except ValueError as exc:
        raise InputError(f"{source}: {exc}") from None


def _mono(ring: Ring, m) -> str:
    parts = [n if e == 1 else f"{n}^{e}" for n, e in zip(ring.names, m) if e]
    return "*".join(parts) or "1"


def load(path) -> tuple[InputFile, SystemConfig]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    inp = read_input(text, str(path))
    return inp, to_system(inp, str(path))


def input_of(cfg: SystemConfig) -> InputFile:
    ring = cfg.ring
    return InputFile(ring.field.modulus, ring.weights, ring.names, tuple(f.format() for f in cfg.polys))


REPORT_SCHEMA = {
    "type": "object",
    "required": ["version", "input", "delta", "certificate", "hilbert", "table", "verdict"],
    "properties": {
        "version": {"type": "string"},
        "input": {
            "type": "object",
            "required": ["modulus", "weights", "vars", "polys", "degrees"],
            "properties": {
                "modulus": {"type": "integer", "minimum": 0},
                "weights": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                "vars": {"type": "array", "items": {"type": "string"}},
                "polys": {"type": "array", "items": {"type": "string"}},
                "degrees": {"type": "array", "items": {"type": "integer", "minimum": 1}},
            },
        },
        "delta": {"type": "integer"},
        "certificate": {
            "type": "object",
            "required": ["status", "s0", "search_bound"],
            "properties": {
                "status": {"type": "string"},
                "s0": {"type": ["integer", "null"]},
                "search_bound": {"type": "integer"},
            },
        },
        "hilbert": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "morley_form": {"type": "array", "items": {"type": "string"}},
        "lambda_form": {"type": "array", "items": {"type": "string"}},
        "lemmas": {"type": "object", "additionalProperties": {"type": "boolean"}},
        "torsion_method": {"type": ["string", "null"]},
        "window": {"type": "object", "properties": {"slack": {"type": "integer"}, "top": {"type": "integer"}}},
        "table": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["nu", "dimB_dual", "dimH", "dimTorsion", "rankOmega", "pairingRank", "verdict"],
                "properties": {
                    "nu": {"type": "integer"},
                    "dimB_dual": {"type": "integer"},
                    "dimH": {"type": "integer"},
                    "dimTorsion": {"type": ["integer", "null"]},
                    "rankOmega": {"type": ["integer", "null"]},
                    "pairingRank": {"type": ["integer", "null"]},
                    "verdict": {"enum": ["iso", "zero", "mismatch", "unverified"]},
                },
                "additionalProperties": False,
            },
        },
        "notes": {"type": "array", "items": {"type": "string"}},
        "verdict": {"enum": ["DUALITY VERIFIED", "DUALITY MISMATCH", "NOT CERTIFIED"]},
    },
}


def report_dict(rep: DualityReport, inp: Optional[InputFile] = None) -> dict:
    inp = inp or input_of(rep.cfg)
    echo = inp.as_dict()
    echo["degrees"] = list(rep.cfg.degrees)
    return {
        "version": __version__,
        "input": echo,
        "delta": rep.delta,
        "certificate": {"status": rep.certificate_status, "s0": rep.s0, "search_bound": rep.search_bound},
        "hilbert": list(rep.hilbert),
        "morley_form": list(rep.morley_terms),
        "lambda_form": list(rep.lambda_terms),
        "lemmas": dict(rep.lemmas),
        "torsion_method": rep.torsion_method,
        "window": {"slack": rep.slack, "top": rep.window_top},
        "table": [row.as_dict() for row in rep.rows],
        "notes": list(rep.notes),
        "verdict": rep.verdict,
    }


def report_json(rep: DualityReport, inp: Optional[InputFile] = None) -> str:
    return json.dumps(report_dict(rep, inp), indent=2, ensure_ascii=False) + "\n"


def validate(doc: dict) -> None:
    import jsonschema
    jsonschema.validate(doc, REPORT_SCHEMA)


COLUMNS = ("nu", "dimB_dual", "dimH", "dimTorsion", "rankOmega", "pairingRank", "verdict")


def report_text(rep: DualityReport, inp: Optional[InputFile] = None) -> str:
    doc = report_dict(rep, inp)
    i = doc["input"]
    cert = doc["certificate"]
    out = [f"morleyduality {doc['version']}",
           f"field: {Field(i['modulus'])}  weights: {i['weights']}  vars: {', '.join(i['vars'])}",
           "polys: " + "; ".join(i["polys"]),
           f"n={rep.cfg.n} r={rep.cfg.r} degrees={i['degrees']} delta={doc['delta']}"]
    if rep.certified:
        out.append(f"certificate: certified, B vanishes from degree {cert['s0']} "
                   f"(finite-dimensional B, so depth_I(C) = n)")
    else:
        out.append(f"certificate: {cert['status']} (search bound {cert['search_bound']})")
    out.append(f"hilbert: {doc['hilbert']}")
    out.append("Delta:")
    out += [f"  {t}" for t in doc["morley_form"]] or ["  0"]
    out.append("Lambda:")
    out += [f"  {t}" for t in doc["lambda_form"]] or ["  0"]
    out.append("lemmas: " + " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in doc["lemmas"].items()))
    if doc["torsion_method"]:
        out.append(f"torsion: {doc['torsion_method']}")
    out.append(f"window: [0, {doc['window']['top']}] (slack {doc['window']['slack']})")
    table = [COLUMNS] + [tuple("-" if row[c] is None else str(row[c]) for c in COLUMNS) for row in doc["table"]]
    widths = [max(len(r[k]) for r in table) for k in range(len(COLUMNS))]
    for r in table:
        out.append("  ".join(cell.rjust(w) for cell, w in zip(r, widths)).rstrip())
    for note in doc["notes"]:
        out.append(f"note: {note}")
    out.append(f"verdict: {doc['verdict']}")
    return "\n".join(out) + "\n"
