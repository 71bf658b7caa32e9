"""Problem-file ingestion and the bundled verification corpus.

Problems are JSON with all numbers as exact rational strings ("3", "-2/7",
"0.25"); unknown fields are rejected.  The machine-readable schema ships with
the package (schema/problem.schema.json) and parsing validates against it
before any semantic checks.
"""

from __future__ import annotations

import hashlib
import importlib.resources
import json
from dataclasses import dataclass, field

import jsonschema

from .anf import (
    AbsNormalProgram,
    ProgramError,
    QuadraticFunc,
    quadratic_from_strings,
    validate,
)
from .cones import PolyCone
from .ratmath import Vec, vec

EXPECTED_KEYS = (
    "akq",
    "gkq",
    "mpcc-acq",
    "mpcc-gcq",
    "m-stationary",
    "b-stationary",
)

_NUMBER = {"type": ["string", "integer"]}
_VECTOR = {"type": "array", "items": _NUMBER}
_MATRIX = {"type": "array", "items": _VECTOR}
_FUNC = {
    "type": "object",
    "properties": {"constant": _NUMBER, "linear": _VECTOR, "quadratic": _MATRIX},
    "required": ["linear"],
    "additionalProperties": False,
}
_CONE = {
    "type": "object",
    "properties": {"eq": _MATRIX, "ineq": _MATRIX},
    "additionalProperties": False,
}

PROBLEM_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Abs-normal verification problem",
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "dimensions": {
            "type": "object",
            "properties": {
                "n_t": {"type": "integer", "minimum": 0},
                "s": {"type": "integer", "minimum": 0},
                "m1": {"type": "integer", "minimum": 0},
                "m2": {"type": "integer", "minimum": 0},
            },
            "required": ["n_t", "s", "m1", "m2"],
            "additionalProperties": False,
        },
        "objective": _FUNC,
        "equalities": {"type": "array", "items": _FUNC},
        "inequalities": {"type": "array", "items": _FUNC},
        "switching": {"type": "array", "items": _FUNC},
        "points": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "label": {"type": "string"},
                    "t": _VECTOR,
                    "minimizer": {"type": "boolean"},
                    "expected": {
                        "type": "object",
                        "properties": {
                            key: {"enum": ["holds", "fails", "unknown"]} for key in EXPECTED_KEYS
                        },
                        "additionalProperties": False,
                    },
                },
                "required": ["label", "t"],
                "additionalProperties": False,
            },
        },
        "tangent_annotations": {
            "type": "object",
            "additionalProperties": {"type": "array", "items": _CONE},
        },
    },
    "required": ["name", "dimensions", "objective", "switching"],
    "additionalProperties": False,
}


class ProblemFileError(ValueError):
    pass


@dataclass(frozen=True)
class ProblemPoint:
    label: str
    t: Vec
    minimizer: bool = False
    expected: dict[str, str] = field(default_factory=dict, hash=False)


@dataclass(frozen=True)
class ProblemFile:
    name: str
    description: str
    program: AbsNormalProgram
    points: tuple[ProblemPoint, ...]
    annotations: dict[str, tuple[PolyCone, ...]] = field(hash=False, default_factory=dict)
    digest: str = ""

    def point(self, label_or_coords: str) -> ProblemPoint:
        for p in self.points:
            if p.label == label_or_coords:
                return p
        try:
            coords = vec(label_or_coords.split(","))
        except (ValueError, TypeError) as exc:
            raise ProblemFileError(
                f"no point labeled {label_or_coords!r} and the value does not parse as coordinates"
            ) from exc
        return ProblemPoint(label_or_coords, coords)


def _is_signature_label(label: str, s: int) -> bool:
    if not label.startswith("σ="):
        return False
    signs = label[2:]
    return len(signs) == s and all(ch in "+-" for ch in signs)


def parse_problem_data(data: dict, digest: str = "") -> ProblemFile:
    try:
        jsonschema.validate(data, PROBLEM_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "$" + "".join(f"[{p!r}]" for p in exc.absolute_path)
        raise ProblemFileError(f"schema violation at {path}: {exc.message}") from exc
    dims = data["dimensions"]
    n_t, s, m1, m2 = dims["n_t"], dims["s"], dims["m1"], dims["m2"]
    block = n_t + s

    def build(func_data: dict, dim: int, where: str) -> QuadraticFunc:
        try:
            return quadratic_from_strings(dim, func_data)
        except (ProgramError, ValueError, TypeError) as exc:
            raise ProblemFileError(f"{where}: {exc}") from exc

    program = AbsNormalProgram(
        n_t=n_t,
        s=s,
        m1=m1,
        m2=m2,
        f=build(data["objective"], n_t, "objective"),
        c_e=tuple(build(fd, block, f"equalities[{k}]") for k, fd in enumerate(data.get("equalities", []))),
        c_i=tuple(build(fd, block, f"inequalities[{k}]") for k, fd in enumerate(data.get("inequalities", []))),
        c_z=tuple(build(fd, block, f"switching[{k}]") for k, fd in enumerate(data.get("switching", []))),
    )
    issues = validate(program)
    if issues:
        raise ProblemFileError("invalid program: " + "; ".join(issues))

    points = []
    for k, pd in enumerate(data.get("points", [])):
        t = vec(pd["t"])
        if len(t) != n_t:
            raise ProblemFileError(f"points[{k}]: expected {n_t} coordinates, got {len(t)}")
        points.append(
            ProblemPoint(pd["label"], t, pd.get("minimizer", False), dict(pd.get("expected", {})))
        )

    annotations: dict[str, tuple[PolyCone, ...]] = {}
    for label, pieces in data.get("tangent_annotations", {}).items():
        if not _is_signature_label(label, s):
            raise ProblemFileError(
                f"tangent annotation references unknown branch label {label!r}"
            )
        cones = []
        for j, piece in enumerate(pieces):
            eq = [vec(r) for r in piece.get("eq", [])]
            ineq = [vec(r) for r in piece.get("ineq", [])]
            for r in eq + ineq:
                if len(r) != block:
                    raise ProblemFileError(
                        f"tangent annotation {label}[{j}]: row length {len(r)}, expected {block}"
                    )
            cones.append(PolyCone(block, tuple(eq), tuple(ineq)))
        annotations[label] = tuple(cones)

    return ProblemFile(
        name=data["name"],
        description=data.get("description", ""),
        program=program,
        points=tuple(points),
        annotations=annotations,
        digest=digest,
    )


def parse_problem(path: str) -> ProblemFile:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc}") from exc
    digest = hashlib.sha256(raw).hexdigest()
    try:
        data = json.loads(raw.decode("utf-8"))
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ProblemFileError(f"{path}: top level must be an object")
    try:
        return parse_problem_data(data, digest)
    except ProblemFileError as exc:
        raise ProblemFileError(f"{path}: {exc}") from exc


CORPUS_NAMES = ("E1", "E2", "E3", "E4")


def load_corpus_problem(name: str) -> ProblemFile:
    if name not in CORPUS_NAMES:
        raise ProblemFileError(f"unknown corpus problem {name!r}; available: {', '.join(CORPUS_NAMES)}")
    ref = importlib.resources.files("absnormal") / "corpus" / f"{name}.json"
    raw = ref.read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    return parse_problem_data(json.loads(raw.decode("utf-8")), digest)


def load_corpus() -> list[ProblemFile]:
    return [load_corpus_problem(name) for name in CORPUS_NAMES]
