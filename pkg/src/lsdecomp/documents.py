"""State and sweep documents: a small JSON format for the CLI.

A state document is either a family record

    {"family": "bd22", "params": {"p": [0.7, 0.1, 0.1, 0.1]}}

or an explicit matrix with complex entries as [re, im] pairs, row-major:

    {"dims": [2, 2], "entries": [[1.0, 0.0], [0.0, 0.0], ...]}

A sweep document names one swept parameter and fixes the rest:

    {"family": "isotropic", "param": "F", "start": 0.34, "stop": 1.0,
     "steps": 20, "fixed": {"d": 3}}

Floats are written with ``repr`` (shortest round-trip form), so emitted
documents re-load bit-identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import BadParams, ParseError
from .families import (
    BD22Params,
    BD23Params,
    FamilyState,
    Horodecki33Params,
    ICDParams,
    IsotropicParams,
    Locc1Params,
    Locc3Params,
    MultiIsoParams,
    WernerParams,
)
from .linalg import DensityMatrix

__all__ = [
    "StateDocument",
    "SweepSpec",
    "params_from_dict",
    "params_to_dict",
    "load_state",
    "dump_state",
    "matrix_document",
    "load_sweep",
]

_BUILDERS = {
    "bd22": lambda d: BD22Params(np.asarray(d["p"], float)),
    "icd": lambda d: ICDParams(np.asarray(d["p"], float), float(d["theta"])),
    "bd23": lambda d: BD23Params(np.asarray(d["p"], float)),
    "werner": lambda d: WernerParams(int(d["d"]), float(d["f"])),
    "isotropic": lambda d: IsotropicParams(int(d["d"]), float(d["F"])),
    "locc1": lambda d: Locc1Params(np.asarray(d["lambdas"], float), float(d["theta"])),
    "locc3": lambda d: Locc3Params(
        np.asarray(d["lambdas"], float),
        float(d["theta"]),
        float(d["xi"]),
        float(d["phi"]),
    ),
    "horodecki33": lambda d: Horodecki33Params(float(d["alpha"])),
    "multi_iso": lambda d: MultiIsoParams(int(d["d"]), int(d["n"]), float(d["s"])),
}


def params_from_dict(family: str, params: dict[str, Any]) -> FamilyState:
    if family not in _BUILDERS:
        raise ParseError(f"unknown family tag {family!r}; known: {sorted(_BUILDERS)}")
    try:
        return _BUILDERS[family](params)
    except KeyError as exc:
        raise ParseError(f"family {family!r} is missing parameter {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad parameters for family {family!r}: {exc}") from exc


def params_to_dict(params: FamilyState) -> dict[str, Any]:
    if isinstance(params, BD22Params):
        return {"p": params.p.tolist()}
    if isinstance(params, ICDParams):
        return {"p": params.p.tolist(), "theta": params.theta}
    if isinstance(params, BD23Params):
        return {"p": params.p.tolist()}
    if isinstance(params, WernerParams):
        return {"d": params.d, "f": params.f}
    if isinstance(params, IsotropicParams):
        return {"d": params.d, "F": params.big_f}
    if isinstance(params, Locc1Params):
        return {"lambdas": params.lambdas.tolist(), "theta": params.theta}
    if isinstance(params, Locc3Params):
        return {
            "lambdas": params.lambdas.tolist(),
            "theta": params.theta,
            "xi": params.xi,
            "phi": params.phi,
        }
    if isinstance(params, Horodecki33Params):
        return {"alpha": params.alpha}
    if isinstance(params, MultiIsoParams):
        return {"d": params.d, "n": params.n, "s": params.s}
    raise BadParams(f"unknown family record {type(params).__name__}")


@dataclass(frozen=True)
class StateDocument:
    """Either a family record or an explicit validated matrix."""

    family: str | None
    params: FamilyState | None
    rho: DensityMatrix

    @property
    def is_family(self) -> bool:
        return self.params is not None


def _state_from_payload(doc: dict[str, Any]) -> StateDocument:
    from .families import FAMILY_TAGS, to_density

    if "family" in doc:
        params = params_from_dict(doc["family"], doc.get("params", {}))
        return StateDocument(FAMILY_TAGS[type(params)], params, to_density(params))
    if "dims" in doc and "entries" in doc:
        dims = [int(d) for d in doc["dims"]]
        total = int(np.prod(dims))
        entries = doc["entries"]
        if len(entries) != total * total:
            raise ParseError(
                f"expected {total * total} entries for dims {dims}, got {len(entries)}"
            )
        flat = np.array([complex(re, im) for re, im in entries])
        return StateDocument(None, None, DensityMatrix(dims, flat.reshape(total, total)))
    raise ParseError("state document needs either 'family' or 'dims' + 'entries'")


def load_state(path: str) -> StateDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read state document {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("state document must be a JSON object")
    return _state_from_payload(doc)


def matrix_document(rho: DensityMatrix) -> dict[str, Any]:
    entries = [[float(z.real), float(z.imag)] for z in rho.mat.reshape(-1)]
    return {"dims": list(rho.dims), "entries": entries}


def dump_state(doc: dict[str, Any], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


@dataclass(frozen=True)
class SweepSpec:
    family: str
    param: str
    start: float
    stop: float
    steps: int
    fixed: dict[str, Any]

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


def load_sweep(payload: dict[str, Any]) -> SweepSpec:
    try:
        spec = SweepSpec(
            family=str(payload["family"]),
            param=str(payload["param"]),
            start=float(payload["start"]),
            stop=float(payload["stop"]),
            steps=int(payload["steps"]),
            fixed=dict(payload.get("fixed", {})),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad sweep specification: {exc}") from exc
    if spec.steps < 2:
        raise ParseError("a sweep needs at least 2 steps")
    if spec.family not in _BUILDERS:
        raise ParseError(f"unknown family tag {spec.family!r}")
    return spec
