"""Command-line surface: analyze, decompose, verify, sweep.

Exit codes: 0 success, 2 validation or parse error, 3 nothing to
decompose (separable input / no applicable case), 4 numerical failure,
1 a verification that ran but FAILed its tolerance.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Any

import numpy as np

from .config import TOL
from .decompose import average_concurrence, decompose
from .documents import (
    StateDocument,
    SweepSpec,
    dump_state,
    load_state,
    load_sweep,
    matrix_document,
    params_from_dict,
    params_to_dict,
)
from .errors import (
    DecompositionError,
    LsdecompError,
    MixedEntangledPart,
    NumericalError,
    ParseError,
    ValidationError,
    WrongDims,
)
from .families import FAMILY_TAGS, is_separable, to_density
from .linalg import DensityMatrix, partial_transpose
from .measures import concurrence_lower_bound_2k, wootters_concurrence
from .oracle import certify, default_sampler, validate

_PROB_VECTOR_KEYS = {"p", "lambdas"}


def _parse_value(text: str):
    if ":" in text:
        return [float(tok) for tok in text.split(":")]
    try:
        return int(text) if text.isdigit() else float(text)
    except ValueError:
        return text


def _parse_params(spec: str) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for item in filter(None, spec.split(",")):
        if "=" not in item:
            raise ParseError(f"expected key=value, got {item!r}")
        key, value = item.split("=", 1)
        out[key.strip()] = _parse_value(value.strip())
    return out


def _load_input(args) -> StateDocument:
    from .families import to_density

    if args.input:
        return load_state(args.input)
    if args.family:
        params = params_from_dict(args.family, _parse_params(args.params or ""))
        return StateDocument(args.family, params, to_density(params))
    raise ParseError("provide either --input FILE or --family TAG [--params ...]")


def _fmt(x: float) -> str:
    return repr(float(x))


def _print(payload: dict[str, Any], fmt: str) -> None:
    if fmt == "structured":
        json.dump(payload, sys.stdout, indent=2, default=str)
        sys.stdout.write("\n")
        return
    for key, value in payload.items():
        if isinstance(value, float):
            value = _fmt(value)
        print(f"{key}: {value}")


def cmd_analyze(args) -> int:
    doc = _load_input(args)
    rho = doc.rho
    payload: dict[str, Any] = {
        "dims": list(rho.dims),
        "trace": float(np.real(rho.mat.trace())),
        "eigenvalues": [float(x) for x in rho.eigenvalues()],
    }
    min_pt = min(
        float(np.linalg.eigvalsh(partial_transpose(rho, k)).min())
        for k in range(len(rho.dims))
    )
    payload["min_partial_transpose_eigenvalue"] = min_pt
    ppt = min_pt >= -TOL.psd
    if tuple(rho.dims) in ((2, 2), (2, 3)):
        payload["ppt_verdict"] = "separable" if ppt else "entangled"
    else:
        payload["ppt_verdict"] = "ppt (inconclusive)" if ppt else "npt (entangled)"
    if tuple(rho.dims) == (2, 2):
        rep = wootters_concurrence(rho)
        payload["concurrence"] = rep.concurrence
        payload["eof_nats"] = rep.eof
        payload["eof_bits"] = rep.eof / np.log(2.0)
    if len(rho.dims) == 2 and rho.dims[0] == 2:
        bound, per_pair = concurrence_lower_bound_2k(rho)
        payload["concurrence_lower_bound"] = bound
        payload["restricted_concurrences"] = [float(c) for c in per_pair]
    if doc.is_family:
        payload["family"] = doc.family
        payload["family_separable"] = is_separable(doc.params)
    _print(payload, args.format)
    return 0


def _decompose_doc(doc: StateDocument, **kwargs):
    from .decompose import decompose_wootters

    if doc.is_family:
        return decompose(doc.params, **kwargs)
    if tuple(doc.rho.dims) == (2, 2):
        return decompose_wootters(doc.rho)
    raise ParseError("explicit matrices are only decomposed for dims [2, 2]")


def cmd_decompose(args) -> int:
    doc = _load_input(args)
    dec = _decompose_doc(doc)
    payload: dict[str, Any] = {
        "family": dec.family,
        "lambda": dec.lambda_,
        "case": dec.record.get("case"),
        "reconstruction_residual": dec.reconstruction_residual(doc.rho),
    }
    try:
        payload["average_concurrence"] = average_concurrence(dec)
    except (MixedEntangledPart, WrongDims):
        payload["average_concurrence"] = None
    for key in ("p_s", "p_e", "lambda_s", "theta_s", "theta_e", "angles_s", "angles_e"):
        if key in dec.record:
            payload[key] = dec.record[key]
    if args.emit:
        os.makedirs(args.emit, exist_ok=True)
        dump_state(matrix_document(dec.rho_s), os.path.join(args.emit, "rho_s.json"))
        dump_state(matrix_document(dec.rho_e), os.path.join(args.emit, "rho_e.json"))
        summary = {
            "lambda": dec.lambda_,
            "family": dec.family,
            "record": json.loads(json.dumps(dec.record, default=str)),
        }
        dump_state(summary, os.path.join(args.emit, "decomposition.json"))
        payload["emitted"] = args.emit
    _print(payload, args.format)
    return 0


def cmd_verify(args) -> int:
    doc = _load_input(args)
    if not doc.is_family:
        raise ParseError("verify needs a family record")
    dec = _decompose_doc(doc)
    sampler = default_sampler(doc.params, points=args.grid)
    cert = certify(doc.rho, sampler)
    val = validate(doc.rho, dec)
    gap = abs(dec.lambda_ - cert.lambda_star)
    ok = (
        gap <= TOL.oracle
        and val.reconstruction_residual <= TOL.reconstruction
        and val.psd_margin_e >= -TOL.psd
        and val.ppt_margin_s >= -TOL.boundary
        and val.segment_npt is not False
    )
    payload = {
        "family": doc.family,
        "closed_form_lambda": dec.lambda_,
        "oracle_lambda": cert.lambda_star,
        "gap": gap,
        "oracle_samples": cert.samples,
        "reconstruction_residual": val.reconstruction_residual,
        "psd_margin_e": val.psd_margin_e,
        "ppt_margin_s": val.ppt_margin_s,
        "segment_npt": val.segment_npt,
        "verdict": "PASS" if ok else "FAIL",
    }
    _print(payload, args.format)
    return 0 if ok else 1


_CSV_HEADER = [
    "family",
    "swept_param",
    "param_value",
    "separable",
    "concurrence",
    "lower_bound",
    "lambda",
    "avg_concurrence",
    "case",
    "error",
]


def _sweep_spec_from_args(args) -> SweepSpec:
    if args.input:
        try:
            with open(args.input, encoding="utf-8") as fh:
                return load_sweep(json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read sweep spec {args.input}: {exc}") from exc
    if not args.family:
        raise ParseError("sweep needs --input SPEC or --family with a ranged --params")
    fixed = _parse_params(args.params or "")
    ranged = {
        k: v for k, v in fixed.items() if isinstance(v, list) and len(v) == 3
    }
    if len(ranged) != 1:
        raise ParseError(
            "mark exactly one swept parameter as start:stop:steps inside --params"
        )
    key, (start, stop, steps) = next(iter(ranged.items()))
    del fixed[key]
    return load_sweep(
        {
            "family": args.family,
            "param": key,
            "start": start,
            "stop": stop,
            "steps": int(steps),
            "fixed": fixed,
        }
    )


def _vector_template(spec: SweepSpec) -> tuple[str, int] | None:
    """Detect swept components like p1/lambda2 inside a probability vector."""
    for key in _PROB_VECTOR_KEYS:
        prefix = key.rstrip("s")  # p -> p1..p6, lambdas -> lambda1..lambda4
        if spec.param.startswith(prefix) and spec.param[len(prefix):].isdigit():
            return key, int(spec.param[len(prefix):]) - 1
    return None


def _params_at(spec: SweepSpec, value: float):
    fixed = dict(spec.fixed)
    vector = _vector_template(spec)
    if vector is None:
        fixed[spec.param] = value
        return params_from_dict(spec.family, fixed)
    key, idx = vector
    size = {"bd22": 4, "icd": 4, "bd23": 6, "locc1": 4, "locc3": 4}.get(spec.family)
    if size is None:
        raise ParseError(f"family {spec.family!r} has no vector parameter {key!r}")
    base = np.asarray(fixed.get(key, np.full(size, (1.0 - value) / (size - 1))), float)
    if base.shape != (size,):
        raise ParseError(f"fixed {key} must have {size} entries")
    rest = np.delete(base, idx)
    total = rest.sum()
    scaled = rest * ((1.0 - value) / total) if total > 0 else np.full(
        size - 1, (1.0 - value) / (size - 1)
    )
    vec = np.insert(scaled, idx, value)
    fixed[key] = vec.tolist()
    return params_from_dict(spec.family, fixed)


def _sweep_row(spec: SweepSpec, value: float) -> list[str]:
    from .families import Horodecki33Params, entanglement_class_33

    row = {k: "" for k in _CSV_HEADER}
    row["family"] = spec.family
    row["swept_param"] = spec.param
    row["param_value"] = _fmt(value)
    try:
        params = _params_at(spec, value)
        rho = to_density(params)
        row["separable"] = str(is_separable(params)).lower()
        if tuple(rho.dims) == (2, 2):
            row["concurrence"] = _fmt(wootters_concurrence(rho).concurrence)
        if len(rho.dims) == 2 and rho.dims[0] == 2:
            row["lower_bound"] = _fmt(concurrence_lower_bound_2k(rho)[0])
        if isinstance(params, Horodecki33Params):
            row["case"] = entanglement_class_33(params.alpha).value
        try:
            dec = decompose(params)
            row["lambda"] = _fmt(dec.lambda_)
            if not isinstance(params, Horodecki33Params):
                row["case"] = str(dec.record.get("case", ""))
            try:
                row["avg_concurrence"] = _fmt(average_concurrence(dec))
            except (MixedEntangledPart, WrongDims):
                pass
        except DecompositionError as exc:
            row["error"] = f"{type(exc).__name__}"
    except LsdecompError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return [row[k] for k in _CSV_HEADER]


def cmd_sweep(args) -> int:
    spec = _sweep_spec_from_args(args)
    rows = [_sweep_row(spec, float(v)) for v in spec.values()]
    out = args.out or "-"
    if out == "-":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(_CSV_HEADER)
        writer.writerows(rows)
    else:
        with open(out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(_CSV_HEADER)
            writer.writerows(rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lsdecomp",
        description="Entanglement measures and optimal Lewenstein-Sanpera decompositions",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (
        ("analyze", cmd_analyze),
        ("decompose", cmd_decompose),
        ("verify", cmd_verify),
        ("sweep", cmd_sweep),
    ):
        p = sub.add_parser(name)
        p.add_argument("--input", help="path to a state (or sweep) document")
        p.add_argument("--family", help="family tag, e.g. bd22, icd, werner")
        p.add_argument(
            "--params",
            help="comma-separated key=value pairs; list values use colons, "
            "e.g. p=0.7:0.1:0.1:0.1",
        )
        p.add_argument("--emit", help="directory for emitted matrices (decompose)")
        p.add_argument("--grid", type=int, help="oracle grid points per free parameter")
        p.add_argument("--out", help="output path (sweep CSV); '-' for stdout")
        p.add_argument(
            "--format", choices=("text", "structured"), default="text",
            help="text key/value lines or structured JSON",
        )
        p.set_defaults(fn=fn)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DecompositionError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
