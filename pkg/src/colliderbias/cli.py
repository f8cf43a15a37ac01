"""Command-line front end.

Five subcommands: ``compute`` (closed-form bias plus oracle cross-check),
``sign`` (qualitative analysis), ``verify`` (randomized identity fuzzing),
``sample`` (Monte Carlo sanity channel) and ``grid`` (sign-region export).

Exit codes are a stable contract: 0 success, 1 an identity or tolerance
check failed, 2 malformed input.  Machine-readable output (json, and csv
for grids) round-trips through the parsers in this module.  Set
``COLLIDER_BIAS_LOG`` to a level name (debug/info/...) for diagnostics on
stderr.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import math
import os
import sys

import numpy as np

from . import __version__
from .closedform import (
    extended_stratum_bias,
    lm_bias,
    nabla_or_bias_factor,
    v_stratum_bias,
    y_stratum_bias,
)
from .errors import ColliderBiasError, ParameterError
from .joint import bias as oracle_bias
from .joint import build_joint, sample
from .signmap import (
    GridFamily,
    GridFixed,
    SignGrid,
    ZeroLocus,
    classify_effects,
    extended_sign,
    v_stratum_sign,
)
from .structures import (
    LINEAR_MODEL,
    BiasQuery,
    EdgeCpt,
    Scale,
    Sign,
    Stratum,
    StructureKind,
    StructureParams,
    params_from_dict,
)
from .verification import (
    DEFAULT_ABS_TOL,
    DEFAULT_REL_TOL_OR,
    KindVerification,
    verify_many,
)

log = logging.getLogger("colliderbias")

_KIND_CHOICES = [kind.value for kind in StructureKind]


def _configure_logging() -> None:
    level_name = os.environ.get("COLLIDER_BIAS_LOG", "").strip()
    if not level_name:
        return
    level = getattr(logging, level_name.upper(), None)
    if isinstance(level, int):
        logging.basicConfig(stream=sys.stderr, level=level,
                            format="%(levelname)s %(name)s: %(message)s")


# ---------------------------------------------------------------------------
# parameter ingestion: config file fields overridden by inline flags


def _parse_keyed_floats(text: str, keys: tuple[str, ...], flag: str) -> dict[str, float]:
    out: dict[str, float] = {}
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        key, sep, value = chunk.partition("=")
        if not sep:
            raise ParameterError(f"{flag}: expected key=value entries, got {chunk!r}")
        key = key.strip()
        if key not in keys:
            raise ParameterError(f"{flag}: unknown key {key!r} (expected {'/'.join(keys)})")
        if key in out:
            raise ParameterError(f"{flag}: duplicate key {key!r}")
        try:
            out[key] = float(value)
        except ValueError:
            raise ParameterError(f"{flag}: {value!r} is not a number") from None
    missing = [key for key in keys if key not in out]
    if missing:
        raise ParameterError(f"{flag}: missing key {missing[0]!r}")
    return out


def _add_params_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("structure parameters")
    group.add_argument("--kind", choices=_KIND_CHOICES, help="structure kind")
    group.add_argument("--file", help="JSON parameter file; flags override its fields")
    group.add_argument("--p-left", type=float, help="P(left cause = 1)")
    group.add_argument("--p-right", type=float, help="P(right cause = 1)")
    group.add_argument("--p-c-given", metavar="00=F,01=F,10=F,11=F",
                       help="collider table, keyed (left,right)")
    group.add_argument("--p-x-given-a", metavar="0=F,1=F", help="P(X=1 | A=a)")
    group.add_argument("--p-y-given-b", metavar="0=F,1=F",
                       help="P(Y=1 | B=b); for Nabla, P(Y=1 | X=x)")
    group.add_argument("--p-d-given-c", metavar="0=F,1=F", help="P(D=1 | C=c)")


def _params_from_args(args: argparse.Namespace) -> StructureParams:
    doc: dict = {}
    if args.file:
        try:
            with open(args.file, "r", encoding="utf-8") as handle:
                doc = json.load(handle)
        except OSError as exc:
            raise ParameterError(f"cannot read {args.file}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ParameterError(f"{args.file} is not valid JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise ParameterError(f"{args.file} must contain a JSON object")
    if args.kind:
        doc["kind"] = args.kind
    if args.p_left is not None:
        doc["p_left"] = args.p_left
    if args.p_right is not None:
        doc["p_right"] = args.p_right
    if args.p_c_given:
        doc["p_c_given"] = _parse_keyed_floats(
            args.p_c_given, ("00", "01", "10", "11"), "--p-c-given"
        )
    for flag, field_name in (
        ("p_x_given_a", "p_x_given_a"),
        ("p_y_given_b", "p_y_given_b"),
        ("p_d_given_c", "p_d_given_c"),
    ):
        raw = getattr(args, flag)
        if raw:
            doc[field_name] = _parse_keyed_floats(raw, ("0", "1"), "--" + flag.replace("_", "-"))
    return params_from_dict(doc)


def _parse_stratum(text: str) -> Stratum:
    variable, sep, level = text.partition("=")
    if not sep or variable not in ("C", "D") or level not in ("0", "1"):
        raise ParameterError(f"--stratum must look like C=1 or D=0, got {text!r}")
    return Stratum(variable, int(level))


def _emit(args: argparse.Namespace, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _json_default(obj):
    if isinstance(obj, (Sign, Scale, StructureKind, GridFamily)):
        return obj.value if not isinstance(obj, Sign) else obj.label
    raise TypeError(f"not serializable: {obj!r}")


def _dump_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, default=_json_default) + "\n"


# ---------------------------------------------------------------------------
# compute


def _closed_form_report(params: StructureParams, query: BiasQuery):
    """The applicable closed-form evaluator, or None when only the oracle
    serves this query (rr everywhere; or for extended kinds; everything but
    the or factor for Nabla)."""
    kind = params.kind
    if isinstance(query.conditioning, Stratum):
        level = query.conditioning.level
        scale = query.scale
        if kind is StructureKind.V:
            return v_stratum_bias(params, level, scale) if scale is not Scale.RR else None
        if kind is StructureKind.NABLA:
            return nabla_or_bias_factor(params, level) if scale is Scale.OR else None
        if kind is StructureKind.Y:
            return y_stratum_bias(params, level, scale) if scale is not Scale.RR else None
        if scale in (Scale.COV, Scale.RD):
            return extended_stratum_bias(params, level, scale)
        return None
    if kind is StructureKind.NABLA:
        return None
    return lm_bias(params)


def cmd_compute(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    if args.lm and args.stratum:
        raise ParameterError("--stratum and --lm are mutually exclusive")
    if args.lm:
        query = BiasQuery(LINEAR_MODEL)
    elif args.stratum:
        query = BiasQuery(_parse_stratum(args.stratum), Scale(args.scale))
    else:
        raise ParameterError("compute needs either --stratum VAR=LEVEL or --lm")
    query.check_valid_for(params.kind)

    table = build_joint(params)
    oracle = oracle_bias(table, query)
    report = _closed_form_report(params, query)

    ratio_scale = oracle.scale in (Scale.RR, Scale.OR)
    tolerance = args.tolerance
    if tolerance is None:
        tolerance = DEFAULT_REL_TOL_OR if ratio_scale else DEFAULT_ABS_TOL
    doc: dict = {
        "command": "compute",
        "kind": params.kind.value,
        "params": params.to_dict(),
        "query": {
            "conditioning": str(query.conditioning),
            "scale": oracle.scale.value,
        },
        "oracle": {"value": oracle.value},
        "closed_form": None,
        "tolerance": tolerance,
        "within_tolerance": True,
    }
    if report is not None:
        abs_disc = abs(report.value - oracle.value)
        rel_disc = abs_disc / max(abs(report.value), abs(oracle.value), 1e-300)
        doc["closed_form"] = {
            "value": report.value,
            "sign": report.sign.label,
            "factors": dict(report.factors),
        }
        doc["abs_discrepancy"] = abs_disc
        doc["rel_discrepancy"] = rel_disc
        doc["within_tolerance"] = (rel_disc if ratio_scale else abs_disc) <= tolerance

    if args.format == "json":
        _emit(args, _dump_json(doc))
    else:
        lines = [
            f"kind:        {params.kind.value}",
            f"query:       {doc['query']['conditioning']} on scale {doc['query']['scale']}",
            f"oracle:      {oracle.value!r}",
        ]
        if report is None:
            lines.append("closed form: none for this query (oracle value is authoritative)")
        else:
            lines.append(f"closed form: {report.value!r} (sign {report.sign.label})")
            for name in sorted(report.factors):
                lines.append(f"  factor {name} = {report.factors[name]!r}")
            lines.append(
                f"discrepancy: abs {doc['abs_discrepancy']:.3e}"
                f" rel {doc['rel_discrepancy']:.3e}"
                f" (tolerance {tolerance:g}:"
                f" {'ok' if doc['within_tolerance'] else 'EXCEEDED'})"
            )
        _emit(args, "\n".join(lines) + "\n")
    return 0 if doc["within_tolerance"] else 1


# ---------------------------------------------------------------------------
# sign


def cmd_sign(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    kind = params.kind
    effects = classify_effects(params.p_c_given)
    doc: dict = {
        "command": "sign",
        "kind": kind.value,
        "params": params.to_dict(),
        "pattern": effects.pattern.value,
        "canonical_level": effects.canonical_level,
        "interactions": {
            "rr_canonical": effects.rr_interaction_canonical.label,
            "rr_other": effects.rr_interaction_other.label,
            "or": effects.or_interaction.label,
            "rd": effects.rd_interaction.label,
        },
    }
    variable = kind.conditioning_variable
    if kind is StructureKind.NABLA:
        doc["stratum_signs"] = {
            f"C={level}": v_stratum_sign(params.p_c_given, level).label for level in (0, 1)
        }
        doc["note"] = "stratum signs apply to the odds-ratio scale only"
    else:
        doc["stratum_signs"] = {
            f"{variable}={level}": extended_sign(params, Stratum(variable, level)).label
            for level in (0, 1)
        }
        doc["lm_sign"] = extended_sign(params, LINEAR_MODEL).label

    if args.format == "json":
        _emit(args, _dump_json(doc))
    else:
        lines = [
            f"kind:            {kind.value}",
            f"effect pattern:  {doc['pattern']} (canonical level {doc['canonical_level']})",
            "interactions:    "
            + ", ".join(f"{k}={v}" for k, v in doc["interactions"].items()),
        ]
        for name, value in doc["stratum_signs"].items():
            lines.append(f"bias sign {name}:  {value}")
        if "lm_sign" in doc:
            lines.append(f"bias sign lm:    {doc['lm_sign']}")
        if "note" in doc:
            lines.append(f"note: {doc['note']}")
        _emit(args, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# verify


def _verification_doc(runs: list[KindVerification]) -> dict:
    return {
        "command": "verify",
        "runs": [
            {
                "kind": run.kind.value,
                "draws": run.draws,
                "seed": run.seed,
                "passed": run.passed,
                "identities": [
                    {
                        "name": result.name,
                        "checked": result.checked,
                        "max_discrepancy": result.max_discrepancy,
                        "tolerance": result.tolerance,
                        "failures": result.failures,
                    }
                    for result in sorted(run.identities, key=lambda r: r.name)
                ],
            }
            for run in runs
        ],
        "passed": all(run.passed for run in runs),
    }


def cmd_verify(args: argparse.Namespace) -> int:
    if args.all:
        kinds = list(StructureKind)
    elif args.kind:
        kinds = [StructureKind(args.kind)]
    else:
        raise ParameterError("verify needs --kind KIND or --all")
    if args.draws < 1:
        raise ParameterError(f"--draws must be >= 1, got {args.draws}")
    abs_tol = args.tolerance if args.tolerance is not None else DEFAULT_ABS_TOL
    runs = verify_many(kinds, draws=args.draws, seed=args.seed, abs_tol=abs_tol)
    doc = _verification_doc(runs)

    if args.format == "json":
        _emit(args, _dump_json(doc))
    else:
        lines = []
        for run in doc["runs"]:
            lines.append(
                f"{run['kind']}: draws={run['draws']} seed={run['seed']} "
                f"{'pass' if run['passed'] else 'FAIL'}"
            )
            for result in run["identities"]:
                lines.append(
                    f"  {result['name']:<34s} checked={result['checked']:<6d} "
                    f"max={result['max_discrepancy']:.3e} "
                    f"tol={result['tolerance']:.0e} "
                    f"{'ok' if result['failures'] == 0 else 'FAIL(' + str(result['failures']) + ')'}"
                )
        lines.append("overall: " + ("pass" if doc["passed"] else "FAIL"))
        _emit(args, "\n".join(lines) + "\n")
    return 0 if doc["passed"] else 1


# ---------------------------------------------------------------------------
# sample


def cmd_sample(args: argparse.Namespace) -> int:
    params = _params_from_args(args)
    if args.draws < 1:
        raise ParameterError(f"--draws must be >= 1, got {args.draws}")
    table = build_joint(params)
    freq = sample(params, args.draws, args.seed)
    exact = table.mass
    observed = freq.frequencies
    max_abs = float(np.max(np.abs(observed - exact)))
    # Per-cell standard error is at most 0.5/sqrt(n); five of those is a
    # generous smoke bound, not a statistical test.
    bound = 5 * 0.5 / math.sqrt(args.draws)
    doc = {
        "command": "sample",
        "kind": params.kind.value,
        "order": list(freq.order),
        "draws": args.draws,
        "seed": args.seed,
        "cells": [
            {
                "assignment": format(i, f"0{len(freq.order)}b"),
                "exact": float(exact[i]),
                "observed": float(observed[i]),
            }
            for i in range(exact.shape[0])
        ],
        "max_abs_deviation": max_abs,
        "smoke_bound": bound,
        "within_bound": max_abs <= bound,
    }
    if args.format == "json":
        _emit(args, _dump_json(doc))
    else:
        header = "".join(freq.order)
        lines = [f"{header}  exact       observed    |diff|"]
        for cell in doc["cells"]:
            diff = abs(cell["observed"] - cell["exact"])
            lines.append(
                f"{cell['assignment']}  {cell['exact']:.8f}  {cell['observed']:.8f}  {diff:.2e}"
            )
        lines.append(
            f"max |observed - exact| = {max_abs:.3e}"
            f" (smoke bound {bound:.3e}: {'ok' if doc['within_bound'] else 'EXCEEDED'})"
        )
        _emit(args, "\n".join(lines) + "\n")
    return 0 if doc["within_bound"] else 1


# ---------------------------------------------------------------------------
# grid


def grid_to_csv(grid: SignGrid) -> str:
    """Deterministic CSV rendering: '#'-prefixed metadata lines, then one
    row per cell."""
    out = io.StringIO()
    out.write(f"# family={grid.family.value}\n")
    out.write(f"# resolution={grid.resolution}\n")
    for name, value in grid.fixed.items():
        out.write(f"# {name}={value!r}\n")
    for locus in grid.zero_loci:
        coeffs = " ".join(f"{k}={v!r}" for k, v in locus.coefficients)
        out.write(f"# zero_locus name={locus.name} curve={locus.curve} {coeffs}\n")
    out.write("p10,p01," + ",".join(grid.columns) + "\n")
    for i in range(grid.resolution):
        p10 = repr(float(grid.axis[i]))
        for j in range(grid.resolution):
            row = [p10, repr(float(grid.axis[j]))]
            row.extend(str(int(v)) for v in grid.cells[i, j])
            out.write(",".join(row) + "\n")
    return out.getvalue()


def parse_grid_csv(text: str) -> SignGrid:
    """Parse :func:`grid_to_csv` output back into a SignGrid."""
    meta: dict[str, str] = {}
    loci: list[ZeroLocus] = []
    rows: list[list[str]] = []
    columns: tuple[str, ...] | None = None
    for line in text.splitlines():
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("zero_locus "):
                fields = dict(part.split("=", 1) for part in body[len("zero_locus "):].split())
                name = fields.pop("name")
                curve = fields.pop("curve")
                loci.append(
                    ZeroLocus(name, curve, tuple((k, float(v)) for k, v in fields.items()))
                )
            else:
                key, _, value = body.partition("=")
                meta[key] = value
            continue
        if columns is None:
            columns = tuple(line.split(",")[2:])
            continue
        rows.append(line.split(","))
    if columns is None:
        raise ParameterError("grid csv has no header row")
    resolution = int(meta["resolution"])
    d_cpt = None
    if "p_d_given_c[0]" in meta:
        d_cpt = EdgeCpt(given_0=float(meta["p_d_given_c[0]"]), given_1=float(meta["p_d_given_c[1]"]))
    fixed = GridFixed(
        p_c00=float(meta["p_c00"]),
        p_c11=float(meta["p_c11"]),
        p_left=float(meta["p_left"]),
        p_right=float(meta["p_right"]),
        p_d_given_c=d_cpt,
    )
    axis = (np.arange(resolution) + 0.5) / resolution
    cells = np.zeros((resolution, resolution, len(columns)), dtype=np.int8)
    if len(rows) != resolution * resolution:
        raise ParameterError(
            f"grid csv has {len(rows)} rows, expected {resolution * resolution}"
        )
    for index, row in enumerate(rows):
        i, j = divmod(index, resolution)
        cells[i, j] = [int(v) for v in row[2:]]
    cells.setflags(write=False)
    return SignGrid(
        family=GridFamily(meta["family"]),
        fixed=fixed,
        resolution=resolution,
        axis=axis,
        columns=columns,
        cells=cells,
        zero_loci=tuple(loci),
    )


def grid_to_json(grid: SignGrid) -> str:
    doc = {
        "command": "grid",
        "family": grid.family.value,
        "resolution": grid.resolution,
        "fixed": dict(grid.fixed.items()),
        "axis": [float(v) for v in grid.axis],
        "columns": list(grid.columns),
        "cells": grid.cells.tolist(),
        "zero_loci": [
            {"name": locus.name, "curve": locus.curve, "coefficients": dict(locus.coefficients)}
            for locus in grid.zero_loci
        ],
    }
    return _dump_json(doc)


def cmd_grid(args: argparse.Namespace) -> int:
    from .signmap import emit_grid

    d_cpt = None
    if args.p_d_given_c:
        keyed = _parse_keyed_floats(args.p_d_given_c, ("0", "1"), "--p-d-given-c")
        d_cpt = EdgeCpt(given_0=keyed["0"], given_1=keyed["1"])
    fixed = GridFixed(
        p_c00=args.p_c00,
        p_c11=args.p_c11,
        p_left=args.p_left,
        p_right=args.p_right,
        p_d_given_c=d_cpt,
    )
    grid = emit_grid(GridFamily(args.family), fixed, args.resolution)
    if args.format == "json":
        _emit(args, grid_to_json(grid))
    else:
        _emit(args, grid_to_csv(grid))
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="collider-bias",
        description="Exact magnitude and sign of collider bias for binary-variable structures.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="closed-form bias with oracle cross-check")
    _add_params_flags(compute)
    compute.add_argument("--scale", choices=["cov", "rd", "rr", "or"], default="cov")
    compute.add_argument("--stratum", metavar="VAR=LEVEL", help="condition on C=c or D=d")
    compute.add_argument("--lm", action="store_true", help="linear-regression adjustment")
    compute.add_argument("--tolerance", type=float, help="override the discrepancy tolerance")
    compute.add_argument("--format", choices=["text", "json"], default="text")
    compute.add_argument("--out", help="write output to a file instead of stdout")
    compute.set_defaults(func=cmd_compute)

    sign = sub.add_parser("sign", help="qualitative sign analysis")
    _add_params_flags(sign)
    sign.add_argument("--format", choices=["text", "json"], default="text")
    sign.add_argument("--out", help="write output to a file instead of stdout")
    sign.set_defaults(func=cmd_sign)

    verify = sub.add_parser("verify", help="randomized closed-form/oracle identity checks")
    verify_target = verify.add_mutually_exclusive_group()
    verify_target.add_argument("--kind", choices=_KIND_CHOICES)
    verify_target.add_argument("--all", action="store_true", help="verify all nine kinds")
    verify.add_argument("--draws", type=int, default=1000)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--tolerance", type=float, help="override the absolute tolerance")
    verify.add_argument("--format", choices=["text", "json"], default="text")
    verify.add_argument("--out", help="write output to a file instead of stdout")
    verify.set_defaults(func=cmd_verify)

    sample_cmd = sub.add_parser("sample", help="Monte Carlo frequencies vs exact masses")
    _add_params_flags(sample_cmd)
    sample_cmd.add_argument("--draws", type=int, default=100000)
    sample_cmd.add_argument("--seed", type=int, default=0)
    sample_cmd.add_argument("--format", choices=["text", "json"], default="text")
    sample_cmd.add_argument("--out", help="write output to a file instead of stdout")
    sample_cmd.set_defaults(func=cmd_sample)

    grid = sub.add_parser("grid", help="export a sign-region grid")
    grid.add_argument("--family", choices=[f.value for f in GridFamily], required=True)
    grid.add_argument("--p-c00", type=float, required=True, help="fixed P(C=1|0,0)")
    grid.add_argument("--p-c11", type=float, required=True, help="fixed P(C=1|1,1)")
    grid.add_argument("--p-left", type=float, default=0.5, help="P(left cause = 1)")
    grid.add_argument("--p-right", type=float, default=0.5, help="P(right cause = 1)")
    grid.add_argument("--p-d-given-c", metavar="0=F,1=F",
                      help="collider-child edge (child-stratum family)")
    grid.add_argument("--resolution", type=int, default=200)
    grid.add_argument("--format", choices=["csv", "json"], default="csv")
    grid.add_argument("--out", help="write output to a file instead of stdout")
    grid.set_defaults(func=cmd_grid)

    return parser


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    log.info("running %s", args.command)
    try:
        return args.func(args)
    except ColliderBiasError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
