"""Command-line frontend with deterministic JSON/CSV output.

Exit codes: 0 on success, 2 on argument or admissibility errors, 1 on
internal failure.  Output is byte-identical across identical invocations:
dictionary keys are emitted in fixed order, floats with 17 significant
digits (lossless for binary64), rationals exactly as p/q strings.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import collapse as collapse_mod
from . import deformation, oracle, spectra

SCHEMA_VERSION = 1

THREADS_ENV_VAR = "SPECTRAL_NIL_THREADS"


def thread_cap() -> int:
    """Upper bound on internal parallelism; the core currently runs serially."""
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value < 1:
        raise ValueError(f"{THREADS_ENV_VAR} must be a positive integer, got {raw!r}")
    return value


# ---------------------------------------------------------------------------
# deterministic serialization
# ---------------------------------------------------------------------------

def _fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def _emit(obj, indent: int = 0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [f"{inner}{json.dumps(k)}: {_emit(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(rows) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rows = [f"{inner}{_emit(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(rows) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, Fraction):
        return json.dumps(str(obj))
    if obj is None:
        return "null"
    return json.dumps(obj)


def _indices_doc(entry: spectra.SpectrumEntry) -> dict:
    return {name: str(value) for name, value in entry.indices}


def _entry_doc(entry: spectra.SpectrumEntry) -> dict:
    return {
        "value": entry.value,
        "multiplicity": entry.multiplicity,
        "family": entry.family,
        "indices": _indices_doc(entry),
    }


def _merged_entry_docs(spec: spectra.Spectrum, tol: float) -> list[dict]:
    groups: list[dict] = []
    for entry in spec.entries:
        if groups and abs(entry.value - groups[-1]["value"]) <= tol:
            groups[-1]["multiplicity"] += entry.multiplicity
            groups[-1]["_families"].add(entry.family)
        else:
            groups.append(
                {
                    "value": entry.value,
                    "multiplicity": entry.multiplicity,
                    "_families": {entry.family},
                }
            )
    return [
        {
            "value": g["value"],
            "multiplicity": g["multiplicity"],
            "family": ";".join(sorted(g["_families"])),
            "indices": {},
        }
        for g in groups
    ]


def spectrum_document(spec: spectra.Spectrum, merge_tol: float | None) -> dict:
    if merge_tol is None:
        entry_docs = [_entry_doc(e) for e in spec.entries]
    else:
        entry_docs = _merged_entry_docs(spec, merge_tol)
    return {
        "schema_version": SCHEMA_VERSION,
        "manifold": spec.manifold,
        "params": dict(spec.params),
        "lambda_max": spec.lambda_max,
        "entries": entry_docs,
    }


def _document_csv(doc: dict) -> str:
    lines = ["value,multiplicity,family,indices"]
    for e in doc["entries"]:
        idx = ";".join(f"{k}={v}" for k, v in e["indices"].items())
        lines.append(f"{_fmt_float(e['value'])},{e['multiplicity']},{e['family']},{idx}")
    return "\n".join(lines) + "\n"


def _write_output(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render(doc: dict, fmt: str, out_path: str | None) -> None:
    if fmt == "csv":
        _write_output(_document_csv(doc), out_path)
    else:
        _write_output(_emit(doc) + "\n", out_path)


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

def _add_output_options(p: argparse.ArgumentParser, csv_allowed: bool = True) -> None:
    choices = ["json", "csv"] if csv_allowed else ["json"]
    p.add_argument("--format", choices=choices, default="json")
    p.add_argument("--out", default=None, help="write output to a file instead of stdout")
    if csv_allowed:
        p.add_argument(
            "--merge-tol",
            type=float,
            default=None,
            help="merge coincident eigenvalues within this tolerance",
        )


def _float_list(raw: str) -> list[float]:
    try:
        return [float(x) for x in raw.split(",") if x != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad number list {raw!r}") from exc


def _int_list(raw: str) -> list[int]:
    try:
        return [int(x) for x in raw.split(",") if x != ""]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {raw!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nilspectra",
        description="Exact Dirac spectra with collapse reports, deformation scans and numerical oracles",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("heisenberg", help="Dirac spectrum of the Heisenberg manifold M(r, d, T)")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--delta", required=True, help="spin structure, e.g. ++- (delta1 delta2 delta3)")
    p.add_argument("--lambda-max", type=float, required=True)
    _add_output_options(p)

    p = sub.add_parser("torus", help="Dirac spectrum of the flat 2-torus base")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--delta", required=True, help="two characters over +-")
    p.add_argument("--lambda-max", type=float, required=True)
    _add_output_options(p)

    p = sub.add_parser("berger", help="Dirac spectrum of the Berger sphere S^{2m+1}")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--ell", type=float, required=True)
    p.add_argument("--lambda-max", type=float, required=True)
    _add_output_options(p)

    p = sub.add_parser("cpm", help="Dirac spectrum of CP^m (m odd)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--lambda-max", type=float, required=True)
    _add_output_options(p)

    p = sub.add_parser("collapse", help="collapse classification reports")
    csub = p.add_subparsers(dest="target", required=True)
    ph = csub.add_parser("heisenberg")
    ph.add_argument("--r", type=int, required=True)
    ph.add_argument("--d", type=float, required=True)
    ph.add_argument("--delta", required=True)
    ph.add_argument("--T-values", type=_float_list, required=True)
    ph.add_argument("--lambda-max", type=float, required=True)
    _add_output_options(ph, csv_allowed=False)
    pb = csub.add_parser("berger")
    pb.add_argument("--m", type=int, required=True)
    pb.add_argument("--ell-values", type=_float_list, required=True)
    pb.add_argument("--lambda-max", type=float, required=True)
    _add_output_options(pb, csv_allowed=False)

    p = sub.add_parser("oracle", help="independent numerical checks")
    osub = p.add_subparsers(dest="target", required=True)
    pb = osub.add_parser("block")
    pb.add_argument("--tau", type=float, required=True)
    pb.add_argument("--k", type=int, required=True)
    pb.add_argument("--d", type=float, required=True)
    pb.add_argument("--T", type=float, required=True)
    _add_output_options(pb, csv_allowed=False)
    pf = osub.add_parser("fd")
    pf.add_argument("--tau", type=float, required=True)
    pf.add_argument("--d", type=float, required=True)
    pf.add_argument("--T", type=float, required=True)
    pf.add_argument("--N", type=int, required=True)
    pf.add_argument("--L", type=float, required=True)
    pf.add_argument("--count", type=int, default=6)
    _add_output_options(pf, csv_allowed=False)
    ph = osub.add_parser("hermite")
    ph.add_argument("--tau", type=float, required=True)
    ph.add_argument("--k-max", type=int, required=True)
    ph.add_argument("--step", type=float, default=1e-4)
    _add_output_options(ph, csv_allowed=False)

    p = sub.add_parser("gornet", help="isospectral-deformation computations")
    gsub = p.add_subparsers(dest="target", required=True)
    ps = gsub.add_parser("scan")
    ps.add_argument("--box", type=int, required=True)
    ps.add_argument("--s", type=float, required=True)
    ps.add_argument("--eig-tol", type=float, required=True)
    _add_output_options(ps, csv_allowed=False)
    pd = gsub.add_parser("delta")
    pd.add_argument("--tau", type=_int_list, required=True, help="four integers, e.g. 1,1,0,0")
    pd.add_argument("--h", type=float, default=1e-4)
    _add_output_options(pd, csv_allowed=False)
    pc = gsub.add_parser("check")
    _add_output_options(pc, csv_allowed=False)

    p = sub.add_parser("audit", help="completeness audit of a spectrum generator")
    p.add_argument("--target", choices=["heisenberg", "torus", "berger", "cpm"], required=True)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--d", type=float, default=1.0)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--delta", default="+++")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--ell", type=float, default=1.0)
    p.add_argument("--lambda-max", type=float, required=True)
    p.add_argument("--margin", type=float, default=2.0)
    _add_output_options(p, csv_allowed=False)

    return parser


# ---------------------------------------------------------------------------
# command handlers
# ---------------------------------------------------------------------------

def _entry_pair_doc(pair: collapse_mod.MatchedPair) -> dict:
    return {
        "bundle": _entry_doc(pair.bundle),
        "base": _entry_doc(pair.base),
        "gap_analytic": pair.gap_analytic,
        "gap_observed": pair.gap_observed,
    }


def _divergent_doc(row: collapse_mod.DivergentEntry) -> dict:
    return {
        "entry": _entry_doc(row.entry),
        "scaled": row.scaled,
        "limit": row.limit,
        "residual_limit": row.residual_limit,
        "nearest": row.nearest,
        "residual_nearest": row.residual_nearest,
    }


def _collapse_doc(report: collapse_mod.CollapseReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "manifold": report.manifold,
        "parameter_name": report.parameter_name,
        "projectable": report.projectable,
        "half_integer_limits": report.half_integer_limits,
        "slices": [
            {
                "parameter": s.parameter,
                "ell": s.ell,
                "entry_count": s.entry_count,
                "all_classified": s.all_classified,
                "matched": [_entry_pair_doc(p) for p in s.matched],
                "divergent": [_divergent_doc(r) for r in s.divergent],
            }
            for s in report.slices
        ],
    }


def _complex_doc(z: complex) -> list[float]:
    return [z.real, z.imag]


def _run_spectrum(args) -> int:
    if args.command == "heisenberg":
        spec = spectra.heisenberg_spectrum(
            spectra.HeisenbergGeometry(r=args.r, d=args.d, T=args.T),
            spectra.SpinDelta.from_string(args.delta),
            args.lambda_max,
        )
    elif args.command == "torus":
        if len(args.delta) != 2 or any(c not in "+-" for c in args.delta):
            raise ValueError(f"torus spin structure must be 2 chars of +-, got {args.delta!r}")
        d1, d2 = (1 if c == "+" else -1 for c in args.delta)
        spec = spectra.torus_spectrum(args.r, args.d, (d1, d2), args.lambda_max)
    elif args.command == "berger":
        spec = spectra.berger_spectrum(args.m, args.ell, args.lambda_max)
    else:
        spec = spectra.cpm_spectrum(args.m, args.lambda_max)
    doc = spectrum_document(spec, args.merge_tol)
    _render(doc, args.format, args.out)
    return 0


def _run_collapse(args) -> int:
    if args.target == "heisenberg":
        report = collapse_mod.heisenberg_collapse_report(
            args.r,
            args.d,
            spectra.SpinDelta.from_string(args.delta),
            args.T_values,
            args.lambda_max,
        )
    else:
        report = collapse_mod.berger_collapse_report(args.m, args.ell_values, args.lambda_max)
    _render(_collapse_doc(report), "json", args.out)
    return 0


def _run_oracle(args) -> int:
    if args.target == "block":
        block = oracle.fiber_block_matrix(args.tau, args.k, args.d, args.T)
        doc = {
            "schema_version": SCHEMA_VERSION,
            "tau": block.tau,
            "k": block.k,
            "d": block.d,
            "T": block.T,
            "matrix": [[_complex_doc(z) for z in row] for row in block.matrix.tolist()],
            "eigenvalues": list(block.eigenvalues),
        }
    elif args.target == "fd":
        vals = oracle.fiber_operator_fd(args.tau, args.d, args.T, args.N, args.L, args.count)
        doc = {
            "schema_version": SCHEMA_VERSION,
            "tau": args.tau,
            "d": args.d,
            "T": args.T,
            "N": args.N,
            "L": args.L,
            "count": args.count,
            "eigenvalues": [float(v) for v in vals],
        }
    else:
        res = oracle.hermite_samples(args.tau, args.k_max, step=args.step)
        doc = {
            "schema_version": SCHEMA_VERSION,
            "tau": args.tau,
            "k_max": args.k_max,
            "step": args.step,
            "derivative_residual": res.derivative_residual,
            "recurrence_residual": res.recurrence_residual,
        }
    _render(doc, "json", args.out)
    return 0


def _run_gornet(args) -> int:
    if args.target == "scan":
        witnesses = deformation.deformation_scan(args.box, args.s, args.eig_tol)
        doc = {
            "schema_version": SCHEMA_VERSION,
            "box": args.box,
            "s_probe": args.s,
            "eig_tol": args.eig_tol,
            "witness_count": len(witnesses),
            "witnesses": [
                {
                    "tau": list(w.tau),
                    "displacement": w.displacement,
                    "derivative_poly": w.derivative_poly,
                }
                for w in witnesses
            ],
        }
    elif args.target == "delta":
        tau = deformation.CotangentSample.of(args.tau)
        numeric = deformation.det_derivative_numeric(tau, args.h)
        poly = deformation.det_derivative_poly(tau)
        rel = abs(numeric - poly) / abs(poly) if poly != 0.0 else None
        doc = {
            "schema_version": SCHEMA_VERSION,
            "tau": list(args.tau),
            "h": args.h,
            "numeric": numeric,
            "poly": poly,
            "relative_diff": rel,
        }
    else:
        report = deformation.connection_term_report()
        doc = {
            "schema_version": SCHEMA_VERSION,
            "char_poly_matches": report.char_poly_matches,
            "max_coefficient_diff": report.max_coefficient_diff,
            "spectrum_negated": report.spectrum_negated,
            "fallback_consistency": report.fallback_consistency,
            "computed_coefficients": list(report.computed_coefficients),
            "reference_coefficients": list(report.reference_coefficients),
        }
    _render(doc, "json", args.out)
    return 0


def _run_audit(args) -> int:
    if args.target == "heisenberg":
        geom = spectra.HeisenbergGeometry(r=args.r, d=args.d, T=args.T)
        delta = spectra.SpinDelta.from_string(args.delta)

        def generator(lambda_max, bound_margin):
            return spectra.heisenberg_spectrum(geom, delta, lambda_max, bound_margin)

    elif args.target == "torus":
        if len(args.delta) < 2:
            raise ValueError("torus audit needs a 2-char delta")
        d1, d2 = (1 if c == "+" else -1 for c in args.delta[:2])

        def generator(lambda_max, bound_margin):
            return spectra.torus_spectrum(args.r, args.d, (d1, d2), lambda_max, bound_margin)

    elif args.target == "berger":

        def generator(lambda_max, bound_margin):
            return spectra.berger_spectrum(args.m, args.ell, lambda_max, bound_margin)

    else:

        def generator(lambda_max, bound_margin):
            return spectra.cpm_spectrum(args.m, lambda_max, bound_margin)

    complete = oracle.spectrum_completeness_audit(generator, args.lambda_max, args.margin)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "target": args.target,
        "lambda_max": args.lambda_max,
        "margin": args.margin,
        "complete": complete,
    }
    _render(doc, "json", args.out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        thread_cap()
        if args.command in ("heisenberg", "torus", "berger", "cpm"):
            return _run_spectrum(args)
        if args.command == "collapse":
            return _run_collapse(args)
        if args.command == "oracle":
            return _run_oracle(args)
        if args.command == "gornet":
            return _run_gornet(args)
        if args.command == "audit":
            return _run_audit(args)
        raise RuntimeError(f"unhandled command {args.command!r}")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
