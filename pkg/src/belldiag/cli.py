"""Command-line interface.

Subcommands mirror the workflows: `prepare` (one state, circuit dump +
exact output), `sweep` (tetrahedron / Werner line / single point through
the full pipeline), `compare` (template fidelity comparison), `measures`
(report for a user-supplied density matrix), `aggregate` / `invert`
(tomography post-processing of external counts), `plot` (figures from an
emitted CSV).

Exit codes: 0 success, 2 configuration error, 3 runtime/numerical error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import circuits, measures, plotting, states, sweep, tomography
from .simulator import evolve, principal_density
from .sweep import ConfigError, SweepConfig


def _parse_floats(text: str, n: int, name: str) -> list[float]:
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != n:
        raise ConfigError(name, f"expected {n} comma-separated numbers, got {text!r}")
    return [float(p) for p in parts]


def _point_from_args(args) -> dict:
    given = [k for k in ("p", "t", "w") if getattr(args, k, None) is not None]
    if len(given) != 1:
        raise ConfigError("state", "give exactly one of --p, --t, --w")
    if given[0] == "p":
        return {"p": _parse_floats(args.p, 4, "--p")}
    if given[0] == "t":
        return {"t": _parse_floats(args.t, 3, "--t")}
    return {"w": float(args.w)}


def save_density_json(rho, path):
    doc = {"matrix": [[[z.real, z.imag] for z in row] for row in np.asarray(rho)]}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)


def load_density(path) -> np.ndarray:
    """Density matrix from .npy or JSON {"matrix": [[[re, im], ...], ...]}
    (plain numbers accepted for real entries)."""
    path = Path(path)
    if path.suffix == ".npy":
        return np.asarray(np.load(path), dtype=complex)
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    rows = doc["matrix"] if isinstance(doc, dict) else doc
    out = np.empty((len(rows), len(rows)), dtype=complex)
    for i, row in enumerate(rows):
        for j, entry in enumerate(row):
            if isinstance(entry, (list, tuple)):
                out[i, j] = complex(entry[0], entry[1])
            else:
                out[i, j] = complex(entry)
    return out


def _report_row_dict(rho, rep) -> dict:
    _, _, t_mat = measures.pauli_expectations(rho)
    t = np.diag(t_mat)
    d = {"t1": t[0], "t2": t[1], "t3": t[2]}
    tvec = measures.as_bell_diagonal(rho)
    if tvec is not None:
        p = states.t_to_probs(tvec)
        d.update(p00=p[0], p01=p[1], p10=p[2], p11=p[3])
    else:
        d.update(p00=float("nan"), p01=float("nan"), p10=float("nan"), p11=float("nan"))
    d.update(rep.to_dict())
    return d


def cmd_prepare(args) -> int:
    point = _point_from_args(args)
    cfg = SweepConfig(
        mode="single",
        template=args.template,
        encoder=args.encoder,
        pipeline="exact",
        noise=sweep.load_noise(args.noise),
        single=point,
    )
    [(p, w)] = sweep.target_states(cfg)
    circuit = sweep.prepare_circuit(cfg, p, w)
    if args.dump_circuit:
        Path(args.dump_circuit).write_text(circuit.dumps() + "\n", encoding="utf-8")
        print(f"circuit written to {args.dump_circuit}")
    rho = principal_density(evolve(circuit, cfg.noise), circuit.principal)
    rep = measures.report(rho, target=states.bds_density(p))
    print(f"target p = {np.round(p, 10).tolist()}  t = {np.round(states.probs_to_t(p), 10).tolist()}")
    print(
        f"circuit: {circuit.n_qubits} qubits, {circuit.n_clbits} clbits, "
        f"{len(circuit.ops)} ops, {circuits.cnot_equivalents(circuit)} CNOT-equivalents"
    )
    print(f"fidelity vs target: {rep.fidelity_vs_target:.10g}")
    for name in measures.MeasureReport.FIELD_ORDER:
        print(f"  {name:16s} {getattr(rep, name):.10g}")
    if args.output:
        save_density_json(rho, args.output)
        print(f"output state written to {args.output}")
    return 0


def cmd_sweep(args) -> int:
    cfg = SweepConfig.from_file(args.config)
    if args.output:
        cfg.output_path = args.output
    if args.plot:
        cfg.plot = True
    rows = sweep.run_sweep(cfg)
    out_path = cfg.output_path or "sweep.csv"
    sweep.emit(rows, cfg.output_format, out_path)
    print(f"{len(rows)} rows written to {out_path}")
    if cfg.plot:
        dicts = [r.to_dict() for r in rows]
        out_dir = cfg.plot_dir or str(Path(out_path).parent / "figures")
        for fig in plotting.render_figures(dicts, out_dir, cfg.mode):
            print(f"figure written to {fig}")
    return 0


def cmd_compare(args) -> int:
    cfg = SweepConfig.from_file(args.config)
    summaries = sweep.compare_templates(cfg)
    header = f"{'template':<20} {'encoder':<10} {'mean fidelity':>14} {'std':>10}"
    print(header)
    print("-" * len(header))
    for s in summaries:
        print(
            f"{s['template']:<20} {s['encoder']:<10} "
            f"{s['mean_fidelity']:>14.6f} {s['std_fidelity']:>10.6f}"
        )
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(summaries, fh, indent=2)
        print(f"summary written to {args.output}")
    return 0


def cmd_measures(args) -> int:
    rho = load_density(args.input)
    target = None
    if args.target:
        target = load_density(args.target)
    elif args.target_w is not None:
        target = states.werner_density(float(args.target_w))
    rep = measures.report(rho, target=target)
    row = _report_row_dict(rho, rep)
    if args.format == "json":
        text = json.dumps(
            {k: (None if isinstance(v, float) and np.isnan(v) else v) for k, v in row.items()},
            indent=2,
            default=float,
        )
    else:
        keys = list(row)
        text = ",".join(keys) + "\n" + ",".join(
            sweep._fmt(row[k]) if isinstance(row[k], (int, float, np.floating)) else str(row[k])
            for k in keys
        )
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
        print(f"report written to {args.output}")
    else:
        print(text)
    return 0


def _load_tables(path) -> list[tomography.CountsTable]:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    docs = doc if isinstance(doc, list) else [doc]
    return [tomography.CountsTable.from_json_dict(d) for d in docs]


def cmd_aggregate(args) -> int:
    tables = [tomography.aggregate_counts(t) for t in _load_tables(args.input)]
    out = [t.to_json_dict() for t in tables]
    text = json.dumps(out if len(out) > 1 else out[0], indent=2)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
        print(f"aggregated counts written to {args.output}")
    else:
        print(text)
    return 0


def cmd_invert(args) -> int:
    tables: list[tomography.CountsTable] = []
    for path in args.inputs:
        tables.extend(_load_tables(path))
    rho = tomography.linear_inversion(tables)
    if not args.raw:
        rho = tomography.project_to_physical(rho)
    save_density_json(rho, args.output)
    print(f"reconstructed state written to {args.output}")
    return 0


def cmd_plot(args) -> int:
    rows = sweep.parse_csv(Path(args.input).read_text(encoding="utf-8"))
    if not rows:
        raise ValueError(f"no rows in {args.input}")
    mode = args.mode or plotting.infer_mode(rows)
    for fig in plotting.render_figures(rows, args.out_dir, mode):
        print(f"figure written to {fig}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="belldiag",
        description="Bell-diagonal state preparation, tomography and correlation measures",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare", help="build one state, dump circuit and exact output")
    p.add_argument("--p", help="four Bell probabilities, e.g. '0.7,0.1,0.1,0.1'")
    p.add_argument("--t", help="correlation vector, e.g. '-0.5,-0.5,-0.5'")
    p.add_argument("--w", help="Werner parameter in [0,1]")
    p.add_argument("--template", default="two-qubit", choices=sweep.TEMPLATES)
    p.add_argument("--encoder", default="compact", choices=sweep.ENCODERS)
    p.add_argument("--noise", help="noise config: 'default' or a JSON path")
    p.add_argument("--dump-circuit", help="write the circuit as JSON to this path")
    p.add_argument("--output", help="write the exact output state (JSON) to this path")
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("sweep", help="run a configured sweep and emit rows")
    p.add_argument("--config", required=True, help="sweep config JSON")
    p.add_argument("--output", help="override the configured output path")
    p.add_argument("--plot", action="store_true", help="also render figures")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="compare templates on the Werner line")
    p.add_argument("--config", required=True, help="base sweep config JSON")
    p.add_argument("--output", help="write the summary JSON to this path")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("measures", help="measures of a density matrix file")
    p.add_argument("--input", required=True, help=".npy or JSON density matrix")
    p.add_argument("--target", help="optional target state file for fidelity")
    p.add_argument("--target-w", help="or a Werner parameter as the target")
    p.add_argument("--format", default="csv", choices=("csv", "json"))
    p.add_argument("--output", help="write instead of printing")
    p.set_defaults(func=cmd_measures)

    p = sub.add_parser("aggregate", help="sum circuit classical bits out of counts")
    p.add_argument("--input", required=True, help="counts table JSON (one or a list)")
    p.add_argument("--output", help="write instead of printing")
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("invert", help="linear inversion of nine aggregated tables")
    p.add_argument("--inputs", required=True, nargs="+", help="counts table JSON files")
    p.add_argument("--output", required=True, help="density matrix JSON path")
    p.add_argument("--raw", action="store_true", help="skip the physicality projection")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("plot", help="render figures from an emitted sweep CSV")
    p.add_argument("--input", required=True, help="sweep CSV path")
    p.add_argument("--mode", choices=sweep.MODES, help="override mode inference")
    p.add_argument("--out-dir", default="figures", help="figure directory")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
