"""Command-line entry point.

Exit codes: 0 success, 1 bad input or configuration (nothing is written),
2 numerical failure or a failed validation / scan.
"""
import argparse
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .analytic import figure1a_data, figure1b_data
from .config import build_scenario, parse_sine_mode, read_config, split_scan
from .dynamics import adiabatic_populations, adiabatic_state, basis_state, evolve
from .errors import InputError, LZError, NumericalError
from .fileio import csv_text, json_text, matrix_text, read_matrix, write_atomic
from .model import TridiagonalMatrix
from .morris_shore import BlockHamiltonian, ms_transform
from .numerics import TimeGrid
from .triangular import Recursion, cascade_evolve, triangularize
from .validation import run_validation

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL = 0, 1, 2


def _prepare_dir(path):
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise InputError(f"cannot create output directory {path}: {exc.strerror}") from None
    if not os.access(path, os.W_OK):
        raise InputError(f"output directory {path} is not writable")
    return path


def _check_file_target(path):
    path = Path(path)
    parent = path.parent if str(path.parent) else Path(".")
    if path.is_dir():
        raise InputError(f"output path {path} is a directory")
    if not parent.is_dir() or not os.access(parent, os.W_OK):
        raise InputError(f"cannot write to {path}")
    return path


def _write_all(out_dir, files):
    for name, text in files.items():
        write_atomic(Path(out_dir) / name, text)


def _ms_files(prefix, result):
    return {
        f"{prefix}a.txt": matrix_text(result.a),
        f"{prefix}b.txt": matrix_text(result.b),
        f"{prefix}v_bar.txt": matrix_text(result.v_bar),
        f"{prefix}h_transformed.txt": matrix_text(result.h_transformed),
    }


def _ms_summary(result):
    return {"singular_values": [float(s) for s in result.singular_values],
            "n_a": int(result.a.shape[0]), "n_b": int(result.b.shape[0])}


def run_scenario(sc, timing=True):
    """All output files of one scenario as ``{filename: text}``."""
    start = time.perf_counter()
    n = sc.system.n
    if sc.initial_basis == "adiabatic":
        psi0 = adiabatic_state(sc.system, sc.profile, sc.grid.t0, sc.initial_level)
    else:
        psi0 = basis_state(n, sc.initial_level)
    traj = evolve(sc.system, sc.profile, psi0, sc.grid, sc.method, sc.drift_tol)
    times = traj.times
    files = {}
    summary = {
        "name": sc.name,
        "config": sc.echo,
        "final_populations": [float(p) for p in traj.populations[-1]],
        "max_norm_drift": traj.max_drift,
    }

    if "trajectory" in sc.outputs:
        header = ["t", "norm"] + [f"pop_{i}" for i in range(1, n + 1)]
        for i in range(1, n + 1):
            header += [f"re_psi_{i}", f"im_psi_{i}"]
        parts = np.empty((times.size, 2 * n), dtype=float)
        parts[:, 0::2] = traj.states.real
        parts[:, 1::2] = traj.states.imag
        rows = np.column_stack([times, traj.norms, traj.populations, parts])
        files[f"{sc.name}_trajectory.csv"] = csv_text(header, rows)

    if "adiabatic" in sc.outputs:
        ad = adiabatic_populations(sc.system, sc.profile, traj)
        header = ["t"] + [f"ad_pop_{i}" for i in range(1, n + 1)] + \
                 [f"energy_{i}" for i in range(1, n + 1)]
        files[f"{sc.name}_adiabatic.csv"] = csv_text(
            header, np.column_stack([times, ad.populations, ad.energies]))
        summary["final_adiabatic_populations"] = [float(p) for p in ad.populations[-1]]

    if "figure1a" in sc.outputs:
        f = sc.figure1a
        alphas, p = figure1a_data(f["eps"], f["alpha_min"], f["alpha_max"], f["points"])
        files[f"{sc.name}_figure1a.csv"] = csv_text(["alpha", "P"], np.column_stack([alphas, p]))

    if "figure1b" in sc.outputs:
        f = sc.figure1b
        t, cols = figure1b_data(f["eps"], f["amplitude"], f["omegas"], times, f["mode"])
        header = ["t"] + [f"P_omega{i}" for i in range(1, len(f["omegas"]) + 1)]
        files[f"{sc.name}_figure1b.csv"] = csv_text(header, np.column_stack([t, cols]))

    if "triangular" in sc.outputs:
        casc = cascade_evolve(sc.system, sc.profile, psi0, sc.grid)
        header = ["t"] + [f"cascade_pop_{i}" for i in range(1, n + 1)]
        files[f"{sc.name}_triangular.csv"] = csv_text(
            header, np.column_stack([times, casc.populations]))
        summary["cascade_discrepancy"] = float(
            np.max(np.linalg.norm(traj.states - casc.states, axis=1)))

    if "ms" in sc.outputs:
        res = ms_transform(BlockHamiltonian(sc.ms["coupling"], sc.ms["detunings"]))
        files.update(_ms_files(f"{sc.name}_ms_", res))
        summary["ms"] = _ms_summary(res)

    if timing:
        summary["wall_time_s"] = time.perf_counter() - start
    files[f"{sc.name}_summary.json"] = json_text(summary)
    return files


def cmd_evolve(args):
    sc = build_scenario(read_config(args.config))
    out = _prepare_dir(args.out)
    files = run_scenario(sc)
    _write_all(out, files)
    for name in files:
        print(out / name)
    return EXIT_OK


def _table_out(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        write_atomic(_check_file_target(path), text)


def cmd_classic(args):
    alphas, p = figure1a_data(args.eps, args.alpha_min, args.alpha_max, args.points)
    _table_out(args.out, csv_text(["alpha", "P"], np.column_stack([alphas, p])))
    return EXIT_OK


def _float_list(raw, what):
    try:
        vals = [float(s) for s in raw.split(",") if s.strip()]
    except ValueError:
        raise InputError(f"{what}: expected comma-separated numbers, got {raw!r}") from None
    if not vals:
        raise InputError(f"{what}: need at least one value")
    return vals


def cmd_sine(args):
    omegas = _float_list(args.omegas, "--omegas")
    if args.points < 2:
        raise InputError(f"--points must be >= 2, got {args.points}")
    grid = TimeGrid(args.t0, args.t1, args.points - 1)
    t, cols = figure1b_data(args.eps, args.amplitude, omegas, grid, parse_sine_mode(args.mode))
    header = ["t"] + [f"P_omega{i}" for i in range(1, len(omegas) + 1)]
    _table_out(args.out, csv_text(header, np.column_stack([t, cols])))
    return EXIT_OK


def _tridiagonal_from(m):
    if np.max(np.abs(m.imag)) > 0:
        raise InputError("tri-check expects a real matrix")
    m = m.real
    if m.shape[0] != m.shape[1]:
        raise InputError(f"tri-check expects a square matrix, got {m.shape[0]}x{m.shape[1]}")
    band = np.triu(np.tril(m, 1), -1)
    if np.any(m != band):
        raise InputError("matrix has entries outside the tridiagonal band")
    return TridiagonalMatrix(np.diag(m).copy(), np.diag(m, 1).copy(), np.diag(m, -1).copy())


def cmd_tri_check(args):
    if args.out:
        _check_file_target(args.out)
    t = _tridiagonal_from(read_matrix(args.matrix))
    f = triangularize(t, Recursion(args.recursion))
    err = float(np.max(np.abs(f.reconstruct() - t.dense())))
    doc = {
        "recursion": Recursion(args.recursion).value,
        "n": int(t.n),
        "pivots": [float(v) for v in f.h],
        "corrections": [float(v) for v in f.p],
        "gamma_subdiagonal": [float(v) for v in f.gamma_sub],
        "m_superdiagonal": [float(v) for v in f.m_sup],
        "reconstruction_error": err,
    }
    _table_out(args.out, json_text(doc))
    return EXIT_OK


def cmd_ms(args):
    out = Path(args.out)
    v = read_matrix(args.vfile)
    det = _float_list(args.detunings, "--detunings") if args.detunings else None
    res = ms_transform(BlockHamiltonian(v, det))
    out = _prepare_dir(out)
    files = _ms_files("", res)
    files["ms_summary.json"] = json_text(_ms_summary(res))
    _write_all(out, files)
    return EXIT_OK


def cmd_validate(args):
    target = _check_file_target(args.out) if args.out else None
    report = run_validation(args.seed)
    text = json_text(report)
    if target is None:
        sys.stdout.write(text)
    else:
        write_atomic(target, text)
    for c in report["properties"]:
        print(f"{'PASS' if c['passed'] else 'FAIL'} {c['name']}", file=sys.stderr)
    return EXIT_OK if report["all_passed"] else EXIT_NUMERICAL


def _scan_one(name, cfg):
    """Worker: build and run one scenario, never raising."""
    try:
        sc = build_scenario(cfg, name)
        return {"name": name, "status": "ok", "files": run_scenario(sc, timing=False)}
    except InputError as exc:
        return {"name": name, "status": "failed", "kind": "input", "error": str(exc)}
    except NumericalError as exc:
        return {"name": name, "status": "failed", "kind": "numerical", "error": str(exc)}


def cmd_scan(args):
    if args.jobs < 1:
        raise InputError(f"--jobs must be >= 1, got {args.jobs}")
    items = split_scan(read_config(args.config))
    out = _prepare_dir(args.out)
    if args.jobs == 1:
        results = [_scan_one(name, cfg) for name, cfg in items]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(_scan_one, name, cfg) for name, cfg in items]
            results = [f.result() for f in futures]

    entries = []
    for r in results:
        entry = {"name": r["name"], "status": r["status"]}
        if r["status"] == "ok":
            _write_all(out, r["files"])
            entry["outputs"] = sorted(r["files"])
        else:
            entry["error"] = r["error"]
            entry["error_kind"] = r["kind"]
        entries.append(entry)
    failed = sum(e["status"] != "ok" for e in entries)
    write_atomic(out / "manifest.json", json_text({"scenarios": entries, "failed": failed}))
    print(out / "manifest.json")
    return EXIT_NUMERICAL if failed else EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage errors are input errors
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser():
    ap = _Parser(prog="lzsweep", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="integrate one scenario config")
    p.add_argument("config")
    p.add_argument("--out", default=".", help="output directory")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("classic", help="linear-sweep probability table (alpha,P)")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--alpha-min", type=float, default=0.001)
    p.add_argument("--alpha-max", type=float, default=0.1)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--out", help="CSV file (default: stdout)")
    p.set_defaults(func=cmd_classic)

    p = sub.add_parser("sine", help="sinusoidal-sweep probability table (t,P_omega...)")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--omegas", default="1,2", help="comma-separated angular frequencies")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=2 * math.pi)
    p.add_argument("--points", type=int, default=629)
    p.add_argument("--mode", default="abs", help="abs (|cos|) or literal (signed cos)")
    p.add_argument("--out", help="CSV file (default: stdout)")
    p.set_defaults(func=cmd_sine)

    p = sub.add_parser("tri-check", help="triangularize a tridiagonal matrix file")
    p.add_argument("matrix")
    p.add_argument("--recursion", choices=[r.value for r in Recursion], default="corrected")
    p.add_argument("--out", help="JSON file (default: stdout)")
    p.set_defaults(func=cmd_tri_check)

    p = sub.add_parser("ms", help="Morris-Shore transform of a coupling matrix file")
    p.add_argument("vfile")
    p.add_argument("--detunings", help="comma-separated detunings of the second manifold")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_ms)

    p = sub.add_parser("validate", help="run the seeded property suite")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", help="JSON report file (default: stdout)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("scan", help="run every scenario of a scan config")
    p.add_argument("config")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_scan)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalError, LZError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
