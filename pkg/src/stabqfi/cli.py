"""Command-line interface.

Exit codes: 0 success, 2 input error, 3 oracle mismatch, 4 assertion miss.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import constructions as cons
from .codes import code_from_json
from .errors import BoundViolation
from .graphs import TannerGraph, collapse_with_respect_to, parse_graph_spec
from .hamiltonian import validate_k_local
from .jsonfmt import dumps
from .lightcone import ConnectivityModel, g_function, theorem1_bound, verify_theorem1
from .pauli import parse_pauli
from .qfi import qfi_pure_dense, qfi_stabilizer

EXIT_OK, EXIT_INPUT, EXIT_MISMATCH, EXIT_ASSERT = 0, 2, 3, 4
ORACLE_TOL = 1e-9
DENSE_CHECK_MAX = 14
QUADRATIC_FAMILIES = ("ghz", "asym_toric", "appendix_d", "cycle_ldpc")
FAMILIES = ("ghz", "toric", "asym_toric", "cycle_ldpc", "appendix_d", "random_shallow")


class InputError(Exception):
    pass


def _emit(obj) -> None:
    sys.stdout.write(dumps(obj))


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _model(args) -> ConnectivityModel:
    shape = tuple(args.shape) if getattr(args, "shape", None) else None
    return ConnectivityModel(args.model, args.kappa, args.r, shape)


# ---------------------------------------------------------------- construct
def build_bundle(family: str, args) -> cons.ConstructionBundle:
    family = family.replace("-", "_")
    if family == "ghz":
        return cons.ghz_bundle(args.n)
    if family == "cycle_ldpc":
        return cons.cycle_ldpc_bundle(args.n)
    if family == "toric":
        return cons.toric_sum_z_bundle(args.L)
    if family == "asym_toric":
        return cons.asymmetric_toric_bundle(args.c, args.lx)
    if family == "appendix_d":
        graph = parse_graph_spec(args.graph) if args.graph else cons.cycle_graph(args.n)
        vs, vt = args.vs, args.vt
        if vt is None:
            if not 0 <= vs < graph.num_vertices or not graph.adj[vs]:
                raise InputError(f"vertex {vs} has no neighbours")
            vt = graph.adj[vs][0][0]
        return cons.appendix_d_bundle(graph, vs, vt)
    raise InputError(f"unknown family {family!r}")


def cmd_construct(args) -> int:
    bundle = build_bundle(args.family, args)
    if args.out:
        bundle.save(args.out)
    _emit(bundle.prediction_json())
    return EXIT_OK


# ---------------------------------------------------------------- qfi
def cmd_qfi(args) -> int:
    if args.bundle:
        base = Path(args.bundle)
        state_path, ham_path = base / "state.json", base / "hamiltonian.json"
    else:
        if not (args.state and args.hamiltonian):
            raise InputError("give --bundle or both --state and --hamiltonian")
        state_path, ham_path = Path(args.state), Path(args.hamiltonian)
    state = cons.load_state(state_path)
    h = cons.load_hamiltonian(ham_path)
    if h.n != state.n:
        raise InputError(f"Hamiltonian has {h.n} qubits but the state has {state.n}")
    scale = 4.0 if args.convention == "x4" else 1.0
    report = qfi_stabilizer(state, h, matrix_threshold=0)
    norm_sum = float(sum(h.group_norms()))
    report.check_bound("variance_cap", norm_sum**2)
    out = report.to_json()
    out["value"] = scale * report.value
    out["convention"] = args.convention
    for b in out["bounds"]:
        b["value"] *= scale
    code = EXIT_OK
    if args.dense_check:
        if state.n > DENSE_CHECK_MAX:
            raise InputError(f"dense check limited to {DENSE_CHECK_MAX} qubits")
        from .dense import statevector

        dense = qfi_pure_dense(statevector(state), h)
        diff = abs(dense - report.value)
        out["dense_value"] = scale * dense
        out["dense_diff"] = diff
        if diff > ORACLE_TOL:
            code = EXIT_MISMATCH
    _emit(out)
    return code


# ---------------------------------------------------------------- verify
def cmd_verify(args) -> int:
    from .verify import verify_theorem2, verify_toric_mixtures, verify_toric_sum_z

    if args.theorem == "1":
        from .hamiltonian import PauliHamiltonian

        h = PauliHamiltonian.sum_z(args.n)
        report = verify_theorem1(args.n, args.t, _model(args), h, args.trials, args.seed,
                                 jobs=args.jobs, raise_on_violation=False)
        _emit({"theorem": 1, "n": args.n, "t": args.t, **report.to_json()})
        return EXIT_ASSERT if report.violations else EXIT_OK
    if args.theorem == "2":
        results, code = [], EXIT_OK
        for name, c in (("five_qubit", cons.five_qubit_code()), ("steane", cons.steane_code())):
            sweep = verify_theorem2(c, args.trials, args.seed, dense_check=not args.no_dense, name=name)
            results.append(sweep.to_json())
            if sweep.violations:
                code = EXIT_ASSERT
            elif sweep.max_dense_diff is not None and sweep.max_dense_diff > ORACLE_TOL and code == EXIT_OK:
                code = EXIT_MISMATCH
        _emit({"theorem": 2, "results": results})
        return code
    results, code = [], EXIT_OK
    for L in args.L:
        value, m, vanish = verify_toric_sum_z(L)
        mix = verify_toric_mixtures(L, args.trials, args.seed)
        results.append({"L": L, "qfi_sum_z": value, "m": m, "C": value / m,
                        "correlations_vanish": vanish, "mixtures": mix.to_json()})
        if value != m or not vanish or mix.violations:
            code = EXIT_ASSERT
    _emit({"theorem": "3-toric", "results": results})
    return code


# ---------------------------------------------------------------- sweep
@dataclass
class ScalingFit:
    exponent: float
    intercept: float
    r_squared: float
    points: list[tuple[int, float]]

    def to_json(self) -> dict:
        return {"exponent": self.exponent, "intercept": self.intercept,
                "r_squared": self.r_squared, "points": [list(p) for p in self.points]}


def fit_scaling(points: Sequence[tuple[float, float]]) -> ScalingFit:
    """Least squares on ``(log n, log F)``; zero-QFI points are dropped with a warning."""
    kept = [(n, f) for n, f in points if f > 0]
    if len(kept) < len(points):
        _warn(f"dropped {len(points) - len(kept)} zero-QFI points from the fit")
    if len(kept) < 2:
        return ScalingFit(float("nan"), float("nan"), float("nan"), list(kept))
    x = np.log([n for n, _ in kept])
    y = np.log([f for _, f in kept])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return ScalingFit(float(slope), float(intercept), min(max(r2, 0.0), 1.0), list(kept))


def sweep_point(family: str, size: int, params: dict) -> dict:
    """One CSV row; ``size`` is n (ghz, cycle_ldpc, appendix_d, random_shallow), L (toric) or Lx (asym_toric)."""
    if family == "random_shallow":
        from .hamiltonian import PauliHamiltonian

        model = ConnectivityModel(params["model"], params["kappa"], params["r"], params.get("shape"))
        h = PauliHamiltonian.sum_z(size)
        rep = verify_theorem1(size, params["t"], model, h, params["trials"], params["seed"],
                              raise_on_violation=False)
        prof = validate_k_local(h)
        return {"family": family, "n": size, "m": prof.m, "K_support": prof.K_support,
                "K_degree": prof.K_degree, "qfi": rep.max_qfi, "bound": rep.bound,
                "ratio": rep.max_ratio, "violations": rep.violations}
    ns = argparse.Namespace(n=size, L=size, lx=size, c=params["c"], graph=None, vs=0, vt=1)
    bundle = build_bundle(family, ns)
    h = bundle.hamiltonian
    prof = validate_k_local(h)
    value = qfi_stabilizer(bundle.state, h, matrix_threshold=0).value
    bound = float(sum(h.group_norms())) ** 2
    return {"family": family, "n": bundle.code.n, "size": size, "m": prof.m, "K_support": prof.K_support,
            "K_degree": prof.K_degree, "qfi": value, "bound": bound, "ratio": value / bound if bound else 0.0,
            "predicted": bundle.predicted_qfi}


def _point_star(args: tuple) -> dict:
    return sweep_point(*args)


CSV_COLUMNS = ("family", "n", "m", "K_support", "K_degree", "qfi", "bound", "ratio")


def rows_to_csv(rows: Sequence[dict]) -> str:
    from .jsonfmt import canonical

    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(str(canonical(row[c])) for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def run_sweep(family: str, sizes: Sequence[int], params: dict, jobs: int = 1) -> tuple[list[dict], ScalingFit]:
    if family not in FAMILIES:
        raise InputError(f"unknown family {family!r}")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise InputError("sizes must be strictly increasing")
    if len(sizes) < 3:
        raise InputError("at least 3 sizes are needed for a scaling fit")
    tasks = [(family, s, params) for s in sizes]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_point_star, tasks))
    else:
        rows = [_point_star(t) for t in tasks]
    fit = fit_scaling([(r["n"], r["qfi"]) for r in rows])
    return rows, fit


def cmd_sweep(args) -> int:
    params = {"c": args.c, "t": args.t, "model": args.model, "kappa": args.kappa, "r": args.r,
              "shape": tuple(args.shape) if args.shape else None, "trials": args.trials, "seed": args.seed}
    family = args.family.replace("-", "_")
    rows, fit = run_sweep(family, args.sizes, params, args.jobs)
    csv = rows_to_csv(rows)
    if args.csv:
        Path(args.csv).write_text(csv)
    out = {"family": family, "fit": fit.to_json(), "rows": rows}
    code = EXIT_OK
    if family in QUADRATIC_FAMILIES:
        ok = abs(fit.exponent - 2.0) <= args.tol and fit.r_squared > 0.9999
        out["exponent_ok"] = ok
        if not ok:
            code = EXIT_ASSERT
    if family == "random_shallow":
        violations = sum(r["violations"] for r in rows)
        out["violations"] = violations
        if violations:
            code = EXIT_ASSERT
    if not args.csv:
        sys.stdout.write(csv)
    _emit(out)
    return code


# ---------------------------------------------------------------- collapse
def _load_code(spec: str):
    fixed = {"shor": cons.shor_code, "steane": cons.steane_code}
    if spec in fixed:
        return fixed[spec]()
    if spec.startswith("toric:"):
        L = int(spec.split(":", 1)[1])
        return cons.toric_code(L, L)
    if spec.startswith("ldpc:"):
        return cons.classical_ldpc_code(parse_graph_spec(spec.split(":", 1)[1]))
    path = Path(spec)
    if path.is_dir():
        path = path / "code.json"
    return code_from_json(json.loads(path.read_text()))


def cmd_collapse(args) -> int:
    code = _load_code(args.code)
    tanner = TannerGraph.from_code(code)
    side = args.side.upper()
    error = 0
    if args.error:
        p = parse_pauli(args.error)
        if p.n != code.n:
            raise InputError(f"error has {p.n} qubits, code has {code.n}")
        # a Z-side collapse is taken with respect to Z-type errors and vice versa
        error = p.z if side == "Z" else p.x
    graph = collapse_with_respect_to(tanner, side, error)
    if not graph.vertices:
        _warn(f"the code has no {side} checks")
    _emit({"side": side, "vertices": len(graph.vertices), "edges": [list(e) for e in graph.sorted_edges()],
           "components": graph.components()})
    return EXIT_OK


# ---------------------------------------------------------------- bounds
def cmd_bounds(args) -> int:
    model = _model(args)
    out = {"model": model.kind, "kappa": model.kappa, "r": model.r, "t": args.t,
           "g": g_function(model, args.t), "g_2t": g_function(model, 2 * args.t)}
    if args.m is not None:
        out["theorem1_bound"] = theorem1_bound(args.m, args.K, model, args.t)
    _emit(out)
    return EXIT_OK


# ---------------------------------------------------------------- parser
def _add_model(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", choices=["grid", "all_to_all"], default="grid")
    p.add_argument("--kappa", type=int, default=2)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--shape", type=int, nargs=2, default=None, help="grid rows and columns for r=2")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stabqfi", description="QFI of stabilizer code states")
    parser.add_argument("--config", help="flat key=value file; command-line flags win")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a family bundle")
    p.add_argument("family", choices=["ghz", "toric", "asym-toric", "cycle-ldpc", "appendix-d"])
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--L", type=int, default=3)
    p.add_argument("--c", type=int, default=2)
    p.add_argument("--lx", type=int, default=3)
    p.add_argument("--graph", help="cycle:N, theta:a,b,c, complete:N, or an edge-list/JSON file")
    p.add_argument("--vs", type=int, default=0)
    p.add_argument("--vt", type=int, default=None)
    p.add_argument("--out", help="bundle directory")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("qfi", help="QFI of a stabilizer state")
    p.add_argument("--bundle")
    p.add_argument("--state")
    p.add_argument("--hamiltonian")
    p.add_argument("--dense-check", action="store_true")
    p.add_argument("--convention", choices=["paper", "x4"], default="paper")
    p.set_defaults(func=cmd_qfi)

    p = sub.add_parser("verify", help="randomized bound checks")
    p.add_argument("theorem", choices=["1", "2", "3-toric"])
    p.add_argument("--n", type=int, default=16)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--L", type=int, nargs="+", default=[2, 3, 4])
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-dense", action="store_true")
    _add_model(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="QFI over a size family with a scaling fit")
    p.add_argument("family", choices=[f.replace("_", "-") for f in FAMILIES] + list(FAMILIES))
    p.add_argument("--sizes", type=int, nargs="+", required=True)
    p.add_argument("--c", type=int, default=2)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--tol", type=float, default=0.01)
    p.add_argument("--csv")
    _add_model(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("collapse", help="qubit-side collapse graph")
    p.add_argument("code", help="shor, steane, toric:L, ldpc:<graph>, or a code.json / bundle directory")
    p.add_argument("--side", choices=["Z", "X", "z", "x"], default="Z")
    p.add_argument("--error", help="Pauli string; its Z part (X part) is used on the Z (X) side")
    p.set_defaults(func=cmd_collapse)

    p = sub.add_parser("bounds", help="evaluate g and the shallow-circuit bound")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--K", type=int, default=1)
    _add_model(p)
    p.set_defaults(func=cmd_bounds)
    return parser


def read_config(path: str) -> dict[str, str]:
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise InputError(f"{path}:{lineno}: expected key=value")
        out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return out


def _apply_config(parser: argparse.ArgumentParser, argv: list[str], config: dict[str, str]) -> None:
    """Turn config entries into defaults of the chosen subcommand, so explicit flags still win."""
    sub_action = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    command = next((a for a in argv if a in sub_action.choices), None)
    if command is None:
        return
    sub = sub_action.choices[command]
    actions = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, raw in config.items():
        action = actions.get(key)
        if action is None:
            raise InputError(f"unknown config key {key!r} for {command}")
        if isinstance(action, argparse._StoreTrueAction):
            defaults[key] = raw.lower() in ("1", "true", "yes", "on")
        elif action.nargs in ("+", "*") or isinstance(action.nargs, int):
            conv = action.type or str
            defaults[key] = [conv(v) for v in raw.replace(",", " ").split()]
        else:
            conv = action.type or str
            defaults[key] = conv(raw)
    sub.set_defaults(**defaults)
    for action in sub._actions:
        if action.dest in defaults and action.required:
            action.required = False


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        if "--config" in argv:
            i = argv.index("--config")
            if i + 1 >= len(argv):
                raise InputError("--config needs a path")
            _apply_config(parser, argv, read_config(argv[i + 1]))
        args = parser.parse_args(argv)
        return args.func(args)
    except BoundViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASSERT
    except (InputError, ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
