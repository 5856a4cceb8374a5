"""Command-line front end.

Five subcommands, each driven by one JSON config file (validated against the
shipped schema before anything runs):

    tdho kernel    --config cfg.json    propagator values on endpoint pairs
    tdho classical --config cfg.json    fundamental pair samples
    tdho propagate --config cfg.json    evolve a Gaussian by one method
    tdho validate  --config cfg.json    grade the closed-form catalog entry
    tdho compare   --config cfg.json    kernel vs finite-difference vs sliced

Outputs land in --out (default: $TDHO_OUT, then the working directory):
data as CSV with %.17g floats or JSON with sorted keys, plus manifest.json
recording the config hash and per-file hashes.  Nothing timestamped, nothing
random: rerunning a config produces byte-identical files.

Exit codes: 0 success; 1 error (unusable config, caustic, solver breakdown);
2 a graded check failed under --strict.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from importlib import resources
from pathlib import Path

import numpy as np
from jsonschema import Draft202012Validator
from jsonschema.exceptions import best_match

from . import __version__
from .classical import closed_form, solve_fundamental, verify_solution
from .errors import TdhoError
from .evolve import (GaussianState, compare, crank_nicolson, propagate_kernel,
                     time_sliced, uniform_grid)
from .freq_profile import profile_from_json
from .kernel import kernel_batch

_TASKS = ("kernel", "classical", "propagate", "validate", "compare")


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _csv(header: list[str], rows) -> bytes:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(x) for x in row) for row in rows)
    return ("\n".join(lines) + "\n").encode()


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, indent=2, sort_keys=True) + "\n").encode()


def _write_atomic(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


def _json_path(err) -> str:
    parts = ["$"]
    for p in err.absolute_path:
        parts.append(f"[{p}]" if isinstance(p, int) else f".{p}")
    return "".join(parts)


def _schema() -> dict:
    return json.loads(resources.files("tdho").joinpath("config_schema.json").read_text())


def _validate_config(cfg: dict, task: str) -> str | None:
    """Schema-check cfg against the branch for task; returns an error string."""
    schema = _schema()
    branch = next(b for b in schema["oneOf"]
                  if b["properties"]["task"]["const"] == task)
    doc = dict(branch)
    doc["$defs"] = schema["$defs"]
    err = best_match(Draft202012Validator(doc).iter_errors(cfg))
    if err is not None:
        return f"config error at {_json_path(err)}: {err.message}"
    if task == "kernel" and "points" in cfg:
        if len(cfg["points"]["q_a"]) != len(cfg["points"]["q_b"]):
            return "config error at $.points: q_a and q_b must have equal length"
    w = cfg["window"]
    if not w["t_b"] > w["t_a"]:
        return "config error at $.window: need t_b > t_a"
    return None


def _packet(cfg):
    g = cfg["grid"]
    q = uniform_grid(g["q_min"], g["q_max"], g["n"])
    state = GaussianState(**cfg.get("state", {}))
    return state.on_grid(q, t=cfg["window"]["t_a"])


def _run_kernel(cfg: dict):
    profile = profile_from_json(cfg["profile"])
    t_a, t_b = cfg["window"]["t_a"], cfg["window"]["t_b"]
    mu = cfg.get("mu", 1.0)
    if "points" in cfg:
        qa = np.asarray(cfg["points"]["q_a"], dtype=float)
        qb = np.asarray(cfg["points"]["q_b"], dtype=float)
    else:
        g = cfg["grid"]
        axis = uniform_grid(g["q_min"], g["q_max"], g["n"])
        qa = np.repeat(axis, g["n"])
        qb = np.tile(axis, g["n"])
    pair = solve_fundamental(profile, t_a, t_b, cfg.get("tol", 1e-10))
    k, modulus, phase, flag = kernel_batch(pair, qa, qb, mu)
    rows = ((qa[i], t_a, qb[i], t_b, k[i].real, k[i].imag, modulus[i], phase[i], flag)
            for i in range(qa.size))
    out = {"kernel.csv": _csv(
        ["q_a", "t_a", "q_b", "t_b", "re_k", "im_k", "abs_k", "phase", "caustic_flag"],
        rows)}
    summary = {"n_rows": int(qa.size), "caustic_flag": bool(flag),
               "wronskian_drift": float(pair.wronskian_drift)}
    return out, summary, None


def _run_classical(cfg: dict):
    profile = profile_from_json(cfg["profile"])
    t_a, t_b = cfg["window"]["t_a"], cfg["window"]["t_b"]
    pair = solve_fundamental(profile, t_a, t_b, cfg.get("tol", 1e-10))
    ts = np.linspace(t_a, t_b, cfg.get("n_samples", 201))
    u, ud, v, vd = pair.state(ts)
    rows = zip(ts, u, ud, v, vd)
    out = {"classical.csv": _csv(["t", "u", "udot", "v", "vdot"], rows)}
    summary = {"wronskian_drift": float(pair.wronskian_drift),
               "event_times": [float(t) for t in pair.event_times]}
    return out, summary, None


def _run_propagate(cfg: dict):
    profile = profile_from_json(cfg["profile"])
    t_b = cfg["window"]["t_b"]
    mu = cfg.get("mu", 1.0)
    packet = _packet(cfg)
    method = cfg["method"]
    if method == "kernel":
        result = propagate_kernel(profile, packet, t_b, mu, cfg.get("tol", 1e-10))
    elif method == "crank_nicolson":
        result = crank_nicolson(profile, packet, t_b, mu, cfg.get("dt", 1e-3))
    else:
        result = time_sliced(profile, packet, t_b, cfg.get("n_slices", 128), mu)
    rows = zip(result.q, result.psi.real, result.psi.imag, np.abs(result.psi))
    out = {"wavepacket.csv": _csv(["q", "re_psi", "im_psi", "abs_psi"], rows)}
    summary = {"method": method, "t_b": float(t_b), "norm": result.norm(),
               "mean_q": result.mean_q(), "mean_q2": result.mean_q2()}
    return out, summary, None


def _run_validate(cfg: dict):
    from .errors import DomainError
    profile = profile_from_json(cfg["profile"])
    sol = closed_form(profile)
    if sol is None:
        raise DomainError(
            f"no closed-form reference for profile type {cfg['profile']['type']!r}")
    window = (cfg["window"]["t_a"], cfg["window"]["t_b"])
    report = verify_solution(profile, sol, window, h=cfg.get("h", 1e-2),
                             n_samples=cfg.get("n_samples", 200))
    doc = {
        "family": sol.family,
        "label": sol.label,
        "params": sol.params,
        "claimed_exact": sol.satisfies_equation,
        "note": sol.note,
        "report": {
            "passed": report.passed,
            "window": list(report.window),
            "h": report.h,
            "max_residual": report.max_residual,
            "max_residual_refined": report.max_residual_refined,
            "slope": report.slope if report.slope != float("inf") else None,
            "calibration_c": report.calibration_c,
            "worst_t": report.worst_t,
            "jump_mismatches": [list(j) for j in report.jump_mismatches],
            "note": report.note,
        },
    }
    out = {"validate.json": _json_bytes(doc)}
    summary = {"family": sol.family, "passed": report.passed}
    strict_fail = None if report.passed else \
        f"closed form for {sol.family!r} fails the residual check " \
        f"(max residual {report.max_residual:.3e}, slope {report.slope:.2f})"
    return out, summary, strict_fail


def _run_compare(cfg: dict):
    profile = profile_from_json(cfg["profile"])
    t_b = cfg["window"]["t_b"]
    mu = cfg.get("mu", 1.0)
    packet = _packet(cfg)
    results = {
        "kernel": propagate_kernel(profile, packet, t_b, mu, cfg.get("tol", 1e-10)),
        "crank_nicolson": crank_nicolson(profile, packet, t_b, mu, cfg.get("dt", 1e-3)),
        "time_sliced": time_sliced(profile, packet, t_b, cfg.get("n_slices", 128), mu),
    }
    doc = {"norms": {k: v.norm() for k, v in results.items()}}
    worst = 0.0
    for a, b in (("kernel", "crank_nicolson"), ("kernel", "time_sliced"),
                 ("crank_nicolson", "time_sliced")):
        c = compare(results[a], results[b])
        doc[f"{a}_vs_{b}"] = {
            "l2_error": c["l2_error"],
            "max_error": c["max_error"],
            "norm_ratio": c["norm_ratio"],
            "overlap": [c["overlap"].real, c["overlap"].imag],
        }
        worst = max(worst, c["l2_error"])
    tolerance = cfg.get("tolerance", 1e-3)
    doc["max_l2_error"] = worst
    doc["tolerance"] = tolerance
    doc["passed"] = worst <= tolerance
    out = {"compare.json": _json_bytes(doc)}
    summary = {"max_l2_error": worst, "passed": doc["passed"]}
    strict_fail = None if doc["passed"] else \
        f"methods disagree: max L2 error {worst:.3e} > tolerance {tolerance:.1e}"
    return out, summary, strict_fail


_RUNNERS = {
    "kernel": _run_kernel,
    "classical": _run_classical,
    "propagate": _run_propagate,
    "validate": _run_validate,
    "compare": _run_compare,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="tdho",
        description="Exact propagator of the harmonic oscillator with "
                    "time-dependent frequency.")
    parser.add_argument("--version", action="version", version=f"tdho {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "kernel": "propagator values on endpoint pairs or a grid",
        "classical": "sample the fundamental solution pair",
        "propagate": "evolve a Gaussian wavepacket by one method",
        "validate": "grade a closed-form catalog entry against its equation",
        "compare": "cross-check kernel, finite-difference, and sliced evolution",
    }
    for name in _TASKS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--config", required=True, type=Path,
                       help="JSON run configuration")
        p.add_argument("--out", type=Path, default=None,
                       help="output directory (default: $TDHO_OUT, else '.')")
        p.add_argument("--strict", action="store_true",
                       help="exit 2 when a graded check fails")
    args = parser.parse_args(argv)

    try:
        raw = args.config.read_bytes()
    except OSError as exc:
        print(f"config error: cannot read {args.config}: {exc}", file=sys.stderr)
        return 1
    try:
        cfg = json.loads(raw)
    except json.JSONDecodeError as exc:
        print(f"config error: {args.config} is not valid JSON: {exc}", file=sys.stderr)
        return 1
    if not isinstance(cfg, dict) or cfg.get("task") != args.command:
        print(f"config error at $.task: expected {args.command!r}, "
              f"got {cfg.get('task')!r}" if isinstance(cfg, dict)
              else "config error: top level must be a JSON object", file=sys.stderr)
        return 1
    msg = _validate_config(cfg, args.command)
    if msg is not None:
        print(msg, file=sys.stderr)
        return 1

    out_dir = args.out or Path(os.environ.get("TDHO_OUT") or ".")
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"config error: cannot create {out_dir}: {exc}", file=sys.stderr)
        return 1

    try:
        outputs, summary, strict_fail = _RUNNERS[args.command](cfg)
    except TdhoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    manifest = {
        "command": args.command,
        "version": __version__,
        "config_sha256": hashlib.sha256(raw).hexdigest(),
        "outputs": {name: hashlib.sha256(data).hexdigest()
                    for name, data in outputs.items()},
        "summary": summary,
    }
    for name, data in outputs.items():
        _write_atomic(out_dir / name, data)
        print(f"wrote {out_dir / name}")
    _write_atomic(out_dir / "manifest.json", _json_bytes(manifest))
    print(f"wrote {out_dir / 'manifest.json'}")

    if args.strict and strict_fail is not None:
        print(f"strict: {strict_fail}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
