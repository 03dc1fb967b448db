"""Command line experiment runner.

Every command draws trial ``k`` from the Philox stream ``(seed, k)``, runs a
set of named checks and writes one row per trial.  A row passes when every
check is within its configured tolerance; the process exits with 0 only if
every row passes.
"""

import argparse
import dataclasses
import hashlib
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import doi as doi_mod
from . import numkernel as nk
from . import operators as op
from .errors import ConfigInvalid, ParseError, SSFLabError
from .funcalc import AnalyticFunction
from .io import function_from_dict, loads_json, matrix_from_dict, ssf_to_csv, ssf_to_dict
from .ssf import appendix as app
from .ssf import determinants as dets
from .ssf import disk, flatten, halfplane, rank_one
from .validation import is_power_of_two

log = logging.getLogger("ssf_lab")

COMMANDS = ("trace-check", "resolvent-check", "doi-check", "ssf", "rankone",
            "dissipative", "dilation", "flatten", "appendix")

DEFAULT_TOLERANCES = {
    "function_trace": 1e-7,
    "mass": 1e-8,
    "resolvent_trace": 1e-7,
    "det_ratio": 1e-9,
    "increment": 1e-9,
    "doi_trace": 1e-9,
    "path_residual": 1e-7,
    "path_order": 0.4,
    "rep_agreement": 1e-8,
    "eta_integral": 1e-4,
    "exp_rep": 1e-5,
    "criterion": 1e-4,
    "halfplane_trace": 1e-6,
    "resolvent_identity": 1e-9,
    "cross_domain": 1e-8,
    "transfer": 1e-8,
    "moments": 1e-9,
    "unitarity": 1e-9,
    "flat_imag": 1e-9,
    "flat_negative": 1e-8,
    "worked_example": 1e-10,
    "order_inequalities": 1e-9,
    "poisson": 2e-4,
    "chain_rule": 1e-9,
    "krein": 1e-6,
}

# check columns per command, in CSV order
CHECKS = {
    "trace-check": ("function_trace", "mass"),
    "resolvent-check": ("resolvent_trace", "det_ratio"),
    "doi-check": ("increment", "doi_trace", "path_residual", "path_order"),
    "ssf": ("mass", "rep_agreement", "resolvent_trace"),
    "rankone": ("eta_integral", "exp_rep", "criterion"),
    "dissipative": ("halfplane_trace", "resolvent_identity", "cross_domain", "transfer"),
    "dilation": ("moments", "unitarity"),
    "flatten": ("flat_imag", "flat_negative", "worked_example"),
    "appendix": ("order_inequalities", "poisson", "chain_rule", "krein"),
}

HELP_COLUMNS = "\n".join(
    f"  {cmd:16s} trial,inputs_hash,{','.join(cols)},passed" for cmd, cols in CHECKS.items())


@dataclasses.dataclass
class ExperimentConfig:
    command: str
    seed: int
    dimension: int = 4
    trials: int = 10
    grid_N: int = 1024
    radii: tuple = (1.1, 1.05, 1.025)
    tolerances: dict = dataclasses.field(default_factory=dict)
    function: dict = None
    matrices: dict = None
    output_path: str = None
    degree: int = 6
    alphas: str = "geometric:0.5:20"
    commands: tuple = COMMANDS
    format: str = "csv"

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise ConfigInvalid("config must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        extra = set(d) - known
        if extra:
            raise ConfigInvalid(f"unknown config fields: {sorted(extra)}")
        if "seed" not in d:
            raise ConfigInvalid("seed is mandatory")
        if "command" not in d:
            raise ConfigInvalid("command is mandatory")
        cfg = cls(**d)
        cfg.validate()
        return cfg

    def validate(self):
        if self.command not in COMMANDS + ("all",):
            raise ConfigInvalid(f"unknown command {self.command!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or self.seed < 0:
            raise ConfigInvalid("seed must be a non-negative integer")
        if not is_power_of_two(self.grid_N) or self.grid_N < 64:
            raise ConfigInvalid(f"grid_N must be a power of two >= 64, got {self.grid_N!r}")
        if not isinstance(self.dimension, int) or not 1 <= self.dimension <= 12:
            raise ConfigInvalid("dimension must be an integer in [1, 12]")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigInvalid("trials must be a positive integer")
        if not isinstance(self.degree, int) or self.degree < 1:
            raise ConfigInvalid("degree must be a positive integer")
        self.radii = tuple(float(r) for r in self.radii)
        if any(r <= 1 for r in self.radii):
            raise ConfigInvalid("radii must exceed 1")
        for k, v in self.tolerances.items():
            if k not in DEFAULT_TOLERANCES:
                raise ConfigInvalid(f"unknown tolerance {k!r}")
            if not isinstance(v, (int, float)) or not v > 0:
                raise ConfigInvalid(f"tolerance {k!r} must be > 0")
        self.commands = tuple(self.commands)
        bad = [c for c in self.commands if c not in COMMANDS]
        if bad:
            raise ConfigInvalid(f"unknown commands {bad}")
        if self.format not in ("csv", "json"):
            raise ConfigInvalid("format must be csv or json")
        if self.function is not None:
            try:
                function_from_dict(self.function)
            except ParseError as exc:
                raise ConfigInvalid(str(exc)) from None
        if self.matrices is not None:
            if set(self.matrices) != {"T1", "T0"}:
                raise ConfigInvalid("matrices must hold exactly T1 and T0")
            try:
                for key in ("T1", "T0"):
                    m = matrix_from_dict(self.matrices[key], f"matrices.{key}")
                    if m.shape != (self.dimension, self.dimension):
                        raise ConfigInvalid(f"matrices.{key} must be {self.dimension}x{self.dimension}")
            except ParseError as exc:
                raise ConfigInvalid(str(exc)) from None

    def tolerance(self, name):
        return float(self.tolerances.get(name, DEFAULT_TOLERANCES[name]))

    def echo(self):
        d = dataclasses.asdict(self)
        d["radii"] = list(self.radii)
        d["commands"] = list(self.commands)
        return d


def _hash(*arrays):
    h = hashlib.sha256()
    for a in arrays:
        h.update(np.ascontiguousarray(np.asarray(a, dtype=complex)).tobytes())
    return h.hexdigest()[:16]


def _random_poly(rng, degree, normalize=False):
    c = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    if normalize:
        c = c / np.sum(np.abs(c))
    return AnalyticFunction.polynomial(c)


def _pair(cfg, rng):
    if cfg.matrices is not None:
        t1 = matrix_from_dict(cfg.matrices["T1"])
        t0 = matrix_from_dict(cfg.matrices["T0"])
        return op.check_contraction(t1), op.check_contraction(t0)
    n = cfg.dimension
    return (op.random_contraction(n, "strict", rng, norm=rng.uniform(0.3, 0.9)),
            op.random_contraction(n, "strict", rng, norm=rng.uniform(0.3, 0.9)))


def _function(cfg, rng, normalize=False):
    if cfg.function is not None:
        return function_from_dict(cfg.function)
    return _random_poly(rng, cfg.degree, normalize)


def _circle(count, radius, phase):
    return radius * np.exp(1j * (phase + 2 * np.pi * np.arange(count) / count))


# --- commands -------------------------------------------------------------

def _trace_check(cfg, rng, trial):
    t1, t0 = _pair(cfg, rng)
    f = _function(cfg, rng)
    s = disk.ssf_canonical(t1, t0, cfg.radii, cfg.grid_N)
    _, _, res = disk.verify_function_trace(t1, t0, s, f)
    return _hash(t1.matrix, t0.matrix, f.coeffs), {
        "function_trace": res / (1 + f.coefficient_scale()),
        "mass": disk.mass_identity(t1, t0, s),
    }


def _resolvent_check(cfg, rng, trial):
    t1, t0 = _pair(cfg, rng)
    s = disk.ssf_canonical(t1, t0, cfg.radii, cfg.grid_N)
    lams = _circle(8, s.grid.radius + 0.1, rng.uniform(0, 2 * np.pi))
    pd = dets.disk_determinant(t1, t0)
    return _hash(t1.matrix, t0.matrix), {
        "resolvent_trace": disk.verify_resolvent_trace(t1, t0, s, lams),
        "det_ratio": dets.ratio_identity_defect(pd, lams),
    }


def _doi_check(cfg, rng, trial):
    t1, t0 = _pair(cfg, rng)
    f = _function(cfg, rng, normalize=True)
    scale = f.coefficient_scale()
    k = rng.normal(size=t1.matrix.shape) + 1j * rng.normal(size=t1.matrix.shape)
    lhs, rhs = doi_mod.doi_trace(f, t0, k)
    pd = doi_mod.path_derivative(f, t0, t1, t=float(rng.uniform(0, 1)), h=1e-4)
    # nan order means every residual sits at the round-off floor
    order_gap = 0.0 if np.isnan(pd.order) else abs(pd.order - 2)
    return _hash(t1.matrix, t0.matrix, f.coeffs, k), {
        "increment": doi_mod.verify_increment(f, t1, t0) / scale,
        "doi_trace": abs(lhs - rhs) / (scale * max(1.0, nk.trace_norm(k))),
        "path_residual": pd.residual,
        "path_order": order_gap,
    }


def _ssf_check(cfg, rng, trial):
    t1, t0 = _pair(cfg, rng)
    reps = disk.ssf_representatives(t1, t0, cfg.radii, cfg.grid_N)
    base = reps["anti-analytic"]
    agree = max(float(np.max(np.abs(r.neg_fourier.coef[:base.N // 2]
                                    - base.neg_fourier.coef[:base.N // 2])[-base.N // 4:]))
                for r in reps.values())
    lams = _circle(8, base.grid.radius + 0.1, 0.5)
    checks = {
        "mass": base.residuals["mass"],
        "rep_agreement": agree,
        "resolvent_trace": disk.verify_resolvent_trace(t1, t0, base, lams),
    }
    return _hash(t1.matrix, t0.matrix), checks, reps


def _rankone(cfg, rng, trial):
    model = rank_one.RankOneModel.from_spec(cfg.alphas)
    z = np.exp(-1j * rng.uniform(0.05, np.pi - 0.05, 16)) * rng.uniform(0.2, 5.0, 16)
    crit = rank_one.rank_one_criterion(model)
    checks = {
        "eta_integral": abs(rank_one.eta_integral(model) / (np.pi * model.C0) - 1),
        "exp_rep": rank_one.rank_one_exp_rep_check(model, z),
        "criterion": 0.0 if crit["bounds_hold"] else 1.0,
    }
    log.info("criterion_sum = %.12g (2 log 2 = %.12g)", crit["criterion_sum"], 2 * np.log(2))
    return _hash(model.alphas, z), checks, crit


def _dissipative(cfg, rng, trial):
    t1, t0 = _pair(cfg, rng)
    l1 = op.cayley_T_to_L(t1)
    l0 = op.cayley_T_to_L(t0)
    omega = halfplane.ssf_halfplane(l1, l0, cfg.grid_N)
    lams = _circle(8, 1.5, rng.uniform(0, 2 * np.pi))
    taus = op.moebius(lams)
    ident = max(op.resolvent_identity_check(t, lam) / (1 + abs(lam)) ** 2
                for t in (t1, t0) for lam in lams)
    transfer = halfplane.cayley_transfer(t1, t0, cfg.grid_N)
    return _hash(t1.matrix, t0.matrix), {
        "halfplane_trace": halfplane.verify_halfplane_trace(l1, l0, omega, taus),
        "resolvent_identity": ident,
        "cross_domain": halfplane.cross_domain_check(t1, t0, lams),
        "transfer": max(transfer["max_nonconstant"],
                        abs(transfer["constant"] - transfer["predicted_constant"])),
    }


def _dilation(cfg, rng, trial):
    n = cfg.dimension
    mode = "boundary-touching" if trial % 2 else "strict"
    t = op.random_contraction(n, mode, rng, norm=rng.uniform(0.3, 0.95))
    degree = cfg.degree
    dil = op.egervary_dilation(t, degree)
    u = dil.unitary
    power = np.eye(n, dtype=complex)
    worst = 0.0
    for k in range(1, degree + 1):
        power = power @ t.matrix
        worst = max(worst, nk.operator_norm(dil.compression(k) - power))
    return _hash(t.matrix), {
        "moments": worst,
        "unitarity": nk.operator_norm(u.conj().T @ u - np.eye(u.shape[0])),
    }


def _flatten(cfg, rng, trial):
    t1, t0 = _pair(cfg, rng)
    s = disk.ssf_canonical(t1, t0, cfg.radii, cfg.grid_N)
    flat = flatten.flatten_real(s)
    theta = s.theta
    example = flatten.flatten_real(1j * np.exp(-1j * theta))
    return _hash(t1.matrix, t0.matrix), {
        "flat_imag": flat.residuals["imag_part"],
        "flat_negative": flat.residuals["negative_defect"],
        "worked_example": float(np.max(np.abs(example.values - 2 * np.sin(theta)))),
    }


def _appendix(cfg, rng, trial):
    n = cfg.dimension
    b = app.random_accumulative(n, rng)
    v = -op.imaginary_part(b) * (1.0 if trial % 2 == 0 else rng.uniform(0.2, 0.9))
    z = rng.uniform(-2, 2, 4) + 1j * rng.uniform(0.2, 2, 4)
    rep = app.outer_rep_check(b, v, z)
    order = max(0.0, -rep["modulus_margin"], -rep["contraction_margin"], -rep["real_part_margin"])
    triple = [op.random_contraction(n, "strict", rng, norm=rng.uniform(0.3, 0.9)).matrix
              for _ in range(3)]
    lams = _circle(6, 1.2, rng.uniform(0, 2 * np.pi))
    h = rng.normal(size=(n, n))
    h = (h + h.T) / 2
    w = rng.normal(size=(n, n))
    w = (w + w.T) / 4
    e = np.sort(np.concatenate([np.linalg.eigvalsh(h), np.linalg.eigvalsh(h + w)]))
    x = np.linspace(e[0] - 1, e[-1] + 1, 64)
    x = x[np.min(np.abs(x[:, None] - e[None, :]), axis=1) > 0.05]
    krein = app.krein_recovery(h, w, x)["max_error"]
    return _hash(b, v, *triple, h, w), {
        "order_inequalities": order,
        "poisson": rep["poisson_recovery"],
        "chain_rule": dets.chain_rule_check(*triple, lams),
        "krein": krein,
    }


RUNNERS = {
    "trace-check": _trace_check,
    "resolvent-check": _resolvent_check,
    "doi-check": _doi_check,
    "ssf": _ssf_check,
    "rankone": _rankone,
    "dissipative": _dissipative,
    "dilation": _dilation,
    "flatten": _flatten,
    "appendix": _appendix,
}

SINGLE_TRIAL = ("rankone",)


def run_command(cfg, command):
    """Run one command; returns ``(rows, extras)``."""
    trials = 1 if (command in SINGLE_TRIAL or cfg.matrices is not None) else cfg.trials
    rows = []
    extras = {}
    for trial in range(trials):
        rng = op.make_rng(cfg.seed, COMMANDS.index(command), trial)
        row = {"trial": trial}
        try:
            out = RUNNERS[command](cfg, rng, trial)
        except SSFLabError as exc:
            log.error("%s trial %d (seed %d): %s: %s", command, trial, cfg.seed,
                      type(exc).__name__, exc)
            row.update(inputs_hash="", passed=False, error=f"{type(exc).__name__}: {exc}")
            row.update({name: float("nan") for name in CHECKS[command]})
            rows.append(row)
            continue
        inputs_hash, checks = out[0], out[1]
        if len(out) > 2 and trial == 0:
            extras["detail"] = out[2]
        row["inputs_hash"] = inputs_hash
        row.update({name: float(checks[name]) for name in CHECKS[command]})
        row["passed"] = all(checks[name] <= cfg.tolerance(name) for name in CHECKS[command])
        if not row["passed"]:
            log.warning("%s trial %d failed: %s", command, trial,
                        {k: checks[k] for k in CHECKS[command]})
        rows.append(row)
    return rows, extras


def rows_to_csv(command, rows):
    cols = ("trial", "inputs_hash") + CHECKS[command] + ("passed",)
    lines = [",".join(cols)]
    for row in rows:
        cells = []
        for c in cols:
            v = row[c]
            if isinstance(v, bool):
                cells.append("true" if v else "false")
            elif isinstance(v, float):
                cells.append(repr(v))
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def summarize(rows, command):
    vals = {name: max((r[name] for r in rows), default=0.0) for name in CHECKS[command]}
    return {"max_residual": vals, "pass_count": sum(r["passed"] for r in rows),
            "rows": len(rows)}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items() if not hasattr(v, "grid")}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)) and not isinstance(obj, bool):
        return int(obj)
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    return obj


def run(cfg):
    """Execute a validated config and write its outputs; returns the report dict."""
    start = time.perf_counter()
    commands = cfg.commands if cfg.command == "all" else (cfg.command,)
    sections = {}
    out = Path(cfg.output_path) if cfg.output_path else None
    if cfg.command == "all" and out is not None:
        out.mkdir(parents=True, exist_ok=True)
    for command in commands:
        rows, extras = run_command(cfg, command)
        sections[command] = {"rows": rows, "summary": summarize(rows, command)}
        if command == "rankone" and "detail" in extras:
            sections[command]["criterion"] = extras["detail"]
        csv_text = rows_to_csv(command, rows)
        if command == "ssf" and "detail" in extras:
            reps = extras["detail"]
            sections[command]["ssf"] = ssf_to_dict(reps["anti-analytic"])
            csv_text_ssf = "".join(
                ssf_to_csv(r) if i == 0 else ssf_to_csv(r).split("\n", 1)[1]
                for i, r in enumerate((reps["anti-analytic"], reps["real-argument"])))
            if out is not None and cfg.format == "csv":
                target = out / "ssf_values.csv" if cfg.command == "all" else out.with_name(
                    out.stem + "_values.csv")
                target.write_text(csv_text_ssf)
        if out is not None and cfg.format == "csv":
            target = out / f"{command}.csv" if cfg.command == "all" else out
            target.write_text(csv_text)
    passed = all(s["summary"]["pass_count"] == s["summary"]["rows"] for s in sections.values())
    report = {
        "config_echo": cfg.echo(),
        "sections": sections,
        "passed": passed,
        "wall_time": time.perf_counter() - start,
    }
    if out is not None:
        if cfg.command == "all":
            json_path = out / "report.json"
        elif cfg.format == "json":
            json_path = out
        else:
            json_path = out.with_suffix(".json")
        json_path.write_text(json.dumps(_jsonable(report), indent=1, allow_nan=True))
    return report


def _setup_logging():
    level = os.environ.get("SSF_LAB_LOG", "quiet").lower()
    levels = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    if level not in levels:
        raise ConfigInvalid(f"SSF_LAB_LOG must be one of {sorted(levels)}, got {level!r}")
    logging.basicConfig(level=levels[level], format="%(levelname)s %(name)s: %(message)s",
                        stream=sys.stderr, force=True)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ssf-lab",
        description="Numerical verification of spectral shift function identities.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="CSV columns per command:\n" + HELP_COLUMNS
        + "\n\nThe 'all' command writes one CSV per command plus report.json into --out."
        + "\nEnvironment: SSF_LAB_LOG = quiet | info | debug.")
    parser.add_argument("command", choices=COMMANDS + ("all",))
    parser.add_argument("--config", help="JSON config file; flags override its fields")
    parser.add_argument("--dim", type=int, dest="dimension")
    parser.add_argument("--trials", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--grid", type=int, dest="grid_N")
    parser.add_argument("--degree", type=int)
    parser.add_argument("--alphas", help="rank-one sequence, e.g. geometric:0.5:20")
    parser.add_argument("--out", dest="output_path")
    parser.add_argument("--format", choices=("csv", "json"))
    return parser


def config_from_args(args):
    if args.config:
        path = Path(args.config)
        if not path.exists():
            raise ConfigInvalid(f"config file {path} not found")
        base = loads_json(path.read_text(), str(path))
        if not isinstance(base, dict):
            raise ConfigInvalid("config must be a JSON object")
        if "seed" not in base and args.seed is None:
            raise ConfigInvalid("seed is mandatory")
    else:
        base = {"seed": 0}
    base = dict(base)
    base["command"] = args.command
    for key in ("dimension", "trials", "seed", "grid_N", "degree", "alphas",
                "output_path", "format"):
        value = getattr(args, key)
        if value is not None:
            base[key] = value
    return ExperimentConfig.from_dict(base)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _setup_logging()
        cfg = config_from_args(args)
    except (ConfigInvalid, ParseError) as exc:
        print(f"ssf-lab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    report = run(cfg)
    for command, section in report["sections"].items():
        s = section["summary"]
        print(f"{command:16s} {s['pass_count']}/{s['rows']} passed")
        if command == "rankone" and "criterion" in section:
            c = section["criterion"]
            print(f"  criterion_sum = {c['criterion_sum']:.10f}  (2 log 2 = {2 * np.log(2):.10f})")
            print(f"  conjugate mass = {c['weighted_conjugate_mass']:.10f}  "
                  f"bounds [{c['lower_bound']:.6f}, {c['upper_bound']:.6f}]")
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
