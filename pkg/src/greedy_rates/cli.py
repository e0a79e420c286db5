"""Command-line entry point.

    greedy-rates run --algorithm wga --t 1 --b 0.25 --dim 3 --m 4 --f ones
    greedy-rates sweep --algorithm dga --q 1.5 --b 0.5 --trials 20
    greedy-rates verify --suite all --seed 42 --out report.json
    greedy-rates sigma --q 1.5 --f ones:6 --m 3
    greedy-rates demo-trig --m 2 --q 4

Exit status is 0 iff every asserted inequality passed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import experiments as ex
from .banach import RD, STAR, DgaParams, run_dga
from .dictionaries import SELECTION_MODES, Dictionary
from .hilbert import run_oga, run_pga, run_wga
from .oracles import sigma_m_basis, trig_lacunary_demo
from .spaces import Element, SpaceSpec
from .trace import fmt_float

COMMANDS = ("run", "sweep", "verify", "sigma", "demo-trig")
ALGORITHMS = ("pga", "oga", "wga", "dga", "dga-star")
SEED_ENV = "GREEDY_SEED"


@dataclass
class CliConfig:
    command: str
    algorithm: str = "wga"
    space: str = "hilbert"
    q: float = 2.0
    t: float = 1.0
    b: Optional[float] = None
    gamma: Optional[float] = None
    q_majorant: Optional[float] = None
    dim: Optional[int] = None
    m: Sequence[int] = (10,)
    f: str = "ones"
    dictionary: Optional[str] = None
    seed: int = 0
    mode: str = "exact"
    out: Optional[str] = None
    format: str = "json"
    suite: Sequence[str] = ("all",)
    threads: int = 1
    scale: float = 1.0
    trials: int = 20
    dims: Sequence[int] = (4, 16, 64)
    quad_points: Optional[int] = None
    timing: bool = False
    extra: dict = field(default_factory=dict)

    def space_spec(self) -> SpaceSpec:
        if self.space == "hilbert":
            return SpaceSpec.hilbert()
        return SpaceSpec.lq(self.q, self.gamma, self.q_majorant)


def _int_list(text: str) -> list:
    return [int(v) for v in text.split(",") if v.strip()]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="greedy-rates",
                                     description="Greedy expansions and their rate bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    def algo(p, default="wga"):
        p.add_argument("--algorithm", choices=ALGORITHMS, default=default)
        p.add_argument("--space", default="hilbert",
                       help="'hilbert' or 'lq' (use --q for the exponent)")
        p.add_argument("--q", type=float, default=2.0)
        p.add_argument("--t", type=float, default=1.0)
        p.add_argument("--b", type=float, default=None)
        p.add_argument("--gamma", type=float, default=None)
        p.add_argument("--q-majorant", dest="q_majorant", type=float, default=None)
        p.add_argument("--mode", choices=SELECTION_MODES, default="exact")

    p = sub.add_parser("run", help="run one greedy expansion and emit its trace")
    algo(p)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--m", type=int, default=10)
    p.add_argument("--f", default="ones",
                   help="'ones', 'ones:K', a comma list, or a file with one float per line")
    p.add_argument("--dictionary", default=None, help="dictionary JSON file")
    common(p)

    p = sub.add_parser("sweep", help="bound-domination sweep over random inputs")
    algo(p)
    p.add_argument("--dims", type=_int_list, default=[4, 16, 64])
    p.add_argument("--m", type=int, default=200)
    p.add_argument("--trials", type=int, default=20)
    common(p)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--suite", default="all",
                   help="'all' or a comma list of: " + ", ".join(ex.SUITE_NAMES))
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--scale", type=float, default=1.0,
                   help="multiplier on trial counts")
    p.add_argument("--timing", action="store_true", help="include runtimes in JSON")
    common(p)

    p = sub.add_parser("sigma", help="best m-term error over the standard basis")
    p.add_argument("--space", default="lq")
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--f", default="ones")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--m", type=_int_list, default=[1])
    common(p)

    p = sub.add_parser("demo-trig", help="lacunary cosine sum in L_q")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--q", type=float, default=4.0)
    p.add_argument("--quad-points", dest="quad_points", type=int, default=None)
    common(p)
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> CliConfig:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    d = vars(ns)
    cfg = CliConfig(command=d.pop("command"))
    for k, v in d.items():
        if k == "m":
            v = tuple(v) if isinstance(v, list) else (v,)
        if k == "suite":
            v = tuple(s.strip() for s in v.split(","))
        setattr(cfg, k, v)
    env_seed = os.environ.get(SEED_ENV)
    if env_seed is not None:
        try:
            cfg.seed = int(env_seed)
        except ValueError:
            parser.error(f"{SEED_ENV} must be an integer, got {env_seed!r}")
    try:
        _validate(cfg)
    except ValueError as err:
        parser.error(str(err))
    return cfg


def _validate(cfg: CliConfig):
    if cfg.space not in ("hilbert", "lq"):
        raise ValueError(f"--space must be 'hilbert' or 'lq', got {cfg.space!r}")
    if not (1.0 < cfg.q < math.inf):
        raise ValueError(f"--q must lie in (1, inf), got {cfg.q}")
    if cfg.command in ("run", "sweep"):
        if not (0.0 < cfg.t <= 1.0):
            raise ValueError(f"--t must lie in (0, 1], got {cfg.t}")
        dual = cfg.algorithm in ("dga", "dga-star")
        if cfg.b is None:
            cfg.b = 0.5 if dual else 1.0
        if dual and not (0.0 < cfg.b < 1.0):
            raise ValueError(f"--b must lie in (0, 1) for {cfg.algorithm}; "
                             f"the dual greedy convergence guarantee excludes b = 1 (got {cfg.b})")
        if not dual and not (0.0 < cfg.b <= 1.0):
            raise ValueError(f"--b must lie in (0, 1], got {cfg.b}")
        if not dual and cfg.space != "hilbert":
            raise ValueError(f"--algorithm {cfg.algorithm} needs --space hilbert")
        if cfg.gamma is not None and cfg.gamma <= 0:
            raise ValueError("--gamma must be positive")
        if cfg.q_majorant is not None and not (1.0 < cfg.q_majorant <= 2.0):
            raise ValueError("--q-majorant must lie in (1, 2]")
        if cfg.command == "sweep" and dual and cfg.space == "lq" and cfg.q > 2.0:
            raise ValueError("--q must lie in (1, 2] for a dga sweep")
    if cfg.command in ("run", "sigma") and cfg.dim is not None and cfg.dim < 1:
        raise ValueError("--dim must be positive")
    if cfg.command == "verify":
        bad = set(cfg.suite) - set(ex.SUITE_NAMES) - {"all"}
        if bad:
            raise ValueError(f"--suite: unknown experiments {sorted(bad)}")
        if cfg.threads < 1:
            raise ValueError("--threads must be at least 1")
    if cfg.command == "demo-trig" and cfg.q <= 2.0:
        raise ValueError("--q must exceed 2 for demo-trig")


def parse_vector(spec: str, dim: Optional[int] = None) -> np.ndarray:
    """'ones', 'ones:K' (K ones padded with zeros to ``dim``), a comma list,
    or a path to a file with one float per line."""
    if spec == "ones":
        if dim is None:
            raise ValueError("'ones' needs --dim")
        return np.ones(dim)
    if spec.startswith("ones:"):
        k = int(spec[5:])
        n = dim if dim is not None else k
        if n < k:
            raise ValueError(f"--dim {n} is smaller than {k}")
        v = np.zeros(n)
        v[:k] = 1.0
        return v
    if "," in spec or not Path(spec).exists():
        v = np.array([float(x) for x in spec.split(",") if x.strip()])
    else:
        v = np.array([float(x) for x in Path(spec).read_text().split()])
    if dim is not None and v.size != dim:
        raise ValueError(f"vector has {v.size} entries but --dim is {dim}")
    return v


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _write(text: str, path: Optional[str]):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    except OSError as err:
        raise SystemExit(f"cannot write {path}: {err}")


def emit_report(reports, fmt: str = "json", path: Optional[str] = None,
                config: Optional[dict] = None, timing: bool = False) -> str:
    """Write experiment reports as one JSON object or a flat CSV.

    Output is byte-identical for identical reports: JSON keys are sorted,
    CSV columns are fixed, floats round-trip. Runtimes appear only with
    ``timing``.
    """
    if isinstance(reports, ex.ExperimentReport):
        reports = [reports]
    if fmt == "csv":
        text = ex.reports_to_csv(reports)
    elif fmt == "json":
        text = _dump_json({"config": config or {},
                           "pass": all(r.passed for r in reports),
                           "reports": [r.to_dict(timing) for r in reports]})
    else:
        raise ValueError(f"unknown format {fmt!r}")
    _write(text, path)
    return text


def read_report_json(text: str) -> list:
    return [ex.ExperimentReport.from_dict(d) for d in json.loads(text)["reports"]]


def _config_echo(cfg: CliConfig) -> dict:
    d = asdict(cfg)
    d.pop("extra")
    return d


def _run(cfg: CliConfig) -> int:
    space = cfg.space_spec()
    if cfg.dictionary:
        D = Dictionary.from_json(Path(cfg.dictionary).read_text())
        D = Dictionary(D.atoms, space, D.kind, D.dim)
    else:
        D = None
    dim = cfg.dim if cfg.dim is not None else (D.dim if D is not None else None)
    f = Element(parse_vector(cfg.f, dim), space)
    if D is None:
        D = Dictionary.standard_basis(f.dim, space)
    a1 = float(np.sum(np.abs(f.coeffs))) if D.is_standard_basis else None
    m = cfg.m[0]
    if cfg.algorithm == "wga":
        trace = run_wga(f, D, m, cfg.t, cfg.b, cfg.mode, cfg.seed, a1=a1)
    elif cfg.algorithm == "pga":
        trace = run_pga(f, D, m, a1=a1)
    elif cfg.algorithm == "oga":
        trace = run_oga(f, D, m)
    else:
        variant = RD if cfg.algorithm == "dga" else STAR
        params = DgaParams.for_space(space, cfg.t, cfg.b, variant)
        trace = run_dga(f, D, m, params, cfg.mode, cfg.seed, a1=a1)
    if cfg.format == "csv":
        _write(trace.to_csv(), cfg.out)
    else:
        d = trace.to_dict()
        d["config"] = _config_echo(cfg)
        _write(_dump_json(d), cfg.out)
    return 0


def _sweep(cfg: CliConfig) -> ex.ExperimentReport:
    m = cfg.m[0]
    if cfg.algorithm in ("wga", "pga"):
        t, b = (1.0, 1.0) if cfg.algorithm == "pga" else (cfg.t, cfg.b)
        return ex.wga_upper_sweep(t, b, cfg.dims, m, cfg.trials, cfg.mode, cfg.seed)
    if cfg.algorithm == "oga":
        return ex.oga_upper_sweep([d for d in cfg.dims if d <= 64], m, cfg.trials, cfg.seed)
    variant = RD if cfg.algorithm == "dga" else STAR
    q = 2.0 if cfg.space == "hilbert" else cfg.q
    return ex.dga_upper_sweep(q, cfg.gamma, cfg.t, cfg.b, variant, cfg.dims, m,
                              cfg.trials, cfg.seed, cfg.mode)


def _finish(reports, cfg: CliConfig) -> int:
    emit_report(reports, cfg.format, cfg.out, _config_echo(cfg), cfg.timing)
    failures = [msg for r in reports for msg in r.failures()]
    if failures:
        sys.stderr.write(f"{len(failures)} failed inequality checks:\n")
        for msg in failures[:50]:
            sys.stderr.write("  " + msg + "\n")
        return 1
    return 0


def _sigma(cfg: CliConfig) -> int:
    f = Element(parse_vector(cfg.f, cfg.dim), cfg.space_spec())
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    rows = [sigma_m_basis(f, m) for m in cfg.m]
    if cfg.format == "csv":
        w.writerow(("m", "value", "support", "method"))
        for r in rows:
            w.writerow((r.m, fmt_float(r.value), " ".join(map(str, r.support)), r.method))
        _write(buf.getvalue(), cfg.out)
    else:
        _write(_dump_json({"config": _config_echo(cfg),
                           "results": [asdict(r) for r in rows]}), cfg.out)
    return 0


def _demo_trig(cfg: CliConfig) -> int:
    res = trig_lacunary_demo(cfg.m[0], cfg.q, cfg.quad_points)
    d = asdict(res)
    d["ratios"] = {format(k, "g"): v for k, v in res.ratios.items()}
    d["l2_exact"] = res.l2_exact
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("alpha", "ratio"))
        for a, v in res.ratios.items():
            w.writerow((fmt_float(a), fmt_float(v)))
        _write(buf.getvalue(), cfg.out)
    else:
        _write(_dump_json({"config": _config_echo(cfg), "result": d}), cfg.out)
    ok = abs(res.l2_norm - res.l2_exact) <= 1e-6 and res.lq_norm_normalized >= res.l2_norm_normalized
    return 0 if ok else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    cfg = parse_args(argv)
    try:
        if cfg.command == "run":
            return _run(cfg)
        if cfg.command == "sweep":
            return _finish([_sweep(cfg)], cfg)
        if cfg.command == "verify":
            reports = ex.run_all(ex.SuiteConfig(cfg.seed, cfg.suite, cfg.threads, cfg.scale))
            return _finish(reports, cfg)
        if cfg.command == "sigma":
            return _sigma(cfg)
        return _demo_trig(cfg)
    except ValueError as err:
        sys.stderr.write(f"greedy-rates: error: {err}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
