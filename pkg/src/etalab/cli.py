"""Command-line entry point: ``etalab <command> [options]``.

Every command writes a JSON document {"meta": ..., "result": ...} (the scan
command writes CSV with the metadata as a leading '#' line).  ``meta`` echoes
the full run configuration, so an output file can be turned back into the
RunConfig that produced it.  Exit codes: 0 ok, 2 domain error, 3 I/O error.
"""

import argparse
import io
import json
import math
import os
import platform
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy

from . import __version__
from .errors import EtaLabError

EXIT_OK, EXIT_DOMAIN, EXIT_IO = 0, 2, 3

# keys that live on RunConfig itself rather than in its parameter map
_GLOBAL = ("seed", "out", "zeros", "assume_rh", "threads", "config")


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    output: str = "-"
    zeros: str = "fixture"
    assume_rh: bool = True

    @classmethod
    def from_output(cls, text):
        """Recover the RunConfig from the text of an output file (JSON or CSV)."""
        if text.startswith("#"):
            meta = json.loads(text.splitlines()[0][1:])
        else:
            meta = json.loads(text)["meta"]
        return cls(**meta["config"])


def _fmt(x):
    """Round floats to 15 significant digits, recursively; non-finite floats become null."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return None
        return float(f"{x:.15g}")
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, complex):
        return {"re": _fmt(x.real), "im": _fmt(x.imag)}
    if isinstance(x, dict):
        return {str(k): _fmt(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_fmt(v) for v in x]
    return x


def _meta(cfg, wall):
    return {
        "config": asdict(cfg),
        "seed": cfg.seed,
        "versions": {"etalab": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
                     "python": platform.python_version()},
        "wall_time": wall,
    }


def _catalog(cfg):
    from .zeros import ingest_zeros, load_fixture

    if cfg.zeros == "fixture":
        return load_fixture()
    return ingest_zeros(cfg.zeros, assume_rh=cfg.assume_rh)


def _floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text):
    return [int(v) for v in text.split(",") if v.strip()]


def _complexes(text):
    return [complex(v.strip().replace(" ", "")) for v in text.split(",") if v.strip()]


# ---------------------------------------------------------------------------
# commands; each returns (result, format) with format "json" or "csv"


def cmd_eval(a, cfg, threads):
    from .analytic import eta_continuation, eta_series
    from .batch import eta_batch
    from .errors import DomainError
    from .prime_sums import smoothed_sum, truncated_sum

    s = complex(a.sigma, a.t)
    if not a.sigma > 0.5:
        raise DomainError(f"sigma out of range: {a.sigma} (need sigma > 1/2)")
    out = {"method": a.method, "m": a.m, "sigma": a.sigma, "t": a.t}
    if a.method == "series":
        v, err = eta_series(a.m, s)
        out["tail_bound"] = err
    elif a.method == "continuation":
        v, err = eta_continuation(a.m, s, _catalog(cfg))
        out["tail_bound"] = err
    elif a.method == "batch":
        v = complex(eta_batch(a.m, [s], catalog=_catalog(cfg), threads=threads)[0])
    elif a.method == "truncated":
        v = truncated_sum(a.m, s, a.y)
        out["y"] = a.y
    else:
        v = smoothed_sum(a.m, s, a.y)
        out["y"] = a.y
    out["re"], out["im"] = v.real, v.imag
    return out, "json"


def cmd_scan(a, cfg, threads):
    from .prime_sums import ScanRequest, batched_scan

    req = ScanRequest(a.m, a.sigma, a.tau0, a.step, a.count, a.y, a.smoothed)
    vals = batched_scan(req)
    return (req.taus, vals), "csv"


def _rect(a):
    from .zeros import CompactRectSpec

    return CompactRectSpec(a.sigma_min, a.sigma_max, a.t_min, a.t_max, a.M)


def cmd_search(a, cfg, threads):
    from .lab import shift_search, shifted_values, stratified_shifts
    from .zeros import valid_shifts

    K = _rect(a)
    cat = _catalog(cfg)
    planted = None
    if a.plant is not None:
        taus = stratified_shifts(valid_shifts(cat, K, a.T), a.num_tau, cfg.seed)
        planted = float(taus[a.plant])
        target = shifted_values(a.m, [planted], K, catalog=cat, threads=threads)[0]
    else:
        target = _complexes(a.target)
    res = shift_search(a.m, K, target, a.epsilon, a.T, a.num_tau, cfg.seed, cat, threads=threads)
    out = res.to_json()
    out["planted_tau"] = planted
    out["planted_stratum"] = a.plant
    return out, "json"


def cmd_dense(a, cfg, threads):
    from .lab import denseness_probe

    rep = denseness_probe(a.m, a.n, a.sigma, a.t_max, a.step, _floats(a.box), a.cells, _catalog(cfg), threads)
    return rep.to_json(), "json"


def cmd_model(a, cfg, threads):
    from .random_model import model_moments, sample_omega

    rep = model_moments(a.m, a.sigma, a.P, a.samples, cfg.seed)
    out = rep.to_json()
    if a.phases_out:
        with open(a.phases_out, "w", encoding="utf-8") as fh:
            fh.write(sample_omega(cfg.seed, a.P).to_csv())
        out["phases_file"] = a.phases_out
    return out, "json"


def cmd_dist(a, cfg, threads):
    from .lab import distribution_compare

    return distribution_compare(a.m, a.sigma, a.T, a.num_tau, a.P, a.num_omega, cfg.seed, _catalog(cfg),
                                continuation=a.continuation, threads=threads), "json"


def cmd_equi(a, cfg, threads):
    from .lab import equidistribution_check

    emp, bound = equidistribution_check(_ints(a.primes), _ints(a.exponents), a.T)
    return {"empirical_re": emp.real, "empirical_im": emp.imag, "abs_empirical": abs(emp), "bound": bound,
            "holds": abs(emp) <= bound * (1 + 1e-12)}, "json"


def cmd_zeros(a, cfg, threads):
    from .lab import _no_catalog_shifts
    from .zeros import ingest_zeros, load_fixture, valid_shifts

    path = a.file or (cfg.zeros if cfg.zeros != "fixture" else None)
    cat = ingest_zeros(path, assume_rh=cfg.assume_rh) if path else load_fixture()
    out = {"action": a.action, "source": cat.source, "count": len(cat), "height_bound": cat.height_bound,
           "assume_rh": cat.assume_rh,
           "first": cat.gammas[:3].tolist(), "last": cat.gammas[-3:].tolist()}
    if a.action == "shifts":
        K = _rect(a)
        I = valid_shifts(cat, K, a.T)
        out["T"] = a.T
        out["measure"] = float(I.measure)
        out["intervals"] = I.to_list()
        if a.csv_out:
            with open(a.csv_out, "w", encoding="utf-8") as fh:
                I.to_csv(fh)
    return out, "json"


def cmd_mellin(a, cfg, threads):
    from .prime_sums import decay_fit, mellin_inversion_check, mellin_phi, residue_check

    res = residue_check(1e-4)
    fit = decay_fit(N=4)
    bound_40 = fit["C"] * 41.0**-4
    val_40 = abs(mellin_phi(complex(-0.5, 40.0)))
    xs = np.linspace(0.1, 3.0, 20)
    errs = [mellin_inversion_check(float(x), 2.0, 200.0) for x in xs]
    checks = {
        "residue": {"value": res, "pass": abs(res - 1) <= 1e-3},
        "decay": dict(fit, value_at_40=val_40, bound_at_40=bound_40, **{"pass": fit["stable"] and val_40 <= bound_40}),
        "inversion": {"x": xs.tolist(), "errors": errs, "max_error": max(errs), "pass": max(errs) <= 1e-6},
    }
    checks["all_pass"] = all(c["pass"] for c in checks.values())
    return checks, "json"


# ---------------------------------------------------------------------------
# parser


def _add_rect(p, M=256):
    p.add_argument("--sigma-min", type=float, default=0.7)
    p.add_argument("--sigma-max", type=float, default=0.8)
    p.add_argument("--t-min", type=float, default=-0.05)
    p.add_argument("--t-max", type=float, default=0.05)
    p.add_argument("--M", type=int, default=M)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default="-", help="output file (default stdout)")
    common.add_argument("--zeros", default="fixture", help="zero table path (default: bundled table to height 1000)")
    common.add_argument("--assume-rh", dest="assume_rh", action="store_true", default=True)
    common.add_argument("--no-assume-rh", dest="assume_rh", action="store_false")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--config", default=None, help="file of key=value lines (explicit flags win)")

    parser = argparse.ArgumentParser(prog="etalab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate eta_m at one point")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--method", choices=["series", "continuation", "batch", "truncated", "smoothed"],
                   default="continuation")
    p.add_argument("--y", type=float, default=1e5)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("scan", parents=[common], help="prime sums on a tau grid (CSV)")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--tau0", type=float, default=None)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--y", type=float, default=1e5)
    p.add_argument("--smoothed", action="store_true")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("search", parents=[common], help="universality shift search")
    p.add_argument("--m", type=int, default=0)
    _add_rect(p)
    p.add_argument("--T", type=float, default=1e4)
    p.add_argument("--num-tau", dest="num_tau", type=int, default=1000)
    p.add_argument("--epsilon", type=float, default=1e-3)
    p.add_argument("--target", default="0", help="polynomial coefficients in powers of s - centre(K)")
    p.add_argument("--plant", type=int, default=None,
                   help="use eta_m at the sampled shift of this stratum as the target")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("dense", parents=[common], help="coverage of derivative vectors")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--sigma", type=float, default=0.75)
    p.add_argument("--t-max", dest="t_max", type=float, default=1e4)
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--box", default="-0.8,0.8,-0.8,0.8")
    p.add_argument("--cells", type=int, default=16)
    p.set_defaults(func=cmd_dense)

    p = sub.add_parser("model", parents=[common], help="random-model moments")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--sigma", type=float, default=0.75)
    p.add_argument("--P", type=int, default=10**5)
    p.add_argument("--samples", type=int, default=10**4)
    p.add_argument("--phases-out", dest="phases_out", default=None)
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("dist", parents=[common], help="shift distribution versus random model")
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--sigma", type=float, default=0.75)
    p.add_argument("--T", type=float, default=1e5)
    p.add_argument("--num-tau", dest="num_tau", type=int, default=1000)
    p.add_argument("--P", type=int, default=10**5)
    p.add_argument("--num-omega", dest="num_omega", type=int, default=1000)
    p.add_argument("--continuation", action="store_true")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("equi", parents=[common], help="equidistribution of prime phases")
    p.add_argument("--primes", default=None)
    p.add_argument("--exponents", default=None)
    p.add_argument("--T", type=float, default=1e4)
    p.set_defaults(func=cmd_equi)

    p = sub.add_parser("zeros", parents=[common], help="ingest a zero table / admissible shifts")
    p.add_argument("action", choices=["ingest", "shifts"])
    p.add_argument("file", nargs="?", default=None)
    _add_rect(p)
    p.add_argument("--T", type=float, default=1e3)
    p.add_argument("--csv-out", dest="csv_out", default=None)
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("mellin", parents=[common], help="checks on the Mellin transform of the cutoff")
    p.add_argument("action", choices=["check"])
    p.set_defaults(func=cmd_mellin)
    return parser


def _subparser(parser, command):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]
    raise KeyError(command)


def _apply_config(parser, args, argv):
    """Merge key=value lines from --config under the explicitly given flags."""
    sp = _subparser(parser, args.command)
    by_dest = {a.dest: a for a in sp._actions if a.dest not in ("help",)}
    explicit = {a.dest for a in sp._actions for opt in a.option_strings
                if any(tok == opt or tok.startswith(opt + "=") for tok in argv)}
    with open(args.config, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{args.config}:{lineno}: expected key=value")
        key, value = (x.strip() for x in line.split("=", 1))
        dest = key.replace("-", "_")
        if dest not in by_dest or dest in ("config", "func"):
            raise ConfigError(f"{args.config}:{lineno}: unknown key {key!r}")
        if dest in explicit:
            continue
        action = by_dest[dest]
        if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            val = value.lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            val = action.type(value)
        else:
            val = value
        if action.choices is not None and val not in action.choices:
            raise ConfigError(f"{args.config}:{lineno}: {key} must be one of {list(action.choices)}")
        setattr(args, dest, val)


class ConfigError(EtaLabError, ValueError):
    pass


# options that must be set by a flag or by the config file
_REQUIRED = {
    "eval": ("sigma",),
    "scan": ("sigma", "tau0", "step", "count"),
    "equi": ("primes", "exponents"),
}


def _run_config(args):
    params = {k: v for k, v in vars(args).items() if k not in _GLOBAL + ("func", "command")}
    params = {k: ("" if v is None else str(v)) for k, v in sorted(params.items())}
    return RunConfig(args.command, params, args.seed, args.out, args.zeros, bool(args.assume_rh))


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            _apply_config(parser, args, argv)
        missing = [d for d in _REQUIRED.get(args.command, ()) if getattr(args, d) is None]
        if missing:
            raise ConfigError("missing required option(s): " + ", ".join("--" + d.replace("_", "-") for d in missing))
        threads = args.threads
        if threads is None:
            env = os.environ.get("ETA_LAB_THREADS")
            threads = int(env) if env else 1
        cfg = _run_config(args)
        t0 = time.perf_counter()
        result, kind = args.func(args, cfg, threads)
        wall = time.perf_counter() - t0
        meta = _fmt(_meta(cfg, wall))
        if kind == "csv":
            from .prime_sums import write_scan_csv

            buf = io.StringIO()
            buf.write("#" + json.dumps(meta, sort_keys=True) + "\n")
            write_scan_csv(buf, *result)
            text = buf.getvalue()
        else:
            text = json.dumps({"meta": meta, "result": _fmt(result)}, indent=1, sort_keys=True) + "\n"
        if args.out == "-":
            sys.stdout.write(text)
        else:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
    except OSError as exc:
        print(f"etalab: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (EtaLabError, ValueError, ArithmeticError, LookupError) as exc:
        print(f"etalab: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
