"""Command-line front end.

Settings resolve in order: built-in defaults, ``--config`` file (flat
``key = value`` lines), command-line flags, then ``LADDERLAB_*`` environment
variables. Exit codes: 0 success, 2 domain/parameter error, 3 precision not
reachable, 4 I/O or checkpoint error.
"""
import argparse
from dataclasses import dataclass
import os
import sys

import numpy as np

from . import fermat, kernels, ladder, proliferation, quadrature, raabe, reports
from .errors import CheckpointError, DomainError, ParameterError, PrecisionUnreachable

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_PRECISION = 3
EXIT_IO = 4

# config key -> (environment variable, parser)
SETTINGS = {
    "c0": ("LADDERLAB_C0", float),
    "t_min": ("LADDERLAB_T_MIN", float),
    "tol": ("LADDERLAB_TOL", float),
    "root_tol": ("LADDERLAB_ROOT_TOL", float),
    "checkpoint_dir": ("LADDERLAB_CHECKPOINT_DIR", str),
    "threads": ("LADDERLAB_THREADS", int),
}

DEFAULTS = {"c0": 0.0, "t_min": 100.0, "tol": quadrature.DEFAULT_TOL,
            "root_tol": 1e-10, "checkpoint_dir": None, "threads": None}


@dataclass(frozen=True)
class RunConfig:
    c0: float
    t_min: float
    tol: float
    root_tol: float
    checkpoint_dir: str
    threads: int
    output_path: str
    fmt: str

    def ladder_config(self):
        table = quadrature.default_table(self.tol, self.checkpoint_dir)
        return ladder.LadderConfig(c0=self.c0, t_min=self.t_min, root_tol=self.root_tol,
                                   quad_tol=self.tol, table=table)


def read_config_file(path):
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected key = value")
            key, val = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in SETTINGS:
                raise ParameterError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = SETTINGS[key][1](val)
    return values


def resolve(args, environ=None):
    environ = os.environ if environ is None else environ
    values = dict(DEFAULTS)
    if args.config:
        values.update(read_config_file(args.config))
    for key in SETTINGS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    for key, (env, conv) in SETTINGS.items():
        if environ.get(env):
            try:
                values[key] = conv(environ[env])
            except ValueError:
                raise ParameterError(f"bad value for {env}: {environ[env]!r}") from None
    if not (values["tol"] > 0 and values["root_tol"] > 0):
        raise ParameterError("tolerances must be positive")
    return RunConfig(values["c0"], values["t_min"], values["tol"], values["root_tol"],
                     values["checkpoint_dir"], values["threads"], args.out, args.format)


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _rational(text):
    parts = _int_list(text)
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("rational needs x,y,z,n")
    return parts


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value settings file")
    common.add_argument("--c0", type=float, help="additive constant of the ladder equation")
    common.add_argument("--t-min", dest="t_min", type=float, help="domain floor")
    common.add_argument("--tol", type=float, help="quadrature tolerance")
    common.add_argument("--root-tol", dest="root_tol", type=float, help="root tolerance")
    common.add_argument("--checkpoint-dir", dest="checkpoint_dir", help="checkpoint store")
    common.add_argument("--threads", type=int, help="cap on worker threads")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    parser = argparse.ArgumentParser(prog="ladderlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("j", parents=[common], help="Hardy-Littlewood integral J(T)")
    p.add_argument("--T", type=float, required=True)

    p = sub.add_parser("ladder", parents=[common], help="phi1(T) and related values")
    p.add_argument("--T", type=float, required=True)

    for name, text in (("tower", "reverse tower T < T^1 < ... < T^k"),
                       ("verify-decomposition", "increment decomposition along a tower"),
                       ("increments", "almost-linear increments along a tower")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--T", type=float, required=True)
        p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("fermat", parents=[common], help="functional traces on a tau grid")
    p.add_argument("--x", type=float, help="real target x")
    p.add_argument("--rational", type=_rational, action="append",
                   help="x,y,z,n (repeatable); runs the equivalence report")
    p.add_argument("--taus", type=_float_list, default=[1e3, 1e4, 1e5])
    p.add_argument("--variant", choices=fermat.VARIANTS, default="raabe_difference")

    p = sub.add_parser("enumerate-rationals", parents=[common], help="Fermat rationals near 1")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--n-max", dest="n_max", type=int, default=3)
    p.add_argument("--z-max", dest="z_max", type=int, default=200)

    p = sub.add_parser("proliferate", parents=[common], help="proliferated Legendre system")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--generations", type=_int_list, default=[1])
    p.add_argument("--N", type=int, default=6)
    p.add_argument("--n", type=int, default=0, help="function index to sample")
    p.add_argument("--points", type=int, default=201, help="sample grid size on [-1, 1]")
    p.add_argument("--gram", action="store_true", help="emit the Gram matrix instead")

    sub.add_parser("report", parents=[common], help="run the desk-scale criteria summary")
    return parser


def _execute(args, cfg):
    cmd = args.command
    if cmd == "j":
        return cfg.j(args.T)
    if cmd == "ladder":
        y = ladder.phi1(args.T, cfg)
        J = cfg.j(args.T)
        return {"T": args.T, "phi1": y, "J": J.value, "J_err": J.err_bound,
                "defining_residual": float(ladder.ladder_lhs(y, cfg)) - J.value}
    if cmd == "tower":
        return ladder.reverse_tower(args.T, args.k, cfg)
    if cmd == "verify-decomposition":
        return raabe.verify_increment_decomposition(args.T, args.k, cfg)
    if cmd == "increments":
        return raabe.almost_linear_increment_check(args.T, args.k, cfg)
    if cmd == "fermat":
        if args.rational:
            rats = [fermat.FermatRational(*r) for r in args.rational]
            return fermat.equivalence_report(rats, args.taus, args.variant, cfg)
        if args.x is None:
            raise ParameterError("fermat needs --x or --rational")
        return fermat.convergence_trace(args.x, args.taus, args.variant, cfg)
    if cmd == "enumerate-rationals":
        return fermat.fermat_rationals(args.eps, args.n_max, args.z_max)
    if cmd == "proliferate":
        spec = proliferation.ProliferationSpec(args.T, tuple(args.generations), args.N)
        if args.gram:
            return proliferation.gram_matrix(spec, cfg)
        if args.points < 2:
            raise ParameterError("--points must be at least 2")
        t = np.linspace(-1.0, 1.0, args.points)
        values = proliferation.proliferate(args.n, spec, t, cfg)
        return {"n": args.n, "spec": spec.as_dict(), "t": t, "value": values}
    if cmd == "report":
        return reports.criteria_summary(cfg)
    raise ParameterError(f"unknown command {cmd!r}")


def _to_csv_ready(result):
    # sampled functions render as t,value rows
    if isinstance(result, dict) and "t" in result and "value" in result:
        return _Samples(result)
    return result


class _Samples(dict):
    pass


def _render(result, rc, cfg):
    if rc.fmt == "csv" and isinstance(result, _Samples):
        lines = ["t,value"] + [f"{t!r},{v!r}" for t, v in
                               zip(result["t"].tolist(), result["value"].tolist())]
        return "\n".join(lines) + "\n"
    return reports.render(result, rc.fmt, cfg)


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rc = resolve(args)
        if rc.threads:
            kernels.set_threads(rc.threads)
        cfg = rc.ladder_config()
        result = _to_csv_ready(_execute(args, cfg))
        text = _render(result, rc, cfg)
        if rc.output_path:
            reports.atomic_write(rc.output_path, text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    except (DomainError, ParameterError) as exc:
        print(f"ladderlab: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except PrecisionUnreachable as exc:
        print(f"ladderlab: precision: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (OSError, CheckpointError) as exc:
        print(f"ladderlab: i/o: {exc}", file=sys.stderr)
        return EXIT_IO


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
