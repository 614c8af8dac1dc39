"""Command-line front end.

    orlicz-hy list
    orlicz-hy verify {hy-lp,hy-orlicz,hoelder,embeddings,parseval} [options]
    orlicz-hy ratio [options]
    orlicz-hy fit-growth --young SPEC

Exit status: 0 pass, 1 fail, 2 hypothesis not witnessed, 3 I/O error,
64 bad usage.  Reports are JSON (or CSV of per-sample rows) written
atomically; without ``--output`` they go to ``$ORLICZ_HY_OUTPUT_DIR`` (or the
current directory) under a name derived from the command and seed.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import kernels, verify
from .errors import BadExponent, BadParam, HypothesisFailed, NoFit, OrliczError, UnknownSpec
from .spaces import LISTED_SPACES
from .young import LISTED, from_spec, pair_from_spec

EXIT_PASS, EXIT_FAIL, EXIT_HYPOTHESIS, EXIT_IO, EXIT_USAGE = 0, 1, 2, 3, 64
OUTPUT_ENV = "ORLICZ_HY_OUTPUT_DIR"

DEFAULTS = {
    "space": "torus:1",
    "pair": "power:1.5",
    "p": 1.5,
    "L": 8,
    "n": 200,
    "seed": 0,
    "oversample": 4,
    "tol": None,
    "profile": None,
    "format": "json",
    "output": None,
    "lam": "band:2",
    "restarts": 50,
    "young": None,
    "refine": True,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --------------------------------------------------------------------------
# serialisation


def _fmt_float(x):
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return "%.17g" % x


def to_json_text(obj, indent=2, _level=0):
    """JSON with every float written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json_text(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [f"{pad}{to_json_text(v, indent, _level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def rows_to_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "lhs", "rhs", "margin"])
    for i, r in enumerate(rows):
        w.writerow([i, _fmt_float(r["lhs"]).strip('"'), _fmt_float(r["rhs"]).strip('"'),
                    _fmt_float(r["margin"]).strip('"')])
    return buf.getvalue()


def write_atomic(path, text):
    """Write to a temporary file in the target directory, then rename over ``path``."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --------------------------------------------------------------------------
# configuration


def _add_common(p, *names):
    if "space" in names:
        p.add_argument("--space", help="torus:n, sphere2 or su2")
    if "pair" in names:
        p.add_argument("--pair", help="Young function generating the normalised pair, e.g. riordan:1.5")
    if "p" in names:
        p.add_argument("--p", type=float, help="Lebesgue exponent in [1, 2]")
    if "L" in names:
        p.add_argument("--L", type=float, help="band limit")
    if "n" in names:
        p.add_argument("-n", "--n", type=int, help="number of random samples")
    p.add_argument("--seed", type=int, help="random seed")
    if "oversample" in names:
        p.add_argument("--oversample", type=int, help="starting quadrature oversampling factor")
        p.add_argument("--no-refine", dest="refine", action="store_false", default=None,
                       help="skip the oversampling refinement check")
    if "tol" in names:
        p.add_argument("--tol", type=float, help="violation tolerance")
    if "profile" in names:
        p.add_argument("--profile", help="spectral profile: flat or decay:s")
    p.add_argument("--config", help="flat JSON file of option values")
    p.add_argument("--output", "-o", help="report path ('-' for stdout)")
    p.add_argument("--format", choices=["json", "csv"], help="report format")


def build_parser():
    parser = _Parser(prog="orlicz-hy", description="Orlicz Hausdorff-Young checks on compact homogeneous spaces")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="list built-in spaces and Young functions")

    pv = sub.add_parser("verify", help="run an inequality check")
    vs = pv.add_subparsers(dest="check", required=True)
    _add_common(vs.add_parser("hy-lp"), "space", "p", "L", "n", "oversample", "tol", "profile")
    _add_common(vs.add_parser("hy-orlicz"), "space", "pair", "L", "n", "oversample", "tol", "profile")
    _add_common(vs.add_parser("hoelder"), "space", "pair", "L", "n", "oversample", "tol", "profile")
    _add_common(vs.add_parser("embeddings"), "space", "L", "n", "tol", "profile")
    _add_common(vs.add_parser("parseval"), "space", "L", "n", "tol", "profile")

    pr = sub.add_parser("ratio", help="search for the largest Hausdorff-Young ratio on a finite set")
    _add_common(pr, "space", "pair", "oversample")
    pr.add_argument("--lambda", dest="lam", help="band:L, first:N or reps:a;b;...")
    pr.add_argument("--restarts", type=int, help="optimiser restarts")

    pg = sub.add_parser("fit-growth", help="fit Psi'(t) <= c0 t^p")
    pg.add_argument("--young", help="Young function whose derivative is fitted")
    pg.add_argument("--pair", help="fit the conjugate of the pair generated by this Young function")
    pg.add_argument("--config")
    pg.add_argument("--output", "-o")
    pg.add_argument("--format", choices=["json"])
    return parser


def resolve_config(args):
    """Merge CLI flags over the config file over the defaults."""
    cfg = dict(DEFAULTS)
    path = getattr(args, "config", None)
    if path:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict) or any(isinstance(v, (dict, list)) for v in data.values()):
            raise UsageError("config file must be a flat JSON object")
        unknown = set(data) - set(DEFAULTS)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        cfg.update(data)
    for key, value in vars(args).items():
        if key in DEFAULTS and value is not None:
            cfg[key] = value
    for key in ("n", "restarts", "oversample"):
        if cfg[key] is not None and int(cfg[key]) <= 0:
            raise UsageError(f"{key} must be positive")
    if float(cfg["L"]) < 0:
        raise UsageError("L must be nonnegative")
    return cfg


def _default_path(name, cfg):
    directory = os.environ.get(OUTPUT_ENV) or "."
    ext = "csv" if cfg.get("format") == "csv" else "json"
    return os.path.join(directory, f"{name}-seed{cfg['seed']}.{ext}")


def _emit(text, cfg, name, out):
    path = cfg.get("output") or _default_path(name, cfg)
    if path == "-":
        out.write(text)
        return None
    write_atomic(path, text)
    return path


# --------------------------------------------------------------------------
# commands


def cmd_list(out):
    lines = ["spaces:"]
    lines += [f"  {s}" for s in sorted(LISTED_SPACES)]
    lines.append("young functions:")
    lines += [f"  {y}" for y in sorted(LISTED)]
    lines.append(f"kernel backend: {kernels.BACKEND}")
    out.write("\n".join(lines) + "\n")
    return EXIT_PASS


def run_verify(check, cfg):
    space, L, n, seed = cfg["space"], float(cfg["L"]), int(cfg["n"]), int(cfg["seed"])
    if L == int(L):
        L = int(L)
    kw = {}
    if cfg["profile"] is not None:
        kw["profile"] = cfg["profile"]
    if cfg["tol"] is not None:
        kw["tol"] = float(cfg["tol"])
    if check == "hy-lp":
        return verify.verify_hy_lp(space, float(cfg["p"]), L, n, seed, int(cfg["oversample"]),
                                   refine=bool(cfg["refine"]), **kw)
    if check == "hy-orlicz":
        return verify.verify_hy_orlicz(space, cfg["pair"], L, n, seed, int(cfg["oversample"]),
                                       refine=bool(cfg["refine"]), **kw)
    if check == "hoelder":
        return verify.verify_hoelder(space, cfg["pair"], L, n, seed, int(cfg["oversample"]),
                                     refine=bool(cfg["refine"]), **kw)
    if check == "embeddings":
        return verify.verify_embeddings(space, L, seed, n, **kw)
    if check == "parseval":
        return verify.verify_parseval(space, L, n, seed, **kw)
    raise UsageError(f"unknown check {check}")


def cmd_verify(check, cfg, out):
    try:
        report = run_verify(check, cfg)
    except HypothesisFailed as exc:
        out.write(f"hypothesis not witnessed: {exc}\n")
        return EXIT_HYPOTHESIS
    if cfg["format"] == "csv":
        text = rows_to_csv(report.samples)
    else:
        text = to_json_text(report.to_json()) + "\n"
    path = _emit(text, cfg, f"verify-{check}", out)
    verdict = "pass" if report.verdict else "fail"
    if path is not None:
        out.write(f"{check}: {verdict} (max margin {report.max_margin:.3e}) -> {path}\n")
    return EXIT_PASS if report.verdict else EXIT_FAIL


def cmd_ratio(cfg, out):
    try:
        res = verify.ratio_search(cfg["space"], cfg["pair"], cfg["lam"], int(cfg["restarts"]), int(cfg["seed"]),
                                  int(cfg["oversample"]))
    except HypothesisFailed as exc:
        out.write(f"hypothesis not witnessed: {exc}\n")
        return EXIT_HYPOTHESIS
    doc = res.to_json()
    doc["space"] = cfg["space"]
    doc["seed"] = int(cfg["seed"])
    path = _emit(to_json_text(doc) + "\n", cfg, "ratio", out)
    if path is not None:
        out.write(f"best ratio {res.ratio:.12g} (a priori bound {res.bound:.6g}) -> {path}\n")
    return EXIT_PASS


def cmd_fit_growth(args, out):
    cfg = resolve_config(args)
    if args.young:
        psi, label = from_spec(args.young), args.young
    elif args.pair or cfg.get("pair"):
        spec = args.pair or cfg["pair"]
        psi, label = pair_from_spec(spec).psi, f"conj({spec})"
    else:
        raise UsageError("fit-growth needs --young or --pair")
    try:
        c0, p = verify.growth_fit(psi)
        doc = {"psi": label, "c0": c0, "p": p, "t_min": 1e-6, "t_max": 1e3, "fit": True}
        code = EXIT_PASS
    except NoFit as exc:
        doc = {"psi": label, "c0": None, "p": None, "t_min": 1e-6, "t_max": 1e3, "fit": False, "reason": str(exc)}
        code = EXIT_FAIL
    path = _emit(to_json_text(doc) + "\n", cfg, "fit-growth", out)
    if path is not None:
        out.write(f"{label}: c0={doc['c0']} p={doc['p']} -> {path}\n")
    return code


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "list":
            return cmd_list(out)
        if args.command == "fit-growth":
            return cmd_fit_growth(args, out)
        cfg = resolve_config(args)
        if args.command == "verify":
            return cmd_verify(args.check, cfg, out)
        return cmd_ratio(cfg, out)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except (BadParam, BadExponent, UnknownSpec) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        sys.stderr.write(f"I/O error: {exc}\n")
        return EXIT_IO
    except OrliczError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
