"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 malformed spec,
3 infeasible parameters or a point in a kernel, 4 anything else.
"""
import argparse
import json
import logging
import sys

import numpy as np

from . import configure_logging, hmat
from .classify import classify, element_matrix, load_spec
from .dynamics import orbit
from .errors import (ConsistencyError, DomainError, PreconditionError, QKError, RankAmbiguityError, SchemaError,
                     ValidationError)
from .limitsets import dual_to_json, point_to_json, predict_conze_guivarch, predict_kulkarni, prediction_to_json
from .projective import ProjPoint, basis
from .verify import NOTES, SCHEMA_VERSION, run_suite

EXIT_OK, EXIT_CHECK, EXIT_SCHEMA, EXIT_INFEASIBLE, EXIT_INFRA = 0, 1, 2, 3, 4

log = logging.getLogger("qkleinian.cli")


def _seed(text):
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _positive(kind):
    def parse(text):
        v = kind(text)
        if v <= 0:
            raise argparse.ArgumentTypeError("must be positive")
        return v
    return parse


def build_parser():
    p = argparse.ArgumentParser(prog="qkleinian", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("classify", "predict", "verify", "orbit"):
        s = sub.add_parser(name)
        s.add_argument("--spec", required=True, help="element spec (JSON)")
        s.add_argument("--out", help="write output here instead of stdout")
        s.add_argument("--format", choices=("report", "trace"), default=None)
        s.add_argument("--seed", type=_seed, default=0)
        s.add_argument("--samples", type=_positive(int))
        s.add_argument("--max-iter", type=_positive(int))
        s.add_argument("--tol", type=_positive(float))
        s.add_argument("--cluster-eps", type=_positive(float))
        if name == "orbit":
            s.add_argument("--point", default="1:1:1",
                           help="e1|e2|e3, real coordinates a:b:c, or a JSON list of three quaternions")
            s.add_argument("--n", type=int, help="number of steps (defaults to --max-iter, then 60)")
    return p


def parse_point(text):
    text = text.strip()
    if text in ("e1", "e2", "e3"):
        return basis(int(text[1]))
    try:
        if ":" in text:
            vals = [float(x) for x in text.strip("[]").split(":")]
            if len(vals) != 3:
                raise ValueError
            v = hmat.asvec(np.array(vals))
        else:
            v = np.array(json.loads(text), dtype=float)
            if v.shape == (3,):
                v = hmat.asvec(v)
            if v.shape != (3, 4):
                raise ValueError
    except ValueError:
        raise SchemaError("--point", f"cannot read a point from {text!r}") from None
    return ProjPoint(v)


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _record(body):
    return json.dumps({"schema_version": SCHEMA_VERSION, "body": body}, indent=2, sort_keys=True) + "\n"


def cmd_classify(args):
    spec = load_spec(args.spec)
    cls = classify(spec)
    body = {"classification": cls.to_json(), "summary": f"{cls.fine.value}, {cls.provenance.capitalize()}"}
    _emit(_record(body), args.out)
    return EXIT_OK


def cmd_predict(args):
    spec = load_spec(args.spec)
    cls = classify(spec)
    body = {"classification": cls.to_json(), "kulkarni": prediction_to_json(predict_kulkarni(cls)),
            "dual": dual_to_json(predict_conze_guivarch(cls)), "notes": NOTES}
    _emit(_record(body), args.out)
    return EXIT_OK


def cmd_verify(args):
    spec = load_spec(args.spec)
    report = run_suite(spec, args.samples, args.max_iter, args.tol, args.cluster_eps, args.seed)
    _emit(report.dumps(), args.out)
    for c in report.checks:
        if c.status == "fail":
            log.error("check %s failed: measured %s, threshold %s", c.name, c.measured, c.threshold)
    return EXIT_OK if report.status == "pass" else EXIT_CHECK


def cmd_orbit(args):
    spec = load_spec(args.spec)
    g = element_matrix(spec)
    p = parse_point(args.point)
    n = args.n if args.n is not None else (args.max_iter or 60)
    lo, hi = (n, 0) if n < 0 else (0, n)
    trace = orbit(g, p, lo, hi)
    if args.format == "report":
        body = {"base": point_to_json(trace.base), "n": [int(k) for k in trace.ns],
                "points": [v.tolist() for v in trace.points]}
        _emit(_record(body), args.out)
    else:
        _emit(trace.to_table(), args.out)
    return EXIT_OK


COMMANDS = {"classify": cmd_classify, "predict": cmd_predict, "verify": cmd_verify, "orbit": cmd_orbit}


def main(argv=None):
    configure_logging()
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except SchemaError as exc:
        log.error("schema error at %s", exc)
        return EXIT_SCHEMA
    except (DomainError, ValidationError, PreconditionError, ConsistencyError, RankAmbiguityError) as exc:
        log.error("infeasible: %s", exc)
        return EXIT_INFEASIBLE
    except (QKError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_INFRA
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error: %s", exc)
        return EXIT_INFRA


if __name__ == "__main__":
    sys.exit(main())
