"""Command line interface.

    modgalrep <stage> --form delta --ell 11 [--prec N] [--B N] [--cache DIR]
    modgalrep ap --ell 11 --p <decimal> [--crt 11,17] [--form delta]

Stages: qexp, periods, torsion, poly, resolvents.  Exit codes: 0 on
success, 2 for a bad prime, 3 for insufficient precision, 4 for an
excluded (form, ell) configuration.
"""

import argparse
import sys

from .artifacts import STAGES, Pipeline, RunConfig, ap_crt
from .evaluation import DegenerateConfigError
from .numeric import (BadPrimeError, ConfigExcludedError, PrecisionError,
                      RecognitionError)

EXIT_BAD_PRIME = 2
EXIT_PRECISION = 3
EXIT_EXCLUDED = 4


def _log(msg):
    print(msg, file=sys.stderr)


def build_parser():
    ap = argparse.ArgumentParser(
        prog="modgalrep",
        description="mod-ell Galois representations of newforms by "
                    "complex approximation")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--form", default="delta",
                       choices=["delta", "e4delta"])
        p.add_argument("--ell", type=int, default=11)
        p.add_argument("--prec", type=int, default=None,
                       help="working precision in bits")
        p.add_argument("--B", type=int, default=4096,
                       help="q-expansion order for the qexp stage")
        p.add_argument("--cache", default=None,
                       help="artifact cache directory")
        p.add_argument("--quiet", action="store_true")

    for stage in STAGES:
        p = sub.add_parser(stage, help="build the %s artifact" % stage)
        common(p)

    p = sub.add_parser("ap", help="a_p mod ell for a prime p")
    common(p)
    p.add_argument("--p", required=True,
                   help="the prime, in decimal")
    p.add_argument("--crt", default=None,
                   help="comma-separated levels to CRT-combine")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    log = (lambda m: None) if args.quiet else _log
    try:
        if args.command in STAGES:
            cfg = RunConfig(form=args.form, ell=args.ell, prec=args.prec,
                            B=args.B, cache=args.cache)
            path = Pipeline(cfg, log=log).ensure(args.command)
            print(path)
            return 0
        # ap
        p = int(args.p)
        if args.crt:
            ells = [int(t) for t in args.crt.split(",")]
            r, m = ap_crt(args.form, ells, p, cache=args.cache, log=log)
            print("a_p = %d mod %d" % (r, m))
            return 0
        cfg = RunConfig(form=args.form, ell=args.ell, prec=args.prec,
                        B=args.B, cache=args.cache)
        pipe = Pipeline(cfg, log=log)
        key, ap_val = pipe.ap(p)
        eng = pipe.engine()
        rep = eng.classes[key][0]
        print("class: trace %d det %d rep [[%d,%d],[%d,%d]]"
              % (key[0], key[1], rep[0], rep[1], rep[2], rep[3]))
        print("a_p = %d mod %d" % (ap_val, args.ell))
        return 0
    except BadPrimeError as exc:
        print("bad prime: %s" % exc, file=sys.stderr)
        return EXIT_BAD_PRIME
    except (PrecisionError, RecognitionError,
            DegenerateConfigError) as exc:
        print("precision insufficient: %s" % exc, file=sys.stderr)
        return EXIT_PRECISION
    except ConfigExcludedError as exc:
        print("configuration excluded: %s" % exc, file=sys.stderr)
        return EXIT_EXCLUDED


if __name__ == "__main__":
    sys.exit(main())
