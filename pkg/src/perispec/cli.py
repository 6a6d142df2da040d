"""Command-line front end.

Exit codes: 0 success, 1 property failure, 2 input error.  Errors are
written to stderr as a single-line JSON object ``{"error": kind, "message": ...}``.
"""
import argparse
import json
import sys

from . import codec, fuzz, seqdesc
from .densela import DEFAULT_TOL
from .errors import PerispecError
from .fixtures import write_fixtures
from .products import product_peripheral
from .rankoracle import rank_test
from .recovery import LinearMapTable, recover_banach_form, recover_hilbert_form, verify_preservation

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    def __init__(self, kind, message):
        super().__init__(message)
        self.kind = kind


class _Parser(argparse.ArgumentParser):
    """Reports usage errors as :class:`InputError` instead of exiting."""

    def error(self, message):
        raise InputError("usage", message)


def _load(path):
    try:
        return codec.load_path(path)
    except OSError as exc:
        raise InputError("io", str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise InputError("parse", f"{path}: {exc}") from exc


def _descriptor(path):
    return seqdesc.from_json(_load(path))


def _operands(path):
    obj = _load(path)
    if isinstance(obj, dict) and "ops" in obj:
        obj = obj["ops"]
    if not isinstance(obj, list):
        raise InputError("parse", "operands JSON must be a list of matrices")
    return [codec.matrix_from_json(m) for m in obj]


def _emit(obj, args):
    text = codec.dumps(obj)
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)


def cmd_classify(args):
    _emit(seqdesc.classification_json(_descriptor(args.descriptor)), args)
    return EXIT_OK


def cmd_product_eval(args):
    d = _descriptor(args.descriptor)
    prod, spec = product_peripheral(d, _operands(args.ops), skew=args.skew, tol=args.tol)
    _emit({"product": codec.matrix_to_json(prod), "peripheral_spectrum": spec.to_json()}, args)
    return EXIT_OK


def cmd_rank_test(args):
    a = codec.matrix_from_json(_load(args.matrix))
    flag, witness = rank_test(
        a, args.r, args.s, skew=args.skew, sample_budget=args.trials, seed=args.seed, tol=args.tol
    )
    out = {"rank_one": flag, "witness": None, "case": None, "spectrum": None}
    if witness is not None:
        out.update(
            witness=codec.matrix_to_json(witness.B),
            case=witness.case_tag,
            spectrum=witness.spectrum.to_json()["points"],
        )
    _emit(out, args)
    return EXIT_OK


def cmd_map_verify(args):
    phi = LinearMapTable.from_json(_load(args.map))
    d = _descriptor(args.descriptor)
    ok, ops = verify_preservation(phi, d, trials=args.trials, skew=args.skew, tol=args.tol, seed=args.seed)
    out = {
        "preserves": ok,
        "counterexample": None if ops is None else [codec.matrix_to_json(a) for a in ops],
    }
    _emit(out, args)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_map_recover(args):
    phi = LinearMapTable.from_json(_load(args.map))
    recover = recover_banach_form if args.model == "banach" else recover_hilbert_form
    _emit(recover(phi, args.m, tol=args.tol).to_json(), args)
    return EXIT_OK


def cmd_fuzz(args):
    cfg = fuzz.RunConfig(
        seed=args.seed, tol=args.tol, trials=args.trials, max_dim=args.max_dim, output_path=args.out
    )
    passed, summary = fuzz.run(cfg)
    _emit(summary, args)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_fixtures(args):
    paths = write_fixtures(args.dir)
    print(codec.dumps({"written": [str(p) for p in paths]}))
    return EXIT_OK


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL)
    common.add_argument("--out", default=None, help="also write the JSON result here")
    seeded = _Parser(add_help=False)
    seeded.add_argument("--seed", type=int, default=0)

    parser = _Parser(prog="perispec", description="Peripheral spectra of generalized matrix products.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="classify a product descriptor")
    p.add_argument("descriptor")
    p.set_defaults(func=cmd_classify)

    prod = sub.add_parser("product", help="evaluate generalized products")
    prod_sub = prod.add_subparsers(dest="action", required=True)
    p = prod_sub.add_parser("eval", parents=[common])
    p.add_argument("--descriptor", required=True)
    p.add_argument("--ops", required=True)
    p.add_argument("--skew", action="store_true")
    p.set_defaults(func=cmd_product_eval)

    p = sub.add_parser("rank-test", parents=[common, seeded], help="rank-one test by peripheral spectra")
    p.add_argument("--matrix", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--skew", action="store_true")
    p.add_argument("--trials", type=int, default=32, help="random rank-<=2 samples")
    p.set_defaults(func=cmd_rank_test)

    mp = sub.add_parser("map", help="preservation check and form recovery")
    mp_sub = mp.add_subparsers(dest="action", required=True)
    p = mp_sub.add_parser("verify", parents=[common, seeded])
    p.add_argument("--map", required=True)
    p.add_argument("--descriptor", required=True)
    p.add_argument("--skew", action="store_true")
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(func=cmd_map_verify)
    p = mp_sub.add_parser("recover", parents=[common])
    p.add_argument("--map", required=True)
    p.add_argument("--model", choices=["banach", "hilbert"], default="banach")
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_map_recover)

    p = sub.add_parser("fuzz", parents=[common, seeded], help="run the seeded property battery")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--max-dim", type=int, default=5)
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("fixtures", help="write fixture JSON files")
    p.add_argument("dir", nargs="?", default="fixtures")
    p.set_defaults(func=cmd_fixtures)
    return parser


def _fail(kind, message):
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return EXIT_INPUT


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help
        return exc.code or EXIT_OK
    except InputError as exc:
        return _fail(exc.kind, str(exc))
    try:
        return args.func(args)
    except InputError as exc:
        return _fail(exc.kind, str(exc))
    except PerispecError as exc:
        return _fail(exc.kind, str(exc))
    except ValueError as exc:
        return _fail("invalid", str(exc))


if __name__ == "__main__":
    sys.exit(main())
