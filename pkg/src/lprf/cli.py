"""Command-line entry point: ``lprf <command> ...``.

Exit status is 0 on success, 1 when an attack exhausts its budget or a key
fails verification, and 2 on any input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import io
from .attacks import active_recover, passive_recover
from .exceptions import LprfError
from .field import find_generator, make_field
from .prf import COUNTER, GEOMETRIC, Keystream, keystream_counter, keystream_geometric, random_key
from .stats import pattern_census, period_probe, weil_check

EXIT_OK, EXIT_EXHAUSTED, EXIT_INPUT = 0, 1, 2


def _coeff_list(text: str) -> list[int]:
    try:
        return [int(c) for c in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _emit(payload: dict, args) -> None:
    if args.format == "structured":
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        text = "".join(f"{k}={v}\n" for k, v in payload.items())
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _field_from(args):
    return make_field(args.p, args.r, args.irreducible)


def cmd_field_info(args) -> int:
    F = _field_from(args)
    g = find_generator(F, np.random.default_rng(args.seed))
    _emit({
        "field": F.describe(),
        "order": F.order,
        "order_minus_one_factors": ",".join(map(str, F.order_factors)),
        "generator": ",".join(map(str, g.coeffs)),
    }, args)
    return EXIT_OK


def cmd_keygen(args) -> int:
    F = _field_from(args)
    key = random_key(F, np.random.default_rng(args.seed), args.degree)
    text = io.dumps_key(key)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_keystream(args) -> int:
    key = io.load_key(args.key)
    F = key.field
    if args.mode == COUNTER:
        ks = keystream_counter(key, args.start, args.count, F)
    else:
        if args.generator is not None:
            g = F(args.generator)
        else:
            g = find_generator(F, np.random.default_rng(args.seed))
        ks = keystream_geometric(key, g, args.count, F)
    io.save_keystream(ks, args.out)
    return EXIT_OK


def cmd_attack(args) -> int:
    ks = io.load_keystream(args.keystream)
    expected = COUNTER if args.kind == "passive" else GEOMETRIC
    if ks.mode != expected:
        raise LprfError(f"{args.kind} attack needs a {expected} keystream, got {ks.mode}")
    workers = args.workers if args.workers is not None else (os.cpu_count() or 1)
    recover = passive_recover if args.kind == "passive" else active_recover
    report = recover(ks, args.window, np.random.default_rng(args.seed), args.max_guesses, workers)
    payload = report.to_dict(include_timing=not args.no_timing)
    if args.format == "structured":
        _emit(payload, args)
    else:
        text = report.to_text(include_timing=not args.no_timing)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    if args.key_out and report.success:
        io.save_key(report.recovered_key, args.key_out)
    return EXIT_OK if report.success else EXIT_EXHAUSTED


def reproduces(key, ks: Keystream) -> bool:
    if key.field != ks.params:
        raise LprfError("key and keystream are defined over different fields")
    F = ks.params
    if ks.mode == COUNTER:
        regen = keystream_counter(key, ks.start, ks.length, F)
    else:
        regen = keystream_geometric(key, ks.generator, ks.length, F)
    return regen.packed == ks.packed


def cmd_verify(args) -> int:
    ok = reproduces(io.load_key(args.key), io.load_keystream(args.keystream))
    print("verified" if ok else "mismatch")
    return EXIT_OK if ok else EXIT_EXHAUSTED


def cmd_stats(args) -> int:
    if args.check == "census":
        ks = io.load_keystream(args.keystream)
        counts = pattern_census(ks, args.length)
        width = args.length
        # pattern strings list the window's first bit first
        payload = {format(pat, f"0{width}b")[::-1]: c for pat, c in counts.items()}
        _emit(payload, args)
        return EXIT_OK
    if args.check == "weil":
        ks = io.load_keystream(args.keystream)
        rep = weil_check(ks, args.length, args.constant)
        _emit(rep.to_dict(), args)
        return EXIT_OK if rep.passed else EXIT_EXHAUSTED
    key = io.load_key(args.key)
    period = period_probe(key, key.field, args.periods)
    _emit({"field": key.field.describe(), "periods": args.periods, "period": period,
           "divides_order": key.field.order % period == 0}, args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lprf", description="Legendre PRF workbench over GF(p^r)")
    sub = ap.add_subparsers(dest="command", required=True)

    def fmt(sp):
        sp.add_argument("--format", choices=("text", "structured"), default="text")
        sp.add_argument("--out")

    def field_args(sp):
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--r", type=int, required=True)
        sp.add_argument("--irreducible", type=_coeff_list,
                        help="c0,...,cr (constant term first, monic)")

    sp = sub.add_parser("field-info", help="describe GF(p^r)")
    field_args(sp)
    sp.add_argument("--seed", type=_seed, default=0)
    fmt(sp)
    sp.set_defaults(func=cmd_field_info)

    sp = sub.add_parser("keygen", help="write a random key file")
    field_args(sp)
    sp.add_argument("--degree", type=int, default=1)
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_keygen)

    sp = sub.add_parser("keystream", help="generate a keystream file")
    sp.add_argument("--key", required=True)
    sp.add_argument("--mode", choices=(COUNTER, GEOMETRIC), default=COUNTER)
    sp.add_argument("--start", type=int, default=0)
    sp.add_argument("--count", type=int, required=True, help="number of bits M")
    sp.add_argument("--generator", type=_coeff_list)
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_keystream)

    sp = sub.add_parser("attack", help="run the passive or active key recovery")
    sp.add_argument("kind", choices=("passive", "active"))
    sp.add_argument("--keystream", required=True)
    sp.add_argument("--window", type=int)
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--max-guesses", type=int)
    sp.add_argument("--workers", type=int)
    sp.add_argument("--key-out", help="write the recovered key here")
    sp.add_argument("--no-timing", action="store_true", help="omit wall-clock fields")
    fmt(sp)
    sp.set_defaults(func=cmd_attack)

    sp = sub.add_parser("verify", help="check a key against a keystream")
    sp.add_argument("--key", required=True)
    sp.add_argument("--keystream", required=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("stats", help="pattern census, Weil check or period probe")
    sp.add_argument("check", choices=("census", "weil", "period"))
    sp.add_argument("--keystream")
    sp.add_argument("--key")
    sp.add_argument("--length", type=int, default=2, help="pattern length l")
    sp.add_argument("--constant", type=float, help="Weil constant c (default: l)")
    sp.add_argument("--periods", type=int, default=2)
    fmt(sp)
    sp.set_defaults(func=cmd_stats)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "stats":
        needed = "key" if args.check == "period" else "keystream"
        if getattr(args, needed) is None:
            print(f"lprf: error: stats {args.check} needs --{needed}", file=sys.stderr)
            return EXIT_INPUT
    try:
        return args.func(args)
    except (LprfError, ValueError, OSError) as exc:
        print(f"lprf: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
