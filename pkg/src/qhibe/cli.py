"""``qhibe`` command-line tool.

Exit codes: 0 success, 2 access denied (⊥), 1 any other error. Setting
``QH_SEED`` to a decimal integer makes every randomized subcommand
reproducible.
"""
from __future__ import annotations

import argparse
import os
import random
import sys

from . import fileformat
from .anonymizer import (
    AnonCiphertext,
    anon_decrypt,
    anon_eval,
    anon_params,
    anonymize,
    attribute_tag,
    deanonymize,
)
from .cocks import cocks_keygen
from .errors import AccessDenied, QHIBEError
from .numtheory import default_rng, gen_blum_modulus
from .xhibe import Ciphertext, XorCircuit, xh_decrypt, xh_encrypt, xh_eval

MIN_SECURE_BITS = 512


def rng_from_env():
    seed = os.environ.get("QH_SEED")
    if seed is None or seed == "":
        return default_rng()
    try:
        return random.Random(int(seed))
    except ValueError:
        raise QHIBEError(f"QH_SEED must be a decimal integer, got {seed!r}") from None


def _identity(text: str) -> bytes:
    return text.encode("utf-8")


def _emit(obj, path):
    if path in (None, "-"):
        sys.stdout.write(fileformat.dumps(obj))
    else:
        fileformat.write(path, obj)


def _check_bits(bits: int, test_mode: bool):
    if bits < MIN_SECURE_BITS and not test_mode:
        raise QHIBEError(f"--bits below {MIN_SECURE_BITS} needs --insecure-test-mode")


def _check_ct(pp, ct):
    vals = [ct.a, *ct.c, *ct.d] if isinstance(ct, Ciphertext) else [
        *ct.z1, *ct.z2, *(x for e in ct.tlist + ct.vlist for x in e)]
    if any(v >= pp.N for v in vals):
        raise QHIBEError("ciphertext values exceed the modulus")
    return ct


def _read_ct(pp, path):
    ct = fileformat.read(path)
    if not isinstance(ct, (Ciphertext, AnonCiphertext)):
        raise QHIBEError(f"{path} is not a ciphertext file")
    return _check_ct(pp, ct)


def cmd_setup(args):
    _check_bits(args.bits, args.insecure_test_mode)
    pp, msk = gen_blum_modulus(args.bits, rng_from_env())
    fileformat.write(args.params, pp)
    fileformat.write(args.master, msk)


def cmd_keygen(args):
    pp = fileformat.read(args.params, "params")
    msk = fileformat.read(args.master, "master")
    _emit(cocks_keygen(pp, msk, _identity(args.id)), args.out)


def cmd_encrypt(args):
    pp = fileformat.read(args.params, "params")
    rng = rng_from_env()
    ct = xh_encrypt(pp, _identity(args.id), args.bit, rng)
    if args.anonymous:
        ct = anonymize(pp, anon_params(pp), ct, rng)
    _emit(ct, args.out)


def cmd_decrypt(args):
    pp = fileformat.read(args.params, "params")
    sk = fileformat.read(args.key, "key")
    ct = _read_ct(pp, args.input)
    if isinstance(ct, AnonCiphertext):
        bit = anon_decrypt(pp, anon_params(pp), sk, ct)
    else:
        bit = xh_decrypt(pp, sk, ct)
    print(bit)


def cmd_eval(args):
    pp = fileformat.read(args.params, "params")
    circuit = XorCircuit.parse(args.circuit)
    cts = [_read_ct(pp, p) for p in args.input.split(",")]
    rng = rng_from_env()
    if all(isinstance(ct, AnonCiphertext) for ct in cts):
        if args.id is None:
            raise QHIBEError("evaluating anonymized ciphertexts needs --id (the attribute tag)")
        out = anon_eval(pp, anon_params(pp), attribute_tag(pp, _identity(args.id)), circuit, cts, rng)
    elif all(isinstance(ct, Ciphertext) for ct in cts):
        out = xh_eval(pp, circuit, cts, rng)
    else:
        raise QHIBEError("cannot mix plain and anonymized ciphertexts")
    _emit(out, args.out)


def cmd_anonymize(args):
    pp = fileformat.read(args.params, "params")
    ct = _read_ct(pp, args.input)
    if not isinstance(ct, Ciphertext):
        raise QHIBEError("input is already anonymized")
    _emit(anonymize(pp, anon_params(pp), ct, rng_from_env()), args.out)


def cmd_deanonymize(args):
    pp = fileformat.read(args.params, "params")
    act = _read_ct(pp, args.input)
    if not isinstance(act, AnonCiphertext):
        raise QHIBEError("input is not an anonymized ciphertext")
    _emit(deanonymize(pp, anon_params(pp), attribute_tag(pp, _identity(args.id)), act), args.out)


def _game_params(args, rng):
    if args.params:
        pp = fileformat.read(args.params, "params")
        msk = fileformat.read(args.master, "master") if args.master else None
        return pp, msk
    _check_bits(args.bits, args.insecure_test_mode)
    return gen_blum_modulus(args.bits, rng)


def cmd_game(args):
    from . import games

    rng = rng_from_env()
    pp, msk = _game_params(args, rng)
    scheme = games.SCHEMES[args.scheme]
    if args.kind == "strong-hom":
        res = games.strong_hom_test(pp, _identity(args.id0), XorCircuit.parse(args.circuit), args.trials, rng,
                                    rerandomize=not args.no_rerandomize)
        for key in ("pvalue", "statistic", "dof", "coset_size", "outside", "bit"):
            print(f"{key}\t{getattr(res, key)}")
        return
    if args.kind == "galbraith":
        result = games.galbraith_distinguisher(pp, scheme, _identity(args.id0), _identity(args.id1),
                                               args.samples, args.trials, rng, args.workers)
    else:
        if msk is None:
            raise QHIBEError(f"{args.kind} needs the master secret (--master)")
        adv = games.ADVERSARIES[args.adversary](scheme)
        if args.kind == "upriv":
            result = games.run_upriv(pp, msk, scheme, adv, args.trials, rng, args.workers)
        else:
            if args.adversary == "random":
                adv = games.random_guess_adversary(single_identity=True)
            result = games.run_ind_id_cpa(pp, msk, scheme, adv, args.trials, rng, args.workers,
                                          enforce=not args.no_constraint)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("\n".join(result.to_lines()) + "\n")
    lo, hi = result.confidence_interval
    print(f"game\t{result.label}")
    print(f"trials\t{result.trials}")
    print(f"wins\t{result.wins}")
    print(f"success_rate\t{result.success_rate:.4f}")
    print(f"advantage\t{float(result.advantage_estimate):.4f}")
    print(f"advantage_ci3\t{lo:.4f}\t{hi:.4f}")
    if args.figure:
        from .plotting import plot_game

        plot_game(result, args.figure)


def cmd_bench(args):
    from .bench import bench

    report = bench(args.bits, args.ops, rng_from_env())
    rows = report.rows()
    text = "\n".join(f"{k}\t{v}" for k, v in rows) + "\n"
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    if args.figure:
        from .plotting import plot_bench

        plot_bench(report, args.figure)
    failed = False
    for name, ok, detail in report.checks():
        print(f"check\t{name}\t{'ok' if ok else 'FAIL'}\t{detail}")
        failed |= not ok
    if failed:
        raise QHIBEError("a quoted cost figure was not met")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qhibe", description="XOR-homomorphic identity-based encryption")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("setup", help="generate public params and the master secret")
    p.add_argument("--bits", type=int, default=MIN_SECURE_BITS, help="bit length of each prime")
    p.add_argument("--params", required=True)
    p.add_argument("--master", required=True)
    p.add_argument("--insecure-test-mode", action="store_true", help="allow toy sizes")
    p.set_defaults(func=cmd_setup)

    p = sub.add_parser("keygen", help="extract an identity key")
    p.add_argument("--params", required=True)
    p.add_argument("--master", required=True)
    p.add_argument("--id", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt one bit to an identity")
    p.add_argument("--params", required=True)
    p.add_argument("--id", required=True)
    p.add_argument("--bit", type=int, choices=(0, 1), required=True)
    p.add_argument("--anonymous", action="store_true", help="anonymize the result")
    p.add_argument("--out")
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt a (possibly anonymized) ciphertext")
    p.add_argument("--params", required=True)
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("eval", help="XOR ciphertexts selected by a circuit vector")
    p.add_argument("--params", required=True)
    p.add_argument("--circuit", required=True, help="comma-separated bits, e.g. 1,0,1")
    p.add_argument("--in", dest="input", required=True, help="comma-separated ciphertext files")
    p.add_argument("--id", help="identity (required for anonymized inputs)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("anonymize", help="mask a ciphertext's identity")
    p.add_argument("--params", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_anonymize)

    p = sub.add_parser("deanonymize", help="recover a ciphertext given its identity")
    p.add_argument("--params", required=True)
    p.add_argument("--id", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_deanonymize)

    p = sub.add_parser("game", help="run a security experiment or statistical test")
    p.add_argument("--kind", choices=("upriv", "ind-id-cpa", "galbraith", "strong-hom"), required=True)
    p.add_argument("--scheme", choices=("cocks", "xhibe", "anon"), default="xhibe")
    p.add_argument("--adversary", choices=("random", "galbraith", "key-holder", "jacobi"), default="random")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--samples", type=int, default=32, help="ciphertexts per Galbraith trial")
    p.add_argument("--id0", default="alice")
    p.add_argument("--id1", default="bob")
    p.add_argument("--circuit", default="1,1")
    p.add_argument("--params")
    p.add_argument("--master")
    p.add_argument("--bits", type=int, default=MIN_SECURE_BITS)
    p.add_argument("--insecure-test-mode", action="store_true")
    p.add_argument("--no-constraint", action="store_true", help="let the adversary query challenge keys")
    p.add_argument("--no-rerandomize", action="store_true", help="strong-hom negative control")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="write one line per trial (TSV)")
    p.add_argument("--figure", help="write a PNG of the running success rate")
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("bench", help="count operations against the quoted cost figures")
    p.add_argument("--bits", type=int, default=512)
    p.add_argument("--ops", type=int, default=100)
    p.add_argument("--out", help="also write the TSV report here")
    p.add_argument("--figure", help="write a PNG bar chart")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except AccessDenied:
        print("access denied (⊥)", file=sys.stderr)
        return 2
    except (QHIBEError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
