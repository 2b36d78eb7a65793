"""Acceptance criteria, one test per criterion at its stated tolerance.

Each test records a PASS/FAIL line that is printed in the terminal summary.
Run alone with ``pytest tests/test_acceptance.py``.
"""
import itertools
import math
import random
import time

import pytest

from conftest import ACCEPTANCE, ID_NQR, ID_QR
from qhibe.anonymizer import anon_params, anonymize, attribute_tag, deanonymize
from qhibe.cocks import (
    CocksCiphertext,
    cocks_component,
    cocks_decrypt,
    cocks_encrypt,
    cocks_keygen,
    galbraith_scalar,
)
from qhibe.bench import bench
from qhibe.errors import AccessDenied
from qhibe.games import (
    ANON,
    XHIBE,
    default_workers,
    galbraith_adversary,
    galbraith_distinguisher,
    random_guess_adversary,
    run_upriv,
    strong_hom_test,
)
from qhibe.numtheory import MasterSecret, PublicParams, gen_blum_modulus, hash_to_group, jacobi, nu_encode
from qhibe.qring import (
    ONE,
    RingElement,
    admissible,
    enumerate_G,
    galbraith,
    in_G,
    ring_ctx,
    ring_inv,
    ring_mul,
    s_element,
    sample_S,
)
from qhibe.xhibe import (
    Ciphertext,
    XorCircuit,
    ciphertext_bytes,
    payload_elements,
    xh_decrypt,
    xh_encrypt,
    xh_eval,
)

TOY = PublicParams(77, 4)
TOY_MSK = MasterSecret(7, 11)


@pytest.fixture(scope="module")
def pp512():
    return gen_blum_modulus(512, random.Random(2024))


def record(num, ok, detail):
    ACCEPTANCE.append((num, bool(ok), detail))
    print(f"{'PASS' if ok else 'FAIL'} criterion {num}: {detail}")
    assert ok, detail


def _toy_decrypt_side(identity):
    sk = cocks_keygen(TOY, TOY_MSK, identity)
    a = hash_to_group(identity, TOY)
    return sk, a, (a if sk.r * sk.r % 77 == a else 77 - a)


def test_criterion_1_scheme_correctness(pp512):
    start = time.perf_counter()
    pp, msk = pp512
    rng = random.Random(1)
    failures = 0
    for i in range(1000):
        identity, b = f"id-{rng.getrandbits(48):012x}", rng.getrandbits(1)
        sk = cocks_keygen(pp, msk, identity)
        failures += cocks_decrypt(pp, sk, cocks_encrypt(pp, identity, b, rng)) != b
        failures += xh_decrypt(pp, sk, xh_encrypt(pp, identity, b, rng)) != b

    # N = 77: every admissible draw, for an identity on each branch.
    draws = 0
    filler = RingElement(1, 0)
    for identity in (ID_QR, ID_NQR):
        sk, a, side = _toy_decrypt_side(identity)
        ctx = ring_ctx(side, 77)
        for b in (0, 1):
            for t in range(1, 77):
                if jacobi(t, 77) != nu_encode(b):
                    continue
                u = cocks_component(side, t, 77)
                if math.gcd(u, 77) == 1 and galbraith_scalar(side, u, 77) != 0:
                    ct = (u, 1) if side == a else (1, u)
                    failures += cocks_decrypt(TOY, sk, CocksCiphertext(*ct)) != b
                    draws += 1
                for s in range(77):
                    for g in range(77):
                        c = s_element(ctx, t, g, s)
                        if not admissible(ctx, c):
                            continue
                        ct = Ciphertext(c, filler, a) if side == a else Ciphertext(filler, c, a)
                        failures += xh_decrypt(TOY, sk, ct) != b
                        draws += 1
    elapsed = time.perf_counter() - start
    record(1, failures == 0 and elapsed < 120,
           f"2000 round trips at 512-bit primes + {draws} toy draws, {failures} failures, {elapsed:.1f}s")


def test_criterion_2_homomorphic_correctness(pp512):
    failures = cases = 0
    for identity in (ID_QR, ID_NQR):
        sk = cocks_keygen(TOY, TOY_MSK, identity)
        rng = random.Random(len(identity))
        for ell in (1, 2, 3):
            for bits in itertools.product((0, 1), repeat=ell):
                cts = [xh_encrypt(TOY, identity, b, rng) for b in bits]
                for v in itertools.product((0, 1), repeat=ell):
                    circuit = XorCircuit(v)
                    failures += xh_decrypt(TOY, sk, xh_eval(TOY, circuit, cts, rng)) != circuit.apply(bits)
                    cases += 1
    pp, msk = pp512
    rng = random.Random(2)
    keys = [cocks_keygen(pp, msk, f"hom-{i}") for i in range(8)]
    for _ in range(1000):
        sk = rng.choice(keys)
        ell = rng.randint(1, 8)
        bits = [rng.getrandbits(1) for _ in range(ell)]
        circuit = XorCircuit(tuple(rng.getrandbits(1) for _ in range(ell)))
        cts = [xh_encrypt(pp, sk.id, b, rng) for b in bits]
        failures += xh_decrypt(pp, sk, xh_eval(pp, circuit, cts, rng)) != circuit.apply(bits)
    record(2, failures == 0, f"{cases} exhaustive toy cases + 1000 random at 512-bit primes, {failures} failures")


def test_criterion_3_group_laws(pp512):
    ctx = ring_ctx(4, 77)
    G = enumerate_G(ctx)
    members = set(G)
    bad = 0
    bad += ONE not in members
    for c in G:
        bad += ring_mul(ctx, c, ONE) != c
        bad += ring_inv(ctx, c) not in members or ring_mul(ctx, c, ring_inv(ctx, c)) != ONE
        # Every product c*d equals the matrix [[c0, a c1], [c1, c0]] applied to d.
        # Those matrices compose as matrices do, which makes the product
        # associative on all triples; checking every pair below suffices.
        c0, c1 = c
        for d in G:
            e = ring_mul(ctx, c, d)
            bad += e not in members
            bad += e != ((c0 * d[0] + 4 * c1 * d[1]) % 77, (c1 * d[0] + c0 * d[1]) % 77)
    pp, _ = pp512
    big = ring_ctx(hash_to_group("laws", pp), pp.N)
    rng = random.Random(3)
    for _ in range(1000):
        c, d, e = (sample_S(big, rng.getrandbits(1), rng) for _ in range(3))
        bad += not in_G(big, ring_mul(big, c, d))
        bad += ring_mul(big, ring_mul(big, c, d), e) != ring_mul(big, c, ring_mul(big, d, e))
        bad += ring_mul(big, c, ONE) != c or ring_mul(big, c, ring_inv(big, c)) != ONE
    record(3, bad == 0, f"|G_4| = {len(G)}, all pairs at N=77 + 1000 triples at 512-bit primes, {bad} violations")


def test_criterion_4_strong_homomorphism():
    res = strong_hom_test(TOY, ID_QR, XorCircuit((1, 1)), 100_000, random.Random(4))
    ctrl = strong_hom_test(TOY, ID_QR, XorCircuit((1, 1)), 100_000, random.Random(4), rerandomize=False)
    ok = res.pvalue > 0.01 and ctrl.pvalue < 1e-6 and res.outside == 0
    record(4, ok, f"eval vs fresh p = {res.pvalue:.3f} over coset of {res.coset_size}; "
                  f"without re-randomization p = {ctrl.pvalue:.2e}")


def test_criterion_5_galbraith_distinguisher(pp512):
    pp, _ = pp512
    start = time.perf_counter()
    workers = default_workers()
    plain = galbraith_distinguisher(pp, XHIBE, "alice", "bob", 32, 1000, random.Random(5), workers)
    anon = galbraith_distinguisher(pp, ANON, "alice", "bob", 32, 1000, random.Random(6), workers)
    elapsed = time.perf_counter() - start
    ok = plain.success_rate >= 0.99 and anon.success_rate <= 0.55 and elapsed < 300
    record(5, ok, f"plain {plain.success_rate:.3f}, anonymized {anon.success_rate:.3f}, {elapsed:.0f}s")


def test_criterion_6_anonymizer_round_trip(pp512):
    pp, msk = pp512
    ap = anon_params(pp)
    rng = random.Random(7)
    keys = [cocks_keygen(pp, msk, f"anon-{i}") for i in range(5)]
    failures = 0
    size_ok = True
    for _ in range(1000):
        owner = rng.choice(keys)
        ct = xh_encrypt(pp, owner.id, rng.getrandbits(1), rng)
        act = anonymize(pp, ap, ct, rng)
        size_ok &= act.ring_elements() == 2 * (ap.m + 1)
        back = deanonymize(pp, ap, attribute_tag(pp, owner.id), act)
        ctx = ring_ctx(ct.a, pp.N)
        failures += galbraith(ctx, ct.c) != galbraith(ctx, back.c)
        failures += galbraith(ctx.negated(), ct.d) != galbraith(ctx.negated(), back.d)
        for sk in keys:
            outcomes = []
            for x in (ct, back):
                try:
                    outcomes.append(xh_decrypt(pp, sk, x))
                except AccessDenied:
                    outcomes.append(None)
            failures += outcomes[0] != outcomes[1]
            failures += (outcomes[0] is None) == (sk is owner)
    record(6, failures == 0 and size_ok,
           f"1000 ciphertexts x {len(keys)} keys, {failures} mismatches, {2 * (ap.m + 1)} ring elements each")


def test_criterion_7_upriv_runner(pp512):
    pp, msk = pp512
    workers = default_workers()
    coin = run_upriv(pp, msk, XHIBE, random_guess_adversary(), 1000, random.Random(8), workers)
    attack = run_upriv(pp, msk, XHIBE, galbraith_adversary(), 1000, random.Random(9), workers)
    ok = coin.within_noise(3) and float(attack.advantage_estimate) >= 0.45
    record(7, ok, f"random-guess advantage {float(coin.advantage_estimate):+.3f} "
                  f"(3 sigma = {3 * coin.null_sigma:.3f}), Galbraith advantage {float(attack.advantage_estimate):.3f}")


def test_criterion_8_cost_claims(pp512):
    pp, _ = pp512
    rep = bench(512, 200, random.Random(10), pp=pp)
    ok = set(rep.combine_mul) == {8} and set(rep.encrypt_inv) == {2} and rep.payload_elements == 4 * rep.gm_payload_elements
    record(8, ok, f"mults per combine {sorted(set(rep.combine_mul))}, inverses per encryption "
                  f"{sorted(set(rep.encrypt_inv))}, payload {rep.payload_elements}:{rep.gm_payload_elements} vs GM")


def test_criterion_9_compactness(pp512):
    pp, _ = pp512
    rng = random.Random(11)
    fresh = ciphertext_bytes(pp, xh_encrypt(pp, "compact", 0, rng))
    sizes = {}
    for ell in (1, 2, 4, 8, 16):
        cts = [xh_encrypt(pp, "compact", rng.getrandbits(1), rng) for _ in range(ell)]
        out = xh_eval(pp, XorCircuit((1,) * ell), cts, rng)
        assert payload_elements(out) == 4
        sizes[ell] = len(ciphertext_bytes(pp, out))
    ok = all(s == len(fresh) for s in sizes.values())
    record(9, ok, f"fresh {len(fresh)} bytes, evaluated {sizes}")
