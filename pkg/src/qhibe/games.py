"""Security experiments and statistical harnesses.

The runners are generic over a :class:`Scheme`, so the same experiment can
be pointed at Cocks, xhIBE and the anonymized xhIBE'. Every trial derives
its own seeds from the caller's stream, which keeps runs reproducible and
lets trials execute in worker processes.
"""
from __future__ import annotations

import math
import os
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Callable, NamedTuple

from scipy import stats

from .anonymizer import AnonCiphertext, AttributeTag, anon_decrypt, anon_encrypt, anon_eval, anon_params
from .cocks import CocksCiphertext, IdentityKey, cocks_decrypt, cocks_encrypt, cocks_keygen, galbraith_scalar
from .errors import ProtocolViolation, QueryRefused
from .numtheory import (
    MasterSecret,
    PublicParams,
    _as_bytes,
    factor_toy_modulus,
    hash_to_group,
    jacobi,
    qr_oracle,
    sqrt_extract,
)
from .qring import enumerate_coset, enumerate_G, galbraith, norm, ring_ctx, sample_S
from .xhibe import Ciphertext, XorCircuit, xh_decrypt, xh_encrypt, xh_eval


# --- schemes -----------------------------------------------------------------

@dataclass(frozen=True)
class Scheme:
    """Uniform view of an IBE variant for the experiment runners.

    ``evaluate(pp, alpha, circuit, cts, rng)`` receives the attribute tag so
    that non-universal schemes can use it; universal ones ignore it.
    """

    name: str
    encrypt: Callable
    decrypt: Callable
    evaluate: Callable | None = None

    def q_attr(self, pp: PublicParams, identity) -> int:
        return hash_to_group(identity, pp)


def _xh_evaluate(pp, alpha, circuit, cts, rng):
    return xh_eval(pp, circuit, cts, rng)


def _anon_encrypt(pp, identity, b, rng):
    return anon_encrypt(pp, anon_params(pp), identity, b, rng)


def _anon_decrypt(pp, sk, act):
    return anon_decrypt(pp, anon_params(pp), sk, act)


def _anon_evaluate(pp, alpha, circuit, acts, rng):
    return anon_eval(pp, anon_params(pp), AttributeTag(alpha), circuit, acts, rng)


COCKS = Scheme("cocks", cocks_encrypt, cocks_decrypt)
XHIBE = Scheme("xhibe", xh_encrypt, xh_decrypt, _xh_evaluate)
ANON = Scheme("anon", _anon_encrypt, _anon_decrypt, _anon_evaluate)
SCHEMES = {s.name: s for s in (COCKS, XHIBE, ANON)}


def first_component_gt(pp: PublicParams, ct, a: int) -> int:
    """Galbraith's test against candidate tag ``a`` on the first component
    of any supported ciphertext (u, c, or the masked z1)."""
    if isinstance(ct, CocksCiphertext):
        return galbraith_scalar(a, ct.u, pp.N)
    if isinstance(ct, Ciphertext):
        return galbraith(ring_ctx(a, pp.N), ct.c)
    if isinstance(ct, AnonCiphertext):
        return galbraith(ring_ctx(a, pp.N), ct.z1)
    raise TypeError(f"unsupported ciphertext type {type(ct).__name__}")


def first_scalar(ct) -> int:
    if isinstance(ct, CocksCiphertext):
        return ct.u
    if isinstance(ct, Ciphertext):
        return ct.c.c0
    if isinstance(ct, AnonCiphertext):
        return ct.z1.c0
    raise TypeError(f"unsupported ciphertext type {type(ct).__name__}")


# --- oracles and results -----------------------------------------------------

class KeyOracle:
    """Extracts identity keys, refusing the challenge identities once fixed."""

    def __init__(self, pp: PublicParams, msk: MasterSecret, enforce: bool = True):
        self.pp, self.msk, self.enforce = pp, msk, enforce
        self.queried: set[bytes] = set()
        self.forbidden: set[bytes] = set()

    def __call__(self, identity) -> IdentityKey:
        identity = _as_bytes(identity)
        if self.enforce and identity in self.forbidden:
            raise QueryRefused("key query for a challenge identity")
        self.queried.add(identity)
        return cocks_keygen(self.pp, self.msk, identity)

    def forbid(self, *identities) -> None:
        ids = {_as_bytes(i) for i in identities}
        if self.enforce and ids & self.queried:
            raise ProtocolViolation("challenge identity was queried before the challenge")
        self.forbidden |= ids


class EvalOracle:
    """Homomorphic evaluation bound to the challenge attribute tag."""

    def __init__(self, pp: PublicParams, scheme: Scheme, alpha: int, rng):
        self.pp, self.scheme, self.alpha, self.rng = pp, scheme, alpha, rng

    def __call__(self, circuit: XorCircuit, cts):
        if self.scheme.evaluate is None:
            raise QueryRefused(f"{self.scheme.name} has no homomorphic evaluation")
        return self.scheme.evaluate(self.pp, self.alpha, circuit, list(cts), self.rng)


@dataclass(frozen=True)
class AdversaryStrategy:
    """``phase1(pp, key_oracle, rng) -> (id0, m0, id1, m1, state)`` and
    ``phase2(pp, challenge, state, key_oracle, eval_oracle, rng) -> bit``."""

    phase1: Callable
    phase2: Callable
    name: str = "adversary"


class TrialRecord(NamedTuple):
    index: int
    b: int
    guess: int

    @property
    def win(self) -> bool:
        return self.b == self.guess


@dataclass
class GameResult:
    wins: int
    trials: int
    label: str = ""
    records: list[TrialRecord] = field(default_factory=list, repr=False)

    def __post_init__(self):
        if not 0 <= self.wins <= self.trials:
            raise ValueError("wins must lie in [0, trials]")

    @property
    def success_rate(self) -> float:
        return self.wins / self.trials

    @property
    def advantage_estimate(self) -> Fraction:
        return Fraction(self.wins, self.trials) - Fraction(1, 2)

    @property
    def null_sigma(self) -> float:
        """Standard deviation of the success rate for a coin-flipping adversary."""
        return 0.5 / math.sqrt(self.trials)

    @property
    def confidence_interval(self) -> tuple[float, float]:
        """3-sigma normal-approximation band around the advantage estimate."""
        p = self.success_rate
        half = 3 * max(math.sqrt(p * (1 - p) / self.trials), 1 / self.trials)
        adv = float(self.advantage_estimate)
        return adv - half, adv + half

    def within_noise(self, k: float = 3.0) -> bool:
        return abs(float(self.advantage_estimate)) <= k * self.null_sigma

    def to_lines(self) -> list[str]:
        lines = ["trial\tb\tguess\twin"]
        lines += [f"{r.index}\t{r.b}\t{r.guess}\t{int(r.win)}" for r in self.records]
        return lines


def _collect(label: str, outcomes: list[tuple[int, int]]) -> GameResult:
    records = [TrialRecord(i, b, g) for i, (b, g) in enumerate(outcomes)]
    return GameResult(sum(r.win for r in records), len(records), label, records)


def _run(trial_fn: Callable, trials: int, rng, workers: int | None) -> list[tuple[int, int]]:
    seeds = [rng.getrandbits(64) for _ in range(trials)]
    workers = workers or 1
    if workers <= 1 or trials < 2 * workers:
        return [trial_fn(s) for s in seeds]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(trial_fn, seeds, chunksize=max(1, trials // (4 * workers))))


def default_workers() -> int:
    return max(1, min(8, os.cpu_count() or 1))


def _bit(x, what: str) -> int:
    if x not in (0, 1):
        raise ProtocolViolation(f"{what} must be a bit, got {x!r}")
    return int(x)


def _phase1(adv: AdversaryStrategy, pp, oracle, rng):
    out = adv.phase1(pp, oracle, rng)
    try:
        id0, m0, id1, m1, state = out
    except (TypeError, ValueError):
        raise ProtocolViolation("phase1 must return (id0, m0, id1, m1, state)") from None
    return _as_bytes(id0), _bit(m0, "m0"), _as_bytes(id1), _bit(m1, "m1"), state


# --- experiments -------------------------------------------------------------

def _upriv_trial(pp, msk, scheme, adv, seed):
    rng = random.Random(seed)
    adv_rng = random.Random(rng.getrandbits(64))
    oracle = KeyOracle(pp, msk)
    id0, m0, id1, m1, state = _phase1(adv, pp, oracle, adv_rng)
    oracle.forbid(id0, id1)
    b = rng.getrandbits(1)
    identity, msg = (id0, m0) if b == 0 else (id1, m1)
    alpha = scheme.q_attr(pp, identity)
    challenge = scheme.encrypt(pp, identity, msg, rng)
    guess = adv.phase2(pp, challenge, state, oracle, EvalOracle(pp, scheme, alpha, rng), adv_rng)
    return b, _bit(guess, "guess")


def run_upriv(pp: PublicParams, msk: MasterSecret, scheme: Scheme, adv: AdversaryStrategy,
              trials: int, rng, workers: int | None = None) -> GameResult:
    """Non-universal attribute-privacy experiment: the adversary picks two
    (identity, message) pairs and must tell which one was encrypted, with
    a key oracle (challenge identities refused) and an evaluation oracle
    bound to the challenge's attribute tag."""
    fn = partial(_upriv_trial, pp, msk, scheme, adv)
    return _collect(f"upriv/{scheme.name}/{adv.name}", _run(fn, trials, rng, workers))


def _ind_trial(pp, msk, scheme, adv, enforce, seed):
    rng = random.Random(seed)
    adv_rng = random.Random(rng.getrandbits(64))
    oracle = KeyOracle(pp, msk, enforce=enforce)
    id0, m0, id1, m1, state = _phase1(adv, pp, oracle, adv_rng)
    if id0 != id1:
        raise ProtocolViolation("IND-ID-CPA takes a single challenge identity")
    oracle.forbid(id0)
    b = rng.getrandbits(1)
    alpha = scheme.q_attr(pp, id0)
    challenge = scheme.encrypt(pp, id0, m0 if b == 0 else m1, rng)
    guess = adv.phase2(pp, challenge, state, oracle, EvalOracle(pp, scheme, alpha, rng), adv_rng)
    return b, _bit(guess, "guess")


def run_ind_id_cpa(pp: PublicParams, msk: MasterSecret, scheme: Scheme, adv: AdversaryStrategy,
                   trials: int, rng, workers: int | None = None, enforce: bool = True) -> GameResult:
    """Payload-hiding game for one challenge identity.

    ``enforce=False`` lets the adversary extract the challenge key; it
    exists only as a sanity check of the runner.
    """
    fn = partial(_ind_trial, pp, msk, scheme, adv, enforce)
    return _collect(f"ind-id-cpa/{scheme.name}/{adv.name}", _run(fn, trials, rng, workers))


def galbraith_vote(pp: PublicParams, samples, a0: int, a1: int, rng) -> int:
    """Guess which of two tags the samples were encrypted under by counting
    Galbraith +1 hits on the first component; ties go to a coin flip."""
    hits0 = sum(first_component_gt(pp, ct, a0) == 1 for ct in samples)
    hits1 = sum(first_component_gt(pp, ct, a1) == 1 for ct in samples)
    if hits0 == hits1:
        return rng.getrandbits(1)
    return 0 if hits0 > hits1 else 1


def _galbraith_trial(pp, scheme, id0, id1, n_samples, seed):
    rng = random.Random(seed)
    b = rng.getrandbits(1)
    identity = id0 if b == 0 else id1
    samples = [scheme.encrypt(pp, identity, rng.getrandbits(1), rng) for _ in range(n_samples)]
    return b, galbraith_vote(pp, samples, hash_to_group(id0, pp), hash_to_group(id1, pp), rng)


def galbraith_distinguisher(pp: PublicParams, scheme: Scheme, id0, id1, n_samples: int,
                            trials: int, rng, workers: int | None = None) -> GameResult:
    id0, id1 = _as_bytes(id0), _as_bytes(id1)
    if id0 == id1:
        raise ValueError("the two identities must differ")
    fn = partial(_galbraith_trial, pp, scheme, id0, id1, n_samples)
    return _collect(f"galbraith/{scheme.name}/n={n_samples}", _run(fn, trials, rng, workers))


# --- stock adversaries -------------------------------------------------------

def _fresh_id(rng) -> bytes:
    return b"user-%016x" % rng.getrandbits(64)


def _random_phase1(single_identity, pp, key_oracle, rng):
    id0 = _fresh_id(rng)
    id1 = id0 if single_identity else _fresh_id(rng)
    return id0, rng.getrandbits(1), id1, rng.getrandbits(1), None


def _random_phase2(pp, challenge, state, key_oracle, eval_oracle, rng):
    return rng.getrandbits(1)


def random_guess_adversary(single_identity: bool = False) -> AdversaryStrategy:
    return AdversaryStrategy(partial(_random_phase1, single_identity), _random_phase2, "random")


def _galbraith_phase1(pp, key_oracle, rng):
    id0, id1 = _fresh_id(rng), _fresh_id(rng)
    m = rng.getrandbits(1)
    return id0, m, id1, m, (hash_to_group(id0, pp), hash_to_group(id1, pp))


def _galbraith_phase2(queries, pp, challenge, state, key_oracle, eval_oracle, rng):
    samples = [challenge]
    try:
        for _ in range(queries):
            samples.append(eval_oracle(XorCircuit((1,)), [challenge]))
    except QueryRefused:
        pass
    return galbraith_vote(pp, samples, *state, rng)


def galbraith_adversary(queries: int = 32) -> AdversaryStrategy:
    """Attacks identity privacy with Galbraith's test, harvesting extra
    same-identity samples by re-randomizing the challenge through the
    evaluation oracle."""
    return AdversaryStrategy(_galbraith_phase1, partial(_galbraith_phase2, queries), f"galbraith{queries}")


def _key_holder_phase1(pp, key_oracle, rng):
    identity = _fresh_id(rng)
    return identity, 0, identity, 1, identity


def _key_holder_phase2(scheme, pp, challenge, state, key_oracle, eval_oracle, rng):
    try:
        return scheme.decrypt(pp, key_oracle(state), challenge)
    except QueryRefused:
        return rng.getrandbits(1)


def key_holder_adversary(scheme: Scheme) -> AdversaryStrategy:
    """Asks for the challenge identity's key and decrypts, falling back to a
    coin flip when refused. Only wins when the runner's query constraint is
    switched off."""
    return AdversaryStrategy(_key_holder_phase1, partial(_key_holder_phase2, scheme), "key-holder")


def _jacobi_phase2(pp, challenge, state, key_oracle, eval_oracle, rng):
    return 0 if jacobi(first_scalar(challenge), pp.N) == 1 else 1


def jacobi_adversary() -> AdversaryStrategy:
    return AdversaryStrategy(_key_holder_phase1, _jacobi_phase2, "jacobi")


ADVERSARIES = {
    "random": lambda scheme: random_guess_adversary(),
    "galbraith": lambda scheme: galbraith_adversary(),
    "key-holder": key_holder_adversary,
    "jacobi": lambda scheme: jacobi_adversary(),
}


# --- toy-scale statistics ----------------------------------------------------

@dataclass(frozen=True)
class HomogeneityResult:
    pvalue: float
    statistic: float
    dof: int
    coset_size: int
    outside: int
    bit: int


def _decrypting_side(pp: PublicParams, identity):
    msk = factor_toy_modulus(pp.N)
    a = hash_to_group(identity, pp)
    r = sqrt_extract(a, msk)
    if r * r % pp.N == a:
        return msk, r, ring_ctx(a, pp.N), (lambda ct: ct.c)
    return msk, r, ring_ctx(pp.N - a, pp.N), (lambda ct: ct.d)


def _two_sample(first: Counter, second: Counter, cells) -> tuple[float, float, int]:
    # Empty cells carry no information; strays outside the coset get their own columns.
    keys = [k for k in cells if first[k] or second[k]]
    known = set(keys)
    keys += [k for k in first.keys() | second.keys() if k not in known]
    if len(keys) < 2:
        return 1.0, 0.0, 0
    table = [[first[k] for k in keys], [second[k] for k in keys]]
    res = stats.chi2_contingency(table, correction=False)
    return float(res.pvalue), float(res.statistic), int(res.dof)


def strong_hom_test(pp: PublicParams, identity, circuit: XorCircuit, trials: int, rng,
                    rerandomize: bool = True) -> HomogeneityResult:
    """Two-sample chi-square between evaluated and fresh ciphertexts.

    Inputs are encrypted once and then evaluated ``trials`` times; the
    decrypting component of each output is histogrammed over the enumerated
    coset of S_a that decrypts to the circuit's value, and compared with
    ``trials`` fresh encryptions of that value. Toy moduli only.
    """
    msk, r, ctx, side = _decrypting_side(pp, identity)
    bits = [rng.getrandbits(1) for _ in circuit.v]
    inputs = [xh_encrypt(pp, identity, b, rng) for b in bits]
    target = circuit.apply(bits)
    coset = enumerate_coset(ctx, msk, r, target)
    members = set(coset)
    evaluated = Counter(side(xh_eval(pp, circuit, inputs, rng, rerandomize)) for _ in range(trials))
    fresh = Counter(side(xh_encrypt(pp, identity, target, rng)) for _ in range(trials))
    outside = sum(n for k, n in (evaluated + fresh).items() if k not in members)
    p, chi2, dof = _two_sample(evaluated, fresh, coset)
    return HomogeneityResult(p, chi2, dof, len(coset), outside, target)


@dataclass(frozen=True)
class UniformityResult:
    pvalue: float
    coset_size: int
    outside: int


def sampler_uniformity(pp: PublicParams, identity, b: int, samples: int, rng) -> UniformityResult:
    """Goodness of fit of fresh encryptions against the uniform law on the coset."""
    msk, r, ctx, side = _decrypting_side(pp, identity)
    coset = enumerate_coset(ctx, msk, r, b)
    members = set(coset)
    counts = Counter(side(xh_encrypt(pp, identity, b, rng)) for _ in range(samples))
    outside = sum(n for k, n in counts.items() if k not in members)
    observed = [counts[k] for k in coset]
    pvalue = float(stats.chisquare(observed).pvalue) if not outside else 0.0
    return UniformityResult(pvalue, len(coset), outside)


@dataclass(frozen=True)
class SubgroupReport:
    """Sizes of G_a and S_a and how well two attackers separate them."""

    group_size: int
    subgroup_size: int
    oracle_success: float
    gt_success: float

    @property
    def ratio(self) -> float:
        return self.subgroup_size / self.group_size


def subgroup_report(pp: PublicParams, identity, samples: int, rng) -> SubgroupReport:
    """At toy scale, S_a and G_a minus S_a are easy to tell apart with the
    factorization (quadratic residuosity of the norm) but not with
    Galbraith's test, which is +1 on both."""
    msk, _, ctx, _ = _decrypting_side(pp, identity)
    group = enumerate_G(ctx)
    members = [c for c in group if qr_oracle(norm(ctx, c), msk)]
    outsiders = [c for c in group if not qr_oracle(norm(ctx, c), msk)]
    oracle_wins = gt_wins = 0
    for _ in range(samples):
        b = rng.getrandbits(1)
        c = sample_S(ctx, rng.getrandbits(1), rng) if b == 0 else rng.choice(outsiders)
        oracle_wins += (0 if qr_oracle(norm(ctx, c), msk) else 1) == b
        gt_guess = rng.getrandbits(1) if galbraith(ctx, c) == 1 else 1
        gt_wins += gt_guess == b
    return SubgroupReport(len(group), len(members), oracle_wins / samples, gt_wins / samples)
