"""Universal anonymizer for xhIBE ciphertexts and the resulting anonymous,
non-universally homomorphic scheme.

:func:`anonymize` hides the identity tag by masking each component and
burying the mask among ``m`` decoys; only a party that knows the tag
``alpha = H(id)`` can find the mask again (:func:`deanonymize`).
Homomorphic evaluation therefore needs ``alpha`` (:func:`anon_eval`).

Note that the recovered component is the *negation* of the original. For a
Blum modulus (-1/N) = +1, so negation changes neither Galbraith's test nor
decryption.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cocks import IdentityKey
from .errors import IterationCapExceeded, MalformedCiphertext
from .numtheory import ITERATION_CAP, PublicParams, default_rng, hash_to_group, jacobi
from .qring import RingCtx, RingElement, galbraith, random_element, ring_add, ring_sub
from .xhibe import Ciphertext, XorCircuit, contexts, xh_decrypt, xh_encrypt, xh_eval


@dataclass(frozen=True)
class AnonParams:
    m: int
    logN: int

    @property
    def ring_elements(self) -> int:
        return 2 * (self.m + 1)

    @property
    def bit_length(self) -> int:
        """The declared ciphertext length 2(m+1)*lg N.

        Each ring element carries two coefficients, so a concrete encoding
        needs twice this many bits.
        """
        return self.ring_elements * self.logN


@dataclass(frozen=True)
class AnonCiphertext:
    z1: RingElement
    tlist: tuple[RingElement, ...]
    z2: RingElement
    vlist: tuple[RingElement, ...]

    def __post_init__(self):
        if len(self.tlist) != len(self.vlist):
            raise ValueError("mask lists differ in length")

    @property
    def m(self) -> int:
        return len(self.tlist)

    def ring_elements(self) -> int:
        return 2 + len(self.tlist) + len(self.vlist)


@dataclass(frozen=True)
class AttributeTag:
    alpha: int


def anon_params(pp: PublicParams) -> AnonParams:
    return AnonParams(m=pp.bits, logN=pp.N.bit_length())


def attribute_tag(pp: PublicParams, identity) -> AttributeTag:
    """Q_A (and, for the point predicate of ``identity``, Q_F): alpha = H(id)."""
    tag = AttributeTag(hash_to_group(identity, pp))
    assert jacobi(tag.alpha, pp.N) == 1
    return tag


def _geometric(m: int, rng) -> int:
    # Geom(1/2) on {1, 2, ...}, clamped to m.
    k = 1
    while k < m and rng.getrandbits(1):
        k += 1
    return k


def _mask(ctx: RingCtx, component: RingElement, m: int, rng) -> tuple[RingElement, tuple[RingElement, ...]]:
    N = ctx.N
    k = _geometric(m, rng)
    mask = random_element(N, rng)
    z = ring_add(ctx, component, mask)
    decoys = []
    for _ in range(k - 1):
        for _ in range(ITERATION_CAP):
            cand = random_element(N, rng)
            if galbraith(ctx, ring_sub(ctx, z, cand)) == -1:
                decoys.append(cand)
                break
        else:
            raise IterationCapExceeded("no decoy with Galbraith value -1")
    decoys.append(mask)
    decoys.extend(random_element(N, rng) for _ in range(m - k))
    return z, tuple(decoys)


def anonymize(pp: PublicParams, ap: AnonParams, ct: Ciphertext, rng=None) -> AnonCiphertext:
    rng = rng or default_rng()
    ctx, nctx = contexts(pp, ct.a)
    z1, tlist = _mask(ctx, ct.c, ap.m, rng)
    z2, vlist = _mask(nctx, ct.d, ap.m, rng)
    return AnonCiphertext(z1, tlist, z2, vlist)


def _unmask(ctx: RingCtx, z: RingElement, masks: Sequence[RingElement]) -> RingElement:
    for t in masks:
        c = ring_sub(ctx, t, z)
        if galbraith(ctx, c) == 1:
            return c
    raise MalformedCiphertext("no mask position passes Galbraith's test for this tag")


def deanonymize(pp: PublicParams, ap: AnonParams, tag: AttributeTag, act: AnonCiphertext) -> Ciphertext:
    """Recover a ciphertext under ``tag``; components come back negated."""
    if act.m != ap.m:
        raise MalformedCiphertext(f"expected {ap.m} masks per component, got {act.m}")
    ctx, nctx = contexts(pp, tag.alpha)
    return Ciphertext(_unmask(ctx, act.z1, act.tlist), _unmask(nctx, act.z2, act.vlist), tag.alpha)


def anon_encrypt(pp: PublicParams, ap: AnonParams, identity, b: int, rng=None) -> AnonCiphertext:
    rng = rng or default_rng()
    return anonymize(pp, ap, xh_encrypt(pp, identity, b, rng), rng)


def anon_decrypt(pp: PublicParams, ap: AnonParams, sk: IdentityKey, act: AnonCiphertext) -> int:
    return xh_decrypt(pp, sk, deanonymize(pp, ap, attribute_tag(pp, sk.id), act))


def anon_eval(
    pp: PublicParams,
    ap: AnonParams,
    tag: AttributeTag,
    circuit: XorCircuit,
    acts: Sequence[AnonCiphertext],
    rng=None,
) -> AnonCiphertext:
    """Evaluate under the caller-supplied attribute tag and re-anonymize."""
    rng = rng or default_rng()
    cts = [deanonymize(pp, ap, tag, act) for act in acts]
    return anonymize(pp, ap, xh_eval(pp, circuit, cts, rng), rng)
