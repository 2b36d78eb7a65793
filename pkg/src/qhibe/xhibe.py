"""XOR-homomorphic identity-based encryption over R_a.

A ciphertext is ``(c, d, a)`` with ``c`` in R_a (decrypted by keys with
r^2 = a) and ``d`` in R_{-a} (keys with r^2 = -a). Multiplying ciphertexts
component-wise XORs the plaintexts.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cocks import IdentityKey
from .errors import AccessDenied, MalformedCiphertext
from .numtheory import PublicParams, default_rng, hash_to_group, jacobi, nu_decode
from .qring import ONE, RingCtx, RingElement, eval_at, galbraith, ring_ctx, ring_mul, sample_S


@dataclass(frozen=True)
class Ciphertext:
    c: RingElement
    d: RingElement
    a: int


@dataclass(frozen=True)
class XorCircuit:
    """A linear circuit over Z_2, given by its selection vector."""

    v: tuple[int, ...]

    def __post_init__(self):
        if len(self.v) < 1:
            raise ValueError("a circuit needs at least one input")
        if any(bit not in (0, 1) for bit in self.v):
            raise ValueError("circuit vector entries must be bits")

    @classmethod
    def parse(cls, text: str) -> XorCircuit:
        """Parse ``"1,0,1"``."""
        try:
            return cls(tuple(int(part) for part in text.split(",")))
        except ValueError as exc:
            raise ValueError(f"bad circuit {text!r}: {exc}") from None

    def __len__(self):
        return len(self.v)

    def apply(self, bits: Sequence[int]) -> int:
        return sum(v & b for v, b in zip(self.v, bits, strict=True)) % 2


def contexts(pp: PublicParams, a: int) -> tuple[RingCtx, RingCtx]:
    ctx = ring_ctx(a, pp.N)
    return ctx, ctx.negated()


def encrypt_tag(pp: PublicParams, a: int, b: int, rng=None) -> tuple[RingElement, RingElement]:
    """The encryption subroutine E(PP, a, b): fresh components for R_a and R_{-a}."""
    rng = rng or default_rng()
    ctx, nctx = contexts(pp, a)
    return sample_S(ctx, b, rng), sample_S(nctx, b, rng)


def xh_encrypt(pp: PublicParams, identity, b: int, rng=None) -> Ciphertext:
    a = hash_to_group(identity, pp)
    c, d = encrypt_tag(pp, a, b, rng)
    return Ciphertext(c, d, a)


def xh_decrypt(pp: PublicParams, sk: IdentityKey, ct: Ciphertext) -> int:
    """Return the plaintext bit or raise :class:`AccessDenied` (⊥)."""
    N = pp.N
    ctx, nctx = contexts(pp, ct.a)
    rr = sk.r * sk.r % N
    if rr == ctx.a and galbraith(ctx, ct.c) == 1:
        e = ct.c
    elif rr == nctx.a and galbraith(nctx, ct.d) == 1:
        e = ct.d
    else:
        raise AccessDenied("key does not match the ciphertext identity")
    j = jacobi(eval_at(e, sk.r, N), N)
    if j == 0:
        raise MalformedCiphertext("component evaluates to a non-unit")
    return nu_decode(j)


def xh_combine(pp: PublicParams, x: Ciphertext, y: Ciphertext) -> Ciphertext:
    """One homomorphic XOR (no re-randomization): eight coefficient multiplications."""
    if x.a != y.a:
        raise AccessDenied("ciphertexts belong to different identities")
    ctx, nctx = contexts(pp, x.a)
    return Ciphertext(ring_mul(ctx, x.c, y.c), ring_mul(nctx, x.d, y.d), x.a)


def xh_rerandomize(pp: PublicParams, ct: Ciphertext, rng=None) -> Ciphertext:
    """Multiply by a fresh encryption of 0."""
    ctx, nctx = contexts(pp, ct.a)
    zc, zd = encrypt_tag(pp, ct.a, 0, rng)
    return Ciphertext(ring_mul(ctx, ct.c, zc), ring_mul(nctx, ct.d, zd), ct.a)


def xh_eval(
    pp: PublicParams,
    circuit: XorCircuit,
    cts: Sequence[Ciphertext],
    rng=None,
    rerandomize: bool = True,
) -> Ciphertext:
    """Evaluate ``circuit`` on ``cts``; the result decrypts to <v, b> mod 2.

    Inputs under different identities abort with ⊥. ``rerandomize=False``
    skips the final multiplication by an encryption of 0 and exists only as
    a negative control for the distribution tests.
    """
    if len(cts) != len(circuit):
        raise ValueError(f"circuit takes {len(circuit)} inputs, got {len(cts)}")
    a = cts[0].a
    if any(ct.a != a for ct in cts):
        raise AccessDenied("evaluation across different identities")
    ctx, nctx = contexts(pp, a)
    c, d = ONE, ONE
    first = True
    for bit, ct in zip(circuit.v, cts):
        if not bit:
            continue
        if first:
            c, d, first = ct.c, ct.d, False
        else:
            c, d = ring_mul(ctx, c, ct.c), ring_mul(nctx, d, ct.d)
    out = Ciphertext(c, d, a)
    return xh_rerandomize(pp, out, rng) if rerandomize else out


def xh_is_valid(pp: PublicParams, ct: Ciphertext, identity=None) -> bool:
    """Ciphertext validity: both components pass Galbraith's test for their ring.

    With ``identity`` the check is relative to that recipient, so a
    ciphertext carrying any other attribute is invalid.
    """
    if identity is not None and ct.a != hash_to_group(identity, pp):
        return False
    try:
        ctx, nctx = contexts(pp, ct.a)
    except ValueError:
        return False
    return galbraith(ctx, ct.c) == 1 and galbraith(nctx, ct.d) == 1


def payload_elements(ct: Ciphertext) -> int:
    """Number of Z_N elements carried besides the identity tag."""
    return len(ct.c) + len(ct.d)


def ciphertext_bytes(pp: PublicParams, ct: Ciphertext) -> bytes:
    """Canonical fixed-width encoding: a, c0, c1, d0, d1 as |N|-byte integers."""
    w = pp.nbytes
    return b"".join(x.to_bytes(w, "big") for x in (ct.a, ct.c.c0, ct.c.c1, ct.d.c0, ct.d.c1))
