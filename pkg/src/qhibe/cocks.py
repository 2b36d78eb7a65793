"""The original Cocks IBE scheme, kept as a correctness baseline and as the
target of Galbraith's anonymity attack."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import AccessDenied, IterationCapExceeded
from .numtheory import (
    ITERATION_CAP,
    MasterSecret,
    PublicParams,
    _as_bytes,
    default_rng,
    gen_blum_modulus,
    hash_to_group,
    jacobi,
    nu_decode,
    nu_encode,
    sqrt_extract,
)


@dataclass(frozen=True)
class IdentityKey:
    """Secret key for ``id``: r with r^2 = +-H(id) (mod N)."""

    id: bytes
    r: int


@dataclass(frozen=True)
class CocksCiphertext:
    u: int
    v: int


def cocks_setup(bits: int, rng=None) -> tuple[PublicParams, MasterSecret]:
    return gen_blum_modulus(bits, rng)


def cocks_keygen(pp: PublicParams, msk: MasterSecret, identity) -> IdentityKey:
    if not msk.matches(pp):
        raise ValueError("master secret does not factor the public modulus")
    identity = _as_bytes(identity)
    return IdentityKey(identity, sqrt_extract(hash_to_group(identity, pp), msk))


def galbraith_scalar(a: int, c: int, N: int) -> int:
    """Galbraith's test (c^2 - 4a / N) on a single Cocks component."""
    return jacobi(c * c - 4 * a, N)


def cocks_component(a: int, t: int, N: int) -> int:
    """t + a/t mod N. Passing -a gives the second component t - a/t."""
    return (t + a * pow(t, -1, N)) % N


def _draw_component(a: int, sym: int, N: int, rng) -> int:
    # Non-unit outputs or a zero Galbraith value are resampled; both are
    # negligible at real sizes but frequent for toy moduli.
    for _ in range(ITERATION_CAP):
        t = rng.randrange(1, N)
        if jacobi(t, N) != sym:
            continue
        c = cocks_component(a, t, N)
        if math.gcd(c, N) == 1 and galbraith_scalar(a, c, N) != 0:
            return c
    raise IterationCapExceeded("Cocks encryption found no admissible t")


def cocks_encrypt(pp: PublicParams, identity, b: int, rng=None) -> CocksCiphertext:
    rng = rng or default_rng()
    N = pp.N
    a = hash_to_group(identity, pp)
    sym = nu_encode(b)
    return CocksCiphertext(_draw_component(a, sym, N, rng), _draw_component(N - a, sym, N, rng))


def cocks_decrypt(pp: PublicParams, sk: IdentityKey, ct: CocksCiphertext, identity=None) -> int:
    """Decrypt to a bit, or raise :class:`AccessDenied` (⊥).

    The ciphertext carries no identity, so by default the recipient is taken
    to be ``sk.id``. Passing the intended ``identity`` makes a mismatched key
    detectable.
    """
    N = pp.N
    a = hash_to_group(sk.id if identity is None else identity, pp)
    rr = sk.r * sk.r % N
    if rr == a:
        d = ct.u
    elif rr == N - a:
        d = ct.v
    else:
        raise AccessDenied("key does not match the identity")
    return nu_decode(jacobi(d + 2 * sk.r, N))
