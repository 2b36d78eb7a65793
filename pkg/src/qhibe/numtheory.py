"""Modular arithmetic over Blum moduli: key generation, Jacobi symbols,
square roots from the factorization and the identity hash."""
from __future__ import annotations

import hashlib
import math
import secrets
from dataclasses import dataclass
from functools import lru_cache

from .errors import IterationCapExceeded, MalformedCiphertext

#: Hard cap on every rejection loop in the package.
ITERATION_CAP = 1 << 16

HASH_NAME = "sha256"
HASH_TAG = b"QHIBE1/hash-to-group"
#: Extra digest bits beyond |N| so that reducing mod N-1 is statistically uniform.
HASH_SLACK_BITS = 128

MR_ROUNDS = 40  # 4^-40 = 2^-80

_SMALL_PRIMES = [p for p in range(3, 2000) if all(p % d for d in range(2, int(p ** 0.5) + 1))]


def default_rng():
    return secrets.SystemRandom()


@dataclass(frozen=True)
class PublicParams:
    """The public modulus ``N`` and the prime bit length ``bits`` it was built from."""

    N: int
    bits: int

    def __post_init__(self):
        if self.N < 3 or self.N % 2 == 0:
            raise ValueError("modulus must be odd and >= 3")
        if not 2 * self.bits - 1 <= self.N.bit_length() <= 2 * self.bits:
            raise ValueError(f"modulus of {self.N.bit_length()} bits does not fit bits={self.bits}")

    @property
    def nbytes(self) -> int:
        return (self.N.bit_length() + 7) // 8


@dataclass(frozen=True)
class MasterSecret:
    p: int
    q: int

    def __post_init__(self):
        if self.p == self.q:
            raise ValueError("p and q must differ")
        if self.p % 4 != 3 or self.q % 4 != 3:
            raise ValueError("p and q must both be 3 mod 4")

    @property
    def N(self) -> int:
        return self.p * self.q

    def matches(self, pp: PublicParams) -> bool:
        return self.p * self.q == pp.N


def jacobi(x: int, N: int) -> int:
    """Jacobi symbol (x/N) for odd N >= 3, by the binary reciprocity algorithm."""
    if N < 3 or N % 2 == 0:
        raise ValueError("Jacobi symbol needs an odd modulus >= 3")
    a = x % N
    n = N
    sign = 1
    while a:
        tz = (a & -a).bit_length() - 1
        a >>= tz
        if tz & 1 and n & 7 in (3, 5):
            sign = -sign
        if a & n & 3 == 3:
            sign = -sign
        a, n = n % a, a
    return sign if n == 1 else 0


def nu_encode(bit: int) -> int:
    if bit not in (0, 1):
        raise ValueError(f"not a bit: {bit!r}")
    return 1 - 2 * bit


def nu_decode(j: int) -> int:
    if j == 1:
        return 0
    if j == -1:
        return 1
    if j == 0:
        raise MalformedCiphertext("Jacobi symbol 0: a non-unit reached decoding")
    raise ValueError(f"not a Jacobi value: {j!r}")


def is_probable_prime(n: int, rng=None, rounds: int = MR_ROUNDS) -> bool:
    """Trial division followed by ``rounds`` Miller-Rabin rounds."""
    if n < 2:
        return False
    if n in (2, 3):
        return True
    if n % 2 == 0:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if n < _SMALL_PRIMES[-1] ** 2:
        return True
    rng = rng or default_rng()
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for _ in range(rounds):
        x = pow(rng.randrange(2, n - 1), d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _random_blum_prime(bits: int, rng) -> int:
    # Lower end 3*2^(bits-3) admits 7 at bits=4, which keeps N=77 reachable.
    lo, hi = 3 << (bits - 3), 1 << bits
    for _ in range(ITERATION_CAP):
        cand = rng.randrange(lo, hi) | 3
        if is_probable_prime(cand, rng):
            return cand
    raise IterationCapExceeded(f"no {bits}-bit Blum prime after {ITERATION_CAP} candidates")


def gen_blum_modulus(bits: int, rng=None) -> tuple[PublicParams, MasterSecret]:
    """Draw distinct primes p, q = 3 (mod 4) of at most ``bits`` bits with
    |pq| in [2*bits - 1, 2*bits].

    Deterministic for a seeded ``rng``.
    """
    if bits < 4:
        raise ValueError("bits must be >= 4")
    rng = rng or default_rng()
    for _ in range(ITERATION_CAP):
        p = _random_blum_prime(bits, rng)
        q = _random_blum_prime(bits, rng)
        if p == q or (p * q).bit_length() < 2 * bits - 1:
            continue
        return PublicParams(p * q, bits), MasterSecret(p, q)
    raise IterationCapExceeded("Blum modulus search exhausted")


def sqrt_extract(a: int, msk: MasterSecret) -> int:
    """Return r with r^2 = a or r^2 = -a (mod N), for (a/N) = +1."""
    N = msk.N
    a %= N
    if math.gcd(a, N) != 1 or jacobi(a, N) != 1:
        raise ValueError("square root extraction needs a unit with Jacobi symbol +1")
    return pow(a, (N + 5 - msk.p - msk.q) // 8, N)


def _as_bytes(identity) -> bytes:
    if isinstance(identity, str):
        return identity.encode("utf-8")
    return bytes(identity)


@lru_cache(maxsize=4096)
def _hash_to_group(identity: bytes, N: int) -> int:
    nblocks = -(-(N.bit_length() + HASH_SLACK_BITS) // 256)
    counter = 0
    for _ in range(ITERATION_CAP):
        stream = b"".join(
            hashlib.sha256(HASH_TAG + identity + (counter + j).to_bytes(4, "big")).digest()
            for j in range(nblocks)
        )
        counter += nblocks
        a = int.from_bytes(stream, "big") % (N - 1) + 1
        if math.gcd(a, N) == 1 and jacobi(a, N) == 1:
            return a
    raise IterationCapExceeded("hash_to_group found no Jacobi +1 unit; is N malformed?")


def hash_to_group(identity, pp: PublicParams) -> int:
    """Full-domain hash of an identity onto the units of Z_N with Jacobi symbol +1.

    Candidate ``k`` is the big-endian integer of the concatenated digests
    ``SHA-256(HASH_TAG || id || ctr)`` for ``ctr`` in ``[k*B, (k+1)*B)`` with
    ``ctr`` a 32-bit big-endian counter and ``B = ceil((|N| + 128) / 256)``,
    reduced as ``x mod (N - 1) + 1``. The first candidate that is a unit
    with Jacobi symbol +1 is returned.
    """
    return _hash_to_group(_as_bytes(identity), pp.N)


def sample_unit_with_symbol(pp: PublicParams, s: int, rng=None) -> int:
    """Uniform unit t of Z_N with (t/N) = s."""
    if s not in (-1, 1):
        raise ValueError("symbol must be +1 or -1")
    rng = rng or default_rng()
    N = pp.N
    for _ in range(ITERATION_CAP):
        t = rng.randrange(1, N)
        if jacobi(t, N) == s:
            return t
    raise IterationCapExceeded("no unit with the requested Jacobi symbol")


def qr_oracle(x: int, msk: MasterSecret) -> bool:
    """Decide x in QR(N) by Euler's criterion modulo both primes (needs the factors)."""
    N = msk.N
    x %= N
    if math.gcd(x, N) != 1:
        raise ValueError("quadratic residuosity is only decided for units")
    return pow(x, (msk.p - 1) // 2, msk.p) == 1 and pow(x, (msk.q - 1) // 2, msk.q) == 1


def factor_toy_modulus(N: int, limit: int = 10 ** 4) -> MasterSecret:
    """Recover (p, q) by trial division. Only for enumerable toy moduli."""
    if N > limit:
        raise ValueError(f"modulus {N} too large to factor by trial division (limit {limit})")
    for p in range(3, math.isqrt(N) + 1, 2):
        if N % p == 0:
            return MasterSecret(p, N // p)
    raise ValueError(f"{N} has no odd factorization")
