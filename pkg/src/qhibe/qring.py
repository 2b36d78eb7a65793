"""Arithmetic in R_a = Z_N[x]/(x^2 - a) on degree-one elements c0 + c1*x.

Elements never carry their modulus; every operation takes a :class:`RingCtx`.
The ciphertext's second component lives in R_{-a}, reached through
:meth:`RingCtx.negated`.

Coefficient multiplications and inversions go through :func:`mulmod` and
:func:`invmod` so that :func:`counting` can tally them.
"""
from __future__ import annotations

import contextvars
import math
from contextlib import contextmanager
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple

from .errors import IterationCapExceeded
from .numtheory import (
    ITERATION_CAP,
    MasterSecret,
    default_rng,
    jacobi,
    nu_encode,
    qr_oracle,
)


class RingElement(NamedTuple):
    c0: int
    c1: int


ONE = RingElement(1, 0)


@dataclass
class OpCount:
    mul: int = 0
    inv: int = 0


_counter: contextvars.ContextVar[OpCount | None] = contextvars.ContextVar("qhibe_opcount", default=None)


@contextmanager
def counting() -> Iterator[OpCount]:
    """Count coefficient multiplications/inversions performed inside the block."""
    count = OpCount()
    token = _counter.set(count)
    try:
        yield count
    finally:
        _counter.reset(token)


def mulmod(x: int, y: int, N: int) -> int:
    count = _counter.get()
    if count is not None:
        count.mul += 1
    return x * y % N


def invmod(x: int, N: int) -> int:
    count = _counter.get()
    if count is not None:
        count.inv += 1
    return pow(x, -1, N)


@dataclass(frozen=True)
class RingCtx:
    """The square parameter ``a`` and modulus ``N`` of R_a."""

    a: int
    N: int

    def __post_init__(self):
        if not 0 <= self.a < self.N:
            raise ValueError("a must be reduced mod N")
        if math.gcd(self.a, self.N) != 1:
            raise ValueError("a must be a unit mod N")
        if jacobi(self.a, self.N) != 1 and jacobi(self.N - self.a, self.N) != 1:
            raise ValueError("neither a nor -a has Jacobi symbol +1")

    def negated(self) -> RingCtx:
        return ring_ctx(self.N - self.a, self.N)


@lru_cache(maxsize=4096)
def ring_ctx(a: int, N: int) -> RingCtx:
    """Cached, validated :class:`RingCtx` for ``a mod N``."""
    return RingCtx(a % N, N)


def ring_mul(ctx: RingCtx, c: RingElement, d: RingElement) -> RingElement:
    """(c0*d0 + a*c1*d1, c0*d1 + c1*d0) using four coefficient multiplications."""
    N = ctx.N
    p0 = mulmod(c.c0, d.c0, N)
    p1 = mulmod(c.c1, d.c1, N)
    cross = mulmod(c.c0 + c.c1, d.c0 + d.c1, N)
    return RingElement((p0 + mulmod(ctx.a, p1, N)) % N, (cross - p0 - p1) % N)


def ring_add(ctx: RingCtx, c: RingElement, d: RingElement) -> RingElement:
    return RingElement((c.c0 + d.c0) % ctx.N, (c.c1 + d.c1) % ctx.N)


def ring_sub(ctx: RingCtx, c: RingElement, d: RingElement) -> RingElement:
    return RingElement((c.c0 - d.c0) % ctx.N, (c.c1 - d.c1) % ctx.N)


def ring_neg(ctx: RingCtx, c: RingElement) -> RingElement:
    return RingElement(-c.c0 % ctx.N, -c.c1 % ctx.N)


def norm(ctx: RingCtx, c: RingElement) -> int:
    """c0^2 - a*c1^2 mod N; the quantity Galbraith's test takes the symbol of."""
    return (c.c0 * c.c0 - ctx.a * c.c1 * c.c1) % ctx.N


def ring_inv(ctx: RingCtx, c: RingElement) -> RingElement:
    N = ctx.N
    z = norm(ctx, c)
    if math.gcd(z, N) != 1:
        raise ValueError("element has non-unit norm; it is not in G_a")
    zi = invmod(z, N)
    return RingElement(mulmod(c.c0, zi, N), mulmod(-c.c1 % N, zi, N))


def eval_at(c: RingElement, r: int, N: int) -> int:
    return (c.c0 + r * c.c1) % N


def galbraith(ctx: RingCtx, c: RingElement) -> int:
    """Galbraith's test in R_a: the Jacobi symbol of the norm."""
    return jacobi(norm(ctx, c), ctx.N)


def in_G(ctx: RingCtx, c: RingElement) -> bool:
    return galbraith(ctx, c) == 1


def s_element(ctx: RingCtx, t: int, g: int, s: int | None = None) -> RingElement:
    """The element t^-1 * (s + g*x)^2 of R_a.

    With ``s`` omitted (``s = t``) this is the closed form
    ``(t + a*g^2*t^-1) + 2g*x`` at a cost of one inversion and three
    multiplications; the general form costs one inversion and six.
    """
    N = ctx.N
    w = invmod(t, N)
    if s is None:
        c0 = (t + mulmod(mulmod(ctx.a, mulmod(g, g, N), N), w, N)) % N
        return RingElement(c0, 2 * g % N)
    ws = mulmod(w, s, N)
    wg = mulmod(w, g, N)
    c0 = (mulmod(ws, s, N) + mulmod(ctx.a, mulmod(wg, g, N), N)) % N
    return RingElement(c0, 2 * mulmod(ws, g, N) % N)


def admissible(ctx: RingCtx, c: RingElement) -> bool:
    """Acceptance test of :func:`sample_S`: c in G_a with a unit constant term."""
    return math.gcd(c.c0, ctx.N) == 1 and galbraith(ctx, c) == 1


def sample_S(ctx: RingCtx, b: int, rng=None) -> RingElement:
    """Uniform element of the coset of S_a whose members decrypt to ``b``.

    Draws t with (t/N) = nu(b) and s, g uniform in Z_N, and returns
    t^-1 * (s + g*x)^2 once it passes :func:`admissible`. Drawing s
    independently of t (rather than fixing s = t) makes the output exactly
    uniform on the coset even when N has small factors.
    """
    rng = rng or default_rng()
    N = ctx.N
    sym = nu_encode(b)
    for _ in range(ITERATION_CAP):
        t = rng.randrange(1, N)
        if jacobi(t, N) != sym:
            continue
        c = s_element(ctx, t, rng.randrange(N), rng.randrange(N))
        if admissible(ctx, c):
            return c
    raise IterationCapExceeded("sample_S found no admissible element")


def random_element(N: int, rng) -> RingElement:
    """Uniform element of Z_N[x] of degree at most one."""
    return RingElement(rng.randrange(N), rng.randrange(N))


# Toy-scale enumeration. Everything below walks all N^2 elements.

def enumerate_G(ctx: RingCtx) -> list[RingElement]:
    N = ctx.N
    return [RingElement(c0, c1) for c0 in range(N) for c1 in range(N) if in_G(ctx, RingElement(c0, c1))]


def enumerate_S(ctx: RingCtx, msk: MasterSecret) -> list[RingElement]:
    """Members of G_a whose norm is a square and whose constant term is a unit."""
    return [
        c for c in enumerate_G(ctx)
        if math.gcd(c.c0, ctx.N) == 1 and qr_oracle(norm(ctx, c), msk)
    ]


def enumerate_coset(ctx: RingCtx, msk: MasterSecret, r: int, b: int) -> list[RingElement]:
    """Members of S_a that decrypt to ``b`` under the key r (r^2 = a)."""
    if r * r % ctx.N != ctx.a:
        raise ValueError("r is not a square root of a")
    sym = nu_encode(b)
    return [c for c in enumerate_S(ctx, msk) if jacobi(eval_at(c, r, ctx.N), ctx.N) == sym]
