"""Exact integer, modular, and combinatorial primitives.

Everything here is pure and deterministic: enumeration order is always
lexicographic so that downstream floating-point summations are
reproducible bit for bit.  All arithmetic uses Python integers, which
are exact at any size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import Callable, Iterator, Sequence

from .errors import ComponentCollision, NotCoprime, OddLength

__all__ = [
    "Fraction",
    "IndexVector",
    "ParityInfo",
    "gcd",
    "mod_inverse",
    "parity_info",
    "admissible",
    "admissible_indices",
    "enumerate_index_vectors",
    "cyclic_shift",
    "alternating_sum",
    "alternating_square_sum",
    "unity_sum",
]


@dataclass(frozen=True)
class Fraction:
    """An irreducible fraction p/q with q >= 1.

    The numerator may be negative and is stored as given; only the
    reduced-form requirement gcd(|p|, q) = 1 is enforced.
    """

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 1:
            raise ValueError(f"denominator must be positive, got {self.q}")
        if gcd(abs(self.p), self.q) != 1:
            raise NotCoprime(f"{self.p}/{self.q} is not irreducible")


@dataclass(frozen=True)
class IndexVector:
    """A strictly increasing tuple of integers in [0, N).

    Library internals pass plain tuples for speed; this container is
    the validated boundary form.
    """

    components: tuple[int, ...]
    N: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))
        v = self.components
        if any(not 0 <= c < self.N for c in v):
            raise ValueError(f"components outside [0, {self.N}): {v}")
        if any(a >= b for a, b in zip(v, v[1:])):
            raise ValueError(f"components not strictly increasing: {v}")

    @property
    def k(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)


@dataclass(frozen=True)
class ParityInfo:
    """Parity bookkeeping for a modulus q.

    delta is the parity of q.  For even q, q_half = q/2 and epsilon is
    the parity of q/2, which is also the common parity of every
    admissible index n (for odd q both are None).
    """

    delta: int
    epsilon: int | None
    q_half: int | None


def mod_inverse(a: int, q: int) -> int:
    """Inverse of a modulo q, in [0, q).  Raises NotCoprime otherwise."""
    if q < 1:
        raise ValueError(f"modulus must be positive, got {q}")
    try:
        return pow(a, -1, q)
    except ValueError as exc:
        raise NotCoprime(f"{a} is not invertible modulo {q}") from exc


def parity_info(q: int) -> ParityInfo:
    if q < 1:
        raise ValueError(f"q must be positive, got {q}")
    if q % 2 == 1:
        return ParityInfo(delta=1, epsilon=None, q_half=None)
    return ParityInfo(delta=0, epsilon=(q // 2) % 2, q_half=q // 2)


def admissible(n: int, q: int) -> bool:
    """True iff 4 does not divide 2n + 2 - q (always true for odd q).

    These are exactly the indices whose generalized Gauss sum does not
    vanish, hence the indices with a well-defined argument.
    """
    if not 0 <= n < q:
        raise ValueError(f"n must lie in [0, {q}), got {n}")
    return (2 * n + 2 - q) % 4 != 0


def admissible_indices(q: int) -> tuple[int, ...]:
    return tuple(n for n in range(q) if admissible(n, q))


def enumerate_index_vectors(
    k: int,
    N: int,
    predicate: Callable[[int], bool] | None = None,
) -> Iterator[tuple[int, ...]]:
    """Yield all strictly increasing k-tuples over [0, N), lexicographically.

    With a predicate, only tuples all of whose components satisfy it are
    produced.  k = 0 yields exactly one empty tuple.
    """
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    pool = range(N) if predicate is None else [n for n in range(N) if predicate(n)]
    return combinations(pool, k)


def cyclic_shift(v: Sequence[int], h: int, N: int) -> tuple[int, ...]:
    """Shift every component by h modulo N and re-sort.

    Sorting realizes the circular permutation that brings the reduced
    vector back to strictly increasing form.  The map is a bijection on
    the strictly increasing tuples over [0, N), inverted by -h.
    """
    if any(not 0 <= c < N for c in v):
        raise ValueError(f"components outside [0, {N}): {tuple(v)}")
    shifted = sorted((c + h) % N for c in v)
    if any(a == b for a, b in zip(shifted, shifted[1:])):
        raise ComponentCollision(f"components collide modulo {N}: {tuple(v)} + {h}")
    return tuple(shifted)


def alternating_sum(v: Sequence[int]) -> int:
    """Signed sum -v1 + v2 - v3 + ... + v_{2k} of an even-length vector.

    For strictly increasing input this equals the positive quantity
    (v2-v1) + (v4-v3) + ... and is strictly less than the range bound.
    """
    if len(v) == 0 or len(v) % 2:
        raise OddLength(f"need an even, positive length, got {len(v)}")
    return sum(c if j % 2 else -c for j, c in enumerate(v))


def alternating_square_sum(v: Sequence[int]) -> int:
    """Signed square sum v1^2 - v2^2 + ... - v_{2k}^2 of an even-length vector."""
    if len(v) == 0 or len(v) % 2:
        raise OddLength(f"need an even, positive length, got {len(v)}")
    return sum(-c * c if j % 2 else c * c for j, c in enumerate(v))


def unity_sum(c: int, q: int) -> complex:
    """Direct summation of exp(2*pi*i*c*h/q) over h in [0, q).

    Test oracle for the root-of-unity cancellation: the result is q when
    q divides c and 0 otherwise.
    """
    if q < 1:
        raise ValueError(f"q must be positive, got {q}")
    re = math.fsum(math.cos(2.0 * math.pi * ((c * h) % q) / q) for h in range(q))
    im = math.fsum(math.sin(2.0 * math.pi * ((c * h) % q) / q) for h in range(q))
    return complex(re, im)
