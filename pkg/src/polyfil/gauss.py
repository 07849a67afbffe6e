"""Generalized quadratic Gauss sums, their arguments, and the quadratic
phase normal form.

G(-p, n, q) = sum_{k=0}^{q-1} exp(2*pi*i*(-p*k^2 + n*k)/q), with p and q
coprime.  Sums are evaluated by direct O(q) summation only; exponents are
reduced modulo q in exact integer arithmetic before any angle is formed,
so precision does not degrade with k, and the accumulation is compensated
(math.fsum) and strictly sequential for reproducibility.

Non-vanishing sums have modulus sqrt(q) for odd q and sqrt(2q) for even q,
while the vanishing ones are exactly the indices n with 4 | 2n + 2 - q.
That gap of many orders of magnitude makes the relative threshold below a
safe classifier at desk scale (q up to a few thousand).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .arith import admissible, mod_inverse, parity_info
from .errors import InternalVanishing, NotCoprime, UndefinedTheta

__all__ = [
    "VANISHING_RELATIVE_TOL",
    "GaussSumValue",
    "ThetaSequence",
    "QuadraticPhase",
    "gauss_sum",
    "theta_sequence",
    "quadratic_phase",
    "vanishing_pattern",
    "max_phase_defect",
    "unit_roots",
]

VANISHING_RELATIVE_TOL = 1e-9


@lru_cache(maxsize=512)
def unit_roots(q: int) -> tuple[complex, ...]:
    """The q-th roots of unity exp(2*pi*i*m/q), m = 0..q-1."""
    return tuple(
        complex(math.cos(2.0 * math.pi * m / q), math.sin(2.0 * math.pi * m / q))
        for m in range(q)
    )


@dataclass(frozen=True)
class GaussSumValue:
    """One evaluated sum: complex value, modulus, principal argument in
    (-pi, pi] (None when the sum vanishes), and the vanishing flag."""

    value: complex
    modulus: float
    argument: float | None
    vanishing: bool


@dataclass(frozen=True)
class ThetaSequence:
    """All q sums for fixed (p, q), indexed by n in [0, q)."""

    p: int
    q: int
    entries: tuple[GaussSumValue, ...]

    def theta(self, n: int) -> float:
        entry = self.entries[n]
        if entry.vanishing:
            raise UndefinedTheta(f"G(-{self.p},{n},{self.q}) vanishes; no argument")
        assert entry.argument is not None
        return entry.argument

    def admissible_indices(self) -> tuple[int, ...]:
        return tuple(n for n, e in enumerate(self.entries) if not e.vanishing)

    def __len__(self) -> int:
        return self.q


@dataclass(frozen=True)
class QuadraticPhase:
    """Normal form of the arguments: for every admissible n,

        theta_n  =  (2*pi*a/q) * (n / (2 - delta))^2  +  b   (mod 2*pi)

    with a in [0, q) coprime to q and b the argument of an n-independent
    reference sum.  delta is the parity of q; epsilon (even q only) is
    the common parity of the admissible indices.
    """

    p: int
    q: int
    a: int
    b: float
    delta: int
    epsilon: int | None

    def model_theta(self, n: int) -> float:
        """Model phase for index n, with the quadratic part reduced
        modulo 2*pi in exact integer arithmetic."""
        d = (2 - self.delta) ** 2 * self.q
        m = (self.a * n * n) % d
        return 2.0 * math.pi * m / d + self.b


def _principal(angle: float) -> float:
    # atan2 returns values in [-pi, pi]; fold the -pi edge onto +pi.
    if angle <= -math.pi:
        return angle + 2.0 * math.pi
    return angle


def _evaluate(p: int, q: int, n: int, roots: tuple[complex, ...]) -> GaussSumValue:
    exps = [(-p * k * k + n * k) % q for k in range(q)]
    re = math.fsum(roots[m].real for m in exps)
    im = math.fsum(roots[m].imag for m in exps)
    value = complex(re, im)
    modulus = abs(value)
    if modulus < VANISHING_RELATIVE_TOL * max(1.0, math.sqrt(q)):
        return GaussSumValue(value, modulus, None, True)
    return GaussSumValue(value, modulus, _principal(math.atan2(im, re)), False)


def _require_coprime(p: int, q: int) -> None:
    if q < 1:
        raise ValueError(f"q must be positive, got {q}")
    if gcd(p, q) != 1:
        raise NotCoprime(f"p={p} and q={q} must be coprime")


def gauss_sum(p: int, q: int, n: int) -> GaussSumValue:
    """Evaluate G(-p, n, q) by direct summation."""
    _require_coprime(p, q)
    if not 0 <= n < q:
        raise ValueError(f"n must lie in [0, {q}), got {n}")
    return _evaluate(p, q, n, unit_roots(q))


def theta_sequence(p: int, q: int) -> ThetaSequence:
    """Evaluate all q sums for fixed (p, q); one shared root table."""
    _require_coprime(p, q)
    roots = unit_roots(q)
    entries = tuple(_evaluate(p, q, n, roots) for n in range(q))
    return ThetaSequence(p, q, entries)


def vanishing_pattern(q: int, p: int) -> tuple[bool, ...]:
    """Per-index vanishing flags; must equal the negation of admissibility."""
    return tuple(e.vanishing for e in theta_sequence(p, q).entries)


def quadratic_phase(p: int, q: int) -> QuadraticPhase:
    """Fit the quadratic phase model by completing the square.

    Odd q:  a is the inverse of 4p, and b the argument of the n = 0 sum.
    Even q: a is the inverse of p; the reference is the n = epsilon sum
    carrying an extra phase -pi*epsilon*a/(2q).
    """
    _require_coprime(p, q)
    info = parity_info(q)
    if info.delta == 1:
        a = mod_inverse(4 * p, q)
        reference = gauss_sum(p, q, 0)
        if reference.vanishing:
            raise InternalVanishing(f"G(-{p},0,{q}) vanished for odd q")
        ref_value = reference.value
        epsilon = None
    else:
        a = mod_inverse(p, q)
        epsilon = info.epsilon
        assert epsilon is not None
        reference = gauss_sum(p, q, epsilon)
        if reference.vanishing:
            raise InternalVanishing(
                f"G(-{p},{epsilon},{q}) vanished; parity bookkeeping is wrong"
            )
        ref_value = reference.value * cmath.exp(-1j * math.pi * epsilon * a / (2 * q))
    b = _principal(math.atan2(ref_value.imag, ref_value.real))
    return QuadraticPhase(p=p, q=q, a=a, b=b, delta=info.delta, epsilon=epsilon)


def max_phase_defect(p: int, q: int) -> float:
    """Largest distance, over admissible n, from the model-vs-actual phase
    difference to the nearest multiple of 2*pi."""
    theta = theta_sequence(p, q)
    phase = quadratic_phase(p, q)
    worst = 0.0
    for n in range(q):
        if not admissible(n, q):
            continue
        d = (phase.model_theta(n) - theta.theta(n)) % (2.0 * math.pi)
        worst = max(worst, min(d, 2.0 * math.pi - d))
    return worst
