"""Alternating cosine sums over Gauss-sum arguments, the matching
quadratic exponential sums, and the identity checks between them.

For 0 < 2k <= q the cosine sum runs over all strictly increasing
2k-tuples of admissible indices,

    T_k = sum cos(theta_{n1} - theta_{n2} + ... - theta_{n_{2k}}),

and the exponential companion replaces each argument by its quadratic
model, collapsing to

    E_k = sum exp(2*pi*i*a*Q(v) / ((2-delta)^2 * q)),

with Q the alternating square sum of the tuple.  Both vanish in exact
arithmetic (T_k = Re E_k = 0); the reports here measure how far the
floating-point evaluation is from that.

Enumeration is lexicographic and sequential; accumulators are Kahan
compensated, so results are reproducible bit for bit.  Work is bounded
by an explicit summand budget because the vector count C(q, 2k) grows
combinatorially.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .arith import admissible_indices
from .errors import ComplexityBudgetExceeded, RangeError
from .gauss import QuadraticPhase, ThetaSequence, quadratic_phase, theta_sequence, unit_roots

__all__ = [
    "DEFAULT_TERM_BUDGET",
    "SumReport",
    "trig_sum",
    "quad_exp_sum",
    "sum_report",
    "term_count",
    "verify_sum_identities",
]

DEFAULT_TERM_BUDGET = 10_000_000


@dataclass(frozen=True)
class SumReport:
    """Joint evaluation of both sums for one (p, q, k)."""

    p: int
    q: int
    k: int
    t_value: float
    e_value: complex
    term_count: int
    residual: float  # max of |T|, |Re E|, |T - Re E|


def _check_k(k: int, q: int) -> None:
    if k < 1:
        raise RangeError(f"k must be positive, got {k}")
    if 2 * k > q:
        raise RangeError(f"need 2k <= q, got k={k}, q={q}")


def _kahan(acc: float, comp: float, term: float) -> tuple[float, float]:
    y = term - comp
    t = acc + y
    return t, (t - acc) - y


def term_count(q: int, k: int, admissible_count: int) -> int:
    """Number of admissible 2k-tuples (C(admissible_count, 2k))."""
    _check_k(k, q)
    return math.comb(admissible_count, 2 * k)


def trig_sum(theta: ThetaSequence, k: int) -> float:
    """Alternating cosine sum over admissible 2k-tuples; 0 when empty."""
    _check_k(k, theta.q)
    adm = theta.admissible_indices()
    args = [theta.theta(n) for n in adm]
    total, comp = 0.0, 0.0
    for combo in combinations(range(len(adm)), 2 * k):
        alt = 0.0
        sign = 1.0
        for idx in combo:
            alt += sign * args[idx]
            sign = -sign
        total, comp = _kahan(total, comp, math.cos(alt))
    return total


def quad_exp_sum(p: int, q: int, k: int, phase: QuadraticPhase | None = None) -> complex:
    """Quadratic exponential sum over the same admissible 2k-tuples.

    The coefficient a is taken from the fitted quadratic phase (single
    source of truth); phases are reduced exactly before exponentiation.
    """
    _check_k(k, q)
    if phase is None:
        phase = quadratic_phase(p, q)
    adm = admissible_indices(q)
    denom = (2 - phase.delta) ** 2 * q
    roots = unit_roots(denom)
    re, re_c = 0.0, 0.0
    im, im_c = 0.0, 0.0
    for combo in combinations(adm, 2 * k):
        quad = 0
        positive = True
        for n in combo:
            quad = quad + n * n if positive else quad - n * n
            positive = not positive
        root = roots[(phase.a * quad) % denom]
        re, re_c = _kahan(re, re_c, root.real)
        im, im_c = _kahan(im, im_c, root.imag)
    return complex(re, im)


def sum_report(
    p: int,
    q: int,
    k: int,
    theta: ThetaSequence | None = None,
    phase: QuadraticPhase | None = None,
) -> SumReport:
    """Evaluate both sums in a single shared enumeration."""
    _check_k(k, q)
    if theta is None:
        theta = theta_sequence(p, q)
    if phase is None:
        phase = quadratic_phase(p, q)
    adm = theta.admissible_indices()
    args = [theta.theta(n) for n in adm]
    denom = (2 - phase.delta) ** 2 * q
    roots = unit_roots(denom)
    a = phase.a

    t_total, t_c = 0.0, 0.0
    re, re_c = 0.0, 0.0
    im, im_c = 0.0, 0.0
    count = 0
    for combo in combinations(range(len(adm)), 2 * k):
        alt = 0.0
        quad = 0
        positive = True
        for idx in combo:
            n = adm[idx]
            if positive:
                alt += args[idx]
                quad += n * n
            else:
                alt -= args[idx]
                quad -= n * n
            positive = not positive
        t_total, t_c = _kahan(t_total, t_c, math.cos(alt))
        root = roots[(a * quad) % denom]
        re, re_c = _kahan(re, re_c, root.real)
        im, im_c = _kahan(im, im_c, root.imag)
        count += 1

    e_value = complex(re, im)
    residual = max(abs(t_total), abs(e_value.real), abs(t_total - e_value.real))
    return SumReport(p=p, q=q, k=k, t_value=t_total, e_value=e_value,
                     term_count=count, residual=residual)


def verify_sum_identities(
    p: int,
    q: int,
    k_max: int | None = None,
    budget: int = DEFAULT_TERM_BUDGET,
) -> list[SumReport]:
    """Reports for every k with 0 < 2k <= q (optionally capped by k_max).

    Raises ComplexityBudgetExceeded up front if the planned enumeration
    for this (p, q) pair would exceed the summand budget; callers that
    prefer skipping individual k values (e.g. the CLI sweep) should plan
    with term_count and call sum_report per k instead.
    """
    theta = theta_sequence(p, q)
    phase = quadratic_phase(p, q)
    adm_count = len(theta.admissible_indices())
    ks = [k for k in range(1, q // 2 + 1) if k_max is None or k <= k_max]
    planned = sum(math.comb(adm_count, 2 * k) for k in ks)
    if planned > budget:
        raise ComplexityBudgetExceeded(
            f"(p={p}, q={q}): {planned} summands exceed budget {budget}"
        )
    return [sum_report(p, q, k, theta=theta, phase=phase) for k in ks]
