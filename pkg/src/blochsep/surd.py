"""Exact surd rendering for threshold values.

Noise thresholds are square roots of small rationals; printing them as
"a*sqrt(c)/b" (c squarefree) keeps regression diffs stable across platforms.
"""

from __future__ import annotations

import math
from fractions import Fraction

MAX_DENOMINATOR = 10_000


def _squarefree_split(n: int) -> tuple[int, int]:
    """n = s^2 * c with c squarefree; returns (s, c)."""
    s, c = 1, 1
    p = 2
    while p * p <= n:
        exp = 0
        while n % p == 0:
            n //= p
            exp += 1
        s *= p ** (exp // 2)
        if exp % 2:
            c *= p
        p += 1 if p == 2 else 2
    return s, c * n


def as_surd(value: float, *, rel_tol: float = 1e-9) -> str | None:
    """Render ``value`` as "a*sqrt(c)/b" when value^2 is a small rational.

    Returns None when no rational of denominator <= 10^4 reproduces the value
    to ``rel_tol``.
    """
    if value < 0 or not math.isfinite(value):
        return None
    frac = Fraction(value * value).limit_denominator(MAX_DENOMINATOR)
    if frac == 0:
        return "0" if abs(value) <= rel_tol else None
    if abs(math.sqrt(frac) - value) > rel_tol * max(value, 1e-30):
        return None
    p, q = frac.numerator, frac.denominator
    # sqrt(p/q) = sqrt(p*q)/q = s*sqrt(c)/q
    s, c = _squarefree_split(p * q)
    g = math.gcd(s, q)
    num, den = s // g, q // g
    if c == 1:
        return f"{num}" if den == 1 else f"{num}/{den}"
    root = f"sqrt({c})"
    head = root if num == 1 else f"{num}*{root}"
    return head if den == 1 else f"{head}/{den}"
