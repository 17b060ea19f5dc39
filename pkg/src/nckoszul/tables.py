"""Exact combinatorial number tables used by every bracket formula.

All values are ``fractions.Fraction`` instances (arbitrary precision, always
in lowest terms, positive denominator), so downstream identity checks can
compare against exact zero.

Convention warning: Bernoulli numbers follow the generating series
``x/(exp(x)-1)``, i.e. ``B_1 = -1/2``.  The opposite convention
(``B_1 = +1/2``) silently breaks the closed bracket formulas built on these
tables, so do not "fix" the sign.

Tables are memoized without bound; callers are expected to stay at desk
scale (indices up to ~16, see ``TABLE_BOUND``).  After first computation the
caches are read-only, so concurrent reads are safe.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cache
from math import comb

# Default cap for table emission in the CLI; the functions below accept any
# index, this only guards against accidental huge requests.
TABLE_BOUND = 16


@cache
def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n (convention B_1 = -1/2).

    Computed by the standard recurrence sum(C(n+1, k) * B_k, k=0..n) = 0.
    """
    if n < 0:
        raise ValueError(f"Bernoulli index must be >= 0, got {n}")
    if n == 0:
        return Fraction(1)
    if n > 1 and n % 2 == 1:
        return Fraction(0)
    acc = sum(comb(n + 1, k) * bernoulli(k) for k in range(n))
    return Fraction(-acc, n + 1)


@cache
def bernoulli_two_index(i: int, j: int) -> Fraction:
    """Two-index Bernoulli number B_{i,j} = (-1)^j * sum_k C(j,k) B_{i+k}.

    Satisfies B_{i,j} = B_{j,i}, B_{0,n} = B_n and the recursion
    B_{i,j} + B_{i+1,j} + B_{i,j+1} = 0.
    """
    if i < 0 or j < 0:
        raise ValueError(f"two-index Bernoulli needs i, j >= 0, got ({i}, {j})")
    sign = -1 if j % 2 else 1
    return sign * sum(comb(j, k) * bernoulli(i + k) for k in range(j + 1))


@cache
def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind S{n, k}.

    Recurrence S{n,k} = k*S{n-1,k} + S{n-1,k-1}; k > n returns 0 by
    convention.
    """
    if n < 0 or k < 0:
        raise ValueError(f"Stirling indices must be >= 0, got ({n}, {k})")
    if k > n:
        return 0
    if n == 0:
        return 1 if k == 0 else 0
    if k == 0:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


@cache
def gauge_k(n: int) -> Fraction:
    """Gauge coefficient K_n conjugating the identity into the bracket hierarchy.

    K_1 = 1 and, for n >= 2,

        K_n = -2 / ((n+2)(n-1)) * sum(S{n+1, i} * K_i, i=1..n-1).

    First values: 1, -1/2, 1/2, -2/3, 11/12, -3/4, -11/6.
    """
    if n < 1:
        raise ValueError(f"gauge coefficient index must be >= 1, got {n}")
    if n == 1:
        return Fraction(1)
    acc = sum(stirling2(n + 1, i) * gauge_k(i) for i in range(1, n))
    return Fraction(-2, (n + 2) * (n - 1)) * acc


def fraction_to_str(q: Fraction | int) -> str:
    """Serialize a rational as "p/q", or "p" when the denominator is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def fraction_from_str(s: str | int | Fraction) -> Fraction:
    """Parse "p/q" or "p" (also accepts ints and Fractions as-is)."""
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s.strip())
    raise TypeError(f"cannot parse rational from {type(s).__name__}: {s!r}")
