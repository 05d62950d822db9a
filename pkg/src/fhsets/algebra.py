"""Exact number theory and finite field tables.

Everything here works on Python integers; the moduli handled by the
constructions stay well below 2**32, so trial division is adequate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, prod
from typing import Iterable, Sequence

from .exceptions import InvalidInputError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Factorization:
    """Prime factorization ``n = prod(p**e for p, e in factors)``.

    ``factors`` is sorted by increasing prime.
    """

    n: int
    factors: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def prime_powers(self) -> tuple[int, ...]:
        return tuple(p**e for p, e in self.factors)

    @property
    def least_prime(self) -> int | None:
        return self.factors[0][0] if self.factors else None


def factorize(n: int) -> Factorization:
    if n < 1:
        raise InvalidInputError(f"cannot factorize {n}; need n >= 1")
    factors = []
    rest = n
    d = 2
    while d * d <= rest:
        if rest % d == 0:
            e = 0
            while rest % d == 0:
                rest //= d
                e += 1
            factors.append((d, e))
        d += 1 if d == 2 else 2
    if rest > 1:
        factors.append((rest, 1))
    return Factorization(n, tuple(factors))


def least_prime_factor(n: int) -> int | None:
    """Smallest prime dividing ``n``; ``None`` for ``n == 1``."""
    return factorize(n).least_prime


def euler_phi(n: int) -> int:
    result = n
    for p, _ in factorize(n).factors:
        result = result // p * (p - 1)
    return result


def crt_solve(residues: Iterable[tuple[int, int]]) -> int:
    """Solve ``x = r_i (mod m_i)`` for pairwise coprime moduli.

    Parameters
    ----------
    residues : iterable of (r_i, m_i)
        Residue/modulus pairs. Moduli must be positive and pairwise coprime.

    Returns
    -------
    int
        The unique solution in ``range(prod(m_i))``.
    """
    pairs = [(int(r), int(m)) for r, m in residues]
    for _, m in pairs:
        if m < 1:
            raise InvalidInputError(f"modulus must be positive, got {m}")
    for i, (_, mi) in enumerate(pairs):
        for _, mj in pairs[i + 1:]:
            if gcd(mi, mj) != 1:
                raise InvalidInputError(f"moduli {mi} and {mj} are not coprime")
    total = prod(m for _, m in pairs)
    x = 0
    for r, m in pairs:
        rest = total // m
        x += r * rest * pow(rest, -1, m) if m > 1 else 0
    return x % total


def _divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def multiplicative_order(x: int, n: int) -> int:
    """Smallest ``d >= 1`` with ``x**d == 1 (mod n)``."""
    if n < 1:
        raise InvalidInputError(f"modulus must be positive, got {n}")
    if gcd(x, n) != 1:
        raise InvalidInputError(f"{x} is not a unit modulo {n}")
    for d in _divisors(euler_phi(n)):
        if pow(x, d, n) == 1 % n:
            return d
    raise AssertionError("unreachable: order divides phi(n)")


def primitive_root_prime_power_stable(p: int) -> int:
    """Least ``g`` that is a primitive root modulo ``p**t`` for every ``t >= 1``.

    For an odd prime it suffices that ``g`` is primitive modulo ``p`` and
    ``p**2``.
    """
    if p == 2 or not is_prime(p):
        raise InvalidInputError(f"{p} is not an odd prime")
    p2 = p * p
    for g in range(2, p2):
        if g % p == 0:
            continue
        if multiplicative_order(g, p) == p - 1 and multiplicative_order(g, p2) == p * (p - 1):
            return g
    raise AssertionError("unreachable: primitive roots exist for odd prime powers")


# -- finite fields -----------------------------------------------------------

Vector = tuple[int, ...]


def _powers_of_x(p: int, low: Sequence[int]) -> list[Vector] | None:
    """Powers of ``x`` modulo the monic polynomial ``x^m + sum(low[i] x^i)``.

    Returns the list ``[x^0, ..., x^(p^m - 2)]`` if ``x`` has order ``p^m - 1``
    and ``None`` otherwise.
    """
    m = len(low)
    q1 = p**m - 1
    one = (1,) + (0,) * (m - 1)
    current = list(one)
    powers = []
    for i in range(q1):
        powers.append(tuple(current))
        top = current[-1]
        shifted = [0] + current[:-1]
        current = [(shifted[k] - top * low[k]) % p for k in range(m)]
        if tuple(current) == one and i < q1 - 1:
            return None
    if tuple(current) != one:
        return None
    return powers


@dataclass(frozen=True)
class FieldTable:
    """GF(p^m) in the polynomial basis of a primitive polynomial.

    Elements are coefficient vectors ``(a_0, ..., a_{m-1})`` meaning
    ``a_0 + a_1 alpha + ... + a_{m-1} alpha^{m-1}``, where ``alpha`` is the class
    of the indeterminate and generates the multiplicative group.

    ``modulus`` lists all ``m + 1`` coefficients of the monic polynomial,
    constant term first.
    """

    p: int
    m: int
    modulus: Vector
    exp_table: tuple[Vector, ...] = field(repr=False)
    log_table: dict[Vector, int] = field(repr=False, compare=False)

    @property
    def order(self) -> int:
        return self.p**self.m

    @property
    def zero(self) -> Vector:
        return (0,) * self.m

    @property
    def one(self) -> Vector:
        return self.exp_table[0]

    def elements(self) -> list[Vector]:
        """All field elements, zero first, then ``alpha^0, alpha^1, ...``."""
        return [self.zero, *self.exp_table]

    def exp(self, i: int) -> Vector:
        return self.exp_table[i % (self.order - 1)]

    def log(self, x: Vector) -> int:
        try:
            return self.log_table[tuple(x)]
        except KeyError:
            raise InvalidInputError(f"{x} has no logarithm in GF({self.p}^{self.m})") from None

    def add(self, x: Vector, y: Vector) -> Vector:
        return tuple((a + b) % self.p for a, b in zip(x, y))

    def neg(self, x: Vector) -> Vector:
        return tuple(-a % self.p for a in x)

    def scalar(self, c: int) -> Vector:
        """Embed the prime field element ``c`` as a field vector."""
        return (c % self.p,) + (0,) * (self.m - 1)

    def mul(self, x: Vector, y: Vector) -> Vector:
        if not any(x) or not any(y):
            return self.zero
        return self.exp(self.log(x) + self.log(y))


def build_field(p: int, m: int) -> FieldTable:
    """GF(p^m) presented by a canonical primitive polynomial.

    For ``m >= 2`` the modulus is the monic primitive polynomial whose
    coefficient vector, read as base-``p`` digits with the constant term least
    significant, is smallest (so ``x^3 + x + 1`` over GF(2)). For ``m == 1`` the
    modulus is ``x - g`` with ``g`` the least primitive root of ``p``.
    """
    if not is_prime(p):
        raise InvalidInputError(f"{p} is not prime")
    if m < 1:
        raise InvalidInputError(f"extension degree must be >= 1, got {m}")
    if m == 1:
        if p == 2:
            low = (1,)
        else:
            g = next(g for g in range(1, p) if multiplicative_order(g, p) == p - 1)
            low = (-g % p,)
        powers = _powers_of_x(p, low)
    else:
        for code in range(p**m):
            low = tuple((code // p**i) % p for i in range(m))
            if low[0] == 0:
                continue
            powers = _powers_of_x(p, low)
            if powers is not None:
                break
        else:
            raise AssertionError("unreachable: primitive polynomials exist")
    assert powers is not None
    return FieldTable(
        p=p,
        m=m,
        modulus=tuple(low) + (1,),
        exp_table=tuple(powers),
        log_table={v: i for i, v in enumerate(powers)},
    )


@dataclass(frozen=True)
class SigmaMap:
    """Additive map GF(p^m) -> GF(p^u) sending ``sum a_i alpha^i`` to ``sum_{i<u} a_i beta^i``."""

    source: FieldTable
    target: FieldTable

    def __post_init__(self):
        if self.source.p != self.target.p:
            raise InvalidInputError("source and target fields differ in characteristic")
        if self.target.m > self.source.m:
            raise InvalidInputError("target degree exceeds source degree")

    @property
    def u(self) -> int:
        return self.target.m

    def __call__(self, x: Vector) -> Vector:
        return sigma_apply(self, x)

    def fibers(self) -> dict[Vector, list[Vector]]:
        """Preimage of every target element, by full enumeration."""
        out: dict[Vector, list[Vector]] = {y: [] for y in self.target.elements()}
        for x in self.source.elements():
            out[sigma_apply(self, x)].append(x)
        return out


def sigma_apply(sigma: SigmaMap, x: Vector) -> Vector:
    x = tuple(x)
    if len(x) != sigma.source.m or any(not 0 <= a < sigma.source.p for a in x):
        raise InvalidInputError(f"{x} is not an element of GF({sigma.source.p}^{sigma.source.m})")
    # beta^i for i < u is the i-th basis vector of the target's polynomial basis
    target = sigma.target
    y = target.zero
    for i, a in enumerate(x[: sigma.u]):
        y = target.add(y, tuple(a * c % target.p for c in target.exp(i)))
    return y
