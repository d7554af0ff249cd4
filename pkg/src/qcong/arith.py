"""Integer arithmetic: factorization, Jacobi symbols, modular square roots.

Everything downstream (character groups, congruence counts, moment sums)
sits on top of the two structures defined here.  `FactoredModulus` carries
a modulus together with its prime factorization, radical and totient so
that callers never re-factor.  `SqrtTable` stores, for one modulus q, the
full inventory of square roots of every residue class in compressed form
(total storage is exactly q entries, since each x in [0, q) lands in one
class).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import DomainError, ScaleCapError

MAX_INPUT = 2**63 - 1
_TRIAL_LIMIT = 10**6
_SQRT_TABLE_CAP = 10**7

# Deterministic Miller-Rabin witness set, valid for all n < 3.3e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Deterministic primality test for n below 64 bits."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n: int) -> int:
    """Brent-cycle Pollard rho; returns a nontrivial factor of composite odd n.

    The parameter sweep is deterministic, so repeated runs agree.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed on {n}")


@dataclass(frozen=True)
class FactoredModulus:
    """A positive integer with its factorization data attached.

    factors is sorted by prime; radical is the product of the distinct
    primes; totient is Euler's phi.
    """

    q: int
    factors: tuple[tuple[int, int], ...]
    radical: int
    totient: int

    @property
    def is_odd(self) -> bool:
        return self.q % 2 == 1

    @property
    def is_cubefree(self) -> bool:
        return all(e <= 2 for _, e in self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def coprime(self, a: int) -> bool:
        return math.gcd(a, self.q) == 1


def factorize(n: int) -> FactoredModulus:
    """Factor n into prime powers.

    Trial division up to 10^6, then deterministic Miller-Rabin plus
    Brent's rho for what remains.  Inputs above 2^63 - 1 are refused.
    """
    if n <= 0:
        raise DomainError(f"factorize needs a positive integer, got {n}")
    if n > MAX_INPUT:
        raise ScaleCapError(f"factorize caps at 2^63 - 1, got {n}")
    powers: dict[int, int] = {}
    rem = n
    d = 2
    while d * d <= rem and d <= _TRIAL_LIMIT:
        while rem % d == 0:
            powers[d] = powers.get(d, 0) + 1
            rem //= d
        d += 1 if d == 2 else 2
    stack = [rem] if rem > 1 else []
    while stack:
        m = stack.pop()
        if is_probable_prime(m):
            powers[m] = powers.get(m, 0) + 1
        else:
            g = _brent_rho(m)
            stack.extend((g, m // g))
    factors = tuple(sorted(powers.items()))
    radical = math.prod(p for p, _ in factors)
    totient = math.prod(p ** (e - 1) * (p - 1) for p, e in factors)
    return FactoredModulus(q=n, factors=factors, radical=radical, totient=totient)


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a | n) for odd positive n, by the binary algorithm."""
    if n <= 0 or n % 2 == 0:
        raise DomainError(f"jacobi needs odd positive n, got {n}")
    a %= n
    result = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def tau(n: int) -> int:
    """Number of positive divisors."""
    return math.prod(e + 1 for _, e in factorize(n).factors)


def tau_sieve(n_max: int) -> np.ndarray:
    """Divisor counts tau(1..n_max) as an array indexed 0..n_max (index 0 unused)."""
    if n_max < 1:
        raise DomainError("tau_sieve needs n_max >= 1")
    counts = np.zeros(n_max + 1, dtype=np.int64)
    for d in range(1, n_max + 1):
        counts[d::d] += 1
    return counts


def admissible_moduli(big_q: int, alpha2: int) -> list[int]:
    """Moduli q in (Q, 2Q] with gcd(2 * alpha2, q) = 1, in increasing order."""
    if big_q < 1:
        raise DomainError("admissible_moduli needs Q >= 1")
    step = 2 * alpha2
    return [q for q in range(big_q + 1, 2 * big_q + 1) if math.gcd(step, q) == 1]


# ---------------------------------------------------------------------------
# Square roots modulo prime powers and their CRT recombination.
# ---------------------------------------------------------------------------


def _tonelli(a: int, p: int) -> int:
    """One square root of a mod odd prime p; a must be a nonzero residue."""
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Write p - 1 = s * 2^e with s odd, then walk the 2-Sylow subgroup.
    s, e = p - 1, 0
    while s % 2 == 0:
        s //= 2
        e += 1
    n = 2
    while jacobi(n, p) != -1:
        n += 1
    x = pow(a, (s + 1) // 2, p)
    b = pow(a, s, p)
    g = pow(n, s, p)
    r = e
    while True:
        t, m = b, 0
        while t != 1:
            t = t * t % p
            m += 1
        if m == 0:
            return x
        gs = pow(g, 1 << (r - m - 1), p)
        x = x * gs % p
        g = gs * gs % p
        b = b * g % p
        r = m


def _lift_odd(y: int, u: int, p: int, e: int) -> int:
    """Newton-lift y with y^2 = u (mod p) to a root mod p^e, p odd."""
    prec = 1
    mod = p
    while prec < e:
        prec = min(2 * prec, e)
        mod = p**prec
        inv = pow(2 * y, -1, mod)
        y = (y - (y * y - u) * inv) % mod
    return y


def _sqrt_odd_unit(u: int, p: int, e: int) -> list[int]:
    """All roots of y^2 = u (mod p^e) for p odd and p not dividing u."""
    if jacobi(u, p) != 1:
        return []
    y = _lift_odd(_tonelli(u % p, p), u, p, e)
    pe = p**e
    return sorted({y, pe - y})


def _sqrt_two_unit(u: int, e: int) -> list[int]:
    """All roots of y^2 = u (mod 2^e) for odd u."""
    if e == 1:
        return [1]
    if e == 2:
        return [1, 3] if u % 4 == 1 else []
    if u % 8 != 1:
        return []
    v = 1
    for j in range(3, e):
        if (v * v - u) % (1 << (j + 1)) != 0:
            v += 1 << (j - 1)
    m = 1 << e
    h = 1 << (e - 1)
    return sorted({v, m - v, (v + h) % m, (m - v + h) % m})


def _sqrt_prime_power(t: int, p: int, e: int) -> list[int]:
    """All x in [0, p^e) with x^2 = t (mod p^e)."""
    pe = p**e
    t %= pe
    if t == 0:
        step = p ** ((e + 1) // 2)
        return list(range(0, pe, step))
    k = 0
    tt = t
    while tt % p == 0:
        tt //= p
        k += 1
    if k % 2 == 1:
        return []
    m = e - k
    base = _sqrt_two_unit(tt, m) if p == 2 else _sqrt_odd_unit(tt, p, m)
    if not base:
        return []
    scale = p ** (k // 2)
    pm = p**m
    roots = [scale * (y + j * pm) for y in base for j in range(scale)]
    return sorted(set(roots))


def _crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    """Combine x = r1 (mod m1), x = r2 (mod m2) for coprime m1, m2."""
    g = pow(m1, -1, m2)
    return (r1 + m1 * ((r2 - r1) * g % m2)) % (m1 * m2)


def sqrt_mod(t: int, m: FactoredModulus) -> list[int]:
    """All square roots of t modulo m.q, sorted, possibly empty.

    Works prime power by prime power (Tonelli-Shanks plus Hensel lifting
    for odd p, the explicit 2-adic cases for p = 2) and recombines by CRT.

    >>> sqrt_mod(2, factorize(49))
    [10, 39]
    """
    if m.q == 1:
        return [0]
    t %= m.q
    per_component: list[list[tuple[int, int]]] = []
    for p, e in m.factors:
        roots = _sqrt_prime_power(t, p, e)
        if not roots:
            return []
        per_component.append([(r, p**e) for r in roots])
    combined = []
    for choice in product(*per_component):
        x, mod = choice[0]
        for r, pe in choice[1:]:
            x = _crt_pair(x, mod, r, pe)
            mod *= pe
        combined.append(x)
    return sorted(combined)


@dataclass(frozen=True, eq=False)
class SqrtTable:
    """Square roots of every residue class mod q, in compressed sparse form.

    roots_of(t) returns all x in [0, q) with x^2 = t (mod q).  data holds
    the q values grouped by class; indptr[t]:indptr[t+1] delimits class t.
    """

    q: int
    indptr: np.ndarray = field(repr=False)
    data: np.ndarray = field(repr=False)

    def roots_of(self, t: int) -> np.ndarray:
        t %= self.q
        return self.data[self.indptr[t] : self.indptr[t + 1]]

    def n_roots(self, t: int) -> int:
        t %= self.q
        return int(self.indptr[t + 1] - self.indptr[t])


def build_sqrt_table(m: FactoredModulus, cap: int = _SQRT_TABLE_CAP) -> SqrtTable:
    """Tabulate all square roots mod m.q by one forward squaring pass.

    Independent of sqrt_mod by construction, which is what makes the two
    usable as cross-checks.  Refuses q above cap (default 10^7): storage
    is two arrays of length about q.
    """
    q = m.q
    if q > cap:
        raise ScaleCapError(f"sqrt table caps at q = {cap}, got {q}")
    x = np.arange(q, dtype=np.int64)
    squares = (x * x) % q
    counts = np.bincount(squares, minlength=q)
    indptr = np.zeros(q + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    order = np.argsort(squares, kind="stable").astype(np.int32)
    return SqrtTable(q=q, indptr=indptr, data=order)
