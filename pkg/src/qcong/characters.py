"""Dirichlet characters mod q via explicit cyclic decomposition.

The unit group mod q is written as a product of cyclic components: one
component of order p^(e-1)(p-1) for each odd prime power p^e dividing q
(generated by a primitive root, lifted so it stays primitive for e > 1),
and for the 2-part either nothing (2^1), a single order-2 component
(2^2), or the pair <-1> x <5> (2^e, e >= 3).  A character is then just a
vector of exponents against those generators, and every operation
(evaluation, conjugation, squaring, principality and quadraticity tests)
is exponent arithmetic.  Values are exact roots of unity exp(2 pi i k/L)
with integer k, L the group exponent, so no drift accumulates across the
long moment sums built on top of this module.

The group object also carries lazy vectorized machinery: a dense value
matrix over all residues, used by the moment code to evaluate weighted
sums over all characters at once.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .arith import FactoredModulus, factorize
from .errors import DomainError

_BURGESS_ORDERS = (2, 3, 4)


def _primitive_root(p: int) -> int:
    """Smallest primitive root of the odd prime p."""
    fac = factorize(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in fac.primes):
            return g
    raise ArithmeticError(f"no primitive root found for {p}")


def _components(m: FactoredModulus) -> list[tuple[int, dict[int, tuple[int, ...]], list[int], list[int]]]:
    """Cyclic components of the unit group mod m.q.

    Each entry is (p^e, local dlog dict, generator orders, primes with a
    Legendre-type order-2 slot).  The last list tags which prime a
    component's quadratic direction belongs to; the 2-part tags none.
    """
    comps = []
    for p, e in m.factors:
        pe = p**e
        if p == 2:
            if e == 1:
                continue
            if e == 2:
                comps.append((pe, {1: (0,), 3: (1,)}, [2], [0]))
            else:
                dl: dict[int, tuple[int, ...]] = {}
                v = 1
                for k in range(2 ** (e - 2)):
                    dl[v] = (0, k)
                    dl[pe - v] = (1, k)
                    v = v * 5 % pe
                comps.append((pe, dl, [2, 2 ** (e - 2)], [0, 0]))
        else:
            g = _primitive_root(p)
            if e > 1 and pow(g, p - 1, p * p) == 1:
                g += p
            order = pe // p * (p - 1)
            dl = {}
            v = 1
            for k in range(order):
                dl[v] = (k,)
                v = v * g % pe
            comps.append((pe, dl, [order], [p]))
    return comps


class CharacterGroup:
    """The full character group mod q, with batch evaluation support."""

    def __init__(self, m: FactoredModulus):
        self.modulus = m
        q = m.q
        comps = _components(m)
        self.orders: tuple[int, ...] = tuple(d for _, _, os, _ in comps for d in os)
        self._quad_primes: tuple[int, ...] = tuple(p for _, _, _, ps in comps for p in ps)
        self.exponent: int = math.lcm(*self.orders) if self.orders else 1
        self.n_chars: int = math.prod(self.orders)
        # index strides for the C-order enumeration of exponent vectors
        strides = []
        acc = 1
        for d in reversed(self.orders):
            strides.append(acc)
            acc *= d
        self._strides = tuple(reversed(strides))
        # global dlog: residue -> exponent vector, coprime residues only
        dlog: dict[int, tuple[int, ...]] = {}
        for a in range(q):
            if math.gcd(a, q) != 1:
                continue
            vec: list[int] = []
            for pe, dl, _, _ in comps:
                vec.extend(dl[a % pe])
            dlog[a] = tuple(vec)
        self._dlog = dlog
        self._coprime = np.array(sorted(dlog), dtype=np.int64)
        g = len(self.orders)
        self._dlog_matrix = np.array(
            [dlog[int(a)] for a in self._coprime], dtype=np.int64
        ).reshape(len(self._coprime), g)
        self._exponent_matrix = np.array(
            list(product(*(range(d) for d in self.orders))), dtype=np.int64
        ).reshape(self.n_chars, g)
        self._value_matrix: np.ndarray | None = None

    # -- scalar path ----------------------------------------------------

    def value_index(self, exponents: tuple[int, ...], a: int) -> int | None:
        """k with chi(a) = exp(2 pi i k / exponent), or None off the units."""
        a %= self.modulus.q
        if self.modulus.q == 1:
            return 0
        e = self._dlog.get(a)
        if e is None:
            return None
        big = self.exponent
        return sum(m * ei * (big // d) for m, ei, d in zip(exponents, e, self.orders)) % big

    # -- vectorized path ------------------------------------------------

    def value_matrix(self) -> np.ndarray:
        """Dense (n_chars, q) array of character values; zero off the units."""
        if self._value_matrix is None:
            q = self.modulus.q
            big = self.exponent
            roots = np.exp(2j * np.pi * np.arange(big) / big)
            scale = np.array(
                [big // d for d in self.orders], dtype=np.int64
            ) * self._exponent_matrix
            k = (scale @ self._dlog_matrix.T) % big
            vm = np.zeros((self.n_chars, q), dtype=np.complex128)
            vm[:, self._coprime] = roots[k]
            self._value_matrix = vm
        return self._value_matrix

    def weighted_sums(self, weights: np.ndarray) -> np.ndarray:
        """sum_t weights[t] chi(t) for every character, as one matvec.

        weights must have length q and is indexed by residue class.
        """
        return self.value_matrix() @ np.asarray(weights)

    def index_of(self, exponents: tuple[int, ...]) -> int:
        return int(sum(m * s for m, s in zip(exponents, self._strides)))

    def power_index_map(self, k: int) -> np.ndarray:
        """Array sending each character index to the index of its k-th power."""
        d = np.array(self.orders, dtype=np.int64).reshape(1, -1)
        powered = (k * self._exponent_matrix) % d
        strides = np.array(self._strides, dtype=np.int64)
        return powered @ strides

    def principal_index(self) -> int:
        return 0

    def characters(self) -> list["DirichletCharacter"]:
        return [
            DirichletCharacter(group=self, exponents=tuple(int(v) for v in row))
            for row in self._exponent_matrix
        ]


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    """One Dirichlet character mod q, stored as generator exponents."""

    group: CharacterGroup = field(repr=False)
    exponents: tuple[int, ...] = ()

    @property
    def q(self) -> int:
        return self.group.modulus.q

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        return self.q == other.q and self.exponents == other.exponents

    def __hash__(self) -> int:
        return hash((self.q, self.exponents))

    def eval(self, a: int) -> complex:
        """chi(a); zero when gcd(a, q) > 1."""
        k = self.group.value_index(self.exponents, a)
        if k is None:
            return 0j
        big = self.group.exponent
        return cmath.exp(2j * cmath.pi * k / big)

    def power(self, k: int) -> "DirichletCharacter":
        exps = tuple((k * m) % d for m, d in zip(self.exponents, self.group.orders))
        return DirichletCharacter(group=self.group, exponents=exps)

    def conjugate(self) -> "DirichletCharacter":
        return self.power(-1)

    @property
    def is_principal(self) -> bool:
        return all(m == 0 for m in self.exponents)

    @property
    def is_quadratic(self) -> bool:
        """True for the real non-principal characters (order exactly 2)."""
        if self.is_principal:
            return False
        return all((2 * m) % d == 0 for m, d in zip(self.exponents, self.group.orders))

    @property
    def order(self) -> int:
        os = [d // math.gcd(d, m) for m, d in zip(self.exponents, self.group.orders)]
        return math.lcm(*os) if os else 1

    def value_row(self) -> np.ndarray:
        """Values chi(0), ..., chi(q-1) as a dense array."""
        return self.group.value_matrix()[self.group.index_of(self.exponents)]


def enumerate_characters(m: FactoredModulus) -> list[DirichletCharacter]:
    """All phi(q) characters mod m.q; the principal character comes first."""
    return CharacterGroup(m).characters()


def quadratic_characters(m: FactoredModulus) -> list[DirichletCharacter]:
    """All characters with chi^2 principal mod odd m.q, principal first.

    For odd q these biject with divisors q1 of the radical: the character
    a -> jacobi(a, q1) extended by zero, with q1 = 1 giving the principal
    character.  jacobi_modulus recovers q1 from the exponent vector, so
    the count is 2^omega(q).
    """
    if not m.is_odd:
        raise DomainError(f"quadratic_characters needs odd q, got {m.q}")
    return [
        chi for chi in enumerate_characters(m)
        if chi.is_principal or chi.is_quadratic
    ]


def jacobi_modulus(chi: DirichletCharacter) -> int:
    """The q1 with chi(a) = jacobi(a, q1) on coprime a; odd modulus only.

    The principal character maps to q1 = 1 (jacobi(a, 1) is identically 1,
    so the identity holds on residues coprime to q, not elsewhere).
    """
    if not chi.group.modulus.is_odd:
        raise DomainError("jacobi_modulus needs odd modulus")
    if not (chi.is_principal or chi.is_quadratic):
        raise DomainError("jacobi_modulus needs a quadratic character")
    q1 = 1
    for m, d, p in zip(chi.exponents, chi.group.orders, chi.group._quad_primes):
        if m != 0:
            q1 *= p
    return q1


def interval_sum(chi: DirichletCharacter, start: int, length: int) -> complex:
    """sum_{start < n <= start + length} chi(n)."""
    if length < 0:
        raise DomainError("interval_sum needs length >= 0")
    row = chi.value_row()
    n = np.arange(start + 1, start + length + 1) % chi.q
    return complex(np.sum(row[n]))


def burgess_ratio(chi: DirichletCharacter, length: int, r: int) -> float:
    """Largest short-interval sum against the scale N^(1-1/r) q^((r+1)/(4 r^2)).

    Probes eight window offsets spread over a full period.  r = 4 is only
    admissible for cubefree moduli; the principal character is refused.
    """
    if r not in _BURGESS_ORDERS:
        raise DomainError(f"burgess_ratio supports r in {_BURGESS_ORDERS}, got {r}")
    if chi.is_principal:
        raise DomainError("burgess_ratio needs a non-principal character")
    if r == 4 and not chi.group.modulus.is_cubefree:
        raise DomainError("burgess_ratio with r = 4 needs a cubefree modulus")
    if length < 1:
        raise DomainError("burgess_ratio needs length >= 1")
    q = chi.q
    scale = length ** (1.0 - 1.0 / r) * q ** ((r + 1) / (4.0 * r * r))
    worst = 0.0
    for j in range(8):
        offset = j * q // 8
        worst = max(worst, abs(interval_sum(chi, offset, length)))
    return worst / scale
