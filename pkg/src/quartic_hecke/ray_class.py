"""The ray class group of conductor (16) over Q(i), and its characters.

Odd ideals modulo principal rays generated by elements = 1 mod 16 form a
finite abelian group.  Because every odd ideal has a unique primary
generator and exactly one associate of each invertible residue mod 16 is
primary, the group is realized concretely as the 32 primary residues
a + bi mod 16 under multiplication.

Characters are stored exactly: the group is decomposed into cyclic factors
<g_1> x ... x <g_k> (verified by enumerating all products), and a character
is an exponent vector; its value on a class with discrete log (a_1,...,a_k)
is zeta_m^(sum a_i c_i m/m_i) for the group exponent m.  This keeps
orthogonality checks in exact integer arithmetic.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass

from .errors import DomainError
from .zi import GInt, is_primary, primary_associate

__all__ = ["RayClassGroup", "RayClassCharacter", "build_group", "exact_root_sum_is_zero"]

_MOD = 16


def _primary_residues():
    reps = []
    for a in range(_MOD):
        for b in range(_MOD):
            if (a % 4 == 1 and b % 4 == 0) or (a % 4 == 3 and b % 4 == 2):
                reps.append((a, b))
    return reps


@dataclass(frozen=True)
class RayClassCharacter:
    """A character of the ray class group mod (16), stored exactly."""

    index: int
    coeffs: tuple[int, ...]  # exponent vector against the cyclic basis
    group: "RayClassGroup"

    def exponent_of_class(self, cls: int) -> int:
        """k with psi(class) = zeta_m^k, m the group exponent."""
        g = self.group
        dlog = g._dlogs[cls]
        m = g.exponent
        return sum(c * a * (m // mi) for c, a, mi in zip(self.coeffs, dlog, g.orders)) % m

    def value_of_class(self, cls: int) -> complex:
        return self.group._roots[self.exponent_of_class(cls)]

    def __call__(self, z: GInt) -> complex:
        return self.value_of_class(self.group.class_of(z))

    def exponent_at(self, z: GInt) -> int:
        return self.exponent_of_class(self.group.class_of(z))

    @property
    def is_principal(self) -> bool:
        return all(c % mi == 0 for c, mi in zip(self.coeffs, self.group.orders))

    def conjugate(self) -> "RayClassCharacter":
        c = tuple((mi - ci) % mi for ci, mi in zip(self.coeffs, self.group.orders))
        return self.group.char_with_coeffs(c)

    @property
    def order(self) -> int:
        m = self.group.exponent
        k = math.gcd(m, *(c * (m // mi) for c, mi in zip(self.coeffs, self.group.orders))) if self.coeffs else m
        return m // k if k else 1

    def __repr__(self):
        return f"RayClassCharacter({self.index}, coeffs={self.coeffs})"


class RayClassGroup:
    """The ray class group mod (16): 32 primary residue classes."""

    def __init__(self):
        reps = _primary_residues()
        if len(reps) != 32:
            raise AssertionError("expected 32 primary residues mod 16")
        self.reps = reps
        self._index = {r: j for j, r in enumerate(reps)}
        n = len(reps)
        self._mul = [[0] * n for _ in range(n)]
        for j, (a1, b1) in enumerate(reps):
            for k, (a2, b2) in enumerate(reps):
                pr = ((a1 * a2 - b1 * b2) % _MOD, (a1 * b2 + b1 * a2) % _MOD)
                self._mul[j][k] = self._index[pr]
        self.identity = self._index[(1, 0)]
        self._build_basis()
        self._build_characters()

    # -- group structure -------------------------------------------------
    def _class_order(self, j: int) -> int:
        k, x = 1, j
        while x != self.identity:
            x = self._mul[x][j]
            k += 1
        return k

    def _span(self, gens):
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = self._mul[x][g]
                    if y not in seen:
                        seen.add(y)
                        new.append(y)
            frontier = new
        return seen

    def _build_basis(self):
        n = len(self.reps)
        basis: list[int] = []
        orders: list[int] = []
        sub = {self.identity}
        while len(sub) < n:
            # coset order of j in G/<sub>: least k with j^k in sub
            best_j, best_k = None, 0
            for j in range(n):
                if j in sub:
                    continue
                k, x = 1, j
                while x not in sub:
                    x = self._mul[x][j]
                    k += 1
                if k > best_k:
                    best_j, best_k = j, k
            # choose a representative of the coset whose full order equals
            # the coset order, so the span is a direct factor
            chosen = None
            for s in sorted(sub):
                h = self._mul[best_j][s]
                if self._class_order(h) == best_k:
                    hk, x = 1, h
                    ok = True
                    # powers of h must meet sub only at the identity
                    while x != self.identity:
                        if x in sub and x != self.identity:
                            ok = False
                            break
                        x = self._mul[x][h]
                        hk += 1
                    if ok:
                        chosen = h
                        break
            if chosen is None:  # pragma: no cover - theory guarantees success
                raise AssertionError("failed to split a cyclic factor")
            basis.append(chosen)
            orders.append(best_k)
            sub = self._span(basis)
        # exact discrete logs by enumerating all products
        dlogs = [None] * n
        def rec(i, cls, expo):
            if i == len(basis):
                if dlogs[cls] is not None:
                    raise AssertionError("basis products are not distinct")
                dlogs[cls] = tuple(expo)
                return
            x = cls
            for a in range(orders[i]):
                rec(i + 1, x, expo + [a])
                x = self._mul[x][basis[i]]
        rec(0, self.identity, [])
        if any(d is None for d in dlogs):
            raise AssertionError("basis does not span the group")
        self.basis = tuple(basis)
        self.orders = tuple(orders)
        self._dlogs = tuple(dlogs)
        self.exponent = 1
        for m in orders:
            self.exponent = self.exponent * m // math.gcd(self.exponent, m)

    def _build_characters(self):
        m = self.exponent
        self._roots = tuple(cmath.exp(2j * cmath.pi * k / m) for k in range(m))
        chars = []
        def rec(i, coeffs):
            if i == len(self.orders):
                chars.append(tuple(coeffs))
                return
            for c in range(self.orders[i]):
                rec(i + 1, coeffs + [c])
        rec(0, [])
        chars.sort()
        self.characters = tuple(
            RayClassCharacter(index=j, coeffs=c, group=self) for j, c in enumerate(chars)
        )
        self._char_by_coeffs = {ch.coeffs: ch for ch in self.characters}

    def char_with_coeffs(self, coeffs) -> RayClassCharacter:
        return self._char_by_coeffs[tuple(coeffs)]

    # -- public API ------------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.reps)

    def class_of(self, z: GInt) -> int:
        """Index of the ray class of the odd element z (ideal-level data)."""
        if not z.is_odd:
            raise DomainError(f"{z} is not coprime to 16")
        if not is_primary(z):
            z = primary_associate(z)[1]
        return self._index[(z.re % _MOD, z.im % _MOD)]

    def class_mul(self, j: int, k: int) -> int:
        return self._mul[j][k]

    def char_eval(self, char: RayClassCharacter, z: GInt) -> complex:
        return char(z)

    def principal_character(self) -> RayClassCharacter:
        for ch in self.characters:
            if ch.is_principal:
                return ch
        raise AssertionError("no principal character")


@functools.lru_cache(maxsize=1)
def build_group() -> RayClassGroup:
    return RayClassGroup()


def exact_root_sum_is_zero(counts: dict[int, int], m: int) -> bool:
    """Whether sum_k counts[k] * zeta_m^k vanishes exactly, for m a power of
    two (reduce with zeta^(m/2) = -1 down to the Z-basis 1..zeta^(m/2 - 1))."""
    if m & (m - 1):
        raise DomainError("exact root sums only implemented for 2-power order")
    vec = [0] * m
    for k, c in counts.items():
        vec[k % m] += c
    while m > 1:
        half = m // 2
        for k in range(half, m):
            vec[k - half] -= vec[k]
        vec = vec[:half]
        m = half
    return all(v == 0 for v in vec)
