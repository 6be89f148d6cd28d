"""Moment/cumulant transforms and the mixed-moment engine for increment families.

Two kinds of cumulants appear. Free cumulants reconstruct moments of the
secondary state as a sum over non-crossing partitions with one factor per
block. The two-state cumulants reconstruct moments of the primary state by the
same sum, except that outer blocks carry the two-state cumulant and inner
blocks the free one. Everything is exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .partitions import _classify_unchecked, enumerate_set_partitions, is_noncrossing

Rationals = tuple[Fraction, ...]


def as_rationals(values) -> Rationals:
    return tuple(Fraction(v) for v in values)


@lru_cache(maxsize=None)
def _nc_classified(n: int) -> tuple[tuple[tuple[tuple[int, ...], ...], tuple[bool, ...]], ...]:
    # Every non-crossing partition of {1..n} together with per-block inner flags.
    out = []
    for p in enumerate_set_partitions(n):
        if not is_noncrossing(p):
            continue
        cls = _classify_unchecked(p)
        flags = tuple(i in cls.inner for i in range(len(p.blocks)))
        out.append((p.blocks, flags))
    return tuple(out)


def moments_from_free_cumulants(cumulants, n: int) -> Rationals:
    """Moments m_1..m_n of the distribution with the given free cumulants."""
    c = as_rationals(cumulants)
    if len(c) < n:
        raise ValueError(f"need {n} cumulants, got {len(c)}")
    moments = []
    for j in range(1, n + 1):
        total = Fraction(0)
        for blocks, _ in _nc_classified(j):
            term = Fraction(1)
            for block in blocks:
                term *= c[len(block) - 1]
                if term == 0:
                    break
            total += term
        moments.append(total)
    return tuple(moments)


def free_cumulants_from_moments(moments) -> Rationals:
    """Invert the free moment formula by peeling the one-block partition."""
    m = as_rationals(moments)
    c: list[Fraction] = []
    for j in range(1, len(m) + 1):
        rest = Fraction(0)
        for blocks, _ in _nc_classified(j):
            if len(blocks) == 1:
                continue
            term = Fraction(1)
            for block in blocks:
                term *= c[len(block) - 1]
                if term == 0:
                    break
            rest += term
        c.append(m[j - 1] - rest)
    return tuple(c)


def moments_from_two_state_cumulants(r_phi_psi, r_psi, n: int) -> Rationals:
    """Primary-state moments: outer blocks carry r_phi_psi, inner blocks r_psi."""
    outer_c = as_rationals(r_phi_psi)
    inner_c = as_rationals(r_psi)
    if len(outer_c) < n or len(inner_c) < n:
        raise ValueError(f"need {n} cumulants of each kind")
    moments = []
    for j in range(1, n + 1):
        total = Fraction(0)
        for blocks, inner_flags in _nc_classified(j):
            term = Fraction(1)
            for block, inner in zip(blocks, inner_flags):
                term *= inner_c[len(block) - 1] if inner else outer_c[len(block) - 1]
                if term == 0:
                    break
            total += term
        moments.append(total)
    return tuple(moments)


def two_state_cumulants_from_moments(m_phi, r_psi) -> Rationals:
    """Recover r_phi_psi from primary moments and the free cumulants."""
    m = as_rationals(m_phi)
    inner_c = as_rationals(r_psi)
    if len(inner_c) < len(m):
        raise ValueError("free cumulant sequence shorter than the moments")
    outer_c: list[Fraction] = []
    for j in range(1, len(m) + 1):
        rest = Fraction(0)
        for blocks, inner_flags in _nc_classified(j):
            if len(blocks) == 1:
                continue
            term = Fraction(1)
            for block, inner in zip(blocks, inner_flags):
                term *= inner_c[len(block) - 1] if inner else outer_c[len(block) - 1]
                if term == 0:
                    break
            rest += term
        outer_c.append(m[j - 1] - rest)
    return tuple(outer_c)


def cumulant_dilate(cumulants, scale) -> Rationals:
    """Cumulants of s*X: the k-th entry picks up s^k by multilinearity."""
    s = Fraction(scale)
    return tuple(c * s**k for k, c in enumerate(as_rationals(cumulants), start=1))


def cumulant_free_add(a, b) -> Rationals:
    """Cumulants of a sum of (two-state) freely independent elements."""
    left, right = as_rationals(a), as_rationals(b)
    if len(left) < len(right):
        left = left + (Fraction(0),) * (len(right) - len(left))
    if len(right) < len(left):
        right = right + (Fraction(0),) * (len(left) - len(right))
    return tuple(x + y for x, y in zip(left, right))


@dataclass(frozen=True)
class TwoStateElementSpec:
    """Cumulant data of one element: two-state and free sequences, same length."""

    r_phi_psi: Rationals
    r_psi: Rationals

    def __post_init__(self):
        object.__setattr__(self, "r_phi_psi", as_rationals(self.r_phi_psi))
        object.__setattr__(self, "r_psi", as_rationals(self.r_psi))
        if len(self.r_phi_psi) != len(self.r_psi):
            raise ValueError("the two cumulant sequences must have equal length")

    @property
    def order(self) -> int:
        return len(self.r_psi)

    def scaled(self, factor) -> "TwoStateElementSpec":
        f = Fraction(factor)
        return TwoStateElementSpec(
            tuple(c * f for c in self.r_phi_psi),
            tuple(c * f for c in self.r_psi),
        )


@dataclass(frozen=True)
class IncrementFamilySpec:
    """N stationary increments over [0, T) with prescribed per-increment cumulants.

    Mixed cumulants across distinct increments vanish (two-state free
    independence); per-increment cumulants are the whole-interval ones over N.
    """

    count: int
    per_increment: TwoStateElementSpec
    total_time: Fraction

    def __post_init__(self):
        object.__setattr__(self, "total_time", Fraction(self.total_time))
        if self.count < 1:
            raise ValueError("count must be positive")
        if self.total_time <= 0:
            raise ValueError("total_time must be positive")

    @staticmethod
    def from_whole_interval(whole: TwoStateElementSpec, count: int, total_time) -> "IncrementFamilySpec":
        return IncrementFamilySpec(count, whole.scaled(Fraction(1, count)), total_time)

    @property
    def whole_interval(self) -> TwoStateElementSpec:
        return self.per_increment.scaled(self.count)

    @property
    def order(self) -> int:
        return self.per_increment.order


def brownian_family(alpha, total_time, count: int, order: int = 8, beta=1) -> IncrementFamilySpec:
    """Increment family of the two-state Brownian motion with drift alpha.

    beta scales the secondary-state variance; beta = 1 is the process proper,
    other values give algebraic relatives used by the variation bounds.
    """
    a, t, b = Fraction(alpha), Fraction(total_time), Fraction(beta)
    if order < 2:
        raise ValueError("order must be at least 2")
    zeros = (Fraction(0),) * (order - 2)
    whole = TwoStateElementSpec((Fraction(0), t) + zeros, (a * t, b * t) + zeros)
    return IncrementFamilySpec.from_whole_interval(whole, count, t)


def mixed_moment(family: IncrementFamilySpec, word, state: str) -> Fraction:
    """Joint moment of a word of increments under "phi" or "psi".

    A block contributes only when the word is constant on it; mixed cumulants
    across distinct increments vanish by two-state free independence.
    """
    if state not in ("phi", "psi"):
        raise ValueError("state must be 'phi' or 'psi'")
    w = tuple(word)
    if not w:
        return Fraction(1)
    for idx in w:
        if not 1 <= idx <= family.count:
            raise ValueError(f"increment index {idx} out of range 1..{family.count}")
    spec = family.per_increment
    if len(w) > spec.order:
        raise ValueError("word longer than the truncation order")
    use_outer = state == "phi"
    total = Fraction(0)
    for blocks, inner_flags in _nc_classified(len(w)):
        term = Fraction(1)
        for block, inner in zip(blocks, inner_flags):
            first = w[block[0] - 1]
            if any(w[x - 1] != first for x in block[1:]):
                term = Fraction(0)
                break
            if use_outer and not inner:
                term *= spec.r_phi_psi[len(block) - 1]
            else:
                term *= spec.r_psi[len(block) - 1]
            if term == 0:
                break
        total += term
    return total
