"""The meager ideal of a finite Alexandroff space and its quotient algebra.

On a finite frame a set is meager exactly when it avoids the quasimaximal
worlds, so every class ``[A]`` has the canonical representative
``A & qmax`` and the quotient is a powerset algebra on ``qmax``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .algebra import ClosureAlgebra
from .errors import PreconditionError
from .frame import (
    Frame,
    alexandroff_closure,
    closed_sets,
    interior,
    is_open,
    open_sets,
    qmax,
    submasks,
)


def nowhere_dense(sp: Frame, A: int) -> bool:
    """Interior of the closure is empty."""
    return interior(sp, alexandroff_closure(sp, A)) == 0


def is_meager(sp: Frame, A: int) -> bool:
    return A & qmax(sp) == 0


def meager_by_definition(sp: Frame, A: int) -> bool:
    """Slow check: A is covered by its nowhere dense subsets.

    A finite space has only finite unions, so this is the literal definition.
    It ignores ``qmax`` entirely and backs tests of ``is_meager``.
    """
    covered = 0
    for S in submasks(A):
        if nowhere_dense(sp, S):
            covered |= S
    return covered == A


@dataclass(frozen=True)
class MeagerIdeal:
    space: Frame
    largest_meager: int

    def __contains__(self, A: int) -> bool:
        return A & ~self.largest_meager == 0


def meager_ideal(sp: Frame) -> MeagerIdeal:
    return MeagerIdeal(sp, sp.full & ~qmax(sp))


def is_baire_space(sp: Frame) -> bool:
    """Every nonempty open set is non-meager."""
    q = qmax(sp)
    return all(sp.succ[w] & q for w in range(sp.size))


class BaireAlgebra:
    """The quotient of the powerset of ``space`` by its meager sets.

    Elements are canonical representatives (subsets of ``qmax``); ``algebra``
    is the same structure as a :class:`ClosureAlgebra` with unit ``qmax``.
    """

    def __init__(self, space: Frame):
        self.space = space
        self.qmax = qmax(space)
        self.ideal = MeagerIdeal(space, space.full & ~self.qmax)
        self.trivial = self.qmax == 0
        self.algebra = ClosureAlgebra(
            self.qmax, self._closure, None, space.names, f"B({space.size} worlds)"
        )

    def __repr__(self):
        return f"BaireAlgebra(qmax={self.space.names_of(self.qmax)})"

    @property
    def top(self):
        return self.qmax

    def cls(self, A: int) -> int:
        """Canonical representative of [A]."""
        return A & self.qmax

    def equivalent(self, A: int, B: int) -> bool:
        return (A & ~B) in self.ideal and (B & ~A) in self.ideal

    def meet(self, a, b):
        return a & b

    def join(self, a, b):
        return a | b

    def complement(self, a):
        return self.qmax & ~a

    def leq(self, a, b):
        return a & ~b == 0

    def _closure(self, a: int) -> int:
        # the closed sets C with [a] below [C] are exactly those containing a,
        # and their intersection is the topological closure of a
        return self.cls(alexandroff_closure(self.space, self.cls(a)))

    def closure(self, a: int) -> int:
        return self.algebra.closure(self.cls(a))

    def interior(self, a: int) -> int:
        return self.algebra.interior(self.cls(a))

    def elements(self) -> list[int]:
        return self.algebra.elements()

    @cached_property
    def open_elements(self) -> frozenset[int]:
        return frozenset(self.cls(U) for U in open_sets(self.space))

    @cached_property
    def closed_elements(self) -> frozenset[int]:
        return frozenset(self.cls(C) for C in closed_sets(self.space))

    def is_open_element(self, a) -> bool:
        return self.cls(a) in self.open_elements

    def is_closed_element(self, a) -> bool:
        return self.cls(a) in self.closed_elements


def build_quotient(sp: Frame) -> BaireAlgebra:
    return BaireAlgebra(sp)


def closure_in_quotient(q: BaireAlgebra, a: int) -> int:
    return q.closure(a)


def closure_by_definition(q: BaireAlgebra, a: int) -> int:
    """The least [C], C closed, with a below [C], found by enumerating closed sets."""
    above = [q.cls(C) for C in closed_sets(q.space) if q.leq(a, q.cls(C))]
    least = [x for x in above if all(q.leq(x, y) for y in above)]
    if not least:
        raise AssertionError("no least closed element; relative completeness failed")
    return least[0]


@dataclass(frozen=True)
class BanachVerdict:
    ok: bool
    union: int


def banach_category_check(sp: Frame, opens) -> BanachVerdict:
    """Check that a union of open meager sets is meager."""
    union = 0
    for U in opens:
        if not is_open(sp, U):
            raise PreconditionError(f"{sp.names_of(U)} is not open")
        if not is_meager(sp, U):
            raise PreconditionError(f"{sp.names_of(U)} is not meager")
        union |= U
    return BanachVerdict(is_meager(sp, union), union)
