"""Finite closure and monadic algebras over bitmask carriers.

An algebra lives on the submasks of a unit mask ``top``; the carrier is either
every submask (a powerset algebra, possibly virtual when too large to list) or
an explicit Boolean-closed family.  Elements are plain ints.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .errors import CarrierTooLargeError, NotInSubalgebraError
from .frame import MAX_ENUMERABLE, Frame, alexandroff_closure, bits, popcount, submasks


@dataclass(frozen=True, eq=False)
class ClosureAlgebra:
    top: int
    closure_rule: Callable[[int], int]
    carrier: frozenset[int] | None = None
    labels: tuple[str, ...] = ()
    name: str = ""
    _cache: dict = field(default_factory=dict, repr=False)

    # Boolean structure
    def meet(self, a, b):
        return a & b

    def join(self, a, b):
        return a | b

    def complement(self, a):
        return self.top & ~a

    def leq(self, a, b):
        return a & ~b == 0

    def closure(self, a):
        try:
            return self._cache[a]
        except KeyError:
            out = self._cache[a] = self.closure_rule(a)
            return out

    def interior(self, a):
        return self.complement(self.closure(self.complement(a)))

    def is_closed(self, a):
        return self.closure(a) == a

    def is_open(self, a):
        return self.interior(a) == a

    def is_clopen(self, a):
        return self.is_closed(a) and self.is_open(a)

    # carrier
    @property
    def enumerable(self) -> bool:
        return self.carrier is not None or popcount(self.top) <= MAX_ENUMERABLE

    def contains(self, a) -> bool:
        if self.carrier is None:
            return a & ~self.top == 0
        return a in self.carrier

    def elements(self) -> list[int]:
        if self.carrier is not None:
            return sorted(self.carrier)
        if not self.enumerable:
            raise CarrierTooLargeError(
                f"{self.name or 'algebra'} has {popcount(self.top)} atoms; "
                f"enumeration is limited to {MAX_ENUMERABLE}"
            )
        return sorted(submasks(self.top))

    @property
    def size(self) -> int:
        if self.carrier is not None:
            return len(self.carrier)
        return 1 << popcount(self.top)

    def atoms(self) -> list[int]:
        if self.carrier is None:
            return [1 << i for i in bits(self.top)]
        nonzero = [a for a in self.carrier if a]
        return sorted(a for a in nonzero if not any(b != a and b & ~a == 0 for b in nonzero))

    def clopens(self) -> list[int]:
        return [a for a in self.elements() if self.is_clopen(a)]

    def describe(self, a) -> list[str]:
        if self.labels:
            return [self.labels[i] for i in bits(a)]
        return [str(i) for i in bits(a)]

    def restrict(self, carrier: Iterable[int], name: str = "") -> "ClosureAlgebra":
        """Same closure on a sub-carrier (assumed closed under the operations)."""
        return ClosureAlgebra(self.top, self.closure, frozenset(carrier), self.labels,
                              name or f"sub({self.name})")


def kur_algebra_from_frame(fr: Frame) -> ClosureAlgebra:
    """Powerset of the worlds with closure R^{-1}; virtual above the enumeration limit."""
    return ClosureAlgebra(
        fr.full, lambda a: alexandroff_closure(fr, a), None, fr.names, f"Kur({fr.size} worlds)"
    )


# -- axioms ----------------------------------------------------------------

AXIOM_LABELS = {
    0: "closure maps the carrier into itself",
    1: "a <= c a",
    2: "c c a <= c a",
    3: "c(a v b) = c a v c b",
    4: "c 0 = 0",
    5: "c a = i c a",
}


@dataclass(frozen=True)
class AxiomCheck:
    ok: bool
    axiom: int | None = None
    elements: tuple[int, ...] = ()

    @property
    def description(self) -> str:
        return "PASS" if self.ok else f"FAIL axiom {self.axiom} ({AXIOM_LABELS[self.axiom]}) at {self.elements}"


def verify_axioms(alg: ClosureAlgebra, kind: str = "closure") -> AxiomCheck:
    """Exhaustively check the closure axioms, plus ``c a = i c a`` for ``monadic``."""
    if kind not in ("closure", "monadic"):
        raise ValueError("kind must be 'closure' or 'monadic'")
    elems = alg.elements()
    c = alg.closure
    if c(0) != 0:
        return AxiomCheck(False, 4, (0,))
    for a in elems:
        ca = c(a)
        if not alg.contains(ca):
            return AxiomCheck(False, 0, (a,))
        if a & ~ca:
            return AxiomCheck(False, 1, (a,))
        if c(ca) & ~ca:
            return AxiomCheck(False, 2, (a,))
    for a, b in itertools.combinations_with_replacement(elems, 2):
        if c(a | b) != c(a) | c(b):
            return AxiomCheck(False, 3, (a, b))
    if kind == "monadic":
        for a in elems:
            if c(a) != alg.interior(c(a)):
                return AxiomCheck(False, 5, (a,))
    return AxiomCheck(True)


# -- subalgebras -----------------------------------------------------------

def refine(blocks: list[int], splitter: int) -> list[int]:
    out = []
    for b in blocks:
        inside, outside = b & splitter, b & ~splitter
        out += [x for x in (inside, outside) if x]
    return out


def unions_of(blocks: list[int]) -> frozenset[int]:
    if len(blocks) > MAX_ENUMERABLE:
        raise CarrierTooLargeError(f"{len(blocks)} atoms; limit is {MAX_ENUMERABLE}")
    out = {0}
    for b in blocks:
        out |= {x | b for x in out}
    return frozenset(out)


def generated_subalgebra(alg: ClosureAlgebra, generators: Iterable[int], mode: str = "boolean") -> ClosureAlgebra:
    """Least sub-carrier holding ``generators`` and closed under the Boolean operations.

    In ``closure`` mode it is also closed under the closure operator; since the
    closure of a join is the join of closures, it is enough to keep adding the
    closures of the current atoms until the partition stops splitting.
    """
    if mode not in ("boolean", "closure"):
        raise ValueError("mode must be 'boolean' or 'closure'")
    blocks = [alg.top] if alg.top else []
    for g in generators:
        if not alg.contains(g):
            raise NotInSubalgebraError(f"generator {g:#b} is not in the algebra")
        blocks = refine(blocks, g)
    if mode == "closure":
        while True:
            new = blocks
            for b in blocks:
                new = refine(new, alg.closure(b))
            if len(new) == len(blocks):
                break
            blocks = new
    return alg.restrict(unions_of(blocks), f"<gen>({alg.name})")


def atoms_below(alg_atoms: list[int], c: int) -> list[int]:
    return [a for a in alg_atoms if a & ~c == 0]


# -- normal forms ----------------------------------------------------------

def orthogonalize(pairs):
    """Make the clopen parts of ``(a, b)`` pairs pairwise orthogonal.

    Each new pair is merged into the list with the rewrite
    ``(a1 & b1) | (a2 & b2) = (a1-a2 & b1) | (a1&a2 & b1|b2) | (a2-a1 & b2)``;
    the join of ``a & b`` over the pairs is unchanged.
    """
    out: list[tuple[int, int]] = []
    for a, b in pairs:
        if not a:
            continue
        merged = []
        for a2, b2 in out:
            overlap = a & a2
            if not overlap:
                merged.append((a2, b2))
                continue
            if a2 & ~a:
                merged.append((a2 & ~a, b2))
            merged.append((overlap, b | b2))
            a &= ~a2
        if a:
            merged.append((a, b))
        out = merged
    return out


def _generated_atoms(clopens: ClosureAlgebra, B: ClosureAlgebra):
    pairs = []
    for x in clopens.atoms():
        for y in B.atoms():
            if x & y:
                pairs.append((x, y))
    return pairs


def orthogonal_normal_form(c: int, clopens: ClosureAlgebra, B: ClosureAlgebra) -> list[tuple[int, int]]:
    """Write ``c`` as a join of ``a_i & b_i`` with pairwise orthogonal ``a_i``.

    ``a_i`` come from ``clopens`` and ``b_i`` from ``B``; ``c`` must lie in the
    Boolean algebra they generate.
    """
    generated = _generated_atoms(clopens, B)
    below = [(x, y) for x, y in generated if (x & y) & ~c == 0]
    if sum(x & y for x, y in below) != c or any((x & y) & c and (x & y) & ~c for x, y in generated):
        raise NotInSubalgebraError(f"{c:#b} is not generated by the given subalgebras")
    # every atom of the generated algebra is a clopen atom met with a B atom
    return [(a, b) for a, b in orthogonalize(below) if a & b]


def compatible_normal_form(cs, clopens: ClosureAlgebra, B: ClosureAlgebra):
    """Shared orthogonal clopens partitioning the unit, with B-coefficients per input.

    Returns ``(parts, coeffs)`` with ``cs[j] == join(parts[i] & coeffs[j][i])``.
    """
    top = clopens.top
    parts = [top] if top else []
    forms = []
    for c in cs:
        onf = orthogonal_normal_form(c, clopens, B)
        rest = top & ~sum(a for a, _ in onf)
        if rest:
            onf.append((rest, 0))
        forms.append(onf)
        parts = [p & a for p in parts for a, _ in onf if p & a]
    coeffs = []
    for onf in forms:
        row = []
        for p in parts:
            row.append(next(b for a, b in onf if a & p))
        coeffs.append(row)
    return parts, coeffs


# -- disconnectedness and resolvability ------------------------------------

def clopen_subalgebra(alg: ClosureAlgebra) -> ClosureAlgebra:
    return alg.restrict(alg.clopens(), f"clopens({alg.name})")


def kappa_disconnected(alg: ClosureAlgebra, k: int):
    """``k`` nonzero pairwise orthogonal clopens joining to the unit, or None.

    Clopens form a finite Boolean subalgebra, so such a family exists exactly
    when it has at least ``k`` atoms; the last member absorbs the surplus.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if alg.top == 0:
        return None
    if k == 1:
        return [alg.top]
    atoms = clopen_subalgebra(alg).atoms()
    if len(atoms) < k:
        return None
    return atoms[: k - 1] + [sum(atoms[k - 1:])]


def is_disconnection_witness(alg: ClosureAlgebra, family) -> bool:
    if sum(family) != alg.top or any(a == 0 for a in family):
        return False
    if any(a & b for a, b in itertools.combinations(family, 2)):
        return False
    return all(alg.is_clopen(a) for a in family)


def find_orthogonal_dense(alg: ClosureAlgebra, k: int):
    """``k`` pairwise orthogonal dense elements (c a = 1), by exhaustive search."""
    dense = [a for a in alg.elements() if a and alg.closure(a) == alg.top]

    def search(chosen, used, start):
        if len(chosen) == k:
            return list(chosen)
        for i in range(start, len(dense)):
            if dense[i] & used == 0:
                found = search(chosen + [dense[i]], used | dense[i], i + 1)
                if found:
                    return found
        return None

    return search([], 0, 0)


def is_relatively_complete(alg: ClosureAlgebra, sub: Iterable[int]) -> bool:
    """Every element has a least element of ``sub`` above it."""
    sub = list(sub)
    for b in alg.elements():
        above = [a for a in sub if b & ~a == 0]
        if not above:
            return False
        least = above[0]
        for a in above[1:]:
            least &= a
        if least not in above:
            return False
    return True
