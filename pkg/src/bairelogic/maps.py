"""Partial maps between finite spaces, Baire resolutions and cluster embeddings."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import ClosureAlgebra, clopen_subalgebra, generated_subalgebra, kappa_disconnected
from .errors import MapError, NotBaireSpaceError, NotS5Error, PreconditionError
from .frame import (
    Frame,
    bits,
    clusters,
    frame_from_json,
    frame_to_json,
    induced_subframe,
    lift_mask,
    maximal_clusters,
    n_cluster,
    open_sets,
    qmax,
    submasks,
)
from .quotient import BaireAlgebra, build_quotient, is_baire_space, is_meager


@dataclass(frozen=True, eq=False)
class PartialMap:
    source: Frame
    target: Frame
    graph: dict  # source world index -> target world index

    def __post_init__(self):
        for x, y in self.graph.items():
            if not 0 <= x < self.source.size or not 0 <= y < self.target.size:
                raise MapError(f"pair ({x}, {y}) leaves the source or target")

    @property
    def domain(self) -> int:
        return sum(1 << x for x in self.graph)

    def preimage(self, B: int) -> int:
        return sum(1 << x for x, y in self.graph.items() if B >> y & 1)

    def image(self, A: int) -> int:
        out = 0
        for x in bits(A):
            if x in self.graph:
                out |= 1 << self.graph[x]
        return out

    def __call__(self, x: int):
        return self.graph.get(x)


def map_to_json(f: PartialMap) -> dict:
    return {
        "source": frame_to_json(f.source),
        "target": frame_to_json(f.target),
        "graph": [[f.source.names[x], f.target.names[y]] for x, y in sorted(f.graph.items())],
    }


def map_from_json(data: dict) -> PartialMap:
    try:
        source = frame_from_json(data["source"])
        target = frame_from_json(data["target"])
        pairs = data.get("graph", [])
    except (KeyError, TypeError) as exc:
        raise MapError(f"map document is missing {exc}") from exc
    graph: dict[int, int] = {}
    for pair in pairs:
        x, y = (str(v) for v in pair)
        if x not in source.index or y not in target.index:
            raise MapError(f"pair ({x}, {y}) names an unknown world")
        xi, yi = source.index[x], target.index[y]
        if graph.get(xi, yi) != yi:
            raise MapError(f"{x} is sent to two different worlds")
        graph[xi] = yi
    return PartialMap(source, target, graph)


def load_map(path) -> PartialMap:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MapError(f"{path}: malformed JSON ({exc})") from exc
    return map_from_json(data)


# -- classification --------------------------------------------------------

@dataclass(frozen=True)
class BaireMapReport:
    almost_everywhere: bool
    proper: bool
    baire_continuous: bool
    baire_open: bool
    exact: bool
    witnesses: dict = field(default_factory=dict, compare=False)

    @property
    def is_baire_map(self) -> bool:
        return self.almost_everywhere and self.proper and self.baire_continuous and self.baire_open

    def as_dict(self) -> dict:
        return {
            "almost_everywhere": self.almost_everywhere,
            "proper": self.proper,
            "baire_continuous": self.baire_continuous,
            "baire_open": self.baire_open,
            "exact": self.exact,
            "is_baire_map": self.is_baire_map,
        }


def check_baire_map(f: PartialMap) -> BaireMapReport:
    """Classify ``f`` by sweeping every relevant finite family of sets."""
    X, Y = f.source, f.target
    QX, QY = BaireAlgebra(X), BaireAlgebra(Y)
    witnesses = {}

    missing = X.full & ~f.domain
    almost_everywhere = is_meager(X, missing)
    if not almost_everywhere:
        witnesses["almost_everywhere"] = missing

    proper = True
    for B in submasks(QY.ideal.largest_meager):
        if not is_meager(X, f.preimage(B)):
            proper = False
            witnesses["proper"] = B
            break

    baire_continuous = True
    for V in open_sets(Y):
        if not QX.is_open_element(f.preimage(V)):
            baire_continuous = False
            witnesses["baire_continuous"] = V
            break

    # U \ M depends only on M & U, and those are the meager subsets of U
    baire_open = True
    for U in open_sets(X):
        if not U or not baire_open:
            continue
        for M in submasks(U & QX.ideal.largest_meager):
            a = QY.cls(f.image(U & ~M))
            if a == 0 or not QY.is_open_element(a):
                baire_open = False
                witnesses["baire_open"] = (U, M)
                break

    exact = True
    for A in range(Y.full + 1):
        if is_meager(X, f.preimage(A)) and not is_meager(Y, A):
            exact = False
            witnesses["exact"] = A
            break

    return BaireMapReport(almost_everywhere, proper, baire_continuous, baire_open, exact, witnesses)


@dataclass(frozen=True, eq=False)
class InducedHom:
    """``a -> [f^{-1}(a)]`` from the target quotient to the source quotient."""

    map: PartialMap
    domain: BaireAlgebra  # quotient of the map's target
    codomain: BaireAlgebra  # quotient of the map's source
    table: dict

    def __call__(self, a: int) -> int:
        return self.table[self.domain.cls(a)]

    def injective(self) -> bool:
        return len(set(self.table.values())) == len(self.table)

    def preserves_boolean(self) -> bool:
        P, Q = self.domain, self.codomain
        for a in self.table:
            if self(P.complement(a)) != Q.complement(self(a)):
                return False
            for b in self.table:
                if self(a & b) != self(a) & self(b):
                    return False
        return True

    def preserves_closure(self) -> bool:
        P, Q = self.domain, self.codomain
        return all(self(P.closure(a)) == Q.closure(self(a)) for a in self.table)


def induced_hom(f: PartialMap, report: BaireMapReport | None = None) -> InducedHom:
    report = report or check_baire_map(f)
    if not (report.almost_everywhere and report.proper):
        raise PreconditionError(
            f"induced homomorphism needs a proper map defined almost everywhere: {report.as_dict()}"
        )
    P, Q = BaireAlgebra(f.target), BaireAlgebra(f.source)
    table = {}
    for a in P.elements():
        value = Q.cls(f.preimage(a))
        for M in submasks(P.ideal.largest_meager):
            if Q.cls(f.preimage(a | M)) != value:
                raise AssertionError("induced map depends on the representative")
        table[a] = value
    return InducedHom(f, P, Q, table)


# -- resolutions -----------------------------------------------------------

@dataclass(frozen=True)
class Resolution:
    space: Frame
    parts: tuple[int, ...]
    subspace: int

    @property
    def k(self) -> int:
        return len(self.parts)


def nowhere_meager(sp: Frame, A: int) -> bool:
    return all(not is_meager(sp, A & U) for U in open_sets(sp) if U)


def witnessing_family(sp: Frame) -> list[int]:
    """Finite witnessing family: a set is somewhere meager iff it misses a member.

    The members are the maximal clusters, i.e. the minimal nonempty opens.
    """
    return maximal_clusters(sp)


def is_resolution(res: Resolution) -> bool:
    """Parts partition the subspace and each part is dense in it, in the quotient."""
    Q = BaireAlgebra(res.space)
    seen = 0
    for A in res.parts:
        if A & seen or A & ~res.subspace:
            return False
        seen |= A
    if seen != res.subspace:
        return False
    target = Q.cls(res.subspace)
    return all(Q.closure(Q.cls(A)) == target for A in res.parts)


def _search_partition(sp: Frame, k: int):
    family = witnessing_family(sp)
    member_of = {}
    for i, K in enumerate(family):
        for w in bits(K):
            member_of[w] = i
    remaining = [bin(K).count("1") for K in family]
    hit = [0] * len(family)  # bitmask of parts meeting each family member
    parts = [0] * k
    order = list(range(sp.size))

    def feasible():
        return all(k - bin(hit[i]).count("1") <= remaining[i] for i in range(len(family)))

    def place(pos):
        if pos == len(order):
            return True
        w = order[pos]
        i = member_of.get(w)
        for p in range(k):
            parts[p] |= 1 << w
            if i is not None:
                remaining[i] -= 1
                old = hit[i]
                hit[i] |= 1 << p
            if feasible() and place(pos + 1):
                return True
            parts[p] &= ~(1 << w)
            if i is not None:
                remaining[i] += 1
                hit[i] = old
        return False

    if not feasible():
        return None
    return list(parts) if place(0) else None


def find_baire_resolution(sp: Frame, k: int, subspace: int | None = None) -> Resolution | None:
    """Partition the space (or an open subspace) into ``k`` nowhere meager parts.

    Backtracking in world order then part order; each maximal cluster must be
    met by every part, which prunes the search.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if subspace is not None and subspace != sp.full:
        sub, keep = induced_subframe(sp, subspace)
        found = find_baire_resolution(sub, k)
        if found is None:
            return None
        return Resolution(sp, tuple(lift_mask(A, keep) for A in found.parts), subspace)
    if not is_baire_space(sp):
        raise NotBaireSpaceError("some nonempty open set is meager")
    parts = _search_partition(sp, k)
    if parts is None:
        return None
    if not all(nowhere_meager(sp, A) for A in parts):
        raise AssertionError("resolution search produced a somewhere meager part")
    return Resolution(sp, tuple(parts), sp.full)


def map_from_resolution(res: Resolution) -> PartialMap:
    """Send the ``i``-th part onto the ``i``-th world of a ``k``-cluster."""
    if not is_resolution(res):
        raise PreconditionError("not a Baire resolution")
    graph = {x: i for i, A in enumerate(res.parts) for x in bits(A)}
    return PartialMap(res.space, n_cluster(res.k), graph)


def resolution_from_map(f: PartialMap, report: BaireMapReport | None = None) -> Resolution:
    """Fibres of an exact Baire map onto a cluster; part 0 absorbs the undefined points."""
    tgt = f.target
    if not tgt.is_s5 or (tgt.size and clusters(tgt).number_of_clusters != 1):
        raise PreconditionError("target must be a single cluster")
    report = report or check_baire_map(f)
    if not (report.is_baire_map and report.exact):
        raise PreconditionError(f"need an exact Baire map: {report.as_dict()}")
    parts = [f.preimage(1 << y) for y in range(tgt.size)]
    parts[0] |= f.source.full & ~f.domain
    return Resolution(f.source, tuple(parts), f.source.full)


# -- embeddings ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Embedding:
    map: PartialMap
    hom: InducedHom
    report: BaireMapReport
    carriers: tuple[int, ...]
    resolutions: tuple[Resolution, ...]

    def __call__(self, a: int) -> int:
        return self.hom(a)


def _carrier(sp: Frame, q: int, group: int) -> int:
    """Largest open set whose class is ``group``: worlds seeing only ``group`` in qmax."""
    return sum(1 << x for x in range(sp.size) if sp.succ[x] & q & ~group == 0)


def _groupings(atoms, kappa, first):
    if first is not None:
        yield first
    for labels in itertools.product(range(kappa), repeat=len(atoms)):
        if len(set(labels)) == kappa:
            yield [sum(a for a, l in zip(atoms, labels) if l == i) for i in range(kappa)]


def embed_s5_frame(W: Frame, sp: Frame) -> Embedding | None:
    """Embed Kur(W) into the quotient of ``sp``, or return None.

    Finds one clopen carrier per cluster of W, resolves each carrier into as
    many nowhere meager parts as its cluster has worlds, and takes the induced
    homomorphism of the resulting partial map.
    """
    if not W.is_s5:
        raise NotS5Error("the frame to embed must be S5")
    if not is_baire_space(sp):
        raise NotBaireSpaceError("the host space is not a Baire space")
    dec = clusters(W)
    Q = build_quotient(sp)
    if Q.trivial:
        return None
    kappa = dec.number_of_clusters
    atoms = clopen_subalgebra(Q.algebra).atoms()
    if len(atoms) < kappa:
        return None
    # the clopen witness first; other groupings matter only when clusters differ in size
    for groups in _groupings(atoms, kappa, kappa_disconnected(Q.algebra, kappa)):
        carriers, resolutions, ok = [], [], True
        for C, g in zip(dec.clusters, groups):
            U = _carrier(sp, Q.qmax, g)
            res = find_baire_resolution(sp, bin(C).count("1"), subspace=U)
            if res is None:
                ok = False
                break
            carriers.append(U)
            resolutions.append(res)
        if ok:
            break
    else:
        return None
    graph = {}
    for C, res in zip(dec.clusters, resolutions):
        for w, A in zip(bits(C), res.parts):
            for x in bits(A):
                graph[x] = w
    f = PartialMap(sp, W, graph)
    report = check_baire_map(f)
    return Embedding(f, induced_hom(f, report), report, tuple(carriers), tuple(resolutions))


def build_s5n_subalgebra(sp: Frame, n: int) -> ClosureAlgebra | None:
    """Subalgebra of the quotient generated by an embedded n-cluster and all clopens."""
    res = find_baire_resolution(sp, n)
    if res is None:
        return None
    hom = induced_hom(map_from_resolution(res))
    Q = build_quotient(sp)
    generators = set(hom.table.values()) | set(Q.algebra.clopens())
    sub = generated_subalgebra(Q.algebra, sorted(generators), mode="boolean")
    return sub.restrict(sub.carrier, f"S5_{n} subalgebra of {Q.algebra.name}")
