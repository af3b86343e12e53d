"""Finite S4/S5 Kripke frames, read as finite Alexandroff spaces.

World subsets are Python ints used as bitmasks over world indices.  A set
``U`` is open when it is closed upwards under the relation, and the closure of
``A`` is the set of worlds that see some point of ``A``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

from .errors import CarrierTooLargeError, FrameError, NotS4Error, NotS5Error

MAX_WORLDS = 24
MAX_ENUMERABLE = 16


def bits(mask: int):
    """Indices of the set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def submasks(mask: int):
    """All submasks of ``mask``, starting from ``mask`` and ending with 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@dataclass(frozen=True)
class Frame:
    """A reflexive, transitive frame; ``succ[w]`` is the bitmask of R(w)."""

    names: tuple[str, ...]
    succ: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    @cached_property
    def pred(self) -> tuple[int, ...]:
        out = [0] * self.size
        for w, s in enumerate(self.succ):
            for v in bits(s):
                out[v] |= 1 << w
        return tuple(out)

    @cached_property
    def is_s5(self) -> bool:
        return all(self.succ[w] == self.pred[w] for w in range(self.size))

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def relation(self) -> list[tuple[int, int]]:
        return [(w, v) for w in range(self.size) for v in bits(self.succ[w])]

    def mask_of(self, worlds) -> int:
        """Bitmask of a collection of world names (or indices)."""
        mask = 0
        for w in worlds:
            i = w if isinstance(w, int) else self.index[w]
            mask |= 1 << i
        return mask

    def names_of(self, mask: int) -> list[str]:
        return [self.names[i] for i in bits(mask)]

    def __repr__(self):
        edges = [(self.names[a], self.names[b]) for a, b in self.relation() if a != b]
        return f"Frame({list(self.names)}, {edges})"


def _close(n: int, succ: list[int]) -> list[int]:
    succ = [s | (1 << w) for w, s in enumerate(succ)]
    for k in range(n):
        bit = 1 << k
        for w in range(n):
            if succ[w] & bit:
                succ[w] |= succ[k]
    return succ


def build_frame(worlds, edges, auto_close: bool = True, max_worlds: int = MAX_WORLDS) -> Frame:
    """Build a frame from world names and directed edges.

    With ``auto_close`` the reflexive-transitive closure of the edges is taken;
    otherwise the edges must already form a preorder and ``NotS4Error`` carries
    the first missing pair.
    """
    names = tuple(str(w) for w in worlds)
    if len(set(names)) != len(names):
        raise FrameError("duplicate world names")
    if len(names) > max_worlds:
        raise FrameError(f"frame has {len(names)} worlds; the limit is {max_worlds}")
    index = {name: i for i, name in enumerate(names)}
    succ = [0] * len(names)
    for edge in edges:
        a, b = (str(x) for x in edge)
        if a not in index or b not in index:
            raise FrameError(f"edge ({a}, {b}) uses an undeclared world")
        succ[index[a]] |= 1 << index[b]
    if auto_close:
        return Frame(names, tuple(_close(len(names), succ)))
    for w in range(len(names)):
        if not succ[w] >> w & 1:
            raise NotS4Error(f"relation is not reflexive: missing ({names[w]}, {names[w]})",
                             (names[w], names[w]))
    for w in range(len(names)):
        for v in bits(succ[w]):
            missing = succ[v] & ~succ[w]
            if missing:
                u = next(bits(missing))
                raise NotS4Error(
                    f"relation is not transitive: ({names[w]}, {names[v]}) and "
                    f"({names[v]}, {names[u]}) but not ({names[w]}, {names[u]})",
                    (names[w], names[u]),
                )
    return Frame(names, tuple(succ))


def frame_from_masks(succ, names=None) -> Frame:
    """Internal constructor for already reflexive-transitive successor masks."""
    succ = tuple(succ)
    if names is None:
        names = tuple(str(i) for i in range(len(succ)))
    return Frame(tuple(names), succ)


# -- topology --------------------------------------------------------------

def alexandroff_closure(fr: Frame, A: int) -> int:
    """R^{-1}(A): the worlds that see some point of A."""
    out = 0
    for a in bits(A):
        out |= fr.pred[a]
    return out


def up(fr: Frame, A: int) -> int:
    """R(A): the least open set containing A."""
    out = 0
    for a in bits(A):
        out |= fr.succ[a]
    return out


def interior(fr: Frame, A: int) -> int:
    return fr.full & ~alexandroff_closure(fr, fr.full & ~A)


def is_open(fr: Frame, A: int) -> bool:
    return up(fr, A) == A


def is_closed(fr: Frame, A: int) -> bool:
    return alexandroff_closure(fr, A) == A


def _require_enumerable(fr: Frame):
    if fr.size > MAX_ENUMERABLE:
        raise CarrierTooLargeError(
            f"{fr.size} worlds; subset enumeration is limited to {MAX_ENUMERABLE}"
        )


def open_sets(fr: Frame) -> list[int]:
    _require_enumerable(fr)
    return [U for U in range(fr.full + 1) if is_open(fr, U)]


def closed_sets(fr: Frame) -> list[int]:
    return [fr.full & ~U for U in open_sets(fr)]


# -- structure -------------------------------------------------------------

@dataclass(frozen=True)
class ClusterDecomposition:
    clusters: tuple[int, ...]
    number_of_clusters: int
    lower_size: int
    upper_size: int


def clusters(fr: Frame) -> ClusterDecomposition:
    if not fr.is_s5:
        raise NotS5Error("cluster decomposition needs a symmetric relation")
    return _decompose(fr)


def _decompose(fr: Frame) -> ClusterDecomposition:
    found, seen = [], 0
    for w in range(fr.size):
        if not seen >> w & 1:
            c = fr.succ[w] & fr.pred[w]
            found.append(c)
            seen |= c
    sizes = [popcount(c) for c in found] or [0]
    return ClusterDecomposition(tuple(found), len(found), min(sizes), max(sizes))


def equivalence_classes(fr: Frame) -> tuple[int, ...]:
    """Clusters of an arbitrary S4 frame (the classes of R ∩ R^{-1})."""
    return _decompose(fr).clusters


def qmax(fr: Frame) -> int:
    """Quasimaximal worlds: those w with R(w) contained in R^{-1}(w)."""
    out = 0
    for w in range(fr.size):
        if fr.succ[w] & ~fr.pred[w] == 0:
            out |= 1 << w
    return out


def maximal_clusters(fr: Frame) -> list[int]:
    """Clusters made of quasimaximal worlds; they are the minimal nonempty opens."""
    q = qmax(fr)
    return [c for c in equivalence_classes(fr) if c & q]


def n_cluster(n: int, prefix: str = "w") -> Frame:
    if n < 1:
        raise FrameError("a cluster needs at least one world")
    full = (1 << n) - 1
    return Frame(tuple(f"{prefix}{i}" for i in range(n)), (full,) * n)


def cluster_frame(sizes, prefix: str = "w") -> Frame:
    """Disjoint union of clusters of the given sizes; worlds are named ``w<c>_<i>``."""
    names, succ, offset = [], [], 0
    for c, s in enumerate(sizes):
        if s < 1:
            raise FrameError("cluster sizes must be positive")
        block = ((1 << s) - 1) << offset
        names += [f"{prefix}{c}_{i}" for i in range(s)]
        succ += [block] * s
        offset += s
    return Frame(tuple(names), tuple(succ))


def disjoint_union(*frames: Frame) -> Frame:
    names, succ, offset = [], [], 0
    for k, fr in enumerate(frames):
        names += [f"{k}.{n}" for n in fr.names]
        succ += [s << offset for s in fr.succ]
        offset += fr.size
    return Frame(tuple(names), tuple(succ))


def chain(n: int) -> Frame:
    """0 -> 1 -> ... -> n-1, reflexively and transitively closed."""
    full = (1 << n) - 1
    return Frame(tuple(str(i) for i in range(n)), tuple(full & ~((1 << i) - 1) for i in range(n)))


def induced_subframe(fr: Frame, mask: int) -> tuple[Frame, list[int]]:
    """Restriction of the preorder to ``mask``, with the list of original indices."""
    keep = list(bits(mask))
    pos = {w: i for i, w in enumerate(keep)}
    succ = []
    for w in keep:
        s = 0
        for v in bits(fr.succ[w] & mask):
            s |= 1 << pos[v]
        succ.append(s)
    return Frame(tuple(fr.names[w] for w in keep), tuple(succ)), keep


def lift_mask(mask: int, keep: list[int]) -> int:
    """Translate a subframe mask back to the ambient frame's indices."""
    return sum(1 << keep[i] for i in bits(mask))


# -- JSON ------------------------------------------------------------------

def frame_to_json(fr: Frame) -> dict:
    edges = [[fr.names[a], fr.names[b]] for a, b in fr.relation() if a != b]
    return {"worlds": list(fr.names), "edges": edges, "auto_close": True}


def frame_from_json(data: dict, max_worlds: int = MAX_WORLDS) -> Frame:
    if not isinstance(data, dict) or "worlds" not in data:
        raise FrameError('frame document needs a "worlds" list')
    return build_frame(
        data["worlds"], data.get("edges", []), bool(data.get("auto_close", True)), max_worlds
    )


def load_frame(path, max_worlds: int = MAX_WORLDS) -> Frame:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FrameError(f"{path}: malformed JSON ({exc})") from exc
    return frame_from_json(data, max_worlds)


# -- enumeration -----------------------------------------------------------

def _refined_colours(n, succ, pred):
    colour = [(bin(succ[w]).count("1"), bin(pred[w]).count("1")) for w in range(n)]
    for _ in range(n):
        new = [
            (colour[w],
             tuple(sorted(colour[v] for v in bits(succ[w]))),
             tuple(sorted(colour[v] for v in bits(pred[w]))))
            for w in range(n)
        ]
        ranks = {c: i for i, c in enumerate(sorted(set(new)))}
        new = [ranks[c] for c in new]
        if len(set(new)) == len(set(colour)):
            return new
        colour = new
    return colour


def canonical_form(succ: tuple[int, ...]) -> tuple[int, ...]:
    """Successor masks of a canonical relabelling; equal iff the frames are isomorphic."""
    n = len(succ)
    pred = [0] * n
    for w, s in enumerate(succ):
        for v in bits(s):
            pred[v] |= 1 << w
    colour = _refined_colours(n, succ, pred)
    classes = [[w for w in range(n) if colour[w] == c] for c in sorted(set(colour))]
    best = None
    for parts in itertools.product(*(itertools.permutations(c) for c in classes)):
        order = [w for part in parts for w in part]
        pos = {w: i for i, w in enumerate(order)}
        key = tuple(sum(1 << pos[v] for v in bits(succ[w])) for w in order)
        if best is None or key < best:
            best = key
    return best if best is not None else ()


def _extensions(n, succ):
    pred = [0] * n
    for w, s in enumerate(succ):
        for v in bits(s):
            pred[v] |= 1 << w
    full = (1 << n) - 1
    downs = [D for D in range(full + 1) if all(pred[i] & ~D == 0 for i in bits(D))]
    ups = [U for U in range(full + 1) if all(succ[j] & ~U == 0 for j in bits(U))]
    new = 1 << n
    for D in downs:
        for U in ups:
            if all(U & ~succ[i] == 0 for i in bits(D)):
                ext = [s | new if D >> i & 1 else s for i, s in enumerate(succ)]
                ext.append(U | new)
                yield tuple(ext)


def enumerate_s4_frames(n: int) -> list[Frame]:
    """One frame per isomorphism class of preorders on ``n`` points."""
    level = {()}
    for k in range(n):
        level = {canonical_form(ext) for succ in level for ext in _extensions(k, succ)}
    return [frame_from_masks(s) for s in sorted(level)]


def s4_frames_up_to(n: int) -> list[Frame]:
    out = []
    for k in range(1, n + 1):
        out += enumerate_s4_frames(k)
    return out


def enumerate_labeled_s4_frames(n: int) -> list[Frame]:
    """Every preorder on the points 0..n-1 (no isomorphism reduction)."""
    level = [()]
    for k in range(n):
        level = [ext for succ in level for ext in _extensions(k, succ)]
    return [frame_from_masks(s) for s in level]
