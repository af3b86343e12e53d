"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py`` or ``python3 tests/test_acceptance.py``.
"""

import itertools
import random
import sys
import time
from functools import lru_cache

import pytest

from bairelogic.algebra import clopen_subalgebra, kur_algebra_from_frame, verify_axioms
from bairelogic.decision import s5_bound, s5_decide, s5n_decide, s5u_decide, eval_formula, valid_in_algebra
from bairelogic.formula import axiom_library, bounded_width, random_formula, subformulas
from bairelogic.frame import (
    build_frame,
    cluster_frame,
    disjoint_union,
    enumerate_labeled_s4_frames,
    n_cluster,
    open_sets,
    popcount,
    qmax,
    s4_frames_up_to,
    submasks,
)
from bairelogic.maps import (
    build_s5n_subalgebra,
    check_baire_map,
    embed_s5_frame,
    find_baire_resolution,
    is_resolution,
    map_from_resolution,
    resolution_from_map,
)
from bairelogic.quotient import banach_category_check, build_quotient, is_meager, meager_by_definition
from oracles import s5_frame_valid, size_multisets

SEED = 20161
N_PLAIN = 500
N_UNIVERSAL = 200
SWEEP_LIMIT = 1 << 16


def report(number, ok, summary):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {summary}"
    if _capture is not None:
        with _capture.disabled():
            print("\n" + line)
    else:
        print(line)
    return ok


_capture = None


@pytest.fixture(autouse=True)
def _expose_capture(capsys):
    global _capture
    _capture = capsys
    yield
    _capture = None


# -- shared families -------------------------------------------------------

@lru_cache(maxsize=None)
def criterion1_frames():
    """S4 frames on <= 5 worlds up to isomorphism, plus all labeled frames on <= 4."""
    frames = list(s4_frames_up_to(5))
    for n in range(1, 5):
        frames += enumerate_labeled_s4_frames(n)
    return tuple(frames)


@lru_cache(maxsize=None)
def plain_formulas():
    rng = random.Random(SEED)
    return tuple(random_formula(rng, n_vars=3, max_size=12, max_depth=3) for _ in range(N_PLAIN))


@lru_cache(maxsize=None)
def universal_formulas():
    rng = random.Random(SEED + 1)
    out = []
    while len(out) < N_UNIVERSAL:
        f = random_formula(rng, n_vars=2, max_size=10, max_depth=3, forall=True)
        info = subformulas(f)
        if info.foralls and info.diamonds <= 2 and info.foralls <= 2:
            out.append(f)
    return tuple(out)


@lru_cache(maxsize=None)
def cluster_algebra(j):
    return kur_algebra_from_frame(n_cluster(j))


def valid_on_cluster(f, j):
    """Validity on Kur of the j-cluster: full sweep when small, orbit sweep otherwise."""
    n_vars = len(subformulas(f).variables)
    if (1 << j) ** n_vars <= SWEEP_LIMIT:
        return valid_in_algebra(cluster_algebra(j), f).valid
    return s5_frame_valid(f, (j,))


@lru_cache(maxsize=None)
def cluster_profile(f, top):
    return tuple(valid_on_cluster(f, j) for j in range(1, top + 1))


# -- criteria --------------------------------------------------------------

def test_criterion_01_monadic_quotients():
    start = time.perf_counter()
    frames = criterion1_frames()
    failures = [fr for fr in frames if not verify_axioms(build_quotient(fr).algebra, "monadic").ok]
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    assert report(1, ok, f"{len(frames) - len(failures)}/{len(frames)} quotients monadic in {elapsed:.1f}s")


def test_criterion_02_open_iff_closed():
    frames = criterion1_frames()
    bad = [fr for fr in frames if build_quotient(fr).open_elements != build_quotient(fr).closed_elements]
    assert report(2, not bad, f"open elements = closed elements in {len(frames) - len(bad)}/{len(frames)} quotients")


def test_criterion_03_s5_soundness():
    axioms = [axiom_library(name) for name in ("M", "T", "4", "N", "5")]
    assert all(len(subformulas(a).variables) <= 2 for a in axioms)
    frames = criterion1_frames()
    checks = failures = 0
    for fr in frames:
        alg = build_quotient(fr).algebra
        for a in axioms:
            checks += 1
            failures += not valid_in_algebra(alg, a).valid
    assert report(3, failures == 0, f"{checks - failures}/{checks} axiom-quotient pairs valid")


def test_criterion_04_bd_boundary():
    lines, ok = [], True
    for n in range(1, 5):
        f = bounded_width(n)
        holds = s5n_decide(f, n)
        breaks = s5n_decide(f, n + 1)
        # dual route: the plain sweep over Kur of the clusters
        direct_holds = valid_in_algebra(cluster_algebra(n), f).valid
        direct = valid_in_algebra(cluster_algebra(n + 1), f)
        cm = breaks.countermodel
        explicit = cm is not None and eval_formula(cm.algebra, cm.valuation, f) != cm.algebra.top
        ok &= holds.valid and not breaks.valid and explicit and direct_holds and not direct.valid
        lines.append(f"n={n}: {'ok' if holds.valid and not breaks.valid else 'BAD'}")
    assert report(4, ok, ", ".join(lines))


def test_criterion_05_qmax_isomorphism():
    frames = criterion1_frames()
    bad = 0
    for fr in frames:
        q = build_quotient(fr)
        Q = qmax(fr)
        meager = [meager_by_definition(fr, A) for A in range(fr.full + 1)]
        ok = q.algebra.size == 1 << popcount(Q) and sorted(q.elements()) == sorted(submasks(Q))
        ok &= {q.cls(A) for A in range(fr.full + 1)} == set(submasks(Q))
        for A in range(fr.full + 1):
            ok &= q.cls(fr.full & ~A) == Q & ~q.cls(A)
            for B in range(fr.full + 1):
                ok &= q.cls(A & B) == q.cls(A) & q.cls(B)
                ok &= q.cls(A | B) == q.cls(A) | q.cls(B)
                same_class = meager[A & ~B] and meager[B & ~A]
                ok &= same_class == (q.cls(A) == q.cls(B))
        bad += not ok
    assert report(5, bad == 0, f"quotient = powerset of qmax in {len(frames) - bad}/{len(frames)} frames")


def test_criterion_06_resolution_round_trip():
    found = bad = 0
    for fr in s4_frames_up_to(6):
        for k in range(1, fr.size + 1):
            res = find_baire_resolution(fr, k)
            if res is None:
                break
            found += 1
            f = map_from_resolution(res)
            rep = check_baire_map(f)
            flags = rep.as_dict()
            ok = all(flags[key] for key in ("almost_everywhere", "proper", "baire_continuous",
                                            "baire_open", "exact"))
            back = resolution_from_map(f, rep)
            ok &= is_resolution(res) and back.parts[1:] == res.parts[1:]
            grown = back.parts[0] & ~res.parts[0]
            ok &= res.parts[0] & ~back.parts[0] == 0 and is_meager(fr, grown)
            bad += not ok
    assert report(6, bad == 0 and found > 0, f"{found - bad}/{found} resolutions round-trip through exact Baire maps")


def _orthogonal_dense_below(alg, a, n, elems):
    """n pairwise orthogonal nonzero elements joining to a, each with closure a."""
    below = [b for b in elems if b and b & ~a == 0 and alg.closure(b) == a]

    def search(chosen, used, start):
        if len(chosen) == n - 1:
            rest = a & ~used
            return rest != 0 and alg.closure(rest) == a
        return any(
            search(chosen + [b], used | b, i + 1)
            for i, b in enumerate(below[start:], start)
            if b & used == 0
        )

    return search([], 0, 0)


def algebraic_embedding_exists(alg, sizes):
    """Kur of the S5 frame with these cluster sizes embeds in ``alg``: search the algebra."""
    atoms = clopen_subalgebra(alg).atoms()
    elems = alg.elements()
    k = len(sizes)
    for labels in itertools.product(range(k), repeat=len(atoms)):
        if len(set(labels)) != k:
            continue
        groups = [sum(a for a, l in zip(atoms, labels) if l == i) for i in range(k)]
        if all(_orthogonal_dense_below(alg, g, s, elems) for g, s in zip(groups, sizes)):
            return True
    return False


def criterion7_spaces():
    spaces = list(s4_frames_up_to(6))
    for total in (7, 8):
        for sizes in size_multisets(4, total):
            if sum(sizes) == total:
                spaces.append(cluster_frame(list(sizes)))
    # clusters sitting above a common root
    for sizes in size_multisets(3, 4):
        if sum(sizes) <= 7:
            tops = cluster_frame(list(sizes))
            worlds = ["root"] + list(tops.names)
            edges = [("root", w) for w in tops.names]
            edges += [(tops.names[a], tops.names[b]) for a, b in tops.relation()]
            spaces.append(build_frame(worlds, edges))
    spaces.append(disjoint_union(n_cluster(4), n_cluster(4)))
    spaces.append(disjoint_union(build_frame(["r", "x", "y", "z"], [("r", "x"), ("x", "y"), ("y", "z"), ("z", "x")]),
                                 n_cluster(3)))
    return spaces


def test_criterion_07_embeddings():
    targets = {"C1": [1], "C2": [2], "C3": [3], "C2+C2": [2, 2]}
    embedded = bad = mismatched = 0
    spaces = criterion7_spaces()
    for label, sizes in targets.items():
        W = cluster_frame(sizes)
        kur = kur_algebra_from_frame(W)
        elems = kur.elements()
        for sp in spaces:
            Q = build_quotient(sp)
            emb = embed_s5_frame(W, sp)
            if (emb is not None) != algebraic_embedding_exists(Q.algebra, sizes):
                mismatched += 1
            if emb is None:
                continue
            embedded += 1
            images = {emb(a) for a in elems}
            ok = len(images) == len(elems)
            for a in elems:
                ok &= emb(kur.complement(a)) == Q.complement(emb(a))
                ok &= emb(kur.closure(a)) == Q.closure(emb(a))
                for b in elems:
                    ok &= emb(a & b) == emb(a) & emb(b)
            bad += not ok
    ok = bad == 0 and mismatched == 0 and embedded > 0
    assert report(7, ok, f"{embedded - bad}/{embedded} embeddings are injective closure homomorphisms; "
                         f"existence disagreements with the algebraic search: {mismatched}")


def test_criterion_08_s5n_subalgebra():
    sp = n_cluster(4)
    sub = build_s5n_subalgebra(sp, 2)
    clopens = build_quotient(sp).algebra.clopens()
    has_clopens = set(clopens) <= sub.carrier
    bd2 = valid_in_algebra(sub, bounded_width(2))
    bd1 = valid_in_algebra(sub, bounded_width(1))
    ok = has_clopens and bd2.valid and not bd1.valid
    assert report(8, ok, f"subalgebra of size {sub.size}: clopens {has_clopens}, bd2 valid {bd2.valid}, "
                         f"bd1 valid {bd1.valid}")


def test_criterion_09_oracle_agreement():
    start = time.perf_counter()
    plain = plain_formulas()
    plain_agree = 0
    for f in plain:
        m = s5_bound(f)
        if s5_decide(f).valid == all(cluster_profile(f, m + 2)):
            plain_agree += 1
    universal = universal_formulas()
    universal_agree = 0
    for f in universal:
        info = subformulas(f)
        c, m = info.foralls + 1, info.diamonds + 1
        frames = sorted(size_multisets(c + 1, m + 1), key=sum)
        expected = all(s5_frame_valid(f, sizes) for sizes in frames)
        universal_agree += s5u_decide(f).valid == expected
    elapsed = time.perf_counter() - start
    ok = plain_agree == len(plain) and universal_agree == len(universal) and elapsed < 300
    assert report(9, ok, f"S5 {plain_agree}/{len(plain)}, S5U {universal_agree}/{len(universal)} "
                         f"in {elapsed:.1f}s")


def test_criterion_10_shehtman():
    f = axiom_library("shehtman")
    verdict = s5u_decide(f)
    cm = verdict.countermodel
    two_clusters = cm is not None and len(set(cm.frame.succ)) == 2
    p_is_cluster = cm is not None and cm.valuation[1] in set(cm.frame.succ)
    single = s5u_decide(f, max_clusters=1).valid
    # dual route on the orbit oracle
    oracle_single = all(s5_frame_valid(f, (j,)) for j in range(1, 6))
    oracle_pair = s5_frame_valid(f, (1, 1))
    ok = not verdict.valid and two_clusters and p_is_cluster and single and oracle_single and not oracle_pair
    assert report(10, ok, f"refuted on two clusters {two_clusters}, valid on single clusters {single}")


def test_criterion_11_banach_category():
    families = failures = 0
    for fr in criterion1_frames():
        opens = open_sets(fr)
        meager_opens = [U for U in opens if is_meager(fr, U)]
        assert meager_opens == [U for U in opens if meager_by_definition(fr, U)]
        for r in range(len(meager_opens) + 1):
            for family in itertools.combinations(meager_opens, r):
                families += 1
                failures += not banach_category_check(fr, family).ok
    assert report(11, failures == 0, f"{families - failures}/{families} families of open meager sets have meager union")


def test_criterion_12_scroggs_monotone():
    violations = checks = 0
    for f in plain_formulas():
        profile = cluster_profile(f, 6)
        for n in range(1, 6):
            checks += 1
            if profile[n] and not profile[n - 1]:
                violations += 1
    assert report(12, violations == 0, f"{checks - violations}/{checks} cluster-size steps monotone")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
