"""Evaluation in finite closure algebras and decision procedures on clusters.

Two routes are kept apart on purpose.  ``valid_in_algebra`` sweeps every
valuation of a finite algebra through the algebraic operations.  The cluster
procedures (``s5_decide``, ``s5n_decide``, ``s5u_decide``) instead evaluate
point by point on S5 models, where a valuation on a cluster only matters
through the set of variable patterns ("types") its points realise; each
model is enumerated once as a set of type sets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Mapping, NamedTuple

import numpy as np

from .algebra import ClosureAlgebra, kur_algebra_from_frame
from .errors import BudgetExceededError, PreconditionError, UnassignedVariableError
from .formula import And, Diamond, Forall, Formula, Not, Var, render, subformulas
from .frame import Frame, bits, cluster_frame, popcount

DEFAULT_BUDGET = 1 << 26
CHUNK = 1 << 16
TABLE_BITS = 20


@dataclass(frozen=True, eq=False)
class Countermodel:
    algebra: ClosureAlgebra
    valuation: dict
    value: int
    frame: Frame | None = None

    def describe(self) -> dict:
        alg = self.algebra
        out = {
            "algebra": alg.name,
            "valuation": {f"p{v}": alg.describe(m) for v, m in sorted(self.valuation.items())},
            "value": alg.describe(self.value),
        }
        if self.frame is not None:
            sizes = [popcount(c) for c in _cluster_masks(self.frame)]
            out["cluster_sizes"] = sizes
        return out


@dataclass(frozen=True, eq=False)
class Verdict:
    valid: bool
    countermodel: Countermodel | None = None
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return self.valid


# -- compilation -----------------------------------------------------------

def compile_formula(f: Formula):
    """Straight-line program over the distinct subformulas, children first."""
    subs = subformulas(f).subformulas
    slot = {g: i for i, g in enumerate(subs)}
    prog = []
    for g in subs:
        if isinstance(g, Var):
            prog.append(("var", g.index))
        elif isinstance(g, And):
            prog.append(("and", slot[g.left], slot[g.right]))
        elif isinstance(g, Not):
            prog.append(("not", slot[g.child]))
        elif isinstance(g, Diamond):
            prog.append(("dia", slot[g.child]))
        else:
            prog.append(("all", slot[g.child]))
    return prog


def _run(prog, env, top, closure, where=None):
    vals = []
    for op in prog:
        kind = op[0]
        if kind == "var":
            vals.append(env[op[1]])
        elif kind == "and":
            vals.append(vals[op[1]] & vals[op[2]])
        elif kind == "not":
            vals.append(top ^ vals[op[1]])
        elif kind == "dia":
            vals.append(closure(vals[op[1]]))
        elif where is None:
            vals.append(top if vals[op[1]] == top else 0)
        else:
            vals.append(where(vals[op[1]] == top, top, 0))
    return vals[-1]


def eval_formula(alg: ClosureAlgebra, v: Mapping[int, int], f: Formula) -> int:
    """Value of ``f`` in ``alg`` under the valuation ``v`` (variable index -> element)."""
    prog = compile_formula(f)
    for op in prog:
        if op[0] == "var":
            if op[1] not in v:
                raise UnassignedVariableError(f"p{op[1]} has no value")
            if not alg.contains(v[op[1]]):
                raise ValueError(f"value of p{op[1]} is not in the algebra")
    return _run(prog, v, alg.top, alg.closure)


# -- exhaustive validity ---------------------------------------------------

def _compressor(top: int):
    positions = list(bits(top))

    def compress(m):
        return sum(1 << i for i, b in enumerate(positions) if m >> b & 1)

    def expand(m):
        return sum(1 << positions[i] for i in bits(int(m)))

    return compress, expand, len(positions)


def sweep_size(alg: ClosureAlgebra, f: Formula) -> int:
    return alg.size ** len(subformulas(f).variables)


def valid_in_algebra(alg: ClosureAlgebra, f: Formula, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Check ``f`` under every valuation of its variables into ``alg``."""
    variables = sorted(subformulas(f).variables)
    total = sweep_size(alg, f)
    if total > budget:
        raise BudgetExceededError(
            f"{alg.size}^{len(variables)} = {total} valuations exceed the budget of {budget}"
        )
    elems = alg.elements()
    prog = compile_formula(f)
    compress, expand, width = _compressor(alg.top)
    if width > TABLE_BITS:
        return _valid_scalar(alg, f, prog, variables, elems)

    ctop = np.int64(compress(alg.top))
    table = np.zeros(1 << width, dtype=np.int64)
    celems = np.array([compress(a) for a in elems], dtype=np.int64)
    for a, ca in zip(elems, celems):
        table[ca] = compress(alg.closure(a))

    def closure(x):
        return table[x]

    n = len(variables)
    r = 0
    while r < n and len(elems) ** (r + 1) <= CHUNK:
        r += 1
    r = max(r, 1) if n else 0
    outer_vars, inner_vars = variables[: n - r], variables[n - r:]
    if inner_vars:
        grids = np.meshgrid(*([celems] * len(inner_vars)), indexing="ij")
        inner = {v: g.ravel() for v, g in zip(inner_vars, grids)}
    else:
        inner = {}
    for outer in itertools.product(celems, repeat=len(outer_vars)):
        env = dict(inner)
        env.update(zip(outer_vars, outer))
        value = _run(prog, env, ctop, closure, np.where)
        bad = np.nonzero(np.broadcast_to(value, (max(1, len(elems) ** len(inner_vars)),)) != ctop)[0]
        if len(bad):
            i = bad[0]
            valuation = {v: expand(env[v] if np.ndim(env[v]) == 0 else env[v][i]) for v in variables}
            return _refuted(alg, f, valuation)
    return Verdict(True, detail={"algebra": alg.name, "valuations": total})


def _valid_scalar(alg, f, prog, variables, elems):
    for combo in itertools.product(elems, repeat=len(variables)):
        env = dict(zip(variables, combo))
        if _run(prog, env, alg.top, alg.closure) != alg.top:
            return _refuted(alg, f, env)
    return Verdict(True, detail={"algebra": alg.name, "valuations": len(elems) ** len(variables)})


def _refuted(alg, f, valuation, frame=None):
    value = eval_formula(alg, valuation, f)
    if value == alg.top:
        raise AssertionError("countermodel does not falsify the formula")
    return Verdict(False, Countermodel(alg, valuation, value, frame), {"algebra": alg.name})


def entails_global(alg: ClosureAlgebra, gamma, f: Formula, budget: int = DEFAULT_BUDGET) -> bool:
    """Global consequence: if every member of ``gamma`` is valid in ``alg`` then so is ``f``."""
    if all(valid_in_algebra(alg, g, budget).valid for g in gamma):
        return valid_in_algebra(alg, f, budget).valid
    return True


def satisfiable_in_algebra(alg: ClosureAlgebra, formulas, budget: int = DEFAULT_BUDGET):
    """A valuation giving every formula the value 1, or None."""
    conj = formulas[0]
    for g in formulas[1:]:
        conj = And(conj, g)
    # the unit is reached exactly where ~A(conj) is falsified
    verdict = valid_in_algebra(alg, Not(Forall(conj)), budget)
    return None if verdict.valid else verdict.countermodel.valuation


# -- cluster models --------------------------------------------------------

def _cluster_masks(fr: Frame):
    seen, out = 0, []
    for w in range(fr.size):
        if not seen >> w & 1:
            out.append(fr.succ[w])
            seen |= fr.succ[w]
    return out


def _eval_model(prog, variables, model):
    """Evaluate on a list of clusters, each a tuple of types; True when valid."""
    points = [t for cluster in model for t in cluster]
    full = (1 << len(points)) - 1
    masks, offset = [], 0
    for cluster in model:
        masks.append(((1 << len(cluster)) - 1) << offset)
        offset += len(cluster)
    env = {}
    for j, v in enumerate(variables):
        env[v] = sum(1 << i for i, t in enumerate(points) if t >> j & 1)

    def closure(x):
        return sum(m for m in masks if x & m)

    return _run(prog, env, full, closure) == full


def _type_sets(n_types, max_size):
    for size in range(1, min(max_size, n_types) + 1):
        yield from itertools.combinations(range(n_types), size)


def _count_type_sets(n_types, max_size):
    return sum(comb(n_types, s) for s in range(1, min(max_size, n_types) + 1))


def _model_algebra(model, variables):
    fr = cluster_frame([len(c) for c in model])
    alg = kur_algebra_from_frame(fr)
    points = [t for c in model for t in c]
    valuation = {v: sum(1 << i for i, t in enumerate(points) if t >> j & 1)
                 for j, v in enumerate(variables)}
    return fr, alg, valuation


def _minimize(prog, variables, model):
    """Drop points while the model still falsifies the formula."""
    model = [list(c) for c in model]
    changed = True
    while changed:
        changed = False
        for ci in range(len(model)):
            for pi in range(len(model[ci])):
                trial = [list(c) for c in model]
                del trial[ci][pi]
                trial = [c for c in trial if c]
                if trial and not _eval_model(prog, variables, trial):
                    model, changed = trial, True
                    break
            if changed:
                break
    return model


def _countermodel(f, prog, variables, model):
    model = _minimize(prog, variables, model)
    fr, alg, valuation = _model_algebra(model, variables)
    return _refuted(alg, f, valuation, fr)


def _require_forall_free(f):
    if subformulas(f).foralls:
        raise PreconditionError(f"{render(f)} uses the universal modality")


def cluster_valid(f: Formula, n: int, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Validity on the ``n``-cluster, by sweeping sets of at most ``n`` types."""
    info = subformulas(f)
    variables = sorted(info.variables)
    n_types = 1 << len(variables)
    count = _count_type_sets(n_types, n)
    if count > budget:
        raise BudgetExceededError(f"{count} type sets exceed the budget of {budget}")
    prog = compile_formula(f)
    for S in _type_sets(n_types, n):
        if not _eval_model(prog, variables, [S]):
            return _countermodel(f, prog, variables, [S])
    return Verdict(True, detail={"cluster": n, "type_sets": count})


def s5_bound(f: Formula) -> int:
    return subformulas(f).diamonds + 1


def s5_decide(f: Formula, budget: int = DEFAULT_BUDGET) -> Verdict:
    """S5 validity: validity on the cluster with one more world than ``f`` has diamonds."""
    _require_forall_free(f)
    m = s5_bound(f)
    verdict = cluster_valid(f, m, budget)
    verdict.detail["bound"] = m
    return verdict


def s5n_decide(f: Formula, n: int, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Validity in S5 plus bd_n, i.e. on the ``n``-cluster."""
    _require_forall_free(f)
    if n < 1:
        raise ValueError("n must be positive")
    return cluster_valid(f, n, budget)


class ScroggsClass(NamedTuple):
    kind: str  # "inconsistent", "s5n" or "s5"
    n: int | None = None

    def __str__(self):
        if self.kind == "s5n":
            return f"S5_{self.n}"
        return "S5" if self.kind == "s5" else "inconsistent"


def classify_scroggs(f: Formula, cap: int = 8, budget: int = DEFAULT_BUDGET) -> ScroggsClass:
    """Which link of the chain of S5 extensions ``S5 + f`` is.

    Validity on clusters is downward closed in the cluster size, so the answer
    is the largest ``n`` with ``f`` valid on the ``n``-cluster, or S5 itself
    when ``f`` survives the S5 bound.
    """
    _require_forall_free(f)
    if not cluster_valid(f, 1, budget).valid:
        return ScroggsClass("inconsistent", 0)
    m = s5_bound(f)
    if cluster_valid(f, m, budget).valid:
        return ScroggsClass("s5")
    n = 1
    while n + 1 < m and cluster_valid(f, n + 1, budget).valid:
        n += 1
        if n > cap:
            raise BudgetExceededError(f"valid beyond the cluster-size cap {cap}")
    return ScroggsClass("s5n", n)


def s5u_bounds(f: Formula) -> tuple[int, int]:
    info = subformulas(f)
    return info.foralls + 1, info.diamonds + 1


def s5u_decide(f: Formula, max_clusters: int | None = None, budget: int = DEFAULT_BUDGET) -> Verdict:
    """S5U validity over S5 frames with boundedly many clusters of bounded size.

    The defaults are one more cluster than ``f`` has universal subformulas and
    one more world per cluster than it has diamonds.
    """
    c, m = s5u_bounds(f)
    if max_clusters is not None:
        c = max_clusters
    info = subformulas(f)
    variables = sorted(info.variables)
    n_types = 1 << len(variables)
    n_sets = _count_type_sets(n_types, m)
    count = sum(comb(n_sets, k) for k in range(1, c + 1))
    if count > budget:
        raise BudgetExceededError(f"{count} models exceed the budget of {budget}")
    prog = compile_formula(f)
    type_sets = list(_type_sets(n_types, m))
    for k in range(1, c + 1):
        for model in itertools.combinations(type_sets, k):
            if not _eval_model(prog, variables, list(model)):
                verdict = _countermodel(f, prog, variables, model)
                verdict.detail.update(clusters=c, cluster_size=m)
                return verdict
    return Verdict(True, detail={"clusters": c, "cluster_size": m, "models": count})
