"""Shared construction helpers and independent oracles for the test suite.

The evaluator oracle here is deliberately coded by substitution (ground the
quantifier, recurse on a closed formula) so it shares no code path with the
package's environment-passing evaluator.
"""

from __future__ import annotations

import itertools
import random

from equitree.logic import (
    And,
    Atom,
    Eq,
    Exists,
    ExistsSet,
    FalseF,
    Forall,
    ForallSet,
    Implies,
    Member,
    Not,
    Or,
    TrueF,
)
from equitree.structures import Structure, Vocabulary

GRAPH = Vocabulary([("E", 2)])


def graph(n, edges, directed=False):
    """Graph structure on elements 1..n."""
    table = set()
    for u, v in edges:
        table.add((u, v))
        if not directed:
            table.add((v, u))
    return Structure(GRAPH, range(1, n + 1), {"E": table})


def path_graph(edge_count):
    """Undirected path with the given number of edges (edge_count+1 vertices)."""
    return graph(edge_count + 1, [(i, i + 1) for i in range(1, edge_count + 1)])


def cycle_graph(n):
    edges = [(i, i + 1) for i in range(1, n)] + [(n, 1)]
    return graph(n, edges)


def complete_graph(n):
    return graph(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def empty_graph(n):
    return graph(n, [])


def word_structure(letters, alphabet=None):
    """A word as a structure: reflexive linear order plus letter predicates."""
    alphabet = sorted(set(alphabet or letters))
    vocab = Vocabulary([("<=", 2)] + [(f"P_{a}", 1) for a in alphabet])
    n = len(letters)
    tables = {"<=": {(i, j) for i in range(1, n + 1) for j in range(i, n + 1)}}
    for a in alphabet:
        tables[f"P_{a}"] = {(i + 1,) for i, x in enumerate(letters) if x == a}
    return Structure(vocab, range(1, n + 1), tables)


def random_structure(rng, vocab, max_size=5, density=0.4):
    n = rng.randint(1, max_size)
    universe = range(1, n + 1)
    tables = {}
    for name, arity in vocab.relations:
        tables[name] = {
            combo
            for combo in itertools.product(universe, repeat=arity)
            if rng.random() < density
        }
    return Structure(vocab, universe, tables)


def random_formula(
    rng, vocab, depth, vars_in_scope=(), allow_mso=False, sets_in_scope=(), fuel=8
):
    """Random formula of quantifier rank <= depth over the vocabulary."""

    def leaf_formula():
        opts = []
        if vars_in_scope:
            opts += ["atom", "atom", "eq"]
            if allow_mso and sets_in_scope:
                opts.append("member")
        if not opts:
            return TrueF()
        kind = rng.choice(opts)
        if kind == "atom":
            name, arity = rng.choice(vocab.relations)
            return Atom(name, tuple(rng.choice(vars_in_scope) for _ in range(arity)))
        if kind == "eq":
            return Eq(rng.choice(vars_in_scope), rng.choice(vars_in_scope))
        return Member(rng.choice(vars_in_scope), rng.choice(sets_in_scope))

    if fuel <= 0:
        return leaf_formula()
    choices = ["leaf", "leaf", "not", "and", "or", "implies"]
    if depth > 0:
        choices += ["quant", "quant", "quant"]
    kind = rng.choice(choices)
    if kind == "leaf":
        return leaf_formula()
    if kind == "not":
        return Not(
            random_formula(rng, vocab, depth, vars_in_scope, allow_mso, sets_in_scope, fuel - 1)
        )
    if kind in ("and", "or", "implies"):
        cls = {"and": And, "or": Or, "implies": Implies}[kind]
        return cls(
            random_formula(rng, vocab, depth, vars_in_scope, allow_mso, sets_in_scope, fuel - 2),
            random_formula(rng, vocab, depth, vars_in_scope, allow_mso, sets_in_scope, fuel - 2),
        )
    if allow_mso and rng.random() < 0.3:
        var = f"X{len(sets_in_scope)}"
        body = random_formula(
            rng, vocab, depth - 1, vars_in_scope, allow_mso,
            tuple(sets_in_scope) + (var,), fuel - 1,
        )
        return rng.choice([ExistsSet, ForallSet])(var, body)
    var = f"x{len(vars_in_scope)}"
    body = random_formula(
        rng, vocab, depth - 1, tuple(vars_in_scope) + (var,), allow_mso,
        sets_in_scope, fuel - 1,
    )
    return rng.choice([Exists, Forall])(var, body)


# ---------------------------------------------------------------------------
# independent substitution-based evaluator


class _Const:
    """Ground marker so substituted elements cannot collide with variables."""

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = value


def _substitute(phi, var, value):
    if isinstance(phi, Atom):
        return Atom(phi.rel, tuple(value if a == var else a for a in phi.args))
    if isinstance(phi, Eq):
        return Eq(value if phi.left == var else phi.left, value if phi.right == var else phi.right)
    if isinstance(phi, Member):
        return Member(
            value if phi.var == var else phi.var,
            value if phi.setvar == var else phi.setvar,
        )
    if isinstance(phi, Not):
        return Not(_substitute(phi.sub, var, value))
    if isinstance(phi, (And, Or, Implies)):
        return type(phi)(
            _substitute(phi.left, var, value), _substitute(phi.right, var, value)
        )
    if isinstance(phi, (Exists, Forall, ExistsSet, ForallSet)):
        if phi.var == var:
            return phi
        return type(phi)(phi.var, _substitute(phi.body, var, value))
    return phi


def eval_by_substitution(struct, phi, assignment=None):
    """Ground-substitution evaluator; independent of equitree.logic.evaluate."""
    for var, val in (assignment or {}).items():
        wrapped = _Const(frozenset(val)) if isinstance(val, (set, frozenset)) else _Const(val)
        phi = _substitute(phi, var, wrapped)

    def closed(f):
        if isinstance(f, TrueF):
            return True
        if isinstance(f, FalseF):
            return False
        if isinstance(f, Atom):
            return tuple(a.value for a in f.args) in struct.tables[f.rel]
        if isinstance(f, Eq):
            return f.left.value == f.right.value
        if isinstance(f, Member):
            return f.var.value in f.setvar.value
        if isinstance(f, Not):
            return not closed(f.sub)
        if isinstance(f, And):
            return closed(f.left) and closed(f.right)
        if isinstance(f, Or):
            return closed(f.left) or closed(f.right)
        if isinstance(f, Implies):
            return not closed(f.left) or closed(f.right)
        if isinstance(f, Exists):
            return any(closed(_substitute(f.body, f.var, _Const(e))) for e in struct.elements)
        if isinstance(f, Forall):
            return all(closed(_substitute(f.body, f.var, _Const(e))) for e in struct.elements)
        if isinstance(f, (ExistsSet, ForallSet)):
            subsets = [
                _Const(frozenset(c))
                for r in range(len(struct.elements) + 1)
                for c in itertools.combinations(struct.elements, r)
            ]
            if isinstance(f, ExistsSet):
                return any(closed(_substitute(f.body, f.var, s)) for s in subsets)
            return all(closed(_substitute(f.body, f.var, s)) for s in subsets)
        raise TypeError(f"unexpected node {f!r}")

    return closed(phi)


def seeded(seed):
    return random.Random(seed)


def random_tree(rng, alphabet, max_nodes=12):
    """A random representation-feasible tree over the alphabet."""
    internal = sorted(alphabet.internal)
    leaves = sorted(alphabet.leaf)
    budget = [rng.randint(1, max_nodes)]

    def grow(depth):
        budget[0] -= 1
        want_leaf = budget[0] <= 0 or depth > 4 or rng.random() < 0.35
        if want_leaf:
            return (rng.choice(leaves), [])
        sigma = rng.choice(internal)
        if sigma in alphabet.ranked:
            width = alphabet.arity(sigma)
            if budget[0] < width:
                return (rng.choice(leaves), [])
        else:
            width = rng.randint(1, max(1, min(4, budget[0])))
        return (sigma, [grow(depth + 1) for _ in range(width)])

    root = grow(0)
    from equitree.trees import Tree

    return Tree.from_nested(root)
