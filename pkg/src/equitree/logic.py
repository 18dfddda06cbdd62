"""FO and MSO formulas: syntax tree, rank, and a brute-force evaluator.

Formulas are immutable trees.  First-order variables are lowercase by
convention and set variables uppercase, but nothing is enforced beyond the
node kinds themselves: membership and set quantifiers are only legal when
the ambient logic is MSO, which `validate_for_logic` checks.

Concrete syntax is prefix parenthesized, e.g.
    (exists x (and (atom P x) (forall y (atom <= x y))))
Set quantifiers are written (exists-set X ...) / (forall-set X ...) and
membership (in x X).  (true) and (false) are rank-0 constants.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import sexpr
from .budgets import DEFAULT_BUDGETS
from .errors import FormatError, PreconditionError, VocabularyMismatch

FO = "fo"
MSO = "mso"


@dataclass(frozen=True)
class TrueF:
    pass


@dataclass(frozen=True)
class FalseF:
    pass


@dataclass(frozen=True)
class Atom:
    rel: str
    args: tuple


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Member:
    var: str
    setvar: str


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ExistsSet:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ForallSet:
    var: str
    body: "Formula"


_BINARY = (And, Or, Implies)
_FO_QUANT = (Exists, Forall)
_SET_QUANT = (ExistsSet, ForallSet)


def rank(phi):
    """Quantifier rank: the maximum number of quantifiers (first order and
    second order alike) on any root-to-leaf path of the syntax tree."""
    if isinstance(phi, (TrueF, FalseF, Atom, Eq, Member)):
        return 0
    if isinstance(phi, Not):
        return rank(phi.sub)
    if isinstance(phi, _BINARY):
        return max(rank(phi.left), rank(phi.right))
    if isinstance(phi, _FO_QUANT + _SET_QUANT):
        return 1 + rank(phi.body)
    raise TypeError(f"not a formula node: {phi!r}")


def free_variables(phi):
    """(first-order free vars, set free vars)."""
    if isinstance(phi, (TrueF, FalseF)):
        return frozenset(), frozenset()
    if isinstance(phi, Atom):
        return frozenset(phi.args), frozenset()
    if isinstance(phi, Eq):
        return frozenset((phi.left, phi.right)), frozenset()
    if isinstance(phi, Member):
        return frozenset((phi.var,)), frozenset((phi.setvar,))
    if isinstance(phi, Not):
        return free_variables(phi.sub)
    if isinstance(phi, _BINARY):
        lf, ls = free_variables(phi.left)
        rf, rs = free_variables(phi.right)
        return lf | rf, ls | rs
    if isinstance(phi, _FO_QUANT):
        f, s = free_variables(phi.body)
        return f - {phi.var}, s
    if isinstance(phi, _SET_QUANT):
        f, s = free_variables(phi.body)
        return f, s - {phi.var}
    raise TypeError(f"not a formula node: {phi!r}")


def is_sentence(phi):
    f, s = free_variables(phi)
    return not f and not s


def is_quantifier_free(phi):
    if isinstance(phi, (TrueF, FalseF, Atom, Eq, Member)):
        return True
    if isinstance(phi, Not):
        return is_quantifier_free(phi.sub)
    if isinstance(phi, _BINARY):
        return is_quantifier_free(phi.left) and is_quantifier_free(phi.right)
    return False


def uses_mso(phi):
    """True iff the formula contains a membership atom or a set quantifier."""
    if isinstance(phi, (Member,) + _SET_QUANT):
        if isinstance(phi, Member):
            return True
        return True
    if isinstance(phi, Not):
        return uses_mso(phi.sub)
    if isinstance(phi, _BINARY):
        return uses_mso(phi.left) or uses_mso(phi.right)
    if isinstance(phi, _FO_QUANT):
        return uses_mso(phi.body)
    return False


def validate_for_logic(phi, logic):
    if logic == FO and uses_mso(phi):
        raise PreconditionError("set quantifiers / membership need --logic mso")


def infer_logic(phi):
    return MSO if uses_mso(phi) else FO


def _check_vocab(struct, phi):
    if isinstance(phi, Atom):
        if phi.rel not in struct.vocab:
            raise VocabularyMismatch(f"relation {phi.rel} not in vocabulary")
        if struct.vocab.arity(phi.rel) != len(phi.args):
            raise VocabularyMismatch(
                f"relation {phi.rel} used with arity {len(phi.args)}"
            )
    elif isinstance(phi, Not):
        _check_vocab(struct, phi.sub)
    elif isinstance(phi, _BINARY):
        _check_vocab(struct, phi.left)
        _check_vocab(struct, phi.right)
    elif isinstance(phi, _FO_QUANT + _SET_QUANT):
        _check_vocab(struct, phi.body)


def evaluate(struct, phi, assignment=None, budgets=DEFAULT_BUDGETS):
    """Tarskian truth of `phi` in `struct` under `assignment`.

    The assignment must cover every free variable (first-order variables map
    to elements, set variables to iterables of elements).  Set quantifiers
    enumerate every subset of the universe and are budget-guarded; exceeding
    the budget raises, signalling the caller to shrink the instance.
    """
    assignment = dict(assignment or {})
    fo_free, set_free = free_variables(phi)
    missing = (fo_free | set_free) - set(assignment)
    if missing:
        raise PreconditionError(f"unbound free variables: {sorted(missing)}")
    for v in set_free:
        assignment[v] = frozenset(assignment[v])
    _check_vocab(struct, phi)
    elements = struct.elements

    def rec(node, env):
        if isinstance(node, TrueF):
            return True
        if isinstance(node, FalseF):
            return False
        if isinstance(node, Atom):
            return struct.holds(node.rel, tuple(env[a] for a in node.args))
        if isinstance(node, Eq):
            return env[node.left] == env[node.right]
        if isinstance(node, Member):
            return env[node.var] in env[node.setvar]
        if isinstance(node, Not):
            return not rec(node.sub, env)
        if isinstance(node, And):
            return rec(node.left, env) and rec(node.right, env)
        if isinstance(node, Or):
            return rec(node.left, env) or rec(node.right, env)
        if isinstance(node, Implies):
            return (not rec(node.left, env)) or rec(node.right, env)
        if isinstance(node, Exists):
            return any(rec(node.body, {**env, node.var: e}) for e in elements)
        if isinstance(node, Forall):
            return all(rec(node.body, {**env, node.var: e}) for e in elements)
        if isinstance(node, (ExistsSet, ForallSet)):
            budgets.check_set_moves(len(elements))
            subsets = (
                frozenset(c)
                for r in range(len(elements) + 1)
                for c in itertools.combinations(elements, r)
            )
            if isinstance(node, ExistsSet):
                return any(rec(node.body, {**env, node.var: s}) for s in subsets)
            return all(rec(node.body, {**env, node.var: s}) for s in subsets)
        raise TypeError(f"not a formula node: {node!r}")

    return rec(phi, assignment)


# ---------------------------------------------------------------------------
# concrete syntax


def _from_sexpr(e):
    if not isinstance(e, list) or not e:
        raise FormatError(f"expected a formula form, got {e!r}")
    head = e[0]
    if head == "true":
        return TrueF()
    if head == "false":
        return FalseF()
    if head == "atom":
        if len(e) < 3:
            raise FormatError("(atom R x ...) needs a relation and arguments")
        return Atom(e[1], tuple(e[2:]))
    if head == "=":
        if len(e) != 3:
            raise FormatError("(= x y) needs exactly two variables")
        return Eq(e[1], e[2])
    if head == "in":
        if len(e) != 3:
            raise FormatError("(in x X) needs a variable and a set variable")
        return Member(e[1], e[2])
    if head == "not":
        if len(e) != 2:
            raise FormatError("(not f) needs one subformula")
        return Not(_from_sexpr(e[1]))
    if head in ("and", "or"):
        if len(e) < 3:
            raise FormatError(f"({head} ...) needs at least two subformulas")
        cls = And if head == "and" else Or
        out = _from_sexpr(e[-1])
        for sub in reversed(e[1:-1]):
            out = cls(_from_sexpr(sub), out)
        return out
    if head == "implies":
        if len(e) != 3:
            raise FormatError("(implies f g) needs two subformulas")
        return Implies(_from_sexpr(e[1]), _from_sexpr(e[2]))
    quant = {
        "exists": Exists,
        "forall": Forall,
        "exists-set": ExistsSet,
        "forall-set": ForallSet,
    }.get(head)
    if quant is not None:
        if len(e) != 3 or not isinstance(e[1], str):
            raise FormatError(f"({head} v f) needs a variable and a body")
        return quant(e[1], _from_sexpr(e[2]))
    raise FormatError(f"unknown formula form {head!r}")


def parse_formula(text):
    return _from_sexpr(sexpr.parse(text))


def _to_sexpr(phi):
    if isinstance(phi, TrueF):
        return ["true"]
    if isinstance(phi, FalseF):
        return ["false"]
    if isinstance(phi, Atom):
        return ["atom", phi.rel, *phi.args]
    if isinstance(phi, Eq):
        return ["=", phi.left, phi.right]
    if isinstance(phi, Member):
        return ["in", phi.var, phi.setvar]
    if isinstance(phi, Not):
        return ["not", _to_sexpr(phi.sub)]
    if isinstance(phi, And):
        return ["and", _to_sexpr(phi.left), _to_sexpr(phi.right)]
    if isinstance(phi, Or):
        return ["or", _to_sexpr(phi.left), _to_sexpr(phi.right)]
    if isinstance(phi, Implies):
        return ["implies", _to_sexpr(phi.left), _to_sexpr(phi.right)]
    if isinstance(phi, Exists):
        return ["exists", phi.var, _to_sexpr(phi.body)]
    if isinstance(phi, Forall):
        return ["forall", phi.var, _to_sexpr(phi.body)]
    if isinstance(phi, ExistsSet):
        return ["exists-set", phi.var, _to_sexpr(phi.body)]
    if isinstance(phi, ForallSet):
        return ["forall-set", phi.var, _to_sexpr(phi.body)]
    raise TypeError(f"not a formula node: {phi!r}")


def format_formula(phi):
    return sexpr.dump(_to_sexpr(phi))
