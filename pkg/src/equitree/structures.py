"""Finite relational structures over purely relational vocabularies.

Element ids are opaque small integers.  All values are immutable after
construction and all operations are pure, so everything here is safe for
concurrent read-only use.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .budgets import DEFAULT_BUDGETS
from .errors import PreconditionError, ValidationError, VocabularyMismatch


@dataclass(frozen=True)
class Vocabulary:
    """A finite set of predicate symbols, each with a positive arity."""

    relations: tuple

    def __init__(self, relations):
        rels = tuple(sorted((str(n), int(a)) for n, a in relations))
        object.__setattr__(self, "relations", rels)
        names = [n for n, _ in rels]
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate relation names in {names}")
        for n, a in rels:
            if a < 1:
                raise ValidationError(f"relation {n} has non-positive arity {a}")

    @property
    def names(self):
        return tuple(n for n, _ in self.relations)

    def arity(self, name):
        for n, a in self.relations:
            if n == name:
                return a
        raise KeyError(name)

    def __contains__(self, name):
        return any(n == name for n, _ in self.relations)

    def extend(self, extra):
        """New vocabulary with additional relations appended."""
        return Vocabulary(self.relations + tuple(extra))

    def fresh_unary_names(self, base, count):
        """`count` unary predicate names derived from `base`, avoiding clashes."""
        out = []
        k = 1
        while len(out) < count:
            name = f"{base}{k}"
            while name in self or name in out:
                name += "'"
            out.append(name)
            k += 1
        return out


@dataclass(frozen=True)
class Structure:
    """A finite structure: nonempty universe plus one table per relation."""

    vocab: Vocabulary
    universe: frozenset
    tables: dict = field(compare=False)

    def __init__(self, vocab, universe, tables):
        object.__setattr__(self, "vocab", vocab)
        object.__setattr__(self, "universe", frozenset(universe))
        norm = {}
        for name, _ in vocab.relations:
            norm[name] = frozenset(tuple(t) for t in tables.get(name, ()))
        object.__setattr__(self, "tables", norm)

    def __eq__(self, other):
        return (
            isinstance(other, Structure)
            and self.vocab == other.vocab
            and self.universe == other.universe
            and self.tables == other.tables
        )

    def __hash__(self):
        return hash((self.vocab, self.universe))

    @property
    def elements(self):
        return tuple(sorted(self.universe))

    def size(self):
        return len(self.universe)

    def rel(self, name):
        return self.tables[name]

    def holds(self, name, args):
        return tuple(args) in self.tables[name]

    def __repr__(self):
        return f"Structure(|A|={len(self.universe)}, vocab={self.vocab.names})"


def validate(struct):
    """Return the list of invariant violations (empty iff well formed)."""
    violations = []
    if not struct.universe:
        violations.append("universe is empty")
    for name, arity in struct.vocab.relations:
        for tup in struct.tables[name]:
            if len(tup) != arity:
                violations.append(f"{name}{tup}: wrong arity (expected {arity})")
            for e in tup:
                if e not in struct.universe:
                    violations.append(f"{name}{tup}: element {e} not in universe")
    return violations


def _require_valid_subset(struct, subset):
    s = frozenset(subset)
    if not s:
        raise PreconditionError("substructure universe must be nonempty")
    if not s <= struct.universe:
        raise PreconditionError(f"elements {sorted(s - struct.universe)} not in universe")
    return s


def induced_substructure(struct, subset):
    """The induced substructure on `subset` (nonempty subset of the universe)."""
    s = _require_valid_subset(struct, subset)
    tables = {
        name: {t for t in table if all(e in s for e in t)}
        for name, table in struct.tables.items()
    }
    return Structure(struct.vocab, s, tables)


def disjoint_sum_with_maps(parts, tag_base="P_"):
    """Disjoint sum of structures over one vocabulary, tagged with fresh unary
    predicates, plus the per-component element maps (old id -> new id).

    Ids are re-tagged as (component, id) and then renumbered densely from 1,
    so the output is deterministic.
    """
    parts = list(parts)
    if not parts:
        raise PreconditionError("disjoint sum needs at least one component")
    vocab = parts[0].vocab
    for p in parts[1:]:
        if p.vocab != vocab:
            raise VocabularyMismatch("disjoint sum components must share a vocabulary")
    tagged = [(i, e) for i, p in enumerate(parts) for e in p.elements]
    renumber = {pair: k for k, pair in enumerate(tagged, start=1)}
    maps = [
        {e: renumber[(i, e)] for e in p.elements} for i, p in enumerate(parts)
    ]
    tag_names = vocab.fresh_unary_names(tag_base, len(parts))
    out_vocab = vocab.extend((n, 1) for n in tag_names)
    tables = {name: set() for name in out_vocab.names}
    for i, p in enumerate(parts):
        m = maps[i]
        for name, table in p.tables.items():
            tables[name].update(tuple(m[e] for e in t) for t in table)
        tables[tag_names[i]].update((m[e],) for e in p.elements)
    summed = Structure(out_vocab, set(renumber.values()), tables)
    return summed, maps


def disjoint_sum(parts, tag_base="P_"):
    """Disjoint sum; see disjoint_sum_with_maps."""
    return disjoint_sum_with_maps(parts, tag_base)[0]


def reduct(struct, names):
    """Forget all relations except `names` (a reduct to a smaller vocabulary)."""
    keep = [(n, a) for n, a in struct.vocab.relations if n in set(names)]
    return Structure(
        Vocabulary(keep), struct.universe, {n: struct.tables[n] for n, _ in keep}
    )


def is_embedding(small, big, mapping):
    """True iff `mapping` embeds `small` into `big` isomorphically onto its image.

    The map must be total on small's universe, injective, and must both
    preserve and reflect every relation of the shared vocabulary.
    """
    if small.vocab != big.vocab:
        return False
    if set(mapping) != set(small.universe):
        return False
    image = set(mapping.values())
    if len(image) != len(mapping) or not image <= big.universe:
        return False
    for name, _ in small.vocab.relations:
        small_table = small.tables[name]
        big_table = big.tables[name]
        for t in small_table:
            if tuple(mapping[e] for e in t) not in big_table:
                return False
        arity = small.vocab.arity(name)
        inverse = {v: k for k, v in mapping.items()}
        for t in big_table:
            if all(e in image for e in t):
                if tuple(inverse[e] for e in t) not in small_table:
                    return False
    return True


def find_embedding(small, big, budgets=DEFAULT_BUDGETS):
    """Some embedding of `small` into `big`, or None.  Brute force with pruning."""
    if small.vocab != big.vocab:
        raise VocabularyMismatch("embedding search needs a shared vocabulary")
    budgets.check_embed(big.size())
    if small.size() > big.size():
        return None
    small_elems = small.elements
    big_elems = big.elements
    binary_plus = [
        (name, small.tables[name], big.tables[name]) for name, _ in small.vocab.relations
    ]

    def consistent(partial, e, v):
        trial = dict(partial)
        trial[e] = v
        placed = set(trial)
        for name, st, bt in binary_plus:
            arity = small.vocab.arity(name)
            for t in st:
                if e in t and all(x in placed for x in t):
                    if tuple(trial[x] for x in t) not in bt:
                        return False
            inv = {val: key for key, val in trial.items()}
            for t in bt:
                if v in t and all(x in inv for x in t):
                    if tuple(inv[x] for x in t) not in st:
                        return False
        return True

    def search(idx, partial, used):
        if idx == len(small_elems):
            return dict(partial)
        e = small_elems[idx]
        for v in big_elems:
            if v in used:
                continue
            if consistent(partial, e, v):
                partial[e] = v
                used.add(v)
                found = search(idx + 1, partial, used)
                if found is not None:
                    return found
                del partial[e]
                used.discard(v)
        return None

    return search(0, {}, set())


def isomorphic(a, b, budgets=DEFAULT_BUDGETS):
    """Brute-force isomorphism test (small structures only)."""
    if a.vocab != b.vocab or a.size() != b.size():
        return False
    if sorted(len(t) for t in a.tables.values()) != sorted(
        len(t) for t in b.tables.values()
    ):
        return False
    return find_embedding(a, b, budgets) is not None


def with_point(struct, element, name_base="pt_"):
    """Expansion with one fresh unary predicate holding exactly {element}."""
    if element not in struct.universe:
        raise PreconditionError(f"element {element} not in universe")
    existing = sum(1 for n in struct.vocab.names if n.startswith(name_base))
    name = struct.vocab.fresh_unary_names(name_base, existing + 1)[existing]
    vocab = struct.vocab.extend([(name, 1)])
    tables = dict(struct.tables)
    tables[name] = {(element,)}
    return Structure(vocab, struct.universe, tables)


@dataclass(frozen=True)
class PointedStructure:
    """A structure with distinguished elements and distinguished subsets."""

    base: Structure
    points: tuple = ()
    sets: tuple = ()

    def __init__(self, base, points=(), sets=()):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "points", tuple(points))
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in sets))
        for p in self.points:
            if p not in base.universe:
                raise PreconditionError(f"point {p} not in universe")
        for s in self.sets:
            if not s <= base.universe:
                raise PreconditionError("distinguished set not within universe")
