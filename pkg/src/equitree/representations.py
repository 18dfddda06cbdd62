"""Tree encodings of structures: words, unordered trees, nested words,
cographs and n-partite cographs, plus combinators over them.

A Representation bundles a tree alphabet with an image map from
representation-feasible trees to structures.  Every image map also returns
element-level provenance (structure element -> token tied to a tree node
uid), which is what makes "the shrunken tree's image embeds into the
original image by identity" a machine-checkable statement.

`m0` is the rank threshold above which the representation's composition
property is relied on by the reduction algorithms.  Ordered and unordered
tree encodings use 3; the nested-word encoding uses 2 (its insert-based
composition needs a marked position); word concatenation and the
lca-labeled graph encodings compose at every rank, so they use 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import PreconditionError, ValidationError
from .structures import Structure, Vocabulary
from .trees import (
    Tree,
    TreeAlphabet,
    as_structure,
    check_representation_feasible,
    lca,
    subtree_at,
)

CONCAT_LABEL = "∘"
PAIR_SEP = ","

ORDER_REL = "<="
MATCH_REL = "match"
EDGE_REL = "E"


def letter_predicate(a):
    return f"P_{a}"


@dataclass(frozen=True)
class Representation:
    """A named tree encoding: alphabet, image map, composition threshold."""

    name: str
    alphabet: TreeAlphabet
    m0: int
    image_fn: object = field(repr=False)

    def feasibility_violations(self, t):
        return check_representation_feasible(t, self.alphabet)

    def require_feasible(self, t):
        bad = self.feasibility_violations(t)
        if bad:
            raise PreconditionError(
                f"tree not representation-feasible for {self.name}: {bad[:3]}"
            )

    def structure_with_provenance(self, t):
        """(image structure, element -> provenance token)."""
        self.require_feasible(t)
        return self.image_fn(t)

    def structure(self, t):
        return self.structure_with_provenance(t)[0]


# ---------------------------------------------------------------------------
# ordered / partially ranked / unordered trees


def rep_partially_ranked(labels, ranked=(), rho=None, name=None):
    """Identity encoding: the ordered tree itself is the structure."""
    alphabet = TreeAlphabet(internal=labels, leaf=labels, ranked=ranked, rho=rho)

    def image(t):
        return as_structure(t, "ordered", alphabet)

    return Representation(name or "ranked-trees", alphabet, 3, image)


def rep_ordered_trees(labels, name="ordered-trees"):
    return rep_partially_ranked(labels, ranked=(), rho=None, name=name)


def rep_unordered_trees(labels, name="unordered-trees"):
    """Forgets the ordering among children."""
    alphabet = TreeAlphabet(internal=labels, leaf=labels)

    def image(t):
        return as_structure(t, "unordered", alphabet)

    return Representation(name, alphabet, 3, image)


# ---------------------------------------------------------------------------
# words


def word_vocabulary(letters):
    return Vocabulary([(ORDER_REL, 2)] + [(letter_predicate(a), 1) for a in sorted(letters)])


def word_as_structure(letters, alphabet, tokens=None):
    n = len(letters)
    if n == 0:
        raise PreconditionError("words must be nonempty")
    vocab = word_vocabulary(alphabet)
    tables = {ORDER_REL: {(i, j) for i in range(1, n + 1) for j in range(i, n + 1)}}
    for a in alphabet:
        tables[letter_predicate(a)] = set()
    for i, x in enumerate(letters, start=1):
        tables[letter_predicate(x)].add((i,))
    struct = Structure(vocab, range(1, n + 1), tables)
    tokens = tokens if tokens is not None else list(range(1, n + 1))
    return struct, {i: tok for i, tok in enumerate(tokens, start=1)}


def rep_words(letters, name="words"):
    """Words encoded as concatenation trees: internal nodes concatenate, the
    left-to-right leaf sequence is the word."""
    letters = frozenset(str(x) for x in letters)
    alphabet = TreeAlphabet(internal={CONCAT_LABEL}, leaf=letters)

    def image(t):
        seq = [(t.label(a), t.uid(a)) for a in range(len(t)) if t.is_leaf(a)]
        return word_as_structure(
            [x for x, _ in seq], sorted(letters), tokens=[u for _, u in seq]
        )

    return Representation(name, alphabet, 1, image)


# ---------------------------------------------------------------------------
# nested words


@dataclass(frozen=True)
class NestedWord:
    """A word plus a non-crossing call/return matching on its positions.

    Positions are 1..len(letters); the matching relates earlier positions to
    strictly later ones, each position participating in at most one pair on
    each side, with no crossings.
    """

    letters: tuple
    matching: frozenset

    def __init__(self, letters, matching=()):
        object.__setattr__(self, "letters", tuple(str(x) for x in letters))
        object.__setattr__(
            self, "matching", frozenset((int(i), int(j)) for i, j in matching)
        )

    def __len__(self):
        return len(self.letters)

    def word(self):
        return "".join(self.letters)


def validate_nested(w):
    """Violations of the nesting conditions (empty list iff valid)."""
    violations = []
    n = len(w)
    if n == 0:
        violations.append("empty nested word")
    for i, j in sorted(w.matching):
        if not (1 <= i <= n and 1 <= j <= n):
            violations.append(f"pair ({i},{j}) outside positions 1..{n}")
        elif not i < j:
            violations.append(f"pair ({i},{j}) must have i < j")
    calls = [i for i, _ in w.matching]
    returns = [j for _, j in w.matching]
    touched = calls + returns
    for p in set(touched):
        if calls.count(p) > 1:
            violations.append(f"position {p} is a call more than once")
        if returns.count(p) > 1:
            violations.append(f"position {p} is a return more than once")
    pairs = sorted(w.matching)
    for (i1, j1), (i2, j2) in itertools.combinations(pairs, 2):
        if i1 < i2 <= j1 < j2 or i2 < i1 <= j2 < j1:
            violations.append(f"pairs ({i1},{j1}) and ({i2},{j2}) cross")
    return violations


def nested_insert(u, e, v):
    """Insert v into u just after position e.

    v's positions land between e and its successor in u; letters, order and
    matchings are combined; both matchings survive unchanged (renumbered).
    """
    if not 1 <= e <= len(u):
        raise PreconditionError(f"position {e} not in 1..{len(u)}")
    if len(v) == 0:
        raise PreconditionError("inserted nested word must be nonempty")
    shift = len(v)
    letters = u.letters[:e] + v.letters + u.letters[e:]
    matching = set()
    for i, j in u.matching:
        matching.add((i if i <= e else i + shift, j if j <= e else j + shift))
    for i, j in v.matching:
        matching.add((i + e, j + e))
    return NestedWord(letters, matching)


def nested_concat(u, v):
    """Concatenation: insert at the last position."""
    return nested_insert(u, len(u), v)


def pair_label(a, b):
    return f"{a}{PAIR_SEP}{b}"


def split_pair(label):
    if PAIR_SEP not in label:
        return None
    a, b = label.split(PAIR_SEP, 1)
    return a, b


def nested_word_vocabulary(letters):
    return Vocabulary(
        [(ORDER_REL, 2), (MATCH_REL, 2)]
        + [(letter_predicate(a), 1) for a in sorted(letters)]
    )


def nested_word_as_structure(w, letters, tokens=None):
    n = len(w)
    vocab = nested_word_vocabulary(letters)
    tables = {
        ORDER_REL: {(i, j) for i in range(1, n + 1) for j in range(i, n + 1)},
        MATCH_REL: set(w.matching),
    }
    for a in letters:
        tables[letter_predicate(a)] = set()
    for i, x in enumerate(w.letters, start=1):
        tables[letter_predicate(x)].add((i,))
    struct = Structure(vocab, range(1, n + 1), tables)
    tokens = tokens if tokens is not None else list(range(1, n + 1))
    return struct, {i: tok for i, tok in enumerate(tokens, start=1)}


def rep_nested_words(letters, name="nested-words"):
    """Nested words as trees.

    Leaves: a plain letter is a one-letter word; a pair label (a,b) is the
    word ab with the two positions matched.  Internal nodes: the
    concatenation label concatenates the children's images in order; a pair
    label wraps the concatenation in a matched call/return; a plain letter
    prefixes it with that letter.
    """
    letters = frozenset(str(x) for x in letters)
    pairs = frozenset(pair_label(a, b) for a in sorted(letters) for b in sorted(letters))
    leaf_labels = letters | pairs
    alphabet = TreeAlphabet(internal=leaf_labels | {CONCAT_LABEL}, leaf=leaf_labels)

    def build(t, a):
        """(letters list, matching set, tokens list), positions local 1..k."""
        lab = t.label(a)
        pair = split_pair(lab)
        if t.is_leaf(a):
            if pair is None:
                return [lab], set(), [(t.uid(a), "solo")]
            x, y = pair
            return [x, y], {(1, 2)}, [(t.uid(a), "open"), (t.uid(a), "close")]
        chunks = [build(t, c) for c in t.children(a)]
        letters_out, matching_out, tokens_out = [], set(), []
        for ls, ms, ts in chunks:
            off = len(letters_out)
            letters_out.extend(ls)
            matching_out.update((i + off, j + off) for i, j in ms)
            tokens_out.extend(ts)
        if lab == CONCAT_LABEL:
            return letters_out, matching_out, tokens_out
        if pair is not None:
            x, y = pair
            shifted = {(i + 1, j + 1) for i, j in matching_out}
            shifted.add((1, len(letters_out) + 2))
            return (
                [x] + letters_out + [y],
                shifted,
                [(t.uid(a), "open")] + tokens_out + [(t.uid(a), "close")],
            )
        return (
            [lab] + letters_out,
            {(i + 1, j + 1) for i, j in matching_out},
            [(t.uid(a), "solo")] + tokens_out,
        )

    def image(t):
        ls, ms, ts = build(t, t.root)
        w = NestedWord(ls, ms)
        bad = validate_nested(w)
        if bad:
            raise ValidationError(f"image is not a valid nested word: {bad[:3]}")
        return nested_word_as_structure(w, sorted(letters), tokens=ts)

    return Representation(name, alphabet, 2, image)


def nested_word_of_tree(rep, t):
    """The NestedWord value represented by a tree (for tests and reports)."""
    struct, _ = rep.structure_with_provenance(t)
    n = len(struct.universe)
    letters = []
    for i in range(1, n + 1):
        for name, _ in struct.vocab.relations:
            if name.startswith("P_") and (i,) in struct.tables[name]:
                letters.append(name[2:])
                break
    return NestedWord(letters, struct.tables[MATCH_REL])


# ---------------------------------------------------------------------------
# n-partite cographs


def edge_function_label(matrix):
    """Canonical label for an edge function given as a row-major 0/1 matrix."""
    bits = "".join(str(int(b)) for row in matrix for b in row)
    return f"f{bits}"


def decode_edge_function(label, n):
    if not label.startswith("f") or len(label) != 1 + n * n:
        raise ValidationError(f"not an edge-function label for n={n}: {label!r}")
    bits = label[1:]
    return [[int(bits[i * n + j]) for j in range(n)] for i in range(n)]


def partition_predicate(i):
    return f"P_{i}"


def vertex_label_predicate(s):
    return f"L_{s}"


def npartite_vocabulary(n, vertex_labels=None):
    rels = [(EDGE_REL, 2)]
    if n > 1:
        rels += [(partition_predicate(i), 1) for i in range(1, n + 1)]
    if vertex_labels:
        rels += [(vertex_label_predicate(s), 1) for s in sorted(vertex_labels)]
    return Vocabulary(rels)


def rep_npartite(n, vertex_labels=None, name=None, internal_decode=None, internal_labels=None):
    """Graphs of lca-decided adjacency: leaves are vertices colored 1..n
    (optionally with an extra label), internal nodes carry edge functions,
    and two vertices are adjacent iff the function at their greatest common
    ancestor maps their color pair to 1.

    The pair is evaluated with its members in tree order and the edge is
    emitted symmetrically.
    """
    if n < 1:
        raise PreconditionError("n must be positive")
    if internal_labels is None:
        if n > 3:
            raise PreconditionError("edge-function alphabets beyond n=3 are not enumerated")
        internal_labels = [
            edge_function_label(m)
            for m in itertools.product(
                *[list(itertools.product((0, 1), repeat=n)) for _ in range(n)]
            )
        ]
        internal_decode = lambda lab: decode_edge_function(lab, n)
    vertex_labels = sorted(str(s) for s in vertex_labels) if vertex_labels else None
    if vertex_labels:
        leaf_labels = {f"{i}{PAIR_SEP}{s}" for i in range(1, n + 1) for s in vertex_labels}
    else:
        leaf_labels = {str(i) for i in range(1, n + 1)}
    alphabet = TreeAlphabet(internal=set(internal_labels), leaf=leaf_labels)
    vocab = npartite_vocabulary(n, vertex_labels)

    def leaf_color(lab):
        if vertex_labels:
            i, s = lab.split(PAIR_SEP, 1)
            return int(i), s
        return int(lab), None

    def image(t):
        leaves = [a for a in range(len(t)) if t.is_leaf(a)]
        index = {a: k for k, a in enumerate(leaves, start=1)}
        tables = {name: set() for name in vocab.names}
        colors = {}
        for a in leaves:
            i, s = leaf_color(t.label(a))
            colors[a] = i
            if n > 1:
                tables[partition_predicate(i)].add((index[a],))
            if s is not None:
                tables[vertex_label_predicate(s)].add((index[a],))
        for x, y in itertools.combinations(leaves, 2):
            c = lca(t, x, y)
            f = internal_decode(t.label(c))
            if f[colors[x] - 1][colors[y] - 1]:
                tables[EDGE_REL].add((index[x], index[y]))
                tables[EDGE_REL].add((index[y], index[x]))
        struct = Structure(vocab, range(1, len(leaves) + 1), tables)
        return struct, {index[a]: t.uid(a) for a in leaves}

    return Representation(name or f"npartite:{n}", alphabet, 1, image)


def rep_cographs(name="cograph"):
    """Cographs: union/join cotrees, realized as the 1-partite case."""
    decode = {"union": [[0]], "join": [[1]]}
    return rep_npartite(
        1,
        name=name,
        internal_labels=["union", "join"],
        internal_decode=lambda lab: decode[lab],
    )


# ---------------------------------------------------------------------------
# combinator: a new root operation over existing representations


def compose_representations(op, reps, name=None):
    """Representation for structures built by applying `op` to members of
    the given representations' classes.

    Trees rooted at the fresh operation label have exactly one child per
    operand, the i-th child being a tree of reps[i]; any other tree is
    delegated to the first representation that accepts it.  The caller
    asserts that op preserves rank-m equivalence and is monotone; the
    checking harness spot-checks both.
    """
    if op.arity != len(reps):
        raise PreconditionError(f"{op.name} has arity {op.arity}, got {len(reps)} reps")
    op_label = f"op_{op.name}"
    member_labels = set().union(*(r.alphabet.labels for r in reps))
    while op_label in member_labels:
        op_label += "'"
    internal = {op_label}
    leaf_labels = set()
    ranked = {op_label}
    rho = {op_label: max(op.arity, 1)}
    for r in reps:
        internal |= r.alphabet.internal
        leaf_labels |= r.alphabet.leaf
        ranked |= r.alphabet.ranked
        for sigma, d in r.alphabet.rho:
            if sigma in rho and rho[sigma] != d:
                raise ValidationError(f"conflicting arities for label {sigma!r}")
            rho[sigma] = d
    alphabet = TreeAlphabet(internal=internal, leaf=leaf_labels, ranked=ranked, rho=rho)

    def delegate(t):
        for r in reps:
            if not r.feasibility_violations(t):
                return r
        raise PreconditionError("subtree fits no component representation")

    def image(t):
        if t.label(t.root) != op_label:
            r = delegate(t)
            return r.structure_with_provenance(t)
        parts = []
        for i, c in enumerate(t.children(t.root)):
            sub = subtree_at(t, c)
            r = reps[i]
            r.require_feasible(sub)
            parts.append(r.structure_with_provenance(sub))
        out, out_map = op.apply_with_maps([s for s, _ in parts])
        provenance = {}
        for elem, components in out_map.items():
            provenance[elem] = tuple(
                (i, parts[i][1][e]) for i, e in components
            )
        return out, provenance

    m0 = max([1] + [r.m0 for r in reps])
    return Representation(name or f"compose:{op.name}", alphabet, m0, image)
