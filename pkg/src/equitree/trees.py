"""Labeled ordered trees and the surgery operations the reductions use.

Trees are immutable.  Node ids are renumbered in preorder on every
construction, so serialization is deterministic and the subtree of node `a`
occupies the contiguous id range [a, a + subtree_size(a)).  Every node also
carries a persistent `uid`: surgery keeps the uids of retained nodes, which
makes substructure embeddings identity maps on provenance.  When an
operation combines two trees with clashing uids, the grafted tree's uids
are remapped to fresh values (deterministically).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError, ValidationError
from .structures import Structure, Vocabulary

ANCESTOR_REL = "<="
SIBLING_REL = "<~"


def label_predicate(label):
    return f"P_{label}"


@dataclass(frozen=True)
class TreeAlphabet:
    """Internal/leaf label sets, the ranked subset, and the arity map.

    `rho` must be total on the internal labels.  Ranked labels may have any
    positive arity; unranked internal labels need rho >= 2 because the
    chunked composition walk splits child lists into blocks of rho - 1.
    """

    internal: frozenset
    leaf: frozenset
    ranked: frozenset
    rho: tuple

    def __init__(self, internal, leaf, ranked=(), rho=None):
        internal = frozenset(str(x) for x in internal)
        leaf = frozenset(str(x) for x in leaf)
        ranked = frozenset(str(x) for x in ranked)
        rho_map = {str(k): int(v) for k, v in (rho or {}).items()}
        for sigma in internal:
            rho_map.setdefault(sigma, 2)
        object.__setattr__(self, "internal", internal)
        object.__setattr__(self, "leaf", leaf)
        object.__setattr__(self, "ranked", ranked)
        object.__setattr__(self, "rho", tuple(sorted(rho_map.items())))
        if not ranked <= internal:
            raise ValidationError("ranked labels must be internal labels")
        for sigma, d in rho_map.items():
            if sigma not in internal:
                raise ValidationError(f"rho defined on non-internal label {sigma!r}")
            if d < 1:
                raise ValidationError(f"rho({sigma!r}) must be positive")
            if sigma not in ranked and d < 2:
                raise ValidationError(
                    f"unranked internal label {sigma!r} needs rho >= 2"
                )

    def arity(self, sigma):
        for k, v in self.rho:
            if k == sigma:
                return v
        raise KeyError(sigma)

    @property
    def labels(self):
        return self.internal | self.leaf

    def max_rho(self):
        return max((v for _, v in self.rho), default=2)

    def vocabulary(self, mode="ordered"):
        rels = [(ANCESTOR_REL, 2)]
        if mode == "ordered":
            rels.append((SIBLING_REL, 2))
        rels.extend((label_predicate(s), 1) for s in sorted(self.labels))
        return Vocabulary(rels)


class Tree:
    """Rooted ordered labeled tree with dense preorder node ids."""

    __slots__ = ("labels", "parents", "kids", "uids", "sizes", "_uid_index")

    def __init__(self, labels, parents, kids, uids, sizes):
        self.labels = labels
        self.parents = parents
        self.kids = kids
        self.uids = uids
        self.sizes = sizes
        self._uid_index = None

    @staticmethod
    def from_nested(nested):
        """Build from nested (label, children [, uid]) tuples."""
        labels, parents, kids, uids, sizes = [], [], [], [], []

        def walk(node, parent):
            label, children = node[0], node[1]
            uid = node[2] if len(node) > 2 else None
            me = len(labels)
            labels.append(str(label))
            parents.append(parent)
            kids.append([])
            uids.append(uid)
            sizes.append(1)
            if parent >= 0:
                kids[parent].append(me)
            for c in children:
                walk(c, me)
                sizes[me] += sizes[kids[me][-1]]
            return me

        walk(nested, -1)
        if any(u is None for u in uids):
            if not all(u is None for u in uids):
                raise PreconditionError("either all or no uids may be given")
            uids = list(range(len(labels)))
        return Tree(
            tuple(labels),
            tuple(parents),
            tuple(tuple(k) for k in kids),
            tuple(uids),
            tuple(sizes),
        )

    # -- accessors ---------------------------------------------------------

    def __len__(self):
        return len(self.labels)

    @property
    def root(self):
        return 0

    def label(self, a):
        return self.labels[a]

    def parent(self, a):
        return self.parents[a]

    def children(self, a):
        return self.kids[a]

    def uid(self, a):
        return self.uids[a]

    def is_leaf(self, a):
        return not self.kids[a]

    def subtree_size(self, a):
        return self.sizes[a]

    def subtree_ids(self, a):
        return range(a, a + self.sizes[a])

    def node_by_uid(self, uid):
        if self._uid_index is None:
            self._uid_index = {u: i for i, u in enumerate(self.uids)}
        return self._uid_index[uid]

    def uid_set(self):
        return frozenset(self.uids)

    def depth(self, a):
        d = 0
        while self.parents[a] >= 0:
            a = self.parents[a]
            d += 1
        return d

    def is_ancestor(self, a, b):
        """Whether a is an ancestor of b (reflexively)."""
        return a <= b < a + self.sizes[a]

    def leaves(self):
        return tuple(i for i in range(len(self)) if not self.kids[i])

    def to_nested(self, a=0, keep_uids=True):
        if keep_uids:
            return (
                self.labels[a],
                [self.to_nested(c, True) for c in self.kids[a]],
                self.uids[a],
            )
        return (self.labels[a], [self.to_nested(c, False) for c in self.kids[a]])

    def __eq__(self, other):
        """Structural equality: labels and shape (uids ignored)."""
        return (
            isinstance(other, Tree)
            and self.labels == other.labels
            and self.parents == other.parents
        )

    def __hash__(self):
        return hash((self.labels, self.parents))

    def __repr__(self):
        return f"Tree(size={len(self)}, root={self.labels[0]!r})"


def node(label, *children):
    """Nested-form constructor for an internal node."""
    return (label, list(children))


def leaf(label):
    return (label, [])


def size(t):
    return len(t)


def degree(t):
    return max((len(t.children(a)) for a in range(len(t))), default=0)


def height(t):
    best = 0
    stack = [(0, 0)]
    while stack:
        a, d = stack.pop()
        best = max(best, d)
        for c in t.children(a):
            stack.append((c, d + 1))
    return best


def lca(t, a, b):
    """Greatest common ancestor of nodes a and b (under the ancestor order)."""
    seen = set()
    x = a
    while x >= 0:
        seen.add(x)
        x = t.parent(x)
    x = b
    while x not in seen:
        x = t.parent(x)
    return x


def _fresh_uid_remap(base_tree, graft_nested):
    """Remap graft uids clashing with base's to fresh values (deterministic)."""

    def collect(n, acc):
        acc.append(n[2])
        for c in n[1]:
            collect(c, acc)

    graft_uids = []
    collect(graft_nested, graft_uids)
    base_uids = base_tree.uid_set()
    if not (set(graft_uids) & base_uids):
        return graft_nested
    next_uid = max(base_uids | set(graft_uids)) + 1
    remap = {}
    for u in graft_uids:
        if u in base_uids:
            remap[u] = next_uid
            next_uid += 1

    def rewrite(n):
        return (n[0], [rewrite(c) for c in n[1]], remap.get(n[2], n[2]))

    return rewrite(graft_nested)


def subtree_at(t, a):
    """The subtree rooted at a, as a fresh tree (order and uids preserved)."""
    if not 0 <= a < len(t):
        raise PreconditionError(f"no node {a}")
    return Tree.from_nested(t.to_nested(a))


def remove_subtree(t, b, alphabet=None):
    """Delete the subtree rooted at non-root b.

    With an alphabet, enforces the representation discipline: the parent's
    label must be unranked, and a parent left childless must carry a label
    that is also a leaf label.
    """
    if b == t.root:
        raise PreconditionError("cannot remove the root subtree")
    p = t.parent(b)
    if alphabet is not None:
        if t.label(p) in alphabet.ranked:
            raise PreconditionError(
                f"cannot remove a child of ranked node {t.label(p)!r}"
            )
        if len(t.children(p)) == 1 and t.label(p) not in alphabet.leaf:
            raise PreconditionError(
                f"removal would leave internal label {t.label(p)!r} on a leaf"
            )

    def walk(a):
        return (t.label(a), [walk(c) for c in t.children(a) if c != b], t.uid(a))

    return Tree.from_nested(walk(t.root))


def remove_child_block(t, a, lo, hi, alphabet=None):
    """Delete children of a at positions [lo, hi) (0-based), with subtrees."""
    n = len(t.children(a))
    if not (0 <= lo < hi <= n):
        raise PreconditionError(f"bad child block [{lo}, {hi}) at node of degree {n}")
    if hi - lo == n:
        raise PreconditionError("cannot delete every child of a node")
    if alphabet is not None and t.label(a) in alphabet.ranked:
        raise PreconditionError(f"cannot cut children of ranked node {t.label(a)!r}")
    drop = set(t.children(a)[lo:hi])

    def walk(x):
        return (t.label(x), [walk(c) for c in t.children(x) if c not in drop], t.uid(x))

    return Tree.from_nested(walk(t.root))


def replace(t, a, s):
    """t with the subtree at non-root a replaced by the tree s, in place
    among its siblings."""
    if a == t.root:
        raise PreconditionError("cannot replace the root subtree")
    graft = _fresh_uid_remap_excluding(t, a, s)

    def walk(x):
        if x == a:
            return graft
        return (t.label(x), [walk(c) for c in t.children(x)], t.uid(x))

    return Tree.from_nested(walk(t.root))


def _fresh_uid_remap_excluding(t, a, s):
    """Like _fresh_uid_remap but the replaced subtree's uids do not count as
    clashes (replacing a subtree by its own descendant keeps those uids)."""
    graft = s.to_nested()
    removed = {t.uid(x) for x in t.subtree_ids(a)}
    kept = t.uid_set() - removed

    class _Shim:
        def uid_set(self):
            return kept

    return _fresh_uid_remap(_Shim(), graft)


def merge(t, s):
    """The merge of s into t: s's root children are appended after t's root
    children.  Root labels must be equal."""
    if t.label(t.root) != s.label(s.root):
        raise PreconditionError("merge requires equal root labels")
    graft = _fresh_uid_remap(t, s.to_nested())
    base = t.to_nested()
    return Tree.from_nested((base[0], base[1] + graft[1], base[2]))


def _insert_sibling(t, a, s, offset):
    if a == t.root:
        raise PreconditionError("join target must be a non-root node")
    graft = _fresh_uid_remap(t, s.to_nested())
    p = t.parent(a)
    pos = t.children(p).index(a) + offset

    def walk(x):
        ch = [walk(c) for c in t.children(x)]
        if x == p:
            ch.insert(pos, graft)
        return (t.label(x), ch, t.uid(x))

    return Tree.from_nested(walk(t.root))


def join_right(t, a, s):
    """Attach s as the sibling immediately after a."""
    return _insert_sibling(t, a, s, 1)


def join_left(t, a, s):
    """Attach s as the sibling immediately before a."""
    return _insert_sibling(t, a, s, 0)


def join_below(t, a, s):
    """Attach s as the sole child of leaf a."""
    if not t.is_leaf(a):
        raise PreconditionError("join below requires a leaf target")
    graft = _fresh_uid_remap(t, s.to_nested())

    def walk(x):
        ch = [walk(c) for c in t.children(x)]
        if x == a:
            ch.append(graft)
        return (t.label(x), ch, t.uid(x))

    return Tree.from_nested(walk(t.root))


def prefix_subtree(t, a, k):
    """Subtree at a keeping only its first k children (k >= 1)."""
    n = len(t.children(a))
    if not 1 <= k <= n:
        raise PreconditionError(f"prefix width {k} out of range 1..{n}")
    keep = t.children(a)[:k]
    return Tree.from_nested(
        (t.label(a), [t.to_nested(c) for c in keep], t.uid(a))
    )


def as_structure(t, mode="ordered", alphabet=None):
    """The tree as a finite structure, plus element -> uid provenance.

    Vocabulary: the reflexive ancestor partial order, the sibling order
    (ordered mode only; distinct children of a common parent, irreflexive),
    and one unary predicate per label.  The label predicates cover the whole
    alphabet when one is given, else just the labels occurring in t.
    """
    if mode not in ("ordered", "unordered"):
        raise PreconditionError(f"unknown mode {mode!r}")
    if alphabet is not None:
        vocab = alphabet.vocabulary(mode)
        missing = {t.label(a) for a in range(len(t))} - set(alphabet.labels)
        if missing:
            raise PreconditionError(f"labels {sorted(missing)} not in alphabet")
    else:
        rels = [(ANCESTOR_REL, 2)]
        if mode == "ordered":
            rels.append((SIBLING_REL, 2))
        rels.extend(
            (label_predicate(s), 1) for s in sorted(set(t.labels))
        )
        vocab = Vocabulary(rels)
    tables = {name: set() for name in vocab.names}
    for a in range(len(t)):
        tables[label_predicate(t.label(a))].add((a,))
        x = a
        while x >= 0:
            tables[ANCESTOR_REL].add((x, a))
            x = t.parent(x)
    if mode == "ordered":
        sib = tables[SIBLING_REL]
        for a in range(len(t)):
            ch = t.children(a)
            for i in range(len(ch)):
                for j in range(i + 1, len(ch)):
                    sib.add((ch[i], ch[j]))
    struct = Structure(vocab, range(len(t)), tables)
    provenance = {a: t.uid(a) for a in range(len(t))}
    return struct, provenance


def check_representation_feasible(t, alphabet):
    """Labeling/ranking violations of t for the given alphabet."""
    violations = []
    for a in range(len(t)):
        lab = t.label(a)
        if t.is_leaf(a):
            if lab not in alphabet.leaf:
                violations.append(f"node {a}: leaf label {lab!r} not in leaf alphabet")
        else:
            if lab not in alphabet.internal:
                violations.append(
                    f"node {a}: internal label {lab!r} not in internal alphabet"
                )
            elif lab in alphabet.ranked and len(t.children(a)) != alphabet.arity(lab):
                violations.append(
                    f"node {a}: ranked label {lab!r} has {len(t.children(a))} "
                    f"children, expected {alphabet.arity(lab)}"
                )
    return violations


def closure_variants(t, alphabet, include_replacements=True):
    """Generate trees obtained by one closure operation (rooted subtree,
    removal under an unranked parent, replacement by a descendant subtree).

    Each yielded tree should itself be representation-feasible; callers
    revalidate.  Removals that would break the labeling discipline are not
    closure instances and are skipped.
    """
    for a in range(1, len(t)):
        yield ("subtree", a), subtree_at(t, a)
    for b in range(1, len(t)):
        p = t.parent(b)
        if t.label(p) in alphabet.ranked:
            continue
        if len(t.children(p)) == 1 and t.label(p) not in alphabet.leaf:
            continue
        yield ("remove", b), remove_subtree(t, b, alphabet)
    if include_replacements:
        for a in range(1, len(t)):
            if t.is_leaf(a):
                continue
            for b in t.subtree_ids(a):
                if b == a:
                    continue
                yield ("replace", a, b), replace(t, a, subtree_at(t, b))
