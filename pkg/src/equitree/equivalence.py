"""Rank-m equivalence of finite structures, for FO and MSO.

Two routes are provided and cross-validated:

* `mtype` assigns a canonical class id by recursively computing nested type
  objects: at depth 0 the atomic type of the distinguished points/sets, at
  depth k+1 the set of depth-k types over all one-point extensions (plus,
  for MSO, all one-set extensions).  Types are hash-consed in a registry, so
  structural equality of depth-m types is id equality, and two structures
  get the same class id exactly when they agree on all rank-m sentences.

* `ef_game_decide` plays the m-round game (point moves, plus set moves for
  MSO) by exhaustive alternating search with memoization.  It is the
  independent validation oracle and is only feasible on small instances.

Class ids are dense integers, stable within a process run, assigned in
first-encounter order.  The registry insertion behaves atomically, so
results are independent of thread interleaving (codes, not ids, define
equality; ids are process-local).
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field

from .budgets import DEFAULT_BUDGETS
from .errors import PreconditionError, VocabularyMismatch
from .logic import FO, MSO
from .structures import PointedStructure, Structure


class ClassRegistry:
    """Hash-consing store for nested type codes plus the class-id tables.

    The per-(logic, m) realized-class count is the empirical stand-in for
    the (non-elementary, never materialized) a-priori bound on the number
    of equivalence classes.
    """

    def __init__(self):
        self._codes = {}
        self._class_ids = {}
        self._counts = {}
        self._lock = threading.Lock()

    def intern(self, key):
        with self._lock:
            code = self._codes.get(key)
            if code is None:
                code = len(self._codes)
                self._codes[key] = code
            return code

    def class_id(self, logic, m, code):
        key = (logic, m, code)
        with self._lock:
            cid = self._class_ids.get(key)
            if cid is None:
                cid = self._counts.get((logic, m), 0)
                self._class_ids[key] = cid
                self._counts[(logic, m)] = cid + 1
            return cid

    def realized_count(self, logic, m):
        return self._counts.get((logic, m), 0)

    def stats(self):
        """Realized class counts per (logic, m), sorted."""
        return sorted(self._counts.items())


GLOBAL_REGISTRY = ClassRegistry()


def _as_pointed(x):
    if isinstance(x, PointedStructure):
        return x
    if isinstance(x, Structure):
        return PointedStructure(x)
    raise PreconditionError(f"expected a structure, got {type(x).__name__}")


def _base_atomic_key(struct, points, sets):
    facts = []
    idx = range(len(points))
    for name, arity in struct.vocab.relations:
        table = struct.tables[name]
        for combo in itertools.product(idx, repeat=arity):
            if tuple(points[i] for i in combo) in table:
                facts.append(("r", name, combo))
    for i in idx:
        for j in idx:
            if i < j and points[i] == points[j]:
                facts.append(("=", i, j))
        for s, subset in enumerate(sets):
            if points[i] in subset:
                facts.append(("m", i, s))
    return ("a", len(points), len(sets), tuple(sorted(facts)))


def _point_delta(struct, points, sets, new):
    """Atomic facts introduced by appending `new` to the point tuple."""
    k = len(points)
    extended = points + (new,)
    facts = []
    for name, arity in struct.vocab.relations:
        table = struct.tables[name]
        if arity == 1:
            if (new,) in table:
                facts.append(("r", name, (k,)))
        else:
            for combo in itertools.product(range(k + 1), repeat=arity):
                if k in combo and tuple(extended[i] for i in combo) in table:
                    facts.append(("r", name, combo))
    for i in range(k):
        if points[i] == new:
            facts.append(("=", i, k))
    for s, subset in enumerate(sets):
        if new in subset:
            facts.append(("m", k, s))
    return tuple(sorted(facts))


def _set_delta(points, newset):
    return tuple(i for i, p in enumerate(points) if p in newset)


def _subsets(elements):
    for r in range(len(elements) + 1):
        yield from (frozenset(c) for c in itertools.combinations(elements, r))


def mtype(x, m, logic=FO, budgets=DEFAULT_BUDGETS, registry=GLOBAL_REGISTRY):
    """Canonical class id of the rank-m type of a (pointed) structure.

    Deterministic; mtype(A, m) == mtype(B, m) iff A and B agree on all
    rank-m sentences of the logic (over the shared vocabulary).
    """
    pointed = _as_pointed(x)
    struct = pointed.base
    budgets.check_type_cost(struct.size(), m, logic)
    elements = struct.elements
    intern = registry.intern

    def go(points, sets, atom_code, k):
        if k == 0:
            return atom_code
        point_kids = set()
        for a in elements:
            delta = _point_delta(struct, points, sets, a)
            child = intern(("ap", atom_code, delta))
            point_kids.add(go(points + (a,), sets, child, k - 1))
        if logic == FO:
            return intern(("fo", tuple(sorted(point_kids))))
        set_kids = set()
        for subset in _subsets(elements):
            child = intern(("as", atom_code, _set_delta(points, subset)))
            set_kids.add(go(points, sets + (subset,), child, k - 1))
        return intern(("mso", tuple(sorted(point_kids)), tuple(sorted(set_kids))))

    base = intern(_base_atomic_key(struct, pointed.points, pointed.sets))
    code = go(pointed.points, pointed.sets, base, m)
    return registry.class_id(logic, m, code)


def equivalent(a, b, m, logic=FO, budgets=DEFAULT_BUDGETS, registry=GLOBAL_REGISTRY):
    """Whether a and b agree on every rank-m sentence of the logic."""
    pa, pb = _as_pointed(a), _as_pointed(b)
    if pa.base.vocab != pb.base.vocab:
        raise VocabularyMismatch(
            "equivalence requires a shared vocabulary; align vocabularies explicitly"
        )
    return mtype(pa, m, logic, budgets, registry) == mtype(pb, m, logic, budgets, registry)


@dataclass
class RealizedClasses:
    """Partition of a list of structures into rank-m equivalence classes."""

    groups: dict = field(default_factory=dict)

    @property
    def count(self):
        return len(self.groups)

    def items(self):
        return sorted(self.groups.items())


def realized_classes(structs, m, logic=FO, budgets=DEFAULT_BUDGETS, registry=GLOBAL_REGISTRY):
    out = RealizedClasses()
    for i, s in enumerate(structs):
        cid = mtype(s, m, logic, budgets, registry)
        out.groups.setdefault(cid, []).append(i)
    return out


# ---------------------------------------------------------------------------
# game oracle


def _partial_iso_ok(sa, sb, pts_a, pts_b, sets_a, sets_b):
    """Whether the paired points/sets form a partial isomorphism."""
    n = len(pts_a)
    for i in range(n):
        for j in range(n):
            if (pts_a[i] == pts_a[j]) != (pts_b[i] == pts_b[j]):
                return False
    for name, arity in sa.vocab.relations:
        ta, tb = sa.tables[name], sb.tables[name]
        for combo in itertools.product(range(n), repeat=arity):
            in_a = tuple(pts_a[i] for i in combo) in ta
            in_b = tuple(pts_b[i] for i in combo) in tb
            if in_a != in_b:
                return False
    for sa_set, sb_set in zip(sets_a, sets_b):
        for i in range(n):
            if (pts_a[i] in sa_set) != (pts_b[i] in sb_set):
                return False
    return True


def ef_game_decide(a, b, m, logic=FO, budgets=DEFAULT_BUDGETS):
    """True iff the duplicator wins the m-round game between a and b.

    Decided by exhaustive alternating search with memoization on the
    position (pairing of chosen points and sets).  Pointed inputs start the
    game with their distinguished points/sets already on the board.
    """
    pa, pb = _as_pointed(a), _as_pointed(b)
    sa, sb = pa.base, pb.base
    if sa.vocab != sb.vocab:
        raise VocabularyMismatch("game oracle requires a shared vocabulary")
    if len(pa.points) != len(pb.points) or len(pa.sets) != len(pb.sets):
        raise PreconditionError("pointed inputs must distinguish equally many items")
    budgets.check_game(sa.size(), sb.size(), m, logic)

    elems_a, elems_b = sa.elements, sb.elements
    memo = {}

    def position_key(pts_a, pts_b, sets_a, sets_b, k):
        point_pairs = frozenset(zip(pts_a, pts_b))
        set_pairs = frozenset(
            (tuple(sorted(x)), tuple(sorted(y))) for x, y in zip(sets_a, sets_b)
        )
        return (point_pairs, set_pairs, k)

    def wins(pts_a, pts_b, sets_a, sets_b, k):
        key = position_key(pts_a, pts_b, sets_a, sets_b, k)
        cached = memo.get(key)
        if cached is not None:
            return cached
        result = True
        if k > 0:
            result = _all_spoiler_moves_answered(pts_a, pts_b, sets_a, sets_b, k)
        memo[key] = result
        return result

    def _all_spoiler_moves_answered(pts_a, pts_b, sets_a, sets_b, k):
        # Spoiler point moves in a, answered in b (and symmetrically).
        for src_pts, dst_pts, src_elems, dst_elems, flip in (
            (pts_a, pts_b, elems_a, elems_b, False),
            (pts_b, pts_a, elems_b, elems_a, True),
        ):
            for choice in src_elems:
                answered = False
                for reply in dst_elems:
                    na = src_pts + (choice,) if not flip else dst_pts + (reply,)
                    nb = dst_pts + (reply,) if not flip else src_pts + (choice,)
                    if not _partial_iso_ok(sa, sb, na, nb, sets_a, sets_b):
                        continue
                    if wins(na, nb, sets_a, sets_b, k - 1):
                        answered = True
                        break
                if not answered:
                    return False
        if logic == MSO:
            for flip in (False, True):
                src_elems = elems_b if flip else elems_a
                dst_elems = elems_a if flip else elems_b
                for choice in _subsets(src_elems):
                    answered = False
                    for reply in _subsets(dst_elems):
                        nsa = sets_a + ((reply if flip else choice),)
                        nsb = sets_b + ((choice if flip else reply),)
                        if not _partial_iso_ok(sa, sb, pts_a, pts_b, nsa, nsb):
                            continue
                        if wins(pts_a, pts_b, nsa, nsb, k - 1):
                            answered = True
                            break
                    if not answered:
                        return False
        return True

    if not _partial_iso_ok(sa, sb, pa.points, pb.points, pa.sets, pb.sets):
        return False
    return wins(pa.points, pb.points, pa.sets, pb.sets, m)
