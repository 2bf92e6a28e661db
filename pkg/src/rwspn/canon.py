"""Canonical normal form of symmetrically labeled systems.

Places whose labels share a suffix and carry the same tag at the position
before it form a sibling group; any permutation of a group's indices that
is applied consistently to net and marking maps the system to an equivalent
one.  ``normalize`` picks the representative whose rendering is minimal in
byte order and re-densifies indices so that every group spans 0..k-1.
"""

from __future__ import annotations

import itertools
import math
import random
from functools import cmp_to_key

from .bag import Bag
from .net import Net, Pair, Place, System, Transition

GroupKey = tuple[tuple[Pair, ...], str]  # (label suffix, tag)
Assignment = dict[GroupKey, dict[int, int]]

# Up to this many admissible assignments, the normal form is found by exact
# enumeration; above it, a linear-time content sort picks the representative.
# The sort provably yields one fixed representative per class, but on systems
# whose rendering interleaves sibling groups of distinct same-depth contexts
# it may not be the byte-order minimum.
REFINE_BOUND = 16


class CanonBoundError(RuntimeError):
    """Brute-force enumeration would exceed the configured bound."""

    def __init__(self, total: int, bound: int):
        super().__init__(f"{total} sibling permutations exceed bound {bound}")
        self.total = total
        self.bound = bound


def sibling_groups(net: Net) -> tuple[tuple[GroupKey, tuple[int, ...]], ...]:
    """Sibling groups of a net, deepest (longest suffix) first.

    Each entry is ((suffix, tag), indices); indices are exactly those that
    occur in the net for that context.
    """
    if net._groups is None:
        acc: dict[GroupKey, set[int]] = {}
        for pl in net.places():
            for suffix, tag, idx, _q in pl.memberships:
                acc.setdefault((suffix, tag), set()).add(idx)
        ordered = sorted(acc.items(), key=lambda kv: (-len(kv[0][0]), kv[0]))
        net._groups = tuple((key, tuple(sorted(idx))) for key, idx in ordered)
    return net._groups


def _rewrite_pairs(pairs: tuple[Pair, ...], chosen: Assignment) -> tuple[Pair, ...]:
    out = []
    n = len(pairs)
    for q in range(n):
        tag, idx = pairs[q]
        mapping = chosen.get((pairs[q + 1:], tag))
        out.append((tag, mapping[idx]) if mapping is not None else (tag, idx))
    return tuple(out)


def _rewrite_place(pl: Place, chosen: Assignment) -> Place:
    return Place(_rewrite_pairs(pl.pairs, chosen))


def _rewrite_bag(bag: Bag, memo: dict, chosen: Assignment) -> Bag:
    out = {}
    for pl, c in bag.items():
        npl = memo.get(pl)
        if npl is None:
            npl = _rewrite_place(pl, chosen)
            memo[pl] = npl
        out[npl] = out.get(npl, 0) + c
    return Bag(out)


def _count_cmp(a: int, b: int) -> int:
    # positive counts compare as their decimal strings, matching byte order
    # of the rendered "count . place" entries
    if a == b:
        return 0
    sa, sb = str(a), str(b)
    if sa == sb:
        return 0
    return -1 if sa < sb else 1


def _key_cmp(ka: list, kb: list) -> int:
    """Compare sibling keys: per-label counts in label order, present first."""
    ia, ib = 0, 0
    while ia < len(ka) and ib < len(kb):
        la, ca = ka[ia]
        lb, cb = kb[ib]
        if la == lb:
            c = _count_cmp(ca, cb)
            if c:
                return c
            ia += 1
            ib += 1
        elif la < lb:
            return -1  # a marked at a label where b is empty
        else:
            return 1
    if ia < len(ka):
        return -1
    if ib < len(kb):
        return 1
    return 0


def _choose_assignment(net: Net, marking: Bag) -> Assignment:
    """Pick the index relabeling that minimizes the marking rendering.

    Groups are processed innermost first so that outer-level comparisons see
    already-normalized inner content.  Within a group, siblings are sorted
    by their per-inner-label token counts and reassigned indices 0..k-1;
    ties keep their relative order (tied siblings are interchangeable).
    """
    chosen: Assignment = {}
    entries = marking.items()
    for key, indices in sibling_groups(net):
        if len(indices) == 1 and indices[0] == 0:
            continue
        sib: dict[int, list] = {i: [] for i in indices}
        rewritten: dict[Place, tuple[Pair, ...]] = {}
        for pl, cnt in entries:
            for suffix, tag, idx, q in pl.memberships:
                if (suffix, tag) == key:
                    cur = rewritten.get(pl)
                    if cur is None:
                        cur = _rewrite_pairs(pl.pairs, chosen)
                        rewritten[pl] = cur
                    sib[idx].append((cur[:q] + ((tag, -1),), cnt))
                    break
        for i in indices:
            sib[i].sort()
        order = sorted(indices, key=cmp_to_key(lambda a, b: _key_cmp(sib[a], sib[b])))
        mapping = {old: new for new, old in enumerate(order)}
        if any(old != new for old, new in mapping.items()):
            chosen[key] = mapping
    return chosen


def _assignment_count(net: Net, bound: int) -> int:
    total = 1
    for _key, indices in sibling_groups(net):
        total *= math.factorial(len(indices))
        if total > bound:
            return total
    return total


def _dense_assignments(net: Net):
    groups = sibling_groups(net)
    keys = [key for key, _ in groups]
    index_sets = [indices for _, indices in groups]
    for combo in itertools.product(*(itertools.permutations(range(len(ix))) for ix in index_sets)):
        yield {key: dict(zip(ix, perm)) for key, ix, perm in zip(keys, index_sets, combo)}


def normalize(system: System) -> System:
    """The canonical representative of the system's automorphism class.

    Idempotent and permutation-invariant; indices of every sibling group span
    0..k-1 afterwards.  Up to ``REFINE_BOUND`` admissible assignments the
    representative is the exact byte-order minimum (enumerated); larger
    systems use the content-sorted representative.  On inputs without
    symmetric labeling the result is still deterministic but may not be
    class-minimal.
    """
    if _assignment_count(system.net, REFINE_BOUND) <= REFINE_BOUND:
        best = None
        for assignment in _dense_assignments(system.net):
            cand = apply_assignment(system, assignment)
            if best is None or cand.key < best.key:
                best = cand
        return best
    chosen = _choose_assignment(system.net, system.marking)
    if not chosen:
        return system
    memo: dict = {}
    marking = _rewrite_bag(system.marking, memo, chosen)
    net = Net(
        Transition(
            _rewrite_bag(t.input, memo, chosen),
            _rewrite_bag(t.output, memo, chosen),
            _rewrite_bag(t.inhibitor, memo, chosen),
            t.tag,
        )
        for t in system.net
    )
    return System(net, marking)


def normalize_marking(net: Net, marking: Bag) -> Bag:
    """Normal form of a marking over a net already in normal form.

    The net's self-automorphisms are the permutation candidates, so the net
    subterm is left untouched.
    """
    if _assignment_count(net, REFINE_BOUND) <= REFINE_BOUND:
        # the net maps onto itself under every admissible assignment, so the
        # smallest marking rendering identifies the smallest system
        best = None
        for assignment in _dense_assignments(net):
            cand = _rewrite_bag(marking, {}, assignment)
            if best is None or cand.render() < best.render():
                best = cand
        return best
    chosen = _choose_assignment(net, marking)
    if not chosen:
        return marking
    return _rewrite_bag(marking, {}, chosen)


def apply_assignment(system: System, assignment: Assignment) -> System:
    """Relabel every place through per-group index maps (wreath semantics:
    lookups use each label's original suffix)."""
    if not assignment:
        return system
    memo: dict = {}
    marking = _rewrite_bag(system.marking, memo, assignment)
    net = Net(
        Transition(
            _rewrite_bag(t.input, memo, assignment),
            _rewrite_bag(t.output, memo, assignment),
            _rewrite_bag(t.inhibitor, memo, assignment),
            t.tag,
        )
        for t in system.net
    )
    return System(net, marking)


def brute_force_normal(system: System, bound: int = 10**6) -> System:
    """Testing oracle: enumerate every admissible index assignment.

    For each sibling group all bijections of its index set onto 0..k-1 are
    tried (covering both permutation and re-densification); the systemOrder
    minimum is returned.
    """
    total = _assignment_count(system.net, bound)
    if total > bound:
        raise CanonBoundError(total, bound)
    best = None
    for assignment in _dense_assignments(system.net):
        cand = apply_assignment(system, assignment)
        if best is None or cand.key < best.key:
            best = cand
    return best


def random_admissible_assignment(system: System, rng: random.Random) -> Assignment:
    """A random permutation of each sibling group's existing indices."""
    out: Assignment = {}
    for key, indices in sibling_groups(system.net):
        if len(indices) > 1:
            shuffled = list(indices)
            rng.shuffle(shuffled)
            out[key] = dict(zip(indices, shuffled))
    return out


def system_order(a: System, b: System) -> int:
    """Total order over systems: byte order of the canonical renderings."""
    ka, kb = a.key, b.key
    if ka == kb:
        return 0
    return -1 if ka < kb else 1
