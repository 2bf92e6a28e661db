"""Structured place labels, transitions, nets, systems, and the firing rule."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

from .bag import Bag

Pair = tuple[str, int]

_TAG_RE = re.compile(r"[A-Za-z0-9_-]+\Z")


class NotEnabledError(RuntimeError):
    """Firing attempted without concession."""

    def __init__(self, transition):
        super().__init__(f"transition not enabled: {transition}")
        self.transition = transition


def _checked_pair(pair) -> Pair:
    tag, index = pair
    if not isinstance(tag, str) or not _TAG_RE.match(tag):
        raise ValueError(f"invalid label tag {tag!r}")
    if not isinstance(index, int) or isinstance(index, bool) or index < 0:
        raise ValueError(f"invalid label index {index!r}")
    return (tag, index)


class Place:
    """A net place, identified solely by its hierarchical label.

    The label is a non-empty sequence of (tag, index) pairs read left to
    right from innermost to outermost; the last pair is the root of the
    component hierarchy.  Instances are interned, one per label.
    """

    __slots__ = ("pairs", "_str", "_hash", "_memb")

    _pool: dict = {}

    def __new__(cls, pairs: Iterable[Pair]) -> "Place":
        pairs = tuple(pairs)
        cached = cls._pool.get(pairs)
        if cached is not None:
            return cached
        if not pairs:
            raise ValueError("place label must be non-empty")
        pairs = tuple(_checked_pair(p) for p in pairs)
        self = object.__new__(cls)
        self.pairs = pairs
        self._str = None
        self._hash = hash(pairs)
        self._memb = None
        return cls._pool.setdefault(pairs, self)

    @property
    def memberships(self) -> tuple:
        """Per label position: (suffix pairs, tag, index, position)."""
        if self._memb is None:
            prs = self.pairs
            self._memb = tuple(
                (prs[q + 1:], prs[q][0], prs[q][1], q) for q in range(len(prs))
            )
        return self._memb

    def tags(self) -> tuple[str, ...]:
        return tuple(t for t, _ in self.pairs)

    def extended(self, pair: Pair) -> "Place":
        """New place with ``pair`` appended as the outermost hierarchy level."""
        return Place(self.pairs + (_checked_pair(pair),))

    def __lt__(self, other: "Place") -> bool:
        return self.pairs < other.pairs

    def __le__(self, other: "Place") -> bool:
        return self.pairs <= other.pairs

    def __eq__(self, other) -> bool:
        return self is other or (isinstance(other, Place) and self.pairs == other.pairs)

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        if self._str is None:
            body = " ".join(f'< "{t}" ; {i} >' for t, i in self.pairs)
            self._str = f"p({body})"
        return self._str

    def __repr__(self) -> str:
        return str(self)


def place(*pairs: Pair) -> Place:
    """Convenience constructor: ``place(("w", 0), ("L", 1))``."""
    return Place(pairs)


@dataclass(frozen=True, order=True)
class TransitionTag:
    """Transition annotation: tag text, priority, and a positive rate.

    The rate is an exponential firing rate at priority 0 and a
    conflict-resolution weight at higher priorities.
    """

    tag: str
    priority: int = 0
    rate: float = 1.0

    def __post_init__(self):
        if not isinstance(self.tag, str) or not _TAG_RE.match(self.tag):
            raise ValueError(f"invalid transition tag {self.tag!r}")
        if not isinstance(self.priority, int) or self.priority < 0:
            raise ValueError(f"invalid priority {self.priority!r}")
        object.__setattr__(self, "rate", float(self.rate))
        if not self.rate > 0:
            raise ValueError(f"rate must be positive, got {self.rate!r}")

    def render(self) -> str:
        return f'<< "{self.tag}", {self.priority}, {self.rate!r} >>'

    def __str__(self) -> str:
        return self.render()


class Transition:
    """A transition given by its input/output/inhibitor incidence bags."""

    __slots__ = ("input", "output", "inhibitor", "tag", "_key", "_str", "_hash", "_places")

    def __init__(self, input: Bag, output: Bag, inhibitor: Bag = Bag(), tag: TransitionTag = None):
        if tag is None:
            raise ValueError("transition needs a tag")
        for bag in (input, output, inhibitor):
            for elem in bag.elements():
                if not isinstance(elem, Place):
                    raise TypeError(f"incidence bags must contain places, got {elem!r}")
        self.input = input
        self.output = output
        self.inhibitor = inhibitor
        self.tag = tag
        self._key = None
        self._str = None
        self._hash = None
        self._places = None

    @property
    def sort_key(self) -> tuple:
        if self._key is None:
            t = self.tag
            self._key = (
                (t.tag, t.priority, t.rate),
                self.input.sort_key,
                self.output.sort_key,
                self.inhibitor.sort_key,
            )
        return self._key

    @property
    def places(self) -> tuple[Place, ...]:
        if self._places is None:
            seen = set(self.input.elements())
            seen.update(self.output.elements())
            seen.update(self.inhibitor.elements())
            self._places = tuple(sorted(seen))
        return self._places

    def __lt__(self, other: "Transition") -> bool:
        return self.sort_key < other.sort_key

    def __eq__(self, other) -> bool:
        return isinstance(other, Transition) and self.sort_key == other.sort_key

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.sort_key)
        return self._hash

    def render(self) -> str:
        if self._str is None:
            self._str = (
                f"[{self.input.render()}, {self.output.render()}, "
                f"{self.inhibitor.render()}] |-> {self.tag.render()}"
            )
        return self._str

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return self.render()


class Net:
    """A finite multiset of transitions; the places are implicit.

    Duplicate transitions are kept and each instance contributes separately
    to enabling and rate aggregation.  Iteration order is sorted, hence
    deterministic.
    """

    __slots__ = ("transitions", "_places", "_place_set", "_str", "_hash", "_groups", "_cache")

    def __init__(self, transitions: Iterable[Transition] = ()):
        self.transitions = tuple(sorted(transitions, key=lambda t: t.sort_key))
        self._places = None
        self._place_set = None
        self._str = None
        self._hash = None
        self._groups = None
        self._cache = {}

    def places(self) -> tuple[Place, ...]:
        if self._places is None:
            seen = set()
            for t in self.transitions:
                seen.update(t.places)
            self._places = tuple(sorted(seen))
        return self._places

    @property
    def place_set(self) -> frozenset:
        if self._place_set is None:
            self._place_set = frozenset(self.places())
        return self._place_set

    def tags(self) -> frozenset:
        return frozenset(t.tag for t in self.transitions)

    def __iter__(self) -> Iterator[Transition]:
        return iter(self.transitions)

    def __len__(self) -> int:
        return len(self.transitions)

    def __eq__(self, other) -> bool:
        return isinstance(other, Net) and self.transitions == other.transitions

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.transitions)
        return self._hash

    def render(self) -> str:
        if self._str is None:
            self._str = " ; ".join(t.render() for t in self.transitions) or "emptyN"
        return self._str

    def pretty(self) -> str:
        """Multi-line form, one transition per line."""
        if not self.transitions:
            return "emptyN"
        return " ;\n".join(t.render() for t in self.transitions)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Net<{len(self.transitions)} transitions>"


class System:
    """A net together with a marking of its places."""

    __slots__ = ("net", "marking", "_hash")

    def __init__(self, net: Net, marking: Bag = Bag()):
        stale = [pl for pl in marking.elements() if pl not in net.place_set]
        if stale:
            raise ValueError(f"marking uses places absent from the net: {stale[:3]}")
        self.net = net
        self.marking = marking
        self._hash = None

    @property
    def key(self) -> tuple[str, str]:
        return (self.net.render(), self.marking.render())

    def canonical(self) -> str:
        """Single-line rendering; the basis of state identity and ordering."""
        return self.net.render() + "  " + self.marking.render()

    def pretty(self) -> str:
        """Net, blank line, marking."""
        return self.net.pretty() + "\n\n" + self.marking.render()

    def __eq__(self, other) -> bool:
        return isinstance(other, System) and self.net == other.net and self.marking == other.marking

    def __lt__(self, other: "System") -> bool:
        return self.key < other.key

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.net, self.marking))
        return self._hash

    def __str__(self) -> str:
        return self.canonical()

    def __repr__(self) -> str:
        return f"System<{len(self.net)} transitions, {self.marking.size} tokens>"


def has_concession(t: Transition, marking: Bag) -> bool:
    """Topological enabling: inputs covered, every inhibitor bound respected."""
    for pl, need in t.input.items():
        if marking[pl] < need:
            return False
    for pl, bound in t.inhibitor.items():
        if marking[pl] >= bound:
            return False
    return True


def enabled_instances(system: System) -> tuple[Transition, ...]:
    """All transition instances enabled in the system, priority rule applied.

    Transitions with concession at less than the maximal concession priority
    are preempted.
    """
    holders = [t for t in system.net if has_concession(t, system.marking)]
    if not holders:
        return ()
    top = max(t.tag.priority for t in holders)
    return tuple(t for t in holders if t.tag.priority == top)


def enabled(t: Transition, system: System) -> bool:
    """Priority-aware enabling of one transition of the system's net."""
    if not has_concession(t, system.marking):
        return False
    return not any(
        u.tag.priority > t.tag.priority and has_concession(u, system.marking)
        for u in system.net
    )


def enab_set(system: System) -> tuple[Transition, ...]:
    """The set of enabled transitions, deduplicated and sorted."""
    out = []
    seen = set()
    for t in enabled_instances(system):
        if t not in seen:
            seen.add(t)
            out.append(t)
    return tuple(out)


def fire(t: Transition, marking: Bag) -> Bag:
    """Fire ``t``: marking - input + output.  Requires concession."""
    if not has_concession(t, marking):
        raise NotEnabledError(t)
    return marking - t.input + t.output


def dead(net: Net, marking: Bag) -> bool:
    """True iff no transition of ``net`` has concession in ``marking``."""
    return not any(has_concession(t, marking) for t in net.transitions)
