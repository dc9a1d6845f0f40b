"""Canonical coset forms and orbit enumeration for Z |x F acting on the
coset space by the normal-closure subgroup at a given level.

A coset is written (level, tail) with every tail index strictly above the
level; this form is unique because the quotient of F by the normal closure
of {x_i : i <= level} is free on the surviving generators.  Orbit balls
are deterministic breadth-first truncations of the action graph.
"""

from __future__ import annotations

import json
from array import array
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import ResourceLimitError
from .freegroup import (
    GElement,
    IDENTITY,
    Word,
    format_gelement,
    format_word,
    g_mul,
    retract,
)

Key = Tuple[int, Tuple[Tuple[int, int], ...]]


class Coset:
    """A point of the coset space: level n plus a reduced tail word whose
    letter indices all exceed n.  Immutable and hashable; equality is exact.
    """

    __slots__ = ("level", "tail", "_hash")

    def __init__(self, level: int, tail: Word):
        if not isinstance(tail, Word):
            raise TypeError(f"tail must be a Word, got {type(tail).__name__}")
        level = int(level)
        for (i, _) in tail.letters:
            if i <= level:
                raise ValueError(
                    f"tail letter x{i} not above level {level}; "
                    "use normal_form to canonicalize"
                )
        self.level = level
        self.tail = tail
        self._hash = hash((level, tail))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Coset)
            and self.level == other.level
            and self.tail == other.tail
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Coset({self.level}, {format_word(self.tail)!r})"

    def key(self) -> Key:
        return (self.level, tuple(self.tail.letters))


def normal_form(a: GElement) -> Coset:
    """Canonical coset of the element a: (a.shift, retract(a.word, a.shift)).

    Two elements map to the same Coset iff they lie in the same left coset
    of the level-0 normal-closure subgroup.
    """
    return Coset(a.shift, retract(a.word, a.shift))


def act(g: GElement, c: Coset) -> Coset:
    """Left action on cosets: the canonical form of g * (c.level, c.tail)."""
    return normal_form(g_mul(g, GElement(c.level, c.tail)))


def _act_key(gshift: int, gletters, level: int, tail) -> Key:
    """act() on raw (level, letters) keys, fused for the BFS inner loop.

    The new level is level + gshift.  Retraction is a homomorphism, so the
    generator word can be filtered letterwise before reduction; the shifted
    tail already lies entirely above the new level.
    """
    lvl = level + gshift
    out: List[Tuple[int, int]] = []
    for (i, e) in gletters:
        if i <= lvl:
            continue
        if out and out[-1][0] == i and out[-1][1] == -e:
            out.pop()
        else:
            out.append((i, e))
    for (i, e) in tail:
        i += gshift
        if out and out[-1][0] == i and out[-1][1] == -e:
            out.pop()
        else:
            out.append((i, e))
    return (lvl, tuple(out))


class OrbitBall:
    """Breadth-first truncation of the orbit of `base` under `generators`.

    Node 0 is the base coset; nodes appear in deterministic breadth-first
    order (generators applied in the given order), so nodes within distance
    r form a prefix of the node list for every r <= radius.  Images landing
    outside the ball are boundary marks, stored as -1.
    """

    def __init__(self, base, generators, radius, keys, index, distances, images):
        self.base = base
        self.generators = tuple(generators)
        self.radius = radius
        self._keys = keys
        self._index = index
        self.distances = distances
        self.gen_images = images

    def __len__(self) -> int:
        return len(self._keys)

    @property
    def node_count(self) -> int:
        return len(self._keys)

    def node(self, i: int) -> Coset:
        level, tail = self._keys[i]
        return Coset(level, Word(tail))

    def distance(self, i: int) -> int:
        return self.distances[i]

    def image(self, i: int, gen: int) -> int:
        """Index of generators[gen] applied to node i, or -1 if out of ball."""
        return self.gen_images[gen][i]

    def find(self, c: Coset) -> Optional[int]:
        return self._index.get(c.key())

    def prefix_size(self, r: int) -> int:
        """Number of nodes within distance r (a prefix, by BFS order)."""
        if r >= self.radius:
            return len(self._keys)
        lo, hi = 0, len(self._keys)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.distances[mid] <= r:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def edges(self) -> Iterator[Tuple[int, int, int]]:
        """All in-ball edges as (source node, generator index, target node)."""
        for gi, img in enumerate(self.gen_images):
            for i, j in enumerate(img):
                if j >= 0:
                    yield (i, gi, j)

    def boundary(self) -> Iterator[Tuple[int, int]]:
        """(node, generator index) pairs whose image lies outside the ball."""
        for gi, img in enumerate(self.gen_images):
            for i, j in enumerate(img):
                if j < 0:
                    yield (i, gi)

    def _node_rows(self) -> Iterator[Tuple[int, int, str]]:
        for i, (level, tail) in enumerate(self._keys):
            yield (i, level, format_word(Word(tail)))

    def to_text(self) -> str:
        """Line-oriented export: node table `idx level tail`, then edge list
        `src gen dst`, then boundary marks `src gen`."""
        lines = ["# nodes: idx level tail"]
        lines.extend(f"{i} {level} {tail}" for (i, level, tail) in self._node_rows())
        lines.append("# edges: src gen dst")
        lines.extend(f"{s} {g} {d}" for (s, g, d) in self.edges())
        lines.append("# boundary: src gen")
        lines.extend(f"{s} {g}" for (s, g) in self.boundary())
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "base": format_gelement(GElement(self.base.level, self.base.tail)),
            "generators": [format_gelement(g) for g in self.generators],
            "radius": self.radius,
            "nodes": [[i, level, tail] for (i, level, tail) in self._node_rows()],
            "edges": [list(e) for e in self.edges()],
            "boundary": [list(b) for b in self.boundary()],
        }
        return json.dumps(doc, indent=2) + "\n"


def orbit_ball(
    base: Coset,
    gens: Sequence[GElement],
    radius: int,
    cap: int = 2_000_000,
) -> OrbitBall:
    """Deterministic breadth-first ball of the orbit of base under gens.

    Raises ResourceLimitError if the node count would exceed cap.
    """
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    gens = tuple(gens)
    if not gens:
        raise ValueError("generator sequence must be nonempty")
    for g in gens:
        if not isinstance(g, GElement):
            raise TypeError(f"generators must be GElements, got {type(g).__name__}")
    if cap < 1:
        raise ValueError(f"node cap must be positive, got {cap}")

    gdata = [(g.shift, tuple(g.word.letters)) for g in gens]
    base_key = base.key()
    keys: List[Key] = [base_key]
    index: Dict[Key, int] = {base_key: 0}
    distances = array("i", [0])
    images = [array("i") for _ in gens]

    i = 0
    while i < len(keys):
        level, tail = keys[i]
        di = distances[i]
        grow = di < radius
        for gi, (gshift, gletters) in enumerate(gdata):
            tkey = _act_key(gshift, gletters, level, tail)
            j = index.get(tkey, -1)
            if j < 0 and grow:
                j = len(keys)
                if j >= cap:
                    raise ResourceLimitError(
                        f"orbit ball exceeded node cap {cap} at radius {di + 1}"
                    )
                index[tkey] = j
                keys.append(tkey)
                distances.append(di + 1)
            images[gi].append(j)
        i += 1

    return OrbitBall(base, gens, radius, keys, index, distances, images)


def h_orbit_partition(
    window: Iterable[int],
    gens: Sequence[GElement],
    radius: int,
    cap: int = 2_000_000,
) -> Dict[int, OrbitBall]:
    """Orbit balls of Coset(n, e) for each level n in window, under
    generators of shift 0.

    Shift-0 elements never change a coset's level, so each ball stays inside
    its own level block; this is verified on every node.  Generators with
    nonzero shift are rejected.
    """
    gens = tuple(gens)
    for g in gens:
        if g.shift != 0:
            raise ValueError(
                f"generator {format_gelement(g)} has nonzero shift; "
                "the level partition needs shift-0 generators"
            )
    out: Dict[int, OrbitBall] = {}
    for n in window:
        n = int(n)
        ball = orbit_ball(Coset(n, IDENTITY), gens, radius, cap=cap)
        for (level, _) in ball._keys:
            if level != n:
                raise RuntimeError(
                    f"shift-0 orbit left level {n}: reached level {level}"
                )
        out[n] = ball
    return out
