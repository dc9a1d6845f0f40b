"""Finite groups generated by permutations or integer matrices modulo m.

Groups are enumerated by deterministic breadth-first closure from the
identity, with element inverses tracked during the walk.  Conjugacy
classes are conjugation orbits ordered by their smallest element index.
Subgroups carry left-coset transversals of their parent.  Congruence
quotients of the integer special linear group are generated by the
elementary transvections, and point-separation witnesses find the smallest
modulus at which a non-identity integer matrix stays non-identity.
"""

from __future__ import annotations

import math
import random
import re
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .errors import ResourceLimitError

Perm = Tuple[int, ...]
Matrix = Tuple[Tuple[int, ...], ...]


def _perm_mul(a: Perm, b: Perm) -> Perm:
    """Composition: (a * b)(i) = a(b(i))."""
    return tuple(a[b[i]] for i in range(len(a)))


def _mat_mul_mod(a: Matrix, b: Matrix, m: int) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) % m for j in range(n))
        for i in range(n)
    )


def _mat_identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _int_det(rows: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    n = len(rows)
    m = [[int(x) for x in row] for row in rows]
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def _parse_cycle_string(s: str) -> List[Tuple[int, ...]]:
    """Parse 1-based cycle notation like '(1 2)(3 4)' or '()' into a list
    of 0-based cycles."""
    rest = _CYCLE_RE.sub("", s)
    if rest.strip():
        raise ValueError(f"bad cycle notation {s!r}")
    cycles = []
    for body in _CYCLE_RE.findall(s):
        points = [int(t) for t in re.split(r"[,\s]+", body.strip()) if t]
        if not points:
            continue
        if any(p < 1 for p in points):
            raise ValueError(f"cycle points are 1-based, got {points}")
        if len(set(points)) != len(points):
            raise ValueError(f"repeated point in cycle {body!r}")
        cycles.append(tuple(p - 1 for p in points))
    return cycles


def _perm_from_cycles(cycles: List[Tuple[int, ...]], degree: int) -> Perm:
    """Materialize cycles as a permutation tuple; rightmost cycle applies
    first (function composition)."""
    img = list(range(degree))
    for cycle in reversed(cycles):
        prev = list(img)
        move = {}
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            move[a] = b
        for i in range(degree):
            img[i] = move.get(prev[i], prev[i])
    return tuple(img)


def _perm_cycles_repr(p: Perm) -> str:
    seen = [False] * len(p)
    parts = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cycle = [i]
        seen[i] = True
        j = p[i]
        while j != i:
            cycle.append(j)
            seen[j] = True
            j = p[j]
        parts.append("(" + " ".join(str(x + 1) for x in cycle) + ")")
    return "".join(parts) if parts else "()"


def _bfs_closure(gen_values, op, identity, cap):
    """Deterministic breadth-first closure under right multiplication.

    Inverses are tracked along the walk: (x g)^-1 = g^-1 x^-1, with
    generator inverses obtained by cycling to the element's order.
    Returns (elements in discovery order, value -> index map, inverse
    index list).
    """
    inv_val = {identity: identity}
    uniq = []
    seen = set()
    for g in gen_values:
        if g not in seen:
            seen.add(g)
            uniq.append(g)
    for g in uniq:
        prev, cur = identity, g
        steps = 0
        while cur != identity:
            prev, cur = cur, op(cur, g)
            steps += 1
            if steps > cap:
                raise ResourceLimitError(
                    f"element order exceeds cap {cap} while inverting a generator"
                )
        inv_val[g] = prev
    elements = [identity]
    index = {identity: 0}
    i = 0
    while i < len(elements):
        x = elements[i]
        xinv = inv_val[x]
        for g in uniq:
            y = op(x, g)
            if y not in index:
                if len(elements) >= cap:
                    raise ResourceLimitError(f"group order exceeds cap {cap}")
                index[y] = len(elements)
                elements.append(y)
                inv_val[y] = op(inv_val[g], xinv)
        i += 1
    inv = [index[inv_val[e]] for e in elements]
    return elements, index, inv


class ConjugacyClass(NamedTuple):
    rep: int
    members: Tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.members)


class FiniteGroup:
    """A finite group of permutation tuples or integer matrices mod m,
    enumerated in deterministic breadth-first order (identity first).
    """

    def __init__(self, elements, index, inv, op, kind, degree, modulus, generators,
                 check=True):
        self.elements = list(elements)
        self._index = index
        self._inv = list(inv)
        self._op = op
        self.kind = kind
        self.degree = degree
        self.modulus = modulus
        self.generators = tuple(generators)
        self._classes: Optional[Tuple[ConjugacyClass, ...]] = None
        self._class_of: Optional[List[int]] = None
        if check:
            self._verify_axioms()

    # -- basic structure ---------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self):
        return self.elements[0]

    def element(self, i: int):
        return self.elements[i]

    def index_of(self, value) -> int:
        try:
            return self._index[value]
        except KeyError:
            raise ValueError(f"{value!r} is not an element of this group") from None

    def contains_value(self, value) -> bool:
        return value in self._index

    def mul(self, i: int, j: int) -> int:
        return self._index[self._op(self.elements[i], self.elements[j])]

    def inv(self, i: int) -> int:
        return self._inv[i]

    def element_repr(self, i: int) -> str:
        v = self.elements[i]
        if self.kind == "perm":
            return _perm_cycles_repr(v)
        return "[" + ",".join("[" + ",".join(map(str, row)) + "]" for row in v) + "]"

    def _verify_axioms(self):
        """Identity and inverse laws on every element (closure holds by
        construction); associativity on a deterministic sample of triples."""
        n = len(self.elements)
        for i in range(n):
            if self.mul(0, i) != i or self.mul(i, 0) != i:
                raise ValueError("identity law fails")
            if self.mul(i, self._inv[i]) != 0 or self.mul(self._inv[i], i) != 0:
                raise ValueError("inverse law fails")
        rng = random.Random(7)
        for _ in range(min(200, n * n)):
            a, b, c = (rng.randrange(n) for _ in range(3))
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                raise ValueError("associativity fails")

    # -- conjugacy ---------------------------------------------------------

    def _compute_classes(self):
        n = len(self.elements)
        class_of = [-1] * n
        classes: List[ConjugacyClass] = []
        for i in range(n):
            if class_of[i] >= 0:
                continue
            members = set()
            for x in range(n):
                members.add(self.mul(self.mul(x, i), self._inv[x]))
            members = tuple(sorted(members))
            cid = len(classes)
            for j in members:
                class_of[j] = cid
            classes.append(ConjugacyClass(i, members))
        self._classes = tuple(classes)
        self._class_of = class_of

    @property
    def classes(self) -> Tuple[ConjugacyClass, ...]:
        if self._classes is None:
            self._compute_classes()
        return self._classes

    def class_of(self, i: int) -> int:
        if self._class_of is None:
            self._compute_classes()
        return self._class_of[i]

    def class_sizes(self) -> Tuple[int, ...]:
        return tuple(c.size for c in self.classes)

    def element_order(self, i: int) -> int:
        k, j = 1, i
        while j != 0:
            j = self.mul(j, i)
            k += 1
        return k

    # -- subgroups ----------------------------------------------------------

    def _normalize_element(self, g):
        if self.kind == "perm":
            if isinstance(g, str):
                return _perm_from_cycles(_parse_cycle_string(g), self.degree)
            p = tuple(int(x) for x in g)
            if len(p) < self.degree:
                p = p + tuple(range(len(p), self.degree))
            return p
        m = self.modulus
        return tuple(tuple(int(x) % m for x in row) for row in g)

    def subgroup(self, gens) -> "Subgroup":
        values = [self._normalize_element(g) for g in gens]
        return Subgroup(self, values)

    def subgroup_from_values(self, values) -> "Subgroup":
        return Subgroup(self, list(values))


class Subgroup(FiniteGroup):
    """A subgroup enumerated inside a parent group, with left-coset data."""

    def __init__(self, parent: FiniteGroup, gen_values):
        for v in gen_values:
            if not parent.contains_value(v):
                raise ValueError(f"generator {v!r} is not in the parent group")
        elements, index, inv = _bfs_closure(
            gen_values, parent._op, parent.identity, cap=len(parent) + 1
        )
        super().__init__(
            elements, index, inv, parent._op, parent.kind, parent.degree,
            parent.modulus, tuple(gen_values),
        )
        self.parent = parent
        self.parent_index = tuple(parent.index_of(v) for v in self.elements)
        self._from_parent: Dict[int, int] = {
            pi: si for si, pi in enumerate(self.parent_index)
        }
        self._transversal: Optional[Tuple[int, ...]] = None
        self._coset_id: Optional[List[int]] = None

    @property
    def index_in_parent(self) -> int:
        return len(self.parent) // len(self)

    def contains_parent_index(self, pi: int) -> bool:
        return pi in self._from_parent

    def from_parent(self, pi: int) -> int:
        try:
            return self._from_parent[pi]
        except KeyError:
            raise ValueError("parent element is not in the subgroup") from None

    def to_parent(self, si: int) -> int:
        return self.parent_index[si]

    def _compute_cosets(self):
        parent = self.parent
        cid = [-1] * len(parent)
        reps: List[int] = []
        for pi in range(len(parent)):
            if cid[pi] >= 0:
                continue
            r = len(reps)
            reps.append(pi)
            for hpi in self.parent_index:
                cid[parent.mul(pi, hpi)] = r
        self._transversal = tuple(reps)
        self._coset_id = cid

    @property
    def transversal(self) -> Tuple[int, ...]:
        """Left coset representatives (parent indices), identity coset first."""
        if self._transversal is None:
            self._compute_cosets()
        return self._transversal

    def coset_id(self, pi: int) -> int:
        """Which left coset x * H the parent element at index pi lies in."""
        if self._coset_id is None:
            self._compute_cosets()
        return self._coset_id[pi]


def generate_group(gens, modulus: Optional[int] = None, degree: Optional[int] = None,
                   cap: int = 10**6, check: bool = True) -> FiniteGroup:
    """Breadth-first enumeration of the group generated by permutations
    (tuples of 0-based images, or 1-based cycle-notation strings) or by
    square integer matrices taken modulo `modulus`.

    Raises ResourceLimitError if the order would exceed cap.
    """
    gens = list(gens)
    if modulus is not None:
        m = int(modulus)
        if m < 2:
            raise ValueError(f"modulus must be >= 2, got {m}")
        if not gens:
            if degree is None:
                raise ValueError("matrix group with no generators needs a degree")
            n = int(degree)
        else:
            n = len(gens[0])
        mats = []
        for g in gens:
            rows = tuple(tuple(int(x) % m for x in row) for row in g)
            if len(rows) != n or any(len(row) != n for row in rows):
                raise ValueError("matrix generators must be square and same size")
            if math.gcd(_int_det(rows) % m, m) != 1:
                raise ValueError(f"generator {rows!r} is not invertible mod {m}")
            mats.append(rows)
        op = lambda a, b: _mat_mul_mod(a, b, m)
        identity = _mat_identity(n)
        elements, index, inv = _bfs_closure(mats, op, identity, cap)
        return FiniteGroup(elements, index, inv, op, "matrix", n, m, mats, check)

    cycle_lists = []
    max_point = 0
    perms_in = []
    for g in gens:
        if isinstance(g, str):
            cycles = _parse_cycle_string(g)
            cycle_lists.append(cycles)
            perms_in.append(None)
            for c in cycles:
                max_point = max(max_point, max(c) + 1 if c else 0)
        else:
            p = tuple(int(x) for x in g)
            perms_in.append(p)
            cycle_lists.append(None)
            max_point = max(max_point, len(p))
    deg = max(max_point, degree or 0, 1)
    perms = []
    for p, cycles in zip(perms_in, cycle_lists):
        if p is None:
            perms.append(_perm_from_cycles(cycles, deg))
        else:
            q = p + tuple(range(len(p), deg))
            if sorted(q) != list(range(deg)):
                raise ValueError(f"{p!r} is not a permutation")
            perms.append(q)
    identity = tuple(range(deg))
    elements, index, inv = _bfs_closure(perms, _perm_mul, identity, cap)
    return FiniteGroup(elements, index, inv, _perm_mul, "perm", deg, None, perms,
                       check)


def congruence_group(n: int, m: int, cap: int = 10**6) -> FiniteGroup:
    """SL(n, Z/m), generated by the n(n-1) elementary transvections."""
    if n < 2:
        raise ValueError(f"matrix size must be >= 2, got {n}")
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    gens = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            rows = [[1 if a == b else 0 for b in range(n)] for a in range(n)]
            rows[i][j] = 1
            gens.append(tuple(tuple(r) for r in rows))
    return generate_group(gens, modulus=m, cap=cap)


def special_linear_order(n: int, m: int) -> int:
    """|SL(n, Z/m)| in closed form: multiplicative over prime powers, with
    |SL(n, Z/p^k)| = p^((k-1)(n^2-1)) * p^(n(n-1)/2) * prod_{j=2..n} (p^j - 1).
    """
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    total = 1
    rest = m
    p = 2
    while p * p <= rest:
        if rest % p == 0:
            k = 0
            while rest % p == 0:
                rest //= p
                k += 1
            term = p ** ((k - 1) * (n * n - 1)) * p ** (n * (n - 1) // 2)
            for j in range(2, n + 1):
                term *= p**j - 1
            total *= term
        p += 1
    if rest > 1:
        p, k = rest, 1
        term = p ** ((k - 1) * (n * n - 1)) * p ** (n * (n - 1) // 2)
        for j in range(2, n + 1):
            term *= p**j - 1
        total *= term
    return total


def separation_witness(A) -> int:
    """Smallest modulus m >= 2 at which the non-identity integer matrix A
    (determinant 1) is still not the identity.

    Some entry of A - I is nonzero, and it survives any modulus exceeding
    its absolute value, so the upward scan terminates.
    """
    rows = tuple(tuple(int(x) for x in row) for row in A)
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("matrix must be square")
    if _int_det(rows) != 1:
        raise ValueError(f"determinant must be 1, got {_int_det(rows)}")
    dev = [[rows[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    if all(x == 0 for row in dev for x in row):
        raise ValueError("matrix is the identity; no modulus separates it")
    m = 2
    while True:
        if any(x % m != 0 for row in dev for x in row):
            return m
        m += 1
