"""Finite partially ordered sets and their bound operators.

A :class:`FinitePoset` stores the order relation as bit-packed rows
(one Python int per element for the upper and lower cones), which turns
all the subset manipulations downstream — bound operators, directedness
tests, closure enumeration — into word-parallel set algebra.  Elements
are addressed by index internally and by label at the edges of the API.

Subsets travel as plain int bit masks (bit ``i`` = element ``i``) in
the mask-level methods, and as iterables/frozensets of labels in the
label-level wrappers.  Module-level functions (:func:`upper_bounds`,
:func:`sup`, ...) mirror the method surface for callers that prefer a
functional style.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import CycleError, DuplicateLabelError, PosetFormatError

__all__ = [
    "FinitePoset",
    "iter_bits",
    "from_covers",
    "random_poset",
    "parse_poset",
    "format_poset",
    "to_dot",
    "upper_bounds",
    "lower_bounds",
    "sup",
    "inf",
    "is_directed",
    "is_filtered",
    "is_lattice",
    "is_monotone_order_separable",
]


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FinitePoset:
    """An immutable finite poset over distinctly labeled elements.

    Parameters
    ----------
    labels:
        Distinct element labels; their order fixes the element indices.
    leq:
        n×n boolean matrix (any array-like), ``leq[i][j]`` ⇔ ``i ≤ j``.
    validate:
        When true (default), check reflexivity, antisymmetry and
        transitivity.  Fault-injection tests construct deliberately
        broken instances with ``validate=False``.
    """

    def __init__(self, labels: Sequence[str], leq, *, validate: bool = True):
        self.labels: tuple[str, ...] = tuple(str(x) for x in labels)
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise DuplicateLabelError("labels must be distinct")
        mat = np.asarray(leq, dtype=bool)
        if mat.shape != (n, n):
            raise ValueError(f"leq must be {n}x{n}, got {mat.shape}")
        up = []
        down = [0] * n
        for i in range(n):
            row = 0
            for j in range(n):
                if mat[i, j]:
                    row |= 1 << j
                    down[j] |= 1 << i
            up.append(row)
        self._up: tuple[int, ...] = tuple(up)
        self._down: tuple[int, ...] = tuple(down)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        if validate:
            self._check_invariants(mat)

    def _check_invariants(self, mat: np.ndarray) -> None:
        n = self.n
        if not mat.diagonal().all() and n > 0:
            raise ValueError("relation is not reflexive")
        if np.any(mat & mat.T & ~np.eye(n, dtype=bool)):
            raise ValueError("relation is not antisymmetric")
        closure = mat @ mat
        if np.any(closure & ~mat):
            raise ValueError("relation is not transitive")

    # -- basic accessors ---------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"FinitePoset({self.n} elements)"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self.labels == other.labels and self._up == other._up

    def __hash__(self) -> int:
        return hash((self.labels, self._up))

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown element label {label!r}") from None

    def leq(self, a: str, b: str) -> bool:
        """Whether ``a ≤ b``, by label."""
        return bool(self._up[self.index(a)] & (1 << self.index(b)))

    def leq_idx(self, i: int, j: int) -> bool:
        return bool(self._up[i] & (1 << j))

    def leq_matrix(self) -> np.ndarray:
        """The order relation as a dense n×n boolean array."""
        mat = np.zeros((self.n, self.n), dtype=bool)
        for i, row in enumerate(self._up):
            for j in iter_bits(row):
                mat[i, j] = True
        return mat

    def subset_mask(self, members: Iterable[str]) -> int:
        m = 0
        for lab in members:
            m |= 1 << self.index(lab)
        return m

    def labels_of(self, mask: int) -> tuple[str, ...]:
        return tuple(self.labels[i] for i in iter_bits(mask))

    def up_mask(self, i: int) -> int:
        """Mask of the upper cone { j : i ≤ j }."""
        return self._up[i]

    def down_mask(self, i: int) -> int:
        return self._down[i]

    # -- bound operators (mask level) --------------------------------------

    def upper_mask(self, mask: int) -> int:
        """Common upper bounds of the subset ``mask``; everything for ∅."""
        out = self.full_mask
        for i in iter_bits(mask):
            out &= self._up[i]
        return out

    def lower_mask(self, mask: int) -> int:
        out = self.full_mask
        for i in iter_bits(mask):
            out &= self._down[i]
        return out

    def least_of(self, mask: int) -> Optional[int]:
        """Index of the least element of the subset ``mask``, if any."""
        for i in iter_bits(mask):
            if self._up[i] & mask == mask:
                return i
        return None

    def greatest_of(self, mask: int) -> Optional[int]:
        for i in iter_bits(mask):
            if self._down[i] & mask == mask:
                return i
        return None

    def sup_mask(self, mask: int) -> Optional[int]:
        """Index of sup of the subset, or None.  ``sup ∅`` is the bottom."""
        return self.least_of(self.upper_mask(mask))

    def inf_mask(self, mask: int) -> Optional[int]:
        return self.greatest_of(self.lower_mask(mask))

    def is_directed_mask(self, mask: int) -> bool:
        """Nonempty and every pair has an upper bound inside the subset.

        Pairwise suffices for all finite subsets by induction.
        """
        if mask == 0:
            return False
        members = list(iter_bits(mask))
        for a in range(len(members)):
            ua = self._up[members[a]]
            for b in range(a + 1, len(members)):
                if ua & self._up[members[b]] & mask == 0:
                    return False
        return True

    def is_filtered_mask(self, mask: int) -> bool:
        if mask == 0:
            return False
        members = list(iter_bits(mask))
        for a in range(len(members)):
            da = self._down[members[a]]
            for b in range(a + 1, len(members)):
                if da & self._down[members[b]] & mask == 0:
                    return False
        return True

    # -- label-level wrappers ----------------------------------------------

    def upper_bounds(self, members: Iterable[str]) -> frozenset[str]:
        return frozenset(self.labels_of(self.upper_mask(self.subset_mask(members))))

    def lower_bounds(self, members: Iterable[str]) -> frozenset[str]:
        return frozenset(self.labels_of(self.lower_mask(self.subset_mask(members))))

    def sup(self, members: Iterable[str]) -> Optional[str]:
        i = self.sup_mask(self.subset_mask(members))
        return None if i is None else self.labels[i]

    def inf(self, members: Iterable[str]) -> Optional[str]:
        i = self.inf_mask(self.subset_mask(members))
        return None if i is None else self.labels[i]

    def is_directed(self, members: Iterable[str]) -> bool:
        return self.is_directed_mask(self.subset_mask(members))

    def is_filtered(self, members: Iterable[str]) -> bool:
        return self.is_filtered_mask(self.subset_mask(members))

    # -- derived structure --------------------------------------------------

    @cached_property
    def is_lattice(self) -> bool:
        """Every pair has a sup and an inf, on a nonempty poset.

        On a finite poset this bootstraps to all finite subsets
        (including ∅: pairwise sups of everything yield a top, dually a
        bottom).
        """
        if self.n == 0:
            return False
        for i in range(self.n):
            for j in range(i + 1, self.n):
                pair = (1 << i) | (1 << j)
                if self.sup_mask(pair) is None or self.inf_mask(pair) is None:
                    return False
        return True

    @cached_property
    def bottom(self) -> Optional[int]:
        return self.least_of(self.full_mask) if self.n else None

    @cached_property
    def top(self) -> Optional[int]:
        return self.greatest_of(self.full_mask) if self.n else None

    @cached_property
    def cover_pairs(self) -> tuple[tuple[int, int], ...]:
        """Index pairs (i, j) with j covering i (transitive reduction)."""
        out = []
        for i in range(self.n):
            strict_up = self._up[i] & ~(1 << i)
            for j in iter_bits(strict_up):
                between = strict_up & self._down[j] & ~(1 << j)
                if between == 0:
                    out.append((i, j))
        return tuple(out)

    def covers(self) -> list[tuple[str, str]]:
        """Cover pairs as (lower, upper) labels."""
        return [(self.labels[i], self.labels[j]) for i, j in self.cover_pairs]

    def induced(self, members: Iterable[str]) -> "FinitePoset":
        """The induced subposet on the given labels, order inherited.

        Relative label order is preserved (indices are re-packed).
        """
        keep = sorted({self.index(lab) for lab in members})
        pos = {old: new for new, old in enumerate(keep)}
        keep_mask = 0
        for old in keep:
            keep_mask |= 1 << old
        n = len(keep)
        sub = FinitePoset.__new__(FinitePoset)
        sub.labels = tuple(self.labels[old] for old in keep)
        up = []
        down = [0] * n
        for new, old in enumerate(keep):
            row = 0
            for j in iter_bits(self._up[old] & keep_mask):
                row |= 1 << pos[j]
                down[pos[j]] |= 1 << new
            up.append(row)
        sub._up = tuple(up)
        sub._down = tuple(down)
        sub._index = {lab: i for i, lab in enumerate(sub.labels)}
        return sub


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def from_covers(labels: Sequence[str], covers: Iterable[tuple[str, str]]) -> FinitePoset:
    """Build a poset from its Hasse-diagram edges (lower, upper).

    ``leq`` is the reflexive-transitive closure of the cover relation.
    Raises :class:`CycleError` when the covers contain a directed cycle
    (which is also how antisymmetry violations manifest) and
    :class:`DuplicateLabelError` for repeated labels.
    """
    labels = [str(x) for x in labels]
    n = len(labels)
    index: dict[str, int] = {}
    for lab in labels:
        if lab in index:
            raise DuplicateLabelError(f"duplicate label {lab!r}")
        index[lab] = len(index)

    children: list[list[int]] = [[] for _ in range(n)]
    indeg = [0] * n
    seen_edges = set()
    for lo, hi in covers:
        try:
            i, j = index[str(lo)], index[str(hi)]
        except KeyError as exc:
            raise PosetFormatError(
                f"cover references unknown label {exc.args[0]!r}"
            ) from None
        if i == j:
            raise CycleError(f"self-cover on {lo!r}")
        if (i, j) in seen_edges:
            continue
        seen_edges.add((i, j))
        children[i].append(j)
        indeg[j] += 1

    # Kahn's algorithm: a complete topological order certifies acyclicity.
    order = [i for i in range(n) if indeg[i] == 0]
    head = 0
    indeg = list(indeg)
    while head < len(order):
        i = order[head]
        head += 1
        for j in children[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                order.append(j)
    if len(order) != n:
        raise CycleError("cover relation contains a directed cycle")

    up = [1 << i for i in range(n)]
    for i in reversed(order):
        for j in children[i]:
            up[i] |= up[j]

    poset = FinitePoset.__new__(FinitePoset)
    poset.labels = tuple(labels)
    poset._up = tuple(up)
    down = [0] * n
    for i in range(n):
        for j in iter_bits(up[i]):
            down[j] |= 1 << i
    poset._down = tuple(down)
    poset._index = index
    return poset


def random_poset(n: int, density: float, seed: int) -> FinitePoset:
    """A deterministic random poset on ``n`` elements labeled e0..e{n-1}.

    Sampled as a strict upper-triangular Bernoulli(density) relation
    under a uniformly random permutation, then transitively closed.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    rank = np.empty(n, dtype=int)
    rank[perm] = np.arange(n)
    coin = rng.random((n, n))
    mat = np.eye(n, dtype=bool)
    for i in range(n):
        for j in range(n):
            if rank[i] < rank[j] and coin[rank[i], rank[j]] < density:
                mat[i, j] = True
    # transitive closure by repeated boolean squaring
    while True:
        nxt = mat | (mat @ mat)
        if np.array_equal(nxt, mat):
            break
        mat = nxt
    return FinitePoset([f"e{i}" for i in range(n)], mat, validate=False)


# ---------------------------------------------------------------------------
# text format and DOT export
# ---------------------------------------------------------------------------

def parse_poset(text: str) -> FinitePoset:
    """Parse the line-based poset format.

    ``elem <label>`` declares an element, ``cover <lower> <upper>`` a
    Hasse edge; ``#`` starts a comment.  Raises
    :class:`PosetFormatError` with a line number on malformed input.
    """
    labels: list[str] = []
    seen: set[str] = set()
    covers: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "elem":
            if len(parts) != 2:
                raise PosetFormatError("'elem' takes exactly one label", line=lineno)
            if parts[1] in seen:
                raise PosetFormatError(f"duplicate element {parts[1]!r}", line=lineno)
            seen.add(parts[1])
            labels.append(parts[1])
        elif parts[0] == "cover":
            if len(parts) != 3:
                raise PosetFormatError("'cover' takes exactly two labels", line=lineno)
            lo, hi = parts[1], parts[2]
            if lo not in seen:
                raise PosetFormatError(f"unknown element {lo!r} in cover", line=lineno)
            if hi not in seen:
                raise PosetFormatError(f"unknown element {hi!r} in cover", line=lineno)
            covers.append((lo, hi))
        else:
            raise PosetFormatError(f"unknown directive {parts[0]!r}", line=lineno)
    return from_covers(labels, covers)


def format_poset(p: FinitePoset) -> str:
    """Serialize to the line-based format (elements, then Hasse edges)."""
    lines = [f"elem {lab}" for lab in p.labels]
    lines.extend(f"cover {lo} {hi}" for lo, hi in p.covers())
    return "\n".join(lines) + "\n"


def _dot_quote(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(p: FinitePoset, name: str = "poset") -> str:
    """DOT rendering of the Hasse diagram, lower elements at the bottom."""
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
    for lab in p.labels:
        lines.append(f"  {_dot_quote(lab)};")
    for lo, hi in p.covers():
        lines.append(f"  {_dot_quote(lo)} -> {_dot_quote(hi)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# functional surface
# ---------------------------------------------------------------------------

def upper_bounds(p: FinitePoset, members: Iterable[str]) -> frozenset[str]:
    """{ x : x ≥ d for all d in the subset }; all of p for the empty set."""
    return p.upper_bounds(members)


def lower_bounds(p: FinitePoset, members: Iterable[str]) -> frozenset[str]:
    return p.lower_bounds(members)


def sup(p: FinitePoset, members: Iterable[str]) -> Optional[str]:
    """Least upper bound, or None when absent (absence is a value here)."""
    return p.sup(members)


def inf(p: FinitePoset, members: Iterable[str]) -> Optional[str]:
    return p.inf(members)


def is_directed(p: FinitePoset, members: Iterable[str]) -> bool:
    return p.is_directed(members)


def is_filtered(p: FinitePoset, members: Iterable[str]) -> bool:
    return p.is_filtered(members)


def is_lattice(p: FinitePoset) -> bool:
    return p.is_lattice


def is_monotone_order_separable(p: FinitePoset) -> bool:
    """Every subset contains a sequence with the same supremum.

    On a finite poset this is vacuously true — any subset, enumerated in
    any order, is itself such a sequence — so the predicate is a
    constant.  It exists so the hypothesis of the "O₂ implies O₁"
    result is represented in the API rather than silently assumed.
    """
    assert p.n >= 0  # finite by construction; every subset enumerates itself
    return True
