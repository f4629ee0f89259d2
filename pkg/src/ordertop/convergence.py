"""Order-convergence deciders for lasso-encoded sequences.

A :class:`LassoSequence` is a sequence over a finite poset given as a
finite prefix plus a repeating cycle — the largest class of sequences
whose residual sets E(k) = {x_j : j ≥ k} are all exactly computable
(they stabilize to the cycle-value set once k passes the prefix).

Four deciders are provided, each implemented from its own definition so
that their pairwise agreement on finite posets is a genuine
theorem-level cross-check rather than shared code:

* :func:`o1_converges` — monotone sandwich sequences (on a finite poset
  a monotone sequence is eventually constant, so this reduces to
  eventual constancy; the reduction is asserted against the sandwich
  property it came from);
* :func:`o2_converges` — a directed set M and filtered set N with
  sup M = inf N = x and the sequence eventually inside every [m, n];
  genuine subset search, cone-restricted by default with an exhaustive
  mode for small posets;
* :func:`o3_converges` — sup ∪ₖ E(k)⁻ = x = inf ∪ₖ E(k)⁺, cross-checked
  against the closure-intersection criterion ∩ₖ E(k)⁺⁻ = (←,x] and
  ∩ₖ E(k)⁻⁺ = [x,→);
* :func:`odm_converges` — liminf = limsup = φ(x) in the
  Dedekind–MacNeille completion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Union

from .completion import Completion, dm_complete
from .errors import NotALatticeError, PosetFormatError, SizeBoundExceeded
from .poset import FinitePoset, iter_bits

__all__ = [
    "LassoSequence",
    "ConvergenceVerdict",
    "parse_lasso",
    "format_lasso",
    "residual",
    "liminf_limsup",
    "o1_converges",
    "o2_converges",
    "o3_converges",
    "o3_residual_criteria",
    "odm_converges",
    "drop_prefix",
]

Element = Union[str, int]


class LassoSequence:
    """A sequence ``prefix + cycle·cycle·cycle…`` over a finite poset.

    Entries may be given as labels or indices; they are stored as
    indices.  The cycle must be nonempty.
    """

    def __init__(
        self,
        poset: FinitePoset,
        prefix: Sequence[Element],
        cycle: Sequence[Element],
    ):
        self.poset = poset
        self.prefix: tuple[int, ...] = tuple(self._to_index(e) for e in prefix)
        self.cycle: tuple[int, ...] = tuple(self._to_index(e) for e in cycle)
        if not self.cycle:
            raise ValueError("lasso cycle must be nonempty")

    def _to_index(self, e: Element) -> int:
        if isinstance(e, str):
            return self.poset.index(e)
        if not 0 <= e < self.poset.n:
            raise ValueError(f"element index {e} out of range")
        return int(e)

    def __repr__(self) -> str:
        return f"LassoSequence(prefix={self.prefix_labels()}, cycle={self.cycle_labels()})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LassoSequence):
            return NotImplemented
        return (
            self.poset == other.poset
            and self.prefix == other.prefix
            and self.cycle == other.cycle
        )

    def prefix_labels(self) -> tuple[str, ...]:
        return tuple(self.poset.labels[i] for i in self.prefix)

    def cycle_labels(self) -> tuple[str, ...]:
        return tuple(self.poset.labels[i] for i in self.cycle)

    def value_at(self, j: int) -> int:
        """Element index at position j of the semantic infinite sequence."""
        if j < 0:
            raise IndexError("sequence positions start at 0")
        if j < len(self.prefix):
            return self.prefix[j]
        return self.cycle[(j - len(self.prefix)) % len(self.cycle)]

    def cycle_mask(self) -> int:
        m = 0
        for i in self.cycle:
            m |= 1 << i
        return m

    def residual_mask(self, k: int) -> int:
        """Bit mask of E(k) = {x_j : j ≥ k}; equals the cycle set for
        k ≥ |prefix|."""
        if k < 0:
            raise ValueError("residual index must be nonnegative")
        m = self.cycle_mask()
        for i in self.prefix[k:]:
            m |= 1 << i
        return m

    def residual(self, k: int) -> frozenset[str]:
        return frozenset(self.poset.labels_of(self.residual_mask(k)))


def drop_prefix(s: LassoSequence, k: int) -> LassoSequence:
    """The lasso for positions ≥ k (rotating the cycle when k passes
    the prefix).  Verdicts are invariant under this operation."""
    if k <= len(s.prefix):
        return LassoSequence(s.poset, s.prefix[k:], s.cycle)
    shift = (k - len(s.prefix)) % len(s.cycle)
    return LassoSequence(s.poset, (), s.cycle[shift:] + s.cycle[:shift])


def parse_lasso(text: str, poset: FinitePoset) -> LassoSequence:
    """Parse ``prefix: l1 l2 … ; cycle: m1 m2 …`` (labels, whitespace
    separated; the prefix part may be empty)."""
    parts = text.split(";")
    if len(parts) != 2:
        raise PosetFormatError("lasso must have exactly one ';' between prefix and cycle")
    pre_part, cyc_part = parts[0].strip(), parts[1].strip()
    if not pre_part.startswith("prefix:"):
        raise PosetFormatError("lasso must start with 'prefix:'")
    if not cyc_part.startswith("cycle:"):
        raise PosetFormatError("lasso cycle part must start with 'cycle:'")
    prefix = pre_part[len("prefix:"):].split()
    cycle = cyc_part[len("cycle:"):].split()
    if not cycle:
        raise PosetFormatError("lasso cycle must be nonempty")
    for lab in (*prefix, *cycle):
        if lab not in poset._index:
            raise PosetFormatError(f"unknown element {lab!r} in lasso")
    return LassoSequence(poset, prefix, cycle)


def format_lasso(s: LassoSequence) -> str:
    return (
        "prefix: " + " ".join(s.prefix_labels()) +
        " ; cycle: " + " ".join(s.cycle_labels())
    ).replace("prefix:  ;", "prefix: ;")


def residual(s: LassoSequence, k: int) -> frozenset[str]:
    """The exact value set at positions ≥ k."""
    return s.residual(k)


@dataclass(frozen=True)
class ConvergenceVerdict:
    """Outcome of a convergence decision, with structured evidence."""

    mode: str
    converges: bool
    limit: Optional[str]
    witness: Optional[dict]

    def __post_init__(self) -> None:
        if self.converges and (self.limit is None or self.witness is None):
            raise ValueError("a positive verdict requires a limit and a witness")

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "converges": self.converges,
            "limit": self.limit,
            "witness": self.witness,
        }


# ---------------------------------------------------------------------------
# liminf / limsup
# ---------------------------------------------------------------------------

def liminf_limsup(s: LassoSequence) -> tuple[str, str]:
    """(sup_k inf E(k), inf_k sup E(k)), exact because residuals
    stabilize at k = |prefix|.

    Raises :class:`NotALatticeError` when a required sup or inf does
    not exist in the underlying poset.
    """
    p = s.poset
    infs = 0
    sups = 0
    for k in range(len(s.prefix) + 1):
        res = s.residual_mask(k)
        i = p.inf_mask(res)
        if i is None:
            raise NotALatticeError(
                f"inf of residual E({k}) = {sorted(p.labels_of(res))} does not exist"
            )
        j = p.sup_mask(res)
        if j is None:
            raise NotALatticeError(
                f"sup of residual E({k}) = {sorted(p.labels_of(res))} does not exist"
            )
        infs |= 1 << i
        sups |= 1 << j
    lo = p.sup_mask(infs)
    if lo is None:
        raise NotALatticeError(
            f"sup of residual infima {sorted(p.labels_of(infs))} does not exist"
        )
    hi = p.inf_mask(sups)
    if hi is None:
        raise NotALatticeError(
            f"inf of residual suprema {sorted(p.labels_of(sups))} does not exist"
        )
    return p.labels[lo], p.labels[hi]


# ---------------------------------------------------------------------------
# O1: monotone sandwich
# ---------------------------------------------------------------------------

def o1_converges(s: LassoSequence, x: str) -> ConvergenceVerdict:
    """Sandwich by an isotone and an antitone sequence meeting at x.

    A monotone sequence over a finite poset is eventually constant, so
    a sandwich with sup y = x = inf z exists iff the sequence is
    eventually constant with value x; the returned witness is that
    constant sandwich, and its sandwich property is re-checked rather
    than assumed.
    """
    p = s.poset
    xi = p.index(x)
    verdict = s.cycle_mask() == 1 << xi
    if not verdict:
        return ConvergenceVerdict("o1", False, None, None)
    k0 = len(s.prefix)
    while k0 > 0 and s.prefix[k0 - 1] == xi:
        k0 -= 1
    # the constant sandwich y = z = x really does sandwich the tail
    assert all(
        p.leq_idx(xi, s.value_at(j)) and p.leq_idx(s.value_at(j), xi)
        for j in range(k0, k0 + len(s.cycle) + 1)
    )
    witness = {
        "lower_sequence": {"constant": x},
        "upper_sequence": {"constant": x},
        "eventual_index": k0,
    }
    return ConvergenceVerdict("o1", True, x, witness)


# ---------------------------------------------------------------------------
# O2: directed M below, filtered N above
# ---------------------------------------------------------------------------

def _ascending_submasks(space: int, *, include_empty: bool = False) -> Iterator[int]:
    """Submasks of ``space`` in ascending integer order."""
    positions = list(iter_bits(space))
    for counter in range(0 if include_empty else 1, 1 << len(positions)):
        m = 0
        c = counter
        i = 0
        while c:
            if c & 1:
                m |= 1 << positions[i]
            c >>= 1
            i += 1
        yield m


def o2_converges(
    s: LassoSequence,
    x: str,
    *,
    exhaustive: bool = False,
    exhaustive_bound: int = 8,
) -> ConvergenceVerdict:
    """Search for directed M and filtered N with sup M = inf N = x and
    the sequence eventually in [m, n] for every pair.

    For a lasso, "eventually m ≤ x_j" holds iff m is a lower bound of
    the stabilized residual (the cycle-value set), so candidate sets
    live inside the cycle's bound cones.  The default search further
    restricts to the cones of x — complete because sup M = x already
    forces M ⊆ (←,x], and eventuality forces M ⊆ E⁻ — and scans
    ascending bit masks, so a returned witness is lexicographically
    least.  ``exhaustive=True`` scans all subsets of the whole poset
    instead (the definition verbatim) and raises
    :class:`SizeBoundExceeded` above ``exhaustive_bound`` elements;
    both routes are asserted equivalent in tests.
    """
    p = s.poset
    xi = p.index(x)
    cyc = s.cycle_mask()
    low_cone = p.lower_mask(cyc)   # elements eventually below the sequence
    up_cone = p.upper_mask(cyc)    # elements eventually above it

    if exhaustive:
        if p.n > exhaustive_bound:
            raise SizeBoundExceeded(
                f"exhaustive O2 search over 2^{p.n} subsets exceeds the bound "
                f"({exhaustive_bound} elements)"
            )
        candidates_m: Iterable[int] = range(1, p.full_mask + 1)
        candidates_n: Iterable[int] = range(1, p.full_mask + 1)
    else:
        # A finite directed set has a maximum, which is its sup, so any
        # witness M with sup M = x contains x; dually for N.  Enumerating
        # x | (submask of the rest) keeps ascending order on candidates.
        xbit = 1 << xi
        space_m = low_cone & p.down_mask(xi)
        space_n = up_cone & p.up_mask(xi)
        candidates_m = (
            (xbit | sub for sub in _ascending_submasks(space_m & ~xbit, include_empty=True))
            if space_m & xbit else iter(())
        )
        candidates_n = (
            (xbit | sub for sub in _ascending_submasks(space_n & ~xbit, include_empty=True))
            if space_n & xbit else iter(())
        )

    m_found = None
    for m in candidates_m:
        if m & ~low_cone:
            continue
        if p.is_directed_mask(m) and p.sup_mask(m) == xi:
            m_found = m
            break
    if m_found is None:
        return ConvergenceVerdict("o2", False, None, None)

    n_found = None
    for nm in candidates_n:
        if nm & ~up_cone:
            continue
        if p.is_filtered_mask(nm) and p.inf_mask(nm) == xi:
            n_found = nm
            break
    if n_found is None:
        return ConvergenceVerdict("o2", False, None, None)

    witness = {
        "M": sorted(p.labels_of(m_found)),
        "N": sorted(p.labels_of(n_found)),
        "eventual_index": len(s.prefix),
    }
    return ConvergenceVerdict("o2", True, x, witness)


# ---------------------------------------------------------------------------
# O3: residual bound unions / closure intersections
# ---------------------------------------------------------------------------

def _o3_masks(s: LassoSequence) -> tuple[int, int, int, int]:
    p = s.poset
    low_union = 0
    up_union = 0
    low_closure_inter = p.full_mask  # ∩ E(k)⁺⁻
    up_closure_inter = p.full_mask   # ∩ E(k)⁻⁺
    for k in range(len(s.prefix) + 1):
        res = s.residual_mask(k)
        lo = p.lower_mask(res)
        up = p.upper_mask(res)
        low_union |= lo
        up_union |= up
        low_closure_inter &= p.lower_mask(up)
        up_closure_inter &= p.upper_mask(lo)
    return low_union, up_union, low_closure_inter, up_closure_inter


def o3_residual_criteria(s: LassoSequence, x: str) -> tuple[bool, bool]:
    """Evaluate the two equivalent residual criteria separately.

    Returns (bound-union criterion, closure-intersection criterion):
    sup ∪ₖE(k)⁻ = x = inf ∪ₖE(k)⁺, and ∩ₖE(k)⁺⁻ = (←,x] with
    ∩ₖE(k)⁻⁺ = [x,→).  Their agreement on every instance is a
    cross-check of the underlying equivalence.
    """
    p = s.poset
    xi = p.index(x)
    low_union, up_union, low_ci, up_ci = _o3_masks(s)
    crit_union = p.sup_mask(low_union) == xi and p.inf_mask(up_union) == xi
    crit_closure = low_ci == p.down_mask(xi) and up_ci == p.up_mask(xi)
    return crit_union, crit_closure


def o3_converges(s: LassoSequence, x: str) -> ConvergenceVerdict:
    """Decide via sup ∪ₖ E(k)⁻ = x = inf ∪ₖ E(k)⁺ (unions stabilize
    with the residuals), cross-checking the closure-intersection
    criterion on every call."""
    p = s.poset
    crit_union, crit_closure = o3_residual_criteria(s, x)
    assert crit_union == crit_closure, "equivalent residual criteria disagree"
    if not crit_union:
        return ConvergenceVerdict("o3", False, None, None)
    low_union, up_union, low_ci, up_ci = _o3_masks(s)
    witness = {
        "lower_bound_union": sorted(p.labels_of(low_union)),
        "upper_bound_union": sorted(p.labels_of(up_union)),
        "closure_intersection_down": sorted(p.labels_of(low_ci)),
        "closure_intersection_up": sorted(p.labels_of(up_ci)),
    }
    return ConvergenceVerdict("o3", True, x, witness)


# ---------------------------------------------------------------------------
# O^DM: order convergence in the completion
# ---------------------------------------------------------------------------

def odm_converges(
    s: LassoSequence, x: str, completion: Optional[Completion] = None
) -> ConvergenceVerdict:
    """Map through the Dedekind–MacNeille embedding and require
    liminf = limsup = φ(x) there.  Pass ``completion`` to reuse a
    cached :func:`~ordertop.completion.dm_complete` result."""
    p = s.poset
    if completion is None:
        completion = dm_complete(p)
    elif completion.base != p:
        raise ValueError("completion was built for a different poset")
    phi = completion.embedding
    image = LassoSequence(
        completion.lattice,
        [phi[i] for i in s.prefix],
        [phi[i] for i in s.cycle],
    )
    lo, hi = liminf_limsup(image)  # the completion is a complete lattice
    phi_x = completion.lattice.labels[completion.phi(x)]
    verdict = lo == hi == phi_x
    if not verdict:
        return ConvergenceVerdict("odm", False, None, None)
    witness = {"liminf": lo, "limsup": hi, "phi_x": phi_x}
    return ConvergenceVerdict("odm", True, x, witness)
