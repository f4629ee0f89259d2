"""Order-topology closures, inclusion reports, and subsequence extraction.

A subset X of a poset is *closed* for a convergence mode when no lasso
sequence valued in X converges (in that mode) to a point outside X.
:func:`oi_closure` computes the smallest such superset by genuine
fixpoint iteration over the deciders — and asserts the finite-poset
theorem that the closure is always the set itself, since every mode
collapses to eventual constancy on finite posets.

:func:`topology_inclusion_report` enumerates all subsets of a small
poset, classifies them as closed or not per mode (and for the trace of
the completion's order topology), and asserts the inclusion chain
between the resulting topologies.

The extraction half implements the ω-case of the cofinal-selection
lemma: :func:`isotone_cofinal_restriction` keeps the running maxima of
an index map, and :func:`extract_convergent_subsequence` uses it to
thin a sequence ``f`` along a convergent witness ``g`` into a
convergent subsequence of ``f``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .completion import Completion, dm_complete
from .convergence import (
    LassoSequence,
    _ascending_submasks,
    liminf_limsup,
    o1_converges,
    o2_converges,
    o3_converges,
    odm_converges,
)
from .errors import SizeBoundExceeded, UnboundedFiber, WitnessMismatch
from .poset import FinitePoset, iter_bits

__all__ = [
    "ClosureQuery",
    "IndexMap",
    "oi_closure",
    "topology_inclusion_report",
    "isotone_cofinal_restriction",
    "extract_convergent_subsequence",
]

MODES = ("o1", "o2", "o3", "odm")


@dataclass(frozen=True)
class ClosureQuery:
    """A closure request: which subset, which convergence mode."""

    poset: FinitePoset
    members: frozenset[str]
    mode: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", frozenset(self.members))
        object.__setattr__(self, "mode", self.mode.lower())
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        for lab in self.members:
            self.poset.index(lab)


def _decide(
    mode: str,
    s: LassoSequence,
    x: str,
    completion: Optional[Completion],
) -> bool:
    if mode == "o1":
        return o1_converges(s, x).converges
    if mode == "o2":
        return o2_converges(s, x).converges
    if mode == "o3":
        return o3_converges(s, x).converges
    return odm_converges(s, x, completion).converges


def oi_closure(q: ClosureQuery) -> frozenset[str]:
    """Close ``q.members`` under limits of lasso sequences valued in it.

    The verdict of every decider depends only on the cycle's value set
    (residuals stabilize there), so the fixpoint iterates over cycle
    value sets drawn from the current set and all outside targets.  On
    a finite poset no mode ever adds a point — the computed fixpoint is
    asserted equal to the input before returning.
    """
    p = q.poset
    completion = dm_complete(p) if q.mode == "odm" else None
    current = p.subset_mask(q.members)
    while True:
        added = 0
        for cyc in _ascending_submasks(current):
            s = LassoSequence(p, (), p.labels_of(cyc))
            for xi in iter_bits(p.full_mask & ~(current | added)):
                if _decide(q.mode, s, p.labels[xi], completion):
                    added |= 1 << xi
        if not added:
            break
        current |= added
    closure = frozenset(p.labels_of(current))
    assert closure == q.members, (
        "a lasso sequence in a finite poset converged outside its value set"
    )
    return closure


# ---------------------------------------------------------------------------
# topology inclusion report
# ---------------------------------------------------------------------------

def _odm_limit_targets(
    p: FinitePoset, s: LassoSequence, completion: Completion
) -> int:
    """Mask of targets x with liminf = limsup = φ(x) in the completion.

    At most one target qualifies (limits are unique), so the completion
    liminf/limsup pair is computed once and the genuine decider is then
    run on the single candidate it nominates.
    """
    phi = completion.embedding
    image = LassoSequence(
        completion.lattice, [phi[i] for i in s.prefix], [phi[i] for i in s.cycle]
    )
    lo, hi = liminf_limsup(image)
    if lo != hi:
        return 0
    targets = 0
    for xi in range(p.n):
        if completion.lattice.labels[phi[xi]] == lo:
            if odm_converges(s, p.labels[xi], completion).converges:
                targets |= 1 << xi
    return targets


def _o2_limit_targets(p: FinitePoset, s: LassoSequence) -> int:
    """Mask of targets the O₂ decider accepts for this cycle.

    Order-theoretic narrowing before the genuine decider runs: a
    witness pair forces x ∈ M ⊆ E⁻ and x ∈ N ⊆ E⁺ (finite directed and
    filtered sets contain their extremum), so only common bounds of the
    cycle set can succeed.
    """
    cyc = s.cycle_mask()
    candidates = p.lower_mask(cyc) & p.upper_mask(cyc)
    targets = 0
    for xi in iter_bits(candidates):
        if o2_converges(s, p.labels[xi]).converges:
            targets |= 1 << xi
    return targets


def topology_inclusion_report(p: FinitePoset, bound: int = 7) -> dict:
    """Classify every subset as closed/not per mode; assert inclusions.

    Exhaustive over all 2ⁿ subsets (:class:`SizeBoundExceeded` above
    ``bound``).  For each nonempty cycle value set C the limit targets
    are tabulated per mode with the genuine deciders; a subset is
    closed when no cycle inside it has a limit outside it.  The trace
    family comes from closing φ[X] inside the completion lattice and
    testing cl(φ[X]) ∩ φ[P] = φ[X].  The classical inclusion chain —
    trace ⊆ O₃-closed = O^DM-closed ⊆ O₂-closed = O₁-closed — is
    asserted on the instance before the report is returned.
    """
    if p.n > bound:
        raise SizeBoundExceeded(
            f"exhaustive topology report needs 2^{p.n} subsets; bound is {bound}"
        )
    n = p.n
    full = p.full_mask
    completion = dm_complete(p)

    limit_table: dict[str, list[int]] = {m: [0] * (full + 1) for m in MODES}
    for cyc in range(1, full + 1):
        s = LassoSequence(p, (), p.labels_of(cyc))
        o1_targets = 0
        o3_targets = 0
        for xi in range(n):
            if o1_converges(s, p.labels[xi]).converges:
                o1_targets |= 1 << xi
            if o3_converges(s, p.labels[xi]).converges:
                o3_targets |= 1 << xi
        limit_table["o1"][cyc] = o1_targets
        limit_table["o3"][cyc] = o3_targets
        limit_table["o2"][cyc] = _o2_limit_targets(p, s)
        limit_table["odm"][cyc] = _odm_limit_targets(p, s, completion)

    families: dict[str, set[int]] = {m: set() for m in MODES}
    for x_mask in range(full + 1):
        escaped = {m: False for m in MODES}
        for cyc in _ascending_submasks(x_mask):
            for m in MODES:
                if limit_table[m][cyc] & ~x_mask:
                    escaped[m] = True
            if all(escaped.values()):
                break
        for m in MODES:
            if not escaped[m]:
                families[m].add(x_mask)

    families["trace"] = {
        x_mask
        for x_mask in range(full + 1)
        if _is_trace_closed(p, completion, x_mask)
    }

    chain = [
        ("trace", "o3"),
        ("o3", "o2"),
        ("o2", "o1"),
    ]
    for small, big in chain:
        assert families[small] <= families[big], (
            f"{small}-closed family escapes the {big}-closed family"
        )
    assert families["o3"] == families["odm"], "O3 and O^DM families differ"
    assert families["o1"] == families["o2"], (
        "O2- and O1-closed families differ on a (monotone order separable) finite poset"
    )

    def family_json(masks: set[int]) -> list[list[str]]:
        return [sorted(p.labels_of(m)) for m in sorted(masks)]

    return {
        "element_count": n,
        "subset_count": full + 1,
        "closed_counts": {m: len(fam) for m, fam in families.items()},
        "all_subsets_closed": {
            m: len(fam) == full + 1 for m, fam in families.items()
        },
        "inclusions": {
            "trace_within_o3": True,
            "o3_within_o2": True,
            "o2_within_o1": True,
            "o3_equals_odm": True,
            "o1_equals_o2": True,
        },
        "closed_families": {m: family_json(fam) for m, fam in families.items()},
    }


def _is_trace_closed(p: FinitePoset, c: Completion, x_mask: int) -> bool:
    """X is trace-closed iff the completion-closure of φ[X] meets the
    image exactly in φ[X]."""
    lat = c.lattice
    start = 0
    for xi in iter_bits(x_mask):
        start |= 1 << c.embedding[xi]
    cur = start
    while True:
        added = 0
        for cyc in _ascending_submasks(cur):
            # constant-residual sequence: liminf = inf C, limsup = sup C
            lo = lat.inf_mask(cyc)
            hi = lat.sup_mask(cyc)
            if lo is not None and lo == hi and not (cur | added) >> lo & 1:
                added |= 1 << lo
        if not added:
            break
        cur |= added
    return cur & c.image_mask == start


# ---------------------------------------------------------------------------
# cofinal-isotone selection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IndexMap:
    """A finite window h(0..H−1) of an index map ω → ω."""

    values: tuple[int, ...]
    codomain: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if any(v < 0 for v in self.values):
            raise ValueError("index map values must be natural numbers")
        if self.codomain is not None and any(v >= self.codomain for v in self.values):
            raise ValueError("index map value exceeds the declared codomain bound")

    @property
    def horizon(self) -> int:
        return len(self.values)


def isotone_cofinal_restriction(h: IndexMap) -> list[int]:
    """Positions of the running maxima of ``h`` (ties kept).

    The restriction of h to the returned positions is isotone, and it
    attains max h over the window — cofinality certified *within the
    horizon* only, which is all a finite window can witness.
    """
    if not h.values:
        raise ValueError("index map window must be nonempty")
    kept: list[int] = []
    best = -1
    for j, v in enumerate(h.values):
        if v >= best:
            kept.append(j)
            best = v
    return kept


# ---------------------------------------------------------------------------
# subsequence extraction
# ---------------------------------------------------------------------------

def _value_set(s: LassoSequence) -> set[int]:
    return set(s.prefix) | set(s.cycle)


def _min_fiber(f: LassoSequence, value: int) -> int:
    """Least position β with f(β) = value (value known to occur)."""
    for j, v in enumerate(f.prefix):
        if v == value:
            return j
    for j, v in enumerate(f.cycle):
        if v == value:
            return len(f.prefix) + j
    raise AssertionError("value occurrence was checked upstream")


def extract_convergent_subsequence(
    f: LassoSequence, g: LassoSequence, x: str
) -> LassoSequence:
    """Thin ``f`` along the convergent witness ``g`` via h(α) = min f⁻¹{g(α)}.

    Requires g to be valued in f's values and to O₃-converge to ``x``
    (both verified here, :class:`WitnessMismatch` otherwise).  The
    bounded-fibers hypothesis admits one exception — the constant tail —
    so a cycle with two distinct values raises :class:`UnboundedFiber`;
    a sequence that is constantly ``x`` is returned as its own
    subsequence (the unbounded fiber *is* the limit, the trivial case).

    Otherwise h is evaluated on a window covering g's prefix plus two
    cycle laps, thinned with :func:`isotone_cofinal_restriction`, and
    returned as a lasso whose cycle is the constant tail.  When the
    tail's fiber loses the running-maxima race, the constant-at-x
    subsequence is returned if x recurs in f's cycle; if x occurs only
    finitely often in f, no subsequence can O₃-converge to x and
    :class:`WitnessMismatch` is raised.  The output's convergence is
    re-verified by the decider before returning.
    """
    p = f.poset
    if g.poset != p:
        raise ValueError("f and g must live over the same poset")
    xi = p.index(x)

    if not _value_set(g) <= _value_set(f):
        missing = p.labels_of(
            sum(1 << i for i in _value_set(g) - _value_set(f))
        )
        raise WitnessMismatch(f"g takes values outside f's range: {sorted(missing)}")
    if not o3_converges(g, x).converges:
        raise WitnessMismatch(f"the witness sequence does not O3-converge to {x!r}")

    cycle_values = set(f.cycle)
    if len(cycle_values) > 1:
        raise UnboundedFiber(
            "two values recur cofinally in f: "
            f"{sorted(p.labels[i] for i in cycle_values)}"
        )
    if _value_set(f) == {xi}:
        # every fiber is unbounded but equals the limit: f is its own
        # convergent subsequence
        return f

    if xi not in cycle_values:
        # the output's tail must be constantly x, which is realizable by
        # strictly increasing positions only when x recurs in f's cycle
        raise WitnessMismatch(
            f"{x!r} occurs only finitely often in f; no subsequence can "
            "O3-converge to it"
        )

    horizon = len(g.prefix) + 2 * len(g.cycle)
    h = IndexMap(tuple(_min_fiber(f, g.value_at(a)) for a in range(horizon)))
    kept = isotone_cofinal_restriction(h)

    tail_start = len(g.prefix)
    tail_kept = any(j >= tail_start for j in kept)
    if tail_kept:
        # collapse tied (repeated) indices so the selection is strictly
        # increasing — the subsequence upgrade of the isotone subnet
        out_prefix = []
        last_index = -1
        for j in kept:
            if j >= tail_start:
                break
            if h.values[j] != last_index:
                out_prefix.append(f.value_at(h.values[j]))
                last_index = h.values[j]
        out = LassoSequence(p, out_prefix, [xi])
    else:
        # h's tail (the minimal x-fiber) lost the running-maxima race to a
        # prefix value; fall back to the plain constant-at-x subsequence
        out = LassoSequence(p, (), [xi])
    assert o3_converges(out, x).converges, "extracted subsequence failed verification"
    return out
