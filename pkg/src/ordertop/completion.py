"""Dedekind–MacNeille completion of finite posets.

The completion of a poset P is the lattice of *cuts* — subsets A with
(A⁺)⁻ = A, ordered by inclusion — together with the embedding
φ(x) = (←, x].  Cuts are enumerated by lexicographic next-closure over
the closure operator A ↦ (A⁺)⁻ (see :mod:`ordertop._kernels`), never by
filtering all 2ⁿ subsets; the brute-force filter survives only as a
test oracle.

:func:`verify_completion_properties` machine-checks the seven classical
properties of the completion (cut closure of lower-bound sets, the
sup/inf formulas, order embedding, join/meet density, preservation of
existing bounds, the A⁻/A⁺⁻ identities, and inf φ[A⁺] = sup φ[A]) and
returns a JSON-friendly report with a counterexample witness per
failing property.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from ._kernels import enumerate_cut_masks
from .errors import SizeBoundExceeded
from .poset import FinitePoset, iter_bits

__all__ = [
    "Cut",
    "Completion",
    "enumerate_cuts",
    "brute_force_cut_masks",
    "dm_complete",
    "verify_completion_properties",
    "DEFAULT_CUT_LIMIT",
]

DEFAULT_CUT_LIMIT = 1 << 21


@dataclass(frozen=True)
class Cut:
    """A subset A of ``base`` with (A⁺)⁻ = A, stored as a bit mask."""

    base: FinitePoset
    mask: int

    def __post_init__(self) -> None:
        closed = self.base.lower_mask(self.base.upper_mask(self.mask))
        if closed != self.mask:
            raise ValueError(
                f"{self.base.labels_of(self.mask)} is not a cut "
                f"(closure adds {self.base.labels_of(closed & ~self.mask)})"
            )

    @property
    def members(self) -> tuple[str, ...]:
        return self.base.labels_of(self.mask)

    def __le__(self, other: "Cut") -> bool:
        return self.mask & other.mask == self.mask


def _cut_label(p: FinitePoset, mask: int) -> str:
    return "{" + ",".join(p.labels_of(mask)) + "}"


@dataclass(frozen=True)
class Completion:
    """The completion lattice of ``base`` plus the canonical embedding.

    ``cuts[i]`` is the base-set bit mask of lattice element ``i`` (cuts
    are listed in ascending mask order), and ``embedding[x]`` is the
    lattice index of the principal ideal (←, x].
    """

    base: FinitePoset
    lattice: FinitePoset
    cuts: tuple[int, ...]
    embedding: tuple[int, ...]
    _index: dict = field(repr=False, hash=False, compare=False, default_factory=dict)

    def __post_init__(self) -> None:
        self._index.update({m: i for i, m in enumerate(self.cuts)})

    def cut_index(self, mask: int) -> int:
        """Lattice index of the cut with the given base mask."""
        try:
            return self._index[mask]
        except KeyError:
            raise KeyError(f"{mask:#x} is not a cut of the base poset") from None

    def cut(self, i: int) -> Cut:
        return Cut(self.base, self.cuts[i])

    def phi(self, label: str) -> int:
        """Lattice index of φ(x) = (←, x]."""
        return self.embedding[self.base.index(label)]

    @property
    def image_mask(self) -> int:
        """Mask (over lattice indices) of the embedded copy of the base."""
        m = 0
        for i in self.embedding:
            m |= 1 << i
        return m


def enumerate_cuts(p: FinitePoset, limit: int = DEFAULT_CUT_LIMIT) -> list[Cut]:
    """All cuts of ``p``, in ascending order of their bit representation.

    Raises :class:`SizeBoundExceeded` when more than ``limit`` cuts
    exist (the count can reach 2ⁿ on antichains).
    """
    return [Cut(p, m) for m in _cut_masks(p, limit)]


def _cut_masks(p: FinitePoset, limit: int) -> list[int]:
    try:
        return enumerate_cut_masks(p._up, p._down, p.n, limit)
    except RuntimeError:
        raise SizeBoundExceeded(
            f"poset has more than {limit} cuts; raise the limit to proceed"
        ) from None


def brute_force_cut_masks(p: FinitePoset) -> list[int]:
    """Filter all 2ⁿ subsets for (A⁺)⁻ = A.  Test oracle only."""
    return [
        m
        for m in range(1 << p.n)
        if p.lower_mask(p.upper_mask(m)) == m
    ]


def dm_complete(p: FinitePoset, limit: int = DEFAULT_CUT_LIMIT) -> Completion:
    """The Dedekind–MacNeille completion of ``p``.

    The lattice's elements are the cuts ordered by inclusion, labeled by
    their member sets (e.g. ``{a,b}``); the embedding sends x to the
    principal ideal (←, x].
    """
    masks = _cut_masks(p, limit)
    k = len(masks)
    mat = np.zeros((k, k), dtype=bool)
    for i, mi in enumerate(masks):
        for j, mj in enumerate(masks):
            if mi & mj == mi:
                mat[i, j] = True
    lattice = FinitePoset([_cut_label(p, m) for m in masks], mat, validate=False)
    index = {m: i for i, m in enumerate(masks)}
    embedding = tuple(index[p.down_mask(x)] for x in range(p.n))
    return Completion(base=p, lattice=lattice, cuts=tuple(masks), embedding=embedding)


# ---------------------------------------------------------------------------
# property verification
# ---------------------------------------------------------------------------

def _lattice_extreme(
    c: Completion, image_mask: int, candidate: int, *, upper: bool
) -> bool:
    """Verify ``candidate`` (a lattice index) is sup/inf of ``image_mask``.

    Verification, not search: the candidate is an upper (lower) bound
    iff the members all sit below (above) it, and least (greatest) iff
    its cone equals the common-bound set.
    """
    lat = c.lattice
    if upper:
        bounds = lat.upper_mask(image_mask)
        return bool((1 << candidate) & bounds) and lat._up[candidate] == bounds
    bounds = lat.lower_mask(image_mask)
    return bool((1 << candidate) & bounds) and lat._down[candidate] == bounds


def _subset_pool(n: int, exhaustive_bound: int, seed: int, samples: int) -> list[int]:
    if n <= exhaustive_bound:
        return list(range(1 << n))
    rng = np.random.default_rng(seed)
    pool = {0, (1 << n) - 1}
    while len(pool) < samples:
        bits = rng.integers(0, 2, size=n)
        pool.add(int("".join("1" if b else "0" for b in bits), 2))
    return sorted(pool)


def _witness(p: FinitePoset, subset_mask: int, expected, got) -> dict:
    return {
        "subset": list(p.labels_of(subset_mask)),
        "expected": expected,
        "got": got,
    }


def verify_completion_properties(
    c: Completion,
    exhaustive_bound: int = 10,
    seed: int = 0,
    samples: int = 4096,
) -> list[dict]:
    """Check the seven completion properties; one report entry each.

    Subsets of the base are checked exhaustively for n ≤
    ``exhaustive_bound`` and over a seeded sample otherwise.  Each entry
    is ``{"property": k, "status": "pass"|"fail", "witness": ...}`` with
    the witness None on pass and ``{subset, expected, got}`` on failure.
    """
    p = c.base
    lat = c.lattice
    report: list[dict] = []
    pool = _subset_pool(p.n, exhaustive_bound, seed, samples)
    image_of = c.embedding

    def image_mask_of(mask: int) -> int:
        out = 0
        for x in iter_bits(mask):
            out |= 1 << image_of[x]
        return out

    # (1) A⁻ is a cut for every subset A
    witness = None
    for a in pool:
        low = p.lower_mask(a)
        closed = p.lower_mask(p.upper_mask(low))
        if closed != low:
            witness = _witness(p, a, sorted(p.labels_of(low)), sorted(p.labels_of(closed)))
            break
    report.append({"property": 1, "status": "fail" if witness else "pass", "witness": witness})

    # (2) sup/inf of families of cuts: inf = intersection, sup = closure of union
    witness = None
    k = len(c.cuts)
    if k <= 128:
        families: Iterable[tuple[int, ...]] = (
            (i, j) for i in range(k) for j in range(i, k)
        )
    else:
        rng = np.random.default_rng(seed + 1)
        families = (
            (int(rng.integers(0, k)), int(rng.integers(0, k))) for _ in range(samples)
        )
    special: list[tuple[int, ...]] = [(), tuple(range(k))]
    for fam in list(special) + list(families):
        union = 0
        inter = p.full_mask
        fam_mask = 0
        for i in fam:
            union |= c.cuts[i]
            inter &= c.cuts[i]
            fam_mask |= 1 << i
        if not fam:
            inter = p.full_mask  # empty intersection convention: top cut
        sup_cut = p.lower_mask(p.upper_mask(union))
        inf_cut = inter
        try:
            sup_idx = c.cut_index(sup_cut)
            inf_idx = c.cut_index(inf_cut)
        except KeyError:
            witness = _witness(p, union, "closure/intersection is a cut", "not a cut")
            break
        if not _lattice_extreme(c, fam_mask, sup_idx, upper=True):
            witness = _witness(p, union, f"sup of family = {lat.labels[sup_idx]}", "not the sup")
            break
        if not _lattice_extreme(c, fam_mask, inf_idx, upper=False):
            witness = _witness(p, inter, f"inf of family = {lat.labels[inf_idx]}", "not the inf")
            break
    report.append({"property": 2, "status": "fail" if witness else "pass", "witness": witness})

    # (3) φ(x) = (←,x] is a cut; φ is injective and an order isomorphism
    witness = None
    if len(set(image_of)) != p.n:
        witness = {"subset": list(p.labels), "expected": "injective embedding", "got": "collision"}
    else:
        for x in range(p.n):
            down = p.down_mask(x)
            if c.cuts[image_of[x]] != down or p.lower_mask(p.upper_mask(down)) != down:
                witness = _witness(p, 1 << x, "(<-,x] is the embedded cut", sorted(p.labels_of(c.cuts[image_of[x]])))
                break
        else:
            for x in range(p.n):
                for y in range(p.n):
                    if p.leq_idx(x, y) != lat.leq_idx(image_of[x], image_of[y]):
                        witness = _witness(p, (1 << x) | (1 << y), "x<=y iff phi(x)<=phi(y)", "mismatch")
                        break
                if witness:
                    break
    report.append({"property": 3, "status": "fail" if witness else "pass", "witness": witness})

    # (4) join- and meet-density of the image
    witness = None
    for i, cut_mask in enumerate(c.cuts):
        below = image_mask_of(cut_mask)
        if not _lattice_extreme(c, below, i, upper=True):
            witness = {"subset": sorted(p.labels_of(cut_mask)), "expected": "cut = sup of image below it", "got": lat.labels[i]}
            break
        above = image_mask_of(p.upper_mask(cut_mask))
        if not _lattice_extreme(c, above, i, upper=False):
            witness = {"subset": sorted(p.labels_of(cut_mask)), "expected": "cut = inf of image above it", "got": lat.labels[i]}
            break
    report.append({"property": 4, "status": "fail" if witness else "pass", "witness": witness})

    # (5) φ preserves existing sups and infs, in both directions
    witness = None
    for a in pool:
        img = image_mask_of(a)
        sup_p = p.sup_mask(a)
        lat_sup = lat.sup_mask(img)  # completion is a complete lattice
        if sup_p is not None:
            if lat_sup != image_of[sup_p]:
                witness = _witness(p, a, f"sup phi[A] = phi({p.labels[sup_p]})", None if lat_sup is None else lat.labels[lat_sup])
                break
        elif lat_sup is not None and (1 << lat_sup) & c.image_mask:
            witness = _witness(p, a, "sup phi[A] outside the image when sup A is absent", lat.labels[lat_sup])
            break
        inf_p = p.inf_mask(a)
        lat_inf = lat.inf_mask(img)
        if inf_p is not None:
            if lat_inf != image_of[inf_p]:
                witness = _witness(p, a, f"inf phi[A] = phi({p.labels[inf_p]})", None if lat_inf is None else lat.labels[lat_inf])
                break
        elif lat_inf is not None and (1 << lat_inf) & c.image_mask:
            witness = _witness(p, a, "inf phi[A] outside the image when inf A is absent", lat.labels[lat_inf])
            break
    report.append({"property": 5, "status": "fail" if witness else "pass", "witness": witness})

    # (6) A⁻ = inf φ[A] and A⁺⁻ = sup φ[A], as cuts
    witness = None
    for a in pool:
        img = image_mask_of(a)
        low = p.lower_mask(a)
        closure = p.lower_mask(p.upper_mask(a))
        try:
            if not _lattice_extreme(c, img, c.cut_index(low), upper=False):
                witness = _witness(p, a, "A^- = inf phi[A]", sorted(p.labels_of(low)))
                break
            if not _lattice_extreme(c, img, c.cut_index(closure), upper=True):
                witness = _witness(p, a, "A^+- = sup phi[A]", sorted(p.labels_of(closure)))
                break
        except KeyError:
            witness = _witness(p, a, "A^- and A^+- are cuts", "not cuts")
            break
    report.append({"property": 6, "status": "fail" if witness else "pass", "witness": witness})

    # (7) inf φ[A⁺] = sup φ[A], and dually sup φ[A⁻] = inf φ[A]
    witness = None
    for a in pool:
        img = image_mask_of(a)
        up_img = image_mask_of(p.upper_mask(a))
        lo_img = image_mask_of(p.lower_mask(a))
        if lat.inf_mask(up_img) != lat.sup_mask(img):
            witness = _witness(p, a, "inf phi[A^+] = sup phi[A]", "mismatch")
            break
        if lat.sup_mask(lo_img) != lat.inf_mask(img):
            witness = _witness(p, a, "sup phi[A^-] = inf phi[A]", "mismatch")
            break
    report.append({"property": 7, "status": "fail" if witness else "pass", "witness": witness})

    return report
