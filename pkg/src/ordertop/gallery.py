"""Parameterized truncations of two classical infinite counterexample
posets, with certificate checkers for the claims made about them.

Infinite claims are decomposed into *finite facts at each truncation*
plus *persistence across a window of truncations*.  Truncation-boundary
elements (the largest copy index, the deepest chain rank) are tagged
and excluded from persistent-bound sets, because bounds computed at the
boundary are artifacts: e.g. the supremum of the a(−1)-family is its
last member in a truncation but the hub element e in the full object.

Wolk's poset: an antichain a₁, a₂, … under an antichain b₁, b₂, … with
a_n ≤ b_m iff n ≤ m, plus global bounds.  Its truncations certify that
no directed set avoiding 𝟏 has supremum 𝟏 while the b-sequence still
O₃-converges there (boundary-excluded reading).

Olejček's lattice: countably many ladder copies L_k glued along an
a(±1) spine through a hub e, with per-copy centers 0_k; removing the
0_k yields the poset whose b-set is O₁-closed but not closed in the
trace of the completion topology.  The negative chains follow the
Hasse data: a_k(−1) is the least of the negative a-chain and a_k(−i)
increases to 0_k as i grows (the displayed index rule and the figure
agree on this; the encoding is still flagged in the certificates'
parameters for auditability).

Every certificate is deterministic: same parameters, same evidence
bytes (canonical JSON).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Optional

from ._kernels import directed_subset_scan
from .convergence import LassoSequence, o1_converges, o3_converges
from .errors import SizeBoundExceeded, TruncationNotLattice, WindowTooSmall
from .poset import FinitePoset, from_covers

__all__ = [
    "Certificate",
    "WolkTruncation",
    "OlejcekTruncation",
    "wolk_truncate",
    "wolk_no_directed_sup_one",
    "wolk_o3_to_top",
    "directed_sup_certificate",
    "olejcek_truncate",
    "olejcek_zero_sequence_converges",
    "olejcek_b_set_o1_closed",
]

BOTTOM = "0"
TOP = "1"
HUB = "e"


@dataclass(frozen=True)
class Certificate:
    """A verified (or refuted) finite claim with structured evidence."""

    claim_id: str
    parameters: dict
    status: str
    evidence: dict

    def __post_init__(self) -> None:
        if self.status not in ("pass", "fail"):
            raise ValueError(f"status must be pass or fail, got {self.status!r}")
        if self.status == "pass" and not self.evidence:
            raise ValueError("a passing certificate requires evidence")

    def to_json(self) -> dict:
        return {
            "claim": self.claim_id,
            "parameters": self.parameters,
            "status": self.status,
            "evidence": self.evidence,
        }

    def canonical_bytes(self) -> bytes:
        """Reproducible serialization: same parameters → same bytes."""
        return json.dumps(
            self.to_json(), sort_keys=True, separators=(",", ":")
        ).encode()


# ---------------------------------------------------------------------------
# Wolk's example
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WolkTruncation:
    n: int
    poset: FinitePoset
    boundary: frozenset[str]


def wolk_truncate(n: int) -> WolkTruncation:
    """The 2n+2-element truncation: antichains a₁..a_n below b₁..b_n
    with a_i ≤ b_j iff i ≤ j, and global bounds.

    The boundary tags are {a_n, b_n}: relations involving the last rank
    change when the truncation grows.
    """
    if n < 1:
        raise ValueError("truncation depth must be at least 1")
    labels = [BOTTOM] + [f"a{i}" for i in range(1, n + 1)] + [
        f"b{i}" for i in range(1, n + 1)
    ] + [TOP]
    covers = [(BOTTOM, f"a{i}") for i in range(1, n + 1)]
    covers += [
        (f"a{i}", f"b{j}") for i in range(1, n + 1) for j in range(i, n + 1)
    ]
    covers += [(f"b{j}", TOP) for j in range(1, n + 1)]
    poset = from_covers(labels, covers)
    assert set(poset.covers()) == set(covers), "cover set not transitively reduced"
    return WolkTruncation(n=n, poset=poset, boundary=frozenset({f"a{n}", f"b{n}"}))


def directed_sup_certificate(p: FinitePoset, top_label: str) -> dict:
    """Exhaustively scan all subsets of ``p`` for directed ones and
    report the supremum landscape relative to ``top_label``.

    Returns counts, the largest directed subset avoiding the top
    (smallest bit pattern on ties) with its sup, and the first directed
    subset avoiding the top whose sup *is* the top (None when none
    exists — the certified fact).
    """
    top = p.index(top_label)
    n_directed, n_no_top, best_mask, best_sup, violation = directed_subset_scan(
        p._up, p._down, p.n, top
    )
    return {
        "element_count": p.n,
        "directed_subsets": n_directed,
        "directed_without_top": n_no_top,
        "largest_directed_without_top": {
            "members": sorted(p.labels_of(best_mask)),
            "sup": None if best_sup < 0 else p.labels[best_sup],
        },
        "violation": None if violation == 0 else sorted(p.labels_of(violation)),
    }


def wolk_no_directed_sup_one(n: int, exhaustive_bound: int = 8) -> Certificate:
    """Certify that no directed subset avoiding 𝟏 has supremum 𝟏.

    Exhaustive over all 2^(2n+2) subsets; this is the finite half of
    the O₂-failure argument for the b-sequence (the other half being
    :func:`wolk_o3_to_top`).
    """
    if n > exhaustive_bound:
        raise SizeBoundExceeded(
            f"2^{2 * n + 2} subsets exceed the exhaustive bound ({exhaustive_bound})"
        )
    trunc = wolk_truncate(n)
    evidence = directed_sup_certificate(trunc.poset, TOP)
    return Certificate(
        claim_id="wolk-no-directed-sup-one",
        parameters={"n": n},
        status="pass" if evidence["violation"] is None else "fail",
        evidence=evidence,
    )


def wolk_o3_to_top(n: int) -> Certificate:
    """Certify the O₃-to-𝟏 shadow for the sequence b₁, …, b_n (cycled
    at b_n).

    In the truncation the raw bound sets carry boundary artifacts: b_n
    bounds the whole a-antichain, so sup A = b_n and the decider sends
    the lasso to b_n, not 𝟏.  The certificate therefore records the raw
    facts *and* their boundary-excluded forms: stripped of {a_n, b_n},
    the upper bounds of A = {a₁..a_n} are exactly {𝟏} (with inf 𝟏),
    which is the infinite-object claim's persistent content.  M = A and
    the singleton family {𝟏} are recorded as the witness pair shape.
    """
    if n < 2:
        raise ValueError("the O3 certificate needs at least two b-elements")
    trunc = wolk_truncate(n)
    p = trunc.poset
    boundary_mask = p.subset_mask(trunc.boundary)

    seq = LassoSequence(p, [f"b{i}" for i in range(1, n)], [f"b{n}"])
    low_union = 0
    for k in range(len(seq.prefix) + 1):
        low_union |= p.lower_mask(seq.residual_mask(k))

    a_mask = p.subset_mask(f"a{i}" for i in range(1, n + 1))
    ub_raw = p.upper_mask(a_mask)
    ub_stable = ub_raw & ~boundary_mask
    least_stable = p.least_of(ub_stable)
    sup_a = p.sup_mask(a_mask)

    to_top = o3_converges(seq, TOP)
    to_bn = o3_converges(seq, f"b{n}")

    evidence = {
        "sequence": {"prefix": list(seq.prefix_labels()), "cycle": list(seq.cycle_labels())},
        "lower_bound_union": sorted(p.labels_of(low_union)),
        "contains_a_n": bool(low_union >> p.index(f"a{n}") & 1),
        "upper_bounds_of_A_raw": sorted(p.labels_of(ub_raw)),
        "upper_bounds_of_A_stable": sorted(p.labels_of(ub_stable)),
        "least_stable_upper_bound": None if least_stable is None else p.labels[least_stable],
        "sup_A_in_truncation": {
            "value": None if sup_a is None else p.labels[sup_a],
            "boundary_artifact": True,
        },
        "witness_shape": {"M": sorted(p.labels_of(a_mask)), "N_family": [TOP]},
        "decider_to_top": to_top.converges,
        "decider_to_b_n": to_bn.converges,
    }
    ok = (
        evidence["contains_a_n"]
        and evidence["upper_bounds_of_A_stable"] == [TOP]
        and evidence["least_stable_upper_bound"] == TOP
        and not to_top.converges  # truncation artifact, expected
        and to_bn.converges
    )
    return Certificate(
        claim_id="wolk-o3-to-top",
        parameters={"n": n},
        status="pass" if ok else "fail",
        evidence=evidence,
    )


# ---------------------------------------------------------------------------
# Olejček's example
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OlejcekTruncation:
    k: int
    n: int
    poset_l_hat: FinitePoset
    poset_l: FinitePoset
    boundary: frozenset[str]


def _a(k: int, i: int) -> str:
    return f"a{k}({i})"


def _b(k: int, i: int) -> str:
    return f"b{k}({i})"


def _zero(k: int) -> str:
    return f"0_{k}"


def _olejcek_labels(k_max: int, n_max: int) -> list[str]:
    labels = [BOTTOM]
    for k in range(1, k_max + 1):
        for i in range(-n_max, n_max + 1):
            if i == 0:
                labels.append(_zero(k))
            else:
                labels.append(_a(k, i))
                labels.append(_b(k, i))
    labels += [HUB, TOP]
    return labels


def olejcek_covers(k_max: int, n_max: int) -> list[tuple[str, str]]:
    """Hasse generators of the truncated glued-ladder lattice.

    Per copy k: negative chains rise a_k(−1) < a_k(−2) < … < a_k(−N) <
    0_k (same for b), positive chains fall 0_k < a_k(N) < … < a_k(1),
    with rungs a_k(i) ≤ b_k(i) for i ≥ 1 and b_k(i) ≤ a_k(i) for
    i ≤ −1.  Across copies: the spine a_k(−1) ≤ a_{k+1}(−1) and
    a_{k+1}(1) ≤ a_k(1), the hub a_k(−1) ≤ e ≤ a_k(1), and the global
    bounds 𝟎 ≤ b_k(−1), b_k(1) ≤ 𝟏.
    """
    covers: list[tuple[str, str]] = []
    for k in range(1, k_max + 1):
        for i in range(1, n_max):
            covers.append((_a(k, -i), _a(k, -(i + 1))))
            covers.append((_b(k, -i), _b(k, -(i + 1))))
            covers.append((_a(k, i + 1), _a(k, i)))
            covers.append((_b(k, i + 1), _b(k, i)))
        covers.append((_a(k, -n_max), _zero(k)))
        covers.append((_b(k, -n_max), _zero(k)))
        covers.append((_zero(k), _a(k, n_max)))
        covers.append((_zero(k), _b(k, n_max)))
        for i in range(1, n_max + 1):
            covers.append((_a(k, i), _b(k, i)))
            covers.append((_b(k, -i), _a(k, -i)))
        covers.append((_a(k, -1), HUB))
        covers.append((HUB, _a(k, 1)))
        covers.append((BOTTOM, _b(k, -1)))
        covers.append((_b(k, 1), TOP))
    for k in range(1, k_max):
        covers.append((_a(k, -1), _a(k + 1, -1)))
        covers.append((_a(k + 1, 1), _a(k, 1)))
    return covers


def olejcek_truncate(k: int, n: int) -> OlejcekTruncation:
    """Build the K-copy, depth-N truncation pair (with and without the
    0_k centers).

    The glued truncation must be a lattice; if the rule encoding broke
    that, :class:`TruncationNotLattice` reports the first offending
    pair rather than papering over it with extra bounds.  The 0_k-free
    poset inherits the induced order (relations through a removed 0_k
    persist).  Boundary tags: everything in copy K and everything at
    rank |i| = N.
    """
    if k < 1 or n < 1:
        raise ValueError("need at least one copy and depth one")
    hat = from_covers(_olejcek_labels(k, n), olejcek_covers(k, n))
    if not hat.is_lattice:
        for i in range(hat.n):
            for j in range(i + 1, hat.n):
                pair = (1 << i) | (1 << j)
                if hat.sup_mask(pair) is None or hat.inf_mask(pair) is None:
                    kind = "sup" if hat.sup_mask(pair) is None else "inf"
                    raise TruncationNotLattice(
                        f"K={k}, N={n}: pair ({hat.labels[i]}, {hat.labels[j]}) "
                        f"has no {kind}"
                    )
    survivors = [lab for lab in hat.labels if not lab.startswith("0_")]
    poset_l = hat.induced(survivors)
    boundary = {lab for lab in hat.labels if f"({n})" in lab or f"(-{n})" in lab}
    boundary |= {lab for lab in hat.labels if _copy_of(lab) == k}
    return OlejcekTruncation(
        k=k, n=n, poset_l_hat=hat, poset_l=poset_l, boundary=frozenset(boundary)
    )


_COPY_RE = re.compile(r"^[ab](\d+)\(|^0_(\d+)$")


def _copy_of(label: str) -> Optional[int]:
    """Copy index of an element, or None for the hub/bound elements."""
    m = _COPY_RE.match(label)
    if not m:
        return None
    return int(m.group(1) or m.group(2))


def olejcek_zero_sequence_converges(
    k: int,
    n: int,
    window_start: int = 2,
    truncation: Optional[OlejcekTruncation] = None,
) -> Certificate:
    """Certify the finite facts behind "(0_k) order-converges to e".

    Ladder facts, exact in the truncation for every window copy k' < K:
    inf {0_j : j ≥ k'} = a_{k'}(−1) and sup {0_j : j ≥ k'} = a_{k'}(1),
    with the a(−1)-prefix family inside the lower bounds.  Persistence:
    the elements that stay upper bounds of {a_i(−1) : i ≤ k'} for every
    k' in [window_start, K], stripped of boundary tags, have least
    element e.  The truncation's own sup of the full a(−1)-family is
    its last member — recorded as a boundary artifact, not a failure.

    ``truncation`` overrides the constructed poset (fault-injection
    hook); :class:`WindowTooSmall` demands K − window_start ≥ 2.
    """
    if k - window_start < 2:
        raise WindowTooSmall(
            f"window [{window_start}, {k}] spans {k - window_start} steps; "
            "persistence needs at least 2"
        )
    trunc = truncation if truncation is not None else olejcek_truncate(k, n)
    hat = trunc.poset_l_hat
    boundary_mask = hat.subset_mask(trunc.boundary & set(hat.labels))

    ladder = []
    ladder_ok = True
    for kp in range(window_start, k):
        tail = hat.subset_mask(_zero(j) for j in range(kp, k + 1))
        lb = hat.lower_mask(tail)
        inf_i = hat.inf_mask(tail)
        sup_i = hat.sup_mask(tail)
        fam = hat.subset_mask(_a(i, -1) for i in range(1, kp + 1))
        entry = {
            "k": kp,
            "inf_tail": None if inf_i is None else hat.labels[inf_i],
            "sup_tail": None if sup_i is None else hat.labels[sup_i],
            "a_minus_family_within_lower_bounds": fam & lb == fam,
        }
        entry["ok"] = (
            entry["inf_tail"] == _a(kp, -1)
            and entry["sup_tail"] == _a(kp, 1)
            and entry["a_minus_family_within_lower_bounds"]
        )
        ladder_ok = ladder_ok and entry["ok"]
        ladder.append(entry)

    persistent = hat.full_mask
    for kp in range(window_start, k + 1):
        fam = hat.subset_mask(_a(i, -1) for i in range(1, kp + 1))
        persistent &= hat.upper_mask(fam)
    stable = persistent & ~boundary_mask
    least = hat.least_of(stable)
    full_fam = hat.subset_mask(_a(i, -1) for i in range(1, k + 1))
    fam_sup = hat.sup_mask(full_fam)

    evidence = {
        "window": [window_start, k],
        "ladder": ladder,
        "persistent_upper_bounds_raw": sorted(hat.labels_of(persistent)),
        "persistent_upper_bounds_stable": sorted(hat.labels_of(stable)),
        "least_persistent_stable": None if least is None else hat.labels[least],
        "family_sup_in_truncation": {
            "value": None if fam_sup is None else hat.labels[fam_sup],
            "boundary_artifact": True,
        },
    }
    ok = ladder_ok and evidence["least_persistent_stable"] == HUB
    return Certificate(
        claim_id="olejcek-zero-sequence-converges-to-e",
        parameters={"k": k, "n": n, "window_start": window_start},
        status="pass" if ok else "fail",
        evidence=evidence,
    )


def _maximal_chains(p: FinitePoset, bound: int) -> list[tuple[int, ...]]:
    """All maximal chains (as index tuples), DFS over cover edges."""
    succ: dict[int, list[int]] = {i: [] for i in range(p.n)}
    indeg = [0] * p.n
    for lo, hi in p.cover_pairs:
        succ[lo].append(hi)
        indeg[hi] += 1
    chains: list[tuple[int, ...]] = []
    stack: list[int] = []

    def dfs(i: int) -> None:
        stack.append(i)
        if not succ[i]:
            chains.append(tuple(stack))
            if len(chains) > bound:
                raise SizeBoundExceeded(
                    f"more than {bound} maximal chains; raise the bound"
                )
        else:
            for j in succ[i]:
                dfs(j)
        stack.pop()

    for i in range(p.n):
        if indeg[i] == 0:
            dfs(i)
    return chains


def olejcek_b_set_o1_closed(
    k: int,
    n: int,
    truncation: Optional[OlejcekTruncation] = None,
    chain_bound: int = 500_000,
) -> Certificate:
    """Certify that the b-set is closed under O₁ limits, via the
    chain-structure argument and a direct decider sweep.

    Chain structure: splitting every maximal chain of the 0_k-free
    poset at the hub elements {𝟎, 𝟏, e} and the spine {a_k(±1)}, each
    remaining run lies in a single copy — so a monotone net eventually
    sits inside one copy or on the spine.  The stronger single-copy
    statement for whole chains is false (a chain may dive through one
    copy, ride the spine through e, and climb another); the certificate
    records how many chains do that rather than asserting otherwise.

    Decider sweep: every lasso valued in the b-set with cycle support of
    size ≤ 2 has all its O₁ limits inside the b-set.

    Completion-side evidence (for K, N ≥ 2): with boundary tags
    stripped, the least upper bound of each negative b-family in the
    glued lattice is 0_k, and the a(−1)-family's persistent least bound
    is e — the two facts that pull e into any closed superset of the
    b-set in the trace topology.
    """
    trunc = truncation if truncation is not None else olejcek_truncate(k, n)
    poset = trunc.poset_l
    hat = trunc.poset_l_hat
    b_set = {lab for lab in poset.labels if lab.startswith("b")}
    split = {BOTTOM, TOP, HUB} | {
        _a(j, s) for j in range(1, trunc.k + 1) for s in (1, -1)
    }

    chains = _maximal_chains(poset, chain_bound)
    segment_ok = True
    bad_segment = None
    literal_failures = 0
    literal_example = None
    for chain in chains:
        labs = [poset.labels[i] for i in chain]
        spine_free = [lab for lab in labs if lab not in split]
        run_copy: Optional[int] = None
        for lab in labs:
            if lab in split:
                run_copy = None
                continue
            c = _copy_of(lab)
            if run_copy is None:
                run_copy = c
            elif c != run_copy:
                segment_ok = False
                bad_segment = labs
        if spine_free and len({_copy_of(lab) for lab in spine_free}) > 1:
            literal_failures += 1
            if literal_example is None:
                literal_example = labs

    sweep_limits_inside = True
    sweep_counter = 0
    sweep_escape = None
    b_labels = sorted(b_set)
    cycles: list[tuple[str, ...]] = [(b,) for b in b_labels]
    cycles += [
        (b_labels[i], b_labels[j])
        for i in range(len(b_labels))
        for j in range(i + 1, len(b_labels))
    ]
    for cyc in cycles:
        s = LassoSequence(poset, (), cyc)
        for target in poset.labels:
            sweep_counter += 1
            if o1_converges(s, target).converges and target not in b_set:
                sweep_limits_inside = False
                sweep_escape = {"cycle": list(cyc), "limit": target}

    pulls: dict = {"b_negative_families": [], "a_minus_persistent_least": None}
    boundary_mask = hat.subset_mask(trunc.boundary & set(hat.labels))
    pulls_ok = True
    if trunc.k >= 2 and trunc.n >= 2:
        for kp in range(1, trunc.k):
            fam = hat.subset_mask(_b(kp, -i) for i in range(1, trunc.n + 1))
            stable = hat.upper_mask(fam) & ~boundary_mask & ~fam
            least = hat.least_of(stable)
            entry = {
                "copy": kp,
                "least_stable_upper_bound": None if least is None else hat.labels[least],
            }
            entry["ok"] = entry["least_stable_upper_bound"] == _zero(kp)
            pulls_ok = pulls_ok and entry["ok"]
            pulls["b_negative_families"].append(entry)
        fam = hat.subset_mask(_a(i, -1) for i in range(1, trunc.k + 1))
        stable = hat.upper_mask(fam) & ~boundary_mask
        least = hat.least_of(stable)
        pulls["a_minus_persistent_least"] = (
            None if least is None else hat.labels[least]
        )
        pulls_ok = pulls_ok and pulls["a_minus_persistent_least"] == HUB
    else:
        # at K = 1 there is no interior copy; at N = 1 every chain rank
        # is a boundary tag, so no stable bound survives the stripping
        pulls["skipped"] = "needs two copies and depth two for stable bounds"

    evidence = {
        "maximal_chain_count": len(chains),
        "segments_single_copy": segment_ok,
        "bad_segment": bad_segment,
        "single_copy_whole_chain_failures": literal_failures,
        "diagonal_chain_example": literal_example,
        "o1_sweep_decisions": sweep_counter,
        "o1_limits_inside_b_set": sweep_limits_inside,
        "o1_escape": sweep_escape,
        "completion_pull_facts": pulls,
    }
    ok = segment_ok and sweep_limits_inside and pulls_ok
    return Certificate(
        claim_id="olejcek-b-set-o1-closed",
        parameters={"k": k, "n": n},
        status="pass" if ok else "fail",
        evidence=evidence,
    )
