import itertools
import random

import pytest

from ordertop.convergence import LassoSequence, o1_converges, o3_converges
from ordertop.errors import SizeBoundExceeded, UnboundedFiber, WitnessMismatch
from ordertop.poset import from_covers, random_poset
from ordertop.topology import (
    ClosureQuery,
    IndexMap,
    extract_convergent_subsequence,
    isotone_cofinal_restriction,
    oi_closure,
    topology_inclusion_report,
)


def diamond():
    return from_covers(
        ["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]
    )


def values_realizable_as_subsequence(
    f: LassoSequence, out: LassoSequence, laps: int = 40
) -> bool:
    """Greedy oracle: out's value stream embeds into f's value stream
    along strictly increasing indices, with out's cycle embeddable
    repeatedly (one lap of out per lap bound of f)."""
    want = [out.value_at(k) for k in range(len(out.prefix) + laps * len(out.cycle))]
    horizon_f = len(f.prefix) + (len(want) + 1) * len(f.cycle)
    stream_f = [f.value_at(k) for k in range(horizon_f)]
    pos = 0
    for v in want:
        while pos < len(stream_f) and stream_f[pos] != v:
            pos += 1
        if pos >= len(stream_f):
            return False
        pos += 1
    return True


class TestClosureOperator:
    def test_closure_is_idempotent_and_extensive(self):
        rng = random.Random(3)
        for _ in range(10):
            p = random_poset(rng.randint(1, 6), density=0.4, seed=rng.randint(0, 99))
            members = frozenset(
                lab for lab in p.labels if rng.random() < 0.5
            )
            for mode in ("o1", "o2", "o3", "odm"):
                cl = oi_closure(ClosureQuery(p, members, mode))
                assert members <= cl
                assert oi_closure(ClosureQuery(p, cl, mode)) == cl

    def test_closure_is_monotone(self):
        p = diamond()
        small = frozenset({"a"})
        large = frozenset({"a", "b"})
        for mode in ("o1", "o3"):
            assert oi_closure(ClosureQuery(p, small, mode)) <= oi_closure(
                ClosureQuery(p, large, mode)
            )

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            ClosureQuery(diamond(), frozenset(), "o9")


class TestInclusionReport:
    def test_diamond_everything_closed(self):
        rep = topology_inclusion_report(diamond())
        assert rep["subset_count"] == 16
        assert all(rep["all_subsets_closed"].values())
        assert all(rep["inclusions"].values())

    def test_antichain_trace_is_discrete(self):
        p = from_covers(["x", "y"], [])
        rep = topology_inclusion_report(p)
        assert rep["closed_counts"]["trace"] == 4
        assert rep["closed_counts"]["o1"] == 4

    @pytest.mark.parametrize("seed", range(8))
    def test_random_posets_inclusion_chain(self, seed):
        p = random_poset(1 + seed % 7, density=0.4, seed=seed * 17)
        rep = topology_inclusion_report(p)
        fams = rep["closed_families"]
        trace = {tuple(s) for s in fams["trace"]}
        o3 = {tuple(s) for s in fams["o3"]}
        o1 = {tuple(s) for s in fams["o1"]}
        assert trace <= o3 <= o1
        assert fams["o3"] == fams["odm"]
        assert fams["o1"] == fams["o2"]
        assert rep["inclusions"]["trace_within_o3"]
        assert rep["inclusions"]["o3_within_o2"]
        assert rep["inclusions"]["o2_within_o1"]
        assert rep["inclusions"]["o3_equals_odm"]
        assert rep["inclusions"]["o1_equals_o2"]

    def test_size_bound(self):
        with pytest.raises(SizeBoundExceeded):
            topology_inclusion_report(random_poset(9, density=0.3, seed=0), bound=7)


class TestIndexMap:
    def test_validation(self):
        IndexMap((0, 1, 1, 4))
        with pytest.raises(ValueError):
            IndexMap((0, -1))
        with pytest.raises(ValueError):
            IndexMap((0, 5), codomain=3)

    def test_restriction_is_isotone_and_cofinal(self):
        rng = random.Random(11)
        for _ in range(200):
            values = tuple(rng.randint(0, 30) for _ in range(rng.randint(1, 25)))
            h = IndexMap(values)
            kept = isotone_cofinal_restriction(h)
            sub = [values[i] for i in kept]
            assert sub == sorted(sub)  # isotone
            assert kept == sorted(kept)
            assert sub and sub[-1] == max(values)  # reaches the sup: cofinal image
            assert kept[0] == values.index(max(values[:1]))  # first element kept


class TestExtraction:
    def test_identity_fast_path(self):
        p = diamond()
        f = LassoSequence(p, [], ["b"])
        g = LassoSequence(p, [], ["b"])
        out = extract_convergent_subsequence(f, g, "b")
        assert out == f

    def test_value_gate(self):
        p = diamond()
        f = LassoSequence(p, [], ["a"])
        g = LassoSequence(p, [], ["b"])  # b is not a value of f
        with pytest.raises(WitnessMismatch, match="values"):
            extract_convergent_subsequence(f, g, "b")

    def test_nonconvergent_witness_rejected(self):
        p = diamond()
        f = LassoSequence(p, [], ["a", "1"])
        g = LassoSequence(p, [], ["a", "1"])
        with pytest.raises(WitnessMismatch):
            extract_convergent_subsequence(f, g, "1")

    def test_unbounded_fiber(self):
        p = diamond()
        f = LassoSequence(p, [], ["a", "b"])  # two cofinal values
        g = LassoSequence(p, ["a"], ["b"])
        with pytest.raises(UnboundedFiber):
            extract_convergent_subsequence(f, g, "b")

    def test_target_must_recur(self):
        p = diamond()
        f = LassoSequence(p, ["b"], ["a"])  # b occurs exactly once
        g = LassoSequence(p, [], ["b"])
        with pytest.raises(WitnessMismatch, match="finitely often"):
            extract_convergent_subsequence(f, g, "b")

    def test_tied_witness_indices_stay_realizable(self):
        p = from_covers(
            ["0", "a", "b", "c", "x", "1"],
            [("0", "a"), ("0", "b"), ("0", "c"), ("0", "x"),
             ("a", "1"), ("b", "1"), ("c", "1"), ("x", "1")],
        )
        f = LassoSequence(p, ["a", "b", "c"], ["x"])
        g = LassoSequence(p, ["c", "c"], ["x"])
        out = extract_convergent_subsequence(f, g, "x")
        assert o3_converges(out, "x").converges
        assert values_realizable_as_subsequence(f, out)

    def test_outputs_always_realizable_and_convergent(self):
        rng = random.Random(23)
        built = 0
        while built < 300:
            p = random_poset(rng.randint(2, 6), density=0.4, seed=rng.randint(0, 9999))
            labels = list(p.labels)
            x = rng.choice(labels)
            cyc = [x] + [rng.choice(labels) for _ in range(rng.randint(0, 2))]
            rng.shuffle(cyc)
            f = LassoSequence(
                p, [rng.choice(labels) for _ in range(rng.randint(0, 3))], cyc
            )
            g_prefix = [
                f.value_at(rng.randint(0, len(f.prefix) + len(f.cycle)))
                for _ in range(rng.randint(0, 2))
            ]
            g = LassoSequence(p, g_prefix, [x])
            try:
                out = extract_convergent_subsequence(f, g, x)
            except UnboundedFiber:
                assert len(set(f.cycle)) > 1
                continue
            except WitnessMismatch:
                continue
            built += 1
            assert o3_converges(out, x).converges
            assert values_realizable_as_subsequence(f, out)

    def test_poset_mismatch_rejected(self):
        f = LassoSequence(diamond(), [], ["a"])
        g = LassoSequence(random_poset(3, density=0.5, seed=1), [], ["e0"])
        with pytest.raises(ValueError):
            extract_convergent_subsequence(f, g, "a")
