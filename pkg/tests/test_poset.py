import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ordertop.errors import CycleError, DuplicateLabelError, PosetFormatError
from ordertop.poset import (
    FinitePoset,
    format_poset,
    from_covers,
    inf,
    is_directed,
    is_filtered,
    is_lattice,
    is_monotone_order_separable,
    lower_bounds,
    parse_poset,
    random_poset,
    sup,
    to_dot,
    upper_bounds,
)


def diamond() -> FinitePoset:
    return from_covers(
        ["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]
    )


def chain(n: int) -> FinitePoset:
    labels = [f"c{i}" for i in range(n)]
    return from_covers(labels, list(zip(labels, labels[1:])))


class TestConstruction:
    def test_from_covers_transitive_closure(self):
        p = chain(4)
        assert p.leq("c0", "c3")
        assert not p.leq("c3", "c0")

    def test_duplicate_label_rejected(self):
        with pytest.raises(DuplicateLabelError):
            from_covers(["x", "x"], [])

    def test_self_cover_rejected(self):
        with pytest.raises(CycleError):
            from_covers(["x"], [("x", "x")])

    def test_cycle_rejected(self):
        with pytest.raises(CycleError):
            from_covers(["x", "y"], [("x", "y"), ("y", "x")])

    def test_unknown_label_in_cover(self):
        with pytest.raises(PosetFormatError):
            from_covers(["x"], [("x", "zz")])

    def test_leq_matrix_is_a_partial_order(self):
        p = random_poset(9, density=0.4, seed=5)
        m = p.leq_matrix()
        assert m.dtype == bool and m.shape == (9, 9)
        assert np.all(np.diag(m))
        assert not np.any(m & m.T & ~np.eye(9, dtype=bool))
        assert np.array_equal(m, (m @ m) | m)

    def test_direct_constructor_validates(self):
        bad = np.ones((2, 2), dtype=bool)  # x <= y and y <= x
        with pytest.raises(ValueError):
            FinitePoset(("x", "y"), bad)


class TestBoundOperators:
    def test_diamond_sup_inf(self):
        p = diamond()
        assert sup(p, ["a", "b"]) == "1"
        assert inf(p, ["a", "b"]) == "0"
        assert upper_bounds(p, ["a", "b"]) == frozenset({"1"})
        assert lower_bounds(p, ["a", "b"]) == frozenset({"0"})

    def test_empty_set_bounds_are_extremes(self):
        p = diamond()
        assert sup(p, []) == "0"
        assert inf(p, []) == "1"

    def test_antichain_has_no_sup(self):
        p = from_covers(["x", "y"], [])
        assert sup(p, ["x", "y"]) is None
        assert upper_bounds(p, ["x", "y"]) == frozenset()

    def test_bounds_against_bruteforce(self):
        p = random_poset(7, density=0.35, seed=11)
        for m in range(1 << 7):
            members = [i for i in range(7) if m >> i & 1]
            ub = {
                j
                for j in range(7)
                if all(p.leq_idx(i, j) for i in members)
            }
            got = p.upper_mask(m)
            assert got == sum(1 << j for j in ub)
            exp_sup = [j for j in ub if all(p.leq_idx(j, k) for k in ub)]
            got_sup = p.sup_mask(m)
            assert got_sup == (exp_sup[0] if exp_sup else None)

    def test_directed_filtered(self):
        p = diamond()
        assert is_directed(p, ["0", "a", "1"])
        assert not is_directed(p, [])
        assert not is_directed(p, ["a", "b"])  # no bound inside the set
        assert is_directed(p, ["a", "b", "1"])
        assert is_filtered(p, ["a", "b", "0"])

    def test_lattice_detection(self):
        assert is_lattice(diamond())
        assert is_lattice(chain(5))
        assert not is_lattice(from_covers(["x", "y"], []))

    def test_bottom_top_covers(self):
        p = diamond()
        assert p.bottom == p.index("0") and p.top == p.index("1")
        assert set(p.covers()) == {("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")}

    def test_monotone_order_separability_is_constant_true(self):
        assert is_monotone_order_separable(random_poset(6, density=0.3, seed=1))


class TestInduced:
    def test_relations_persist_through_removed_elements(self):
        p = chain(3)
        q = p.induced(["c0", "c2"])
        assert q.leq("c0", "c2")
        assert q.n == 2

    def test_unknown_member_rejected(self):
        with pytest.raises(KeyError):
            diamond().induced(["0", "zz"])


class TestSerialization:
    def test_round_trip(self):
        p = random_poset(8, density=0.3, seed=2)
        assert parse_poset(format_poset(p)) == p

    def test_parse_reports_line_numbers(self):
        with pytest.raises(PosetFormatError, match="line 3"):
            parse_poset("elem a\nelem b\ncover a\n")

    def test_parse_rejects_unknown_directive(self):
        with pytest.raises(PosetFormatError, match="unknown directive"):
            parse_poset("vertex a\n")

    def test_parse_rejects_cover_of_unknown_element(self):
        with pytest.raises(PosetFormatError, match="unknown element"):
            parse_poset("elem a\ncover a b\n")

    def test_comments_and_blank_lines_ignored(self):
        p = parse_poset("# title\nelem a\n\nelem b\ncover a b  # inline\n")
        assert p.leq("a", "b")

    def test_dot_contains_cover_edges_only(self):
        text = to_dot(chain(3))
        assert '"c0" -> "c1"' in text and '"c1" -> "c2"' in text
        assert '"c0" -> "c2"' not in text


class TestRandomPoset:
    def test_seed_determinism(self):
        a = random_poset(10, density=0.3, seed=42)
        b = random_poset(10, density=0.3, seed=42)
        assert a == b

    def test_density_extremes(self):
        assert random_poset(6, density=0.0, seed=0).cover_pairs == ()
        dense = random_poset(6, density=1.0, seed=0)
        assert is_lattice(dense)  # a chain

    @given(st.integers(1, 9), st.integers(0, 10_000))
    @settings(max_examples=60, deadline=None)
    def test_always_a_valid_partial_order(self, n, seed):
        p = random_poset(n, density=0.4, seed=seed)
        m = p.leq_matrix()
        assert np.all(np.diag(m))
        assert not np.any(m & m.T & ~np.eye(n, dtype=bool))
        assert np.array_equal(m, (m @ m) | m)
