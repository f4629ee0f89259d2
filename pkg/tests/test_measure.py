import random
from fractions import Fraction

import pytest

from ordertop.errors import (
    NoEscapeWithinDepth,
    NotConvergentInMeasure,
    ParameterOutOfRange,
    PosetFormatError,
)
from ordertop.measure import (
    DyadicSet,
    PowerCoefficientFunction,
    StepFunction,
    exact_fraction_root,
    format_step_function,
    gamma_K,
    holder_e4_check,
    integral,
    measure_ae_subsequence,
    p_power_norm,
    pairing,
    parse_step_function,
    rho_E,
    sigma_pq_separation,
    t5_escape_witness,
    t5_family_element,
    t5_symmetric_difference_certificate,
    t5_tree,
    tau_mu_sigma1_separation,
    uniform_integrability_profile,
)


def random_step(rng: random.Random, level_max: int = 4, signed: bool = True) -> StepFunction:
    lvl = rng.randint(0, level_max)
    lo = -6 if signed else 0
    coeffs = [
        Fraction(rng.randint(lo, 6), rng.randint(1, 4)) for _ in range(1 << lvl)
    ]
    return StepFunction(lvl, coeffs)


class TestStepFunction:
    def test_canonical_collapses_equal_siblings(self):
        f = StepFunction(2, [1, 1, 2, 2])
        assert f.level == 1
        assert f.coefficients == (Fraction(1), Fraction(2))
        assert StepFunction.constant(7).level == 0

    def test_level_coefficient_count(self):
        with pytest.raises(ValueError):
            StepFunction(2, [1, 2, 3])

    def test_refinement_is_exact(self):
        f = StepFunction(2, [1, 2, 3, 4])
        fine = StepFunction(5, f.at_level(5))
        assert fine == f
        assert integral(fine) == integral(f) == Fraction(5, 2)
        with pytest.raises(ValueError):
            f.at_level(1)

    def test_arithmetic_mixed_levels(self):
        f = StepFunction(1, [1, 3])
        g = StepFunction(2, [0, 1, 1, 0])
        assert integral(f + g) == integral(f) + integral(g)
        assert integral(f - g) == integral(f) - integral(g)
        h = f * g
        assert h.at_level(2) == (Fraction(0), Fraction(1), Fraction(3), Fraction(0))
        assert (-f).coefficients == (Fraction(-1), Fraction(-3))
        assert abs(StepFunction(1, [-2, 5])).coefficients == (Fraction(2), Fraction(5))

    def test_scalar_multiplication_both_sides(self):
        f = StepFunction(1, [1, 2])
        assert (Fraction(1, 2) * f).coefficients == (Fraction(1, 2), Fraction(1))
        assert (f * 3).coefficients == (Fraction(3), Fraction(6))

    def test_sup_norm_and_power(self):
        f = StepFunction(1, [-3, 2])
        assert f.sup_norm() == Fraction(3)
        assert f.power(2).coefficients == (Fraction(9), Fraction(4))


class TestDyadicSet:
    def test_interval(self):
        e = DyadicSet.interval(Fraction(1, 4), Fraction(3, 4))
        assert e.measure() == Fraction(1, 2)
        assert integral(e.indicator()) == Fraction(1, 2)
        with pytest.raises(ValueError):
            DyadicSet.interval(Fraction(1, 3), Fraction(1, 2))
        with pytest.raises(ValueError):
            DyadicSet.interval(Fraction(1, 2), Fraction(1, 4))

    def test_boolean_algebra(self):
        a = DyadicSet.interval(Fraction(0), Fraction(1, 2))
        b = DyadicSet.interval(Fraction(1, 4), Fraction(3, 4))
        assert (a & b).measure() == Fraction(1, 4)
        assert (a | b).measure() == Fraction(3, 4)
        assert (a ^ b).measure() == Fraction(1, 2)
        assert (a ^ a).measure() == 0
        assert DyadicSet.full().measure() == 1
        assert DyadicSet.empty().measure() == 0


class TestFunctionals:
    def test_pairing_overlap(self):
        f = DyadicSet.interval(Fraction(0), Fraction(1, 2)).indicator()
        g = DyadicSet.interval(Fraction(1, 4), Fraction(3, 4)).indicator()
        assert pairing(f, g) == Fraction(1, 4)

    def test_p_power_norm(self):
        f = StepFunction(1, [-2, 1])
        assert p_power_norm(f, 2) == Fraction(5, 2)
        with pytest.raises(ValueError):
            p_power_norm(f, 0)

    def test_rho_caps_at_indicator(self):
        e = DyadicSet.interval(Fraction(0), Fraction(1, 4))
        assert rho_E(StepFunction.constant(5), e) == Fraction(1, 4)
        assert rho_E(StepFunction.constant(Fraction(1, 8)), e) == Fraction(1, 32)
        assert rho_E(StepFunction.constant(-5), e) == Fraction(1, 4)

    def test_rho_dominations(self):
        rng = random.Random(7)
        full = DyadicSet.full()
        for _ in range(100):
            f = random_step(rng)
            e = DyadicSet(2, [rng.random() < 0.5 for _ in range(4)])
            assert rho_E(f, e) <= e.measure()
            assert rho_E(f, e) <= integral(abs(f))
            assert rho_E(f, e) <= rho_E(f, full)

    def test_pairing_dominated_by_l1_of_product(self):
        rng = random.Random(8)
        for _ in range(100):
            f, g = random_step(rng), random_step(rng)
            assert abs(pairing(f, g)) <= integral(abs(f * g))

    def test_gamma_is_a_seminorm(self):
        rng = random.Random(9)
        for _ in range(60):
            gens = [random_step(rng) for _ in range(rng.randint(1, 3))]
            f, g = random_step(rng), random_step(rng)
            c = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
            assert gamma_K(f + g, gens) <= gamma_K(f, gens) + gamma_K(g, gens)
            assert gamma_K(c * f, gens) == abs(c) * gamma_K(f, gens)
        with pytest.raises(ValueError):
            gamma_K(StepFunction.constant(1), [])

    def test_uniform_integrability_profile(self):
        fam = [StepFunction(2, [4, 0, 0, 0]), StepFunction.constant(1)]
        table = uniform_integrability_profile(fam, [Fraction(1, 2), 2, 5])
        assert table[0] == (Fraction(1, 2), Fraction(1))
        assert table[1] == (Fraction(2), Fraction(1))
        assert table[2] == (Fraction(5), Fraction(0))
        worsts = [w for _, w in table]
        assert worsts == sorted(worsts, reverse=True)
        with pytest.raises(ValueError):
            uniform_integrability_profile(fam, [2, 1])
        with pytest.raises(ValueError):
            uniform_integrability_profile(fam, [0, 1])


class TestSerialization:
    def test_round_trip(self):
        f = StepFunction(2, [Fraction(1, 3), 2, 2, Fraction(-5, 4)])
        assert parse_step_function(format_step_function(f)) == f

    def test_errors(self):
        with pytest.raises(PosetFormatError):
            parse_step_function("nope")
        with pytest.raises(PosetFormatError):
            parse_step_function("2;1,2,3")
        with pytest.raises(PosetFormatError):
            parse_step_function("1;a,b")


class TestExactRoots:
    def test_perfect_and_imperfect(self):
        assert exact_fraction_root(Fraction(8, 27), 3) == Fraction(2, 3)
        assert exact_fraction_root(Fraction(4), 2) == 2
        assert exact_fraction_root(Fraction(2), 2) is None
        assert exact_fraction_root(Fraction(10**40), 4) == 10**10

    def test_power_coefficient_validation(self):
        with pytest.raises(ValueError):
            PowerCoefficientFunction(0, {1: Fraction(1)})
        with pytest.raises(ValueError):
            PowerCoefficientFunction(2, {0: Fraction(1)})
        with pytest.raises(ValueError):
            PowerCoefficientFunction(2, {1: Fraction(-1)})
        a = PowerCoefficientFunction(2, {1: Fraction(4)})
        b = PowerCoefficientFunction(3, {1: Fraction(4)})
        with pytest.raises(ValueError):
            a.pointwise_product(b)
        prod = a.pointwise_product(PowerCoefficientFunction(2, {1: Fraction(2), 5: Fraction(9)}))
        assert prod.shell_powers() == {1: Fraction(8)}


class TestHalvingTree:
    def test_tree_measures(self):
        a_sets, b_sets = t5_tree(6)
        for n, (a, b) in enumerate(zip(a_sets, b_sets), start=1):
            assert a.measure() == Fraction(1, 2)
            assert b.measure() == Fraction(1, 1 << n)
            assert (a & b).measure() == 0  # cell 0 is even-indexed

    def test_family_element(self):
        f = t5_family_element(2, 2)
        assert integral(f) == Fraction(1, 4) + Fraction(1, 2)
        assert f.sup_norm() == 2
        assert gamma_K(f, [StepFunction.constant(1)]) == Fraction(3, 4)

    def test_symmetric_difference_certificate(self):
        cert = t5_symmetric_difference_certificate(12)
        assert cert.status == "pass"
        assert cert.evidence["pairs_checked"] == 66
        assert cert.evidence["counterexample"] is None
        with pytest.raises(ValueError):
            t5_symmetric_difference_certificate(1)

    def test_escape_witness_constant_generator(self):
        m, n, f, gamma = t5_escape_witness([StepFunction.constant(1)])
        assert (m, n) == (2, 2)
        assert gamma == Fraction(3, 4)
        assert f == t5_family_element(2, 2)

    def test_escape_bounded_by_one_for_signed_generators(self):
        rng = random.Random(13)
        for _ in range(30):
            gens = [random_step(rng, level_max=5) for _ in range(rng.randint(1, 4))]
            m, n, f, gamma = t5_escape_witness(gens, max_depth=256)
            assert gamma <= 1

    def test_no_escape_within_depth(self):
        with pytest.raises(NoEscapeWithinDepth):
            t5_escape_witness([StepFunction.constant(1)], max_depth=1)
        with pytest.raises(ValueError):
            t5_escape_witness([])


class TestSeparationCertificates:
    def test_sigma_pq(self):
        cert = sigma_pq_separation(1, 2, Fraction(3, 2), 200, Fraction(1, 10))
        assert cert.status == "pass"
        ev = cert.evidence
        assert ev["q_norm_all_one"] and ev["q_norm_counterexample"] is None
        assert ev["escape_index"] == 22
        assert ev["selected_indices_prefix"][0] == 1
        assert Fraction(ev["escape_moment_power"]) < Fraction(ev["epsilon_power"])

    def test_sigma_pq_other_exponents(self):
        # escape needs n^{α(q−p)/q} > ε^{−p}: here n^{5/8} > 16, n = 85
        cert = sigma_pq_separation(2, 4, Fraction(5, 4), 100, Fraction(1, 4))
        assert cert.evidence["q_norm_all_one"]
        assert cert.status == "pass"
        assert cert.evidence["escape_index"] == 85

    def test_sigma_pq_parameter_guards(self):
        with pytest.raises(ParameterOutOfRange):
            sigma_pq_separation(2, 2, Fraction(3, 2), 10, Fraction(1, 10))
        with pytest.raises(ParameterOutOfRange):
            sigma_pq_separation(1, 2, Fraction(5, 2), 10, Fraction(1, 10))
        with pytest.raises(ParameterOutOfRange):
            sigma_pq_separation(1, 2, Fraction(1), 10, Fraction(1, 10))
        with pytest.raises(ParameterOutOfRange):
            sigma_pq_separation(1, 2, Fraction(3, 2), 10, Fraction(0))

    def test_tau_mu(self):
        cert = tau_mu_sigma1_separation(9)
        assert cert.status == "pass"
        rows = cert.evidence["rows"]
        by_n = {r["n"]: r for r in rows}
        assert by_n[4]["pairing_exact"] == "2"
        assert by_n[9]["pairing_exact"] == "3"
        assert by_n[2]["pairing_exact"] is None  # √2 is irrational
        assert by_n[1]["rho_full"] == "1/2"
        assert cert.evidence["pairing_strictly_increasing"]

    def test_tau_mu_guards(self):
        with pytest.raises(ValueError):
            tau_mu_sigma1_separation(1)
        with pytest.raises(ParameterOutOfRange):
            tau_mu_sigma1_separation(5, alpha=Fraction(5, 2))


class TestHolderChain:
    def test_equality_case(self):
        one = StepFunction.constant(1)
        assert holder_e4_check(one, one, 1, 2)

    def test_random_nonnegative_pairs(self):
        rng = random.Random(17)
        for _ in range(100):
            f = random_step(rng, signed=False)
            g = random_step(rng, signed=False)
            p = rng.randint(1, 3)
            q = p + rng.randint(1, 3)
            assert holder_e4_check(f, g, p, q)

    def test_guards(self):
        one = StepFunction.constant(1)
        with pytest.raises(ValueError):
            holder_e4_check(one, one, 2, 2)
        with pytest.raises(ValueError):
            holder_e4_check(StepFunction(1, [-1, 1]), one, 1, 2)


class TestAlmostEverywhereSubsequence:
    def test_decaying_sequence(self):
        seq = [StepFunction.constant(Fraction(1, 1 << k)) for k in range(1, 8)]
        limit = StepFunction.constant(0)
        idx = measure_ae_subsequence(seq, limit)
        assert idx == sorted(set(idx))
        full = DyadicSet.full()
        for k, i in enumerate(idx, start=1):
            assert rho_E(seq[i] - limit, full) <= Fraction(1, 1 << k)

    def test_constant_sequence_at_limit(self):
        seq = [StepFunction.constant(3)] * 5
        idx = measure_ae_subsequence(seq, StepFunction.constant(3))
        assert idx == [0, 1, 2, 3, 4]

    def test_stuck_sequence(self):
        seq = [StepFunction.constant(Fraction(1, 2))] * 6
        with pytest.raises(NotConvergentInMeasure):
            measure_ae_subsequence(seq, StepFunction.constant(0))
