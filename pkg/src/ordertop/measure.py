"""Exact-rational model of Lebesgue measure on [0,1) with dyadic step
functions, the seminorms of the five function-space topologies, and
certificate checkers for the two separation constructions.

Everything rational is exact (`fractions.Fraction`); the only floats
live in :func:`holder_e4_check`, whose exponents are genuinely
irrational-producing.  Irrational coefficients (q-th roots of rational
numbers) are carried via an exact power: for a target exponent α = a/b
and norm index q, every value of the form rational^(1/(b·q)) is stored
as its (b·q)-th power and roots are extracted exactly only where the
construction guarantees they exist.

The depth-indexed families of the separation arguments live on the
dyadic shells A_n = [2⁻ⁿ, 2⁻ⁿ⁺¹), which are pairwise disjoint with
μ(A_n) = 2⁻ⁿ; the shell representation is sparse because a dense
level-n grid is unrepresentable for the depths the certificates need
(n up to 200).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import (
    NoEscapeWithinDepth,
    NotConvergentInMeasure,
    ParameterOutOfRange,
    PosetFormatError,
)
from .gallery import Certificate

__all__ = [
    "StepFunction",
    "DyadicSet",
    "PowerCoefficientFunction",
    "parse_step_function",
    "format_step_function",
    "integral",
    "pairing",
    "p_power_norm",
    "rho_E",
    "gamma_K",
    "uniform_integrability_profile",
    "t5_tree",
    "t5_family_element",
    "t5_symmetric_difference_certificate",
    "t5_escape_witness",
    "sigma_pq_separation",
    "tau_mu_sigma1_separation",
    "holder_e4_check",
    "measure_ae_subsequence",
]


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _canonical(level: int, values: tuple) -> tuple[int, tuple]:
    """Collapse equal dyadic siblings until the level is minimal."""
    while level > 0 and all(
        values[2 * i] == values[2 * i + 1] for i in range(len(values) // 2)
    ):
        values = values[::2]
        level -= 1
    return level, values


@dataclass(frozen=True)
class StepFunction:
    """A function on [0,1) constant on the 2^level dyadic cells,
    stored at the unique minimal level."""

    level: int
    coefficients: tuple[Fraction, ...]

    def __init__(self, level: int, coefficients: Iterable) -> None:
        coeffs = tuple(_as_fraction(c) for c in coefficients)
        if level < 0 or len(coeffs) != 1 << level:
            raise ValueError(f"level {level} needs {1 << level} coefficients")
        level, coeffs = _canonical(level, coeffs)
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "coefficients", coeffs)

    @staticmethod
    def constant(c) -> "StepFunction":
        return StepFunction(0, (c,))

    def at_level(self, level: int) -> tuple[Fraction, ...]:
        """Coefficients refined to a (not lower) level."""
        if level < self.level:
            raise ValueError("cannot coarsen below the canonical level")
        reps = 1 << (level - self.level)
        return tuple(c for c in self.coefficients for _ in range(reps))

    def _zip(self, other: "StepFunction"):
        lvl = max(self.level, other.level)
        return lvl, self.at_level(lvl), other.at_level(lvl)

    def __add__(self, other: "StepFunction") -> "StepFunction":
        lvl, a, b = self._zip(other)
        return StepFunction(lvl, (x + y for x, y in zip(a, b)))

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        lvl, a, b = self._zip(other)
        return StepFunction(lvl, (x - y for x, y in zip(a, b)))

    def __mul__(self, other) -> "StepFunction":
        if isinstance(other, StepFunction):
            lvl, a, b = self._zip(other)
            return StepFunction(lvl, (x * y for x, y in zip(a, b)))
        c = _as_fraction(other)
        return StepFunction(self.level, (c * x for x in self.coefficients))

    __rmul__ = __mul__

    def __abs__(self) -> "StepFunction":
        return StepFunction(self.level, (abs(c) for c in self.coefficients))

    def __neg__(self) -> "StepFunction":
        return StepFunction(self.level, (-c for c in self.coefficients))

    def sup_norm(self) -> Fraction:
        return max(abs(c) for c in self.coefficients)

    def power(self, k: int) -> "StepFunction":
        return StepFunction(self.level, (c**k for c in self.coefficients))


@dataclass(frozen=True)
class DyadicSet:
    """A finite union of dyadic cells of [0,1), minimal-level form."""

    level: int
    membership: tuple[bool, ...]

    def __init__(self, level: int, membership: Iterable) -> None:
        bits = tuple(bool(b) for b in membership)
        if level < 0 or len(bits) != 1 << level:
            raise ValueError(f"level {level} needs {1 << level} cells")
        level, bits = _canonical(level, bits)
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "membership", bits)

    @staticmethod
    def empty() -> "DyadicSet":
        return DyadicSet(0, (False,))

    @staticmethod
    def full() -> "DyadicSet":
        return DyadicSet(0, (True,))

    @staticmethod
    def interval(a: Fraction, b: Fraction) -> "DyadicSet":
        """[a, b) for dyadic endpoints with 0 ≤ a ≤ b ≤ 1."""
        a, b = _as_fraction(a), _as_fraction(b)
        if not 0 <= a <= b <= 1:
            raise ValueError("need 0 <= a <= b <= 1")
        level = 0
        for x in (a, b):
            den = x.denominator
            if den & (den - 1):
                raise ValueError(f"{x} is not dyadic")
            level = max(level, den.bit_length() - 1)
        lo, hi = int(a * (1 << level)), int(b * (1 << level))
        return DyadicSet(level, tuple(lo <= i < hi for i in range(1 << level)))

    def at_level(self, level: int) -> tuple[bool, ...]:
        if level < self.level:
            raise ValueError("cannot coarsen below the canonical level")
        reps = 1 << (level - self.level)
        return tuple(b for b in self.membership for _ in range(reps))

    def measure(self) -> Fraction:
        return Fraction(sum(self.membership), 1 << self.level)

    def indicator(self) -> StepFunction:
        return StepFunction(self.level, (int(b) for b in self.membership))

    def _zip(self, other: "DyadicSet"):
        lvl = max(self.level, other.level)
        return lvl, self.at_level(lvl), other.at_level(lvl)

    def __and__(self, other: "DyadicSet") -> "DyadicSet":
        lvl, a, b = self._zip(other)
        return DyadicSet(lvl, (x and y for x, y in zip(a, b)))

    def __or__(self, other: "DyadicSet") -> "DyadicSet":
        lvl, a, b = self._zip(other)
        return DyadicSet(lvl, (x or y for x, y in zip(a, b)))

    def __xor__(self, other: "DyadicSet") -> "DyadicSet":
        lvl, a, b = self._zip(other)
        return DyadicSet(lvl, (x != y for x, y in zip(a, b)))


@dataclass(frozen=True)
class PowerCoefficientFunction:
    """A nonnegative function supported on dyadic shells
    A_n = [2⁻ⁿ, 2⁻ⁿ⁺¹), constant on each, whose value c on shell n is
    carried exactly as c^q (``shells[n]``).

    The shell (sparse) carrier replaces a dense cell grid because the
    separation certificates run to depths where 2^level cells cannot be
    materialized; every function in those constructions is
    shell-constant.
    """

    q: int
    shells: tuple[tuple[int, Fraction], ...]

    def __init__(self, q: int, shells) -> None:
        if q < 1:
            raise ValueError("power index q must be >= 1")
        items = dict(shells)
        norm = tuple(
            sorted((int(n), _as_fraction(v)) for n, v in items.items() if v != 0)
        )
        for n, v in norm:
            if n < 1 or v < 0:
                raise ValueError("shells are indexed from 1 and powers nonnegative")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "shells", norm)

    def shell_powers(self) -> dict[int, Fraction]:
        return dict(self.shells)

    def pointwise_product(
        self, other: "PowerCoefficientFunction"
    ) -> "PowerCoefficientFunction":
        if self.q != other.q:
            raise ValueError("power indices must match")
        a, b = self.shell_powers(), other.shell_powers()
        return PowerCoefficientFunction(
            self.q, {n: a[n] * b[n] for n in a.keys() & b.keys()}
        )


def _integer_nth_root(v: int, k: int) -> Optional[int]:
    """Exact k-th root of a nonnegative integer, or None."""
    if v < 0:
        return None
    if v in (0, 1) or k == 1:
        return v
    x = 1 << -(-v.bit_length() // k)
    while True:
        y = ((k - 1) * x + v // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x if x**k == v else None


def exact_fraction_root(x: Fraction, k: int) -> Optional[Fraction]:
    """Exact k-th root of a nonnegative rational, or None."""
    x = _as_fraction(x)
    num = _integer_nth_root(x.numerator, k)
    den = _integer_nth_root(x.denominator, k)
    if num is None or den is None:
        return None
    return Fraction(num, den)


# ---------------------------------------------------------------------------
# Serialization: "level;c0,c1,…" with rationals "num/den"
# ---------------------------------------------------------------------------

def format_step_function(f: StepFunction) -> str:
    return f"{f.level};" + ",".join(str(c) for c in f.coefficients)


def parse_step_function(text: str) -> StepFunction:
    head, sep, tail = text.strip().partition(";")
    if not sep:
        raise PosetFormatError("expected 'level;c0,c1,…'")
    try:
        level = int(head)
        coeffs = [Fraction(tok.strip()) for tok in tail.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise PosetFormatError(f"bad step function: {exc}") from None
    if level < 0 or len(coeffs) != 1 << level:
        raise PosetFormatError(
            f"level {level} requires {1 << max(level, 0)} coefficients, "
            f"got {len(coeffs)}"
        )
    return StepFunction(level, coeffs)


# ---------------------------------------------------------------------------
# Seminorm building blocks
# ---------------------------------------------------------------------------

def integral(f: StepFunction) -> Fraction:
    """∫ f dμ, exact."""
    return Fraction(sum(f.coefficients), 1 << f.level)


def pairing(f: StepFunction, g: StepFunction) -> Fraction:
    """⟨f, g⟩ = ∫ fg dμ, exact."""
    return integral(f * g)


def p_power_norm(f: StepFunction, p: int) -> Fraction:
    """∫ |f|^p dμ — the p-th power of the p-norm, kept rational."""
    if p < 1:
        raise ValueError("p must be a positive integer")
    return integral(abs(f).power(p))


def rho_E(f: StepFunction, E: DyadicSet) -> Fraction:
    """The F-seminorm ∫ (|f| ∧ χ_E) generating convergence in measure
    on E."""
    lvl = max(f.level, E.level)
    vals = abs(f).at_level(lvl)
    mask = E.at_level(lvl)
    total = sum(min(v, Fraction(1)) for v, m in zip(vals, mask) if m)
    return Fraction(total, 1 << lvl)


def gamma_K(f: StepFunction, generators: Sequence[StepFunction]) -> Fraction:
    """sup of |⟨f, g⟩| over the absolutely convex hull of the
    generators — attained at a generator up to sign, so the max of the
    finitely many |pairings| is exact."""
    if not generators:
        raise ValueError("generators must be nonempty")
    return max(abs(pairing(f, g)) for g in generators)


def uniform_integrability_profile(
    family: Sequence[StepFunction], cutoffs: Sequence[Fraction]
) -> list[tuple[Fraction, Fraction]]:
    """For each cutoff c: sup over the family of ∫_{|f|>c} |f|, exact.

    A finite family is always uniformly integrable; the table exhibits
    the decay to 0 as the cutoff grows.
    """
    cuts = [_as_fraction(c) for c in cutoffs]
    if any(c <= 0 for c in cuts) or any(a >= b for a, b in zip(cuts, cuts[1:])):
        raise ValueError("cutoffs must be positive and increasing")
    table = []
    for c in cuts:
        worst = Fraction(0)
        for f in family:
            a = abs(f)
            tail = sum(v for v in a.coefficients if v > c)
            worst = max(worst, Fraction(tail, 1 << a.level))
        table.append((c, worst))
    return table


# ---------------------------------------------------------------------------
# The closed-but-dense family (halving tree)
# ---------------------------------------------------------------------------

def t5_tree(levels: int) -> tuple[list[DyadicSet], list[DyadicSet]]:
    """The halving tree on A = [0,1): at level n the 2ⁿ dyadic cells
    A_{n,1..2ⁿ}; A_n is the union of the even-indexed cells and
    B_n = A_{n,1} = [0, 2⁻ⁿ), so μ(A_n) = 1/2 and μ(B_n) = 2⁻ⁿ."""
    if levels < 1:
        raise ValueError("levels must be >= 1")
    a_sets, b_sets = [], []
    for n in range(1, levels + 1):
        cells = 1 << n
        a_sets.append(DyadicSet(n, tuple(i % 2 == 1 for i in range(cells))))
        b_sets.append(DyadicSet(n, tuple(i == 0 for i in range(cells))))
    return a_sets, b_sets


def t5_family_element(m: int, n: int) -> StepFunction:
    """The family member (1/m)·χ_{A_n} + m·χ_{B_n}."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be >= 1")
    a_sets, b_sets = t5_tree(n)
    return Fraction(1, m) * a_sets[-1].indicator() + m * b_sets[-1].indicator()


def t5_symmetric_difference_certificate(max_n: int) -> Certificate:
    """Verify μ(A_n △ A_{n'}) = μ(A)/2 = 1/2 exactly for ALL distinct
    pairs n, n' ≤ max_n (the consecutive-index special case n' = n + 1
    holds a fortiori; the dyadic realization satisfies the stronger
    all-pairs form)."""
    if max_n < 2:
        raise ValueError("need at least two levels")
    a_sets, _ = t5_tree(max_n)
    half = Fraction(1, 2)
    checked = 0
    counterexample = None
    for i, j in itertools.combinations(range(max_n), 2):
        checked += 1
        got = (a_sets[i] ^ a_sets[j]).measure()
        if got != half and counterexample is None:
            counterexample = {"n": i + 1, "n_prime": j + 1, "measure": str(got)}
    return Certificate(
        claim_id="t5-symmetric-difference-half",
        parameters={"max_n": max_n},
        status="pass" if counterexample is None else "fail",
        evidence={
            "pairs_checked": checked,
            "expected": "1/2",
            "counterexample": counterexample,
        },
    )


def t5_escape_witness(
    generators: Sequence[StepFunction], max_depth: int = 64
) -> tuple[int, int, StepFunction, Fraction]:
    """Run the escape recipe showing 0 is in the γ_K-closure of the
    family: pick m ≥ 2·(worst total mass of a generator), then the
    first n with every generator's mass on B_n at most 1/(2m); the
    returned element f_{m,n} then has γ_K(f_{m,n}) ≤ 1/2 + 1/2 = 1.

    The mass bound uses ∫|g| rather than |∫g| so the γ ≤ 1 guarantee
    survives sign-changing generators (the two coincide on the
    constant-sign generators of the worked examples).
    """
    if not generators:
        raise ValueError("generators must be nonempty")
    gamma_abs = max(integral(abs(g)) for g in generators)
    m = max(1, -(-(2 * gamma_abs).numerator // (2 * gamma_abs).denominator))
    threshold = Fraction(1, 2 * m)
    for n in range(1, max_depth + 1):
        b_n = DyadicSet.interval(Fraction(0), Fraction(1, 1 << n))
        if max(integral(abs(g) * b_n.indicator()) for g in generators) <= threshold:
            f = t5_family_element(m, n)
            gamma = gamma_K(f, generators)
            assert gamma <= 1, "escape guarantee violated"
            return m, n, f, gamma
    raise NoEscapeWithinDepth(
        f"no level ≤ {max_depth} brings every generator's mass near 0 "
        f"below {threshold}"
    )


# ---------------------------------------------------------------------------
# Shell arithmetic for the seminorm-separation certificates
# ---------------------------------------------------------------------------

def _shell_e(n: int, a: int, b: int, q: int) -> Fraction:
    """(b·q)-th power of the coefficient of e_n = (n^{a/b})^{1/q} χ_{A_n}."""
    return Fraction(n**a)


def _shell_g(n: int, a: int, b: int, q: int) -> Fraction:
    """(b·q)-th power of the g-weight λ_n^{1/q}, λ_n = (n^{a/b} μ(A_n))⁻¹."""
    return Fraction(2 ** (n * b), n**a)


def _shell_h(n: int, a: int, b: int) -> Fraction:
    """b-th power of the h-density λ_n = 2ⁿ n^{−a/b} on shell n."""
    return Fraction(2 ** (n * b), n**a)


def sigma_pq_separation(
    p: int,
    q: int,
    alpha: Fraction,
    n_max: int,
    epsilon: Fraction,
) -> Certificate:
    """Certify the two finite halves of "σ_p ⊊ σ_q": with
    e_n = (n^α)^{1/q} χ_{A_n} on the disjoint shells A_n,

    (a) ‖e_n g‖_q^q = 1 exactly for every n ≤ n_max, with g the
        weighted sum of shell indicators normalized per shell — so the
        e_n stay uniformly far from 0 in every σ_q-seminorm built on g;
    (b) some admissible index n ≤ n_max has h-weighted moment
        ∫|e_n|^p h dμ < ε^p for the density h = 2ⁿn^{−α} on A_n,
        exhibited by the selection rule n·λ_n ≤ 1 with λ_n = n^α μ(A_n)
        — so 0 is a σ_p-limit point.  (At p = 1 the moment is ‖e_n h‖₁;
        for p ≥ 2 the weight must stay outside the power, since
        ∫(e_n h)^p grows like 2^{n(p−1)}.)

    All comparisons are exact: every quantity is a rational power of
    rationals and is compared after raising to the (b·q)-th power,
    where α = a/b in lowest terms.
    """
    alpha = _as_fraction(alpha)
    epsilon = _as_fraction(epsilon)
    if p < 1 or q < 1 or p >= q:
        raise ParameterOutOfRange(f"need 1 <= p < q, got p={p}, q={q}")
    if not (1 < alpha < Fraction(q, p)):
        raise ParameterOutOfRange(
            f"alpha must lie strictly between 1 and q/p = {Fraction(q, p)}, "
            f"got {alpha}"
        )
    if epsilon <= 0 or n_max < 1:
        raise ParameterOutOfRange("epsilon must be positive and n_max >= 1")
    a, b = alpha.numerator, alpha.denominator
    bq = b * q

    e_fn = PowerCoefficientFunction(bq, {n: _shell_e(n, a, b, q) for n in range(1, n_max + 1)})
    g_fn = PowerCoefficientFunction(bq, {n: _shell_g(n, a, b, q) for n in range(1, n_max + 1)})

    q_norm_ok = True
    q_norm_bad = None
    for n in range(1, n_max + 1):
        prod_bq = e_fn.shell_powers()[n] * g_fn.shell_powers()[n]
        prod_q = exact_fraction_root(prod_bq, b)
        norm_q = None if prod_q is None else prod_q * Fraction(1, 1 << n)
        if norm_q != 1:
            q_norm_ok = False
            if q_norm_bad is None:
                q_norm_bad = {"n": n, "value": str(norm_q)}

    # (b): ∫|e_n|^p h dμ = n^{α(p−q)/q}; compare its bq-th power
    # against ε^{p·bq}.  Admissible indices: n^{b+a} ≤ 2^{n·b}.
    escape_n = None
    escape_power = None
    eps_power = epsilon ** (p * bq)
    selected_prefix = []
    for n in range(1, n_max + 1):
        admissible = n ** (b + a) <= 2 ** (n * b)
        if admissible and len(selected_prefix) < 8:
            selected_prefix.append(n)
        if not admissible:
            continue
        # (e_n^p · h · μ(A_n))^{bq} = n^{ap} · (2^{nb}/n^a)^q · 2^{−nbq}
        moment_bq = (
            _shell_e(n, a, b, q) ** p
            * _shell_h(n, a, b) ** q
            * Fraction(1, 1 << (n * bq))
        )
        if moment_bq < eps_power:
            escape_n = n
            escape_power = moment_bq
            break

    evidence = {
        "alpha": str(alpha),
        "power_carried": bq,
        "q_norm_depth": n_max,
        "q_norm_all_one": q_norm_ok,
        "q_norm_counterexample": q_norm_bad,
        "selection_rule": "n·λ_n ≤ 1 with λ_n = n^α·μ(A_n)",
        "selected_indices_prefix": selected_prefix,
        "escape_index": escape_n,
        "escape_moment_power": None if escape_power is None else str(escape_power),
        "epsilon_power": str(eps_power),
    }
    ok = q_norm_ok and escape_n is not None
    return Certificate(
        claim_id="sigma-p-q-separation",
        parameters={
            "p": p,
            "q": q,
            "alpha": str(alpha),
            "n_max": n_max,
            "epsilon": str(epsilon),
        },
        status="pass" if ok else "fail",
        evidence=evidence,
    )


def tau_mu_sigma1_separation(n_max: int, alpha: Fraction = Fraction(3, 2)) -> Certificate:
    """Certify that (n²χ_{A_n}) converges to 0 in measure while its
    pairings against the h-density grow like n^{2−α}: ρ_{[0,1)} of the
    n-th term is exactly μ(A_n) = 2⁻ⁿ (the cap bites once n² ≥ 1), and
    ⟨n²χ_{A_n}, h⟩ = n^{2−α}, carried as its b-th power and rooted
    exactly whenever the power is perfect."""
    alpha = _as_fraction(alpha)
    if n_max < 2:
        raise ValueError("need n_max >= 2")
    if not 1 < alpha < 2:
        raise ParameterOutOfRange("the pairing grows only for 1 < alpha < 2")
    a, b = alpha.numerator, alpha.denominator
    rows = []
    ok = True
    prev_power = None
    for n in range(1, n_max + 1):
        rho = Fraction(1, 1 << n)
        # ⟨n²χ_{A_n}, h⟩ = n²·λ_n·μ(A_n) = n^{2−α}; its b-th power:
        pairing_power_b = Fraction(n ** (2 * b), n**a)
        root = exact_fraction_root(pairing_power_b, b)
        rows.append(
            {
                "n": n,
                "rho_full": str(rho),
                "pairing_power_b": str(pairing_power_b),
                "pairing_exact": None if root is None else str(root),
            }
        )
        if prev_power is not None and pairing_power_b <= prev_power:
            ok = False
        prev_power = pairing_power_b
    return Certificate(
        claim_id="tau-mu-sigma1-separation",
        parameters={"n_max": n_max, "alpha": str(alpha)},
        status="pass" if ok else "fail",
        evidence={
            "rho_decreasing_to_zero": True,
            "pairing_strictly_increasing": ok,
            "rows": rows,
        },
    )


def holder_e4_check(
    f: StepFunction, g: StepFunction, p: int, q: int, tol: float = 1e-9
) -> bool:
    """Check the three-factor Hölder chain
    ‖fg‖_p^p ≤ ‖f·g^{p/q}‖_q · ‖f‖_∞^{p−1} · ‖g‖_p^{p/q*}
    (q* the conjugate exponent of q) in controlled floating point: the
    rational exponents p/q and 1/q* force roots, so each side is one
    float built from exact rational integrals in a fixed order."""
    if p < 1 or p >= q:
        raise ValueError("need 1 <= p < q")
    if any(c < 0 for c in f.coefficients) or any(c < 0 for c in g.coefficients):
        raise ValueError("the chain is stated for nonnegative functions")
    left = float(p_power_norm(f * g, p))
    # ‖f·g^{p/q}‖_q = (∫ f^q g^p)^{1/q}
    mid = float(integral(f.power(q) * g.power(p))) ** (1.0 / q)
    sup_part = float(f.sup_norm()) ** (p - 1)
    # ‖g‖_p^{p/q*} = (∫ g^p)^{1/q*}, 1/q* = 1 − 1/q
    tail_part = float(p_power_norm(g, p)) ** (1.0 - 1.0 / q)
    return left <= mid * sup_part * tail_part + tol


def measure_ae_subsequence(
    seq: Sequence[StepFunction], f_limit: StepFunction
) -> list[int]:
    """Greedy subsequence selection n_k with
    ρ_{[0,1)}(seq_{n_k} − f_limit) ≤ 2^{−k}; by Borel–Cantelli the
    selected functions converge pointwise off a set of measure at most
    Σ_{k≥K} 2^{−k} for every K, i.e. almost everywhere.

    Raises :class:`NotConvergentInMeasure` as soon as some threshold is
    unattainable among the remaining indices."""
    full = DyadicSet.full()
    indices: list[int] = []
    j = 0
    k = 1
    while j < len(seq):
        threshold = Fraction(1, 1 << k)
        found = None
        for jj in range(j, len(seq)):
            if rho_E(seq[jj] - f_limit, full) <= threshold:
                found = jj
                break
        if found is None:
            raise NotConvergentInMeasure(
                f"no remaining index reaches rho <= {threshold} "
                f"(next after {indices[-1] if indices else 'start'})"
            )
        indices.append(found)
        j = found + 1
        k += 1
    return indices
