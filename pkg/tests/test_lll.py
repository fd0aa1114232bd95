from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from groupshift.exact import Quad, half_power_of_two, sqrt2_power
from groupshift.groups import InputError
from groupshift.lll import (
    BadEvent,
    LLLInstance,
    NonterminatingInstanceError,
    aperiodic_constant_scan,
    audit_event_probability,
    check_aperiodic_constant,
    geometric_derivative_partial,
    resample,
    squarefree_alphabet_bound,
    two_coloring_probability,
    two_coloring_weight,
    verify_condition,
)

fractions = st.fractions(
    min_value=Fraction(-8), max_value=Fraction(8), max_denominator=64
)


class TestQuad:
    def test_sqrt2_squares_to_two(self):
        assert Quad(Fraction(0), Fraction(1)) ** 2 == Quad.of(2)

    def test_half_power_even(self):
        assert half_power_of_two(34) == Quad.of(Fraction(1, 2 ** 17))

    def test_half_power_odd_squares_back(self):
        w = half_power_of_two(17)
        assert w * w == Quad.of(Fraction(1, 2 ** 17))
        assert not w.is_rational

    def test_sqrt2_power_inverse(self):
        for k in (0, 1, 2, 17, 34):
            assert half_power_of_two(k) * sqrt2_power(k) == Quad.of(1)

    def test_mixed_sign(self):
        # 3 - 2*sqrt2 > 0 but 1 - sqrt2 < 0: both have mixed coefficients.
        assert Quad(Fraction(3), Fraction(-2)).sign() == 1
        assert Quad(Fraction(1), Fraction(-1)).sign() == -1
        assert Quad(Fraction(0), Fraction(0)).sign() == 0

    @given(fractions, fractions, fractions, fractions)
    def test_product_distributes(self, a, b, c, d):
        p, q = Quad(a, b), Quad(c, d)
        assert p * (q + Quad.of(1)) == p * q + p

    @given(fractions, fractions)
    def test_sign_matches_float(self, a, b):
        q = Quad(a, b)
        approx = float(a) + float(b) * 2 ** 0.5
        if abs(approx) > 1e-9:
            assert q.sign() == (1 if approx > 0 else -1)


def make_instance(events, variables=None, alphabet_size=2):
    if variables is None:
        variables = tuple(sorted({v for e in events for v in e.support}))
    return LLLInstance(
        variables=variables,
        alphabet={v: alphabet_size for v in variables},
        events=list(events),
    )


class TestVerifyCondition:
    def test_single_event_empty_product(self):
        e = BadEvent(id=("e",), support=("v",),
                     probability=Quad.of(Fraction(1, 4)),
                     weight=Quad.of(Fraction(1, 2)))
        verdict = verify_condition(make_instance([e]))
        assert verdict.holds
        assert verdict.margins[("e",)] == Quad.of(Fraction(1, 4))

    def test_two_events_shared_variable_fail(self):
        events = [
            BadEvent(id=(k,), support=("v",),
                     probability=Quad.of(Fraction(3, 10)),
                     weight=Quad.of(Fraction(1, 2)))
            for k in range(2)
        ]
        verdict = verify_condition(make_instance(events))
        assert not verdict.holds
        assert verdict.margins[(0,)] == Quad.of(Fraction(-1, 20))

    def test_weight_outside_unit_interval_rejected(self):
        e = BadEvent(id=("e",), support=("v",),
                     probability=Quad.of(Fraction(1, 4)),
                     weight=Quad.of(1))
        with pytest.raises(InputError):
            verify_condition(make_instance([e]))

    def test_margins_invariant_under_relabeling(self):
        events = [
            BadEvent(id=(k,), support=(f"v{k}", f"v{k + 1}"),
                     probability=Quad.of(Fraction(1, 8)),
                     weight=half_power_of_two(3))
            for k in range(4)
        ]
        base = verify_condition(make_instance(events))
        rename = {f"v{i}": f"w{(i * 3) % 7}" for i in range(5)}
        renamed = [
            BadEvent(id=e.id, support=tuple(rename[v] for v in e.support),
                     probability=e.probability, weight=e.weight)
            for e in events
        ]
        relabeled = verify_condition(make_instance(renamed))
        assert relabeled.holds == base.holds
        assert relabeled.margins == base.margins


class TestResample:
    def all_equal_event(self, n=4):
        support = tuple(f"v{i}" for i in range(n))
        return BadEvent(
            id=("eq",), support=support,
            probability=Quad.of(Fraction(2, 2 ** n)),
            weight=Quad.of(Fraction(1, 2)),
            violated=lambda a, s=support: len({a[v] for v in s}) == 1,
        )

    def test_zero_events(self):
        inst = make_instance([], variables=("v0", "v1"))
        run = resample(inst, seed=5)
        assert run.resamples == 0
        assert set(run.assignment) == {"v0", "v1"}

    def test_all_equal_event_avoided(self):
        inst = make_instance([self.all_equal_event()])
        run = resample(inst, seed=0)
        assert len(set(run.assignment.values())) == 2

    def test_deterministic_given_seed(self):
        inst = make_instance([self.all_equal_event()])
        runs = [resample(inst, seed=42) for _ in range(2)]
        assert runs[0].assignment == runs[1].assignment
        assert runs[0].trace == runs[1].trace

    def test_cap_enforced(self):
        # An unsatisfiable event can never stop resampling.
        e = BadEvent(id=("always",), support=("v",),
                     probability=Quad.of(1),
                     weight=Quad.of(Fraction(1, 2)),
                     violated=lambda a: True)
        inst = make_instance([e])
        with pytest.raises(NonterminatingInstanceError) as err:
            resample(inst, seed=0, cap=10)
        assert len(err.value.trace) == 10

    def test_empirical_mean_under_weight_bound(self):
        # Statistical smoke test: mean resamples <= 2 * sum x/(1-x).
        inst = make_instance([self.all_equal_event()])
        bound = 2 * sum(
            float(e.weight) / (1 - float(e.weight)) for e in inst.events
        )
        mean = sum(
            resample(inst, seed=s).resamples for s in range(100)
        ) / 100
        assert mean <= bound

    def test_probability_audit(self):
        e = self.all_equal_event(5)
        inst = make_instance([e])
        assert audit_event_probability(inst, e) == Fraction(2, 32)

    def test_probability_audit_skips_large_supports(self):
        support = tuple(f"v{i}" for i in range(30))
        e = BadEvent(id=("big",), support=support,
                     probability=Quad.of(Fraction(1, 2)),
                     weight=Quad.of(Fraction(1, 2)),
                     violated=lambda a: True)
        assert audit_event_probability(make_instance([e]), e) is None


class TestConstants:
    def test_scan_finds_seventeen(self):
        assert aperiodic_constant_scan(32) == 17

    def test_sixteen_fails(self):
        assert not check_aperiodic_constant(16)

    def test_seventeen_holds(self):
        assert check_aperiodic_constant(17)

    def test_scan_not_found(self):
        with pytest.raises(InputError):
            aperiodic_constant_scan(10)

    def test_series_partial_sums(self):
        assert abs(geometric_derivative_partial(60) - 2) <= Fraction(1, 2 ** 50)

    def test_alphabet_bound(self):
        assert squarefree_alphabet_bound(1) == 524288
        assert squarefree_alphabet_bound(2) == 2097152

    def test_two_coloring_values(self):
        assert two_coloring_probability(17, 1) == Quad.of(Fraction(1, 2 ** 17))
        assert two_coloring_weight(17, 2) == Quad.of(Fraction(1, 2 ** 17))
        w1 = two_coloring_weight(17, 1)
        assert w1 * w1 == two_coloring_probability(17, 1)
