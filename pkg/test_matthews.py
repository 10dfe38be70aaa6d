"""
Tests for the generalized (K, D, residue system) maps
"""
import os
import random

import pytest

from app.exceptions import (
    IncompleteResidueSystemError,
    MatthewsConfigError,
    NonCoprimeError,
    ParameterRangeError,
    ResidueCongruenceError,
    ZeroPolynomialError,
)
from app.models.matthews_models import OutcomeKind
from app.services import report_writers
from app.services.gf2poly import ONE, ZERO, Poly, add, div_rem, mul, parse_poly
from app.services.matthews_service import MatthewsService, matthews_service

P = parse_poly
ROOT = os.path.dirname(os.path.abspath(__file__))
EX1_CONFIG = os.path.join(ROOT, "data", "matthews_ex1.cfg")
EX1_GOLDEN = os.path.join(ROOT, "data", "golden", "matthews_ex1_census.csv")


@pytest.fixture
def ex1():
    return matthews_service.load_config(EX1_CONFIG)


@pytest.fixture
def shift():
    return matthews_service.make_config(ONE, P("x"), {ZERO: ZERO, ONE: ONE})


def random_config(rng: random.Random):
    """A valid config with random K, D and random lifts of K*r modulo D"""
    while True:
        D = Poly(rng.getrandbits(rng.randint(1, 4)) | (1 << rng.randint(1, 4)))
        K = Poly(rng.getrandbits(8) or 1)
        residue_map = {}
        for r in range(1 << D.degree):
            base = div_rem(mul(K, Poly(r)), D)[1]
            residue_map[Poly(r)] = add(base, mul(D, Poly(rng.getrandbits(3))))
        try:
            return matthews_service.make_config(K, D, residue_map)
        except NonCoprimeError:
            continue


# -- configuration ----------------------------------------------------------

def test_valid_configs(shift):
    assert shift.D == P("x")
    config = matthews_service.make_config(P("x"), P("x+1"), {ZERO: ZERO, ONE: P("x")})
    assert config.residue_map[ONE] == P("x")


def test_ex1_config(ex1):
    assert ex1.K == P("x^3+x^2+x+1")
    assert ex1.D == P("x")
    assert ex1.multiplier(ZERO) == ONE
    assert ex1.multiplier(ONE) == ex1.K


def test_zero_modulus():
    with pytest.raises(ZeroPolynomialError):
        matthews_service.make_config(ONE, ZERO, {ZERO: ZERO})


def test_non_coprime():
    with pytest.raises(NonCoprimeError):
        matthews_service.make_config(P("x^2+x"), P("x"), {ZERO: ZERO, ONE: ZERO})


def test_incomplete_residue_system():
    with pytest.raises(IncompleteResidueSystemError):
        matthews_service.make_config(ONE, P("x"), {ZERO: ZERO})
    with pytest.raises(IncompleteResidueSystemError):
        matthews_service.make_config(ONE, P("x"), {ZERO: ZERO, P("x+1"): ONE})


def test_residue_congruence():
    with pytest.raises(ResidueCongruenceError):
        matthews_service.make_config(ONE, P("x"), {ZERO: ZERO, ONE: ZERO})


def test_errors_are_distinct():
    kinds = {NonCoprimeError, IncompleteResidueSystemError, ResidueCongruenceError}
    assert len(kinds) == 3
    assert all(issubclass(kind, MatthewsConfigError) for kind in kinds)


def test_parse_config_errors():
    with pytest.raises(MatthewsConfigError):
        matthews_service.parse_config("K=1\nR[0]=0\n")
    with pytest.raises(MatthewsConfigError):
        matthews_service.parse_config("K=1\nD=x\nR[0]=0\nR[0]=0\nR[1]=1\n")
    with pytest.raises(MatthewsConfigError):
        matthews_service.parse_config("K=1\nD=x\nQ=3\n")


# -- step -------------------------------------------------------------------

@pytest.mark.parametrize("seed,expected", [
    ("1", "x^2+x+1"),
    ("x^2+x+1", "x^4+x^2+x"),
    ("x^4+x^2+x", "x^3+x+1"),
])
def test_ex1_steps(ex1, seed, expected):
    assert matthews_service.step(ex1, P(seed)) == P(expected)


def test_multiples_of_d_are_divided():
    config = matthews_service.make_config(P("x^2+x+1"), P("x"), {ZERO: ZERO, ONE: ONE})
    assert matthews_service.step(config, P("x^3+x")) == mul(P("x^2+x+1"), P("x^2+1"))


def test_reconstruction_identity():
    rng = random.Random(31)
    for _ in range(2500):
        config = random_config(rng)
        for _ in range(4):
            S = Poly(rng.getrandbits(rng.randint(0, 40)))
            r = div_rem(S, config.D)[1]
            T = matthews_service.step(config, S)
            assert add(mul(config.D, T), config.residue_map[r]) == mul(config.multiplier(r), S)


# -- classification ----------------------------------------------------------

def test_shift_map_falls_to_zero(shift):
    outcome = matthews_service.classify(shift, P("x^3+x+1"), 100, 1000)
    assert outcome.kind is OutcomeKind.CYCLE
    assert outcome.cycle_entry == 4
    assert outcome.cycle_length == 1
    assert outcome.cycle_members == [ZERO]
    assert outcome.prefix[:5] == [P("x^3+x+1"), P("x^2+1"), P("x"), ONE, ZERO]
    assert outcome.degree_profile[:5] == [3, 2, 1, 0, None]
    assert outcome.max_degree == 3


def test_shift_map_any_seed(shift):
    rng = random.Random(32)
    for _ in range(200):
        seed = Poly(rng.getrandbits(30) or 1)
        outcome = matthews_service.classify(shift, seed, 100, 1000)
        assert outcome.kind is OutcomeKind.CYCLE
        assert outcome.cycle_entry <= seed.degree + 1
        assert outcome.cycle_members == [ZERO]


def test_brent_phase_agrees_with_visited_map(shift, ex1):
    brent = MatthewsService()
    brent.visited_limit = 2
    for seed in (P("x^9+x^4+1"), P("x^20+x"), ONE):
        expected = matthews_service.classify(shift, seed, 100, 1000)
        observed = brent.classify(shift, seed, 100, 1000)
        assert (observed.kind, observed.cycle_entry, observed.cycle_length) == \
            (expected.kind, expected.cycle_entry, expected.cycle_length)
    for mask in range(1, 32):
        expected = matthews_service.classify(ex1, Poly(mask), 40, 3000)
        observed = brent.classify(ex1, Poly(mask), 40, 3000)
        assert observed.kind == expected.kind
        assert observed.cycle_length == expected.cycle_length


def test_degree_divergence_and_exhaustion(ex1):
    outcome = matthews_service.classify(ex1, ONE, 2, 100)
    assert outcome.kind is OutcomeKind.DEGREE_DIVERGENCE
    assert outcome.divergence_step == 2
    assert outcome.max_degree == 4
    exhausted = matthews_service.classify(ex1, ONE, 100, 2)
    assert exhausted.kind is OutcomeKind.STEP_EXHAUSTED
    assert exhausted.steps == 2


def test_classify_rejects_bad_thresholds(ex1):
    with pytest.raises(ParameterRangeError):
        matthews_service.classify(ex1, ONE, 0, 10)
    with pytest.raises(ParameterRangeError):
        matthews_service.classify(ex1, ONE, 10, 0)


def test_outcomes_are_consistent(ex1):
    for outcome in matthews_service.census(ex1, 4, 50, 10_000):
        if outcome.kind is OutcomeKind.CYCLE:
            members = outcome.cycle_members
            if outcome.cycle_length <= len(members):
                assert matthews_service.step(ex1, members[-1]) == members[0]
        elif outcome.kind is OutcomeKind.DEGREE_DIVERGENCE:
            assert outcome.max_degree > 50
        else:
            assert outcome.steps == 10_000


def test_census_is_deterministic(ex1):
    first = report_writers.matthews_census_csv(matthews_service.census(ex1, 4, 100, 10_000))
    second = report_writers.matthews_census_csv(matthews_service.census(ex1, 4, 100, 10_000))
    assert first == second
    assert first.splitlines()[0] == "seed_hex,kind,steps,max_degree,cycle_len"
    assert len(first.splitlines()) == 1 + 31


def test_census_matches_golden(ex1):
    census = report_writers.matthews_census_csv(matthews_service.census(ex1, 4, 100, 10_000))
    with open(EX1_GOLDEN, "r", encoding="utf-8") as f:
        assert census == f.read()


def test_every_small_seed_passes_degree_50(ex1):
    outcomes = matthews_service.census(ex1, 4, 50, 10_000)
    assert [o.kind for o in outcomes] == [OutcomeKind.DEGREE_DIVERGENCE] * 31
    assert all(o.max_degree in (51, 52) for o in outcomes)
    assert max(o.steps for o in outcomes) == 147
    one = outcomes[0]
    assert (one.seed, one.divergence_step, one.max_degree) == (ONE, 57, 51)


def test_degree_follows_step_kinds(ex1):
    # multiplying by (x+1)^3 adds 3 to the degree and every step divides by x once
    for outcome in matthews_service.census(ex1, 4, 30, 10_000):
        odd_steps = sum(1 for term in outcome.prefix[:-1] if term.bits & 1)
        assert outcome.prefix[-1].degree == outcome.seed.degree + 3 * odd_steps - (len(outcome.prefix) - 1)
