"""
Tests for the special families, conjecture checkers and published tables
"""
import pytest

from app.exceptions import ParameterRangeError
from app.models.family_models import FamilyId, FamilyKind
from app.services.collatz_service import collatz_service
from app.services.family_service import family_service, trinomial_s
from app.services.gf2poly import M1, ONE, add, parse_poly, power, reciprocal
from app.services.reference_tables import published_sequences

P = parse_poly


@pytest.mark.parametrize("kind,n,expected", [
    (FamilyKind.T, 31, "x^31+x+1"),
    (FamilyKind.U, 32, "x^32+x^31+1"),
    (FamilyKind.S, 32, "x^32+x^7+x^3+1"),
    (FamilyKind.MPOW, 2, "x^4+x^2"),
    (FamilyKind.P1, 0, "x^14+x^10+x^9+x^8+x^3+x^2+1"),
])
def test_generate(kind, n, expected):
    assert family_service.generate(FamilyId(kind=kind, n=n)) == P(expected)


@pytest.mark.parametrize("kind,n", [(FamilyKind.T, 1), (FamilyKind.S, 7), (FamilyKind.MPOW, 0)])
def test_generate_rejects_small_parameters(kind, n):
    with pytest.raises(ParameterRangeError):
        family_service.generate(FamilyId(kind=kind, n=n))


@pytest.mark.parametrize("n,core", [(1, "1"), (2, "1"), (3, "x^4+x+1")])
def test_mpow_odd_core_examples(n, core):
    result = family_service.mpow_odd_core(n)
    assert result.observed == P(core)
    assert result.equal


def test_mpow_odd_core_identity():
    for n in range(1, 65):
        assert family_service.mpow_odd_core(n).equal, n


def test_trinomial_s():
    assert [trinomial_s(n) for n in (4, 7, 8, 31, 32, 33, 34)] == [1, 1, 2, 3, 4, 4, 4]


# -- published tables -------------------------------------------------------

def test_published_rows_reproduce():
    checks = family_service.table_checks()
    assert len(checks) == 8 + 4 * 3 + 3
    mismatches = [(c.family, c.n, c.observed) for c in checks if not c.match]
    assert mismatches == []


def test_mpow_rows():
    rows = published_sequences("MPOW")
    assert rows[9] == [16, 16, 16, 16, 16, 16, 16, 0]
    assert collatz_service.odd_degree_sequence(add(power(M1, 16), ONE)) == [0]


def test_shared_sequences():
    t33 = collatz_service.odd_degree_sequence(P("x^33+x+1"))
    t34 = collatz_service.odd_degree_sequence(P("x^34+x+1"))
    u32 = collatz_service.odd_degree_sequence(P("x^32+x^31+1"))
    u33 = collatz_service.odd_degree_sequence(P("x^33+x^32+1"))
    assert len(t33) == 17
    assert t33[1:] == t34[1:] == u32[1:] == u33[1:]
    assert collatz_service.odd_degree_sequence(P("x^32+x^7+x^3+1")) == [28, 27, 24, 23, 16, 16, 16, 16, 0]


def test_p1_p2_share_a_sequence():
    p1 = family_service.generate(FamilyId(kind=FamilyKind.P1))
    p2 = family_service.generate(FamilyId(kind=FamilyKind.P2))
    assert p1 != p2
    assert collatz_service.odd_degree_sequence(p1) == collatz_service.odd_degree_sequence(p2)


# -- conjectures ------------------------------------------------------------

def test_conjecture_2():
    report = family_service.check_conjecture_2([4])
    assert len(report.verdicts) == 8
    by_n = {v.n: v for v in report.verdicts}
    assert by_n[9].observed == "8"
    assert by_n[16].observed == "1"
    assert by_n[15].odd_degrees == [28, 0]
    assert report.failures == []


def test_conjecture_2_small_r():
    report = family_service.check_conjecture_2(range(1, 4))
    assert [v.n for v in report.verdicts] == [2, 4, 3, 8, 7, 6, 5]
    assert all(v.holds for v in report.verdicts)


def test_conjecture_3():
    report = family_service.check_conjecture_3(range(31, 35))
    by_n = {v.n: v for v in report.verdicts}
    assert by_n[31].observed.startswith("1 1 2 4")
    assert by_n[31].holds
    assert by_n[33].predicted == "1 1 2 4 8"
    assert by_n[33].holds


def test_conjecture_3_vacuous_for_s_1():
    verdict = family_service.check_conjecture_3([4]).verdicts[0]
    assert verdict.parameter == "s=1"
    assert verdict.holds


def test_conjecture_4():
    report = family_service.check_conjecture_4(range(31, 35))
    by_n = {v.n: v for v in report.verdicts}
    assert (by_n[31].predicted, by_n[31].observed, by_n[31].holds) == ("9", "9", True)
    assert (by_n[33].observed, by_n[34].observed) == ("17", "17")
    assert by_n[33].holds and by_n[34].holds
    # T_32 has 9 odd terms while s = 4 predicts 17; reported, not raised
    assert (by_n[32].predicted, by_n[32].observed, by_n[32].holds) == ("17", "9", False)
    assert [v.n for v in report.failures] == [32]


@pytest.mark.parametrize("checker", [family_service.check_conjecture_3, family_service.check_conjecture_4])
def test_trinomial_conjectures_need_n_at_least_4(checker):
    with pytest.raises(ParameterRangeError):
        checker([3])


# -- conjugation ------------------------------------------------------------

def test_reciprocal_counterexample():
    report = family_service.conjugation_experiment(P("x^8+x^3+1"))
    assert report.seed_degrees == [8, 7, 5, 5, 4, 3, 0]
    assert report.reciprocal_seed == P("x^8+x^5+1")
    assert report.reciprocal_degrees == [8, 6, 6, 0]
    assert report.bar_equal
    assert not report.reciprocal_equal


def test_bar_keeps_degree_sequence():
    report = family_service.conjugation_experiment(P("x^3+x+1"))
    assert report.bar_seed == P("x^3+x^2+1")
    assert report.seed_degrees == report.bar_degrees


def test_t32_reciprocal_is_u32():
    t32 = family_service.generate(FamilyId(kind=FamilyKind.T, n=32))
    assert reciprocal(t32) == family_service.generate(FamilyId(kind=FamilyKind.U, n=32))
    report = family_service.conjugation_experiment(t32)
    assert report.reciprocal_degrees == published_sequences("U")[32]
