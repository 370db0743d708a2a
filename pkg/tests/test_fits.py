from decimal import Decimal

import mpmath as mp
import pytest

from sawbox import fits
from sawbox.series import Provenance, Series, SeriesError, Term

DPS = 80


def exact_close(a, b, dps=DPS):
    return abs(a - b) <= mp.mpf(10) ** (-(dps - 10)) * max(1, abs(b))


def test_series_invariants():
    with pytest.raises(SeriesError):
        Series("x", [Term(2, 1), Term(1, 1)])
    with pytest.raises(SeriesError):
        Series("x", [Term(1, Decimal("1.5"), Provenance.APPROXIMATE), Term(2, 3)])
    with pytest.raises(SeriesError):
        Series("x", [Term(1, Decimal("1.5"))])
    s = Series("x", [Term(1, 4), Term(2, Decimal("1.5E+3"), Provenance.APPROXIMATE)])
    assert s.exact_part().indices == [1]
    assert s[2] == Decimal("1500")


def test_lambda_sequence_power_law():
    s = Series.from_ints("c", [3 ** (L * L) for L in range(1, 8)])
    lam = fits.lambda_sequence(s, DPS)
    with mp.workdps(DPS):
        assert all(exact_close(v, 3) for v in lam.values())


def test_lambda_sequence_rejects_nonpositive():
    with pytest.raises(fits.DomainError):
        fits.lambda_sequence({1: 1, 2: 0})


def test_window_fit_exact_model():
    with mp.workdps(DPS):
        seq = {L: 5 + mp.mpf(3) / L + mp.mpf(2) / L**2 for L in range(1, 12)}
    rep = fits.window_fit(seq, (0, 1, 2), dps=DPS)
    with mp.workdps(DPS):
        assert all(exact_close(v, 5) for v in rep.estimates["c0"].values())
        assert exact_close(rep.intercepts["c0"], 5)


def test_window_fit_needs_terms():
    with pytest.raises(fits.DomainError):
        fits.window_fit({1: 1, 2: 2}, (0, 1, 2))


def test_window_fit_is_reproducible(table1):
    lam = fits.lambda_sequence(table1)
    a = fits.window_fit(lam, (0, 1, 2)).to_dict()
    b = fits.window_fit(lam, (0, 1, 2)).to_dict()
    assert a == b


def test_extrapolate_least_squares_tail():
    seq = {L: 2 + mp.mpf(1) / L**2 for L in range(2, 9)}
    assert abs(fits.extrapolate(seq, 2, tail=5) - 2) < mp.mpf(10) ** -12


def test_ratio_of_ratios_gaussian():
    s = Series.from_ints("c", [2 ** (L * L) for L in range(1, 9)])
    assert set(fits.ratio_of_ratios(s).values()) == {mp.mpf(4)}
    with pytest.raises(fits.DomainError):
        fits.ratio_of_ratios({1: 1, 2: 0, 3: 1})


def test_ratio_of_ratios_fit_recovers_model():
    with mp.workdps(DPS):
        rr = {L: 3 * (1 - mp.mpf(2) / L**2) for L in range(2, 20)}
    rep = fits.fit_ratio_of_ratios(rr, "quadratic", dps=DPS)
    with mp.workdps(DPS):
        assert exact_close(rep.intercepts["lambda_sq"], 3)
        assert exact_close(rep.intercepts["g"], 2)
        assert all(exact_close(v, 2) for v in rep.estimates["g"].values())


def test_ratio_of_ratios_expansion():
    # C_L = lam^(L^2) L^g gives lam^2 (1 - g/L^2 + O(L^-3))
    with mp.workdps(DPS):
        lam, g = mp.mpf("1.7"), mp.mpf("2.5")
        c = {L: lam ** (L * L) * mp.mpf(L) ** g for L in range(1, 400)}
        rr = fits.ratio_of_ratios(c, DPS)
        L = 398
        assert abs((rr[L] / lam**2 - 1) * L**2 + g) < 10 / L


def test_normalized_d_precision_guard():
    with pytest.raises(fits.PrecisionError, match="60"):
        fits.normalized_d({1: 2}, dps=30)
    with pytest.raises(fits.DomainError):
        fits.normalized_d({1: 2}, lam="0.5")


def test_normalized_d_pure_power():
    with mp.workdps(DPS):
        lam = mp.mpf(fits.DEFAULT_LAMBDA)
        c = {L: lam ** (L * L) for L in range(1, 10)}
        d = fits.normalized_d(c, dps=DPS)
        assert all(exact_close(v, 1) for v in d.values())


def test_triple_fit_exact_model():
    with mp.workdps(DPS):
        lam = mp.mpf("1.7")
        d = {L: lam ** (mp.mpf("0.5") * L - 1) * mp.mpf(L) ** 2 for L in range(1, 12)}
    rep = fits.triple_fit_log_d(d, dps=DPS)
    with mp.workdps(DPS):
        for k in rep.estimates["g"]:
            assert exact_close(rep.estimates["b_log_lambda"][k], mp.mpf("0.5") * mp.log(lam))
            assert exact_close(rep.estimates["c_log_lambda"][k], -mp.log(lam))
            assert exact_close(rep.estimates["g"][k], 2)


def test_amplitude_exact_model():
    with mp.workdps(DPS):
        lam, b, c, g = mp.mpf("1.7"), mp.mpf("-0.05"), mp.mpf("1.3"), mp.mpf("-0.5")
        d = {L: lam ** (b * L + c) * mp.mpf(L) ** g for L in range(1, 15)}
    rep = fits.amplitude_sequence(d, lam, b, g, dps=DPS)
    with mp.workdps(DPS):
        assert all(exact_close(v, lam**c) for v in rep.estimates["lambda_c"].values())
        assert exact_close(rep.intercepts["c"], c)
    with pytest.raises(fits.DomainError):
        fits.amplitude_sequence(d, lam)


def test_alpha_fit_exact_model():
    with mp.workdps(DPS):
        alpha = {L: mp.mpf("0.97") * (1 + mp.mpf(3) / L) for L in range(2, 12)}
    rep = fits.alpha_fit(alpha, dps=DPS)
    with mp.workdps(DPS):
        assert exact_close(rep.intercepts["alpha"], mp.mpf("0.97"))
        assert exact_close(rep.intercepts["g"], 3)


def test_hadamard_identity_and_multiplicativity(table1, table2):
    q = fits.hadamard_quotient(table1, table1)
    assert all(t.value == 1 for t in q.terms)
    ab = Series.from_ints("ab", [x * y for x, y in zip([2, 3, 5, 7], [11, 13, 17, 19])])
    a = Series.from_ints("a", [2, 3, 5, 7])
    b = Series.from_ints("b", [11, 13, 17, 19])
    q = fits.hadamard_quotient(ab, a)
    assert [mp.mpf(str(t.value)) for t in q.terms] == [11, 13, 17, 19]
    with pytest.raises(fits.DomainError):
        fits.hadamard_quotient(a, Series.from_ints("z", [0, 1]))


def test_precision_monotonicity(table1):
    lo = fits.window_fit(fits.lambda_sequence(table1, 60), (0, 1, 2), dps=60).intercepts["c0"]
    hi = fits.window_fit(fits.lambda_sequence(table1, 120), (0, 1, 2), dps=120).intercepts["c0"]
    assert abs(lo - hi) < mp.mpf(10) ** -30


def test_lambda_sensitivity_reports_drift(table1):
    res = fits.lambda_sensitivity(table1)
    assert set(res["drift"]) == {"b_log_lambda", "c_log_lambda", "g"}
    assert all(v > 0 for v in res["drift"].values())


def test_fit_report_table_rows(table1):
    rep = fits.window_fit(fits.lambda_sequence(table1), (0, 1, 2))
    rows = rep.table("c0")
    L, x, _ = rows[-1]
    assert L == 31 and abs(x - mp.mpf(1) / 31**2) < mp.mpf(10) ** -40
