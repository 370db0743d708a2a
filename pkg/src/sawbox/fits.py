"""Sequence transforms and sliding-window extrapolation fits.

Sequences are plain ``{L: mpf}`` dicts. Every estimator sequence is produced by
exactly-determined windows of consecutive L (k + 1 points for k + 1 unknowns);
a final intercept comes from extrapolating the estimator tail linearly against
1/L**p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import mpmath as mp

from .series import DEFAULT_DPS, Provenance, Series, Term, to_decimal, to_mpf

DEFAULT_LAMBDA = "1.7445498"
LAMBDA_ERROR = "0.0000012"
MIN_D_DPS = 60

Seq = dict  # {L: mpf}


class DomainError(ValueError):
    pass


class PrecisionError(ValueError):
    pass


@dataclass
class FitReport:
    method: str
    estimates: dict = field(default_factory=dict)  # name -> {L: mpf}
    intercepts: dict = field(default_factory=dict)  # name -> mpf
    abscissa_power: dict = field(default_factory=dict)  # name -> p
    diagnostics: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)

    def to_dict(self, digits: int = 25) -> dict:
        def fmt(v):
            if isinstance(v, mp.mpf):
                return mp.nstr(v, digits)
            if isinstance(v, dict):
                return {str(k): fmt(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [fmt(x) for x in v]
            return v

        return {
            "method": self.method,
            "config": fmt(self.config),
            "abscissa_power": dict(self.abscissa_power),
            "intercepts": fmt(self.intercepts),
            "diagnostics": fmt(self.diagnostics),
            "estimates": fmt(self.estimates),
        }

    def table(self, name: str) -> list[tuple[int, mp.mpf, mp.mpf]]:
        """Rows (L, 1/L**p, estimator) for plotting ``name`` against its abscissa."""
        p = self.abscissa_power.get(name, 1)
        return [(L, mp.mpf(1) / mp.mpf(L) ** p, v) for L, v in sorted(self.estimates[name].items())]


def _as_seq(s: Series | Mapping, dps: int) -> Seq:
    if isinstance(s, Series):
        return s.mp_values(dps)
    return {k: mp.mpf(v) if not isinstance(v, mp.mpf) else v for k, v in s.items()}


def extrapolate(seq: Mapping, power: int, tail: int = 2) -> mp.mpf:
    """Intercept at 1/L**power = 0 of a line through the last ``tail`` points.

    Two points give the exact line; more points use least squares.
    """
    keys = sorted(seq)[-tail:]
    if len(keys) < 2:
        raise DomainError("need at least two estimators to extrapolate")
    xs = [mp.mpf(1) / mp.mpf(L) ** power for L in keys]
    ys = [seq[L] for L in keys]
    n = len(xs)
    mx, my = mp.fsum(xs) / n, mp.fsum(ys) / n
    sxx = mp.fsum((x - mx) ** 2 for x in xs)
    sxy = mp.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    slope = sxy / sxx
    return my - slope * mx


def lambda_sequence(s: Series | Mapping, dps: int = DEFAULT_DPS) -> Seq:
    """lambda_L = C_L ** (1 / L**2)."""
    with mp.workdps(dps):
        seq = _as_seq(s, dps)
        out = {}
        for L, v in seq.items():
            if v <= 0:
                raise DomainError(f"term {L} is not positive")
            out[L] = v ** (mp.mpf(1) / (L * L))
        return out


def window_fit(
    seq: Mapping,
    powers: Sequence[int] = (0, 1, 2),
    abscissa_power: int = 2,
    tail: int = 2,
    dps: int = DEFAULT_DPS,
    method: str = "window-fit",
) -> FitReport:
    """Fit v_L = sum_j c_j / L**powers[j] on every window of len(powers) consecutive L.

    Estimators are keyed by the largest L in the window. The intercept of c_0 is
    extrapolated against 1/L**abscissa_power.
    """
    powers = list(powers)
    k1 = len(powers)
    with mp.workdps(dps):
        seq = _as_seq(seq, dps)
        keys = sorted(seq)
        if len(keys) < k1:
            raise DomainError(f"need at least {k1} terms, got {len(keys)}")
        est = {f"c{p}": {} for p in powers}
        skipped = []
        for i in range(len(keys) - k1 + 1):
            w = keys[i : i + k1]
            A = mp.matrix([[mp.mpf(1) / mp.mpf(L) ** p for p in powers] for L in w])
            b = mp.matrix([seq[L] for L in w])
            try:
                c = mp.lu_solve(A, b)
            except ZeroDivisionError:
                skipped.append(w[-1])
                continue
            for j, p in enumerate(powers):
                est[f"c{p}"][w[-1]] = c[j]
        c0 = est[f"c{powers[0]}"]
        report = FitReport(
            method,
            estimates=est,
            abscissa_power={name: abscissa_power for name in est},
            config={"powers": powers, "tail": tail},
        )
        report.diagnostics["skipped_windows"] = skipped
        if len(c0) >= 2:
            report.intercepts[f"c{powers[0]}"] = extrapolate(c0, abscissa_power, tail)
        return report


def ratio_of_ratios(s: Series | Mapping, dps: int = DEFAULT_DPS) -> Seq:
    """C_{L+1} C_{L-1} / C_L**2, keyed by L."""
    with mp.workdps(dps):
        if isinstance(s, Series):
            raw = {t.index: t.value for t in s.terms}
        else:
            raw = dict(s)
        keys = sorted(raw)
        if len(keys) < 3:
            raise DomainError("need at least three terms")
        out = {}
        for L in keys[1:-1]:
            if L - 1 not in raw or L + 1 not in raw:
                continue
            a, b, c = raw[L - 1], raw[L], raw[L + 1]
            if a == 0 or b == 0 or c == 0:
                raise DomainError(f"zero term near L={L}")
            if all(isinstance(v, int) for v in (a, b, c)):
                out[L] = mp.mpf(a * c) / mp.mpf(b * b)
            else:
                a, b, c = (to_mpf(v) for v in (a, b, c))
                out[L] = a * c / (b * b)
        return out


def fit_ratio_of_ratios(
    rr: Mapping,
    model: str = "quadratic",
    abscissa_power: int = 3,
    tail: int = 2,
    dps: int = DEFAULT_DPS,
) -> FitReport:
    """Fit the ratio of ratios to c0 + c2/L**2 ("quadratic") or c0 + c2/L**2 + c3/L**3 ("cubic").

    c0 estimates lambda**2, c2 estimates -g*lambda**2.
    """
    powers = {"quadratic": (0, 2), "cubic": (0, 2, 3)}[model]
    with mp.workdps(dps):
        rep = window_fit(rr, powers, abscissa_power, tail, dps, method=f"ratio-of-ratios-{model}")
        lam2 = rep.estimates.pop("c0")
        c2 = rep.estimates.pop("c2")
        rep.estimates.pop("c3", None)
        rep.estimates["lambda_sq"] = lam2
        rep.estimates["minus_g_lambda_sq"] = c2
        rep.estimates["g"] = {L: -c2[L] / lam2[L] for L in lam2}
        rep.abscissa_power = {name: abscissa_power for name in rep.estimates}
        rep.intercepts = {
            "lambda_sq": extrapolate(lam2, abscissa_power, tail),
            "minus_g_lambda_sq": extrapolate(c2, abscissa_power, tail),
        }
        rep.intercepts["lambda"] = mp.sqrt(rep.intercepts["lambda_sq"])
        rep.intercepts["g"] = -rep.intercepts["minus_g_lambda_sq"] / rep.intercepts["lambda_sq"]
        return rep


def raw_ratio_intercept(rr: Mapping, abscissa_power: int = 2, tail: int = 2, dps: int = DEFAULT_DPS) -> mp.mpf:
    with mp.workdps(dps):
        return extrapolate(_as_seq(rr, dps), abscissa_power, tail)


def normalized_d(s: Series | Mapping, lam=DEFAULT_LAMBDA, dps: int = DEFAULT_DPS) -> Seq:
    """d_L = C_L / lambda**(L**2)."""
    if dps < MIN_D_DPS:
        raise PrecisionError(
            f"d_L cancels magnitudes near 10^232; use at least {MIN_D_DPS} digits (got {dps})"
        )
    with mp.workdps(dps):
        lam = mp.mpf(lam)
        if lam <= 1:
            raise DomainError("lambda must exceed 1")
        seq = _as_seq(s, dps)
        return {L: v / lam ** (L * L) for L, v in seq.items()}


def alpha_ratios(d: Mapping, dps: int = DEFAULT_DPS) -> Seq:
    """alpha_L = d_L / d_{L-1}."""
    with mp.workdps(dps):
        return {L: d[L] / d[L - 1] for L in sorted(d) if L - 1 in d}


def alpha_fit(alpha: Mapping, tail: int = 2, dps: int = DEFAULT_DPS) -> FitReport:
    """alpha_L ~ alpha (1 + g/L): two-point windows give alpha and g = slope / alpha."""
    with mp.workdps(dps):
        rep = window_fit(alpha, (0, 1), abscissa_power=1, tail=tail, dps=dps, method="alpha-ratios")
        a0, a1 = rep.estimates.pop("c0"), rep.estimates.pop("c1")
        rep.estimates = {"alpha": a0, "g": {L: a1[L] / a0[L] for L in a0}}
        rep.abscissa_power = {"alpha": 1, "g": 1}
        rep.intercepts = {
            "alpha": extrapolate(a0, 1, tail),
            "g": extrapolate(rep.estimates["g"], 1, tail),
        }
        return rep


def triple_fit_log_d(
    d: Mapping,
    powers: Mapping | None = None,
    tail: int = 2,
    dps: int = DEFAULT_DPS,
) -> FitReport:
    """Solve log d_L = B*L + A + g*log L on each triple L = k-1, k, k+1.

    B estimates b*log(lambda) and A estimates c*log(lambda). Estimators are
    keyed by the middle index k.
    """
    powers = dict(powers or {"b_log_lambda": 1, "c_log_lambda": 1, "g": 1})
    with mp.workdps(dps):
        keys = sorted(d)
        if len(keys) < 3:
            raise DomainError("need at least three terms")
        logs = {}
        for L in keys:
            if d[L] <= 0:
                raise DomainError(f"d_{L} is not positive")
            logs[L] = mp.log(d[L])
        est = {"b_log_lambda": {}, "c_log_lambda": {}, "g": {}}
        for k in keys:
            if k - 1 not in logs or k + 1 not in logs:
                continue
            w = (k - 1, k, k + 1)
            A = mp.matrix([[L, 1, mp.log(L)] for L in w])
            sol = mp.lu_solve(A, mp.matrix([logs[L] for L in w]))
            est["b_log_lambda"][k] = sol[0]
            est["c_log_lambda"][k] = sol[1]
            est["g"][k] = sol[2]
        rep = FitReport("triple-fit-log-d", estimates=est, abscissa_power=powers, config={"tail": tail})
        rep.intercepts = {name: extrapolate(est[name], powers[name], tail) for name in est}
        return rep


def b_from_alpha(alpha, lam=DEFAULT_LAMBDA, dps: int = DEFAULT_DPS) -> mp.mpf:
    with mp.workdps(dps):
        return mp.log(mp.mpf(alpha)) / mp.log(mp.mpf(lam))


def amplitude_sequence(
    d: Mapping,
    lam=DEFAULT_LAMBDA,
    b=None,
    g=None,
    abscissa_power: int = 3,
    tail: int = 2,
    dps: int = DEFAULT_DPS,
) -> FitReport:
    """d_L / (lambda**(b L) L**g), which tends to lambda**c."""
    if b is None or g is None:
        raise DomainError("amplitude_sequence needs both b and g")
    with mp.workdps(dps):
        lam, b, g = mp.mpf(lam), mp.mpf(b), mp.mpf(g)
        amp = {L: d[L] / (lam ** (b * L) * mp.mpf(L) ** g) for L in sorted(d)}
        rep = FitReport(
            "amplitude",
            estimates={"lambda_c": amp},
            abscissa_power={"lambda_c": abscissa_power},
            config={"lambda": lam, "b": b, "g": g, "tail": tail},
        )
        ic = extrapolate(amp, abscissa_power, tail)
        rep.intercepts = {"lambda_c": ic, "c": mp.log(ic) / mp.log(lam)}
        return rep


def hadamard_quotient(s1: Series, s2: Series, dps: int = DEFAULT_DPS) -> Series:
    """Termwise s1_L / s2_L over the common indices."""
    common = sorted(set(s1.indices) & set(s2.indices))
    if not common:
        raise DomainError("series have no indices in common")
    with mp.workdps(dps):
        v1, v2 = s1.mp_values(dps), s2.mp_values(dps)
        terms = []
        for L in common:
            if v2[L] == 0:
                raise DomainError(f"{s2.name} vanishes at L={L}")
            terms.append(Term(L, to_decimal(v1[L] / v2[L], dps), Provenance.APPROXIMATE))
    return Series(f"{s1.name}/{s2.name}", terms)


def d_pipeline(
    s: Series | Mapping,
    lam=DEFAULT_LAMBDA,
    powers: Mapping | None = None,
    tail: int = 2,
    dps: int = DEFAULT_DPS,
) -> dict:
    """d_L, the alpha ratios and their fit, and the triple fit of log d_L."""
    d = normalized_d(s, lam, dps)
    alpha = alpha_ratios(d, dps)
    return {
        "d": d,
        "alpha": alpha,
        "alpha_fit": alpha_fit(alpha, tail, dps),
        "triple": triple_fit_log_d(d, powers, tail, dps),
    }


def lambda_sensitivity(
    s: Series | Mapping,
    lam=DEFAULT_LAMBDA,
    dlam=LAMBDA_ERROR,
    powers: Mapping | None = None,
    tail: int = 2,
    dps: int = DEFAULT_DPS,
) -> dict:
    """Drift of the triple-fit intercepts when lambda moves by +-dlam."""
    with mp.workdps(dps):
        lam, dlam = mp.mpf(lam), mp.mpf(dlam)
        runs = {
            tag: triple_fit_log_d(normalized_d(s, lam + sgn * dlam, dps), powers, tail, dps).intercepts
            for tag, sgn in (("minus", -1), ("centre", 0), ("plus", 1))
        }
        drift = {
            name: max(abs(runs["plus"][name] - runs["centre"][name]), abs(runs["minus"][name] - runs["centre"][name]))
            for name in runs["centre"]
        }
        return {"runs": runs, "drift": drift}
