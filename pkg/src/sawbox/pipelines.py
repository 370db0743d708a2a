"""Analysis pipelines: each returns a JSON-ready result tree and CSV tables.

CSV tables have the columns (L, abscissa, estimator), the abscissa being
1/L**p for the power the estimator is extrapolated against.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath as mp

from . import approximants as ap
from . import fits
from .series import DEFAULT_DPS, Series

PIPELINES = ("lambda-fits", "ratio-of-ratios", "d-pipeline", "hadamard", "da", "extend")
DIGITS = 30


@dataclass
class AnalysisOptions:
    dps: int = DEFAULT_DPS
    lam: str = fits.DEFAULT_LAMBDA
    b: str | None = None
    g: str | None = None
    fit_degrees: tuple = (2, 3)
    abscissa_power: int | None = None
    tail: int = 2
    extend_terms: int = 0
    ensemble: ap.EnsembleConfig = field(default_factory=ap.EnsembleConfig)


def _num(v):
    if isinstance(v, (mp.mpf, mp.mpc)):
        return mp.nstr(v, DIGITS)
    if isinstance(v, dict):
        return {str(k): _num(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_num(x) for x in v]
    return v


def _table(report: fits.FitReport, name: str):
    return ("L", "abscissa", name), [(L, mp.nstr(x, DIGITS), mp.nstr(v, DIGITS)) for L, x, v in report.table(name)]


def lambda_fits(s: Series, opt: AnalysisOptions):
    p = opt.abscissa_power or 2
    lam = fits.lambda_sequence(s, opt.dps)
    out, tables = {"abscissa_power": p, "fits": {}}, {}
    rows = [(L, mp.nstr(mp.mpf(1) / L**p, DIGITS), mp.nstr(v, DIGITS)) for L, v in sorted(lam.items())]
    tables["lambda_raw"] = (("L", "abscissa", "lambda_L"), rows)
    for k in opt.fit_degrees:
        rep = fits.window_fit(lam, tuple(range(k + 1)), p, opt.tail, opt.dps, method=f"lambda-degree-{k}")
        out["fits"][f"degree_{k}"] = {
            "intercept": _num(rep.intercepts["c0"]),
            "skipped_windows": rep.diagnostics["skipped_windows"],
        }
        tables[f"lambda_degree_{k}"] = _table(rep, "c0")
    return out, tables


def ratio_of_ratios(s: Series, opt: AnalysisOptions):
    p = opt.abscissa_power or 3
    rr = fits.ratio_of_ratios(s, opt.dps)
    out = {"abscissa_power": p, "raw_intercept_inv_L2": _num(fits.raw_ratio_intercept(rr, 2, opt.tail, opt.dps))}
    tables = {"ratio_of_ratios_raw": (("L", "abscissa", "C_L"),
                                      [(L, mp.nstr(mp.mpf(1) / L**2, DIGITS), mp.nstr(v, DIGITS)) for L, v in sorted(rr.items())])}
    for k in opt.fit_degrees:
        model = {2: "quadratic", 3: "cubic"}.get(k)
        if model is None:
            raise ValueError(f"ratio-of-ratios supports fit degrees 2 and 3, not {k}")
        rep = fits.fit_ratio_of_ratios(rr, model, p, opt.tail, opt.dps)
        out[model] = _num(rep.intercepts)
        tables[f"ratio_of_ratios_{model}"] = _table(rep, "lambda_sq")
        tables[f"minus_g_lambda_sq_{model}"] = _table(rep, "minus_g_lambda_sq")
    return out, tables


def d_pipeline(s: Series, opt: AnalysisOptions):
    res = fits.d_pipeline(s, opt.lam, tail=opt.tail, dps=opt.dps)
    tri, af = res["triple"], res["alpha_fit"]
    out = {
        "lambda": opt.lam,
        "triple_fit": _num(tri.intercepts),
        "alpha_fit": _num(af.intercepts),
        "alpha_last": _num(res["alpha"][max(res["alpha"])]),
    }
    tables = {f"triple_{name}": _table(tri, name) for name in tri.estimates}
    tables["alpha"] = (("L", "abscissa", "alpha_L"),
                       [(L, mp.nstr(mp.mpf(1) / L, DIGITS), mp.nstr(v, DIGITS)) for L, v in sorted(res["alpha"].items())])
    with mp.workdps(opt.dps):
        b = mp.mpf(opt.b) if opt.b is not None else tri.intercepts["b_log_lambda"] / mp.log(mp.mpf(opt.lam))
        g = mp.mpf(opt.g) if opt.g is not None else tri.intercepts["g"]
    amp = fits.amplitude_sequence(res["d"], opt.lam, b, g, opt.abscissa_power or 3, opt.tail, opt.dps)
    out["amplitude"] = {"b": _num(b), "g": _num(g), **_num(amp.intercepts)}
    tables["amplitude"] = _table(amp, "lambda_c")
    sens = fits.lambda_sensitivity(s, opt.lam, tail=opt.tail, dps=opt.dps)
    out["lambda_sensitivity"] = _num(sens["drift"])
    return out, tables


def hadamard(s1: Series, s2: Series, opt: AnalysisOptions):
    q = fits.hadamard_quotient(s1, s2, opt.dps)
    with mp.workdps(opt.dps):
        vals = q.mp_values(opt.dps)
        ratios = {L: vals[L] / vals[L - 1] for L in sorted(vals) if L - 1 in vals}
        last = max(vals)
        both_exact = set(s1.exact_part().indices) & set(s2.exact_part().indices)
        out = {
            "quotient_last": {"L": last, "value": _num(vals[last])},
            "ratio_last": {"L": max(ratios), "value": _num(ratios[max(ratios)])},
            "ratio_intercept_inv_L": _num(fits.extrapolate(ratios, 1, opt.tail)),
        }
        if both_exact:
            L = max(both_exact)
            out["quotient_last_exact"] = {"L": L, "value": _num(vals[L])}
    tables = {
        "hadamard_quotient": (("L", "abscissa", "q_L"), [(L, mp.nstr(mp.mpf(1) / L, DIGITS), mp.nstr(v, DIGITS)) for L, v in sorted(vals.items())]),
        "hadamard_ratios": (("L", "abscissa", "q_L/q_{L-1}"), [(L, mp.nstr(mp.mpf(1) / L, DIGITS), mp.nstr(v, DIGITS)) for L, v in sorted(ratios.items())]),
    }
    return out, tables, q


def da(s: Series, opt: AnalysisOptions):
    with mp.workdps(opt.dps):
        vals = [v for _, v in sorted(s.mp_values(opt.dps).items())]
        res = ap.singularity_ensemble(vals, opt.ensemble)
    return _num(res), {}


def extend(s: Series, opt: AnalysisOptions):
    if opt.extend_terms < 1:
        raise ValueError("extend needs a positive number of terms")
    ext, errors = ap.series_extend(s, opt.extend_terms, opt.ensemble)
    out = {
        "extended": {str(L): {"value": str(ext[L]), "relative_error": _num(errors[L])} for L in errors},
        "ensemble": _num(ext.meta.get("extension", {})),
    }
    return out, {}, ext, errors
