"""Differential approximants and series extension.

An approximant of order M is the linear ODE

    sum_{i=0..M} Q_i(x) (x d/dx)^i F(x) = P(x)

whose polynomial coefficients are fixed by requiring it to hold through the
known coefficients of F. With theta = x d/dx the coefficient of x^n reads

    sum_i sum_j q_{i,j} (n-j)^i a_{n-j} = p_n,

so the same relation run forward predicts a_n beyond the data. Q_M(0) is
normalised to 1.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Sequence

import mpmath as mp
import numpy as np

from .series import DEFAULT_DPS, Provenance, Series, Term, to_decimal

log = logging.getLogger(__name__)


class ApproximantError(ValueError):
    pass


class EnsembleTooSmall(ApproximantError):
    pass


@dataclass
class DiffApprox:
    order: int
    inhom_degree: int  # -1 for homogeneous
    degrees: tuple[int, ...]  # degrees of Q_0..Q_M
    q: list  # q[i][j]
    p: list
    n_terms: int  # coefficients used to fix the approximant
    degenerate: bool = False
    residual: mp.mpf = mp.mpf(0)
    singularities: list = field(default_factory=list)  # (x_c, exponent)

    def equation_residual(self, coeffs: Sequence) -> mp.mpf:
        """Largest relative defect of the defining equations on ``coeffs[:n_terms]``."""
        worst = mp.mpf(0)
        for n in range(self.n_terms):
            lhs = self._lhs(coeffs, n) - self._p(n)
            scale = max(abs(coeffs[n]), mp.mpf(1)) * max(1, n) ** self.order
            worst = max(worst, abs(lhs) / scale)
        return worst

    def _p(self, n: int):
        return self.p[n] if 0 <= n < len(self.p) else 0

    def _lhs(self, a: Sequence, n: int):
        return mp.fsum(
            self.q[i][j] * mp.mpf(n - j) ** i * a[n - j]
            for i in range(self.order + 1)
            for j in range(len(self.q[i]))
            if n >= j
        )

    def extend(self, coeffs: Sequence, total: int) -> list:
        """Coefficients a_0..a_{total-1}, using the data where given and the recurrence after."""
        a = list(coeffs[:total])
        while len(a) < total:
            n = len(a)
            lead = mp.fsum(self.q[i][0] * mp.mpf(n) ** i for i in range(self.order + 1))
            if lead == 0:
                raise ApproximantError(f"recurrence breaks down at n={n}")
            rest = mp.fsum(
                self.q[i][j] * mp.mpf(n - j) ** i * a[n - j]
                for i in range(self.order + 1)
                for j in range(1, len(self.q[i]))
                if n >= j
            )
            a.append((self._p(n) - rest) / lead)
        return a


def _solve(A: mp.matrix, b: mp.matrix, dps: int) -> tuple[mp.matrix, bool]:
    """Minimum-norm solution via SVD; flags rank deficiency."""
    n = A.cols
    U, S, V = mp.svd_r(A)
    smax = max(S) if len(S) else mp.mpf(0)
    tol = smax * mp.mpf(10) ** (-(dps // 2))
    x = mp.matrix(n, 1)
    rank = 0
    for k in range(len(S)):
        if S[k] > tol:
            rank += 1
            c = mp.fsum(U[i, k] * b[i] for i in range(A.rows)) / S[k]
            for j in range(n):
                x[j] += c * V[k, j]
    return x, rank < n


def _roots(coeffs: list) -> list:
    """Roots of sum coeffs[j] x^j, polished in mpmath."""
    c = list(coeffs)
    big = max((abs(v) for v in c), default=0)
    if big == 0:
        return []
    while len(c) > 1 and abs(c[-1]) <= big * mp.mpf(10) ** (-mp.mp.dps // 2):
        c.pop()
    if len(c) < 2:
        return []
    try:
        return list(mp.polyroots(c[::-1], maxsteps=100, extraprec=2 * mp.mp.dps))
    except mp.NoConvergence:
        approx = np.roots([complex(v) for v in c[::-1]])
        poly = lambda z: mp.polyval(c[::-1], z)  # noqa: E731
        out = []
        for z in approx:
            try:
                out.append(mp.findroot(poly, mp.mpc(z.real, z.imag)))
            except (ValueError, ZeroDivisionError):
                out.append(mp.mpc(z.real, z.imag))
        return out


def _singularities(da: DiffApprox) -> list:
    """Roots of Q_M with the exponent gamma in F ~ (x_c - x)^(-gamma)."""
    M = da.order
    qm = da.q[M]
    out = []
    for xc in _roots(qm):
        if abs(xc) == 0:
            continue
        dqm = mp.fsum(j * qm[j] * xc ** (j - 1) for j in range(1, len(qm)))
        qm1 = mp.fsum(da.q[M - 1][j] * xc**j for j in range(len(da.q[M - 1])))
        if dqm == 0:
            gamma = mp.nan
        else:
            gamma = qm1 / (xc * dqm) - (M - 1)
        if abs(mp.im(xc)) <= abs(xc) * mp.mpf(10) ** (-mp.mp.dps // 3):
            xc, gamma = mp.re(xc), mp.re(gamma)
        out.append((xc, gamma))
    out.sort(key=lambda t: abs(t[0]))
    return out


def differential_approximant(
    coeffs: Sequence,
    order: int,
    degrees: Sequence[int],
    inhom_degree: int = -1,
    n_terms: int | None = None,
    dps: int = DEFAULT_DPS,
) -> DiffApprox:
    """Fit the approximant with polynomial degrees ``degrees`` (for Q_0..Q_M)."""
    degrees = tuple(int(d) for d in degrees)
    if len(degrees) != order + 1:
        raise ApproximantError("need one degree per Q_i")
    unknowns = [(i, j) for i in range(order + 1) for j in range(degrees[i] + 1) if (i, j) != (order, 0)]
    unknowns += [("p", j) for j in range(inhom_degree + 1)]
    U = len(unknowns)
    n_terms = U if n_terms is None else n_terms
    if n_terms < U:
        raise ApproximantError(f"{U} unknowns need at least {U} equations")
    if len(coeffs) < n_terms:
        raise ApproximantError(f"need {n_terms} coefficients, got {len(coeffs)}")
    with mp.workdps(dps):
        a = [mp.mpf(c) for c in coeffs[:n_terms]]
        A = mp.matrix(n_terms, U)
        b = mp.matrix(n_terms, 1)
        for n in range(n_terms):
            for col, (i, j) in enumerate(unknowns):
                if i == "p":
                    A[n, col] = -1 if j == n else 0
                elif n >= j:
                    A[n, col] = mp.mpf(n - j) ** i * a[n - j]
            b[n] = -(mp.mpf(n) ** order) * a[n]
        x, degenerate = _solve(A, b, dps)
        q = [[mp.mpf(0)] * (degrees[i] + 1) for i in range(order + 1)]
        q[order][0] = mp.mpf(1)
        p = [mp.mpf(0)] * (inhom_degree + 1)
        for col, (i, j) in enumerate(unknowns):
            if i == "p":
                p[j] = x[col]
            else:
                q[i][j] = x[col]
        da = DiffApprox(order, inhom_degree, degrees, q, p, n_terms, degenerate)
        da.residual = da.equation_residual(a)
        da.singularities = _singularities(da)
        return da


@dataclass
class EnsembleConfig:
    orders: tuple = (2, 3)
    inhom_degrees: tuple = (0, 1, 2, 3, 4)
    term_drops: tuple = (0, 1, 2)  # also fit with the last few terms withheld
    spurious_factor: float = 0.9
    outlier_mads: float = 3.0
    min_members: int = 5
    dps: int = DEFAULT_DPS


def degree_splits(n_terms: int, order: int, inhom_degree: int) -> list[tuple[int, ...]]:
    """Q-degree tuples, differing by at most one, whose unknowns use all ``n_terms`` coefficients."""
    total = n_terms + 1 - (inhom_degree + 1)  # sum over i of (deg Q_i + 1)
    base, rem = divmod(total, order + 1)
    if base < 1:
        return []
    splits = set(itertools.permutations([1] * rem + [0] * (order + 1 - rem)))
    return sorted(tuple(base - 1 + s for s in sp) for sp in splits)


def radius_estimate(a: Sequence) -> mp.mpf:
    """Physical singularity estimate from the ratio method.

    Takes the smaller of 1/r_n and the first-order extrapolation
    1/(n r_n - (n-1) r_{n-1}), r_n = a_n / a_{n-1}, so that a singularity
    approached from above by the raw ratios is not mistaken for a spurious one.
    """
    n = len(a) - 1
    if n < 2 or a[-1] == 0 or a[-2] == 0 or a[-3] == 0:
        return mp.inf
    r1, r0 = a[-1] / a[-2], a[-2] / a[-3]
    mu = max(abs(r1), abs(n * r1 - (n - 1) * r0))
    return 1 / mu if mu else mp.inf


def ensemble_predictions(coeffs: Sequence, extra: int, config: EnsembleConfig = EnsembleConfig()):
    """Per-approximant predictions of the next ``extra`` coefficients, after screening."""
    dps = config.dps
    members, rejected = [], {"degenerate": 0, "spurious": 0, "breakdown": 0}
    with mp.workdps(dps):
        a = [mp.mpf(c) for c in coeffs]
        for drop in config.term_drops:
            aa = a[: len(a) - drop]
            if len(aa) < 4:
                continue
            xc_phys = radius_estimate(aa)
            for order in config.orders:
                for k in config.inhom_degrees:
                    for degs in degree_splits(len(aa), order, k):
                        try:
                            da = differential_approximant(aa, order, degs, k, dps=dps)
                        except ApproximantError:
                            rejected["breakdown"] += 1
                            continue
                        if da.residual > mp.mpf(10) ** (-(dps // 3)):
                            rejected["degenerate"] += 1
                            continue
                        if any(abs(z) < config.spurious_factor * xc_phys for z, _ in da.singularities):
                            rejected["spurious"] += 1
                            continue
                        try:
                            ext = da.extend(aa, len(a) + extra)
                        except ApproximantError:
                            rejected["breakdown"] += 1
                            continue
                        members.append((da, ext[len(a):]))
    return members, rejected


def _robust_mean(values: list, mads: float):
    med = sorted(values)[len(values) // 2]
    mad = sorted(abs(v - med) for v in values)[len(values) // 2]
    keep = [v for v in values if abs(v - med) <= mads * 1.4826 * mad] if mad > 0 else list(values)
    mean = mp.fsum(keep) / len(keep)
    spread = mp.sqrt(mp.fsum((v - mean) ** 2 for v in keep) / max(1, len(keep) - 1))
    return mean, spread, len(keep)


def extend_coefficients(coeffs: Sequence, extra: int, config: EnsembleConfig = EnsembleConfig()):
    """Ensemble means and spreads for the next ``extra`` coefficients."""
    members, rejected = ensemble_predictions(coeffs, extra, config)
    if len(members) < config.min_members:
        raise EnsembleTooSmall(
            f"only {len(members)} approximants survived screening (rejected: {rejected}); "
            f"need {config.min_members}"
        )
    means, spreads, kept = [], [], []
    with mp.workdps(config.dps):
        for t in range(extra):
            m, s, n = _robust_mean([pred[t] for _, pred in members], config.outlier_mads)
            means.append(m)
            spreads.append(s)
            kept.append(n)
    return means, spreads, {"members": len(members), "kept": kept, "rejected": rejected}


def series_extend(
    s: Series,
    extra: int,
    config: EnsembleConfig = EnsembleConfig(),
    transform: str = "ratios",
    min_exact: int = 10,
) -> tuple[Series, dict]:
    """Append ``extra`` predicted terms to ``s``.

    With ``transform="ratios"`` the approximants are fitted to r_L = C_L / C_{L-1}
    and the extended ratios are multiplied back up; ``"none"`` fits C_L itself.
    Returns the extended series and {L: relative error estimate}.
    """
    exact = s.exact_part()
    if len(exact) < min_exact:
        raise ApproximantError(f"series extension needs at least {min_exact} exact terms, got {len(exact)}")
    dps = config.dps
    with mp.workdps(dps):
        vals = exact.mp_values(dps)
        idx = exact.indices
        if idx != list(range(idx[0], idx[-1] + 1)):
            raise ApproximantError("exact terms must have contiguous indices")
        if transform == "ratios":
            data = [vals[L] / vals[L - 1] for L in idx[1:]]
        elif transform == "none":
            data = [vals[L] for L in idx]
        else:
            raise ValueError(f"unknown transform {transform!r}")
        means, spreads, info = extend_coefficients(data, extra, config)
        terms = list(exact.terms)
        errors = {}
        last = vals[idx[-1]]
        rel = mp.mpf(0)
        for t in range(extra):
            L = idx[-1] + 1 + t
            if transform == "ratios":
                last = last * means[t]
                # relative errors of successive ratios accumulate
                rel += abs(spreads[t] / means[t])
                value = last
            else:
                value = means[t]
                rel = abs(spreads[t] / means[t])
            terms.append(Term(L, to_decimal(value, min(dps, 60)), Provenance.EXTENDED))
            errors[L] = +rel
    out = Series(s.name, terms, dict(s.meta))
    out.meta["extension"] = {"transform": transform, **info}
    return out, errors


def singularity_ensemble(coeffs: Sequence, config: EnsembleConfig = EnsembleConfig()) -> dict:
    """Physical singularity x_c and exponent across the screened ensemble.

    For each approximant the real positive root of Q_M nearest the ratio estimate
    |a_{n-1}/a_n| is taken. Returns robust means and spreads of x_c, of
    mu = 1/x_c and of the exponent gamma in F ~ (x_c - x)^(-gamma).
    """
    members, rejected = ensemble_predictions(coeffs, 0, config)
    xs, gs = [], []
    with mp.workdps(config.dps):
        a = [mp.mpf(c) for c in coeffs]
        guess = abs(a[-2] / a[-1])
        for da, _ in members:
            real = [(x, g) for x, g in da.singularities if not isinstance(x, mp.mpc) and x > 0 and mp.isfinite(g)]
            if not real:
                continue
            x, g = min(real, key=lambda t: abs(t[0] - guess))
            xs.append(x)
            gs.append(g)
        if len(xs) < config.min_members:
            raise EnsembleTooSmall(f"only {len(xs)} approximants gave a physical singularity (rejected: {rejected})")
        xc, dxc, nx = _robust_mean(xs, config.outlier_mads)
        gamma, dg, ng = _robust_mean(gs, config.outlier_mads)
        return {
            "x_c": xc,
            "x_c_spread": dxc,
            "mu": 1 / xc,
            "mu_spread": dxc / xc**2,
            "gamma": gamma,
            "gamma_spread": dg,
            "members": len(members),
            "kept": [nx, ng],
            "rejected": rejected,
        }
