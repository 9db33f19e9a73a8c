"""Named cross-check suite wiring the analytic, simulation, oracle, and
Monte Carlo layers against one another.

``quick`` runs every deterministic identity plus a reduced random-field corpus
and the small-window oracle comparisons in well under a minute; ``full`` adds
the large-corpus filler equivalence and the statistical Monte Carlo grid.

Each check reports a residual and the tolerance it must stay under.  The
``corrupt`` hook deliberately inflates one named residual so the suite can be
shown to fail loudly rather than vacuously pass.

Statistical checks follow a documented single-retry policy: a 4-sigma miss is
rerun once with the next seed, and only a repeated miss fails the check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import analytic, montecarlo, oracle, simulate

__all__ = ["CheckResult", "run_checks", "check_names", "QUICK_CHECKS", "FULL_ONLY_CHECKS"]

T_GRID = tuple(round(0.1 * i, 1) for i in range(1, 11))

QUICK_CHECKS = (
    "density_value",
    "density_term_sum",
    "density_event_sum",
    "correlation_variance",
    "correlation_adjacent_tail",
    "correlation_telescope",
    "correlation_sign_decay",
    "gamma_assembly",
    "gamma_pair_sums",
    "double_sum_identity",
    "run_prob_sum",
    "filler_equivalence",
    "filler_properties",
    "oracle_center_density",
    "oracle_gamma_window",
    "oracle_consistency",
)
FULL_ONLY_CHECKS = (
    "mc_density",
    "mc_correlation",
    "mc_gamma_closure",
    "mc_determinism",
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""


def check_names(level: str = "full") -> tuple[str, ...]:
    return QUICK_CHECKS if level == "quick" else QUICK_CHECKS + FULL_ONLY_CHECKS


def _result(name, residual, tol, detail, corrupt):
    if corrupt == name:
        residual = residual + 1000.0 * tol + 1.0
        detail += " [residual inflated by corruption hook]"
    return CheckResult(name=name, passed=residual <= tol, residual=residual, tolerance=tol, detail=detail)


# ----------------------------------------------------------------------
# analytic identities


def _check_density_value(corrupt):
    rho = [analytic.density_exact(t) for t in T_GRID]
    residual = max(
        abs(analytic.density_exact(1.0) - (1.0 - math.exp(-2.0)) / 2.0),
        abs(analytic.density_exact(0.0)),
    )
    if any(b <= a for a, b in zip(rho, rho[1:])):
        residual = max(residual, 1.0)
    return _result("density_value", residual, 1e-12, "closed form at t=0,1 and strict growth", corrupt)


def _check_density_term_sum(corrupt):
    residual = max(
        abs(math.fsum(analytic.i_k(k, t) for k in range(61)) - analytic.density_exact(t))
        for t in T_GRID
    )
    return _result(
        "density_term_sum", residual, 1e-12, "single-index event masses resum to the density", corrupt
    )


def _check_density_event_sum(corrupt):
    residual = 0.0
    for t in T_GRID:
        total = math.fsum(
            analytic.g_event_prob(j, k, t) for j in range(61) for k in range(61)
        )
        residual = max(residual, abs(total - analytic.density_exact(t)))
    return _result(
        "density_event_sum", residual, 1e-8, "chain-pair event probabilities resum to the density", corrupt
    )


def _check_correlation_variance(corrupt):
    residual = max(
        abs(
            analytic.correlation_exact(0, t, 1e-13).value
            - analytic.density_exact(t) * (1.0 - analytic.density_exact(t))
        )
        for t in T_GRID
    )
    return _result(
        "correlation_variance", residual, 1e-12, "distance-0 correlation equals the Bernoulli variance", corrupt
    )


def _check_correlation_adjacent_tail(corrupt):
    residual = 0.0
    for t in T_GRID:
        for r in range(21):
            pair = (
                analytic.correlation_exact(r + 1, t, 1e-13).value
                + analytic.correlation_exact(r, t, 1e-13).value
            )
            residual = max(residual, abs(pair - analytic.tail_sum(r, t)))
    return _result(
        "correlation_adjacent_tail", residual, 1e-10, "adjacent correlations match the closed tail, r <= 20", corrupt
    )


def _check_correlation_telescope(corrupt):
    residual = 0.0
    for t in T_GRID:
        for s in range(5):
            residual = max(
                residual,
                abs(
                    analytic.telescope_partial(s, t, 30)
                    - analytic.correlation_exact(s, t, 1e-13).value
                ),
            )
    return _result(
        "correlation_telescope", residual, 1e-10, "telescoped tail sums rebuild the correlation", corrupt
    )


def _check_correlation_sign_decay(corrupt):
    residual = 0.0
    for t in T_GRID:
        for s in range(13):
            lead = (2.0 * t) ** (s + 1) / math.factorial(s + 1)
            # truncate relative to the leading term so the sign stays resolved
            # even where the whole series is tiny
            tol = 0.01 * math.exp(-2.0 * t) * lead
            c = analytic.correlation_exact(s, t, tol).value
            if (s % 2 == 0 and c <= 0.0) or (s % 2 == 1 and c >= 0.0):
                residual = max(residual, 1.0)
            residual = max(residual, abs(c) - 0.5 * lead)
    return _result(
        "correlation_sign_decay", residual, 1e-15, "alternating sign in s and factorial decay bound", corrupt
    )


def _check_gamma_assembly(corrupt):
    residual = 0.0
    for t in T_GRID:
        for s in range(2, 21, 2):
            total = math.fsum(analytic.gamma_component(i, s, t) for i in (1, 2, 3, 4))
            residual = max(residual, abs(total - analytic.gamma_even_exact(s, t)))
    return _result(
        "gamma_assembly", residual, 1e-10, "four attempt-split pieces resum to gamma, even s <= 20", corrupt
    )


def _check_gamma_pair_sums(corrupt):
    residual = 0.0
    for t in T_GRID:
        e2t = math.exp(-2.0 * t)
        for s in range(2, 21, 2):
            odd_poly = math.fsum(
                t ** (2 * i + 1) / math.factorial(2 * i + 1) for i in range((s - 2) // 2 + 1)
            )
            lhs13 = analytic.gamma_component(1, s, t) + analytic.gamma_component(3, s, t)
            residual = max(residual, abs(lhs13 - e2t * (1.0 - t) * odd_poly))
            alt = math.fsum((-2.0 * t) ** i / math.factorial(i) for i in range(3, s + 1))
            cubic = math.fsum(
                t ** (2 * i + 3) / math.factorial(2 * i + 3) for i in range((s - 4) // 2 + 1)
            )
            lhs24 = analytic.gamma_component(2, s, t) + analytic.gamma_component(4, s, t)
            residual = max(residual, abs(lhs24 + e2t * (0.5 * alt + (1.0 - t) * cubic)))
    return _result(
        "gamma_pair_sums", residual, 1e-10, "pieces 1+3 and 2+4 match their collapsed forms", corrupt
    )


def _check_double_sum_identity(corrupt):
    residual = 0.0
    for t in T_GRID:
        for r in range(2, 11):
            direct, simplified = analytic.s1_s2_identity(r, t)
            residual = max(residual, abs(direct - simplified))
    return _result(
        "double_sum_identity", residual, 1e-10, "raw double sums agree with the collapsed form", corrupt
    )


def _check_run_prob_sum(corrupt):
    residual = max(
        abs(
            math.fsum(analytic.b_run_prob(k, t) for k in range(61))
            - (math.expm1(-t) + t)
        )
        for t in T_GRID
    )
    return _result(
        "run_prob_sum", residual, 1e-12, "descent-run probabilities resum to e^-t - 1 + t", corrupt
    )


# ----------------------------------------------------------------------
# simulators


def _corpus(seed, count, sites=1000):
    rng = np.random.default_rng(seed)
    return [rng.random(sites) for _ in range(count)]


def _check_filler_equivalence(corrupt, seed, count):
    mismatched = 0
    for times in _corpus(seed, count):
        for boundary in simulate.BOUNDARY_MODES:
            fld = simulate.ArrivalField(times, boundary)
            for t in T_GRID:
                a = simulate.chronological_fill(fld, t)
                b = simulate.run_parity_fill(fld, t)
                if not np.array_equal(a.bits, b.bits):
                    mismatched += int(
                        np.bitwise_count(a.bits ^ b.bits).sum(dtype=np.int64)
                    )
    return _result(
        "filler_equivalence",
        float(mismatched),
        0.0,
        f"chronological vs run-parity on {count} fields x {len(T_GRID)} t x both boundaries",
        corrupt,
    )


def _check_filler_properties(corrupt, seed, count):
    violations = 0
    for times in _corpus(seed, count):
        for boundary in simulate.BOUNDARY_MODES:
            fld = simulate.ArrivalField(times, boundary)
            prev = None
            for t in T_GRID:
                occ = simulate.run_parity_fill(fld, t)
                w = occ.to_array()
                ring = boundary == "ring"
                neighbor = np.roll(w, -1) if ring else np.concatenate((w[1:], [0]))
                violations += int(np.count_nonzero(w & neighbor))  # adjacency
                if prev is not None:
                    violations += int(np.count_nonzero(prev & ~occ.bits))  # monotone in t
                prev = occ.bits
            # jamming at t = 1: every vacant site touches an occupied one
            w = simulate.run_parity_fill(fld, 1.0).to_array()
            if ring:
                blocked = (np.roll(w, 1) == 1) | (np.roll(w, -1) == 1)
            else:
                blocked = np.zeros(w.size, dtype=bool)
                blocked[1:] |= w[:-1] == 1
                blocked[:-1] |= w[1:] == 1
            violations += int(np.count_nonzero((w == 0) & ~blocked))
    return _result(
        "filler_properties",
        float(violations),
        0.0,
        f"exclusion, t-monotonicity, jamming on {count} fields",
        corrupt,
    )


# ----------------------------------------------------------------------
# oracle


def _check_oracle_center_density(corrupt):
    t = 0.3
    bound = oracle.window_truncation_bound(4, t)
    residual = abs(oracle.exact_center_density(4, t) - analytic.density_exact(t))
    return _result(
        "oracle_center_density", residual, bound, f"9-site window vs closed form at t={t}", corrupt
    )


def _check_oracle_gamma_window(corrupt):
    t = 0.3
    bound = oracle.window_truncation_bound(3, t)
    residual = abs(oracle.exact_gamma(3, 2, t) - analytic.gamma_even_exact(2, t))
    return _result(
        "oracle_gamma_window", residual, bound, f"10-site window vs closed form at t={t}", corrupt
    )


def _check_oracle_consistency(corrupt):
    t = 0.7
    residual = 0.0
    occ = oracle.exact_pattern_prob(5, t, oracle.PatternSpec([(2, oracle.OCCUPIED)]))
    vac = oracle.exact_pattern_prob(5, t, oracle.PatternSpec([(2, oracle.VACANT)]))
    residual = max(residual, abs(occ + vac - 1.0))
    for p in (occ, vac):
        residual = max(residual, -p, p - 1.0)
    neither = oracle.exact_pattern_prob(
        4, t, oracle.PatternSpec([(1, oracle.NOT_ATTEMPTED), (2, oracle.NOT_ATTEMPTED)])
    )
    both = oracle.exact_pattern_prob(
        4, t, oracle.PatternSpec([(1, oracle.ATTEMPTED), (2, oracle.ATTEMPTED)])
    )
    residual = max(residual, abs(neither - (1.0 - t) ** 2), abs(both - t * t))
    return _result(
        "oracle_consistency", residual, 1e-12, "complement closure and attempt-split prefactors", corrupt
    )


# ----------------------------------------------------------------------
# Monte Carlo (full level)


def _mc_config(seed, sites, replicas):
    return montecarlo.SimConfig(sites=sites, replicas=replicas, seed=seed, t_grid=T_GRID, s_max=4)


def _mc_density_residual(config, threads):
    table = montecarlo.run_density_mc(config, threads=threads)
    residual = 0.0
    for t, est in table.items():
        residual = max(residual, abs(est.mean - analytic.density_exact(t)) - 4.0 * est.stderr)
        residual = max(residual, est.stderr - 2e-4)
    return residual


def _check_mc_density(corrupt, config, threads):
    residual = _mc_density_residual(config, threads)
    detail = f"density within 4 sigma, stderr <= 2e-4 ({config.sites} sites, {config.replicas} replicas)"
    if residual > 0.0:  # documented single-retry policy for 4-sigma flukes
        residual = _mc_density_residual(replace(config, seed=config.seed + 1), threads)
        detail += "; retried with next seed"
    return _result("mc_density", residual, 0.0, detail, corrupt)


def _mc_correlation_residual(config, threads):
    table = montecarlo.run_correlation_mc(config, threads=threads)
    residual = 0.0
    for (s, t), est in table.items():
        exact = analytic.correlation_exact(s, t, 1e-13).value
        residual = max(residual, abs(est.mean - exact) - 4.0 * est.stderr)
    return residual


def _check_mc_correlation(corrupt, config, threads):
    residual = _mc_correlation_residual(config, threads)
    detail = "C_s within 4 sigma for s <= 4 across the t-grid"
    if residual > 0.0:
        residual = _mc_correlation_residual(replace(config, seed=config.seed + 1), threads)
        detail += "; retried with next seed"
    return _result("mc_correlation", residual, 0.0, detail, corrupt)


def _mc_gamma_residual(config, threads):
    table = montecarlo.run_gamma_mc(config, 2, threads=threads)
    residual = 0.0
    for t, est in table.items():
        exact = analytic.gamma_even_exact(2, t)
        residual = max(residual, abs(est.gamma.mean - exact) - 4.0 * est.gamma.stderr)
        closure = est.closure_residual
        # the closure identity holds per configuration on a ring, so only
        # float rounding is left; the 1e-15 floor absorbs it
        residual = max(residual, abs(closure.mean) - 4.0 * closure.stderr - 1e-15)
    return residual


def _check_mc_gamma_closure(corrupt, config, threads):
    residual = _mc_gamma_residual(config, threads)
    detail = "gamma_2 within 4 sigma and probability bookkeeping closes"
    if residual > 0.0:
        residual = _mc_gamma_residual(replace(config, seed=config.seed + 1), threads)
        detail += "; retried with next seed"
    return _result("mc_gamma_closure", residual, 0.0, detail, corrupt)


def _check_mc_determinism(corrupt, seed):
    config = montecarlo.SimConfig(sites=20_000, replicas=8, seed=seed, t_grid=(0.5, 1.0), s_max=2)
    runs = [montecarlo.run_density_mc(config, threads=th) for th in (1, 2, 4)]
    mismatches = 0
    for other in runs[1:]:
        for t in config.t_grid:
            if runs[0][t] != other[t]:
                mismatches += 1
    return _result(
        "mc_determinism", float(mismatches), 0.0, "bit-identical estimates under 1/2/4 threads", corrupt
    )


# ----------------------------------------------------------------------


def run_checks(
    level: str = "quick",
    seed: int = 42,
    sites: int = 1_000_000,
    replicas: int = 32,
    corrupt: str | None = None,
    threads: int | None = None,
) -> list[CheckResult]:
    """Run the named cross-check suite and return one result per check."""
    if level not in ("quick", "full"):
        raise ValueError("level must be 'quick' or 'full'")
    if corrupt is not None and corrupt not in check_names("full"):
        raise ValueError(f"unknown check name {corrupt!r}")

    corpus_count = 300 if level == "quick" else 10_000
    results = [
        _check_density_value(corrupt),
        _check_density_term_sum(corrupt),
        _check_density_event_sum(corrupt),
        _check_correlation_variance(corrupt),
        _check_correlation_adjacent_tail(corrupt),
        _check_correlation_telescope(corrupt),
        _check_correlation_sign_decay(corrupt),
        _check_gamma_assembly(corrupt),
        _check_gamma_pair_sums(corrupt),
        _check_double_sum_identity(corrupt),
        _check_run_prob_sum(corrupt),
        _check_filler_equivalence(corrupt, seed, corpus_count),
        _check_filler_properties(corrupt, seed + 1, corpus_count),
        _check_oracle_center_density(corrupt),
        _check_oracle_gamma_window(corrupt),
        _check_oracle_consistency(corrupt),
    ]
    if level == "full":
        config = _mc_config(seed, sites, replicas)
        results.extend(
            [
                _check_mc_density(corrupt, config, threads),
                _check_mc_correlation(corrupt, config, threads),
                _check_mc_gamma_closure(corrupt, config, threads),
                _check_mc_determinism(corrupt, seed),
            ]
        )
    return results
