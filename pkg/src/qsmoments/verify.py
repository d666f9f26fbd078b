"""Full invariant sweep behind ``qsmoments verify``.

Each check walks its cases in increasing size and stops at the first
counterexample, which is reported in a JSON-ready dict (exact values as
strings).
"""
from __future__ import annotations

import itertools
import math

from . import brute_oracle, closed_form, pgf_engine
from .exact_arith import TruncatedSeries, geometric_pow_series, log_inv_series, series_from


def _s(x) -> str:
    return str(x)


def _run(name: str, cases) -> dict:
    """``cases`` yields (label, ok, detail) triples."""
    count = 0
    for label, ok, detail in cases:
        count += 1
        if not ok:
            return {"name": name, "passed": False, "cases": count,
                    "first_counterexample": dict(label, **detail)}
    return {"name": name, "passed": True, "cases": count, "first_counterexample": None}


def run_checks(max_n_brute: int, max_n_exact: int, series_order: int, *,
               max_n: int | None = None, brute_cap: int | None = None) -> list:
    cc = lambda n: pgf_engine.comparison_counts(n, max_n=max_n)  # noqa: E731
    bc = lambda n: pgf_engine.bst_path_counts(n, max_n=max_n)  # noqa: E731
    brute = range(max_n_brute + 1)
    exact = range(max_n_exact + 1)
    N = series_order
    checks = []

    def dist_detail(got, want):
        return {"got": {_s(k): _s(v) for k, v in got.items()},
                "expected": {_s(k): _s(v) for k, v in want.items()}}

    def oracle_qs():
        for n in brute:
            got = brute_oracle.histogram_quicksort(n, cap=brute_cap)
            want = cc(n)
            yield {"n": n}, got == want, dist_detail(got, want)

    def oracle_bst():
        for n in brute:
            got = brute_oracle.histogram_bst(n, cap=brute_cap)
            want = bc(n)
            yield {"n": n}, got == want, dist_detail(got, want)

    def per_permutation():
        for n in brute:
            for perm in itertools.permutations(range(1, n + 1)):
                lhs = brute_oracle.quicksort_count(perm)
                rhs = brute_oracle.bst_path_length(perm[::-1]) + 2 * n
                yield {"n": n, "perm": list(perm)}, lhs == rhs, {"got": lhs, "expected": rhs}

    def worst_case():
        for n in brute:
            got = brute_oracle.quicksort_count(list(range(1, n + 1)))
            yield {"n": n}, got == n * (n + 3) // 2, {"got": got, "expected": n * (n + 3) // 2}

    def totals():
        for n in exact:
            d = cc(n)
            ok = d.total == math.factorial(n) and (n == 0 or d.max_cost == n * (n + 3) // 2)
            yield {"n": n}, ok, {"total": _s(d.total), "max_cost": d.max_cost}

    def shift():
        for n in exact:
            yield {"n": n}, pgf_engine.shift_identity_check(n, max_n=max_n), {}

    def moments_vs_closed():
        for n in exact:
            d = cc(n)
            b1, b2 = pgf_engine.factorial_moment(d, 1), pgf_engine.factorial_moment(d, 2)
            c1, c2 = closed_form.beta1_closed(n), closed_form.beta2_closed(n)
            yield {"n": n}, (b1, b2) == (c1, c2), {"exact": [_s(b1), _s(b2)], "closed": [_s(c1), _s(c2)]}

    def mean_variance():
        for n in exact:
            r = pgf_engine.moments_report(n, 2, max_n=max_n)
            mu, var = closed_form.mean_closed(n), closed_form.variance_closed(n)
            yield {"n": n}, (r.mean, r.variance) == (mu, var), {
                "exact": [_s(r.mean), _s(r.variance)], "closed": [_s(mu), _s(var)]}

    def coeffs_vs_betas():
        for n in range(N + 1):
            got = (closed_form.f1_coeff(n), closed_form.f2_coeff(n))
            want = (closed_form.beta1_closed(n), closed_form.beta2_closed(n))
            yield {"n": n}, got == want, {"got": [_s(x) for x in got], "expected": [_s(x) for x in want]}

    def variance_assembly():
        for n in range(N + 1):
            b1, b2 = closed_form.beta1_closed(n), closed_form.beta2_closed(n)
            var = closed_form.variance_closed(n)
            yield {"n": n}, b2 - b1 * b1 + b1 == var, {"got": _s(b2 - b1 * b1 + b1), "expected": _s(var)}

    def odes():
        for label, rep in (("f1", closed_form.ode_residual_f1(N)),
                           ("s=1", closed_form.ode_residual_fs(1, N)),
                           ("s=2", closed_form.ode_residual_fs(2, N))):
            yield {"equation": label, "order": N}, rep.is_zero, {"first_nonzero_index": rep.first_nonzero()}

    def greene():
        L = log_inv_series(N)
        L2 = L * L
        for m in range(5):
            g = geometric_pow_series(m + 1, N)
            for power, direct, formula in ((1, g * L, closed_form.greene_log_coeff),
                                           (2, g * L2, closed_form.greene_log2_coeff)):
                via_formula = series_from(lambda n: formula(m, n), N)
                yield {"m": m, "log_power": power}, via_formula == direct, {
                    "first_mismatch": _first_mismatch(via_formula, direct)}

    def f2_routes():
        direct = closed_form.f2_series_direct(N)
        formula = series_from(closed_form.f2_coeff, N)
        yield {"order": N}, direct == formula, {"first_mismatch": _first_mismatch(formula, direct)}

    checks.append(_run("brute_quicksort_equals_recurrence", oracle_qs()))
    checks.append(_run("brute_bst_equals_recurrence", oracle_bst()))
    checks.append(_run("per_permutation_bst_correspondence", per_permutation()))
    checks.append(_run("identity_permutation_worst_case", worst_case()))
    checks.append(_run("count_totals_and_max_cost", totals()))
    checks.append(_run("shift_identity", shift()))
    checks.append(_run("factorial_moments_equal_closed_forms", moments_vs_closed()))
    checks.append(_run("mean_variance_equal_closed_forms", mean_variance()))
    checks.append(_run("series_coefficients_equal_betas", coeffs_vs_betas()))
    checks.append(_run("variance_assembly_consistency", variance_assembly()))
    checks.append(_run("moment_ode_residuals_vanish", odes()))
    checks.append(_run("greene_formula_equals_series_algebra", greene()))
    checks.append(_run("f2_formula_equals_series_algebra", f2_routes()))
    return checks


def _first_mismatch(a: TruncatedSeries, b: TruncatedSeries):
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            return {"index": i, "got": _s(x), "expected": _s(y)}
    return None
