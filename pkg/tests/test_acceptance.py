"""Acceptance suite: the shipped guarantees, one test and one verdict line each.

Every test prints ``criterion NN: PASS/FAIL (measured numbers)`` so a full run
doubles as a scoreboard.  Thresholds and tolerances are part of the package
contract; see the README for the protocol behind each criterion.
"""

import time

import numpy as np
import pytest

import qubocut as qc
from qubocut.qaoa import (
    QaoaParams,
    approximation_ratio,
    diagonal_energies,
    expectation,
    optimize,
    run_circuit,
)
from qubocut.wht import fwht
from oracles import sign_matrix


def _criterion(num, ok, detail):
    line = f"criterion {num:02d}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    assert ok, line


def _refined_assignment(g, seed):
    return qc.refine_boundary(g, qc.detect_multilevel(g, seed=seed), seed=seed)


def _reduction_means(n, k, num_seeds):
    """Mean (1 - |B|/n) before and after boundary refinement."""
    base_vals, ref_vals = [], []
    for seed in range(num_seeds):
        g = qc.random_regular(n, k, seed=seed)
        base = qc.detect_multilevel(g, seed=seed)
        ref = qc.refine_boundary(g, base, seed=seed)
        base_vals.append(1.0 - base.boundary.sum() / n)
        ref_vals.append(1.0 - ref.boundary.sum() / n)
    return float(np.mean(base_vals)), float(np.mean(ref_vals))


def test_criterion_01_ground_energy_preservation():
    t0 = time.perf_counter()
    checked = 0
    mismatches = 0
    for n in (12, 16, 20):
        for seed in range(100):
            g = qc.random_regular(n, 3, seed=seed)
            poly = qc.maxcut_to_qubo(g)
            e_orig, _ = qc.brute_force_min(poly)
            assert (2 * e_orig).is_integer()
            inst = qc.reduce_exact(poly, _refined_assignment(g, seed))
            if inst.poly.num_vars == 0:
                e_red = inst.poly.terms.get((), 0.0)
            else:
                e_red, _ = qc.brute_force_min(inst.poly)
            checked += 1
            if e_red != e_orig:
                mismatches += 1
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 120.0
    _criterion(1, ok, f"{checked} graphs, {mismatches} mismatches, {elapsed:.1f}s")


def test_criterion_02_qubit_reduction_3_regular():
    t0 = time.perf_counter()
    details = []
    ok = True
    for n in (60, 100):
        base, refined = _reduction_means(n, 3, 100)
        ok = ok and refined >= 0.35 and base >= 0.22 and refined > base
        details.append(f"n={n} base {base:.3f} refined {refined:.3f}")
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 60.0
    _criterion(2, ok, "; ".join(details) + f", {elapsed:.1f}s")


def test_criterion_03_qubit_reduction_4_regular():
    details = []
    ok = True
    for n in (60, 100):
        base, refined = _reduction_means(n, 4, 100)
        ok = ok and refined >= 0.15 and base >= 0.03 and refined > base
        details.append(f"n={n} base {base:.3f} refined {refined:.3f}")
    _criterion(3, ok, "; ".join(details))


def test_criterion_04_erdos_renyi_no_reduction():
    details = []
    ok = True
    for n in (40, 60):
        vals = []
        for seed in range(50):
            g = qc.random_erdos_renyi(n, 0.3, seed=seed)
            ref = _refined_assignment(g, seed)
            vals.append(1.0 - ref.boundary.sum() / n)
        mean = float(np.mean(vals))
        ok = ok and mean <= 0.05
        details.append(f"n={n} mean {mean:.4f}")
    _criterion(4, ok, "; ".join(details))


def test_criterion_05_wht_correctness():
    t0 = time.perf_counter()
    worst_rec = 0.0
    worst_fast = 0.0
    for d in (2**4, 2**8, 2**12):
        signs = sign_matrix(d)
        rng = np.random.default_rng(d)
        for _ in range(100):
            values = rng.uniform(-1.0, 1.0, size=d)
            fast = fwht(values)
            naive = signs @ values
            worst_fast = max(worst_fast, float(np.max(np.abs(fast - naive))))
            rebuilt = signs @ (fast / d)
            worst_rec = max(worst_rec, float(np.max(np.abs(rebuilt - values))))
    elapsed = time.perf_counter() - t0
    ok = worst_rec <= 1e-10 and worst_fast <= 1e-10 and elapsed < 60.0
    _criterion(
        5,
        ok,
        f"300 tables, |recon| {worst_rec:.1e}, |fast-naive| {worst_fast:.1e}, "
        f"{elapsed:.1f}s",
    )


def test_criterion_06_parity_of_reduced_terms():
    checked = 0
    odd_instances = 0
    for n, count in ((12, 34), (16, 33), (20, 33)):
        for seed in range(100, 100 + count):
            g = qc.random_regular(n, 3, seed=seed)
            poly = qc.maxcut_to_qubo(g)
            inst = qc.reduce_exact(poly, _refined_assignment(g, seed))
            checked += 1
            if any(len(term) % 2 for term in inst.poly.terms):
                odd_instances += 1
    ok = checked == 100 and odd_instances == 0
    _criterion(6, ok, f"{checked} instances, {odd_instances} with odd terms")


def test_criterion_07_sat_round_trip():
    rng = np.random.default_rng(7)
    checked = 0
    identity_failures = 0
    count_failures = 0
    for _ in range(100):
        n = int(rng.integers(6, 13))
        terms = {(): int(rng.integers(-3, 4))}
        for _ in range(2 * n):
            k = int(rng.integers(1, 5))
            term = tuple(sorted(rng.choice(n, size=k, replace=False)))
            coeff = 0
            while coeff == 0:
                coeff = int(rng.integers(-3, 4))
            terms[term] = coeff
        poly = qc.PuboPolynomial(n, terms)
        inst = qc.pubo_to_wcnf(poly)
        assert inst.scale == 1 and float(inst.offset).is_integer()
        offset = int(inst.offset)

        masks = np.arange(1 << n, dtype=np.uint64)
        energies = np.zeros(1 << n, dtype=np.int64)
        for term, coeff in poly.terms.items():
            tmask = 0
            for var in term:
                tmask |= 1 << (n - 1 - var)
            par = np.bitwise_count(masks & np.uint64(tmask)).astype(np.int64) & 1
            energies += int(coeff) * (1 - 2 * par)

        falsified = np.zeros(1 << n, dtype=np.int64)
        for weight, literals in inst.clauses:
            set_mask = 0
            clear_mask = 0
            for lit in literals:
                bit = 1 << (n - abs(lit))
                if lit > 0:
                    set_mask |= bit
                else:
                    clear_mask |= bit
            hit = (masks & np.uint64(set_mask)) == np.uint64(set_mask)
            hit &= (masks & np.uint64(clear_mask)) == 0
            falsified += weight * hit
        satisfied = inst.total_weight() - falsified

        checked += 1
        if not np.array_equal(satisfied + offset, -energies):
            identity_failures += 1
        expected = sum(2 ** (len(t) - 1) for t in poly.terms if t)
        if len(inst.clauses) != expected:
            count_failures += 1
    ok = checked == 100 and identity_failures == 0 and count_failures == 0
    _criterion(
        7,
        ok,
        f"{checked} polynomials, {identity_failures} identity / "
        f"{count_failures} clause-count failures",
    )


def test_criterion_08_uniform_expectation():
    worst = 0.0
    ratios_ok = True
    for i in range(20):
        n = 8 + 2 * (i % 4)
        g = qc.random_regular(n, 3, seed=i)
        poly = qc.maxcut_to_qubo(g)
        energies = diagonal_energies(poly)
        state = run_circuit(energies, QaoaParams([], []))
        value = expectation(state, energies)
        worst = max(worst, abs(value - (-g.num_edges / 2)))
        e_min, _ = qc.brute_force_min(poly)
        ratio = approximation_ratio(value, e_min)
        ratios_ok = ratios_ok and ratio == value / e_min and 0.0 < ratio < 1.0
    ok = worst <= 1e-12 and ratios_ok
    _criterion(8, ok, f"20 instances, worst |<E>+M/2| = {worst:.1e}")


@pytest.mark.slow
def test_criterion_09_qaoa_ratio_ordering():
    t0 = time.perf_counter()
    instances = [(12, s) for s in (1, 3, 4, 5, 7, 8, 9)]
    instances += [(14, s) for s in (0, 1, 2)]
    ratios = {"orig": [], "exact": [], "cf": []}
    for n, seed in instances:
        g = qc.random_regular(n, 3, seed=seed)
        poly = qc.maxcut_to_qubo(g)
        assignment = _refined_assignment(g, seed)
        targets = {
            "orig": poly,
            "exact": qc.reduce_exact(poly, assignment).poly,
            "cf": qc.reduce_core_fixed(poly, assignment).poly,
        }
        for tag, target in targets.items():
            e_min, _ = qc.brute_force_min(target)
            result = optimize(
                target, p=4, budget=10_000, starts=4, seed=seed, e_min=e_min
            )
            ratios[tag].append(result.ratio)
    mean_orig = float(np.mean(ratios["orig"]))
    mean_exact = float(np.mean(ratios["exact"]))
    mean_cf = float(np.mean(ratios["cf"]))
    elapsed = time.perf_counter() - t0
    ok = mean_exact >= mean_orig and mean_cf >= mean_orig - 0.02
    _criterion(
        9,
        ok,
        f"10 instances, mean ratios orig {mean_orig:.4f} exact {mean_exact:.4f} "
        f"core-fixed {mean_cf:.4f}, {elapsed:.0f}s",
    )


def test_criterion_10_timing_breakdown():
    ok = True
    details = []
    for seed in range(5):
        g = qc.random_regular(20, 3, seed=seed)
        report = qc.classical_pipeline(g, qc.PipelineConfig(mode="exact", seed=seed))
        times = (report.t_detect, report.t_quench, report.t_assemble, report.t_solve)
        ok = ok and all(t >= 0 for t in times)
        ok = ok and report.total_time == sum(times)
        ok = ok and report.t_quench + report.t_assemble > report.t_detect
    details.append("5 seeds at n=20, steps >= 0, sum exact, (2)+(3) > (1)")
    _criterion(10, ok, "; ".join(details))
