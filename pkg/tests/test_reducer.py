"""Energy splitting, quenching, table interpolation, reduction, lifting."""

import numpy as np
import pytest

from qubocut import (
    CommunityAssignment,
    CommunitySubinstance,
    Graph,
    PuboPolynomial,
    ReducedInstance,
    detect_multilevel,
    index_to_spins,
    lift_solution,
    maxcut_to_qubo,
    quench,
    random_regular,
    reduce_core_fixed,
    reduce_exact,
    refine_boundary,
    split_energy,
    table_to_polynomial,
)
from qubocut.errors import (
    DimensionError,
    ParameterError,
    ResourceLimitError,
    UnsupportedDegreeError,
)

from oracles import (
    all_spin_vectors,
    enumerate_min,
    eval_terms_naive,
    naive_wht,
)


def _k3():
    g = Graph(3, ((0, 1), (0, 2), (1, 2)))
    return g, maxcut_to_qubo(g)


def _reduced_oracle_table(poly, var_map):
    """Exhaustive min of the original over each boundary restriction."""
    best = {}
    for spins in all_spin_vectors(poly.num_vars):
        key = tuple(int(spins[v]) for v in var_map)
        e = eval_terms_naive(poly.terms, spins)
        if key not in best or e < best[key]:
            best[key] = e
    return best


def test_split_single_community():
    g, poly = _k3()
    ca = CommunityAssignment.from_membership(g, [0, 0, 0])
    subs, across = split_energy(poly, ca)
    assert len(subs) == 1
    assert across.terms == {(): -1.5}
    nonconstant = {t: c for t, c in poly.terms.items() if t}
    assert subs[0].intra.terms == nonconstant


def test_split_k3_buckets():
    g, poly = _k3()
    ca = CommunityAssignment.from_membership(g, [0, 0, 1])
    subs, across = split_energy(poly, ca)
    assert subs[0].boundary_vars == (0, 1)
    assert subs[0].core_vars == ()
    assert subs[0].intra.terms == {(0, 1): 0.5}
    assert subs[1].boundary_vars == (2,)
    assert subs[1].intra.terms == {}
    assert across.terms == {(): -1.5, (0, 2): 0.5, (1, 2): 0.5}


def test_split_reassembles_to_original():
    rng = np.random.default_rng(41)
    g = random_regular(20, 3, seed=41)
    poly = maxcut_to_qubo(g)
    ca = detect_multilevel(g, seed=41)
    subs, across = split_energy(poly, ca)
    for _ in range(100):
        spins = rng.choice([1, -1], size=20).astype(np.int8)
        total = eval_terms_naive(across.terms, spins)
        for sub in subs:
            local = [spins[v] for v in sub.boundary_vars + sub.core_vars]
            total += eval_terms_naive(sub.intra.terms, local)
        assert total == pytest.approx(eval_terms_naive(poly.terms, spins), abs=1e-12)


def test_split_rejects_cubic_terms():
    ca = CommunityAssignment.from_membership(Graph(3, ((0, 1),)), [0, 0, 0])
    cubic = PuboPolynomial(3, [((0, 1, 2), 1.0)])
    with pytest.raises(UnsupportedDegreeError):
        split_energy(cubic, ca)


def test_quench_no_core_copies_intra():
    g, poly = _k3()
    ca = CommunityAssignment.from_membership(g, [0, 0, 1])
    subs, _ = split_energy(poly, ca)
    table = quench(subs[0])
    for mask in range(4):
        spins = index_to_spins(mask, 2)
        assert table.energies[mask] == pytest.approx(subs[0].intra.evaluate(spins))
    np.testing.assert_array_equal(table.argmin_cores, np.zeros(4, dtype=np.int64))


def test_quench_path_graph_example():
    # path 0-1-2, boundary {0, 2}, core {1}; locals: 0->0, 2->1, 1->2
    intra = PuboPolynomial(3, [((), -1.0), ((0, 2), 0.5), ((1, 2), 0.5)])
    sub = CommunitySubinstance(0, (0, 2), (1,), intra)
    table = quench(sub)
    # boundary (+1, +1): core -1 cuts both edges
    assert table.energies[0] == -2.0
    assert table.argmin_cores[0] == 1
    np.testing.assert_array_equal(table.energies, [-2.0, -1.0, -1.0, -2.0])
    # degenerate minima resolve to the lowest core mask
    np.testing.assert_array_equal(table.argmin_cores, [1, 0, 0, 0])


def test_quench_matches_exhaustive_minimum():
    g = random_regular(14, 3, seed=42)
    poly = maxcut_to_qubo(g)
    ca = refine_boundary(g, detect_multilevel(g, seed=42), seed=42)
    subs, _ = split_energy(poly, ca)
    for sub in subs:
        nb, nc = len(sub.boundary_vars), len(sub.core_vars)
        table = quench(sub)
        assert table.energies.shape == (1 << nb,)
        for bmask in range(1 << nb):
            b = index_to_spins(bmask, nb)
            values = []
            for cmask in range(1 << nc):
                c = index_to_spins(cmask, nc)
                values.append(sub.intra.evaluate(np.concatenate([b, c])))
            assert table.energies[bmask] == pytest.approx(min(values), abs=1e-12)
            # table energy is a lower bound on any fixed-core slice
            assert table.energies[bmask] <= values[0] + 1e-12


def test_quench_uses_core_solver_once_per_mask():
    intra = PuboPolynomial(3, [((), -1.0), ((0, 2), 0.5), ((1, 2), 0.5)])
    sub = CommunitySubinstance(0, (0, 2), (1,), intra)
    calls = []

    def solver(poly):
        calls.append(poly.num_vars)
        table = [poly.evaluate(index_to_spins(m, poly.num_vars))
                 for m in range(1 << poly.num_vars)]
        best = int(np.argmin(table))
        return table[best], index_to_spins(best, poly.num_vars)

    table = quench(sub, core_solver=solver)
    assert len(calls) == 4
    np.testing.assert_array_equal(table.energies, [-2.0, -1.0, -1.0, -2.0])


def test_quench_boundary_cap():
    intra = PuboPolynomial(3, [((0, 1), 1.0)])
    sub = CommunitySubinstance(5, (0, 1, 2), (), intra)
    with pytest.raises(ResourceLimitError, match="community 5"):
        quench(sub, boundary_cap=2)


def test_table_to_polynomial_two_point():
    poly = table_to_polynomial(np.array([3.0, 7.0]))
    assert poly.terms == {(): 5.0, (0,): -2.0}


def test_table_to_polynomial_constant():
    poly = table_to_polynomial(np.full(8, 2.5))
    assert poly.terms == {(): 2.5}


def test_table_to_polynomial_reconstructs_random_table():
    rng = np.random.default_rng(43)
    table = rng.standard_normal(256)
    poly = table_to_polynomial(table)
    assert poly.num_vars == 8
    for mask in range(256):
        spins = index_to_spins(mask, 8)
        assert poly.evaluate(spins) == pytest.approx(table[mask], abs=1e-12)
    # coefficients agree with the naive transform
    coeffs = naive_wht(table) / 256.0
    for term, coeff in poly.terms.items():
        mask = sum(1 << (8 - 1 - i) for i in term)
        assert coeff == pytest.approx(coeffs[mask], abs=1e-12)


def test_table_to_polynomial_prunes_tiny_coefficients():
    base = PuboPolynomial(3, [((0, 1), 1.0), ((2,), 1e-12)])
    from qubocut import energy_table

    poly = table_to_polynomial(energy_table(base))
    assert (2,) not in poly.terms
    assert poly.terms[(0, 1)] == pytest.approx(1.0)


def test_table_to_polynomial_rejects_bad_length():
    with pytest.raises(DimensionError):
        table_to_polynomial(np.ones(3))


def test_reduce_exact_single_community_constant():
    g, poly = _k3()
    ca = CommunityAssignment.from_membership(g, [0, 0, 0])
    ri = reduce_exact(poly, ca)
    assert ri.var_map == ()
    assert ri.mode == "exact"
    e_min, _ = enumerate_min(poly)
    assert ri.poly.terms == {(): pytest.approx(e_min)}
    lifted = lift_solution(ri, [])
    assert poly.evaluate(lifted) == pytest.approx(e_min)


def test_reduce_exact_semantics_pointwise():
    # reduced energy at b equals the best original energy consistent with b
    for seed in (0, 3, 8):
        g = random_regular(12, 3, seed=seed)
        poly = maxcut_to_qubo(g)
        ca = refine_boundary(g, detect_multilevel(g, seed=seed), seed=seed)
        ri = reduce_exact(poly, ca)
        assert ri.var_map == tuple(np.flatnonzero(ca.boundary).tolist())
        oracle = _reduced_oracle_table(poly, ri.var_map)
        for b, expected in oracle.items():
            assert ri.poly.evaluate(np.array(b, dtype=np.int8)) == pytest.approx(
                expected, abs=1e-9
            )


def test_reduce_exact_preserves_ground_energy():
    for seed in range(5):
        g = random_regular(12, 3, seed=seed)
        poly = maxcut_to_qubo(g)
        ca = refine_boundary(g, detect_multilevel(g, seed=seed), seed=seed)
        ri = reduce_exact(poly, ca)
        e_orig, _ = enumerate_min(poly)
        e_red, _ = enumerate_min(ri.poly)
        assert e_red == e_orig


def test_reduce_exact_degree_bounded_by_boundary():
    g = random_regular(16, 3, seed=44)
    poly = maxcut_to_qubo(g)
    ca = refine_boundary(g, detect_multilevel(g, seed=44), seed=44)
    subs, _ = split_energy(poly, ca)
    for sub in subs:
        community_poly = table_to_polynomial(quench(sub))
        assert community_poly.degree() <= len(sub.boundary_vars)


def test_reduce_exact_parity_property():
    # MaxCut has no linear terms, so reduced terms pair spins up
    for seed in (1, 6):
        g = random_regular(14, 3, seed=seed)
        ca = refine_boundary(g, detect_multilevel(g, seed=seed), seed=seed)
        ri = reduce_exact(maxcut_to_qubo(g), ca)
        assert all(len(term) % 2 == 0 for term in ri.poly.terms)


def test_reduce_core_fixed_equals_exact_without_cores():
    g, poly = _k3()
    ca = CommunityAssignment.from_membership(g, [0, 0, 1])
    exact = reduce_exact(poly, ca)
    fixed = reduce_core_fixed(poly, ca)
    assert fixed.mode == "core-fixed"
    assert set(exact.poly.terms) == set(fixed.poly.terms)
    for term, coeff in exact.poly.terms.items():
        assert fixed.poly.terms[term] == pytest.approx(coeff, abs=1e-12)


def test_reduce_core_fixed_degree_and_upper_bound():
    for seed in range(5):
        g = random_regular(12, 3, seed=seed)
        poly = maxcut_to_qubo(g)
        ca = refine_boundary(g, detect_multilevel(g, seed=seed), seed=seed)
        ri = reduce_core_fixed(poly, ca)
        assert ri.poly.degree() <= 2
        e_orig, _ = enumerate_min(poly)
        e_red, _ = enumerate_min(ri.poly)
        assert e_red >= e_orig - 1e-12


def test_lift_exact_mode_is_pointwise_faithful():
    g = random_regular(10, 3, seed=45)
    poly = maxcut_to_qubo(g)
    ca = refine_boundary(g, detect_multilevel(g, seed=45), seed=45)
    ri = reduce_exact(poly, ca)
    nb = len(ri.var_map)
    for b in all_spin_vectors(nb):
        lifted = lift_solution(ri, b)
        assert lifted.shape == (10,)
        for j, v in enumerate(ri.var_map):
            assert lifted[v] == b[j]
        assert poly.evaluate(lifted) == pytest.approx(
            ri.poly.evaluate(b), abs=1e-9
        )


def test_lift_exact_mode_reaches_global_minimum():
    for seed in (2, 9):
        g = random_regular(12, 3, seed=seed)
        poly = maxcut_to_qubo(g)
        ca = refine_boundary(g, detect_multilevel(g, seed=seed), seed=seed)
        ri = reduce_exact(poly, ca)
        e_red, b_best = enumerate_min(ri.poly)
        lifted = lift_solution(ri, b_best)
        e_orig, _ = enumerate_min(poly)
        assert poly.evaluate(lifted) == pytest.approx(e_orig, abs=1e-12)


def test_lift_core_fixed_reminimizes():
    rng = np.random.default_rng(46)
    g = random_regular(12, 3, seed=46)
    poly = maxcut_to_qubo(g)
    ca = refine_boundary(g, detect_multilevel(g, seed=46), seed=46)
    ri = reduce_core_fixed(poly, ca)
    nb = len(ri.var_map)
    for _ in range(20):
        b = rng.choice([1, -1], size=nb).astype(np.int8)
        lifted = lift_solution(ri, b)
        # constrained re-minimization never evaluates worse than the
        # frozen-core reduced polynomial at the same boundary
        assert poly.evaluate(lifted) <= ri.poly.evaluate(b) + 1e-12


def test_reduced_instance_round_trip(tmp_path):
    g = random_regular(12, 3, seed=47)
    poly = maxcut_to_qubo(g)
    ca = refine_boundary(g, detect_multilevel(g, seed=47), seed=47)
    ri = reduce_exact(poly, ca)
    path = tmp_path / "reduced.json"
    ri.save(path)
    back = ReducedInstance.load(path)
    assert back.poly == ri.poly
    assert back.var_map == ri.var_map
    assert back.mode == ri.mode
    assert back.num_original_vars == ri.num_original_vars
    # lifting data is not serialized
    with pytest.raises(ParameterError):
        lift_solution(back, [1] * len(back.var_map))


def test_membership_must_cover_polynomial():
    g, poly = _k3()
    ca = CommunityAssignment.from_membership(Graph(2, ((0, 1),)), [0, 0])
    with pytest.raises(ParameterError):
        split_energy(poly, ca)
