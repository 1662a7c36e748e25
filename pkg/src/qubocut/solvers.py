"""Exact brute-force minimization and the end-to-end classical pipeline."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .bitops import index_to_spins, term_to_index
from .community import detect_multilevel, refine_boundary, score_g
from .errors import ParameterError, PipelineStepError, ResourceLimitError
from .graphs import Graph, maxcut_to_qubo
from .polynomial import PuboPolynomial, energy_table
from .reducer import (
    DEFAULT_BOUNDARY_CAP,
    ReducedInstance,
    _assemble,
    _boundary_polynomial,
    _reduced_index_map,
    lift_solution,
    quench,
    split_energy,
    table_to_polynomial,
)

__all__ = [
    "brute_force_min",
    "PipelineConfig",
    "PipelineReport",
    "classical_pipeline",
    "DEFAULT_BRUTE_CAP",
    "CSV_HEADER",
]

DEFAULT_BRUTE_CAP = 30
_FULL_TABLE_LIMIT = 24
_CHUNK_BITS = 22


def brute_force_min(
    poly: PuboPolynomial, cap: int = DEFAULT_BRUTE_CAP
) -> tuple[float, np.ndarray]:
    """Exact minimum energy and its lowest-bitmask witness.

    Up to 24 variables the full energy table is materialized with one fast
    Walsh-Hadamard transform; beyond that (up to ``cap``) assignments are
    scanned in fixed-size chunks so memory stays bounded.
    """
    n = poly.num_vars
    if n > cap:
        raise ResourceLimitError(f"{n} variables exceed the brute-force cap {cap}")
    if n <= _FULL_TABLE_LIMIT:
        energies = energy_table(poly)
        best = int(np.argmin(energies))
        return float(energies[best]), index_to_spins(best, n)
    term_masks = np.array(
        [term_to_index(t, n) for t in poly.terms if t], dtype=np.uint64
    )
    term_coeffs = np.array(
        [c for t, c in poly.terms.items() if t], dtype=np.float64
    )
    constant = poly.constant()
    best_energy = np.inf
    best_mask = 0
    chunk = 1 << _CHUNK_BITS
    for start in range(0, 1 << n, chunk):
        masks = np.arange(start, min(start + chunk, 1 << n), dtype=np.uint64)
        acc = np.full(masks.size, constant, dtype=np.float64)
        for tmask, coeff in zip(term_masks, term_coeffs):
            parity = np.bitwise_count(masks & tmask) & np.uint64(1)
            acc += coeff * (1.0 - 2.0 * parity.astype(np.float64))
        local = int(np.argmin(acc))
        if acc[local] < best_energy:
            best_energy = float(acc[local])
            best_mask = start + local
    return best_energy, index_to_spins(best_mask, n)


@dataclass
class PipelineConfig:
    """Knobs for :func:`classical_pipeline`.

    ``mode`` selects exact or core-fixed quenching; ``backend`` solves the
    reduced instance with the in-package brute-force oracle, an external
    weighted-MaxSAT solver, or the QAOA simulator.  ``compute_original_min``
    defaults to solving the original instance exactly whenever it fits under
    ``brute_cap`` (needed for approximation ratios and equality checks).
    """

    mode: str = "exact"
    backend: str = "oracle"
    seed: int = 0
    refine: bool = True
    boundary_cap: int = DEFAULT_BOUNDARY_CAP
    brute_cap: int = DEFAULT_BRUTE_CAP
    compute_original_min: bool | None = None
    solver_cmd: str | None = None
    solver_timeout: float | None = None
    fallback_to_oracle: bool = True
    qaoa_depth: int = 4
    qaoa_budget: int = 10_000
    qaoa_starts: int = 4
    qaoa_cap: int = 24
    graph_kind: str = ""
    graph_k: int | None = None

    def __post_init__(self):
        if self.mode not in ("exact", "core-fixed"):
            raise ParameterError(f"unknown mode {self.mode!r}")
        if self.backend not in ("oracle", "wcnf", "qaoa"):
            raise ParameterError(f"unknown backend {self.backend!r}")


@dataclass
class PipelineReport:
    """Timings, reduction statistics and solutions of one pipeline run."""

    n: int
    num_edges: int
    mode: str
    backend: str
    seed: int
    num_communities: int = 0
    boundary_size: int = 0
    score: int = 0
    community_sizes: list[int] = field(default_factory=list)
    degree_histogram: dict = field(default_factory=dict)
    t_detect: float = 0.0
    t_quench: float = 0.0
    t_assemble: float = 0.0
    t_solve: float = 0.0
    e_min_original: float | None = None
    e_min_reduced: float | None = None
    lifted_energy: float | None = None
    lifted_spins: list[int] = field(default_factory=list)
    qaoa: dict | None = None
    graph_kind: str = ""
    graph_k: int | None = None

    @property
    def total_time(self) -> float:
        return self.t_detect + self.t_quench + self.t_assemble + self.t_solve

    def to_json_dict(self) -> dict:
        out = dict(self.__dict__)
        out["total_time"] = self.total_time
        return out

    def to_csv_row(self) -> str:
        def fmt(x):
            return "" if x is None else repr(x)

        return ",".join(
            [
                str(self.n),
                "" if self.graph_k is None else str(self.graph_k),
                str(self.seed),
                self.mode,
                str(self.num_communities),
                str(self.boundary_size),
                str(self.score),
                repr(self.t_detect),
                repr(self.t_quench),
                repr(self.t_assemble),
                repr(self.t_solve),
                fmt(self.e_min_original),
                fmt(self.e_min_reduced),
            ]
        )


CSV_HEADER = "n,k,seed,mode,num_communities,B,g,t1,t2,t3,t4,e_min_original,e_min_reduced"


def _qaoa_comparison(poly, instance, assignment, cfg: PipelineConfig) -> dict:
    """Ratios for the three cases: original, reduced exact, reduced core-fixed."""
    from .qaoa import optimize
    from .reducer import reduce_core_fixed, reduce_exact

    if instance.mode == "exact":
        exact_poly = instance.poly
        cf_poly = reduce_core_fixed(poly, assignment, boundary_cap=cfg.boundary_cap).poly
    else:
        cf_poly = instance.poly
        exact_poly = reduce_exact(poly, assignment, boundary_cap=cfg.boundary_cap).poly
    info = {"depth": cfg.qaoa_depth, "budget": cfg.qaoa_budget}
    cases = (
        ("original", poly),
        ("reduced_exact", exact_poly),
        ("reduced_core_fixed", cf_poly),
    )
    for tag, target in cases:
        e_min, _ = brute_force_min(target, cfg.brute_cap)
        result = optimize(
            target,
            p=cfg.qaoa_depth,
            budget=cfg.qaoa_budget,
            starts=cfg.qaoa_starts,
            seed=cfg.seed,
            e_min=e_min if e_min != 0 else None,
            cap=cfg.qaoa_cap,
        )
        info[f"ratio_{tag}"] = result.ratio
        info[f"expectation_{tag}"] = result.expectation
        info[f"evals_{tag}"] = result.evals_used
    return info


def _solve_reduced(instance: ReducedInstance, poly, assignment, cfg: PipelineConfig):
    """Returns (reduced min energy, reduced argmin spins, qaoa info or None)."""
    reduced = instance.poly
    if cfg.backend == "wcnf":
        from .errors import ExternalSolverError
        from .wcnf import pubo_to_wcnf, run_external_solver

        if cfg.solver_cmd is None and not cfg.fallback_to_oracle:
            raise ParameterError("wcnf backend needs solver_cmd (or fallback enabled)")
        if cfg.solver_cmd is not None:
            try:
                res = run_external_solver(
                    pubo_to_wcnf(reduced), cfg.solver_cmd, reduced,
                    timeout=cfg.solver_timeout,
                )
                return res.energy, res.spins, None
            except ExternalSolverError:
                if not cfg.fallback_to_oracle:
                    raise
        return (*brute_force_min(reduced, cfg.brute_cap), None)
    if cfg.backend == "qaoa":
        e_min, spins = brute_force_min(reduced, cfg.brute_cap)
        return e_min, spins, _qaoa_comparison(poly, instance, assignment, cfg)
    return (*brute_force_min(reduced, cfg.brute_cap), None)


def classical_pipeline(g: Graph, cfg: PipelineConfig | None = None) -> PipelineReport:
    """Detect communities, quench, assemble the reduced PUBO, solve, lift.

    The four stages are timed separately; any failure is re-raised as a
    :class:`PipelineStepError` naming the stage.
    """
    cfg = cfg or PipelineConfig()
    report = PipelineReport(
        n=g.num_vertices,
        num_edges=g.num_edges,
        mode=cfg.mode,
        backend=cfg.backend,
        seed=cfg.seed,
        graph_kind=cfg.graph_kind,
        graph_k=cfg.graph_k,
    )
    poly = maxcut_to_qubo(g)

    t0 = time.perf_counter()
    try:
        assignment = detect_multilevel(g, seed=cfg.seed)
        if cfg.refine:
            assignment = refine_boundary(g, assignment, seed=cfg.seed)
    except Exception as exc:
        raise PipelineStepError("detect", exc) from exc
    report.t_detect = time.perf_counter() - t0
    report.num_communities = assignment.num_communities
    report.boundary_size = int(assignment.boundary.sum())
    report.score = score_g(assignment)
    report.community_sizes = assignment.sizes().tolist()

    # stage 2 runs split + quench; stage 3 converts tables and assembles
    t0 = time.perf_counter()
    try:
        subs, across = split_energy(poly, assignment)
        if cfg.mode == "exact":
            tables = [quench(sub, boundary_cap=cfg.boundary_cap) for sub in subs]
        else:
            frozen_cores = []
            for sub in subs:
                _, local_spins = brute_force_min(sub.intra, cfg.brute_cap)
                frozen_cores.append(local_spins[sub.num_boundary:])
    except Exception as exc:
        raise PipelineStepError("quench", exc) from exc
    report.t_quench = time.perf_counter() - t0

    t0 = time.perf_counter()
    try:
        var_map, to_reduced = _reduced_index_map(assignment)
        if cfg.mode == "exact":
            boundary_polys = [table_to_polynomial(t) for t in tables]
        else:
            boundary_polys = [
                _boundary_polynomial(sub, core)
                for sub, core in zip(subs, frozen_cores)
            ]
        reduced_poly = _assemble(subs, boundary_polys, across, to_reduced, len(var_map))
        instance = ReducedInstance(
            poly=reduced_poly,
            var_map=var_map,
            num_original_vars=poly.num_vars,
            mode=cfg.mode,
            subinstances=tuple(subs),
            tables=tuple(tables) if cfg.mode == "exact" else (),
        )
    except Exception as exc:
        raise PipelineStepError("assemble", exc) from exc
    report.t_assemble = time.perf_counter() - t0
    hist: dict[str, int] = {}
    for term in instance.poly.terms:
        hist[str(len(term))] = hist.get(str(len(term)), 0) + 1
    report.degree_histogram = hist

    t0 = time.perf_counter()
    try:
        e_reduced, reduced_spins, qaoa_info = _solve_reduced(
            instance, poly, assignment, cfg
        )
        lifted = lift_solution(instance, reduced_spins)
        report.e_min_reduced = float(e_reduced)
        report.lifted_spins = lifted.tolist()
        report.lifted_energy = float(poly.evaluate(lifted))
        report.qaoa = qaoa_info
    except Exception as exc:
        raise PipelineStepError("solve", exc) from exc
    report.t_solve = time.perf_counter() - t0

    compute_original = cfg.compute_original_min
    if compute_original is None:
        compute_original = g.num_vertices <= cfg.brute_cap
    if compute_original:
        e_orig, _ = brute_force_min(poly, cfg.brute_cap)
        report.e_min_original = float(e_orig)
    return report
