"""Reduction of a community-partitioned QUBO to a boundary PUBO.

Given a degree-2 spin polynomial and a community assignment, the energy
splits as

    E(s) = sum_c E_c(boundary_c, core_c) + E_across(boundary),

with every cross-community edge landing in ``E_across`` and every
intra-community term in its community's ``E_c``.  Quenching a community
minimizes ``E_c`` over its core spins for each of the ``2**|B_c|`` boundary
assignments; the resulting table is exactly representable as a polynomial
over the community's boundary spins via a Walsh-Hadamard transform.  Summing
those polynomials with ``E_across`` yields a reduced instance over the global
boundary whose minimum equals the original minimum (exact mode) or upper
bounds it (core-fixed mode, which instead freezes each community's core at
one unconstrained optimum and keeps the reduced degree at 2).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .bitops import index_to_spins, spins_to_index
from .community import CommunityAssignment
from .errors import ParameterError, ResourceLimitError, UnsupportedDegreeError
from .polynomial import PuboPolynomial
from .wht import fwht

__all__ = [
    "CommunitySubinstance",
    "QuenchTable",
    "ReducedInstance",
    "split_energy",
    "quench",
    "table_to_polynomial",
    "reduce_exact",
    "reduce_core_fixed",
    "lift_solution",
    "WHT_PRUNE_EPS",
    "DEFAULT_BOUNDARY_CAP",
]

WHT_PRUNE_EPS = 1e-9
DEFAULT_BOUNDARY_CAP = 24


@dataclass(frozen=True)
class CommunitySubinstance:
    """One community's intra-community energy in local variables.

    Local indices run boundary-first: locals ``0..len(boundary_vars)-1`` are
    the community's boundary vertices (ascending global index), the rest its
    core.  A local assignment is the bitmask ``boundary_mask << |core|
    | core_mask``.
    """

    community: int
    boundary_vars: tuple[int, ...]
    core_vars: tuple[int, ...]
    intra: PuboPolynomial

    @property
    def num_boundary(self) -> int:
        return len(self.boundary_vars)

    @property
    def num_core(self) -> int:
        return len(self.core_vars)


@dataclass(frozen=True)
class QuenchTable:
    """Per-boundary-mask core minima of one community.

    ``energies[b]`` is ``min_core E_c(b, core)`` and ``argmin_cores[b]`` the
    lowest core bitmask attaining it, for each boundary mask ``b``.
    """

    community: int
    energies: np.ndarray
    argmin_cores: np.ndarray


@dataclass(frozen=True)
class ReducedInstance:
    """Reduced PUBO over the global boundary plus lifting data.

    ``var_map[j]`` is the original vertex behind reduced variable ``j``.
    ``mode`` is ``"exact"`` or ``"core-fixed"``; tables are kept in exact
    mode so lifting is a lookup, while core-fixed lifting re-minimizes each
    community's core under the chosen boundary.
    """

    poly: PuboPolynomial
    var_map: tuple[int, ...]
    num_original_vars: int
    mode: str
    subinstances: tuple[CommunitySubinstance, ...] = ()
    tables: tuple[QuenchTable, ...] = ()

    def to_json_dict(self) -> dict:
        data = self.poly.to_json_dict()
        data["var_map"] = list(self.var_map)
        data["num_original_vars"] = self.num_original_vars
        data["mode"] = self.mode
        return data

    @classmethod
    def from_json_dict(cls, data) -> "ReducedInstance":
        poly = PuboPolynomial.from_json_dict(data)
        try:
            var_map = tuple(int(v) for v in data["var_map"])
            mode = data["mode"]
            num_original = int(data["num_original_vars"])
        except (KeyError, TypeError) as exc:
            raise ParameterError(f"malformed reduced-instance JSON: {exc}") from exc
        if mode not in ("exact", "core-fixed"):
            raise ParameterError(f"unknown mode {mode!r}")
        return cls(poly, var_map, num_original, mode)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "ReducedInstance":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


def split_energy(
    poly: PuboPolynomial, assignment: CommunityAssignment
) -> tuple[list[CommunitySubinstance], PuboPolynomial]:
    """Split a degree-<=2 polynomial into per-community and across parts.

    Returns one subinstance per community (local variables, boundary first)
    and the across polynomial over original global indices, whose support is
    a subset of the global boundary plus the constant.
    """
    if poly.degree() > 2:
        raise UnsupportedDegreeError(
            f"energy splitting requires degree <= 2, got degree {poly.degree()}"
        )
    member = assignment.membership
    if member.size != poly.num_vars:
        raise ParameterError(
            f"assignment covers {member.size} vertices, polynomial has {poly.num_vars}"
        )
    local_index: dict[int, int] = {}
    subs_vars: list[tuple[list[int], list[int]]] = []
    for c in range(assignment.num_communities):
        boundary = [int(v) for v in assignment.boundary_of(c)]
        core = [int(v) for v in assignment.core_of(c)]
        subs_vars.append((boundary, core))
        for j, v in enumerate(boundary + core):
            local_index[v] = j

    intra_terms: list[list[tuple[tuple[int, ...], float]]] = [
        [] for _ in range(assignment.num_communities)
    ]
    across_terms: list[tuple[tuple[int, ...], float]] = []
    for term, coeff in poly.terms.items():
        if len(term) == 0:
            across_terms.append((term, coeff))
        elif len(term) == 1:
            c = int(member[term[0]])
            intra_terms[c].append(((local_index[term[0]],), coeff))
        else:
            i, j = term
            ci, cj = int(member[i]), int(member[j])
            if ci == cj:
                intra_terms[ci].append(((local_index[i], local_index[j]), coeff))
            else:
                across_terms.append((term, coeff))

    subs = []
    for c, (boundary, core) in enumerate(subs_vars):
        subs.append(
            CommunitySubinstance(
                community=c,
                boundary_vars=tuple(boundary),
                core_vars=tuple(core),
                intra=PuboPolynomial(len(boundary) + len(core), intra_terms[c]),
            )
        )
    return subs, PuboPolynomial(poly.num_vars, across_terms)


def _core_polynomial(sub: CommunitySubinstance, boundary_mask: int) -> PuboPolynomial:
    """Pin the boundary locals at ``boundary_mask``; reindex to core-only vars."""
    nb, nc = sub.num_boundary, sub.num_core
    spins = index_to_spins(boundary_mask, nb)
    terms: list[tuple[tuple[int, ...], float]] = []
    for term, coeff in sub.intra.terms.items():
        kept = []
        sign = 1
        for i in term:
            if i < nb:
                sign *= int(spins[i])
            else:
                kept.append(i - nb)
        terms.append((tuple(kept), coeff * sign))
    return PuboPolynomial(nc, terms)


def _default_core_solver():
    from .solvers import brute_force_min

    return brute_force_min


def quench(
    sub: CommunitySubinstance,
    core_solver: Callable | None = None,
    boundary_cap: int = DEFAULT_BOUNDARY_CAP,
) -> QuenchTable:
    """Minimize the community energy over its core for every boundary mask.

    ``core_solver`` takes a polynomial over the core variables alone and
    returns ``(min energy, argmin spins)``; it is invoked once per boundary
    mask.  The default is the exact brute-force solver.
    """
    if sub.num_boundary > boundary_cap:
        raise ResourceLimitError(
            f"community {sub.community}: |B_c|={sub.num_boundary} exceeds cap {boundary_cap}"
        )
    if core_solver is None:
        core_solver = _default_core_solver()
    size = 1 << sub.num_boundary
    energies = np.empty(size, dtype=np.float64)
    argmins = np.empty(size, dtype=np.int64)
    for mask in range(size):
        restricted = _core_polynomial(sub, mask)
        energy, core_spins = core_solver(restricted)
        energies[mask] = energy
        argmins[mask] = spins_to_index(core_spins)
    return QuenchTable(sub.community, energies, argmins)


def table_to_polynomial(table) -> PuboPolynomial:
    """Interpolate a full energy table by a spin polynomial.

    Accepts a :class:`QuenchTable` or a raw array of ``2**M`` energies indexed
    by bitmask; returns the unique multilinear polynomial over ``M`` spins
    whose energies reproduce the table.  Coefficients are ``fwht(energies) /
    2**M``, with entries below ``WHT_PRUNE_EPS`` in magnitude dropped.
    """
    energies = np.asarray(getattr(table, "energies", table), dtype=np.float64)
    transformed = fwht(energies)
    m = energies.size.bit_length() - 1
    coeffs = transformed / energies.size
    terms = []
    for t in range(energies.size):
        c = coeffs[t]
        if abs(c) < WHT_PRUNE_EPS:
            continue
        term = tuple(i for i in range(m) if (t >> (m - 1 - i)) & 1)
        terms.append((term, float(c)))
    return PuboPolynomial(m, terms)


def _reduced_index_map(assignment: CommunityAssignment) -> tuple[tuple[int, ...], dict]:
    var_map = tuple(int(v) for v in assignment.global_boundary())
    return var_map, {v: j for j, v in enumerate(var_map)}


def _assemble(
    subs: Sequence[CommunitySubinstance],
    boundary_polys: Sequence[PuboPolynomial],
    across: PuboPolynomial,
    to_reduced: dict,
    num_reduced: int,
) -> PuboPolynomial:
    total = across.reindex(to_reduced, num_reduced)
    for sub, bp in zip(subs, boundary_polys):
        mapping = {j: to_reduced[v] for j, v in enumerate(sub.boundary_vars)}
        total = total + bp.reindex(mapping, num_reduced)
    return total


def reduce_exact(
    poly: PuboPolynomial,
    assignment: CommunityAssignment,
    core_solver: Callable | None = None,
    boundary_cap: int = DEFAULT_BOUNDARY_CAP,
) -> ReducedInstance:
    """Quench every community exactly; the reduced minimum equals the original."""
    subs, across = split_energy(poly, assignment)
    var_map, to_reduced = _reduced_index_map(assignment)
    tables = [quench(sub, core_solver, boundary_cap) for sub in subs]
    boundary_polys = [table_to_polynomial(t) for t in tables]
    reduced = _assemble(subs, boundary_polys, across, to_reduced, len(var_map))
    return ReducedInstance(
        poly=reduced,
        var_map=var_map,
        num_original_vars=poly.num_vars,
        mode="exact",
        subinstances=tuple(subs),
        tables=tuple(tables),
    )


def _boundary_polynomial(
    sub: CommunitySubinstance, core_spins: np.ndarray
) -> PuboPolynomial:
    """Pin the core locals at fixed spins; reindex to boundary-only vars."""
    nb = sub.num_boundary
    terms: list[tuple[tuple[int, ...], float]] = []
    for term, coeff in sub.intra.terms.items():
        kept = []
        sign = 1
        for i in term:
            if i < nb:
                kept.append(i)
            else:
                sign *= int(core_spins[i - nb])
        terms.append((tuple(kept), coeff * sign))
    return PuboPolynomial(nb, terms)


def reduce_core_fixed(
    poly: PuboPolynomial,
    assignment: CommunityAssignment,
    core_solver: Callable | None = None,
    boundary_cap: int = DEFAULT_BOUNDARY_CAP,
) -> ReducedInstance:
    """Freeze each core at one unconstrained community optimum.

    Each community's full subinstance (boundary and core together) is solved
    once; the core spins of the lowest-bitmask optimum are substituted in.
    The reduced polynomial keeps degree <= 2 and its minimum upper-bounds the
    original one.
    """
    subs, across = split_energy(poly, assignment)
    var_map, to_reduced = _reduced_index_map(assignment)
    if core_solver is None:
        core_solver = _default_core_solver()
    for sub in subs:
        if sub.num_boundary + sub.num_core > max(boundary_cap, DEFAULT_BOUNDARY_CAP):
            raise ResourceLimitError(
                f"community {sub.community}: {sub.num_boundary + sub.num_core} "
                f"local variables exceed the solve cap"
            )
    boundary_polys = []
    for sub in subs:
        _, local_spins = core_solver(sub.intra)
        boundary_polys.append(_boundary_polynomial(sub, local_spins[sub.num_boundary:]))
    reduced = _assemble(subs, boundary_polys, across, to_reduced, len(var_map))
    return ReducedInstance(
        poly=reduced,
        var_map=var_map,
        num_original_vars=poly.num_vars,
        mode="core-fixed",
        subinstances=tuple(subs),
        tables=(),
    )


def lift_solution(instance: ReducedInstance, boundary_spins) -> np.ndarray:
    """Extend a reduced (boundary) assignment to all original variables.

    Exact mode reads each community's stored argmin core for the community's
    boundary mask; core-fixed mode re-minimizes each core under the fixed
    boundary, so the lifted energy never exceeds the reduced value at the
    same boundary assignment.
    """
    if not instance.subinstances:
        raise ParameterError(
            "this reduced instance carries no lifting data (loaded from JSON?)"
        )
    b = np.asarray(boundary_spins, dtype=np.int64)
    if b.shape != (len(instance.var_map),):
        raise ParameterError(
            f"expected {len(instance.var_map)} boundary spins, got {b.shape}"
        )
    to_reduced = {v: j for j, v in enumerate(instance.var_map)}
    full = np.zeros(instance.num_original_vars, dtype=np.int8)
    full[list(instance.var_map)] = b
    core_solver = _default_core_solver()
    for idx, sub in enumerate(instance.subinstances):
        local_boundary = [int(b[to_reduced[v]]) for v in sub.boundary_vars]
        mask = spins_to_index(local_boundary)
        if instance.mode == "exact":
            core_mask = int(instance.tables[idx].argmin_cores[mask])
            core_spins = index_to_spins(core_mask, sub.num_core)
        else:
            _, core_spins = core_solver(_core_polynomial(sub, mask))
        full[list(sub.core_vars)] = core_spins
    return full
