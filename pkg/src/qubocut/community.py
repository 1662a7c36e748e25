"""Community detection and boundary-minimizing refinement.

Detection is multilevel modularity maximization (local moves until no strict
improvement, then contraction, repeated).  Refinement then greedily relabels
single vertices to shrink

    g(C) = max(|B|, max_c |community c|),

where ``B`` is the set of boundary vertices (incident to at least one
cross-community edge).  ``|B|`` is the variable count of the reduced problem
and the largest community bounds the cost of quenching one community, so
``g`` is the bottleneck exponent of the whole reduction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .graphs import Graph

__all__ = [
    "CommunityAssignment",
    "detect_multilevel",
    "refine_boundary",
    "score_g",
    "modularity",
    "read_membership",
    "write_membership",
]

_MAX_LOCAL_PASSES = 1_000


@dataclass(frozen=True, eq=False)
class CommunityAssignment:
    """Vertex partition with precomputed boundary flags.

    ``membership[v]`` is the community of vertex ``v``; ids are contiguous
    ``0..num_communities-1`` and relabeled by first appearance.  ``boundary[v]``
    is true when ``v`` has a neighbor in another community.
    """

    membership: np.ndarray
    num_communities: int
    boundary: np.ndarray

    @classmethod
    def from_membership(cls, g: Graph, membership) -> "CommunityAssignment":
        member = np.asarray(membership, dtype=np.int64).copy()
        if member.shape != (g.num_vertices,):
            raise ParameterError(
                f"membership length {member.size} != {g.num_vertices} vertices"
            )
        if member.size and member.min() < 0:
            raise ParameterError("community ids must be nonnegative")
        relabel: dict[int, int] = {}
        for v in range(member.size):
            c = int(member[v])
            if c not in relabel:
                relabel[c] = len(relabel)
            member[v] = relabel[c]
        ext = _external_degree(g, member)
        return cls(member, len(relabel), ext > 0)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.membership, minlength=self.num_communities)

    def vertices_of(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.membership == c)

    def boundary_of(self, c: int) -> np.ndarray:
        return np.flatnonzero((self.membership == c) & self.boundary)

    def core_of(self, c: int) -> np.ndarray:
        return np.flatnonzero((self.membership == c) & ~self.boundary)

    def global_boundary(self) -> np.ndarray:
        return np.flatnonzero(self.boundary)


def _external_degree(g: Graph, membership: np.ndarray) -> np.ndarray:
    """Number of cross-community edges incident to each vertex."""
    ext = np.zeros(g.num_vertices, dtype=np.int64)
    for u, v in g.edges:
        if membership[u] != membership[v]:
            ext[u] += 1
            ext[v] += 1
    return ext


def score_g(assignment: CommunityAssignment) -> int:
    """max(total boundary size, largest community size)."""
    boundary_total = int(assignment.boundary.sum())
    largest = int(assignment.sizes().max()) if assignment.num_communities else 0
    return max(boundary_total, largest)


def modularity(g: Graph, membership) -> float:
    """Newman modularity at resolution 1 of a vertex partition."""
    member = np.asarray(membership, dtype=np.int64)
    if member.shape != (g.num_vertices,):
        raise ParameterError("membership length must equal the vertex count")
    m = g.total_weight()
    if m <= 0:
        return 0.0
    intra = 0.0
    tot: dict[int, float] = {}
    for idx, (u, v) in enumerate(g.edges):
        w = g.weight(idx)
        if member[u] == member[v]:
            intra += w
        tot[int(member[u])] = tot.get(int(member[u]), 0.0) + w
        tot[int(member[v])] = tot.get(int(member[v]), 0.0) + w
    return intra / m - sum((t / (2.0 * m)) ** 2 for t in tot.values())


def _local_moves(n, adj, strength, m2, membership, rng) -> bool:
    """One level of modularity local search; strict improvements only.

    Vertices are scanned in a fresh seeded permutation each pass; a vertex
    moves to the community with the largest positive modularity gain, ties
    rejected (and ties between distinct winning targets broken toward the
    lower community id by scan order).
    """
    tot = np.zeros(n, dtype=np.float64)
    for v in range(n):
        tot[membership[v]] += strength[v]
    moved_any = False
    for _ in range(_MAX_LOCAL_PASSES):
        moves = 0
        for v in rng.permutation(n):
            v = int(v)
            old = membership[v]
            k_v = strength[v]
            wcom: dict[int, float] = {}
            for u, w in adj[v]:
                c = int(membership[u])
                wcom[c] = wcom.get(c, 0.0) + w
            tot[old] -= k_v
            best_c = old
            best_gain = wcom.get(old, 0.0) - tot[old] * k_v / m2
            for c in sorted(wcom):
                if c == old:
                    continue
                gain = wcom[c] - tot[c] * k_v / m2
                if gain > best_gain:
                    best_gain = gain
                    best_c = c
            tot[best_c] += k_v
            if best_c != old:
                membership[v] = best_c
                moves += 1
        if moves == 0:
            break
        moved_any = True
    return moved_any


def detect_multilevel(g: Graph, seed: int = 0) -> CommunityAssignment:
    """Multilevel modularity communities; deterministic for a given seed."""
    n = g.num_vertices
    if n == 0:
        return CommunityAssignment.from_membership(g, np.zeros(0, dtype=np.int64))
    m2 = 2.0 * g.total_weight()
    if m2 <= 0:
        return CommunityAssignment.from_membership(g, np.arange(n))
    rng = np.random.default_rng(seed)

    adj = g.adjacency()
    self_loop = np.zeros(n, dtype=np.float64)
    strength = np.array([sum(w for _, w in nbrs) for nbrs in adj], dtype=np.float64)
    global_member = np.arange(n, dtype=np.int64)
    level_n = n

    while True:
        level_member = np.arange(level_n, dtype=np.int64)
        if not _local_moves(level_n, adj, strength, m2, level_member, rng):
            break
        relabel: dict[int, int] = {}
        for v in range(level_n):
            c = int(level_member[v])
            if c not in relabel:
                relabel[c] = len(relabel)
            level_member[v] = relabel[c]
        k = len(relabel)
        global_member = level_member[global_member]
        if k == level_n:
            break
        # contract communities to vertices; intra weight becomes a self-loop
        new_self = np.zeros(k, dtype=np.float64)
        cross: dict[tuple[int, int], float] = {}
        for v in range(level_n):
            cv = int(level_member[v])
            new_self[cv] += self_loop[v]
            for u, w in adj[v]:
                if u < v:
                    continue
                cu = int(level_member[u])
                if cu == cv:
                    new_self[cv] += w
                else:
                    key = (cv, cu) if cv < cu else (cu, cv)
                    cross[key] = cross.get(key, 0.0) + w
        adj = [[] for _ in range(k)]
        for (a, b), w in cross.items():
            adj[a].append((b, w))
            adj[b].append((a, w))
        adj = [sorted(nbrs) for nbrs in adj]
        strength = np.array(
            [sum(w for _, w in adj[c]) + 2.0 * new_self[c] for c in range(k)],
            dtype=np.float64,
        )
        self_loop = new_self
        level_n = k

    return CommunityAssignment.from_membership(g, global_member)


def refine_boundary(
    g: Graph,
    assignment: CommunityAssignment,
    seed: int = 0,
    _audit: bool = False,
) -> CommunityAssignment:
    """Greedy single-vertex relabeling that strictly decreases ``g``.

    Each pass scans vertices in a fresh seeded order and applies the first
    relabeling (to any other nonempty community) that strictly lowers the
    score; boundary bookkeeping is updated incrementally.  Stops at the first
    pass with no accepted move.  No new community ids are introduced; ids
    emptied along the way are compacted in the returned assignment.
    """
    n = g.num_vertices
    if n == 0:
        return assignment
    rng = np.random.default_rng(seed)
    membership = assignment.membership.copy()
    k = assignment.num_communities
    sizes = np.bincount(membership, minlength=k)
    ext = _external_degree(g, membership)
    boundary_total = int((ext > 0).sum())
    score = max(boundary_total, int(sizes.max()))

    neighbors: list[list[int]] = [[] for _ in range(n)]
    for u, v in g.edges:
        neighbors[u].append(v)
        neighbors[v].append(u)

    while True:
        accepted = False
        for v in rng.permutation(n):
            v = int(v)
            a = int(membership[v])
            counts: dict[int, int] = {}
            for u in neighbors[v]:
                c = int(membership[u])
                counts[c] = counts.get(c, 0) + 1
            deg_v = len(neighbors[v])
            for b in range(k):
                if b == a or sizes[b] == 0:
                    continue
                cnt_b = counts.get(b, 0)
                delta = (1 if deg_v - cnt_b > 0 else 0) - (1 if ext[v] > 0 else 0)
                for u in neighbors[v]:
                    cu = int(membership[u])
                    if cu == a and ext[u] == 0:
                        delta += 1
                    elif cu == b and ext[u] == 1:
                        delta -= 1
                new_boundary = boundary_total + delta
                new_largest = 0
                for c in range(k):
                    sz = int(sizes[c]) + (1 if c == b else 0) - (1 if c == a else 0)
                    if sz > new_largest:
                        new_largest = sz
                if max(new_boundary, new_largest) >= score:
                    continue
                # accept: v moves from a to b
                for u in neighbors[v]:
                    cu = int(membership[u])
                    if cu == a:
                        ext[u] += 1
                        if ext[u] == 1:
                            boundary_total += 1
                    elif cu == b:
                        ext[u] -= 1
                        if ext[u] == 0:
                            boundary_total -= 1
                was_boundary = ext[v] > 0
                ext[v] = deg_v - cnt_b
                if was_boundary and ext[v] == 0:
                    boundary_total -= 1
                elif not was_boundary and ext[v] > 0:
                    boundary_total += 1
                membership[v] = b
                sizes[a] -= 1
                sizes[b] += 1
                score = max(new_boundary, new_largest)
                accepted = True
                if _audit:
                    fresh = _external_degree(g, membership)
                    if not np.array_equal(fresh, ext) or boundary_total != int(
                        (fresh > 0).sum()
                    ):
                        raise AssertionError("incremental boundary state diverged")
                    if new_boundary != boundary_total:
                        raise AssertionError("predicted boundary delta was wrong")
                break
        if not accepted:
            break

    return CommunityAssignment.from_membership(g, membership)


def write_membership(assignment: CommunityAssignment, path) -> None:
    """One ``vertex community`` pair per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for v, c in enumerate(assignment.membership):
            fh.write(f"{v} {int(c)}\n")


def read_membership(g: Graph, path) -> CommunityAssignment:
    """Parse the format written by :func:`write_membership`."""
    member = np.full(g.num_vertices, -1, dtype=np.int64)
    with open(path, "r", encoding="utf-8") as fh:
        for ln in fh:
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            parts = ln.split()
            if len(parts) != 2:
                raise ParameterError(f"malformed membership line {ln!r}")
            v, c = int(parts[0]), int(parts[1])
            if not 0 <= v < g.num_vertices:
                raise ParameterError(f"vertex {v} out of range")
            if member[v] != -1:
                raise ParameterError(f"vertex {v} listed twice")
            member[v] = c
    if np.any(member < 0):
        missing = int(np.flatnonzero(member < 0)[0])
        raise ParameterError(f"vertex {missing} has no community")
    return CommunityAssignment.from_membership(g, member)
