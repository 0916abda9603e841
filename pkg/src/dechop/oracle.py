"""Decremental (2k-1)(1+eps) distance oracle with per-node sketches.

A second, uniformly sampled hierarchy (p_i = n^(-1/k), k levels) is
maintained with the same cluster machinery as the hopset, but on coarser
scaled views of G union H_bar_j, so bunches stay small and queries touch
only O(k) hash probes.  Every stored estimate is the minimum over scales of
the unscaled tree level, so estimates never undershoot true distances.

Internal slack budget: with gamma the worst-case estimate inflation and c
the cluster radius slack, the classic Thorup-Zwick walk returns at most
(1+gamma) * (2 * sum_{t=1..k-1} phi^t + 1) times the true distance, where
phi = (1+gamma)(1+c).  Init verifies this compound bound against the
contract (2k-1)(1+eps) in exact arithmetic and halves the internal slacks
until it holds.

Queries are read-only and may run concurrently; updates take exclusive
access, so queries always observe a consistent snapshot.
"""

from __future__ import annotations

import math
import struct
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .clustering import ClusterState, sample_uniform_hierarchy
from .graph import GraphError
from .hopset import ComponentView, HopsetState

_REC = struct.Struct("<IBBQQ")
_HEAD = struct.Struct("<IBI")
_FLAG_PIVOT = 1
_FLAG_BUNCH = 2


class DistanceOracle:
    """Thorup-Zwick style all-pairs oracle over a maintained hopset."""

    def __init__(self, hopset: HopsetState, k: int, eps, seed) -> None:
        if k < 2:
            raise GraphError("oracle requires k >= 2")
        eps = Fraction(eps)
        if not (0 < eps < 1):
            raise GraphError("eps must lie in (0, 1)")
        self.hs = hopset
        self.k = k
        self.eps = eps
        self.seed = seed
        g = hopset.graph
        self.n = g.n
        gamma_h = hopset.params.eps  # stretch budget of the underlying hopset
        eps0 = eps / 6
        eps_c = eps / (8 * k)
        while not self._contract_holds(gamma_h, eps0, eps_c):
            eps0 /= 2
            eps_c /= 2
            if eps0 < eps / 4096:
                raise GraphError(
                    "oracle contract unreachable: underlying hopset eps is too"
                    f" coarse ({gamma_h}); build it with eps <= {eps / 6}"
                )
        self.eps0 = eps0
        self.eps_c = eps_c
        ell = hopset.params.ell
        self.depth = math.ceil(2 * ell * (1 + eps) / eps0) + ell
        self.hier = sample_uniform_hierarchy(g.n, k, f"{seed}:oracle")
        self.views: Dict[int, ComponentView] = {}
        self.states: Dict[int, ClusterState] = {}
        # (z, v) -> {scale: level}; z is a center whose cluster holds v
        self.memb: Dict[Tuple[int, int], Dict[int, int]] = {}
        # (v, i) -> {scale: (pivot, level)}; nearest A_i vertex per scale
        self.pivots: Dict[Tuple[int, int], Dict[int, Tuple[int, int]]] = {}
        self.updates_seen = 0
        self.last_query_iterations = 0
        entries = self._replay_hopset_slices()
        for j in hopset.view_scales:
            view = ComponentView(g, j, self.eta(j))
            view.apply([e for e in entries if e[1] < j])
            self.views[j] = view
        for j in hopset.view_scales:
            state = ClusterState(self.views[j], self.hier, self.depth, self.eps_c)
            self.states[j] = state
            self._consume(j, state.initial_emissions())

    # -- parameters -----------------------------------------------------------

    def _contract_holds(self, gamma_h: Fraction, eps0: Fraction, eps_c: Fraction) -> bool:
        gamma = gamma_h + eps0 + gamma_h * eps0
        phi = (1 + gamma) * (1 + eps_c)
        alpha = sum(phi**t for t in range(1, self.k))
        bound = (1 + gamma) * (2 * alpha + 1)
        return bound <= (2 * self.k - 1) * (1 + self.eps)

    def eta(self, j: int) -> Fraction:
        return self.eps0 * self.hs.graph.min_weight * (1 << j) / self.hs.params.ell

    def _replay_hopset_slices(self) -> List[tuple]:
        entries: List[tuple] = []
        for r in self.hs.cluster_scales:
            for pair, w in self.hs.slice_pairs(r).items():
                entries.append(("hset", r, pair, w))
        return entries

    # -- state tables ----------------------------------------------------------

    def _consume(self, j: int, emissions) -> None:
        for em in emissions:
            kind, tag, pair = em[0], em[1], em[2]
            if tag[0] == "c":
                key = (tag[1], tag[2])
                if kind == "set":
                    self.memb.setdefault(key, {})[j] = em[3]
                else:
                    d = self.memb.get(key)
                    if d is not None:
                        d.pop(j, None)
                        if not d:
                            del self.memb[key]
            else:
                _, i, v = tag
                key = (v, i)
                if kind == "set":
                    rep = pair[0] if pair[1] == v else pair[1]
                    self.pivots.setdefault(key, {})[j] = (rep, em[3])
                else:
                    d = self.pivots.get(key)
                    if d is not None:
                        d.pop(j, None)
                        if not d:
                            del self.pivots[key]

    def propagate_update(self) -> None:
        """Consume the per-scale batches of the hopset's latest update."""
        entries = self.hs.last_batch
        for j in self.hs.view_scales:
            gev, eev = self.views[j].apply(
                e for e in entries if e[0] in ("gdel", "ginc") or e[1] < j
            )
            self._consume(j, self.states[j].update_clusters(gev, eev))
        self.updates_seen += 1

    # -- estimates ----------------------------------------------------------------

    def _memb_estimate(self, z: int, v: int) -> Optional[Fraction]:
        d = self.memb.get((z, v))
        if not d:
            return None
        return min(self.eta(j) * lvl for j, lvl in sorted(d.items()))

    def _pivot_estimate(self, v: int, i: int) -> Optional[Tuple[int, Fraction]]:
        d = self.pivots.get((v, i))
        if not d:
            return None
        best: Optional[Tuple[Fraction, int, int]] = None
        for j, (rep, lvl) in sorted(d.items()):
            est = self.eta(j) * lvl
            if best is None or est < best[0]:
                best = (est, j, rep)
        return best[2], best[0]

    # -- queries -------------------------------------------------------------------

    def query(self, u: int, v: int):
        """Classic TZ walk; at most k iterations; inf when out of range."""
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise GraphError("invalid vertex id")
        if u == v:
            self.last_query_iterations = 0
            return Fraction(0)
        w = u
        est_uw = Fraction(0)
        i = 0
        iterations = 0
        while True:
            d_wv = Fraction(0) if w == v else self._memb_estimate(w, v)
            if d_wv is not None:
                self.last_query_iterations = iterations
                return est_uw + d_wv
            i += 1
            iterations += 1
            if i >= self.k:
                self.last_query_iterations = iterations
                return math.inf
            u, v = v, u
            if u in self.hier.levels[i]:
                w, est_uw = u, Fraction(0)  # u is its own level-i pivot
                continue
            piv = self._pivot_estimate(u, i)
            if piv is None:
                self.last_query_iterations = iterations
                return math.inf
            w, est_uw = piv

    # -- sketches ----------------------------------------------------------------

    def sketch(self, u: int) -> bytes:
        """Self-contained bunch-with-distances of u, binary encoded."""
        if not (0 <= u < self.n):
            raise GraphError("invalid vertex id")
        records: List[Tuple[int, int, int, Fraction]] = []
        for (z, v), levels in sorted(self.memb.items()):
            if v != u or not levels:
                continue
            est = min(self.eta(j) * lvl for j, lvl in sorted(levels.items()))
            records.append((z, self.hier.level_of.get(z, 0), _FLAG_BUNCH, est))
        for i in range(1, self.k):
            if u in self.hier.levels[i]:
                records.append((u, i, _FLAG_PIVOT, Fraction(0)))
                continue
            piv = self._pivot_estimate(u, i)
            if piv is not None:
                records.append((piv[0], i, _FLAG_PIVOT, piv[1]))
        blob = [_HEAD.pack(u, self.k, len(records))]
        for vid, lvl, flags, est in records:
            num, den = est.numerator, est.denominator
            if num >= 1 << 64 or den >= 1 << 64:
                raise GraphError("sketch distance exceeds 64-bit encoding")
            blob.append(_REC.pack(vid, lvl, flags, num, den))
        return b"".join(blob)

    def sketch_size_entries(self, u: int) -> int:
        return (len(self.sketch(u)) - _HEAD.size) // _REC.size


def _parse_sketch(blob: bytes):
    owner, k, count = _HEAD.unpack_from(blob, 0)
    bunch: Dict[int, Fraction] = {}
    pivots: Dict[int, Tuple[int, Fraction]] = {}
    off = _HEAD.size
    for _ in range(count):
        vid, lvl, flags, num, den = _REC.unpack_from(blob, off)
        off += _REC.size
        est = Fraction(num, den)
        if flags & _FLAG_PIVOT:
            pivots[lvl] = (vid, est)
        else:
            bunch[vid] = est
    return owner, k, bunch, pivots


def _sketch_walk(parsed_u, parsed_v):
    owner_u, k, bunch_u, piv_u = parsed_u
    owner_v, k2, bunch_v, piv_v = parsed_v
    if k != k2:
        raise GraphError("sketches built with different k")
    if owner_u == owner_v:
        return Fraction(0)
    side_u = (owner_u, bunch_u, piv_u)
    side_v = (owner_v, bunch_v, piv_v)
    w = owner_u
    est_uw = Fraction(0)
    i = 0
    while True:
        if w == side_v[0]:
            return est_uw
        if w in side_v[1]:
            return est_uw + side_v[1][w]
        i += 1
        if i >= k:
            return math.inf
        side_u, side_v = side_v, side_u
        if i not in side_u[2]:
            return math.inf
        w, est_uw = side_u[2][i]


def sketch_query(sketch_u: bytes, sketch_v: bytes):
    """Reproduce query(u, v) from the two sketches alone."""
    return _sketch_walk(_parse_sketch(sketch_u), _parse_sketch(sketch_v))


def init_oracle(hopset: HopsetState, k: int, eps, seed) -> DistanceOracle:
    return DistanceOracle(hopset, k, eps, seed)
