"""Relay selection and multi-hop path construction.

Paths are planned on the fading-free feasibility graph: a directed edge
exists when the endpoints are mutually visible and the transmitter's mean
SNR supports at least `min_capacity_bps`.  Minimum-latency routing is a
breadth-first search (fewest hops); maximum-efficiency routing is a
shortest path under energy-per-bit edge weights.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import geom
from .channel import NoiseSpec, RadioParams, link_budget_const_db, noise_power_dbw
from .geom import GeoPoint
from .metrics import link_capacity_bps
from .pointproc import Constellation

SRC_NODE = -1
DST_NODE = -2


@dataclass(frozen=True)
class Path:
    """Ordered hops from source to destination.  Node ids are platform ids,
    with SRC_NODE / DST_NODE marking the endpoints."""

    nodes: tuple[int, ...]
    hop_capacities: tuple[float, ...]
    hop_distances_km: tuple[float, ...]

    def __post_init__(self):
        if len(self.nodes) < 2:
            raise ValueError("a path needs at least one hop")
        if len(self.hop_capacities) != len(self.nodes) - 1 or len(self.hop_distances_km) != len(self.nodes) - 1:
            raise ValueError("hop lists must have len(nodes) - 1 entries")

    @property
    def hops(self) -> int:
        return len(self.nodes) - 1

    @property
    def capacity_bps(self) -> float:
        return min(self.hop_capacities)


def select_relay(
    candidate_ids: Sequence[int],
    uplink_capacities_bps: Sequence[float],
    downlink_capacities_bps: Sequence[float],
    threshold_bps: float,
) -> Optional[int]:
    """Suboptimal relay rule: among candidates whose uplink capacity meets
    the threshold, pick the one with the largest downlink capacity.
    Ties go to the lowest id; None when no candidate qualifies."""
    if not (len(candidate_ids) == len(uplink_capacities_bps) == len(downlink_capacities_bps)):
        raise ValueError("candidate lists must have equal length")
    best_id = None
    best_cap = -math.inf
    for cid, up, down in sorted(zip(candidate_ids, uplink_capacities_bps, downlink_capacities_bps)):
        if up >= threshold_bps and down > best_cap:
            best_id, best_cap = cid, down
    return best_id


class _Graph:
    """Feasibility graph over [src, platforms..., dst]."""

    def __init__(
        self,
        src: GeoPoint,
        dst: GeoPoint,
        constellation: Constellation,
        min_capacity_bps: float,
        src_radio: RadioParams,
        noise: NoiseSpec,
    ):
        n = len(constellation)
        self.ids = [SRC_NODE] + list(range(n)) + [DST_NODE]
        self.points = [src] + [GeoPoint.from_vector(p) for p in constellation.positions] + [dst]
        self.radios: list[Optional[RadioParams]] = (
            [src_radio] + list(constellation.radios) + [None]
        )
        self.n_nodes = n + 2
        self.min_capacity = min_capacity_bps
        self.noise = noise
        self._cap_cache: dict[tuple[int, int], float] = {}

    def capacity(self, u: int, v: int) -> float:
        """Fading-free capacity of hop u -> v; 0 when infeasible."""
        key = (u, v)
        if key not in self._cap_cache:
            radio = self.radios[u]
            cap = 0.0
            if radio is not None and u != v and geom.is_visible(self.points[u], self.points[v]):
                d = geom.slant_range(self.points[u], self.points[v])
                if d > 0.0:
                    mean_snr_db = (
                        link_budget_const_db(radio)
                        - 20.0 * math.log10(d)
                        - noise_power_dbw(self.noise, radio.bandwidth_hz)
                    )
                    cap = link_capacity_bps(10.0 ** (mean_snr_db / 10.0), radio.bandwidth_hz)
            self._cap_cache[key] = cap
        return self._cap_cache[key]

    def neighbors(self, u: int):
        # Destination is a sink; the source is never re-entered.
        if u == self.n_nodes - 1:
            return
        for v in range(1, self.n_nodes):
            if v != u and self.capacity(u, v) >= self.min_capacity:
                yield v

    def build_path(self, node_seq: list[int]) -> Path:
        caps = tuple(self.capacity(u, v) for u, v in zip(node_seq, node_seq[1:]))
        dists = tuple(
            geom.slant_range(self.points[u], self.points[v]) for u, v in zip(node_seq, node_seq[1:])
        )
        return Path(tuple(self.ids[i] for i in node_seq), caps, dists)

    def energy_per_bit(self, u: int, v: int) -> float:
        return self.radios[u].tx_power_w / self.capacity(u, v)


def min_hop_path(
    src: GeoPoint,
    dst: GeoPoint,
    constellation: Constellation,
    min_capacity_bps: float,
    *,
    src_radio: RadioParams,
    noise: NoiseSpec = NoiseSpec(),
) -> Optional[Path]:
    """Fewest-hop feasible path (BFS), or None when disconnected."""
    g = _Graph(src, dst, constellation, min_capacity_bps, src_radio, noise)
    start, goal = 0, g.n_nodes - 1
    prev = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        if u == goal:
            break
        for v in g.neighbors(u):
            if v not in prev:
                prev[v] = u
                queue.append(v)
    if goal not in prev:
        return None
    seq = []
    node = goal
    while node is not None:
        seq.append(node)
        node = prev[node]
    return g.build_path(seq[::-1])


def max_ee_path(
    src: GeoPoint,
    dst: GeoPoint,
    constellation: Constellation,
    min_capacity_bps: float,
    *,
    src_radio: RadioParams,
    noise: NoiseSpec = NoiseSpec(),
) -> Optional[Path]:
    """Minimum energy-per-bit feasible path (Dijkstra on J/bit weights)."""
    g = _Graph(src, dst, constellation, min_capacity_bps, src_radio, noise)
    start, goal = 0, g.n_nodes - 1
    dist = {start: 0.0}
    prev: dict[int, Optional[int]] = {start: None}
    heap = [(0.0, start)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u == goal:
            break
        for v in g.neighbors(u):
            nd = d + g.energy_per_bit(u, v)
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                prev[v] = u
                heapq.heappush(heap, (nd, v))
    if goal not in done:
        return None
    seq = []
    node: Optional[int] = goal
    while node is not None:
        seq.append(node)
        node = prev[node]
    return g.build_path(seq[::-1])


def path_energy_per_bit(path: Path, constellation: Constellation, src_radio: RadioParams) -> float:
    """Total transmit energy spent per delivered bit along the path."""
    total = 0.0
    for node, cap in zip(path.nodes[:-1], path.hop_capacities):
        radio = src_radio if node == SRC_NODE else constellation.radios[node]
        total += radio.tx_power_w / cap
    return total
