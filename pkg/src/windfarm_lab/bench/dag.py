"""Which turbines' wakes reach which others for a given wind direction."""

from dataclasses import dataclass
from graphlib import TopologicalSorter

import numpy as np

from ..wake.conditions import to_wind_frame

CONE_HALF_ANGLE_DEG = 15.0
MAX_RANGE_D = 20.0


@dataclass(frozen=True)
class InteractionDAG:
    n_nodes: int
    edges: frozenset  # (upstream, downstream) pairs
    phi_inf: float

    def successors(self, i):
        return sorted(j for a, j in self.edges if a == i)

    def predecessors(self, j):
        return sorted(i for i, b in self.edges if b == j)

    def topological_order(self):
        graph = {j: set(self.predecessors(j)) for j in range(self.n_nodes)}
        return list(TopologicalSorter(graph).static_order())

    def adjacency(self):
        a = np.zeros((self.n_nodes, self.n_nodes), dtype=bool)
        for i, j in self.edges:
            a[i, j] = True
        return a


def build_dag(layout, phi_inf, half_angle_deg=CONE_HALF_ANGLE_DEG, max_range_d=MAX_RANGE_D):
    """Edge i -> j when j is strictly downstream of i, within the wake cone
    half-angle and ``max_range_d`` rotor diameters of it."""
    xy = to_wind_frame(layout.positions, phi_inf)
    dx = xy[None, :, 0] - xy[:, None, 0]
    dy = xy[None, :, 1] - xy[:, None, 1]
    dist = np.hypot(dx, dy)
    tan_half = np.tan(np.radians(half_angle_deg))
    inside = (dx > 0) & (np.abs(dy) <= dx * tan_half + 1e-9)
    inside &= dist <= max_range_d * layout.turbine.rotor_diameter_m + 1e-9
    edges = frozenset((int(i), int(j)) for i, j in zip(*np.nonzero(inside)))
    return InteractionDAG(layout.n_turbines, edges, float(phi_inf) % 360.0)
