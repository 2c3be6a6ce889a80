"""Counters for geometric corner cases and per-run cell statistics."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class Diagnostics:
    """Mutable counters threaded through clipping and volume computation.

    All counters stay zero on well-posed input; nonzero values flag the
    corner cases worth inspecting rather than hard errors.
    """

    zero_length_edges: int = 0
    degenerate_polygons: int = 0
    out_of_domain_triangles: int = 0
    out_of_range_fractions: int = 0

    interface_cells: int = 0
    full_cells: int = 0
    empty_cells: int = 0
    flood_filled_cells: int = 0
    defaulted_cells: int = 0

    def merge(self, other: "Diagnostics") -> None:
        self.zero_length_edges += other.zero_length_edges
        self.degenerate_polygons += other.degenerate_polygons
        self.out_of_domain_triangles += other.out_of_domain_triangles
        self.out_of_range_fractions += other.out_of_range_fractions
        self.interface_cells += other.interface_cells
        self.full_cells += other.full_cells
        self.empty_cells += other.empty_cells
        self.flood_filled_cells += other.flood_filled_cells
        self.defaulted_cells += other.defaulted_cells
