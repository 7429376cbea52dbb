"""Covering and packing planar and d-dimensional point sets with homothets of a convex body."""

from .cover import Cover, approx_k_ball, cover, cover_greedy, cover_net_based, neighborhood_cover, validate_cover
from .delaunay import Graph, check_angle_property, cover_pairs, delaunay_graph, matching_of
from .geometry import (AxisBox, Ball, ConvexBody, DegenerateInputError, GaugeIndex, GeometryError, Homothet,
                       Polygon, SymPolygon, fatten, gauge, hitting_set, homothets_intersect, regular_polygon,
                       smallest_homothet_at)
from .matching import Matching, max_matching
from .pack import Packing, pack_greedy, validate_packing
from .weaknet import WeakNet, build_weak_net, verify_hitting
from .zonotope import vertex_in_larger_homothet, zonotope_cover, zonotope_weak_net

__version__ = "0.1.0"
