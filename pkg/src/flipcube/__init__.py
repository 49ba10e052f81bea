"""Empty pentagons, quadrilateral graphs and flip distances of planar point sets."""
__version__ = "0.1.0"

from ._accel import backend
from .errors import *  # noqa: F401,F403
from .flipdist import (CubeLabel, CubeLabeler, FlipGraph, FlipNumber, astar_flip_distance,
                       cube_labels, enumerate_flip_graph, flip_distance_exact_oracle,
                       flip_distance_pentagon_free, flip_graph_is_partial_cube, flip_number,
                       is_partial_cube, matching_lower_bound)
from .generators import Family, FamilySpec, generate, lattice_hull_removed
from .geom import (InCircleResult, Orientation, Point, PointSet, convex_hull, in_circle,
                   is_diagonal, is_empty_kgon, orientation, segments_cross)
from .quadgraph import (PentagonWitness, QuadGraph, build_qg_general, build_qg_pentagon_free,
                        count_empty_quadrilaterals, find_empty_pentagon, has_empty_quadrilateral,
                        has_unique_triangulation, pentagon_at_apex, radial_orders)
from .triangulation import (Flip, ShearedFrame, Triangulation, apply_flip,
                            complete_to_triangulation, decocircularize, delaunay, delaunay_flip,
                            flippable_edges, flips_to_delaunay)
