from meshcsg.geometry import aabb
from meshcsg.geometry.exact_geom import HPoint3, HPoint2, Rational, GlobalVertexTable, point_from_double, \
    point2_from_double, as_hpoint3
from meshcsg.geometry.predicates import orient2d, orient3d, in_circle, in_circle_l, ratio_compare, \
    point_lexico_compare, normals_colinear, dominant_axis, PredicateCache, set_filter_enabled
from meshcsg.geometry.tritri import TriSimplex, TriTriResult, triangle_triangle, edge_triangle
from meshcsg.geometry.cdt2d import CDT
