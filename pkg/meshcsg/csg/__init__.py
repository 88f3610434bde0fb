from meshcsg.csg.parser import CsgNode, CsgParser, parse_csg, format_csg
from meshcsg.csg.tessellation import get_fragments, cube, sphere, cylinder, polyhedron, tessellate
from meshcsg.csg.evaluation import CsgEvaluator, evaluate
from meshcsg.csg.mesh_io import read_mesh, write_mesh, read_obj, write_obj, read_stl, write_stl
from meshcsg.csg.validation import check_mesh, validate, is_watertight
