from meshcsg.boolean.trimesh import TriMesh
from meshcsg.boolean.corefine import Corefiner, preprocess, corefine
from meshcsg.boolean.weiler import Map3, build, orbits
from meshcsg.boolean.classify import OperandSet, BoolExpr, parse_expr, classify, classify_component, \
    keep_outer_skin
from meshcsg.boolean.simplify import detect_coplanar_regions, simplify
from meshcsg.boolean.pipeline import BooleanPipeline, run_boolean
