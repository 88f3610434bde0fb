from meshcsg.errors import MeshCSGError, KernelRangeError, InvalidInput, DegenerateInput, DegenerateConstruction, \
    OutOfDomain, TopologyError, CsgSyntaxError, ExpressionSyntaxError, MeshFormatError, ValidationError
from meshcsg.kernel import Sign, Expansion, BigFloat, Interval, get_kernel

from meshcsg.boolean.trimesh import TriMesh
from meshcsg.boolean.corefine import Corefiner, preprocess, corefine
from meshcsg.boolean.weiler import Map3
from meshcsg.boolean.classify import parse_expr, classify, keep_outer_skin
from meshcsg.boolean.simplify import simplify
from meshcsg.boolean.pipeline import BooleanPipeline, run_boolean

from meshcsg.csg.parser import CsgNode, parse_csg, format_csg
from meshcsg.csg.tessellation import tessellate
from meshcsg.csg.evaluation import CsgEvaluator, evaluate
from meshcsg.csg.mesh_io import read_mesh, write_mesh
from meshcsg.csg.validation import check_mesh

from meshcsg.config.pipeline_manager import PipelineManager
from meshcsg.config.csg_manager import CsgManager
from meshcsg.config.report_manager import ReportManager
from meshcsg.config.config import Config, MetaManager




def begin_session(yamls_path: str = None) -> MetaManager:
    """
    Instantiate all managers along with MetaManager, then load them.
    Return the instance of MetaManager.
    yamls_path defaults to the Yamls folder shipped with the package.
    Please do not place this function and all import above at same file as MetaManager (circular import).
    """
    pipeman = PipelineManager(yamls_path)
    csgman = CsgManager(yamls_path)
    reportman = ReportManager(yamls_path)

    cfg = MetaManager(manager_dict={
                        'pipeline': pipeman,
                        'csg': csgman,
                        'report': reportman
                        },
                      yamls_path=yamls_path)
    return cfg
