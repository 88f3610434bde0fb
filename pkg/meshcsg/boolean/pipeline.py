import time
from meshcsg.errors import InvalidInput
from meshcsg.kernel import get_kernel, ArithmeticKernel
from meshcsg.boolean.trimesh import TriMesh
from meshcsg.boolean.corefine import Corefiner, preprocess
from meshcsg.boolean import weiler
from meshcsg.boolean.classify import BoolExpr, parse_expr, classify, keep_outer_skin
from meshcsg.boolean.simplify import simplify as simplify_mesh



class BooleanPipeline:
    """
    One boolean stage: operands are tagged, preprocessed, co-refined, turned
    into a Weiler model, classified against an expression and optionally
    simplified. Statistics of the last run are kept in `stats`.

    Attributes:
        kernel: ArithmeticKernel. Exact arithmetic of every stage.
        threads: int | None. Worker count, None for the machine default.
        simplify: bool. Merge coplanar facets of the result.
        keep_skin: bool. Ignore the expression and keep the outer skin only.
        propagate: bool. Copy radial orders along intersection curves.
        ray_directions: list | None. Ray directions of the classification.
        cdt_kwargs: dict. Passed to every CDT (walk_budget, flip_budget_factor).
        verbose: bool. Print one line per stage.
    """
    def __init__(self,
                 kernel: ArithmeticKernel | str = 'mpfloat',
                 threads: int = None,
                 simplify: bool = True,
                 keep_skin: bool = False,
                 propagate: bool = True,
                 ray_directions: list = None,
                 verbose: bool = False,
                 **cdt_kwargs):
        self.kernel = get_kernel(kernel)
        self.threads = threads
        self.simplify = simplify
        self.keep_skin = keep_skin
        self.propagate = propagate
        self.ray_directions = ray_directions
        self.verbose = verbose
        self.cdt_kwargs = cdt_kwargs
        self.stats = {}


    def run(self, meshes: list[TriMesh], expr: BoolExpr | str = 'union') -> TriMesh:
        """
        Boundary of expr evaluated on the solids bounded by meshes, operand k
        being meshes[k] (A, or %0, is the first one).
        """
        n = len(meshes)
        if n == 0: raise InvalidInput('Pipeline: No operand given.')
        if isinstance(expr, str): expr = parse_expr(expr, n)
        self.stats = {'nb_operands': n, 'time': {}}
        if sum(mesh.nb_facets for mesh in meshes) == 0: return TriMesh()

        tic = time.perf_counter()
        mesh = preprocess(TriMesh.from_operands(meshes), self.verbose)
        self._lap('preprocess', tic)

        tic = time.perf_counter()
        corefiner = Corefiner(self.kernel, self.threads, self.verbose, **self.cdt_kwargs)
        mesh = corefiner.run(mesh)
        self.stats['corefine'] = corefiner.stats
        self._lap('corefine', tic)

        tic = time.perf_counter()
        map3 = weiler.build(mesh, self.kernel, self.propagate, self.verbose)
        self._lap('weiler', tic)

        tic = time.perf_counter()
        if self.keep_skin: result = keep_outer_skin(map3, self.verbose)
        else: result = classify(map3, expr, n, self.threads, self.ray_directions, self.verbose)
        self.stats['weiler'] = map3.stats
        self._lap('classify', tic)

        if self.simplify and result.nb_facets:
            tic = time.perf_counter()
            self.stats['simplify'] = {}
            result = simplify_mesh(result, self.kernel, self.threads, self.verbose, self.stats['simplify'],
                                   **self.cdt_kwargs)
            self._lap('simplify', tic)

        self.stats['nb_vertices_out'] = result.nb_vertices
        self.stats['nb_facets_out'] = result.nb_facets
        self.stats['nb_inexact_vertices'] = len(result.inexact_vertices())
        return result


    def _lap(self, stage: str, tic: float):
        self.stats['time'][stage] = time.perf_counter() - tic
        if self.verbose: print(f'Pipeline: {stage} took {self.stats["time"][stage]:.3f} s.')



def run_boolean(meshes: list[TriMesh], expr: BoolExpr | str = 'union', **kwargs) -> tuple[TriMesh, dict]:
    """
    Run one BooleanPipeline stage. Returns the result and its statistics.
    """
    pipeline = BooleanPipeline(**kwargs)
    result = pipeline.run(meshes, expr)
    return result, pipeline.stats
