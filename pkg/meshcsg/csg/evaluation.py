import numpy as np
from meshcsg.errors import MeshCSGError
from meshcsg.boolean.trimesh import TriMesh
from meshcsg.boolean.pipeline import BooleanPipeline
from meshcsg.csg.parser import CsgNode
from meshcsg.csg.tessellation import tessellate

BOOLEAN_EXPRESSIONS = {'union': 'union', 'group': 'union', 'multmatrix': 'union',
                       'intersection': 'intersection', 'difference': 'difference'}



class CsgEvaluator:
    """
    Bottom-up evaluation of a CSG tree. Transforms are composed down to the
    primitives; every boolean node with several non-empty children is one
    BooleanPipeline stage. A stage result is given to its parent as doubles.

    Attributes:
        pipeline_kwargs: dict. Passed to every BooleanPipeline.
        stages: list[dict]. Per stage its node kind, line and pipeline statistics.
    """
    def __init__(self, verbose: bool = False, **pipeline_kwargs):
        self.verbose = verbose
        self.pipeline_kwargs = pipeline_kwargs
        self.stages = []


    def evaluate(self, node: CsgNode, matrix: np.ndarray = None) -> TriMesh:
        matrix = np.eye(4) if matrix is None else matrix
        try:
            if node.is_primitive(): return tessellate(node).transformed(matrix)
            if node.kind == 'multmatrix': matrix = matrix @ np.array(node.params['matrix'], dtype=float)
            return self.combine(node, [self.evaluate(child, matrix) for child in node.children])
        except MeshCSGError as error:
            if not hasattr(error, 'csg_node'): error.csg_node = (node.kind, node.line, node.column)
            raise


    def combine(self, node: CsgNode, results: list[TriMesh]) -> TriMesh:
        """ Boolean of the children results, skipping the stages an empty operand decides. """
        expr = BOOLEAN_EXPRESSIONS[node.kind]
        if expr == 'intersection' and any(r.nb_facets == 0 for r in results): return TriMesh()
        if expr == 'difference':
            if not results or results[0].nb_facets == 0: return TriMesh()
            results = results[:1] + [r for r in results[1:] if r.nb_facets]
        else:
            results = [r for r in results if r.nb_facets]
        if not results: return TriMesh()
        if len(results) == 1: return results[0]

        operands = [r.approximate() for r in results]
        pipeline = BooleanPipeline(verbose=self.verbose, **self.pipeline_kwargs)
        result = pipeline.run(operands, expr)
        self.stages.append({'kind': node.kind, 'line': node.line, **pipeline.stats})
        if self.verbose:
            print(f'Evaluate: {node.kind} at line {node.line}, {len(operands)} operands -> '
                  f'{result.nb_facets} facets.')
        return result



def evaluate(tree: CsgNode, verbose: bool = False, **pipeline_kwargs) -> TriMesh:
    return CsgEvaluator(verbose, **pipeline_kwargs).evaluate(tree)
