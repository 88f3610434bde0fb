import numpy as np
from meshcsg.errors import TopologyError, ValidationError
from meshcsg.kernel import ArithmeticKernel
from meshcsg.boolean.trimesh import TriMesh
from meshcsg.boolean.corefine import Corefiner
from meshcsg.boolean import weiler


def is_watertight(mesh: TriMesh) -> bool:
    """ Every directed edge is matched by as many edges going the other way. """
    if mesh.nb_facets == 0: return True
    edges = mesh.edges()
    forward, counts = np.unique(edges, axis=0, return_counts=True)
    backward, back_counts = np.unique(edges[:, ::-1], axis=0, return_counts=True)
    return bool(np.array_equal(forward, backward) and np.array_equal(counts, back_counts))


def check_mesh(mesh: TriMesh, kernel: ArithmeticKernel | str = 'mpfloat', verbose: bool = False) -> dict:
    """
    Self checks of a boolean result: no improper intersection, watertight,
    valid Weiler model, Euler characteristic and signed volume per connected
    component. 'valid' summarizes them.
    """
    report = {'nb_vertices': mesh.nb_vertices, 'nb_facets': mesh.nb_facets, 'improper_facets': 0,
              'watertight': True, 'weiler': 'ok', 'euler': [], 'volumes': [], 'messages': []}
    if mesh.nb_facets == 0:
        report['valid'] = True
        return report

    improper = Corefiner(kernel).find_improper(mesh)
    report['improper_facets'] = len(improper)
    if improper: report['messages'].append(f'Check: {len(improper)} facets intersect improperly, e.g. {improper[:5]}.')

    report['watertight'] = is_watertight(mesh)
    if not report['watertight']: report['messages'].append('Check: Mesh is not watertight.')

    if report['watertight'] and not improper:
        try:
            weiler.build(mesh, kernel)
        except (TopologyError, AssertionError) as error:
            report['weiler'] = str(error)
            report['messages'].append(f'Check: Weiler model: {error}')
    else:
        report['weiler'] = 'skipped'

    for facets in mesh.connected_components():
        component = mesh.submesh(facets)
        report['euler'].append(component.euler_characteristic())
        report['volumes'].append(component.signed_volume())
    if sum(report['volumes']) <= 0: report['messages'].append('Check: Total signed volume is not positive.')

    report['valid'] = not report['messages']
    if verbose:
        print(f'Check: {mesh.nb_facets} facets, {len(report["euler"])} components, '
              f'Euler characteristics {report["euler"]}, valid: {report["valid"]}.')
        for message in report['messages']: print(message)
    return report


def validate(mesh: TriMesh, kernel: ArithmeticKernel | str = 'mpfloat', verbose: bool = False) -> dict:
    report = check_mesh(mesh, kernel, verbose)
    if not report['valid']: raise ValidationError('; '.join(report['messages']))
    return report
