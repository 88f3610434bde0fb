"""
Command line of meshcsg.

    meshcsg eval model.csg -o out.obj
    meshcsg bool --expr "(A+B)-C" a.stl b.stl c.stl -o r.obj
    meshcsg check r.obj

Exit codes: 0 ok, 2 parse error, 3 pipeline error, 4 validation failure.
"""

import sys
import argparse
from meshcsg.errors import MeshCSGError, CsgSyntaxError, ExpressionSyntaxError, MeshFormatError, ValidationError
from meshcsg import begin_session
from meshcsg.config import MetaManager
from meshcsg.boolean.trimesh import TriMesh
from meshcsg.boolean.pipeline import BooleanPipeline
from meshcsg.csg.parser import parse_csg
from meshcsg.csg.evaluation import CsgEvaluator
from meshcsg.csg.mesh_io import read_mesh, write_mesh
from meshcsg.csg.validation import check_mesh

EXIT_OK, EXIT_PARSE, EXIT_PIPELINE, EXIT_VALIDATION = 0, 2, 3, 4
PARSE_ERRORS = (CsgSyntaxError, ExpressionSyntaxError, MeshFormatError)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='meshcsg', description='Exact mesh booleans and flat CSG evaluation.')
    subparsers = parser.add_subparsers(dest='command', required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--kernel', choices=('expansion', 'mpfloat'), default=None,
                        help='Exact arithmetic kernel (default from pipeline.yaml, mpfloat).')
    common.add_argument('--threads', type=int, default=None, help='Worker count (default: one per core).')
    common.add_argument('--config', default=None, help='Directory holding pipeline/csg/report yamls.')
    common.add_argument('--report', default=None, metavar='DIR', help='Save a run report in DIR.')
    common.add_argument('-v', '--verbose', action='store_true')

    running = argparse.ArgumentParser(add_help=False, parents=[common])
    running.add_argument('-o', '--output', default='out.obj', help='Output mesh, .obj or .stl.')
    running.add_argument('--no-simplify', action='store_true', help='Keep coplanar facets unmerged.')
    running.add_argument('--keep-skin', action='store_true', help='Keep the outer skin only (garbage removal).')
    running.add_argument('--check', action='store_true', help='Validate the result.')
    running.add_argument('--report-inexact', action='store_true',
                         help='List constructed vertices written as approximations.')

    evaluate = subparsers.add_parser('eval', parents=[running], help='Evaluate a flat .csg file.')
    evaluate.add_argument('input')
    evaluate.add_argument('--strict', action='store_true', help='Fail on unknown node kinds.')

    boolean = subparsers.add_parser('bool', parents=[running], help='Boolean of several meshes.')
    boolean.add_argument('inputs', nargs='+')
    boolean.add_argument('--expr', default='union', help='Expression over A, B, ... or %%0, %%1, ...')

    check = subparsers.add_parser('check', parents=[common], help='Validate a mesh.')
    check.add_argument('input')
    return parser


def begin_cli_session(args: argparse.Namespace) -> MetaManager:
    """ Managers loaded from --config, then overridden by the flags. """
    cfg = begin_session(args.config)
    overrides = {'kernel': args.kernel, 'threads': args.threads}
    if args.verbose: overrides['verbose'] = True
    if getattr(args, 'no_simplify', False): overrides['simplify'] = False
    if getattr(args, 'keep_skin', False): overrides['keep_skin'] = True
    if getattr(args, 'check', False): overrides['check'] = True
    if getattr(args, 'report_inexact', False): overrides['report_inexact'] = True
    if getattr(args, 'strict', False): cfg.csg.set('strict', True, which='dict')
    for key, value in overrides.items():
        if value is not None: cfg.pipeline.set(key, value, which='dict')
    cfg.pipeline.check_pipeline()
    return cfg


def report_inexact(mesh: TriMesh):
    for v in mesh.inexact_vertices():
        exact = ', '.join(str(c) for c in mesh.exact[v].to_fractions())
        print(f'Inexact: vertex {v} is ({exact}), written as {tuple(float(x) for x in mesh.vertices[v])}.')


def run(args: argparse.Namespace, cfg: MetaManager) -> tuple[int, dict]:
    verbose = cfg['pipeline.verbose']
    kwargs = cfg.pipeline.pipeline_kwargs()
    report = {'command': args.command}

    if args.command == 'check':
        report['check'] = check_mesh(read_mesh(args.input), kwargs['kernel'], verbose=True)
        return (EXIT_OK if report['check']['valid'] else EXIT_VALIDATION), report

    if args.command == 'eval':
        with open(args.input, 'r') as f:
            tree = parse_csg(f.read(), cfg['csg.strict'], cfg.csg.parser_defaults())
        evaluator = CsgEvaluator(verbose, **kwargs)
        result = evaluator.evaluate(tree)
        report['stages'] = evaluator.stages
    else:
        meshes = [read_mesh(path) for path in args.inputs]
        pipeline = BooleanPipeline(verbose=verbose, **kwargs)
        result = pipeline.run(meshes, args.expr)
        report['stages'] = [pipeline.stats]

    write_mesh(result, args.output)
    if verbose: print(f'Meshcsg: Wrote {result.nb_facets} facets to {args.output}.')
    if cfg['pipeline.report_inexact']: report_inexact(result)

    if cfg['pipeline.check']:
        report['check'] = check_mesh(result, kwargs['kernel'], verbose=True)
        if not report['check']['valid']: return EXIT_VALIDATION, report
    return EXIT_OK, report


def main(argv: list[str] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = begin_cli_session(args)
    except (AssertionError, OSError) as error:
        print(f'Meshcsg: Bad configuration: {error}', file=sys.stderr)
        return EXIT_PIPELINE

    try:
        status, report = run(args, cfg)
    except PARSE_ERRORS as error:
        print(f'{type(error).__name__}: {error}', file=sys.stderr)
        return EXIT_PARSE
    except OSError as error:
        print(f'Meshcsg: Cannot read or write a file: {error}', file=sys.stderr)
        return EXIT_PARSE
    except ValidationError as error:
        print(f'{type(error).__name__}: {error}', file=sys.stderr)
        return EXIT_VALIDATION
    except MeshCSGError as error:
        where = getattr(error, 'csg_node', None)
        suffix = f' (in {where[0]} at line {where[1]}, column {where[2]})' if where else ''
        print(f'{type(error).__name__}: {error}{suffix}', file=sys.stderr)
        return EXIT_PIPELINE
    except AssertionError as error:
        print(f'Meshcsg: Internal check failed: {error}', file=sys.stderr)
        return EXIT_PIPELINE

    if args.report is not None:
        run_path = cfg.report.make_run_dir(args.command, base_directory=args.report)
        cfg.report.save_report(run_path, report, attrs={'argv': ' '.join(sys.argv if argv is None else argv),
                                                        'kernel': cfg['pipeline.kernel']})
        if cfg['pipeline.verbose']: print(f'Meshcsg: Report saved in {run_path}.')
    return status


if __name__ == '__main__':
    sys.exit(main())
