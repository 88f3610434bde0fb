from meshcsg.config.config import Config
from meshcsg.kernel import KERNELS


class PipelineManager(Config):
    """ This is a thin wrapper over the Config class to help with boolean pipeline settings.
        The load() method will be called once in its __init__.

        Attributes:
            yamls_path: Path of the directory containing pipeline.yaml.
    """
    def __init__(self, yamls_path: str = None):
        super().__init__(yamls_path=yamls_path, suffix='pipeline')
        self.load()


    def load(self):
        """
        Run the parent load, then check the values.
        """
        super().load()
        self.check_pipeline()


    def check_pipeline(self):
        assert self['kernel'] in KERNELS, \
            f'PipelineManager: kernel must be one of {sorted(KERNELS)}, got {self["kernel"]}.'
        assert self['threads'] is None or (isinstance(self['threads'], int) and self['threads'] > 0), \
            f'PipelineManager: threads must be null or a positive integer, got {self["threads"]}.'
        for key in ('simplify', 'keep_skin', 'propagate', 'check', 'report_inexact', 'verbose', 'cdt/delaunay'):
            assert isinstance(self[key], bool), f'PipelineManager: {key} must be true or false.'
        for key in ('cdt/walk_budget', 'cdt/flip_budget_factor'):
            assert isinstance(self[key], int) and self[key] > 0, f'PipelineManager: {key} must be a positive integer.'

        directions = self['classify/ray_directions']
        if directions is not None:
            assert len(directions) > 0 and all(len(d) == 3 and any(d) for d in directions), \
                'PipelineManager: classify/ray_directions must be a list of non-zero 3D vectors.'


    def pipeline_kwargs(self) -> dict:
        """ Keyword arguments of BooleanPipeline and CsgEvaluator. """
        directions = self['classify/ray_directions']
        return {'kernel': self['kernel'],
                'threads': self['threads'],
                'simplify': self['simplify'],
                'keep_skin': self['keep_skin'],
                'propagate': self['propagate'],
                'ray_directions': [tuple(d) for d in directions] if directions is not None else None,
                'walk_budget': self['cdt/walk_budget'],
                'flip_budget_factor': self['cdt/flip_budget_factor'],
                'delaunay': self['cdt/delaunay']}
