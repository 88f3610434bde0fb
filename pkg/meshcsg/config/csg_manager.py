from meshcsg.config.config import Config


class CsgManager(Config):
    """ This is a thin wrapper over the Config class to help with .csg parsing defaults.
        The load() method will be called once in its __init__.

        Attributes:
            yamls_path: Path of the directory containing csg.yaml.
    """
    def __init__(self, yamls_path: str = None):
        super().__init__(yamls_path=yamls_path, suffix='csg')
        self.load()


    def load(self):
        super().load()
        self.check_csg()


    def check_csg(self):
        assert isinstance(self['strict'], bool), 'CsgManager: strict must be true or false.'
        for key in ('cube/size', 'sphere/r', 'cylinder/h', 'cylinder/r', 'fa', 'fs'):
            assert self[key] > 0, f'CsgManager: {key} must be positive, got {self[key]}.'
        assert self['fn'] >= 0, f'CsgManager: fn must be non negative, got {self["fn"]}.'


    def parser_defaults(self) -> dict:
        """ Defaults in the form CsgParser expects. """
        return {'cube': {'size': self['cube/size']},
                'sphere': {'r': self['sphere/r']},
                'cylinder': {'h': self['cylinder/h'], 'r': self['cylinder/r']},
                'fn': self['fn'], 'fa': self['fa'], 'fs': self['fs']}
