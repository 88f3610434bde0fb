import os
import h5py
import datetime
import traceback
import numpy as np
from meshcsg.config.config import Config


class ReportManager(Config):
    """ This is a thin wrapper over the Config class to help with saving run reports.
        The load() method will be called once in its __init__.

        Attributes:
            yamls_path: Path of the directory containing report.yaml.
    """
    def __init__(self, yamls_path: str = None):
        super().__init__(yamls_path=yamls_path, suffix='report')
        self.load()


    def make_run_dir(self, run_type: str, run_suffix: str = '', time: datetime.datetime = None,
                     base_directory: str = None) -> str:
        """
        Make a saving directory and return its path:
        'base_directory/date_fmt/time_fmt_run_type_run_suffix'.

        Example of Attribute:
            run_type: 'eval', 'bool', 'check'
            run_suffix: 'gears' or empty string.
        """
        base_directory = self['base_directory'] if base_directory is None else base_directory
        self.datetime = time if time is not None else datetime.datetime.now()
        date = self.datetime.strftime(self['date_fmt'])
        time = self.datetime.strftime(self['time_fmt'])

        self.basename = '_'.join(part for part in (time, run_type, run_suffix) if part)
        self.run_path = os.path.join(base_directory, date, self.basename)
        try:
            os.makedirs(self.run_path)
        except FileExistsError:
            print('ReportManager: Run directory exists. No directory will be created.')
            print(traceback.format_exc())
        return self.run_path


    @staticmethod
    def save_report(run_path: str, report: dict, attrs: dict = None):
        """
        Save the report dictionary into report.hdf5.
        Attributes that h5py cannot store are saved as strings.
        """
        if attrs is None: attrs = {}
        hdf5_path = os.path.join(run_path, 'report.hdf5')

        with h5py.File(hdf5_path, 'w') as h5file:
            ReportManager.save_dict_to_hdf5(report, h5file)
            for k, v in attrs.items():
                if v is None: continue
                try:
                    h5file.attrs[k] = v
                except TypeError:
                    h5file.attrs[k] = str(v)


    @staticmethod
    def load_report(run_path: str) -> tuple[dict, dict]:
        """
        Load the report dictionary and its attributes from report.hdf5 in run_path.
        """
        hdf5_path = os.path.join(run_path, 'report.hdf5')

        with h5py.File(hdf5_path, 'r') as h5file:
            report = ReportManager.load_hdf5_to_dict(h5file)
            attrs = {k: v for k, v in h5file.attrs.items()}

        return report, attrs


    @staticmethod
    def save_dict_to_hdf5(dictionary: dict, h5: h5py.File | h5py.Group):
        """
        Recursively save a nested dictionary to hdf5 file/group.
        A list of dictionaries becomes a group with keys '0', '1', ...
        """
        for k, v in dictionary.items():
            k = str(k)
            if isinstance(v, dict):
                ReportManager.save_dict_to_hdf5(v, h5.require_group(k))
            elif isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
                ReportManager.save_dict_to_hdf5({str(i): x for i, x in enumerate(v)}, h5.require_group(k))
            elif v is None:
                continue
            elif isinstance(v, list) and not v:
                h5.create_dataset(k, data=np.zeros(0))
            elif isinstance(v, list) and all(isinstance(x, str) for x in v):
                h5.create_dataset(k, data=np.array(v, dtype=object), dtype=h5py.string_dtype())
            else:
                h5.create_dataset(k, data=v)


    @staticmethod
    def load_hdf5_to_dict(h5: h5py.File | h5py.Group) -> dict:
        """
        Recursively load a hdf5 file/group to a nested dictionary.
        Scalars come back as Python values, strings decoded.
        """
        dictionary = {}
        for k, v in h5.items():
            if isinstance(v, h5py.Group):
                dictionary[k] = ReportManager.load_hdf5_to_dict(v)
            elif v.shape == ():
                value = v[()]
                dictionary[k] = value.decode() if isinstance(value, bytes) else value.item()
            else:
                dictionary[k] = np.array(v)
        return dictionary
