from setuptools import setup

install_requires = [
    'numpy>=1.24',
    'ruamel.yaml>=0.17',
    'h5py>=3.8',
    'matplotlib>=3.6',
]


setup(name='meshcsg',
      version='0.1.0',
      description='Exact mesh booleans: co-refinement, Weiler model and flat CSG evaluation',
      license='MIT',
      install_requires=install_requires,
      extras_require={'test': ['pytest>=7']},
      packages=['meshcsg', 'meshcsg.kernel', 'meshcsg.geometry', 'meshcsg.boolean', 'meshcsg.csg',
                'meshcsg.config', 'meshcsg.processing'],
      package_data={'meshcsg.config': ['Yamls/*.yaml']},
      entry_points={'console_scripts': ['meshcsg=meshcsg.cli:main']},
      python_requires=">=3.10.0",
      zip_safe=False)
