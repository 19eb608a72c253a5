# -*- coding: utf-8 -*-

from setuptools import setup, find_packages

setup(
    name='jmm',
    version='0.0.0',
    packages=find_packages(include=['jmm']),
    url='',
    license_file='LICENSE.txt',
    author='crash',
    author_email='',
    description='Joint Motion Model - human-like handover arm trajectories, and the analysis/fitting '
                'of the profiles behind them',
    python_requires='>=3.10',
    install_requires=['regex',
                      'pyyaml',
                      'numpy',
                      'scipy',
                      'pandas'],
    extras_require={
        'test': ['pytest',
                 'hypothesis']
    },
    entry_points={
        'console_scripts': [
            'jmm = jmm.cli:main'
        ],
    }
)
