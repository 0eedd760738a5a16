#!/usr/bin/env python

import vdspec
from pathlib import Path

from setuptools import setup, find_namespace_packages

long_description = Path('README.md').read_text(encoding='utf-8', errors='ignore')

classifiers = [  # copied from https://pypi.org/classifiers/
    'Development Status :: 3 - Alpha',
    'Intended Audience :: Science/Research',
    'Topic :: Scientific/Engineering',
    'Topic :: Scientific/Engineering :: Mathematics',
    'License :: OSI Approved :: Apache Software License',
    'Programming Language :: Python :: 3 :: Only',
]

setup(
    name='vdspec-control',
    version=vdspec.__version__,
    description=vdspec.__description__,
    long_description=long_description,
    long_description_content_type='text/markdown',
    classifiers=classifiers,
    python_requires='>=3.8',
    platforms=['any'],
    packages=find_namespace_packages(exclude=['old', 'examples', 'examples.*']),
    package_data={'vdspec': ['data/*.tsv']},
    keywords=['delay systems', 'boundary control', 'transport equation', 'advection-diffusion',
              'spectral abscissa', 'characteristic function', 'argument principle'],
    entry_points={
        'console_scripts': [
            'vd_cli.py=vdspec.vd_cli:main',
            'vdspec=vdspec.vd_cli:main',
        ],
    },
    install_requires=[
        'numpy>=1.21',
        'regex>=2021.8.3',
        'scipy>=1.7',
        'tqdm>=4.40',
    ],
    include_package_data=True,
    zip_safe=False,
)
