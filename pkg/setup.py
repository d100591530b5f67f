# coding=UTF-8
#------------------------------------------------------------------------------
# Copyright (c) 2020, hkflow Development Team.
#------------------------------------------------------------------------------

from setuptools import setup
from os.path import join, abspath, dirname

# read version and author without importing the package
here = abspath(dirname(__file__))
about = {}
with open(join(here, 'hkflow', 'version.py')) as f:
    exec(f.read(), about)

# Get the long description from the relevant file
with open(join(here, 'README.rst')) as f:
    long_description = f.read()


install_requires = list([
      'numpy>=1.17',
      'setuptools',
      'numba>=0.49',
      'scipy>=1.1.0',
      'tables>=3.4.4',
      'traits>=4.6.0',
	])

setup(name="hkflow",
      version=about['__version__'],
      description="Modified hyperKaehler moment map flow on triangulated 4-tori",
      long_description=long_description,
      license="BSD",
      author=about['__author__'],
      classifiers=[
      'Development Status :: 3 - Alpha',
      'Intended Audience :: Science/Research',
      'Topic :: Scientific/Engineering :: Mathematics',
      'License :: OSI Approved :: BSD License',
      'Programming Language :: Python :: 3.7',
      'Programming Language :: Python :: 3.8',
      ],
      keywords='symplectic maps moment map flow triangulation torus',
      packages = ['hkflow'],

      install_requires = install_requires,

      entry_points={'console_scripts': ['hkflow = hkflow.cli:main']},
      include_package_data = True,
      package_data={'hkflow': ['tests/*.*']},
      #to solve numba compiler
      zip_safe=False
)
