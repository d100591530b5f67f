# -*- coding: utf-8 -*-
#pylint: disable-msg=E0611, E1101, C0103, R0901, R0902, R0903, R0904, W0232
#------------------------------------------------------------------------------
# Copyright (c) 2020, hkflow Development Team.
#------------------------------------------------------------------------------
"""
Implements global configuration of hkflow.

.. autosummary::
    :toctree: generated/

    config
"""

from traits.api import Trait, Int, Float, Property, HasStrictTraits


class Config(HasStrictTraits):
    """
    This class implements the global configuration of the hkflow package.

    An instance of this class can be accessed for adjustment of the following
    properties.
    Caching of mesh artefacts is controlled by :attr:`global_caching`.
    The package used to read and write .h5 files can be specified
    by :attr:`h5library`. The number of threads used by the per-cell
    kernels is bounded by :attr:`num_threads`.

    Example:
        For running the kernels on two threads and refreshing the cache:

        >>>    import hkflow
        >>>    hkflow.config.num_threads = 2
        >>>    hkflow.config.global_caching = "overwrite"
    """

    def __init__(self):
        HasStrictTraits.__init__(self)
        self._assert_h5library()

    #: Flag that globally defines caching behaviour of hkflow classes,
    #: defaults to 'individual'.
    #:
    #: * 'individual': classes handle caching behavior with their own `cached` flag.
    #: * 'all': classes cache everything and read from cache if possible.
    #: * 'none': classes do not cache results. Cachefiles are not created.
    #: * 'readonly': classes do not actively cache, but read from cache if existing.
    #: * 'overwrite': classes replace existing cachefile content with new data.
    global_caching = Property()

    _global_caching = Trait('individual', 'all', 'none', 'readonly', 'overwrite')

    #: Flag that globally defines package used to read and write .h5 files,
    #: defaults to 'pytables'. If 'pytables' can not be imported, 'h5py' is used.
    h5library = Property()

    _h5library = Trait('pytables', 'h5py')

    #: Upper bound for the number of threads of the parallel cell loops.
    #: 0 (default) leaves the numba default untouched.
    num_threads = Property()

    _num_threads = Int(0)

    #: Absolute per-face tolerance of the Whitney test, defaults to 1e-9.
    whitney_tol = Float(1e-9,
        desc="absolute Whitney tolerance")

    def _get_global_caching(self):
        return self._global_caching

    def _set_global_caching(self, globalCachingValue):
        self._global_caching = globalCachingValue

    def _get_h5library(self):
        return self._h5library

    def _set_h5library(self, libraryName):
        self._h5library = libraryName

    def _get_num_threads(self):
        return self._num_threads

    def _set_num_threads(self, n):
        if n < 0:
            raise ValueError("number of threads must not be negative, got %i" % n)
        if n > 0:
            import numba
            numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))
        self._num_threads = n

    def _assert_h5library(self):
        try:
            import tables
            self.h5library = 'pytables'
        except ImportError:
            try:
                import h5py
                self.h5library = 'h5py'
            except ImportError:
                raise ImportError("packages h5py and pytables are missing!")


config = Config()
"""
This instance implements the global configuration of the hkflow package.

General caching behaviour can be controlled by the :attr:`global_caching` attribute:
  * 'individual': classes handle caching behavior with their own `cached` flag.
  * 'all': classes cache everything and read from cache if possible.
  * 'none': classes do not cache results. Cachefiles are not created.
  * 'readonly': classes do not actively cache, but read from cache if existing.
  * 'overwrite': classes replace existing cachefile content with new data.

The package used to read and write .h5 files can be specified
by :attr:`h5library`:
  * 'pytables': Use 'tables' (or 'pytables', depending on python distribution).
  * 'h5py': Use 'h5py'.

The data-parallel cell loops run on at most :attr:`num_threads` threads
(0 keeps the numba default).
"""
