# -*- coding: utf-8 -*-
#pylint: disable-msg=E0611, E1101, C0103, R0901, R0902, R0903, R0904, W0232
#------------------------------------------------------------------------------
# Copyright (c) 2020, hkflow Development Team.
#------------------------------------------------------------------------------

try:
    import tables
    is_tables = True
except ImportError:
    is_tables = False
try:
    import h5py
    is_h5py = True
except ImportError:
    is_h5py = False

from .configuration import config


class H5CacheFileBase(object):
    '''
    Base class for File objects that store dense float arrays of mesh
    artefacts in .h5 cache files, one node per digest
    '''

    compressionFilter = None

    def is_cached(self, nodename):
        pass

    def store_array(self, nodename, data):
        pass

    def load_array(self, nodename):
        pass

    def remove_data(self, nodename):
        pass


if is_tables:

    class H5CacheFileTables(H5CacheFileBase, tables.File):

        compressionFilter = tables.Filters(complevel=5, complib='blosc')

        def is_cached(self, nodename):
            return nodename in self.root

        def store_array(self, nodename, data):
            node = self.create_carray(self.root, nodename, tables.Float64Atom(),
                                      data.shape, filters=self.compressionFilter)
            node[...] = data
            self.flush()

        def load_array(self, nodename):
            return self.get_node(self.root, nodename).read()

        def remove_data(self, nodename):
            self.remove_node('/', nodename, recursive=True)


if is_h5py:

    class H5CacheFileH5py(H5CacheFileBase, h5py.File):

        compressionFilter = "lzf"

        def is_cached(self, nodename):
            return '/' + nodename in self

        def store_array(self, nodename, data):
            self.create_dataset('/' + nodename, data=data, dtype='float64',
                                compression=self.compressionFilter, chunks=True)
            self.flush()

        def load_array(self, nodename):
            return self['/' + nodename][...]

        def remove_data(self, nodename):
            del self['/' + nodename]


def _get_cachefile_class():
    if config.h5library == "pytables": return H5CacheFileTables
    elif config.h5library == "h5py": return H5CacheFileH5py
