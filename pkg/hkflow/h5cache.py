# -*- coding: utf-8 -*-
#pylint: disable-msg=E0611,C0111,C0103,R0901,R0902,R0903,R0904,W0232
#------------------------------------------------------------------------------
# Copyright (c) 2020, hkflow Development Team.
#------------------------------------------------------------------------------

import atexit
from os import path, makedirs

from traits.api import HasPrivateTraits, Str, Dict

from .configuration import config
from .h5files import _get_cachefile_class

# path to cache directory
cache_dir = path.join(path.curdir, 'cache')


class H5cache_class(HasPrivateTraits):
    """
    Cache class that hands out open .h5 cache files and reads or writes
    digest-keyed arrays in them
    """
    # cache directory
    cache_dir = Str

    open_files = Dict

    def open_cachefile(self, cacheFileName, mode):
        if not path.exists(self.cache_dir):
            makedirs(self.cache_dir)
        File = _get_cachefile_class()
        return File(path.join(self.cache_dir, cacheFileName), mode)

    def is_cachefile_existent(self, cacheFileName):
        return path.exists(path.join(self.cache_dir, cacheFileName))

    def get_cache_file(self, basename):
        '''
        returns the open .h5 cache file for basename, or None if the global
        caching mode is 'readonly' and the file does not exist yet
        '''
        cacheFileName = basename + '_cache.h5'
        if cacheFileName not in self.open_files:
            if config.global_caching == 'readonly':
                if not self.is_cachefile_existent(cacheFileName):
                    return None
                mode = 'r'
            else:
                mode = 'a'
            self.open_files[cacheFileName] = self.open_cachefile(cacheFileName, mode)
        return self.open_files[cacheFileName]

    def close_all(self):
        '''
        closes every open cache file; registered to run at interpreter exit
        '''
        for f in self.open_files.values():
            f.close()
        self.open_files = {}

    def cached_array(self, basename, nodename, calc):
        '''
        returns the array stored under nodename, calling calc() and storing
        its result when it is missing; honours :attr:`config.global_caching`
        '''
        h5f = self.get_cache_file(basename)
        if h5f is None:
            return calc()
        if config.global_caching == 'overwrite' and h5f.is_cached(nodename):
            h5f.remove_data(nodename)
        if h5f.is_cached(nodename):
            return h5f.load_array(nodename)
        data = calc()
        if config.global_caching != 'readonly':
            h5f.store_array(nodename, data)
        return data

H5cache = H5cache_class(cache_dir=cache_dir)
atexit.register(H5cache.close_all)
