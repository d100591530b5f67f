# coding=UTF-8
#------------------------------------------------------------------------------
# Copyright (c) 2020, hkflow Development Team.
#------------------------------------------------------------------------------

# separate file to find out about version without importing the hkflow lib
__author__ = "hkflow Development Team"
__date__ = "18 October 2026"
__version__ = "0.3"
