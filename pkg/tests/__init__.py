"""
Test suite for the weighted Brunn-Minkowski toolkit.
"""
