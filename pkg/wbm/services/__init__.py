"""
Computation services.
"""
