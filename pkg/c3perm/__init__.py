"""
c3perm: permutation gates in the third level of the Clifford hierarchy.
"""

__version__ = "0.1.0"
