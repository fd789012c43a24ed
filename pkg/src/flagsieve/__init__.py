"""Exact-arithmetic sieve for flag-transitive 2-design parameters.

The package splits into arithmetic layers (exactmath, grouporders, sieve),
a small permutation-group engine (permgroup, designsearch), the per-case
elimination pipelines (eliminator) and a command line front end (cli).
"""

__version__ = "0.1.0"
