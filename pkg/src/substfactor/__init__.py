"""Workbench for substitution subshifts and their factors.

Submodules:

- ``core``: alphabets, patterns, substitutions, the named catalog, seeds
  and fixed points.
- ``language``: legal patterns, column structure, supertile frames and
  corner configurations.
- ``toeplitz``: arithmetic-progression coordinatization of constant-length
  fixed points.
- ``factors``: sliding block maps, induced substitutions, symbol
  identifications, local inverses and factor-map search.
- ``zeta``: exact rational arithmetic for dynamical zeta functions.
- ``appcomplex``: collared approximant complexes, substitution action,
  integral cohomology and direct limits.
- ``cli``: the command-line front end.
"""

__version__ = "0.1.0"
