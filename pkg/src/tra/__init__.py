"""Tridiagonal representation toolkit for the 1D Dirac equation.

Subpackages and modules:

- ``orthopoly``: Laguerre, Jacobi and Meixner-Pollaczek polynomials, Gauss rules
- ``basis``: coordinate maps and square-integrable bases
- ``potentials``: potential families, configurations and reduction to Schrodinger form
- ``jmatrix``: wave-operator matrix elements, linearity check and tridiagonal bands
- ``solver``: recursion, determinant scan, implicit roots, finite-difference oracle
- ``catalog``: solvable configurations with spectra and wavefunctions
- ``spinor``: two-component spinors and the Dirac residual
- ``graphene``: magnetic barriers in graphene
- ``cli``: the ``tra`` command
"""
from . import basis, catalog, graphene, jmatrix, orthopoly, potentials, solver, spinor
from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "basis", "catalog", "graphene", "jmatrix", "orthopoly", "potentials", "solver", "spinor"]
