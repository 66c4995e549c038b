"""Registry of closed-form solvable configurations."""
from ._core import (CatalogEntry, Level, OracleSetup, entries, get, ids, level_count, register, resolve, spectrum, tra_for,
                    wavefunction_upper)
from . import _graphene, _dirac, _schrodinger  # noqa: F401  (registers entries)

__all__ = ["CatalogEntry", "Level", "OracleSetup", "entries", "get", "ids", "level_count", "register", "resolve",
           "spectrum", "tra_for", "wavefunction_upper"]
