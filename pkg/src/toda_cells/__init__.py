"""Cell complexes, incidence graphs and tau-functions of nilpotent Toda lattices."""

__version__ = "0.1.0"
