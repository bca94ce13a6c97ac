"""Funk transform over shortest closed geodesics on S^2 and CP^n.

Submodules:

rootsys   restricted root systems, dual lattice, midpoint-locus dimensions
sphere    great-circle transform on S^2 in real spherical harmonics
cpn       Fubini-Study geometry of CP^n: lines, geodesics, antipodes
lab       band-limited operators on CP^n, rank and support experiments
operator  shared operator type and rank/kernel analysis
cli       command-line reports
"""
from importlib import resources

from . import cpn, lab, operator, rootsys, sphere

__version__ = "0.1.0"


def report_schema() -> dict:
    """The JSON schema every CLI report validates against."""
    import json
    return json.loads(resources.files(__package__).joinpath("schemas/report.schema.json").read_text())


__all__ = ["cpn", "lab", "operator", "rootsys", "sphere", "report_schema"]
