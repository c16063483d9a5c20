"""Class groups of quadratic fields obtained by specialising hyperelliptic curves with torsion."""

__version__ = "0.1.0"
