"""qline: exact symbolic workbench for q-deformed point algebras of the
real and complexified projective line, their Poisson limits, projective
coordinates and quantum cross ratios."""

__version__ = "0.1.0"
