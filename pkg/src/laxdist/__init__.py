"""laxdist: finite quantaloids, discrete presheaf monads, lax distributive
laws, and the categories they describe, with executable axiom checks."""

__version__ = "0.1.0"
