"""Exact character theory of the unit groups 1 + A of nilpotent algebras
over finite fields, with a monomiality certificate builder and symbolic
commutator checks in free nilpotent rings."""

__version__ = "0.1.0"
