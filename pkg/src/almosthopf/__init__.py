"""Almost groups, almost Hopf algebras, bicrossproducts and meromorphic loop factorisation."""

__version__ = "0.1.0"
