"""Short-generator recovery and negative moments of L(1, chi) for prime cyclotomic fields."""

__version__ = "0.1.0"
