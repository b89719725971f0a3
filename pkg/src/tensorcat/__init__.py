"""Non-abelian tensor products, exterior squares and multipliers of finite groups."""

__version__ = "0.1.0"
