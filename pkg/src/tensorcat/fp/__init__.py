"""Finitely presented groups and coset enumeration."""
from .enumeration import (CosetTable, Limits, enumerate_cosets, group_order, presentation_of,
                          to_group)
from .parse import parse_presentation
from .words import Presentation, Word

__all__ = ["CosetTable", "Limits", "Presentation", "Word", "enumerate_cosets", "group_order",
           "parse_presentation", "presentation_of", "to_group"]
