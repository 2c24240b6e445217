"""picstab: Picard groups of stable module categories, by exact arithmetic.

Computes the group of invertible (endotrivial) modules for small finite
groups directly from module arithmetic over finite fields, and for
fundamental groups of finite graphs of finite groups via exact-sequence
bookkeeping on finitely generated abelian groups.
"""

from .exactlin import Fq, FqMatrix, ZMatrix, fq_make, smith_normal_form
from .groups import FiniteGroup, GroupMono, Subgroup, build_group
from .abgrp import AbHom, Ambiguous, FgAbelian

__all__ = [
    "Fq",
    "FqMatrix",
    "ZMatrix",
    "fq_make",
    "smith_normal_form",
    "FiniteGroup",
    "GroupMono",
    "Subgroup",
    "build_group",
    "AbHom",
    "Ambiguous",
    "FgAbelian",
]
