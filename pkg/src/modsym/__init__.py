"""Symmetries of modal formulas in conjunctive normal form."""

from .formula import (Clause, Literal, ModalCnf, ModalLiteral, Modality, Signature,
                      atoms_of, canonicalize, format_cnf, modal_depth, parse_cnf,
                      parse_formula, read_cnf, to_cnf)
from .permutation import (Permutation, PermutationSequence, apply_formula, apply_layered,
                          compose, inverse, is_consistent, is_layered_symmetry, is_symmetry,
                          order, parse_cycles, parse_sequence, power, symmetric_images)

__version__ = "0.1.0"
