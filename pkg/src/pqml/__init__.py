"""Propositionally quantified modal logic over finite Kripke and general
frames: semantics with quantifiers over an admissible family, duplicate
classes and diversity, and a quantifier-eliminating evaluator checked
against a brute-force oracle."""

from .axioms import (Polarity, SahlqvistReport, SchemaInstance, alt_dia_n,
                     alt_n, at_n, bc, d45, diamond_collapse, dual, e_ax, five,
                     k, m_ax, phi_sq1, phi_sq2, positive_negative_occurrence,
                     q_n, q_vb, r_n, sahlqvist_check, schema, t, t_dia, trs_m,
                     trs_collapse_m)
from .breakdown import (BreakdownEngine, CardinalityProfile, InvarianceReport,
                        approx_equiv, atom_extensions, breakdown,
                        build_invariant_Y, extend_witness, fast_extension,
                        invariant_subdomain_check)
from .diversity import (DuplicateStructure, LocalKind, are_duplicates,
                        diversity, diversity_generated, duplicate_structure,
                        m_diamond_quotient, quotient_to_dot)
from .errors import (EvaluationError, FrameFormatError, GuardrailError,
                     InternalInvariantError, ParseError, PqmlError)
from .frames import (ClosureReport, GeneralFrame, KripkeFrame, Model,
                     check_closure, close_family, frame_from_json,
                     frame_from_obj, frame_to_dot, frame_to_json,
                     frame_to_obj, is_quantifiable_finite, load_frame_file,
                     truncated_submodel)
from .gallery import (GalleryEntry, ShiftCheck, catalog, chain, clique,
                      cyclic, d45_point, div4_frame, euclid_window, identity,
                      k5_frame, recession_window, resolve,
                      shift_isomorphism_check)
from .semantics import (Evaluator, ValidityResult, check_substitution_lemma,
                        extension, extension_full, holds_at, valid_on_general,
                        valid_on_kripke)
from .syntax import (BOT, TOP, And, Atom, Box, Dia, Exists, Forall, Formula,
                     Iff, Implies, Not, Or, Substitution, Var,
                     alpha_equivalent, atoms_over, big_and, big_or, box_iter,
                     box_le, dia_iter, dia_le, parse, rename_free, substitute,
                     to_text, var_name)

__version__ = "0.1.0"
