"""Number walls over finite fields: construction, window structure, Littlewood-type checks and counts."""
from .ffield import field_make, parse_field
from .seqgen import Seq, SeqRecipe, literal, materialize, pf_seq, random_seq
from .wall import BladeShape, Wall, WindowRec, detect_windows, wall_frame, wall_naive

__all__ = ["field_make", "parse_field", "Seq", "SeqRecipe", "literal", "materialize", "pf_seq",
           "random_seq", "BladeShape", "Wall", "WindowRec", "detect_windows", "wall_frame",
           "wall_naive"]
