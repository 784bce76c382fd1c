"""A proof-term kernel for intuitionistic logic with constant domains."""
from .syntax import *  # noqa: F401,F403
from .typechecker import (ErrorKind, Mode, TypingError, check, check_cd_instance,
                          infer)
from .reducer import (DEFAULT_FUEL, Rule, Step, Trace, contract, find_redexes,
                      head_decompose, is_normal, normalize, recompose,
                      replay_subject_reduction, step)
from .translator import (DummyCache, NotSimulated, check_simulation, dummy_term,
                         exfalso, translate, translate_axiom)
from .extraction import (ExtractionError, extract_disjunct, extract_universal,
                         extract_witness)
from .parser import ParseError, parse, parse_formula, parse_fo_term, parse_term
from .printer import show

__version__ = "0.1.0"
