"""Cirquent calculus proof kernel.

Formulas, cirquents, the eight inference rules, provers for CCC, CL5, affine
logic and CL2, tautology and triviality decisions, and abstract resource
semantics.
"""

from .errors import (CapExceeded, CirquentError, CirquentsError, EvaluationError, ParseError,
                     ProofFormatError, ResourceError, RuleError, UnsupportedError)
from .formula import Atom, Sort, Substitution, negate, parse, substitute, to_text
from .cirquent import Cirquent, Sequent, embed_formula, make, parse_cirquent, to_cirquent_text
from .inference import CCC, CL5, CL6, Proof, RuleApp, System, apply, check_proof
from .semantics import is_tautology
from .decide import decide_binary_instance, prove_affine, prove_ccc, prove_cl5
from .cl2 import prove_cl2
from .kernels import BACKEND

__version__ = "0.1.0"
