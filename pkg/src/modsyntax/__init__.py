"""Syntax with variable binding generated from signatures of arities.

Arities describe operation domains (terms, products, binders, composites
and sums); a signature names a family of them. From a signature the
package builds well-scoped terms with capture-free substitution, folds
them into any other model, and checks the substitution laws by sampling
and by exhaustive small-scope enumeration.
"""

from .arity import (
    THETA,
    TERMINAL,
    Arity,
    Comp,
    Deriv,
    Prod,
    Signature,
    SignatureInclusion,
    Sum,
    Terminal,
    Theta,
    algebraic,
    canon,
    derive_n,
    is_algebraic,
    merge_signatures,
    parse_arity,
    parse_signature,
    print_arity,
    print_signature,
    validate_signature,
)
from .engine import Substitution, bind, bind_arg, flatten, lift, rename
from .generate import count_terms, enumerate_terms, random_term
from .initiality import (
    TargetMonad,
    TargetRepresentation,
    check_monad_morphism,
    check_pushout,
    eval_term,
    self_representation,
    translate,
)
from .laws import LAW_IDS, Bounds, run_all
from .sexpr import parse_term, pretty_term, show_term
from .terms import (
    AOuter,
    AScope,
    ATerm,
    ATuple,
    AUnit,
    AVariant,
    Bound,
    Free,
    Nested,
    Op,
    Var,
    well_formed,
)

__version__ = "0.1.0"
