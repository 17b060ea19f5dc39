"""Exact-arithmetic higher Koszul brackets on graded associative algebras.

The package computes the bracket hierarchies attached to elements and
endomorphisms of free non-commutative (and one-variable polynomial)
algebras by three independent constructions, and ships a batch CLI that
machine-verifies the identities relating them.
"""

from .algebra import (
    AlgebraElement,
    AlgebraSignature,
    CommutatorEndo,
    ComposeEndo,
    DerivationEndo,
    Endomorphism,
    Generator,
    IdentityEndo,
    LeftMultEndo,
    PolynomialDerivativeEndo,
    RightMultEndo,
    ScaleEndo,
    SumEndo,
    TableEndo,
    element,
    gen_element,
    graded_commutator,
    koszul_sign,
    monomial,
    random_element,
    unit,
    word_element,
    zero,
)
from .brackets import (
    BORJESON_PRESET,
    BracketFamily,
    GaugePreset,
    KOSZUL_PRESET,
    TRIVIAL_PRESET,
    exp_adjoint,
    gauge_preset,
    iterated_bracket,
    phi_family,
    phi_nonunital,
    phi_recursive,
    psi,
    psi_bandiera,
    psi_bering,
    psi_commutative,
    psi_family,
    quantum_antibracket,
)
from .checks import (
    COMMUTATIVE_ALGEBRA,
    DEFAULT_ALGEBRA,
    CheckSpec,
    default_suite,
    registered_checks,
    run_check,
    run_suite,
    suite_passed,
)
from .operators import (
    MultiOperator,
    TensorOperator,
    check_symmetry,
    constant_operator,
    endo_operator,
    gerstenhaber_product,
    mu,
    nr_bracket,
    nr_product,
    symmetrize_map,
    symmetrize_operator,
)
from .report import VerificationReport
from .tables import bernoulli, bernoulli_two_index, fraction_from_str, fraction_to_str, gauge_k, stirling2

__version__ = "0.1.0"
