"""Compile between arithmetic circuits, tensor contraction formulas and tensors."""

from .circuit import (
    Add,
    Circuit,
    Input,
    Mul,
    ParseTree,
    ShapeTree,
    common_parse_shape,
    enumerate_parse_trees,
    eval_circuit,
    gen_uniform_circuit,
    is_multiplicatively_disjoint,
    is_skew,
    monomial_sum_check,
)
from .compilers import circuit_to_formula, formula_to_circuit, to_skew_circuit
from .equiv import expand_circuit, expand_formula, random_equiv
from .field import DEFAULT_MODULUS, use_modulus
from .formula import (
    FormulaMetrics,
    Leaf,
    Star,
    StarIJ,
    eval_formula,
    is_tame,
    is_totally_tame,
    scalar_of,
    validate,
)
from .poly import SparsePoly
from .tensor import Tensor, Var, all_ones_vector, contract, contract_ij, eval_tensor
from .transforms import (
    absorb_vector,
    absorb_vector_ij,
    decompose_tensor,
    flatten_inputs,
    rewrite_ij_identity,
    tamify,
    tamify_ij,
)

__version__ = "0.1.0"
