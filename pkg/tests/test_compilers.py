import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import VARS, uniform_corpus
from oracles import eval_circuit_naive, md_naive, naive_eval, partial_parse_tree_sum
from tensorvp.circuit import Add, Circuit, Input, Mul, common_parse_shape, eval_gates, is_skew
from tensorvp.compilers import (
    c2f_size_bound,
    circuit_to_formula,
    f2c_size_bound,
    formula_to_circuit,
    right_associate,
    selector_tensors,
    shape_formulas,
    skew_size_bound,
    to_skew_circuit,
)
from tensorvp.equiv import expand_circuit, expand_formula, random_assignment
from tensorvp.errors import (
    IndexOutOfRange,
    MixedOperators,
    NoCommonShape,
    NotMultiplicativelyDisjoint,
    VectorLeafPresent,
)
from tensorvp.field import DEFAULT_MODULUS
from tensorvp.formula import Leaf, Star, StarIJ, chain, eval_formula, is_pure_star, scalar_of
from tensorvp.generate import random_formula, random_tensor
from tensorvp.tensor import Tensor, Var, contract

P = DEFAULT_MODULUS
x, y, u, v = (Var(n) for n in "xyuv")


def xy_plus_uv():
    return Circuit((Input(x), Input(y), Input(u), Input(v), Mul(0, 1), Mul(2, 3), Add(4, 5)), 6)


# --- circuit -> formula --------------------------------------------------------


def test_selector_tensors_definitions():
    c = xy_plus_uv()
    s = selector_tensors(c)
    r = c.size
    for i in range(r):
        for j in range(r):
            want = c.gates[j].label if i == j and isinstance(c.gates[j], Input) else 0
            assert s.I[i, j] == want
            for k in range(r):
                g = c.gates[j]
                is_add_child = isinstance(g, Add) and i in (g.left, g.right)
                assert s.M[i, j, k] == (1 if is_add_child and j == k else 0)
                assert s.ML[i, j, k] == (1 if isinstance(g, Mul) and g.left == i and j == k else 0)
                assert s.MR[i, j, k] == (1 if isinstance(g, Mul) and g.right == i and j == k else 0)
    assert s.E.entries == (1,) * r


def test_c2f_single_input():
    f = circuit_to_formula(Circuit((Input(x),), 0))
    assert scalar_of(f, {"x": 17}) == 17
    assert is_pure_star(f)


def test_c2f_xy_plus_uv():
    c = xy_plus_uv()
    f = circuit_to_formula(c)
    assert scalar_of(f, {"x": 2, "y": 3, "u": 5, "v": 7}) == 41
    assert f.maxdim == 3
    assert f.size <= c2f_size_bound(c) == 9 * 7**3 * 4


def test_c2f_doubled_edge_counts_twice():
    c = Circuit((Input(x), Add(0, 0)), 1)
    assert scalar_of(circuit_to_formula(c), {"x": 5}) == 10


def test_c2f_rejects_bad_circuits():
    with pytest.raises(NotMultiplicativelyDisjoint):
        circuit_to_formula(Circuit((Input(x), Input(y), Add(0, 1), Mul(2, 2)), 3))
    with pytest.raises(NoCommonShape):
        circuit_to_formula(Circuit((Input(x), Input(y), Input(u), Mul(1, 2), Add(0, 3)), 4))


def test_shape_formulas_match_partial_parse_trees():
    for shape, c in uniform_corpus(8, 1, 6, count=40, seed=3):
        fs = shape_formulas(c, shape)
        for path, node in shape.nodes():
            sub = shape.subtree(path)
            tensor = expand_formula(fs[path])
            assert tensor.order == (c.size, c.size)
            for i in range(c.size):
                for j in range(c.size):
                    want = partial_parse_tree_sum(c, sub, i) if i == j else None
                    got = tensor[i, j]
                    if want is None:
                        assert got.is_zero()
                    else:
                        assert got == want
            assert fs[path].size <= 9 * c.size**3 * sub.size


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_c2f_semantics_random(seed):
    (shape, c), = uniform_corpus(12, 2, 7, count=1, seed=seed)
    f = circuit_to_formula(c)
    assert common_parse_shape(c) == shape
    assert f.maxdim == 3
    assert f.size <= 9 * c.size**3 * shape.size
    for t in range(5):
        a = random_assignment(VARS, seed, t)
        assert scalar_of(f, a) == eval_circuit_naive(c, a, P)[c.output]


# --- formula -> circuit ----------------------------------------------------


def test_f2c_leaf_is_inputs():
    t = Tensor((2, 2), (x, 1, 2, y))
    c, m = formula_to_circuit(Leaf(t))
    assert c.size == 4
    assert all(isinstance(g, Input) for g in c.gates)
    assert [c.gates[m[idx]].label for idx in t.indices()] == list(t.entries)


def test_f2c_matrix_product():
    a = Tensor((2, 3), (1, 2, 3, 4, 5, 6))
    b = Tensor((3, 2), (1, 2, 3, 4, 5, 6))
    c, m = formula_to_circuit(Star(Leaf(a), Leaf(b)))
    vals = eval_gates(c, {})
    want = contract(a, b)
    assert {idx: vals[g] for idx, g in m.items()} == {idx: want[idx] for idx in want.indices()}
    assert md_naive(c)


def test_f2c_scalar_output():
    f = Star(Leaf(Tensor((2,), (x, y))), Leaf(Tensor((2,), (3, 4))))
    c, m = formula_to_circuit(f)
    assert list(m) == [()]
    assert expand_circuit(c) == expand_formula(f).dense()[0]


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.booleans(), st.integers(0, 2**32))
def test_f2c_entrywise(nleaves, ij, seed):
    rng = random.Random(seed)
    f = random_formula(rng, nleaves, max_order=3, max_dim=4, ij=ij)
    c, m = formula_to_circuit(f)
    assert md_naive(c)
    assert c.size <= f2c_size_bound(f)
    a = random_assignment(VARS, seed, 0)
    vals = eval_circuit_naive(c, a, P)
    want = naive_eval(f, a, P)
    assert {idx: vals[g] for idx, g in m.items()} == want.data


# --- skew -------------------------------------------------------------------


def test_skew_single_leaf():
    t = random_tensor(random.Random(0), (2, 2))
    c = to_skew_circuit(Leaf(t), (0, 0))
    assert c.size == 1 and c.gates[0].label == t[0, 0]


def test_skew_three_matrices():
    rng = random.Random(2)
    f = chain([random_tensor(rng, (3, 3)) for _ in range(3)])
    a = random_assignment(VARS, 0, 0)
    want = eval_formula(f, a)
    for e in want.indices():
        c = to_skew_circuit(f, e)
        assert is_skew(c)
        assert eval_circuit_naive(c, a, P)[c.output] == want[e]


def test_skew_errors():
    t = Tensor((2, 2), (1, 2, 3, 4))
    vec = Tensor((2,), (1, 1))
    with pytest.raises(VectorLeafPresent):
        to_skew_circuit(Star(Leaf(t), Leaf(vec)), (0,))
    with pytest.raises(IndexOutOfRange):
        to_skew_circuit(Leaf(t), (2, 0))
    with pytest.raises(MixedOperators):
        to_skew_circuit(StarIJ(1, 1, Leaf(t), Leaf(t)), (0, 0))


def test_right_associate_keeps_tensor():
    rng = random.Random(4)
    ts = [random_tensor(rng, (2, 2, 2)), random_tensor(rng, (2, 3)), random_tensor(rng, (3, 2, 2))]
    f = chain(ts)
    g = right_associate(f)
    assert isinstance(g.right, Star)
    a = random_assignment(VARS, 0, 0)
    assert eval_formula(f, a) == eval_formula(g, a)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32))
def test_skew_random(nleaves, seed):
    rng = random.Random(seed)
    f = random_formula(rng, nleaves, max_order=3, max_dim=4, vector_free=True)
    a = random_assignment(VARS, seed, 0)
    want = naive_eval(f, a, P)
    e = rng.choice(list(want.data))
    c = to_skew_circuit(f, e)
    assert is_skew(c)
    assert c.size <= skew_size_bound(f)
    assert eval_circuit_naive(c, a, P)[c.output] == want.data[e]
