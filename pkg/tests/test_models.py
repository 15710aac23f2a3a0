import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modsym.formula import Clause, Literal, ModalCnf, modal_depth, parse_cnf, read_cnf
from modsym.models import (ClassSpec, FiniteModel, ModelClassError, ModelError, NotATreeError,
                           check_class, entails, enumerate_models, find_sigma_simulation,
                           format_model, is_bisimilar, is_closed_under, k_tree_bound, parse_model,
                           permute_model, permute_tree_layered, satisfies, tree_depths, unravel)
from modsym.models.core import EnumerationBoundError
from modsym.permutation import (Permutation, PermutationSequence, apply_formula, apply_layered,
                                parse_cycles)
from modsym.sampling import (CnfShape, bisimilar_copy, random_cnf, random_consistent_permutation, random_model,
                             random_sequence, random_tree, symmetric_cnf)

from oracles import naive_permute_model, naive_satisfies

ATOMS = ("p", "q", "r")
BOTTOM = ModalCnf.of([Clause.of([])])


def one_world(*atoms, loop=False):
    return FiniteModel(("w",), "w", {"w": set(atoms)}, {"m": {("w", "w")}} if loop else {})


def seeds():
    return st.integers(0, 2 ** 32)


# ------------------------------------------------------------------ semantics

def test_vacuous_box_and_atoms():
    m = one_world("p")
    assert satisfies(m, parse_cnf("{{[m]{q}}}"))
    assert satisfies(m, parse_cnf("{{p}}"))
    assert not satisfies(m, parse_cnf("{{q}}"))
    assert satisfies(m, parse_cnf("{ }"))
    assert not satisfies(m, BOTTOM)


def test_derived_accessibility():
    m = FiniteModel(("a", "b"), "a", {"a": {"p"}, "b": {"i", "q"}}, {})
    assert satisfies(m, parse_cnf("{{~[A]{p}}}"))        # b lacks p
    assert satisfies(m, parse_cnf("{{[@i]{q}}}"))
    assert not satisfies(m, parse_cnf("{{[@i]{p}}}"))
    assert satisfies(m, parse_cnf("{{[@j]{p}}}"))         # no j-world: vacuous


def test_nominal_diamond_witness():
    f = read_cnf("(p | q | r) & (s | q | r) & (~p | ~s) & <m>(p | s) & [A]~r")
    spec = ClassSpec(universal=True)
    atoms = sorted({a for c in f.clauses for a in _atoms(c)})
    witness = next(m for m in enumerate_models(atoms, 2, spec) if satisfies(m, f, spec))
    assert naive_satisfies(witness, f)
    assert not any("r" in witness.val(w) for w in witness.worlds)


def _atoms(c):
    out = {l.atom for l in c.atom_literals}
    for ml in c.modal_literals:
        out |= _atoms(ml.body)
    return out


def test_class_violation_raises():
    m = FiniteModel(("a", "b"), "a", {"a": {"i"}, "b": {"i"}}, {})
    spec = ClassSpec(nominals={"i"})
    assert not check_class(m, spec)
    assert check_class(m, ClassSpec())
    with pytest.raises(ModelClassError):
        satisfies(m, parse_cnf("{{i}}"), spec)
    assert check_class(FiniteModel(("a", "b"), "a", {"b": {"i"}}, {}), ClassSpec(nominals={"i"}, at=True))


def test_model_validation():
    with pytest.raises(ModelError):
        FiniteModel(("a",), "b")
    with pytest.raises(ModelError):
        FiniteModel(("a",), "a", {}, {"m": {("a", "z")}})


@settings(max_examples=300, deadline=None)
@given(seeds())
def test_evaluator_matches_oracle(seed):
    rng = random.Random(seed)
    shape = CnfShape(atoms=("p", "q", "i"), modalities=("m", "A", "@i"))
    phi = random_cnf(rng, shape)
    m = random_model(rng, atoms=("p", "q", "i"))
    assert satisfies(m, phi) == naive_satisfies(m, phi)


# ------------------------------------------------------------------ permutations of models

def test_permute_model_examples():
    m = one_world("p")
    s = parse_cycles("(p q)(~p ~q)")
    assert permute_model(s, m).val("w") == {"q"}
    assert permute_model(Permutation.identity(), m) == m
    assert permute_model(parse_cycles("(p ~p)"), m).val("w") == frozenset()
    assert permute_model(parse_cycles("(q ~q)"), m).val("w") == {"p", "q"}


@settings(max_examples=300, deadline=None)
@given(seeds())
def test_permute_model_matches_oracle(seed):
    rng = random.Random(seed)
    m = random_model(rng)
    s = random_consistent_permutation(rng, ATOMS)
    mp = {(l.atom, l.positive): (s(l).atom, s(l).positive)
          for a in ATOMS for l in (Literal(a), Literal(a, False))}
    assert permute_model(s, m) == naive_permute_model(m, mp)


def _hybrid_sigma(rng, atoms, index_atoms):
    while True:
        s = random_consistent_permutation(rng, atoms)
        if all(s(Literal(i)).positive for i in index_atoms):
            return s


@settings(max_examples=300, deadline=None)
@given(seeds())
def test_permutation_preserves_truth_hybrid(seed):
    rng = random.Random(seed)
    atoms = ("p", "q", "i")
    phi = random_cnf(rng, CnfShape(atoms=atoms, modalities=("m", "A", "@i")))
    m = random_model(rng, atoms=atoms)
    s = _hybrid_sigma(rng, atoms, ["i"])
    assert satisfies(m, phi) == satisfies(permute_model(s, m), apply_formula(s, phi))


@settings(max_examples=200, deadline=None)
@given(seeds())
def test_symmetry_maps_models_to_models(seed):
    rng = random.Random(seed)
    phi, s = symmetric_cnf(rng)
    m = random_model(rng)
    assert satisfies(m, phi) == satisfies(permute_model(s, m), phi)


# ------------------------------------------------------------------ simulations

def test_simulation_examples():
    m = one_world("p")
    s = parse_cycles("(p q)(~p ~q)")
    z = find_sigma_simulation(s, m, permute_model(s, m))
    assert z is not None and ("w", "w") in z
    assert find_sigma_simulation(Permutation.identity(), one_world("p"), one_world()) is None


def test_bisimulation_examples():
    loop = one_world("p", loop=True)
    chain = FiniteModel(("a", "b"), "a", {"a": {"p"}, "b": {"p"}}, {"m": {("a", "b"), ("b", "a")}})
    assert is_bisimilar(loop, loop)
    assert is_bisimilar(loop, chain)
    assert not is_bisimilar(one_world("p"), one_world("q"))
    assert not is_bisimilar(loop, one_world("p"))


@settings(max_examples=200, deadline=None)
@given(seeds())
def test_simulation_to_permuted_model(seed):
    rng = random.Random(seed)
    m = random_model(rng)
    s = random_consistent_permutation(rng, ATOMS)
    z = find_sigma_simulation(s, m, permute_model(s, m))
    assert z is not None
    assert all((w, w) in z for w in m.reachable())


@settings(max_examples=200, deadline=None)
@given(seeds())
def test_identity_simulation_is_bisimulation(seed):
    rng = random.Random(seed)
    a = random_model(rng, atoms=("p", "q"))
    b = bisimilar_copy(rng, a) if rng.random() < 0.5 else random_model(rng, atoms=("p", "q"))
    found = find_sigma_simulation(Permutation.identity(), a, b) is not None
    assert found == is_bisimilar(a, b)


@settings(max_examples=150, deadline=None)
@given(seeds())
def test_simulation_transfers_truth(seed):
    rng = random.Random(seed)
    a = random_model(rng, atoms=("p", "q"))
    s = random_consistent_permutation(rng, ("p", "q"))
    b = permute_model(s, bisimilar_copy(rng, a)) if rng.random() < 0.7 else random_model(rng, atoms=("p", "q"))
    if find_sigma_simulation(s, a, b) is None:
        return
    for _ in range(20):
        phi = random_cnf(rng, CnfShape(atoms=("p", "q")))
        assert satisfies(a, phi) == satisfies(b, apply_formula(s, phi))


@settings(max_examples=100, deadline=None)
@given(seeds())
def test_bisimilar_models_agree(seed):
    rng = random.Random(seed)
    a = random_model(rng)
    b = bisimilar_copy(rng, bisimilar_copy(rng, a))
    assert is_bisimilar(a, b)
    for _ in range(20):
        phi = random_cnf(rng)
        assert satisfies(a, phi) == satisfies(b, phi)


# ------------------------------------------------------------------ trees and unravelling

def test_unravel_self_loop():
    t = unravel(one_world("p", loop=True), 2)
    assert len(t.worlds) == 3 and t.depth == 2
    assert tree_depths(t) is not None
    assert sorted(p.length() for p in t.paths.values()) == [0, 1, 2]
    assert all(t.val(w) == {"p"} for w in t.worlds)


def test_unravel_tree_is_isomorphic():
    rng = random.Random(3)
    tree = random_tree(rng, depth=2)
    t = unravel(tree, 2)
    assert len(t.worlds) == len(tree.worlds)
    assert is_bisimilar(tree, t)


@settings(max_examples=200, deadline=None)
@given(seeds(), st.integers(0, 3))
def test_unravel_preserves_bounded_truth(seed, depth):
    rng = random.Random(seed)
    m = random_model(rng)
    phi = random_cnf(rng, CnfShape(max_depth=depth))
    assert modal_depth(phi) <= depth
    assert satisfies(m, phi) == satisfies(unravel(m, depth), phi)


def test_permute_tree_layered_basics():
    rng = random.Random(5)
    tree = random_tree(rng)
    assert permute_tree_layered(PermutationSequence(), tree) == tree
    s = parse_cycles("(p q)(~p ~q)")
    out = permute_tree_layered(PermutationSequence([s]), tree)
    assert out.val("t") == permute_model(s, tree).val("t")
    assert all(out.val(w) == tree.val(w) for w in tree.worlds if w != "t")
    with pytest.raises(NotATreeError):
        permute_tree_layered(PermutationSequence([s]), one_world("p", loop=True))


@settings(max_examples=300, deadline=None)
@given(seeds())
def test_layered_permutation_preserves_truth_on_trees(seed):
    rng = random.Random(seed)
    tree = random_tree(rng, depth=rng.randint(0, 3))
    phi = random_cnf(rng)
    seq = random_sequence(rng, ATOMS, rng.randint(modal_depth(phi), 3))
    assert satisfies(tree, phi) == satisfies(permute_tree_layered(seq, tree), apply_layered(seq, phi))


# ------------------------------------------------------------------ enumeration and classes

def test_enumeration_counts():
    assert len(list(enumerate_models(["p"], 1))) == 4
    assert len(list(enumerate_models([], 1, modalities=()))) == 1
    spec = ClassSpec(nominals={"i"})
    two = [m for m in enumerate_models(["i"], 2, spec, modalities=()) if len(m.worlds) == 2]
    assert two and all(sum("i" in m.val(w) for w in m.worlds) == 1 for m in two)
    # 2 valuations x 2 worlds x 2 points
    assert len(two) == 4
    with pytest.raises(EnumerationBoundError):
        next(enumerate_models("pqrstu", 4))


def test_enumeration_count_formula():
    got = sum(1 for _ in enumerate_models(["p", "q"], 2))
    expected = sum(2 ** (2 * n + n * n) * n for n in (1, 2))
    assert got == expected


def test_closure_examples():
    assert is_closed_under(parse_cycles("(i j)(~i ~j)"), ClassSpec(nominals={"i", "j"}))
    assert not is_closed_under(parse_cycles("(i p)(~i ~p)"), ClassSpec(nominals={"i"}))
    assert is_closed_under(parse_cycles("(p ~q)(~p q)"), ClassSpec())
    # the exhaustive fallback also accepts maps that leave nominals alone
    assert is_closed_under(parse_cycles("(p q)(~p ~q)"), ClassSpec(nominals={"i"}))
    assert not is_closed_under(parse_cycles("(i ~i)"), ClassSpec(nominals={"i"}))


# ------------------------------------------------------------------ text format

def test_model_text_round_trip():
    rng = random.Random(11)
    for _ in range(20):
        m = random_model(rng)
        spec = ClassSpec(nominals={"i"}, universal=True)
        back, got = parse_model(format_model(m, spec))
        assert back == m and got == spec
    with pytest.raises(ModelError):
        parse_model("worlds: a\npoint: a\nbogus line")


# ------------------------------------------------------------------ entailment

def test_entailment_examples():
    assert entails(parse_cnf("{{p}}"), parse_cnf("{{p,q}}")).entailed
    res = entails(parse_cnf("{{p}}"), parse_cnf("{{q}}"))
    assert not res.entailed and res.exact
    cm = res.countermodel
    assert cm.worlds == ("w0",) and cm.val("w0") == {"p"}


def test_entailment_modal():
    phi = read_cnf("[m]p & <m>q")
    assert entails(phi, read_cnf("<m>(p & q)")).entailed
    assert not entails(read_cnf("<m>p & <m>q"), read_cnf("<m>(p & q)")).entailed
    assert entails(read_cnf("[m](p & q)"), read_cnf("[m]p")).entailed


def test_entailment_outside_k_is_bounded():
    spec = ClassSpec(nominals={"i"})
    res = entails(read_cnf("<m>(i & p) & <m>(i & q)"), read_cnf("<m>(p & q)"), spec)
    assert res.entailed and not res.exact and res.method == "enumeration"
    # without the nominal the same question has a countermodel
    assert not entails(read_cnf("<m>(i & p) & <m>(i & q)"), read_cnf("<m>(p & q)")).entailed


def test_k_tree_bound():
    assert k_tree_bound(parse_cnf("{{p}}")) == 1
    assert k_tree_bound(read_cnf("<m>p & <m>q")) == 3


@settings(max_examples=150, deadline=None)
@given(seeds())
def test_k_search_agrees_with_enumeration(seed):
    """Exact K answers vs brute force over all models with up to 2 worlds."""
    rng = random.Random(seed)
    shape = CnfShape(atoms=("p", "q"), max_depth=1, max_clauses=3)
    phi, psi = random_cnf(rng, shape), random_cnf(rng, shape)
    res = entails(phi, psi)
    assert res.exact
    small = next((m for m in enumerate_models(["p", "q"], 2)
                  if naive_satisfies(m, phi) and not naive_satisfies(m, psi)), None)
    if small is not None:
        assert not res.entailed
    if not res.entailed:
        assert naive_satisfies(res.countermodel, phi)
        assert not naive_satisfies(res.countermodel, psi)
