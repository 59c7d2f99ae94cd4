"""Unit tests for structure.py

   Copyright 2023 The polyfus Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
"""

import math

import numpy as np
import pytest

from polyfus import fields, groups, modules, structure

SMALL_GROUPS = [
    groups.PolynomialGroup.sn(3, 1, 1),
    groups.PolynomialGroup.sn(3, 1, 2),
    groups.PolynomialGroup.sn(3, 1, 3),
    groups.PolynomialGroup.slambda(3, 1),
]


def test_central_series() -> None:
    """Structural upper central series have the expected orders."""
    report = structure.central_series(groups.PolynomialGroup.sn(3, 2, 2))
    assert report.orders == [9, 81, 9**4]
    assert report.to_json()["kind"] == "upper_central"
    assert len(report.to_json()["generators"]) == len(report) == 3

    report = structure.central_series(groups.PolynomialGroup.slambda(3, 2))
    assert report.orders == [81, 729, 9**5]

    report = structure.central_series(groups.PolynomialGroup.sn(5, 1, 1))
    assert report.orders[0] == 5

    with pytest.raises(ValueError, match="Unsupported kind"):
        structure.central_series(report.terms[0].group, kind=structure.SeriesKind.COMMUTATOR_CHAIN)
    with pytest.raises(ValueError, match="Unrecognized mode"):
        structure.central_series(report.terms[0].group, mode="magic")  # type:ignore[arg-type]


@pytest.mark.parametrize("group", SMALL_GROUPS, ids=str)
def test_central_series_modes(group: groups.PolynomialGroup) -> None:
    """Structural and brute-force central series agree."""
    for kind in [structure.SeriesKind.UPPER_CENTRAL, structure.SeriesKind.LOWER_CENTRAL]:
        structural = structure.central_series(group, "structural", kind)
        bruteforce = structure.central_series(group, "bruteforce", kind)
        assert structural.orders == bruteforce.orders
        assert all(aa == bb for aa, bb in zip(structural.terms, bruteforce.terms))

    # the upper and lower central series consist of the same subgroups
    if not group.is_lambda and group.n < group.p:
        upper = structure.central_series(group, kind=structure.SeriesKind.UPPER_CENTRAL)
        lower = structure.central_series(group, kind=structure.SeriesKind.LOWER_CENTRAL)
        assert upper.orders == lower.orders[::-1]


def test_weight_filtration() -> None:
    """The weight filtration C_0 < ... < C_n of V_n(q)."""
    group = groups.PolynomialGroup.sn(3, 2, 2)
    report = structure.weight_filtration(group)
    assert report.orders == [9, 81, 729]
    whole = groups.Subgroup.whole(group)
    for lower, upper in zip(report.terms, report.terms[1:]):
        assert upper.commutator_with(whole) == lower

    with pytest.raises(ValueError, match="weight filtration"):
        structure.weight_filtration(groups.PolynomialGroup.slambda(3, 1))


def test_commutator_chain() -> None:
    """Commutator chains [V, S; i] and their single-element versions."""
    report = structure.commutator_chain(groups.PolynomialGroup.sn(5, 1, 2))
    assert report.orders == [25, 5]

    # |V/[V,S]| is q^2 for S_p(q) and q for S_Lambda(q) when q > p
    group = groups.PolynomialGroup.sn(3, 2, 3)
    assert group.order // group.q // structure.commutator_chain(group, 1).orders[0] == 81
    group = groups.PolynomialGroup.slambda(3, 2)
    report = structure.commutator_chain(group)
    assert report.orders == [729, 9]
    assert group.order // group.q // report.orders[0] == 9

    # |V/[V, z]| = q^2 and [V, z; i] = [V, S; i] for 2 <= i < p
    element = group.rows([[2, 1, 0, 5, 0]])
    chain = structure.commutator_chain(group, element=element)
    assert chain.orders == [81, 9]
    assert chain.terms[1] == report.terms[1]

    with pytest.raises(ValueError, match="nonnegative"):
        structure.commutator_chain(group, -1)
    with pytest.raises(ValueError, match="outside of V"):
        structure.commutator_chain(group, element=group.v_rows(group.field([[1, 0, 0, 0]])))


@pytest.mark.parametrize("group", SMALL_GROUPS, ids=str)
def test_commutator_chain_modes(group: groups.PolynomialGroup) -> None:
    """Structural and brute-force commutator chains agree."""
    structural = structure.commutator_chain(group)
    assert structural.orders == structure.commutator_chain(group, mode="bruteforce").orders
    element = group.u_rows([1])
    structural = structure.commutator_chain(group, element=element)
    bruteforce = structure.commutator_chain(group, element=element, mode="bruteforce")
    assert all(aa == bb for aa, bb in zip(structural.terms, bruteforce.terms))


@pytest.mark.parametrize(
    "group", [groups.PolynomialGroup.sn(3, 1, 2), groups.PolynomialGroup.sn(5, 1, 2)], ids=str
)
def test_commutator_order(group: groups.PolynomialGroup) -> None:
    """Elements z in Z_(i+1)(S) outside of Z_i(S) satisfy [z, S] = Z_i(S)."""
    terms = structure.central_series(group).terms
    elements = groups.Subgroup.whole(group).elements
    levels = sum(term.contains(elements) for term in terms)
    for row, level in zip(elements, levels):
        index = len(terms) - level
        expected = 1 if index == 0 else terms[index - 1].order
        assert structure.commutator_order(group, row) == expected


def test_gamma_quotient() -> None:
    """The map gamma differentiates with respect to y."""
    group = groups.PolynomialGroup.sn(3, 1, 2)
    gamma = structure.gamma_quotient(group)
    assert gamma.target == groups.PolynomialGroup.sn(3, 1, 1)
    assert np.array_equal(gamma(group.rows([[0, 0, 1, 0]])), gamma.target.rows([[0, 1, 0]]))
    assert np.array_equal(gamma(group.rows([[1, 0, 0, 0]])), gamma.target.rows([[1, 0, 0]]))
    assert gamma.kernel() == groups.standard_subgroups(group, ["Z"])["Z"]
    assert gamma.is_surjective() and not gamma.is_injective()
    assert gamma.check_homomorphism(50, seed=0)

    # iterating gamma gives S/Z_2(S) = S_(n-2)(q)
    group = groups.PolynomialGroup.sn(5, 1, 3)
    composite = structure.gamma_quotient(group).compose(
        structure.gamma_quotient(structure.gamma_quotient(group).target)
    )
    assert composite.target == groups.PolynomialGroup.sn(5, 1, 1)
    assert composite.kernel().order == structure.central_series(group).orders[1]
    assert composite.is_surjective() and composite.check_homomorphism(50, seed=1)

    for bad_group in [groups.PolynomialGroup.sn(3, 1, 1), groups.PolynomialGroup.sn(3, 1, 3)]:
        with pytest.raises(ValueError, match="2 <= n <= p - 1"):
            structure.gamma_quotient(bad_group)
    with pytest.raises(ValueError, match="Cannot compose"):
        gamma.compose(gamma)


def test_lambda_quotient() -> None:
    """The quotient of S_Lambda(q) by <bar(y^p)> is S_(p-1)(q)."""
    for group in [groups.PolynomialGroup.slambda(3, 1), groups.PolynomialGroup.slambda(3, 2)]:
        quotient = structure.lambda_quotient(group)
        assert quotient.target == groups.PolynomialGroup.sn(3, group.m, 2)
        kernel = quotient.kernel()
        assert kernel.order == group.q
        assert kernel == groups.Subgroup.from_structure(group, [0], group.field.Identity(4)[3:])
        assert np.all(quotient.target.is_identity(quotient(group.rows([[0, 0, 0, 0, 1]]))))
        assert np.array_equal(quotient(group.rows([[2, 0, 0, 0, 0]])), quotient.target.u_rows([2]))
        assert quotient.is_surjective()
        assert quotient.check_homomorphism(100, seed=2)

    with pytest.raises(ValueError, match="requires S_Lambda"):
        structure.lambda_quotient(groups.PolynomialGroup.sn(3, 1, 2))


def test_subgroup_similarity() -> None:
    """Truncation identifies [V, S; i]U with S_(n-i)(q)."""
    group = groups.PolynomialGroup.sn(5, 1, 4)
    similarity = structure.subgroup_similarity(group, 1)
    assert similarity.target == groups.PolynomialGroup.sn(5, 1, 3)
    assert similarity.is_injective() and similarity.is_surjective()
    assert similarity.check_homomorphism(100, seed=3)
    assert similarity.domain_subgroup().order == similarity.target.order

    # UZ_2(S) = S_1(q)
    group = groups.PolynomialGroup.sn(5, 1, 3)
    similarity = structure.subgroup_similarity(group, 2)
    assert similarity.domain_subgroup() == groups.standard_subgroups(group, ["Q"])["Q"]
    assert similarity.target == groups.PolynomialGroup.sn(5, 1, 1)
    assert similarity.is_injective() and similarity.is_surjective()

    identity = structure.subgroup_similarity(group, 0)
    rows = group.random_rows(10, seed=4)
    assert np.array_equal(identity(rows), rows)

    with pytest.raises(ValueError, match="outside the domain"):
        similarity(group.rows([[0, 0, 0, 0, 1]]))
    with pytest.raises(ValueError, match="0 <= i <= n - 1"):
        structure.subgroup_similarity(group, 3)


def test_centralizer() -> None:
    """Centralizers in V are fixed spaces of unipotent elements."""
    group = groups.PolynomialGroup.sn(3, 2, 2)
    module = groups.standard_subgroups(group, ["V"])["V"]
    for param in range(1, group.q):
        assert structure.centralizer(module, group.u_rows([param])).order == group.q
    assert structure.centralizer(module, module) == module

    group = groups.PolynomialGroup.slambda(3, 2)
    module = groups.standard_subgroups(group, ["V"])["V"]
    assert structure.centralizer(module, group.rows([[1, 0, 1, 0, 0]])).order == group.q**2

    group = groups.PolynomialGroup.sn(3, 2, 3)
    assert structure.module_centralizer(group, 1).order == group.q**2

    # q = p
    group = groups.PolynomialGroup.sn(3, 1, 3)
    centre = structure.module_centralizer(group, 1)
    assert centre.order == 9
    assert group.v_rows(group.field([[1, 0, 0, 0], [0, 1, 0, 2]])) in centre


@pytest.mark.parametrize("group", SMALL_GROUPS, ids=str)
def test_centralizer_modes(group: groups.PolynomialGroup) -> None:
    """Structural and brute-force centralizers agree."""
    module = groups.standard_subgroups(group, ["V"])["V"]
    rows = group.random_rows(3, seed=5)
    structural = structure.centralizer(module, rows)
    assert structural == structure.centralizer(module, rows, mode="bruteforce")
    whole = groups.Subgroup.whole(group)
    assert structure.centralizer(whole, whole) == whole.center()


def test_gamma_centralizer() -> None:
    """The kernel of the action of K^* x GL_2(K) on V_n(q) has order q - 1."""
    for field_spec, n in [(fields.field_make(3), 2), (fields.field_make(5), 2)]:
        triples = structure.gamma_centralizer(field_spec, n)
        assert len(triples) == field_spec.q - 1
        assert set(triples) == set(structure.gamma_centralizer(field_spec, n, bruteforce=True))
        spec = modules.ModuleSpec.vn(field_spec, n)
        for triple in triples:
            matrix = modules.module_matrix(spec, triple)
            assert np.array_equal(matrix, field_spec.field.Identity(n + 1))


@pytest.mark.parametrize("p,m,n", [(3, 1, 1), (3, 1, 2), (5, 1, 1), (5, 1, 2)])
def test_cents_lemma_count(p: int, m: int, n: int) -> None:
    """|C_X(C_V(T))| = q (n, q - 1) for X = SL_2(q)."""
    field_spec = fields.field_make(p, m)
    assert len(structure.special_linear_group(field_spec)) == field_spec.q**3 - field_spec.q
    expected = field_spec.q * math.gcd(n, field_spec.q - 1)
    assert structure.cents_lemma_count(field_spec, n) == expected


def test_action_on_centre() -> None:
    """L_0 acts on C_V(S) = <x^n> by n-th powers."""
    action = structure.action_on_centre(groups.PolynomialGroup.sn(5, 1, 2))
    assert action.scalars == (1, 4)
    assert action.order == action.expected_order == 2
    assert action.irreducible and not action.trivial

    action = structure.action_on_centre(groups.PolynomialGroup.sn(3, 1, 2))
    assert action.trivial and action.order == action.expected_order == 1

    for n in [1, 2]:
        action = structure.action_on_centre(groups.PolynomialGroup.sn(3, 2, n))
        assert action.order == action.expected_order == 8 // n
        assert action.irreducible

    with pytest.raises(ValueError, match="1 <= n <= p - 1"):
        structure.action_on_centre(groups.PolynomialGroup.sn(3, 1, 3))


def test_action_on_centre_lambda() -> None:
    """The cyclic groups K_1 and K_2 each fix a line of Lambda(q)."""
    action = structure.action_on_centre_lambda(groups.PolynomialGroup.slambda(3, 2))
    assert action.orders == (8, 8)
    assert action.fixed_orders == (9, 9)
    assert action.centralizes_targets == (True, True)

    with pytest.raises(ValueError, match="S_Lambda"):
        structure.action_on_centre_lambda(groups.PolynomialGroup.sn(3, 2, 2))


def test_bc_families() -> None:
    """Conjugacy classes of the subgroups R and Q."""
    group = groups.PolynomialGroup.sn(3, 2, 2)
    family = structure.bc_families(group, "R")
    assert family.member()
    assert family.normalizer == family.expected_normalizer
    assert len(family.conjugates) == family.expected_conjugates == 9
    assert family.intersections_ok() and family.s_conjugacy_ok() and family.products_ok()

    family = structure.bc_families(group, "Q")
    assert family.member()
    assert len(family.conjugates) == family.expected_conjugates == 1
    assert family.normalizer.order == group.order

    module = groups.standard_subgroups(group, ["V"])["V"]
    assert not structure.in_b_family(module) and not structure.in_c_family(module)

    with pytest.raises(ValueError, match="undefined for S_1"):
        structure.bc_families(groups.PolynomialGroup.sn(3, 2, 1), "Q")
    with pytest.raises(ValueError, match="represented by R or Q"):
        structure.bc_families(group, "V")  # type:ignore[arg-type]


def test_bc_families_lambda() -> None:
    """The subgroup R of S_Lambda(9) has 9 conjugates."""
    group = groups.PolynomialGroup.slambda(3, 2)
    family = structure.bc_families(group, "R")
    assert family.member()
    assert family.normalizer.order == group.q**4
    assert len(family.conjugates) == family.expected_conjugates == 9
    assert family.intersections_ok() and family.s_conjugacy_ok()


def test_char_subgroup_ulvs() -> None:
    """U[V, S] and V are the only normal subgroups of index q with exponent p."""
    group = groups.PolynomialGroup.slambda(3, 2)
    subgroup, exponents = structure.char_subgroup_ulvs(group)
    assert subgroup == groups.standard_subgroups(group, ["U[V,S]"])["U[V,S]"]
    assert len(exponents) == group.q + 1
    assert sorted(name for name, exponent in exponents.items() if exponent == 3) == [
        "U[V,S]",
        "V",
    ]
    assert groups.Subgroup.whole(group).exponent() == 9

    with pytest.raises(ValueError, match="S_Lambda"):
        structure.char_subgroup_ulvs(groups.PolynomialGroup.sn(3, 2, 2))


def test_jordan_profile() -> None:
    """Jordan blocks of unipotent module automorphisms."""
    group = groups.PolynomialGroup.sn(3, 1, 2)
    assert structure.jordan_profile(group.unipotent(1)) == [3]
    group = groups.PolynomialGroup.sn(3, 2, 2)
    assert structure.jordan_profile(group.unipotent(1), degree=2) == [3, 3]
    group = groups.PolynomialGroup.slambda(3, 2)
    assert structure.jordan_profile(group.unipotent(1)) == [3, 1]
    assert structure.jordan_profile(group.field.Identity(3)) == [1, 1, 1]

    with pytest.raises(ValueError, match="unipotent"):
        structure.jordan_profile(2 * fields.field_make(3).field.Identity(3))


def test_permutation_oracle() -> None:
    """SymPy agrees with the structural central series."""
    report = structure.permutation_oracle(groups.PolynomialGroup.sn(3, 1, 1))
    assert report.order == 27 and report.center_order == 3
    assert report.lower_central_orders == (27, 3, 1)
    assert report.is_nilpotent

    for group in [groups.PolynomialGroup.sn(3, 1, 2), groups.PolynomialGroup.slambda(3, 1)]:
        report = structure.permutation_oracle(group)
        assert report.order == group.order
        assert report.center_order == structure.central_series(group).orders[0]
        lower = structure.central_series(group, kind=structure.SeriesKind.LOWER_CENTRAL)
        assert report.lower_central_orders == (*lower.orders, 1)

    with pytest.raises(groups.SizeCapError, match="too large"):
        structure.permutation_oracle(groups.PolynomialGroup.sn(3, 2, 2))
