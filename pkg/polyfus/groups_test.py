"""Unit tests for groups.py

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

import unittest.mock

import numpy as np
import pytest

from polyfus import fields, groups, modules


def test_polynomial_group() -> None:
    """Construct groups and check basic properties."""
    group = groups.PolynomialGroup.sn(3, 2, 2)
    assert group.order == 9**4 and group.dim == 3 and not group.is_lambda
    assert str(group) == "S_2(9)"
    assert group == groups.PolynomialGroup.from_target(3, 2, "Sn:2")

    group = groups.PolynomialGroup.from_target(3, 2, "SLambda")
    assert group.is_lambda and group.n == 3 and group.order == 9**5
    assert group.name == "S_Lambda(9)"
    assert group.to_json() == {"field": group.field_spec.to_json(), "kind": "Lambda", "n": 3}

    with pytest.raises(ValueError, match="odd prime"):
        groups.PolynomialGroup.sn(2, 2, 1)
    with pytest.raises(ValueError, match="1 <= n <= p"):
        groups.PolynomialGroup.sn(3, 1, 4)
    with pytest.raises(ValueError, match="Unrecognized group target"):
        groups.PolynomialGroup.from_target(3, 1, "Sn:x")


def test_row_arithmetic() -> None:
    """Vectorized arithmetic agrees with the parabolic product law."""
    for group in [groups.PolynomialGroup.sn(3, 2, 3), groups.PolynomialGroup.slambda(5, 1)]:
        left, right = group.random_rows(20, seed=0), group.random_rows(20, seed=1)
        products = group.multiply(left, right)
        for aa, bb, cc in zip(left, right, products):
            assert group.from_row(aa) * group.from_row(bb) == group.from_row(cc)

        assert np.all(group.is_identity(group.multiply(left, group.inverse(left))))
        assert np.array_equal(group.decode(group.keys(left)), left)
        cubes = group.multiply(group.multiply(left, left), left)
        assert np.array_equal(group.power(left, 3), cubes)
        assert np.array_equal(group.power(left, -1), group.inverse(left))

        comms = group.commutator(left, right)
        for aa, bb, cc in zip(left, right, comms):
            assert groups.pcomm(group.from_row(aa), group.from_row(bb)) == group.from_row(cc)

    with pytest.raises(ValueError, match="Cannot broadcast"):
        group.multiply(group.identity_rows(2), group.identity_rows(3))


def test_commutator_example() -> None:
    """In S_1(3), the commutator [y, u_1] is x."""
    group = groups.PolynomialGroup.sn(3, 1, 1)
    yy, uu = group.rows([[0, 0, 1]]), group.u_rows([1])
    assert np.array_equal(group.commutator(yy, uu), group.rows([[0, 1, 0]]))
    assert groups.pcomm(group.from_row(yy[0]), group.from_row(uu[0])) == group.element(vec=[1, 0])
    assert group.row_to_json(yy[0]) == {
        "c": [0],
        "vec": {"kind": "Vn", "n": 1, "coeffs": [[0], [1]]},
    }


def test_row_orders() -> None:
    """S_1(3) has exponent 3, while S_2(3) has exponent 9."""
    small = groups.Subgroup.whole(groups.PolynomialGroup.sn(3, 1, 1))
    assert small.order == 27 and small.exponent() == 3
    large = groups.Subgroup.whole(groups.PolynomialGroup.sn(3, 1, 2))
    assert large.order == 81 and large.exponent() == 9
    orders = large.group.row_orders(large.group.rows([[0, 0, 0, 0], [0, 1, 0, 0], [1, 0, 0, 1]]))
    assert orders.tolist() == [1, 3, 9]


def test_parabolic_elements() -> None:
    """Products, inverses, orders, and membership of parabolic elements."""
    group = groups.PolynomialGroup.sn(3, 2, 2)
    zeta = int(fields.primitive_element(group.field_spec))
    identity = group.identity()
    assert identity.is_identity() and identity.in_S() and identity.in_U() and identity.in_V()

    elements = [
        group.element(aut_exp=1, scalar=zeta, mat=[[1, 2], [3, 4]], vec=[1, 2, 3]),
        group.element(scalar=2, mat=[[zeta, 0], [5, 1]], vec=[0, 7, 1]),
        group.element(aut_exp=1, mat=[[0, 1], [1, 0]], vec=[8, 0, 4]),
    ]
    for aa in elements:
        assert aa * aa.inverse() == identity == aa.inverse() * aa
        assert aa**3 == aa * aa * aa
        assert aa**-2 == (aa * aa).inverse()
        for bb in elements:
            for cc in elements:
                assert (aa * bb) * cc == aa * (bb * cc)
            assert groups.pconj(aa, bb) == bb.inverse() * aa * bb
    assert len({*elements, elements[0] * identity}) == 3

    assert groups.element_order(group.element(mat=[[zeta, 0], [0, 1]])) == 8
    assert groups.element_order(group.element(mat=[[1, 0], [1, 1]])) == 3
    assert groups.element_order(group.element(vec=[0, 1, 0])) == 3
    assert groups.element_order(group.element(aut_exp=1)) == 2
    assert groups.element_order(group.element(mat=[[1, 0], [1, 1]], vec=[0, 0, 1])) == 9

    borel = group.element(scalar=zeta, mat=[[zeta, 0], [1, 1]])
    assert borel.in_P() and borel.in_P_star() and borel.in_B() and not borel.in_Sigma()
    assert not borel.in_S() and group.element(mat=[[2, 0], [0, 1]]).in_Sigma()
    assert not elements[0].in_P() and elements[0].in_P_star()
    assert not group.element(mat=[[0, 1], [1, 0]]).in_B()
    assert group.from_row(borel.group.u_rows([4])[0]).in_U()

    assert elements[1].to_json()["vec"] == {
        "kind": "Vn",
        "n": 2,
        "coeffs": [[0, 0], [1, 2], [1, 0]],
    }
    with pytest.raises(ValueError, match="Only elements of S"):
        borel.to_row()
    with pytest.raises(ValueError, match="Cannot combine"):
        borel * groups.PolynomialGroup.slambda(3, 2).identity()
    with pytest.raises(ValueError, match="vector of length 3"):
        groups.ParabolicElement(group, borel.triple, group.field.Zeros(2))


def test_p_star_membership() -> None:
    """Frobenius parts lie in D* exactly when their exponent is a multiple of m_p."""
    group = groups.PolynomialGroup.sn(3, 3, 1)
    assert group.field_spec.p_prime_part == 1
    assert group.element().in_P_star()
    assert not group.element(aut_exp=1).in_P_star()
    assert not group.element(aut_exp=2).in_P_star()


def test_upper_central_series() -> None:
    """Upper central series terms, computed with linear algebra."""
    group = groups.PolynomialGroup.sn(3, 2, 2)
    terms = [groups.Subgroup.from_structure(group, *term) for term in group.upper_central_terms()]
    assert [term.order for term in terms] == [9, 81, 9**4]

    group = groups.PolynomialGroup.slambda(3, 2)
    terms = group.upper_central_terms()
    assert [(len(params), basis.shape[0]) for params, basis in terms] == [(1, 2), (1, 3), (9, 4)]
    assert np.array_equal(modules.row_space(terms[0][1]), group.field.Identity(4)[2:])


@pytest.mark.parametrize(
    "group",
    [
        groups.PolynomialGroup.sn(3, 1, 1),
        groups.PolynomialGroup.sn(3, 1, 2),
        groups.PolynomialGroup.sn(3, 1, 3),
        groups.PolynomialGroup.slambda(3, 1),
    ],
)
def test_structure_against_enumeration(group: groups.PolynomialGroup) -> None:
    """Linear algebra and brute force agree on the center and the derived subgroup."""
    whole = groups.Subgroup.whole(group)
    params, basis = group.upper_central_terms()[0]
    assert whole.center() == groups.Subgroup.from_structure(group, params, basis)
    derived = groups.Subgroup.from_structure(group, [0], group.lower_central_terms()[0])
    assert whole.commutator_with(whole) == derived


def test_lower_central_terms() -> None:
    """The commutator chain [V, S; i] of S_Lambda(9)."""
    group = groups.PolynomialGroup.slambda(3, 2)
    terms = group.lower_central_terms()
    assert [term.shape[0] for term in terms] == [3, 1, 0]
    assert np.array_equal(terms[0], group.field.Identity(4)[1:])
    assert np.array_equal(terms[1], group.field.Identity(4)[2:3])

    identity = group.field.Identity(4)
    assert group.commutator_space_with(identity[:1], 1).shape[0] == 1
    assert group.fixed_space([]).shape[0] == 4
    assert np.array_equal(modules.row_space(group.fixed_space(range(9))), identity[2:])


def test_closure() -> None:
    """Subgroups generated by rows."""
    group = groups.PolynomialGroup.sn(3, 2, 1)
    subgroup = groups.Subgroup(group, group.u_rows([1]), name="<u_1>")
    assert subgroup.order == 3 and len(subgroup) == 3
    assert repr(subgroup) == "Subgroup(<u_1> <= S_1(9), order=3)"
    assert group.from_row(group.u_rows([2])[0]) in subgroup
    assert group.element(aut_exp=1) not in subgroup
    assert subgroup.is_abelian()

    gens = groups.sift_generators(group, groups.Subgroup.whole(group).keys)
    assert groups.Subgroup(group, gens).order == 9**3

    with pytest.raises(ValueError, match="generators, elements, or structure"):
        groups.Subgroup(group)


def test_size_cap() -> None:
    """Enumerations beyond the size cap are refused."""
    group = groups.PolynomialGroup.sn(3, 1, 1)
    with unittest.mock.patch.dict("os.environ", {"POLYFUS_SIZE_CAP": "10"}):
        assert groups.get_size_cap() == 10
        with pytest.raises(groups.SizeCapError, match="size cap"):
            groups.Subgroup.whole(group)
        with pytest.raises(groups.SizeCapError, match="size cap"):
            groups.closure_keys(group, group.rows([[1, 0, 0], [0, 0, 1]]))
    assert groups.get_size_cap() == groups.DEFAULT_SIZE_CAP


def test_standard_subgroups() -> None:
    """Orders and relations of the standard subgroups of S_2(9)."""
    group = groups.PolynomialGroup.sn(3, 2, 2)
    subgroups = groups.standard_subgroups(group)
    orders = {name: subgroup.order for name, subgroup in subgroups.items()}
    assert orders == {
        "U": 9,
        "V": 729,
        "Z": 9,
        "Z2": 81,
        "R": 81,
        "Q": 729,
        "[V,S]": 81,
        "U[V,S]": 729,
    }
    assert subgroups["Z"] <= subgroups["R"] <= subgroups["Q"]
    assert subgroups["R"] & subgroups["V"] == subgroups["Z"]
    assert subgroups["R"].is_abelian() and not subgroups["Q"].is_abelian()

    whole = groups.Subgroup.whole(group)
    assert subgroups["Q"].is_normalized_by(whole.gens)
    assert not subgroups["U"].is_normalized_by(whole.gens)
    assert subgroups["R"].normalizer_in(whole) == subgroups["Q"]
    assert subgroups["Z"].centralizer_in(whole) == whole

    conjugate = subgroups["R"].conjugate(group.rows([[0, 0, 0, 1]]))
    assert conjugate.order == 81 and conjugate != subgroups["R"]
    assert subgroups["R"].join(subgroups["V"]) == whole

    with pytest.raises(ValueError, match="Unrecognized standard subgroup"):
        groups.standard_subgroups(group, ["W"])


def test_standard_subgroups_s1() -> None:
    """Q is undefined for S_1(q)."""
    group = groups.PolynomialGroup.sn(5, 1, 1)
    assert "Q" not in groups.standard_subgroups(group)
    with pytest.raises(ValueError, match="undefined"):
        groups.standard_subgroups(group, ["Q"])


def test_parabolic_subgroups() -> None:
    """The torus and Borel subgroups of P* normalize the standard subgroups."""
    group = groups.PolynomialGroup.slambda(3, 2)
    parabolic = groups.parabolic_subgroups(group)
    assert parabolic["Sigma&P*"].order == 2 * 8**3
    assert parabolic["B&P*"].order == 2 * 8**3 * 9
    assert all(gen.in_B() for gen in parabolic["B&P*"].gens)
    assert all(gen.in_Sigma() for gen in parabolic["Sigma&P*"].gens)

    subgroups = groups.standard_subgroups(group, ["U", "R"])
    assert parabolic["B&P*"].normalizes(subgroups["U"])
    assert parabolic["B&P*"].normalizes(subgroups["R"])
