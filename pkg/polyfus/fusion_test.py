"""Unit tests for fusion.py

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

from polyfus import fields, fusion, groups, modules

GROUPS = [
    groups.PolynomialGroup.sn(3, 2, 2),
    groups.PolynomialGroup.sn(5, 1, 3),
    groups.PolynomialGroup.slambda(3, 2),
]


def random_normalizing_elements(
    group: groups.PolynomialGroup, num: int, seed: int
) -> list[groups.ParabolicElement]:
    """Random elements of P^dagger with lower triangular matrices."""
    triples = modules.random_triples(group.field_spec, num, lower_triangular=True, seed=seed)
    vectors = fields.get_random_array(group.field_spec, (num, group.dim), seed=seed)
    return [groups.ParabolicElement(group, tt, vec) for tt, vec in zip(triples, vectors)]


def test_semilinear_maps() -> None:
    """Semilinear maps compose with the right factor twisting the left factor."""
    field = fields.field_make(3, 2).field
    zeta = fields.primitive_element(fields.field_make(3, 2))
    frob = fusion.SemilinearMap(1, field.Identity(1))
    scale = fusion.SemilinearMap(0, zeta.reshape(1, 1))
    assert (frob * scale).scalar == zeta
    assert (scale * frob).scalar == zeta**3
    assert frob.order() == 2
    assert scale.order() == 8
    assert (frob * frob).is_identity()
    assert fusion.SemilinearMap(3, field.Identity(1)) == frob
    assert frob(field([[2]])) == field([[2]]) ** 3
    assert frob.to_json() == {"autExp": 1, "matrix": [[1]]}

    with pytest.raises(ValueError, match="square matrix"):
        fusion.SemilinearMap(0, field.Zeros((1, 2)))
    with pytest.raises(ValueError, match="one-dimensional"):
        _ = fusion.SemilinearMap.identity(field, 2).scalar


@pytest.mark.parametrize("group", GROUPS, ids=str)
def test_delta_modes(group: groups.PolynomialGroup) -> None:
    """Structural and brute-force delta agree, and delta is a homomorphism."""
    elements = random_normalizing_elements(group, 20, seed=0)
    for element in elements:
        structural = fusion.delta(element)
        assert structural == fusion.delta(element, mode="bruteforce")
    for left, right in zip(elements[::2], elements[1::2]):
        assert fusion.delta(left * right) == fusion.delta(left) * fusion.delta(right)

    # elements of S act trivially on S/V and Z(S)
    for row in group.random_rows(5, seed=0):
        assert fusion.delta(group.from_row(row)).is_trivial()


def test_delta_torus() -> None:
    """(0, lambda, diag(mu, nu)) acts as mu/nu on S/V and as lambda mu^n on Z(S)."""
    group = groups.PolynomialGroup.sn(3, 2, 2)
    field = group.field
    lam, mu, nu = field(2), field(5), field(7)
    element = group.element(scalar=lam, mat=[[int(mu), 0], [0, int(nu)]])
    image = fusion.delta(element)
    assert image.pair() == ((0, int(mu / nu)), (0, int(lam * mu**2)))
    assert image.to_json()["onSmodV"] == image.on_quotient.to_json()

    frob = group.element(aut_exp=1)
    assert fusion.delta(frob).pair() == ((1, 1), (1, 1))

    # the two-dimensional centre of S_Lambda(q)
    group = groups.PolynomialGroup.slambda(3, 2)
    assert fusion.delta(group.identity()).on_centre.dim == 2

    with pytest.raises(ValueError, match="does not normalize S"):
        fusion.delta(group.element(mat=[[0, 1], [1, 0]]))
    with pytest.raises(ValueError, match="Unrecognized mode"):
        fusion.delta(group.identity(), mode="magic")  # type:ignore[arg-type]


@pytest.mark.parametrize(
    "group",
    [groups.PolynomialGroup.sn(3, 2, 1), groups.PolynomialGroup.sn(3, 2, 2)]
    + [groups.PolynomialGroup.slambda(3, 2)],
    ids=str,
)
def test_delta_kernel(group: groups.PolynomialGroup) -> None:
    """The kernel of delta on the torus of P* is the centralizer of S."""
    report = fusion.delta_kernel_check(group)
    q, m_p = group.q, group.field_spec.p_prime_part
    assert report.torus_order == m_p * (q - 1) ** 3
    assert report.trivial == report.centralizing == q - 1
    assert report.nontrivial_kernel == 0
    assert report.distinct_images == report.expected_images == m_p * (q - 1) ** 2


def test_psi_star() -> None:
    """psi* is a monomorphism N_(P*)(R) -> P*_R."""
    group = groups.PolynomialGroup.slambda(3, 2)
    report = fusion.psi_star_check(group, 100, seed=0)
    q = group.q
    assert report.homomorphism
    assert report.in_p_r_star
    assert report.injective
    assert report.torus_images == 2 * (q - 1) ** 3
    assert report.unipotent_images == q**4
    assert report.radical_images == q**3
    assert report.radical_pattern
    assert report.diagonal_example


def test_psi_star_images() -> None:
    """Explicit images of psi*, and its domain."""
    group = groups.PolynomialGroup.slambda(3, 1)
    field, p = group.field, group.p
    vec = field.Zeros(group.dim)
    vec[p], vec[p - 1], vec[p - 2] = 1, 2, 1
    image = fusion.psi_star(group.element(scalar=2, mat=[[1, 0], [1, 2]], vec=vec))
    expected = field(
        [
            [2 * 1 * 2**3 % 3, 0, 0, 2 * 2**3 % 3],
            [0, 2 * 2**2 % 3, 2 * 2**2 % 3, 2 * 2 * 2**2 % 3],
            [0, 0, 2, 1],
            [0, 0, 0, 1],
        ]
    )
    assert np.array_equal(image.matrix, expected)
    assert image.in_p_r_star()
    assert not image.is_identity()
    assert fusion.psi_star(group.identity()).is_identity()
    assert image.to_json()["mat4"] == expected.view(np.ndarray).tolist()

    outside = group.element(vec=field.Identity(group.dim)[0])
    assert not fusion.in_r_normalizer(outside)
    with pytest.raises(ValueError, match="outside the domain"):
        fusion.psi_star(outside)
    with pytest.raises(ValueError, match="outside the domain"):
        fusion.psi_star(group.element(mat=[[1, 1], [0, 1]]))
    with pytest.raises(ValueError, match="defined on P"):
        fusion.psi_star(groups.PolynomialGroup.sn(3, 1, 2).identity())
    with pytest.raises(ValueError, match="4x4"):
        fusion.PsiStarImage(0, field.Identity(3))


@pytest.mark.parametrize(
    "group, name",
    [
        (groups.PolynomialGroup.sn(3, 1, 2), "V"),
        (groups.PolynomialGroup.sn(5, 1, 3), "R"),
        (groups.PolynomialGroup.sn(5, 1, 3), "Q"),
        (groups.PolynomialGroup.slambda(3, 1), "R"),
    ],
)
def test_essential_local_data(group: groups.PolynomialGroup, name: str) -> None:
    """Normalizers, intersections with V, and centres of the candidate essential subgroups."""
    local = fusion.essential_local_data(group, name)
    assert all(local.conditions().values())
    assert local.index == group.q

    with pytest.raises(ValueError, match="Candidate essential"):
        fusion.essential_local_data(group, "U")


def test_r_intersections() -> None:
    """Conjugates of R by elements outside its normalizer meet R inside V."""
    group = groups.PolynomialGroup.slambda(3, 2)
    report = fusion.r_intersection_check(group, 20, seed=0)
    assert report.verified
    assert report.conjugates > 0
    assert report.outside == 20


def test_describe_system() -> None:
    """Descriptors of the polynomial fusion systems."""
    desc = fusion.describe_system("F*(n,q,R)", 3, 2, 2)
    assert desc.title == str(desc) == "F*(2,9,R)"
    assert desc.essentials == ("V", "R")
    assert desc.automizers == {"V": "PSL2(q)", "R": "SL2(q) on R/C"}
    assert desc.field_aut_exponents == (0, 1)
    assert not desc.pruned
    assert desc.to_json()["base"] == desc.group.to_json()

    desc = fusion.describe_system("F*(n,q,Q)", 5, 2, 3)
    assert desc.automizers == {"V": "SL2(q)", "Q": "SL2(q) on Q/Z"}

    desc = fusion.describe_system("F*_Lambda(q)_P", 3, 2)
    assert desc.title == "F*_Λ(9)_P"
    assert desc.pruned

    desc = fusion.describe_system("F_Λ(q)", 3, 2)
    assert desc.field_aut_exponents == (0,)
    assert desc.p_prime_index
    assert desc.automizers["V"] == "GL2-extension"

    with pytest.raises(ValueError, match="n >= 2"):
        fusion.describe_system("F*(n,q,Q)", 3, 2, 1)
    with pytest.raises(ValueError, match="1 <= n <= p - 1"):
        fusion.describe_system("F*(n,q,R)", 3, 2, 3)
    with pytest.raises(ValueError, match="1 <= n <= p - 1"):
        fusion.describe_system("F*(n,q,R)", 3, 2)
    with pytest.raises(ValueError, match="odd prime"):
        fusion.describe_system("F*_Λ(q)", 2, 2)
    with pytest.raises(ValueError, match="Unrecognized fusion system"):
        fusion.describe_system("F(n,q,X)", 3, 2, 1)


@pytest.mark.parametrize("p, m, n", [(3, 2, 1), (3, 2, 2), (5, 2, 1), (5, 2, 2)])
def test_out0_orders(p: int, m: int, n: int) -> None:
    """Out^0 orders generated by the lift subgroups agree with their closed forms."""
    q = p**m
    names = ["F*(n,q,R)", "F*(n,q,R)_P"] + (["F*(n,q,Q)"] if n > 1 else [])
    for name in names:
        report = fusion.out0_order(fusion.describe_system(name, p, m, n))
        assert report.order == report.expected
        if "V" in report.lifts:
            assert report.lift_orders["V"] == (q - 1) // math.gcd(n, 2)
        assert report.to_json()["order"] == report.order


def test_out0_values() -> None:
    """Explicit Out^0 orders at q = 9."""
    values = {"F*(n,q,Q)": 32, "F*(n,q,R)": 16, "F*(n,q,R)_P": 8}
    for name, value in values.items():
        assert fusion.out0_order(fusion.describe_system(name, 3, 2, 2)).order == value
    assert fusion.out0_order(fusion.describe_system("F*_Λ(q)", 3, 2)).order == 64
    assert fusion.out0_order(fusion.describe_system("F*_Λ(q)_P", 3, 2)).order == 8
    assert fusion.out0_order(fusion.describe_system("F*_Λ(q)", 5, 2)).order == 24**2

    with pytest.raises(ValueError, match="q > p"):
        fusion.out0_order(fusion.describe_system("F*(n,q,R)", 3, 1, 2))
    with pytest.raises(ValueError, match="Unsupported essential set"):
        fusion.out0_order(fusion.describe_system("F*(n,q,Q)_P", 3, 2, 2))


def test_out_orders() -> None:
    """Out_F(S) includes field automorphisms for the starred systems only."""
    report = fusion.out_order(fusion.describe_system("F*(n,q,R)", 3, 2, 2))
    assert report.order == report.expected == 2 * 8**2
    report = fusion.out_order(fusion.describe_system("F_Λ(q)", 3, 2))
    assert report.order == report.expected == 8**2


@pytest.mark.parametrize(
    "desc",
    [
        fusion.describe_system("F*(n,q,R)", 3, 2, 2),
        fusion.describe_system("F*(n,q,Q)", 5, 2, 3),
        fusion.describe_system("F*_Λ(q)", 3, 2),
    ],
    ids=str,
)
def test_te_regularity(desc: fusion.FusionSystemDescriptor) -> None:
    """Lift subgroups act regularly on (S/V)^#, and as expected on Z(S)."""
    reports = fusion.te_regularity(desc)
    essentials = [name for name in desc.essentials if name != "V"]
    assert [report.essential for report in reports] == essentials
    for report in reports:
        assert report.regular_on_quotient
        assert report.quotient_orbits == (desc.group.q - 1,)
        assert report.centre_ok


def test_frc_subgroups() -> None:
    """Classes of fully normalized, centric, and radical subgroups."""
    q = 5
    classes = fusion.frc_subgroups(fusion.describe_system("F*(n,q,R)", 5, 1, 3))
    assert [(cls.name, cls.class_size) for cls in classes] == [("S", 1), ("V", 1), ("R", q**2)]
    classes = fusion.frc_subgroups(fusion.describe_system("F*(n,q,Q)_P", 5, 1, 3))
    assert [(cls.name, cls.class_size) for cls in classes] == [("S", 1), ("Q", q)]
    assert classes[1].representative.order == q**3


@pytest.mark.parametrize(
    "desc, target",
    [
        (fusion.describe_system("F*(n,q,Q)_P", 5, 1, 3), "F*(2,5,R)_P"),
        (fusion.describe_system("F*_Λ(q)_P", 3, 1), "F*(2,3,R)_P"),
    ],
    ids=str,
)
def test_pruned_quotient(desc: fusion.FusionSystemDescriptor, target: str) -> None:
    """Quotients by the p-core of pruned systems."""
    quotient = fusion.pruned_quotient(desc)
    assert quotient.target.title == target
    assert quotient.kernel_ok
    assert quotient.image_ok
    assert quotient.quotient.is_surjective()

    with pytest.raises(ValueError, match="Quotients are defined"):
        fusion.pruned_quotient(fusion.describe_system("F*(n,q,R)", 5, 1, 3))


def test_normalizer_tower() -> None:
    """The normalizer tower of F*(n, q, R)_P consists of copies of S_i(q)."""
    desc = fusion.describe_system("F*(n,q,R)_P", 5, 1, 3)
    level = fusion.normalizer_tower(desc, 2)
    assert level.subgroup.order == 5**4
    assert level.isomorphism.target == groups.PolynomialGroup.sn(5, 1, 2)
    assert all(level.certificate(100, seed=0).values())

    level = fusion.normalizer_tower(desc, 3)
    assert level.subgroup == groups.Subgroup.whole(desc.group)
    assert all(level.certificate(100, seed=0).values())

    with pytest.raises(ValueError, match="1 < i <= n"):
        fusion.normalizer_tower(desc, 1)
    with pytest.raises(ValueError, match="defined for F"):
        fusion.normalizer_tower(fusion.describe_system("F*(n,q,R)", 5, 1, 3), 2)


def test_exclusion_solutions() -> None:
    """No exponent k solves the exclusion congruence when q > p."""
    for p in [3, 5, 7]:
        for m in [2, 3]:
            for n in range(1, p):
                assert fusion.exclusion_solutions(p, m, n) == ()
    assert fusion.exclusion_solutions(5, 1, 2) == (1,)


@pytest.mark.parametrize(
    "group",
    [groups.PolynomialGroup.sn(3, 2, 1), groups.PolynomialGroup.sn(5, 1, 2)],
    ids=str,
)
def test_essential_exclusion(group: groups.PolynomialGroup) -> None:
    """Torus witnesses of the exclusion argument."""
    report = fusion.essential_exclusion(group)
    assert report.abelian_witnesses
    assert report.nonabelian_witnesses
    assert report.criterion_consistent
    assert bool(report.solutions) == (group.m == 1 and (group.n + 2) % (group.p - 1) == 0)

    with pytest.raises(ValueError, match="Exclusion requires"):
        fusion.essential_exclusion(groups.PolynomialGroup.slambda(3, 1))
