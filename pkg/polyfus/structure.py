"""Central series, centralizers, quotient maps, and conjugacy families of polynomial p-groups

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

Most computations here come in two flavors: "structural" computations, which use linear algebra over
K inside the module V, and "bruteforce" computations, which enumerate group elements and are
limited by the size cap.  The two flavors serve as oracles for each other.
"""

from __future__ import annotations

import dataclasses
import enum
import itertools
import logging
import math
from typing import Literal

import galois
import numpy as np
import sympy.combinatorics as comb

from polyfus.fields import FieldSpec, primitive_element, subfield_degree
from polyfus.groups import (
    PolynomialGroup,
    Rows,
    SizeCapError,
    Subgroup,
    check_size,
    get_size_cap,
)
from polyfus.modules import (
    DTriple,
    ModuleSpec,
    annihilator,
    dimension,
    filtration_basis,
    left_kernel,
    module_matrices,
    module_matrix,
    row_space,
    subspace_contains,
    subspace_intersection,
    subspace_sum,
)

logger = logging.getLogger(__name__)

Mode = Literal["structural", "bruteforce"]

MAX_ORACLE_ORDER = 729


def same_space(basis_a: galois.FieldArray, basis_b: galois.FieldArray) -> bool:
    """Do two bases span the same subspace?"""
    return np.array_equal(row_space(basis_a), row_space(basis_b))


################################################################################
# central series


class SeriesKind(enum.Enum):
    """Kinds of subgroup series."""

    UPPER_CENTRAL = "upper_central"
    LOWER_CENTRAL = "lower_central"
    WEIGHT_FILTRATION = "weight_filtration"
    COMMUTATOR_CHAIN = "commutator_chain"


@dataclasses.dataclass(frozen=True)
class SeriesReport:
    """A strictly nested series of subgroups, listed in order.

    Upper central series and weight filtrations ascend, while lower central series and commutator
    chains descend.  Trivial terms are left out.
    """

    kind: SeriesKind
    terms: tuple[Subgroup, ...]

    @property
    def orders(self) -> list[int]:
        """Orders of the terms."""
        return [term.order for term in self.terms]

    def __len__(self) -> int:
        return len(self.terms)

    def to_json(self) -> dict[str, object]:
        """Serialize this series, with generators of every term."""
        return {
            "kind": self.kind.value,
            "orders": self.orders,
            "generators": [
                [term.group.row_to_json(row) for row in term.gens] for term in self.terms
            ],
        }


def central_series(
    group: PolynomialGroup,
    mode: Mode = "structural",
    kind: SeriesKind = SeriesKind.UPPER_CENTRAL,
) -> SeriesReport:
    """The upper or lower central series of S, computed structurally or by enumeration.

    The upper central series Z_1(S) < Z_2(S) < ... < S starts at the center, and the lower central
    series S > [S, S] > ... ends at its last nontrivial term.
    """
    if kind not in (SeriesKind.UPPER_CENTRAL, SeriesKind.LOWER_CENTRAL):
        raise ValueError(f"Unsupported kind of central series: {kind}")
    if mode == "structural":
        if kind is SeriesKind.UPPER_CENTRAL:
            terms = [
                Subgroup.from_structure(group, params, basis, name=f"Z_{ii + 1}")
                for ii, (params, basis) in enumerate(group.upper_central_terms())
            ]
        else:
            terms = [Subgroup.whole(group)] + [
                Subgroup.from_structure(group, [0], basis, name=f"[V,S;{ii + 1}]")
                for ii, basis in enumerate(group.lower_central_terms())
                if basis.shape[0]
            ]
        return SeriesReport(kind, tuple(terms))
    if mode != "bruteforce":
        raise ValueError(f"Unrecognized mode: {mode}")

    check_size(group.order, str(group))
    whole = Subgroup.whole(group)
    if kind is SeriesKind.LOWER_CENTRAL:
        terms = [whole]
        while (term := terms[-1].commutator_with(whole)).order > 1:
            terms.append(term)
        return SeriesReport(kind, tuple(terms))

    # Z_(i+1) = {s : [s, g] in Z_i for every generator g of S}
    elements = whole.elements
    current = Subgroup(group, keys=group.keys(group.identity_rows()))
    terms = []
    while current.order < whole.order:
        mask = np.ones(len(elements), dtype=bool)
        for gen in whole.gens:
            mask &= current.contains(group.commutator(elements, gen.reshape(1, -1)))
        current = Subgroup(group, keys=whole.keys[mask], name=f"Z_{len(terms) + 1}")
        terms.append(current)
    return SeriesReport(kind, tuple(terms))


def weight_filtration(group: PolynomialGroup) -> SeriesReport:
    """The filtration C_0 < C_1 < ... < C_n = V of V_n(q) by weight."""
    if group.is_lambda:
        raise ValueError("The weight filtration is defined for S_n(q), not S_Lambda(q)")
    terms = [
        Subgroup.from_structure(group, [0], filtration_basis(group.module, ii), name=f"C_{ii}")
        for ii in range(group.n + 1)
    ]
    return SeriesReport(SeriesKind.WEIGHT_FILTRATION, tuple(terms))


def commutator_chain(
    group: PolynomialGroup,
    depth: int | None = None,
    *,
    element: Rows | None = None,
    mode: Mode = "structural",
) -> SeriesReport:
    """The chain [V, S; i] = [V, S, ..., S] for 1 <= i <= depth, or [V, z; i] for an element z.

    The chain stops early if it reaches the trivial subgroup.
    """
    depth = group.dim if depth is None else depth
    if depth < 0:
        raise ValueError(f"Commutator chain depth must be nonnegative (provided: {depth})")
    if element is not None and not np.any(element.reshape(-1)[:1]):
        raise ValueError("Commutator chains [V, z; i] require an element z outside of V")

    terms: list[Subgroup] = []
    if mode == "structural":
        basis = group.field.Identity(group.dim)
        for ii in range(1, depth + 1):
            if element is None:
                basis = group.commutator_space(basis)
            else:
                basis = group.commutator_space_with(basis, int(element.reshape(-1)[0]))
            if not basis.shape[0]:
                break
            terms.append(Subgroup.from_structure(group, [0], basis, name=f"[V,S;{ii}]"))
        return SeriesReport(SeriesKind.COMMUTATOR_CHAIN, tuple(terms))
    if mode != "bruteforce":
        raise ValueError(f"Unrecognized mode: {mode}")

    check_size(group.order, str(group))
    acting = Subgroup.whole(group)
    if element is not None:
        acting = Subgroup(group, element.reshape(1, -1))
    term = Subgroup.from_structure(group, [0], group.field.Identity(group.dim), name="V")
    for ii in range(1, depth + 1):
        term = term.commutator_with(acting)
        if term.order == 1:
            break
        term.name = f"[V,S;{ii}]"
        terms.append(term)
    return SeriesReport(SeriesKind.COMMUTATOR_CHAIN, tuple(terms))


def commutator_order(group: PolynomialGroup, row: Rows) -> int:
    """Order of the subgroup [z, S] generated by all commutators [z, s] with s in S.

    For z = u_c v, this subgroup lies in V and is spanned over GF(p) by the vectors v(u_b - 1) for b
    in K, together with V(u_c - 1), which is already closed under the action of S.
    """
    row = row.reshape(-1)
    identity = group.field.Identity(group.dim)
    vectors = [row[1:] @ (group.unipotent(bb) - identity) for bb in range(group.q)]
    if row[0] != 0:
        block = identity @ (group.unipotent(int(row[0])) - identity)
        vectors.extend(beta * block_row for beta in group.field_basis for block_row in block)
    prime_coords = group.field(np.array(vectors)).vector().reshape(len(vectors), -1)
    if not np.any(prime_coords):
        return 1
    return group.p ** int(np.linalg.matrix_rank(prime_coords))


################################################################################
# maps between polynomial p-groups


@dataclasses.dataclass(frozen=True)
class GroupMap:
    """A map (c, v) -> (c, v @ matrix) from a subgroup U x| W of one polynomial p-group to another.

    Here W is the K-subspace of the source module spanned by the rows of the domain basis.
    """

    name: str
    source: PolynomialGroup
    target: PolynomialGroup
    matrix: galois.FieldArray
    domain: galois.FieldArray

    def __post_init__(self) -> None:
        if self.matrix.shape != (self.source.dim, self.target.dim):
            raise ValueError(f"Map matrix must have shape {(self.source.dim, self.target.dim)}")
        if self.source.field_spec != self.target.field_spec:
            raise ValueError("Maps must preserve the underlying field")

    def domain_subgroup(self) -> Subgroup:
        """The domain U x| W of this map."""
        return Subgroup.from_structure(self.source, list(range(self.source.q)), self.domain)

    def in_domain(self, rows: Rows) -> np.ndarray:
        """Which rows lie in the domain of this map?"""
        constraints = annihilator(self.domain, self.source.dim)
        if not constraints.shape[0]:
            return np.ones(len(rows), dtype=bool)
        return ~np.any(rows[:, 1:] @ constraints.T != 0, axis=1)

    def __call__(self, rows: Rows) -> Rows:
        rows = rows.reshape(-1, self.source.dim + 1)
        if not np.all(self.in_domain(rows)):
            raise ValueError(f"Elements outside the domain of the map {self.name}")
        images = self.target.identity_rows(len(rows))
        images[:, 0] = rows[:, 0]
        images[:, 1:] = rows[:, 1:] @ self.matrix
        return images

    def compose(self, other: GroupMap) -> GroupMap:
        """The composite map: first this one, then another."""
        if self.target != other.source:
            raise ValueError(f"Cannot compose {self.name} with {other.name}")
        image = self.domain @ self.matrix
        if image.shape[0] and not subspace_contains(other.domain, image):
            raise ValueError(f"The image of {self.name} is not in the domain of {other.name}")
        matrix = self.matrix @ other.matrix
        name = f"{other.name} o {self.name}"
        return GroupMap(name, self.source, other.target, matrix, self.domain)

    def kernel(self) -> Subgroup:
        """The kernel, which lies in V."""
        basis = subspace_intersection(self.domain, left_kernel(self.matrix))
        return Subgroup.from_structure(self.source, [0], basis, name=f"ker({self.name})")

    def image_order(self) -> int:
        """Order of the image."""
        rank = dimension(self.domain @ self.matrix) if self.domain.shape[0] else 0
        return self.source.q ** (rank + 1)

    def is_surjective(self) -> bool:
        """Is this map onto its target?"""
        return self.image_order() == self.target.order

    def is_injective(self) -> bool:
        """Is this map one-to-one?"""
        return self.kernel().order == 1

    def random_domain_rows(self, num: int, *, seed: int | None = None) -> Rows:
        """Uniformly random elements of the domain."""
        rows = self.source.random_rows(num, seed=seed)
        coefficients = rows[:, 1 : self.domain.shape[0] + 1]
        rows[:, 1:] = coefficients @ self.domain
        return rows

    def check_homomorphism(self, num_pairs: int = 500, *, seed: int | None = None) -> bool:
        """Check f(ab) = f(a) f(b) on all pairs of generators of the domain and on random pairs."""
        gens = self.domain_subgroup().gens
        index_a, index_b = np.meshgrid(range(len(gens)), range(len(gens)))
        samples = self.random_domain_rows(2 * num_pairs, seed=seed)
        left = type(gens)(np.concatenate([gens[index_a.ravel()], samples[:num_pairs]]))
        right = type(gens)(np.concatenate([gens[index_b.ravel()], samples[num_pairs:]]))
        images = self(self.source.multiply(left, right))
        return bool(np.array_equal(images, self.target.multiply(self(left), self(right))))


def gamma_quotient(group: PolynomialGroup) -> GroupMap:
    """The surjection S_n(q) -> S_(n-1)(q) that differentiates with respect to y.

    It sends (c, sum_i a_i x^(n-i) y^i) to (c, sum_i i a_i x^(n-i) y^(i-1)), with kernel Z(S).
    """
    if group.is_lambda or not 2 <= group.n <= group.p - 1:
        raise ValueError(f"The map gamma requires S_n(q) with 2 <= n <= p - 1 (provided: {group})")
    target = PolynomialGroup.sn(group.p, group.m, group.n - 1)
    matrix = group.field.Zeros((group.dim, target.dim))
    for ii in range(1, group.dim):
        matrix[ii, ii - 1] = ii
    return GroupMap("gamma", group, target, matrix, group.field.Identity(group.dim))


def lambda_quotient(group: PolynomialGroup) -> GroupMap:
    """The surjection S_Lambda(q) -> S_(p-1)(q) with kernel <bar(y^p)>.

    Coordinates 0 <= i < p of Lambda(q) map to the coordinates p - 1 - i of V_(p-1)(q).
    """
    if not group.is_lambda:
        raise ValueError(f"The Lambda quotient requires S_Lambda(q) (provided: {group})")
    target = PolynomialGroup.sn(group.p, group.m, group.p - 1)
    matrix = group.field.Zeros((group.dim, target.dim))
    for ii in range(group.p):
        matrix[ii, group.p - 1 - ii] = 1
    return GroupMap("lambda", group, target, matrix, group.field.Identity(group.dim))


def subgroup_similarity(group: PolynomialGroup, index: int) -> GroupMap:
    """The isomorphism [V, S; i] U = C_(n-i) U -> S_(n-i)(q), which truncates coefficients."""
    if group.is_lambda or not 0 <= index <= group.n - 1:
        raise ValueError(
            f"Subgroup similarity requires S_n(q) and 0 <= i <= n - 1 (provided: {group}, {index})"
        )
    target = PolynomialGroup.sn(group.p, group.m, group.n - index)
    matrix = group.field.Identity(group.dim)[:, : target.dim]
    domain = filtration_basis(group.module, group.n - index)
    return GroupMap(f"similarity_{index}", group, target, matrix, domain)


################################################################################
# centralizers


def centralizer(
    subgroup: Subgroup, by: Rows | Subgroup, *, mode: Mode = "structural"
) -> Subgroup:
    """Elements of a subgroup that commute with some rows, or with another subgroup.

    Subgroups of V with known structure are handled with linear algebra: an element v of V commutes
    with u_c w if and only if v is fixed by u_c.
    """
    group = subgroup.group
    rows = by.gens if isinstance(by, Subgroup) else by.reshape(-1, group.dim + 1)
    structure = subgroup.structure
    if mode == "structural" and structure is not None and structure[0] == [0]:
        params = sorted({int(cc) for cc in rows[:, 0]})
        basis = subspace_intersection(structure[1], group.fixed_space(params))
        return Subgroup.from_structure(group, [0], basis)
    if mode not in ("structural", "bruteforce"):
        raise ValueError(f"Unrecognized mode: {mode}")
    elements = subgroup.elements
    mask = np.ones(len(elements), dtype=bool)
    for row in rows:
        mask &= group.is_identity(group.commutator(elements, row.reshape(1, -1)))
    return Subgroup(group, keys=subgroup.keys[mask])


def module_centralizer(group: PolynomialGroup, param: int) -> Subgroup:
    """The centralizer C_V(z) of an element z = u_c v."""
    return Subgroup.from_structure(group, [0], group.fixed_space([param]), name="C_V(z)")


def gamma_centralizer(field_spec: FieldSpec, n: int, *, bruteforce: bool = False) -> list[DTriple]:
    """The triples (0, a^-n, a I) in K^* x GL_2(K) that act trivially on V_n(q).

    With bruteforce=True, the centralizer is found by scanning all of K^* x GL_2(K).  Triples with
    a nontrivial Frobenius part act nonlinearly on V, so they never centralize it.
    """
    field = field_spec.field
    spec = ModuleSpec.vn(field_spec, n)
    if not bruteforce:
        return [
            DTriple(0, field(aa) ** -n, field(aa) * field.Identity(2))
            for aa in range(1, field_spec.q)
        ]
    check_size((field_spec.q - 1) * field_spec.q**4, "K^* x GL_2(K)")
    mats = _all_matrices(field_spec)
    mats = mats[_determinants(mats) != 0]
    triples = []
    for scalar in range(1, field_spec.q):
        matrices = module_matrices(spec, field.Ones(len(mats)) * field(scalar), mats)
        fixed = np.all(matrices == field.Identity(spec.dim), axis=(1, 2))
        triples.extend(DTriple(0, field(scalar), mat) for mat in mats[fixed])
    return sorted(triples, key=lambda triple: (int(triple.mat[0, 0]), int(triple.scalar)))


def _all_matrices(field_spec: FieldSpec) -> galois.FieldArray:
    check_size(field_spec.q**4, "2x2 matrices")
    entries = np.array(list(itertools.product(range(field_spec.q), repeat=4)), dtype=int)
    return field_spec.field(entries.reshape(-1, 2, 2))


def _determinants(mats: galois.FieldArray) -> galois.FieldArray:
    return mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]


def special_linear_group(field_spec: FieldSpec) -> galois.FieldArray:
    """All matrices in SL_2(K), as an array of shape (q^3 - q, 2, 2)."""
    mats = _all_matrices(field_spec)
    return mats[_determinants(mats) == 1]


def cents_lemma_count(field_spec: FieldSpec, n: int) -> int:
    """Order of C_X(C_V(T)) for X = SL_2(q) acting on V = V_n(q), with T a Sylow p-subgroup of X.

    Here T is the lower unitriangular group U, whose fixed points in V_n(q) are <x^n>.
    """
    group = PolynomialGroup.sn(field_spec.p, field_spec.m, n)
    fixed = group.fixed_space(range(group.q))
    mats = special_linear_group(field_spec)
    matrices = module_matrices(group.module, group.field.Ones(len(mats)), mats)
    return sum(np.array_equal(fixed @ matrix, fixed) for matrix in matrices)


@dataclasses.dataclass(frozen=True)
class CentreAction:
    """The scalars by which a group of module automorphisms acts on a one-dimensional subspace."""

    scalars: tuple[int, ...]
    expected_order: int
    irreducible: bool

    @property
    def order(self) -> int:
        """Number of distinct scalars."""
        return len(self.scalars)

    @property
    def trivial(self) -> bool:
        """Is the action trivial?"""
        return self.scalars == (1,)


def action_on_centre(group: PolynomialGroup) -> CentreAction:
    """Action of L_0 = C_L(V/[V, S]) on C_V(S) = <x^n>, for L the automizer of S in P*.

    Modulo C_D*(V), the group L_0 is represented by the triples (0, 1, [[a, 0], [c, 1]]), which
    act on x^n as multiplication by a^n.  The action is irreducible over GF(p) if and only if these
    scalars generate K.
    """
    if group.is_lambda or not 1 <= group.n <= group.p - 1:
        raise ValueError(f"Action on the centre requires S_n(q), 1 <= n <= p - 1 (given: {group})")
    field = group.field
    derived = group.lower_central_terms()[0]
    scalars = set()
    for alpha in range(1, group.q):
        matrix = module_matrix(group.module, DTriple(0, field(1), field([[alpha, 0], [0, 1]])))
        top = field.Identity(group.dim)[-1:]
        if not subspace_contains(derived, top @ matrix - top):
            raise ValueError("Representative does not centralize V/[V,S]")  # pragma: no cover
        scalars.add(int(matrix[0, 0]))
    values = tuple(sorted(scalars))
    irreducible = subfield_degree(field(list(values))) == group.m
    expected = (group.q - 1) // math.gcd(group.q - 1, group.n)
    return CentreAction(values, expected, irreducible)


@dataclasses.dataclass(frozen=True)
class LambdaCentreAction:
    """Fixed points of the cyclic groups K_1 and K_2 acting on Lambda(q)."""

    orders: tuple[int, int]
    fixed_orders: tuple[int, int]
    centralizes_targets: tuple[bool, bool]


def action_on_centre_lambda(group: PolynomialGroup) -> LambdaCentreAction:
    """Cyclic p'-subgroups K_1, K_2 of the automizer of S_Lambda(q) and their fixed points in V.

    K_1 is generated by (0, z^-1, diag(z, 1)) and centralizes C_[V,S,S](S) = <bar(xy^(p-1))>, while
    K_2 is generated by (0, 1, diag(z, 1)) and centralizes C_V(S)[V,S,S]/[V,S,S].  Here z is a
    primitive element of K.
    """
    if not group.is_lambda:
        raise ValueError(f"Expected S_Lambda(q) (provided: {group})")
    field = group.field
    zeta = primitive_element(group.field_spec)
    identity = field.Identity(group.dim)
    terms = group.lower_central_terms()
    centre = group.fixed_space(range(group.q))
    target_1 = subspace_intersection(terms[1], centre)
    generators = [
        DTriple(0, zeta**-1, field([[int(zeta), 0], [0, 1]])),
        DTriple(0, field(1), field([[int(zeta), 0], [0, 1]])),
    ]
    matrices = [module_matrix(group.module, gen) for gen in generators]
    fixed = [left_kernel(matrix - identity) for matrix in matrices]
    centralizes_1 = not np.any(target_1 @ matrices[0] - target_1)
    centralizes_2 = subspace_contains(terms[1], centre @ matrices[1] - centre)
    orders = (group.q - 1, group.q - 1)
    fixed_orders = (group.q ** dimension(fixed[0]), group.q ** dimension(fixed[1]))
    return LambdaCentreAction(orders, fixed_orders, (centralizes_1, bool(centralizes_2)))


################################################################################
# the families B(S) and C(S)


def _family_order_exponent(group: PolynomialGroup) -> int:
    return 1 if group.is_lambda else 0


def covers_quotient(subgroup: Subgroup) -> bool:
    """Is S = AV for this subgroup A?"""
    params = np.unique(subgroup.elements[:, 0].view(np.ndarray))
    return len(params) == subgroup.group.q


def in_b_family(subgroup: Subgroup) -> bool:
    """Is this subgroup in B(S): elementary abelian of order q^2 d with S = AV?"""
    group = subgroup.group
    return (
        subgroup.order == group.q ** (2 + _family_order_exponent(group))
        and subgroup.is_abelian()
        and subgroup.exponent() == group.p
        and covers_quotient(subgroup)
    )


def in_c_family(subgroup: Subgroup) -> bool:
    """Is this subgroup in C(S): of class 2, exponent p, and order q^3 d with S = AV?"""
    group = subgroup.group
    if subgroup.order != group.q ** (3 + _family_order_exponent(group)) or subgroup.is_abelian():
        return False
    derived = subgroup.commutator_with(subgroup)
    return (
        derived <= subgroup.center()
        and subgroup.exponent() == group.p
        and covers_quotient(subgroup)
    )


def s_conjugates(subgroup: Subgroup) -> list[Subgroup]:
    """The distinct S-conjugates of a subgroup, one per right coset of its normalizer."""
    group = subgroup.group
    whole = Subgroup.whole(group)
    normalizer = subgroup.normalizer_in(whole).elements
    remaining = whole.keys
    conjugates = []
    while len(remaining):
        rep = group.decode(remaining[:1])
        conjugates.append(subgroup.conjugate(rep))
        coset = group.keys(group.multiply(normalizer, rep))
        remaining = np.setdiff1d(remaining, coset, assume_unique=True)
    logger.debug(f"Found {len(conjugates)} conjugates of a subgroup of {group}")
    return conjugates


@dataclasses.dataclass
class BCFamily:
    """A representative A in {R, Q} of the family B(S) or C(S), and its S-conjugacy class."""

    name: str
    subgroup: Subgroup
    level: int
    normalizer: Subgroup
    expected_normalizer: Subgroup
    conjugates: list[Subgroup]
    expected_conjugates: int
    centre_term: Subgroup
    derived_product: Subgroup
    derived: Subgroup

    def member(self) -> bool:
        """Is the representative in its family?"""
        return in_b_family(self.subgroup) if self.level == 1 else in_c_family(self.subgroup)

    def intersections_ok(self) -> bool:
        """Do distinct conjugates intersect in Z_a(S)?"""
        return all(
            aa & bb == self.centre_term for aa, bb in itertools.combinations(self.conjugates, 2)
        )

    def s_conjugacy_ok(self) -> bool:
        """Is every element of A[V,S] outside [V,S] conjugate into A?"""
        hit = np.unique(np.concatenate([conj.keys for conj in self.conjugates]))
        targets = np.setdiff1d(self.derived_product.keys, self.derived.keys, assume_unique=True)
        return bool(np.all(np.isin(targets, hit)))

    def products_ok(self) -> bool:
        """Do all conjugates A' of A satisfy A'[V,S] = A[V,S]?"""
        return all(conj <= self.derived_product for conj in self.conjugates)


def bc_families(group: PolynomialGroup, name: Literal["R", "Q"] = "R") -> BCFamily:
    """The subgroup A = R or Q, its normalizer N_S(A) = AZ_(a+1)(S), and its S-conjugates.

    Here a = 1 for R = UZ(S) and a = 2 for Q = UZ_2(S).  There are q^(n - a - d) conjugates, where
    n = p for S_Lambda(q), and d = 1 for S_Lambda(q) and d = 0 for S_n(q).
    """
    if name not in ("R", "Q"):
        raise ValueError(f"Families are represented by R or Q (provided: {name})")
    level = 1 if name == "R" else 2
    if name == "Q" and not group.is_lambda and group.n == 1:
        raise ValueError("The subgroup Q = UZ_2(S) is undefined for S_1(q)")
    check_size(group.order, str(group))
    upper = group.upper_central_terms()
    everything = list(range(group.q))
    subgroup = Subgroup.from_structure(group, everything, upper[level - 1][1], name=name)
    expected_normalizer = Subgroup.from_structure(group, everything, upper[level][1])
    derived_basis = group.lower_central_terms()[0]
    derived = Subgroup.from_structure(group, [0], derived_basis, name="[V,S]")
    derived_product = Subgroup.from_structure(
        group, everything, subspace_sum(upper[level - 1][1], derived_basis)
    )
    centre_term = Subgroup.from_structure(group, *upper[level - 1])
    exponent = group.n - level - _family_order_exponent(group)
    return BCFamily(
        name=name,
        subgroup=subgroup,
        level=level,
        normalizer=subgroup.normalizer_in(Subgroup.whole(group)),
        expected_normalizer=expected_normalizer,
        conjugates=s_conjugates(subgroup),
        expected_conjugates=group.q ** max(exponent, 0),
        centre_term=centre_term,
        derived_product=derived_product,
        derived=derived,
    )


################################################################################
# characteristic subgroups of S_Lambda(q)


def char_subgroup_ulvs(group: PolynomialGroup) -> tuple[Subgroup, dict[str, int]]:
    """The subgroup U[V, S] of S_Lambda(q), with a certificate of its uniqueness.

    The certificate lists the exponents of the q + 1 normal subgroups of index q that contain [V, S]
    and correspond to K-lines in S/[V, S] = K + V/[V, S].  These are V and the subgroups
    H_k = <u_c bar(c k x^p) : c in K>[V, S] for k in K, with H_0 = U[V, S].  Only V and U[V, S]
    should have exponent p.
    """
    if not group.is_lambda:
        raise ValueError(f"Expected S_Lambda(q) (provided: {group})")
    derived = group.lower_central_terms()[0]
    derived_rows = group.v_rows(
        group.field(np.concatenate([beta * derived for beta in group.field_basis]))
    )
    whole = Subgroup.whole(group)
    module = Subgroup.from_structure(group, [0], group.field.Identity(group.dim), name="V")
    exponents = {"V": module.exponent()}
    candidates = {}
    for kappa in range(group.q):
        twisted = group.identity_rows(group.m)
        twisted[:, 0] = group.field_basis
        twisted[:, 1] = group.field_basis * group.field(kappa)
        gens = type(twisted)(np.concatenate([twisted, derived_rows]))
        name = "U[V,S]" if kappa == 0 else f"H_{kappa}"
        candidate = Subgroup(group, gens, name=name)
        if candidate.order * group.q != group.order or not candidate.is_normalized_by(whole.gens):
            raise ValueError(f"{name} is not a normal subgroup of index q")  # pragma: no cover
        exponents[name] = candidate.exponent()
        candidates[name] = candidate
    return candidates["U[V,S]"], exponents


################################################################################
# unipotent actions


def jordan_profile(matrix: galois.FieldArray, *, degree: int = 1) -> list[int]:
    """Sizes of the Jordan blocks of a unipotent matrix of order p, in decreasing order.

    Block sizes are read off from the ranks of the powers (t - 1)^i.  Over a field of degree m over
    GF(p), each block over K splits into m blocks over GF(p), which can be requested with degree=m.
    """
    field = type(matrix)
    dim = matrix.shape[0]
    nilpotent = matrix - field.Identity(dim)
    power = field.Identity(dim)
    ranks = [dim]
    for _ in range(field.characteristic):
        power = power @ nilpotent
        ranks.append(int(np.linalg.matrix_rank(power)) if np.any(power) else 0)
    if ranks[-1]:
        raise ValueError("Jordan profiles require a unipotent matrix of order p")
    at_least = [ranks[kk - 1] - ranks[kk] for kk in range(1, len(ranks))] + [0]
    sizes = []
    for size in range(len(at_least) - 1, 0, -1):
        sizes.extend([size] * (at_least[size - 1] - at_least[size]) * degree)
    return sizes


################################################################################
# permutation-group oracle


@dataclasses.dataclass(frozen=True)
class OracleReport:
    """Invariants of S computed by SymPy from its regular permutation representation."""

    order: int
    center_order: int
    lower_central_orders: tuple[int, ...]
    is_nilpotent: bool


def permutation_oracle(group: PolynomialGroup) -> OracleReport:
    """Compute invariants of a small group S independently, with a SymPy PermutationGroup.

    Each generator g of S becomes the permutation s -> sg of the (sorted) elements of S.
    """
    if group.order > min(MAX_ORACLE_ORDER, get_size_cap()):
        raise SizeCapError(f"{group} is too large for the permutation-group oracle")
    whole = Subgroup.whole(group)
    keys, elements = whole.keys, whole.elements
    perms = [
        comb.Permutation(
            np.searchsorted(keys, group.keys(group.multiply(elements, gen.reshape(1, -1)))).tolist()
        )
        for gen in whole.gens
    ]
    perm_group = comb.PermutationGroup(perms)
    return OracleReport(
        order=int(perm_group.order()),
        center_order=int(perm_group.center().order()),
        lower_central_orders=tuple(int(term.order()) for term in perm_group.lower_central_series()),
        is_nilpotent=bool(perm_group.is_nilpotent),
    )
