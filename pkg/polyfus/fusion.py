"""Fusion-system data on polynomial p-groups: the map delta, the monomorphism psi*, and descriptors

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

Fusion systems are not constructed here.  Instead, a FusionSystemDescriptor names the essential
subgroups of a polynomial fusion system, and the automizer data that can be realized inside the
parabolic group P* is computed explicitly:
- delta sends an element of P* that normalizes S to its actions on S/V and Z(S),
- the lift subgroups K_E of the essential subgroups E live in the torus of P*, and their images
  under delta determine Out^0_F(S),
- psi* embeds N_(P*)(R) into the group P*_R of semilinear 4x4 matrices, for S = S_Lambda(q).

Semilinear maps x -> Frob^k(x) @ M compose with the same convention as triples in P*: the right
factor twists the left factor, so that (k, M) * (l, N) = (k + l, Frob^l(M) @ N).
"""

from __future__ import annotations

import dataclasses
import functools
import itertools
import logging
import math
from collections.abc import Iterable, Mapping

import galois
import networkx as nx
import numpy as np
import numpy.typing as npt

from polyfus.fields import frobenius, get_scrambled_seed, primitive_element
from polyfus.groups import (
    ParabolicElement,
    PolynomialGroup,
    Subgroup,
    check_size,
    parabolic_subgroups,
    pconj,
    standard_subgroups,
)
from polyfus.modules import module_matrices, module_matrix
from polyfus.structure import (
    GroupMap,
    Mode,
    gamma_quotient,
    in_b_family,
    in_c_family,
    lambda_quotient,
    s_conjugates,
    same_space,
    subgroup_similarity,
)

logger = logging.getLogger(__name__)


################################################################################
# semilinear maps and the map delta


@dataclasses.dataclass(frozen=True, eq=False)
class SemilinearMap:
    """A semilinear map x -> Frob^aut_exp(x) @ matrix of row vectors over K."""

    aut_exp: int
    matrix: galois.FieldArray

    def __post_init__(self) -> None:
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise ValueError(f"Semilinear maps need a square matrix (shape: {self.matrix.shape})")
        object.__setattr__(self, "aut_exp", self.aut_exp % type(self.matrix).degree)

    @staticmethod
    def identity(field: type[galois.FieldArray], dim: int) -> SemilinearMap:
        """The identity map of K^dim."""
        return SemilinearMap(0, field.Identity(dim))

    @property
    def dim(self) -> int:
        """Dimension of the underlying space."""
        return self.matrix.shape[0]

    @property
    def scalar(self) -> galois.FieldArray:
        """The scalar of a map of a one-dimensional space."""
        if self.dim != 1:
            raise ValueError(f"Only one-dimensional maps have a scalar (dimension: {self.dim})")
        return self.matrix[0, 0]

    def __call__(self, vectors: galois.FieldArray) -> galois.FieldArray:
        return frobenius(vectors, self.aut_exp) @ self.matrix

    def __mul__(self, other: SemilinearMap) -> SemilinearMap:
        matrix = frobenius(self.matrix, other.aut_exp) @ other.matrix
        return SemilinearMap(self.aut_exp + other.aut_exp, matrix)

    def is_identity(self) -> bool:
        """Is this the identity map?"""
        field = type(self.matrix)
        return self.aut_exp == 0 and np.array_equal(self.matrix, field.Identity(self.dim))

    def order(self) -> int:
        """Order of this map in the group of semilinear maps."""
        power, order = self, 1
        while not power.is_identity():
            power, order = power * self, order + 1
        return order

    def key(self) -> tuple[int, ...]:
        """A hashable key that identifies this map."""
        return (self.aut_exp, *(int(entry) for entry in self.matrix.ravel()))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SemilinearMap) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def to_json(self) -> dict[str, object]:
        """Serialize this map, with matrix entries as integers."""
        return {"autExp": self.aut_exp, "matrix": self.matrix.view(np.ndarray).tolist()}


@dataclasses.dataclass(frozen=True, eq=False)
class DeltaImage:
    """The actions of an automorphism of S on S/V and on Z(S).

    For S_n(q) both actions are one-dimensional and correspond to elements of
    Gamma_1(K) = Aut(K) x| K^*.  For S_Lambda(q), the centre Z(S) is two-dimensional.
    """

    on_quotient: SemilinearMap
    on_centre: SemilinearMap

    @staticmethod
    def identity(group: PolynomialGroup) -> DeltaImage:
        """The image of the identity."""
        dim = centre_basis(group).shape[0]
        return DeltaImage(
            SemilinearMap.identity(group.field, 1), SemilinearMap.identity(group.field, dim)
        )

    def __mul__(self, other: DeltaImage) -> DeltaImage:
        return DeltaImage(self.on_quotient * other.on_quotient, self.on_centre * other.on_centre)

    def is_trivial(self) -> bool:
        """Does the automorphism act trivially on both S/V and Z(S)?"""
        return self.on_quotient.is_identity() and self.on_centre.is_identity()

    def order(self) -> int:
        """Order of this image."""
        return math.lcm(self.on_quotient.order(), self.on_centre.order())

    def pair(self) -> tuple[tuple[int, int], tuple[int, int]]:
        """The pairs ((k, scalar), (k, scalar)) of one-dimensional actions."""
        quotient, centre = self.on_quotient, self.on_centre
        return (
            (quotient.aut_exp, int(quotient.scalar)),
            (centre.aut_exp, int(centre.scalar)),
        )

    def key(self) -> tuple[int, ...]:
        """A hashable key that identifies this image."""
        return self.on_quotient.key() + self.on_centre.key()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DeltaImage) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def to_json(self) -> dict[str, object]:
        """Serialize this image."""
        return {"onSmodV": self.on_quotient.to_json(), "onZ": self.on_centre.to_json()}


@functools.cache
def centre_basis(group: PolynomialGroup) -> galois.FieldArray:
    """Reduced basis of Z(S), which lies in V."""
    basis = group.upper_central_terms()[0][1]
    basis.setflags(write=False)
    return basis


def _pivots(basis: galois.FieldArray) -> list[int]:
    return [int(np.flatnonzero(row)[0]) for row in basis]


def delta(element: ParabolicElement, *, mode: Mode = "structural") -> DeltaImage:
    """The actions on S/V and Z(S) of conjugation by an element t of P^dagger that normalizes S.

    Conjugation by t = (phi, theta, [[a, 0], [c, b]], w) sends u_x to an element of u_y V with
    y = Frob^phi(x) a / b, and sends a vector v in V to Frob^phi(v) times the matrix of t on V.  In
    bruteforce mode, these actions are instead read off from conjugates computed in P^dagger.
    """
    group = element.group
    if not element.is_lower_triangular():
        raise ValueError("The element does not normalize S (its matrix is not lower triangular)")
    centre = centre_basis(group)
    if mode == "structural":
        quotient = element.mat[0, 0] / element.mat[1, 1]
        images = frobenius(centre, element.aut_exp) @ module_matrix(group.module, element.triple)
    elif mode == "bruteforce":
        conj = pconj(group.from_row(group.u_rows([1])[0]), element)
        quotient = conj.mat[1, 0]
        conjugates = [pconj(group.element(vec=vec), element).vec for vec in centre]
        images = group.field(np.stack(conjugates))
    else:
        raise ValueError(f"Unrecognized mode: {mode}")
    return DeltaImage(
        SemilinearMap(element.aut_exp, quotient.reshape(1, 1)),
        SemilinearMap(element.aut_exp, images[:, _pivots(centre)]),
    )


def torus_aut_exps(group: PolynomialGroup) -> list[int]:
    """Frobenius exponents of the field automorphisms in O^p(Aut(K))."""
    step = group.m // group.field_spec.p_prime_part
    return list(range(0, group.m, step))


@dataclasses.dataclass(frozen=True)
class DeltaKernelReport:
    """Counts from a scan of delta over the torus (phi, lambda, diag(mu, nu)) of P*."""

    torus_order: int
    trivial: int
    centralizing: int
    nontrivial_kernel: int
    distinct_images: int

    @property
    def expected_images(self) -> int:
        """Number of images if the kernel of delta on the torus is exactly C_D*(V)."""
        return self.torus_order // max(self.centralizing, 1)


def delta_kernel_check(group: PolynomialGroup) -> DeltaKernelReport:
    """Check that every torus element of P* with trivial delta-image centralizes S.

    The torus has (q - 1)^3 m_p' elements, all of p'-order.  An element centralizes S if and only
    if it acts trivially on V and on U.
    """
    field, q = group.field, group.q
    aut_exps = torus_aut_exps(group)
    check_size(len(aut_exps) * (q - 1) ** 3, f"the torus of P* for {group}")
    units = np.array(list(itertools.product(range(1, q), repeat=3)), dtype=int)
    scalars, mus, nus = (field(column) for column in units.T)
    mats = field.Zeros((len(units), 2, 2))
    mats[:, 0, 0], mats[:, 1, 1] = mus, nus
    matrices = module_matrices(group.module, scalars, mats)
    quotients = (mus / nus).view(np.ndarray)
    fixes_v = np.all(matrices == field.Identity(group.dim), axis=(1, 2))
    centre = centre_basis(group)
    pivots = _pivots(centre)
    trivial = centralizing = bad = 0
    keys = []
    identity = np.eye(len(pivots), dtype=int)
    for aut_exp in aut_exps:
        centre_maps = _centre_blocks(frobenius(centre, aut_exp), matrices, pivots)
        fixes_centre = np.all(centre_maps == identity, axis=(1, 2))
        is_trivial = (aut_exp == 0) & (quotients == 1) & fixes_centre
        centralizes = (aut_exp == 0) & fixes_v & (quotients == 1)
        trivial += int(np.sum(is_trivial))
        centralizing += int(np.sum(centralizes))
        bad += int(np.sum(is_trivial & ~centralizes))
        keys.append(
            np.column_stack(
                [np.full(len(units), aut_exp), quotients, centre_maps.reshape(len(units), -1)]
            )
        )
    distinct = len(np.unique(np.concatenate(keys), axis=0))
    logger.info(f"delta scan of {group}: {trivial} trivial images, {distinct} distinct images")
    return DeltaKernelReport(len(aut_exps) * len(units), trivial, centralizing, bad, distinct)


def _centre_blocks(
    basis: galois.FieldArray, matrices: galois.FieldArray, pivots: list[int]
) -> npt.NDArray[np.int_]:
    """Integer matrices of a batch of module matrices restricted to the span of a basis."""
    field = type(basis)
    blocks = []
    for row in basis:
        block = field.Zeros((len(matrices), len(pivots)))
        for jj in np.flatnonzero(row):
            block += row[jj] * matrices[:, jj][:, pivots]
        blocks.append(block.view(np.ndarray))
    return np.stack(blocks, axis=1)


################################################################################
# the monomorphism psi*


PSI_STAR_ZEROS = ((0, 1), (0, 2), (1, 0), (2, 0), (3, 0), (3, 1), (3, 2))


@dataclasses.dataclass(frozen=True, eq=False)
class PsiStarImage:
    """An element (phi, M) of GammaL_4(q), with the same product rule as semilinear maps."""

    aut_exp: int
    matrix: galois.FieldArray

    def __post_init__(self) -> None:
        if self.matrix.shape != (4, 4):
            raise ValueError(f"Elements of GammaL_4(q) need a 4x4 matrix ({self.matrix.shape})")
        object.__setattr__(self, "aut_exp", self.aut_exp % type(self.matrix).degree)

    def __mul__(self, other: PsiStarImage) -> PsiStarImage:
        matrix = frobenius(self.matrix, other.aut_exp) @ other.matrix
        return PsiStarImage(self.aut_exp + other.aut_exp, matrix)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PsiStarImage)
            and self.aut_exp == other.aut_exp
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self) -> int:
        return hash((self.aut_exp, self.matrix.tobytes()))

    def is_identity(self) -> bool:
        """Is this the identity?"""
        return self.aut_exp == 0 and np.array_equal(self.matrix, type(self.matrix).Identity(4))

    def in_p_r_star(self) -> bool:
        """Does this element have the zero pattern of P*_R and x_1 (x_3 x_7 - x_4 x_6) x_9 != 0?"""
        mat = self.matrix
        if any(mat[entry] != 0 for entry in PSI_STAR_ZEROS):
            return False
        block = mat[1, 1] * mat[2, 2] - mat[1, 2] * mat[2, 1]
        return bool(mat[0, 0] * block * mat[3, 3] != 0)

    def to_json(self) -> dict[str, object]:
        """Serialize this element, with matrix entries as integers."""
        return {"autExp": self.aut_exp, "mat4": self.matrix.view(np.ndarray).tolist()}


def in_r_normalizer(element: ParabolicElement) -> bool:
    """Is an element of P*_Lambda(q) in N_(P*)(R)?

    These are the elements of P* with a lower triangular matrix and a module part in
    <bar(x^2 y^(p-2)), bar(x y^(p-1)), bar(y^p)>.
    """
    group = element.group
    return (
        group.is_lambda
        and element.in_P_star()
        and element.is_lower_triangular()
        and not np.any(element.vec[: group.p - 2])
    )


def _psi_star_matrices(
    group: PolynomialGroup,
    scalars: galois.FieldArray,
    mats: galois.FieldArray,
    vecs: galois.FieldArray,
) -> galois.FieldArray:
    """Matrices of psi* for a batch of elements (theta, [[a, 0], [c, b]], v) of N_(P*)(R)."""
    p = group.p
    aa, cc, bb = mats[:, 0, 0], mats[:, 1, 0], mats[:, 1, 1]
    top = scalars * aa * bb**p
    middle = scalars * aa**2 * bb ** (p - 1)
    matrices = group.field.Zeros((len(scalars), 4, 4))
    matrices[:, 0, 0] = top
    matrices[:, 0, 3] = top * vecs[:, p]
    matrices[:, 1, 1] = middle
    matrices[:, 1, 2] = middle * vecs[:, p - 2]
    matrices[:, 1, 3] = middle * vecs[:, p - 1]
    matrices[:, 2, 2] = bb
    matrices[:, 2, 3] = cc
    matrices[:, 3, 3] = aa
    return matrices


def psi_star(element: ParabolicElement) -> PsiStarImage:
    """The monomorphism psi*: N_(P*)(R) -> P*_R, for R = UZ(S) in S = S_Lambda(q).

    The element (phi, theta, [[a, 0], [c, b]], l bar(y^p) + m bar(xy^(p-1)) + n bar(x^2y^(p-2)))
    maps to (phi, M), where M has rows
        (theta a b^p, 0, 0, theta a b^p l),
        (0, theta a^2 b^(p-1), theta a^2 b^(p-1) n, theta a^2 b^(p-1) m),
        (0, 0, b, c), and (0, 0, 0, a).
    """
    if not element.group.is_lambda:
        raise ValueError(f"psi* is defined on P*_Lambda(q) (provided: {element.group})")
    if not in_r_normalizer(element):
        raise ValueError("The element is outside the domain N_(P*)(R) of psi*")
    matrices = _psi_star_matrices(
        element.group,
        element.scalar.reshape(1),
        element.mat.reshape(1, 2, 2),
        element.vec.reshape(1, -1),
    )
    return PsiStarImage(element.aut_exp, matrices[0])


def random_normalizer_elements(
    group: PolynomialGroup, num: int, *, seed: int | None = None
) -> list[ParabolicElement]:
    """Uniformly random elements of N_(P*)(R) in P*_Lambda(q)."""
    if not group.is_lambda:
        raise ValueError(f"Expected S_Lambda(q) (provided: {group})")
    rng = np.random.default_rng(get_scrambled_seed(seed) if seed is not None else None)
    aut_exps = torus_aut_exps(group)
    elements = []
    for _ in range(num):
        theta, aa, bb = (int(val) for val in rng.integers(1, group.q, size=3))
        cc, *coeffs = (int(val) for val in rng.integers(group.q, size=4))
        vec = [0] * (group.p - 2) + coeffs[::-1]
        aut_exp = aut_exps[int(rng.integers(len(aut_exps)))]
        elements.append(group.element(aut_exp, theta, [[aa, 0], [cc, bb]], vec))
    return elements


@dataclasses.dataclass(frozen=True)
class PsiStarReport:
    """Certificates that psi* is a monomorphism with the expected image of R."""

    pairs: int
    homomorphism: bool
    in_p_r_star: bool
    torus_images: int
    unipotent_images: int
    domain_order: int
    radical_images: int
    radical_pattern: bool
    diagonal_example: bool

    @property
    def injective(self) -> bool:
        """Is the image as large as the domain?

        The torus and the unipotent radical of N_(P*)(R) map to diagonal and unipotent matrices,
        which intersect trivially, so distinct images of both factors certify injectivity.
        """
        return self.torus_images * self.unipotent_images == self.domain_order


def psi_star_check(
    group: PolynomialGroup, num_pairs: int = 2000, *, seed: int = 0
) -> PsiStarReport:
    """Check psi* on random pairs and count the images of the factors of N_(P*)(R) = T O_p."""
    field, q, p = group.field, group.q, group.p
    elements = random_normalizer_elements(group, 2 * num_pairs, seed=seed)
    homomorphism = in_pattern = True
    for left, right in zip(elements[:num_pairs], elements[num_pairs:]):
        image = psi_star(left * right)
        homomorphism &= image == psi_star(left) * psi_star(right)
        in_pattern &= image.in_p_r_star()

    aut_exps = torus_aut_exps(group)
    check_size(q**4 + (q - 1) ** 3, f"the normalizer of R in P* for {group}")
    units = field(np.array(list(itertools.product(range(1, q), repeat=3)), dtype=int))
    mats = field.Zeros((len(units), 2, 2))
    mats[:, 0, 0], mats[:, 1, 1] = units[:, 1], units[:, 2]
    torus = _psi_star_matrices(group, units[:, 0], mats, field.Zeros((len(units), p + 1)))
    torus_images = len(aut_exps) * _count_distinct(torus)

    params = field(np.array(list(itertools.product(range(q), repeat=4)), dtype=int))
    unipotent = _unipotent_batch(group, params)
    unipotent_images = _count_distinct(unipotent)
    is_unipotent = np.all(np.diagonal(unipotent, axis1=1, axis2=2) == 1)

    in_r = params[:, 1] == 0
    radical = unipotent[in_r]
    support = np.zeros((4, 4), dtype=bool)
    support[[0, 1, 2], 3] = True
    identity = field.Identity(4)
    radical_pattern = bool(np.all((radical != identity)[:, ~support] == 0))

    zeta = primitive_element(group.field_spec)
    example = group.element(scalar=zeta**p, mat=[[1, 0], [0, int(zeta**-1)]])
    expected = field.Identity(4)
    expected[1, 1], expected[2, 2] = zeta, zeta**-1
    diagonal_example = np.array_equal(psi_star(example).matrix, expected)

    domain_order = len(aut_exps) * (q - 1) ** 3 * q**4
    return PsiStarReport(
        pairs=num_pairs,
        homomorphism=bool(homomorphism),
        in_p_r_star=bool(in_pattern),
        torus_images=torus_images,
        unipotent_images=unipotent_images if is_unipotent else 0,
        domain_order=domain_order,
        radical_images=_count_distinct(radical),
        radical_pattern=radical_pattern,
        diagonal_example=bool(diagonal_example),
    )


def _unipotent_batch(group: PolynomialGroup, params: galois.FieldArray) -> galois.FieldArray:
    """psi* of the elements u_c (n bar(x^2y^(p-2)) + m bar(xy^(p-1)) + l bar(y^p)).

    Each row of params holds (c, n, m, l).
    """
    field, p = group.field, group.p
    num = len(params)
    mats = field.Zeros((num, 2, 2))
    mats[:, 0, 0] = mats[:, 1, 1] = 1
    mats[:, 1, 0] = params[:, 0]
    vecs = field.Zeros((num, p + 1))
    vecs[:, p - 2 :] = params[:, 1:]
    return _psi_star_matrices(group, field.Ones(num), mats, vecs)


def _count_distinct(matrices: galois.FieldArray) -> int:
    flat = matrices.view(np.ndarray).reshape(len(matrices), -1)
    return len(np.unique(flat, axis=0))


################################################################################
# essential subgroups and their local data


@dataclasses.dataclass
class EssentialLocalData:
    """The subgroups N_S(E), E & V, and Z(E) of a candidate essential subgroup E in {V, R, Q}."""

    name: str
    subgroup: Subgroup
    normalizer: Subgroup
    meet_v: Subgroup
    centre: Subgroup
    expected: dict[str, Subgroup]

    @property
    def index(self) -> int:
        """The index |N_S(E) : E|."""
        return self.normalizer.order // self.subgroup.order

    def conditions(self) -> dict[str, bool]:
        """The equalities expected of the candidate E."""
        conditions = {"normalizer": self.normalizer == self.expected["normalizer"]}
        if self.name == "R":
            conditions["meet_v"] = self.meet_v == self.expected["meet_v"]
            conditions["family"] = in_b_family(self.subgroup)
        elif self.name == "Q":
            conditions["meet_v"] = self.meet_v == self.expected["meet_v"]
            conditions["centre"] = self.centre == self.expected["centre"]
            conditions["family"] = in_c_family(self.subgroup)
        return conditions


def essential_local_data(group: PolynomialGroup, name: str) -> EssentialLocalData:
    """Enumerate N_S(E), E & V, and Z(E) for E = V, R = UZ(S), or Q = UZ_2(S).

    Expected: N_S(V) = S; R & V = Z(S) and N_S(R) = RZ_2(S); and Q & V = Z_2(S), Z(Q) = Z(S), and
    N_S(Q) = QZ_3(S).
    """
    if name not in ("V", "R", "Q"):
        raise ValueError(f"Candidate essential subgroups are V, R, and Q (provided: {name})")
    check_size(group.order, str(group))
    subgroups = standard_subgroups(group, ["V", "Z", "Z2", name])
    subgroup = subgroups[name]
    whole = Subgroup.whole(group)
    upper = group.upper_central_terms()
    expected = {"normalizer": whole}
    if name != "V":
        level = 1 if name == "R" else 2
        next_term = upper[min(level, len(upper) - 1)][1]
        expected["normalizer"] = Subgroup.from_structure(group, list(range(group.q)), next_term)
        expected["meet_v"] = subgroups["Z" if name == "R" else "Z2"]
        expected["centre"] = subgroups["Z"]
    local = EssentialLocalData(
        name=name,
        subgroup=subgroup,
        normalizer=subgroup.normalizer_in(whole),
        meet_v=subgroup & subgroups["V"],
        centre=subgroup.center(),
        expected=expected,
    )
    logger.debug(f"Local data of {name} in {group}: |N_S(E) : E| = {local.index}")
    return local


@dataclasses.dataclass(frozen=True)
class RIntersectionReport:
    """Counts from checking R & R^s <= V for conjugators s that do not normalize R."""

    conjugates: int
    conjugates_ok: int
    normalizing: int
    normalizing_ok: bool
    outside: int
    outside_ok: int

    @property
    def verified(self) -> bool:
        """Did every check pass?"""
        return (
            self.conjugates == self.conjugates_ok
            and self.normalizing_ok
            and self.outside == self.outside_ok
        )


def r_intersection_check(
    group: PolynomialGroup, num_samples: int = 1000, *, seed: int | None = None
) -> RIntersectionReport:
    """Check that R & R^s <= V for s in P* outside N_(P*)(R).

    Since N_(P*)(S) = (Sigma & P*) S and the torus Sigma & P* normalizes R, the conjugates R^s for
    s in N_(P*)(S) are the S-conjugates of R, which are checked exhaustively.  Conjugators s outside
    N_(P*)(S) are sampled: an element u_c z of R with c != 0 has a conjugate in S only if the triple
    of u_c is conjugated into the triples of S, and elements with c = 0 stay in V.
    """
    rr = standard_subgroups(group, ["R"])["R"]
    conjugates = [conj for conj in s_conjugates(rr) if conj != rr]
    conjugates_ok = sum(not np.any((rr & conj).elements[:, 0]) for conj in conjugates)

    borel = parabolic_subgroups(group)["B&P*"]
    normalizing_ok = borel.normalizes(rr)

    centre_rows = Subgroup.from_structure(group, [0], centre_basis(group)).elements
    outside_ok = 0
    for element in _random_outside_elements(group, num_samples, seed=seed):
        outside_ok += _meets_r_inside_v(group, rr, centre_rows, element)
    return RIntersectionReport(
        conjugates=len(conjugates),
        conjugates_ok=int(conjugates_ok),
        normalizing=len(borel.gens),
        normalizing_ok=normalizing_ok,
        outside=num_samples,
        outside_ok=outside_ok,
    )


def _random_outside_elements(
    group: PolynomialGroup, num: int, *, seed: int | None = None
) -> Iterable[ParabolicElement]:
    rng = np.random.default_rng(get_scrambled_seed(seed) if seed is not None else None)
    aut_exps = torus_aut_exps(group)
    produced = 0
    while produced < num:
        theta, bb = (int(val) for val in rng.integers(1, group.q, size=2))
        aa, cc, dd = (int(val) for val in rng.integers(group.q, size=3))
        mat = group.field([[aa, bb], [cc, dd]])
        if np.linalg.det(mat) == 0:
            continue
        vec = rng.integers(group.q, size=group.dim)
        aut_exp = aut_exps[int(rng.integers(len(aut_exps)))]
        produced += 1
        yield group.element(aut_exp, theta, mat, vec)


def _meets_r_inside_v(
    group: PolynomialGroup, rr: Subgroup, centre_rows: galois.FieldArray, element: ParabolicElement
) -> bool:
    inverse = element.triple.inverse()
    for cc in range(1, group.q):
        u_row = group.u_rows([cc])
        conj = inverse * group.from_row(u_row[0]).triple * element.triple
        diagonal = conj.mat[0, 0] == 1 and conj.mat[1, 1] == 1
        if conj.aut_exp or conj.scalar != 1 or conj.mat[0, 1] != 0 or not diagonal:
            continue
        for row in group.multiply(u_row, centre_rows):
            if pconj(group.from_row(row), element) in rr:
                return False
    return True


################################################################################
# fusion system descriptors


SYSTEMS: dict[str, tuple[bool, tuple[str, ...], bool]] = {
    "F*(n,q,R)": (False, ("V", "R"), True),
    "F*(n,q,Q)": (False, ("V", "Q"), True),
    "F*(n,q,R)_P": (False, ("R",), True),
    "F*(n,q,Q)_P": (False, ("Q",), True),
    "F*_Λ(q)": (True, ("V", "R"), True),
    "F*_Λ(q)_P": (True, ("R",), True),
    "F_Λ(q)": (True, ("V", "R"), False),
}


@dataclasses.dataclass(frozen=True)
class FusionSystemDescriptor:
    """A polynomial fusion system, given by its essential subgroups and automizer tags."""

    name: str
    group: PolynomialGroup
    essentials: tuple[str, ...]
    automizers: Mapping[str, str]
    field_aut_exponents: tuple[int, ...]
    p_prime_index: bool = False

    @property
    def pruned(self) -> bool:
        """Has V been pruned from the essential subgroups?"""
        return "V" not in self.essentials

    @property
    def title(self) -> str:
        """Name of this system with its parameters filled in, such as F*(2,9,R)."""
        q = str(self.group.q)
        return self.name.replace("(n,q,", f"({self.group.n},{q},").replace("(q)", f"({q})")

    def __str__(self) -> str:
        return self.title

    def to_json(self) -> dict[str, object]:
        """Serialize this descriptor."""
        return {
            "name": self.title,
            "base": self.group.to_json(),
            "essentials": list(self.essentials),
            "automizers": dict(self.automizers),
            "fieldAutPart": list(self.field_aut_exponents),
            "pPrimeIndex": self.p_prime_index,
        }


def describe_system(name: str, p: int, m: int, n: int | None = None) -> FusionSystemDescriptor:
    """The descriptor of a named polynomial fusion system.

    Recognized names are the keys of SYSTEMS, with "Lambda" accepted in place of "Λ".  The systems
    on S_n(q) require 1 <= n <= p - 1, and Q = UZ_2(S) requires n >= 2.
    """
    name = name.replace("Lambda", "Λ")
    if name not in SYSTEMS:
        raise ValueError(f"Unrecognized fusion system: {name} (expected one of {list(SYSTEMS)})")
    is_lambda, essentials, starred = SYSTEMS[name]
    if is_lambda:
        group = PolynomialGroup.slambda(p, m)
    else:
        if n is None or not 1 <= n <= p - 1:
            raise ValueError(f"{name} requires 1 <= n <= p - 1 (provided: p = {p}, n = {n})")
        if "Q" in essentials and n == 1:
            raise ValueError(f"{name} requires n >= 2, since Q = UZ_2(S) is undefined for S_1(q)")
        group = PolynomialGroup.sn(p, m, n)
    automizers = {}
    for essential in essentials:
        if essential == "V":
            even = not is_lambda and group.n % 2 == 0
            automizers["V"] = "GL2-extension" if is_lambda else ("PSL2(q)" if even else "SL2(q)")
        elif essential == "R":
            automizers["R"] = "SL2(q) on R/C"
        else:
            automizers["Q"] = "SL2(q) on Q/Z"
    exponents = tuple(torus_aut_exps(group)) if starred else (0,)
    return FusionSystemDescriptor(name, group, essentials, automizers, exponents, not starred)


################################################################################
# lifts of automizers and Out^0


def lift_generators(desc: FusionSystemDescriptor) -> dict[str, ParabolicElement]:
    """Generators of the lift subgroups K_E in Aut_(P*)(S), one for each essential subgroup E.

    With z a primitive element of K:
    - K_V is generated by (0, 1, diag(z, z^-1)), from a Borel subgroup of SL_2(q),
    - K_R is generated by (0, z, diag(1, z)) on S_n(q), and by (0, z^p, diag(1, z^-1)) on
      S_Lambda(q), which act as inverse scalars on S/V and on Z(S)/C_R,
    - K_Q is generated by (0, 1, diag(1, z)), which centralizes Z(S).
    """
    group = desc.group
    zeta = primitive_element(group.field_spec)
    inv = int(zeta**-1)
    lifts = {}
    for essential in desc.essentials:
        if essential == "V":
            lifts["V"] = group.element(mat=[[int(zeta), 0], [0, inv]])
        elif essential == "R" and group.is_lambda:
            lifts["R"] = group.element(scalar=zeta**group.p, mat=[[1, 0], [0, inv]])
        elif essential == "R":
            lifts["R"] = group.element(scalar=zeta, mat=[[1, 0], [0, int(zeta)]])
        else:
            lifts["Q"] = group.element(mat=[[1, 0], [0, int(zeta)]])
    return lifts


def generated_images(group: PolynomialGroup, gens: Iterable[DeltaImage]) -> set[DeltaImage]:
    """All elements of the group generated by some delta-images."""
    gens = list(gens)
    identity = DeltaImage.identity(group)
    seen, frontier = {identity}, [identity]
    while frontier:
        products = (image * gen for image in frontier for gen in gens)
        frontier = [image for image in products if image not in seen]
        seen.update(frontier)
    return seen


def out0_expected(desc: FusionSystemDescriptor) -> int:
    """Closed-form order of Out^0_F(S) for a descriptor."""
    q, n = desc.group.q, desc.group.n
    essentials = set(desc.essentials)
    if desc.group.is_lambda:
        return (q - 1) ** 2 if essentials == {"V", "R"} else q - 1
    if essentials == {"V", "Q"}:
        return (q - 1) ** 2 // math.gcd(n, q - 1)
    if essentials == {"V", "R"}:
        return (q - 1) ** 2 // math.gcd(n + 2, q - 1)
    if essentials == {"R"}:
        return q - 1
    raise ValueError(f"Unsupported essential set for Out^0: {sorted(essentials)} ({desc.title})")


@dataclasses.dataclass(frozen=True)
class OutReport:
    """The order of a subgroup of Out(S) generated by delta-images, and its closed form."""

    desc: FusionSystemDescriptor
    lifts: Mapping[str, DeltaImage]
    order: int
    expected: int

    @property
    def lift_orders(self) -> dict[str, int]:
        """Orders of the generators of the lift subgroups."""
        return {name: image.order() for name, image in self.lifts.items()}

    def to_json(self) -> dict[str, object]:
        """Serialize this report."""
        return {
            "system": self.desc.title,
            "order": self.order,
            "expected": self.expected,
            "lifts": {name: image.to_json() for name, image in self.lifts.items()},
        }


def out0_order(desc: FusionSystemDescriptor) -> OutReport:
    """The order of Out^0_F(S), generated by the lift subgroups K_E modulo Inn(S).

    Since delta is injective on p'-elements modulo C_D*(V), this order is the number of distinct
    delta-images of the group generated by the lifts.
    """
    group = desc.group
    if group.m == 1:
        raise ValueError(f"Out^0 orders require q > p (provided: q = {group.q})")
    expected = out0_expected(desc)
    lifts = {name: delta(lift) for name, lift in lift_generators(desc).items()}
    order = len(generated_images(group, lifts.values()))
    logger.info(f"|Out^0| of {desc}: {order} (closed form: {expected})")
    return OutReport(desc, lifts, order, expected)


def out_order(desc: FusionSystemDescriptor) -> OutReport:
    """The order of Out_F(S) = Aut_F(S)/Inn(S), generated by the torus of Aut_F(S).

    The torus of P* contributes field automorphisms in O^p(Aut(K)) for the starred systems, and
    none for F_Lambda(q).  Expected: (q - 1)^2 m_p' and (q - 1)^2, respectively.
    """
    group = desc.group
    torus = parabolic_subgroups(group)["Sigma&P*"].gens
    gens = [delta(gen) for gen in torus if gen.aut_exp in desc.field_aut_exponents]
    lifts = {name: delta(lift) for name, lift in lift_generators(desc).items()}
    order = len(generated_images(group, [*gens, *lifts.values()]))
    expected = (group.q - 1) ** 2 * len(desc.field_aut_exponents)
    return OutReport(desc, lifts, order, expected)


@dataclasses.dataclass(frozen=True)
class OrbitReport:
    """Orbit sizes of a cyclic lift subgroup K_E on (S/V)^# and on (Z(S)/C_E)^#."""

    essential: str
    quotient_orbits: tuple[int, ...]
    centre_orbits: tuple[int, ...]

    @property
    def regular_on_quotient(self) -> bool:
        """Does K_E act regularly on (S/V)^#?"""
        return len(self.quotient_orbits) == 1

    @property
    def centre_ok(self) -> bool:
        """Regular on (Z(S)/C_E)^# for abelian E, and trivial on Z(S) otherwise."""
        if self.essential == "Q":
            return set(self.centre_orbits) == {1}
        return len(self.centre_orbits) == 1


def te_regularity(desc: FusionSystemDescriptor) -> list[OrbitReport]:
    """Orbits of the lift subgroups K_E for the essential subgroups E != V.

    Orbits are the connected components of the graph joining each point x to its image under a
    generator.  For S_Lambda(q), Z(S)/C_R is spanned by the image of bar(xy^(p-1)).
    """
    group = desc.group
    points = group.field(np.arange(1, group.q))
    reports = []
    for name, lift in lift_generators(desc).items():
        if name == "V":
            continue
        image = delta(lift)
        centre_map = image.on_centre
        if name == "Q":
            centre_points = _all_nonzero(group, centre_map.dim)
        else:
            if centre_map.dim > 1 and np.any(centre_map.matrix[1:, 0]):
                raise ValueError("The lift does not preserve C_R")  # pragma: no cover
            centre_map = SemilinearMap(centre_map.aut_exp, centre_map.matrix[:1, :1])
            centre_points = points.reshape(-1, 1)
        reports.append(
            OrbitReport(
                essential=name,
                quotient_orbits=_orbit_sizes(image.on_quotient, points.reshape(-1, 1)),
                centre_orbits=_orbit_sizes(centre_map, centre_points),
            )
        )
    return reports


def _all_nonzero(group: PolynomialGroup, dim: int) -> galois.FieldArray:
    vectors = np.array(list(itertools.product(range(group.q), repeat=dim))[1:], dtype=int)
    return group.field(vectors)


def _orbit_sizes(mapping: SemilinearMap, points: galois.FieldArray) -> tuple[int, ...]:
    q = type(points).order
    weights = q ** np.arange(points.shape[1])
    sources = points.view(np.ndarray) @ weights
    targets = mapping(points).view(np.ndarray) @ weights
    graph = nx.Graph()
    graph.add_nodes_from(sources.tolist())
    graph.add_edges_from(zip(sources.tolist(), targets.tolist()))
    return tuple(sorted(len(component) for component in nx.connected_components(graph)))


################################################################################
# centric-radical subgroups, quotients, and normalizer towers


@dataclasses.dataclass(frozen=True)
class FrcClass:
    """An S-conjugacy class of fully normalized, centric, and radical subgroups."""

    name: str
    representative: Subgroup
    class_size: int


def frc_subgroups(desc: FusionSystemDescriptor) -> list[FrcClass]:
    """The classes {S} and E^S of essential subgroups E, which make up F^frc."""
    group = desc.group
    upper = group.upper_central_terms()
    everything = list(range(group.q))
    classes = [FrcClass("S", Subgroup.whole(group), 1)]
    subgroups = standard_subgroups(group, desc.essentials)
    for name in desc.essentials:
        if name == "V":
            classes.append(FrcClass("V", subgroups["V"], 1))
            continue
        level = 1 if name == "R" else 2
        basis = upper[min(level, len(upper) - 1)][1]
        normalizer = Subgroup.from_structure(group, everything, basis)
        classes.append(FrcClass(name, subgroups[name], group.order // normalizer.order))
    return classes


@dataclasses.dataclass(frozen=True)
class PrunedQuotient:
    """The quotient of a pruned system by its p-core, at the level of groups."""

    source: FusionSystemDescriptor
    target: FusionSystemDescriptor
    quotient: GroupMap
    kernel_ok: bool
    image_ok: bool


def pruned_quotient(desc: FusionSystemDescriptor) -> PrunedQuotient:
    """Map a pruned system onto F*(n - 1, q, R)_P or F*(p - 1, q, R)_P by its p-core.

    F*(n, q, Q)_P has p-core Z(S), which is the kernel of gamma, and F*_Lambda(q)_P has p-core
    <bar(y^p)>, which is the kernel of the Lambda quotient.  The quotient map should send the
    essential representative onto R.
    """
    group = desc.group
    if desc.name == "F*(n,q,Q)_P":
        quotient, name, core = gamma_quotient(group), "Q", centre_basis(group)
    elif desc.name == "F*_Λ(q)_P":
        quotient, name = lambda_quotient(group), "R"
        core = group.field.Identity(group.dim)[-1:]
    else:
        raise ValueError(f"Quotients are defined for F*(n,q,Q)_P and F*_Λ(q)_P (given: {desc})")
    target = describe_system("F*(n,q,R)_P", group.p, group.m, quotient.target.n)
    source_rep = standard_subgroups(group, [name])[name]
    target_rep = standard_subgroups(quotient.target, ["R"])["R"]
    image_keys = quotient.target.keys(quotient(source_rep.elements))
    image = Subgroup(quotient.target, keys=image_keys)
    kernel_ok = same_space(quotient.kernel().structure[1], core)  # type: ignore[index]
    return PrunedQuotient(desc, target, quotient, kernel_ok, image == target_rep)


@dataclasses.dataclass(frozen=True)
class TowerLevel:
    """The term N^i = RZ_(i+1)(S) of the normalizer tower of F*(n, q, R)_P, with N^i = S_i(q)."""

    index: int
    subgroup: Subgroup
    isomorphism: GroupMap

    def certificate(self, num_pairs: int = 500, *, seed: int | None = None) -> dict[str, bool]:
        """Conditions certifying that the isomorphism maps N^i onto S_i(q)."""
        iso = self.isomorphism
        return {
            "domain": self.subgroup == iso.domain_subgroup(),
            "order": self.subgroup.order == iso.target.order,
            "bijective": iso.is_injective() and iso.is_surjective(),
            "homomorphism": iso.check_homomorphism(num_pairs, seed=seed),
        }


def normalizer_tower(desc: FusionSystemDescriptor, index: int) -> TowerLevel:
    """The term N^i = RZ_(i+1)(S) for 1 < i <= n, and its isomorphism to S_i(q).

    For i < n, Z_(i+1)(S) = C_i lies in V, so N^i = UC_i, which truncation maps onto S_i(q).
    """
    group = desc.group
    if desc.name != "F*(n,q,R)_P":
        raise ValueError(f"Normalizer towers are defined for F*(n,q,R)_P (provided: {desc})")
    if not 1 < index <= group.n:
        raise ValueError(f"Normalizer towers require 1 < i <= n = {group.n} (provided: {index})")
    upper = group.upper_central_terms()
    subgroup = Subgroup.from_structure(
        group, list(range(group.q)), upper[index][1], name=f"N^{index}"
    )
    return TowerLevel(index, subgroup, subgroup_similarity(group, group.n - index))


################################################################################
# exclusion of other essential subgroups


@dataclasses.dataclass(frozen=True)
class ExclusionReport:
    """Arithmetic and torus witnesses that exclude essential subgroups outside R^S and Q^S."""

    solutions: tuple[int, ...]
    abelian_witnesses: bool
    nonabelian_witnesses: bool
    criterion_consistent: bool


def exclusion_solutions(p: int, m: int, n: int) -> tuple[int, ...]:
    """The exponents 1 <= k <= m with p^m - 1 dividing n p^k + p^k + 1."""
    return tuple(kk for kk in range(1, m + 1) if (n * p**kk + p**kk + 1) % (p**m - 1) == 0)


def essential_exclusion(group: PolynomialGroup) -> ExclusionReport:
    """Check the torus elements that realize the exclusion argument for S_n(q), with z primitive.

    For every mu in K^*, the element (0, mu^-n z, diag(mu, z mu)) has delta-image (z^-1, z) and acts
    on V/[V, S] as z^(n+1), while (0, mu^-n, diag(mu, z mu)) has delta-image (z^-1, 1).  The modules
    V/[V, S] and S_0[V, S]/[V, S] are isomorphic for <z> exactly when (z^(n+1))^(p^k) = z^-1.
    """
    if group.is_lambda or not 1 <= group.n <= group.p - 1:
        raise ValueError(f"Exclusion requires S_n(q) with 1 <= n <= p - 1 (provided: {group})")
    zeta = primitive_element(group.field_spec)
    field, n = group.field, group.n
    abelian = nonabelian = True
    for mu in range(1, group.q):
        mu_inv_n = field(mu) ** -n
        mat = [[mu, 0], [0, int(zeta * field(mu))]]
        first = group.element(scalar=mu_inv_n * zeta, mat=mat)
        second = group.element(scalar=mu_inv_n, mat=mat)
        top = module_matrix(group.module, first.triple)[n, n]
        abelian &= delta(first).pair() == ((0, int(zeta**-1)), (0, int(zeta)))
        abelian &= bool(top == zeta ** (n + 1))
        nonabelian &= delta(second).pair() == ((0, int(zeta**-1)), (0, 1))
    solutions = exclusion_solutions(group.p, group.m, n)
    isomorphic = any(
        (zeta ** (n + 1)) ** (group.p**kk) == zeta**-1 for kk in range(1, group.m + 1)
    )
    consistent = isomorphic == bool(solutions)
    return ExclusionReport(solutions, bool(abelian), bool(nonabelian), consistent)
