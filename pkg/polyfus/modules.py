"""The modules V_n(q) and Lambda(q), the triples (phi, lambda, g) that act on them, and subspaces

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

V_n(q) is the space of homogeneous polynomials of degree n in x and y over K = GF(q).  Coefficient i
of a vector multiplies the monomial x^(n-i) y^i.  Lambda(q) is the K-dual of V_p(q), and coefficient
i of a vector in Lambda(q) multiplies the dual basis functional bar(x^(p-i) y^i).

A triple (phi, lambda, g) with phi = Frob^k, lambda in K^*, and g = [[a, b], [c, d]] in GL_2(K)
acts on V_n(q) from the right by first applying Frob^k to coefficients, and then sending f(x, y)
to lambda f(ax + by, cx + dy).  Matrices act on row vectors as v -> v @ M.
Writing t = y/x, row j of the matrix of (lambda, g) on V_n(q) holds lambda times the coefficients of
(a + bt)^(n-j) (c + dt)^j.  The matrix of (lambda, g) on Lambda(q) is the transpose of the matrix of
(lambda^-1, g^-1) on V_p(q).
"""

from __future__ import annotations

import dataclasses
import enum
import functools
import threading
from collections.abc import Iterator, Sequence

import cachetools
import galois
import numpy as np
import numpy.typing as npt

from polyfus.fields import FieldSpec, field_of, frobenius, get_scrambled_seed, to_coeffs


class ModuleKind(enum.Enum):
    """The two families of modules."""

    VN = "Vn"
    LAMBDA = "Lambda"


@dataclasses.dataclass(frozen=True)
class ModuleSpec:
    """A module V_n(q) or Lambda(q) over a fixed field."""

    field_spec: FieldSpec
    kind: ModuleKind
    n: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"Module degree must be nonnegative (provided: {self.n})")
        if self.kind is ModuleKind.LAMBDA and self.n != self.field_spec.p:
            raise ValueError(f"Lambda(q) is dual to V_p(q), so its degree must be p = {self.p}")

    @staticmethod
    def vn(field_spec: FieldSpec, n: int) -> ModuleSpec:
        """The module V_n(q) of homogeneous polynomials of degree n."""
        return ModuleSpec(field_spec, ModuleKind.VN, n)

    @staticmethod
    def dual(field_spec: FieldSpec) -> ModuleSpec:
        """The module Lambda(q), dual to V_p(q)."""
        return ModuleSpec(field_spec, ModuleKind.LAMBDA, field_spec.p)

    @property
    def p(self) -> int:
        """Characteristic of the field."""
        return self.field_spec.p

    @property
    def field(self) -> type[galois.FieldArray]:
        """The galois FieldArray class of the field."""
        return self.field_spec.field

    @property
    def dim(self) -> int:
        """Dimension over K."""
        return self.n + 1

    def zero(self) -> ModuleVector:
        """The zero vector."""
        return ModuleVector(self, self.field.Zeros(self.dim))

    def basis_vector(self, index: int, scale: int | galois.FieldArray = 1) -> ModuleVector:
        """A scalar multiple of a basis vector."""
        coeffs = self.field.Zeros(self.dim)
        coeffs[index] = scale
        return ModuleVector(self, coeffs)

    def vector(self, coeffs: Sequence[int] | npt.NDArray[np.int_]) -> ModuleVector:
        """A vector with the given coefficients (as integer representations of field elements)."""
        return ModuleVector(self, self.field(coeffs))

    def monomial(self, index: int) -> str:
        """Name of a basis vector, e.g. 'x^2y' or 'bar(xy^2)'."""
        degree = self.n
        name = _monomial(degree - index, index)
        return name if self.kind is ModuleKind.VN else f"bar({name})"

    def __str__(self) -> str:
        if self.kind is ModuleKind.VN:
            return f"V_{self.n}({self.field_spec.q})"
        return f"Lambda({self.field_spec.q})"


def _monomial(x_power: int, y_power: int) -> str:
    parts = [
        var + (f"^{power}" if power > 1 else "")
        for var, power in (("x", x_power), ("y", y_power))
        if power > 0
    ]
    return "".join(parts) or "1"


@dataclasses.dataclass(frozen=True, eq=False)
class ModuleVector:
    """A vector in V_n(q) or Lambda(q), stored as a coefficient array over GF(q)."""

    __array_ufunc__ = None

    spec: ModuleSpec
    coeffs: galois.FieldArray

    def __post_init__(self) -> None:
        if self.coeffs.shape != (self.spec.dim,):
            raise ValueError(f"Vectors in {self.spec} must have {self.spec.dim} coefficients")
        if type(self.coeffs) is not self.spec.field:
            raise ValueError(f"Vector coefficients must lie in {self.spec.field_spec}")

    def _check(self, other: ModuleVector) -> None:
        if self.spec != other.spec:
            raise ValueError(f"Cannot combine vectors of {self.spec} and {other.spec}")

    def __add__(self, other: ModuleVector) -> ModuleVector:
        self._check(other)
        return ModuleVector(self.spec, self.coeffs + other.coeffs)

    def __sub__(self, other: ModuleVector) -> ModuleVector:
        self._check(other)
        return ModuleVector(self.spec, self.coeffs - other.coeffs)

    def __neg__(self) -> ModuleVector:
        return ModuleVector(self.spec, -self.coeffs)

    def __rmul__(self, scalar: int | galois.FieldArray) -> ModuleVector:
        return ModuleVector(self.spec, self.spec.field(scalar) * self.coeffs)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ModuleVector)
            and self.spec == other.spec
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def __hash__(self) -> int:
        return hash((self.spec, self.coeffs.tobytes()))

    def is_zero(self) -> bool:
        """Is this the zero vector?"""
        return not np.any(self.coeffs)

    def to_json(self) -> dict[str, object]:
        """Serialize this vector, writing each coefficient as a coefficient array."""
        return {
            "kind": self.spec.kind.value,
            "n": self.spec.n,
            "coeffs": [list(to_coeffs(coeff)) for coeff in self.coeffs],
        }

    def __str__(self) -> str:
        terms = [
            (f"{int(coeff)}*" if coeff != 1 else "") + self.spec.monomial(index)
            for index, coeff in enumerate(self.coeffs)
            if coeff
        ]
        return " + ".join(terms) or "0"


################################################################################
# triples (phi, lambda, g)


@dataclasses.dataclass(frozen=True, eq=False)
class DTriple:
    """An element (Frob^aut_exp, scalar, mat) of Aut(K) x| (K^* x GL_2(K)).

    Products twist the left factor by the Frobenius part of the right factor:
        (phi, lam, A) * (Phi, mu, B) = (phi + Phi, lam^s mu, A^s B),  where s = Frob^Phi.
    """

    aut_exp: int
    scalar: galois.FieldArray
    mat: galois.FieldArray

    def __post_init__(self) -> None:
        field = type(self.scalar)
        if type(self.mat) is not field or self.mat.shape != (2, 2):
            raise ValueError("A triple needs a 2x2 matrix over the field of its scalar")
        if self.scalar == 0:
            raise ValueError("The scalar of a triple must be nonzero")
        if np.linalg.det(self.mat) == 0:
            raise ValueError("The matrix of a triple must be invertible (singular matrix provided)")
        object.__setattr__(self, "aut_exp", self.aut_exp % field.degree)

    @staticmethod
    def identity(field_spec: FieldSpec) -> DTriple:
        """The identity triple."""
        field = field_spec.field
        return DTriple(0, field(1), field.Identity(2))

    @staticmethod
    def build(
        field_spec: FieldSpec,
        scalar: int | galois.FieldArray = 1,
        mat: Sequence[Sequence[int]] | galois.FieldArray | None = None,
        aut_exp: int = 0,
    ) -> DTriple:
        """Build a triple from integer representations of field elements."""
        field = field_spec.field
        matrix = field.Identity(2) if mat is None else field(mat)
        return DTriple(aut_exp, field(scalar), matrix)

    @property
    def field_spec(self) -> FieldSpec:
        """The underlying field."""
        return field_of(self.scalar)

    def twist(self, power: int) -> DTriple:
        """Apply Frob^power to the scalar and matrix of this triple."""
        return DTriple(self.aut_exp, frobenius(self.scalar, power), frobenius(self.mat, power))

    def __mul__(self, other: DTriple) -> DTriple:
        if type(self.scalar) is not type(other.scalar):
            raise ValueError("Cannot multiply triples over different fields")
        left = self.twist(other.aut_exp)
        return DTriple(
            self.aut_exp + other.aut_exp, left.scalar * other.scalar, left.mat @ other.mat
        )

    def inverse(self) -> DTriple:
        """The inverse triple."""
        base = DTriple(0, self.scalar**-1, np.linalg.inv(self.mat)).twist(-self.aut_exp)
        return DTriple(-self.aut_exp, base.scalar, base.mat)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, DTriple)
            and type(self.scalar) is type(other.scalar)
            and self.aut_exp == other.aut_exp
            and self.scalar == other.scalar
            and np.array_equal(self.mat, other.mat)
        )

    def __hash__(self) -> int:
        return hash((self.aut_exp, int(self.scalar), self.mat.tobytes()))

    def in_D(self) -> bool:
        """Is this triple in D = K^* x GL_2(K)?"""
        return self.aut_exp == 0

    def in_D_star(self) -> bool:
        """Is this triple in D* = O^p(Aut(K)) x| D?"""
        spec = self.field_spec
        return self.aut_exp % (spec.m // spec.p_prime_part) == 0

    def in_D_dagger(self) -> bool:
        """Is this triple in D^dagger = Aut(K) x| D?  (Always true.)"""
        return True

    def to_json(self) -> dict[str, object]:
        """Serialize this triple."""
        return {
            "autExp": self.aut_exp,
            "scalar": list(to_coeffs(self.scalar)),
            "mat": [[list(to_coeffs(entry)) for entry in row] for row in self.mat],
        }


################################################################################
# module matrices


def _linear_powers(
    const: galois.FieldArray, slope: galois.FieldArray, degree: int
) -> galois.FieldArray:
    """Coefficients of (const + slope t)^e for 0 <= e <= degree, indexed as [batch, e, power]."""
    field = type(const)
    powers = field.Zeros((len(const), degree + 1, degree + 1))
    powers[:, 0, 0] = 1
    for ee in range(degree):
        powers[:, ee + 1, :] = powers[:, ee, :] * const[:, None]
        powers[:, ee + 1, 1:] += powers[:, ee, :-1] * slope[:, None]
    return powers


def substitution_matrices(mats: galois.FieldArray, degree: int) -> galois.FieldArray:
    """Matrices of the substitution f(x, y) -> f(ax + by, cx + dy) on V_degree, for a batch of g.

    Row j of the matrix for g = [[a, b], [c, d]] holds the coefficients of (a + bt)^(degree - j)
    (c + dt)^j, where t = y/x.
    """
    field = type(mats)
    powers_x = _linear_powers(mats[:, 0, 0], mats[:, 0, 1], degree)
    powers_y = _linear_powers(mats[:, 1, 0], mats[:, 1, 1], degree)
    result = field.Zeros((len(mats), degree + 1, degree + 1))
    for jj in range(degree + 1):
        left, right = powers_x[:, degree - jj, :], powers_y[:, jj, :]
        for ss in range(degree + 1):
            result[:, jj, ss:] += left[:, ss, None] * right[:, : degree + 1 - ss]
    return result


def inverse_2x2(mats: galois.FieldArray) -> galois.FieldArray:
    """Invert a batch of 2x2 matrices."""
    dets = mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]
    if np.any(dets == 0):
        raise ValueError("Cannot invert a singular matrix")
    adjugates = type(mats)(np.zeros_like(mats))
    adjugates[:, 0, 0] = mats[:, 1, 1]
    adjugates[:, 1, 1] = mats[:, 0, 0]
    adjugates[:, 0, 1] = -mats[:, 0, 1]
    adjugates[:, 1, 0] = -mats[:, 1, 0]
    return adjugates * (dets**-1)[:, None, None]


def module_matrices(
    spec: ModuleSpec, scalars: galois.FieldArray, mats: galois.FieldArray
) -> galois.FieldArray:
    """Matrices of a batch of pairs (lambda, g) acting on a module, ignoring Frobenius twists."""
    if spec.kind is ModuleKind.VN:
        return scalars[:, None, None] * substitution_matrices(mats, spec.n)
    dual_mats = scalars[:, None, None] ** -1 * substitution_matrices(inverse_2x2(mats), spec.n)
    return type(dual_mats)(np.transpose(dual_mats, (0, 2, 1)))


def module_matrix(spec: ModuleSpec, triple: DTriple) -> galois.FieldArray:
    """Matrix of the pair (lambda, g) of a triple on a module, ignoring its Frobenius part."""
    if type(triple.scalar) is not spec.field:
        raise ValueError(f"Triple and module {spec} are defined over different fields")
    return module_matrices(spec, triple.scalar.reshape(1), triple.mat.reshape(1, 2, 2))[0]


def unipotent_matrices(spec: ModuleSpec, params: galois.FieldArray) -> galois.FieldArray:
    """Matrices of u_c = [[1, 0], [c, 1]] acting on a module, for a batch of parameters c."""
    field = spec.field
    mats = field.Zeros((len(params), 2, 2))
    mats[:, 0, 0] = mats[:, 1, 1] = 1
    mats[:, 1, 0] = params
    return module_matrices(spec, field.Ones(len(params)), mats)


_unipotent_cache_lock = threading.Lock()


@cachetools.cached(
    cache=cachetools.LRUCache(maxsize=1 << 14),
    key=lambda spec, param: (spec, int(param)),
    lock=_unipotent_cache_lock,
)
def unipotent_matrix(spec: ModuleSpec, param: int | galois.FieldArray) -> galois.FieldArray:
    """Read-only matrix of u_c = [[1, 0], [c, 1]] acting on a module."""
    matrix = unipotent_matrices(spec, spec.field([int(param)]))[0]
    matrix.setflags(write=False)
    return matrix


################################################################################
# actions and module maps


def act(vector: ModuleVector, triple: DTriple) -> ModuleVector:
    """Right action of a triple (phi, lambda, g) on a module vector."""
    matrix = module_matrix(vector.spec, triple)
    return ModuleVector(vector.spec, frobenius(vector.coeffs, triple.aut_exp) @ matrix)


def act_vn(vector: ModuleVector, triple: DTriple) -> ModuleVector:
    """Right action on V_n(q): f(x, y) -> lambda f^phi(ax + by, cx + dy)."""
    if vector.spec.kind is not ModuleKind.VN:
        raise ValueError(f"Expected a vector in V_n(q), not {vector.spec}")
    return act(vector, triple)


def act_lambda(vector: ModuleVector, triple: DTriple) -> ModuleVector:
    """Right (contragredient) action on Lambda(q)."""
    if vector.spec.kind is not ModuleKind.LAMBDA:
        raise ValueError(f"Expected a vector in Lambda(q), not {vector.spec}")
    return act(vector, triple)


def pairing(vector: ModuleVector, functional: ModuleVector) -> galois.FieldArray:
    """Evaluate a functional in Lambda(q) on a vector in V_p(q)."""
    if vector.spec != ModuleSpec.vn(functional.spec.field_spec, functional.spec.p) or (
        functional.spec.kind is not ModuleKind.LAMBDA
    ):
        raise ValueError("Pairing requires a vector in V_p(q) and a functional in Lambda(q)")
    return np.sum(vector.coeffs * functional.coeffs)


@functools.cache
def psi_matrix(field_spec: FieldSpec) -> galois.FieldArray:
    """Matrix of the derivation V_p(q) -> V_(p-2)(q), x^i y^j -> i x^(i-1) y^(j-1)."""
    p = field_spec.p
    matrix = field_spec.field.Zeros((p + 1, p - 1))
    for ii in range(1, p):
        matrix[ii, ii - 1] = p - ii
    matrix.setflags(write=False)
    return matrix


def psi_derivation(vector: ModuleVector) -> ModuleVector:
    """The module homomorphism V_p(q) -> V_(p-2)(q) with kernel <x^p, y^p>."""
    spec = vector.spec
    if spec.kind is not ModuleKind.VN or spec.n != spec.p:
        raise ValueError(f"The derivation psi is defined on V_p(q), not {spec}")
    target = ModuleSpec.vn(spec.field_spec, spec.p - 2)
    return ModuleVector(target, vector.coeffs @ psi_matrix(spec.field_spec))


def weight(vector: ModuleVector) -> int:
    """Largest index of a nonzero coefficient, or -1 for the zero vector."""
    support = np.flatnonzero(vector.coeffs)
    return int(support[-1]) if len(support) else -1


def filtration_member(vector: ModuleVector, index: int) -> bool:
    """Is a vector in the filtration term C_index = {f : weight(f) <= index}?"""
    return weight(vector) <= index


def filtration_basis(spec: ModuleSpec, index: int) -> galois.FieldArray:
    """Basis of the filtration term C_index."""
    return spec.field.Identity(spec.dim)[: max(index + 1, 0)]


@dataclasses.dataclass(frozen=True)
class CoordinateSubmodule:
    """A subspace spanned by a set of basis vectors."""

    spec: ModuleSpec
    indices: tuple[int, ...]

    def __contains__(self, vector: ModuleVector) -> bool:
        outside = [index for index in range(self.spec.dim) if index not in self.indices]
        return vector.spec == self.spec and not np.any(vector.coeffs[outside])

    def basis(self) -> galois.FieldArray:
        """Basis vectors of this subspace."""
        return self.spec.field.Identity(self.spec.dim)[list(self.indices)]

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)


def lambda_w_submodule(field_spec: FieldSpec) -> CoordinateSubmodule:
    """The codimension-2 submodule W = <bar(x^(p-1)y), ..., bar(xy^(p-1))> of Lambda(q)."""
    spec = ModuleSpec.dual(field_spec)
    return CoordinateSubmodule(spec, tuple(range(1, spec.p)))


################################################################################
# subspaces, represented by matrices whose rows form a basis


def row_space(rows: galois.FieldArray) -> galois.FieldArray:
    """Reduced basis for the span of a collection of row vectors."""
    if rows.shape[0] == 0:
        return rows
    reduced = rows.row_reduce()
    return reduced[np.any(reduced != 0, axis=1)]


def annihilator(basis: galois.FieldArray, dim: int) -> galois.FieldArray:
    """Basis for the vectors y with x . y = 0 for every x in the span of the given rows."""
    field = type(basis)
    if basis.shape[0] == 0 or not np.any(basis):
        return field.Identity(dim)
    if np.linalg.matrix_rank(basis) == dim:
        return field.Zeros((0, dim))
    return basis.null_space()


def left_kernel(matrix: galois.FieldArray) -> galois.FieldArray:
    """Basis for the vectors x with x @ matrix = 0."""
    return annihilator(type(matrix)(matrix.T), matrix.shape[0])


def subspace_intersection(
    basis_a: galois.FieldArray, basis_b: galois.FieldArray
) -> galois.FieldArray:
    """Intersection of two subspaces."""
    dim = basis_a.shape[1]
    constraints = np.concatenate([annihilator(basis_a, dim), annihilator(basis_b, dim)])
    constraints = type(basis_a)(constraints)
    if constraints.shape[0] == 0:
        return type(basis_a).Identity(dim)
    return left_kernel(type(basis_a)(constraints.T))


def subspace_sum(*bases: galois.FieldArray) -> galois.FieldArray:
    """Sum of subspaces."""
    return row_space(type(bases[0])(np.concatenate(bases)))


def subspace_contains(basis: galois.FieldArray, vectors: galois.FieldArray) -> bool:
    """Do the rows of an array lie in the span of a basis?"""
    if vectors.shape[0] == 0:
        return True
    if basis.shape[0] == 0:
        return not np.any(vectors)
    stacked = type(basis)(np.concatenate([basis, vectors]))
    return bool(np.linalg.matrix_rank(stacked) == np.linalg.matrix_rank(basis))


def dimension(basis: galois.FieldArray) -> int:
    """Dimension of the span of a collection of rows."""
    return int(np.linalg.matrix_rank(basis)) if basis.shape[0] else 0


################################################################################
# random triples


def random_triples(
    field_spec: FieldSpec,
    num: int,
    *,
    lower_triangular: bool = False,
    frobenius_part: bool = True,
    seed: int | None = None,
) -> list[DTriple]:
    """Random triples (phi, lambda, g), optionally with g lower triangular or phi trivial."""
    rng = np.random.default_rng(get_scrambled_seed(seed) if seed is not None else None)
    field = field_spec.field
    triples = []
    while len(triples) < num:
        scalar_val, aa, bb, cc, dd = (int(val) for val in rng.integers(field_spec.q, size=5))
        scalar = field(scalar_val)
        mat = field([[aa, 0 if lower_triangular else bb], [cc, dd]])
        if scalar == 0 or np.linalg.det(mat) == 0:
            continue
        aut_exp = int(rng.integers(field_spec.m)) if frobenius_part else 0
        triples.append(DTriple(aut_exp, scalar, mat))
    return triples
