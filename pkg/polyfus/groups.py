"""The p-groups S = U x| V and their parabolic groups P*, with vectorized arithmetic and subgroups

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

A PolynomialGroup is the group S = U x| V, where V is one of the modules V_n(q) (1 <= n <= p) or
Lambda(q), and U = {u_c = [[1, 0], [c, 1]] : c in K} acts on V through the module action.  The group
S sits inside the parabolic group P* = D* x| V, whose elements are written (phi, theta, A, v) and
multiplied as
    (phi, theta, A, v) * (Phi, Pi, B, w) = (phi + Phi, theta^s Pi, A^s B, v^s . (Pi, B) + w),
where s = Frob^Phi acts entrywise and "." is the module action.

Elements of S are handled in bulk as "rows": arrays of shape (num_elements, 1 + dim V) whose first
column is the parameter c of u_c and whose remaining columns are a vector in V.  The row (c, v)
represents the product u_c * v, so that (c_1, v_1) * (c_2, v_2) = (c_1 + c_2, v_1 . u_(c_2) + v_2).
Each row also has an integer key, sum_j row[j] q^j, used to store subgroups as sorted key arrays.

!!! WARNINGS !!!

Commutators follow the convention [g, h] = g^-1 h^-1 g h, and conjugates g^h = h^-1 g h.
Enumerating a subgroup raises a SizeCapError if the subgroup would have more elements than the cap
returned by get_size_cap, which may be set with the POLYFUS_SIZE_CAP environment variable.
"""

from __future__ import annotations

import dataclasses
import functools
import itertools
import logging
import os
import threading
from collections.abc import Iterable, Sequence

import galois
import numpy as np
import numpy.typing as npt

from polyfus.fields import (
    FieldSpec,
    field_make,
    get_scrambled_seed,
    primitive_element,
    to_coeffs,
)
from polyfus.modules import (
    DTriple,
    ModuleKind,
    ModuleSpec,
    ModuleVector,
    annihilator,
    dimension,
    left_kernel,
    module_matrix,
    row_space,
    subspace_contains,
    unipotent_matrix,
)

logger = logging.getLogger(__name__)

DEFAULT_SIZE_CAP = 10**6
MAX_KEY_ORDER = 2**62

Rows = galois.FieldArray
Keys = npt.NDArray[np.int64]


class SizeCapError(ValueError):
    """An enumeration would exceed the configured size cap."""


def get_size_cap() -> int:
    """Maximum number of elements in an enumerated subgroup."""
    return int(os.environ.get("POLYFUS_SIZE_CAP", DEFAULT_SIZE_CAP))


def check_size(order: int, what: str) -> None:
    """Raise a SizeCapError if something is too big to enumerate."""
    cap = get_size_cap()
    if order > cap:
        raise SizeCapError(f"Cannot enumerate {what} with {order} elements (size cap: {cap})")


################################################################################
# polynomial p-groups


@dataclasses.dataclass(frozen=True)
class PolynomialGroup:
    """The p-group S = U x| V for a module V = V_n(q) or Lambda(q)."""

    module: ModuleSpec

    def __post_init__(self) -> None:
        if self.p == 2:
            raise ValueError("Polynomial p-groups require an odd prime p (provided: p = 2)")
        if self.module.kind is ModuleKind.VN and not 1 <= self.module.n <= self.p:
            raise ValueError(f"S_n(q) requires 1 <= n <= p = {self.p} (provided: n = {self.n})")

    @staticmethod
    def sn(p: int, m: int, n: int) -> PolynomialGroup:
        """The group S_n(q) = U x| V_n(q)."""
        return PolynomialGroup(ModuleSpec.vn(field_make(p, m), n))

    @staticmethod
    def slambda(p: int, m: int) -> PolynomialGroup:
        """The group S_Lambda(q) = U x| Lambda(q)."""
        return PolynomialGroup(ModuleSpec.dual(field_make(p, m)))

    @staticmethod
    def from_target(p: int, m: int, target: str) -> PolynomialGroup:
        """Build a group from a target string: 'Sn:<n>' or 'SLambda'."""
        if target == "SLambda":
            return PolynomialGroup.slambda(p, m)
        if target.startswith("Sn:") and target[3:].isdigit():
            return PolynomialGroup.sn(p, m, int(target[3:]))
        raise ValueError(f"Unrecognized group target (expected 'Sn:<n>' or 'SLambda'): {target}")

    @property
    def field_spec(self) -> FieldSpec:
        """The underlying field specification."""
        return self.module.field_spec

    @property
    def field(self) -> type[galois.FieldArray]:
        """The galois FieldArray class of the underlying field."""
        return self.module.field

    @property
    def p(self) -> int:
        """Characteristic of the underlying field."""
        return self.field_spec.p

    @property
    def m(self) -> int:
        """Degree of the underlying field over GF(p)."""
        return self.field_spec.m

    @property
    def q(self) -> int:
        """Order of the underlying field."""
        return self.field_spec.q

    @property
    def n(self) -> int:
        """Degree of the module: n for V_n(q), and p for Lambda(q)."""
        return self.module.n

    @property
    def dim(self) -> int:
        """Dimension of the module V over K."""
        return self.module.dim

    @property
    def is_lambda(self) -> bool:
        """Is this S_Lambda(q)?"""
        return self.module.kind is ModuleKind.LAMBDA

    @property
    def order(self) -> int:
        """Order of S, namely q^(dim V + 1)."""
        return self.q ** (self.dim + 1)

    @property
    def name(self) -> str:
        """Name of this group, such as S_2(9) or S_Lambda(9)."""
        return f"S_Lambda({self.q})" if self.is_lambda else f"S_{self.n}({self.q})"

    def __str__(self) -> str:
        return self.name

    def to_json(self) -> dict[str, object]:
        """Serialize this group."""
        return {"field": self.field_spec.to_json(), "kind": self.module.kind.value, "n": self.n}

    @property
    def target(self) -> str:
        """Target string of this group: 'Sn:<n>' or 'SLambda'."""
        return "SLambda" if self.is_lambda else f"Sn:{self.n}"

    def params(self) -> dict[str, object]:
        """Parameters identifying this group in reports."""
        return {"p": self.p, "m": self.m, "target": self.target}

    @functools.cached_property
    def field_basis(self) -> galois.FieldArray:
        """A basis of K over GF(p): the powers 1, t, ..., t^(m-1) of the modulus root."""
        return self.field([self.p**kk for kk in range(self.m)])

    def unipotent(self, param: int | galois.FieldArray) -> galois.FieldArray:
        """Matrix of u_c on V."""
        return unipotent_matrix(self.module, param)

    ############################################################
    # rows: vectorized arithmetic in S

    def rows(self, data: Sequence[Sequence[int]] | npt.NDArray[np.int_]) -> Rows:
        """Rows (c, v) from integer representations of their entries."""
        rows = self.field(np.array(data, dtype=int).reshape(-1, self.dim + 1))
        return rows

    def identity_rows(self, num: int = 1) -> Rows:
        """Rows of the identity element."""
        return self.field.Zeros((num, self.dim + 1))

    def u_rows(self, params: Iterable[int] | galois.FieldArray) -> Rows:
        """Rows of the elements u_c."""
        params = self.field(np.array([int(param) for param in params], dtype=int))
        rows = self.identity_rows(len(params))
        rows[:, 0] = params
        return rows

    def v_rows(self, vectors: galois.FieldArray) -> Rows:
        """Rows of module vectors."""
        vectors = vectors.reshape(-1, self.dim)
        rows = self.identity_rows(len(vectors))
        rows[:, 1:] = vectors
        return rows

    def random_rows(self, num: int, *, seed: int | None = None) -> Rows:
        """Uniformly random elements of S."""
        seed = get_scrambled_seed(seed) if seed is not None else None
        return self.field.Random((num, self.dim + 1), seed=seed)

    def multiply(self, left: Rows, right: Rows) -> Rows:
        """Products of rows, broadcasting a single row against many."""
        left, right = _broadcast(left, right)
        result = self.identity_rows(len(left))
        result[:, 0] = left[:, 0] + right[:, 0]
        vectors = right[:, 1:].copy()
        params = right[:, 0].view(np.ndarray)
        for param in np.unique(params):
            mask = params == param
            vectors[mask] += left[mask, 1:] @ self.unipotent(int(param))
        result[:, 1:] = vectors
        return result

    def inverse(self, rows: Rows) -> Rows:
        """Inverses of rows: (c, v)^-1 = (-c, -v . u_(-c))."""
        result = self.identity_rows(len(rows))
        result[:, 0] = -rows[:, 0]
        return self.multiply(self.v_rows(-rows[:, 1:]), result)

    def conjugate(self, rows: Rows, by: Rows) -> Rows:
        """Conjugates rows^by = by^-1 * rows * by."""
        return self.multiply(self.multiply(self.inverse(by), rows), by)

    def commutator(self, left: Rows, right: Rows) -> Rows:
        """Commutators [left, right] = left^-1 right^-1 left right."""
        left, right = _broadcast(left, right)
        return self.multiply(self.inverse(left), self.conjugate(left, right))

    def power(self, rows: Rows, exponent: int) -> Rows:
        """Powers of rows, by repeated squaring."""
        if exponent < 0:
            return self.power(self.inverse(rows), -exponent)
        result, base = self.identity_rows(len(rows)), rows
        while exponent:
            if exponent & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            exponent >>= 1
        return result

    def row_orders(self, rows: Rows) -> npt.NDArray[np.int_]:
        """Orders of elements of S, which are 1, p, or p^2."""
        orders = np.where(np.any(rows != 0, axis=1), self.p, 1)
        powers = self.power(rows, self.p)
        orders[np.any(powers != 0, axis=1)] = self.p**2
        return orders

    def is_identity(self, rows: Rows) -> npt.NDArray[np.bool_]:
        """Which rows are the identity?"""
        return ~np.any(rows != 0, axis=1)

    def keys(self, rows: Rows) -> Keys:
        """Integer keys of rows."""
        if self.order >= MAX_KEY_ORDER:
            raise SizeCapError(f"Elements of {self} are too large for integer keys")
        weights = self.q ** np.arange(self.dim + 1, dtype=np.int64)
        return rows.view(np.ndarray).astype(np.int64) @ weights

    def decode(self, keys: Keys) -> Rows:
        """Rows from integer keys."""
        weights = self.q ** np.arange(self.dim + 1, dtype=np.int64)
        return self.field((np.asarray(keys, dtype=np.int64)[:, None] // weights) % self.q)

    def row_to_json(self, row: Rows) -> dict[str, object]:
        """Serialize an element of S as {'c': ..., 'vec': ...}."""
        return {
            "c": list(to_coeffs(row[0])),
            "vec": ModuleVector(self.module, row[1:].copy()).to_json(),
        }

    ############################################################
    # parabolic elements

    def element(
        self,
        aut_exp: int = 0,
        scalar: int | galois.FieldArray = 1,
        mat: Sequence[Sequence[int]] | galois.FieldArray | None = None,
        vec: Sequence[int] | galois.FieldArray | None = None,
    ) -> ParabolicElement:
        """An element (phi, theta, A, v) of the parabolic group P^dagger."""
        triple = DTriple.build(self.field_spec, scalar, mat, aut_exp)
        vector = self.field.Zeros(self.dim) if vec is None else self.field(vec)
        return ParabolicElement(self, triple, vector)

    def identity(self) -> ParabolicElement:
        """The identity element."""
        return self.element()

    def from_row(self, row: Rows) -> ParabolicElement:
        """The parabolic element u_c * v of a row (c, v)."""
        mat = self.field([[1, 0], [int(row[0]), 1]])
        return ParabolicElement(self, DTriple(0, self.field(1), mat), row[1:].copy())

    ############################################################
    # structural (linear algebra) computations inside V

    def commutator_space(self, basis: galois.FieldArray) -> galois.FieldArray:
        """Basis of [W, S] for a K-subspace W of V, i.e., the span of all W(u_c - 1)."""
        identity = self.field.Identity(self.dim)
        if basis.shape[0] == 0:
            return basis
        images = [basis @ (self.unipotent(cc) - identity) for cc in range(1, self.q)]
        return row_space(type(basis)(np.concatenate(images)))

    def commutator_space_with(self, basis: galois.FieldArray, param: int) -> galois.FieldArray:
        """Basis of [W, u_c] = W(u_c - 1)."""
        if basis.shape[0] == 0:
            return basis
        return row_space(basis @ (self.unipotent(param) - self.field.Identity(self.dim)))

    def fixed_space(self, params: Iterable[int]) -> galois.FieldArray:
        """Basis of the vectors in V fixed by every u_c for the given parameters c."""
        identity = self.field.Identity(self.dim)
        blocks = [self.unipotent(cc) - identity for cc in params]
        if not blocks:
            return identity
        return left_kernel(self.field(np.concatenate(blocks, axis=1)))

    def upper_central_terms(self) -> list[tuple[list[int], galois.FieldArray]]:
        """Terms Z_i = <u_c : c in U_i> W_i of the upper central series, i >= 1, up to Z = S.

        Each term is a pair (U_i, W_i): the parameters c with u_c in Z_i, and a basis for Z_i & V.
        Here W_i = {v : v(u_c - 1) in W_(i-1) for c in a basis of K} and U_i = {c : V(u_c - 1)
        lies in W_(i-1)}, since commutators of generators with Z_i determine membership.
        """
        identity = self.field.Identity(self.dim)
        previous = self.field.Zeros((0, self.dim))
        terms: list[tuple[list[int], galois.FieldArray]] = []
        for _ in range(self.dim + 2):
            constraints = annihilator(previous, self.dim).T
            blocks = [(self.unipotent(cc) - identity) @ constraints for cc in self.field_basis]
            basis = left_kernel(self.field(np.concatenate(blocks, axis=1)))
            params = [
                cc
                for cc in range(self.q)
                if not np.any((self.unipotent(cc) - identity) @ constraints)
            ]
            terms.append((params, basis))
            if len(params) == self.q and dimension(basis) == self.dim:
                return terms
            previous = basis
        raise ValueError(f"Upper central series of {self} failed to terminate")  # pragma: no cover

    def lower_central_terms(self) -> list[galois.FieldArray]:
        """Bases of the terms [V, S; i] = [V, S, ..., S] of the commutator chain, for i >= 1.

        The list starts with [V, S] = [S, S] and ends with the trivial subspace.
        """
        terms = [self.commutator_space(self.field.Identity(self.dim))]
        while terms[-1].shape[0]:
            terms.append(self.commutator_space(terms[-1]))
        return terms


def _broadcast(left: Rows, right: Rows) -> tuple[Rows, Rows]:
    if len(left) == len(right):
        return left, right
    if len(left) == 1:
        return type(left)(np.repeat(left, len(right), axis=0)), right
    if len(right) == 1:
        return left, type(right)(np.repeat(right, len(left), axis=0))
    raise ValueError(f"Cannot broadcast {len(left)} rows against {len(right)} rows")


################################################################################
# parabolic group elements


@dataclasses.dataclass(frozen=True, eq=False)
class ParabolicElement:
    """An element (phi, theta, A, v) of P^dagger = D^dagger x| V."""

    group: PolynomialGroup
    triple: DTriple
    vec: galois.FieldArray

    def __post_init__(self) -> None:
        if type(self.vec) is not self.group.field or self.vec.shape != (self.group.dim,):
            raise ValueError(f"Module part must be a vector of length {self.group.dim} over K")
        if type(self.triple.scalar) is not self.group.field:
            raise ValueError("Triple and module are defined over different fields")

    @property
    def aut_exp(self) -> int:
        """Exponent k of the Frobenius part Frob^k."""
        return self.triple.aut_exp

    @property
    def scalar(self) -> galois.FieldArray:
        """The scalar theta."""
        return self.triple.scalar

    @property
    def mat(self) -> galois.FieldArray:
        """The 2x2 matrix A."""
        return self.triple.mat

    def _check(self, other: ParabolicElement) -> None:
        if self.group != other.group:
            raise ValueError(f"Cannot combine elements of {self.group} and {other.group}")

    def __mul__(self, other: ParabolicElement) -> ParabolicElement:
        self._check(other)
        twisted = _frobenius_vector(self.vec, other.aut_exp)
        vec = twisted @ module_matrix(self.group.module, other.triple) + other.vec
        return ParabolicElement(self.group, self.triple * other.triple, vec)

    def inverse(self) -> ParabolicElement:
        """The inverse element."""
        triple = self.triple.inverse()
        twisted = _frobenius_vector(self.vec, triple.aut_exp)
        vec = -(twisted @ module_matrix(self.group.module, triple))
        return ParabolicElement(self.group, triple, vec)

    def __pow__(self, exponent: int) -> ParabolicElement:
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = self.group.identity(), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ParabolicElement)
            and self.group == other.group
            and self.triple == other.triple
            and np.array_equal(self.vec, other.vec)
        )

    def __hash__(self) -> int:
        return hash((self.group, self.triple, self.vec.tobytes()))

    def is_identity(self) -> bool:
        """Is this the identity element?"""
        return self == self.group.identity()

    def in_P(self) -> bool:
        """Is this element in P = D x| V?"""
        return self.triple.in_D()

    def in_P_star(self) -> bool:
        """Is this element in P* = D* x| V?"""
        return self.triple.in_D_star()

    def is_lower_triangular(self) -> bool:
        """Is the matrix part lower triangular?"""
        return self.mat[0, 1] == 0

    def in_S(self) -> bool:
        """Is this element in S, i.e., of the form u_c * v?"""
        mat = self.mat
        return (
            self.aut_exp == 0
            and self.scalar == 1
            and mat[0, 0] == 1
            and mat[1, 1] == 1
            and mat[0, 1] == 0
        )

    def in_U(self) -> bool:
        """Is this element in U?"""
        return self.in_S() and not np.any(self.vec)

    def in_V(self) -> bool:
        """Is this element in V?"""
        return self.in_S() and self.mat[1, 0] == 0

    def in_B(self) -> bool:
        """Is this element in B = N_(D*)(U), with no module part?"""
        return self.in_P_star() and self.is_lower_triangular() and not np.any(self.vec)

    def in_Sigma(self) -> bool:
        """Is this element in the torus Sigma of D*, with no module part?"""
        return self.in_B() and self.mat[1, 0] == 0

    def to_row(self) -> Rows:
        """The row (c, v) of an element of S."""
        if not self.in_S():
            raise ValueError("Only elements of S can be written as rows")
        row = self.group.identity_rows()
        row[0, 0] = self.mat[1, 0]
        row[0, 1:] = self.vec
        return row

    def to_json(self) -> dict[str, object]:
        """Serialize this element."""
        data = self.triple.to_json()
        data["vec"] = ModuleVector(self.group.module, self.vec.copy()).to_json()
        return data


def _frobenius_vector(vec: galois.FieldArray, power: int) -> galois.FieldArray:
    degree = type(vec).degree
    power %= degree
    return vec ** (type(vec).characteristic**power) if power else vec


def pconj(gg: ParabolicElement, hh: ParabolicElement) -> ParabolicElement:
    """The conjugate g^h = h^-1 g h."""
    return hh.inverse() * gg * hh


def pcomm(gg: ParabolicElement, hh: ParabolicElement) -> ParabolicElement:
    """The commutator [g, h] = g^-1 h^-1 g h."""
    return gg.inverse() * hh.inverse() * gg * hh


def element_order(element: ParabolicElement) -> int:
    """Order of a parabolic element.

    The order k of the image in D^dagger is found by brute force.  The power element^k then lies in
    the elementary abelian group V, so it has order 1 or p.
    """
    identity = DTriple.identity(element.group.field_spec)
    triple, order = element.triple, 1
    while triple != identity:
        triple = triple * element.triple
        order += 1
    return order if (element**order).is_identity() else order * element.group.p


################################################################################
# subgroups of S


class Subgroup:
    """A subgroup of S with a lazily enumerated set of element keys.

    A subgroup is given by generators, by its element keys, or by its structure: an additive group
    of parameters c for the elements u_c, together with a basis for a K-subspace W of V that is
    normalized by these elements.  Structured subgroups know their order without enumeration.
    """

    def __init__(
        self,
        group: PolynomialGroup,
        gens: Rows | None = None,
        *,
        keys: Keys | None = None,
        structure: tuple[Sequence[int], galois.FieldArray] | None = None,
        name: str = "",
    ) -> None:
        if gens is None and keys is None and structure is None:
            raise ValueError("A subgroup needs generators, elements, or structure")
        self.group = group
        self.name = name
        self._gens = gens
        self._keys = None if keys is None else np.unique(np.asarray(keys, dtype=np.int64))
        self._structure = None
        if structure is not None:
            params, basis = structure
            self._structure = sorted(int(param) for param in params), row_space(basis)
        self._lock = threading.Lock()

    @staticmethod
    def from_structure(
        group: PolynomialGroup, params: Sequence[int], basis: galois.FieldArray, name: str = ""
    ) -> Subgroup:
        """The subgroup {u_c * v : c in params, v in span(basis)}."""
        return Subgroup(group, structure=(params, basis), name=name)

    @staticmethod
    def whole(group: PolynomialGroup) -> Subgroup:
        """The group S itself."""
        return Subgroup.from_structure(
            group, list(range(group.q)), group.field.Identity(group.dim), name=group.name
        )

    @property
    def structure(self) -> tuple[list[int], galois.FieldArray] | None:
        """Parameters of the elements u_c and a basis for the intersection with V, if known."""
        return self._structure

    @property
    def keys(self) -> Keys:
        """Sorted integer keys of all elements."""
        with self._lock:
            if self._keys is None:
                if self._structure is not None:
                    self._keys = _structure_keys(self.group, *self._structure)
                else:
                    assert self._gens is not None
                    self._keys = closure_keys(self.group, self._gens)
            return self._keys

    @property
    def gens(self) -> Rows:
        """Generators of this subgroup."""
        with self._lock:
            if self._gens is None:
                if self._structure is not None:
                    params, basis = self._structure
                    scaled = [beta * basis for beta in self.group.field_basis]
                    vectors = self.group.field(np.concatenate(scaled))
                    u_rows = self.group.u_rows(additive_basis(self.group, params))
                    v_rows = self.group.v_rows(vectors)
                    self._gens = type(vectors)(np.concatenate([u_rows, v_rows]))
                else:
                    assert self._keys is not None
                    self._gens = sift_generators(self.group, self._keys)
            return self._gens

    @property
    def elements(self) -> Rows:
        """Rows of all elements."""
        return self.group.decode(self.keys)

    @property
    def order(self) -> int:
        """Number of elements."""
        if self._structure is not None:
            params, basis = self._structure
            return len(params) * self.group.q ** basis.shape[0]
        return len(self.keys)

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"Subgroup({self.name or '?'} <= {self.group}, order={self.order})"

    def contains(self, rows: Rows) -> npt.NDArray[np.bool_]:
        """Which rows are in this subgroup?"""
        return np.isin(self.group.keys(rows), self.keys)

    def __contains__(self, element: ParabolicElement | Rows) -> bool:
        if isinstance(element, ParabolicElement):
            if not element.in_S():
                return False
            element = element.to_row()
        return bool(np.all(self.contains(element.reshape(-1, self.group.dim + 1))))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup) or self.group != other.group:
            return False
        if self.structure is not None and other.structure is not None:
            return self.structure[0] == other.structure[0] and np.array_equal(
                self.structure[1], other.structure[1]
            )
        return np.array_equal(self.keys, other.keys)

    def __hash__(self) -> int:
        return hash((self.group, self.keys.tobytes()))

    def __le__(self, other: Subgroup) -> bool:
        if self.structure is not None and other.structure is not None:
            return set(self.structure[0]) <= set(other.structure[0]) and subspace_contains(
                other.structure[1], self.structure[1]
            )
        return bool(np.all(np.isin(self.keys, other.keys)))

    def __and__(self, other: Subgroup) -> Subgroup:
        return Subgroup(self.group, keys=np.intersect1d(self.keys, other.keys))

    def join(self, *others: Subgroup, name: str = "") -> Subgroup:
        """The subgroup generated by this subgroup and others."""
        gens = type(self.gens)(np.concatenate([self.gens] + [other.gens for other in others]))
        return Subgroup(self.group, gens, name=name)

    def product(self, other: Subgroup, name: str = "") -> Subgroup:
        """The product HK of this subgroup H and a subgroup K that normalizes H (or vice versa)."""
        check_size(self.order * other.order, f"a product of subgroups of {self.group}")
        right = other.elements
        keys = [
            self.group.keys(self.group.multiply(row.reshape(1, -1), right))
            for row in self.elements
        ]
        return Subgroup(self.group, keys=np.unique(np.concatenate(keys)), name=name)

    def conjugate(self, by: Rows) -> Subgroup:
        """The conjugate subgroup H^s."""
        keys = self.group.keys(self.group.conjugate(self.elements, by.reshape(1, -1)))
        return Subgroup(self.group, keys=keys)

    def is_normalized_by(self, rows: Rows) -> bool:
        """Do all the given elements of S normalize this subgroup?"""
        return all(
            np.all(self.contains(self.group.conjugate(self.gens, row.reshape(1, -1))))
            for row in rows
        )

    def is_abelian(self) -> bool:
        """Is this subgroup abelian?"""
        gens = self.gens
        return all(
            np.all(self.group.is_identity(self.group.commutator(gens, gen.reshape(1, -1))))
            for gen in gens
        )

    def exponent(self) -> int:
        """Largest order of an element."""
        return int(np.max(self.group.row_orders(self.elements)))

    def commutator_with(self, other: Subgroup) -> Subgroup:
        """The commutator subgroup [H, K] for subgroups H, K with K normalizing H."""
        left, right = self.gens, other.gens
        comms = [self.group.commutator(left, gen.reshape(1, -1)) for gen in right]
        seeds = type(left)(np.concatenate(comms))
        conjugators = type(left)(np.concatenate([left, right]))
        return normal_closure(self.group, seeds, conjugators)

    def centralizer_in(self, ambient: Subgroup) -> Subgroup:
        """Elements of an ambient subgroup that commute with every element of this subgroup."""
        elements = ambient.elements
        mask = np.ones(len(elements), dtype=bool)
        for gen in self.gens:
            comms = self.group.commutator(elements, gen.reshape(1, -1))
            mask &= self.group.is_identity(comms)
        return Subgroup(self.group, keys=ambient.keys[mask])

    def normalizer_in(self, ambient: Subgroup) -> Subgroup:
        """Elements of an ambient subgroup that normalize this subgroup."""
        elements = ambient.elements
        mask = np.ones(len(elements), dtype=bool)
        for gen in self.gens:
            conj = self.group.conjugate(gen.reshape(1, -1), elements)
            mask &= self.contains(conj)
        return Subgroup(self.group, keys=ambient.keys[mask])

    def center(self) -> Subgroup:
        """The center of this subgroup."""
        return self.centralizer_in(self)


def additive_basis(group: PolynomialGroup, params: Iterable[int]) -> list[int]:
    """A basis over GF(p) for the additive group spanned by some field elements."""
    span = group.field([0])
    basis = []
    for param in params:
        if not np.any(span == param):
            basis.append(int(param))
            multiples = group.field(np.arange(group.p)) * group.field(int(param))
            span = type(span)(np.unique((span[:, None] + multiples[None, :]).ravel()))
    return basis


def _structure_keys(
    group: PolynomialGroup, params: Sequence[int], basis: galois.FieldArray
) -> Keys:
    check_size(len(params) * group.q ** basis.shape[0], f"a subgroup of {group}")
    vectors = group.field.Zeros((1, group.dim))
    if basis.shape[0]:
        combos = itertools.product(range(group.q), repeat=basis.shape[0])
        vectors = group.field(np.array(list(combos), dtype=int)) @ basis
    keys = [
        group.keys(group.multiply(group.u_rows([param]), group.v_rows(vectors)))
        for param in params
    ]
    return np.unique(np.concatenate(keys))


def closure_keys(group: PolynomialGroup, gens: Rows) -> Keys:
    """Keys of the subgroup generated by some rows, by breadth-first search."""
    cap = get_size_cap()
    gens = gens[~group.is_identity(gens)] if len(gens) else gens
    elements = group.keys(group.identity_rows())
    frontier = group.identity_rows()
    while len(frontier) and len(gens):
        products = [group.multiply(frontier, gen.reshape(1, -1)) for gen in gens]
        keys = np.unique(group.keys(type(gens)(np.concatenate(products))))
        new = np.setdiff1d(keys, elements, assume_unique=True)
        if len(elements) + len(new) > cap:
            raise SizeCapError(f"Subgroup of {group} exceeds the size cap {cap}")
        elements = np.union1d(elements, new)
        frontier = group.decode(new)
    logger.debug(f"Enumerated a subgroup of {group} with {len(elements)} elements")
    return elements


def sift_generators(group: PolynomialGroup, keys: Keys) -> Rows:
    """A small generating set for a subgroup given by its element keys."""
    gens = group.identity_rows(0)
    span = group.keys(group.identity_rows())
    remaining = np.asarray(keys, dtype=np.int64)
    while len(remaining := np.setdiff1d(remaining, span, assume_unique=True)):
        gens = type(gens)(np.concatenate([gens, group.decode(remaining[:1])]))
        span = closure_keys(group, gens)
    return gens


def normal_closure(group: PolynomialGroup, seeds: Rows, conjugators: Rows) -> Subgroup:
    """The smallest subgroup containing some rows and normalized by the given conjugators."""
    gens = seeds
    while True:
        subgroup = Subgroup(group, gens)
        missing = [seeds[:0]]
        for row in conjugators:
            conj = group.conjugate(subgroup.gens, row.reshape(1, -1))
            missing.append(conj[~subgroup.contains(conj)])
        missing_rows = type(seeds)(np.concatenate(missing))
        if not len(missing_rows):
            return subgroup
        gens = type(seeds)(np.concatenate([subgroup.gens, missing_rows]))


################################################################################
# standard subgroups

STANDARD_SUBGROUPS = ("U", "V", "Z", "Z2", "R", "Q", "[V,S]", "U[V,S]")


def standard_subgroups(
    group: PolynomialGroup, names: Iterable[str] | None = None
) -> dict[str, Subgroup]:
    """Standard subgroups of S, by name.

    Here Z and Z2 are the first two terms of the upper central series, R = UZ, and Q = UZ2.  The
    subgroup Q is undefined for S_1(q), and is left out unless requested explicitly.
    """
    q_defined = group.is_lambda or group.n > 1
    if names is None:
        names = [name for name in STANDARD_SUBGROUPS if name != "Q" or q_defined]
    everything = list(range(group.q))
    upper = group.upper_central_terms()
    subgroups = {}
    for name in names:
        if name == "U":
            params, basis = everything, group.field.Zeros((0, group.dim))
        elif name == "V":
            params, basis = [0], group.field.Identity(group.dim)
        elif name in ("Z", "Z2"):
            params, basis = upper[0 if name == "Z" else 1]
        elif name in ("R", "Q"):
            if name == "Q" and not q_defined:
                raise ValueError("The subgroup Q = UZ_2(S) is undefined for S_1(q)")
            params, basis = everything, upper[0 if name == "R" else 1][1]
        elif name in ("[V,S]", "U[V,S]"):
            params = [0] if name == "[V,S]" else everything
            basis = group.lower_central_terms()[0]
        else:
            raise ValueError(f"Unrecognized standard subgroup: {name}")
        subgroups[name] = Subgroup.from_structure(group, params, basis, name=name)
    return subgroups


@dataclasses.dataclass(frozen=True)
class ParabolicSubgroup:
    """A subgroup of P*, given by generators and its known order."""

    name: str
    gens: tuple[ParabolicElement, ...]
    order: int

    def normalizes(self, subgroup: Subgroup) -> bool:
        """Does every generator normalize a subgroup of S?"""
        rows = subgroup.gens
        return all(
            pconj(subgroup.group.from_row(row), gen) in subgroup
            for gen in self.gens
            for row in rows
        )


def parabolic_subgroups(group: PolynomialGroup) -> dict[str, ParabolicSubgroup]:
    """The torus Sigma & P* and the Borel subgroup B & P*, which normalize U.

    Sigma & P* is generated by scalars, diagonal matrices, and the generator Frob^(m_p) of
    O^p(Aut(K)); B & P* adds the subgroup U.
    """
    zeta = int(primitive_element(group.field_spec))
    p_part = group.m // group.field_spec.p_prime_part
    torus = [
        group.element(scalar=zeta),
        group.element(mat=[[zeta, 0], [0, 1]]),
        group.element(mat=[[1, 0], [0, zeta]]),
    ]
    if group.field_spec.p_prime_part > 1:
        torus.append(group.element(aut_exp=p_part))
    unipotent = [group.element(mat=[[1, 0], [int(cc), 1]]) for cc in group.field_basis]
    torus_order = group.field_spec.p_prime_part * (group.q - 1) ** 3
    return {
        "Sigma&P*": ParabolicSubgroup("Sigma&P*", tuple(torus), torus_order),
        "B&P*": ParabolicSubgroup("B&P*", tuple(torus + unipotent), torus_order * group.q),
    }
