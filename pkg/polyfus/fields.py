"""Finite fields GF(p^m): construction, arithmetic, Frobenius maps, and primitive elements

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

Field elements are galois FieldArrays over GF(q), q = p^m, built with a fixed irreducible modulus.
The integer representation of an element with power-basis coefficients (c_0, ..., c_{m-1}),
constant term first, is sum_k c_k p^k.  Elements are scanned in this order whenever a
"least" element is requested.
"""

from __future__ import annotations

import dataclasses
import functools
import logging
from collections.abc import Sequence
from typing import Literal

import galois
import numpy as np

logger = logging.getLogger(__name__)

MAX_FIELD_ORDER = 2**32

FieldOp = Literal["add", "mul", "inv", "pow"]


@dataclasses.dataclass(frozen=True)
class FieldSpec:
    """A finite field GF(p^m), fixed by its characteristic, degree, and modulus.

    The modulus is a monic irreducible polynomial over GF(p) of degree m, stored as a tuple of m + 1
    residues with the constant term first.
    """

    p: int
    m: int
    modulus: tuple[int, ...]

    def __post_init__(self) -> None:
        if not galois.is_prime(self.p):
            raise ValueError(f"Field characteristic must be prime (provided: {self.p})")
        if self.m < 1:
            raise ValueError(f"Field extension degree must be at least 1 (provided: {self.m})")
        if self.p**self.m > MAX_FIELD_ORDER:
            raise ValueError(f"Field order {self.q} exceeds the size cap {MAX_FIELD_ORDER}")
        if len(self.modulus) != self.m + 1 or self.modulus[-1] != 1:
            raise ValueError(f"Field modulus must be monic of degree {self.m}: {self.modulus}")
        if any(not 0 <= coeff < self.p for coeff in self.modulus):
            raise ValueError(f"Field modulus coefficients must be residues mod {self.p}")
        if not self.modulus_poly.is_irreducible():
            raise ValueError(f"Field modulus is reducible over GF({self.p}): {self.modulus}")

    @property
    def q(self) -> int:
        """Order of this field."""
        return self.p**self.m

    @property
    def modulus_poly(self) -> galois.Poly:
        """The modulus as a galois polynomial over the prime field."""
        return galois.Poly(self.modulus[::-1], field=galois.GF(self.p))

    @functools.cached_property
    def field(self) -> type[galois.FieldArray]:
        """The galois FieldArray class for this field."""
        if self.m == 1:
            return galois.GF(self.p)
        return galois.GF(self.p**self.m, irreducible_poly=self.modulus_poly)

    @property
    def p_prime_part(self) -> int:
        """The p'-part m_{p'} of the extension degree m, i.e., the order of O^p(Aut(K))."""
        return p_prime_part(self.m, self.p)

    def to_json(self) -> dict[str, object]:
        """Serialize this field specification."""
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @staticmethod
    def from_json(data: dict[str, object]) -> FieldSpec:
        """Deserialize a field specification."""
        modulus = data["modulus"]
        assert isinstance(modulus, list)
        return FieldSpec(int(str(data["p"])), int(str(data["m"])), tuple(int(c) for c in modulus))

    def __str__(self) -> str:
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"


def p_prime_part(number: int, prime: int) -> int:
    """The largest divisor of a number that is coprime to a given prime."""
    while number % prime == 0:
        number //= prime
    return number


@functools.cache
def field_make(p: int, m: int = 1) -> FieldSpec:
    """Construct GF(p^m) with the first monic irreducible modulus of degree m.

    "First" is in the order that galois.irreducible_polys yields them.  This order reproduces the
    documented moduli: GF(3^2) gets x^2 + 1 and GF(5^2) gets x^2 + 2.  Moduli are stored constant
    term first, so these are (1, 0, 1) and (2, 0, 1).
    """
    if not galois.is_prime(p):
        raise ValueError(f"Field characteristic must be prime (provided: {p})")
    if m < 1:
        raise ValueError(f"Field extension degree must be at least 1 (provided: {m})")
    if p**m > MAX_FIELD_ORDER:
        raise ValueError(f"Field order {p}^{m} exceeds the size cap {MAX_FIELD_ORDER}")
    poly = next(galois.irreducible_polys(p, m))
    modulus = tuple(int(coeff) for coeff in poly.coeffs[::-1])
    logger.debug(f"GF({p}^{m}) uses modulus {modulus}")
    return FieldSpec(p, m, modulus)


################################################################################
# field elements


def field_of(value: galois.FieldArray) -> FieldSpec:
    """Recover the FieldSpec of a field element (or array)."""
    field = type(value)
    if field.degree == 1:
        return field_make(field.characteristic)
    modulus = tuple(int(coeff) for coeff in field.irreducible_poly.coeffs[::-1])
    return FieldSpec(field.characteristic, field.degree, modulus)


def to_coeffs(value: galois.FieldArray) -> tuple[int, ...]:
    """Power-basis coefficients of a field element, constant term first."""
    return tuple(int(coeff) for coeff in value.vector()[::-1])


def from_coeffs(spec: FieldSpec, coeffs: Sequence[int]) -> galois.FieldArray:
    """Build a field element from its power-basis coefficients, constant term first."""
    if len(coeffs) != spec.m or any(not 0 <= coeff < spec.p for coeff in coeffs):
        raise ValueError(f"Invalid coefficient vector for {spec}: {list(coeffs)}")
    return spec.field(sum(coeff * spec.p**kk for kk, coeff in enumerate(coeffs)))


def field_arith(
    aa: galois.FieldArray, bb: galois.FieldArray | None, op: FieldOp, k: int | None = None
) -> galois.FieldArray:
    """Apply a field operation: add, mul, inv (of the first argument), or pow (by k)."""
    if bb is not None and type(aa) is not type(bb):
        raise ValueError(f"Cannot combine elements of different fields: {type(aa)}, {type(bb)}")
    if op == "add":
        assert bb is not None
        return aa + bb
    if op == "mul":
        assert bb is not None
        return aa * bb
    if op == "inv":
        if np.any(aa == 0):
            raise ZeroDivisionError("Cannot invert zero")
        return aa**-1
    if op == "pow":
        if k is None:
            raise ValueError("Exponentiation requires an exponent")
        if k < 0 and np.any(aa == 0):
            raise ZeroDivisionError("Cannot raise zero to a negative power")
        return aa**k
    raise ValueError(f"Unrecognized field operation: {op}")


def frobenius(value: galois.FieldArray, k: int) -> galois.FieldArray:
    """Apply the k-th power of the Frobenius map x -> x^p, entrywise."""
    field = type(value)
    power = k % field.degree
    if power == 0:
        return value.copy()
    return value ** (field.characteristic**power)


def subfield_degree(value: galois.FieldArray) -> int:
    """Degree over GF(p) of the subfield generated by the entries of an array."""
    degree = type(value).degree
    return next(
        kk
        for kk in range(1, degree + 1)
        if degree % kk == 0 and np.array_equal(frobenius(value, kk), value)
    )


@functools.cache
def primitive_element(spec: FieldSpec) -> galois.FieldArray:
    """The least element of multiplicative order q - 1."""
    primes, _ = galois.factors(spec.q - 1) if spec.q > 2 else ([], [])
    one = spec.field(1)
    for val in range(1, spec.q):
        element = spec.field(val)
        if all(element ** ((spec.q - 1) // prime) != one for prime in primes):
            return element
    raise ValueError(f"No primitive element found for {spec}")  # pragma: no cover


def multiplicative_order(value: galois.FieldArray) -> int:
    """Multiplicative order of a nonzero field element."""
    if value == 0:
        raise ValueError("Zero has no multiplicative order")
    return int(value.multiplicative_order())


################################################################################
# randomness


def get_scrambled_seed(seed: int) -> int:
    """Scramble a seed, so that nearby seeds give unrelated streams."""
    return int(np.random.default_rng(seed).integers(np.iinfo(np.int32).max + 1))


def get_random_array(
    spec: FieldSpec, shape: int | tuple[int, ...], *, nonzero: bool = False, seed: int | None = None
) -> galois.FieldArray:
    """Get a random array over a given finite field, optionally with nonzero entries only."""
    seed = get_scrambled_seed(seed) if seed is not None else None
    low = 1 if nonzero else 0
    return spec.field.Random(shape, low=low, seed=seed)
