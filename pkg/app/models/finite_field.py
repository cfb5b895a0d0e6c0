# app/models/finite_field.py
"""
Matrix groups over finite fields.

``FiniteField`` wraps a ``galois.GF(q)`` class with the few operations the
constructors need (integer coercion, roots of unity, square roots) and
``MatrixGroup`` enumerates the group generated by a list of square matrices
and turns it into a permutation group.

Matrices act on column vectors, so ``perm(M) * perm(N) == perm(M @ N)`` under
the composition convention of ``app.models.group``.
"""

from __future__ import annotations

import logging
from collections import deque
from functools import cached_property
from typing import Optional, Sequence, Union

import galois
import numpy as np

from app.core.config import settings
from app.core.errors import BadModulus, ElementNotInGroup, OrderCapExceeded
from app.models.group import Group, Perm

logger = logging.getLogger(__name__)

Scalar = Union[int, galois.FieldArray]


class FiniteField:
    """
    The field F_q.

    Python integers are read through the prime subfield, so ``-1`` means
    ``q - 1`` only when ``q`` is prime; field scalars pass through unchanged.
    """

    def __init__(self, q: int):
        try:
            self.GF = galois.GF(q)
        except ValueError as exc:
            raise BadModulus(f"{q} is not a prime power") from exc
        self.q = q
        self.p = self.GF.characteristic

    def __repr__(self) -> str:
        return f"FiniteField(q={self.q})"

    def __call__(self, value: Scalar) -> galois.FieldArray:
        if isinstance(value, galois.FieldArray):
            return value
        return self.GF(int(value) % self.p)

    def matrix(self, rows: Sequence[Sequence[Scalar]]) -> galois.FieldArray:
        return self.GF(np.array([[int(self(v)) for v in row] for row in rows], dtype=np.int64))

    def identity(self, dim: int) -> galois.FieldArray:
        return self.GF.Identity(dim)

    def diag(self, values: Sequence[Scalar]) -> galois.FieldArray:
        dim = len(values)
        return self.matrix([[values[i] if i == j else 0 for j in range(dim)] for i in range(dim)])

    def block_diag(self, upper: galois.FieldArray, lower: galois.FieldArray) -> galois.FieldArray:
        a, b = upper.shape[0], lower.shape[0]
        out = self.GF.Zeros((a + b, a + b))
        out[:a, :a] = upper
        out[a:, a:] = lower
        return out

    @cached_property
    def primitive_element(self) -> galois.FieldArray:
        return self.GF.primitive_element

    def root_of_unity(self, n: int) -> galois.FieldArray:
        """A primitive n-th root of unity; requires ``n | q - 1``."""
        if (self.q - 1) % n:
            raise BadModulus(f"F_{self.q} has no primitive {n}-th root of unity")
        return self.primitive_element ** ((self.q - 1) // n)

    def roots_of_unity(self, n: int) -> list[galois.FieldArray]:
        """All primitive n-th roots, ordered by integer representation."""
        if (self.q - 1) % n:
            return []
        return [x for x in self.GF.elements[1:] if multiplicative_order(x) == n]

    def sqrt(self, a: Scalar) -> Optional[galois.FieldArray]:
        """The square root of ``a`` with least integer representation, or None."""
        a = self(a)
        for x in self.GF.elements:
            if x * x == a:
                return x
        return None


def multiplicative_order(x: galois.FieldArray) -> int:
    one = type(x)(1)
    y, k = x, 1
    while y != one:
        y = y * x
        k += 1
    return k


def key(matrix: galois.FieldArray) -> tuple[int, ...]:
    return tuple(int(v) for v in matrix.view(np.ndarray).flatten())


def mat_pow(matrix: galois.FieldArray, exponent: int) -> galois.FieldArray:
    """Matrix power by repeated products (``**`` is elementwise on field arrays)."""
    base = matrix if exponent >= 0 else np.linalg.inv(matrix)
    result = type(matrix).Identity(matrix.shape[0])
    for _ in range(abs(exponent)):
        result = result @ base
    return result


def matrix_order(matrix: galois.FieldArray, limit: int = 10**6) -> int:
    ident = key(type(matrix).Identity(matrix.shape[0]))
    power, k = matrix, 1
    while key(power) != ident:
        power = power @ matrix
        k += 1
        if k > limit:
            raise OrderCapExceeded(f"Matrix order exceeds {limit}")
    return k


class MatrixGroup:
    """
    The group generated by invertible matrices over one finite field.

    Parameters:
    - field (FiniteField): the coefficient field.
    - generators (list of arrays): square matrices of one dimension.
    - cap (int, optional): refuse to enumerate past this many elements.
    """

    def __init__(self, field: FiniteField, generators: Sequence[galois.FieldArray], cap: Optional[int] = None):
        self.field = field
        self.generators = list(generators)
        self.dimension = self.generators[0].shape[0] if self.generators else 1
        self.cap = cap if cap is not None else settings.ORDER_CAP

    @cached_property
    def elements(self) -> list[galois.FieldArray]:
        identity = self.field.identity(self.dimension)
        elements = [identity]
        seen = {key(identity)}
        queue = deque(elements)
        while queue:
            x = queue.popleft()
            for s in self.generators:
                y = x @ s
                k = key(y)
                if k in seen:
                    continue
                seen.add(k)
                elements.append(y)
                queue.append(y)
                if len(elements) > self.cap:
                    raise OrderCapExceeded(f"Matrix group order exceeds cap {self.cap}")
        logger.debug("Enumerated %d matrices of dimension %d over F_%d", len(elements), self.dimension, self.field.q)
        return elements

    @cached_property
    def _index(self) -> dict[tuple[int, ...], int]:
        return {key(m): i for i, m in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, matrix: galois.FieldArray) -> bool:
        return key(matrix) in self._index

    def perm(self, matrix: galois.FieldArray) -> Perm:
        """Left-multiplication permutation of ``matrix`` on the enumerated elements."""
        index = self._index
        try:
            return Perm(tuple(index[key(matrix @ x)] for x in self.elements))
        except KeyError:
            raise ElementNotInGroup("Matrix does not lie in the enumerated group") from None

    def matrix_of(self, perm: Perm) -> galois.FieldArray:
        return self.elements[perm(0)]

    def to_group(self, name: Optional[str] = None) -> Group:
        """Faithful permutation group via the left regular action."""
        perms = [self.perm(s) for s in self.generators]
        return Group(self.order, perms, cap=self.cap, name=name or "MatrixGroup")


def vector_action(field: FiniteField, matrices: Sequence[galois.FieldArray]) -> tuple[list[Perm], list[tuple[int, ...]]]:
    """
    Permutations induced by ``matrices`` on the nonzero column vectors.

    Returns the permutations together with the vector list that indexes the points.
    """
    dim = matrices[0].shape[0]
    q = field.q
    codes = np.arange(1, q**dim)
    digits = np.array([(codes // q**i) % q for i in range(dim)])
    vectors = field.GF(digits)
    position = {tuple(int(v) for v in col): i for i, col in enumerate(digits.T)}
    perms = []
    for m in matrices:
        image = (m @ vectors).view(np.ndarray)
        perms.append(Perm(tuple(position[tuple(int(v) for v in image[:, i])] for i in range(image.shape[1]))))
    return perms, [tuple(int(v) for v in col) for col in digits.T]
