# app/operations/zlinalg.py
"""
Module: zlinalg.py

Exact linear algebra over the integers and over Z/n.

Functions:
- smith_normal_form(m, with_transforms=False): invariant factors of an integer
  matrix, optionally with unimodular U, V such that U·m·V is diagonal.
- cokernel_invariants(m): the abelian group Z^rows / column span of m.
- kernel_mod_n(m, n): generating set of {x : m·x ≡ 0 mod n}.
- solve_mod_n(m, b, n): one solution of m·x ≡ b mod n, or None.
- quotient_module(generators, relations, n): span(generators)/span(relations)
  inside (Z/n)^d, with representatives and coordinates.
- quotient_invariants(generators, relations, n): invariants of the above.

Everything modulo n is split by the Chinese remainder theorem into prime-power
components. Z/p^k is a local ring, so elimination there always pivots on an
entry of least p-adic valuation p^e·u and clears its row and column with the
unit u inverted; the resulting diagonal of powers of p is read directly as
cyclic factors.

A ``SparseIntMatrix`` is first reduced on unit pivots in dict-of-rows form and
only handed to the dense routine once its fill passes ``DENSE_FILL``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from sympy import factorint

from app.core.errors import RelationOutsideSpan
from app.schemas.invariants import AbelianInvariants

logger = logging.getLogger(__name__)

# Above this fraction of nonzero entries a sparse matrix is handled densely.
DENSE_FILL = 0.3


@dataclass
class SparseIntMatrix:
    """Integer matrix holding only its nonzero entries, keyed by (row, col)."""

    rows: int
    cols: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Iterable[tuple[int, int, int]]) -> "SparseIntMatrix":
        """Build from (row, col, value) triples; repeated positions are summed."""
        acc: dict[tuple[int, int], int] = {}
        for r, c, v in entries:
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"Entry ({r}, {c}) outside a {rows}x{cols} matrix")
            acc[(r, c)] = acc.get((r, c), 0) + int(v)
        return cls(rows, cols, {k: v for k, v in acc.items() if v})

    @classmethod
    def from_dense(cls, data: Union[Sequence[Sequence[int]], np.ndarray], cols: Optional[int] = None) -> "SparseIntMatrix":
        arr = [list(map(int, row)) for row in data]
        ncols = cols if cols is not None else (len(arr[0]) if arr else 0)
        return cls.from_entries(
            len(arr), ncols, ((i, j, v) for i, row in enumerate(arr) for j, v in enumerate(row) if v)
        )

    @property
    def density(self) -> float:
        cells = self.rows * self.cols
        return len(self.entries) / cells if cells else 0.0

    def entry_list(self) -> list[tuple[int, int, int]]:
        return sorted((r, c, v) for (r, c), v in self.entries.items())

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def to_array(self, modulus: int) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.int64)
        for (r, c), v in self.entries.items():
            out[r, c] = v % modulus
        return out

    def transpose(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def matvec(self, x: Sequence[int], modulus: Optional[int] = None) -> list[int]:
        out = [0] * self.rows
        for (r, c), v in self.entries.items():
            out[r] += v * int(x[c])
        if modulus is not None:
            out = [v % modulus for v in out]
        return out


MatrixLike = Union[SparseIntMatrix, np.ndarray, Sequence[Sequence[int]]]


def _as_array(m: MatrixLike, modulus: int, cols: Optional[int] = None) -> np.ndarray:
    if isinstance(m, SparseIntMatrix):
        return m.to_array(modulus)
    arr = np.asarray(m, dtype=np.int64)
    if arr.size == 0:
        return np.zeros((arr.shape[0] if arr.ndim == 2 else 0, cols or 0), dtype=np.int64)
    return arr % modulus


# ----------------------------------------------------------------------
# Integer Smith normal form
# ----------------------------------------------------------------------
@dataclass
class SmithResult:
    """Diagonal of the Smith form; ``factors`` keeps units, so ``rank == len(factors)``."""

    factors: list[int]
    rows: int
    cols: int
    U: Optional[list[list[int]]] = None
    V: Optional[list[list[int]]] = None

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def cokernel(self) -> AbelianInvariants:
        return AbelianInvariants(factors=[d for d in self.factors if d > 1], rank=self.rows - self.rank)


def smith_normal_form(m: MatrixLike, with_transforms: bool = False) -> SmithResult:
    """
    Smith normal form over Z.

    Pivots on the entry of least absolute value. Python integers are
    arbitrary precision, so coefficient growth never overflows.

    Example:
    >>> smith_normal_form([[2, 0], [0, 3]]).factors
    [1, 6]
    """
    if isinstance(m, SparseIntMatrix):
        A = m.to_dense()
        r, c = m.rows, m.cols
    else:
        A = [list(map(int, row)) for row in m]
        r = len(A)
        c = len(A[0]) if A else 0
    U = [[int(i == j) for j in range(r)] for i in range(r)] if with_transforms else None
    V = [[int(i == j) for j in range(c)] for i in range(c)] if with_transforms else None

    def swap_rows(i: int, j: int) -> None:
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i: int, j: int) -> None:
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src: int, k: int) -> None:
        A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
        if U is not None:
            U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst: int, src: int, k: int) -> None:
        for row in A:
            row[dst] += k * row[src]
        if V is not None:
            for row in V:
                row[dst] += k * row[src]

    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            for j in range(t, c):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            # move the smallest entry of row t / column t into the pivot
            cands = [(abs(A[i][t]), i, t) for i in range(t, r) if A[i][t]]
            cands += [(abs(A[t][j]), t, j) for j in range(t + 1, c) if A[t][j]]
            _, i, j = min(cands)
            swap_rows(t, i)
            swap_cols(t, j)
            p = A[t][t]
            dirty = False
            for i in range(t + 1, r):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, c):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, r) for j in range(t + 1, c) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            if U is not None:
                U[t] = [-a for a in U[t]]
        t += 1

    return SmithResult(factors=[A[i][i] for i in range(t)], rows=r, cols=c, U=U, V=V)


def cokernel_invariants(m: MatrixLike) -> AbelianInvariants:
    """Invariants of Z^rows modulo the column span of ``m``."""
    return smith_normal_form(m).cokernel


# ----------------------------------------------------------------------
# Local rings Z/p^k
# ----------------------------------------------------------------------
@dataclass
class LocalSmith:
    """``U·A·V`` is diagonal with entries ``p**valuations[t]`` for ``t < rank``."""

    p: int
    k: int
    valuations: list[int]
    V: np.ndarray
    Vinv: np.ndarray
    U: Optional[np.ndarray]
    rows: int
    cols: int

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def rank(self) -> int:
        return len(self.valuations)


def local_smith(A: np.ndarray, p: int, k: int, track_left: bool = False) -> LocalSmith:
    """Diagonalize ``A`` over Z/p^k by unit-scaled pivots of least valuation."""
    q = p**k
    A = np.array(A, dtype=np.int64) % q
    r, c = A.shape
    V = np.eye(c, dtype=np.int64)
    Vinv = np.eye(c, dtype=np.int64)
    U = np.eye(r, dtype=np.int64) if track_left else None
    valuations: list[int] = []
    t = 0
    while t < min(r, c):
        sub = A[t:, t:]
        if not sub.any():
            break
        e, pw = 0, 1
        while True:
            mask = (sub % (pw * p)) != 0
            if mask.any():
                break
            e += 1
            pw *= p
        i, j = (int(x) + t for x in np.argwhere(mask)[0])
        if i != t:
            A[[t, i]] = A[[i, t]]
            if U is not None:
                U[[t, i]] = U[[i, t]]
        if j != t:
            A[:, [t, j]] = A[:, [j, t]]
            V[:, [t, j]] = V[:, [j, t]]
            Vinv[[t, j]] = Vinv[[j, t]]
        inv = pow(int(A[t, t]) // pw, -1, q)
        A[t] = (A[t] * inv) % q
        if U is not None:
            U[t] = (U[t] * inv) % q
        below = A[t + 1 :, t] // pw
        if below.any():
            A[t + 1 :] = (A[t + 1 :] - np.outer(below, A[t])) % q
            if U is not None:
                U[t + 1 :] = (U[t + 1 :] - np.outer(below, U[t])) % q
        right = A[t, t + 1 :] // pw
        if right.any():
            A[:, t + 1 :] = (A[:, t + 1 :] - np.outer(A[:, t], right)) % q
            V[:, t + 1 :] = (V[:, t + 1 :] - np.outer(V[:, t], right)) % q
            Vinv[t] = (Vinv[t] + right @ Vinv[t + 1 :]) % q
        valuations.append(e)
        t += 1
    return LocalSmith(p=p, k=k, valuations=valuations, V=V, Vinv=Vinv, U=U, rows=r, cols=c)


def _local_kernel(ls: LocalSmith) -> list[np.ndarray]:
    q = ls.q
    gens = []
    for t, e in enumerate(ls.valuations):
        if e:
            gens.append((ls.V[:, t] * ls.p ** (ls.k - e)) % q)
    for t in range(ls.rank, ls.cols):
        gens.append(ls.V[:, t] % q)
    return gens


def _local_solve(ls: LocalSmith, b: np.ndarray) -> Optional[np.ndarray]:
    q = ls.q
    bb = (ls.U @ (np.asarray(b, dtype=np.int64) % q)) % q
    y = np.zeros(ls.cols, dtype=np.int64)
    for t, e in enumerate(ls.valuations):
        pw = ls.p**e
        if bb[t] % pw:
            return None
        y[t] = bb[t] // pw
    if bb[ls.rank :].any():
        return None
    return (ls.V @ y) % q


def prime_power_split(n: int) -> list[tuple[int, int]]:
    """Prime-power components ``(p, k)`` of ``n`` in increasing order of p."""
    return sorted(factorint(n).items())


def crt_idempotent(n: int, q: int) -> int:
    """The residue that is 1 mod q and 0 mod n/q."""
    rest = n // q
    return (rest * pow(rest % q, -1, q)) % n if q > 1 else 0


def _crt_pair(a: int, m: int, b: int, n: int) -> int:
    # m and n coprime
    return (a + m * ((b - a) * pow(m, -1, n) % n)) % (m * n) if n > 1 else a % m


def _eliminate(target: dict[int, int], pivot: dict[int, int], j: int, q: int) -> None:
    f = target.pop(j, 0)
    if not f:
        return
    for c, v in pivot.items():
        if c == j:
            continue
        w = (target.get(c, 0) - f * v) % q
        if w:
            target[c] = w
        else:
            target.pop(c, None)


def _sparse_local_kernel(m: SparseIntMatrix, p: int, k: int) -> list[np.ndarray]:
    """
    Kernel over Z/p^k of a sparse matrix.

    Rows are eliminated on unit pivots, shortest row first, while they stay
    sparse. Whatever is left once the fill of the remaining rows on the free
    columns passes ``DENSE_FILL``, or no unit entry remains, goes to
    ``local_smith`` densely. Pivot rows then express each pivot variable in the
    free ones.
    """
    q = p**k
    rows: dict[int, dict[int, int]] = {}
    for (r, c), v in m.entries.items():
        if v % q:
            rows.setdefault(r, {})[c] = v % q
    pivots: dict[int, dict[int, int]] = {}
    free = set(range(m.cols))
    while rows:
        if not free:
            break
        nnz = sum(len(row) for row in rows.values())
        if nnz > DENSE_FILL * len(rows) * len(free):
            logger.debug(
                "sparse elimination mod %d: fill %.2f after %d pivots, going dense",
                q,
                nnz / (len(rows) * len(free)),
                len(pivots),
            )
            break
        best: Optional[tuple[int, int]] = None
        for i, row in rows.items():
            if best is not None and len(row) >= len(rows[best[0]]):
                continue
            j = next((c for c, v in row.items() if v % p), None)
            if j is not None:
                best = (i, j)
        if best is None:
            break
        i, j = best
        row = rows.pop(i)
        inv = pow(row[j], -1, q)
        row = {c: v * inv % q for c, v in row.items()}
        for target in (*rows.values(), *pivots.values()):
            _eliminate(target, row, j, q)
        rows = {r: other for r, other in rows.items() if other}
        pivots[j] = row
        free.discard(j)

    free_cols = sorted(free)
    if not free_cols:
        return []
    index = {c: t for t, c in enumerate(free_cols)}
    rest = np.zeros((len(rows), len(free_cols)), dtype=np.int64)
    for t, row in enumerate(rows.values()):
        for c, v in row.items():
            rest[t, index[c]] = v
    gens = []
    for y in _local_kernel(local_smith(rest, p, k)):
        x = np.zeros(m.cols, dtype=np.int64)
        x[free_cols] = y
        for j, row in pivots.items():
            x[j] = -sum(v * int(x[c]) for c, v in row.items() if c != j) % q
        gens.append(x)
    return gens


# ----------------------------------------------------------------------
# Public modular operations
# ----------------------------------------------------------------------
def kernel_mod_n(m: MatrixLike, n: int, cols: Optional[int] = None) -> list[list[int]]:
    """
    Generating set of the solution module {x : m·x ≡ 0 (mod n)}.

    Parameters:
    - m: integer matrix (sparse or dense).
    - n (int): modulus, at least 2.
    - cols (int, optional): column count when ``m`` has no rows.

    Returns:
    - list of vectors with entries in 0..n-1; the zero module gives ``[]``.

    Example:
    >>> kernel_mod_n([[2]], 4)
    [[2]]
    """
    if n < 2:
        raise ValueError("Modulus must be at least 2")
    gens: list[list[int]] = []
    for p, k in prime_power_split(n):
        q = p**k
        if isinstance(m, SparseIntMatrix):
            local = _sparse_local_kernel(m, p, k)
        else:
            local = _local_kernel(local_smith(_as_array(m, q, cols), p, k))
        e = crt_idempotent(n, q)
        for v in local:
            w = [(int(x) * e) % n for x in v]
            if any(w):
                gens.append(w)
    return gens


def solve_mod_n(m: MatrixLike, b: Sequence[int], n: int) -> Optional[list[int]]:
    """One solution of m·x ≡ b (mod n), or None when the system is inconsistent."""
    result: Optional[list[int]] = None
    for p, k in prime_power_split(n):
        q = p**k
        A = _as_array(m, q)
        ls = local_smith(A, p, k, track_left=True)
        x = _local_solve(ls, np.asarray(b, dtype=np.int64))
        if x is None:
            return None
        e = crt_idempotent(n, q)
        part = [(int(v) * e) % n for v in x]
        result = part if result is None else [(a + c) % n for a, c in zip(result, part)]
    return result


@dataclass
class _LocalQuotient:
    p: int
    k: int
    X: np.ndarray  # generators as rows, mod p^k
    presentation: LocalSmith  # X^T, solves a·X = v
    relations: LocalSmith  # kernel and relation preimages, diagonalized
    factors: list[tuple[int, int]]  # (position, exponent) of each nontrivial cyclic factor

    @property
    def q(self) -> int:
        return self.p**self.k

    def preimage(self, v: np.ndarray) -> Optional[np.ndarray]:
        return _local_solve(self.presentation, v)


class SubquotientModule:
    """
    ``span(generators) / span(relations)`` inside (Z/n)^d.

    Attributes:
    - invariants (AbelianInvariants): invariant factors d1 | ... | dk.
    - representatives (list of list of int): vectors in (Z/n)^d, one of order
      d_i per invariant factor, which together generate the quotient.
    """

    def __init__(self, generators: Sequence[Sequence[int]], relations: Sequence[Sequence[int]], n: int, dim: int):
        self.modulus = n
        self.dim = dim
        self._components: list[_LocalQuotient] = []
        gens = np.asarray(generators, dtype=np.int64).reshape(len(generators), dim)
        rels = np.asarray(relations, dtype=np.int64).reshape(len(relations), dim)
        for p, k in prime_power_split(n):
            self._components.append(self._local(gens, rels, p, k))
        self._assemble()

    @staticmethod
    def _local(gens: np.ndarray, rels: np.ndarray, p: int, k: int) -> _LocalQuotient:
        q = p**k
        X = gens % q
        m = X.shape[0]
        presentation = local_smith(X.T, p, k, track_left=True)
        rows = _local_kernel(presentation)
        for rel in rels:
            a = _local_solve(presentation, rel % q)
            if a is None:
                raise RelationOutsideSpan(f"Relation {list(map(int, rel))} is outside the span of the generators")
            rows.append(a)
        W = np.array(rows, dtype=np.int64).reshape(len(rows), m)
        relations = local_smith(W, p, k)
        factors = [(t, e) for t, e in enumerate(relations.valuations) if e > 0]
        factors += [(t, k) for t in range(relations.rank, m)]
        return _LocalQuotient(p=p, k=k, X=X, presentation=presentation, relations=relations, factors=factors)

    def _assemble(self) -> None:
        n = self.modulus
        width = max((len(c.factors) for c in self._components), default=0)
        # per component, factors sorted by decreasing exponent
        ordered = [sorted(c.factors, key=lambda f: -f[1]) for c in self._components]
        self._slots: list[list[Optional[tuple[int, int]]]] = []
        orders = []
        reps = []
        for i in range(width):
            slot = []
            d = 1
            vec = np.zeros(self.dim, dtype=np.int64)
            for comp, facs in zip(self._components, ordered):
                if i < len(facs):
                    t, e = facs[i]
                    slot.append((t, e))
                    d *= comp.p**e
                    q = comp.q
                    a = comp.relations.Vinv[t] % q
                    local = (a @ comp.X) % q
                    vec = (vec + local * crt_idempotent(n, q)) % n
                else:
                    slot.append(None)
            self._slots.append(slot)
            orders.append(d)
            reps.append([int(x) for x in vec])
        # ascending divisibility chain
        self._slots.reverse()
        orders.reverse()
        reps.reverse()
        self.invariants = AbelianInvariants(factors=orders)
        self.representatives: list[list[int]] = reps

    def coordinates(self, v: Sequence[int]) -> list[int]:
        """
        Coordinates of an element of the generator span in the representative basis.

        Raises:
        - RelationOutsideSpan: ``v`` is not in the span of the generators.
        """
        v = np.asarray(v, dtype=np.int64)
        local_coords = []
        for comp in self._components:
            a = comp.preimage(v % comp.q)
            if a is None:
                raise RelationOutsideSpan("Vector is outside the span of the generators")
            local_coords.append((a @ comp.relations.V) % comp.q)
        coords = []
        for slot in self._slots:
            value, modulus = 0, 1
            for comp, y, entry in zip(self._components, local_coords, slot):
                if entry is None:
                    continue
                t, e = entry
                pe = comp.p**e
                value = _crt_pair(value, modulus, int(y[t]) % pe, pe)
                modulus *= pe
            coords.append(value)
        return coords

    def is_zero(self, v: Sequence[int]) -> bool:
        return not any(self.coordinates(v))


def quotient_module(
    generators: Sequence[Sequence[int]], relations: Sequence[Sequence[int]], n: int, dim: Optional[int] = None
) -> SubquotientModule:
    if dim is None:
        sample = list(generators) or list(relations)
        if not sample:
            raise ValueError("Ambient dimension is required for an empty generator list")
        dim = len(sample[0])
    return SubquotientModule(generators, relations, n, dim)


def quotient_invariants(
    generators: Sequence[Sequence[int]], relations: Sequence[Sequence[int]], n: int, dim: Optional[int] = None
) -> AbelianInvariants:
    """
    Invariant factors of span(generators) / span(relations) over Z/n.

    Example:
    >>> quotient_invariants([[1]], [[2]], 4).factors
    [2]
    """
    return quotient_module(generators, relations, n, dim).invariants
