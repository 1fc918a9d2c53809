"""Exact integer and prime-field matrix algebra.

Matrices are numpy arrays of ``dtype=object`` holding Python ``int`` values, so
arithmetic never overflows. The Smith normal form returns unimodular witnesses
``u`` and ``v`` (and ``v``'s inverse) with ``u @ a @ v == s``.
"""
import logging
import operator
from dataclasses import dataclass

import numpy as np
from sympy import isprime
from sympy.polys.domains import GF, ZZ
from sympy.polys.matrices import DomainMatrix

from boundaryk.errors import DimensionMismatch, NotPrime

logger = logging.getLogger(__name__)


class IntMatrix:
    """Immutable exact integer matrix."""

    __slots__ = ("_data",)

    def __init__(self, data: np.ndarray):
        if not isinstance(data, np.ndarray) or data.ndim != 2:
            raise TypeError("IntMatrix wraps a two-dimensional numpy array; use IntMatrix.from_rows.")
        if data.dtype != object:
            converted = np.zeros(data.shape, dtype=object)
            for index, x in np.ndenumerate(data):
                converted[index] = int(x)
            data = converted
        else:
            data = data.copy()
        self._data = data
        self._data.flags.writeable = False

    @classmethod
    def from_rows(cls, rows, cols=None) -> "IntMatrix":
        rows = [list(row) for row in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        data = np.zeros((len(rows), cols), dtype=object)
        for i, row in enumerate(rows):
            if len(row) != cols:
                raise DimensionMismatch(f"Row {i} has {len(row)} entries, expected {cols}.")
            for j, entry in enumerate(row):
                try:
                    data[i, j] = operator.index(entry)
                except TypeError:
                    raise TypeError(f"Entry ({i}, {j}) is not an integer: {entry!r}.") from None
        return cls(data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(np.zeros((rows, cols), dtype=object))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(_identity(n))

    @classmethod
    def diagonal(cls, values, rows=None, cols=None) -> "IntMatrix":
        values = [operator.index(x) for x in values]
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        if len(values) > min(rows, cols):
            raise DimensionMismatch("Too many diagonal values for the requested shape.")
        data = np.zeros((rows, cols), dtype=object)
        for k, x in enumerate(values):
            data[k, k] = x
        return cls(data)

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self):
        return self._data.shape

    @property
    def entries(self):
        return tuple(int(x) for x in self._data.flat)

    def array(self) -> np.ndarray:
        return self._data.copy()

    def tolist(self):
        return [[int(x) for x in row] for row in self._data]

    def row(self, i: int):
        return tuple(int(x) for x in self._data[i, :])

    def column(self, j: int):
        return tuple(int(x) for x in self._data[:, j])

    def __getitem__(self, key):
        value = self._data[key]
        if isinstance(value, np.ndarray):
            if value.ndim != 2:
                raise IndexError("Use row() or column() for one-dimensional access.")
            return IntMatrix(value.copy())
        return int(value)

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self._data.T.copy())

    def transpose(self) -> "IntMatrix":
        return self.T

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return IntMatrix(_matmul(self._data, other._data))

    def apply(self, vector):
        """Multiply by a column vector given as a sequence of ints."""
        vector = [operator.index(x) for x in vector]
        if len(vector) != self.cols:
            raise DimensionMismatch(f"Vector of length {len(vector)} does not fit {self.rows}x{self.cols}.")
        column = np.array(vector, dtype=object).reshape(self.cols, 1)
        return tuple(int(x) for x in _matmul(self._data, column).flat)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self._data.flat)

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.shape, self.entries))

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r})"


def _identity(n: int) -> np.ndarray:
    data = np.zeros((n, n), dtype=object)
    for k in range(n):
        data[k, k] = 1
    return data


def _matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"Cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}.")
    if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=object)
    return np.dot(a, b)


@dataclass(frozen=True)
class SnfResult:
    s: IntMatrix
    u: IntMatrix
    v: IntMatrix
    v_inverse: IntMatrix
    invariant_factors: tuple

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


class _SmithReducer:
    """Row/column reduction to Smith normal form, tracking the witnesses.

    The pivot is always the entry of least absolute value among the candidates.
    """

    def __init__(self, a: IntMatrix):
        self.m, self.n = a.shape
        self.s = a.array()
        self.u = _identity(self.m)
        self.v = _identity(self.n)
        self.v_inv = _identity(self.n)

    def run(self) -> SnfResult:
        s = self.s
        for t in range(min(self.m, self.n)):
            pivot = self._smallest(((i, j) for i in range(t, self.m) for j in range(t, self.n)))
            if pivot is None:
                break
            self._move_to(t, pivot)
            while True:
                if not self._clear_cross(t):
                    cross = [(i, t) for i in range(t + 1, self.m)] + [(t, j) for j in range(t + 1, self.n)]
                    self._move_to(t, self._smallest(cross))
                    continue
                offender = self._non_divisible_row(t)
                if offender is None:
                    break
                s[t, :] = s[t, :] + s[offender, :]
                self.u[t, :] = self.u[t, :] + self.u[offender, :]
            if s[t, t] < 0:
                s[t, :] = -s[t, :]
                self.u[t, :] = -self.u[t, :]

        diag = [int(s[k, k]) for k in range(min(self.m, self.n))]
        factors = tuple(d for d in diag if d != 0)
        return SnfResult(
            s=IntMatrix(s),
            u=IntMatrix(self.u),
            v=IntMatrix(self.v),
            v_inverse=IntMatrix(self.v_inv),
            invariant_factors=factors,
        )

    def _smallest(self, positions):
        best = None
        for i, j in positions:
            x = self.s[i, j]
            if x != 0 and (best is None or abs(x) < abs(self.s[best])):
                best = (i, j)
        return best

    def _move_to(self, t, position):
        i, j = position
        if i != t:
            self.s[[t, i], :] = self.s[[i, t], :]
            self.u[[t, i], :] = self.u[[i, t], :]
        if j != t:
            self.s[:, [t, j]] = self.s[:, [j, t]]
            self.v[:, [t, j]] = self.v[:, [j, t]]
            self.v_inv[[t, j], :] = self.v_inv[[j, t], :]

    def _clear_cross(self, t) -> bool:
        s = self.s
        pivot = s[t, t]
        for i in range(t + 1, self.m):
            q = s[i, t] // pivot
            if q:
                s[i, :] = s[i, :] - q * s[t, :]
                self.u[i, :] = self.u[i, :] - q * self.u[t, :]
        for j in range(t + 1, self.n):
            q = s[t, j] // pivot
            if q:
                s[:, j] = s[:, j] - q * s[:, t]
                self.v[:, j] = self.v[:, j] - q * self.v[:, t]
                # v_inv <- E^{-1} v_inv with E = I - q e_t e_j^T
                self.v_inv[t, :] = self.v_inv[t, :] + q * self.v_inv[j, :]
        return all(s[i, t] == 0 for i in range(t + 1, self.m)) and all(
            s[t, j] == 0 for j in range(t + 1, self.n)
        )

    def _non_divisible_row(self, t):
        pivot = self.s[t, t]
        for i in range(t + 1, self.m):
            for j in range(t + 1, self.n):
                if self.s[i, j] % pivot != 0:
                    return i
        return None


def smith_normal_form(a: IntMatrix) -> SnfResult:
    """Smith normal form ``s = u @ a @ v`` with unimodular ``u`` and ``v``.

    The diagonal of ``s`` is ``d_1 | d_2 | ... | d_r`` followed by zeros and
    ``invariant_factors`` lists the positive ``d_k``. Empty matrices are allowed.
    """
    result = _SmithReducer(a).run()
    logger.debug("SNF of %dx%d matrix: factors %s", a.rows, a.cols, result.invariant_factors)
    return result


def rank_over_rationals(a: IntMatrix) -> int:
    return smith_normal_form(a).rank


def require_prime(p) -> int:
    try:
        p = operator.index(p)
    except TypeError:
        raise NotPrime(p) from None
    if p < 2 or not isprime(p):
        raise NotPrime(p)
    return p


def rank_mod_p(a: IntMatrix, p: int) -> int:
    p = require_prime(p)
    if a.rows == 0 or a.cols == 0:
        return 0
    rows = [[ZZ(x) for x in row] for row in a.tolist()]
    return DomainMatrix(rows, a.shape, ZZ).convert_to(GF(p)).rank()


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """Columns spanning the integral kernel of ``a`` (a direct summand of Z^cols)."""
    snf = smith_normal_form(a)
    return snf.v[:, snf.rank:]


def image_basis(a: IntMatrix) -> IntMatrix:
    """Columns forming a basis of the image lattice ``a @ Z^cols``."""
    snf = smith_normal_form(a)
    return (a @ snf.v)[:, : snf.rank]
