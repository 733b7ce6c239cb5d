"""Exact linear algebra over the rationals and prime fields.

Thin layer over sympy's ``DomainMatrix`` so the rest of the package never
touches floating point.  Matrices act on column vectors: a map ``V -> W``
is stored with shape ``(dim W, dim V)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from sympy import GF, QQ
from sympy.ntheory import isprime
from sympy.polys.matrices import DomainMatrix


@dataclass(frozen=True)
class Field:
    """Coefficient field: ``characteristic == 0`` means the rationals."""

    characteristic: int = 0

    def __post_init__(self):
        p = self.characteristic
        if p != 0 and not isprime(p):
            raise ValueError(f"field characteristic must be 0 or prime, got {p}")

    @classmethod
    def rationals(cls) -> "Field":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(int(p))

    @classmethod
    def parse(cls, value) -> "Field":
        """Accept ``"rationals"``, ``"QQ"``, ``0``, ``"F3"``, ``"GF(3)"``, ``3`` or ``{"prime": 3}``."""
        if isinstance(value, Field):
            return value
        if isinstance(value, dict):
            if "prime" in value:
                return cls.prime(value["prime"])
            raise ValueError(f"cannot parse field {value!r}")
        if isinstance(value, int):
            return cls(value)
        s = str(value).strip()
        if s.lower() in ("rationals", "q", "qq", "0"):
            return cls.rationals()
        for prefix in ("GF(", "F_", "F", "GF"):
            if s.upper().startswith(prefix.upper()):
                digits = s[len(prefix):].rstrip(")")
                if digits.isdigit():
                    return cls.prime(int(digits))
        if s.isdigit():
            return cls(int(s))
        raise ValueError(f"cannot parse field {value!r}")

    @cached_property
    def domain(self):
        return QQ if self.characteristic == 0 else GF(self.characteristic)

    @property
    def name(self) -> str:
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"

    def to_json(self):
        return "rationals" if self.characteristic == 0 else {"prime": self.characteristic}

    # -- construction -------------------------------------------------
    def matrix(self, rows, shape=None) -> DomainMatrix:
        rows = [list(r) for r in rows]
        if shape is None:
            shape = (len(rows), len(rows[0]) if rows else 0)
        if shape[0] == 0 or shape[1] == 0:
            return DomainMatrix.zeros(shape, self.domain)
        K = self.domain
        return DomainMatrix([[self.element(x) for x in r] for r in rows], shape, K)

    def element(self, x):
        K = self.domain
        if isinstance(x, Fraction):
            return K(x.numerator) / K(x.denominator)
        return K.convert(x)

    def zeros(self, rows: int, cols: int) -> DomainMatrix:
        return DomainMatrix.zeros((rows, cols), self.domain)

    def eye(self, n: int) -> DomainMatrix:
        if n == 0:
            return self.zeros(0, 0)
        return DomainMatrix.eye(n, self.domain)

    def scalar(self, x) -> DomainMatrix:
        return self.matrix([[x]])

    def convert(self, M: DomainMatrix) -> DomainMatrix:
        if M.domain == self.domain:
            return M
        return self.matrix(M.to_list(), M.shape) if M.shape[0] and M.shape[1] else self.zeros(*M.shape)


def rank(M: DomainMatrix) -> int:
    if M.shape[0] == 0 or M.shape[1] == 0:
        return 0
    return M.rank()


def is_zero(M: DomainMatrix) -> bool:
    if M.shape[0] == 0 or M.shape[1] == 0:
        return True
    return M.is_zero_matrix


def as_int(x) -> int:
    """Integer representative of a field element (only for prime fields / integral rationals)."""
    try:
        return int(x)
    except TypeError:
        return int(x.val)


def kernel_basis(M: DomainMatrix) -> DomainMatrix:
    """Columns form a basis of ``ker M``; shape ``(ncols, nullity)``."""
    n = M.shape[1]
    if n == 0:
        return DomainMatrix.zeros((0, 0), M.domain)
    if M.shape[0] == 0:
        return DomainMatrix.eye(n, M.domain)
    N = M.nullspace()
    if N.shape[0] == 0:
        return DomainMatrix.zeros((n, 0), M.domain)
    return N.transpose()


def column_basis(M: DomainMatrix) -> DomainMatrix:
    """A maximal independent subset of the columns of ``M``."""
    if M.shape[0] == 0 or M.shape[1] == 0:
        return DomainMatrix.zeros((M.shape[0], 0), M.domain)
    _, pivots = M.rref()
    return extract_columns(M, pivots)


def extract_columns(M: DomainMatrix, cols) -> DomainMatrix:
    cols = list(cols)
    if not cols or M.shape[0] == 0:
        return DomainMatrix.zeros((M.shape[0], len(cols)), M.domain)
    return M.extract(list(range(M.shape[0])), cols)


def hstack(blocks, rows: int, domain) -> DomainMatrix:
    blocks = [b for b in blocks if b.shape[1] > 0]
    if not blocks:
        return DomainMatrix.zeros((rows, 0), domain)
    if rows == 0:
        return DomainMatrix.zeros((0, sum(b.shape[1] for b in blocks)), domain)
    return blocks[0].hstack(*blocks[1:])


def extend_basis(sub: DomainMatrix, ambient: DomainMatrix) -> DomainMatrix:
    """Columns of ``ambient`` that extend the independent columns of ``sub``.

    ``sub``'s columns are assumed independent and contained in the span of
    ``ambient``'s columns; the result spans a complement of ``span(sub)``
    inside ``span(ambient)``.
    """
    k = sub.shape[1]
    if ambient.shape[1] == 0:
        return ambient
    stacked = hstack([sub, ambient], sub.shape[0], sub.domain)
    if stacked.shape[0] == 0:
        return DomainMatrix.zeros((0, 0), sub.domain)
    _, pivots = stacked.rref()
    extra = [p - k for p in pivots if p >= k]
    return extract_columns(ambient, extra)


def solve_columns(B: DomainMatrix, W: DomainMatrix) -> DomainMatrix:
    """Solve ``B @ C == W`` for ``C`` where ``B`` has independent columns.

    Raises ``ValueError`` when some column of ``W`` is outside ``span(B)``.
    """
    n, k = B.shape
    if W.shape[1] == 0:
        return DomainMatrix.zeros((k, 0), B.domain)
    if k == 0:
        if not is_zero(W):
            raise ValueError("vector outside the span of an empty basis")
        return DomainMatrix.zeros((0, W.shape[1]), B.domain)
    _, pivot_rows = B.transpose().rref()
    rows = list(pivot_rows)
    if len(rows) != k:
        raise ValueError("basis columns are not independent")
    square = B.extract(rows, list(range(k)))
    C = square.inv() * W.extract(rows, list(range(W.shape[1])))
    if B * C != W:
        raise ValueError("vector outside the span of the basis")
    return C


def assemble(row_sizes, col_sizes, blocks, domain) -> DomainMatrix:
    """Dense block matrix from ``{(block_row, block_col): DomainMatrix}``."""
    row_off = [0]
    for s in row_sizes:
        row_off.append(row_off[-1] + s)
    col_off = [0]
    for s in col_sizes:
        col_off.append(col_off[-1] + s)
    shape = (row_off[-1], col_off[-1])
    entries: dict = {}
    for (bi, bj), B in blocks.items():
        if B.shape != (row_sizes[bi], col_sizes[bj]):
            raise ValueError(f"block {(bi, bj)} has shape {B.shape}, expected {(row_sizes[bi], col_sizes[bj])}")
        if B.shape[0] == 0 or B.shape[1] == 0:
            continue
        for (i, j), v in B.to_dok().items():
            if v:
                row = entries.setdefault(row_off[bi] + i, {})
                row[col_off[bj] + j] = row.get(col_off[bj] + j, domain.zero) + v
    M = DomainMatrix({i: {j: v for j, v in r.items() if v} for i, r in entries.items()}, shape, domain)
    return M.to_dense()


def entries(M: DomainMatrix):
    """Nested python lists of plain ints / Fractions, for serialization and display."""
    out = []
    for row in M.to_list() if M.shape[0] and M.shape[1] else [[] for _ in range(M.shape[0])]:
        conv = []
        for x in row:
            if hasattr(x, "numerator") and hasattr(x, "denominator"):
                q = Fraction(int(x.numerator), int(x.denominator))
                conv.append(int(q) if q.denominator == 1 else q)
            else:
                conv.append(as_int(x))
        out.append(conv)
    return out
