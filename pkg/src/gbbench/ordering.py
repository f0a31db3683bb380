"""Monomial-order comparators and weight-matrix machinery.

Exponent vectors are tuples of nonnegative ints, most main variable first
(position 0). Comparators return one of LESS (-1), EQUAL (0), GREATER (+1).

Two families of total-degree orders are implemented side by side:

* degRevLex: compare total degree; on a tie, scan exponents from the least
  main variable down, and the first vector to show a *larger* exponent there
  is the *smaller* monomial.

* subtotal: form the running prefix sums A_k = a_1 + ... + a_k and compare
  the sequences (A_n, ..., A_1) lexicographically. A_n is the total degree,
  so degree still dominates, and the remaining scan breaks ties exactly as
  degRevLex does: the two comparators realize the same total order while
  subtotal needs no separate tie-break pass. orders_equivalent_certificate
  applied to the two weight matrices proves the equivalence exactly.

Each family also has a weight-matrix presentation: w(a) = W @ a compared
lexicographically. subtotal_weight_matrix and degrevlex_weight_matrix build
the canonical matrices; orders_equivalent_certificate proves two matrices
induce the same order by exhibiting L = W2 @ W1^-1 lower triangular with a
positive diagonal.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import accumulate, product
from operator import add as _add, sub as _sub

LESS = -1
EQUAL = 0
GREATER = 1

# An exponent vector is just a tuple of ints; the alias is for signatures.
ExponentVector = tuple


def _check_pair(a, b) -> None:
    if len(a) != len(b):
        raise ValueError(f"exponent vectors differ in length: {len(a)} vs {len(b)}")
    if len(a) == 0:
        raise ValueError("exponent vectors must have at least one entry")


def cmp_degrevlex(a, b) -> int:
    """Degree-reverse-lexicographic comparison of two exponent vectors."""
    _check_pair(a, b)
    da = sum(a)
    db = sum(b)
    if da != db:
        return GREATER if da > db else LESS
    for k in range(len(a) - 1, -1, -1):
        ak = a[k]
        bk = b[k]
        if ak != bk:
            # reversed sense: larger exponent in a less main variable loses
            return LESS if ak > bk else GREATER
    return EQUAL


def cmp_subtotal(a, b) -> int:
    """Subtotal comparison: prefix sums A_k, B_k compared from k = n down to 1."""
    _check_pair(a, b)
    A = list(accumulate(a))
    B = list(accumulate(b))
    for k in range(len(A) - 1, -1, -1):
        ak = A[k]
        bk = B[k]
        if ak != bk:
            return GREATER if ak > bk else LESS
    return EQUAL


def cmp_lex(a, b) -> int:
    """Plain lexicographic comparison, most main variable first."""
    _check_pair(a, b)
    for x, y in zip(a, b):
        if x != y:
            return GREATER if x > y else LESS
    return EQUAL


class WeightMatrix:
    """Square matrix of exact rationals defining a term order.

    Monomial a precedes b when W @ a precedes W @ b lexicographically. Rows
    are stored as Fractions; an all-integer fast path is kept for weight
    vectors so the hot loops stay in int arithmetic.
    """

    __slots__ = ("rows", "n", "int_rows")

    def __init__(self, rows):
        rows = tuple(tuple(Fraction(x) for x in row) for row in rows)
        n = len(rows)
        if n == 0:
            raise ValueError("weight matrix must have at least one row")
        for row in rows:
            if len(row) != n:
                raise ValueError(f"weight matrix must be square: {n} rows, row of length {len(row)}")
        self.rows = rows
        self.n = n
        if all(x.denominator == 1 for row in rows for x in row):
            self.int_rows = tuple(tuple(int(x) for x in row) for row in rows)
        else:
            self.int_rows = None

    def weight_vector(self, a) -> tuple:
        if len(a) != self.n:
            raise ValueError(f"exponent vector of length {len(a)} against {self.n}x{self.n} matrix")
        rows = self.int_rows if self.int_rows is not None else self.rows
        return tuple(sum(w * x for w, x in zip(row, a) if w) for row in rows)

    def __matmul__(self, other) -> "WeightMatrix":
        if not isinstance(other, WeightMatrix):
            return NotImplemented
        if other.n != self.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")
        cols = list(zip(*other.rows))
        return WeightMatrix(
            tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in self.rows)
        )

    def inverse(self) -> "WeightMatrix":
        """Exact inverse by Gauss-Jordan elimination; ValueError if singular."""
        n = self.n
        aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(self.rows)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
            if piv is None:
                raise ValueError("singular weight matrix")
            aug[col], aug[piv] = aug[piv], aug[col]
            inv_p = 1 / aug[col][col]
            aug[col] = [x * inv_p for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
        return WeightMatrix(tuple(tuple(row[n:]) for row in aug))

    def is_singular(self) -> bool:
        try:
            self.inverse()
        except ValueError:
            return True
        return False

    def to_text(self) -> str:
        lines = [str(self.n)]
        for row in self.rows:
            lines.append(" ".join(str(x) for x in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "WeightMatrix":
        """Parse the text form: first line n, then n lines of n rationals.

        Blank lines and lines starting with '#' are ignored.
        """
        lines = [
            (i + 1, line.strip())
            for i, line in enumerate(text.splitlines())
            if line.strip() and not line.strip().startswith("#")
        ]
        if not lines:
            raise ValueError("empty weight-matrix text")
        lineno, head = lines[0]
        try:
            n = int(head)
        except ValueError:
            raise ValueError(f"line {lineno}: expected the matrix size, got {head!r}") from None
        if n < 1:
            raise ValueError(f"line {lineno}: matrix size must be positive, got {n}")
        if len(lines) - 1 != n:
            raise ValueError(f"expected {n} matrix rows, found {len(lines) - 1}")
        rows = []
        for lineno, line in lines[1:]:
            toks = line.split()
            if len(toks) != n:
                raise ValueError(f"line {lineno}: expected {n} entries, found {len(toks)}")
            row = []
            for tok in toks:
                try:
                    row.append(Fraction(tok))
                except (ValueError, ZeroDivisionError):
                    raise ValueError(f"line {lineno}: bad rational {tok!r}") from None
            rows.append(tuple(row))
        return cls(tuple(rows))

    def __eq__(self, other) -> bool:
        return isinstance(other, WeightMatrix) and other.rows == self.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"WeightMatrix({[[str(x) for x in row] for row in self.rows]})"


def subtotal_weight_matrix(n: int) -> WeightMatrix:
    """Upper-left triangle of ones: row i sums the first n-i+1 exponents.

    The weight vector is exactly (A_n, A_n-1, ..., A_1), the subtotal
    sequence read from the total degree down.
    """
    if n < 1:
        raise ValueError(f"need at least one variable, got {n}")
    return WeightMatrix(tuple(tuple(1 if i + j < n else 0 for j in range(n)) for i in range(n)))


def degrevlex_weight_matrix(n: int) -> WeightMatrix:
    """Row 1 all ones (total degree); row i >= 2 has a single -1 in column n+2-i."""
    if n < 1:
        raise ValueError(f"need at least one variable, got {n}")
    rows = [tuple(1 for _ in range(n))]
    for i in range(2, n + 1):
        rows.append(tuple(-1 if j == n + 2 - i else 0 for j in range(1, n + 1)))
    return WeightMatrix(tuple(rows))


def identity_weight_matrix(n: int) -> WeightMatrix:
    """Identity matrix: induces plain lex, most main variable first."""
    if n < 1:
        raise ValueError(f"need at least one variable, got {n}")
    return WeightMatrix(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


def weight_vector(w: WeightMatrix, a) -> tuple:
    return w.weight_vector(a)


def cmp_by_matrix(w: WeightMatrix, a, b) -> int:
    """Compare under the matrix order, interleaving the product with the test.

    Row weights are applied to the difference a - b one row at a time, and the
    scan stops at the first row with a nonzero signed result, so a decided
    comparison never touches the remaining rows.
    """
    _check_pair(a, b)
    if len(a) != w.n:
        raise ValueError(f"exponent vector of length {len(a)} against {w.n}x{w.n} matrix")
    rows = w.int_rows if w.int_rows is not None else w.rows
    for row in rows:
        s = 0
        for wj, x, y in zip(row, a, b):
            if wj:
                s += wj * (x - y)
        if s:
            return GREATER if s > 0 else LESS
    return EQUAL


def is_admissible(w: WeightMatrix) -> bool:
    """Admissible = a genuine term order on monomials.

    Requires (a) the topmost nonzero entry of every column to be positive, so
    1 is the least monomial and multiplication is order-preserving, and
    (b) nonsingularity, so distinct monomials never compare equal.
    """
    for j in range(w.n):
        top = next((w.rows[i][j] for i in range(w.n) if w.rows[i][j] != 0), None)
        if top is None or top < 0:
            return False
    return not w.is_singular()


def orders_equivalent_certificate(w1: WeightMatrix, w2: WeightMatrix):
    """Certificate that w1 and w2 induce the same order, or None.

    Returns L = w2 @ w1^-1 when L is lower triangular with strictly positive
    diagonal; left-multiplying the weight vector by such an L never changes
    which row decides a lexicographic comparison, so the orders agree on every
    pair of exponent vectors. Raises ValueError when w1 is singular or the
    sizes differ.
    """
    if w1.n != w2.n:
        raise ValueError(f"size mismatch: {w1.n} vs {w2.n}")
    L = w2 @ w1.inverse()
    n = L.n
    for i in range(n):
        if L.rows[i][i] <= 0:
            return None
        for j in range(i + 1, n):
            if L.rows[i][j] != 0:
                return None
    return L


def orders_equivalent_oracle(w1: WeightMatrix, w2: WeightMatrix, max_degree: int):
    """Brute-force check of order agreement on all exponent vectors with
    entries <= max_degree. Returns None on agreement, else the first
    disagreeing pair (a, b) in iteration order."""
    if w1.n != w2.n:
        raise ValueError(f"size mismatch: {w1.n} vs {w2.n}")
    n = w1.n
    space = list(product(range(max_degree + 1), repeat=n))
    for a in space:
        for b in space:
            if cmp_by_matrix(w1, a, b) != cmp_by_matrix(w2, a, b):
                return (a, b)
    return None


# --------------------------------------------------------------------------
# Engine-facing order strategies.
#
# The Groebner engine is generic over a MonomialOrder object that owns the
# in-memory representation of monomials. A *handle* is whatever the strategy
# stores for one power product; native strategies use the bare exponent
# tuple, the cached-matrix strategy pairs it with its weight vector so a
# comparison is a single tuple comparison and a product is a vector add.

class MonomialOrder:
    """Base strategy: handles are exponent tuples; cmp is abstract."""

    kind = ""

    def __init__(self, n: int, label: str | None = None):
        if n < 1:
            raise ValueError(f"need at least one variable, got {n}")
        self.n = n
        self.label = label or self.kind
        self.matrix: WeightMatrix | None = None
        self.comparisons = 0
        self.matvec_products = 0

    def reset_counters(self) -> None:
        self.comparisons = 0
        self.matvec_products = 0

    # handle protocol -----------------------------------------------------
    def attach(self, exps):
        return tuple(exps)

    def exps(self, h):
        return h

    def one(self):
        return self.attach((0,) * self.n)

    def degree(self, h) -> int:
        return sum(self.exps(h))

    def mul(self, a, b):
        return tuple(map(_add, a, b))

    def div(self, a, b):
        out = []
        for x, y in zip(a, b):
            d = x - y
            if d < 0:
                return None
            out.append(d)
        return tuple(out)

    def lcm(self, a, b):
        return tuple(map(max, a, b))

    def cmp(self, a, b) -> int:
        raise NotImplementedError

    def sort_key(self, exps) -> tuple:
        """Flat numeric tuple over raw exponents that sorts ascending in this
        order. Lexicographic comparison of keys agrees with cmp, and the key
        of a product is the componentwise sum of the keys, so consumers can
        track keys through multiplications. Touches no cache or counter."""
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.label} n={self.n}>"


class DegRevLexOrder(MonomialOrder):
    """Native degRevLex comparator on exponent tuples."""

    kind = "native-degrevlex"

    def cmp(self, a, b) -> int:
        self.comparisons += 1
        da = sum(a)
        db = sum(b)
        if da != db:
            return GREATER if da > db else LESS
        for k in range(len(a) - 1, -1, -1):
            ak = a[k]
            bk = b[k]
            if ak != bk:
                return LESS if ak > bk else GREATER
        return EQUAL

    def sort_key(self, exps) -> tuple:
        out = [sum(exps)]
        for v in reversed(exps):
            out.append(-v)
        return tuple(out)


class SubtotalOrder(MonomialOrder):
    """Native subtotal comparator on exponent tuples."""

    kind = "native-subtotal"

    def cmp(self, a, b) -> int:
        self.comparisons += 1
        A = list(accumulate(a))
        B = list(accumulate(b))
        for k in range(len(A) - 1, -1, -1):
            ak = A[k]
            bk = B[k]
            if ak != bk:
                return GREATER if ak > bk else LESS
        return EQUAL

    def sort_key(self, exps) -> tuple:
        return tuple(accumulate(exps))[::-1]


class MatrixDirectOrder(MonomialOrder):
    """Matrix order, method 1: per comparison, interleave rows of W(a-b) with
    the sign test. No per-monomial state beyond the exponent tuple."""

    kind = "matrix-direct"

    def __init__(self, matrix: WeightMatrix, label: str | None = None):
        super().__init__(matrix.n, label)
        if not is_admissible(matrix):
            raise ValueError("order strategies require an admissible weight matrix")
        self.matrix = matrix
        rows = matrix.int_rows if matrix.int_rows is not None else matrix.rows
        self._nz_rows = tuple(tuple((j, wj) for j, wj in enumerate(row) if wj) for row in rows)

    def cmp(self, a, b) -> int:
        self.comparisons += 1
        for row in self._nz_rows:
            s = 0
            for j, wj in row:
                s += wj * (a[j] - b[j])
            if s:
                return GREATER if s > 0 else LESS
        return EQUAL

    def sort_key(self, exps) -> tuple:
        return self.matrix.weight_vector(exps)


class MatrixCachedOrder(MonomialOrder):
    """Matrix order, method 2: each monomial handle carries its weight vector.

    A handle is (weights, exps). The full matrix-vector product runs once per
    distinct monomial entering the cache (inputs and critical-pair lcms);
    products and quotients update the weights by vector add and subtract.
    matvec_products counts the materializations.
    """

    kind = "matrix-cached"

    def __init__(self, matrix: WeightMatrix, label: str | None = None):
        super().__init__(matrix.n, label)
        if not is_admissible(matrix):
            raise ValueError("order strategies require an admissible weight matrix")
        self.matrix = matrix
        self._memo: dict = {}

    def attach(self, exps):
        exps = tuple(exps)
        h = self._memo.get(exps)
        if h is None:
            self.matvec_products += 1
            h = (self.matrix.weight_vector(exps), exps)
            self._memo[exps] = h
        return h

    def exps(self, h):
        return h[1]

    def weights(self, h):
        return h[0]

    def mul(self, a, b):
        return (tuple(map(_add, a[0], b[0])), tuple(map(_add, a[1], b[1])))

    def div(self, a, b):
        ea = a[1]
        eb = b[1]
        out = []
        for x, y in zip(ea, eb):
            d = x - y
            if d < 0:
                return None
            out.append(d)
        return (tuple(map(_sub, a[0], b[0])), tuple(out))

    def lcm(self, a, b):
        ea = a[1]
        eb = b[1]
        m = tuple(map(max, ea, eb))
        if m == ea:
            return a
        if m == eb:
            return b
        return self.attach(m)

    def cmp(self, a, b) -> int:
        self.comparisons += 1
        wa = a[0]
        wb = b[0]
        if wa > wb:
            return GREATER
        if wa < wb:
            return LESS
        return EQUAL

    def sort_key(self, exps) -> tuple:
        return self.matrix.weight_vector(exps)

    def cache_size(self) -> int:
        return len(self._memo)


ORDER_KINDS = ("native-degrevlex", "native-subtotal", "matrix-direct", "matrix-cached")


def make_order(kind: str, n: int | None = None, matrix: WeightMatrix | None = None,
               label: str | None = None) -> MonomialOrder:
    """Build an order strategy by kind name.

    Native kinds need n; matrix kinds need an admissible matrix (n optional,
    checked against the matrix when given).
    """
    if kind in ("native-degrevlex", "native-subtotal"):
        if matrix is not None:
            raise ValueError(f"{kind} takes no matrix")
        if n is None:
            raise ValueError(f"{kind} needs the variable count")
        cls = DegRevLexOrder if kind == "native-degrevlex" else SubtotalOrder
        return cls(n, label)
    if kind in ("matrix-direct", "matrix-cached"):
        if matrix is None:
            raise ValueError(f"{kind} needs a weight matrix")
        if n is not None and n != matrix.n:
            raise ValueError(f"variable count {n} disagrees with {matrix.n}x{matrix.n} matrix")
        cls = MatrixDirectOrder if kind == "matrix-direct" else MatrixCachedOrder
        return cls(matrix, label)
    raise ValueError(f"unknown order kind {kind!r}; expected one of {ORDER_KINDS}")
