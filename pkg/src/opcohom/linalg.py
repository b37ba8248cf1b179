"""Exact sparse linear algebra over Q and over prime fields F_p.

Scalars are `fractions.Fraction` over Q and canonical ints in [0, p) over F_p.
Matrices are sparse, column-major dicts; vectors are sparse dicts.  Everything
is immutable by convention: no public operation mutates its arguments.

Tensor indices follow one global linearization: a basis tuple (i_1, ..., i_n)
of V^{tensor n}, each i_k in {0, ..., d-1}, maps to sum_k i_k * d^(n-k), i.e.
the leftmost factor is the most significant digit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class LinalgError(Exception):
    pass


class FieldMismatchError(LinalgError):
    pass


class DimensionMismatchError(LinalgError):
    pass


class NotAComplexError(LinalgError):
    """d_out . d_in != 0; carries a witness basis index and its nonzero image."""

    def __init__(self, witness_index, witness_vector):
        self.witness_index = witness_index
        self.witness_vector = witness_vector
        super().__init__(
            "not a complex: composite is nonzero on basis vector %d" % witness_index
        )


def _is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class Field:
    """Exact coefficient field: the rationals or a prime field F_p."""

    kind: str  # "Q" | "Fp"
    p: int = 0

    @staticmethod
    def Q() -> "Field":
        return Field("Q")

    @staticmethod
    def Fp(p: int) -> "Field":
        if not _is_prime(p):
            raise ValueError("modulus %r is not prime" % (p,))
        return Field("Fp", p)

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "Fp" else 0

    def of(self, x):
        """Coerce an int, Fraction or 'a/b' string into a canonical scalar."""
        if self.kind == "Q":
            if isinstance(x, str):
                return Fraction(x)
            return Fraction(x)
        if isinstance(x, str):
            if "/" in x:
                num, den = x.split("/")
                return self.div(int(num) % self.p, int(den) % self.p)
            x = int(x)
        if isinstance(x, Fraction):
            return self.div(x.numerator % self.p, x.denominator % self.p)
        return x % self.p

    @property
    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    def add(self, a, b):
        return a + b if self.kind == "Q" else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.kind == "Q" else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.kind == "Q" else (a * b) % self.p

    def neg(self, a):
        return -a if self.kind == "Q" else (-a) % self.p

    def inv(self, a):
        if self.kind == "Q":
            if a == 0:
                raise ZeroDivisionError("inverse of 0")
            return 1 / a
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0 mod %d" % self.p)
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def sign(self, n: int):
        """(-1)**n as a field scalar."""
        return self.one if n % 2 == 0 else self.neg(self.one)

    def serialize(self, a) -> str:
        if self.kind == "Q":
            return str(a)
        return str(a)

    def __str__(self):
        return "Q" if self.kind == "Q" else "F%d" % self.p


def _check_same_field(a, b):
    if a.field != b.field:
        raise FieldMismatchError("mixed fields %s and %s" % (a.field, b.field))


# ---------------------------------------------------------------------------
# tensor index helpers


def tuple_to_index(tup, d: int) -> int:
    idx = 0
    for t in tup:
        idx = idx * d + t
    return idx


def index_to_tuple(idx: int, n: int, d: int) -> tuple:
    out = [0] * n
    for k in range(n - 1, -1, -1):
        out[k] = idx % d
        idx //= d
    return tuple(out)


def all_tuples(n: int, d: int):
    """Basis tuples of V^{tensor n} in index order."""
    return itertools.product(range(d), repeat=n)


# ---------------------------------------------------------------------------
# vectors


class Vec:
    """Sparse vector: dict index -> nonzero scalar."""

    __slots__ = ("dim", "field", "e")

    def __init__(self, field: Field, dim: int, entries=None):
        self.field = field
        self.dim = dim
        self.e = {}
        if entries:
            zero = field.zero
            for i, v in entries.items() if isinstance(entries, dict) else entries:
                if not (0 <= i < dim):
                    raise DimensionMismatchError("index %d out of range" % i)
                if v != zero:
                    self.e[i] = v

    @staticmethod
    def zero(field, dim):
        return Vec(field, dim)

    @staticmethod
    def basis(field, dim, i):
        return Vec(field, dim, {i: field.one})

    @staticmethod
    def from_dense(field, coeffs):
        return Vec(field, len(coeffs), {i: field.of(c) for i, c in enumerate(coeffs)})

    def to_dense(self):
        return [self.e.get(i, self.field.zero) for i in range(self.dim)]

    def __getitem__(self, i):
        return self.e.get(i, self.field.zero)

    def is_zero(self):
        return not self.e

    def add(self, other):
        _check_same_field(self, other)
        f = self.field
        out = dict(self.e)
        for i, v in other.e.items():
            s = f.add(out.get(i, f.zero), v)
            if s == f.zero:
                out.pop(i, None)
            else:
                out[i] = s
        return Vec(f, self.dim, out)

    def sub(self, other):
        return self.add(other.scale(self.field.neg(self.field.one)))

    def scale(self, c):
        f = self.field
        if c == f.zero:
            return Vec(f, self.dim)
        return Vec(f, self.dim, {i: f.mul(c, v) for i, v in self.e.items()})

    def neg(self):
        return self.scale(self.field.neg(self.field.one))

    def eq(self, other):
        _check_same_field(self, other)
        return self.dim == other.dim and self.e == other.e

    def kron(self, other):
        """self tensor other; index i*other.dim + j (left factor significant)."""
        _check_same_field(self, other)
        f = self.field
        out = {}
        for i, v in self.e.items():
            for j, w in other.e.items():
                out[i * other.dim + j] = f.mul(v, w)
        return Vec(f, self.dim * other.dim, out)

    def pair(self, other) -> object:
        """Pairing sum_i self_i * other_i (covector applied to vector)."""
        _check_same_field(self, other)
        if self.dim != other.dim:
            raise DimensionMismatchError("pairing %d with %d" % (self.dim, other.dim))
        f = self.field
        acc = f.zero
        small, big = (self.e, other.e) if len(self.e) < len(other.e) else (other.e, self.e)
        for i, v in small.items():
            w = big.get(i)
            if w is not None:
                acc = f.add(acc, f.mul(v, w))
        return acc

    def support(self):
        return sorted(self.e)

    def primitive(self):
        """Over Q: scale to a primitive integer vector with positive leading entry."""
        if self.field.kind != "Q" or not self.e:
            return self
        den = 1
        for v in self.e.values():
            den = den * v.denominator // gcd(den, v.denominator)
        num = 0
        for v in self.e.values():
            num = gcd(num, abs(v.numerator * (den // v.denominator)))
        c = Fraction(den, num)
        lead = self.e[min(self.e)]
        if lead < 0:
            c = -c
        return self.scale(c)

    def __repr__(self):
        return "Vec(%s, dim=%d, %r)" % (self.field, self.dim, dict(sorted(self.e.items())))


# ---------------------------------------------------------------------------
# matrices


class Mat:
    """Sparse matrix, column-major: cols[c] = {row: nonzero scalar}."""

    __slots__ = ("rows", "cols", "field", "c")

    def __init__(self, field: Field, rows: int, cols: int, columns=None):
        self.field = field
        self.rows = rows
        self.cols = cols
        self.c = columns if columns is not None else {}

    @staticmethod
    def zeros(field, rows, cols):
        return Mat(field, rows, cols)

    @staticmethod
    def identity(field, n):
        one = field.one
        return Mat(field, n, n, {i: {i: one} for i in range(n)})

    @staticmethod
    def from_entries(field, rows, cols, entries):
        """entries: iterable of (row, col, scalar); zeros are dropped."""
        c = {}
        zero = field.zero
        for r, col, v in entries:
            if not (0 <= r < rows and 0 <= col < cols):
                raise DimensionMismatchError("entry (%d, %d) out of range" % (r, col))
            if v != zero:
                c.setdefault(col, {})[r] = v
        return Mat(field, rows, cols, c)

    @staticmethod
    def from_rows(field, dense_rows, cols=None):
        rows = len(dense_rows)
        if cols is None:
            cols = len(dense_rows[0]) if rows else 0
        ent = []
        for r, row in enumerate(dense_rows):
            for col, v in enumerate(row):
                ent.append((r, col, field.of(v)))
        return Mat.from_entries(field, rows, cols, ent)

    @staticmethod
    def from_cols(field, rows, vecs):
        c = {}
        for j, v in enumerate(vecs):
            if v.dim != rows:
                raise DimensionMismatchError("column %d has dim %d != %d" % (j, v.dim, rows))
            if v.e:
                c[j] = dict(v.e)
        return Mat(field, rows, len(vecs), c)

    def entry(self, r, col):
        return self.c.get(col, {}).get(r, self.field.zero)

    def column(self, col) -> Vec:
        return Vec(self.field, self.rows, dict(self.c.get(col, {})))

    def col_dict(self, col) -> dict:
        return self.c.get(col, {})

    def nnz(self):
        return sum(len(col) for col in self.c.values())

    def is_zero(self):
        return not self.c

    def eq(self, other):
        _check_same_field(self, other)
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.c == other.c
        )

    def add(self, other):
        _check_same_field(self, other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError("add %dx%d with %dx%d" % (self.rows, self.cols, other.rows, other.cols))
        f = self.field
        out = {col: dict(d) for col, d in self.c.items()}
        for col, d in other.c.items():
            tgt = out.setdefault(col, {})
            for r, v in d.items():
                s = f.add(tgt.get(r, f.zero), v)
                if s == f.zero:
                    tgt.pop(r, None)
                else:
                    tgt[r] = s
            if not tgt:
                del out[col]
        return Mat(f, self.rows, self.cols, out)

    def sub(self, other):
        return self.add(other.scale(self.field.neg(self.field.one)))

    def scale(self, cscal):
        f = self.field
        if cscal == f.zero:
            return Mat(f, self.rows, self.cols)
        return Mat(
            f,
            self.rows,
            self.cols,
            {col: {r: f.mul(cscal, v) for r, v in d.items()} for col, d in self.c.items()},
        )

    def neg(self):
        return self.scale(self.field.neg(self.field.one))

    def apply(self, vec: Vec) -> Vec:
        _check_same_field(self, vec)
        if vec.dim != self.cols:
            raise DimensionMismatchError("apply %dx%d to dim %d" % (self.rows, self.cols, vec.dim))
        f = self.field
        zero = f.zero
        acc = {}
        for j, x in vec.e.items():
            col = self.c.get(j)
            if col is None:
                continue
            for r, v in col.items():
                s = f.add(acc.get(r, zero), f.mul(v, x))
                if s == zero:
                    acc.pop(r, None)
                else:
                    acc[r] = s
        return Vec(f, self.rows, acc)

    def mul(self, other: "Mat") -> "Mat":
        _check_same_field(self, other)
        if self.cols != other.rows:
            raise DimensionMismatchError("mul %dx%d by %dx%d" % (self.rows, self.cols, other.rows, other.cols))
        f = self.field
        zero = f.zero
        out = {}
        for j, bcol in other.c.items():
            acc = {}
            for k, x in bcol.items():
                acol = self.c.get(k)
                if acol is None:
                    continue
                for r, v in acol.items():
                    s = f.add(acc.get(r, zero), f.mul(v, x))
                    if s == zero:
                        acc.pop(r, None)
                    else:
                        acc[r] = s
            if acc:
                out[j] = acc
        return Mat(f, self.rows, other.cols, out)

    def __matmul__(self, other):
        return self.mul(other)

    def transpose(self):
        out = {}
        for col, d in self.c.items():
            for r, v in d.items():
                out.setdefault(r, {})[col] = v
        return Mat(self.field, self.cols, self.rows, out)

    def kron(self, other: "Mat") -> "Mat":
        """self tensor other on the global index convention."""
        _check_same_field(self, other)
        f = self.field
        out = {}
        for ca, da in self.c.items():
            for cb, db in other.c.items():
                col = ca * other.cols + cb
                tgt = {}
                for ra, va in da.items():
                    for rb, vb in db.items():
                        tgt[ra * other.rows + rb] = f.mul(va, vb)
                out[col] = tgt
        return Mat(f, self.rows * other.rows, self.cols * other.cols, out)

    def to_dense(self):
        zero = self.field.zero
        dense = [[zero] * self.cols for _ in range(self.rows)]
        for col, d in self.c.items():
            for r, v in d.items():
                dense[r][col] = v
        return dense

    def first_difference(self, other):
        """(row, col) of the first differing entry, or None if equal."""
        cols = sorted(set(self.c) | set(other.c))
        for col in cols:
            a = self.c.get(col, {})
            b = other.c.get(col, {})
            if a == b:
                continue
            for r in sorted(set(a) | set(b)):
                if a.get(r) != b.get(r):
                    return (r, col)
        return None

    def __repr__(self):
        return "Mat(%s, %dx%d, nnz=%d)" % (self.field, self.rows, self.cols, self.nnz())


def kron_all(mats):
    out = mats[0]
    for m in mats[1:]:
        out = out.kron(m)
    return out


def outer(v: Vec, w: Vec) -> Mat:
    """Rank-one matrix v * w^T (w acting as a covector)."""
    _check_same_field(v, w)
    f = v.field
    cols = {}
    for j, b in w.e.items():
        cols[j] = {i: f.mul(a, b) for i, a in v.e.items()}
    return Mat(f, v.dim, w.dim, cols)


def swap_matrix(f: Field, da: int, db: int) -> Mat:
    """The exchange isomorphism V_a tensor V_b -> V_b tensor V_a."""
    one = f.one
    ent = [(j * da + i, i * db + j, one) for i in range(da) for j in range(db)]
    return Mat.from_entries(f, da * db, da * db, ent)


# ---------------------------------------------------------------------------
# elimination

def _abs_less(f: Field, a, b):
    """|a| < |b| for pivot selection (exact)."""
    if f.kind == "Q":
        return abs(a) < abs(b)
    return a < b


class _Echelon:
    """Incremental column echelon with combination tracking.

    Each accepted pivot column is reduced against all earlier pivots and
    normalized to pivot value 1; `combo` expresses it in the originally fed
    columns.  Pivot rows are chosen by smallest scalar magnitude (over Q this
    limits coefficient blowup), ties broken by row index.
    """

    def __init__(self, field: Field, dim: int):
        self.field = field
        self.dim = dim
        self.pivrows = []  # insertion order
        self.cols = []  # reduced columns, dicts
        self.combos = []  # dicts over original column indices
        self._next_combo_key = 0

    def reduce(self, vec: dict):
        """Return (remainder, coeffs) with vec = sum coeffs[k]*cols[k] + remainder."""
        f = self.field
        zero = f.zero
        rem = dict(vec)
        coeffs = [zero] * len(self.cols)
        for k, prow in enumerate(self.pivrows):
            x = rem.get(prow)
            if x is None:
                continue
            coeffs[k] = x
            col = self.cols[k]
            for r, v in col.items():
                s = f.sub(rem.get(r, zero), f.mul(x, v))
                if s == zero:
                    rem.pop(r, None)
                else:
                    rem[r] = s
        return rem, coeffs

    def feed(self, vec: dict, combo_key=None):
        """Reduce and insert if independent.  Returns (is_new_pivot, null_combo).

        On dependence, null_combo expresses the fed column in earlier fed ones.
        """
        f = self.field
        if combo_key is None:
            combo_key = self._next_combo_key
        self._next_combo_key = max(self._next_combo_key, combo_key + 1)
        rem, coeffs = self.reduce(vec)
        combo = {combo_key: f.one}
        for k, ck in enumerate(coeffs):
            if ck == f.zero:
                continue
            for key, v in self.combos[k].items():
                s = f.sub(combo.get(key, f.zero), f.mul(ck, v))
                if s == f.zero:
                    combo.pop(key, None)
                else:
                    combo[key] = s
        if not rem:
            return False, combo
        prow = None
        best = None
        for r in sorted(rem):
            v = rem[r]
            if best is None or _abs_less(f, v, best):
                best = v
                prow = r
        inv = f.inv(rem[prow])
        col = {r: f.mul(inv, v) for r, v in rem.items()}
        combo = {k: f.mul(inv, v) for k, v in combo.items()}
        self.pivrows.append(prow)
        self.cols.append(col)
        self.combos.append(combo)
        return True, combo

    @property
    def rank(self):
        return len(self.cols)


def rank_kernel_image(m: Mat):
    """Exact rank, kernel basis and image basis of a sparse matrix.

    Returns (rank, kernel_basis, image_basis): kernel vectors satisfy
    m.apply(v).is_zero() exactly; image vectors are reduced pivot columns.
    """
    f = m.field
    ech = _Echelon(f, m.rows)
    kernel = []
    for j in range(m.cols):
        new, combo = ech.feed(m.col_dict(j), combo_key=j)
        if not new:
            kernel.append(Vec(f, m.cols, combo).primitive())
    image = [Vec(f, m.rows, dict(col)).primitive() for col in ech.cols]
    return ech.rank, kernel, image


def solve(m: Mat, b: Vec):
    """One exact solution x of m.x = b, or None."""
    _check_same_field(m, b)
    if b.dim != m.rows:
        raise DimensionMismatchError("solve %dx%d against dim %d" % (m.rows, m.cols, b.dim))
    f = m.field
    ech = _Echelon(f, m.rows)
    keep = []  # original column index per pivot
    for j in range(m.cols):
        new, _ = ech.feed(m.col_dict(j), combo_key=j)
        if new:
            keep.append(j)
    rem, coeffs = ech.reduce(dict(b.e))
    if rem:
        return None
    x = {}
    # coeffs are against reduced pivot columns; push through the combos,
    # which live over original column indices.
    for k, ck in enumerate(coeffs):
        if ck == f.zero:
            continue
        for key, v in ech.combos[k].items():
            s = f.add(x.get(key, f.zero), f.mul(ck, v))
            if s == f.zero:
                x.pop(key, None)
            else:
                x[key] = s
    return Vec(f, m.cols, x)


def inverse(m: Mat):
    """Exact inverse, or None when singular."""
    if m.rows != m.cols:
        return None
    f = m.field
    ech = _Echelon(f, m.rows)
    for j in range(m.cols):
        new, _ = ech.feed(m.col_dict(j), combo_key=j)
        if not new:
            return None
    cols = []
    for i in range(m.rows):
        rem, coeffs = ech.reduce({i: f.one})
        if rem:
            return None
        x = {}
        for k, ck in enumerate(coeffs):
            if ck == f.zero:
                continue
            for key, v in ech.combos[k].items():
                s = f.add(x.get(key, f.zero), f.mul(ck, v))
                if s == f.zero:
                    x.pop(key, None)
                else:
                    x[key] = s
        cols.append(Vec(f, m.cols, x))
    return Mat.from_cols(f, m.rows, cols)


class Subquotient:
    """ker(d_out) / im(d_in) with chosen class representatives.

    project maps a vector of the ambient space lying in ker(d_out) to its
    coordinates in class_reps; it vanishes exactly on im(d_in).
    """

    def __init__(self, field, ambient_dim, cycle_basis, boundary_basis, class_reps, ech, rep_index):
        self.field = field
        self.ambient_dim = ambient_dim
        self.cycle_basis = cycle_basis
        self.boundary_basis = boundary_basis
        self.class_reps = class_reps
        self._ech = ech
        self._rep_index = rep_index  # combo key -> rep position

    @property
    def dim(self):
        return len(self.class_reps)

    def contains_cycle(self, v: Vec) -> bool:
        rem, _ = self._ech.reduce(dict(v.e))
        return not rem

    def project(self, v: Vec) -> Vec:
        if v.dim != self.ambient_dim:
            raise DimensionMismatchError("project dim %d into ambient %d" % (v.dim, self.ambient_dim))
        f = self.field
        rem, coeffs = self._ech.reduce(dict(v.e))
        if rem:
            raise LinalgError("vector is not a cycle: cannot project")
        out = {}
        for k, ck in enumerate(coeffs):
            if ck == f.zero:
                continue
            for key, val in self._ech.combos[k].items():
                j = self._rep_index.get(key)
                if j is None:
                    continue
                s = f.add(out.get(j, f.zero), f.mul(ck, val))
                if s == f.zero:
                    out.pop(j, None)
                else:
                    out[j] = s
        return Vec(f, self.dim, out)


def subquotient(d_in: Mat, d_out: Mat) -> Subquotient:
    """Homology at the middle of  . --d_in--> V --d_out--> .  (checked complex)."""
    _check_same_field(d_in, d_out)
    if d_in.rows != d_out.cols:
        raise DimensionMismatchError(
            "d_in lands in dim %d but d_out starts from dim %d" % (d_in.rows, d_out.cols)
        )
    comp = d_out.mul(d_in)
    if not comp.is_zero():
        j = sorted(comp.c)[0]
        raise NotAComplexError(j, comp.column(j))
    f = d_in.field
    ambient = d_in.rows
    _rank_out, cycle_basis, _img = rank_kernel_image(d_out)
    _rank_in, _ker_in, boundary_basis = rank_kernel_image(d_in)
    ech = _Echelon(f, ambient)
    nb = len(boundary_basis)
    for k, b in enumerate(boundary_basis):
        new, _ = ech.feed(dict(b.e), combo_key=k)
        if not new:
            raise LinalgError("boundary basis is not independent")
    reps = []
    rep_index = {}
    for t, z in enumerate(cycle_basis):
        key = nb + t
        new, _ = ech.feed(dict(z.e), combo_key=key)
        if new:
            rep_index[key] = len(reps)
            reps.append(z)
    return Subquotient(f, ambient, cycle_basis, boundary_basis, reps, ech, rep_index)
