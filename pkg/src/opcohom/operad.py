"""Linear operads with multiplication: composition axioms, cosimplicial
structure, cup / circle-bar / bracket / squaring operations, cyclic
structure, Connes coboundary, cohomology rings with Gerstenhaber and
Batalin-Vilkovisky tables, and the cyclic-invariant subcomplex.

An OperadSlice holds the arity-indexed spaces O(0..N) of a linear operad
through their dimensions, all composition maps o_i as sparse matrices on
tensor products (column a*dim(O(n)) + b holds the image of the (a, b) basis
pair), the identity element of O(1), the multiplication in O(2) and the unit
in O(0), and optionally the cyclic operators tau_n.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from opcohom.cosimplicial import CosimplicialModule, _mat_witness
from opcohom.linalg import (
    Field,
    Mat,
    Vec,
    rank_kernel_image,
    solve,
    subquotient,
    swap_matrix,
)
from opcohom.report import Report, StructureError


class ArityError(StructureError):
    """Requested arity exceeds the slice budget."""


@dataclass
class OperadSlice:
    field: Field
    N: int
    dims: list  # dims[n] = dim O(n), 0 <= n <= N
    comp: dict  # (m, n, i) -> Mat, rows dim O(m+n-1), cols dim O(m)*dim O(n)
    identity: Vec  # in O(1)
    mult: Vec  # in O(2)
    unit0: Vec  # in O(0)
    cyclic: list | None = None  # [tau_0 .. tau_N]
    name: str = ""

    def dim(self, n):
        if not (0 <= n <= self.N):
            raise ArityError("arity %d outside budget %d" % (n, self.N))
        return self.dims[n]

    def compose(self, m: int, n: int, i: int, f: Vec, g: Vec) -> Vec:
        """f o_i g for f in O(m), g in O(n)."""
        key = (m, n, i)
        if key not in self.comp:
            raise ArityError("no composition %r within budget %d" % (key, self.N))
        c = self.comp[key]
        fd = self.field
        dim_b = self.dims[n]
        acc = {}
        zero = fd.zero
        for a, va in f.e.items():
            for b, vb in g.e.items():
                col = c.c.get(a * dim_b + b)
                if not col:
                    continue
                s = fd.mul(va, vb)
                for r, v in col.items():
                    t = fd.add(acc.get(r, zero), fd.mul(s, v))
                    if t == zero:
                        acc.pop(r, None)
                    else:
                        acc[r] = t
        return Vec(fd, self.dims[m + n - 1], acc)

    def compose_left(self, m: int, n: int, i: int, fixed: Vec) -> Mat:
        """Matrix of g -> fixed o_i g."""
        c = self.comp[(m, n, i)]
        fd = self.field
        dim_b = self.dims[n]
        zero = fd.zero
        cols = {}
        for col, cd in c.c.items():
            a, b = divmod(col, dim_b)
            va = fixed.e.get(a)
            if va is None:
                continue
            tgt = cols.setdefault(b, {})
            for r, v in cd.items():
                s = fd.add(tgt.get(r, zero), fd.mul(va, v))
                if s == zero:
                    tgt.pop(r, None)
                else:
                    tgt[r] = s
        cols = {b: d for b, d in cols.items() if d}
        return Mat(fd, self.dims[m + n - 1], self.dims[n], cols)

    def compose_right(self, m: int, n: int, i: int, fixed: Vec) -> Mat:
        """Matrix of f -> f o_i fixed."""
        c = self.comp[(m, n, i)]
        fd = self.field
        dim_b = self.dims[n]
        zero = fd.zero
        cols = {}
        for col, cd in c.c.items():
            a, b = divmod(col, dim_b)
            vb = fixed.e.get(b)
            if vb is None:
                continue
            tgt = cols.setdefault(a, {})
            for r, v in cd.items():
                s = fd.add(tgt.get(r, zero), fd.mul(vb, v))
                if s == zero:
                    tgt.pop(r, None)
                else:
                    tgt[r] = s
        cols = {a: d for a, d in cols.items() if d}
        return Mat(fd, self.dims[m + n - 1], self.dims[m], cols)


# ---------------------------------------------------------------------------
# operad axiom suite


def _compose2(first: Mat, dim_y: int, second: Mat, second_split: int, free_side: str, f: Field):
    """Trilinear composite table.

    first: columns (x, y), col = x*dim_y + y, giving sparse vectors over K.
    second: columns pairing K with a free index z:
      free_side 'after':  col = k*second_split + z  (second_split = dim z)
      free_side 'before': col = z*second_split + k  (second_split = dim K)
    Returns dict (x, y, z) -> {row: scalar}, empty rows dropped.
    """
    by_k = {}
    for col, cd in second.c.items():
        if free_side == "after":
            k, z = divmod(col, second_split)
        else:
            z, k = divmod(col, second_split)
        by_k.setdefault(k, []).append((z, cd))
    zero = f.zero
    out = {}
    for col, cd in first.c.items():
        x, y = divmod(col, dim_y)
        for k, alpha in cd.items():
            for z, cd2 in by_k.get(k, ()):
                tgt = out.setdefault((x, y, z), {})
                for r, v in cd2.items():
                    s = f.add(tgt.get(r, zero), f.mul(alpha, v))
                    if s == zero:
                        tgt.pop(r, None)
                    else:
                        tgt[r] = s
    return {key: val for key, val in out.items() if val}


def check_operad(op: OperadSlice) -> Report:
    """All composition associativity and unit identities within the budget,
    plus the multiplication axioms, checked exactly on basis elements."""
    rep = Report("operad axioms for %s" % (op.name or "O"))
    f = op.field
    N = op.N

    # identity element: f o_i id = f, id o_1 f = f
    for m in range(1, N + 1):
        I = Mat.identity(f, op.dims[m])
        for i in range(1, m + 1):
            mat = op.compose_right(m, 1, i, op.identity)
            rep.add("o_%d with id is the identity on O(%d)" % (i, m), mat.eq(I), _mat_witness(mat, I))
        mat = op.compose_left(1, m, 1, op.identity)
        rep.add("id o_1 is the identity on O(%d)" % m, mat.eq(I), _mat_witness(mat, I))
    if N >= 0:
        m0 = op.compose_left(1, 0, 1, op.identity)
        I0 = Mat.identity(f, op.dims[0])
        rep.add("id o_1 is the identity on O(0)", m0.eq(I0), _mat_witness(m0, I0))

    # multiplication axioms
    if N >= 3:
        lhs = op.compose(2, 2, 1, op.mult, op.mult)
        rhs = op.compose(2, 2, 2, op.mult, op.mult)
        rep.add("mu o_1 mu = mu o_2 mu", lhs.eq(rhs))
    lhs = op.compose(2, 0, 1, op.mult, op.unit0)
    rep.add("mu o_1 e = id", lhs.eq(op.identity))
    rhs = op.compose(2, 0, 2, op.mult, op.unit0)
    rep.add("mu o_2 e = id", rhs.eq(op.identity))

    # associativity:
    #   j <  i:         (f o_i g) o_j h = (f o_j h) o_{i+p-1} g
    #   i <= j <= i+n-1: (f o_i g) o_j h = f o_i (g o_{j-i+1} h)
    #   j >= i+n:       (f o_i g) o_j h = (f o_{j-n+1} h) o_i g
    for m in range(1, N + 1):
        for n in range(0, N + 1):
            q = m + n - 1
            if q < 0 or q > N or q < 1:
                continue
            for p in range(0, N + 1):
                if q + p - 1 < 0 or q + p - 1 > N:
                    continue
                for i in range(1, m + 1):
                    for j in range(1, q + 1):
                        c1 = op.comp[(m, n, i)]
                        c2 = op.comp[(q, p, j)]
                        lhs = _compose2(c1, op.dims[n], c2, op.dims[p], "after", f)
                        if j < i:
                            if m + p - 1 > N or m + p - 1 < 1:
                                continue
                            c3 = op.comp[(m, p, j)]
                            c4 = op.comp[(m + p - 1, n, i + p - 1)]
                            raw = _compose2(c3, op.dims[p], c4, op.dims[n], "after", f)
                            rhs = {(a, b, c): v for (a, c, b), v in raw.items()}
                            label = "(f o_%d g) o_%d h = (f o_%d h) o_%d g  [m=%d n=%d p=%d]" % (
                                i, j, j, i + p - 1, m, n, p)
                        elif j <= i + n - 1:
                            if n + p - 1 > N or n + p - 1 < 0:
                                continue
                            c3 = op.comp[(n, p, j - i + 1)]
                            c4 = op.comp[(m, n + p - 1, i)]
                            raw = _compose2(c3, op.dims[p], c4, op.dims[n + p - 1], "before", f)
                            rhs = {(a, b, c): v for (b, c, a), v in raw.items()}
                            label = "(f o_%d g) o_%d h = f o_%d (g o_%d h)  [m=%d n=%d p=%d]" % (
                                i, j, i, j - i + 1, m, n, p)
                        else:
                            if m + p - 1 > N or m + p - 1 < 1:
                                continue
                            c3 = op.comp[(m, p, j - n + 1)]
                            c4 = op.comp[(m + p - 1, n, i)]
                            raw = _compose2(c3, op.dims[p], c4, op.dims[n], "after", f)
                            rhs = {(a, b, c): v for (a, c, b), v in raw.items()}
                            label = "(f o_%d g) o_%d h = (f o_%d h) o_%d g  [m=%d n=%d p=%d]" % (
                                i, j, j - n + 1, i, m, n, p)
                        ok = lhs == rhs
                        witness = None
                        if not ok:
                            keys = sorted(set(lhs) | set(rhs))
                            for key in keys:
                                if lhs.get(key) != rhs.get(key):
                                    witness = "basis triple %r" % (key,)
                                    break
                        rep.add(label, ok, witness)
    return rep


def check_cyclic(op: OperadSlice) -> Report:
    """Cyclic operad axioms: tau powers, tau_2 mu = mu, and both exchange laws."""
    rep = Report("cyclic operad axioms for %s" % (op.name or "O"))
    if op.cyclic is None:
        rep.add("cyclic structure present", False, "no tau operators")
        return rep
    f = op.field
    N = op.N
    for n in range(N + 1):
        t = op.cyclic[n]
        p = Mat.identity(f, op.dims[n])
        for _ in range(n + 1):
            p = t.mul(p)
        I = Mat.identity(f, op.dims[n])
        rep.add("tau_%d^%d = id" % (n, n + 1), p.eq(I), _mat_witness(p, I))
    rep.add("tau_1 id = id", op.cyclic[1].apply(op.identity).eq(op.identity))
    if N >= 2:
        rep.add("tau_2 mu = mu", op.cyclic[2].apply(op.mult).eq(op.mult))
    # tau_{m+n-1}(f o_1 g) = tau_n g o_n tau_m f
    for m in range(1, N + 1):
        for n in range(1, N + 1):
            if m + n - 1 > N:
                continue
            lhs = op.cyclic[m + n - 1].mul(op.comp[(m, n, 1)])
            sw = swap_matrix(f, op.dims[m], op.dims[n])
            rhs = op.comp[(n, m, n)].mul(op.cyclic[n].kron(op.cyclic[m])).mul(sw)
            rep.add(
                "tau(f o_1 g) = tau g o_%d tau f  [m=%d n=%d]" % (n, m, n),
                lhs.eq(rhs),
                _mat_witness(lhs, rhs),
            )
    # tau_{m+n-1}(f o_i g) = tau_m f o_{i-1} g, 2 <= i <= m
    for m in range(2, N + 1):
        for n in range(0, N + 1):
            if m + n - 1 > N or m + n - 1 < 1:
                continue
            for i in range(2, m + 1):
                lhs = op.cyclic[m + n - 1].mul(op.comp[(m, n, i)])
                rhs = op.comp[(m, n, i - 1)].mul(op.cyclic[m].kron(Mat.identity(f, op.dims[n])))
                rep.add(
                    "tau(f o_%d g) = tau f o_%d g  [m=%d n=%d]" % (i, i - 1, m, n),
                    lhs.eq(rhs),
                    _mat_witness(lhs, rhs),
                )
    return rep


def check_operad_morphism(src: OperadSlice, tgt: OperadSlice, maps: list) -> Report:
    """maps[n]: O_src(n) -> O_tgt(n); verify compatibility with every stored
    composition plus preservation of identity, multiplication and unit."""
    rep = Report("operad morphism %s -> %s" % (src.name or "O", tgt.name or "O'"))
    f = src.field
    rep.add("identity preserved", maps[1].apply(src.identity).eq(tgt.identity))
    rep.add("multiplication preserved", maps[2].apply(src.mult).eq(tgt.mult))
    rep.add("unit preserved", maps[0].apply(src.unit0).eq(tgt.unit0))
    for (m, n, i), c_src in sorted(src.comp.items()):
        if (m, n, i) not in tgt.comp:
            continue
        lhs = maps[m + n - 1].mul(c_src)
        rhs = tgt.comp[(m, n, i)].mul(maps[m].kron(maps[n]))
        rep.add(
            "compatible with o_%d on O(%d) x O(%d)" % (i, m, n),
            lhs.eq(rhs),
            _mat_witness(lhs, rhs),
        )
    return rep


# ---------------------------------------------------------------------------
# cosimplicial structure and cochain operations


def cosimplicial(op: OperadSlice) -> CosimplicialModule:
    """The cosimplicial module of an operad with multiplication:
    delta_0 f = mu o_2 f, delta_i f = f o_i mu, delta_{n+1} f = mu o_1 f,
    sigma_{i-1} f = f o_i e."""
    f = op.field
    cofaces = {}
    codegens = {}
    for n in range(op.N):
        maps = [op.compose_left(2, n, 2, op.mult)]
        for i in range(1, n + 1):
            maps.append(op.compose_right(n, 2, i, op.mult))
        maps.append(op.compose_left(2, n, 1, op.mult))
        cofaces[n] = maps
    for n in range(op.N + 1):
        codegens[n] = [op.compose_right(n, 0, i, op.unit0) for i in range(1, n + 1)]
    tau = None
    if op.cyclic is not None:
        tau = {n: op.cyclic[n] for n in range(op.N + 1)}
    return CosimplicialModule(
        field=f, N=op.N, dims=list(op.dims), cofaces=cofaces, codegens=codegens, tau=tau
    )


def differentials(op: OperadSlice) -> dict:
    """n -> d_n = sum (-1)^i delta_i : O(n) -> O(n+1), for n < N."""
    cs = cosimplicial(op)
    return {n: cs.differential(n) for n in range(op.N)}


def cup(op: OperadSlice, m: int, n: int, f: Vec, g: Vec) -> Vec:
    """f cup g = (mu o_1 f) o_{m+1} g in O(m+n)."""
    step = op.compose(2, m, 1, op.mult, f)
    return op.compose(m + 1, n, m + 1, step, g)


def circle_bar(op: OperadSlice, m: int, n: int, f: Vec, g: Vec) -> Vec:
    """f bar-circ g = (-1)^((m-1)(n-1)) sum_i (-1)^((n-1)(i-1)) f o_i g."""
    fd = op.field
    out = Vec.zero(fd, op.dims[m + n - 1])
    for i in range(1, m + 1):
        term = op.compose(m, n, i, f, g)
        out = out.add(term.scale(fd.sign((n - 1) * (i - 1))))
    return out.scale(fd.sign((m - 1) * (n - 1)))


def bracket(op: OperadSlice, m: int, n: int, f: Vec, g: Vec) -> Vec:
    """{f, g} = f bar-circ g - (-1)^((m-1)(n-1)) g bar-circ f."""
    fd = op.field
    a = circle_bar(op, m, n, f, g)
    b = circle_bar(op, n, m, g, f)
    return a.sub(b.scale(fd.sign((m - 1) * (n - 1))))


def sq(op: OperadSlice, n: int, f: Vec) -> Vec:
    """Sq(f) = f bar-circ f, defined when n is even or char = 2."""
    if n % 2 != 0 and op.field.characteristic != 2:
        raise StructureError("squaring needs even arity or characteristic 2")
    return circle_bar(op, n, n, f, f)


# ---------------------------------------------------------------------------
# Connes coboundary


def connes_B(op: OperadSlice) -> dict:
    """B_n = N_{n-1} . (sigma_{n-1} tau_n) . (1 - lambda_n): O(n) -> O(n-1),
    with lambda_n = (-1)^n tau_n; B_0 = 0."""
    if op.cyclic is None:
        raise StructureError("Connes coboundary needs a cyclic structure")
    f = op.field
    cs = cosimplicial(op)
    out = {0: Mat.zeros(f, 0, op.dims[0])}
    for n in range(1, op.N + 1):
        tau_n = op.cyclic[n]
        lam_n = tau_n.scale(f.sign(n))
        one_minus = Mat.identity(f, op.dims[n]).sub(lam_n)
        s_extra = cs.codegens[n][n - 1].mul(tau_n)
        lam_dn = op.cyclic[n - 1].scale(f.sign(n - 1))
        norm = Mat.zeros(f, op.dims[n - 1], op.dims[n - 1])
        power = Mat.identity(f, op.dims[n - 1])
        for _ in range(n):
            norm = norm.add(power)
            power = lam_dn.mul(power)
        out[n] = norm.mul(s_extra).mul(one_minus)
    return out


# ---------------------------------------------------------------------------
# cohomology ring with Gerstenhaber / BV tables


@dataclass
class CochainReport:
    """Per-degree cohomology with operation tables on chosen representatives.

    cup_table[(m, n)][(i, j)] and bracket_table[(m, n)][(i, j)] hold the
    coordinates (in the class representatives of the target degree) of the
    product / bracket of representatives i and j; b_table[n][i] likewise for
    the Connes coboundary.  sq_table[n][i] records Sq on representatives.
    """

    max_degree: int
    betti: list
    class_reps: list
    cup_table: dict
    bracket_table: dict
    b_table: dict | None
    sq_table: dict
    checks: Report

    def cup_coords(self, m, n, i, j):
        return self.cup_table[(m, n)][(i, j)]

    def bracket_coords(self, m, n, i, j):
        return self.bracket_table[(m, n)][(i, j)]


def cohomology(op: OperadSlice, max_degree: int):
    """Subquotients H^0..H^max_degree of the cochain complex of op."""
    if max_degree >= op.N:
        raise ArityError("max degree %d needs slices up to %d > budget %d" % (max_degree, max_degree + 1, op.N))
    f = op.field
    ds = differentials(op)
    sq_list = []
    for n in range(max_degree + 1):
        d_in = Mat.zeros(f, op.dims[n], 0) if n == 0 else ds[n - 1]
        sq_list.append(subquotient(d_in, ds[n]))
    return sq_list


def cohomology_ring(op: OperadSlice, max_degree: int, seed: int = 7) -> CochainReport:
    f = op.field
    rep = Report("cohomology ring of %s up to degree %d" % (op.name or "O", max_degree))
    ds = differentials(op)
    for n in range(op.N - 1):
        dd = ds[n + 1].mul(ds[n])
        rep.add("d.d = 0 at degree %d" % n, dd.is_zero())
    hs = cohomology(op, max_degree)
    betti = [h.dim for h in hs]
    reps = [h.class_reps for h in hs]
    rng = random.Random(seed)

    def proj(n, v):
        return hs[n].project(v)

    def random_cochain(n):
        return Vec(
            f, op.dims[n],
            {k: f.of(rng.randrange(1, 5)) for k in rng.sample(range(op.dims[n]), min(3, op.dims[n]))},
        )

    # d is a derivation for cup: d(f u g) = df u g + (-1)^m f u dg
    for m in range(max_degree):
        for n in range(max_degree):
            if m + n + 1 > max_degree:
                continue
            for _ in range(2):
                a, b = random_cochain(m), random_cochain(n)
                lhs = ds[m + n].apply(cup(op, m, n, a, b))
                rhs = cup(op, m + 1, n, ds[m].apply(a), b).add(
                    cup(op, m, n + 1, a, ds[n].apply(b)).scale(f.sign(m))
                )
                rep.add("d is a cup derivation (deg %d, %d)" % (m, n), lhs.eq(rhs))

    cup_table = {}
    for m in range(max_degree + 1):
        for n in range(max_degree + 1 - m):
            table = {}
            for i, a in enumerate(reps[m]):
                for j, b in enumerate(reps[n]):
                    table[(i, j)] = proj(m + n, cup(op, m, n, a, b))
            cup_table[(m, n)] = table
    bracket_table = {}
    for m in range(max_degree + 1):
        for n in range(max_degree + 1 - m + 1):
            if n > max_degree or m + n - 1 < 0 or m + n - 1 > max_degree:
                continue
            table = {}
            for i, a in enumerate(reps[m]):
                for j, b in enumerate(reps[n]):
                    table[(i, j)] = proj(m + n - 1, bracket(op, m, n, a, b))
            bracket_table[(m, n)] = table

    # graded commutativity of cup on cohomology
    for (m, n), table in cup_table.items():
        if (n, m) not in cup_table:
            continue
        for (i, j), val in table.items():
            other = cup_table[(n, m)][(j, i)]
            ok = val.eq(other.scale(f.sign(m * n)))
            rep.add("cup graded-commutative at (%d,%d) reps (%d,%d)" % (m, n, i, j), ok)
    # associativity of cup at cochain level on representatives
    for m in range(max_degree + 1):
        for n in range(max_degree + 1):
            for p in range(max_degree + 1):
                if m + n + p > max_degree or m + n + p == 0:
                    continue
                for a in reps[m]:
                    for b in reps[n]:
                        for c in reps[p]:
                            lhs = cup(op, m + n, p, cup(op, m, n, a, b), c)
                            rhs = cup(op, m, n + p, a, cup(op, n, p, b, c))
                            rep.add("cup associative (deg %d,%d,%d)" % (m, n, p), lhs.eq(rhs))
    # Poisson rule on cohomology: {a u b, c} = {a,c} u b + (-1)^(|a|(|c|-1)) a u {b,c}
    for m in range(max_degree + 1):
        for n in range(max_degree + 1):
            for p in range(max_degree + 1):
                if m + n + p - 1 > max_degree or m + n + p - 1 < 0:
                    continue
                for a in reps[m]:
                    for b in reps[n]:
                        for c in reps[p]:
                            lhs = proj(m + n + p - 1, bracket(op, m + n, p, cup(op, m, n, a, b), c))
                            t1 = cup(op, m + p - 1, n, bracket(op, m, p, a, c), b) if m + p >= 1 else None
                            t2 = cup(op, m, n + p - 1, a, bracket(op, n, p, b, c)) if n + p >= 1 else None
                            rhs = Vec.zero(f, op.dims[m + n + p - 1])
                            if t1 is not None:
                                rhs = rhs.add(t1)
                            if t2 is not None:
                                rhs = rhs.add(t2.scale(f.sign(m * (p - 1))))
                            rep.add(
                                "Poisson rule (deg %d,%d,%d)" % (m, n, p),
                                lhs.eq(proj(m + n + p - 1, rhs)),
                            )
    # graded Jacobi at the cochain level on representatives:
    # {a,{b,c}} = {{a,b},c} + (-1)^((|a|-1)(|b|-1)) {b,{a,c}}
    for m in range(max_degree + 1):
        for n in range(max_degree + 1):
            for p in range(max_degree + 1):
                if m + n + p - 2 < 0 or m + n + p - 2 > op.N:
                    continue
                if m + n - 1 < 0 or n + p - 1 < 0 or m + p - 1 < 0:
                    continue
                if m + n - 1 > op.N or n + p - 1 > op.N or m + p - 1 > op.N:
                    continue
                for a in reps[m]:
                    for b in reps[n]:
                        for c in reps[p]:
                            lhs = bracket(op, m, n + p - 1, a, bracket(op, n, p, b, c))
                            r1 = bracket(op, m + n - 1, p, bracket(op, m, n, a, b), c)
                            r2 = bracket(op, n, m + p - 1, b, bracket(op, m, p, a, c))
                            rhs = r1.add(r2.scale(f.sign((m - 1) * (n - 1))))
                            rep.add("graded Jacobi (deg %d,%d,%d)" % (m, n, p), lhs.eq(rhs))

    # well-definedness: perturb representatives by boundaries
    for (m, n), table in list(cup_table.items()):
        if m < 1:
            continue
        for (i, j), val in list(table.items())[:2]:
            z = random_cochain(m - 1)
            pert = reps[m][i].add(ds[m - 1].apply(z))
            rep.add(
                "cup well-defined under boundary perturbation (deg %d,%d)" % (m, n),
                proj(m + n, cup(op, m, n, pert, reps[n][j])).eq(val),
            )
    for (m, n), table in list(bracket_table.items()):
        if m < 1:
            continue
        for (i, j), val in list(table.items())[:2]:
            z = random_cochain(m - 1)
            pert = reps[m][i].add(ds[m - 1].apply(z))
            rep.add(
                "bracket well-defined under boundary perturbation (deg %d,%d)" % (m, n),
                proj(m + n - 1, bracket(op, m, n, pert, reps[n][j])).eq(val),
            )

    b_table = None
    sq_table = {}
    if op.cyclic is not None:
        bs = connes_B(op)
        for n in range(1, op.N):
            bb = bs[n].mul(bs[n + 1])
            rep.add("B.B = 0 at degree %d" % (n + 1), bb.is_zero())
        for n in range(op.N - 1):
            if n == 0:
                anti = bs[1].mul(ds[0])
                rep.add("dB + Bd = 0 at degree 0", anti.is_zero())
            else:
                anti = ds[n - 1].mul(bs[n]).add(bs[n + 1].mul(ds[n]))
                rep.add("dB + Bd = 0 at degree %d" % n, anti.is_zero())
        b_table = {}
        for n in range(max_degree + 1):
            table = {}
            for i, a in enumerate(reps[n]):
                v = bs[n].apply(a)
                table[i] = proj(n - 1, v) if n >= 1 else Vec.zero(f, 0)
            b_table[n] = table
        # BV relation on cohomology:
        # {a,b} = (-1)^|a| ( B(a u b) - Ba u b - (-1)^|a| a u Bb )
        for (m, n), table in bracket_table.items():
            if m + n > max_degree or m + n < 1:
                continue
            for (i, j), val in table.items():
                a, b = reps[m][i], reps[n][j]
                t0 = bs[m + n].apply(cup(op, m, n, a, b))
                t1 = cup(op, m - 1, n, bs[m].apply(a), b) if m >= 1 else Vec.zero(f, op.dims[m + n - 1])
                t2 = cup(op, m, n - 1, a, bs[n].apply(b)) if n >= 1 else Vec.zero(f, op.dims[m + n - 1])
                rhs = t0.sub(t1).sub(t2.scale(f.sign(m))).scale(f.sign(m))
                rep.add(
                    "BV relation (deg %d,%d) reps (%d,%d)" % (m, n, i, j),
                    val.eq(proj(m + n - 1, rhs)),
                )
    # squaring on even-degree representatives (or any degree in char 2)
    for n in range(max_degree + 1):
        if 2 * n - 1 < 0 or 2 * n - 1 > max_degree:
            continue
        if n % 2 != 0 and f.characteristic != 2:
            continue
        table = {}
        for i, a in enumerate(reps[n]):
            table[i] = proj(2 * n - 1, sq(op, n, a))
        sq_table[n] = table

    return CochainReport(
        max_degree=max_degree,
        betti=betti,
        class_reps=reps,
        cup_table=cup_table,
        bracket_table=bracket_table,
        b_table=b_table,
        sq_table=sq_table,
        checks=rep,
    )


# ---------------------------------------------------------------------------
# cyclic-invariant subcomplex


@dataclass
class LambdaSubcomplex:
    """C_lambda^n = ker(lambda_n - id) with the restricted differential."""

    bases: list  # per degree: list of Vec spanning C_lambda^n
    rest_d: dict  # n -> Mat in subcomplex coordinates
    betti: list
    bracket_table: dict
    class_reps: list  # per degree, vectors in subcomplex coordinates
    checks: Report


def lambda_subcomplex(op: OperadSlice, max_degree: int, seed: int = 11) -> LambdaSubcomplex:
    if op.cyclic is None:
        raise StructureError("lambda subcomplex needs a cyclic structure")
    f = op.field
    rep = Report("lambda subcomplex of %s" % (op.name or "O"))
    ds = differentials(op)
    bases = []
    for n in range(op.N + 1):
        lam = op.cyclic[n].scale(f.sign(n))
        shifted = lam.sub(Mat.identity(f, op.dims[n]))
        _, kernel, _ = rank_kernel_image(shifted)
        bases.append(kernel)
    # mu is lambda-invariant
    lam2 = op.cyclic[2].scale(f.sign(2))
    rep.add("mu is cyclic-invariant", lam2.apply(op.mult).eq(op.mult))
    # closure of the subcomplex under d
    rest_d = {}
    for n in range(op.N):
        mat = Mat.from_cols(f, op.dims[n + 1], bases[n + 1])
        cols = []
        ok = True
        for v in bases[n]:
            w = ds[n].apply(v)
            x = solve(mat, w)
            if x is None:
                ok = False
                break
            cols.append(x)
        rep.add("d preserves cyclic invariance at degree %d" % n, ok)
        if ok:
            rest_d[n] = Mat.from_cols(f, len(bases[n + 1]), cols)
    # bracket closure on basis pairs
    rng = random.Random(seed)
    for m in range(1, min(op.N, max_degree + 1) + 1):
        for n in range(1, min(op.N, max_degree + 1) + 1):
            if m + n - 1 > op.N:
                continue
            mat = Mat.from_cols(f, op.dims[m + n - 1], bases[m + n - 1])
            pairs = [(a, b) for a in bases[m] for b in bases[n]]
            if len(pairs) > 6:
                pairs = [pairs[k] for k in rng.sample(range(len(pairs)), 6)]
            ok = all(solve(mat, bracket(op, m, n, a, b)) is not None for a, b in pairs)
            rep.add("bracket preserves cyclic invariance (deg %d,%d)" % (m, n), ok)
    # cohomology of the restricted complex
    betti = []
    reps = []
    hs = []
    for n in range(max_degree + 1):
        if n not in rest_d or (n >= 1 and n - 1 not in rest_d):
            betti.append(None)
            reps.append([])
            hs.append(None)
            continue
        d_in = Mat.zeros(f, len(bases[n]), 0) if n == 0 else rest_d[n - 1]
        h = subquotient(d_in, rest_d[n])
        hs.append(h)
        betti.append(h.dim)
        reps.append(h.class_reps)
    # bracket structure constants on HC_lambda classes
    btable = {}
    for m in range(1, max_degree + 1):
        for n in range(1, max_degree + 1):
            if m + n - 1 > max_degree or hs[m] is None or hs[n] is None or hs[m + n - 1] is None:
                continue
            mat_m = Mat.from_cols(f, op.dims[m], bases[m])
            mat_n = Mat.from_cols(f, op.dims[n], bases[n])
            mat_t = Mat.from_cols(f, op.dims[m + n - 1], bases[m + n - 1])
            table = {}
            for i, a in enumerate(reps[m]):
                for j, b in enumerate(reps[n]):
                    va = mat_m.apply(a)
                    vb = mat_n.apply(b)
                    w = bracket(op, m, n, va, vb)
                    x = solve(mat_t, w)
                    table[(i, j)] = hs[m + n - 1].project(x) if x is not None else None
            btable[(m, n)] = table
    return LambdaSubcomplex(
        bases=bases, rest_d=rest_d, betti=betti, bracket_table=btable,
        class_reps=reps, checks=rep,
    )
