"""(Co)simplicial and (co)cyclic modules of matrices, with exact identity suites.

A CosimplicialModule stores, per degree n <= N, the space dimension, the
cofaces delta_0..delta_{n+1}: X^n -> X^{n+1} (absent at n = N) and the
codegeneracies sigma_0..sigma_{n-1}: X^n -> X^{n-1}, plus an optional cyclic
operator tau_n.  A CyclicModule is the homological mirror (faces d_i,
degeneracies s_i, operator t_n).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from opcohom.linalg import Field, Mat
from opcohom.report import Report


@dataclass
class CosimplicialModule:
    field: Field
    N: int
    dims: list
    cofaces: dict  # n -> [delta_0 .. delta_{n+1}], for n < N
    codegens: dict  # n -> [sigma_0 .. sigma_{n-1}]
    tau: dict | None = None  # n -> Mat, cyclic operator

    def coface(self, n, i) -> Mat:
        return self.cofaces[n][i]

    def codegen(self, n, i) -> Mat:
        return self.codegens[n][i]

    def differential(self, n) -> Mat:
        """d = sum (-1)^i delta_i : X^n -> X^{n+1}."""
        f = self.field
        out = Mat.zeros(f, self.dims[n + 1], self.dims[n])
        for i, dl in enumerate(self.cofaces[n]):
            out = out.add(dl if i % 2 == 0 else dl.neg())
        return out

    def check_cosimplicial(self, rep: Report | None = None) -> Report:
        rep = rep if rep is not None else Report("cosimplicial identities")
        for n in range(self.N - 1):
            dn = self.cofaces[n]
            dn1 = self.cofaces[n + 1]
            for j in range(n + 3):
                for i in range(j):
                    lhs = dn1[j].mul(dn[i])
                    rhs = dn1[i].mul(dn[j - 1])
                    rep.add(
                        "delta_%d delta_%d = delta_%d delta_%d at degree %d" % (j, i, i, j - 1, n),
                        lhs.eq(rhs),
                        _mat_witness(lhs, rhs),
                    )
        for n in range(2, self.N + 1):
            sn = self.codegens[n]
            sn1 = self.codegens[n - 1]
            for i in range(n):
                for j in range(i, n - 1):
                    lhs = sn1[j].mul(sn[i])
                    rhs = sn1[i].mul(sn[j + 1])
                    rep.add(
                        "sigma_%d sigma_%d = sigma_%d sigma_%d at degree %d" % (j, i, i, j + 1, n),
                        lhs.eq(rhs),
                        _mat_witness(lhs, rhs),
                    )
        for n in range(self.N):
            dn = self.cofaces[n]
            sn1 = self.codegens[n + 1]
            for i in range(n + 2):
                for j in range(n + 1):
                    lhs = sn1[j].mul(dn[i])
                    if i < j:
                        if n < 1:
                            continue
                        rhs = self.cofaces[n - 1][i].mul(self.codegens[n][j - 1])
                        name = "sigma_%d delta_%d = delta_%d sigma_%d at degree %d" % (j, i, i, j - 1, n)
                    elif i in (j, j + 1):
                        rhs = Mat.identity(self.field, self.dims[n])
                        name = "sigma_%d delta_%d = id at degree %d" % (j, i, n)
                    else:
                        if n < 1:
                            continue
                        rhs = self.cofaces[n - 1][i - 1].mul(self.codegens[n][j])
                        name = "sigma_%d delta_%d = delta_%d sigma_%d at degree %d" % (j, i, i - 1, j, n)
                    rep.add(name, lhs.eq(rhs), _mat_witness(lhs, rhs))
        return rep

    def check_cocyclic(self, rep: Report | None = None) -> Report:
        """tau interchange with cofaces/codegeneracies plus tau^(n+1) = id."""
        rep = rep if rep is not None else Report("cocyclic identities")
        if self.tau is None:
            rep.add("cyclic operator present", False, "no tau")
            return rep
        f = self.field
        for n in range(self.N + 1):
            t = self.tau[n]
            p = Mat.identity(f, self.dims[n])
            for _ in range(n + 1):
                p = t.mul(p)
            ok = p.eq(Mat.identity(f, self.dims[n]))
            rep.add("tau^%d = id at degree %d" % (n + 1, n), ok, _mat_witness(p, Mat.identity(f, self.dims[n])))
        for n in range(self.N):
            dn = self.cofaces[n]
            t_up = self.tau[n + 1]
            t_dn = self.tau[n]
            lhs = t_up.mul(dn[0])
            rhs = dn[n + 1]
            rep.add("tau delta_0 = delta_%d at degree %d" % (n + 1, n), lhs.eq(rhs), _mat_witness(lhs, rhs))
            for i in range(1, n + 2):
                lhs = t_up.mul(dn[i])
                rhs = dn[i - 1].mul(t_dn)
                rep.add(
                    "tau delta_%d = delta_%d tau at degree %d" % (i, i - 1, n),
                    lhs.eq(rhs),
                    _mat_witness(lhs, rhs),
                )
        for n in range(1, self.N + 1):
            sn = self.codegens[n]
            t_dn = self.tau[n - 1]
            t_n = self.tau[n]
            lhs = t_dn.mul(sn[0])
            rhs = sn[n - 1].mul(t_n.mul(t_n))
            rep.add("tau sigma_0 = sigma_%d tau^2 at degree %d" % (n - 1, n), lhs.eq(rhs), _mat_witness(lhs, rhs))
            for i in range(1, n):
                lhs = t_dn.mul(sn[i])
                rhs = sn[i - 1].mul(t_n)
                rep.add(
                    "tau sigma_%d = sigma_%d tau at degree %d" % (i, i - 1, n),
                    lhs.eq(rhs),
                    _mat_witness(lhs, rhs),
                )
        return rep


@dataclass
class CyclicModule:
    """Simplicial module with faces/degeneracies and cyclic operator t."""

    field: Field
    N: int
    dims: list
    faces: dict  # n -> [d_0 .. d_n], n >= 1
    degens: dict  # n -> [s_0 .. s_n], for n < N
    t: dict | None = None

    def differential(self, n) -> Mat:
        f = self.field
        out = Mat.zeros(f, self.dims[n - 1], self.dims[n])
        for i, dl in enumerate(self.faces[n]):
            out = out.add(dl if i % 2 == 0 else dl.neg())
        return out

    def check_simplicial(self, rep: Report | None = None) -> Report:
        rep = rep if rep is not None else Report("simplicial identities")
        for n in range(2, self.N + 1):
            dn = self.faces[n]
            dn1 = self.faces[n - 1]
            for j in range(n + 1):
                for i in range(j):
                    lhs = dn1[i].mul(dn[j])
                    rhs = dn1[j - 1].mul(dn[i])
                    rep.add(
                        "d_%d d_%d = d_%d d_%d at degree %d" % (i, j, j - 1, i, n),
                        lhs.eq(rhs),
                        _mat_witness(lhs, rhs),
                    )
        for n in range(self.N - 1):
            sn = self.degens[n]
            sn1 = self.degens[n + 1]
            for i in range(n + 1):
                for j in range(i, n + 1):
                    lhs = sn1[j + 1].mul(sn[i])
                    rhs = sn1[i].mul(sn[j])
                    rep.add(
                        "s_%d s_%d = s_%d s_%d at degree %d" % (j + 1, i, i, j, n),
                        lhs.eq(rhs),
                        _mat_witness(lhs, rhs),
                    )
        for n in range(self.N):
            sn = self.degens[n]
            dn1 = self.faces[n + 1]
            for i in range(n + 2):
                for j in range(n + 1):
                    lhs = dn1[i].mul(sn[j])
                    if i < j:
                        if n < 1:
                            continue
                        rhs = self.degens[n - 1][j - 1].mul(self.faces[n][i])
                        name = "d_%d s_%d = s_%d d_%d at degree %d" % (i, j, j - 1, i, n)
                    elif i in (j, j + 1):
                        rhs = Mat.identity(self.field, self.dims[n])
                        name = "d_%d s_%d = id at degree %d" % (i, j, n)
                    else:
                        if n < 1:
                            continue
                        rhs = self.degens[n - 1][j].mul(self.faces[n][i - 1])
                        name = "d_%d s_%d = s_%d d_%d at degree %d" % (i, j, j, i - 1, n)
                    rep.add(name, lhs.eq(rhs), _mat_witness(lhs, rhs))
        return rep

    def check_cyclic(self, rep: Report | None = None) -> Report:
        rep = rep if rep is not None else Report("cyclic identities")
        if self.t is None:
            rep.add("cyclic operator present", False, "no t")
            return rep
        f = self.field
        for n in range(self.N + 1):
            t = self.t[n]
            p = Mat.identity(f, self.dims[n])
            for _ in range(n + 1):
                p = t.mul(p)
            rep.add(
                "t^%d = id at degree %d" % (n + 1, n),
                p.eq(Mat.identity(f, self.dims[n])),
                _mat_witness(p, Mat.identity(f, self.dims[n])),
            )
        for n in range(1, self.N + 1):
            dn = self.faces[n]
            lhs = dn[0].mul(self.t[n])
            rhs = dn[n]
            rep.add("d_0 t = d_%d at degree %d" % (n, n), lhs.eq(rhs), _mat_witness(lhs, rhs))
            for i in range(1, n + 1):
                lhs = dn[i].mul(self.t[n])
                rhs = self.t[n - 1].mul(dn[i - 1])
                rep.add(
                    "d_%d t = t d_%d at degree %d" % (i, i - 1, n),
                    lhs.eq(rhs),
                    _mat_witness(lhs, rhs),
                )
        for n in range(self.N):
            sn = self.degens[n]
            lhs = sn[0].mul(self.t[n])
            rhs = self.t[n + 1].mul(self.t[n + 1]).mul(sn[n])
            rep.add("s_0 t = t^2 s_%d at degree %d" % (n, n), lhs.eq(rhs), _mat_witness(lhs, rhs))
            for i in range(1, n + 1):
                lhs = sn[i].mul(self.t[n])
                rhs = self.t[n + 1].mul(sn[i - 1])
                rep.add(
                    "s_%d t = t s_%d at degree %d" % (i, i - 1, n),
                    lhs.eq(rhs),
                    _mat_witness(lhs, rhs),
                )
        return rep

    def dualize(self) -> CosimplicialModule:
        """Transpose everything: the dual cochain/cocyclic module."""
        cofaces = {}
        codegens = {}
        for n in range(self.N):
            cofaces[n] = [m.transpose() for m in self.faces[n + 1]]
        for n in range(self.N + 1):
            if n == 0:
                codegens[0] = []
            else:
                codegens[n] = [m.transpose() for m in self.degens[n - 1]]
        tau = None
        if self.t is not None:
            tau = {n: self.t[n].transpose() for n in range(self.N + 1)}
        return CosimplicialModule(
            field=self.field, N=self.N, dims=list(self.dims),
            cofaces=cofaces, codegens=codegens, tau=tau,
        )


def _mat_witness(lhs: Mat, rhs: Mat):
    diff = lhs.first_difference(rhs)
    if diff is None:
        return None
    return "entry (%d, %d): %s vs %s" % (diff[0], diff[1], lhs.entry(*diff), rhs.entry(*diff))
