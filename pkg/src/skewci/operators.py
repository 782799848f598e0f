"""Chain-level cohomology operator complexes and their homology.

For a bounded strongly-perfect complex F with strict e-actions and a target
X (a finitely presented module N, a second complex G, or the Koszul algebra
itself), the operator complex is S (x) X with differential

    d(s (x) x) = s (x) d(x) + sum_i chi(f_i, s) chi_i s (x) (lam_i - lam_i') x

where lam_i / lam_i' are the two e_i-multiplications.  Left S-linearity
makes every slice computation reduce to exact linear algebra over the
cyclotomic field; restriction along k[theta_i = chi_i^t] turns the residue
field case into a finite free complex over a commutative polynomial ring.

Cohomological degree of chi^w (x) x is 2|w| - hdeg(x); the internal index j
used in tables is sum w_i df_i - ideg(x), which for X = Hom(F, k) matches
the (i, j) layout of graded Betti tables.
"""

from __future__ import annotations

from .colorcore import RingSpec
from .koszul import koszul_algebra, monomials_of_degree
from .linalg import Echelon, kernel_basis
from .qgrobner import (
    buchberger,
    hilbert_numerator,
    minimalize_presentation,
    monomial_dimension,
    syzygy_module,
)
from .resolve import KoszulComplex, ModulePresentation
from .scalars import CycScalar

__all__ = [
    "OperatorComplex",
    "ExtTable",
    "ThetaModule",
    "build_operator_complex",
    "homology_bigraded",
    "braided_hh",
    "ext_over_theta",
    "HHReport",
]


class ModuleBasis:
    """Standard-monomial data for a finitely presented R-module N."""

    def __init__(self, module: ModulePresentation):
        self.spec = module.spec
        self.module = module.normalized()
        spec = self.spec
        ring = spec.qring
        cols = [dict(c) for c in self.module.relations]
        for f in spec.relations:
            for g in range(len(self.module.gens)):
                cols.append({(e, g): c for e, c in f.terms.items()})
        self.gb = buchberger(cols, ring)
        self.leads = [m for m, _ in self.gb.leads]
        self._basis_cache = {}

    def gens(self):
        return self.module.gens

    def basis_of_degree(self, d):
        """Standard monomials (exps, comp) of internal degree d."""
        if d in self._basis_cache:
            return self._basis_cache[d]
        out = []
        for comp, (gd, _c) in enumerate(self.module.gens):
            for exps in monomials_of_degree(self.spec.qring, d - gd):
                if not self._reducible(exps, comp):
                    out.append((exps, comp))
        out.sort()
        self._basis_cache[d] = out
        return out

    def _reducible(self, exps, comp):
        for lexps, lcomp in self.leads:
            if lcomp == comp and all(e >= le for e, le in zip(exps, lexps)):
                return True
        return False

    def normal_form(self, vec):
        nf, _ = self.gb.normal_form(vec)
        return nf

    def key_color(self, key):
        exps, comp = key
        base = self.module.gens[comp][1]
        mono = self.spec.qring.color(exps)
        return tuple(a + b for a, b in zip(mono, base))

    def key_ideg(self, key):
        exps, comp = key
        return self.spec.qring.deg(exps) + self.module.gens[comp][0]


# -- X interfaces -------------------------------------------------------------

class _HomIntoModule:
    """X = Hom_Q(F, N): symbols (p, b, nkey) meaning b* tensor nkey."""

    def __init__(self, cx: KoszulComplex, nbasis: ModuleBasis):
        self.cx = cx
        self.nb = nbasis
        self.spec = cx.spec

    def symbols(self, hx, idegx):
        # hx = -p; idegx = ideg(nkey) - ideg(b)
        p = -hx
        if p < 0 or p >= len(self.cx.basis):
            return []
        out = []
        for b, (bd, _bc) in enumerate(self.cx.basis[p]):
            for nkey in self.nb.basis_of_degree(idegx + bd):
                out.append((p, b, nkey))
        return out

    def hdeg(self, sym):
        return -sym[0]

    def ideg(self, sym):
        p, b, nkey = sym
        return self.nb.key_ideg(nkey) - self.cx.basis[p][b][0]

    def _sigma(self, sym):
        p, b, nkey = sym
        bc = self.cx.basis[p][b][1]
        nc = self.nb.key_color(nkey)
        return tuple(a - v for a, v in zip(nc, bc))

    def _compose(self, sym, matrix, source_layer):
        """alpha o (matrix: F_source -> F_p), as a dict of symbols."""
        p, b, nkey = sym
        ring = self.spec.qring
        sigma = self._sigma(sym)
        out = {}
        for (row, col), poly in matrix.items():
            if row != b:
                continue
            for exps, c in poly.items():
                scal = c * ring.chi(sigma, ring.color(exps))
                # value entry * nkey, reduced in N
                moved = {( tuple(a + e for a, e in zip(exps, nkey[0])),
                           nkey[1]): scal * ring.cpair(exps, nkey[0])}
                nf = self.nb.normal_form(moved)
                for k2, c2 in nf.items():
                    key = (source_layer, col, k2)
                    cur = out.get(key)
                    cur = c2 if cur is None else cur + c2
                    if cur:
                        out[key] = cur
                    else:
                        del out[key]
        return out

    def dx(self, sym):
        p, b, nkey = sym
        if p + 1 >= len(self.cx.basis) or self.cx.diff[p + 1] is None:
            return {}
        # d(alpha) = -(-1)^{|alpha|} alpha o dF with |alpha| = -p
        sign = -CycScalar.one(self.spec.m) if p % 2 == 0 \
            else CycScalar.one(self.spec.m)
        out = self._compose(sym, self.cx.diff[p + 1], p + 1)
        return {k: v * sign for k, v in out.items()}

    def lam(self, i, sym):
        p, b, nkey = sym
        if p - 1 < 0:
            return {}
        mat = self.cx.eact[i][p - 1]
        if not mat:
            return {}
        ring = self.spec.qring
        scal = ring.chi(self.spec.cf[i], self._sigma(sym))
        if p % 2 == 1:
            scal = -scal
        out = self._compose(sym, mat, p - 1)
        return {k: v * scal for k, v in out.items()}

    def lamp(self, i, sym):
        return {}

    def xmul(self, l, sym):
        p, b, nkey = sym
        delta = tuple(1 if k == l else 0 for k in range(self.spec.n))
        ring = self.spec.qring
        moved = {(tuple(a + e for a, e in zip(delta, nkey[0])), nkey[1]):
                 ring.cpair(delta, nkey[0])}
        nf = self.nb.normal_form(moved)
        return {(p, b, k2): c2 for k2, c2 in nf.items()}


class _HomIntoComplex:
    """X = Hom_Q(F, G): symbols (pF, bF, pG, bG, gamma)."""

    def __init__(self, cxf: KoszulComplex, cxg: KoszulComplex):
        self.f = cxf
        self.g = cxg
        self.spec = cxf.spec

    def symbols(self, hx, idegx):
        ring = self.spec.qring
        out = []
        for pf in range(len(self.f.basis)):
            pg = hx + pf
            if pg < 0 or pg >= len(self.g.basis):
                continue
            for bf, (fd, _fc) in enumerate(self.f.basis[pf]):
                for bg, (gd, _gc) in enumerate(self.g.basis[pg]):
                    rem = idegx + fd - gd
                    for gamma in monomials_of_degree(ring, rem):
                        out.append((pf, bf, pg, bg, gamma))
        return out

    def hdeg(self, sym):
        return sym[2] - sym[0]

    def ideg(self, sym):
        pf, bf, pg, bg, gamma = sym
        return (self.g.basis[pg][bg][0] + self.spec.qring.deg(gamma)
                - self.f.basis[pf][bf][0])

    def _sigma(self, sym):
        pf, bf, pg, bg, gamma = sym
        fc = self.f.basis[pf][bf][1]
        gc = self.g.basis[pg][bg][1]
        mono = self.spec.qring.color(gamma)
        return tuple(g + m - f for g, m, f in zip(gc, mono, fc))

    def _postcompose(self, sym, matrix, new_pg, map_color):
        """(matrix o alpha): apply a G-side map to the value."""
        pf, bf, pg, bg, gamma = sym
        vec = {(gamma, bg): CycScalar.one(self.spec.m)}
        out = self.g.apply_matrix(matrix, map_color, vec)
        return {(pf, bf, new_pg, nbg, nexps): c
                for (nexps, nbg), c in out.items()}

    def _precompose(self, sym, matrix, new_pf):
        """(alpha o matrix) for matrix: F_new -> F_pf."""
        pf, bf, pg, bg, gamma = sym
        ring = self.spec.qring
        sigma = self._sigma(sym)
        out = {}
        for (row, col), poly in matrix.items():
            if row != bf:
                continue
            for exps, c in poly.items():
                scal = c * ring.chi(sigma, ring.color(exps))
                s, prod = ring.mono_mul(exps, gamma)
                key = (new_pf, col, pg, bg, prod)
                val = scal * s
                cur = out.get(key)
                cur = val if cur is None else cur + val
                if cur:
                    out[key] = cur
                else:
                    del out[key]
        return out

    def dx(self, sym):
        pf, bf, pg, bg, gamma = sym
        spec = self.spec
        out = {}
        if 1 <= pg < len(self.g.diff) and self.g.diff[pg]:
            for k, v in self._postcompose(sym, self.g.diff[pg],
                                          pg - 1, None).items():
                cur = out.get(k)
                cur = v if cur is None else cur + v
                if cur:
                    out[k] = cur
                else:
                    del out[k]
        hx = pg - pf
        if pf + 1 < len(self.f.basis) and self.f.diff[pf + 1]:
            # d(alpha) = dG o alpha - (-1)^{|alpha|} alpha o dF
            sign = -CycScalar.one(spec.m) if hx % 2 == 0 \
                else CycScalar.one(spec.m)
            for k, v in self._precompose(sym, self.f.diff[pf + 1],
                                         pf + 1).items():
                v = v * sign
                cur = out.get(k)
                cur = v if cur is None else cur + v
                if cur:
                    out[k] = cur
                else:
                    del out[k]
        return out

    def lam(self, i, sym):
        pf, bf, pg, bg, gamma = sym
        if pf - 1 < 0:
            return {}
        mat = self.f.eact[i][pf - 1]
        if not mat:
            return {}
        hx = pg - pf
        scal = self.spec.qring.chi(self.spec.cf[i], self._sigma(sym))
        if hx % 2 == 1:
            scal = -scal
        out = self._precompose(sym, mat, pf - 1)
        return {k: v * scal for k, v in out.items()}

    def lamp(self, i, sym):
        pf, bf, pg, bg, gamma = sym
        if pg + 1 >= len(self.g.basis):
            return {}
        mat = self.g.eact[i][pg]
        if not mat:
            return {}
        return self._postcompose(sym, mat, pg + 1, self.spec.cf[i])

    def xmul(self, l, sym):
        pf, bf, pg, bg, gamma = sym
        ring = self.spec.qring
        delta = tuple(1 if k == l else 0 for k in range(self.spec.n))
        s, prod = ring.mono_mul(delta, gamma)
        return {(pf, bf, pg, bg, prod): s}


class _SelfE:
    """X = E with the diagonal E^e-action."""

    def __init__(self, spec: RingSpec):
        self.spec = spec
        self.ctx = koszul_algebra(spec)

    def symbols(self, hx, idegx):
        return [ (exps, smask) for (exps, smask, _h)
                 in self.ctx.basis_slice(hx, idegx) ]

    def hdeg(self, sym):
        return bin(sym[1]).count("1")

    def ideg(self, sym):
        return self.ctx.term_ideg((sym[0], sym[1], ()))

    def _elt(self, sym):
        return {(sym[0], sym[1], ()): CycScalar.one(self.spec.m)}

    @staticmethod
    def _strip(elt):
        return {(e, s): c for (e, s, _h), c in elt.items()}

    def dx(self, sym):
        return self._strip(self.ctx.diff(self._elt(sym)))

    def lam(self, i, sym):
        # (1 (x) e_i) . u = (-1)^{|u|} chi(f_i, u) u e_i
        ctx = self.ctx
        u = self._elt(sym)
        prod = ctx.mul(u, ctx.term(smask=1 << i))
        scal = self.spec.qring.chi(self.spec.cf[i],
                                   ctx.term_color((sym[0], sym[1], ())))
        if self.hdeg(sym) % 2 == 1:
            scal = -scal
        return self._strip({k: v * scal for k, v in prod.items()})

    def lamp(self, i, sym):
        # (e_i (x) 1) . u = e_i u
        ctx = self.ctx
        return self._strip(ctx.mul(ctx.term(smask=1 << i), self._elt(sym)))

    def xmul(self, l, sym):
        ctx = self.ctx
        delta = tuple(1 if k == l else 0 for k in range(self.spec.n))
        prod = ctx.mul(ctx.term(exps=delta), self._elt(sym))
        return self._strip(prod)


class OperatorComplex:
    """S (x) X with the operator differential, sliced by bidegree.

    Symbols are (w, xsym) with w the chi-multiindex; cohomological degree
    is 2|w| - hdeg(xsym) and the internal index is sum w df - ideg(xsym).
    """

    def __init__(self, spec: RingSpec, xiface, description):
        self.spec = spec
        self.x = xiface
        self.description = description

    def slice_symbols(self, i, j):
        """All symbols at cohomological degree i, internal index j."""
        spec = self.spec
        out = []
        for w in _chi_weights(spec, i):
            shift = sum(a * d for a, d in zip(w, spec.df))
            hx = 2 * sum(w) - i
            idegx = shift - j
            for xsym in self.x.symbols(hx, idegx):
                out.append((w, xsym))
        return sorted(out, key=_symkey)

    def differential(self, sym):
        """d(sym) as {symbol: scalar}, landing in (i+1, j)."""
        spec = self.spec
        ring = spec.qring
        w, xsym = sym
        out = {}
        for xk, c in self.x.dx(xsym).items():
            _accum(out, (w, xk), c)
        for i in range(spec.c):
            scal = CycScalar.one(spec.m)
            for jj in range(i + 1, spec.c):
                if w[jj]:
                    scal = scal * ring.chi(spec.cf[jj], spec.cf[i]) ** w[jj]
            w2 = tuple(a + (1 if t == i else 0) for t, a in enumerate(w))
            for xk, c in self.x.lam(i, xsym).items():
                _accum(out, (w2, xk), c * scal)
            for xk, c in self.x.lamp(i, xsym).items():
                _accum(out, (w2, xk), -(c * scal))
        return out

    def chi_action(self, i, sym):
        """Left multiplication by chi_i: (i,j) -> (i+2, j+df_i)."""
        ring = self.spec.qring
        w, xsym = sym
        scal = CycScalar.one(self.spec.m)
        for jj in range(i):
            if w[jj]:
                scal = scal * ring.chi(self.spec.cf[i],
                                       self.spec.cf[jj]) ** w[jj]
        w2 = tuple(a + (1 if t == i else 0) for t, a in enumerate(w))
        return {(w2, xsym): scal}

    def x_action(self, l, sym):
        """Left multiplication by x_l: (i,j) -> (i, j - d_l)."""
        ring = self.spec.qring
        w, xsym = sym
        scal = CycScalar.one(self.spec.m)
        el = tuple(1 if k == l else 0 for k in range(self.spec.n))
        for t in range(self.spec.c):
            if w[t]:
                scal = scal * ring.chi(self.spec.cf[t], el).inverse() ** w[t]
        out = {}
        for xk, c in self.x.xmul(l, xsym).items():
            _accum(out, (w, xk), c * scal)
        return out


def _accum(out, key, val):
    if not val:
        return
    cur = out.get(key)
    cur = val if cur is None else cur + val
    if cur:
        out[key] = cur
    else:
        del out[key]


def _symkey(sym):
    def flat(x):
        if isinstance(x, tuple):
            return tuple(flat(y) for y in x)
        return x
    return flat(sym)


def _chi_weights(spec, i):
    """All w in N^c with 2|w| >= i possible; bounded by 2|w| - hx = i."""
    # hx ranges over a bounded set; enumerate |w| <= (i + hmax)/2 where the
    # x-interface caps hx; generous bound: |w| <= (i + _HX_CAP)//2
    cap = (i + _HX_CAP) // 2
    out = []
    if cap < 0:
        return out
    w = [0] * spec.c

    def walk(t, rem):
        if t == spec.c:
            out.append(tuple(w))
            return
        for e in range(rem + 1):
            w[t] = e
            walk(t + 1, rem - e)
        w[t] = 0

    walk(0, cap)
    return out


_HX_CAP = 12  # homological degrees of X-parts at desk scale stay below this


def build_operator_complex(resolution, target) -> OperatorComplex:
    """The operator complex for Hom(F, target), or S (x) E for "self-E".

    ``resolution`` is a certified KoszulComplex (refused otherwise);
    ``target`` is a ModulePresentation, another KoszulComplex, or "self-E"
    (in which case ``resolution`` may be a RingSpec).
    """
    if target == "self-E":
        spec = resolution if isinstance(resolution, RingSpec) \
            else resolution.spec
        return OperatorComplex(spec, _SelfE(spec), "self-E")
    cx = resolution
    errors = cx.verify_invariants()
    if errors:
        raise ValueError(f"non-strict resolution refused: {errors[:3]}")
    if isinstance(target, ModulePresentation):
        iface = _HomIntoModule(cx, ModuleBasis(target))
        return OperatorComplex(cx.spec, iface, f"Hom(F,{target.name})")
    if isinstance(target, KoszulComplex):
        return OperatorComplex(cx.spec, _HomIntoComplex(cx, target),
                               "Hom(F,G)")
    raise TypeError(f"unsupported target {target!r}")


# -- bigraded homology --------------------------------------------------------

class ExtTable:
    """Exact bigraded dimensions with operator action matrices."""

    def __init__(self, dims, chi_actions, x_actions, window):
        self.dims = dims                  # (i, j) -> dim
        self.chi_actions = chi_actions    # op -> (i, j) -> matrix
        self.x_actions = x_actions
        self.window = window

    def dim(self, i, j):
        return self.dims.get((i, j), 0)

    def ext_dim(self, i):
        return sum(v for (ii, _j), v in self.dims.items() if ii == i)

    def ext_dims(self, imax):
        return [self.ext_dim(i) for i in range(imax + 1)]

    def tensor_k_dim(self, i):
        """dim of Ext^i (x)_R k inside the window."""
        spec_n = len(self.x_actions)
        total = 0
        for (ii, j), d in self.dims.items():
            if ii != i:
                continue
            ech = Echelon()
            rk = 0
            for l in range(spec_n):
                for (src, mat) in self.x_actions[l].items():
                    if src[0] != i or mat is None:
                        continue
                    tgt = mat["target"]
                    if tgt != (i, j):
                        continue
                    for colvec in mat["columns"]:
                        if colvec:
                            piv, _ = ech.add(dict(colvec))
            rk = ech.rank
            total += d - rk
        return total

    def to_json(self):
        out = {
            "window": self.window,
            "dims": [[i, j, v] for (i, j), v in sorted(self.dims.items())
                     if v],
        }
        acts = {}
        for name, table in (self.chi_actions or {}).items():
            acts[name] = [
                [list(src), mat["target"],
                 [[c.to_string() for c in row] for row in mat["dense"]]]
                for src, mat in sorted(table.items())
            ]
        out["actions"] = acts
        return out


def homology_bigraded(opcx: OperatorComplex, imax, jmax, imin=0, jmin=0,
                      want_actions=True) -> ExtTable:
    """Exact dims of H in the (cohomological, internal) window, with the
    chi_i and x_l action matrices on pivot-chosen homology bases."""
    spec = opcx.spec
    one = CycScalar.one(spec.m)

    slices = {}
    for i in range(imin - 1, imax + 2):
        for j in range(jmin, jmax + 1):
            syms = opcx.slice_symbols(i, j)
            slices[(i, j)] = {sym: idx for idx, sym in enumerate(syms)}

    def as_vector(mapping, index):
        out = {}
        for sym, c in mapping.items():
            idx = index.get(sym)
            if idx is None:
                if c:
                    raise AssertionError(
                        f"differential escapes the enumerated slice: {sym}")
                continue
            cur = out.get(idx)
            cur = c if cur is None else cur + c
            if cur:
                out[idx] = cur
            else:
                del out[idx]
        return out

    dmat = {}
    for i in range(imin - 1, imax + 1):
        for j in range(jmin, jmax + 1):
            index_to = slices.get((i + 1, j), {})
            cols = []
            for sym in slices[(i, j)]:
                cols.append(as_vector(opcx.differential(sym), index_to))
            dmat[(i, j)] = cols

    # homology data per slice: a combined echelon (image vectors first with
    # empty traces, then kernel vectors tracked by homology-basis index)
    # makes dims exact and gives canonical H-coordinates for any cycle
    hdata = {}
    dims = {}
    for i in range(imin, imax + 1):
        for j in range(jmin, jmax + 1):
            cols = dmat[(i, j)]
            kers = kernel_basis(cols, one)
            comb = Echelon(track=True)
            for col in dmat.get((i - 1, j), []):
                if col:
                    comb.add(dict(col), {})
            reps = []
            for kv in kers:
                piv, _ = comb.add(dict(kv), {len(reps): one})
                if piv is not None:
                    reps.append(dict(kv))
            dims[(i, j)] = len(reps)
            hdata[(i, j)] = (reps, comb)

    chi_actions = {}
    x_actions = []
    if want_actions:
        for opi in range(spec.c):
            table = {}
            for (i, j), (reps, _comb) in hdata.items():
                tgt = (i + 2, j + spec.df[opi])
                if tgt not in hdata or not reps:
                    continue
                mat = _action_matrix(
                    opcx, lambda s: opcx.chi_action(opi, s), reps,
                    slices[(i, j)], slices.get(tgt, {}), hdata[tgt], one)
                table[(i, j)] = {"target": tgt, **mat}
            chi_actions[f"chi{opi+1}"] = table
        for l in range(spec.n):
            table = {}
            for (i, j), (reps, _comb) in hdata.items():
                tgt = (i, j - spec.degrees[l])
                if tgt not in hdata or not reps:
                    continue
                mat = _action_matrix(
                    opcx, lambda s: opcx.x_action(l, s), reps,
                    slices[(i, j)], slices.get(tgt, {}), hdata[tgt], one)
                table[(i, j)] = {"target": tgt, **mat}
            x_actions.append(table)

    window = {"imin": imin, "imax": imax, "jmin": jmin, "jmax": jmax}
    return ExtTable(dims, chi_actions, x_actions, window)


def _action_matrix(opcx, act, reps, src_index, tgt_index, tgt_data, one):
    """Matrix of an action on homology bases; columns in H-coordinates."""
    tgt_reps, tgt_comb = tgt_data
    src_syms = list(src_index)
    columns = []
    dense = []
    zero = one - one
    for rep in reps:
        total = {}
        for idx, c in rep.items():
            sym = src_syms[idx]
            for tsym, tc in act(sym).items():
                tidx = tgt_index.get(tsym)
                if tidx is None:
                    continue
                cur = total.get(tidx)
                cur = tc * c if cur is None else cur + tc * c
                if cur:
                    total[tidx] = cur
                else:
                    del total[tidx]
        residual, trace = tgt_comb.reduce(total, {})
        if residual:
            raise AssertionError("action image not recognized in target slice")
        coords = {k: -v for k, v in trace.items()}
        columns.append(coords)
        dense.append([coords.get(r, zero) for r in range(len(tgt_reps))])
    ncols = len(dense)
    nrows = len(tgt_reps)
    dense_t = [[dense[c][r] for c in range(ncols)] for r in range(nrows)]
    return {"columns": columns, "dense": dense_t}


# -- braided Hochschild cohomology --------------------------------------------

class HHReport:
    def __init__(self, ok, mismatches, dims, window):
        self.ok = ok
        self.mismatches = mismatches
        self.dims = dims
        self.window = window

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {
            "ok": self.ok,
            "window": self.window,
            "mismatches": [list(x) for x in self.mismatches],
            "dims": [[i, j, v] for (i, j), v in sorted(self.dims.items())
                     if v],
        }


def braided_hh(spec: RingSpec, cmax: int, dmax: int) -> HHReport:
    """Compare H of the self-operator complex against R[chi_1..chi_c].

    The expected bigraded dimension at (i, j) is the number of pairs
    (w, monomial of R) with 2|w| = i and deg = sum w df - j.
    """
    from .colorcore import count_standard_monomials

    opcx = build_operator_complex(spec, "self-E")
    maxdf = max(spec.df) if spec.c else 0
    jmax = (cmax // 2 + spec.c) * maxdf
    jmin = -dmax
    imin = -spec.c
    table = homology_bigraded(opcx, cmax, jmax, imin=imin, jmin=jmin,
                              want_actions=False)
    rcut = jmax + dmax
    rdims = count_standard_monomials(spec.n, spec.degrees, spec.rel_exps,
                                     rcut)
    mismatches = []
    for i in range(imin, cmax + 1):
        for j in range(jmin, jmax + 1):
            got = table.dim(i, j)
            expected = 0
            if i >= 0 and i % 2 == 0:
                for w in _chi_weights(spec, i):
                    if 2 * sum(w) != i:
                        continue
                    d = sum(a * b for a, b in zip(w, spec.df)) - j
                    if 0 <= d <= rcut:
                        expected += rdims[d]
            if got != expected:
                mismatches.append((i, j, got, expected))
    return HHReport(not mismatches, mismatches, table.dims,
                    {"cmax": cmax, "dmax": dmax})


# -- restriction to the commutative operator ring ----------------------------

class ThetaModule:
    """A finitely presented graded module over k[theta_1..theta_c].

    Generators carry cohomological degrees; theta_i has degree 2t.  The
    relation columns are vectors over a commutative QRing.
    """

    def __init__(self, spec, t, gen_degs, columns):
        self.spec = spec
        self.t = t
        self.gen_degs = list(gen_degs)
        self.columns = [dict(c) for c in columns]
        self.ring = _theta_ring(spec, t)

    def annihilator(self):
        from .qgrobner import annihilator_ideal

        return annihilator_ideal(self.columns, len(self.gen_degs), self.ring)

    def groebner_leads(self):
        if not self.columns:
            return []
        gb = buchberger(self.columns, self.ring)
        return [m for m, _ in gb.leads]

    def dimension(self):
        """Krull dimension of the module (max over components of LT dims)."""
        if not self.gen_degs:
            return -1
        leads = self.groebner_leads()
        best = -1
        for comp in range(len(self.gen_degs)):
            exps = [e for (e, c) in leads if c == comp]
            best = max(best, monomial_dimension(exps, self.spec.c))
        return best

    def hilbert_numerator(self):
        """Numerator over (1 - u^{2t})^c of the cohomological Hilbert series."""
        leads = self.groebner_leads()
        weights = (2 * self.t,) * self.spec.c
        out = {}
        for comp, d in enumerate(self.gen_degs):
            exps = [e for (e, c) in leads if c == comp]
            num = hilbert_numerator(exps, weights)
            for deg, v in num.items():
                out[deg + d] = out.get(deg + d, 0) + v
        return {k: v for k, v in out.items() if v}


def _theta_ring(spec, t):
    from .colorcore import QRing

    c = spec.c
    names = tuple(f"th{i+1}" for i in range(c))
    return QRing(spec.m, names, (2 * t,) * c,
                 [[0] * c for _ in range(c)])


def ext_over_theta(resolution: KoszulComplex, t: int,
                   minimalize=True) -> ThetaModule:
    """Presentation of H(E_{F,k}) over k[theta_i = chi_i^t].

    The operator complex for the residue field is a finite free module over
    the chi-ring; restricting along theta_i = chi_i^t (free of rank t^c)
    and taking homology by commutative syzygies yields the presentation.
    """
    spec = resolution.spec
    ring = spec.qring
    one = CycScalar.one(spec.m)
    tring = _theta_ring(spec, t)

    # scalar matrices over the chi-ring: D = T0 + sum chi_i Ti
    nlayers = len(resolution.basis)
    labels = []
    for p in range(nlayers):
        for b in range(len(resolution.basis[p])):
            labels.append((p, b))
    lindex = {lab: i for i, lab in enumerate(labels)}

    def const_entries(matrix):
        out = {}
        if not matrix:
            return out
        zero = ring.zero_exp()
        for (row, col), poly in matrix.items():
            c = poly.get(zero)
            if c:
                out[(row, col)] = c
        return out

    t0 = {}
    ti = [dict() for _ in range(spec.c)]
    for p in range(nlayers):
        # alpha_b for b in layer p; d alpha lands on layer p+1 duals
        if p + 1 < nlayers:
            ents = const_entries(resolution.diff[p + 1])
            sign = -one if p % 2 == 0 else one
            for (row, col), c in ents.items():
                # alpha_{(p,row)} o dF gives alpha_{(p+1,col)}
                t0[(lindex[(p + 1, col)], lindex[(p, row)])] = c * sign
        if p - 1 >= 0:
            for i in range(spec.c):
                ents = const_entries(resolution.eact[i][p - 1])
                for (row, col), c in ents.items():
                    src = lindex[(p, row)]
                    colr = resolution.basis[p][row][1]
                    scal = ring.chi(spec.cf[i], colr).inverse() * c
                    if p % 2 == 1:
                        scal = -scal
                    key = (lindex[(p - 1, col)], src)
                    cur = ti[i].get(key)
                    ti[i][key] = scal if cur is None else cur + scal

    # theta expansion on basis (label, w), 0 <= w_i < t
    weights = []
    w = [0] * spec.c

    def walk(idx):
        if idx == spec.c:
            weights.append(tuple(w))
            return
        for e in range(t):
            w[idx] = e
            walk(idx + 1)
        w[idx] = 0

    walk(0)
    windex = {wv: i for i, wv in enumerate(weights)}
    ngen = len(labels) * len(weights)

    def gen_id(lab_i, wv):
        return lab_i * len(weights) + windex[wv]

    gen_degs = [0] * ngen
    gen_colors = [None] * ngen
    for li, (p, b) in enumerate(labels):
        bcol = resolution.basis[p][b][1]
        for wv in weights:
            gid = gen_id(li, wv)
            gen_degs[gid] = p + 2 * sum(wv)
            col = [-x for x in bcol]
            for i in range(spec.c):
                for k2, v in enumerate(spec.cf[i]):
                    col[k2] -= wv[i] * v
            gen_colors[gid] = tuple(col)

    zero_t = tring.zero_exp()
    columns = [dict() for _ in range(ngen)]
    for li in range(len(labels)):
        for wv in weights:
            gid = gen_id(li, wv)
            col = columns[gid]
            # T0 part: same w
            for (dst, src), c in t0.items():
                if src != li:
                    continue
                key = ((zero_t), gen_id(dst, wv))
                _accum(col, key, c)
            for i in range(spec.c):
                if not ti[i]:
                    continue
                # chi^w chi_i = u chi^{w + delta_i}
                u = one
                for jj in range(i + 1, spec.c):
                    if wv[jj]:
                        u = u * ring.chi(spec.cf[jj], spec.cf[i]) ** wv[jj]
                w2 = list(wv)
                w2[i] += 1
                texps = list(zero_t)
                if w2[i] == t:
                    # chi^{..t..} = s theta_i chi^{w'}
                    for jj in range(i):
                        if wv[jj]:
                            u = u * ring.chi(spec.cf[jj],
                                             spec.cf[i]) ** (t * wv[jj])
                    w2[i] = 0
                    texps[i] = 1
                w2 = tuple(w2)
                texps = tuple(texps)
                for (dst, src), c in ti[i].items():
                    if src != li:
                        continue
                    key = (texps, gen_id(dst, w2))
                    _accum(col, key, c * u)

    # homology presentation per color class (theta shifts color by -t cf_i)
    classes = {}
    for gid in range(ngen):
        cls = _color_class(gen_colors[gid], spec, t)
        classes.setdefault(cls, []).append(gid)

    out_degs = []
    out_cols = []
    for cls, members in sorted(classes.items()):
        local = {gid: i for i, gid in enumerate(members)}
        loc_cols = []
        for gid in members:
            vec = {}
            for (exps, dst), c in columns[gid].items():
                vec[(exps, local[dst])] = c
            loc_cols.append(vec)
        degs = [gen_degs[g] for g in members]
        h_degs, h_cols = _homology_presentation(loc_cols, degs, tring)
        base = len(out_degs)
        out_degs.extend(h_degs)
        for colv in h_cols:
            out_cols.append({(e, base + cc): v
                             for (e, cc), v in colv.items()})

    if minimalize:
        kept, cols2, _ = minimalize_presentation(
            len(out_degs), out_cols, tring)
        remap = {old: new for new, old in enumerate(kept)}
        out_degs = [out_degs[k] for k in kept]
        out_cols = [{(e, remap[c]): v for (e, c), v in col.items()}
                    for col in cols2]

    return ThetaModule(spec, t, out_degs, out_cols)


def _homology_presentation(columns, gen_degs, tring):
    """ker(D)/im(D) for the square matrix given by columns over tring."""
    kergens = syzygy_module(columns, tring)
    if not kergens:
        return [], []
    kergens = sorted(kergens, key=lambda v: sorted(v.items(), key=str))
    gb = buchberger(kergens, tring, want_lifts=True, want_syzygies=True)
    rels = []
    for col in columns:
        if not col:
            continue
        lift = gb.lift_to_inputs(col)
        if lift is None:
            raise AssertionError("image vector outside the kernel module")
        rels.append(lift)
    rels += [dict(s) for s in gb.syzygies]
    h_degs = []
    for kg in kergens:
        degs = {tring.deg(e) + gen_degs[c] for (e, c) in kg}
        if len(degs) != 1:
            raise AssertionError("inhomogeneous kernel generator")
        h_degs.append(degs.pop())
    return h_degs, rels


def _color_class(color, spec, t):
    """Canonical representative of a color mod the lattice <t cf_i>.

    Relation colors of a validated ring have pairwise disjoint supports,
    so reduction is coordinatewise; otherwise fall back to one class.
    """
    supports = [tuple(k for k, v in enumerate(cf) if v) for cf in spec.cf]
    seen = set()
    for s in supports:
        for k in s:
            if k in seen:
                return ("single",)
            seen.add(k)
    out = list(color)
    for i, cf in enumerate(spec.cf):
        sup = supports[i]
        if len(sup) != 1:
            return ("single",)
        k = sup[0]
        modulus = t * cf[k]
        out[k] = out[k] % modulus
    return tuple(out)
