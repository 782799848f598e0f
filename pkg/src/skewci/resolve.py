"""Strict DG module resolutions over the skew Koszul algebra.

Three layers:

* ``ModulePresentation``: a graded color module over R given by generators
  and monomial-per-component relation columns.
* ``semifree_resolution``: the E-semifree resolution built degreewise by
  killing homology classes; cycles come from exact syzygy computations over
  Q, so no truncation heuristics enter the construction.
* ``finite_koszul_resolution``: the bounded strongly-perfect model obtained
  by replacing the top with a free cokernel, certified exactly (freeness,
  d^2 = 0, the homotopy identities for the e-actions, and exactness).

The independent Betti oracle ``minimal_R_resolution`` works degreewise by
plain linear algebra over the coefficient field using R normal forms and
never touches the Groebner path above.
"""

from __future__ import annotations

import json

from .colorcore import Poly, RingSpec, parse_poly, poly_to_string
from .koszul import koszul_algebra
from .linalg import Echelon
from .qgrobner import (
    buchberger,
    minimalize_presentation,
    poly_mul_vector,
    syzygy_module,
    vector_add,
)
from .scalars import CycScalar

__all__ = [
    "ModulePresentation",
    "SemifreeResolution",
    "KoszulComplex",
    "semifree_resolution",
    "finite_koszul_resolution",
    "minimal_R_resolution",
    "BettiTable",
]


class ModulePresentation:
    """A finitely presented graded color R-module.

    ``gens`` is a list of (internal degree, color vector); ``relations`` a
    list of columns {(exps, gen index): scalar}, each G-homogeneous.
    """

    def __init__(self, spec: RingSpec, gens, relations, name="M"):
        self.spec = spec
        self.gens = [(int(d), tuple(c)) for d, c in gens]
        self.relations = [dict(col) for col in relations]
        self.name = name
        self._check_homogeneous()

    def _check_homogeneous(self):
        ring = self.spec.qring
        for col in self.relations:
            data = set()
            for (exps, comp), _ in col.items():
                d, c = self.gens[comp]
                color = tuple(a + b for a, b in
                              zip(ring.color(exps), c))
                data.add((ring.deg(exps) + d, color))
            if len(data) > 1:
                raise ValueError(f"inhomogeneous relation column in {self.name}")

    # -- constructors ---------------------------------------------------

    @staticmethod
    def free(spec, name="R"):
        return ModulePresentation(spec, [(0, (0,) * spec.n)], [], name)

    @staticmethod
    def residue_field(spec):
        one = CycScalar.one(spec.m)
        gens = [(0, (0,) * spec.n)]
        cols = []
        for i in range(spec.n):
            exps = tuple(1 if k == i else 0 for k in range(spec.n))
            cols.append({(exps, 0): one})
        return ModulePresentation(spec, gens, cols, "k")

    @staticmethod
    def cyclic(spec, polys, name=None):
        """R/(ideal generated by the given G-homogeneous elements)."""
        gens = [(0, (0,) * spec.n)]
        cols = []
        for p in polys:
            if isinstance(p, str):
                p = parse_poly(spec.qring, p)
            cols.append({(exps, 0): c for exps, c in p.terms.items()})
        label = name or ("R/(" + ",".join(str(p) for p in polys) + ")")
        return ModulePresentation(spec, gens, cols, label)

    @staticmethod
    def from_json(spec, doc):
        if isinstance(doc, str):
            if doc == "k":
                return ModulePresentation.residue_field(spec)
            if doc == "R":
                return ModulePresentation.free(spec)
            raise ValueError(f"unknown module shorthand {doc!r}")
        if "quotient" in doc:
            return ModulePresentation.cyclic(spec, doc["quotient"],
                                             doc.get("name"))
        gens = [(g.get("degree", 0), tuple(g.get("color", (0,) * spec.n)))
                for g in doc["gens"]]
        cols = []
        for col in doc["relations"]:
            out = {}
            for comp, text in enumerate(col):
                p = parse_poly(spec.qring, text)
                for exps, c in p.terms.items():
                    out[(exps, comp)] = c
            cols.append(out)
        return ModulePresentation(spec, gens, cols, doc.get("name", "M"))

    def to_json(self):
        ring = self.spec.qring
        cols = []
        for col in self.relations:
            entries = []
            for comp in range(len(self.gens)):
                terms = {exps: c for (exps, cc), c in col.items()
                         if cc == comp}
                entries.append(poly_to_string(Poly(ring, terms)))
            cols.append(entries)
        return {
            "name": self.name,
            "gens": [{"degree": d, "color": list(c)} for d, c in self.gens],
            "relations": cols,
        }

    def is_residue_field(self):
        if len(self.gens) != 1 or self.gens[0][0] != 0:
            return False
        want = set()
        for i in range(self.spec.n):
            want.add(tuple(1 if k == i else 0 for k in range(self.spec.n)))
        got = set()
        for col in self.relations:
            if len(col) != 1:
                return False
            (exps, _), _ = next(iter(col.items()))
            got.add(exps)
        return got == want

    def normalized(self):
        """Eliminate constant entries so the presentation is minimal."""
        kept, cols, _ = minimalize_presentation(
            len(self.gens), self.relations, self.spec.qring)
        if len(kept) == len(self.gens) and len(cols) == len(self.relations):
            return self
        remap = {old: new for new, old in enumerate(kept)}
        gens = [self.gens[k] for k in kept]
        cols = [{(e, remap[c]): v for (e, c), v in col.items()}
                for col in cols]
        return ModulePresentation(self.spec, gens, cols, self.name)

    def cache_key_data(self):
        return {"ring": self.spec.to_json(), "module": self.to_json()}

    def __repr__(self):
        return (f"ModulePresentation({self.name}: {len(self.gens)} gens, "
                f"{len(self.relations)} relations)")


# ---------------------------------------------------------------------------
# E-semifree resolutions
# ---------------------------------------------------------------------------

class SemifreeResolution:
    """F = (+) E.g over the generators, with d(g) recorded per generator.

    F-elements are dicts {(exps, odd bitmask, gen index): scalar}.
    """

    def __init__(self, spec, module: ModulePresentation):
        self.spec = spec
        self.module = module
        self.ctx = koszul_algebra(spec)
        self.gens = []    # (hdeg, ideg, color)
        self.dgen = []    # F-element, one per generator

    # -- element operations ----------------------------------------------

    def emul(self, eelt, felt):
        """Multiply an E-element into an F-element from the left."""
        ctx = self.ctx
        out = {}
        for (beta, tmask, _h), c1 in eelt.items():
            left = {(beta, tmask, ()): c1}
            for (alpha, smask, g), c2 in felt.items():
                prod = ctx.mul(left, {(alpha, smask, ()): c2})
                for (gamma, umask, _hh), c in prod.items():
                    key = (gamma, umask, g)
                    cur = out.get(key)
                    cur = c if cur is None else cur + c
                    if cur:
                        out[key] = cur
                    else:
                        del out[key]
        return out

    def fdiff(self, felt):
        """Differential of an F-element (Leibniz over E plus d(gen))."""
        ctx = self.ctx
        out = {}
        for (alpha, smask, g), coeff in felt.items():
            epart = ctx.diff({(alpha, smask, ()): coeff})
            for (gamma, umask, _h), c in epart.items():
                key = (gamma, umask, g)
                cur = out.get(key)
                cur = c if cur is None else cur + c
                if cur:
                    out[key] = cur
                else:
                    del out[key]
            dg = self.dgen[g]
            if dg:
                bits = bin(smask).count("1")
                sign = coeff if bits % 2 == 0 else -coeff
                piece = self.emul({(alpha, smask, ()): sign}, dg)
                for key, c in piece.items():
                    cur = out.get(key)
                    cur = c if cur is None else cur + c
                    if cur:
                        out[key] = cur
                    else:
                        del out[key]
        return out

    def term_ideg(self, key):
        alpha, smask, g = key
        total = self.spec.qring.deg(alpha) + self.gens[g][1]
        for i in range(self.spec.c):
            if smask >> i & 1:
                total += self.spec.df[i]
        return total

    def term_color(self, key):
        alpha, smask, g = key
        col = list(self.spec.qring.color(alpha))
        for k, v in enumerate(self.gens[g][2]):
            col[k] += v
        for i in range(self.spec.c):
            if smask >> i & 1:
                for k, v in enumerate(self.spec.cf[i]):
                    col[k] += v
        return tuple(col)

    # -- Q-basis bookkeeping ----------------------------------------------

    def basis(self, hdeg):
        """Q-basis labels (smask, gen) of F in homological degree hdeg."""
        out = []
        for g, (h, _d, _c) in enumerate(self.gens):
            need = hdeg - h
            if need < 0 or need > self.spec.c:
                continue
            for smask in range(1 << self.spec.c):
                if bin(smask).count("1") == need:
                    out.append((smask, g))
        return sorted(out, key=lambda t: (t[1], t[0]))

    def label_data(self, smask, g):
        hdeg = self.gens[g][0] + bin(smask).count("1")
        key = (self.spec.qring.zero_exp(), smask, g)
        return hdeg, self.term_ideg(key), self.term_color(key)

    def to_qvec(self, felt, index):
        """Rewrite an F-element over components from the index map."""
        out = {}
        for (alpha, smask, g), c in felt.items():
            comp = index[(smask, g)]
            out[(alpha, comp)] = c
        return out

    def from_qvec(self, qvec, basis_list):
        out = {}
        for (alpha, comp), c in qvec.items():
            smask, g = basis_list[comp]
            out[(alpha, smask, g)] = c
        return out


def _vec_ideg_color(res: SemifreeResolution, qvec, basis_list):
    data = set()
    for (alpha, comp), _ in qvec.items():
        smask, g = basis_list[comp]
        key = (alpha, smask, g)
        data.add((res.term_ideg(key), res.term_color(key)))
    if len(data) != 1:
        raise ValueError("inhomogeneous cycle encountered")
    return data.pop()


def semifree_resolution(module: ModulePresentation, hmax: int,
                        spec=None) -> SemifreeResolution:
    """E-semifree resolution of the module, built through degree hmax.

    At each homological stage the kernel is computed exactly (syzygies over
    Q) and a minimal generating set of the homology is adjoined in the next
    degree, cycle representatives sorted by internal degree then position.
    """
    spec = spec or module.spec
    module = module.normalized()
    res = SemifreeResolution(spec, module)
    ring = spec.qring
    one = CycScalar.one(spec.m)
    for d, c in module.gens:
        res.gens.append((0, d, c))
        res.dgen.append({})

    for p in range(hmax):
        basis_p = res.basis(p)
        index_p = {lab: i for i, lab in enumerate(basis_p)}
        basis_p1 = res.basis(p + 1)
        bcols = []
        for smask, g in basis_p1:
            img = res.fdiff({(ring.zero_exp(), smask, g): one})
            bcols.append(res.to_qvec(img, index_p))
        if p == 0:
            zcols = [dict(col) for col in module.relations]
            zcols += [dict(col) for col in bcols]
        else:
            basis_pm1 = res.basis(p - 1)
            index_pm1 = {lab: i for i, lab in enumerate(basis_pm1)}
            dcols = []
            for smask, g in basis_p:
                img = res.fdiff({(ring.zero_exp(), smask, g): one})
                dcols.append(res.to_qvec(img, index_pm1))
            zcols = syzygy_module(dcols, ring)
        if not zcols:
            continue
        zcols = sorted(
            zcols,
            key=lambda v: (_vec_ideg_color(res, v, basis_p)[0],
                           sorted(v.keys())))
        gb = buchberger(zcols, ring, want_lifts=True, want_syzygies=True)
        rel_cols = []
        for b in bcols:
            lift = gb.lift_to_inputs(b)
            if lift is None:
                raise AssertionError("boundary outside the cycle module")
            rel_cols.append(lift)
        rel_cols += [dict(s) for s in gb.syzygies]
        kept, _cols, _proj = minimalize_presentation(
            len(zcols), rel_cols, ring)
        for k in kept:
            ideg, color = _vec_ideg_color(res, zcols[k], basis_p)
            res.gens.append((p + 1, ideg, color))
            res.dgen.append(res.from_qvec(zcols[k], basis_p))
    return res


# ---------------------------------------------------------------------------
# the truncated strongly perfect complex
# ---------------------------------------------------------------------------

class KoszulComplex:
    """A bounded complex of finite free Q-modules with a strict E-action.

    ``basis[h]`` lists (internal degree, color) labels; ``diff[h]`` maps
    F_h -> F_{h-1} and ``eact[i][h]`` maps F_h -> F_{h+1}, both as
    {(row, col): poly terms dict}.
    """

    def __init__(self, spec, basis, diff, eact, module=None):
        self.spec = spec
        self.basis = basis
        self.diff = diff
        self.eact = eact
        self.module = module

    @property
    def length(self):
        return len(self.basis) - 1

    def ranks(self):
        return [len(b) for b in self.basis]

    # -- applying matrices with color bookkeeping -------------------------

    def apply_matrix(self, matrix, map_color, vec, ncols_basis=None):
        """Apply a matrix of a color-homogeneous map to a Q-vector.

        vec: {(exps, col): scalar}; a map of color sigma satisfies
        phi(x^a b) = chi(sigma, color(x^a)) x^a phi(b).
        """
        ring = self.spec.qring
        out = {}
        for (alpha, col), coeff in vec.items():
            tw = coeff
            if map_color is not None and any(alpha):
                tw = tw * ring.chi(map_color, ring.color(alpha))
            for (row, ccol), poly in matrix.items():
                if ccol != col:
                    continue
                for exps, c in poly.items():
                    s, prod = ring.mono_mul(alpha, exps)
                    key = (prod, row)
                    val = tw * c * s
                    cur = out.get(key)
                    cur = val if cur is None else cur + val
                    if cur:
                        out[key] = cur
                    else:
                        del out[key]
        return out

    def fmul_vec(self, poly: dict, vec):
        """Left multiplication by an element of Q (plain, no twist)."""
        return poly_mul_vector(self.spec.qring, poly, vec)

    def unit_vec(self, h, col):
        return {(self.spec.qring.zero_exp(), col): CycScalar.one(self.spec.m)}

    # -- invariants --------------------------------------------------------

    def verify_invariants(self):
        """d^2 = 0, d e_i + e_i d = f_i, e_i^2 = 0, and e-commutation."""
        spec = self.spec
        errors = []
        for h in range(len(self.basis)):
            for col in range(len(self.basis[h])):
                v = self.unit_vec(h, col)
                dv = self._d(h, v)
                if self._d(h - 1, dv):
                    errors.append(("d2", h, col))
                for i in range(spec.c):
                    eiv = self._e(i, h, v)
                    lhs = self._d(h + 1, eiv)
                    vector_add(lhs, self._e(i, h - 1, dv))
                    f_terms = {e: c for e, c in
                               spec.relations[i].terms.items()}
                    rhs = self.fmul_vec(f_terms, v)
                    vector_add(lhs, rhs, scale=-CycScalar.one(spec.m))
                    if lhs:
                        errors.append(("homotopy", i, h, col))
                    if self._e(i, h + 1, eiv):
                        errors.append(("esquare", i, h, col))
                    for j in range(i + 1, spec.c):
                        # e_i e_j = -chi(f_i, f_j) e_j e_i as operators
                        ejv = self._e(j, h, v)
                        lhs = self._e(i, h + 1, ejv)
                        rhs = self._e(j, h + 1, self._e(i, h, v))
                        vector_add(lhs, rhs, scale=spec.chi_ff(i, j))
                        if lhs:
                            errors.append(("ecomm", i, j, h, col))
        return errors

    def _d(self, h, vec):
        if not vec or h < 1 or h >= len(self.diff) or self.diff[h] is None:
            return {}
        return self.apply_matrix(self.diff[h], None, vec)

    def _e(self, i, h, vec):
        if not vec or h < 0 or h + 1 >= len(self.basis):
            return {}
        mat = self.eact[i][h]
        if mat is None:
            return {}
        return self.apply_matrix(mat, self.spec.cf[i], vec)

    def verify_exactness(self):
        """Certify H_0 = M and H_h = 0 for h >= 1 via Groebner membership."""
        spec = self.spec
        ring = spec.qring
        errors = []
        top = self.length
        cols_by_h = {}
        for h in range(1, top + 1):
            cols_by_h[h] = [
                self.apply_matrix(self.diff[h], None, self.unit_vec(h, c))
                for c in range(len(self.basis[h]))
            ]
        # kernel of the top map must vanish
        if top >= 1 and syzygy_module(cols_by_h[top], ring):
            errors.append(("top_kernel_nonzero", top))
        # middle exactness: cycles at h lie in the image from h+1
        for h in range(1, top):
            cycles = syzygy_module(cols_by_h[h], ring)
            gb_im = buchberger(cols_by_h[h + 1], ring)
            for z in cycles:
                if not gb_im.contains(z):
                    errors.append(("homology", h))
                    break
        # H_0: image of d_1 equals relations + f * generators
        mod = self.module
        if mod is not None and top >= 1:
            k0 = [dict(col) for col in mod.relations]
            for f in spec.relations:
                for g in range(len(self.basis[0])):
                    k0.append({(exps, g): c for exps, c in f.terms.items()})
            gb_k0 = buchberger(k0, ring)
            gb_im = buchberger(cols_by_h[1], ring)
            for col in cols_by_h[1]:
                if not gb_k0.contains(col):
                    errors.append(("image_not_in_kernel", 0))
                    break
            for col in k0:
                if col and not gb_im.contains(col):
                    errors.append(("kernel_not_in_image", 0))
                    break
        return errors

    # -- serialization -------------------------------------------------------

    def to_json(self):
        ring = self.spec.qring

        def poly_str(terms):
            return poly_to_string(Poly(ring, terms))

        def mat_json(matrix):
            return [[r, c, poly_str(p)] for (r, c), p in
                    sorted(matrix.items())]

        return {
            "ring": self.spec.to_json(),
            "module": self.module.to_json() if self.module else None,
            "basis": [[[d, list(c)] for d, c in layer]
                      for layer in self.basis],
            "diff": [mat_json(m) if m else [] for m in self.diff],
            "eact": [[mat_json(m) if m else [] for m in family]
                     for family in self.eact],
        }

    @staticmethod
    def from_json(doc):
        spec = RingSpec.from_json(doc["ring"])
        ring = spec.qring
        module = None
        if doc.get("module"):
            module = ModulePresentation.from_json(spec, doc["module"])
        basis = [[(d, tuple(c)) for d, c in layer] for layer in doc["basis"]]

        def mat_load(entries):
            out = {}
            for r, c, text in entries:
                p = parse_poly(ring, text)
                out[(r, c)] = dict(p.terms)
            return out

        diff = [mat_load(m) if m else {} for m in doc["diff"]]
        diff[0] = None
        eact = [[mat_load(m) if m else {} for m in family]
                for family in doc["eact"]]
        return KoszulComplex(spec, basis, diff, eact, module)

    def canonical_json(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


class TruncationError(RuntimeError):
    """Raised when no free cokernel is reached inside the allowed range."""


def finite_koszul_resolution(module: ModulePresentation, hmax=None,
                             verify=True) -> KoszulComplex:
    """Bounded complex of finite free Q-modules, strict E-action, = M.

    Builds the semifree resolution far enough, truncates at the first
    homological degree where the cokernel of the incoming differential is
    Q-free (certified by presentation minimalization), and re-verifies all
    structure identities and exactness on the finite object.
    """
    spec = module.spec
    module = module.normalized()
    if hmax is None:
        hmax = spec.n + 2
    res = semifree_resolution(module, hmax)
    ring = spec.qring
    one = CycScalar.one(spec.m)

    for cut in range(1, hmax):
        basis_cut = res.basis(cut)
        index_cut = {lab: i for i, lab in enumerate(basis_cut)}
        above = res.basis(cut + 1)
        bcols = []
        for smask, g in above:
            img = res.fdiff({(ring.zero_exp(), smask, g): one})
            bcols.append(res.to_qvec(img, index_cut))
        kept, leftover, proj = minimalize_presentation(
            len(basis_cut), bcols, ring)
        if any(leftover):
            continue
        complex_ = _assemble_truncation(res, cut, kept, proj)
        if verify:
            errors = complex_.verify_invariants()
            errors += complex_.verify_exactness()
            if errors:
                raise AssertionError(
                    f"truncation at {cut} failed certification: {errors}")
        return complex_
    raise TruncationError(
        f"no free cokernel reached up to homological degree {hmax}; "
        "increase hmax")


def _assemble_truncation(res: SemifreeResolution, cut, kept, proj):
    spec = res.spec
    ring = spec.qring
    one = CycScalar.one(spec.m)
    layers = []
    labels = []
    for h in range(cut):
        bas = res.basis(h)
        labels.append(bas)
        layers.append([(res.label_data(s, g)[1], res.label_data(s, g)[2])
                       for s, g in bas])
    top_basis = res.basis(cut)
    top_labels = [top_basis[k] for k in kept]
    labels.append(top_labels)
    layers.append([(res.label_data(s, g)[1], res.label_data(s, g)[2])
                   for s, g in top_labels])

    index = [{lab: i for i, lab in enumerate(layer)} for layer in labels]
    remap_top = {orig: new for new, orig in enumerate(kept)}

    def project_top(qvec):
        """Push a vector over the full F_cut basis into the cokernel."""
        out = {}
        for (alpha, comp), c in qvec.items():
            expanded = poly_mul_vector(ring, {alpha: c}, proj[comp])
            vector_add(out, expanded)
        return {(e, remap_top[comp]): v for (e, comp), v in out.items()}

    diff = [None]
    for h in range(1, cut + 1):
        mat = {}
        source = labels[h]
        target_index = index[h - 1]
        for cidx, (smask, g) in enumerate(source):
            img = res.fdiff({(ring.zero_exp(), smask, g): one})
            for (alpha, tmask, tg), c in img.items():
                row = target_index[(tmask, tg)]
                cell = mat.setdefault((row, cidx), {})
                cur = cell.get(alpha)
                cur = c if cur is None else cur + c
                if cur:
                    cell[alpha] = cur
                else:
                    del cell[alpha]
        diff.append({k: v for k, v in mat.items() if v})

    eact = []
    for i in range(spec.c):
        family = []
        for h in range(cut + 1):
            if h + 1 > cut:
                family.append(None)
                continue
            mat = {}
            source = labels[h]
            for cidx, (smask, g) in enumerate(source):
                img = res.emul(res.ctx.term(smask=1 << i),
                               {(ring.zero_exp(), smask, g): one})
                qvec = {}
                for (alpha, tmask, tg), c in img.items():
                    qvec[(alpha, (tmask, tg))] = c
                if h + 1 == cut:
                    raw = {(alpha, _full_index(res, cut, lab)): c
                           for (alpha, lab), c in qvec.items()}
                    pushed = project_top(raw)
                    for (alpha, row), c in pushed.items():
                        cell = mat.setdefault((row, cidx), {})
                        cur = cell.get(alpha)
                        cur = c if cur is None else cur + c
                        if cur:
                            cell[alpha] = cur
                        else:
                            del cell[alpha]
                else:
                    tindex = index[h + 1]
                    for (alpha, lab), c in qvec.items():
                        row = tindex[lab]
                        cell = mat.setdefault((row, cidx), {})
                        cur = cell.get(alpha)
                        cur = c if cur is None else cur + c
                        if cur:
                            cell[alpha] = cur
                        else:
                            del cell[alpha]
            family.append({k: v for k, v in mat.items() if v})
        eact.append(family)

    return KoszulComplex(spec, layers, diff, eact, res.module)


def _full_index(res, h, lab):
    bas = res.basis(h)
    return bas.index(lab)


# ---------------------------------------------------------------------------
# the degreewise Betti oracle over R
# ---------------------------------------------------------------------------

class BettiTable:
    def __init__(self, entries, imax, dmax):
        self.entries = dict(entries)  # (i, j) -> count
        self.imax = imax
        self.dmax = dmax

    def total(self, i):
        return sum(v for (ii, _), v in self.entries.items() if ii == i)

    def totals(self):
        return [self.total(i) for i in range(self.imax + 1)]

    def projective_dimension(self):
        """sup{i : b_i != 0} within the window, or None if it reaches imax."""
        nonzero = [i for i in range(self.imax + 1) if self.total(i)]
        if not nonzero:
            return 0
        top = max(nonzero)
        return top if top < self.imax else None

    def to_json(self):
        return {
            "imax": self.imax,
            "dmax": self.dmax,
            "entries": [[i, j, v] for (i, j), v in sorted(self.entries.items())],
        }

    def __repr__(self):
        return f"BettiTable(totals={self.totals()})"


def _r_basis_per_degree(spec, dmax):
    from .koszul import monomials_of_degree

    out = []
    for d in range(dmax + 1):
        monos = [e for e in monomials_of_degree(spec.qring, d)
                 if not _reducible(spec, e)]
        out.append(monos)
    return out


def _reducible(spec, exps):
    for lead in spec.rel_exps:
        if all(a >= b for a, b in zip(exps, lead)):
            return True
    return False


def _rmul_mono(spec, delta, key, coeff):
    """x^delta * (x^alpha e_comp) in R; None if it dies in the quotient."""
    alpha, comp = key
    exps = tuple(a + b for a, b in zip(delta, alpha))
    if _reducible(spec, exps):
        return None
    return (exps, comp), coeff * spec.qring.cpair(delta, alpha)


def minimal_R_resolution(module: ModulePresentation, imax: int,
                         dmax: int) -> BettiTable:
    """Graded Betti numbers of M over R by degreewise linear algebra.

    Independent of the Groebner/operator path: R-arithmetic is monomial
    normal forms, kernels are exact echelon computations per degree.
    """
    from .koszul import monomials_of_degree
    from .linalg import kernel_basis

    spec = module.spec
    module = module.normalized()
    one = CycScalar.one(spec.m)
    entries = {}

    gen_degs = [d for d, _ in module.gens]
    for j in gen_degs:
        if j <= dmax:
            entries[(0, j)] = entries.get((0, j), 0) + 1

    columns = [_mult_into_slice(spec, spec.qring.zero_exp(), c)
               for c in module.relations]
    columns = [c for c in columns if c]
    curr_degs, curr_columns = gen_degs, columns

    for step in range(1, imax + 1):
        # kernel slices of the current map per internal degree
        kernel_slices = {}
        if step == 1:
            # the kernel of F_0 -> M is spanned by the relation columns
            for d in range(dmax + 1):
                ech = Echelon()
                vecs = []
                for col in curr_columns:
                    cdeg = _col_degree(spec, col, gen_degs)
                    for delta in monomials_of_degree(spec.qring, d - cdeg):
                        moved = _mult_into_slice(spec, delta, col)
                        if moved:
                            piv, _ = ech.add(dict(moved))
                            if piv is not None:
                                vecs.append(moved)
                kernel_slices[d] = vecs
        else:
            for d in range(dmax + 1):
                cols_d, keys_d = [], []
                for comp, cd in enumerate(curr_degs):
                    for mono in monomials_of_degree(spec.qring, d - cd):
                        if _reducible(spec, mono):
                            continue
                        cols_d.append(
                            _mult_into_slice(spec, mono, curr_columns[comp]))
                        keys_d.append((mono, comp))
                vecs = []
                for kv in kernel_basis(cols_d, one):
                    vec = {}
                    for idx, c in kv.items():
                        key = keys_d[idx]
                        cur = vec.get(key)
                        cur = c if cur is None else cur + c
                        if cur:
                            vec[key] = cur
                        else:
                            del vec[key]
                    if vec:
                        vecs.append(vec)
                kernel_slices[d] = vecs

        # minimal generators: kernel slice modulo x_l * (lower slices)
        new_cols, new_degs = [], []
        for d in range(dmax + 1):
            ech = Echelon()
            for l in range(spec.n):
                delta = tuple(1 if k == l else 0 for k in range(spec.n))
                for v in kernel_slices.get(d - spec.degrees[l], []):
                    moved = _mult_into_slice(spec, delta, v)
                    if moved:
                        ech.add(dict(moved))
            for v in kernel_slices.get(d, []):
                piv, _ = ech.add(dict(v))
                if piv is not None:
                    entries[(step, d)] = entries.get((step, d), 0) + 1
                    new_cols.append(dict(v))
                    new_degs.append(d)

        curr_degs, curr_columns = new_degs, new_cols
        if not curr_columns:
            break

    return BettiTable(entries, imax, dmax)


def _col_degree(spec, col, gen_degs):
    degs = {spec.qring.deg(exps) + gen_degs[comp]
            for (exps, comp) in col}
    if len(degs) != 1:
        raise ValueError("inhomogeneous column")
    return degs.pop()


def _mult_into_slice(spec, delta, col):
    out = {}
    for key, c in col.items():
        moved = _rmul_mono(spec, delta, key, c)
        if moved is None:
            continue
        k2, c2 = moved
        cur = out.get(k2)
        cur = c2 if cur is None else cur + c2
        if cur:
            out[k2] = cur
        else:
            del out[k2]
    return out
