"""The skew Koszul DG algebra, its enveloping algebra, and the diagonal
resolution obtained by adjoining divided-power variables.

Elements live in a graded color commutative algebra over Q generated by odd
exterior variables (homological degree 1) and even divided-power variables
(homological degree 2).  A term is (exponents, odd bitmask, divided-power
vector) -> scalar, written in the normal order

    x^alpha * (odd generators, ascending) * y_1^(h_1) ... y_k^(h_k).

Sign convention: uv = (-1)^{|u||v|} chi(u,v) vu for homogeneous u, v, odd
squares vanish, and the differential satisfies the Leibniz rule
d(uv) = d(u) v + (-1)^{|u|} u d(v).  The convention is pinned down by the
d^2 = 0 and Leibniz property tests.
"""

from __future__ import annotations

from math import comb

from .colorcore import RingSpec, count_standard_monomials
from .linalg import Echelon
from .scalars import CycScalar

__all__ = [
    "DGAlgebra",
    "koszul_algebra",
    "enveloping_algebra",
    "diagonal_context",
    "koszul_mul",
    "koszul_diff",
    "phi_expand",
    "verify_diagonal_resolution",
    "DiagonalReport",
]


class DGAlgebra:
    """Color DG algebra over Q with odd and even (divided power) generators.

    ``odd_colors``/``even_colors`` are Z^n color vectors, ``*_idegs`` the
    internal degrees.  ``odd_diff[i]`` is the element d(odd_i) (homological
    degree 0) and ``even_diff[j]`` the element d(even_j) (degree 1); either
    may be None for a cycle.
    """

    def __init__(self, spec: RingSpec, odd_names, odd_colors, odd_idegs,
                 even_names=(), even_colors=(), even_idegs=()):
        self.spec = spec
        self.ring = spec.qring
        self.m = spec.m
        self.odd_names = tuple(odd_names)
        self.odd_colors = tuple(tuple(c) for c in odd_colors)
        self.odd_idegs = tuple(odd_idegs)
        self.even_names = tuple(even_names)
        self.even_colors = tuple(tuple(c) for c in even_colors)
        self.even_idegs = tuple(even_idegs)
        self.nodd = len(self.odd_names)
        self.neven = len(self.even_names)
        self.odd_diff = [None] * self.nodd
        self.even_diff = [None] * self.neven
        self._one = CycScalar.one(spec.m)

    # -- term bookkeeping ----------------------------------------------

    def zero_h(self):
        return (0,) * self.neven

    def term(self, exps=None, smask=0, hvec=None, coeff=None):
        exps = self.ring.zero_exp() if exps is None else tuple(exps)
        hvec = self.zero_h() if hvec is None else tuple(hvec)
        coeff = self._one if coeff is None else coeff
        return {(exps, smask, hvec): coeff}

    def from_poly(self, poly):
        return {(exps, 0, self.zero_h()): c for exps, c in poly.terms.items()}

    def term_hdeg(self, key):
        _, smask, hvec = key
        return bin(smask).count("1") + 2 * sum(hvec)

    def term_ideg(self, key):
        exps, smask, hvec = key
        total = self.ring.deg(exps)
        for i in range(self.nodd):
            if smask >> i & 1:
                total += self.odd_idegs[i]
        for j, h in enumerate(hvec):
            total += h * self.even_idegs[j]
        return total

    def term_color(self, key):
        exps, smask, hvec = key
        col = list(self.ring.color(exps))
        for i in range(self.nodd):
            if smask >> i & 1:
                for k, v in enumerate(self.odd_colors[i]):
                    col[k] += v
        for j, h in enumerate(hvec):
            if h:
                for k, v in enumerate(self.even_colors[j]):
                    col[k] += h * v
        return tuple(col)

    def _smask_color(self, smask):
        col = [0] * self.spec.n
        for i in range(self.nodd):
            if smask >> i & 1:
                for k, v in enumerate(self.odd_colors[i]):
                    col[k] += v
        return tuple(col)

    def _hvec_color(self, hvec):
        col = [0] * self.spec.n
        for j, h in enumerate(hvec):
            if h:
                for k, v in enumerate(self.even_colors[j]):
                    col[k] += h * v
        return tuple(col)

    # -- algebra operations ----------------------------------------------

    def mul(self, u, v):
        """Graded color commutative product."""
        chi = self.ring.chi
        out = {}
        for (alpha, s1, h1), c1 in u.items():
            colSH = tuple(a + b for a, b in zip(
                self._smask_color(s1), self._hvec_color(h1)))
            for (beta, s2, h2), c2 in v.items():
                if s1 & s2:
                    continue
                coeff = c1 * c2
                # move x^beta left past E_{s1} Y^{h1} (beta is even)
                if any(beta) and (s1 or any(h1)):
                    coeff = coeff * chi(colSH, self.ring.color(beta))
                # multiply coefficients in Q
                coeff = coeff * self.ring.cpair(alpha, beta)
                exps = tuple(a + b for a, b in zip(alpha, beta))
                # move E_{s2} left past Y^{h1}
                if s2 and any(h1):
                    coeff = coeff * chi(self._hvec_color(h1),
                                        self._smask_color(s2))
                # interleave odd parts: sign and chi per inversion
                if s1 and s2:
                    sign = 1
                    for i in _bits(s1):
                        for j in _bits(s2):
                            if i > j:
                                sign = -sign
                                coeff = coeff * chi(self.odd_colors[i],
                                                    self.odd_colors[j])
                    if sign < 0:
                        coeff = -coeff
                # divided powers
                hvec = tuple(a + b for a, b in zip(h1, h2))
                for j in range(self.neven):
                    if h1[j] and h2[j]:
                        coeff = coeff * comb(h1[j] + h2[j], h1[j])
                for j in range(self.neven):
                    if not h1[j]:
                        continue
                    for l in range(j):
                        if h2[l]:
                            coeff = coeff * chi(
                                self.even_colors[j],
                                self.even_colors[l]) ** (h1[j] * h2[l])
                if not coeff:
                    continue
                key = (exps, s1 | s2, hvec)
                cur = out.get(key)
                cur = coeff if cur is None else cur + coeff
                if cur:
                    out[key] = cur
                else:
                    del out[key]
        return out

    def add(self, u, v, scale=None):
        out = dict(u)
        for key, c in v.items():
            cc = c if scale is None else c * scale
            if not cc:
                continue
            cur = out.get(key)
            if cur is None:
                out[key] = cc
            else:
                cur = cur + cc
                if cur:
                    out[key] = cur
                else:
                    del out[key]
        return out

    def scale(self, u, s):
        if not s:
            return {}
        return {k: c * s for k, c in u.items()}

    def diff(self, u):
        """Color Leibniz differential."""
        chi = self.ring.chi
        out = {}
        for (alpha, smask, hvec), coeff in u.items():
            bits = _bits(smask)
            # odd part: d(e_{s_0} ... e_{s_k}) with sign (-1)^l
            for l, s in enumerate(bits):
                dval = self.odd_diff[s]
                if not dval:
                    continue
                scal = coeff if l % 2 == 0 else -coeff
                for r in bits[:l]:
                    scal = scal * chi(self.odd_colors[r], self.odd_colors[s])
                rest = self.term(smask=smask & ~(1 << s), hvec=hvec)
                piece = self.mul(dval, rest)
                piece = self.mul(self.term(exps=alpha), piece)
                out = self.add(out, piece, scal)
            # even part, with presign (-1)^{|S|}
            presign = -1 if len(bits) % 2 else 1
            for j in range(self.neven):
                if not hvec[j]:
                    continue
                dval = self.even_diff[j]
                if not dval:
                    continue
                scal = coeff * presign
                for l in range(j):
                    if hvec[l]:
                        scal = scal * chi(self.even_colors[l],
                                          self.even_colors[j]) ** hvec[l]
                hrest = list(hvec)
                hrest[j] -= 1
                inner = self.mul(dval, self.term(hvec=hrest))
                piece = self.mul(self.term(exps=alpha, smask=smask), inner)
                out = self.add(out, piece, scal)
        return out

    # -- slice enumeration ------------------------------------------------

    def basis_slice(self, hdeg, ideg):
        """All basis keys of the given homological and internal degree."""
        out = []
        for smask in range(1 << self.nodd):
            sbits = bin(smask).count("1")
            if sbits > hdeg:
                continue
            s_ideg = sum(self.odd_idegs[i] for i in _bits(smask))
            if s_ideg > ideg:
                continue
            for hvec in self._hvecs((hdeg - sbits), ideg - s_ideg):
                rem = ideg - s_ideg - sum(
                    h * d for h, d in zip(hvec, self.even_idegs))
                for exps in monomials_of_degree(self.ring, rem):
                    out.append((exps, smask, hvec))
        return sorted(out)

    def _hvecs(self, two_h, ideg_cap):
        if two_h % 2:
            return []
        target = two_h // 2
        out = []
        hvec = [0] * self.neven

        def walk(j, rem, icap):
            if j == self.neven:
                if rem == 0:
                    out.append(tuple(hvec))
                return
            e = 0
            while e <= rem and e * self.even_idegs[j] <= icap:
                hvec[j] = e
                walk(j + 1, rem - e, icap - e * self.even_idegs[j])
                e += 1
            hvec[j] = 0

        walk(0, target, ideg_cap)
        if self.neven == 0:
            return [()] if target == 0 else []
        return out


def _bits(mask):
    out = []
    i = 0
    while mask >> i:
        if mask >> i & 1:
            out.append(i)
        i += 1
    return out


def monomials_of_degree(ring, deg):
    """All exponent vectors of weighted internal degree exactly deg."""
    out = []
    if deg < 0:
        return out
    n = ring.nvars
    exps = [0] * n

    def walk(i, rem):
        if i == n:
            if rem == 0:
                out.append(tuple(exps))
            return
        e = 0
        while e * ring.degs[i] <= rem:
            exps[i] = e
            walk(i + 1, rem - e * ring.degs[i])
            e += 1
        exps[i] = 0

    walk(0, deg)
    return out


# -- the standard contexts ---------------------------------------------------

def koszul_algebra(spec: RingSpec) -> DGAlgebra:
    """E = Q<e_1..e_c | d(e_i) = f_i>, the skew Koszul complex on f."""
    ctx = DGAlgebra(
        spec,
        odd_names=[f"e{i+1}" for i in range(spec.c)],
        odd_colors=spec.cf,
        odd_idegs=spec.df,
    )
    for i, f in enumerate(spec.relations):
        ctx.odd_diff[i] = ctx.from_poly(f)
    return ctx


def enveloping_algebra(spec: RingSpec) -> DGAlgebra:
    """E^e = Q<e_1..e_c, e_1'..e_c' | d(e_i) = d(e_i') = f_i>.

    Bit i is e_i (the factor 1 (x) e_i), bit c+i is e_i' (= e_i (x) 1).
    """
    c = spec.c
    ctx = DGAlgebra(
        spec,
        odd_names=[f"e{i+1}" for i in range(c)] + [f"e{i+1}p" for i in range(c)],
        odd_colors=tuple(spec.cf) + tuple(spec.cf),
        odd_idegs=tuple(spec.df) + tuple(spec.df),
    )
    for i, f in enumerate(spec.relations):
        ctx.odd_diff[i] = ctx.from_poly(f)
        ctx.odd_diff[c + i] = ctx.from_poly(f)
    return ctx


def diagonal_context(spec: RingSpec) -> DGAlgebra:
    """E^e<Y | d(y_i) = e_i' - e_i> with divided powers y_i of degree 2."""
    c = spec.c
    ctx = DGAlgebra(
        spec,
        odd_names=[f"e{i+1}" for i in range(c)] + [f"e{i+1}p" for i in range(c)],
        odd_colors=tuple(spec.cf) + tuple(spec.cf),
        odd_idegs=tuple(spec.df) + tuple(spec.df),
        even_names=[f"y{i+1}" for i in range(c)],
        even_colors=spec.cf,
        even_idegs=spec.df,
    )
    for i, f in enumerate(spec.relations):
        ctx.odd_diff[i] = ctx.from_poly(f)
        ctx.odd_diff[c + i] = ctx.from_poly(f)
        ctx.even_diff[i] = ctx.add(ctx.term(smask=1 << (c + i)),
                                   ctx.term(smask=1 << i), scale=-ctx._one)
    return ctx


def koszul_mul(ctx: DGAlgebra, u, v):
    """Product in the Koszul algebra (or any DGAlgebra context)."""
    return ctx.mul(u, v)


def koszul_diff(ctx: DGAlgebra, u):
    """Differential in the Koszul algebra (or any DGAlgebra context)."""
    return ctx.diff(u)


# -- diagonal approximation ---------------------------------------------------

def phi_expand(spec: RingSpec, hvec):
    """Expansion of the diagonal approximation on y^(H).

    Returns [(H', H'', scalar)] with
    scalar = prod_{i<j} chi(f_i, f_j)^{h'_j h''_i} over all H' + H'' = H.
    """
    hvec = tuple(hvec)
    c = len(hvec)
    out = []

    def walk(idx, hp):
        if idx == c:
            hpp = tuple(h - p for h, p in zip(hvec, hp))
            scal = CycScalar.one(spec.m)
            for i in range(c):
                for j in range(i + 1, c):
                    e = hp[j] * hpp[i]
                    if e:
                        scal = scal * spec.chi_ff(i, j) ** e
            out.append((tuple(hp), hpp, scal))
            return
        for p in range(hvec[idx] + 1):
            walk(idx + 1, hp + [p])

    walk(0, [])
    return out


# -- homology of the diagonal resolution --------------------------------------

class DiagonalReport:
    def __init__(self, ok, dmax, failures, homology_dims):
        self.ok = ok
        self.dmax = dmax
        self.failures = failures        # list of (hdeg, ideg, got, expected)
        self.homology_dims = homology_dims

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {
            "ok": self.ok,
            "dmax": self.dmax,
            "failures": [list(f) for f in self.failures],
            "homology_dims": {f"{h},{d}": v
                              for (h, d), v in sorted(self.homology_dims.items())},
        }


def homology_dims_of_context(ctx: DGAlgebra, hmax, dmax):
    """Exact dim_k H_(h,d) for h <= hmax, internal degree d <= dmax."""
    dims = {}
    for d in range(dmax + 1):
        slices = {h: ctx.basis_slice(h, d) for h in range(hmax + 2)}
        ranks = {}
        kernels = {}
        for h in range(1, hmax + 2):
            cols = []
            for key in slices[h]:
                img = ctx.diff({key: ctx._one})
                cols.append(img)
            ech = Echelon()
            kernel_count = 0
            for col in cols:
                piv, _ = ech.add(col)
                if piv is None:
                    kernel_count += 1
            ranks[h] = ech.rank
            kernels[h] = kernel_count
        for h in range(hmax + 1):
            if h == 0:
                cycles = len(slices[0])  # d = 0 on homological degree 0
            else:
                cycles = kernels[h]
            dims[(h, d)] = cycles - ranks.get(h + 1, 0)
    return dims


def verify_diagonal_resolution(spec: RingSpec, dmax: int,
                               context=None) -> DiagonalReport:
    """Check that the diagonal resolution has homology R in degree 0 only.

    Computes homology of E^e<Y> in all bidegrees with internal degree at
    most dmax and homological degree up to the largest one supported there,
    and compares against dim_k R_d from the standard monomial count.
    """
    ctx = context if context is not None else diagonal_context(spec)
    # internal degree bounds homological degree: every e, e', y carries
    # internal degree >= min(df) and homological degree <= 2 per unit
    hmax = (2 * dmax) // min(spec.df) if spec.c else 0
    r_dims = count_standard_monomials(spec.n, spec.degrees, spec.rel_exps, dmax)
    dims = homology_dims_of_context(ctx, hmax, dmax)
    failures = []
    for (h, d), v in sorted(dims.items()):
        expected = r_dims[d] if h == 0 else 0
        if v != expected:
            failures.append((h, d, v, expected))
    return DiagonalReport(not failures, dmax, failures, dims)
