"""Spinor-valued polynomials, the Dirac operator, and monogenic branching.

Implements Gegenbauer polynomials with exact coefficients, the Fischer
decomposition Pol = (+) x^j M_i, the coordinate-multiplication split of a
monogenic polynomial, the degree-raising embeddings M_j(R^n) -> M_i(R^{n+1}),
and the proportionality constants relating coordinate multiplication on a
sphere to those embeddings -- both as a closed-form table and by brute-force
linear algebra over Q(sqrt(-1)).
"""

from fractions import Fraction
from functools import lru_cache

from .paramfield import (GaussianRational, ParamScalar, ZERO, ONE, I,
                         PS_ONE, PS_I, PS_LAM, pochhammer, rat)
from .cliffspin import (Spinor, zeta_gen_apply, gamma, fund_branching,
                        spin_dim, DimensionMismatch)
from . import linalg


class NotMonogenic(ValueError):
    pass


class ParityError(ValueError):
    pass


class SplitFailure(ArithmeticError):
    pass


class IdentityFailure(AssertionError):
    pass


class MultiplicityViolation(ArithmeticError):
    pass


class ZeroMap(ArithmeticError):
    pass


class NotAdjacent(ValueError):
    pass


# -- Gegenbauer polynomials ---------------------------------------------------

def _zp_trim(p):
    while p and p[-1].is_zero():
        p.pop()
    return p


def _zp_add(a, b):
    out = [ParamScalar.coerce(0)] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = out[i] + c
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return _zp_trim(out)


def _zp_scale(a, c):
    c = ParamScalar.coerce(c)
    return _zp_trim([x * c for x in a])


def _zp_mul(a, b):
    if not a or not b:
        return []
    out = [ParamScalar.coerce(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _zp_trim(out)


def _zp_diff(a):
    return _zp_trim([a[i] * ParamScalar.coerce(i) for i in range(1, len(a))])


class GegenbauerPoly:
    """C_deg^lam(z) with exact ParamScalar coefficients (coeff of z^t)."""

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree, coeffs):
        self.degree = degree
        self.coeffs = list(coeffs)


def gegenbauer(deg, lam):
    """C_deg^lam(z) = sum_m (-1)^m (lam)_{deg-m} / (m! (deg-2m)!) (2z)^{deg-2m}."""
    lam = ParamScalar.coerce(lam)
    coeffs = [ParamScalar.coerce(0)] * (deg + 1)
    fact = [1] * (deg + 2)
    for t in range(1, deg + 2):
        fact[t] = fact[t - 1] * t
    for m in range(deg // 2 + 1):
        p = deg - 2 * m
        c = pochhammer(lam, deg - m) * ParamScalar.from_fraction(
            (-1) ** m * 2 ** p, fact[m] * fact[p])
        coeffs[p] = coeffs[p] + c
    return GegenbauerPoly(deg, coeffs)


def _geg_zp(deg, lam_shift):
    """Coefficient list of C_deg^{lam + shift}(z) in formal lam; [] for deg < 0."""
    if deg < 0:
        return []
    return _zp_trim(list(gegenbauer(deg, PS_LAM + ParamScalar.coerce(lam_shift)).coeffs))


def gegenbauer_coeffs_rational(deg, lam):
    """Coefficients of C_deg^lam(z) for a fixed rational lam, as GaussianRational."""
    lam = rat(lam)
    out = [ZERO] * (deg + 1)
    for m in range(deg // 2 + 1):
        p = deg - 2 * m
        num = Fraction(1)
        for t in range(deg - m):
            num *= Fraction(lam.numerator, lam.denominator) + t
        fm = 1
        for t in range(2, m + 1):
            fm *= t
        fp = 1
        for t in range(2, p + 1):
            fp *= t
        q = Fraction((-1) ** m * 2 ** p, fm * fp) * num
        out[p] = out[p] + GaussianRational(q)
    return out


_GEG_IDENTITIES = ("G1", "G2", "G3", "G4", "G5", "G6", "G7", "G8", "G9", "ODE")


def _geg_identity_diff(name, n):
    """LHS - RHS of the named Gegenbauer identity at degree n, formal lam."""
    z = [ParamScalar.coerce(0), PS_ONE]
    one = [PS_ONE]
    one_minus_z2 = _zp_add(one, _zp_scale(_zp_mul(z, z), -1))
    lam = PS_LAM
    C = lambda d, s: _geg_zp(d, s)
    if name == "G1":
        return _zp_add(_zp_diff(C(n, 0)), _zp_scale(C(n - 1, 1), -2 * lam))
    if name == "G2":
        # classical three-term recurrence (the one label the source list skips)
        return _zp_add(_zp_add(_zp_scale(C(n + 1, 0), n + 1),
                               _zp_scale(_zp_mul(z, C(n, 0)), -2 * (lam + ParamScalar.coerce(n)))),
                       _zp_scale(C(n - 1, 0), 2 * lam + ParamScalar.coerce(n - 1)))
    if name == "G3":
        return _zp_add(_zp_add(_zp_scale(_zp_mul(z, C(n, 1)), 2 * lam),
                               _zp_scale(C(n + 1, 0), -(n + 1))),
                       _zp_scale(C(n - 1, 1), -2 * lam))
    if name == "G4":
        return _zp_add(_zp_add(
            _zp_scale(_zp_mul(one_minus_z2, C(n - 2, 2)), 4 * lam * (lam + PS_ONE)),
            _zp_scale(C(n, 0), (2 * lam + ParamScalar.coerce(n)) * (2 * lam + ParamScalar.coerce(n + 1)))),
            _zp_scale(C(n, 1), -2 * lam * (2 * lam + PS_ONE)))
    if name == "G5":
        return _zp_add(_zp_add(
            _zp_scale(_zp_mul(one_minus_z2, C(n - 2, 2)), 4 * lam * (lam + PS_ONE)),
            _zp_scale(_zp_mul(z, C(n - 1, 1)), -2 * lam * (2 * lam + PS_ONE))),
            _zp_scale(C(n, 0), ParamScalar.coerce(n) * (2 * lam + ParamScalar.coerce(n))))
    if name == "G6":
        return _zp_add(_zp_add(_zp_scale(C(n, 1), 2 * lam),
                               _zp_scale(C(n, 0), -(2 * lam + ParamScalar.coerce(n)))),
                       _zp_scale(_zp_mul(z, C(n - 1, 1)), -2 * lam))
    if name == "G7":
        return _zp_add(_zp_add(
            _zp_scale(_zp_mul(one_minus_z2, C(n - 1, 1)), 2 * lam),
            _zp_scale(_zp_mul(z, C(n, 0)), -(2 * lam + ParamScalar.coerce(n)))),
            _zp_scale(C(n + 1, 0), n + 1))
    if name == "G8":
        lm1 = lam - PS_ONE
        return _zp_add(_zp_add(_zp_scale(C(n + 1, 0), lm1),
                               _zp_scale(C(n + 1, -1), -(lam + ParamScalar.coerce(n)))),
                       _zp_scale(C(n - 1, 0), -lm1))
    if name == "G9":
        return _zp_add(_zp_add(
            _zp_scale(_zp_mul(one_minus_z2, C(n - 2, 2)), 4 * lam * (lam + PS_ONE)),
            _zp_scale(C(n - 2, 1), -2 * lam * (2 * lam + PS_ONE))),
            _zp_scale(C(n, 0), n * (n - 1)))
    if name == "ODE":
        u = C(n, 0)
        return _zp_add(_zp_add(
            _zp_mul(one_minus_z2, _zp_diff(_zp_diff(u))),
            _zp_scale(_zp_mul(z, _zp_diff(u)), -(2 * lam + PS_ONE))),
            _zp_scale(u, ParamScalar.coerce(n) * (ParamScalar.coerce(n) + 2 * lam)))
    raise KeyError(name)


def verify_gegenbauer_identities(max_deg):
    """Check the identity suite as exact polynomial identities in z, formal lam.

    Returns {identity: {degree: True}}; raises IdentityFailure with the first
    nonzero difference.
    """
    if max_deg < 2:
        raise ValueError("max_deg must be >= 2")
    report = {}
    for name in _GEG_IDENTITIES:
        per = {}
        for n in range(max_deg + 1):
            d = _geg_identity_diff(name, n)
            if d:
                raise IdentityFailure("%s fails at degree %d: %r" % (name, n, d))
            per[n] = True
        report[name] = per
    return report


# -- spinor-valued polynomials ------------------------------------------------

class SpinorPolynomial:
    """Polynomial map R^nvars -> S with exact Spinor coefficients.

    cn fixes the ambient Clifford algebra Cl(cn;C) acting on the values
    (cn >= nvars, so embedded polynomials can carry a larger spin module).
    """

    __slots__ = ("nvars", "cn", "variant", "coeffs")

    def __init__(self, nvars, cn=None, variant="+", coeffs=None):
        self.nvars = nvars
        self.cn = nvars if cn is None else cn
        self.variant = variant
        m = self.cn // 2
        c = {}
        if coeffs:
            for mono, s in coeffs.items():
                if s.m != m:
                    raise DimensionMismatch("spinor coefficient of wrong size")
                if not s.is_zero():
                    c[mono] = s
        self.coeffs = c

    @property
    def m(self):
        return self.cn // 2

    def _zero_like(self):
        return SpinorPolynomial(self.nvars, self.cn, self.variant)

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        if (self.nvars, self.cn) != (other.nvars, other.cn):
            raise DimensionMismatch("incompatible spinor polynomials")
        c = dict(self.coeffs)
        for mono, s in other.coeffs.items():
            t = c.get(mono)
            t = s if t is None else t + s
            if t.is_zero():
                c.pop(mono, None)
            else:
                c[mono] = t
        return SpinorPolynomial(self.nvars, self.cn, self.variant, c)

    def __sub__(self, other):
        return self + other.scale(GaussianRational(-1))

    def scale(self, v):
        v = GaussianRational.coerce(v)
        if v.is_zero():
            return self._zero_like()
        return SpinorPolynomial(self.nvars, self.cn, self.variant,
                                {mono: s.scale(v) for mono, s in self.coeffs.items()})

    def mul_monomial(self, exps, v=ONE):
        v = GaussianRational.coerce(v)
        out = {}
        for mono, s in self.coeffs.items():
            key = tuple(a + b for a, b in zip(mono, exps))
            out[key] = s.scale(v)
        return SpinorPolynomial(self.nvars, self.cn, self.variant, out)

    def diff(self, k):
        """d/dx_k, 1-based k."""
        out = {}
        idx = k - 1
        for mono, s in self.coeffs.items():
            e = mono[idx]
            if e == 0:
                continue
            key = mono[:idx] + (e - 1,) + mono[idx + 1:]
            t = s.scale(GaussianRational(e))
            prev = out.get(key)
            out[key] = t if prev is None else prev + t
        return SpinorPolynomial(self.nvars, self.cn, self.variant, out)

    def apply_e(self, i):
        """Apply zeta(e_i) of the ambient algebra to every coefficient."""
        return SpinorPolynomial(self.nvars, self.cn, self.variant,
                                {mono: zeta_gen_apply(self.cn, self.variant, i, s)
                                 for mono, s in self.coeffs.items()})

    def zeta_x(self):
        """Multiply by zeta(x) = sum_k x_k e_k over the polynomial variables."""
        out = self._zero_like()
        for k in range(1, self.nvars + 1):
            exps = tuple(1 if t == k - 1 else 0 for t in range(self.nvars))
            out = out + self.apply_e(k).mul_monomial(exps)
        return out

    def norm2_mul(self):
        out = self._zero_like()
        for k in range(self.nvars):
            exps = tuple(2 if t == k else 0 for t in range(self.nvars))
            out = out + self.mul_monomial(exps)
        return out

    def gamma_twist(self):
        return SpinorPolynomial(self.nvars, self.cn, self.variant,
                                {mono: gamma(s) for mono, s in self.coeffs.items()})

    def degree(self):
        if not self.coeffs:
            return -1
        return max(sum(mono) for mono in self.coeffs)

    def is_homogeneous(self):
        degs = {sum(mono) for mono in self.coeffs}
        return len(degs) <= 1

    def extend_vars(self, nvars, cn=None):
        """View in a larger variable set (new variables appended, exponent 0)."""
        pad = nvars - self.nvars
        if pad < 0:
            raise DimensionMismatch("cannot shrink variables")
        cn = self.cn if cn is None else cn
        return SpinorPolynomial(nvars, cn, self.variant,
                                {mono + (0,) * pad: s for mono, s in self.coeffs.items()})

    def map_values(self, spinmap):
        return SpinorPolynomial(self.nvars, 2 * (spinmap.dst_dim.bit_length() - 1),
                                self.variant,
                                {mono: spinmap.apply_spinor(s)
                                 for mono, s in self.coeffs.items()})

    def vec(self):
        """Flat dict ((monomial, mask) -> coefficient) for exact linear algebra."""
        out = {}
        for mono, s in self.coeffs.items():
            for mask, v in s.coeffs.items():
                out[(mono, mask)] = v
        return out

    def __eq__(self, other):
        return (isinstance(other, SpinorPolynomial)
                and (self.nvars, self.cn) == (other.nvars, other.cn)
                and self.coeffs == other.coeffs)

    def __repr__(self):
        return "SpinorPolynomial(nvars=%d, cn=%d, %d terms)" % (
            self.nvars, self.cn, len(self.coeffs))


def dirac(phi):
    """Dirac operator: sum_k zeta(e_k) d(phi)/dx_k over the polynomial variables."""
    out = phi._zero_like()
    for k in range(1, phi.nvars + 1):
        out = out + phi.diff(k).apply_e(k)
    return out


def monomials(n, d):
    """Exponent tuples of total degree d in n variables, lex order."""
    if n == 1:
        yield (d,)
        return
    for e in range(d, -1, -1):
        for rest in monomials(n - 1, d - e):
            yield (e,) + rest


@lru_cache(maxsize=None)
def monogenic_basis(n, i):
    """Exact basis of M_i(R^n; S_n) = ker(Dirac) on degree-i polynomials."""
    if n < 1:
        raise DimensionMismatch("need n >= 1")
    m = n // 2
    dim_s = spin_dim(n)
    monos = list(monomials(n, i))
    cols = {}
    for mono in monos:
        for mask in range(dim_s):
            cols[(mono, mask)] = len(cols)
    rows = {}
    for (mono, mask), j in cols.items():
        phi = SpinorPolynomial(n, n, "+", {mono: Spinor.basis(m, mask)})
        dphi = dirac(phi)
        for key, v in dphi.vec().items():
            rows.setdefault(key, {})[j] = v
    basis_vecs = linalg.nullspace(list(rows.values()), len(cols))
    inv = {j: key for key, j in cols.items()}
    out = []
    for vec in basis_vecs:
        coeffs = {}
        for j, v in vec.items():
            mono, mask = inv[j]
            s = coeffs.setdefault(mono, Spinor(m))
            coeffs[mono] = s + Spinor(m, {mask: v})
        out.append(SpinorPolynomial(n, n, "+", coeffs))
    return tuple(out)


def _fischer_a(n, i, j):
    """a_j with Dirac(x^j psi) = a_j x^{j-1} psi for psi in M_i(R^n)."""
    a = 0
    for t in range(1, j + 1):
        a = -(n + 2 * (i + t - 1)) - a
    return a


def fischer_split(phi):
    """Components (j, psi_j) with phi = sum_j zeta(x)^j psi_j, psi_j monogenic."""
    if phi.is_zero():
        return []
    if not phi.is_homogeneous():
        raise SplitFailure("fischer_split needs a homogeneous input")
    d = phi.degree()
    u = dirac(phi)
    comps = {}
    if not u.is_zero():
        for j, uj in fischer_split(u):
            a = _fischer_a(phi.nvars, d - j - 1, j + 1)
            if a == 0:
                raise SplitFailure("vanishing Fischer coefficient")
            comps[j + 1] = uj.scale(GaussianRational(Fraction(1, a)))
    rest = phi
    for j, psi in comps.items():
        t = psi
        for _ in range(j):
            t = t.zeta_x()
        rest = rest - t
    if not rest.is_zero():
        if not dirac(rest).is_zero():
            raise SplitFailure("residual component is not monogenic")
        comps[0] = rest
    return sorted(comps.items())


def mult_coordinate_split(phi, k):
    """Split x_k * phi = phi_plus - zeta(x) phi_zero + |x|^2 phi_minus.

    phi must be homogeneous monogenic; the three components are returned as
    (phi_plus, phi_zero, phi_minus), each monogenic by the closed formulas.
    """
    if not phi.is_homogeneous():
        raise NotMonogenic("input not homogeneous")
    if not dirac(phi).is_zero():
        raise NotMonogenic("input not monogenic")
    n = phi.nvars
    i = max(phi.degree(), 0)
    xk = tuple(1 if t == k - 1 else 0 for t in range(n))
    xphi = phi.mul_monomial(xk)
    ek_phi = phi.apply_e(k)
    dphi = phi.diff(k)
    inv_ni = GaussianRational(Fraction(1, n + 2 * i))
    plus = xphi + (ek_phi.zeta_x() - dphi.norm2_mul()).scale(inv_ni)
    if dphi.is_zero():
        zero = ek_phi.scale(inv_ni)
        minus = phi._zero_like()
    else:
        inv_nm = GaussianRational(Fraction(1, n + 2 * i - 2))
        zero = (ek_phi - dphi.zeta_x().scale(GaussianRational(Fraction(2, n + 2 * i - 2)))).scale(inv_ni)
        minus = dphi.scale(inv_nm)
    return plus, zero, minus


# -- branching embeddings M_j(R^n) -> M_i(R^{n+1}) ---------------------------

def _embed_values(phi):
    """Embed S_n-valued phi into S_{n+1}-valued via the fixed spin embedding."""
    n = phi.nvars
    if n % 2 == 0:
        return SpinorPolynomial(n, n + 1, "+", dict(phi.coeffs))
    plus, _ = fund_branching(n)
    out = {mono: plus.apply_spinor(s) for mono, s in phi.coeffs.items()}
    return SpinorPolynomial(n, n + 1, "+", out)


def _norm2_power_mul(phi, t):
    out = phi
    for _ in range(t):
        out = out.norm2_mul()
    return out


def branch_embed(n, j, i, phi, check=False):
    """Degree-raising Pin(n)-embedding of M_j(R^n;S_n) into M_i(R^{n+1};S_{n+1}).

    Assembles |x|-powers against Gegenbauer parity so the result is an honest
    polynomial; with check=True the output is verified to be monogenic.
    """
    if not (0 <= j <= i):
        raise NotAdjacent("need 0 <= j <= i")
    if phi.nvars != n:
        raise DimensionMismatch("phi has wrong number of variables")
    if not dirac(phi).is_zero():
        raise NotMonogenic("branch_embed input must be monogenic")
    emb = _embed_values(phi).extend_vars(n + 1)
    d = i - j
    out = SpinorPolynomial(n + 1, n + 1, "+")
    lam1 = Fraction(n - 1, 2) + j
    c1 = gegenbauer_coeffs_rational(d, lam1)
    for p, c in enumerate(c1):
        if c.is_zero():
            continue
        t2 = d - p
        if t2 % 2:
            raise ParityError("Gegenbauer parity broke polynomiality")
        term = emb.mul_monomial((0,) * n + (p,), c * GaussianRational(n + i + j - 1))
        out = out + _norm2_power_mul(term, t2 // 2)
    if d >= 1:
        lam2 = Fraction(n + 1, 2) + j
        c2 = gegenbauer_coeffs_rational(d - 1, lam2)
        core = emb.apply_e(n + 1)
        xz = SpinorPolynomial(n + 1, n + 1, "+")
        for k in range(1, n + 1):
            exps = tuple(1 if t == k - 1 else 0 for t in range(n + 1))
            xz = xz + core.apply_e(k).mul_monomial(exps)
        for p, c in enumerate(c2):
            if c.is_zero():
                continue
            t2 = d - 1 - p
            if t2 % 2:
                raise ParityError("Gegenbauer parity broke polynomiality")
            term = xz.mul_monomial((0,) * n + (p,), c * GaussianRational(n + 2 * j - 1))
            out = out + _norm2_power_mul(term, t2 // 2)
    if check and not dirac(out).is_zero():
        raise NotMonogenic("branch_embed produced a non-monogenic polynomial")
    return out


# -- proportionality constants on the K-type lattice --------------------------
#
# K-type labels: for n even the source-group types are (i, s) with s = +-1 and
# the target types are plain integers j; for n odd the roles of the sign are
# swapped: types i and (j, s).  Containment means j <= i, adjacency means the
# index moves by one of {(+1, same sign), (0, flip), (-1, same sign)}.

def _split_label(lbl):
    if isinstance(lbl, tuple):
        return lbl[0], lbl[1]
    return lbl, 0


def _adjacent_move(a, b):
    """(step, flip) for one adjacency move, or None.

    Signed labels move up/down with the same sign or flip sign in place;
    unsigned labels may also stay in place.
    """
    (ia, sa), (ib, sb) = _split_label(a), _split_label(b)
    if ib == ia + 1 and sa == sb:
        return 1, False
    if ib == ia:
        if sa == 0 and sb == 0:
            return 0, False
        if sa == -sb and sa != 0:
            return 0, True
    if ib == ia - 1 and sa == sb:
        return -1, False
    return None


def _validate_pair(n, alpha, alphap, beta, betap):
    even = n % 2 == 0
    i, si = _split_label(alpha)
    j, sj = _split_label(alphap)
    ib, sib = _split_label(beta)
    jb, sjb = _split_label(betap)
    if even and (si == 0 or sj != 0 or sib == 0 or sjb != 0):
        raise NotAdjacent("for even n use alpha=(i,+-1), alphap=j")
    if not even and (si != 0 or sj == 0 or sib != 0 or sjb == 0):
        raise NotAdjacent("for odd n use alpha=i, alphap=(j,+-1)")
    if not (0 <= j <= i) or not (0 <= jb <= ib):
        raise NotAdjacent("containment j <= i fails")
    mv = _adjacent_move(alpha, beta)
    mvp = _adjacent_move(alphap, betap)
    if mv is None or mvp is None:
        raise NotAdjacent("labels are not adjacent")
    return i, si, j, sj, ib, jb, mv, mvp


def lambda_constant(n, alpha, alphap, beta, betap):
    """Closed-form proportionality constant for one adjacent lattice move."""
    i, si, j, sj, _, _, mv, mvp = _validate_pair(n, alpha, alphap, beta, betap)
    frac = ParamScalar.from_fraction
    if n % 2 == 0:
        s = si
        key = (mv[0], mvp[0])
    else:
        s = sj
        key = (mv[0], mvp[0])
    if key == (1, 1):
        val = frac(n + 2 * j - 1, n + 2 * i + 1)
    elif key == (0, 1):
        val = frac(2 * (n + 2 * j - 1) * s,
                   (n + 2 * i - 1) * (n + 2 * i + 1))
        val = val * PS_I if n % 2 == 0 else -val
    elif key == (-1, 1):
        val = frac(-(n + 2 * j - 1), n + 2 * i - 1)
    elif key == (1, 0):
        val = frac((i - j + 1) * s, n + 2 * i + 1)
        val = -val * PS_I if n % 2 == 0 else val
    elif key == (0, 0):
        val = frac((n + 2 * i) * (n + 2 * j - 1),
                   (n + 2 * i - 1) * (n + 2 * i + 1))
    elif key == (-1, 0):
        val = frac((n + i + j - 1) * s, n + 2 * i - 1)
        val = val * PS_I if n % 2 == 0 else -val
    elif key == (1, -1):
        val = frac(-(i - j + 1) * (i - j + 2),
                   (n + 2 * i + 1) * (n + 2 * j - 3))
    elif key == (0, -1):
        val = frac(2 * (i - j + 1) * (n + i + j - 1) * s,
                   (n + 2 * i - 1) * (n + 2 * i + 1) * (n + 2 * j - 3))
        val = val * PS_I if n % 2 == 0 else -val
    elif key == (-1, -1):
        val = frac((n + i + j - 2) * (n + i + j - 1),
                   (n + 2 * i - 1) * (n + 2 * j - 3))
    else:  # pragma: no cover - excluded by _validate_pair
        raise NotAdjacent("no table entry for %r" % (key,))
    return val


def _sphere_split(psi, k):
    """Sphere components of x_k * psi for monogenic psi: (+1, 0, -1) reps.

    On the unit sphere x_k psi = psi_plus - zeta(x) psi_zero + psi_minus.
    """
    plus, zero, minus = mult_coordinate_split(psi, k)
    return plus, zero, minus


def _omega_components(phi, k, kind):
    """E'(beta')-components of multiplication by x_k on a sphere K-type element.

    kind 'plain' (element psi), 'xz' (element zeta(x) psi) or 'mixed'
    (element psi + zeta(x) gamma(psi)); returns {move: (kind, rep)} with move
    in {+1, 0, -1} for the target degree j + move.
    """
    plus, zero, minus = _sphere_split(phi, k)
    if kind == "plain":
        return {1: ("plain", plus), 0: ("xz", zero.scale(GaussianRational(-1))),
                -1: ("plain", minus)}
    if kind == "xz":
        return {1: ("xz", plus), 0: ("plain", zero), -1: ("xz", minus)}
    if kind == "mixed":
        return {1: ("mixed", plus), 0: ("mixed", zero.gamma_twist().scale(GaussianRational(-1))),
                -1: ("mixed", minus)}
    raise ValueError(kind)


@lru_cache(maxsize=256)
def _bruteforce_block(n, alpha, alphap, beta, max_basis):
    """Solve for all constants into one target type at once; {move: value}."""
    i, si = _split_label(alpha)
    j, sj = _split_label(alphap)
    even = n % 2 == 0
    basis = monogenic_basis(n, j)
    if max_basis is not None:
        basis = basis[:max_basis]
    if not basis:
        raise ZeroMap("empty source K-type")
    sib_target = _split_label(beta)[1]
    ib_target = _split_label(beta)[0]
    lhs_move = _adjacent_move(alpha, beta)[0]

    def embed_candidate(jp, ipb, kind, rep):
        """S_{beta,beta'} applied to an omega'-component rep."""
        if rep.is_zero() or jp > ipb:
            return None
        if even:
            # target sign decides whether the x-factor (and gamma twist) is used
            if sib_target == 1:
                return ("plain", branch_embed(n, jp, ipb, rep))
            return ("xz", branch_embed(n, jp, ipb, rep.gamma_twist()))
        if kind == "plain":
            return ("mixed", branch_embed(n, jp, ipb, rep))
        return ("mixed", branch_embed(n, jp, ipb, rep).gamma_twist())

    target = {}
    cand_moves = [mvq for mvq in (1, 0, -1) if 0 <= j + mvq <= ib_target]
    col_vecs = {mvq: {} for mvq in cand_moves}
    sample_idx = 0
    for phi in basis:
        if even:
            # alpha = (i,+): Psi = I(phi); (i,-): Psi = I(gamma phi), xz kind
            if si == 1:
                Psi, lhs_kind = branch_embed(n, j, i, phi), "plain"
            else:
                Psi, lhs_kind = branch_embed(n, j, i, phi.gamma_twist()), "xz"
            omega_kind = "mixed"
        else:
            if sj == 1:
                Psi, lhs_kind = branch_embed(n, j, i, phi), "mixed"
                omega_kind = "plain"
            else:
                Psi, lhs_kind = branch_embed(n, j, i, phi).gamma_twist(), "mixed"
                omega_kind = "xz"
        for k in range(1, n + 1):
            lhs_kind_b, lhs_rep = _omega_components(Psi, k, lhs_kind)[lhs_move]
            src_comps = _omega_components(phi, k, omega_kind)
            for mvq in cand_moves:
                comp_kind, rep = src_comps[mvq]
                cand = embed_candidate(j + mvq, ib_target, comp_kind, rep)
                if cand is not None:
                    ck, cpoly = cand
                    if ck != lhs_kind_b:
                        raise MultiplicityViolation(
                            "component kinds disagree: %s vs %s" % (ck, lhs_kind_b))
                    for key, v in cpoly.vec().items():
                        col_vecs[mvq][(sample_idx, key)] = v
            for key, v in lhs_rep.vec().items():
                target[(sample_idx, key)] = v
            sample_idx += 1

    live = [mvq for mvq in cand_moves if col_vecs[mvq]]
    if not live:
        raise ZeroMap("comparison map vanishes on the spanning set")
    try:
        sol = linalg.solve_in_span([col_vecs[mvq] for mvq in live], target)
    except ValueError as exc:
        raise ZeroMap(str(exc))
    if sol is None:
        raise MultiplicityViolation(
            "sides are not proportional for %r -> %r" % ((alpha, alphap), beta))
    return {mvq: sol[t] for t, mvq in enumerate(live)}


def lambda_constant_bruteforce(n, alpha, alphap, beta, betap, max_basis=None):
    """Recover the proportionality constant by exact linear algebra.

    Realizes the K-type pair inside the polynomial model on the sphere,
    multiplies by the coordinate functions x_k, and solves for the scalars
    relating the projected result to the embedded images of the target
    pairs.  Raises MultiplicityViolation when the two sides fail to be
    proportional and ZeroMap when the comparison map vanishes on the whole
    spanning set.
    """
    _, _, j, _, _, _, mv, mvp = _validate_pair(n, alpha, alphap, beta, betap)
    block = _bruteforce_block(n, alpha, alphap, beta, max_basis)
    if mvp[0] not in block:
        raise ZeroMap("comparison map vanishes on the spanning set")
    return ParamScalar.coerce(block[mvp[0]])


def apply_group_element(phi, gen_indices):
    """Action of g = e_{i1}...e_{ik} on a spinor polynomial.

    (g . phi)(x) = zeta(g) phi(q(g)^{-1} x); the covering image q(g) of a
    generator product is a signed permutation, so monomials transform by
    sign and index shuffle.
    """
    from .cliffspin import CliffordElt, pin_cover_action
    n = phi.nvars
    g = CliffordElt.scalar(n, ONE)
    for idx in gen_indices:
        g = g * CliffordElt.basis(n, [idx])
    # columns of q(g); its inverse is the transpose (orthogonal for Q)
    cols = []
    for j in range(n):
        e_j = [1 if t == j else 0 for t in range(n)]
        cols.append(pin_cover_action(g, e_j))
    # q(g)^{-1} x has j-th coordinate sum_t q(g)_{t j} x_t; require signed perm
    sub = {}
    for j in range(n):
        entries = [(t, cols[j][t]) for t in range(n) if not cols[j][t].is_zero()]
        if len(entries) != 1:
            raise NotImplementedError("only signed-permutation images supported")
        t, v = entries[0]
        sub[j] = (t, v)
    out = {}
    m = phi.m
    for mono, s in phi.coeffs.items():
        sgn = ONE
        new = [0] * n
        for j, e in enumerate(mono):
            if e == 0:
                continue
            t, v = sub[j]
            new[t] += e
            sgn = sgn * (v ** e)
        for idx in reversed(gen_indices):
            s = zeta_gen_apply(phi.cn, phi.variant, idx, s)
        s = s.scale(sgn)
        key = tuple(new)
        prev = out.get(key)
        out[key] = s if prev is None else prev + s
    return SpinorPolynomial(phi.nvars, phi.cn, phi.variant, out)
