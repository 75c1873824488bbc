"""The K-type lattice recurrence system for intertwiner multiplicities.

Intertwining operators between the two principal series are encoded by
scalars s_{i,j} on the triangular lattice {0 <= j <= i}; three families of
exact linear relations couple neighboring points.  Solving the truncated
system over Q(sqrt(-1)) reproduces the multiplicity jump from 2 to 3 on the
special parameter set and the composition-factor multiplicity tables, via
vanishing patterns that select quotients and subrepresentations.
"""

from fractions import Fraction

from .paramfield import (GaussianRational, ParamScalar, rat,
                         PS_LAM, PS_NU, PS_I, evaluate)
from .monogenics import lambda_constant, NotAdjacent, _split_label, _adjacent_move
from . import linalg


class BadDepth(ValueError):
    pass


def rho(n):
    return Fraction(n, 2)


def rho_h(n):
    return Fraction(n - 1, 2)


def casimir_difference(n, alpha, beta, primed=False):
    """Casimir eigenvalue difference sigma_beta - sigma_alpha for one move.

    The primed variant is the same table one dimension down (the subgroup's
    K-types).
    """
    mv = _adjacent_move(alpha, beta)
    if mv is None:
        raise NotAdjacent("labels %r, %r are not adjacent" % (alpha, beta))
    i = _split_label(alpha)[0]
    dim = n - 1 if primed else n
    if mv[0] == 1:
        return 2 * i + dim + 1
    if mv[0] == -1:
        return -2 * i - dim + 1
    return 0


def general_identity_instance(n, alpha, alphap, betap):
    """One instance of the general scalar identity, with symbolic lam, nu.

    Returns {label: ParamScalar} representing sum_label coeff * t_label = 0,
    where label = (alpha, alphap) for the left side and (beta, betap) for
    every adjacent beta containing betap.
    """
    mvp = _adjacent_move(alphap, betap)
    if mvp is None:
        raise NotAdjacent("alphap and betap are not adjacent")
    i, si = _split_label(alpha)
    jp, sjp = _split_label(betap)
    out = {}
    lhs = (PS_NU * 2 + ParamScalar.coerce(casimir_difference(n, alphap, betap,
                                                             primed=True)))
    out[(alpha, alphap)] = lhs
    if n % 2 == 0:
        betas = [(i + 1, si), (i, -si), (i - 1, si)]
    else:
        betas = [i + 1, i, i - 1]
    for beta in betas:
        ib = _split_label(beta)[0]
        if ib < 0 or jp > ib:
            continue
        try:
            lam = lambda_constant(n, alpha, alphap, beta, betap)
        except NotAdjacent:
            continue
        coeff = lam * (PS_LAM * 2 + ParamScalar.coerce(
            casimir_difference(n, alpha, beta)))
        key = (beta, betap)
        out[key] = out.get(key, ParamScalar.coerce(0)) - coeff
    return out


def scalar_identity_display(n, i, j, which, sign):
    """The three displayed t-coefficient identities for even n, as printed.

    which is 1, 2 or 3 (target degree j+1, j or j-1); sign is the +-1 carried
    by alpha = (i, sign).  Returned as {label: ParamScalar} with the same
    normalization as the printed displays (denominators cleared).
    """
    if n % 2:
        raise NotAdjacent("displays are stated for even n")
    s = sign
    L, N = PS_LAM, PS_NU
    c = ParamScalar.coerce
    r, rh = rat(n) / 2, rat(n - 1) / 2
    lam_up = L + c(rat(r) + rat("1/2") + i)
    lam_dn = L - c(rat(r) - rat("1/2") + i)
    out = {}
    if which == 1:
        out[((i, s), j)] = c((n + 2 * i - 1) * (n + 2 * i + 1)) * \
            (N + c(rat(rh) + rat("1/2") + j))
        out[((i + 1, s), j + 1)] = -c((n + 2 * i - 1) * (n + 2 * j - 1)) * lam_up
        out[((i, -s), j + 1)] = -c(2 * (n + 2 * j - 1) * s) * PS_I * L
        out[((i - 1, s), j + 1)] = c((n + 2 * i + 1) * (n + 2 * j - 1)) * lam_dn
    elif which == 2:
        out[((i, s), j)] = c((n + 2 * i - 1) * (n + 2 * i + 1)) * N
        out[((i + 1, s), j)] = c((i - j + 1) * (n + 2 * i - 1) * s) * PS_I * lam_up
        out[((i, -s), j)] = -c((n + 2 * i) * (n + 2 * j - 1)) * L
        out[((i - 1, s), j)] = -c((n + 2 * i + 1) * (n + i + j - 1) * s) * PS_I * lam_dn
    elif which == 3:
        out[((i, s), j)] = c((n + 2 * i - 1) * (n + 2 * i + 1) * (n + 2 * j - 3)) * \
            (N - c(rat(rh) - rat("1/2") + j))
        out[((i + 1, s), j - 1)] = c((i - j + 1) * (i - j + 2) * (n + 2 * i - 1)) * lam_up
        out[((i, -s), j - 1)] = -c(2 * (i - j + 1) * (n + i + j - 1) * s) * PS_I * L
        out[((i - 1, s), j - 1)] = -c((n + 2 * i + 1) * (n + i + j - 2) * (n + i + j - 1)) * lam_dn
    else:
        raise ValueError("which must be 1, 2 or 3")
    return {k: v for k, v in out.items()
            if not v.is_zero() and 0 <= k[1] <= k[0][0]}


# -- the sector systems ---------------------------------------------------------

def _sector_rows(n, i, j, sigma):
    """Symbolic coefficient rows of the three sector identities at (i, j).

    Each row is {(k, l): ParamScalar}; invalid neighbor indices are dropped.
    sigma = +-1 selects the sector.
    """
    c = ParamScalar.coerce
    L, N = PS_LAM, PS_NU
    r, rh = Fraction(n, 2), Fraction(n - 1, 2)
    lam_up = L + c(rat(r + Fraction(1, 2) + i))
    lam_dn = L - c(rat(r - Fraction(1, 2) + i))
    even = n % 2 == 0
    sgn = sigma * (-1) ** (i - j)
    rows = []
    # family 1: couples (i, j) to degree j+1 neighbors
    row = {(i, j): c((n + 2 * i - 1) * (n + 2 * i + 1)) *
           (N + c(rat(rh + Fraction(1, 2) + j)))}
    row[(i + 1, j + 1)] = -c((n + 2 * i - 1) * (n + 2 * j - 1)) * lam_up
    if j + 1 <= i:
        mid = c(2 * (n + 2 * j - 1)) * L
        row[(i, j + 1)] = (sgn * PS_I * mid if even else mid)
    if j + 1 <= i - 1:
        row[(i - 1, j + 1)] = c((n + 2 * i + 1) * (n + 2 * j - 1)) * lam_dn
    rows.append(row)
    # family 2: horizontal neighbors
    lead = c((n + 2 * i - 1) * (n + 2 * i + 1)) * N - \
        c(sgn * (n + 2 * i) * (n + 2 * j - 1)) * L
    row = {(i, j): lead}
    up = c((i - j + 1) * (n + 2 * i - 1)) * lam_up
    dn = c((n + 2 * i + 1) * (n + i + j - 1)) * lam_dn
    if even:
        row[(i + 1, j)] = PS_I * up
        if i - 1 >= j:
            row[(i - 1, j)] = -PS_I * dn
    else:
        row[(i + 1, j)] = c(sgn) * up
        if i - 1 >= j:
            row[(i - 1, j)] = -c(sgn) * dn
    rows.append(row)
    # family 3: couples (i, j) to degree j-1 neighbors
    if j >= 1:
        row = {(i, j): c((n + 2 * i - 1) * (n + 2 * i + 1) * (n + 2 * j - 3)) *
               (N - c(rat(rh - Fraction(1, 2) + j)))}
        row[(i + 1, j - 1)] = c((i - j + 1) * (i - j + 2) * (n + 2 * i - 1)) * lam_up
        mid = c(2 * (i - j + 1) * (n + i + j - 1)) * L
        row[(i, j - 1)] = (sgn * PS_I * mid if even else mid)
        if i - 1 >= j - 1:
            row[(i - 1, j - 1)] = -c((n + 2 * i + 1) * (n + i + j - 2) *
                                     (n + i + j - 1)) * lam_dn
        rows.append(row)
    return rows


class LatticeSystem:
    """Truncated linear system in the sector scalars s_{i,j}."""

    __slots__ = ("n", "lam0", "nu0", "sign", "depth", "constraints", "region")

    def __init__(self, n, lam0, nu0, sign, depth, constraints, region=None):
        self.n = n
        self.lam0 = lam0
        self.nu0 = nu0
        self.sign = sign
        self.depth = depth
        self.constraints = constraints
        self.region = region


class SolutionSpace:
    __slots__ = ("dim", "basis", "stabilized")

    def __init__(self, dim, basis, stabilized):
        self.dim = dim
        self.basis = basis
        self.stabilized = stabilized


def build_system(n, lam0, nu0, sign, depth, region=None):
    """Instantiate all three identity families inside the depth-truncated
    triangle at exact rational parameters.

    A constraint is kept only when every lattice point it references lies in
    the triangle; region (a predicate) restricts the free unknowns, points
    outside it are pinned to zero.
    """
    if depth < 2:
        raise BadDepth("depth must be >= 2")
    lam0 = GaussianRational.coerce(rat(lam0) if not isinstance(lam0, GaussianRational) else lam0)
    nu0 = GaussianRational.coerce(rat(nu0) if not isinstance(nu0, GaussianRational) else nu0)
    sigma = 1 if sign in (1, "+", "plus") else -1
    constraints = []
    for i in range(depth + 1):
        for j in range(i + 1):
            if i + 1 > depth:
                continue
            for row in _sector_rows(n, i, j, sigma):
                num = {}
                for key, coeff in row.items():
                    k, l = key
                    if not (0 <= l <= k):
                        continue
                    if region is not None and not region(k, l):
                        continue  # pinned to zero
                    v = evaluate(coeff, lam0, nu0)
                    if not v.is_zero():
                        num[key] = v
                if num:
                    constraints.append(num)
    return LatticeSystem(n, lam0, nu0, sigma, depth, constraints, region)


def _solve(system):
    idx = {}
    for i in range(system.depth + 1):
        for j in range(i + 1):
            if system.region is None or system.region(i, j):
                idx[(i, j)] = len(idx)
    rows = []
    for con in system.constraints:
        row = {}
        for key, v in con.items():
            if key in idx:
                row[idx[key]] = v
        if row:
            rows.append(row)
    basis = linalg.nullspace(rows, len(idx))
    inv = {v: k for k, v in idx.items()}
    sols = [{inv[c]: val for c, val in vec.items()} for vec in basis]
    return sols


def solve_dimension(system):
    """Exact nullspace of the truncated system, with a stabilization flag
    from re-solving one depth higher."""
    sols = _solve(system)
    bigger = build_system(system.n, system.lam0, system.nu0, system.sign,
                          system.depth + 1, system.region)
    stab = len(_solve(bigger)) == len(sols)
    return SolutionSpace(len(sols), sols, stab)


def on_special_set(n, lam0, nu0):
    """True when (lam0, nu0) sits on the multiplicity-3 parameter set."""
    lam0, nu0 = rat(lam0), rat(nu0)
    a = -(lam0 + rat(rho(n)) + rat("1/2"))
    b = -(nu0 + rat(rho_h(n)) + rat("1/2"))
    if a.denominator != 1 or b.denominator != 1:
        return False
    i, j = int(a), int(b)
    return 0 <= j <= i


def multiplicity(n, lam0, nu0, depth=12):
    """Per-sector and total solution dimensions at one parameter point."""
    out = {}
    total = 0
    stab = True
    for sign, key in ((1, "dim_plus"), (-1, "dim_minus")):
        sol = solve_dimension(build_system(n, lam0, nu0, sign, depth))
        out[key] = sol.dim
        total += sol.dim
        stab = stab and sol.stabilized
    out["total"] = total
    out["stabilized"] = stab
    out["on_lattice"] = on_special_set(n, lam0, nu0)
    return out


# -- composition factor multiplicities ------------------------------------------

_PAIRS = ("FF", "FT", "TF", "TT")


def composition_multiplicity(n, i, j, parity, pair, depth=12, stabilize=True):
    """Multiplicity of maps between irreducible constituents at reducibility.

    pair is 'FF', 'FT', 'TF' or 'TT' (source factor F(i) or T(i), target
    F'(j) or T'(j)); parity is delta+epsilon mod 2.  The factor is realized
    as a quotient of the full module at the sign of the induction parameter
    where it is a quotient, the target as a subrepresentation, and the
    lattice system is solved with the matching support pattern.
    """
    if depth <= i + j + 2:
        raise BadDepth("depth must exceed i + j + 2")
    if pair not in _PAIRS:
        raise ValueError("pair must be one of %r" % (_PAIRS,))
    lam_mag = rat(rho(n)) + rat("1/2") + i
    nu_mag = rat(rho_h(n)) + rat("1/2") + j
    src_F = pair[0] == "F"
    dst_F = pair[1] == "F"
    lam0 = lam_mag if src_F else -lam_mag
    nu0 = -nu_mag if dst_F else nu_mag
    # realizing F as a quotient and T' as a subrepresentation flips one
    # parity each; the sector carries the net flip
    p = (parity + (1 if src_F else 0) + (0 if dst_F else 1)) % 2
    sign = 1 if p == 0 else -1
    if src_F:
        row_ok = lambda k: k <= i
    else:
        row_ok = lambda k: k > i
    if dst_F:
        col_ok = lambda l: l <= j
    else:
        col_ok = lambda l: l > j
    region = lambda k, l: row_ok(k) and col_ok(l)
    system = build_system(n, lam0, nu0, sign, depth, region)
    if not stabilize:
        return len(_solve(system))
    return solve_dimension(system).dim


def composition_table(n, imax, jmax, depth=12):
    """All four multiplicities for i <= imax, j <= jmax and both parities."""
    rows = []
    for i in range(imax + 1):
        for j in range(jmax + 1):
            for parity in (0, 1):
                entry = {"n": n, "i": i, "j": j, "parity": parity}
                for pair in _PAIRS:
                    entry[pair] = composition_multiplicity(n, i, j, parity,
                                                           pair, depth,
                                                           stabilize=False)
                rows.append(entry)
    return rows


def expected_composition(i, j, parity):
    """The two multiplicity tables: {pair: dim} at (i, j, delta+epsilon)."""
    if 0 <= j <= i and (i + j) % 2 == parity % 2:
        return {"FF": 1, "FT": 0, "TF": 0, "TT": 1}
    return {"FF": 0, "FT": 0, "TF": 1, "TT": 0}


# -- consistency with the t-coefficient system ----------------------------------

def build_t_system(n, lam0, nu0, depth):
    """The untwisted system in the doubled unknowns t_{alpha,alphap}.

    Used to cross-check that the sector reduction preserves total dimension.
    """
    lam0 = GaussianRational.coerce(rat(lam0))
    nu0 = GaussianRational.coerce(rat(nu0))
    idx = {}
    even = n % 2 == 0
    for i in range(depth + 1):
        for j in range(i + 1):
            for s in (1, -1):
                lbl = ((i, s), j) if even else (i, (j, s))
                idx[lbl] = len(idx)
    rows = []
    for i in range(depth):
        for j in range(i + 1):
            for s in (1, -1):
                alpha, alphap = ((i, s), j) if even else (i, (j, s))
                for dj in (1, 0, -1):
                    if even:
                        betaps = [j + dj] if dj else [j]
                    else:
                        betaps = [(j + dj, s)] if dj else [(j, -s)]
                    for betap in betaps:
                        jb = _split_label(betap)[0]
                        if jb < 0:
                            continue
                        try:
                            con = general_identity_instance(n, alpha, alphap, betap)
                        except NotAdjacent:
                            continue
                        row = {}
                        for lbl, coeff in con.items():
                            kb, lb = _split_label(lbl[0])[0], _split_label(lbl[1])[0]
                            if not (0 <= lb <= kb):
                                continue
                            if kb > depth:
                                row = None
                                break
                            v = evaluate(coeff, lam0, nu0)
                            if not v.is_zero():
                                row[idx[lbl]] = v
                        if row:
                            rows.append(row)
    return rows, len(idx)


def t_system_dimension(n, lam0, nu0, depth):
    rows, ncols = build_t_system(n, lam0, nu0, depth)
    return len(linalg.nullspace(rows, ncols))
