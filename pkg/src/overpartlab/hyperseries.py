"""The q-hypergeometric terms alpha, beta, alpha-bar, beta-bar and the series built from them.

Every term is a monomial prefactor times a ratio of Pochhammer products
times a bracket; the bracket is a Laurent polynomial divided by
``1 - (xq)^d``.  A substitution for ``x`` (``x -> x q^t`` or ``x -> 1``) is
applied monomial by monomial while the term is assembled, so shifted
arguments such as ``alpha(xq)`` stay exact without any order loss.

The module also builds the infinite-product sides of the identities, and
the two classical product families used as regressions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .combinatorics import ParameterSet
from .series import (
    EXACT,
    IDENTITY,
    LaurentSeries,
    Monomial,
    Substitution,
    laurent_triple_product,
    pochhammer,
    pochhammer_inverse,
    triple_product,
)


class TermKind(str, enum.Enum):
    ALPHA = "alpha"
    BETA = "beta"
    ALPHABAR = "alphabar"
    BETABAR = "betabar"


@dataclass(frozen=True)
class HyperTermSpec:
    """Which term and which index; ``params.a`` plays no role, and neither does f for the barred kinds."""

    kind: TermKind
    n: int
    params: ParameterSet

    def __post_init__(self):
        object.__setattr__(self, "kind", TermKind(self.kind))
        if self.n < 0:
            raise ValueError("term index must be non-negative")


@dataclass(frozen=True)
class Variant:
    """Formula variant.

    ``bracket_sign`` multiplies the q^(+-nd) correction inside the brackets
    (+1 is the primary form).  ``minus_denominator`` replaces
    ``((xq^(n+1))^d; q^d)_inf`` in the denominator by ``(-(xq^(n+1))^d; q^d)_inf``.
    """

    bracket_sign: int = 1
    minus_denominator: bool = False

    def label(self) -> str:
        if self == PRIMARY:
            return "primary"
        parts = []
        if self.bracket_sign != 1:
            parts.append("negated bracket correction")
        if self.minus_denominator:
            parts.append("minus-sign Pochhammer denominator")
        return ", ".join(parts)


PRIMARY = Variant()
ALTERNATIVES = (Variant(-1, False), Variant(1, True), Variant(-1, True))


class TranscriptionError(AssertionError):
    """A claimed power series came out with negative exponents."""


# ---------------------------------------------------------------------------
# building blocks


class _Builder:
    """Builds monomials and products with a substitution for x applied."""

    def __init__(self, sub: Substitution):
        self.sub = sub

    def mono(self, sign, xe, qe) -> Monomial | None:
        return self.sub.apply_monomial(Monomial(sign, xe, qe))

    def poly(self, terms) -> LaurentSeries:
        out: dict = {}
        for sign, xe, qe in terms:
            m = self.mono(sign, xe, qe)
            if m is not None:
                out[(m.x_exp, m.q_exp)] = out.get((m.x_exp, m.q_exp), 0) + m.sign
        return LaurentSeries(out)

    def poch(self, a, base, n, order, inverse=False) -> LaurentSeries:
        a, base = self.mono(*a), self.mono(*base)
        if a is None:
            return LaurentSeries.one(order)
        if inverse:
            return pochhammer_inverse(a, base, n, order)
        return pochhammer(a, base, n, order)

    def divide(self, s: LaurentSeries, sign, xe, qe, order) -> LaurentSeries:
        m = self.mono(sign, xe, qe)
        if m is None:
            return s.truncate(order)
        return s.divide_binomial(m.sign, m.x_exp, m.q_exp, order)


def _ratio(b: _Builder, d: int, n: int, order, barred: bool, variant: Variant) -> LaurentSeries:
    """The Pochhammer ratio shared by all four terms (a power series of valuation 0)."""
    sh = 2 if barred else 1
    num = b.poch((1, d, sh * d), (1, 0, 2 * d), EXACT, order)
    num = num * b.poch((-1, 0, d), (1, 0, d), n, order)
    num = num * b.poch((-1, d, d * (n + 1)), (1, 0, d), EXACT, order)
    out = num * b.poch((1, 1, sh), (1, 0, 2), EXACT, order, inverse=True)
    out = out * b.poch((1, 0, d), (1, 0, d), n, order, inverse=True)
    den_sign = -1 if variant.minus_denominator else 1
    out = out * b.poch((den_sign, d, d * (n + 1)), (1, 0, d), EXACT, order, inverse=True)
    return out.truncate(order)


def _bracket_numerator(kind: TermKind, n: int, d: int, e: int, f: int, sign: int, branch: str):
    """Numerator terms (sign, x_exp, q_exp) of the bracket over ``1 - (xq)^d``.

    Returns None for the f = e branch, whose bracket is 1.
    """
    X = lambda p: (p, p)  # (xq)^p
    nd = n * d
    if branch == "eq":
        return None
    if kind == TermKind.ALPHA:
        if branch == "lt":
            return [(1, *X(e - f)), (-1, *X(d)),
                    (sign, d, d + nd), (-sign, d + e - f, d + e - f + nd)]
        return [(1, 0, 0), (-1, *X(d + e - f)),
                (sign, e - f, e - f - nd), (-sign, 0, -nd)]
    if branch == "lt":
        return [(1, *X(e - f)), (-1, *X(d)),
                (sign, 0, -nd), (-sign, e - f, e - f - nd)]
    return [(1, 0, 0), (-1, *X(d + e - f)),
            (sign, d + e - f, d + e - f + nd), (-sign, d, d + nd)]


def _branch(f: int, e: int, force: str | None) -> str:
    if force is not None:
        if force not in ("lt", "eq", "gt"):
            raise ValueError("branch must be 'lt', 'eq' or 'gt'")
        return force
    return "lt" if f < e else ("eq" if f == e else "gt")


def _term(kind: TermKind, n: int, d: int, k: int, e: int, f: int, q_order: int,
          sub: Substitution = IDENTITY, variant: Variant = PRIMARY,
          extra: tuple = (1, 0, 0), branch: str | None = None) -> LaurentSeries:
    """``extra`` (a (sign, x_exp, q_exp) triple, before substitution) times the term."""
    if n < 0:
        return LaurentSeries.zero(q_order)
    b = _Builder(sub)
    kind = TermKind(kind)
    r = d * k + e
    quad = r * n * (n + 1)
    sgn = -1 if n % 2 else 1
    if kind == TermKind.ALPHA:
        pre = (sgn, r * n + f - e, (n + 1) * (f - e) + quad)
    elif kind == TermKind.BETA:
        pre = (-sgn, r * n, (e - f) * n + quad)
    elif kind == TermKind.ALPHABAR:
        pre = (sgn, r * n, quad)
    else:
        pre = (-sgn, r * n, quad)
    pre = (pre[0] * extra[0], pre[1] + extra[1], pre[2] + extra[2])
    P = b.mono(*pre)
    if P is None:
        return LaurentSeries.zero(q_order)
    barred = kind in (TermKind.ALPHABAR, TermKind.BETABAR)
    num_terms = None if barred else _bracket_numerator(kind, n, d, e, f, variant.bracket_sign, _branch(f, e, branch))
    num = LaurentSeries.one() if num_terms is None else b.poly(num_terms)
    if num.is_zero():
        return LaurentSeries.zero(q_order)
    vb = num.min_q
    if P.q_exp + vb > q_order:
        return LaurentSeries.zero(q_order)
    br_order = q_order - P.q_exp
    if num_terms is None:
        br = num.truncate(br_order)
    else:
        br = b.divide(num, 1, d, d, br_order)
    R = _ratio(b, d, n, q_order - P.q_exp - vb, barred, variant)
    out = (R * br).mul_monomial(P)
    assert out.q_order >= q_order, "working order too small for hypergeometric term"
    return out.truncate(q_order)


def term_valuation(kind, n, d, k, e, f, sub=IDENTITY, variant=PRIMARY, extra=(1, 0, 0)):
    """Exact q-valuation of a term (None if the term vanishes identically)."""
    b = _Builder(sub)
    kind = TermKind(kind)
    r = d * k + e
    quad = r * n * (n + 1)
    if kind == TermKind.ALPHA:
        pq = (n + 1) * (f - e) + quad
        px = r * n + f - e
    elif kind == TermKind.BETA:
        pq, px = (e - f) * n + quad, r * n
    else:
        pq, px = quad, r * n
    P = b.mono(1, px + extra[1], pq + extra[2])
    if P is None:
        return None
    barred = kind in (TermKind.ALPHABAR, TermKind.BETABAR)
    nt = None if barred else _bracket_numerator(kind, n, d, e, f, variant.bracket_sign, _branch(f, e, None))
    num = LaurentSeries.one() if nt is None else b.poly(nt)
    if num.is_zero():
        return None
    return P.q_exp + num.min_q


def hyper_term(spec: HyperTermSpec, q_order: int, sub: Substitution = IDENTITY,
               variant: Variant = PRIMARY, branch: str | None = None) -> LaurentSeries:
    """One of the four terms at index ``spec.n``, exact through ``q^q_order``."""
    p = spec.params
    return _term(spec.kind, spec.n, p.d, p.k, p.e, p.f, q_order, sub, variant, branch=branch)


# ---------------------------------------------------------------------------
# claimed series


def _check_regime(d: int, e: int, experimental: bool):
    if e != d and 2 * e != d and not experimental:
        raise ValueError(f"claimed solutions are stated for e = d or 2e = d only (got d={d}, e={e}); "
                         "pass experimental=True to evaluate anyway")


def term_cutoff(d: int, k: int, e: int, second: int, q_order: int, shift: int = 0) -> int:
    """Index beyond which every term of a claimed series lies above ``q^q_order``.

    The dominant exponent is ``2(dk+e) binom(n+1, 2)``; the largest negative
    linear correction is at most ``n (|second| + 2d)`` plus a constant.
    """
    r = d * k + e
    lin = abs(second) + 2 * d
    const = 3 * d + abs(second) + 2 * abs(shift) * d + 2 * d
    n = 0
    while r * n * (n + 1) - lin * n - const <= q_order or 2 * r * n + r - lin <= 0:
        n += 1
    return n


def _claimed(d, k, e, f, second, q_order, barred, sub, variant, n_max=None):
    t = sub.t if sub.kind == "xq^t" else 0
    if n_max is None:
        n_max = term_cutoff(d, k, e, second, q_order, t)
        # terms n_max+1 and n_max+2 must lie entirely above the order
        ka, kb = (TermKind.ALPHABAR, TermKind.BETABAR) if barred else (TermKind.ALPHA, TermKind.BETA)
        for extra_n in (n_max + 1, n_max + 2):
            va = term_valuation(ka, extra_n, d, k, e, f, sub, variant, (1, 0, -extra_n * second))
            vb = term_valuation(kb, extra_n, d, k, e, f, sub, variant, (1, second, (extra_n + 1) * second))
            assert (va is None or va > q_order) and (vb is None or vb > q_order), "term cutoff bound violated"
    ka, kb = (TermKind.ALPHABAR, TermKind.BETABAR) if barred else (TermKind.ALPHA, TermKind.BETA)
    out = LaurentSeries.zero(q_order)
    for n in range(n_max + 1):
        out = out + _term(ka, n, d, k, e, f, q_order, sub, variant, extra=(1, 0, -n * second))
        out = out + _term(kb, n, d, k, e, f, q_order, sub, variant, extra=(1, second, (n + 1) * second))
    return out


def u_claimed_raw(d, k, e, f, second, q_order, sub=IDENTITY, variant=PRIMARY,
                  experimental=False, check_power_series=True, n_max=None) -> LaurentSeries:
    """Claimed U series for residue ``f`` and an arbitrary integer second index.

    ``second`` is normally ``d*a + f``; negative values are allowed so that
    boundary indices like ``d*(k-a-1) + e`` at ``a = k`` can be evaluated.
    """
    _check_regime(d, e, experimental)
    out = _claimed(d, k, e, f, second, q_order, False, sub, variant, n_max)
    if check_power_series and not out.is_power_series():
        raise TranscriptionError(f"claimed U series has negative exponents (min q {out.min_q}, min x {out.min_x})")
    return out


def ubar_claimed_raw(d, k, e, second, q_order, sub=IDENTITY, variant=PRIMARY,
                     experimental=False, check_power_series=True, n_max=None) -> LaurentSeries:
    """Claimed Ubar series with second index ``second`` (normally ``d*a + d``)."""
    _check_regime(d, e, experimental)
    out = _claimed(d, k, e, 0, second, q_order, True, sub, variant, n_max)
    if check_power_series and not out.is_power_series():
        raise TranscriptionError(f"claimed Ubar series has negative exponents (min q {out.min_q}, min x {out.min_x})")
    return out


def u_series_claimed(params: ParameterSet, q_order: int, sub: Substitution = IDENTITY,
                     variant: Variant = PRIMARY, experimental: bool = False) -> LaurentSeries:
    """``sum_n alpha^f_n q^(-n(da+f)) + beta^f_n (x q^(n+1))^(da+f)``."""
    p = params
    return u_claimed_raw(p.d, p.k, p.e, p.f, p.second, q_order, sub, variant, experimental)


def ubar_series_claimed(params: ParameterSet, q_order: int, sub: Substitution = IDENTITY,
                        variant: Variant = PRIMARY, experimental: bool = False) -> LaurentSeries:
    """``sum_n alphabar_n q^(-n(da+d)) + betabar_n (x q^(n+1))^(da+d)``."""
    p = params
    return ubar_claimed_raw(p.d, p.k, p.e, p.d * p.a + p.d, q_order, sub, variant, experimental)


# ---------------------------------------------------------------------------
# product sides


def _require_product_regime(d, e):
    if e != d and 2 * e != d:
        raise ValueError(f"product formulas hold for e = d or 2e = d only (got d={d}, e={e})")


def _q(coeffs: dict) -> LaurentSeries:
    return LaurentSeries({(0, j): c for j, c in coeffs.items()})


def _ratio_over_1_minus_qd(num: dict, d: int, order) -> LaurentSeries:
    return _q(num).divide_binomial(1, 0, d, order)


def u_product_raw(d, k, a, e, f, q_order) -> LaurentSeries:
    """Product side for the U class with second index ``d*a + f`` (any integer a, f)."""
    _require_product_regime(d, e)
    M = 2 * (d * k + e)
    lows = [d * a + e, d * a - d + e, d * a + d + e]
    pad = max(0, -min(lows)) + d
    W = q_order + pad
    den = pochhammer_inverse(Monomial(1, 0, 1), Monomial(1, 0, 2), EXACT, W)
    den = den * pochhammer_inverse(Monomial(1, 0, d), Monomial(1, 0, d), EXACT, W)
    P0 = laurent_triple_product(d * a + e, M, W)
    if f == e:
        out = P0 * den
    elif f < e:
        c1 = _ratio_over_1_minus_qd({0: 1, d + f - e: -1}, d, W)
        c2 = _ratio_over_1_minus_qd({d + f - e: 1, d: -1}, d, W)
        out = (c1 * P0 + c2 * laurent_triple_product(d * a - d + e, M, W)) * den
    else:
        c1 = _ratio_over_1_minus_qd({f - e: 1, d: -1}, d, W)
        c2 = _ratio_over_1_minus_qd({0: 1, f - e: -1}, d, W)
        out = (c1 * P0 + c2 * laurent_triple_product(d * a + d + e, M, W)) * den
    assert out.q_order >= q_order, "working order too small for product side"
    out = out.truncate(q_order)
    if not out.is_power_series():
        raise TranscriptionError("product side has negative exponents")
    return out


def u_product_closed_form(params: ParameterSet, q_order: int) -> LaurentSeries:
    """Infinite-product side for the U class (univariate in q)."""
    p = params
    if not 1 <= p.f <= p.d:
        raise ValueError("product side needs 1 <= f <= d")
    return u_product_raw(p.d, p.k, p.a, p.e, p.f, q_order)


def ubar_product_raw(d, k, a, e, q_order) -> LaurentSeries:
    _require_product_regime(d, e)
    M = 2 * (d * k + e)
    out = pochhammer(Monomial(-1, 0, d), Monomial(1, 0, d), EXACT, q_order)
    out = out * triple_product(d * a + d, M, q_order)
    out = out * pochhammer_inverse(Monomial(1, 0, 2), Monomial(1, 0, 2), EXACT, q_order)
    out = out * pochhammer_inverse(Monomial(1, 0, d), Monomial(1, 0, 2 * d), EXACT, q_order)
    return out.truncate(q_order)


def ubar_product_closed_form(params: ParameterSet, q_order: int) -> LaurentSeries:
    """Infinite-product side for the Ubar class; f plays no role."""
    p = params
    return ubar_product_raw(p.d, p.k, p.a, p.e, q_order)


def gordon_overpartition_product(k: int, a: int, q_order: int) -> LaurentSeries:
    """``(-q;q)_inf (q^a, q^(2k-a), q^(2k); q^(2k))_inf / (q;q)_inf`` for 1 <= a <= k."""
    out = pochhammer(Monomial(-1, 0, 1), Monomial(1, 0, 1), EXACT, q_order)
    out = out * laurent_triple_product(a, 2 * k, q_order)
    out = out * pochhammer_inverse(Monomial(1, 0, 1), Monomial(1, 0, 1), EXACT, q_order)
    return out.truncate(q_order)


def parity_overpartition_products(k: int, a: int, q_order: int) -> dict:
    """The three product sides of the d = 2 parity overpartition theorem.

    Keys: ``"even"`` (U with even second index 2a), ``"odd"`` (U with odd
    second index 2a-1, a two-product combination) and ``"barred"``.
    """
    W = q_order + 2
    base = pochhammer(Monomial(-1, 0, 1), Monomial(1, 0, 1), EXACT, W)
    base = base * pochhammer_inverse(Monomial(1, 0, 2), Monomial(1, 0, 2), EXACT, W)
    even = base * laurent_triple_product(2 * a, 4 * k, W)
    lower = base * laurent_triple_product(2 * a - 2, 4 * k, W)
    odd = (even + lower.mul_monomial(Monomial(1, 0, 1))).divide_binomial(-1, 0, 1, W)
    barred = pochhammer(Monomial(-1, 0, 2), Monomial(1, 0, 2), EXACT, W) ** 2
    barred = barred * laurent_triple_product(2 * a, 4 * k, W)
    barred = barred * pochhammer_inverse(Monomial(1, 0, 2), Monomial(1, 0, 2), EXACT, W)
    return {key: s.truncate(q_order) for key, s in (("even", even), ("odd", odd), ("barred", barred))}
