"""Exact truncated bivariate Laurent series in ``x`` and ``q``.

A :class:`LaurentSeries` stores a dense integer block of coefficients
(rows are x-degrees, columns are q-degrees) together with a truncation order:
every coefficient of q-degree at most ``q_order`` is exact, nothing above it
is known.  Exact polynomials carry ``q_order = EXACT`` (infinity).

Orders propagate the way they do for Laurent series: multiplying a series
known through ``q^N`` by one of valuation ``v`` is known through ``q^(N+v)``.
For power series (valuation 0) this is the familiar "minimum of the orders".
"""

from __future__ import annotations

import io
import math
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from . import _kernels

EXACT = math.inf


class Monomial(NamedTuple):
    """``sign * x**x_exp * q**q_exp``."""

    sign: int
    x_exp: int
    q_exp: int

    def __mul__(self, other):  # type: ignore[override]
        if isinstance(other, Monomial):
            return Monomial(self.sign * other.sign, self.x_exp + other.x_exp, self.q_exp + other.q_exp)
        return NotImplemented

    def __neg__(self):
        return Monomial(-self.sign, self.x_exp, self.q_exp)

    def __pow__(self, k: int):
        return Monomial(self.sign**k, self.x_exp * k, self.q_exp * k)


def xq(x_exp: int = 0, q_exp: int = 0, sign: int = 1) -> Monomial:
    return Monomial(sign, x_exp, q_exp)


class Substitution(NamedTuple):
    """A substitution for ``x``: ``x -> x q^t``, ``x -> q^t``, ``x -> 0`` or ``x -> 1``."""

    kind: str
    t: int = 0

    @classmethod
    def shift(cls, t: int = 1) -> "Substitution":
        return cls("xq^t", t)

    @classmethod
    def q_power(cls, t: int) -> "Substitution":
        return cls("q^t", t)

    @classmethod
    def zero(cls) -> "Substitution":
        return cls("0")

    @classmethod
    def one(cls) -> "Substitution":
        return cls("1")

    def apply(self, x_exp: int, q_exp: int):
        """Image of ``x^x_exp q^q_exp``, or None if it vanishes."""
        if self.kind == "xq^t":
            return x_exp, q_exp + self.t * x_exp
        if self.kind == "q^t":
            return 0, q_exp + self.t * x_exp
        if self.kind == "1":
            return 0, q_exp
        if self.kind == "0":
            if x_exp < 0:
                raise ValueError("cannot set x = 0 in a term with a negative power of x")
            return (0, q_exp) if x_exp == 0 else None
        raise ValueError(f"unknown substitution {self.kind!r}")

    def apply_monomial(self, m: Monomial):
        img = self.apply(m.x_exp, m.q_exp)
        return None if img is None else Monomial(m.sign, *img)


IDENTITY = Substitution.shift(0)
X_TO_XQ = Substitution.shift(1)


class NotInvertible(ArithmeticError):
    pass


def _zeros(shape, dtype):
    out = np.zeros(shape, dtype=dtype)
    if dtype == object:
        out[...] = 0
    return out


class LaurentSeries:
    __slots__ = ("_c", "_x_lo", "_q_lo", "_order")

    def __init__(self, coeffs: dict | None = None, q_order=EXACT):
        """Build from a ``{(x_deg, q_deg): coefficient}`` mapping."""
        coeffs = {k: int(v) for k, v in (coeffs or {}).items() if v}
        if q_order != EXACT:
            q_order = int(q_order)
            coeffs = {k: v for k, v in coeffs.items() if k[1] <= q_order}
        if not coeffs:
            self._set(np.zeros((0, 0), np.int64), 0, 0, q_order)
            return
        xs = [k[0] for k in coeffs]
        qs = [k[1] for k in coeffs]
        x_lo, q_lo = min(xs), min(qs)
        big = max(abs(v) for v in coeffs.values()) >= _kernels.INT_LIMIT
        arr = _zeros((max(xs) - x_lo + 1, max(qs) - q_lo + 1), object if big else np.int64)
        for (i, j), v in coeffs.items():
            arr[i - x_lo, j - q_lo] = v
        self._set(arr, x_lo, q_lo, q_order)

    def _set(self, arr, x_lo, q_lo, order):
        self._c = arr
        self._x_lo = int(x_lo)
        self._q_lo = int(q_lo)
        self._order = order

    # -- construction helpers -------------------------------------------------

    @classmethod
    def _make(cls, arr: np.ndarray, x_lo: int, q_lo: int, order) -> "LaurentSeries":
        """Wrap an array, trimming zero borders and anything above the order."""
        if order != EXACT:
            ncols = min(arr.shape[1], int(order) - q_lo + 1) if arr.ndim == 2 else 0
            arr = arr[:, : max(ncols, 0)]
        if arr.size == 0 or not arr.any():
            out = cls.__new__(cls)
            out._set(np.zeros((0, 0), np.int64), 0, 0, order)
            return out
        nz_rows = np.flatnonzero(arr.any(axis=1))
        nz_cols = np.flatnonzero(arr.any(axis=0))
        r0, r1 = nz_rows[0], nz_rows[-1] + 1
        c0, c1 = nz_cols[0], nz_cols[-1] + 1
        arr = arr[r0:r1, c0:c1]
        if arr.dtype == object and _kernels.max_abs(arr) < _kernels.INT_LIMIT:
            arr = arr.astype(np.int64)
        out = cls.__new__(cls)
        out._set(np.ascontiguousarray(arr), x_lo + r0, q_lo + c0, order)
        return out

    @classmethod
    def zero(cls, q_order=EXACT) -> "LaurentSeries":
        return cls(None, q_order)

    @classmethod
    def one(cls, q_order=EXACT) -> "LaurentSeries":
        return cls({(0, 0): 1}, q_order)

    @classmethod
    def from_monomial(cls, m: Monomial, q_order=EXACT) -> "LaurentSeries":
        return cls({(m.x_exp, m.q_exp): m.sign}, q_order)

    @classmethod
    def from_q_coefficients(cls, coeffs: Iterable[int], q_order=None, q_start: int = 0) -> "LaurentSeries":
        """Univariate series ``sum c_j q^(q_start+j)``; order defaults to the last index."""
        coeffs = [int(c) for c in coeffs]
        if q_order is None:
            q_order = q_start + len(coeffs) - 1
        return cls({(0, q_start + j): c for j, c in enumerate(coeffs)}, q_order)

    @classmethod
    def from_table(cls, table: np.ndarray, q_order=None) -> "LaurentSeries":
        """Series with coefficient ``table[m, n]`` at ``x^m q^n``."""
        if q_order is None:
            q_order = table.shape[1] - 1
        return cls._make(np.asarray(table), 0, 0, q_order)

    # -- inspection -------------------------------------------------------------

    @property
    def q_order(self):
        return self._order

    @property
    def is_exact(self) -> bool:
        return self._order == EXACT

    def is_zero(self) -> bool:
        return self._c.size == 0

    @property
    def min_q(self):
        """Lowest stored q-degree (``q_order + 1`` for a zero series)."""
        return self._q_lo if self._c.size else self._order + 1

    @property
    def max_q(self):
        return self._q_lo + self._c.shape[1] - 1 if self._c.size else None

    @property
    def min_x(self):
        return self._x_lo if self._c.size else 0

    @property
    def max_x(self):
        return self._x_lo + self._c.shape[0] - 1 if self._c.size else 0

    @property
    def valuation(self):
        return self.min_q

    def __getitem__(self, key) -> int:
        i, j = key
        r, c = i - self._x_lo, j - self._q_lo
        if self._c.size and 0 <= r < self._c.shape[0] and 0 <= c < self._c.shape[1]:
            return int(self._c[r, c])
        return 0

    def coefficients(self) -> dict:
        """Nonzero coefficients as ``{(x_deg, q_deg): value}``."""
        rows, cols = np.nonzero(self._c)
        return {
            (int(r) + self._x_lo, int(c) + self._q_lo): int(self._c[r, c])
            for r, c in zip(rows.tolist(), cols.tolist())
        }

    def items(self) -> list:
        return sorted(self.coefficients().items())

    def q_coefficients(self, upto: int | None = None) -> list:
        """Coefficients of q^0..q^upto of an x-free power series."""
        if self._c.size and (self.min_x != 0 or self.max_x != 0):
            raise ValueError("series depends on x; substitute a value for x first")
        if upto is None:
            upto = int(self._order)
        return [self[0, j] for j in range(upto + 1)]

    def is_power_series(self) -> bool:
        return self.is_zero() or (self.min_q >= 0 and self.min_x >= 0)

    def __repr__(self):
        terms = []
        for (i, j), v in self.items()[:12]:
            terms.append(f"{v}*x^{i}*q^{j}")
        more = " + ..." if len(self.coefficients()) > 12 else ""
        return f"LaurentSeries({' + '.join(terms) or '0'}{more}; order {self._order})"

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self._order == other._order and self.coefficients() == other.coefficients()

    def __hash__(self):
        return hash((self._order, tuple(self.items())))

    def first_difference(self, other: "LaurentSeries", upto=None):
        """First ``(x_deg, q_deg, self_coeff, other_coeff)`` that differs, scanning by q then x.

        Only q-degrees up to ``upto`` (default: the smaller of the two orders)
        are compared.
        """
        if upto is None:
            upto = min(self._order, other._order)
        a, b = self.coefficients(), other.coefficients()
        keys = sorted({k for k in a.keys() | b.keys() if k[1] <= upto}, key=lambda k: (k[1], k[0]))
        for k in keys:
            if a.get(k, 0) != b.get(k, 0):
                return k[0], k[1], a.get(k, 0), b.get(k, 0)
        return None

    def agrees_with(self, other: "LaurentSeries", upto=None) -> bool:
        return self.first_difference(other, upto) is None

    # -- truncation -------------------------------------------------------------

    def truncate(self, q_order) -> "LaurentSeries":
        """Drop everything above ``q_order`` (never raises the order)."""
        new = min(self._order, q_order)
        return LaurentSeries._make(self._c, self._x_lo, self._q_lo, new)

    def with_order(self, q_order) -> "LaurentSeries":
        """Declare an exact polynomial known only through ``q_order``."""
        return self.truncate(q_order)

    # -- ring operations ----------------------------------------------------------

    def _as_series(self, other) -> "LaurentSeries":
        if isinstance(other, LaurentSeries):
            return other
        if isinstance(other, Monomial):
            return LaurentSeries.from_monomial(other)
        if isinstance(other, (int, np.integer)):
            return LaurentSeries({(0, 0): int(other)})
        raise TypeError(f"cannot combine LaurentSeries with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._as_series(other)
        except TypeError:
            return NotImplemented
        order = min(self._order, other._order)
        if self.is_zero():
            return other.truncate(order)
        if other.is_zero():
            return self.truncate(order)
        x_lo = min(self._x_lo, other._x_lo)
        q_lo = min(self._q_lo, other._q_lo)
        x_hi = max(self.max_x, other.max_x)
        q_hi = max(self.max_q, other.max_q)
        if order != EXACT:
            q_hi = min(q_hi, int(order))
        if q_hi < q_lo:
            return LaurentSeries.zero(order)
        bound = _kernels.max_abs(self._c) + _kernels.max_abs(other._c)
        dtype = np.int64 if bound < _kernels.INT_LIMIT else object
        out = _zeros((x_hi - x_lo + 1, q_hi - q_lo + 1), dtype)
        for s in (self, other):
            r, c = s._x_lo - x_lo, s._q_lo - q_lo
            w = min(s._c.shape[1], out.shape[1] - c)
            if w > 0:
                out[r:r + s._c.shape[0], c:c + w] += s._c[:, :w].astype(dtype)
        return LaurentSeries._make(out, x_lo, q_lo, order)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries._make(-self._c, self._x_lo, self._q_lo, self._order)

    def __sub__(self, other):
        try:
            other = self._as_series(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k: int) -> "LaurentSeries":
        k = int(k)
        if k == 0:
            return LaurentSeries.zero(self._order)
        arr = self._c
        if _kernels.max_abs(arr) * abs(k) >= _kernels.INT_LIMIT:
            arr = arr.astype(object)
        return LaurentSeries._make(arr * k, self._x_lo, self._q_lo, self._order)

    def mul_monomial(self, m: Monomial) -> "LaurentSeries":
        """Multiply by ``m``; the order shifts with the q-exponent."""
        order = self._order + m.q_exp
        c = self._c if m.sign == 1 else -self._c
        return LaurentSeries._make(c, self._x_lo + m.x_exp, self._q_lo + m.q_exp, order)

    def __mul__(self, other):
        if isinstance(other, Monomial):
            return self.mul_monomial(other)
        if isinstance(other, (int, np.integer)):
            return self.scale(int(other))
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        order = min(self._order + other.valuation, other._order + self.valuation)
        if self.is_zero() or other.is_zero():
            return LaurentSeries.zero(order)
        q_lo = self._q_lo + other._q_lo
        full = self._c.shape[1] + other._c.shape[1] - 1
        ncols = full if order == EXACT else min(full, int(order) - q_lo + 1)
        if ncols <= 0:
            return LaurentSeries.zero(order)
        arr = _kernels.conv2d(self._c, other._c, ncols)
        return LaurentSeries._make(arr, self._x_lo + other._x_lo, q_lo, order)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if k < 0:
            return self.invert() ** (-k)
        out = LaurentSeries.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def multiply_binomial(self, c: int, x_exp: int, q_exp: int) -> "LaurentSeries":
        """Multiply by the exact polynomial ``1 - c x^x_exp q^q_exp``."""
        return self - self.mul_monomial(Monomial(1, x_exp, q_exp)).scale(c)

    def divide_binomial(self, c: int, x_exp: int, q_exp: int, q_order=None) -> "LaurentSeries":
        """Divide by ``1 - c x^x_exp q^q_exp`` where ``q_exp > 0`` and ``c`` is ±1.

        An exact input needs an explicit ``q_order`` for the result.
        """
        if q_exp <= 0:
            return self * LaurentSeries({(0, 0): 1, (x_exp, q_exp): -c}).invert(
                q_order if q_order is not None else None)
        if c not in (1, -1):
            raise NotInvertible("only unit binomials can be divided out")
        order = self._order if q_order is None else min(self._order, q_order)
        if order == EXACT:
            raise ValueError("dividing an exact polynomial needs a target q_order")
        if self.is_zero():
            return LaurentSeries.zero(order)
        ncols = int(order) - self._q_lo + 1
        if ncols <= 0:
            return LaurentSeries.zero(order)
        arr, off = _kernels.divide_binomial(self._c, c, x_exp, q_exp, ncols)
        return LaurentSeries._make(arr, self._x_lo - off, self._q_lo, order)

    def invert(self, q_order=None) -> "LaurentSeries":
        """Multiplicative inverse.

        The lowest q-degree must carry a single monomial with coefficient ±1.
        If ``s`` is known through ``q^N`` with valuation ``v``, the inverse is
        known through ``q^(N - 2v)``.
        """
        if self.is_zero():
            raise NotInvertible("zero series has no inverse")
        lead_col = self._c[:, 0]
        rows = np.flatnonzero(lead_col)
        if len(rows) != 1 or abs(int(lead_col[rows[0]])) != 1:
            raise NotInvertible("leading term is not a unit monomial; series is not invertible over Z")
        u = int(lead_col[rows[0]])
        lead = Monomial(u, self._x_lo + int(rows[0]), self._q_lo)
        v = self._q_lo
        order = self._order - 2 * v
        if q_order is not None:
            order = min(order, q_order)
        if order == EXACT:
            raise ValueError("inverting an exact polynomial needs a target q_order")
        # normalise to 1 + (terms of positive q-degree)
        norm = self.mul_monomial(Monomial(u, -lead.x_exp, -v))
        n_cols = int(order) + v + 1  # columns 0..order+v of the normalised inverse
        if n_cols <= 0:
            return LaurentSeries.zero(order)
        c = norm._c
        r0 = norm._x_lo
        ncs = min(c.shape[1], n_cols)
        dtype = object  # coefficients of inverses grow fast; _make downcasts afterwards
        cols = [np.asarray(c[:, j], dtype=dtype) for j in range(ncs)]
        # inverse column t is a polynomial in x; track it as (offset, coeffs)
        inv = [(0, np.ones(1, dtype=dtype))]
        for t in range(1, n_cols):
            acc_lo, acc = None, None
            for j in range(1, min(t, ncs - 1) + 1):
                col = cols[j]
                if not col.any():
                    continue
                lo_b, b = inv[t - j]
                if not b.any():
                    continue
                prod = np.convolve(col, b)
                lo = r0 + lo_b
                if acc is None:
                    acc_lo, acc = lo, prod
                else:
                    new_lo = min(acc_lo, lo)
                    new_hi = max(acc_lo + len(acc), lo + len(prod))
                    buf = np.zeros(new_hi - new_lo, dtype=dtype)
                    buf[acc_lo - new_lo:acc_lo - new_lo + len(acc)] += acc
                    buf[lo - new_lo:lo - new_lo + len(prod)] += prod
                    acc_lo, acc = new_lo, buf
            if acc is None:
                inv.append((0, np.zeros(1, dtype=dtype)))
            else:
                inv.append((acc_lo, -acc))
        x_lo = min(lo for lo, _ in inv)
        x_hi = max(lo + len(arr) for lo, arr in inv)
        out = _zeros((x_hi - x_lo, n_cols), dtype)
        for t, (lo, arr) in enumerate(inv):
            out[lo - x_lo:lo - x_lo + len(arr), t] = arr
        res = LaurentSeries._make(out, x_lo, 0, min(order + v, norm._order))
        return res.mul_monomial(Monomial(u, -lead.x_exp, -v)).truncate(order)

    # -- substitution -------------------------------------------------------------

    def substitute(self, rule: Substitution, x_range: tuple | None = None) -> "LaurentSeries":
        """Apply a substitution for ``x``.

        For ``x -> x q^t`` and ``x -> q^t`` on a truncated series the unseen
        terms above the order matter too: a term x^m q^n with n > order moves
        to q^(n + t m).  ``x_range = (lo, hi)`` bounds m over the whole series
        (``hi`` may be None); the default ``(0, None)`` fits generating
        functions.  The order drops by whatever the bound allows.
        """
        order = self._order
        if self.is_zero():
            return LaurentSeries.zero(order)
        if rule.kind == "0":
            if self.min_x < 0:
                raise ValueError("cannot set x = 0 in a series with negative powers of x")
            if self.min_x > 0:
                return LaurentSeries.zero(order)
            return LaurentSeries._make(self._c[:1].copy(), 0, self._q_lo, order)
        if rule.kind == "1":
            return LaurentSeries._make(self._c.sum(axis=0, keepdims=True), 0, self._q_lo, order)
        if rule.kind in ("xq^t", "q^t"):
            t = rule.t
            if order != EXACT and t != 0:
                lo, hi = (0, None) if x_range is None else x_range
                if self.min_x < lo or (hi is not None and self.max_x > hi):
                    raise ValueError(f"x-degrees {self.min_x}..{self.max_x} fall outside the assumed range "
                                     f"{lo}..{hi}; pass x_range covering the whole series")
                if t > 0:
                    order = order + min(0, t * lo)
                elif hi is None:
                    raise ValueError("x -> x q^t with t < 0 on a truncated series needs an upper x bound")
                else:
                    order = order + min(0, t * hi)
            rows, width = self._c.shape
            shifts = [t * (self._x_lo + r) for r in range(rows)]
            base = min(shifts)
            span = max(shifts) - base + width
            out = _zeros((rows, span), self._c.dtype)
            for r in range(rows):
                s = shifts[r] - base
                out[r, s:s + width] = self._c[r]
            res = LaurentSeries._make(out, self._x_lo, self._q_lo + base, order)
            if rule.kind == "q^t":
                return res.substitute(Substitution.one())
            return res
        raise ValueError(f"unknown substitution {rule.kind!r}")

    # -- output ---------------------------------------------------------------------

    def csv_rows(self) -> Iterator[tuple]:
        for (i, j), v in self.items():
            yield i, j, v

    def to_csv(self, header: bool = False) -> str:
        buf = io.StringIO()
        if header:
            buf.write("x_deg,q_deg,coefficient\n")
        for i, j, v in self.csv_rows():
            buf.write(f"{i},{j},{v}\n")
        return buf.getvalue()


def series_sum(terms: Iterable[LaurentSeries], q_order=EXACT) -> LaurentSeries:
    out = LaurentSeries.zero(q_order)
    for t in terms:
        out = out + t
    return out


# ---------------------------------------------------------------------------
# products and theta sums


def _factor_list(a: Monomial, base: Monomial, n):
    """Factors ``(c, x_exp, q_exp)`` of (a; base)_n, stopping at None for infinite n."""
    t = 0
    while n == EXACT or t < n:
        yield a.sign * base.sign**t, a.x_exp + t * base.x_exp, a.q_exp + t * base.q_exp
        t += 1


def pochhammer(a: Monomial, base: Monomial, n, q_order) -> LaurentSeries:
    """``(a; base)_n = prod_{j<n} (1 - a base^j)`` truncated at ``q_order``.

    ``n`` may be ``EXACT`` (infinity), in which case the base must have
    positive q-degree.  A factor equal to 0 makes the result exactly zero.
    """
    if n != EXACT and n < 0:
        raise ValueError("negative length Pochhammer symbols are not supported")
    if n == EXACT and base.q_exp <= 0:
        raise ValueError("infinite Pochhammer product needs a base of positive q-degree")
    if n == EXACT and q_order == EXACT:
        raise ValueError("an infinite product needs a finite q_order")
    if n == EXACT:
        # factors of negative q-degree can pull later terms down; account for them
        neg = 0
        t = 0
        while a.q_exp + t * base.q_exp < 0:
            neg += a.q_exp + t * base.q_exp
            t += 1
        work = q_order - neg
    else:
        work = q_order - sum(min(0, a.q_exp + t * base.q_exp) for t in range(int(n)))
    out = LaurentSeries.one()
    for c, xe, qe in _factor_list(a, base, n):
        if n == EXACT and qe > work:
            break
        if xe == 0 and qe == 0:
            if c == 1:
                return LaurentSeries.zero()
            out = out.scale(1 - c)
            continue
        out = out.multiply_binomial(c, xe, qe).truncate(work)
    return out.truncate(q_order)


def pochhammer_inverse(a: Monomial, base: Monomial, n, q_order) -> LaurentSeries:
    """``1 / (a; base)_n`` truncated at ``q_order``; every factor needs positive q-degree."""
    if n == EXACT and base.q_exp <= 0:
        raise ValueError("infinite Pochhammer product needs a base of positive q-degree")
    if q_order == EXACT:
        raise ValueError("an inverse product needs a finite q_order")
    out = LaurentSeries.one(q_order)
    for c, xe, qe in _factor_list(a, base, n):
        if qe <= 0:
            raise ValueError("inverse Pochhammer product needs factors of positive q-degree")
        if qe > q_order:
            if n == EXACT:
                break
            continue
        out = out.divide_binomial(c, xe, qe)
    return out


def triple_product(shift: int, modulus: int, q_order) -> LaurentSeries:
    """``(q^shift, q^(modulus-shift), q^modulus; q^modulus)_inf``."""
    if not 0 < shift < modulus:
        raise ValueError(f"triple_product needs 0 < shift < modulus, got shift={shift}, modulus={modulus}")
    return laurent_triple_product(shift, modulus, q_order)


def laurent_triple_product(shift: int, modulus: int, q_order) -> LaurentSeries:
    """Same product for any integer shift (zero or Laurent when shift is outside (0, modulus))."""
    base = Monomial(1, 0, modulus)
    out = pochhammer(Monomial(1, 0, shift), base, EXACT, q_order)
    if out.is_zero() and out.is_exact:
        return out
    out = out * pochhammer(Monomial(1, 0, modulus - shift), base, EXACT, q_order)
    if out.is_zero() and out.is_exact:
        return out
    return (out * pochhammer(base, base, EXACT, q_order)).truncate(q_order)


def theta_index_range(quad: int, lin: int, q_order: int) -> tuple[int, int]:
    """Smallest window of n with ``quad*n(n+1)/2 + lin*n <= q_order``.

    Outside the window every exponent exceeds ``q_order`` because the exponent
    is a convex quadratic in n; the bound is checked before returning.
    """
    def expo(n):
        return quad * n * (n + 1) // 2 + lin * n

    # roots of quad/2 n^2 + (quad/2 + lin) n - q_order
    b = quad / 2 + lin
    disc = b * b + 2 * quad * q_order
    if disc < 0:
        vertex = round(-b / quad)
        return vertex, vertex - 1  # empty
    root = math.sqrt(disc)
    lo = math.floor((-b - root) / quad) - 1
    hi = math.ceil((-b + root) / quad) + 1
    while lo <= hi and expo(lo) > q_order:
        lo += 1
    while hi >= lo and expo(hi) > q_order:
        hi -= 1
    assert expo(lo - 1) > q_order and expo(hi + 1) > q_order, "theta cutoff bound violated"
    return lo, hi


def bilateral_theta(quad: int, lin: int, q_order: int, n_bound: int | None = None) -> LaurentSeries:
    """``sum_{n in Z} (-1)^n q^(quad*binom(n+1,2) + lin*n)`` through ``q^q_order``.

    ``n_bound`` overrides the derived index window with ``|n| <= n_bound``.
    """
    if quad <= 0:
        raise ValueError("bilateral_theta needs a positive quadratic coefficient")
    if n_bound is None:
        lo, hi = theta_index_range(quad, lin, q_order)
    else:
        lo, hi = -n_bound, n_bound
    coeffs: dict = {}
    for n in range(lo, hi + 1):
        e = quad * n * (n + 1) // 2 + lin * n
        if e <= q_order:
            coeffs[(0, e)] = coeffs.get((0, e), 0) + (-1) ** (n & 1)
    return LaurentSeries(coeffs, q_order)
