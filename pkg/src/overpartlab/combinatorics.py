"""Overpartitions, the frequency-defined classes, and the 1-deletion bijection.

Class membership is expressed in two independent ways:

* :func:`satisfies` evaluates the defining conditions literally on one
  overpartition (the slow oracle), and
* :func:`count_table` counts a whole class by dynamic programming over part
  values, using per-part rules plus the consecutive-pair inequality.

Classes are addressed by a :class:`ClassSpec` holding the modulus ``d`` and
the two class indices explicitly.  The helpers :func:`class_spec` and
:func:`u_spec` build them from a :class:`ParameterSet`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import numpy as np

from . import _kernels
from .series import LaurentSeries


# ---------------------------------------------------------------------------
# overpartitions


class Overpartition:
    """An overpartition stored as frequencies.

    ``freq[i]`` is the number of plain copies of ``i`` and ``over`` holds the
    part values whose first occurrence is overlined.
    """

    __slots__ = ("_freq", "_over", "_key")

    def __init__(self, freq: dict | None = None, over=()):
        f = {int(i): int(c) for i, c in (freq or {}).items() if c}
        o = frozenset(int(i) for i in over)
        for i, c in f.items():
            if i < 1 or c < 0:
                raise ValueError(f"invalid frequency {c} for part {i}")
        for i in o:
            if i < 1:
                raise ValueError(f"invalid overlined part {i}")
        self._freq = f
        self._over = o
        self._key = (tuple(sorted(f.items())), tuple(sorted(o)))

    @classmethod
    def from_parts(cls, parts, overlined=()) -> "Overpartition":
        """Plain parts as a list, overlined parts as a collection of distinct values."""
        freq: dict = {}
        for p in parts:
            freq[p] = freq.get(p, 0) + 1
        over = list(overlined)
        if len(set(over)) != len(over):
            raise ValueError("each part value can be overlined at most once")
        return cls(freq, over)

    @classmethod
    def parse(cls, text: str) -> "Overpartition":
        """Inverse of :meth:`__str__`, e.g. ``"4~+4+1"``."""
        text = text.strip()
        if text in ("", "()"):
            return cls()
        plain, over = [], []
        for tok in text.split("+"):
            tok = tok.strip()
            if tok.endswith("~"):
                over.append(int(tok[:-1]))
            else:
                plain.append(int(tok))
        return cls.from_parts(plain, over)

    def f(self, i: int) -> int:
        return self._freq.get(i, 0)

    def fbar(self, i: int) -> int:
        return 1 if i in self._over else 0

    @property
    def largest(self) -> int:
        return max([*self._freq, *self._over], default=0)

    def weight(self) -> int:
        return sum(i * c for i, c in self._freq.items()) + sum(self._over)

    def parts(self) -> int:
        return sum(self._freq.values()) + len(self._over)

    def as_list(self) -> list:
        """Parts in non-increasing order as ``(value, overlined)`` pairs."""
        out = []
        for i in sorted({*self._freq, *self._over}, reverse=True):
            if i in self._over:
                out.append((i, True))
            out.extend([(i, False)] * self._freq.get(i, 0))
        return out

    def sort_key(self):
        return tuple((v, 1 if o else 0) for v, o in self.as_list())

    def __str__(self):
        items = self.as_list()
        if not items:
            return "()"
        return "+".join(f"{v}~" if o else str(v) for v, o in items)

    def __repr__(self):
        return f"Overpartition({str(self)!r})"

    def __eq__(self, other):
        return isinstance(other, Overpartition) and self._key == other._key

    def __hash__(self):
        return hash(self._key)


# ---------------------------------------------------------------------------
# parameters and class tags


class InvalidParameters(ValueError):
    pass


@dataclass(frozen=True)
class ParameterSet:
    """The tuple (d, k, a, e, f) with d >= 1, k >= 1, 0 <= a <= k, 1 <= e <= d, 0 <= f <= d."""

    d: int
    k: int
    a: int
    e: int
    f: int

    def __post_init__(self):
        d, k, a, e, f = self.d, self.k, self.a, self.e, self.f
        checks = [
            (d >= 1, "d >= 1"),
            (k >= 1, "k >= 1"),
            (0 <= a <= k, "0 <= a <= k"),
            (1 <= e <= d, "1 <= e <= d"),
            (0 <= f <= d, "0 <= f <= d"),
        ]
        for ok, text in checks:
            if not ok:
                raise InvalidParameters(f"parameter constraint violated: {text} (got d={d}, k={k}, a={a}, e={e}, f={f})")

    @property
    def first(self) -> int:
        """First class index dk + e (half the product modulus)."""
        return self.d * self.k + self.e

    @property
    def second(self) -> int:
        """Second class index da + f."""
        return self.d * self.a + self.f

    @property
    def regime(self) -> str:
        if self.e == self.d:
            return "e=d"
        if 2 * self.e == self.d:
            return "2e=d"
        return "general"

    def replace(self, **kw) -> "ParameterSet":
        vals = dict(d=self.d, k=self.k, a=self.a, e=self.e, f=self.f)
        vals.update(kw)
        return ParameterSet(**vals)

    def as_dict(self) -> dict:
        return dict(d=self.d, k=self.k, a=self.a, e=self.e, f=self.f)


class ClassTag(str, enum.Enum):
    U = "U"
    UBAR = "Ubar"
    G = "G"
    H = "H"
    GBAR = "Gbar"
    HBAR = "Hbar"
    C = "C"  # two-index gap class of the d = 1 overpartition theorem
    D = "D"  # its congruence counterpart
    ALL = "all"


READINGS = {
    ClassTag.GBAR: ("literal", "all_nonoverlined"),
    ClassTag.HBAR: ("literal", "split"),
}


@dataclass(frozen=True)
class ClassSpec:
    """A class with explicit indices.

    For U/Ubar/G/H/Gbar/Hbar, ``first`` and ``second`` are the two class
    indices (the congruence modulus is ``2*first``).  For C and D they are the
    ``k`` and ``a`` of the d = 1 theorem and ``d`` is ignored.

    ``reading`` picks between alternative readings of an ambiguous class
    description; ``zero_residue_vanishes`` treats a class whose second index
    is a multiple of the modulus as empty (see :func:`count_table`).
    """

    tag: ClassTag
    d: int = 1
    first: int = 1
    second: int = 1
    reading: str = "literal"
    zero_residue_vanishes: bool = False

    def __post_init__(self):
        object.__setattr__(self, "tag", ClassTag(self.tag))
        allowed = READINGS.get(self.tag, ("literal",))
        if self.reading not in allowed:
            raise ValueError(f"reading {self.reading!r} not available for {self.tag.value}; choose from {allowed}")
        if self.d < 1 or self.first < 1:
            raise ValueError("class needs d >= 1 and first index >= 1")

    def label(self) -> str:
        base = f"{self.tag.value}[d={self.d}]({self.first},{self.second})"
        if self.reading != "literal":
            base += f"<{self.reading}>"
        return base


def u_spec(params: ParameterSet, barred: bool = False, second: int | None = None) -> ClassSpec:
    """U or Ubar class of ``params``, optionally with a different second index."""
    tag = ClassTag.UBAR if barred else ClassTag.U
    return ClassSpec(tag, params.d, params.first, params.second if second is None else second)


def class_spec(tag, params: ParameterSet, reading: str = "literal") -> ClassSpec:
    """Class of ``tag`` at ``params``.

    U/Ubar use second index da + f; the congruence classes G, H, Gbar, Hbar use
    da + d; C and D use the d = 1 theorem's (k, a) read from ``params.k``,
    ``params.a``.
    """
    tag = ClassTag(tag)
    if tag in (ClassTag.U, ClassTag.UBAR):
        return ClassSpec(tag, params.d, params.first, params.second)
    if tag in (ClassTag.C, ClassTag.D):
        return ClassSpec(tag, 1, params.k, params.a)
    if tag == ClassTag.ALL:
        return ClassSpec(tag)
    return ClassSpec(tag, params.d, params.first, params.d * params.a + params.d, reading)


# ---------------------------------------------------------------------------
# literal predicates


def _forbidden(l: int, modulus: int, s: int) -> bool:
    return l % modulus in (0, s % modulus, (-s) % modulus)


def _check_u(op: Overpartition, d: int, r: int, s: int, barred: bool) -> bool:
    f, fb = op.f, op.fbar
    if f(1) > s - 1 + (d - 1) * fb(1):
        return False
    top = op.largest + 1
    for l in range(1, top + 1):
        ineq_here = (l % 2 == 1) != barred  # plain: odd l; barred: even l
        if ineq_here:
            if f(l) < (d - 1) * fb(l):
                return False
        elif (f(l) + fb(l)) % d != 0:
            return False
        if f(l) + fb(l) + f(l + 1) > r - 1 + (d - 1) * fb(l + 1):
            return False
    return True


def _plain_ok(spec: ClassSpec, l: int, part: str = "mu") -> bool:
    """Is a non-overlined part l allowed in a congruence class?"""
    d, M, s = spec.d, 2 * spec.first, spec.second
    bad = _forbidden(l, M, s)
    tag = spec.tag
    if tag == ClassTag.G:
        return l % 2 == 1 or (l % d == 0 and not bad)
    if tag == ClassTag.H:
        return l % d == 0 and not bad
    if tag == ClassTag.GBAR:
        if spec.reading == "literal":
            return l % 2 == 0 or (l % d == 0 and (l // d) % 2 == 1 and not bad)
        return (l % 2 == 0 or (l % d == 0 and (l // d) % 2 == 1)) and not bad
    if tag == ClassTag.HBAR:
        odd_mult = l % d == 0 and (l // d) % 2 == 1
        if part == "lambda":
            if l % 2:
                return False
            if spec.reading == "literal":
                return True
            # each forbidden value is removed from exactly one source
            return not bad or odd_mult
        return odd_mult and not bad
    if tag == ClassTag.D:
        k, a = spec.first, spec.second
        if a == k:
            return l % k != 0
        return l % (2 * k) not in (0, a % (2 * k), (-a) % (2 * k))
    raise ValueError(tag)


def _over_ok(spec: ClassSpec, l: int) -> bool:
    tag = spec.tag
    if tag == ClassTag.G:
        return False
    if tag == ClassTag.H:
        return True
    if tag in (ClassTag.GBAR, ClassTag.HBAR):
        return l % spec.d == 0
    if tag == ClassTag.D:
        k, a = spec.first, spec.second
        return l % k != 0 if a == k else True
    raise ValueError(tag)


def _empty_by_degeneracy(spec: ClassSpec) -> bool:
    return (
        spec.zero_residue_vanishes
        and spec.tag in (ClassTag.G, ClassTag.H, ClassTag.GBAR, ClassTag.HBAR)
        and spec.second % (2 * spec.first) == 0
    )


def satisfies_spec(op: Overpartition, spec: ClassSpec) -> bool:
    """Literal membership test.  H̄ is a class of pairs and is not supported here."""
    tag = spec.tag
    if tag == ClassTag.ALL:
        return True
    if tag in (ClassTag.U, ClassTag.UBAR):
        return _check_u(op, spec.d, spec.first, spec.second, tag == ClassTag.UBAR)
    if tag == ClassTag.C:
        k, a = spec.first, spec.second
        if op.f(1) >= a:
            return False
        return all(op.f(i) + op.fbar(i) + op.f(i + 1) < k for i in range(1, op.largest + 2))
    if tag == ClassTag.HBAR:
        raise ValueError("Hbar counts pairs (lambda, mu); use hbar_pair_satisfies")
    if _empty_by_degeneracy(spec):
        return False
    for l in range(1, op.largest + 1):
        if op.f(l) and not _plain_ok(spec, l):
            return False
        if op.fbar(l) and not _over_ok(spec, l):
            return False
    return True


def hbar_pair_satisfies(lam: Overpartition, mu: Overpartition, spec: ClassSpec) -> bool:
    if _empty_by_degeneracy(spec):
        return False
    if any(lam.fbar(l) for l in range(1, lam.largest + 1)):
        return False
    for l in range(1, lam.largest + 1):
        if lam.f(l) and not _plain_ok(spec, l, "lambda"):
            return False
    for l in range(1, mu.largest + 1):
        if mu.f(l) and not _plain_ok(spec, l, "mu"):
            return False
        if mu.fbar(l) and not _over_ok(spec, l):
            return False
    return True


def satisfies(op: Overpartition, tag, params: ParameterSet) -> bool:
    """Does ``op`` belong to the ``tag`` class of ``params``?"""
    return satisfies_spec(op, class_spec(tag, params))


# ---------------------------------------------------------------------------
# rule tables and counting


def _rules(spec: ClassSpec, N: int):
    """``(allowed, cap, w)`` for the counting kernel; cap None means no pair rule."""
    tag = spec.tag
    if tag in (ClassTag.U, ClassTag.UBAR):
        d, r, s = spec.d, spec.first, spec.second
        barred = tag == ClassTag.UBAR
        cap, w = r - 1, d - 1
        F = max(0, min(N, cap + w))
        allowed = np.zeros((N + 1, F + 1, 2), np.bool_)
        for l in range(1, N + 1):
            for fb in range(2):
                for fq in range(F + 1):
                    if l == 1 and fq > s - 1 + (d - 1) * fb:
                        continue
                    if (l % 2 == 1) != barred:
                        ok = fq >= (d - 1) * fb
                    else:
                        ok = (fq + fb) % d == 0
                    allowed[l, fq, fb] = ok
        return allowed, cap, w
    if tag == ClassTag.C:
        k, a = spec.first, spec.second
        F = max(0, min(N, k - 1))
        allowed = np.zeros((N + 1, F + 1, 2), np.bool_)
        allowed[1:, :, :] = True
        allowed[1, a:, :] = False
        if a <= 0:
            allowed[1, 0, 0] = False
        return allowed, k - 1, 0
    if tag == ClassTag.ALL:
        return np.ones((N + 1, N + 1, 2), np.bool_), None, 0
    allowed = np.zeros((N + 1, N + 1, 2), np.bool_)
    for l in range(1, N + 1):
        plain = _plain_ok(spec, l)
        over = _over_ok(spec, l)
        allowed[l, 0, 0] = True
        allowed[l, 1:, 0] = plain
        allowed[l, 0, 1] = over
        allowed[l, 1:, 1] = plain and over
    return allowed, None, 0


def _lambda_rules(spec: ClassSpec, N: int):
    allowed = np.zeros((N + 1, N + 1, 2), np.bool_)
    for l in range(1, N + 1):
        allowed[l, 0, 0] = True
        allowed[l, 1:, 0] = _plain_ok(spec, l, "lambda")
    return allowed


@lru_cache(maxsize=512)
def _table_cached(spec: ClassSpec, N: int) -> np.ndarray:
    if N < 0:
        return np.zeros((0, 0), np.int64)
    if _empty_by_degeneracy(spec):
        out = np.zeros((N + 1, N + 1), np.int64)
    elif spec.tag == ClassTag.HBAR:
        mu = _kernels.count_table(_rules(spec, N)[0], N)
        lam = _kernels.count_table(_lambda_rules(spec, N), N)
        out = _kernels.conv2d(lam, mu, N + 1)[: N + 1]
    else:
        allowed, cap, w = _rules(spec, N)
        out = _kernels.count_table(allowed, N, cap, w)
    out.setflags(write=False)
    return out


def count_table(spec: ClassSpec, max_weight: int) -> np.ndarray:
    """Read-only table ``T[m, n]``: members with m parts and weight n, for n <= max_weight.

    For H̄ the entries count pairs (λ, μ) by total parts and total weight.
    A class flagged ``zero_residue_vanishes`` whose second index is a
    multiple of the modulus counts as empty, matching the vanishing factor
    ``(q^0; q^M)`` of its product.
    """
    return _table_cached(spec, int(max_weight))


def count_class_spec(spec: ClassSpec, m, n: int) -> int:
    if n < 0 or (m is not None and (m < 0 or m > n)):
        return 0
    tab = count_table(spec, n)
    if m is None:
        return int(tab[:, n].sum())
    return int(tab[m, n])


def count_class(tag, params: ParameterSet, m, n: int) -> int:
    """Number of class members with ``m`` parts (None = any number) and weight ``n``."""
    return count_class_spec(class_spec(tag, params), m, n)


def gen_fun_spec(spec: ClassSpec, q_order: int) -> LaurentSeries:
    return LaurentSeries.from_table(count_table(spec, q_order), q_order)


def gen_fun(tag, params: ParameterSet, q_order: int) -> LaurentSeries:
    """Bivariate generating function, x marking parts and q marking weight."""
    return gen_fun_spec(class_spec(tag, params), q_order)


def weight_counts(spec: ClassSpec, max_weight: int) -> list:
    """Counts by weight with any number of parts."""
    tab = count_table(spec, max_weight)
    return [int(v) for v in np.asarray(tab, dtype=object).sum(axis=0)]


# ---------------------------------------------------------------------------
# materializing enumeration


def iter_class(spec: ClassSpec, weight: int) -> Iterator[Overpartition]:
    """Yield the members of weight ``weight``.

    Recursive descent over part values 1, 2, ... with the same local and pair
    rules as the counter, pruning by remaining weight.  H̄ is not supported.
    """
    if spec.tag == ClassTag.HBAR:
        raise ValueError("Hbar counts pairs; enumerate its two components separately")
    if _empty_by_degeneracy(spec) or weight < 0:
        return
    N = max(weight, 1)
    allowed, cap, w = _rules(spec, N)
    F = allowed.shape[1] - 1
    # zero_tail[l]: zero frequencies are allowed at every part value >= l
    zero_tail = [True] * (N + 2)
    for l in range(N, 0, -1):
        zero_tail[l] = zero_tail[l + 1] and bool(allowed[l, 0, 0])

    def pair_ok(prev, cur, l):
        return cap is None or l == 1 or prev[0] + prev[1] + cur[0] <= cap + w * cur[1]

    freq: dict = {}
    over: list = []

    def rec(l, remaining, prev):
        if remaining == 0:
            if zero_tail[l] and pair_ok(prev, (0, 0), l):
                yield Overpartition(dict(freq), tuple(over))
            return
        if l > remaining:
            return
        for fb in range(2):
            for fq in range(F + 1):
                cnt = fq + fb
                if l * cnt > remaining:
                    break
                if not allowed[l, fq, fb] or not pair_ok(prev, (fq, fb), l):
                    continue
                if fq:
                    freq[l] = fq
                if fb:
                    over.append(l)
                yield from rec(l + 1, remaining - l * cnt, (fq, fb))
                if fq:
                    del freq[l]
                if fb:
                    over.pop()

    yield from rec(1, weight, (0, 0))


def enumerate_class(spec: ClassSpec, weight: int) -> list:
    """Members of exact weight ``weight`` in the deterministic order of :func:`enumerate_overpartitions`."""
    return sorted(iter_class(spec, weight), key=lambda o: o.sort_key(), reverse=True)


def enumerate_overpartitions(n: int) -> list:
    """Every overpartition of n once.

    Ordered by the non-increasing part sequence, compared lexicographically
    from the largest part down, larger first; an overlined copy sorts before
    a plain copy of the same value.
    """
    return enumerate_class(ClassSpec(ClassTag.ALL), n)


# ---------------------------------------------------------------------------
# bijection removing the ones


class BijectionError(ValueError):
    pass


def bijection_target(params: ParameterSet, overline_case: int) -> ClassSpec:
    """Barred class that receives eligible overpartitions of the given case."""
    d, k, a, e, f = params.d, params.k, params.a, params.e, params.f
    if f <= e:
        second = d * (k - a) + d if overline_case == 0 else d * (k - a - 1) + d
    else:
        second = d * (k - a - 1) + d if overline_case == 0 else d * (k - a - 2) + d
    return ClassSpec(ClassTag.UBAR, d, params.first, second)


def is_eligible(op: Overpartition, params: ParameterSet) -> bool:
    """Counted by the class with second index da+f but not by da+f-1."""
    if not satisfies_spec(op, u_spec(params)):
        return False
    return not satisfies_spec(op, u_spec(params, second=params.second - 1))


def bijection_forward(op: Overpartition, params: ParameterSet) -> Overpartition:
    """Delete all 1's (plain and overlined) and lower every other part by one."""
    if params.f < 1:
        raise BijectionError("the bijection needs f >= 1")
    c = params.second - 1
    fb1 = op.fbar(1)
    want = c + (params.d - 1) * fb1
    if op.f(1) != want:
        raise BijectionError(
            f"precondition failed: f_1 + fbar_1 = da + f - 1 + d*fbar_1 requires f_1 = {want}, got f_1 = {op.f(1)}")
    if not satisfies_spec(op, u_spec(params)):
        raise BijectionError("precondition failed: input violates the gap conditions of its class")
    freq = {i - 1: v for i, v in op._freq.items() if i > 1}
    over = [i - 1 for i in op._over if i > 1]
    return Overpartition(freq, over)


def bijection_inverse(op: Overpartition, params: ParameterSet, overline_case: int) -> Overpartition:
    """Raise every part by one and put back the ones (one overlined in case 1)."""
    if overline_case not in (0, 1):
        raise BijectionError("overline_case must be 0 or 1")
    target = bijection_target(params, overline_case)
    if not satisfies_spec(op, target):
        raise BijectionError(f"input is not in the barred class {target.label()} for case {overline_case}")
    freq = {i + 1: v for i, v in op._freq.items()}
    over = [i + 1 for i in op._over]
    ones = params.second - 1 + (params.d - 1) * overline_case
    if ones < 0:
        raise BijectionError("no overpartition of this case exists")
    if ones:
        freq[1] = ones
    if overline_case:
        over.append(1)
    out = Overpartition(freq, over)
    if not is_eligible(out, params):
        raise BijectionError("reconstructed overpartition is not eligible")
    return out
