"""Sparse multivariate polynomials with exact coefficients.

Coefficients are Python integers, optionally reduced modulo a prime.  A
polynomial is a map from exponent tuples (all of the same length, the
*arity*) to nonzero coefficients.  Symbolic parameters are just extra
variables; extraction helpers return the coefficient of a partial monomial
as a polynomial in the remaining variables.

Products can be truncated by a per-variable :class:`DegreeCap`.  Because all
exponents are nonnegative, dropping a monomial that already exceeds the cap
in some variable never changes a coefficient at or below the cap.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import product as _cartesian
from typing import Iterable, Iterator, Mapping, Sequence

Monomial = tuple  # exponent vector, one nonnegative int per variable


def is_prime(p: int) -> bool:
    """Deterministic Miller-Rabin for p < 3.3e24; plenty for field moduli."""
    if p < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class CoefficientRing:
    """The integers (``modulus=None``) or the prime field Z/pZ."""

    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None and not is_prime(self.modulus):
            raise ValueError(f"modulus {self.modulus} is not prime")

    @property
    def characteristic(self) -> int:
        return 0 if self.modulus is None else self.modulus

    @property
    def is_field(self) -> bool:
        return self.modulus is not None

    def __call__(self, c: int) -> int:
        c = int(c)
        return c if self.modulus is None else c % self.modulus

    def is_zero(self, c: int) -> bool:
        return self(c) == 0

    def __str__(self) -> str:
        return "ZZ" if self.modulus is None else f"GF({self.modulus})"


INTEGERS = CoefficientRing()


def IntegersModP(p: int) -> CoefficientRing:
    return CoefficientRing(int(p))


class DegreeCap:
    """Per-variable exponent ceilings; ``None`` means unbounded."""

    __slots__ = ("caps",)

    def __init__(self, caps: Sequence[int | None]):
        caps = tuple(None if c is None else int(c) for c in caps)
        if any(c is not None and c < 0 for c in caps):
            raise ValueError(f"negative degree cap in {caps}")
        self.caps = caps

    @classmethod
    def unbounded(cls, nvars: int) -> "DegreeCap":
        return cls((None,) * nvars)

    @classmethod
    def at(cls, monomial: Sequence[int]) -> "DegreeCap":
        return cls(monomial)

    def __len__(self):
        return len(self.caps)

    def admits(self, exps: Sequence[int]) -> bool:
        return all(c is None or e <= c for e, c in zip(exps, self.caps))

    def __repr__(self):
        return f"DegreeCap({self.caps!r})"


def _as_cap(cap, nvars):
    if cap is None:
        return None
    if not isinstance(cap, DegreeCap):
        cap = DegreeCap(cap)
    if len(cap) != nvars:
        raise ValueError(f"cap has length {len(cap)}, polynomial arity is {nvars}")
    if all(c is None for c in cap.caps):
        return None
    return cap


class SparsePoly:
    """Immutable sparse polynomial in ``nvars`` variables over ``ring``."""

    __slots__ = ("nvars", "ring", "_terms", "_hash")

    def __init__(self, terms: Mapping[Sequence[int], int] | Iterable = (), nvars: int | None = None,
                 ring: CoefficientRing = INTEGERS):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[tuple, int] = {}
        for exps, c in items:
            exps = tuple(int(e) for e in exps)
            if nvars is None:
                nvars = len(exps)
            if len(exps) != nvars:
                raise ValueError(f"monomial {exps} does not have arity {nvars}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = ring(clean.get(exps, 0) + c)
            if c:
                clean[exps] = c
            else:
                clean.pop(exps, None)
        if nvars is None:
            raise ValueError("arity of an empty polynomial must be given")
        self.nvars = nvars
        self.ring = ring
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, nvars: int, ring: CoefficientRing) -> "SparsePoly":
        # Caller guarantees normalized, zero-free terms.
        obj = cls.__new__(cls)
        obj.nvars, obj.ring, obj._terms, obj._hash = nvars, ring, terms, None
        return obj

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, ring: CoefficientRing = INTEGERS) -> "SparsePoly":
        return cls._raw({}, nvars, ring)

    @classmethod
    def constant(cls, c: int, nvars: int, ring: CoefficientRing = INTEGERS) -> "SparsePoly":
        return cls({(0,) * nvars: c}, nvars, ring)

    @classmethod
    def one(cls, nvars: int, ring: CoefficientRing = INTEGERS) -> "SparsePoly":
        return cls.constant(1, nvars, ring)

    @classmethod
    def monomial(cls, exps: Sequence[int], c: int = 1, ring: CoefficientRing = INTEGERS) -> "SparsePoly":
        return cls({tuple(exps): c}, len(exps), ring)

    @classmethod
    def variable(cls, i: int, nvars: int, ring: CoefficientRing = INTEGERS) -> "SparsePoly":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for arity {nvars}")
        exps = [0] * nvars
        exps[i] = 1
        return cls({tuple(exps): 1}, nvars, ring)

    @classmethod
    def gens(cls, nvars: int, ring: CoefficientRing = INTEGERS) -> list["SparsePoly"]:
        return [cls.variable(i, nvars, ring) for i in range(nvars)]

    @classmethod
    def linear_form(cls, coeffs: Sequence[int], ring: CoefficientRing = INTEGERS) -> "SparsePoly":
        n = len(coeffs)
        return cls({tuple(int(i == j) for j in range(n)): c for i, c in enumerate(coeffs)}, n, ring)

    # -- accessors ----------------------------------------------------------
    @property
    def terms(self) -> Mapping[tuple, int]:
        return self._terms

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, m: Sequence[int]) -> int:
        m = tuple(m)
        if len(m) != self.nvars:
            raise ValueError(f"monomial {m} does not have arity {self.nvars}")
        return self._terms.get(m, 0)

    def total_degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self._terms), default=-1)

    def constant_term(self) -> int:
        return self._terms.get((0,) * self.nvars, 0)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            if other.nvars != self.nvars:
                raise ValueError(f"arity mismatch: {self.nvars} vs {other.nvars}")
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, int):
            return SparsePoly.constant(other, self.nvars, self.ring)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        ring = self.ring
        for m, c in other._terms.items():
            v = ring(out.get(m, 0) + c)
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return SparsePoly._raw(out, self.nvars, ring)

    __radd__ = __add__

    def __neg__(self):
        ring = self.ring
        return SparsePoly._raw({m: ring(-c) for m, c in self._terms.items()}, self.nvars, ring)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul_capped(self, other, None)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not polynomials")
        result = SparsePoly.one(self.nvars, self.ring)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, c: int) -> "SparsePoly":
        ring = self.ring
        c = ring(c)
        if not c:
            return SparsePoly.zero(self.nvars, ring)
        out = {}
        for m, v in self._terms.items():
            w = ring(v * c)
            if w:
                out[m] = w
        return SparsePoly._raw(out, self.nvars, ring)

    def __eq__(self, other):
        if isinstance(other, int):
            other = SparsePoly.constant(other, self.nvars, self.ring)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.nvars == other.nvars and self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, self.ring, frozenset(self._terms.items())))
        return self._hash

    # -- evaluation and change of ring ---------------------------------------
    def evaluate(self, point: Sequence[int]) -> int:
        """Exact value at an integer point, reduced in the coefficient ring."""
        if len(point) != self.nvars:
            raise ValueError(f"point has {len(point)} coordinates, arity is {self.nvars}")
        ring = self.ring
        p = ring.modulus
        total = 0
        for exps, c in self._terms.items():
            term = c
            for x, e in zip(point, exps):
                if e:
                    term *= pow(x, e, p) if p else x ** e
            total += term
        return ring(total)

    def substitute(self, values: Mapping[int, int]) -> "SparsePoly":
        """Plug integers into some variables; arity is preserved (those exponents become 0)."""
        ring = self.ring
        p = ring.modulus
        out: dict[tuple, int] = {}
        for exps, c in self._terms.items():
            e = list(exps)
            for i, x in values.items():
                if e[i]:
                    c *= pow(x, e[i], p) if p else x ** e[i]
                    e[i] = 0
            key = tuple(e)
            out[key] = out.get(key, 0) + c
        return SparsePoly(out, self.nvars, ring)

    def reduce(self, ring: CoefficientRing) -> "SparsePoly":
        return SparsePoly(self._terms, self.nvars, ring)

    def embed(self, nvars: int, positions: Sequence[int]) -> "SparsePoly":
        """Rename variable ``i`` to ``positions[i]`` inside a larger arity."""
        out = {}
        for exps, c in self._terms.items():
            e = [0] * nvars
            for i, k in enumerate(exps):
                e[positions[i]] += k
            out[tuple(e)] = out.get(tuple(e), 0) + c
        return SparsePoly(out, nvars, self.ring)

    def __repr__(self):
        return f"SparsePoly({format_poly(self)!r}, nvars={self.nvars}, ring={self.ring})"

    def __str__(self):
        return format_poly(self)


def mul_capped(f: SparsePoly, g: SparsePoly, cap: DegreeCap | Sequence | None) -> SparsePoly:
    """Product ``f*g`` with every monomial that exceeds ``cap`` in some variable dropped."""
    if f.nvars != g.nvars:
        raise ValueError(f"arity mismatch: {f.nvars} vs {g.nvars}")
    if f.ring != g.ring:
        raise ValueError(f"ring mismatch: {f.ring} vs {g.ring}")
    cap = _as_cap(cap, f.nvars)
    ring = f.ring
    if len(f) > len(g):
        f, g = g, f
    acc: dict[tuple, int] = {}
    get = acc.get
    if cap is None:
        for m1, c1 in f._terms.items():
            for m2, c2 in g._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                acc[m] = get(m, 0) + c1 * c2
    else:
        caps = tuple(-1 if c is None else c for c in cap.caps)
        # Pre-filter g once per f-term using slack on capped variables.
        for m1, c1 in f._terms.items():
            if any(c >= 0 and a > c for a, c in zip(m1, caps)):
                continue
            slack = tuple(c - a if c >= 0 else -1 for a, c in zip(m1, caps))
            for m2, c2 in g._terms.items():
                ok = True
                for b, s in zip(m2, slack):
                    if s >= 0 and b > s:
                        ok = False
                        break
                if ok:
                    m = tuple(a + b for a, b in zip(m1, m2))
                    acc[m] = get(m, 0) + c1 * c2
    out = {}
    for m, c in acc.items():
        c = ring(c)
        if c:
            out[m] = c
    return SparsePoly._raw(out, f.nvars, ring)


def coeff(f: SparsePoly, m: Sequence[int]) -> int:
    return f.coeff(m)


def expand_product(factors: Sequence[SparsePoly], cap: DegreeCap | Sequence | None = None, *,
                   nvars: int | None = None, ring: CoefficientRing | None = None,
                   reorder: bool = False) -> SparsePoly:
    """Left fold of :func:`mul_capped` over ``factors``.

    With ``reorder=True`` factors are stably sorted by total degree first;
    low-degree factors keep intermediate products small.  The result does not
    depend on the order, only the running time does.
    """
    factors = list(factors)
    if not factors:
        if nvars is None:
            nvars = len(cap) if cap is not None else 0
        return SparsePoly.one(nvars, ring or INTEGERS)
    if reorder:
        factors.sort(key=lambda p: (p.total_degree(), len(p)))
    acc = factors[0]
    if cap is not None:
        acc = mul_capped(acc, SparsePoly.one(acc.nvars, acc.ring), cap)
    for g in factors[1:]:
        acc = mul_capped(acc, g, cap)
        if not acc:
            break
    return acc


def compositions(total: int, parts: int, caps: Sequence[int | None] | None = None) -> Iterator[tuple]:
    """Vectors of ``parts`` nonnegative ints summing to ``total``, each within ``caps``."""
    caps = list(caps) if caps is not None else [None] * parts
    if parts == 0:
        if total == 0:
            yield ()
        return
    # Remaining capacity after position i, to prune early.
    room = [0] * (parts + 1)
    for i in range(parts - 1, -1, -1):
        room[i] = math.inf if caps[i] is None or room[i + 1] == math.inf else room[i + 1] + caps[i]

    def rec(i, left, prefix):
        if i == parts - 1:
            if caps[i] is None or left <= caps[i]:
                yield prefix + (left,)
            return
        hi = left if caps[i] is None else min(left, caps[i])
        for v in range(hi + 1):
            if left - v <= room[i + 1]:
                yield from rec(i + 1, left - v, prefix + (v,))

    if total <= room[0]:
        yield from rec(0, total, ())


def multinomial(total: int, parts: Sequence[int]) -> int:
    if sum(parts) != total or any(p < 0 for p in parts):
        return 0
    out = math.factorial(total)
    for p in parts:
        out //= math.factorial(p)
    return out


def power_linear_form(coeffs: Sequence[int], e: int, cap: DegreeCap | Sequence | None = None,
                      ring: CoefficientRing = INTEGERS) -> SparsePoly:
    """``(sum coeffs[i]*x_i)**e`` truncated to ``cap``, by capped multinomial generation."""
    if e < 0:
        raise ValueError("negative exponent")
    n = len(coeffs)
    cap = _as_cap(cap, n)
    support = [i for i, c in enumerate(coeffs) if ring(c)]
    caps = [None if cap is None else cap.caps[i] for i in support]
    out = {}
    for r in compositions(e, len(support), caps):
        c = multinomial(e, r)
        exps = [0] * n
        for i, ri in zip(support, r):
            exps[i] = ri
            c *= coeffs[i] ** ri
        out[tuple(exps)] = c
    return SparsePoly(out, n, ring)


def extract(f: SparsePoly, target: Mapping[int, int],
            powers: Sequence[tuple[Sequence[int], int]] = ()) -> SparsePoly:
    """Coefficient of ``prod x_i**target[i]`` in ``f * prod (linear form)**e``.

    ``powers`` lists ``(coeffs, e)`` pairs of linear forms whose supports are
    disjoint and contained in the target variables.  The variables not named
    in ``target`` stay symbolic: the result is a polynomial of the same arity
    in which the target exponents are all zero.  The power factors are never
    expanded; their coefficients are read off as multinomials.
    """
    n = f.nvars
    ring = f.ring
    tvars = sorted(target)
    tset = set(tvars)
    forms = []
    seen: set[int] = set()
    for coeffs, e in powers:
        if len(coeffs) != n:
            raise ValueError(f"linear form has length {len(coeffs)}, arity is {n}")
        supp = [i for i, c in enumerate(coeffs) if c]
        if not set(supp) <= tset:
            raise ValueError("linear-form support must lie inside the target variables")
        if seen & set(supp):
            raise ValueError("linear-form supports must be disjoint")
        seen |= set(supp)
        forms.append((supp, [coeffs[i] for i in supp], int(e)))
    out: dict[tuple, int] = {}
    for exps, c in f.items():
        rest = {}
        ok = True
        for i in tvars:
            r = target[i] - exps[i]
            if r < 0:
                ok = False
                break
            rest[i] = r
        if not ok:
            continue
        used = set()
        for supp, cs, e in forms:
            rs = [rest[i] for i in supp]
            if sum(rs) != e:
                c = 0
                break
            c *= multinomial(e, rs)
            for ci, ri in zip(cs, rs):
                c *= ci ** ri
            used.update(supp)
        if not c:
            continue
        if any(rest[i] for i in tvars if i not in used):
            continue
        key = tuple(0 if i in tset else exps[i] for i in range(n))
        out[key] = out.get(key, 0) + c
    return SparsePoly(out, n, ring)


# -- text form --------------------------------------------------------------

def default_names(nvars: int) -> list[str]:
    return [f"x{i + 1}" for i in range(nvars)]


def grlex_key(exps: tuple) -> tuple:
    return (sum(exps), exps)


def format_poly(f: SparsePoly, names: Sequence[str] | None = None) -> str:
    """Canonical text: terms in decreasing graded-lex order, e.g. ``2*x1*x2 - 1``."""
    names = list(names) if names is not None else default_names(f.nvars)
    if not f:
        return "0"
    chunks = []
    for exps in sorted(f.terms, key=grlex_key, reverse=True):
        c = f.terms[exps]
        factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, exps) if e]
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        chunks.append((sign, body))
    first_sign, first = chunks[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in chunks[1:]:
        text += f" {sign} {body}"
    return text


_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_FACTOR = re.compile(r"^(?:(\d+)|([A-Za-z_]\w*)(?:\^(\d+))?)$")


def parse_poly(text: str, nvars: int | None = None, ring: CoefficientRing = INTEGERS,
               names: Sequence[str] | None = None) -> SparsePoly:
    """Inverse of :func:`format_poly` (sums of products of integers and powers)."""
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial text")
    if text[0] not in "+-":
        text = "+" + text
    pieces = _TERM_SPLIT.split(text)[1:]
    if len(pieces) % 2:
        raise ValueError(f"cannot parse polynomial {text!r}")
    index = {n: i for i, n in enumerate(names)} if names is not None else None
    parsed = []
    top = 0
    for sign, body in zip(pieces[::2], pieces[1::2]):
        if not body:
            raise ValueError(f"dangling sign in {text!r}")
        c = -1 if sign == "-" else 1
        powers: dict[int, int] = {}
        for tok in body.split("*"):
            m = _FACTOR.match(tok.strip())
            if not m:
                raise ValueError(f"cannot parse factor {tok!r}")
            if m.group(1) is not None:
                c *= int(m.group(1))
                continue
            name, e = m.group(2), int(m.group(3) or 1)
            if index is not None:
                if name not in index:
                    raise ValueError(f"unknown variable {name!r}")
                i = index[name]
            else:
                vm = re.fullmatch(r"x(\d+)", name)
                if not vm or int(vm.group(1)) < 1:
                    raise ValueError(f"variable {name!r} is not of the form x<k>, k >= 1")
                i = int(vm.group(1)) - 1
            powers[i] = powers.get(i, 0) + e
            top = max(top, i + 1)
        parsed.append((c, powers))
    if nvars is None:
        nvars = len(names) if names is not None else top
    if top > nvars:
        raise ValueError(f"text uses {top} variables but arity is {nvars}")
    terms: dict[tuple, int] = {}
    for c, powers in parsed:
        exps = tuple(powers.get(i, 0) for i in range(nvars))
        terms[exps] = terms.get(exps, 0) + c
    return SparsePoly(terms, nvars, ring)


def lattice(caps: Sequence[int]) -> Iterator[tuple]:
    """All exponent vectors bounded componentwise by ``caps``."""
    return _cartesian(*(range(c + 1) for c in caps))


def vandermonde_factors(indices: Sequence[int], nvars: int, ring: CoefficientRing = INTEGERS,
                        power: int = 1) -> list[SparsePoly]:
    """The factors ``x_j**power - x_i**power`` for ``i < j`` (positions in ``indices``)."""
    out = []
    for a in range(len(indices)):
        for b in range(a + 1, len(indices)):
            ea = [0] * nvars
            eb = [0] * nvars
            ea[indices[a]] = power
            eb[indices[b]] = power
            out.append(SparsePoly({tuple(eb): 1, tuple(ea): -1}, nvars, ring))
    return out
