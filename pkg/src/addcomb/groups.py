"""Finitely generated abelian groups with cyclic torsion, modelled as Z^r + Z/NZ.

Every finite computation over a group with cyclic torsion subgroup happens
inside a finitely generated subgroup, and such a subgroup is isomorphic to
``Z^r (+) Z/NZ`` for some ``r >= 0`` and ``N >= 1``.  Elements are immutable
and totally ordered (free part first, then torsion residue) so that solvers
can enumerate them deterministically.

A small :class:`TorsionProduct` type models ``Z/n1 (+) ... (+) Z/nk`` with
non-cyclic torsion.  It exists only to express counterexamples such as the
Klein four-group; it is not a supported input for the guaranteed solvers.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import PreconditionError

INFINITE = math.inf


@dataclass(frozen=True, order=True)
class GroupElement:
    free_part: tuple[int, ...]
    torsion_part: int

    def __str__(self) -> str:
        return format_element(self)


@dataclass(frozen=True)
class GroupSpec:
    """The group ``Z^free_rank (+) Z/torsion_modulus``."""

    free_rank: int = 0
    torsion_modulus: int = 1

    def __post_init__(self):
        if self.free_rank < 0:
            raise PreconditionError(f"free rank must be nonnegative, got {self.free_rank}")
        if self.torsion_modulus < 1:
            raise PreconditionError(f"torsion modulus must be positive, got {self.torsion_modulus}")

    has_cyclic_torsion = True

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int | float:
        return self.torsion_modulus if self.is_finite else INFINITE

    @property
    def zero(self) -> GroupElement:
        return GroupElement((0,) * self.free_rank, 0)

    def element(self, free: Sequence[int] = (), torsion: int = 0) -> GroupElement:
        free = tuple(int(v) for v in free)
        if len(free) != self.free_rank:
            raise PreconditionError(f"free part has length {len(free)}, expected {self.free_rank}")
        return GroupElement(free, int(torsion) % self.torsion_modulus)

    def cyclic(self, t: int) -> GroupElement:
        """Torsion element ``t mod N`` (free part zero)."""
        return GroupElement((0,) * self.free_rank, t % self.torsion_modulus)

    def check(self, a: GroupElement) -> GroupElement:
        if not isinstance(a, GroupElement):
            raise TypeError(f"expected GroupElement, got {type(a).__name__}")
        if len(a.free_part) != self.free_rank:
            raise PreconditionError(
                f"element {a} has free rank {len(a.free_part)}, group {self} has {self.free_rank}"
            )
        if not 0 <= a.torsion_part < self.torsion_modulus:
            raise PreconditionError(f"torsion part of {a} is not reduced modulo {self.torsion_modulus}")
        return a

    def add(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return add(self, a, b)

    def neg(self, a: GroupElement) -> GroupElement:
        self.check(a)
        return GroupElement(tuple(-v for v in a.free_part), (-a.torsion_part) % self.torsion_modulus)

    def scale(self, k: int, a: GroupElement) -> GroupElement:
        """The multiple ``k*a``."""
        self.check(a)
        return GroupElement(tuple(k * v for v in a.free_part), (k * a.torsion_part) % self.torsion_modulus)

    def element_order(self, a: GroupElement) -> int | float:
        return element_order(self, a)

    def elements(self) -> list[GroupElement]:
        """All elements of a finite group, in increasing order."""
        if not self.is_finite:
            raise PreconditionError(f"{self} is infinite")
        return [GroupElement((), t) for t in range(self.torsion_modulus)]

    def parse_element(self, value) -> GroupElement:
        return parse_element(self, value)

    def format_element(self, a: GroupElement) -> str:
        return format_element(a)

    def __str__(self) -> str:
        return format_spec(self)


def add(spec: GroupSpec, a: GroupElement, b: GroupElement) -> GroupElement:
    spec.check(a)
    spec.check(b)
    return GroupElement(
        tuple(x + y for x, y in zip(a.free_part, b.free_part)),
        (a.torsion_part + b.torsion_part) % spec.torsion_modulus,
    )


def element_order(spec: GroupSpec, a: GroupElement) -> int | float:
    """Least ``t >= 1`` with ``t*a == 0``, or ``math.inf`` for elements of infinite order."""
    spec.check(a)
    if any(a.free_part):
        return INFINITE
    n = spec.torsion_modulus
    return n // math.gcd(n, a.torsion_part)


def sum_all(spec: GroupSpec, xs: Iterable[GroupElement]) -> GroupElement:
    return reduce(spec.add, xs, spec.zero)


class TorsionProduct:
    """``Z/n1 (+) ... (+) Z/nk``; elements are tuples of residues.

    Only used to state counterexamples (torsion need not be cyclic here).
    """

    def __init__(self, moduli: Sequence[int]):
        self.moduli = tuple(int(q) for q in moduli)
        if not self.moduli or any(q < 1 for q in self.moduli):
            raise PreconditionError(f"bad moduli {moduli!r}")

    @property
    def has_cyclic_torsion(self) -> bool:
        # Z/a + Z/b is cyclic iff gcd(a, b) == 1, pairwise.
        return all(math.gcd(p, q) == 1 for i, p in enumerate(self.moduli) for q in self.moduli[i + 1:])

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * len(self.moduli)

    def check(self, a):
        if len(a) != len(self.moduli) or any(not 0 <= v < q for v, q in zip(a, self.moduli)):
            raise PreconditionError(f"{a!r} is not an element of {self}")
        return a

    def add(self, a, b):
        self.check(a)
        self.check(b)
        return tuple((x + y) % q for x, y, q in zip(a, b, self.moduli))

    def neg(self, a):
        return tuple((-x) % q for x, q in zip(self.check(a), self.moduli))

    def scale(self, k, a):
        return tuple((k * x) % q for x, q in zip(self.check(a), self.moduli))

    def element_order(self, a):
        self.check(a)
        return reduce(math.lcm, (q // math.gcd(q, x) for x, q in zip(a, self.moduli)), 1)

    def elements(self):
        return list(product(*(range(q) for q in self.moduli)))

    def parse_element(self, value):
        if isinstance(value, str):
            value = [int(v) for v in re.findall(r"-?\d+", value)]
        return self.check(tuple(int(v) % q for v, q in zip(value, self.moduli)))

    def format_element(self, a) -> str:
        return "(" + ",".join(map(str, a)) + ")"

    def __eq__(self, other):
        return isinstance(other, TorsionProduct) and other.moduli == self.moduli

    def __hash__(self):
        return hash(("TorsionProduct", self.moduli))

    def __str__(self):
        return " x ".join(f"Z/{q}" for q in self.moduli)

    def __repr__(self):
        return f"TorsionProduct({self.moduli!r})"


def klein_four_group() -> TorsionProduct:
    return TorsionProduct((2, 2))


# -- text encodings ---------------------------------------------------------

def format_spec(spec: GroupSpec) -> str:
    return f"Z^{spec.free_rank} x Z/{spec.torsion_modulus}"


def format_element(a: GroupElement) -> str:
    return f"r:{','.join(map(str, a.free_part))};t:{a.torsion_part}"


_FACTOR = re.compile(r"^Z(?:\^(\d+)|/(\d+))?$")


def parse_group(text: str) -> GroupSpec | TorsionProduct:
    """Parse ``Z^r x Z/N`` and the shorthands ``Z/N``, ``Z^r``, ``Z``.

    Several finite cyclic factors (``Z/2 x Z/2``) give a :class:`TorsionProduct`
    and are only allowed without a free part.
    """
    rank, moduli = 0, []
    for raw in re.split(r"\s*(?:x|\+|\(\+\))\s*", text.strip()):
        m = _FACTOR.match(raw.replace(" ", ""))
        if not m:
            raise PreconditionError(f"cannot parse group factor {raw!r} in {text!r}")
        if m.group(2) is not None:
            moduli.append(int(m.group(2)))
        else:
            rank += int(m.group(1)) if m.group(1) is not None else 1
    moduli = [q for q in moduli if q != 1] or [1]
    if len(moduli) == 1:
        return GroupSpec(rank, moduli[0])
    if rank:
        raise PreconditionError(f"free part with non-cyclic torsion is not supported: {text!r}")
    return TorsionProduct(moduli)


_ELEMENT = re.compile(r"^r:(?P<free>[-\d,\s]*);t:(?P<tors>-?\d+)$")


def parse_element(spec: GroupSpec, value) -> GroupElement:
    """Accepts the ``r:v1,...;t:k`` encoding, a bare integer (torsion-only
    groups) or a list ``[v1, ..., vr, k]``."""
    if isinstance(value, GroupElement):
        return spec.check(value)
    if isinstance(value, bool):
        raise TypeError("booleans are not group elements")
    if isinstance(value, int):
        if spec.free_rank:
            raise PreconditionError(f"integer {value} is ambiguous in {spec}")
        return spec.cyclic(value)
    if isinstance(value, (list, tuple)):
        if len(value) != spec.free_rank + 1:
            raise PreconditionError(f"expected {spec.free_rank + 1} coordinates, got {value!r}")
        return spec.element(value[:-1], value[-1])
    m = _ELEMENT.match(str(value).replace(" ", ""))
    if not m:
        try:
            return parse_element(spec, int(value))
        except ValueError:
            raise PreconditionError(f"cannot parse group element {value!r}") from None
    free = [int(v) for v in m.group("free").split(",") if v]
    return spec.element(free, int(m.group("tors")))


def iter_box(spec: GroupSpec, radius: int) -> Iterator[GroupElement]:
    """Elements with free coordinates in ``[-radius, radius]``."""
    for free in product(range(-radius, radius + 1), repeat=spec.free_rank):
        for t in range(spec.torsion_modulus):
            yield GroupElement(tuple(free), t)
