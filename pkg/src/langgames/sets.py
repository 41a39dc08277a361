"""Carrier sets for game objects.

A carrier is either a leaf (a finite enumerated set, or the infinite set of
rational payoffs) or a flat product of two or more leaves. Products are
built through :func:`product`, which flattens nested products and drops the
one-element unit set, so the monoidal structure on carriers is strict:
``product(X, ONE) == X`` and ``product(product(X, Y), Z) == product(X, product(Y, Z))``.

Element conventions follow the arity of the carrier: the unit has the single
element :data:`STAR`, a leaf has bare elements, and a product of ``n`` leaves
has flat ``n``-tuples.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from numbers import Rational
from typing import Any, Iterable, Iterator, Sequence

STAR = "*"


class Carrier:
    """Base class for carrier sets."""

    finite = True

    @property
    def leaves(self) -> tuple["Carrier", ...]:
        raise NotImplementedError

    @property
    def arity(self) -> int:
        return len(self.leaves)

    def elements(self, sample: Sequence[Any] | None = None) -> tuple:
        """Enumerate the carrier.

        ``sample`` stands in for any infinite payoff leaf; without it,
        enumerating an infinite carrier raises ``ValueError``.
        """
        raise NotImplementedError

    def __contains__(self, item: Any) -> bool:
        raise NotImplementedError

    def __mul__(self, other: "Carrier") -> "Carrier":
        return product(self, other)


class FinSet(Carrier):
    """A finite set with a fixed, duplicate-free enumeration order.

    Equality ignores the order; iteration respects it.
    """

    __slots__ = ("_elements", "_frozen", "name")

    def __init__(self, elements: Iterable[Any], name: str | None = None):
        seen: dict[Any, None] = {}
        for e in elements:
            seen.setdefault(e, None)
        self._elements = tuple(seen)
        self._frozen = frozenset(self._elements)
        self.name = name

    @property
    def leaves(self) -> tuple[Carrier, ...]:
        return () if self == ONE else (self,)

    def elements(self, sample=None) -> tuple:
        return self._elements

    def __iter__(self) -> Iterator[Any]:
        return iter(self._elements)

    def __len__(self) -> int:
        return len(self._elements)

    def __contains__(self, item: Any) -> bool:
        try:
            return item in self._frozen
        except TypeError:
            return False

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FinSet) and self._frozen == other._frozen

    def __hash__(self) -> int:
        return hash(("FinSet", self._frozen))

    def __repr__(self) -> str:
        if self.name:
            return self.name
        return "{" + ", ".join(format_element(e) for e in self._elements) + "}"


class _Payoffs(Carrier):
    """The infinite set of exact rational payoffs."""

    finite = False

    @property
    def leaves(self) -> tuple[Carrier, ...]:
        return (self,)

    def elements(self, sample=None) -> tuple:
        if sample is None:
            raise ValueError("cannot enumerate the payoff set without a sample")
        return tuple(sample)

    def __contains__(self, item: Any) -> bool:
        return isinstance(item, Rational)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, _Payoffs)

    def __hash__(self) -> int:
        return hash("Payoffs")

    def __repr__(self) -> str:
        return "R"


class Product(Carrier):
    """A flat product of at least two leaves. Build with :func:`product`."""

    __slots__ = ("_leaves",)

    def __init__(self, leaves: tuple[Carrier, ...]):
        assert len(leaves) >= 2
        self._leaves = leaves

    @property
    def finite(self) -> bool:  # type: ignore[override]
        return all(c.finite for c in self._leaves)

    @property
    def leaves(self) -> tuple[Carrier, ...]:
        return self._leaves

    def elements(self, sample=None) -> tuple:
        return tuple(itertools.product(*(c.elements(sample) for c in self._leaves)))

    def __contains__(self, item: Any) -> bool:
        return (
            isinstance(item, tuple)
            and len(item) == len(self._leaves)
            and all(x in c for x, c in zip(item, self._leaves))
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Product) and self._leaves == other._leaves

    def __hash__(self) -> int:
        return hash(("Product", self._leaves))

    def __repr__(self) -> str:
        return " x ".join(repr(c) for c in self._leaves)


ONE = FinSet([STAR], name="1")
PAYOFF = _Payoffs()


def product(*carriers: Carrier) -> Carrier:
    leaves: list[Carrier] = []
    for c in carriers:
        leaves.extend(c.leaves)
    if not leaves:
        return ONE
    if len(leaves) == 1:
        return leaves[0]
    return Product(tuple(leaves))


def _parts(carrier: Carrier, element: Any) -> tuple:
    n = carrier.arity
    if n == 0:
        return ()
    if n == 1:
        return (element,)
    return tuple(element)


def _pack(carrier: Carrier, parts: tuple) -> Any:
    n = carrier.arity
    if n == 0:
        return STAR
    if n == 1:
        return parts[0]
    return parts


def _unpacker(n: int):
    if n == 0:
        return lambda e: ()
    if n == 1:
        return lambda e: (e,)
    return tuple


def _packer(n: int):
    if n == 0:
        return lambda parts: STAR
    if n == 1:
        return lambda parts: parts[0]
    return tuple


def splitter(left: Carrier, right: Carrier):
    """Return a function taking an element of ``left x right`` to its two components."""
    n, m = left.arity, right.arity
    if m == 0:
        return lambda e: (e, STAR)
    if n == 0:
        return lambda e: (STAR, e)
    if n == 1 and m == 1:
        return lambda e: (e[0], e[1])
    unpack, pack_l, pack_r = _unpacker(n + m), _packer(n), _packer(m)

    def split(element):
        flat = unpack(element)
        return pack_l(flat[:n]), pack_r(flat[n:])

    return split


def joiner(left: Carrier, right: Carrier):
    """Return a function pairing an element of ``left`` with one of ``right``."""
    n, m = left.arity, right.arity
    if m == 0:
        return lambda x, y: x
    if n == 0:
        return lambda x, y: y
    if n == 1 and m == 1:
        return lambda x, y: (x, y)
    unpack_l, unpack_r = _unpacker(n), _unpacker(m)
    return lambda x, y: unpack_l(x) + unpack_r(y)


def powerset(universe: Sequence[Any], name: str | None = "P(U)") -> FinSet:
    """All subsets of ``universe`` as frozensets, ordered by size then position."""
    items = tuple(dict.fromkeys(universe))
    subsets = (
        frozenset(c)
        for r in range(len(items) + 1)
        for c in itertools.combinations(items, r)
    )
    return FinSet(subsets, name=name)


def as_payoff(value: Any) -> Fraction:
    if isinstance(value, float):
        raise TypeError(f"payoffs must be exact rationals, got float {value!r}")
    return Fraction(value)


def format_element(e: Any) -> str:
    """Deterministic text for an element of any carrier."""
    if isinstance(e, frozenset):
        return "{" + ",".join(sorted(format_element(x) for x in e)) + "}"
    if isinstance(e, Fraction):
        return str(e)
    if isinstance(e, tuple) and type(e) is tuple:
        return "(" + ", ".join(format_element(x) for x in e) + ")"
    return str(e)


def components(carriers: Sequence[Carrier], element: Any) -> tuple:
    """Split an element of ``product(*carriers)`` into one value per carrier."""
    flat = _parts(product(*carriers), element)
    out = []
    i = 0
    for c in carriers:
        n = c.arity
        out.append(_pack(c, flat[i : i + n]))
        i += n
    return tuple(out)


def assemble(carriers: Sequence[Carrier], values: Sequence[Any]) -> Any:
    """Inverse of :func:`components`."""
    flat: tuple = ()
    for c, v in zip(carriers, values):
        flat += _parts(c, v)
    return _pack(product(*carriers), flat)
