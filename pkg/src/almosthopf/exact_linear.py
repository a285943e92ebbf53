"""
Exact sparse linear algebra over the rationals.

Scalars are :class:`fractions.Fraction` (arbitrary precision, always in
lowest terms).  A :class:`LinComb` is a finite formal sum of basis labels
with nonzero rational coefficients.  Tensor products of basis elements are
:class:`Pair` labels; triple tensors are nested to the right,
``Pair(a, Pair(b, c))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Union

Rational = Fraction
Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class GroupElem:
    """Basis element x of a group algebra kG."""
    index: int


@dataclass(frozen=True)
class DeltaElem:
    """Basis element delta_x of a function algebra k(G)."""
    index: int


@dataclass(frozen=True)
class Pair:
    left: "BasisLabel"
    right: "BasisLabel"


BasisLabel = Union[GroupElem, DeltaElem, Pair]


def label_key(label):
    """Total order on labels, used wherever output must be deterministic."""
    if isinstance(label, GroupElem):
        return (0, label.index)
    if isinstance(label, DeltaElem):
        return (1, label.index)
    if isinstance(label, Pair):
        return (2, label_key(label.left), label_key(label.right))
    raise TypeError(f"not a basis label: {label!r}")


def frac_str(q):
    """Canonical ``p/q`` text for a rational (``0/1`` for zero)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_frac(text):
    return Fraction(text)


class LinComb:
    """Immutable sparse linear combination of basis labels.

    Zero coefficients are never stored, so two combinations are equal
    exactly when their term dictionaries are equal.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | Iterable = ()):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for lab, c in items:
            c = Fraction(c)
            if c == 0:
                continue
            v = acc.get(lab, 0) + c
            if v == 0:
                del acc[lab]
            else:
                acc[lab] = v
        self._terms = acc
        self._hash = None

    @classmethod
    def basis(cls, label, coeff: Scalar = 1):
        return cls({label: coeff})

    @classmethod
    def _trusted(cls, terms: dict):
        # terms already normalised: Fraction values, no zeros
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    def items(self):
        return self._terms.items()

    def labels(self):
        return self._terms.keys()

    def coeff(self, label) -> Fraction:
        return self._terms.get(label, Fraction(0))

    def sorted_items(self):
        return sorted(self._terms.items(), key=lambda kv: label_key(kv[0]))

    def is_zero(self):
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, LinComb):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other):
        if not isinstance(other, LinComb):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other):
        if not isinstance(other, LinComb):
            return NotImplemented
        return add(self, scale(-1, other))

    def __neg__(self):
        return scale(-1, self)

    def __rmul__(self, r):
        if isinstance(r, (int, Fraction)):
            return scale(r, self)
        return NotImplemented

    def __repr__(self):
        if not self._terms:
            return "LinComb(0)"
        body = " + ".join(f"{frac_str(c)}*{lab}" for lab, c in self.sorted_items())
        return f"LinComb({body})"

    def render(self, name: Callable[[BasisLabel], str]) -> str:
        """Human-readable form, ``name`` turning a label into text."""
        if not self._terms:
            return "0"
        parts = []
        for lab, c in self.sorted_items():
            if c == 1:
                parts.append(name(lab))
            else:
                parts.append(f"({c})*{name(lab)}")
        return " + ".join(parts)


ZERO = LinComb()


def add(a: LinComb, b: LinComb) -> LinComb:
    if not b._terms:
        return a
    if not a._terms:
        return b
    acc = dict(a._terms)
    for lab, c in b._terms.items():
        v = acc.get(lab, 0) + c
        if v == 0:
            del acc[lab]
        else:
            acc[lab] = v
    return LinComb._trusted(acc)


def scale(r: Scalar, a: LinComb) -> LinComb:
    r = Fraction(r)
    if r == 0:
        return ZERO
    return LinComb._trusted({lab: r * c for lab, c in a._terms.items()})


def lsum(items: Iterable[LinComb]) -> LinComb:
    acc: dict = {}
    for a in items:
        for lab, c in a._terms.items():
            v = acc.get(lab, 0) + c
            if v == 0:
                del acc[lab]
            else:
                acc[lab] = v
    return LinComb._trusted(acc)


def tensor(a: LinComb, b: LinComb) -> LinComb:
    """Bilinear tensor product: ``Pair(l, r)`` with coefficient ``ca*cb``."""
    return LinComb._trusted({
        Pair(la, lb): ca * cb
        for la, ca in a._terms.items()
        for lb, cb in b._terms.items()
    })


def apply_linear(f, a: LinComb) -> LinComb:
    """Linear extension of a basis map.

    ``f`` is a callable or a mapping from labels to LinCombs.  A label on
    which ``f`` is undefined raises :class:`KeyError`.
    """
    get = f.__getitem__ if isinstance(f, Mapping) else f
    acc: dict = {}
    for lab, c in a._terms.items():
        try:
            img = get(lab)
        except KeyError:
            raise KeyError(f"linear map undefined on basis label {lab!r}") from None
        if img is None:
            raise KeyError(f"linear map undefined on basis label {lab!r}")
        for lab2, c2 in img._terms.items():
            v = acc.get(lab2, 0) + c * c2
            if v == 0:
                del acc[lab2]
            else:
                acc[lab2] = v
    return LinComb._trusted(acc)


def apply_bilinear(f, a: LinComb, b: LinComb) -> LinComb:
    """Bilinear extension of ``f(label_a, label_b) -> LinComb``."""
    acc: dict = {}
    for la, ca in a._terms.items():
        for lb, cb in b._terms.items():
            for lab, c in f(la, lb)._terms.items():
                v = acc.get(lab, 0) + ca * cb * c
                if v == 0:
                    del acc[lab]
                else:
                    acc[lab] = v
    return LinComb._trusted(acc)


def tensor_map(f, g, a: LinComb) -> LinComb:
    """``(f ⊗ g)`` applied to a combination of Pair labels."""
    acc: dict = {}
    for lab, c in a._terms.items():
        if not isinstance(lab, Pair):
            raise TypeError(f"expected a tensor label, got {lab!r}")
        for lab2, c2 in tensor(f(lab.left), g(lab.right))._terms.items():
            v = acc.get(lab2, 0) + c * c2
            if v == 0:
                del acc[lab2]
            else:
                acc[lab2] = v
    return LinComb._trusted(acc)


def identity_map(label) -> LinComb:
    return LinComb._trusted({label: Fraction(1)})


def swap(a: LinComb) -> LinComb:
    """The flip ``x ⊗ y -> y ⊗ x``."""
    return LinComb._trusted({Pair(l.right, l.left): c for l, c in a._terms.items()})


def reassociate(a: LinComb) -> LinComb:
    """``(x ⊗ y) ⊗ z -> x ⊗ (y ⊗ z)``, the canonical triple-tensor shape."""
    out = {}
    for lab, c in a._terms.items():
        if not (isinstance(lab, Pair) and isinstance(lab.left, Pair)):
            raise TypeError(f"expected ((x,y),z) label, got {lab!r}")
        out[Pair(lab.left.left, Pair(lab.left.right, lab.right))] = c
    return LinComb._trusted(out)
