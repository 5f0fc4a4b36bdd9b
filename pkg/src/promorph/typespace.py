"""Finite type spaces: dimensions, leaf sets, boolean type expressions.

Every dimension is a finite enumeration of leaf names; a named type is a
non-empty subset of exactly one dimension's leaves.  Conjunction is set
intersection, disjunction is union, negation is complement within the
dimension, so every type expression normalizes to a leaf subset and the
empty subset is the inconsistent constraint (bottom).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass


class TypeSpaceError(Exception):
    """Unknown atom, mixed dimensions, or an ill-formed declaration."""


#: name of the built-in dimension that types nodes themselves
SORT_DIM = "sort"


# --------------------------------------------------------------------------
# type expression AST


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Neg:
    sub: object


@dataclass(frozen=True)
class Conj:
    subs: tuple


@dataclass(frozen=True)
class Disj:
    subs: tuple


_TOKEN = re.compile(r"\s*(?:(?P<op>[&;~()])|(?P<atom>[^\s&;~()]+))")


def parse_type_expr(text: str):
    """Parse ``a & ~b ; c`` into an AST.  ``~`` binds tightest, then ``&``,
    then ``;``.  Atoms are runs of characters other than whitespace and the
    operators, so quoted-looking names like ``+ini`` or ``-hi`` need no
    escaping."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise TypeSpaceError(f"bad type expression: {text!r}")
            break
        tokens.append(m.group("op") or m.group("atom"))
        pos = m.end()

    def peek():
        return tokens[0] if tokens else None

    def take(expected=None):
        if not tokens:
            raise TypeSpaceError(f"unexpected end of type expression: {text!r}")
        tok = tokens.pop(0)
        if expected is not None and tok != expected:
            raise TypeSpaceError(f"expected {expected!r}, got {tok!r} in {text!r}")
        return tok

    def primary():
        tok = take()
        if tok == "(":
            e = disj()
            take(")")
            return e
        if tok == "~":
            return Neg(primary())
        if tok in ("&", ";", ")"):
            raise TypeSpaceError(f"misplaced {tok!r} in {text!r}")
        return Atom(tok)

    def conj():
        subs = [primary()]
        while peek() == "&":
            take()
            subs.append(primary())
        return subs[0] if len(subs) == 1 else Conj(tuple(subs))

    def disj():
        subs = [conj()]
        while peek() == ";":
            take()
            subs.append(conj())
        return subs[0] if len(subs) == 1 else Disj(tuple(subs))

    expr = disj()
    if tokens:
        raise TypeSpaceError(f"trailing tokens in type expression: {text!r}")
    return expr


# --------------------------------------------------------------------------
# constraints and domains


@dataclass(frozen=True)
class TypeConstraint:
    """A normalized leaf subset of one dimension.  The empty subset is the
    inconsistent constraint and must trigger failure wherever it is used."""

    dimension: str
    leaves: frozenset

    @property
    def is_bottom(self):
        return not self.leaves

    def conj(self, other: "TypeConstraint") -> "TypeConstraint":
        if self.dimension != other.dimension:
            raise TypeSpaceError(
                f"cannot conjoin {self.dimension} with {other.dimension}")
        return TypeConstraint(self.dimension, self.leaves & other.leaves)

    def disj(self, other: "TypeConstraint") -> "TypeConstraint":
        if self.dimension != other.dimension:
            raise TypeSpaceError(
                f"cannot disjoin {self.dimension} with {other.dimension}")
        return TypeConstraint(self.dimension, self.leaves | other.leaves)


class TypeDomain:
    """Immutable after loading; shareable across threads and solvers."""

    def __init__(self):
        self.dimensions: dict[str, tuple] = {}
        self._full: dict[str, frozenset] = {}
        self.dim_bearer: dict[str, frozenset] = {}
        # atom name -> (dimension, leaf subset); covers leaves and named types
        self._atoms: dict[str, tuple] = {}
        # feature name -> (bearer sorts, value sorts)
        self.features: dict[str, tuple] = {}
        self._sorts_declared = False

    # -- declarations ------------------------------------------------------

    def declare_sorts(self, sorts):
        self.declare_dimension(SORT_DIM, sorts)
        self._sorts_declared = True

    def declare_dimension(self, name, leaves, bearer=None):
        if name in self.dimensions:
            raise TypeSpaceError(f"dimension {name!r} already declared")
        leaves = tuple(leaves)
        if len(set(leaves)) != len(leaves) or not leaves:
            raise TypeSpaceError(f"dimension {name!r} needs unique, non-empty leaves")
        self.dimensions[name] = leaves
        self._full[name] = frozenset(leaves)
        for leaf in leaves:
            self._register_atom(leaf, name, frozenset([leaf]))
        if bearer is not None:
            self.dim_bearer[name] = self._sort_set(bearer)

    def declare_named(self, name, dimension, members):
        """Declare a simplex type as a set of leaves (or previously named
        types) of one dimension."""
        leaves = frozenset()
        for m in members:
            dim, sub = self._atoms.get(m, (None, None))
            if dim != dimension:
                raise TypeSpaceError(f"{m!r} is not a member of {dimension!r}")
            leaves |= sub
        if not leaves:
            raise TypeSpaceError(f"named type {name!r} would be empty")
        self._register_atom(name, dimension, leaves)

    def declare_product(self, dimension, axes, bearer=None):
        """A dimension whose leaves are dotted value tuples of the given
        axes; each axis value also becomes a named type denoting its slice."""
        names = [a for a, _ in axes]
        values = [tuple(v) for _, v in axes]
        leaves = [".".join(combo) for combo in itertools.product(*values)]
        self.declare_dimension(dimension, leaves, bearer=bearer)
        self._products = getattr(self, "_products", {})
        self._products[dimension] = (names, values)
        for i, vals in enumerate(values):
            for val in vals:
                slice_ = frozenset(
                    leaf for leaf in leaves if leaf.split(".")[i] == val)
                self._register_atom(val, dimension, slice_)

    def declare_feature(self, name, bearer, value):
        if name in self.features:
            raise TypeSpaceError(f"feature {name!r} already declared")
        self.features[name] = (self._sort_set(bearer), self._sort_set(value))

    def _sort_set(self, sorts):
        if isinstance(sorts, str):
            sorts = [sorts]
        out = frozenset(sorts)
        bad = out - self._full.get(SORT_DIM, frozenset())
        if bad:
            raise TypeSpaceError(f"unknown sorts: {sorted(bad)}")
        return out

    def _register_atom(self, name, dimension, leaves):
        if name in self._atoms:
            raise TypeSpaceError(f"type name {name!r} already in use")
        self._atoms[name] = (dimension, leaves)

    # -- resolution --------------------------------------------------------

    def full(self, dimension) -> frozenset:
        return self._full[dimension]

    def atom(self, name) -> TypeConstraint:
        if name not in self._atoms:
            raise TypeSpaceError(f"unknown type name {name!r}")
        dim, leaves = self._atoms[name]
        return TypeConstraint(dim, leaves)

    def resolve(self, expr) -> TypeConstraint:
        """Normalize a type expression (AST or string) to a leaf subset.
        Bottom is a legal result; mixed dimensions are an error."""
        if isinstance(expr, str):
            if expr in self._atoms:
                return self.atom(expr)
            expr = parse_type_expr(expr)
        return self._resolve(expr)

    def _resolve(self, expr) -> TypeConstraint:
        if isinstance(expr, Atom):
            return self.atom(expr.name)
        if isinstance(expr, Neg):
            sub = self._resolve(expr.sub)
            return TypeConstraint(sub.dimension,
                                  self._full[sub.dimension] - sub.leaves)
        if isinstance(expr, Conj):
            out = self._resolve(expr.subs[0])
            for s in expr.subs[1:]:
                out = out.conj(self._resolve(s))
            return out
        if isinstance(expr, Disj):
            out = self._resolve(expr.subs[0])
            for s in expr.subs[1:]:
                out = out.disj(self._resolve(s))
            return out
        raise TypeSpaceError(f"not a type expression: {expr!r}")

    # -- product pretty printing -------------------------------------------

    def project_product(self, dimension, leaves):
        """Per-axis value sets of a product-dimension subset, in axis order."""
        names, values = self._products[dimension]
        tuples = [leaf.split(".") for leaf in leaves]
        out = []
        for i, vals in enumerate(values):
            present = {t[i] for t in tuples}
            out.append([v for v in vals if v in present])
        return names, out

    def pretty_product(self, dimension, leaves):
        """Compact rendering of a product subset: full axes are omitted,
        restricted axes print their values joined by ``;``.  Non-product
        subsets fall back to an explicit tuple list."""
        if not leaves:
            return "<none>"
        names, projected = self.project_product(dimension, leaves)
        _, values = self._products[dimension]
        product_size = 1
        for vals in projected:
            product_size *= len(vals)
        if product_size != len(leaves):
            return "{" + ";".join(sorted(leaves)) + "}"
        parts = []
        for vals, axis in zip(projected, values):
            if len(vals) == len(axis):
                continue
            parts.append(";".join(vals))
        return " ".join(parts) if parts else "<any>"
