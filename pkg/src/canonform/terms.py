"""Sorted first-order terms: signatures, structural order, positions, enumeration.

Terms are immutable values; everything in this module is pure.  A signature
declares the constructors of exactly one data sort plus the two primitive
domains (machine integers and strings), and fixes the declaration order that
the total term order is built on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

from .errors import PositionError, SignatureError, SortError

PRIMITIVES = {"int": int, "string": str}

LT, EQ, GT = -1, 0, 1


@dataclass(frozen=True)
class Var:
    """Pattern variable.  Only rules and clause patterns contain these."""

    name: str
    sort: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Prim:
    """Primitive constant of one of the built-in domains."""

    ptype: str
    value: Union[int, str]

    def __str__(self) -> str:
        return format_term(self)


@dataclass(frozen=True)
class App:
    """Constructor application; nullary constructors have an empty args tuple."""

    ctor: str
    args: tuple["Term", ...] = ()

    def __str__(self) -> str:
        return format_term(self)


Term = Union[Var, Prim, App]
Position = tuple[int, ...]


@dataclass(frozen=True)
class ConstructorDecl:
    name: str
    arg_sorts: tuple[str, ...]
    result_sort: str

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)


class Signature:
    """Constructor declarations for one data sort.

    ``constructors`` is a sequence of ``(name, arg_sorts)`` pairs; every
    constructor produces the distinguished sort.  Argument sorts may be the
    data sort itself or a primitive type name.
    """

    def __init__(self, rdt_sort: str, constructors: Sequence[tuple[str, Sequence[str]]]):
        if not rdt_sort:
            raise SignatureError("empty sort name")
        self.rdt_sort = rdt_sort
        self.primitives = dict(PRIMITIVES)
        if rdt_sort in self.primitives:
            raise SignatureError(f"sort name {rdt_sort!r} collides with a primitive type")
        decls = []
        for name, arg_sorts in constructors:
            decls.append(ConstructorDecl(name, tuple(arg_sorts), rdt_sort))
        self.constructors: tuple[ConstructorDecl, ...] = tuple(decls)
        self._decl: dict[str, ConstructorDecl] = {}
        self._index: dict[str, int] = {}
        for i, d in enumerate(self.constructors):
            if d.name in self._decl:
                raise SignatureError(f"duplicate constructor {d.name!r}")
            for s in d.arg_sorts:
                if s != rdt_sort and s not in self.primitives:
                    raise SignatureError(f"unknown sort {s!r} in constructor {d.name!r}")
            self._decl[d.name] = d
            self._index[d.name] = i

    def __contains__(self, name: str) -> bool:
        return name in self._decl

    def declaration(self, name: str) -> ConstructorDecl:
        try:
            return self._decl[name]
        except KeyError:
            raise SignatureError(f"unknown constructor {name!r}") from None

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise SignatureError(f"unknown constructor {name!r}") from None

    def __repr__(self) -> str:
        names = ", ".join(d.name for d in self.constructors)
        return f"Signature({self.rdt_sort!r}: {names})"


def _cmp(a, b) -> int:
    return (a > b) - (a < b)


def compare(sig: Signature, t: Term, u: Term) -> int:
    """Total structural order on ground terms; EQ only on structural equality.

    Primitive constants sort before applications; primitives by type name then
    value, applications by declaration index then arguments left to right.
    """
    if t is u:
        return EQ
    if isinstance(t, Var) or isinstance(u, Var):
        raise SortError("cannot order terms containing variables")
    tprim = isinstance(t, Prim)
    uprim = isinstance(u, Prim)
    if tprim != uprim:
        return LT if tprim else GT
    if tprim:
        if t.ptype != u.ptype:
            return _cmp(t.ptype, u.ptype)
        return _cmp(t.value, u.value)
    c = _cmp(sig.index(t.ctor), sig.index(u.ctor))
    if c != EQ:
        return c
    for a, b in zip(t.args, u.args):
        c = compare(sig, a, b)
        if c != EQ:
            return c
    return EQ


def sort_of(sig: Signature, t: Term, pattern: bool = False) -> Optional[str]:
    """Sort of t, or None if t is not well-sorted (variables allowed in patterns)."""
    if isinstance(t, Var):
        if not pattern:
            return None
        ok = t.sort == sig.rdt_sort or t.sort in sig.primitives
        return t.sort if ok else None
    if isinstance(t, Prim):
        if t.ptype in sig.primitives and isinstance(t.value, sig.primitives[t.ptype]):
            # bool is an int subtype but not a term constant
            if not isinstance(t.value, bool):
                return t.ptype
        return None
    if t.ctor not in sig:
        return None
    decl = sig.declaration(t.ctor)
    if len(t.args) != decl.arity:
        return None
    for a, s in zip(t.args, decl.arg_sorts):
        if sort_of(sig, a, pattern) != s:
            return None
    return decl.result_sort


def well_sorted(sig: Signature, t: Term, pattern: bool = False) -> bool:
    return sort_of(sig, t, pattern) is not None


def is_ground(t: Term) -> bool:
    if isinstance(t, Var):
        return False
    if isinstance(t, App):
        return all(is_ground(a) for a in t.args)
    return True


def size(t: Term) -> int:
    """Node count; primitive constants and variables count one."""
    if isinstance(t, App):
        return 1 + sum(size(a) for a in t.args)
    return 1


def positions(t: Term) -> Iterator[Position]:
    """All positions of t in preorder, the root being the empty tuple."""
    yield ()
    if isinstance(t, App):
        for i, a in enumerate(t.args, start=1):
            for p in positions(a):
                yield (i,) + p


def subterm_at(t: Term, pos: Position) -> Term:
    for i in pos:
        if not isinstance(t, App) or not 1 <= i <= len(t.args):
            raise PositionError("position out of range")
        t = t.args[i - 1]
    return t


def _splice(t: Term, pos: Position, u: Term) -> Term:
    if not pos:
        return u
    args = list(t.args)
    args[pos[0] - 1] = _splice(args[pos[0] - 1], pos[1:], u)
    return App(t.ctor, tuple(args))


def replace_at(sig: Signature, t: Term, pos: Position, u: Term) -> Term:
    """Replace the subterm at pos by u; the replacement must preserve the sort."""
    old = subterm_at(t, pos)
    s_old = sort_of(sig, old, pattern=True)
    s_new = sort_of(sig, u, pattern=True)
    if s_old is None or s_new is None or s_old != s_new:
        raise SortError("ill-sorted replacement")
    return _splice(t, pos, u)


def _compositions(total: int, n: int) -> Iterator[tuple[int, ...]]:
    # all ways to write total as n parts >= 1, lexicographically
    if n == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - n + 2):
        for rest in _compositions(total - first, n - 1):
            yield (first,) + rest


def enumerate_ground(sig: Signature, sort: str, max_size: int) -> list[Term]:
    """Every ground term of the sort with at most max_size nodes, each exactly
    once, smallest sizes first, deterministic within a size (declaration order,
    then argument-size compositions lexicographically, then argument order).

    Signatures with primitive-typed constructor arguments are rejected: those
    domains are unbounded, so the requested set would be infinite.
    """
    if max_size < 1:
        raise SignatureError("max_size must be at least 1")
    if sort in sig.primitives:
        raise SignatureError(f"cannot enumerate primitive domain {sort!r}")
    if sort != sig.rdt_sort:
        raise SignatureError(f"unknown sort {sort!r}")
    for d in sig.constructors:
        for s in d.arg_sorts:
            if s in sig.primitives:
                raise SignatureError(
                    f"constructor {d.name!r} takes a {s!r} argument; "
                    "primitive domains are unbounded"
                )
    by_size: dict[int, list[Term]] = {}
    for n in range(1, max_size + 1):
        bucket: list[Term] = []
        for d in sig.constructors:
            if d.arity == 0:
                if n == 1:
                    bucket.append(App(d.name))
                continue
            if n < d.arity + 1:
                continue
            for parts in _compositions(n - 1, d.arity):
                for args in itertools.product(*(by_size[p] for p in parts)):
                    bucket.append(App(d.name, args))
        by_size[n] = bucket
    out: list[Term] = []
    for n in range(1, max_size + 1):
        out.extend(by_size[n])
    return out


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def format_term(t: Term) -> str:
    """Concrete syntax: Name, Name(t1, ..., tn), integer and "string" literals."""
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Prim):
        if t.ptype == "int":
            return str(t.value)
        return f'"{_escape(t.value)}"'
    if not t.args:
        return t.ctor
    return f"{t.ctor}({', '.join(format_term(a) for a in t.args)})"
