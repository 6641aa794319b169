"""Maximal sharing: interning terms so equal subterms are one node.

Ids are table-scoped and carry no meaning across tables or runs; comparisons
elsewhere stay structural.  Within one table, id equality coincides with
structural equality, and the canonical Term object for an id is shared, so
`is` checks short-circuit structural comparison for free.
"""

from __future__ import annotations

from typing import Sequence, Union

from .errors import CanonError, SignatureError, SortError
from .terms import App, Prim, Signature, Term, Var

NodeId = int


class HashConsTable:
    def __init__(self, sig: Signature):
        self.sig = sig
        self._by_key: dict = {}
        self._terms: list[Term] = []
        self._children: list[tuple[NodeId, ...]] = []
        self._id_of: dict[Term, NodeId] = {}

    def __len__(self) -> int:
        return len(self._terms)

    def _add(self, key, term: Term, children: tuple[NodeId, ...]) -> NodeId:
        node = len(self._terms)
        self._by_key[key] = node
        self._terms.append(term)
        self._children.append(children)
        self._id_of[term] = node
        return node

    def intern(self, ctor: str, children: Sequence[NodeId]) -> NodeId:
        """Node for ctor applied to already-interned children."""
        decl = self.sig.declaration(ctor)
        children = tuple(children)
        if len(children) != decl.arity:
            raise SignatureError(
                f"{ctor!r} expects {decl.arity} children, got {len(children)}"
            )
        key = (ctor, children)
        hit = self._by_key.get(key)
        if hit is not None:
            return hit
        args = tuple(self.to_term(c) for c in children)
        return self._add(key, App(ctor, args), children)

    def intern_prim(self, ptype: str, value: Union[int, str]) -> NodeId:
        if ptype not in self.sig.primitives:
            raise SignatureError(f"unknown primitive type {ptype!r}")
        if not isinstance(value, self.sig.primitives[ptype]) or isinstance(value, bool):
            raise SortError(f"bad {ptype} constant {value!r}")
        key = ("$prim", ptype, value)
        hit = self._by_key.get(key)
        if hit is not None:
            return hit
        return self._add(key, Prim(ptype, value), ())

    def to_term(self, node: NodeId) -> Term:
        if not isinstance(node, int) or not 0 <= node < len(self._terms):
            raise CanonError(f"unknown node id {node!r}")
        return self._terms[node]

    def from_term(self, t: Term) -> NodeId:
        hit = self._id_of.get(t)
        if hit is not None:
            return hit
        if isinstance(t, Var):
            raise SortError("cannot intern terms containing variables")
        if isinstance(t, Prim):
            return self.intern_prim(t.ptype, t.value)
        return self.intern(t.ctor, tuple(self.from_term(a) for a in t.args))

    def canonical(self, t: Term) -> Term:
        """The one shared Term object structurally equal to t."""
        return self._terms[self.from_term(t)]

    def sharing_stats(self) -> tuple[int, int]:
        """(node count, edge count) for everything interned so far."""
        return len(self._terms), sum(len(c) for c in self._children)
