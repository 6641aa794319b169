"""AC-normal form: combs and sorted leaves.

A right comb for C is C(t1, C(t2, ... C(tn-1, tn))) with no ti headed by C;
a left comb nests the other way.  The orientation mapping names the AC
constructors and gives each its comb direction.  AC-normal means every
AC spine is a comb of its orientation whose leaves are in non-decreasing
structural order, recursively.
"""

from __future__ import annotations

import functools
from typing import Mapping

from .errors import ShapeError
from .terms import App, Signature, Term, compare

Orientation = Mapping[str, str]  # AC constructor name -> "left" | "right"


def _rotate_right(C: str, t: App) -> Term:
    # exhaustively applies C(C(x,y),z) -> C(x,C(y,z)) at the spine
    a, b = t.args
    while isinstance(a, App) and a.ctor == C:
        x, y = a.args
        b = _rotate_right(C, App(C, (y, b)))
        a = x
    return App(C, (a, b))


def _rotate_left(C: str, t: App) -> Term:
    a, b = t.args
    while isinstance(b, App) and b.ctor == C:
        x, y = b.args
        a = _rotate_left(C, App(C, (a, x)))
        b = y
    return App(C, (a, b))


def comb(t: Term, orientation: Orientation) -> Term:
    """Reassociate every AC spine into a comb of its declared direction."""
    if not isinstance(t, App) or not t.args:
        return t
    t2 = App(t.ctor, tuple(comb(a, orientation) for a in t.args))
    o = orientation.get(t.ctor)
    if o is None:
        return t2
    return _rotate_right(t.ctor, t2) if o == "right" else _rotate_left(t.ctor, t2)


def leaves(C: str, t: Term, orientation: str = "right") -> list[Term]:
    """Leaf list of a C-comb, spine order; errors if t is not such a comb."""
    if orientation == "right":
        out: list[Term] = []
        while isinstance(t, App) and t.ctor == C:
            head, t = t.args
            if isinstance(head, App) and head.ctor == C:
                raise ShapeError(f"not a right {C} comb")
            out.append(head)
        out.append(t)
        return out
    if orientation == "left":
        tail: list[Term] = []
        while isinstance(t, App) and t.ctor == C:
            t, last = t.args
            if isinstance(last, App) and last.ctor == C:
                raise ShapeError(f"not a left {C} comb")
            tail.append(last)
        tail.append(t)
        tail.reverse()
        return tail
    raise ShapeError(f"bad orientation {orientation!r}")


def build_comb(C: str, parts: list[Term], orientation: str = "right") -> Term:
    """Inverse of leaves: fold a non-empty leaf list back into a comb."""
    if not parts:
        raise ShapeError("empty leaf list")
    if orientation == "right":
        out = parts[-1]
        for leaf in reversed(parts[:-1]):
            out = App(C, (leaf, out))
        return out
    out = parts[0]
    for leaf in parts[1:]:
        out = App(C, (out, leaf))
    return out


def sort_combs(sig: Signature, t: Term, orientation: Orientation) -> Term:
    """Sort every comb's leaves (after normalizing inside the leaves)."""
    if isinstance(t, App) and t.ctor in orientation:
        o = orientation[t.ctor]
        parts = [sort_combs(sig, l, orientation) for l in leaves(t.ctor, t, o)]
        parts.sort(key=functools.cmp_to_key(lambda a, b: compare(sig, a, b)))
        return build_comb(t.ctor, parts, o)
    if isinstance(t, App) and t.args:
        return App(t.ctor, tuple(sort_combs(sig, a, orientation) for a in t.args))
    return t


def is_ac_normal(sig: Signature, t: Term, orientation: Orientation) -> bool:
    """True iff every AC spine is a comb with non-decreasing leaves, recursively."""
    if isinstance(t, App) and t.ctor in orientation:
        try:
            parts = leaves(t.ctor, t, orientation[t.ctor])
        except ShapeError:
            return False
        for a, b in zip(parts, parts[1:]):
            if compare(sig, a, b) > 0:
                return False
        return all(is_ac_normal(sig, l, orientation) for l in parts)
    if isinstance(t, App):
        return all(is_ac_normal(sig, a, orientation) for a in t.args)
    return True
