"""Compiling declarative definitions into canonical-form construction functions.

Every constructor gets a construction function f_C that, given argument
values already in canonical form, returns the canonical representative of
C(args).  Free constructors just rebuild.  Rule-defined constructors try
their compiled clauses in order and fall back to rebuilding.  AC
constructors run the generic scheme:

    f_C(E, x)       = x                      when a neutral element exists
    f_C(x, E)       = x
    f_C(C(x,y), z)  = f_C(x, f_C(y, z))      reassociation (right orientation)
    f_C(x, y)       = insert_inv(f_I(x), y)  when an inverse exists
    f_C(x, y)       = insert(x, y)           otherwise

insert places a non-C leaf at its ordered position in a comb, collapsing
equal neighbours under idempotence or cancelling them to the absorber under
nilpotence.  delete removes one occurrence of a leaf, exploiting sortedness
for early failure; insert_inv tries delete first and only then inserts the
re-inverted leaf.  The inverse function f_I pushes inversion to the leaves,
reversing the comb.  Left orientation mirrors every step.

Leaf removal (shared by delete and the nilpotent collapse) distinguishes
"the removed leaf was the whole value" from "a smaller comb remains": a
removal deep inside a comb must not wrap the unit or absorber into the
spine as if it were an ordinary leaf, because the result would contain a
redex (Plus(One, Zero)) or an out-of-place absorber (Xor(Bot, Bot)).
Instead the collapse result re-enters the construction function, which
re-places the absorber correctly.

Normalizing a whole term is the bottom-up fold of the construction
functions; the recursion tracks Python's stack depth, so extremely deep
inputs (around a thousand nested applications) are out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .errors import SignatureError, SortError, TheoryError
from .hashcons import HashConsTable
from .terms import (
    App,
    Prim,
    Signature,
    Term,
    Var,
    compare,
    is_ground,
    sort_of,
)
from .theory import (
    Classification,
    IDEM_VARIANTS,
    NIL_VARIANTS,
    RewriteRule,
    TheorySpec,
    Type2Theory,
    Variant,
    classify,
)


@dataclass(frozen=True)
class CompiledClause:
    """One linear clause: argument patterns, equality guard, call-expanded rhs."""

    patterns: tuple[Term, ...]
    guard: tuple[tuple[str, str], ...]  # pairs of pattern variables that must be equal
    rhs: Term


@dataclass(frozen=True)
class FreeEntry:
    pass


@dataclass(frozen=True)
class Type1Entry:
    clauses: tuple[CompiledClause, ...]


@dataclass(frozen=True)
class Type2Entry:
    theory: Type2Theory

    @property
    def orientation(self) -> str:
        return self.theory.orientation

    @property
    def unit(self) -> Optional[Term]:
        return App(self.theory.unit) if self.theory.unit is not None else None

    @property
    def absorber(self) -> Optional[Term]:
        return App(self.theory.absorber) if self.theory.absorber is not None else None

    @property
    def idem(self) -> bool:
        return self.theory.variant in IDEM_VARIANTS

    @property
    def nil(self) -> bool:
        return self.theory.variant in NIL_VARIANTS


@dataclass(frozen=True)
class InverseEntry:
    carrier: str  # the AC constructor whose theory owns this inverse


Entry = Union[FreeEntry, Type1Entry, Type2Entry, InverseEntry]


@dataclass
class CompiledFamily:
    sig: Signature
    entries: dict[str, Entry]
    classification: Classification

    def orientations(self) -> dict[str, str]:
        return self.classification.orientations()


def linearize(pattern: Term) -> tuple[Term, tuple[tuple[str, str], ...]]:
    """Rename variables apart (v1, v2, ... in preorder); repeated source
    variables become equality guards against their first occurrence."""
    counter = [0]
    first: dict[str, str] = {}
    guard: list[tuple[str, str]] = []

    def walk(t: Term) -> Term:
        if isinstance(t, Var):
            counter[0] += 1
            fresh = f"v{counter[0]}"
            if t.name in first:
                guard.append((first[t.name], fresh))
            else:
                first[t.name] = fresh
            return Var(fresh, t.sort)
        if isinstance(t, App):
            return App(t.ctor, tuple(walk(a) for a in t.args))
        return t

    out = walk(pattern)
    return out, tuple(guard)


def _rename_rhs(rhs: Term, first: dict[str, str]) -> Term:
    if isinstance(rhs, Var):
        return Var(first[rhs.name], rhs.sort)
    if isinstance(rhs, App):
        return App(rhs.ctor, tuple(_rename_rhs(a, first) for a in rhs.args))
    return rhs


def compile_rules(
    rules: Sequence[RewriteRule], sig: Signature
) -> dict[str, tuple[CompiledClause, ...]]:
    """Group rules by head constructor, in source order, linearized.

    The implicit default clause (rebuild the constructor) is appended at
    match time, not stored.
    """
    out: dict[str, list[CompiledClause]] = {}
    for rule in rules:
        if not isinstance(rule.lhs, App):
            raise TheoryError(
                f"rule left-hand side must be headed by a constructor: {rule}"
            )
        lin, guard = linearize(rule.lhs)
        # recover the source-variable -> first-fresh-name mapping for the rhs
        first: dict[str, str] = {}

        def pair(src: Term, renamed: Term) -> None:
            if isinstance(src, Var):
                first.setdefault(src.name, renamed.name)
            elif isinstance(src, App):
                for a, b in zip(src.args, renamed.args):
                    pair(a, b)

        pair(rule.lhs, lin)
        clause = CompiledClause(lin.args, guard, _rename_rhs(rule.rhs, first))
        out.setdefault(rule.lhs.ctor, []).append(clause)
    return {c: tuple(cls) for c, cls in out.items()}


def compile_family(sig: Signature, spec: TheorySpec) -> CompiledFamily:
    """Classify the declared theory and build one construction-function entry per constructor."""
    cl = classify(spec, sig)
    clauses = compile_rules(spec.rules, sig)
    entries: dict[str, Entry] = {}
    for d in sig.constructors:
        name = d.name
        if name in cl.carrier:
            entries[name] = Type2Entry(cl.carrier[name])
        elif name in cl.inverse_of:
            entries[name] = InverseEntry(cl.inverse_of[name].ctor)
        elif name in clauses:
            entries[name] = Type1Entry(clauses[name])
        else:
            entries[name] = FreeEntry()
    return CompiledFamily(sig, entries, cl)


def _value_sort(sig: Signature, t: Term) -> str:
    if isinstance(t, Prim):
        return t.ptype
    if isinstance(t, App):
        return sig.declaration(t.ctor).result_sort
    raise SortError("construction functions take ground values")


def _is_c(t: Term, ctor: str) -> bool:
    return isinstance(t, App) and t.ctor == ctor


def _match(pattern: Term, value: Term, binding: dict[str, Term]) -> bool:
    if isinstance(pattern, Var):
        binding[pattern.name] = value  # linear patterns never rebind
        return True
    if isinstance(pattern, Prim):
        return pattern == value
    if not isinstance(value, App) or value.ctor != pattern.ctor:
        return False
    return all(_match(p, v, binding) for p, v in zip(pattern.args, value.args))


def _eval_rhs(
    rhs: Term,
    binding: dict[str, Term],
    fam: CompiledFamily,
    table: Optional[HashConsTable],
) -> Term:
    if isinstance(rhs, Var):
        return binding[rhs.name]
    if isinstance(rhs, Prim):
        return table.canonical(rhs) if table is not None else rhs
    args = tuple(_eval_rhs(a, binding, fam, table) for a in rhs.args)
    return construct(rhs.ctor, args, fam, table)


def construct(
    ctor: str,
    args: Sequence[Term],
    fam: CompiledFamily,
    table: Optional[HashConsTable] = None,
) -> Term:
    """Construction function f_ctor: canonical arguments in, canonical value out."""
    sig = fam.sig
    decl = sig.declaration(ctor)
    args = tuple(args)
    if len(args) != decl.arity:
        raise SignatureError(
            f"{ctor!r} expects {decl.arity} arguments, got {len(args)}"
        )
    for a, s in zip(args, decl.arg_sorts):
        if _value_sort(sig, a) != s:
            raise SortError(f"ill-sorted argument for {ctor!r}: {a}")
    entry = fam.entries[ctor]

    if isinstance(entry, FreeEntry):
        result = App(ctor, args)
    elif isinstance(entry, Type1Entry):
        result = None
        for clause in entry.clauses:
            binding: dict[str, Term] = {}
            if all(_match(p, v, binding) for p, v in zip(clause.patterns, args)):
                if all(
                    compare(sig, binding[a], binding[b]) == 0
                    for a, b in clause.guard
                ):
                    result = _eval_rhs(clause.rhs, binding, fam, table)
                    break
        if result is None:
            result = App(ctor, args)  # implicit default clause
    elif isinstance(entry, InverseEntry):
        result = inverse_cf(ctor, args[0], fam, table)
    else:
        result = _construct_ac(ctor, entry, args, fam, table)

    if table is not None:
        result = table.canonical(result)
    return result


def _construct_ac(
    ctor: str,
    entry: Type2Entry,
    args: tuple[Term, Term],
    fam: CompiledFamily,
    table: Optional[HashConsTable],
) -> Term:
    a, b = args
    unit = entry.unit
    if unit is not None:
        if a == unit:
            return b
        if b == unit:
            return a
    if entry.orientation == "right":
        if _is_c(a, ctor):
            x, y = a.args
            return construct(ctor, (x, construct(ctor, (y, b), fam, table)), fam, table)
        if entry.theory.inverse is not None:
            return insert_inv(
                ctor, inverse_cf(entry.theory.inverse, a, fam, table), b, fam, table
            )
        return insert(ctor, a, b, fam, table)
    # left orientation: the exposed end of the comb is on the right
    if _is_c(b, ctor):
        x, y = b.args
        return construct(ctor, (construct(ctor, (a, x), fam, table), y), fam, table)
    if entry.theory.inverse is not None:
        return insert_inv(
            ctor, inverse_cf(entry.theory.inverse, b, fam, table), a, fam, table
        )
    return insert(ctor, b, a, fam, table)


def insert(
    ctor: str,
    x: Term,
    u: Term,
    fam: CompiledFamily,
    table: Optional[HashConsTable] = None,
) -> Term:
    """Place leaf x into value u, keeping leaves sorted; x is not C-headed.

    Nilpotence is handled up front: if x already occurs among u's leaves,
    the pair cancels to the absorber, and the absorber is re-inserted into
    the remaining comb through the construction function (the absorber is
    an ordinary leaf with its own ordered position, and may itself cancel
    against an absorber already present).  After that check the plain
    ordered insertion can never collide, so rebuilding the spine directly
    is safe.
    """
    entry = fam.entries[ctor]
    sig = fam.sig
    if entry.nil:
        outcome, rest = _remove_leaf(ctor, x, u, fam)
        if outcome == "empty":
            return entry.absorber
        if outcome == "rest":
            return construct(ctor, (entry.absorber, rest), fam, table)
    if entry.orientation == "right":
        if _is_c(u, ctor):
            y, t = u.args
            c = compare(sig, x, y)
            if c == 0 and entry.idem:
                return u
            if c <= 0:
                return App(ctor, (x, u))
            return App(ctor, (y, insert(ctor, x, t, fam, table)))
        c = compare(sig, x, u)
        if c > 0:
            return App(ctor, (u, x))
        if c == 0 and entry.idem:
            return u
        return App(ctor, (x, u))
    if _is_c(u, ctor):
        t, y = u.args
        c = compare(sig, x, y)
        if c == 0 and entry.idem:
            return u
        if c >= 0:
            return App(ctor, (u, x))
        return App(ctor, (insert(ctor, x, t, fam, table), y))
    c = compare(sig, x, u)
    if c < 0:
        return App(ctor, (x, u))
    if c == 0 and entry.idem:
        return u
    return App(ctor, (u, x))


def _remove_leaf(
    ctor: str, x: Term, u: Term, fam: CompiledFamily
) -> tuple[str, Optional[Term]]:
    """Remove one occurrence of leaf x from value u.

    Returns ("absent", None) when x does not occur, ("empty", None) when u
    was exactly the leaf x, and ("rest", v) when a smaller value remains.
    Sortedness gives the early exit: once the exposed leaf passes x, x
    cannot occur further in.  Removing one leaf of a sorted comb keeps the
    rest sorted, so v is canonical whenever u was.
    """
    entry = fam.entries[ctor]
    sig = fam.sig
    if entry.orientation == "right":
        if _is_c(u, ctor):
            y, t = u.args
            c = compare(sig, x, y)
            if c < 0:
                return "absent", None
            if c == 0:
                return "rest", t
            outcome, rest = _remove_leaf(ctor, x, t, fam)
            if outcome == "absent":
                return "absent", None
            if outcome == "empty":
                return "rest", y
            return "rest", App(ctor, (y, rest))
        return ("empty", None) if compare(sig, x, u) == 0 else ("absent", None)
    if _is_c(u, ctor):
        t, y = u.args
        c = compare(sig, x, y)
        if c > 0:
            return "absent", None
        if c == 0:
            return "rest", t
        outcome, rest = _remove_leaf(ctor, x, t, fam)
        if outcome == "absent":
            return "absent", None
        if outcome == "empty":
            return "rest", y
        return "rest", App(ctor, (rest, y))
    return ("empty", None) if compare(sig, x, u) == 0 else ("absent", None)


def delete(ctor: str, x: Term, u: Term, fam: CompiledFamily) -> Optional[Term]:
    """Remove one occurrence of leaf x from value u; None when x does not occur.

    Cancelling the last remaining leaf yields the neutral element (the
    empty sum); removing a leaf from deeper inside a comb yields the
    smaller comb itself, never a spine with the unit wrapped in.
    """
    entry = fam.entries[ctor]
    outcome, rest = _remove_leaf(ctor, x, u, fam)
    if outcome == "absent":
        return None
    if outcome == "empty":
        return entry.unit
    return rest


def insert_inv(
    ctor: str,
    x_inv: Term,
    y: Term,
    fam: CompiledFamily,
    table: Optional[HashConsTable] = None,
) -> Term:
    """Group insertion: x arrives already inverted; cancel it against y if
    possible, otherwise insert the original leaf back (f_I is an involution
    on values, so inverting again restores it)."""
    found = delete(ctor, x_inv, y, fam)
    if found is not None:
        return found
    inv = fam.entries[ctor].theory.inverse
    return insert(ctor, inverse_cf(inv, x_inv, fam, table), y, fam, table)


def inverse_cf(
    inv_ctor: str,
    v: Term,
    fam: CompiledFamily,
    table: Optional[HashConsTable] = None,
) -> Term:
    """Construction function f_I: push inversion down to the leaves."""
    entry = fam.entries[inv_ctor]
    if not isinstance(entry, InverseEntry):
        raise TheoryError(f"{inv_ctor!r} is not the inverse of an AC constructor")
    carrier = entry.carrier
    t2: Type2Entry = fam.entries[carrier]
    if v == t2.unit:
        return v
    if _is_c(v, inv_ctor):
        return v.args[0]
    if _is_c(v, carrier):
        x, y = v.args
        return construct(
            carrier,
            (inverse_cf(inv_ctor, y, fam, table), inverse_cf(inv_ctor, x, fam, table)),
            fam,
            table,
        )
    result = App(inv_ctor, (v,))
    return table.canonical(result) if table is not None else result


def normalize(
    t: Term, fam: CompiledFamily, table: Optional[HashConsTable] = None
) -> Term:
    """Bottom-up fold of the construction functions over a ground term."""
    if not is_ground(t):
        raise SortError("normalize takes ground terms")
    if sort_of(fam.sig, t) is None:
        raise SortError(f"ill-sorted term: {t}")

    def go(s: Term) -> Term:
        if isinstance(s, App):
            return construct(s.ctor, tuple(go(a) for a in s.args), fam, table)
        return table.canonical(s) if table is not None else s

    return go(t)
