"""Independent truth sources for validating construction functions.

Two oracles:

* exact algebraic interpretations for the catalog theories (integer vectors
  for groups, sets for idempotence, parity with absorber tracking for
  nilpotence, multisets for plain AC), combined recursively across disjoint
  theories;
* a bounded closure of the equations, a sound semi-decision procedure that
  answers YES or UNKNOWN, never NO.

validate_family runs a compiled family over every term up to a size bound
and reports correctness counterexamples (result not equal to the input),
completeness counterexamples (equal inputs, different results), AC-normal
form violations, and leftover redexes of the theory presentations.
"""

from __future__ import annotations

import functools
import itertools
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .acnf import Orientation, build_comb, comb, leaves, sort_combs, is_ac_normal
from .builder import CompiledFamily, normalize
from .errors import OracleError
from .terms import (
    App,
    Prim,
    Signature,
    Term,
    Var,
    compare,
    enumerate_ground,
    format_term,
    positions,
    size,
    subterm_at,
    _splice,
)
from .theory import (
    Classification,
    RewriteRule,
    TheorySpec,
    Type2Theory,
    Variant,
    builtin_presentation,
    equations_of,
)

# ---------------------------------------------------------------------------
# exact interpretations


def semantic_key(cl: Classification, sig: Signature, t: Term):
    """Hashable canonical interpretation: two ground terms get the same key
    iff they are equal modulo the declared attributes.

    Only available when every non-free constructor belongs to the type-2
    catalog; rule-defined constructors have no algebraic interpretation here.
    """
    if isinstance(t, Var):
        raise OracleError("interpretation of non-ground term")
    if isinstance(t, Prim):
        return ("p", t.ptype, t.value)
    if t.ctor in cl.type1:
        raise OracleError(
            f"no algebraic interpretation for rule-defined constructor {t.ctor!r}"
        )
    th = cl.owner.get(t.ctor)
    if th is None:
        return ("f", t.ctor, tuple(semantic_key(cl, sig, a) for a in t.args))
    return _theory_key(cl, sig, th, t)


def _atom_key(cl: Classification, sig: Signature, th: Type2Theory, t: Term):
    # leaves of th's spine; the theory's own nullary symbols stay opaque
    if isinstance(t, App) and t.ctor in (th.unit, th.absorber) and t.ctor is not None:
        return ("f", t.ctor, ())
    return semantic_key(cl, sig, t)


def _theory_key(cl: Classification, sig: Signature, th: Type2Theory, t: Term):
    unit_key = ("f", th.unit, ()) if th.unit is not None else None

    if th.variant is Variant.GROUP:
        vec: Counter = Counter()

        def grp(s: Term, sign: int) -> None:
            if isinstance(s, App) and s.ctor == th.unit:
                return
            if isinstance(s, App) and s.ctor == th.inverse:
                grp(s.args[0], -sign)
            elif isinstance(s, App) and s.ctor == th.ctor:
                grp(s.args[0], sign)
                grp(s.args[1], sign)
            else:
                vec[semantic_key(cl, sig, s)] += sign

        grp(t, 1)
        vec = Counter({k: n for k, n in vec.items() if n != 0})
        if not vec:
            return unit_key
        if len(vec) == 1:
            (k, n), = vec.items()
            if n == 1:
                return k
        return ("g", th.ctor, frozenset(vec.items()))

    # the remaining variants all flatten the spine into a leaf collection
    bag: Counter = Counter()

    def flat(s: Term) -> None:
        if th.unit is not None and isinstance(s, App) and s.ctor == th.unit:
            return
        if isinstance(s, App) and s.ctor == th.ctor:
            flat(s.args[0])
            flat(s.args[1])
        else:
            bag[_atom_key(cl, sig, th, s)] += 1

    flat(t)

    if th.variant is Variant.AC:
        if sum(bag.values()) == 1:
            return next(iter(bag))
        return ("m", th.ctor, frozenset(bag.items()))

    if th.variant in (Variant.ACI, Variant.ACI_NEU):
        keys = frozenset(bag)
        if not keys:
            return unit_key
        if len(keys) == 1:
            return next(iter(keys))
        return ("s", th.ctor, keys)

    # nilpotent: every equal pair of leaves turns into one absorber, and any
    # positive number of absorbers collapses to one
    a_key = ("f", th.absorber, ())
    if th.absorber == th.unit:
        # the absorber is the unit: pairs vanish entirely, pure parity
        keys = frozenset(k for k, n in bag.items() if n % 2 == 1)
        if not keys:
            return unit_key
        if len(keys) == 1:
            return next(iter(keys))
        return ("n", th.ctor, keys)
    absorbers = bag.pop(a_key, 0)
    has_a = absorbers >= 1 or any(n >= 2 for n in bag.values())
    keys = {k for k, n in bag.items() if n % 2 == 1}
    if has_a:
        keys.add(a_key)
    if not keys:
        return unit_key  # only reachable with a distinct unit present
    if len(keys) == 1:
        return next(iter(keys))
    return ("n", th.ctor, frozenset(keys))


def algebraic_equal(cl: Classification, sig: Signature, t: Term, u: Term) -> bool:
    """Exact equality modulo the catalog theories (recursively layered)."""
    return semantic_key(cl, sig, t) == semantic_key(cl, sig, u)


# ---------------------------------------------------------------------------
# bounded closure


@dataclass(frozen=True)
class ClosureBudget:
    max_steps: int = 10_000          # states explored across the search
    max_term_size: Optional[int] = None  # None: input size + 4

    def __post_init__(self):
        if self.max_steps < 1:
            raise OracleError("max_steps must be at least 1")
        if self.max_term_size is not None and self.max_term_size < 1:
            raise OracleError("max_term_size must be at least 1")


def _pattern_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset({t.name})
    if isinstance(t, App):
        out: frozenset[str] = frozenset()
        for a in t.args:
            out |= _pattern_vars(a)
        return out
    return frozenset()


def _directed(eqs: Sequence[tuple[Term, Term]]) -> list[tuple[Term, Term]]:
    # keep only directions that do not invent variables
    out = []
    for l, r in eqs:
        lv, rv = _pattern_vars(l), _pattern_vars(r)
        if rv <= lv:
            out.append((l, r))
        if lv <= rv and (r, l) not in out:
            out.append((r, l))
    return out


def _match_syntactic(p: Term, t: Term, binding: dict[str, Term]) -> bool:
    if isinstance(p, Var):
        bound = binding.get(p.name)
        if bound is None:
            binding[p.name] = t
            return True
        return bound == t
    if isinstance(p, Prim):
        return p == t
    return (
        isinstance(t, App)
        and t.ctor == p.ctor
        and len(t.args) == len(p.args)
        and all(_match_syntactic(a, b, binding) for a, b in zip(p.args, t.args))
    )


def _instantiate(p: Term, binding: dict[str, Term]) -> Term:
    if isinstance(p, Var):
        return binding[p.name]
    if isinstance(p, App):
        return App(p.ctor, tuple(_instantiate(a, binding) for a in p.args))
    return p


def _neighbors(t: Term, directed, cap: int) -> Iterator[Term]:
    for pos in positions(t):
        sub = subterm_at(t, pos)
        for l, r in directed:
            binding: dict[str, Term] = {}
            if _match_syntactic(l, sub, binding):
                nt = _splice(t, pos, _instantiate(r, binding))
                if size(nt) <= cap:
                    yield nt


def closure_equal(
    eqs: Sequence[tuple[Term, Term]],
    t: Term,
    u: Term,
    budget: Optional[ClosureBudget] = None,
) -> bool:
    """True iff a bounded bidirectional search proves t and u equal under eqs.

    False means unknown, never unequal.  Monotone in the budget: a YES stays
    YES for any larger budget.
    """
    if t == u:
        return True
    bud = budget or ClosureBudget()
    cap = bud.max_term_size or max(size(t), size(u)) + 4
    directed = _directed(eqs)
    seen_a, seen_b = {t}, {u}
    front_a, front_b = [t], [u]
    states = 2
    while front_a or front_b:
        # expand the smaller live frontier; deterministic, budget-independent
        if front_a and (not front_b or len(front_a) <= len(front_b)):
            front, seen, other = front_a, seen_a, seen_b
            which = "a"
        else:
            front, seen, other = front_b, seen_b, seen_a
            which = "b"
        new: list[Term] = []
        for s in front:
            for nb in _neighbors(s, directed, cap):
                if nb in other:
                    return True
                if nb not in seen:
                    states += 1
                    if states > bud.max_steps:
                        return False
                    seen.add(nb)
                    new.append(nb)
        if which == "a":
            front_a = new
        else:
            front_b = new
    return False


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        if p != x:
            p = self.parent[x] = self.find(p)
        return p

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def closure_classes(
    eqs: Sequence[tuple[Term, Term]],
    seeds: Sequence[Term],
    budget: Optional[ClosureBudget] = None,
) -> tuple[_UnionFind, bool]:
    """One batched closure over many seeds: a union-find where provably equal
    terms share a class, plus a flag that is True when the budget truncated
    the search (so absence from a class proves nothing)."""
    bud = budget or ClosureBudget()
    cap = bud.max_term_size or max((size(s) for s in seeds), default=1) + 4
    directed = _directed(eqs)
    uf = _UnionFind()
    seen = set(seeds)
    queue = deque(seen)
    for s in seen:
        uf.find(s)
    states = len(seen)
    truncated = False
    while queue:
        s = queue.popleft()
        for nb in _neighbors(s, directed, cap):
            uf.union(s, nb)
            if nb not in seen:
                if states >= bud.max_steps:
                    truncated = True
                    continue
                states += 1
                seen.add(nb)
                queue.append(nb)
    return uf, truncated


# ---------------------------------------------------------------------------
# redex search modulo AC


def _flatten_pattern(C: str, p: Term) -> list[Term]:
    if isinstance(p, App) and p.ctor == C:
        return _flatten_pattern(C, p.args[0]) + _flatten_pattern(C, p.args[1])
    return [p]


def _flatten_term(C: str, t: Term) -> list[Term]:
    if isinstance(t, App) and t.ctor == C:
        return _flatten_term(C, t.args[0]) + _flatten_term(C, t.args[1])
    return [t]


def _group_term(sig: Signature, C: str, parts: list[Term], orientation: str) -> Term:
    if len(parts) == 1:
        return parts[0]
    ordered = sorted(parts, key=lambda s: _sort_key(sig, s))
    return build_comb(C, ordered, orientation)


def _sort_key(sig: Signature, t: Term):
    return functools.cmp_to_key(lambda a, b: compare(sig, a, b))(t)


def _submultisets(items: list[tuple[Term, int]]) -> Iterator[Counter]:
    # all non-empty sub-multisets, deterministic order
    ranges = [range(n + 1) for _, n in items]
    for counts in itertools.product(*ranges):
        if not any(counts):
            continue
        yield Counter({t: c for (t, _), c in zip(items, counts) if c})


def _ac_match(
    sig: Signature,
    orientation: Orientation,
    p: Term,
    t: Term,
    binding: dict[str, Term],
) -> Iterator[dict[str, Term]]:
    """All matches of pattern p against term t modulo the AC constructors."""
    if isinstance(p, Var):
        bound = binding.get(p.name)
        if bound is not None:
            if bound == t:
                yield binding
            return
        b2 = dict(binding)
        b2[p.name] = t
        yield b2
        return
    if isinstance(p, Prim):
        if p == t:
            yield binding
        return
    if p.ctor in orientation:
        if not (isinstance(t, App) and t.ctor == p.ctor):
            return
        C = p.ctor
        pleaves = _flatten_pattern(C, p)
        tleaves = Counter(_flatten_term(C, t))
        yield from _ac_match_leaves(sig, orientation, C, pleaves, tleaves, binding)
        return
    if not (isinstance(t, App) and t.ctor == p.ctor and len(t.args) == len(p.args)):
        return
    yield from _match_seq(sig, orientation, list(p.args), list(t.args), binding)


def _match_seq(sig, orientation, ps, ts, binding) -> Iterator[dict[str, Term]]:
    if not ps:
        yield binding
        return
    for b in _ac_match(sig, orientation, ps[0], ts[0], binding):
        yield from _match_seq(sig, orientation, ps[1:], ts[1:], b)


def _ac_match_leaves(
    sig, orientation, C: str, pleaves: list[Term], remaining: Counter, binding
) -> Iterator[dict[str, Term]]:
    if not pleaves:
        if not remaining:
            yield binding
        return
    p, rest = pleaves[0], pleaves[1:]
    if isinstance(p, Var):
        bound = binding.get(p.name)
        if bound is not None:
            need = Counter(_flatten_term(C, bound))
            if all(remaining[k] >= n for k, n in need.items()):
                yield from _ac_match_leaves(
                    sig, orientation, C, rest, remaining - need, binding
                )
            return
        items = sorted(remaining.items(), key=lambda kv: _sort_key(sig, kv[0]))
        for chosen in _submultisets(items):
            b2 = dict(binding)
            b2[p.name] = _group_term(
                sig, C, list(chosen.elements()), orientation.get(C, "right")
            )
            yield from _ac_match_leaves(
                sig, orientation, C, rest, remaining - chosen, b2
            )
        return
    # non-variable pattern leaf consumes exactly one term leaf
    tried: set[Term] = set()
    for leaf in list(remaining):
        if leaf in tried:
            continue
        tried.add(leaf)
        for b in _ac_match(sig, orientation, p, leaf, binding):
            yield from _ac_match_leaves(
                sig, orientation, C, rest, remaining - Counter([leaf]), b
            )


def find_redex(
    sig: Signature,
    t: Term,
    rules: Sequence[RewriteRule],
    orientation: Orientation,
) -> Optional[tuple[Term, RewriteRule]]:
    """First subterm of t matching a rule left-hand side modulo AC, if any.

    The term is re-combed and sorted first; with extension rules in the rule
    set, redex existence is invariant across AC-equal terms, so checking the
    canonical comb's syntactic positions suffices.
    """
    tc = sort_combs(sig, comb(t, orientation), orientation)
    for pos in positions(tc):
        sub = subterm_at(tc, pos)
        for rule in rules:
            for _ in _ac_match(sig, orientation, rule.lhs, sub, {}):
                return sub, rule
    return None


# ---------------------------------------------------------------------------
# family validation


@dataclass
class ValidationReport:
    max_size: int
    correctness: list[tuple[Term, Term]] = field(default_factory=list)
    completeness: list[tuple[Term, Term]] = field(default_factory=list)
    acnf_violations: list[tuple[Term, Term]] = field(default_factory=list)
    redexes: list[tuple[Term, Term, str]] = field(default_factory=list)
    unknowns: list[tuple[str, Term, Term]] = field(default_factory=list)

    @property
    def has_failures(self) -> bool:
        return bool(
            self.correctness or self.completeness or self.acnf_violations or self.redexes
        )

    @property
    def ok(self) -> bool:
        return not self.has_failures and not self.unknowns

    @property
    def unknown_only(self) -> bool:
        return not self.has_failures and bool(self.unknowns)

    def machine_lines(self) -> list[str]:
        out = []
        for t, v in self.correctness:
            out.append(f"correctness\t{format_term(t)}\t{format_term(v)}")
        for t, u in self.completeness:
            out.append(f"completeness\t{format_term(t)}\t{format_term(u)}")
        for t, v in self.acnf_violations:
            out.append(f"acnf\t{format_term(t)}\t{format_term(v)}")
        for t, v, rule in self.redexes:
            out.append(f"redex\t{format_term(t)}\t{format_term(v)}\t{rule}")
        for note, t, v in self.unknowns:
            out.append(f"unknown\t{format_term(t)}\t{format_term(v)}\t{note}")
        return out

    def summary(self) -> str:
        if self.ok:
            return f"valid at scale {self.max_size}"
        bits = []
        for name, xs in (
            ("correctness", self.correctness),
            ("completeness", self.completeness),
            ("acnf", self.acnf_violations),
            ("redex", self.redexes),
            ("unknown", self.unknowns),
        ):
            if xs:
                bits.append(f"{len(xs)} {name}")
        return f"scale {self.max_size}: " + ", ".join(bits)


def validate_family(
    fam: CompiledFamily,
    spec: TheorySpec,
    sig: Signature,
    max_size: int,
    budget: Optional[ClosureBudget] = None,
) -> ValidationReport:
    """Exhaustively check the family on every term up to max_size nodes."""
    cl = fam.classification
    orientation = cl.orientations()
    report = ValidationReport(max_size=max_size)

    terms = enumerate_ground(sig, sig.rdt_sort, max_size)
    nf = {t: normalize(t, fam) for t in terms}

    rules: list[RewriteRule] = []
    for th in cl.theories:
        rules.extend(builtin_presentation(th, sig))
    rules.extend(spec.rules)

    for t in terms:
        v = nf[t]
        if not is_ac_normal(sig, v, orientation):
            report.acnf_violations.append((t, v))
        hit = find_redex(sig, v, rules, orientation)
        if hit is not None:
            report.redexes.append((t, v, str(hit[1])))

    if not cl.type1:
        for t in terms:
            if not algebraic_equal(cl, sig, t, nf[t]):
                report.correctness.append((t, nf[t]))
        groups: dict = {}
        for t in terms:
            groups.setdefault(semantic_key(cl, sig, t), []).append(t)
        for members in groups.values():
            rep = members[0]
            for u in members[1:]:
                if nf[u] != nf[rep]:
                    report.completeness.append((rep, u))
    else:
        eqs = equations_of(spec, sig)
        seeds = list(terms)
        seen = set(seeds)
        for v in nf.values():
            if v not in seen:
                seen.add(v)
                seeds.append(v)
        uf, truncated = closure_classes(eqs, seeds, budget)
        for t in terms:
            if uf.find(t) != uf.find(nf[t]):
                report.unknowns.append(("correctness not proved within budget", t, nf[t]))
        groups = {}
        for t in terms:
            groups.setdefault(uf.find(t), []).append(t)
        for members in groups.values():
            rep = members[0]
            for u in members[1:]:
                if nf[u] != nf[rep]:
                    report.completeness.append((rep, u))
        if truncated:
            anchor = seeds[0]
            report.unknowns.append(("closure budget exhausted", anchor, anchor))
    return report
