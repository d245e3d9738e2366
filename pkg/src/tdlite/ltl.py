"""Propositional LTL formulas, with and without past operators.

The AST is deliberately small: falsum, propositions, negation, conjunction
and the four temporal operators next/eventually in both directions.  Boxes,
disjunction and (bi)conditionals exist only as constructor functions that
expand into this core.

Formulas can be very large (hundreds of thousands of nodes, right-nested
conjunction chains), so every traversal here is iterative and memoized on
node identity.  Shared subtrees are counted once per occurrence by
`tree_size` but visited once by everything else.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator


class Ltl:
    __slots__ = ()


@dataclass(frozen=True, slots=True, eq=False)
class LFalse(Ltl):
    pass


@dataclass(frozen=True, slots=True, eq=False)
class LProp(Ltl):
    name: str


@dataclass(frozen=True, slots=True, eq=False)
class LNot(Ltl):
    arg: Ltl


@dataclass(frozen=True, slots=True, eq=False)
class LAnd(Ltl):
    left: Ltl
    right: Ltl


@dataclass(frozen=True, slots=True, eq=False)
class LNextF(Ltl):
    arg: Ltl


@dataclass(frozen=True, slots=True, eq=False)
class LNextP(Ltl):
    arg: Ltl


@dataclass(frozen=True, slots=True, eq=False)
class LSomeF(Ltl):
    arg: Ltl


@dataclass(frozen=True, slots=True, eq=False)
class LSomeP(Ltl):
    arg: Ltl


_UNARY = (LNot, LNextF, LNextP, LSomeF, LSomeP)
_PAST = (LNextP, LSomeP)

FALSE = LFalse()
TRUE = LNot(FALSE)


def _children(f: Ltl) -> tuple[Ltl, ...]:
    if isinstance(f, LAnd):
        return (f.left, f.right)
    if isinstance(f, _UNARY):
        return (f.arg,)
    return ()


# --- constructors -----------------------------------------------------------

def lnot(a: Ltl) -> Ltl:
    return LNot(a)


def land(a: Ltl, b: Ltl) -> Ltl:
    return LAnd(a, b)


def lor(a: Ltl, b: Ltl) -> Ltl:
    return LNot(LAnd(LNot(a), LNot(b)))


def implies(a: Ltl, b: Ltl) -> Ltl:
    return LNot(LAnd(a, LNot(b)))


def iff(a: Ltl, b: Ltl) -> Ltl:
    return LAnd(implies(a, b), implies(b, a))


def alw_f(a: Ltl) -> Ltl:
    return LNot(LSomeF(LNot(a)))


def alw_p(a: Ltl) -> Ltl:
    return LNot(LSomeP(LNot(a)))


def conj(items: Iterable[Ltl]) -> Ltl:
    """Right-nested conjunction; the empty conjunction is truth."""
    items = list(items)
    if not items:
        return TRUE
    out = items[-1]
    for f in reversed(items[:-1]):
        out = LAnd(f, out)
    return out


# --- traversals -------------------------------------------------------------

def iter_nodes(f: Ltl) -> Iterator[Ltl]:
    """Each distinct node object once, parents before children."""
    seen: set[int] = set()
    stack = [f]
    while stack:
        n = stack.pop()
        if id(n) in seen:
            continue
        seen.add(id(n))
        yield n
        stack.extend(_children(n))


def tree_size(f: Ltl) -> int:
    """AST node count with shared subtrees counted per occurrence."""
    memo: dict[int, int] = {}
    stack: list[tuple[Ltl, bool]] = [(f, False)]
    while stack:
        n, done = stack.pop()
        if id(n) in memo:
            continue
        kids = _children(n)
        if done or not kids:
            memo[id(n)] = 1 + sum(memo[id(k)] for k in kids)
        else:
            stack.append((n, True))
            stack.extend((k, False) for k in kids)
    return memo[id(f)]


def prop_names(f: Ltl) -> set[str]:
    return {n.name for n in iter_nodes(f) if isinstance(n, LProp)}


def count_props(f: Ltl) -> int:
    return len(prop_names(f))


def has_past(f: Ltl) -> bool:
    return any(isinstance(n, _PAST) for n in iter_nodes(f))


def structural_index(f: Ltl) -> tuple[dict[int, int], list[Ltl]]:
    """Hash-cons the formula: map id(node) -> uid, plus one representative
    node per uid in bottom-up (children-first) discovery order.

    Structurally equal subformulas receive the same uid even when they are
    distinct objects, which is what the past-elimination table needs.
    """
    uid_of: dict[int, int] = {}
    key_to_uid: dict[tuple, int] = {}
    reps: list[Ltl] = []
    stack: list[tuple[Ltl, bool]] = [(f, False)]
    while stack:
        n, done = stack.pop()
        if id(n) in uid_of:
            continue
        kids = _children(n)
        if not done and kids:
            stack.append((n, True))
            stack.extend((k, False) for k in kids)
            continue
        if isinstance(n, LProp):
            key = ("p", n.name)
        elif isinstance(n, LFalse):
            key = ("f",)
        else:
            key = (type(n).__name__,) + tuple(uid_of[id(k)] for k in kids)
        uid = key_to_uid.get(key)
        if uid is None:
            uid = len(reps)
            key_to_uid[key] = uid
            reps.append(n)
        uid_of[id(n)] = uid
    return uid_of, reps


def map_formula(f: Ltl, leaf: Callable[[Ltl], Ltl]) -> Ltl:
    """Rebuild f bottom-up with `leaf` applied to LProp/LFalse nodes."""
    memo: dict[int, Ltl] = {}
    stack: list[tuple[Ltl, bool]] = [(f, False)]
    while stack:
        n, done = stack.pop()
        if id(n) in memo:
            continue
        kids = _children(n)
        if not done and kids:
            stack.append((n, True))
            stack.extend((k, False) for k in kids)
            continue
        if not kids:
            memo[id(n)] = leaf(n)
        else:
            new_kids = tuple(memo[id(k)] for k in kids)
            memo[id(n)] = type(n)(*new_kids)
    return memo[id(f)]


# --- simplification ---------------------------------------------------------

def _spine_conjuncts(f: Ltl) -> list[Ltl]:
    """Leaves of the maximal conjunction spine rooted at f, left to right."""
    out: list[Ltl] = []
    stack = [f]
    while stack:
        n = stack.pop()
        if isinstance(n, LAnd):
            stack.append(n.right)
            stack.append(n.left)
        else:
            out.append(n)
    return out


def _negated(x: Ltl) -> Ltl:
    return x.arg if isinstance(x, LNot) else LNot(x)


def _merge_siblings(parts: list[Ltl]) -> list[Ltl]:
    """Collapse sibling conjuncts under a shared modality: ¬𝕆x ∧ ¬𝕆y →
    ¬𝕆¬(¬x∧¬y) for 𝕆 ∈ {◇F, ◇P, ◇P◇F} and ○x ∧ ○y → ○(x∧y).  All four
    rewrites are equivalences; first-occurrence order is preserved."""
    groups: dict[str, list[Ltl]] = {"bf": [], "bp": [], "bpf": [], "xf": [], "xp": []}
    slots: dict[str, int] = {}
    out: list[Ltl | None] = []

    def classify(p: Ltl) -> tuple[str, Ltl] | None:
        if isinstance(p, LNot):
            if isinstance(p.arg, LSomeP):
                if isinstance(p.arg.arg, LSomeF):
                    return "bpf", p.arg.arg.arg
                return "bp", p.arg.arg
            if isinstance(p.arg, LSomeF):
                return "bf", p.arg.arg
        elif isinstance(p, LNextF):
            return "xf", p.arg
        elif isinstance(p, LNextP):
            return "xp", p.arg
        return None

    for p in parts:
        hit = classify(p)
        if hit is None:
            out.append(p)
            continue
        tag, a = hit
        groups[tag].append((p, a))
        if tag not in slots:
            slots[tag] = len(out)
            out.append(None)
    for tag, slot in slots.items():
        entries = groups[tag]
        if len(entries) == 1:
            out[slot] = entries[0][0]
            continue
        if tag in ("xf", "xp"):
            body = conj([a for _, a in entries])
            out[slot] = LNextF(body) if tag == "xf" else LNextP(body)
            continue
        # the disjunction of the diamond arguments, as ¬(⋀¬xᵢ)
        body = LNot(conj([_negated(a) for _, a in entries]))
        if tag == "bf":
            out[slot] = LNot(LSomeF(body))
        elif tag == "bp":
            out[slot] = LNot(LSomeP(body))
        else:
            out[slot] = LNot(LSomeP(LSomeF(body)))
    return [p for p in out if p is not None]


def simplify(f: Ltl) -> Ltl:
    """Sound shrinking: double-negation elimination, conjunction flattening
    with structural deduplication, sibling box/next merging, truth/falsum
    propagation, idempotent eventually.  Preserves equivalence.
    """
    memo: dict[int, Ltl] = {}

    def is_true(n: Ltl) -> bool:
        return isinstance(n, LNot) and isinstance(n.arg, LFalse)

    stack: list[tuple[Ltl, bool]] = [(f, False)]
    while stack:
        n, done = stack.pop()
        if id(n) in memo:
            continue
        if not done:
            stack.append((n, True))
            if isinstance(n, LAnd):
                stack.extend((c, False) for c in _spine_conjuncts(n))
            elif isinstance(n, _UNARY):
                stack.append((n.arg, False))
            continue
        if isinstance(n, LAnd):
            parts: list[Ltl] = []
            keys: set[int] = set()
            bottom = False
            for c in _spine_conjuncts(n):
                sc = memo[id(c)]
                if isinstance(sc, LFalse):
                    bottom = True
                    break
                if is_true(sc):
                    continue
                if id(sc) in keys:
                    continue
                keys.add(id(sc))
                parts.append(sc)
            if bottom:
                memo[id(n)] = FALSE
            else:
                memo[id(n)] = conj(_merge_siblings(parts))
        elif isinstance(n, LNot):
            a = memo[id(n.arg)]
            if isinstance(a, LNot):
                memo[id(n)] = a.arg
            else:
                memo[id(n)] = LNot(a)
        elif isinstance(n, LSomeF):
            a = memo[id(n.arg)]
            if isinstance(a, (LFalse, LSomeF)) or is_true(a):
                memo[id(n)] = a
            else:
                memo[id(n)] = LSomeF(a)
        elif isinstance(n, LSomeP):
            a = memo[id(n.arg)]
            if isinstance(a, (LFalse, LSomeP)) or is_true(a):
                memo[id(n)] = a
            else:
                memo[id(n)] = LSomeP(a)
        elif isinstance(n, (LNextF, LNextP)):
            a = memo[id(n.arg)]
            if is_true(a):
                memo[id(n)] = a
            else:
                memo[id(n)] = type(n)(a)
        else:
            memo[id(n)] = n
    return memo[id(f)]


def _constancy_conjunct(c: Ltl, two_sided: bool) -> Ltl:
    """Rewrite a box-body conjunct forcing a formula to be constant over
    the whole flow into its one-step form.

    ¬(◇Fa ∧ ◇F¬a) under any enclosing box, and ¬(a ∧ ◇P◇F¬a) under an
    enclosing two-sided box, both say "a never changes value"; repeated at
    every instant that is exactly ⋀(a ↔ ○Fa).  The one-step form keeps
    the symbolic checker's transition constraints local.
    """
    if not isinstance(c, LNot) or not isinstance(c.arg, LAnd):
        return c
    a, b = c.arg.left, c.arg.right
    if isinstance(a, LSomeF) and isinstance(b, LSomeF):
        if struct_eq(_negated(a.arg), b.arg) or struct_eq(a.arg, _negated(b.arg)):
            return iff(a.arg, LNextF(a.arg))
    if (
        two_sided
        and isinstance(b, LSomeP)
        and isinstance(b.arg, LSomeF)
        and struct_eq(_negated(a), b.arg.arg)
    ):
        return iff(a, LNextF(a))
    return c


def _rewrite_box_body(body: Ltl, two_sided: bool) -> Ltl | None:
    parts = _spine_conjuncts(body)
    rewritten = [_constancy_conjunct(c, two_sided) for c in parts]
    if all(r is c for r, c in zip(rewritten, parts)):
        return None
    return conj(rewritten)


def _rigidity_rewrite(f: Ltl) -> Ltl:
    """Apply the constancy rewrite inside every boxed conjunction,
    rebuilding bottom-up."""
    memo: dict[int, Ltl] = {}
    stack: list[tuple[Ltl, bool]] = [(f, False)]
    while stack:
        n, done = stack.pop()
        if id(n) in memo:
            continue
        kids = _children(n)
        if not done and kids:
            stack.append((n, True))
            stack.extend((k, False) for k in kids)
            continue
        new = type(n)(*(memo[id(k)] for k in kids)) if kids else n
        if isinstance(new, LSomeF) and isinstance(new.arg, LNot):
            body = _rewrite_box_body(new.arg.arg, two_sided=False)
            if body is not None:
                new = LSomeF(LNot(body))
        elif (
            isinstance(new, LSomeP)
            and isinstance(new.arg, LSomeF)
            and isinstance(new.arg.arg, LNot)
        ):
            body = _rewrite_box_body(new.arg.arg.arg, two_sided=True)
            if body is not None:
                new = LSomeP(LSomeF(LNot(body)))
        memo[id(n)] = new
    return memo[id(f)]


def optimize(f: Ltl, max_rounds: int = 10) -> Ltl:
    """simplify to a fixpoint: sibling merging can expose new merges one
    nesting level down, so a few rounds are needed to fully collapse
    box towers."""
    size = tree_size(f)
    for _ in range(max_rounds):
        f = simplify(_rigidity_rewrite(f))
        new_size = tree_size(f)
        if new_size == size:
            break
        size = new_size
    return f


# --- infix concrete syntax --------------------------------------------------

_TOKEN_OF = {LNot: "~", LNextF: "X", LNextP: "Y", LSomeF: "F", LSomeP: "P"}


def to_infix(f: Ltl) -> str:
    """Fully parenthesized one-line infix form.

    Uses only the core tokens `~ & X F true false` for past-free formulas;
    past operators (debug dumps only) print as `Y` and `P`.
    """
    parts: list[str] = []
    stack: list[object] = [f]
    while stack:
        n = stack.pop()
        if isinstance(n, str):
            parts.append(n)
            continue
        if isinstance(n, LFalse):
            parts.append("false")
        elif isinstance(n, LProp):
            parts.append(n.name)
        elif isinstance(n, LNot) and isinstance(n.arg, LFalse):
            parts.append("true")
        elif isinstance(n, LAnd):
            # whole conjunction spines print as one flat group, keeping
            # the nesting depth (and the reader's recursion) shallow
            group: list[object] = ["("]
            for i, op in enumerate(_spine_conjuncts(n)):
                if i:
                    group.append(" & ")
                group.append(op)
            group.append(")")
            stack.extend(reversed(group))
        else:
            stack.extend([")", n.arg, f"({_TOKEN_OF[type(n)]} "])
    return "".join(parts)


class InfixSyntaxError(ValueError):
    pass


def parse_infix(text: str) -> Ltl:
    """Parser for the infix format (test support and `--solver` plumbing).

    Accepts the emitted core plus the usual extended tokens:
    `| -> <-> G` and past `Y P H`.  Precedence: unary > & > | > -> > <->.
    """
    toks: list[str] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif text.startswith("<->", i):
            toks.append("<->")
            i += 3
        elif text.startswith("->", i):
            toks.append("->")
            i += 2
        elif ch in "~&|()":
            toks.append(ch)
            i += 1
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(text[i:j])
            i = j
        else:
            raise InfixSyntaxError(f"unexpected character {ch!r} at offset {i}")
    toks.append("<eof>")
    pos = 0

    def peek() -> str:
        return toks[pos]

    def take() -> str:
        nonlocal pos
        tok = toks[pos]
        pos += 1
        return tok

    unary = {"~": LNot, "X": LNextF, "F": LSomeF, "Y": LNextP, "P": LSomeP}

    def atom() -> Ltl:
        tok = take()
        if tok == "(":
            out = bicond()
            if take() != ")":
                raise InfixSyntaxError("expected ')'")
            return out
        if tok in unary:
            return unary[tok](atom())
        if tok == "G":
            return alw_f(atom())
        if tok == "H":
            return alw_p(atom())
        if tok == "true":
            return TRUE
        if tok == "false":
            return FALSE
        if tok[0].isalpha() and tok not in ("<eof>",):
            return LProp(tok)
        raise InfixSyntaxError(f"unexpected token {tok!r}")

    def conj_level() -> Ltl:
        out = atom()
        while peek() == "&":
            take()
            out = LAnd(out, atom())
        return out

    def disj_level() -> Ltl:
        out = conj_level()
        while peek() == "|":
            take()
            out = lor(out, conj_level())
        return out

    def impl_level() -> Ltl:
        out = disj_level()
        if peek() == "->":
            take()
            return implies(out, impl_level())
        return out

    def bicond() -> Ltl:
        out = impl_level()
        while peek() == "<->":
            take()
            out = iff(out, impl_level())
        return out

    out = bicond()
    if peek() != "<eof>":
        raise InfixSyntaxError(f"trailing input {peek()!r}")
    return out


def struct_eq(a: Ltl, b: Ltl) -> bool:
    """Structural equality, safe on deep formulas."""
    uid_of, _ = structural_index(LAnd(a, b))
    return uid_of[id(a)] == uid_of[id(b)]
