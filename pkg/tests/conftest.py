"""Shared helpers: toy corpus loading, random formula/word generation."""

from __future__ import annotations

import random
from importlib import resources

from tdlite.kb import KnowledgeBase
from tdlite.kbparse import parse_kb
from tdlite.ltl import LAnd, LNextF, LNextP, LNot, LProp, LSomeF, LSomeP, Ltl
from tdlite.oracle import BiLassoWord, LassoWord

PROPS = ("a", "b", "c", "d")
UNARY_OPS = (LNot, LNextF, LNextP, LSomeF, LSomeP)
FUTURE_UNARY_OPS = (LNot, LNextF, LSomeF)

TOY_VERDICTS = {
    "ex1": "UNSAT",
    "ex1_tbox": "SAT",
    "ex2": "UNSAT",
    "ex2_variant": "SAT",
}


def load_toy(name: str) -> KnowledgeBase:
    text = (resources.files("tdlite") / "data" / f"{name}.kb").read_text()
    return parse_kb(text)


def random_ltlp(
    size: int,
    rng: random.Random,
    unary: tuple = UNARY_OPS,
    props: tuple[str, ...] = PROPS,
) -> Ltl:
    """A random formula with exactly `size` nodes over the given alphabet."""
    if size <= 1:
        return LProp(rng.choice(props))
    if size == 2 or rng.random() < 0.6:
        return rng.choice(unary)(random_ltlp(size - 1, rng, unary, props))
    k = rng.randint(1, size - 2)
    return LAnd(
        random_ltlp(k, rng, unary, props),
        random_ltlp(size - 1 - k, rng, unary, props),
    )


def _valuations(rng: random.Random, count: int, props: tuple[str, ...]):
    return tuple(
        frozenset(p for p in props if rng.random() < 0.5) for _ in range(count)
    )


def random_lasso(rng: random.Random, props: tuple[str, ...] = PROPS) -> LassoWord:
    return LassoWord(
        prefix=_valuations(rng, rng.randint(0, 3), props),
        loop=_valuations(rng, rng.randint(1, 3), props),
    )


def qand_spine(f):
    """The conjuncts of a QTL conjunction spine, left to right."""
    from tdlite.qtl import QAnd

    out, stack = [], [f]
    while stack:
        n = stack.pop()
        if isinstance(n, QAnd):
            stack.append(n.right)
            stack.append(n.left)
        else:
            out.append(n)
    return out


def count_monotonicity_conjuncts(tbox_formula, tbox_len: int) -> int:
    """Structural count of the cardinality-monotonicity axioms in a
    translated TBox: boxed ∀x (≥q′R → ≥qR) with the same role and q′ > q,
    skipping the leading concept-inclusion conjuncts."""
    from tdlite.qtl import CardPred, QAlwF, QAlwP, QAnd, QAtom, QForAll, QNot, Var

    count = 0
    for c in qand_spine(tbox_formula)[tbox_len:]:
        while isinstance(c, (QAlwF, QAlwP)):
            c = c.arg
        if not isinstance(c, QForAll):
            continue
        body = c.body  # q_implies(a, b) is ¬(a ∧ ¬b)
        if not (isinstance(body, QNot) and isinstance(body.arg, QAnd)):
            continue
        ante, cons = body.arg.left, body.arg.right
        if not (isinstance(cons, QNot) and isinstance(cons.arg, QAtom)):
            continue
        cons = cons.arg
        if not (isinstance(ante, QAtom) and isinstance(ante.pred, CardPred)):
            continue
        if not isinstance(cons.pred, CardPred):
            continue
        if not (isinstance(ante.term, Var) and isinstance(cons.term, Var)):
            continue
        if ante.pred.role == cons.pred.role and ante.pred.q > cons.pred.q:
            count += 1
    return count


def random_bilasso(rng: random.Random, props: tuple[str, ...] = PROPS) -> BiLassoWord:
    return BiLassoWord(
        left_loop=_valuations(rng, rng.randint(1, 3), props),
        left_prefix=_valuations(rng, rng.randint(0, 3), props),
        anchor=_valuations(rng, 1, props)[0],
        right_prefix=_valuations(rng, rng.randint(0, 3), props),
        right_loop=_valuations(rng, rng.randint(1, 3), props),
    )
