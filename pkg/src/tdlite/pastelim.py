"""Removal of past operators by folding the negative timeline onto ℕ.

Every proposition A is split into a pair A__pos / A__neg read off the
non-negative and the mirrored negative half of the timeline; every temporal
subformula gets a surrogate pair updated by step clauses under an outer
always-future.  The two halves are tied together at time zero by
biconditionals over the whole alphabet.  The result is past-free and linear
in the size of the input.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ltl import (
    LAnd,
    LFalse,
    LNot,
    LNextF,
    LNextP,
    LProp,
    LSomeF,
    LSomeP,
    Ltl,
    alw_f,
    conj,
    iff,
    lor,
    structural_index,
)

_TEMPORAL = (LNextF, LNextP, LSomeF, LSomeP)


@dataclass(frozen=True, slots=True)
class SubformulaTable:
    """Distinct subformulas of the input plus the paired alphabet.

    `reps` holds one representative per structurally distinct subformula in
    post-order; `prop_pairs` maps each input proposition to its pair of
    names, `surrogate_pairs` maps the post-order index of each temporal
    subformula to its surrogate pair.
    """

    uid_of: dict[int, int]
    reps: list[Ltl]
    prop_pairs: dict[str, tuple[str, str]]
    surrogate_pairs: dict[int, tuple[str, str]]

    def pair_names(self, xi: Ltl) -> tuple[str, str]:
        uid = self.uid_of[id(xi)]
        rep = self.reps[uid]
        if isinstance(rep, LProp):
            return self.prop_pairs[rep.name]
        return self.surrogate_pairs[uid]


def build_table(f: Ltl) -> SubformulaTable:
    uid_of, reps = structural_index(f)
    prop_pairs = {
        rep.name: (f"{rep.name}__pos", f"{rep.name}__neg")
        for rep in reps
        if isinstance(rep, LProp)
    }
    surrogate_pairs = {
        uid: (f"s{uid}__pos", f"s{uid}__neg")
        for uid, rep in enumerate(reps)
        if isinstance(rep, _TEMPORAL)
    }
    return SubformulaTable(uid_of, reps, prop_pairs, surrogate_pairs)


def _bar_all(table: SubformulaTable) -> tuple[list[Ltl], list[Ltl]]:
    """bar(rep, +) and bar(rep, −) for every representative, by uid."""
    pos: list[Ltl] = []
    neg: list[Ltl] = []
    for uid, rep in enumerate(table.reps):
        if isinstance(rep, LProp):
            p, m = table.prop_pairs[rep.name]
            pos.append(LProp(p))
            neg.append(LProp(m))
        elif isinstance(rep, LFalse):
            pos.append(rep)
            neg.append(rep)
        elif isinstance(rep, LNot):
            k = table.uid_of[id(rep.arg)]
            pos.append(LNot(pos[k]))
            neg.append(LNot(neg[k]))
        elif isinstance(rep, LAnd):
            kl = table.uid_of[id(rep.left)]
            kr = table.uid_of[id(rep.right)]
            pos.append(LAnd(pos[kl], pos[kr]))
            neg.append(LAnd(neg[kl], neg[kr]))
        else:
            p, m = table.surrogate_pairs[uid]
            pos.append(LProp(p))
            neg.append(LProp(m))
    return pos, neg


def bar(xi: Ltl, polarity: str, table: SubformulaTable) -> Ltl:
    """The flattening of a subformula to a temporal-operator-free formula
    over the paired alphabet; polarity is 'plus' or 'minus'."""
    pos, neg = _bar_all(table)
    uid = table.uid_of[id(xi)]
    return pos[uid] if polarity == "plus" else neg[uid]


def depast_with_table(f: Ltl) -> tuple[Ltl, SubformulaTable]:
    table = build_table(f)
    pos, neg = _bar_all(table)

    parts: list[Ltl] = [pos[table.uid_of[id(f)]]]

    sync: list[Ltl] = []
    for name in sorted(table.prop_pairs):
        p, m = table.prop_pairs[name]
        sync.append(iff(LProp(p), LProp(m)))
    for uid in sorted(table.surrogate_pairs):
        p, m = table.surrogate_pairs[uid]
        sync.append(iff(LProp(p), LProp(m)))
    if sync:
        parts.append(conj(sync))

    steps: list[Ltl] = []
    for uid, rep in enumerate(table.reps):
        if not isinstance(rep, _TEMPORAL):
            continue
        k = table.uid_of[id(rep.arg)]
        self_pos, self_neg = pos[uid], neg[uid]
        arg_pos, arg_neg = pos[k], neg[k]
        if isinstance(rep, LNextF):
            steps.append(iff(LNextF(self_neg), arg_neg))
            steps.append(iff(self_pos, LNextF(arg_pos)))
        elif isinstance(rep, LNextP):
            steps.append(iff(LNextF(self_pos), arg_pos))
            steps.append(iff(self_neg, LNextF(arg_neg)))
        elif isinstance(rep, LSomeF):
            steps.append(iff(LNextF(self_neg), lor(self_neg, LNextF(arg_neg))))
            steps.append(iff(self_pos, LSomeF(arg_pos)))
        else:  # LSomeP
            steps.append(iff(LNextF(self_pos), lor(self_pos, LNextF(arg_pos))))
            steps.append(iff(self_neg, LSomeF(arg_neg)))
    if steps:
        parts.append(alw_f(conj(steps)))

    return conj(parts), table


def depast(f: Ltl) -> Ltl:
    """Equisatisfiable past-free translation of an LTL formula over ℤ."""
    out, _ = depast_with_table(f)
    return out


def reconstruct_value(
    table: SubformulaTable,
    prop: str,
    time: int,
    read: "callable",
) -> bool:
    """Truth value of an input proposition at an integer time point, read
    from an ℕ model of the translated formula via `read(name, index)`."""
    p, m = table.prop_pairs[prop]
    if time >= 0:
        return read(p, time)
    return read(m, -time)
