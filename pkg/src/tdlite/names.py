"""Deterministic, solver-safe naming for propositions and witness constants.

All names are lowercased with `__` separating components, so they satisfy
`[a-z][a-z0-9_]*` whenever the source identifiers do.  Injectivity over a
well-formed signature is guaranteed by the NAME_CASE_COLLISION check.
"""

from __future__ import annotations

from .kb import Role


def role_tag(role: Role) -> str:
    """`r` or `r_inv`, the role component used in every role-derived name."""
    return role.name.lower() + ("_inv" if role.inverted else "")


def concept_prop(concept_name: str, constant: str) -> str:
    return f"c_{concept_name.lower()}__{constant.lower()}"


def card_prop(q: int, role: Role, constant: str) -> str:
    return f"geq_{q}__{role_tag(role)}__{constant.lower()}"


def role_prop(role: Role) -> str:
    return f"p__{role_tag(role)}"


def witness_const(role: Role) -> str:
    return f"w__{role_tag(role)}"


SYNTHETIC_CONST = "w__0"
