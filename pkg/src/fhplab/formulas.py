"""Prefix-tree first-order formulas over finite structures.

Trees are plain nested lists (JSON-ready).  Terms:

    ["var", i]            positional variable
    ["const", v]          constant, normalized by the structure
    ["+", t, t]  ["*", t, t]  ["-", t, t]  ["neg", t]
    ["func", name, t...]  named function of the structure

Formulas:

    ["=", t, t]
    ["rel", name, t...]
    ["and", f...]  ["or", f...]  ["not", f]
    ["exists", i, f]  ["forall", i, f]
    ["true"]  ["false"]

A structure supplies `universe` (a sequence), `fn(name, args)`,
`rel(name, args)`, and `const(value)`.  Quantifiers range over the whole
universe.  Referencing a variable that is neither bound by a quantifier
nor supplied in the assignment is an error, not a silent default.
"""

from __future__ import annotations

_RING_FN = {"+": "+", "*": "*", "-": "-", "neg": "neg"}


def _tag(node):
    if not isinstance(node, (list, tuple)) or not node or not isinstance(
        node[0], str
    ):
        raise ValueError(f"malformed formula node: {node!r}")
    return node[0]


def evaluate_term(structure, node, env: dict):
    tag = _tag(node)
    if tag == "var":
        i = node[1]
        if i not in env:
            raise ValueError(f"unbound variable {i}")
        return env[i]
    if tag == "const":
        return structure.const(node[1])
    if tag in _RING_FN:
        args = [evaluate_term(structure, a, env) for a in node[1:]]
        return structure.fn(tag, args)
    if tag == "func":
        args = [evaluate_term(structure, a, env) for a in node[2:]]
        return structure.fn(node[1], args)
    raise ValueError(f"unknown term tag {tag!r}")


def evaluate_formula(structure, node, env: dict) -> bool:
    tag = _tag(node)
    if tag == "true":
        return True
    if tag == "false":
        return False
    if tag == "=":
        return evaluate_term(structure, node[1], env) == evaluate_term(
            structure, node[2], env
        )
    if tag == "rel":
        args = [evaluate_term(structure, a, env) for a in node[2:]]
        return structure.rel(node[1], args)
    if tag == "and":
        return all(evaluate_formula(structure, f, env) for f in node[1:])
    if tag == "or":
        return any(evaluate_formula(structure, f, env) for f in node[1:])
    if tag == "not":
        return not evaluate_formula(structure, node[1], env)
    if tag in ("exists", "forall"):
        i = node[1]
        sub = node[2]
        had = i in env
        old = env.get(i)
        try:
            if tag == "exists":
                for v in structure.universe:
                    env[i] = v
                    if evaluate_formula(structure, sub, env):
                        return True
                return False
            for v in structure.universe:
                env[i] = v
                if not evaluate_formula(structure, sub, env):
                    return False
            return True
        finally:
            if had:
                env[i] = old
            else:
                env.pop(i, None)
    raise ValueError(f"unknown formula tag {tag!r}")
