"""CPLEX LP format writer and reader for MilpModel round trips.

The writer is deterministic: given equal models it emits byte-identical
text.  The reader accepts the writer's dialect (one constraint per line,
explicit bounds for continuous variables, a Binaries section).
"""
from __future__ import annotations

from .errors import ParseError
from .mip import Constraint, MilpModel, Variable


def _fmt(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(float(x))


def _expr(terms) -> str:
    parts = []
    for name, coef in terms:
        sign = "-" if coef < 0 else "+"
        parts.append(f"{sign} {_fmt(abs(coef))} {name}")
    return " ".join(parts) if parts else "+ 0 __zero__"


def export_lp(model: MilpModel) -> str:
    """Render a model as CPLEX LP text."""
    lines = ["Maximize" if model.sense == "max" else "Minimize"]
    lines.append(f" obj: {_expr(model.objective)}")
    lines.append("Subject To")
    for con in model.constraints:
        lines.append(f" {con.name}: {_expr(con.terms)} {con.relation} {_fmt(con.rhs)}")
    lines.append("Bounds")
    for v in model.variables:
        if v.kind == "continuous":
            lines.append(f" {_fmt(v.lower)} <= {v.name} <= {_fmt(v.upper)}")
    binaries = [v.name for v in model.variables if v.kind == "binary"]
    if binaries:
        lines.append("Binaries")
        lines.append(" " + " ".join(binaries))
    lines.append("End")
    return "\n".join(lines) + "\n"


def _parse_terms(tokens) -> tuple[tuple[str, float], ...]:
    terms = []
    sign = 1.0
    coef = None
    for tok in tokens:
        if tok == "+":
            sign = 1.0
        elif tok == "-":
            sign = -1.0 if coef is None else sign * -1.0
        else:
            try:
                value = float(tok)
            except ValueError:
                value = None
            if value is not None and coef is None:
                coef = value
            else:
                if tok == "__zero__":
                    sign, coef = 1.0, None
                    continue
                terms.append((tok, sign * (1.0 if coef is None else coef)))
                sign, coef = 1.0, None
    if coef is not None:
        raise ParseError(f"dangling coefficient {coef} in expression")
    return tuple(terms)


def read_lp(text: str) -> MilpModel:
    """Parse LP text written by :func:`export_lp` back into a model."""
    sense = None
    objective: tuple = ()
    constraints: list[Constraint] = []
    bounds: dict[str, tuple[float, float]] = {}
    bound_order: list[str] = []
    binaries: list[str] = []
    section = None
    mentioned: list[str] = []
    seen: set[str] = set()

    def note_vars(terms):
        for name, _ in terms:
            if name not in seen:
                seen.add(name)
                mentioned.append(name)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        lowered = line.lower()
        if lowered in ("maximize", "minimize"):
            sense = "max" if lowered == "maximize" else "min"
            section = "objective"
            continue
        if lowered in ("subject to", "st", "s.t."):
            section = "constraints"
            continue
        if lowered == "bounds":
            section = "bounds"
            continue
        if lowered in ("binaries", "binary"):
            section = "binaries"
            continue
        if lowered == "end":
            break

        if section == "objective":
            name, _, expr = line.partition(":")
            objective = _parse_terms(expr.split())
            note_vars(objective)
        elif section == "constraints":
            name, colon, rest = line.partition(":")
            if not colon:
                raise ParseError("constraint missing name", line=lineno)
            tokens = rest.split()
            rel_pos = next((i for i, t in enumerate(tokens) if t in ("<=", ">=", "=")), None)
            if rel_pos is None or rel_pos != len(tokens) - 2:
                raise ParseError(f"expected '<rel> <rhs>' at line end: {line!r}", line=lineno)
            terms = _parse_terms(tokens[:rel_pos])
            note_vars(terms)
            constraints.append(
                Constraint(
                    name=name.strip(),
                    terms=terms,
                    relation=tokens[rel_pos],
                    rhs=float(tokens[rel_pos + 1]),
                )
            )
        elif section == "bounds":
            tokens = line.split()
            if len(tokens) == 5 and tokens[1] == "<=" and tokens[3] == "<=":
                name = tokens[2]
                bounds[name] = (float(tokens[0]), float(tokens[4]))
            elif len(tokens) == 3 and tokens[1] in ("<=", ">="):
                name = tokens[0]
                lo, hi = bounds.get(name, (0.0, float("inf")))
                if tokens[1] == "<=":
                    bounds[name] = (lo, float(tokens[2]))
                else:
                    bounds[name] = (float(tokens[2]), hi)
            else:
                raise ParseError(f"unsupported bounds line {line!r}", line=lineno)
            if name not in bound_order:
                bound_order.append(name)
        elif section == "binaries":
            for name in line.split():
                if name not in binaries:
                    binaries.append(name)
        else:
            raise ParseError(f"content outside any section: {line!r}", line=lineno)

    if sense is None:
        raise ParseError("missing objective sense header")
    # canonical variable order: binaries as listed, then bounded continuous
    # variables as listed, then anything only mentioned in expressions
    variables = []
    placed = set()
    for name in binaries:
        variables.append(Variable(name, "binary", 0.0, 1.0))
        placed.add(name)
    for name in bound_order:
        if name not in placed:
            lo, hi = bounds[name]
            variables.append(Variable(name, "continuous", lo, hi))
            placed.add(name)
    for name in mentioned:
        if name not in placed:
            variables.append(Variable(name, "continuous", 0.0, float("inf")))
            placed.add(name)
    return MilpModel(
        sense=sense,
        objective=objective,
        variables=tuple(variables),
        constraints=tuple(constraints),
    )
