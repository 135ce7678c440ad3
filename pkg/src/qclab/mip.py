"""Solver-agnostic mixed-integer models for maximum quasi-clique.

Three formulations are built exactly as published: the big-M linearization
(mip7), the edge-variable model (mip8), and its aggregated variant (mip9).
The published upper linking row of mip7 carries a sign pattern that makes
any assignment with an excluded vertex infeasible; ``corrected_7e=True``
opts into the repaired row (coefficient A_ij - gamma and +nu slack) for
experimentation.  Models are immutable and export to CPLEX LP text.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError
from .graph import Graph, as_vertex_set, check_gamma


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str  # "binary" | "continuous"
    lower: float
    upper: float

    def __post_init__(self):
        if self.kind not in ("binary", "continuous"):
            raise InputError(f"bad variable kind {self.kind!r}")
        if self.kind == "binary" and (self.lower, self.upper) != (0.0, 1.0):
            raise InputError(f"binary {self.name} must have bounds {{0, 1}}")


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple[tuple[str, float], ...]
    relation: str  # "<=" | ">=" | "="
    rhs: float

    def __post_init__(self):
        if self.relation not in ("<=", ">=", "="):
            raise InputError(f"bad relation {self.relation!r}")


@dataclass(frozen=True)
class MilpModel:
    sense: str  # "max" | "min"
    objective: tuple[tuple[str, float], ...]
    variables: tuple[Variable, ...]
    constraints: tuple[Constraint, ...]
    metadata: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        declared = {v.name for v in self.variables}
        if len(declared) != len(self.variables):
            raise InputError("duplicate variable names")
        for name, _ in self.objective:
            if name not in declared:
                raise InputError(f"objective references undeclared {name}")
        for con in self.constraints:
            for name, _ in con.terms:
                if name not in declared:
                    raise InputError(f"constraint {con.name} references undeclared {name}")

    def variable(self, name: str) -> Variable:
        for v in self.variables:
            if v.name == name:
                return v
        raise InputError(f"no variable named {name}")


@dataclass
class CheckResult:
    feasible: bool
    objective: float
    violated: list[str]


def _terms(pairs) -> tuple[tuple[str, float], ...]:
    return tuple((name, float(c)) for name, c in pairs if c != 0)


def build_mip7(g: Graph, gamma, nu: float | None = None, corrected_7e: bool = False) -> MilpModel:
    """Big-M linearization with per-vertex density contributions h_i.

    Default nu = n is a safe big-M since |h_i| < n on binary points.
    """
    gamma_f = float(check_gamma(gamma))
    n = g.n
    nu = float(n) if nu is None else float(nu)
    if nu <= 0:
        raise InputError("nu must be positive")
    masks = g.neighbor_masks

    variables = [Variable(f"x_{i}", "binary", 0.0, 1.0) for i in range(n)]
    variables += [Variable(f"h_{i}", "continuous", -nu, nu) for i in range(n)]
    objective = _terms((f"x_{i}", 1.0) for i in range(n))

    cons = [Constraint("density_sum", _terms((f"h_{i}", 1.0) for i in range(n)), ">=", 0.0)]
    for i in range(n):
        cons.append(Constraint(f"h_ub_{i}", _terms([(f"h_{i}", 1.0), (f"x_{i}", -nu)]), "<=", 0.0))
        cons.append(Constraint(f"h_lb_{i}", _terms([(f"h_{i}", 1.0), (f"x_{i}", nu)]), ">=", 0.0))
    for i in range(n):
        # h_i >= gamma x_i + sum_j (A_ij - gamma) x_j - nu (1 - x_i)
        coefs = {f"h_{i}": 1.0, f"x_{i}": -gamma_f - nu}
        for j in range(n):
            a_ij = 1.0 if masks[i] >> j & 1 else 0.0
            coefs[f"x_{j}"] = coefs.get(f"x_{j}", 0.0) - (a_ij - gamma_f)
        cons.append(Constraint(f"h_link_lo_{i}", _terms(sorted(coefs.items(), key=_var_key)), ">=", -nu))
    for i in range(n):
        if corrected_7e:
            # repaired row: h_i <= gamma x_i + sum_j (A_ij - gamma) x_j + nu (1 - x_i)
            coefs = {f"h_{i}": 1.0, f"x_{i}": -gamma_f + nu}
            delta, rhs = -gamma_f, nu
        else:
            # as published: h_i <= gamma x_i + sum_j (A_ij + gamma) x_j - nu (1 - x_i)
            coefs = {f"h_{i}": 1.0, f"x_{i}": -gamma_f - nu}
            delta, rhs = gamma_f, -nu
        for j in range(n):
            a_ij = 1.0 if masks[i] >> j & 1 else 0.0
            coefs[f"x_{j}"] = coefs.get(f"x_{j}", 0.0) - (a_ij + delta)
        cons.append(Constraint(f"h_link_up_{i}", _terms(sorted(coefs.items(), key=_var_key)), "<=", rhs))

    return MilpModel(
        sense="max",
        objective=objective,
        variables=tuple(variables),
        constraints=tuple(cons),
        metadata={"formulation": "mip7", "gamma": gamma_f, "nu": nu, "corrected_7e": corrected_7e},
    )


def _size_bounds(g: Graph, omega_l, omega_u) -> tuple[int, int]:
    omega_u = g.n if omega_u is None else int(omega_u)
    omega_l = int(omega_l)
    if not 0 <= omega_l <= omega_u <= g.n:
        raise InputError(f"need 0 <= omega_l <= omega_u <= n, got [{omega_l}, {omega_u}]")
    return omega_l, omega_u


def build_mip8(g: Graph, gamma, omega_l: int = 0, omega_u: int | None = None) -> MilpModel:
    """Edge-variable model: z_ij marks edges inside the chosen set, s_t its
    size; the density row compares selected edges against gamma C(t, 2)."""
    gamma_f = float(check_gamma(gamma))
    omega_l, omega_u = _size_bounds(g, omega_l, omega_u)
    n = g.n
    edges = g.sorted_edges

    variables = [Variable(f"x_{i}", "binary", 0.0, 1.0) for i in range(n)]
    variables += [Variable(f"z_{u}_{v}", "continuous", 0.0, 1.0) for u, v in edges]
    variables += [Variable(f"s_{t}", "continuous", 0.0, 1.0) for t in range(omega_l, omega_u + 1)]
    objective = _terms((f"x_{i}", 1.0) for i in range(n))

    density = [(f"z_{u}_{v}", 1.0) for u, v in edges]
    density += [(f"s_{t}", -gamma_f * t * (t - 1) / 2.0) for t in range(omega_l, omega_u + 1)]
    cons = [Constraint("density", _terms(density), ">=", 0.0)]
    for u, v in edges:
        cons.append(Constraint(f"z_le_x_{u}_{v}_a", _terms([(f"z_{u}_{v}", 1.0), (f"x_{u}", -1.0)]), "<=", 0.0))
        cons.append(Constraint(f"z_le_x_{u}_{v}_b", _terms([(f"z_{u}_{v}", 1.0), (f"x_{v}", -1.0)]), "<=", 0.0))
    size_link = [(f"x_{i}", 1.0) for i in range(n)]
    size_link += [(f"s_{t}", -float(t)) for t in range(omega_l, omega_u + 1)]
    cons.append(Constraint("size_link", _terms(size_link), "=", 0.0))
    cons.append(
        Constraint("size_choice", _terms((f"s_{t}", 1.0) for t in range(omega_l, omega_u + 1)), "=", 1.0)
    )

    return MilpModel(
        sense="max",
        objective=objective,
        variables=tuple(variables),
        constraints=tuple(cons),
        metadata={"formulation": "mip8", "gamma": gamma_f, "omega_l": omega_l, "omega_u": omega_u},
    )


def build_mip9(g: Graph, gamma, omega_l: int = 0, omega_u: int | None = None) -> MilpModel:
    """Aggregated model: w_i counts selected neighbors of a selected i,
    capped by psi_i = deg(i); the density row uses sum(w) = 2 e(S)."""
    gamma_f = float(check_gamma(gamma))
    omega_l, omega_u = _size_bounds(g, omega_l, omega_u)
    n = g.n
    psi = g.degrees

    variables = [Variable(f"x_{i}", "binary", 0.0, 1.0) for i in range(n)]
    variables += [Variable(f"w_{i}", "continuous", 0.0, float(psi[i])) for i in range(n)]
    variables += [Variable(f"s_{t}", "continuous", 0.0, 1.0) for t in range(omega_l, omega_u + 1)]
    objective = _terms((f"x_{i}", 1.0) for i in range(n))

    density = [(f"w_{i}", 1.0) for i in range(n)]
    density += [(f"s_{t}", -gamma_f * t * (t - 1)) for t in range(omega_l, omega_u + 1)]
    cons = [Constraint("density", _terms(density), ">=", 0.0)]
    masks = g.neighbor_masks
    for i in range(n):
        cons.append(
            Constraint(f"w_le_deg_{i}", _terms([(f"w_{i}", 1.0), (f"x_{i}", -float(psi[i]))]), "<=", 0.0)
        )
        nbr_terms = [(f"w_{i}", 1.0)]
        nbr_terms += [(f"x_{j}", -1.0) for j in range(n) if masks[i] >> j & 1]
        cons.append(Constraint(f"w_le_nbrs_{i}", _terms(nbr_terms), "<=", 0.0))
    size_link = [(f"x_{i}", 1.0) for i in range(n)]
    size_link += [(f"s_{t}", -float(t)) for t in range(omega_l, omega_u + 1)]
    cons.append(Constraint("size_link", _terms(size_link), "=", 0.0))
    cons.append(
        Constraint("size_choice", _terms((f"s_{t}", 1.0) for t in range(omega_l, omega_u + 1)), "=", 1.0)
    )

    return MilpModel(
        sense="max",
        objective=objective,
        variables=tuple(variables),
        constraints=tuple(cons),
        metadata={"formulation": "mip9", "gamma": gamma_f, "omega_l": omega_l, "omega_u": omega_u, "psi": tuple(psi)},
    )


BINARY_TOL = 1e-9
CONSTRAINT_TOL = 1e-7


def check(model: MilpModel, assignment: dict) -> CheckResult:
    """Evaluate feasibility (constraints, bounds, integrality) and the
    objective of a full assignment."""
    for v in model.variables:
        if v.name not in assignment:
            raise InputError(f"assignment missing variable {v.name}")
    violated = []
    for v in model.variables:
        val = float(assignment[v.name])
        if val < v.lower - CONSTRAINT_TOL or val > v.upper + CONSTRAINT_TOL:
            violated.append(f"bound:{v.name}")
        if v.kind == "binary" and min(abs(val), abs(val - 1.0)) > BINARY_TOL:
            violated.append(f"integrality:{v.name}")
    for con in model.constraints:
        lhs = sum(c * float(assignment[name]) for name, c in con.terms)
        gap = lhs - con.rhs
        bad = (
            (con.relation == "<=" and gap > CONSTRAINT_TOL)
            or (con.relation == ">=" and gap < -CONSTRAINT_TOL)
            or (con.relation == "=" and abs(gap) > CONSTRAINT_TOL)
        )
        if bad:
            violated.append(con.name)
    objective = sum(c * float(assignment[name]) for name, c in model.objective)
    return CheckResult(feasible=not violated, objective=objective, violated=violated)


def lift(g: Graph, gamma, s, formulation) -> dict:
    """Canonical assignment for a vertex set: x the indicator, z/w the
    induced products, s_t the size indicator, h_i the density terms."""
    gamma_f = float(check_gamma(gamma))
    s = as_vertex_set(s, g.n)
    chosen = set(s)
    k = len(s)
    n = g.n
    masks = g.neighbor_masks
    form = str(formulation).lstrip("mip") if isinstance(formulation, str) else str(formulation)
    if form not in ("7", "8", "9"):
        raise InputError(f"unknown formulation {formulation!r}")

    a: dict[str, float] = {f"x_{i}": 1.0 if i in chosen else 0.0 for i in range(n)}
    deg_in = [sum(1 for j in s if masks[i] >> j & 1) for i in range(n)]
    if form == "7":
        # h_i = x_i (gamma x_i + sum_{j in V} (A_ij - gamma) x_j)
        for i in range(n):
            a[f"h_{i}"] = (deg_in[i] - gamma_f * (k - 1)) if i in chosen else 0.0
    elif form == "8":
        for u, v in g.sorted_edges:
            a[f"z_{u}_{v}"] = 1.0 if (u in chosen and v in chosen) else 0.0
        _lift_size_vars(a, k, n)
    else:
        for i in range(n):
            a[f"w_{i}"] = float(deg_in[i]) if i in chosen else 0.0
        _lift_size_vars(a, k, n)
    return a


def _lift_size_vars(a: dict, k: int, n: int) -> None:
    for t in range(0, n + 1):
        a[f"s_{t}"] = 1.0 if t == k else 0.0


def _var_key(item):
    name = item[0] if isinstance(item, tuple) else item
    head, _, tail = name.partition("_")
    parts = tail.split("_")
    try:
        nums = tuple(int(p) for p in parts)
    except ValueError:
        nums = ()
    return (head, nums)
