"""Mamdani fuzzy inference with largest-of-maxima defuzzification.

Generic machinery (variables, rule expression trees, min/max inference)
plus the concrete two-input LOA switching engine: inputs "error" over
[0, 0.1] m/s and "speed" over [-0.4, 0.4] m/s, bang-bang output over
[-1, 1] where y > 0 means "switch LOA now".
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .model import E_MAX, V_MAX


# -- membership functions --------------------------------------------------

@dataclass(frozen=True)
class Trapezoid:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not (self.a <= self.b <= self.c <= self.d):
            raise ValueError(f"trapezoid breakpoints must be ordered: {self}")

    @property
    def support(self) -> tuple:
        return self.a, self.d

    def __call__(self, x: float) -> float:
        if x < self.a or x > self.d:
            return 0.0
        if self.b <= x <= self.c:
            return 1.0
        if x < self.b:
            return (x - self.a) / (self.b - self.a)
        return (self.d - x) / (self.d - self.c)

    def level_cut_max(self, level: float) -> float:
        """Largest x with membership >= level (level in (0, 1])."""
        return self.d - level * (self.d - self.c)

    def to_json(self) -> dict:
        return {"trapezoid": [self.a, self.b, self.c, self.d]}


@dataclass(frozen=True)
class Triangle:
    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (self.a <= self.b <= self.c):
            raise ValueError(f"triangle breakpoints must be ordered: {self}")

    @property
    def support(self) -> tuple:
        return self.a, self.c

    def __call__(self, x: float) -> float:
        if x < self.a or x > self.c:
            return 0.0
        if x == self.b:
            return 1.0
        if x < self.b:
            return (x - self.a) / (self.b - self.a)
        return (self.c - x) / (self.c - self.b)

    def level_cut_max(self, level: float) -> float:
        return self.c - level * (self.c - self.b)

    def to_json(self) -> dict:
        return {"triangle": [self.a, self.b, self.c]}


def membership_from_json(data: dict):
    if "trapezoid" in data:
        return Trapezoid(*data["trapezoid"])
    if "triangle" in data:
        return Triangle(*data["triangle"])
    raise ValueError(f"unknown membership function spec {data!r}")


def evaluate_membership(mf, x: float) -> float:
    """Piecewise-linear membership degree of x, in [0, 1]."""
    return mf(x)


# -- variables and rules ----------------------------------------------------

@dataclass(frozen=True)
class LinguisticVariable:
    name: str
    universe: tuple  # (lo, hi)
    terms: dict

    def __post_init__(self):
        lo, hi = self.universe
        if not lo < hi:
            raise ValueError(f"universe of {self.name} is empty")
        for term, mf in self.terms.items():
            s_lo, s_hi = mf.support
            if s_lo < lo - 1e-12 or s_hi > hi + 1e-12:
                raise ValueError(
                    f"{self.name}.{term} support [{s_lo}, {s_hi}] exceeds "
                    f"universe [{lo}, {hi}]")

    def clamp(self, x: float) -> float:
        lo, hi = self.universe
        return min(max(x, lo), hi)

    def fuzzify(self, x: float) -> dict:
        """Membership degree of x (clamped to the universe) for every term."""
        x = self.clamp(x)
        return {term: mf(x) for term, mf in self.terms.items()}

    def to_json(self) -> dict:
        return {
            "universe": list(self.universe),
            "terms": {t: mf.to_json() for t, mf in self.terms.items()},
        }


def fuzzify(var: LinguisticVariable, x: float) -> dict:
    return var.fuzzify(x)


class Atom:
    """Antecedent leaf: <variable> IS <term>."""

    def __init__(self, var: str, term: str):
        self.var = var
        self.term = term

    def evaluate(self, fuzzified: dict) -> float:
        return fuzzified[self.var][self.term]

    def referenced(self):
        yield self.var, self.term


class Not:
    def __init__(self, expr):
        self.expr = expr

    def evaluate(self, fuzzified: dict) -> float:
        return 1.0 - self.expr.evaluate(fuzzified)

    def referenced(self):
        yield from self.expr.referenced()


class And:
    def __init__(self, left, right):
        self.left, self.right = left, right

    def evaluate(self, fuzzified: dict) -> float:
        return min(self.left.evaluate(fuzzified), self.right.evaluate(fuzzified))

    def referenced(self):
        yield from self.left.referenced()
        yield from self.right.referenced()


class Or:
    def __init__(self, left, right):
        self.left, self.right = left, right

    def evaluate(self, fuzzified: dict) -> float:
        return max(self.left.evaluate(fuzzified), self.right.evaluate(fuzzified))

    def referenced(self):
        yield from self.left.referenced()
        yield from self.right.referenced()


@dataclass
class FuzzyRule:
    antecedent: object
    consequent: str  # output term name
    text: str = ""

    def activation(self, fuzzified: dict) -> float:
        return self.antecedent.evaluate(fuzzified)


def parse_rule(text: str) -> FuzzyRule:
    """Parse "IF <expr> THEN <term>" with IS / AND / OR / NOT.

    NOT may prefix an atom ("NOT speed IS reverse") or the term
    ("speed IS NOT reverse"); AND binds tighter than OR.
    """
    tokens = text.split()
    upper = [t.upper() for t in tokens]
    if not upper or upper[0] != "IF" or "THEN" not in upper:
        raise ValueError(f"rule must look like 'IF ... THEN ...': {text!r}")
    then_at = upper.index("THEN")
    if then_at + 2 != len(tokens):
        raise ValueError(f"rule needs exactly one consequent term: {text!r}")
    consequent = tokens[-1]
    body = tokens[1:then_at]
    body_upper = upper[1:then_at]
    pos = 0

    def peek():
        return body_upper[pos] if pos < len(body) else None

    def parse_atom():
        nonlocal pos
        if peek() == "NOT":
            pos += 1
            return Not(parse_atom())
        if pos + 2 > len(body) or body_upper[pos + 1] != "IS":
            raise ValueError(f"expected '<var> IS <term>' at {' '.join(body[pos:])!r}")
        var = body[pos]
        pos += 2
        negated = False
        if peek() == "NOT":
            negated = True
            pos += 1
        if pos >= len(body):
            raise ValueError(f"missing term name in {text!r}")
        term = body[pos]
        pos += 1
        atom = Atom(var, term)
        return Not(atom) if negated else atom

    def parse_and():
        nonlocal pos
        node = parse_atom()
        while peek() == "AND":
            pos += 1
            node = And(node, parse_atom())
        return node

    def parse_or():
        nonlocal pos
        node = parse_and()
        while peek() == "OR":
            pos += 1
            node = Or(node, parse_and())
        return node

    expr = parse_or()
    if pos != len(body):
        raise ValueError(f"trailing tokens in rule: {' '.join(body[pos:])!r}")
    return FuzzyRule(expr, consequent, text=text)


SUPPORTED_OPERATORS = {
    "conjunction": "min",
    "disjunction": "max",
    "implication": "min",
    "aggregation": "max",
    "defuzzifier": "lom",
}


@dataclass(frozen=True)
class InferenceConfig:
    conjunction: str = "min"
    disjunction: str = "max"
    implication: str = "min"
    aggregation: str = "max"
    defuzzifier: str = "lom"

    def __post_init__(self):
        for name, supported in SUPPORTED_OPERATORS.items():
            if getattr(self, name) != supported:
                raise ValueError(f"{name} operator must be {supported!r}")


@dataclass(frozen=True)
class FuzzyDecision:
    y: float  # in [-1, 1]
    switch: bool  # y > 0


class MamdaniEngine:
    """Immutable inference engine; decide() is pure and reentrant."""

    def __init__(self, inputs, output: LinguisticVariable, rules,
                 config: InferenceConfig = InferenceConfig()):
        self.inputs = {v.name: v for v in inputs}
        self.output = output
        self.rules = list(rules)
        self.config = config
        for rule in self.rules:
            if rule.consequent not in output.terms:
                raise ValueError(f"unknown output term {rule.consequent!r}")
            for var, term in rule.antecedent.referenced():
                if var not in self.inputs:
                    raise ValueError(f"unknown variable {var!r} in rule {rule.text!r}")
                if term not in self.inputs[var].terms:
                    raise ValueError(f"unknown term {var}.{term!r} in rule {rule.text!r}")

    def fire_rules(self, fuzzified: dict) -> dict:
        """Max-aggregated activation per output term under min/max semantics."""
        activations = {term: 0.0 for term in self.output.terms}
        for rule in self.rules:
            level = rule.activation(fuzzified)
            if level > activations[rule.consequent]:
                activations[rule.consequent] = level
        return activations

    def defuzzify_lom(self, activations: dict) -> float:
        """Largest of maxima over the clipped, max-aggregated output sets.

        Each output set is clipped at its activation, so the aggregate
        maximum equals the highest activation; the result is the largest
        output value still reaching that height. With no rule fired at all
        the engine reports the idle output (lower universe bound).
        """
        peak = max(activations.values())
        if peak <= 0.0:
            return self.output.universe[0]
        best = None
        for term, level in activations.items():
            if level == peak:
                y = self.output.terms[term].level_cut_max(peak)
                if best is None or y > best:
                    best = y
        return best

    def decide(self, **crisp) -> FuzzyDecision:
        fuzzified = {name: var.fuzzify(crisp[name]) for name, var in self.inputs.items()}
        y = self.defuzzify_lom(self.fire_rules(fuzzified))
        return FuzzyDecision(y=y, switch=y > 0.0)

    def to_json(self) -> dict:
        return {
            "inputs": {name: var.to_json() for name, var in self.inputs.items()},
            "output": {"name": self.output.name, **self.output.to_json()},
            "rules": [r.text for r in self.rules],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MamdaniEngine":
        inputs = [
            LinguisticVariable(name, tuple(spec["universe"]),
                               {t: membership_from_json(m) for t, m in spec["terms"].items()})
            for name, spec in data["inputs"].items()
        ]
        out = data["output"]
        output = LinguisticVariable(out["name"], tuple(out["universe"]),
                                    {t: membership_from_json(m) for t, m in out["terms"].items()})
        rules = [parse_rule(r) for r in data["rules"]]
        return cls(inputs, output, rules)

    @classmethod
    def load(cls, path) -> "MamdaniEngine":
        with open(path) as f:
            return cls.from_json(json.load(f))


def emics_engine() -> MamdaniEngine:
    """The LOA switching engine: switch only on large error while not reversing."""
    error = LinguisticVariable("error", (0.0, E_MAX), {
        "small": Trapezoid(0.0, 0.0, 0.035, 0.06),
        "medium": Trapezoid(0.045, 0.055, 0.065, 0.08),
        "large": Trapezoid(0.065, 0.085, E_MAX, E_MAX),
    })
    speed = LinguisticVariable("speed", (-V_MAX, V_MAX), {
        "reverse": Trapezoid(-V_MAX, -V_MAX, -0.03, -0.02),
        "zero": Triangle(-0.03, 0.0, 0.03),
        "forward": Trapezoid(0.02, 0.03, V_MAX, V_MAX),
    })
    output = LinguisticVariable("loa", (-1.0, 1.0), {
        "no-change": Triangle(-1.0, -1.0, 0.0),
        "change": Triangle(0.0, 1.0, 1.0),
    })
    rules = [
        parse_rule("IF error IS small OR error IS medium THEN no-change"),
        parse_rule("IF error IS large AND NOT speed IS reverse THEN change"),
        parse_rule("IF speed IS reverse AND error IS large THEN no-change"),
    ]
    return MamdaniEngine([error, speed], output, rules)


def decide(engine: MamdaniEngine, error: float, speed: float) -> FuzzyDecision:
    """End-to-end fuzzify -> fire -> LOM for the two-input switching engine."""
    return engine.decide(error=error, speed=speed)
