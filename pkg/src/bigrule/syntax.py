"""Syntax tree and semantic helpers for ground and non-ground programs.

All types are immutable after construction and safe to share across
threads. Variables start with an uppercase letter, constants with a
lowercase one; this is what guarantees a printable round trip.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .errors import (
    ArityError,
    DivisionByZeroError,
    HeadCycleError,
    ReservedPrefixCollisionError,
)

ARITH_OPS = ("+", "-", "*", "/")
COMPARISON_OPS = ("=", "!=", "<", "<=", ">", ">=")
AGGREGATE_FUNCS = ("count", "sum", "min", "max")


# ------------------------------------------------------------------ terms --

@dataclass(frozen=True, slots=True)
class Variable:
    name: str

    def __post_init__(self):
        if not self.name or not self.name[0].isupper():
            raise ValueError(f"variable name must start uppercase: {self.name!r}")

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Constant:
    name: str

    def __post_init__(self):
        if not self.name or not (self.name[0].islower()):
            raise ValueError(f"constant symbol must start lowercase: {self.name!r}")

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Integer:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True, slots=True)
class Arith:
    op: str
    left: "Term"
    right: "Term"

    def __post_init__(self):
        if self.op not in ARITH_OPS:
            raise ValueError(f"unknown arithmetic operator {self.op!r}")

    def __str__(self):
        left = str(self.left)
        right = str(self.right)
        if isinstance(self.left, Arith) and _prec(self.left.op) < _prec(self.op):
            left = f"({left})"
        if isinstance(self.right, Arith) and _prec(self.right.op) <= _prec(self.op):
            right = f"({right})"
        return f"{left}{self.op}{right}"


Term = Union[Variable, Constant, Integer, Arith]
GroundTerm = Union[Constant, Integer]


def _prec(op: str) -> int:
    return 1 if op in ("+", "-") else 2


def v(name: str) -> Variable:
    return Variable(name)


def c(name: str) -> Constant:
    return Constant(name)


def n(value: int) -> Integer:
    return Integer(value)


def term_variables(term: Term) -> Iterator[str]:
    """All variable names in a term, in occurrence order."""
    if isinstance(term, Variable):
        yield term.name
    elif isinstance(term, Arith):
        yield from term_variables(term.left)
        yield from term_variables(term.right)


def eval_term(term: Term, binding: dict[str, "str | int"]) -> "str | int":
    """Evaluate a term to a raw ground value (str for symbols, int for
    numbers) under a complete binding. Division truncates toward zero;
    division by zero is an error, never a silent drop."""
    if isinstance(term, Variable):
        return binding[term.name]
    if isinstance(term, Constant):
        return term.name
    if isinstance(term, Integer):
        return term.value
    left = eval_term(term.left, binding)
    right = eval_term(term.right, binding)
    if not isinstance(left, int) or not isinstance(right, int):
        raise TypeError(f"arithmetic over non-integer value in {term}")
    if term.op == "+":
        return left + right
    if term.op == "-":
        return left - right
    if term.op == "*":
        return left * right
    if right == 0:
        raise DivisionByZeroError(f"division by zero in {term}")
    # Truncation toward zero, unlike Python's floor division.
    return int(left / right)


def ground_term(value: "str | int") -> GroundTerm:
    return Integer(value) if isinstance(value, int) else Constant(value)


# ------------------------------------------------------------- atoms etc. --

@dataclass(frozen=True, slots=True)
class Atom:
    pred: str
    args: tuple[Term, ...] = ()

    def __str__(self):
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(str(a) for a in self.args)})"

    @property
    def arity(self) -> int:
        return len(self.args)

    def is_ground(self) -> bool:
        return not any(True for _ in _atom_vars(self))


def atom(pred: str, *args: "Term | str | int") -> Atom:
    """Convenience constructor: bare strings become variables or constants
    by their leading character, ints become integer terms."""
    return Atom(pred, tuple(_coerce(a) for a in args))


def _coerce(x) -> Term:
    if isinstance(x, (Variable, Constant, Integer, Arith)):
        return x
    if isinstance(x, int):
        return Integer(x)
    if isinstance(x, str):
        return Variable(x) if x[0].isupper() else Constant(x)
    raise TypeError(f"cannot make a term from {x!r}")


def _atom_vars(a: Atom) -> Iterator[str]:
    for arg in a.args:
        yield from term_variables(arg)


@dataclass(frozen=True, slots=True)
class Literal:
    atom: Atom
    negated: bool = False

    def __str__(self):
        return f"not {self.atom}" if self.negated else str(self.atom)


def pos(a: Atom) -> Literal:
    return Literal(a, False)


def neg(a: Atom) -> Literal:
    return Literal(a, True)


@dataclass(frozen=True, slots=True)
class Comparison:
    """Arithmetic body atom: an equation `X = phi` or a builtin comparison."""

    op: str
    left: Term
    right: Term

    def __post_init__(self):
        if self.op not in COMPARISON_OPS:
            raise ValueError(f"unknown comparison operator {self.op!r}")

    def __str__(self):
        return f"{self.left} {self.op} {self.right}"

    def is_binding_equation(self) -> bool:
        return self.op == "=" and isinstance(self.left, Variable)


@dataclass(frozen=True, slots=True)
class Aggregate:
    """#agg{ X : condition } guard_op guard, with X the tuple variables."""

    func: str
    tuple_vars: tuple[str, ...]
    condition: tuple[Literal, ...]
    guard_op: str
    guard: Term

    def __post_init__(self):
        if self.func not in AGGREGATE_FUNCS:
            raise ValueError(f"unknown aggregate function {self.func!r}")
        if self.guard_op not in COMPARISON_OPS:
            raise ValueError(f"unknown guard operator {self.guard_op!r}")
        cond_vars = set()
        for lit in self.condition:
            cond_vars.update(_atom_vars(lit.atom))
        missing = set(self.tuple_vars) - cond_vars
        if missing:
            raise ValueError(
                f"aggregate tuple variables {sorted(missing)} do not occur in the condition"
            )

    def __str__(self):
        tup = ",".join(self.tuple_vars)
        cond = ", ".join(str(l) for l in self.condition)
        return f"#{self.func}{{{tup} : {cond}}} {self.guard_op} {self.guard}"


@dataclass(frozen=True, slots=True)
class Rule:
    head: tuple[Atom, ...] = ()
    pos_body: tuple[Literal, ...] = ()
    neg_body: tuple[Literal, ...] = ()
    arith: tuple[Comparison, ...] = ()
    aggregates: tuple[Aggregate, ...] = ()
    checked_safe: bool = field(default=False, compare=False)

    def __post_init__(self):
        if any(l.negated for l in self.pos_body):
            raise ValueError("negated literal in positive body")
        if any(not l.negated for l in self.neg_body):
            raise ValueError("non-negated literal in negative body")

    def __str__(self):
        parts = [str(l) for l in self.pos_body]
        parts += [str(l) for l in self.neg_body]
        parts += [str(a) for a in self.arith]
        parts += [str(a) for a in self.aggregates]
        head = " | ".join(str(a) for a in self.head)
        if not parts:
            return f"{head}." if head else ":- ."
        body = ", ".join(parts)
        return f"{head} :- {body}." if head else f":- {body}."

    @property
    def is_normal(self) -> bool:
        return len(self.head) <= 1

    def body_elements(self):
        """Body units in canonical order: positive, negative, arithmetic,
        aggregates. Each is treated as one unit by the Gaifman graph."""
        return (*self.pos_body, *self.neg_body, *self.arith, *self.aggregates)


def rule(head=(), pos_body=(), neg_body=(), arith=(), aggregates=()) -> Rule:
    return Rule(tuple(head), tuple(pos_body), tuple(neg_body), tuple(arith), tuple(aggregates))


def fact_atom(pred: str, *args) -> Atom:
    a = atom(pred, *args)
    if not a.is_ground():
        raise ValueError(f"fact must be ground: {a}")
    return a


# ---------------------------------------------------------------- program --

class Program:
    """A non-ground program: rules plus ground facts.

    Ground, body-less, single-atom rules are normalized into facts so that
    printing and re-parsing yields a structurally identical program. The
    domain is exactly the set of constants syntactically present.
    """

    __slots__ = ("rules", "facts", "_domain", "_arities")

    def __init__(self, rules: Iterable[Rule] = (), facts: Iterable[Atom] = ()):
        kept_rules: list[Rule] = []
        all_facts: list[Atom] = list(facts)
        for f in all_facts:
            if not f.is_ground():
                raise ValueError(f"fact must be ground: {f}")
        for r in rules:
            if (
                len(r.head) == 1
                and not r.pos_body and not r.neg_body
                and not r.arith and not r.aggregates
                and r.head[0].is_ground()
            ):
                all_facts.append(r.head[0])
            else:
                kept_rules.append(r)
        self.rules: tuple[Rule, ...] = tuple(kept_rules)
        self.facts: tuple[Atom, ...] = tuple(all_facts)
        self._domain: frozenset[GroundTerm] | None = None
        self._arities: dict[str, int] | None = None
        self._check_arities()

    def __eq__(self, other):
        if not isinstance(other, Program):
            return NotImplemented
        return self.rules == other.rules and self.facts == other.facts

    def __repr__(self):
        return f"Program({len(self.rules)} rules, {len(self.facts)} facts)"

    @property
    def domain(self) -> frozenset[GroundTerm]:
        if self._domain is None:
            found: set[GroundTerm] = set()
            for f in self.facts:
                _collect_constants_atom(f, found)
            for r in self.rules:
                for a in r.head:
                    _collect_constants_atom(a, found)
                for lit in (*r.pos_body, *r.neg_body):
                    _collect_constants_atom(lit.atom, found)
                for comp in r.arith:
                    _collect_constants_term(comp.left, found)
                    _collect_constants_term(comp.right, found)
                for agg in r.aggregates:
                    for lit in agg.condition:
                        _collect_constants_atom(lit.atom, found)
                    _collect_constants_term(agg.guard, found)
            self._domain = frozenset(found)
        return self._domain

    def predicates(self) -> dict[str, int]:
        """Predicate name to arity, over facts and all rule atoms."""
        if self._arities is None:
            self._check_arities()
        return dict(self._arities)

    def _check_arities(self):
        arities: dict[str, int] = {}

        def see(a: Atom):
            old = arities.setdefault(a.pred, a.arity)
            if old != a.arity:
                raise ArityError(
                    f"predicate {a.pred} used with arity {old} and {a.arity}"
                )

        for f in self.facts:
            see(f)
        for r in self.rules:
            for a in r.head:
                see(a)
            for lit in (*r.pos_body, *r.neg_body):
                see(lit.atom)
            for agg in r.aggregates:
                for lit in agg.condition:
                    see(lit.atom)
        self._arities = arities


def _collect_constants_atom(a: Atom, out: set):
    for arg in a.args:
        _collect_constants_term(arg, out)


def _collect_constants_term(t: Term, out: set):
    if isinstance(t, (Constant, Integer)):
        out.add(t)
    elif isinstance(t, Arith):
        _collect_constants_term(t.left, out)
        _collect_constants_term(t.right, out)


# --------------------------------------------------------- ground program --

@dataclass(frozen=True, slots=True)
class GroundRule:
    """Rule over atom indices of the owning GroundProgram."""

    head: tuple[int, ...] = ()
    pos: tuple[int, ...] = ()
    neg: tuple[int, ...] = ()


class GroundProgram:
    """Propositional program: an indexed atom table plus index-based rules."""

    __slots__ = ("atoms", "rules", "_index")

    def __init__(self, atoms: Iterable[Atom] = (), rules: Iterable[GroundRule] = ()):
        self.atoms: tuple[Atom, ...] = tuple(atoms)
        self.rules: tuple[GroundRule, ...] = tuple(rules)
        self._index: dict[Atom, int] = {a: i for i, a in enumerate(self.atoms)}
        if len(self._index) != len(self.atoms):
            raise ValueError("duplicate atom in ground program atom table")
        bound = len(self.atoms)
        for r in self.rules:
            for i in (*r.head, *r.pos, *r.neg):
                if not 0 <= i < bound:
                    raise ValueError(f"rule references unregistered atom index {i}")

    def __eq__(self, other):
        if not isinstance(other, GroundProgram):
            return NotImplemented
        return self.atoms == other.atoms and self.rules == other.rules

    def __repr__(self):
        return f"GroundProgram({len(self.atoms)} atoms, {len(self.rules)} rules)"

    def index_of(self, a: Atom) -> int:
        return self._index[a]

    def rule_str(self, r: GroundRule) -> str:
        head = " | ".join(str(self.atoms[i]) for i in r.head)
        body = [str(self.atoms[i]) for i in r.pos]
        body += [f"not {self.atoms[i]}" for i in r.neg]
        if not body:
            return f"{head}." if head else ":- ."
        joined = ", ".join(body)
        return f"{head} :- {joined}." if head else f":- {joined}."


@dataclass(frozen=True, slots=True)
class Interpretation:
    """A set of true ground-atom indices of some GroundProgram."""

    true_atoms: frozenset[int]

    def atom_strs(self, gp: GroundProgram) -> list[str]:
        return sorted(str(gp.atoms[i]) for i in self.true_atoms)

    def __len__(self):
        return len(self.true_atoms)


def interpretation(indices: Iterable[int]) -> Interpretation:
    return Interpretation(frozenset(indices))


# ------------------------------------------------------------- operations --

def variables_of(element) -> set[str]:
    """Every variable occurring anywhere in the element, including inside
    arithmetic terms, comparisons, and aggregates."""
    return set(variables_in_order(element))


def variables_in_order(element) -> list[str]:
    """Like variables_of but first-occurrence ordered (used for interface
    tuples whose argument order should mirror the source)."""
    out: list[str] = []
    seen: set[str] = set()

    def add_term(t: Term):
        for name in term_variables(t):
            if name not in seen:
                seen.add(name)
                out.append(name)

    def add_atom(a: Atom):
        for arg in a.args:
            add_term(arg)

    def walk(e):
        if isinstance(e, (Variable, Constant, Integer, Arith)):
            add_term(e)
        elif isinstance(e, Atom):
            add_atom(e)
        elif isinstance(e, Literal):
            add_atom(e.atom)
        elif isinstance(e, Comparison):
            add_term(e.left)
            add_term(e.right)
        elif isinstance(e, Aggregate):
            for name in e.tuple_vars:
                if name not in seen:
                    seen.add(name)
                    out.append(name)
            for lit in e.condition:
                add_atom(lit.atom)
            add_term(e.guard)
        elif isinstance(e, Rule):
            for a in e.head:
                add_atom(a)
            for unit in e.body_elements():
                walk(unit)
        elif isinstance(e, (list, tuple)):
            for item in e:
                walk(item)
        else:
            raise TypeError(f"cannot extract variables from {e!r}")

    walk(element)
    return out


def global_vars(r: Rule) -> set[str]:
    """Rule-level variables: everything except variables occurring only
    inside aggregate conditions or tuples (those are aggregate-local)."""
    out: set[str] = set()
    for a in r.head:
        out.update(_atom_vars(a))
    for lit in (*r.pos_body, *r.neg_body):
        out.update(_atom_vars(lit.atom))
    for comp in r.arith:
        out.update(term_variables(comp.left))
        out.update(term_variables(comp.right))
    for agg in r.aggregates:
        out.update(term_variables(agg.guard))
    return out


def is_safe(r: Rule) -> tuple[bool, set[str]]:
    """Safety closure over the rule-level variables: a variable is safe if
    it occurs in a positive non-aggregate body atom, or on the left of an
    equation `X = phi` whose right-hand-side variables are all safe.
    Aggregate-local variables are exempt. Returns the unsafe set."""
    safe: set[str] = set()
    for lit in r.pos_body:
        safe.update(_atom_vars(lit.atom))
    safe = _equation_closure(safe, r.arith)
    unsafe = global_vars(r) - safe
    return (not unsafe, unsafe)


def bindable_vars(r: Rule) -> set[str]:
    """Variables a join-based grounder can bind: top-level argument
    positions of positive body atoms, extended by the equation closure.
    Stricter than is_safe, which also accepts occurrences buried inside
    arithmetic arguments."""
    bound: set[str] = set()
    for lit in r.pos_body:
        for arg in lit.atom.args:
            if isinstance(arg, Variable):
                bound.add(arg.name)
    return _equation_closure(bound, r.arith)


def _equation_closure(safe: set[str], equations) -> set[str]:
    safe = set(safe)
    changed = True
    while changed:
        changed = False
        for comp in equations:
            if not comp.is_binding_equation():
                continue
            name = comp.left.name
            if name in safe:
                continue
            if set(term_variables(comp.right)) <= safe:
                safe.add(name)
                changed = True
    return safe


def shift(gp: GroundProgram, check_hcf: bool = False) -> GroundProgram:
    """Rewrite each disjunctive rule into one rule per head atom, moving the
    other disjuncts negated into the body. Preserves answer sets on
    head-cycle-free programs."""
    if check_hcf and not is_head_cycle_free(gp):
        raise HeadCycleError("program is not head-cycle free")
    out: list[GroundRule] = []
    for r in gp.rules:
        if len(r.head) <= 1:
            out.append(r)
            continue
        for i, h in enumerate(r.head):
            others = r.head[:i] + r.head[i + 1:]
            out.append(GroundRule((h,), r.pos, tuple(r.neg) + others))
    return GroundProgram(gp.atoms, out)


def is_head_cycle_free(gp: GroundProgram) -> bool:
    """No two atoms sharing a disjunctive head may lie on a common cycle of
    the positive dependency graph."""
    succ: dict[int, set[int]] = {}
    for r in gp.rules:
        for h in r.head:
            succ.setdefault(h, set()).update(r.pos)
    scc_of = _scc_index(succ, len(gp.atoms))
    for r in gp.rules:
        if len(r.head) < 2:
            continue
        seen: set[int] = set()
        for h in r.head:
            comp = scc_of[h]
            if comp in seen:
                return False
            seen.add(comp)
    return True


def _scc_index(succ: dict[int, set[int]], count: int) -> list[int]:
    # Iterative Tarjan; atom universe is small but recursion limits are rude.
    index = [-1] * count
    low = [0] * count
    on_stack = [False] * count
    comp = [-1] * count
    stack: list[int] = []
    counter = 0
    n_comps = 0
    for start in range(count):
        if index[start] != -1:
            continue
        work = [(start, iter(sorted(succ.get(start, ()))))]
        index[start] = low[start] = counter
        counter += 1
        stack.append(start)
        on_stack[start] = True
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if index[nxt] == -1:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack[nxt] = True
                    work.append((nxt, iter(sorted(succ.get(nxt, ())))))
                    advanced = True
                    break
                if on_stack[nxt]:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = n_comps
                    if w == node:
                        break
                n_comps += 1
    return comp


def fresh_symbols(program: Program, prefix: str) -> Iterator[str]:
    """Yield predicate symbols `prefix_0`, `prefix_1`, ... guaranteed absent
    from the program. Errors out if the program already steps on the prefix,
    in which case the caller must rename first."""
    used = set(program.predicates())
    clashing = sorted(p for p in used if p.startswith(prefix))
    if clashing:
        raise ReservedPrefixCollisionError(
            f"program already uses prefix {prefix!r}: {', '.join(clashing)}"
        )
    i = 0
    while True:
        yield f"{prefix}_{i}"
        i += 1
