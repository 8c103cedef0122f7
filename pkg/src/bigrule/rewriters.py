"""Instance-to-program encoders: each takes one concrete problem instance
and produces a non-ground program whose consistency answers the instance.

The second-level encodings rely on saturation; the disjunction-elimination
and abduction encodings additionally build one large subset-minimality
constraint whose body is glued together by or/3 chains. That large rule is
what the decomposition pass is for.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import product

from .errors import (
    ClauseTooWideError,
    InputSemanticsError,
    MissingPartitionError,
    PrefixShapeError,
    TupleWidthError,
)
from .parse import InputGraph, Qbf, QdimacsWarning, reified_atom_ids, reified_rule_ids
from .syntax import (
    Arith,
    Atom,
    Comparison,
    Constant,
    GroundProgram,
    Integer,
    Literal,
    Program,
    Rule,
    Variable,
    neg,
    pos,
)


@dataclass(frozen=True)
class AbductionInstance:
    """Ground program with hypothesis and manifestation atom indices."""

    program: GroundProgram
    hypotheses: frozenset[int]
    manifestations: frozenset[int]

    def __post_init__(self):
        universe = range(len(self.program.atoms))
        if not self.hypotheses <= set(universe):
            raise ValueError("hypotheses outside the program's atom universe")
        if not self.manifestations <= set(universe):
            raise ValueError("manifestations outside the program's atom universe")


# ---------------------------------------------------------------- coloring --

_COLORS = ("r", "g", "b")


def _color_facts() -> list[Atom]:
    facts = [Atom("col", (Constant(color),)) for color in _COLORS]
    for a in _COLORS:
        for b in _COLORS:
            if a != b:
                facts.append(Atom("e", (Constant(a), Constant(b))))
    return facts


def _vertex_var(vertex: str) -> Variable:
    return Variable(f"X_{vertex}")


def threecol_single_rule(g: InputGraph) -> Program:
    """One big guess-and-check constraint: a variable per vertex mapped to
    a color, edges mapped to valid color pairs. The program has an answer
    set exactly when no proper 3-coloring exists."""
    body = [pos(Atom("col", (_vertex_var(v),))) for v in sorted(g.vertices)]
    body += [
        pos(Atom("e", (_vertex_var(u), _vertex_var(w))))
        for u, w in sorted(g.edges)
    ]
    constraint = Rule(head=(), pos_body=tuple(body))
    return Program([constraint], _color_facts())


def threecol_second_level(g: InputGraph) -> Program:
    """Guess a coloring of the first vertex class with a classical program,
    then use the large rule to check it extends to the whole graph. An
    answer set exists exactly when some coloring of the first class has no
    proper extension."""
    if g.partition is None:
        raise MissingPartitionError("second-level coloring needs a #V1 partition")
    v1, _ = g.partition
    facts = _color_facts()
    facts += [Atom("vertex1", (Constant(v),)) for v in sorted(v1)]
    facts += [Atom("edge", (Constant(u), Constant(w))) for u, w in sorted(g.edges)]

    guess = Rule(
        head=tuple(Atom("c", (Variable("X"), Constant(color))) for color in _COLORS),
        pos_body=(pos(Atom("vertex1", (Variable("X"),))),),
    )
    proper = Rule(
        head=(),
        pos_body=(
            pos(Atom("edge", (Variable("X1"), Variable("X2")))),
            pos(Atom("c", (Variable("X1"), Variable("C")))),
            pos(Atom("c", (Variable("X2"), Variable("C")))),
        ),
    )
    body = [pos(Atom("col", (_vertex_var(v),))) for v in sorted(g.vertices)]
    body += [
        pos(Atom("e", (_vertex_var(u), _vertex_var(w))))
        for u, w in sorted(g.edges)
    ]
    body += [pos(Atom("c", (Constant(v), _vertex_var(v)))) for v in sorted(v1)]
    r_col = Rule(head=(), pos_body=tuple(body))
    return Program([guess, proper, r_col], facts)


# -------------------------------------------------------------------- QBF ---

def _live_clauses(qbf: Qbf):
    live = []
    for clause in qbf.clauses:
        if clause.tautology:
            warnings.warn(
                "dropping tautological clause from the encoding",
                QdimacsWarning,
                stacklevel=3,
            )
            continue
        live.append(clause)
    return live


def _forall_exists_shape(qbf: Qbf) -> tuple[list[int], list[int]]:
    """Split a prefix of shape [∀-block][∃-block] (either block may be
    absent) into universal and existential variables."""
    pattern = tuple(q for q, _ in qbf.prefix)
    if pattern not in ((), ("a",), ("e",), ("a", "e")):
        raise PrefixShapeError(
            f"need a forall-exists prefix, found {'-'.join(pattern) or 'none'}"
        )
    universals = [x for q, block in qbf.prefix if q == "a" for x in block]
    existentials = [x for q, block in qbf.prefix if q == "e" for x in block]
    return universals, existentials


def qbf2_classic(qbf: Qbf) -> Program:
    """Fixed-program encoding: guess an assignment, derive `sat` when some
    clause is falsified, saturate existential assignments. Consistent
    exactly when the formula is false."""
    universals, existentials = _forall_exists_shape(qbf)
    clauses = _live_clauses(qbf)
    names = {x: f"x{x}" for x in universals}
    names.update({y: f"y{y}" for y in existentials})

    facts = [Atom("var", (Constant(names[x]),)) for x in universals + existentials]
    facts += [Atom("exists", (Constant(names[y]),)) for y in existentials]
    rules: list[Rule] = []
    for i, clause in enumerate(clauses, start=1):
        if len(clause.lits) > 3:
            raise ClauseTooWideError(
                f"clause {i} has width {len(clause.lits)}, classic encoding takes up to 3"
            )
        if not clause.lits:
            # An empty clause falsifies every assignment outright.
            rules.append(Rule(head=(Atom("sat"),)))
            continue
        padded = list(clause.lits) + [clause.lits[-1]] * (3 - len(clause.lits))
        for slot, lit in enumerate(padded, start=1):
            facts.append(
                Atom(
                    f"pos_{slot}",
                    (Constant(f"c{i}"), Constant(names[abs(lit)]), Integer(0 if lit < 0 else 1)),
                )
            )

    var_x = Variable("X")
    rules.append(
        Rule(
            head=(Atom("ass", (var_x, Integer(1))), Atom("ass", (var_x, Integer(0)))),
            pos_body=(pos(Atom("var", (var_x,))),),
        )
    )
    for value in (0, 1):
        rules.append(
            Rule(
                head=(Atom("ass", (var_x, Integer(value))),),
                pos_body=(pos(Atom("sat")), pos(Atom("exists", (var_x,)))),
            )
        )
    sat_body = []
    for slot in (1, 2, 3):
        c_var = Variable("C")
        x_var = Variable(f"X{slot}")
        a_var = Variable(f"A{slot}")
        sat_body.append(pos(Atom(f"pos_{slot}", (c_var, x_var, a_var))))
        sat_body.append(
            pos(Atom("ass", (x_var, Arith("-", Integer(1), a_var))))
        )
    rules.append(Rule(head=(Atom("sat"),), pos_body=tuple(sat_body)))
    rules.append(Rule(head=(), neg_body=(neg(Atom("sat")),)))
    return Program(rules, facts)


def _clause_tuples(clause, universal_set):
    """Existential-literal tuple of a clause: the literals over variables
    outside the universal set, in clause order."""
    x_lits = [lit for lit in clause.lits if abs(lit) in universal_set]
    y_lits = [lit for lit in clause.lits if abs(lit) not in universal_set]
    return x_lits, y_lits


def _large_rule_parts(clauses, universal_set, max_tuple_width):
    """Shared core of the large-rule QBF encodings: guessing rules for the
    universal variables, per-clause tuple facts and derivations, and the
    single wide constraint body."""
    facts: list[Atom] = []
    rules: list[Rule] = []
    for x in sorted(universal_set):
        rules.append(
            Rule(head=(Atom("t", (Constant(f"x{x}"),)), Atom("f", (Constant(f"x{x}"),))))
        )
    big_body: list[Literal] = []
    all_tuple_atoms: list[Atom] = []
    for i, clause in enumerate(clauses, start=1):
        x_lits, y_lits = _clause_tuples(clause, universal_set)
        width = len(y_lits)
        if width > max_tuple_width:
            raise TupleWidthError(
                f"clause {i} has {width} existential literals; expanding"
                f" 2^{width} tuples exceeds the cap {max_tuple_width}"
            )
        blocked = tuple(0 if lit > 0 else 1 for lit in y_lits)
        pred = f"c{i}"
        for tup in product((0, 1), repeat=width):
            tuple_atom = Atom(pred, tuple(Integer(b) for b in tup))
            all_tuple_atoms.append(tuple_atom)
            if tup != blocked:
                facts.append(tuple_atom)
            for lit in x_lits:
                name = Constant(f"x{abs(lit)}")
                trigger = Atom("t", (name,)) if lit > 0 else Atom("f", (name,))
                rules.append(Rule(head=(tuple_atom,), pos_body=(pos(trigger),)))
        eta = tuple(Variable(f"Y{abs(lit)}") for lit in y_lits)
        big_body.append(pos(Atom(pred, eta)))
    return facts, rules, big_body, all_tuple_atoms


def qbf2_large_rule(qbf: Qbf, max_tuple_width: int = 12) -> Program:
    """Large-rule encoding: clause predicates hold the still-satisfiable
    existential tuples, one wide constraint asks for a tuple assignment
    satisfying every clause. Consistent exactly when the formula is false."""
    universals, _ = _forall_exists_shape(qbf)
    clauses = _live_clauses(qbf)
    facts, rules, big_body, _ = _large_rule_parts(
        clauses, set(universals), max_tuple_width
    )
    rules.append(Rule(head=(), pos_body=tuple(big_body)))
    return Program(rules, facts)


def _exists_forall_exists_shape(qbf: Qbf):
    pattern = tuple(q for q, _ in qbf.prefix)
    allowed = {(), ("e",), ("a",), ("e", "a"), ("a", "e"), ("e", "a", "e")}
    if pattern not in allowed:
        raise PrefixShapeError(
            f"need an exists-forall-exists prefix, found {'-'.join(pattern)}"
        )
    outer: list[int] = []
    middle: list[int] = []
    inner: list[int] = []
    blocks = list(qbf.prefix)
    if blocks and blocks[0][0] == "e":
        outer = list(blocks.pop(0)[1])
    if blocks and blocks[0][0] == "a":
        middle = list(blocks.pop(0)[1])
    if blocks:
        inner = list(blocks.pop(0)[1])
    return outer, middle, inner


def qbf3_large_rule(qbf: Qbf, max_tuple_width: int = 12) -> Program:
    """Third-level extension: build the large-rule encoding as if the outer
    existential block were universal, then saturate the genuinely universal
    guesses and all clause tuples. Consistent exactly when the formula is
    valid."""
    outer, middle, _ = _exists_forall_exists_shape(qbf)
    clauses = _live_clauses(qbf)
    treated_universal = set(outer) | set(middle)
    facts, rules, big_body, all_tuple_atoms = _large_rule_parts(
        clauses, treated_universal, max_tuple_width
    )
    sat = Atom("sat")
    rules.append(Rule(head=(sat,), pos_body=tuple(big_body)))
    rules.append(Rule(head=(), neg_body=(neg(sat),)))
    saturated: list[Atom] = []
    for x in sorted(middle):
        saturated.append(Atom("t", (Constant(f"x{x}"),)))
        saturated.append(Atom("f", (Constant(f"x{x}"),)))
    seen = set()
    for tuple_atom in all_tuple_atoms:
        if tuple_atom not in seen:
            seen.add(tuple_atom)
            saturated.append(tuple_atom)
    for target in saturated:
        rules.append(Rule(head=(target,), pos_body=(pos(sat),)))
    return Program(rules, facts)


# ------------------------------------------------ reduct-check construction --

class ReductRuleBuilder:
    """Assembles the subset-minimality constraint body: B_subset guesses a
    pointwise smaller assignment, B_neq forces it properly smaller through
    an or/3 chain, B_model checks it models the reduct. Hypothesis atoms,
    when given, are pinned equal (they are facts of the extended program)."""

    def __init__(self, gp: GroundProgram, atom_ids, hypotheses: frozenset[int] | None = None):
        self.gp = gp
        self.atom_ids = list(atom_ids)
        self.hypotheses = hypotheses or frozenset()
        self.model_var = {
            i: (Variable(f"X_{aid}"), Variable(f"Y_{aid}"))
            for i, aid in enumerate(self.atom_ids)
        }

    def subset_literals(self):
        literals: list[Literal] = []
        equations: list[Comparison] = []
        for i, aid in enumerate(self.atom_ids):
            x_var, y_var = self.model_var[i]
            literals.append(pos(Atom("assign", (Constant(aid), x_var))))
            if i in self.hypotheses:
                # Guessed hypotheses are facts of the extended program, so
                # the reduct candidate must agree; oriented to keep Y safe.
                equations.append(Comparison("=", y_var, x_var))
            else:
                literals.append(pos(Atom("leq", (y_var, x_var))))
        return literals, equations

    def neq_elements(self):
        literals: list[Literal] = []
        equations: list[Comparison] = [Comparison("=", Variable("N0"), Integer(0))]
        for i in range(len(self.gp.atoms)):
            x_var, y_var = self.model_var[i]
            literals.append(
                pos(
                    Atom(
                        "or",
                        (Variable(f"N{i}"), Arith("-", x_var, y_var), Variable(f"N{i + 1}")),
                    )
                )
            )
        equations.append(
            Comparison("=", Variable(f"N{len(self.gp.atoms)}"), Integer(1))
        )
        return literals, equations

    def model_elements(self):
        literals: list[Literal] = []
        equations: list[Comparison] = []
        for r_index, rule in enumerate(self.gp.rules):
            chain = 0
            equations.append(
                Comparison("=", Variable(f"R{r_index}_0"), Integer(0))
            )
            for i in rule.head:
                _, y_var = self.model_var[i]
                literals.append(self._or_link(r_index, chain, y_var))
                chain += 1
            for i in rule.pos:
                _, y_var = self.model_var[i]
                literals.append(
                    self._or_link(r_index, chain, Arith("-", Integer(1), y_var))
                )
                chain += 1
            for i in rule.neg:
                x_var, _ = self.model_var[i]
                literals.append(self._or_link(r_index, chain, x_var))
                chain += 1
            equations.append(
                Comparison("=", Variable(f"R{r_index}_{chain}"), Integer(1))
            )
        return literals, equations

    def _or_link(self, r_index: int, position: int, middle) -> Literal:
        return pos(
            Atom(
                "or",
                (
                    Variable(f"R{r_index}_{position}"),
                    middle,
                    Variable(f"R{r_index}_{position + 1}"),
                ),
            )
        )

    def build(self, head: tuple[Atom, ...]) -> Rule:
        subset_lits, subset_eqs = self.subset_literals()
        neq_lits, neq_eqs = self.neq_elements()
        model_lits, model_eqs = self.model_elements()
        return Rule(
            head=head,
            pos_body=tuple(subset_lits + neq_lits + model_lits),
            arith=tuple(subset_eqs + neq_eqs + model_eqs),
        )


_TRUTH_TABLE_FACTS = (
    Atom("leq", (Integer(0), Integer(0))),
    Atom("leq", (Integer(0), Integer(1))),
    Atom("leq", (Integer(1), Integer(1))),
    Atom("or", (Integer(0), Integer(0), Integer(0))),
    Atom("or", (Integer(0), Integer(1), Integer(1))),
    Atom("or", (Integer(1), Integer(0), Integer(1))),
    Atom("or", (Integer(1), Integer(1), Integer(1))),
)


def disjunctive_to_normal(gp: GroundProgram) -> Program:
    """Rewrite a ground disjunctive program into a non-ground normal one:
    reified facts, a fixed guess-and-model-check part, and one large
    subset-minimality constraint. Answer sets, projected to the atoms
    assigned 1, coincide with the input's answer sets."""
    atom_ids = reified_atom_ids(gp)
    rule_ids = reified_rule_ids(gp, atom_ids)

    facts: list[Atom] = [Atom("atom", (Constant(aid),)) for aid in atom_ids]
    facts += [Atom("rule", (Constant(rid),)) for rid in rule_ids]
    facts += list(_TRUTH_TABLE_FACTS)
    for rid, rule in zip(rule_ids, gp.rules):
        facts += [Atom("head", (Constant(rid), Constant(atom_ids[i]))) for i in rule.head]
        facts += [Atom("pos", (Constant(rid), Constant(atom_ids[i]))) for i in rule.pos]
        facts += [Atom("neg", (Constant(rid), Constant(atom_ids[i]))) for i in rule.neg]

    var_a, var_r = Variable("A"), Variable("R")
    one, zero = Integer(1), Integer(0)
    rules = [
        Rule(
            head=(Atom("assign", (var_a, one)),),
            pos_body=(pos(Atom("atom", (var_a,))),),
            neg_body=(neg(Atom("assign", (var_a, zero))),),
        ),
        Rule(
            head=(Atom("assign", (var_a, zero)),),
            pos_body=(pos(Atom("atom", (var_a,))),),
            neg_body=(neg(Atom("assign", (var_a, one))),),
        ),
        Rule(
            head=(Atom("sat", (var_r,)),),
            pos_body=(pos(Atom("head", (var_r, var_a))), pos(Atom("assign", (var_a, one)))),
        ),
        Rule(
            head=(Atom("sat", (var_r,)),),
            pos_body=(pos(Atom("pos", (var_r, var_a))), pos(Atom("assign", (var_a, zero)))),
        ),
        Rule(
            head=(Atom("sat", (var_r,)),),
            pos_body=(pos(Atom("neg", (var_r, var_a))), pos(Atom("assign", (var_a, one)))),
        ),
        Rule(
            head=(),
            pos_body=(pos(Atom("rule", (var_r,))),),
            neg_body=(neg(Atom("sat", (var_r,))),),
        ),
    ]
    rules.append(ReductRuleBuilder(gp, atom_ids).build(head=()))
    return Program(rules, facts)


def abduction_encoding(inst: AbductionInstance) -> Program:
    """Saturation encoding of stable cautious abduction: guess a hypothesis
    selection plus a full assignment, saturate whenever the assignment
    contains all manifestations, is no model, or fails subset-minimality.
    Consistent exactly when some selection forces the manifestations into
    every answer set of the extended program.

    The construction equates a hypothesis being selected with its atom
    being true, so hypotheses must be abducible: a hypothesis occurring in
    a rule head could also be derived, which the per-selection saturation
    search cannot see."""
    gp = inst.program
    derivable = {i for rule in gp.rules for i in rule.head}
    clash = sorted(inst.hypotheses & derivable)
    if clash:
        names = ", ".join(str(gp.atoms[i]) for i in clash)
        raise InputSemanticsError(
            f"hypotheses occurring in rule heads are not abducible: {names}"
        )
    atom_ids = reified_atom_ids(gp)

    facts: list[Atom] = [Atom("atom", (Constant(aid),)) for aid in atom_ids]
    facts += [Atom("hyp", (Constant(atom_ids[i]),)) for i in sorted(inst.hypotheses)]
    facts += list(_TRUTH_TABLE_FACTS)

    var_a = Variable("A")
    one, zero = Integer(1), Integer(0)
    sat = Atom("sat")
    rules = [
        Rule(
            head=(Atom("assign", (var_a, one)), Atom("assign", (var_a, zero))),
            pos_body=(pos(Atom("atom", (var_a,))),),
        ),
        Rule(
            head=(Atom("assign", (var_a, one)),),
            pos_body=(pos(sat), pos(Atom("atom", (var_a,)))),
            neg_body=(neg(Atom("hyp", (var_a,))),),
        ),
        Rule(
            head=(Atom("assign", (var_a, zero)),),
            pos_body=(pos(sat), pos(Atom("atom", (var_a,)))),
            neg_body=(neg(Atom("hyp", (var_a,))),),
        ),
        Rule(head=(), neg_body=(neg(sat),)),
        Rule(
            head=(sat,),
            pos_body=tuple(
                pos(Atom("assign", (Constant(atom_ids[i]), one)))
                for i in sorted(inst.manifestations)
            ),
        ),
    ]
    for rule in gp.rules:
        violated = [pos(Atom("assign", (Constant(atom_ids[i]), zero))) for i in rule.head]
        violated += [pos(Atom("assign", (Constant(atom_ids[i]), one))) for i in rule.pos]
        violated += [pos(Atom("assign", (Constant(atom_ids[i]), zero))) for i in rule.neg]
        rules.append(Rule(head=(sat,), pos_body=tuple(violated)))
    rules.append(
        ReductRuleBuilder(gp, atom_ids, frozenset(inst.hypotheses)).build(head=(sat,))
    )
    return Program(rules, facts)
