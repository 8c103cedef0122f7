"""Desk-scale ground-truth machinery: a join-based grounder, an exact
answer-set enumerator, and brute-force QBF / coloring / abduction solvers.

The enumerator decides truth only for atoms that can actually vary (atoms
in negative bodies or disjunctive heads), propagates lower/upper bounds
between decisions, and verifies subset-minimality against the reduct. A
literal subset-enumeration variant is kept for cross-checking; both return
exactly the answer sets of the textbook reduct semantics.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import (
    GroundingLimitError,
    SafetyError,
    TooManyAtomsError,
    TooManyVarsError,
    TooManyVerticesError,
    UnsupportedAggregateError,
)
from .parse import InputGraph, Qbf
from .syntax import (
    Aggregate,
    Atom,
    Comparison,
    Constant,
    GroundProgram,
    GroundRule,
    Integer,
    Interpretation,
    Program,
    Rule,
    Variable,
    eval_term,
    ground_term,
    is_safe,
    term_variables,
)

_INT, _SYM = 0, 1


def _raw_key(value) -> tuple:
    return (_INT, value) if isinstance(value, int) else (_SYM, value)


def _atom_raw(a: Atom) -> tuple:
    args = []
    for arg in a.args:
        if isinstance(arg, Constant):
            args.append(arg.name)
        elif isinstance(arg, Integer):
            args.append(arg.value)
        else:
            raise ValueError(f"atom {a} is not ground")
    return (a.pred, tuple(args))


def _raw_atom(key: tuple) -> Atom:
    pred, args = key
    return Atom(pred, tuple(ground_term(v) for v in args))


# ---------------------------------------------------------------- matching --

class _Store:
    """Possibly-true ground atoms, indexed by predicate."""

    __slots__ = ("by_pred", "keys")

    def __init__(self):
        self.by_pred: dict[str, list[tuple]] = {}
        self.keys: set[tuple] = set()

    def add(self, key: tuple) -> bool:
        if key in self.keys:
            return False
        self.keys.add(key)
        self.by_pred.setdefault(key[0], []).append(key[1])
        return True

    def candidates(self, pred: str) -> list[tuple]:
        return self.by_pred.get(pred, ())


def _compile_atom(a: Atom):
    """Patterns: ('v', name) variable, ('k', value) fixed, ('t', term, vars)
    embedded arithmetic evaluated once its variables are bound."""
    patterns = []
    for arg in a.args:
        if isinstance(arg, Variable):
            patterns.append(("v", arg.name))
        elif isinstance(arg, Constant):
            patterns.append(("k", arg.name))
        elif isinstance(arg, Integer):
            patterns.append(("k", arg.value))
        else:
            patterns.append(("t", arg, frozenset(term_variables(arg))))
    return (a.pred, tuple(patterns))


def _eval_comparison(comp: Comparison, binding) -> bool:
    left = eval_term(comp.left, binding)
    right = eval_term(comp.right, binding)
    if comp.op == "=":
        return left == right
    if comp.op == "!=":
        return left != right
    lk, rk = _raw_key(left), _raw_key(right)
    if comp.op == "<":
        return lk < rk
    if comp.op == "<=":
        return lk <= rk
    if comp.op == ">":
        return lk > rk
    return lk >= rk


def _join(patterns, comparisons, store: _Store, binding: dict):
    """Yield every extension of `binding` that matches all positive
    patterns against the store and satisfies all comparisons. Binding
    equations `X = phi` assign X once phi's variables are bound."""
    pending_atoms = list(range(len(patterns)))
    pending_comps = list(comparisons)

    def propagate(trail) -> bool:
        progress = True
        while progress:
            progress = False
            for comp in pending_comps[:]:
                comp_vars = set(term_variables(comp.left)) | set(term_variables(comp.right))
                unbound = [vn for vn in comp_vars if vn not in binding]
                if not unbound:
                    if not _eval_comparison(comp, binding):
                        return False
                    pending_comps.remove(comp)
                    trail.append(("c", comp))
                    progress = True
                elif (
                    comp.is_binding_equation()
                    and comp.left.name not in binding
                    and all(vn in binding for vn in term_variables(comp.right))
                ):
                    binding[comp.left.name] = eval_term(comp.right, binding)
                    trail.append(("b", comp.left.name))
                    pending_comps.remove(comp)
                    trail.append(("c", comp))
                    progress = True
        return True

    def undo(trail):
        for kind, payload in reversed(trail):
            if kind == "b":
                del binding[payload]
            else:
                pending_comps.append(payload)

    def bound_score(idx) -> int:
        _, pats = patterns[idx]
        score = 0
        for pat in pats:
            if pat[0] == "k" or (pat[0] == "v" and pat[1] in binding):
                score += 1
            elif pat[0] == "t" and all(vn in binding for vn in pat[2]):
                score += 1
        return score

    def rec():
        trail: list = []
        if not propagate(trail):
            undo(trail)
            return
        if not pending_atoms:
            if pending_comps:
                # Leftover comparisons with unbound variables: the rule was
                # not groundable, which safe inputs never produce.
                undo(trail)
                raise SafetyError(
                    {vn for comp in pending_comps
                     for vn in set(term_variables(comp.left)) | set(term_variables(comp.right))
                     if vn not in binding},
                    "ungroundable comparison",
                )
            yield dict(binding)
            undo(trail)
            return
        idx = max(pending_atoms, key=bound_score)
        pending_atoms.remove(idx)
        pred, pats = patterns[idx]
        for args in store.candidates(pred):
            if len(args) != len(pats):
                continue
            inner: list = []
            ok = True
            for pat, value in zip(pats, args):
                kind = pat[0]
                if kind == "k":
                    if pat[1] != value:
                        ok = False
                        break
                elif kind == "v":
                    name = pat[1]
                    have = binding.get(name)
                    if have is None:
                        binding[name] = value
                        inner.append(("b", name))
                    elif have != value:
                        ok = False
                        break
                else:
                    term, vs = pat[1], pat[2]
                    if all(vn in binding for vn in vs):
                        if eval_term(term, binding) != value:
                            ok = False
                            break
                    else:
                        # Re-check once the variables are bound.
                        deferred = Comparison("=", term, ground_term(value))
                        pending_comps.append(deferred)
                        inner.append(("c2", deferred))
            if ok:
                yield from rec()
            for kind, payload in reversed(inner):
                if kind == "b":
                    del binding[payload]
                else:
                    pending_comps.remove(payload)
        pending_atoms.append(idx)
        undo(trail)

    yield from rec()


# --------------------------------------------------------------- grounding --

@dataclass(frozen=True)
class GroundingResult:
    ground_program: GroundProgram
    rule_count: int
    atom_count: int
    source_rule_map: dict[int, int]


def ground(program: Program, max_ground_rules: int = 200_000) -> GroundingResult:
    """Instantiate rule variables by joining positive bodies against the
    possibly-true closure. Arithmetic atoms are evaluated away, aggregates
    are expanded under the deterministic-fragment semantics, and instances
    whose positive body can never be derived are omitted."""
    for r in program.rules:
        ok, unsafe = is_safe(r)
        if not ok:
            raise SafetyError(unsafe, str(r))

    compiled = []
    for r in program.rules:
        pos_patterns = tuple(_compile_atom(l.atom) for l in r.pos_body)
        compiled.append((r, pos_patterns))

    agg_eval = _AggregateContext(program) if any(r.aggregates for r in program.rules) else None

    store = _Store()
    for f in program.facts:
        store.add(_atom_raw(f))

    emitted_budget = [0]

    def charge(amount: int = 1):
        emitted_budget[0] += amount
        if emitted_budget[0] > max_ground_rules:
            raise GroundingLimitError(
                f"grounding exceeds {max_ground_rules} rule instances"
            )

    # Possibly-true closure; derived heads feed later joins immediately.
    # The budget is charged per sweep, so divergent programs (for example
    # arithmetic that keeps inventing integers) fail loudly.
    changed = True
    while changed:
        changed = False
        emitted_budget[0] = 0
        for r, pos_patterns in compiled:
            for binding in _join(pos_patterns, r.arith, store, {}):
                charge()
                if agg_eval and not agg_eval.all_true(r.aggregates, binding):
                    continue
                for head_atom in r.head:
                    key = _ground_atom_key(head_atom, binding)
                    if store.add(key):
                        changed = True
        if len(store.keys) > max_ground_rules:
            raise GroundingLimitError(
                f"possibly-true closure exceeds {max_ground_rules} atoms"
            )

    # Final emission with negative-literal simplification.
    fact_keys: set[tuple] = set()
    fact_order: list[tuple] = []
    for f in program.facts:
        key = _atom_raw(f)
        if key not in fact_keys:
            fact_keys.add(key)
            fact_order.append(key)

    atom_table: dict[tuple, int] = {}
    atoms: list[Atom] = []

    def intern(key: tuple) -> int:
        idx = atom_table.get(key)
        if idx is None:
            idx = len(atoms)
            atom_table[key] = idx
            atoms.append(_raw_atom(key))
        return idx

    ground_rules: list[GroundRule] = []
    source_map: dict[int, int] = {}
    emitted_budget[0] = 0
    for key in fact_order:
        ground_rules.append(GroundRule((intern(key),), (), ()))
        charge()

    for src_index, (r, pos_patterns) in enumerate(compiled):
        seen: set = set()
        instances: list[tuple[tuple, tuple]] = []
        for binding in _join(pos_patterns, r.arith, store, {}):
            charge()
            if agg_eval and not agg_eval.all_true(r.aggregates, binding):
                continue
            head = tuple(_ground_atom_key(a, binding) for a in r.head)
            pos_keys = tuple(_ground_atom_key(l.atom, binding) for l in r.pos_body)
            neg_keys = []
            dropped = False
            for l in r.neg_body:
                key = _ground_atom_key(l.atom, binding)
                if key in fact_keys:
                    dropped = True  # negated fact: instance can never fire
                    break
                if key in store.keys:
                    neg_keys.append(key)
                # else: atom can never be true, the literal is vacuous
            if dropped:
                continue
            shape = (head, pos_keys, tuple(neg_keys))
            if shape in seen:
                continue
            seen.add(shape)
            sort_key = tuple(
                (name, _raw_key(value)) for name, value in sorted(binding.items())
            )
            instances.append((sort_key, shape))
        instances.sort(key=lambda item: item[0])
        for _, (head, pos_keys, neg_keys) in instances:
            gr = GroundRule(
                tuple(_dedup(intern(k) for k in head)),
                tuple(_dedup(intern(k) for k in pos_keys)),
                tuple(_dedup(intern(k) for k in neg_keys)),
            )
            source_map[len(ground_rules)] = src_index
            ground_rules.append(gr)

    gp = GroundProgram(atoms, ground_rules)
    return GroundingResult(gp, len(source_map), len(atoms), source_map)


def _dedup(items):
    seen = set()
    out = []
    for item in items:
        if item not in seen:
            seen.add(item)
            out.append(item)
    return out


def _atom_vars(a: Atom):
    for arg in a.args:
        yield from term_variables(arg)


def _ground_atom_key(a: Atom, binding) -> tuple:
    args = []
    for arg in a.args:
        if isinstance(arg, Constant):
            args.append(arg.name)
        elif isinstance(arg, Integer):
            args.append(arg.value)
        else:
            args.append(eval_term(arg, binding))
    return (a.pred, tuple(args))


class _AggregateContext:
    """Aggregate expansion over the deterministic sub-program: condition
    predicates must be defined by facts or by normal, aggregate-free rules
    whose bodies stay inside the fragment (negation only over fact-defined
    predicates). Their extension is then identical in every answer set, so
    aggregates can be decided at grounding time."""

    def __init__(self, program: Program):
        defined_by_rules: dict[str, list[Rule]] = {}
        for r in program.rules:
            for a in r.head:
                defined_by_rules.setdefault(a.pred, []).append(r)
        fact_preds = {f.pred for f in program.facts}
        fact_only = {
            p for p in fact_preds if p not in defined_by_rules
        }

        det = set(fact_only) | {
            p for p in program.predicates() if p not in defined_by_rules and p not in fact_preds
        }
        changed = True
        while changed:
            changed = False
            for pred, defs in defined_by_rules.items():
                if pred in det:
                    continue
                ok = True
                for r in defs:
                    if len(r.head) != 1 or r.aggregates:
                        ok = False
                        break
                    if any(l.atom.pred not in det for l in r.pos_body):
                        ok = False
                        break
                    if any(l.atom.pred not in fact_only for l in r.neg_body):
                        ok = False
                        break
                if ok:
                    det.add(pred)
                    changed = True
        self.det = det
        self.fact_keys = {_atom_raw(f) for f in program.facts}

        # Least model of the deterministic rules.
        self.store = _Store()
        for f in program.facts:
            self.store.add(_atom_raw(f))
        det_rules = [
            r
            for defs in defined_by_rules.values()
            for r in defs
            if len(r.head) == 1 and r.head[0].pred in det
        ]
        compiled = [
            (r, tuple(_compile_atom(l.atom) for l in r.pos_body)) for r in det_rules
        ]
        changed = True
        while changed:
            changed = False
            for r, patterns in compiled:
                for binding in _join(patterns, r.arith, self.store, {}):
                    if any(
                        _ground_atom_key(l.atom, binding) in self.fact_keys
                        for l in r.neg_body
                    ):
                        continue
                    if self.store.add(_ground_atom_key(r.head[0], binding)):
                        changed = True

    def all_true(self, aggregates, binding) -> bool:
        return all(self._eval(agg, binding) for agg in aggregates)

    def _eval(self, agg: Aggregate, outer_binding) -> bool:
        for lit in agg.condition:
            if lit.atom.pred not in self.det:
                raise UnsupportedAggregateError(
                    f"aggregate condition over non-deterministic predicate {lit.atom.pred}"
                )
        positive = [l.atom for l in agg.condition if not l.negated]
        negative = [l.atom for l in agg.condition if l.negated]
        cond_vars = set()
        for l in agg.condition:
            cond_vars.update(_atom_vars(l.atom))
        bound_from_pos = set(outer_binding)
        for a in positive:
            bound_from_pos.update(_atom_vars(a))
        loose = cond_vars - bound_from_pos
        if loose:
            raise UnsupportedAggregateError(
                f"aggregate variables {sorted(loose)} not bound by a positive condition literal"
            )
        patterns = tuple(_compile_atom(a) for a in positive)
        tuples: set[tuple] = set()
        base = dict(outer_binding)
        for binding in _join(patterns, (), self.store, base):
            if any(_ground_atom_key(a, binding) in self.store.keys for a in negative):
                continue
            tuples.add(tuple(binding[vn] for vn in agg.tuple_vars))
        value = self._aggregate_value(agg.func, tuples)
        if value is None:
            return False
        guard = eval_term(agg.guard, outer_binding)
        return _compare_raw(agg.guard_op, value, guard)

    @staticmethod
    def _aggregate_value(func: str, tuples: set[tuple]):
        if func == "count":
            return len(tuples)
        firsts = []
        for tup in tuples:
            if not tup or not isinstance(tup[0], int):
                raise UnsupportedAggregateError(
                    f"#{func} needs integer first components, got {tup!r}"
                )
            firsts.append(tup[0])
        if func == "sum":
            return sum(firsts)
        if not firsts:
            return None  # empty #min/#max never satisfies a guard
        return min(firsts) if func == "min" else max(firsts)


def _compare_raw(op: str, left, right) -> bool:
    if op == "=":
        return left == right
    if op == "!=":
        return left != right
    lk, rk = _raw_key(left), _raw_key(right)
    return {"<": lk < rk, "<=": lk <= rk, ">": lk > rk, ">=": lk >= rk}[op]


# ------------------------------------------------------------------ reduct --

def reduct(gp: GroundProgram, interp: Interpretation) -> GroundProgram:
    """Gelfond-Lifschitz reduct: drop rules whose negative body meets the
    interpretation, strip negative bodies from the rest."""
    rules = [
        GroundRule(r.head, r.pos, ())
        for r in gp.rules
        if not (set(r.neg) & interp.true_atoms)
    ]
    return GroundProgram(gp.atoms, rules)


# ------------------------------------------------------------- answer sets --

def _rule_masks(gp: GroundProgram):
    masks = []
    for r in gp.rules:
        h = p = g = 0
        for i in r.head:
            h |= 1 << i
        for i in r.pos:
            p |= 1 << i
        for i in r.neg:
            g |= 1 << i
        masks.append((h, p, g))
    return masks


def _is_model(mask_rules, m: int) -> bool:
    for h, p, g in mask_rules:
        if (p & ~m) == 0 and (g & m) == 0 and (h & m) == 0:
            return False
    return True


def _possibly_true(mask_rules) -> int:
    pt = 0
    changed = True
    while changed:
        changed = False
        for h, p, _ in mask_rules:
            if (p & ~pt) == 0 and (h & ~pt) != 0:
                pt |= h
                changed = True
    return pt


def _minimal_below(mask_rules, m: int) -> bool:
    """True iff no proper subset of m models the reduct w.r.t. m. Branches
    over disjunctive heads restricted below m; every minimal model of the
    restricted positive program appears as a leaf."""
    red = []
    for h, p, g in mask_rules:
        if g & m:
            continue
        if p & ~m:
            continue
        red.append((h & m, p))
    seen: set[int] = set()

    def dfs(n: int) -> bool:
        changed = True
        while changed:
            changed = False
            for h, p in red:
                if (p & ~n) == 0 and (h & n) == 0 and h and (h & (h - 1)) == 0:
                    n |= h
                    changed = True
        if n in seen:
            return False
        seen.add(n)
        for h, p in red:
            if (p & ~n) == 0 and (h & n) == 0:
                rest = h
                while rest:
                    low = rest & -rest
                    rest &= rest - 1
                    if dfs(n | low):
                        return True
                return False
        return n != m

    return not dfs(0)


def _enumerate_answer_sets(gp: GroundProgram, first_only: bool):
    mask_rules = _rule_masks(gp)
    n = len(gp.atoms)
    universe = (1 << n) - 1
    pt = _possibly_true(mask_rules)
    nb = 0
    dh = 0
    for h, _, g in mask_rules:
        nb |= g
        if h and (h & (h - 1)) != 0:
            dh |= h
    decision_bits = []
    decided_mask = (nb | dh) & pt
    bit = 1
    for i in range(n):
        if decided_mask & bit:
            decision_bits.append(bit)
        bit <<= 1

    def propagate(t: int, f: int):
        while True:
            hi = 0
            changed = True
            while changed:
                changed = False
                for h, p, g in mask_rules:
                    if g & t:
                        continue
                    if (p & ~hi) == 0:
                        add = h & ~f & ~hi
                        if add:
                            hi |= add
                            changed = True
            if t & ~hi:
                return None
            new_f = f | (universe & ~hi)
            new_t = t
            for h, p, g in mask_rules:
                if g & new_t:
                    continue
                if g & hi:
                    continue  # may still be dropped from the reduct
                if p & ~new_t:
                    continue
                live = h & hi
                if live == 0:
                    return None
                if live & new_t:
                    continue
                if (live & (live - 1)) == 0:
                    new_t |= live
            if new_t == t and new_f == f:
                return t, f, hi
            if new_t & new_f:
                return None
            t, f = new_t, new_f

    results: list[int] = []

    def rec(t: int, f: int):
        if first_only and results:
            return
        state = propagate(t, f)
        if state is None:
            return
        t, f, hi = state
        for bit in decision_bits:
            if not (t & bit) and not (f & bit):
                rec(t | bit, f)
                rec(t, f | bit)
                return
        m = t
        if not _is_model(mask_rules, m):
            return
        # Support: every true atom needs a surviving rule it uniquely heads.
        rest = m
        while rest:
            low = rest & -rest
            rest &= rest - 1
            if not any(
                (g & m) == 0 and (p & ~m) == 0 and (h & m) == low
                for h, p, g in mask_rules
            ):
                return
        if _minimal_below(mask_rules, m):
            results.append(m)

    rec(0, universe & ~pt)
    return results


def answer_sets(gp: GroundProgram, max_atoms: int = 24) -> set[Interpretation]:
    """All answer sets. The cap guards against accidentally huge inputs and
    can be raised explicitly."""
    if len(gp.atoms) > max_atoms:
        raise TooManyAtomsError(f"{len(gp.atoms)} atoms exceeds cap {max_atoms}")
    found = _enumerate_answer_sets(gp, first_only=False)
    return {Interpretation(frozenset(_bits(m))) for m in found}


def has_answer_set(gp: GroundProgram, max_atoms: int = 24) -> bool:
    if len(gp.atoms) > max_atoms:
        raise TooManyAtomsError(f"{len(gp.atoms)} atoms exceeds cap {max_atoms}")
    return bool(_enumerate_answer_sets(gp, first_only=True))


def answer_sets_naive(gp: GroundProgram, max_atoms: int = 14) -> set[Interpretation]:
    """Literal definition: enumerate candidates by cardinality then
    lexicographic order, test modelhood, then subset-minimality against the
    reduct by subset enumeration. Cross-check oracle for the fast path."""
    n = len(gp.atoms)
    if n > max_atoms:
        raise TooManyAtomsError(f"{n} atoms exceeds cap {max_atoms}")
    mask_rules = _rule_masks(gp)
    out: set[Interpretation] = set()
    for size in range(n + 1):
        for combo in combinations(range(n), size):
            m = 0
            for i in combo:
                m |= 1 << i
            if not _is_model(mask_rules, m):
                continue
            red = [(h, p) for h, p, g in mask_rules if (g & m) == 0]
            minimal = True
            for sub_size in range(size):
                for sub in combinations(combo, sub_size):
                    nmask = 0
                    for i in sub:
                        nmask |= 1 << i
                    if _positive_model(red, nmask):
                        minimal = False
                        break
                if not minimal:
                    break
            if minimal:
                out.add(Interpretation(frozenset(combo)))
    return out


def _positive_model(red, m: int) -> bool:
    for h, p in red:
        if (p & ~m) == 0 and (h & m) == 0:
            return False
    return True


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


# -------------------------------------------------------------- eval_qbf ---

def eval_qbf(qbf: Qbf, max_vars: int = 24) -> bool:
    """Recursive evaluation over the prefix: universal blocks need both
    branches, existential blocks need one; the empty matrix is true and an
    empty clause is false."""
    if qbf.num_vars > max_vars:
        raise TooManyVarsError(f"{qbf.num_vars} variables exceeds cap {max_vars}")
    flat = [(q, x) for q, block in qbf.prefix for x in block]
    pos_masks = []
    neg_masks = []
    for clause in qbf.clauses:
        pm = nm = 0
        for lit in clause.lits:
            if lit > 0:
                pm |= 1 << (lit - 1)
            else:
                nm |= 1 << (-lit - 1)
        pos_masks.append(pm)
        neg_masks.append(nm)

    def matrix(true_mask: int) -> bool:
        for pm, nm in zip(pos_masks, neg_masks):
            if (pm & true_mask) == 0 and (nm & ~true_mask) == 0:
                return False
        return True

    def rec(idx: int, true_mask: int) -> bool:
        if idx == len(flat):
            return matrix(true_mask)
        q, var = flat[idx]
        bit = 1 << (var - 1)
        first = rec(idx + 1, true_mask)
        if q == "a":
            return first and rec(idx + 1, true_mask | bit)
        return first or rec(idx + 1, true_mask | bit)

    return rec(0, 0)


def eval_qbf_expansion(qbf: Qbf, max_vars: int = 12) -> bool:
    """Independent evaluation style: expand quantifiers into an explicit
    and/or tree over fully substituted matrix copies, then fold the tree."""
    if qbf.num_vars > max_vars:
        raise TooManyVarsError(f"{qbf.num_vars} variables exceeds cap {max_vars}")
    flat = [(q, x) for q, block in qbf.prefix for x in block]

    def build(idx: int, env: dict[int, bool]):
        if idx == len(flat):
            clause_nodes = []
            for clause in qbf.clauses:
                lit_nodes = []
                for lit in clause.lits:
                    value = env.get(abs(lit), False)
                    lit_nodes.append(value if lit > 0 else not value)
                clause_nodes.append(("or", lit_nodes))
            return ("and", clause_nodes)
        q, var = flat[idx]
        lo = build(idx + 1, {**env, var: False})
        hi = build(idx + 1, {**env, var: True})
        return ("and", [lo, hi]) if q == "a" else ("or", [lo, hi])

    def fold(node) -> bool:
        if isinstance(node, bool):
            return node
        op, children = node
        values = [fold(child) for child in children]
        return all(values) if op == "and" else any(values)

    return fold(build(0, {}))


# --------------------------------------------------------------- coloring --

def solve_coloring(g: InputGraph, n_colors: int = 3, max_vertices: int = 16):
    """Proper coloring by backtracking, or None. Colors are 0..n_colors-1."""
    verts = sorted(g.vertices)
    if len(verts) > max_vertices:
        raise TooManyVerticesError(f"{len(verts)} vertices exceeds cap {max_vertices}")
    adjacency = {vtx: g.neighbors(vtx) for vtx in verts}
    order = sorted(verts, key=lambda vtx: -len(adjacency[vtx]))
    coloring: dict[str, int] = {}

    def assign(idx: int) -> bool:
        if idx == len(order):
            return True
        vtx = order[idx]
        for color in range(n_colors):
            if all(coloring.get(nb) != color for nb in adjacency[vtx]):
                coloring[vtx] = color
                if assign(idx + 1):
                    return True
                del coloring[vtx]
        return False

    return dict(coloring) if assign(0) else None


# -------------------------------------------------------------- abduction --

def abduce_bruteforce(
    inst,
    require_consistent: bool = False,
    max_universe: int = 12,
    max_hypotheses: int = 8,
):
    """Smallest witness E <= H (by size, then lexicographic) such that every
    answer set of the program extended with E contains all manifestations.
    With require_consistent the original extra condition AS != {} applies."""
    gp = inst.program
    if len(gp.atoms) > max_universe:
        raise TooManyAtomsError(f"{len(gp.atoms)} atoms exceeds cap {max_universe}")
    hyps = sorted(inst.hypotheses)
    if len(hyps) > max_hypotheses:
        raise TooManyAtomsError(f"{len(hyps)} hypotheses exceeds cap {max_hypotheses}")
    manifestations = frozenset(inst.manifestations)
    for size in range(len(hyps) + 1):
        for combo in combinations(hyps, size):
            extended = GroundProgram(
                gp.atoms,
                tuple(gp.rules) + tuple(GroundRule((h,), (), ()) for h in combo),
            )
            sets = answer_sets(extended, max_atoms=max_universe)
            if require_consistent and not sets:
                continue
            if all(manifestations <= s.true_atoms for s in sets):
                return frozenset(combo)
    return None
