"""Relational clauses in functional notation and a depth-first solver.

Clauses are written ``rel(P1, .., Pn) := Body`` where the body is a term
describing the call's result node.  Relation calls may appear anywhere a
term may; an argument is passed unevaluated and runs at its first use, so
an alternant clause that ignores an argument never executes it.  Clause
selection is a chronological choice point: alternatives are tried in
source order, each selection is appended to the proof, and the trail
rolls everything back on failure.  The net effect is that choice points
fire left to right along the segmental string being described, which is
what makes zero-first search enumerate candidates in ascending
disharmony order.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

from .features import (FeatureNode, Store, Trail, add_feature, copy_graph,
                       narrow, unify)
from .typespace import TypeConstraint, TypeDomain


class GrammarError(Exception):
    """Undeclared relation/feature or a malformed grammar definition."""


# --------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class TypeT:
    constraint: TypeConstraint


@dataclass(frozen=True)
class FeatT:
    name: str
    sub: object


@dataclass(frozen=True)
class AndT:
    subs: tuple


@dataclass(frozen=True)
class OrT:
    subs: tuple


@dataclass(frozen=True)
class VarT:
    name: str


@dataclass(frozen=True)
class WildT:
    pass


@dataclass(frozen=True)
class CallT:
    relation: str
    args: tuple


@dataclass(frozen=True)
class ListT:
    """Fixed prefix plus optional tail pattern; as an argument a plain
    fixed-length list."""
    items: tuple
    tail: object = None


def feat(path, sub):
    """``feat("left.left", t)`` builds nested single-feature terms."""
    parts = path.split(".")
    term = sub
    for name in reversed(parts):
        term = FeatT(name, term)
    return term


def conj(*subs):
    return AndT(tuple(subs))


def disj(*subs):
    return OrT(tuple(subs))


def call(relation, *args):
    return CallT(relation, tuple(args))


V = VarT
W = WildT()


# --------------------------------------------------------------------------
# clauses and grammars


@dataclass(frozen=True)
class Clause:
    cid: str                  # "module:relation/ordinal", stable across runs
    relation: str
    params: tuple
    body: object


@dataclass
class Relation:
    name: str
    module: str
    clauses: list = field(default_factory=list)
    #: alternation relations swap clause order under realize-first search
    swap_when_reversed: bool = False


class Grammar:
    """An immutable bundle of a type domain and indexed relations.
    Subclasses add goal builders, spelling and paradigm-cell enumeration."""

    name = "grammar"
    #: relations whose clause choices encode lexical access (letter tree);
    #: exempt from oracle guidance when the oracle is lexicon-abstract
    lexicon_relations: frozenset = frozenset()

    def __init__(self, domain: TypeDomain):
        self.domain = domain
        self.relations: dict[str, Relation] = {}
        self._clause_ids = []

    # -- construction -------------------------------------------------------

    def declare(self, module, relation, swap_when_reversed=False):
        if relation not in self.relations:
            self.relations[relation] = Relation(relation, module)
        if swap_when_reversed:
            self.relations[relation].swap_when_reversed = True
        return self.relations[relation]

    def clause(self, module, relation, params, body, swap_when_reversed=False):
        rel = self.declare(module, relation, swap_when_reversed)
        if rel.module != module:
            raise GrammarError(f"relation {relation!r} spans modules")
        cid = f"{module}:{relation}/{len(rel.clauses) + 1}"
        cl = Clause(cid, relation, tuple(params), body)
        rel.clauses.append(cl)
        self._clause_ids.append(cid)
        return cl

    def ty(self, expr):
        """A type term, resolved against this grammar's domain."""
        return TypeT(self.domain.resolve(expr))

    def clause_ids(self):
        return tuple(self._clause_ids)

    def clause_id_set(self):
        return frozenset(self._clause_ids)

    def validate(self):
        """Catch typos at build time: every called relation and every
        feature name must be declared."""
        def walk(term):
            if isinstance(term, CallT):
                if term.relation not in self.relations:
                    raise GrammarError(f"undeclared relation {term.relation!r}")
                for a in term.args:
                    walk(a)
            elif isinstance(term, FeatT):
                if term.name not in self.domain.features:
                    raise GrammarError(f"undeclared feature {term.name!r}")
                walk(term.sub)
            elif isinstance(term, (AndT, OrT)):
                for s in term.subs:
                    walk(s)
            elif isinstance(term, ListT):
                for s in term.items:
                    walk(s)
                if term.tail is not None:
                    walk(term.tail)
        for rel in self.relations.values():
            for cl in rel.clauses:
                for p in cl.params:
                    walk(p)
                walk(cl.body)
        return self


# --------------------------------------------------------------------------
# runtime values


class Thunk:
    """An unevaluated argument: a term plus the environment to run it in.
    Forced at first use, onto the node it is used at, and memoized so a
    second use unifies with the first result."""

    __slots__ = ("term", "env", "forced")

    def __init__(self, term, env):
        self.term = term
        self.env = env
        self.forced = None


class ValueList:
    __slots__ = ("items",)

    def __init__(self, items):
        self.items = list(items)


@dataclass
class Solution:
    """One detached answer: later backtracking cannot mutate it."""
    root: FeatureNode
    bindings: dict
    proof: tuple

    def proof_text(self):
        return "\n".join(self.proof)


class Oracle:
    """A deterministic automaton over clause ids, replayed in lockstep with
    clause selection.  ``abstract_lexicon`` oracles leave the grammar's
    lexicon relations unguided (their steps were stripped at compile time)."""

    def __init__(self, dfa, fingerprint, abstract_lexicon=False):
        self.dfa = dfa
        self.fingerprint = fingerprint
        self.abstract_lexicon = abstract_lexicon


class OracleMismatch(Exception):
    """Oracle fingerprint does not match the grammar build."""


# --------------------------------------------------------------------------
# solver


class SolveRun:
    """One solve invocation: a lazy solution stream plus instrumentation.
    ``clause_applications`` counts every clause selection attempted,
    including ones whose body failed; oracle-skipped clauses are never
    attempted and so never counted."""

    def __init__(self, grammar, goal, want=(), record_proofs=True,
                 oracle=None, x0_order="zero_first", fingerprint=None):
        if oracle is not None and fingerprint is not None:
            if oracle.fingerprint != fingerprint:
                raise OracleMismatch(
                    f"oracle fingerprint {oracle.fingerprint} does not match "
                    f"grammar build {fingerprint}")
        self.grammar = grammar
        self.goal = goal
        self.want = tuple(want)
        self.record_proofs = record_proofs
        self.oracle = oracle
        if x0_order not in ("zero_first", "source", "realize_first"):
            raise GrammarError(f"unknown clause order {x0_order!r}")
        self.reversed_x0 = x0_order == "realize_first"
        self.clause_applications = 0
        self.store = Store()
        self.trail = Trail()
        self._proof = []
        self._ostate = [oracle.dfa.start if oracle is not None else None]
        self._consumed = False

    # -- public API ---------------------------------------------------------

    def __iter__(self):
        if self._consumed:
            raise RuntimeError("a SolveRun can only be iterated once")
        self._consumed = True
        return self._solutions()

    def all(self):
        return list(self)

    def first(self):
        for sol in self:
            return sol
        return None

    # -- the depth-first machine --------------------------------------------

    def _solutions(self):
        sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
        env = {}
        root = self.store.new_node(self.trail)
        for _ in self._eval(self.goal, root, env):
            if self.oracle is not None and \
                    self._ostate[0] not in self.oracle.dfa.finals:
                continue
            yield self._snapshot(root, env)

    def _snapshot(self, root, env):
        out = Store()
        roots = [root]
        names = []
        for name in self.want:
            val = env.get(name)
            names.append((name, val))
            if isinstance(val, FeatureNode):
                roots.append(val)
            elif isinstance(val, ValueList):
                roots.extend(v for v in val.items if isinstance(v, FeatureNode))
        copies = copy_graph(roots, out)
        mapping = dict(zip((id(r.find()) for r in roots), copies))

        def lookup(val):
            if isinstance(val, FeatureNode):
                return mapping[id(val.find())]
            if isinstance(val, ValueList):
                return [lookup(v) for v in val.items]
            return val

        bindings = {name: lookup(val) for name, val in names}
        return Solution(copies[0], bindings, tuple(self._proof))

    def _eval(self, term, node, env):
        trail = self.trail
        if isinstance(term, TypeT):
            mark = trail.mark()
            c = term.constraint
            if narrow(node, c.dimension, c.leaves, self.grammar.domain, trail):
                yield True
            trail.undo_to(mark)
        elif isinstance(term, FeatT):
            mark = trail.mark()
            child = add_feature(node.find(), term.name, self.grammar.domain,
                                self.store, trail)
            if child is not None:
                yield from self._eval(term.sub, child, env)
            trail.undo_to(mark)
        elif isinstance(term, AndT):
            yield from self._eval_seq(term.subs, 0, node, env)
        elif isinstance(term, OrT):
            for alt in term.subs:
                mark = trail.mark()
                yield from self._eval(alt, node, env)
                trail.undo_to(mark)
        elif isinstance(term, VarT):
            val = env.get(term.name)
            if val is None:
                mark = trail.mark()
                trail.bind_env(env, term.name, node)
                yield True
                trail.undo_to(mark)
            elif isinstance(val, FeatureNode):
                mark = trail.mark()
                if unify(node, val, self.grammar.domain, trail):
                    yield True
                trail.undo_to(mark)
            elif isinstance(val, Thunk):
                yield from self._force_onto(val, node)
            else:
                raise GrammarError(
                    f"list-valued variable {term.name!r} used as a term")
        elif isinstance(term, CallT):
            yield from self._call(term, node, env)
        elif isinstance(term, WildT):
            yield True
        elif isinstance(term, ListT):
            raise GrammarError("list term used where a description is expected")
        else:
            raise GrammarError(f"unknown term {term!r}")

    def _eval_seq(self, terms, i, node, env):
        if i == len(terms):
            yield True
            return
        for _ in self._eval(terms[i], node, env):
            yield from self._eval_seq(terms, i + 1, node, env)

    def _force_onto(self, thunk, node):
        trail = self.trail
        if thunk.forced is not None:
            mark = trail.mark()
            if unify(node, thunk.forced, self.grammar.domain, trail):
                yield True
            trail.undo_to(mark)
        else:
            mark = trail.mark()
            trail.log(("thunk", thunk, None))
            thunk.forced = node
            yield from self._eval(thunk.term, node, thunk.env)
            trail.undo_to(mark)

    def _force_value(self, value):
        """Yield a node for a pattern-position value, once per branch of an
        unforced thunk."""
        if isinstance(value, FeatureNode):
            yield value
        elif isinstance(value, Thunk):
            if value.forced is not None:
                yield value.forced
            else:
                node = self.store.new_node(self.trail)
                for _ in self._force_onto(value, node):
                    yield node
        else:
            raise GrammarError("a list cannot be constrained by a type term")

    def _arg_value(self, term, env):
        if isinstance(term, VarT):
            val = env.get(term.name)
            if val is None:
                val = self.store.new_node(self.trail)
                self.trail.bind_env(env, term.name, val)
            return val
        if isinstance(term, ListT):
            if term.tail is not None:
                raise GrammarError("head-tail lists are patterns, not arguments")
            return ValueList([self._arg_value(t, env) for t in term.items])
        return Thunk(term, env)

    def _call(self, term, node, env):
        rel = self.grammar.relations.get(term.relation)
        if rel is None:
            raise GrammarError(f"undeclared relation {term.relation!r}")
        values = [self._arg_value(a, env) for a in term.args]
        clauses = rel.clauses
        if self.reversed_x0 and rel.swap_when_reversed:
            clauses = list(reversed(clauses))
        guided = self.oracle is not None and not (
            self.oracle.abstract_lexicon and
            term.relation in self.grammar.lexicon_relations)
        trail = self.trail
        for cl in clauses:
            if guided:
                nxt = self.oracle.dfa.step(self._ostate[0], cl.cid)
                if nxt is None:
                    continue
            mark = trail.mark()
            self.clause_applications += 1
            if self.record_proofs:
                trail.push_list(self._proof, cl.cid)
            if guided:
                trail.set_cell(self._ostate, nxt)
            cenv = {}
            yield from self._match_params(cl, values, 0, node, cenv)
            trail.undo_to(mark)

    def _match_params(self, cl, values, i, node, cenv):
        if i == len(cl.params):
            yield from self._eval(cl.body, node, cenv)
            return
        for _ in self._match(cl.params[i], values[i], cenv):
            yield from self._match_params(cl, values, i + 1, node, cenv)

    def _match(self, pattern, value, cenv):
        trail = self.trail
        if isinstance(pattern, VarT):
            mark = trail.mark()
            trail.bind_env(cenv, pattern.name, value)
            yield True
            trail.undo_to(mark)
        elif isinstance(pattern, WildT):
            yield True
        elif isinstance(pattern, ListT):
            if not isinstance(value, ValueList):
                raise GrammarError("list pattern against a non-list argument")
            items = value.items
            n = len(pattern.items)
            if pattern.tail is None:
                if len(items) != n:
                    return
            elif len(items) < n:
                return
            yield from self._match_list(pattern, items, 0, cenv)
        else:
            for forced in self._force_value(value):
                yield from self._eval(pattern, forced, cenv)

    def _match_list(self, pattern, items, i, cenv):
        if i == len(pattern.items):
            if pattern.tail is None:
                yield True
            else:
                yield from self._match(pattern.tail, ValueList(items[i:]), cenv)
            return
        for _ in self._match(pattern.items[i], items[i], cenv):
            yield from self._match_list(pattern, items, i + 1, cenv)


def solve(grammar, goal, **kwargs) -> SolveRun:
    """Enumerate the solutions of ``goal`` over ``grammar``.  Each solution
    is detached from the search, carries its proof sequence, and the run
    object exposes the clause-application count."""
    return SolveRun(grammar, goal, **kwargs)


def count_clause_applications(run: SolveRun) -> int:
    return run.clause_applications


def replay_proof(grammar, goal, proof, **kwargs):
    """Run ``goal`` with a script oracle that permits exactly the clauses of
    ``proof`` in order; used to check proof faithfulness."""
    from .automata import Dfa
    states = range(len(proof) + 1)
    trans = {(i, cid): i + 1 for i, cid in enumerate(proof)}
    dfa = Dfa(frozenset(states), 0, frozenset([len(proof)]), trans)
    oracle = Oracle(dfa, fingerprint=None)
    return SolveRun(grammar, goal, oracle=oracle, **kwargs)
