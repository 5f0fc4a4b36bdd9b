"""Offline compilation of optimal proofs into a minimal DFA, and the two
parsing modes.

For every paradigm cell (one atomic category, solved with a fully
underspecified lexical choice so the letter tree backtracks through all
known and unknown branches) the optimal candidates are computed by
generate-and-minimize and grouped by letter-tree branch; each group must
hold exactly one optimal proof.  The proofs become linear automata whose
union is determinized and minimized.  At run time the DFA is replayed in
lockstep with clause selection, so only optimal derivations are ever
explored and no disharmony is computed.

Analysis-by-synthesis is the reference parser: solve with the surface
bound, then regenerate the optimal strings for every analysis found and
keep the analyses whose optimal strings are consistent with the input.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .automata import chain_nfa, determinize, deserialize, minimize, serialize
from .engine import Oracle, OracleMismatch, solve
from .optimize import candidate_of


class CompileError(Exception):
    """A paradigm cell without a unique optimal proof per lexical branch."""


def fingerprint(grammar) -> str:
    """Stable hash of the ordered clause-identifier list of a build."""
    digest = hashlib.sha256("\n".join(grammar.clause_ids()).encode())
    return digest.hexdigest()


@dataclass
class CompiledOracle:
    oracle: Oracle
    cell_paths: int
    proofs: tuple
    nfa_states: int
    dfa_states: int
    min_states: int

    def serialize(self):
        return serialize(self.oracle.dfa, self.oracle.fingerprint,
                         self.oracle.abstract_lexicon)


def _branch_key(grammar, proof):
    return tuple(cid for cid in proof
                 if cid.split(":", 1)[1].rsplit("/", 1)[0]
                 in grammar.lexicon_relations)


def _strip_lexicon(grammar, proof):
    lex = grammar.lexicon_relations
    return tuple(cid for cid in proof
                 if cid.split(":", 1)[1].rsplit("/", 1)[0] not in lex)


_cell_cache = {}


def optimal_cell_proofs(grammar):
    """(cell id, branch key, optimal candidate) per non-empty cell and
    lexical branch; aborts loudly when a branch's minimum is not unique.
    Cells whose category no affix row can carry are skipped via a cheap
    probe goal when the grammar provides one."""
    if grammar in _cell_cache:
        return _cell_cache[grammar]
    from .optimize import enumerate_candidates
    out = []
    for cell_id, goal in grammar.cells():
        probe = getattr(grammar, "cell_probe_goal", lambda _: None)(cell_id)
        if probe is not None and solve(grammar, probe,
                                       record_proofs=False).first() is None:
            continue
        candidates, _ = enumerate_candidates(grammar, goal)
        by_branch = {}
        for cand in candidates:
            by_branch.setdefault(_branch_key(grammar, cand.proof),
                                 []).append(cand)
        for branch, cands in sorted(by_branch.items()):
            best = min(c.sort_key() for c in cands)
            minima = [c for c in cands if c.sort_key() == best]
            if len(minima) != 1:
                raise CompileError(
                    f"cell {cell_id} branch {branch} has {len(minima)} "
                    f"minimal candidates (disharmony tie)")
            out.append((cell_id, branch, minima[0]))
    _cell_cache[grammar] = out
    return out


def compile_paradigm(grammar, abstract_lexicon=False) -> CompiledOracle:
    """The union of all optimal cell proofs, determinized and minimized.
    With ``abstract_lexicon`` the letter-tree selections are stripped from
    the proofs and left unguided at run time, which trades oracle size for
    a lexicon-independent abstract paradigm."""
    cells = optimal_cell_proofs(grammar)
    proofs = []
    for _, _, cand in cells:
        proof = _strip_lexicon(grammar, cand.proof) if abstract_lexicon \
            else cand.proof
        proofs.append(proof)
    unique = sorted(set(proofs))
    nfa = chain_nfa(unique)
    dfa = determinize(nfa)
    small = minimize(dfa)
    oracle = Oracle(small, fingerprint(grammar), abstract_lexicon)
    return CompiledOracle(oracle, len(cells), tuple(unique),
                          len(nfa.states), len(dfa.states), len(small.states))


def write_oracle(compiled: CompiledOracle, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(compiled.serialize())


def load_oracle(path, grammar) -> Oracle:
    """Load and validate an oracle file against a grammar build: symbols
    must be clause ids of the build and the fingerprint must match."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    dfa, fp, abstract = deserialize(text, known_symbols=grammar.clause_id_set())
    if fp != fingerprint(grammar):
        raise OracleMismatch(
            f"oracle was compiled for a different grammar build: "
            f"{fp} != {fingerprint(grammar)}")
    return Oracle(dfa, fp, abstract)


# --------------------------------------------------------------------------
# parsing


def oracle_guided_parse(grammar, surface, oracle):
    """Parse analyses under oracle guidance: solutions whose proofs are
    sanctioned by the DFA, reported as (root, category, sem) triples."""
    goal, want = grammar.parse_goal(surface)
    run = solve(grammar, goal, want=want, oracle=oracle,
                fingerprint=fingerprint(grammar))
    triples = []
    for sol in run:
        t = grammar.parse_analysis(sol)
        if t not in triples:
            triples.append(t)
    return triples, run


class SynthesisRun:
    """Instrumentation for the two-run baseline: clause applications of the
    first (analysis) run plus every regeneration run."""

    def __init__(self):
        self.analysis_applications = 0
        self.regeneration_applications = 0

    @property
    def clause_applications(self):
        return self.analysis_applications + self.regeneration_applications


def parse_by_synthesis(grammar, surface):
    """Reference parser.  Run one: solve with the surface bound, collecting
    candidate analyses.  Run two: regenerate each analysis with the full
    generate-and-minimize machinery and accept it only when the input is
    among the optimal strings."""
    from .optimize import enumerate_candidates
    goal, want = grammar.parse_goal(surface)
    run = solve(grammar, goal, want=want)
    stats = SynthesisRun()
    analyses = []
    for sol in run:
        cand = candidate_of(sol, grammar)
        t = grammar.parse_analysis(sol)
        if (t, cand.surface) not in [(a, s) for a, s, _ in analyses]:
            analyses.append((t, cand.surface, sol))
    stats.analysis_applications = run.clause_applications
    accepted = []
    for triple, _, sol in analyses:
        regen = regenerate_goal(grammar, sol)
        candidates, regen_run = enumerate_candidates(grammar, regen)
        stats.regeneration_applications += regen_run.clause_applications
        if not candidates:
            continue
        best = min(c.sort_key() for c in candidates)
        optima = [c for c in candidates if c.sort_key() == best]
        if any(c.surface == surface_spelling(grammar, surface)
               for c in optima):
            if triple not in accepted:
                accepted.append(triple)
    return accepted, stats


def surface_spelling(grammar, surface):
    """Inputs normalize to the grammar's own romanization (Tonkawa accepts
    ``?`` for the glottal stop)."""
    if grammar.name == "tonkawa":
        return surface.replace("?", "'")
    return surface


def regenerate_goal(grammar, solution):
    """Generation goal for the category and lexical choice of one parse
    solution (run two of analysis-by-synthesis)."""
    from .engine import ListT, TypeT, V, call, conj, feat
    from .prosody import extract_word
    from .typespace import TypeConstraint

    def ty_of(node, dim):
        return TypeT(TypeConstraint(dim, node.leaves(dim, grammar.domain)))

    word = extract_word(solution.root, grammar.domain, grammar.spell)
    cat_term = TypeT(TypeConstraint("cat", word.category))
    if grammar.name == "tonkawa":
        stem = solution.bindings["StemId"]
        return conj(feat("cat", cat_term),
                    call("verbform", ty_of(stem, "sem"), V("Cat")))
    roots = [solution.bindings[k] for k in ("R1", "R2", "R3")]
    root_term = ListT(tuple(ty_of(r, "phon") for r in roots))
    return conj(feat("cat", cat_term), call("verbform", root_term, V("Cat")))
