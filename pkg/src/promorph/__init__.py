"""Declarative prosodic morphology with a compiled finite-state oracle."""

from .engine import (Grammar, GrammarError, Oracle, OracleMismatch, Solution,
                     SolveRun, count_clause_applications, replay_proof, solve)
from .features import Store, Trail, canonical, isomorphic, unify
from .optimize import (Candidate, disharmony, enumerate_candidates,
                       generate_and_minimize, greedy_iop)
from .oracle import (CompileError, compile_paradigm, fingerprint, load_oracle,
                     oracle_guided_parse, parse_by_synthesis, write_oracle)
from .typespace import TypeConstraint, TypeDomain, TypeSpaceError

__all__ = [
    "Candidate", "CompileError", "Grammar", "GrammarError", "Oracle",
    "OracleMismatch", "Solution", "SolveRun", "Store", "Trail",
    "TypeConstraint", "TypeDomain", "TypeSpaceError", "canonical",
    "compile_paradigm", "count_clause_applications", "disharmony",
    "enumerate_candidates", "fingerprint", "generate_and_minimize",
    "greedy_iop", "isomorphic", "load_oracle", "oracle_guided_parse",
    "parse_by_synthesis", "replay_proof", "solve", "unify", "write_oracle",
]
