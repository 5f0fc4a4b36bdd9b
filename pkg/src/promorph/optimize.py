"""Incremental optimization over markedness vectors.

Disharmony maps a word's left-to-right markedness vector through
unmarked -> 01 and marked -> 10 and reads the result as a binary number;
lower is better.  Internally candidates compare by (length, mark vector)
lexicographically, which orders exactly like the number: a length-n
vector starts with 01 and is at least 4^(n-1), more than any length-(n-1)
value, and within a length the bit pairs compare pointwise.  The greedy
searcher just takes the first depth-first solution under zero-first
clause order; because alternation choices fire left to right, that
solution is always one of the disharmony minima.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import solve
from .prosody import extract_word


@dataclass
class Candidate:
    """A solved word form ready for comparison."""
    surface: str
    marks: tuple
    disharmony: int
    category: frozenset
    sem: frozenset
    proof: tuple
    solution: object

    def sort_key(self):
        return (len(self.marks), tuple(m == "marked" for m in self.marks))

    def mark_string(self):
        return " ".join("10" if m == "marked" else "01" for m in self.marks)


def disharmony(marks) -> int:
    """The binary number of the 01/10 encoding; arbitrary precision."""
    if not marks:
        raise ValueError("no empty words: the markedness vector is non-empty")
    value = 0
    for m in marks:
        if m == "marked":
            value = (value << 2) | 0b10
        elif m == "unmarked":
            value = (value << 2) | 0b01
        else:
            raise ValueError(f"not a markedness leaf: {m!r}")
    return value


def candidate_of(solution, grammar) -> Candidate:
    word = extract_word(solution.root, grammar.domain, grammar.spell)
    return Candidate(word.surface, word.marks, disharmony(word.marks),
                     word.category, word.sem, solution.proof, solution)


def enumerate_candidates(grammar, goal, want=(), **kwargs):
    """All constraint-satisfying candidates of a goal, in search order."""
    run = solve(grammar, goal, want=want, **kwargs)
    out = [candidate_of(sol, grammar) for sol in run]
    return out, run


def generate_and_minimize(grammar, goal, want=(), **kwargs):
    """All candidates are computed, then the minimal-disharmony ones are
    returned (all of them on a tie).  Empty candidate set means the cell is
    ungrammatical and yields an empty result."""
    candidates, _ = enumerate_candidates(grammar, goal, want=want, **kwargs)
    if not candidates:
        return []
    best = min(c.sort_key() for c in candidates)
    return [c for c in candidates if c.sort_key() == best]


def greedy_iop(grammar, goal, want=(), **kwargs):
    """First depth-first solution with the zero alternant preferred at
    every alternation choice point; None when the cell is ungrammatical."""
    run = solve(grammar, goal, want=want, x0_order="zero_first", **kwargs)
    for sol in run:
        return candidate_of(sol, grammar)
    return None
