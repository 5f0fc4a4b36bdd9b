"""Finite automata over clause-identifier alphabets.

Linear per-cell automata are unioned into one NFA, determinized by subset
construction and minimized with Hopcroft's partition refinement.  All
constructions are deterministic (sorted iteration, canonical BFS
renumbering) so recompilation is byte-identical.  The text format is one
transition per line ``src<TAB>dst<TAB>symbol`` plus one line per final
state, with ``#`` header lines carrying the grammar fingerprint.
"""

from __future__ import annotations

from dataclasses import dataclass


class AutomatonError(Exception):
    """Malformed automaton file or construction misuse."""


@dataclass(frozen=True)
class Nfa:
    states: frozenset
    start: int
    finals: frozenset
    # (state, symbol) -> frozenset of states
    transitions: dict

    def step(self, states, symbol):
        out = set()
        for s in states:
            out |= self.transitions.get((s, symbol), frozenset())
        return frozenset(out)

    def accepts(self, word):
        cur = frozenset([self.start])
        for sym in word:
            cur = self.step(cur, sym)
            if not cur:
                return False
        return bool(cur & self.finals)

    def alphabet(self):
        return sorted({sym for (_, sym) in self.transitions})


@dataclass(frozen=True)
class Dfa:
    states: frozenset
    start: int          # None for the empty-language automaton
    finals: frozenset
    # (state, symbol) -> state; partial (no sink states)
    transitions: dict

    def step(self, state, symbol):
        return self.transitions.get((state, symbol))

    def accepts(self, word):
        cur = self.start
        for sym in word:
            if cur is None:
                return False
            cur = self.step(cur, sym)
        return cur is not None and cur in self.finals

    def alphabet(self):
        return sorted({sym for (_, sym) in self.transitions})

    def is_empty(self):
        return self.start is None


def chain_nfa(sequences):
    """Union of linear automata, one per symbol sequence, sharing a start."""
    transitions = {}
    finals = set()
    states = {0}
    nxt = 1
    for seq in sequences:
        cur = 0
        for sym in seq:
            states.add(nxt)
            transitions.setdefault((cur, sym), set()).add(nxt)
            cur = nxt
            nxt += 1
        finals.add(cur)
    frozen = {k: frozenset(v) for k, v in transitions.items()}
    return Nfa(frozenset(states), 0, frozenset(finals), frozen)


def determinize(nfa: Nfa) -> Dfa:
    """Subset construction; the result is trim on the reachable side."""
    symbols = nfa.alphabet()
    start = frozenset([nfa.start])
    numbering = {start: 0}
    queue = [start]
    transitions = {}
    finals = set()
    while queue:
        subset = queue.pop(0)
        num = numbering[subset]
        if subset & nfa.finals:
            finals.add(num)
        for sym in symbols:
            tgt = nfa.step(subset, sym)
            if not tgt:
                continue
            if tgt not in numbering:
                numbering[tgt] = len(numbering)
                queue.append(tgt)
            transitions[(num, sym)] = numbering[tgt]
    return Dfa(frozenset(range(len(numbering))), 0, frozenset(finals),
               transitions)


def _trim(dfa: Dfa) -> Dfa:
    """Drop states that are unreachable or cannot reach a final state."""
    if dfa.start is None:
        return dfa
    forward = {}
    backward = {}
    for (src, sym), dst in dfa.transitions.items():
        forward.setdefault(src, []).append((sym, dst))
        backward.setdefault(dst, []).append(src)
    reachable = set()
    stack = [dfa.start]
    while stack:
        s = stack.pop()
        if s in reachable:
            continue
        reachable.add(s)
        stack.extend(d for _, d in forward.get(s, ()))
    live = set()
    stack = [f for f in dfa.finals if f in reachable]
    while stack:
        s = stack.pop()
        if s in live:
            continue
        live.add(s)
        stack.extend(p for p in backward.get(s, ()) if p in reachable)
    if dfa.start not in live:
        return Dfa(frozenset(), None, frozenset(), {})
    transitions = {(s, sym): d for (s, sym), d in dfa.transitions.items()
                   if s in live and d in live}
    return Dfa(frozenset(live), dfa.start,
               frozenset(f for f in dfa.finals if f in live), transitions)


def _canonical_renumber(dfa: Dfa) -> Dfa:
    """BFS renumbering from the start over sorted symbols, so isomorphic
    automata get identical encodings."""
    if dfa.start is None:
        return dfa
    order = {dfa.start: 0}
    queue = [dfa.start]
    out_syms = {}
    for (src, sym), dst in dfa.transitions.items():
        out_syms.setdefault(src, []).append((sym, dst))
    while queue:
        s = queue.pop(0)
        for sym, dst in sorted(out_syms.get(s, ())):
            if dst not in order:
                order[dst] = len(order)
                queue.append(dst)
    transitions = {(order[s], sym): order[d]
                   for (s, sym), d in dfa.transitions.items()}
    return Dfa(frozenset(order.values()), 0,
               frozenset(order[f] for f in dfa.finals), transitions)


def minimize(dfa: Dfa) -> Dfa:
    """Hopcroft partition refinement on the trim automaton, followed by
    canonical renumbering.  The result has no language-equivalent state
    pair and every state is reachable and co-reachable."""
    dfa = _trim(dfa)
    if dfa.start is None:
        return dfa
    states = set(dfa.states)
    symbols = dfa.alphabet()
    inverse = {}
    for (src, sym), dst in dfa.transitions.items():
        inverse.setdefault((sym, dst), set()).add(src)

    finals = frozenset(dfa.finals)
    nonfinals = frozenset(states - finals)
    partition = {p for p in (finals, nonfinals) if p}
    worklist = {min((finals, nonfinals), key=len)} if nonfinals and finals \
        else set(partition)

    while worklist:
        splitter = worklist.pop()
        for sym in symbols:
            pre = set()
            for q in splitter:
                pre |= inverse.get((sym, q), set())
            if not pre:
                continue
            for block in list(partition):
                inter = block & pre
                if not inter or inter == block:
                    continue
                rest = block - inter
                inter, rest = frozenset(inter), frozenset(rest)
                partition.remove(block)
                partition.add(inter)
                partition.add(rest)
                if block in worklist:
                    worklist.remove(block)
                    worklist.add(inter)
                    worklist.add(rest)
                else:
                    worklist.add(min((inter, rest), key=len))

    block_of = {}
    blocks = {b: i for i, b in enumerate(sorted(partition, key=sorted))}
    for block, idx in blocks.items():
        for s in block:
            block_of[s] = idx
    transitions = {(block_of[s], sym): block_of[d]
                   for (s, sym), d in dfa.transitions.items()}
    merged = Dfa(frozenset(blocks.values()), block_of[dfa.start],
                 frozenset(block_of[f] for f in dfa.finals), transitions)
    return _canonical_renumber(_trim(merged))


# --------------------------------------------------------------------------
# independent equivalence checks (used as test oracles)


def distinguishable_pairs(dfa: Dfa):
    """Classic table-filling check, independent of Hopcroft: yields the
    state pairs that are NOT language-equivalent.  A minimal DFA has all
    pairs distinguishable."""
    states = sorted(dfa.states)
    symbols = dfa.alphabet()
    marked = set()
    for i, a in enumerate(states):
        for b in states[i + 1:]:
            if (a in dfa.finals) != (b in dfa.finals):
                marked.add((a, b))
    changed = True
    while changed:
        changed = False
        for i, a in enumerate(states):
            for b in states[i + 1:]:
                if (a, b) in marked:
                    continue
                for sym in symbols:
                    da, db = dfa.step(a, sym), dfa.step(b, sym)
                    if da == db:
                        continue
                    if da is None or db is None:
                        marked.add((a, b))
                        changed = True
                        break
                    key = (min(da, db), max(da, db))
                    if key in marked:
                        marked.add((a, b))
                        changed = True
                        break
    return marked


def language_agrees(nfa: Nfa, machines, max_len: int) -> bool:
    """Exhaustively compare acceptance over every string up to ``max_len``.
    Prefixes whose joint configuration (NFA state set plus each machine's
    state) has been seen already behave identically under every extension,
    so each configuration is explored once; the check still covers every
    string up to the bound."""
    symbols = sorted(set(nfa.alphabet()).union(
        *[m.alphabet() for m in machines]))
    start = (frozenset([nfa.start]),) + tuple(m.start for m in machines)

    def agrees(cfg):
        nstates = cfg[0]
        ok = bool(nstates & nfa.finals)
        for m, s in zip(machines, cfg[1:]):
            if ((s is not None) and (s in m.finals)) != ok:
                return False
        return True

    seen = {start}
    frontier = [start]
    if not agrees(start):
        return False
    for _ in range(max_len):
        nxt = []
        for cfg in frontier:
            for sym in symbols:
                ncfg = (nfa.step(cfg[0], sym),) + tuple(
                    None if s is None else m.step(s, sym)
                    for m, s in zip(machines, cfg[1:]))
                if ncfg in seen:
                    continue
                if not agrees(ncfg):
                    return False
                seen.add(ncfg)
                nxt.append(ncfg)
        frontier = nxt
    return True


def enumerate_language(dfa: Dfa, max_len: int):
    """All accepted strings up to a length bound (the oracle languages are
    finite, so this is exact on them)."""
    out = []
    if dfa.start is None:
        return out
    frontier = [(dfa.start, ())]
    for _ in range(max_len + 1):
        nxt = []
        for state, word in frontier:
            if state in dfa.finals:
                out.append(word)
            for (s, sym), d in sorted(dfa.transitions.items()):
                if s == state:
                    nxt.append((d, word + (sym,)))
        frontier = nxt
    return out


# --------------------------------------------------------------------------
# text serialization


def serialize(dfa: Dfa, fingerprint, abstract_lexicon=False):
    lines = [f"# promorph-oracle fingerprint={fingerprint}"]
    if abstract_lexicon:
        lines.append("# abstract-lexicon")
    for (src, sym), dst in sorted(dfa.transitions.items()):
        lines.append(f"{src}\t{dst}\t{sym}")
    for f in sorted(dfa.finals):
        lines.append(str(f))
    return "\n".join(lines) + "\n"


def deserialize(text, known_symbols=None):
    """Parse the text format back into (Dfa, fingerprint, abstract_flag).
    Errors name the offending line."""
    fingerprint = None
    abstract = False
    transitions = {}
    states = set()
    finals = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("promorph-oracle"):
                for part in body.split():
                    if part.startswith("fingerprint="):
                        fingerprint = part.split("=", 1)[1]
            elif body == "abstract-lexicon":
                abstract = True
            continue
        fields = line.split("\t")
        if len(fields) == 1:
            try:
                finals.add(int(fields[0]))
            except ValueError:
                raise AutomatonError(f"line {lineno}: malformed final state")
            continue
        if len(fields) != 3:
            raise AutomatonError(f"line {lineno}: expected src\\tdst\\tsymbol")
        try:
            src, dst = int(fields[0]), int(fields[1])
        except ValueError:
            raise AutomatonError(f"line {lineno}: malformed state number")
        sym = fields[2]
        if known_symbols is not None and sym not in known_symbols:
            raise AutomatonError(f"line {lineno}: unknown symbol {sym!r}")
        if (src, sym) in transitions:
            raise AutomatonError(f"line {lineno}: duplicate transition")
        transitions[(src, sym)] = dst
        states.update((src, dst))
    if fingerprint is None:
        raise AutomatonError("missing fingerprint header")
    states |= finals
    # the start state is 0 by convention (serialization renumbers)
    dfa = Dfa(frozenset(states), 0 if states else None, frozenset(finals),
              transitions)
    return dfa, fingerprint, abstract
