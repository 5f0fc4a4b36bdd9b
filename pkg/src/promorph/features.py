"""Typed feature graphs with destructive, trail-backed unification.

Nodes carry at most one leaf-set constraint per dimension plus a feature
map; merged nodes are forwarded union-find style.  Every mutation is
logged on a trail so failed branches roll back exactly.  Graphs may be
cyclic (``right`` followed by ``left`` returns to the same node), so all
structural traversals keep a visited set.
"""

from __future__ import annotations

from .typespace import SORT_DIM, TypeDomain


class UnifyError(Exception):
    """Internal misuse of the graph store (not a search failure)."""


class FeatureNode:
    __slots__ = ("ident", "forward", "cons", "feats")

    def __init__(self, ident):
        self.ident = ident
        self.forward = None
        self.cons = {}          # dimension -> frozenset of leaves
        self.feats = {}         # feature name -> FeatureNode

    def find(self):
        node = self
        while node.forward is not None:
            node = node.forward
        return node

    def leaves(self, dimension, domain):
        node = self.find()
        return node.cons.get(dimension, domain.full(dimension))

    def __repr__(self):
        node = self.find()
        cons = ",".join(
            f"{d}={'|'.join(sorted(v))}" for d, v in sorted(node.cons.items()))
        return f"<node {node.ident} {cons} feats={sorted(node.feats)}>"


class Store:
    """A single-query node arena; distinct stores are independent."""

    def __init__(self):
        self.nodes = []

    def new_node(self, trail=None):
        node = FeatureNode(len(self.nodes))
        self.nodes.append(node)
        if trail is not None:
            trail.log(("new", self))
        return node

    def dump(self):
        """Exact structural snapshot (ids, forwards, constraints, features),
        for rollback-identity checks."""
        out = []
        for n in self.nodes:
            fwd = n.forward.ident if n.forward is not None else None
            cons = tuple(sorted((d, tuple(sorted(v))) for d, v in n.cons.items()))
            feats = tuple(sorted((f, c.ident) for f, c in n.feats.items()))
            out.append((n.ident, fwd, cons, feats))
        return tuple(out)


class Trail:
    """Ordered undo log.  A checkpoint is the log length at mark time;
    rolling back past a checkpoint invalidates it."""

    def __init__(self):
        self.entries = []

    def mark(self):
        return len(self.entries)

    def log(self, entry):
        self.entries.append(entry)

    def undo_to(self, mark):
        if mark > len(self.entries):
            raise RuntimeError("stale checkpoint: trail already rolled back past it")
        while len(self.entries) > mark:
            kind = self.entries.pop()
            tag = kind[0]
            if tag == "con":
                _, node, dim, old = kind
                if old is None:
                    del node.cons[dim]
                else:
                    node.cons[dim] = old
            elif tag == "feat":
                _, node, name = kind
                del node.feats[name]
            elif tag == "fwd":
                kind[1].forward = None
            elif tag == "new":
                kind[1].nodes.pop()
            elif tag == "env":
                _, env, key, had, old = kind
                if had:
                    env[key] = old
                else:
                    del env[key]
            elif tag == "thunk":
                kind[1].forced = kind[2]
            elif tag == "list":
                kind[1].pop()
            elif tag == "cell":
                kind[1][0] = kind[2]
            else:  # pragma: no cover - guarded by construction
                raise UnifyError(f"unknown trail entry {tag!r}")

    # convenience loggers used by the solver
    def bind_env(self, env, key, value):
        self.log(("env", env, key, key in env, env.get(key)))
        env[key] = value

    def push_list(self, lst, value):
        lst.append(value)
        self.log(("list", lst))

    def set_cell(self, cell, value):
        self.log(("cell", cell, cell[0]))
        cell[0] = value


def narrow(node, dimension, leaves, domain: TypeDomain, trail: Trail):
    """Intersect a node's constraint for one dimension; False on bottom.
    Also narrows the node's sort to the dimension's bearer sorts."""
    node = node.find()
    bearer = domain.dim_bearer.get(dimension)
    if bearer is not None and dimension != SORT_DIM:
        if not narrow(node, SORT_DIM, bearer, domain, trail):
            return False
    current = node.cons.get(dimension)
    full = domain.full(dimension)
    base = current if current is not None else full
    new = base & leaves
    if not new:
        return False
    if new != base:
        trail.log(("con", node, dimension, current))
        node.cons[dimension] = new
    elif current is None and new != full:
        trail.log(("con", node, dimension, None))
        node.cons[dimension] = new
    return True


def add_feature(node, name, domain: TypeDomain, store: Store, trail: Trail):
    """Get or create a feature child, enforcing appropriateness: the bearer's
    and the value's sorts are narrowed per the feature declaration.
    Returns the child node, or None when appropriateness fails."""
    node = node.find()
    if name not in domain.features:
        raise UnifyError(f"undeclared feature {name!r}")
    bearer, value = domain.features[name]
    if not narrow(node, SORT_DIM, bearer, domain, trail):
        return None
    child = node.feats.get(name)
    if child is not None:
        child = child.find()
        if not narrow(child, SORT_DIM, value, domain, trail):
            return None
        return child
    child = store.new_node(trail)
    if not narrow(child, SORT_DIM, value, domain, trail):
        return None
    trail.log(("feat", node, name))
    node.feats[name] = child
    return child


def unify(a, b, domain: TypeDomain, trail: Trail) -> bool:
    """Destructively merge two nodes; failure is a normal outcome and the
    caller is expected to roll the trail back.  Cycle-safe because ``a`` is
    forwarded before children are merged."""
    a = a.find()
    b = b.find()
    if a is b:
        return True
    trail.log(("fwd", a))
    a.forward = b
    for dim, leaves in a.cons.items():
        if not narrow(b, dim, leaves, domain, trail):
            return False
    for name, child in a.feats.items():
        other = b.feats.get(name)
        if other is None:
            # appropriateness on b: its sort must admit the feature
            bearer, _ = domain.features[name]
            if not narrow(b, SORT_DIM, bearer, domain, trail):
                return False
            trail.log(("feat", b, name))
            b.feats[name] = child
        else:
            if not unify(child, other, domain, trail):
                return False
    return True


# --------------------------------------------------------------------------
# structural tools (all cycle-safe)


def copy_graph(roots, store: Store):
    """Deep-copy the graphs reachable from ``roots`` into ``store``,
    preserving sharing and cycles.  Returns the copies in root order."""
    memo = {}

    def copy(node):
        node = node.find()
        if id(node) in memo:
            return memo[id(node)]
        fresh = store.new_node()
        memo[id(node)] = fresh
        fresh.cons.update(node.cons)
        for name, child in node.feats.items():
            fresh.feats[name] = copy(child)
        return fresh

    return [copy(r) for r in roots]


def canonical(node):
    """Canonical form of a rooted graph: DFS numbering over sorted feature
    names, constraints spelled out, feature edges as visit numbers.  Two
    graphs are isomorphic iff their canonical forms are equal."""
    numbering = {}
    spec = []

    def visit(n):
        n = n.find()
        if id(n) in numbering:
            return numbering[id(n)]
        num = len(numbering)
        numbering[id(n)] = num
        slot = [None, None]
        spec.append(slot)
        slot[0] = tuple(sorted((d, tuple(sorted(v))) for d, v in n.cons.items()))
        slot[1] = tuple((f, visit(c)) for f, c in sorted(n.feats.items()))
        return num

    visit(node)
    return tuple((c, f) for c, f in spec)


def isomorphic(a, b) -> bool:
    return canonical(a) == canonical(b)
