"""Segmental positions as cyclic doubly-linked descriptions.

Positions are feature nodes with a ``self`` bundle (syllable role, segment,
word-edge flags), ``left``/``right`` neighbors, a word-shared ``cat`` and a
markedness flag.  ``conc`` chains a position in front of a string and ties
the knot ``right.left = self``, which makes the structures cyclic.  ``x_0``
describes an alternating position: its first clause omits the position, its
second realizes it as ``marked``; ``obl`` realizes an obligatory position as
``unmarked``.  Syllable structure is imposed per position: a nucleus must be
a vowel with an onset to its left, onsets need a nucleus to their right and
reject onset neighbors, codas sit right after a nucleus.  Together those
force role strings of the shape (onset nucleus coda?)*.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import AndT, OrT, V, W, call, conj, disj, feat
from .typespace import SORT_DIM

#: node sorts shared by all grammars
SORTS = ("position", "bundle", "segment", "category", "semantic",
         "markbox", "prombox")

MAX_WORD = 64


def declare_position_space(domain, segments, vowels, onset_ok):
    """Install the position dimensions and features shared by the grammars.
    ``onset_ok`` lists the segments allowed to fill an onset (consonants
    plus glide-capable high vowels)."""
    domain.declare_sorts(SORTS)
    domain.declare_dimension("phon", segments, bearer="segment")
    domain.declare_named("vowel", "phon", vowels)
    domain.declare_named("consonant", "phon",
                         [s for s in segments if s not in vowels])
    domain.declare_named("onset_ok", "phon", onset_ok)
    domain.declare_dimension("role", ("onset", "nucleus", "coda"),
                             bearer="bundle")
    domain.declare_dimension("ini", ("+ini", "-ini"), bearer="bundle")
    domain.declare_dimension("fin", ("+fin", "-fin"), bearer="bundle")
    domain.declare_dimension("prominence", ("up", "unset"), bearer="prombox")
    domain.declare_dimension("markedness", ("marked", "unmarked"),
                             bearer="markbox")
    domain.declare_feature("self", "position", "bundle")
    domain.declare_feature("left", "position", "position")
    domain.declare_feature("right", "position", "position")
    domain.declare_feature("cat", "position", "category")
    domain.declare_feature("mark", "position", "markbox")
    domain.declare_feature("seg", "bundle", "segment")
    domain.declare_feature("prom", "bundle", "prombox")
    domain.declare_feature("sem", "category", "semantic")


def add_prosody_relations(g, *, prosody=True):
    """Install the shared relations into a grammar (module ``prosody``).
    With ``prosody=False`` the syllable and word-edge role constraints are
    trivialized, which exposes the raw description-level candidate sets."""
    m = "prosody"
    ty = g.ty

    g.clause(m, "conc", [V("Self"), V("Segments")], conj(
        V("Self"),
        feat("right", conj(V("Segments"), feat("left", V("Self")),
                           feat("cat", V("Cat")))),
        feat("cat", V("Cat")),
        call("classify_position_in_word"),
        call("constraints")))

    g.clause(m, "classify_position_in_word", [], conj(
        feat("right.self", ty("-ini")),
        feat("left.self", ty("-fin"))))

    # zero alternant first: realizing an alternating position is marked
    g.clause(m, "x_0", [W, V("Segments")], V("Segments"),
             swap_when_reversed=True)
    g.clause(m, "x_0", [V("X"), V("Segments")], conj(
        feat("mark", ty("marked")),
        call("conc", V("X"), V("Segments"))),
        swap_when_reversed=True)

    g.clause(m, "obl", [V("X"), V("Segments")], conj(
        feat("mark", ty("unmarked")),
        call("conc", V("X"), V("Segments"))))

    g.clause(m, "is", [V("Segment")], feat("self.seg", V("Segment")))

    if prosody:
        g.clause(m, "syllabify", [], disj(
            feat("self", ty("nucleus")),
            conj(feat("self", ty("onset")),
                 feat("right.self", ty("nucleus")),
                 feat("self.seg", ty("onset_ok"))),
            conj(feat("self", ty("coda")),
                 feat("left.self", ty("nucleus")))))
        g.clause(m, "shape", [], disj(
            conj(feat("self", conj(ty("nucleus"), feat("seg", ty("vowel")))),
                 feat("left.self", ty("onset"))),
            conj(feat("self", ty("~nucleus")),
                 disj(conj(feat("self", ty("onset")),
                           feat("left.self", ty("~onset"))),
                      conj(feat("self", ty("coda")),
                           feat("left.self", ty("~coda")))))))
        g.clause(m, "constraints", [], conj(call("syllabify"), call("shape")))
        g.clause(m, "word", [], feat("self", conj(
            ty("+ini"), feat("prom", ty("up")), ty("onset"))))
        g.clause(m, "end", [], conj(
            feat("left.self", conj(ty("+fin"), ty("~onset"))),
            feat("self", ty("-fin"))))
    else:
        g.clause(m, "syllabify", [], AndT(()))
        g.clause(m, "shape", [], AndT(()))
        g.clause(m, "constraints", [], AndT(()))
        g.clause(m, "word", [], feat("self", conj(
            ty("+ini"), feat("prom", ty("up")))))
        g.clause(m, "end", [], conj(
            feat("left.self", ty("+fin")),
            feat("self", ty("-fin"))))


# --------------------------------------------------------------------------
# reading word forms off solved graphs


@dataclass
class PositionInfo:
    index: int
    seg: frozenset
    role: frozenset
    mark: frozenset
    ini: frozenset
    fin: frozenset


@dataclass
class WordForm:
    surface: str
    marks: tuple          # "marked"/"unmarked" per realized position
    roles: tuple          # one role leaf name, or None where unresolved
    positions: list
    category: frozenset   # tuple leaves of the cat dimension
    sem: frozenset

    def dump(self):
        """Debug form: one line per position,
        ``index surface-char role mark ±ini ±fin``."""
        lines = []
        for p, char, role in zip(self.positions, self.surface_chars(),
                                 self.roles):
            lines.append(" ".join([
                str(p.index), char, role or _setstr(p.role),
                _onlyleaf(p.mark) or _setstr(p.mark),
                _onlyleaf(p.ini) or _setstr(p.ini),
                _onlyleaf(p.fin) or _setstr(p.fin),
            ]))
        return "\n".join(lines)

    def surface_chars(self):
        out = []
        i = 0
        for p in self.positions:
            n = 1 if len(p.seg) == 1 else len(_setstr(p.seg))
            out.append(self.surface[i:i + n])
            i += n
        return out


def _onlyleaf(leaves):
    return next(iter(leaves)) if len(leaves) == 1 else None


def _setstr(leaves):
    return "{" + "|".join(sorted(leaves)) + "}"


def walk_positions(root, domain):
    """Collect realized positions left to right, stopping at the ``+fin``
    position (the end sentinel is never realized)."""
    out = []
    node = root.find()
    for _ in range(MAX_WORD):
        out.append(node)
        bundle = node.feats.get("self")
        fin = bundle.leaves("fin", domain) if bundle is not None \
            else domain.full("fin")
        if fin == frozenset(["+fin"]):
            return out
        nxt = node.feats.get("right")
        if nxt is None:
            raise ValueError("word has no +fin position and no right edge")
        node = nxt.find()
    raise ValueError("word exceeds the maximum position count")


def extract_word(root, domain, spell) -> WordForm:
    """Read surface string, markedness vector, roles and category off a
    solved word description.  ``spell(seg_leaves, role_leaves)`` renders one
    position (role-sensitive, e.g. onset /i/ printing as ``j``)."""
    nodes = walk_positions(root, domain)
    infos = []
    chars = []
    marks = []
    roles = []
    for i, node in enumerate(nodes, 1):
        bundle = node.feats.get("self")
        seg = bundle.feats.get("seg") if bundle is not None else None
        seg_leaves = seg.leaves("phon", domain) if seg is not None \
            else domain.full("phon")
        role_leaves = bundle.leaves("role", domain) if bundle is not None \
            else domain.full("role")
        mark = node.feats.get("mark")
        mark_leaves = mark.leaves("markedness", domain) if mark is not None \
            else domain.full("markedness")
        infos.append(PositionInfo(
            i, seg_leaves, role_leaves, mark_leaves,
            bundle.leaves("ini", domain) if bundle is not None
            else domain.full("ini"),
            bundle.leaves("fin", domain) if bundle is not None
            else domain.full("fin")))
        chars.append(spell(seg_leaves, role_leaves))
        marks.append(_onlyleaf(mark_leaves) or _setstr(mark_leaves))
        roles.append(_onlyleaf(role_leaves))
    cat = root.find().feats.get("cat")
    cat_leaves = cat.leaves("cat", domain) if cat is not None \
        else domain.full("cat")
    sem = cat.feats.get("sem") if cat is not None else None
    sem_leaves = sem.leaves("sem", domain) if sem is not None \
        else domain.full("sem")
    return WordForm("".join(chars), tuple(marks), tuple(roles), infos,
                    cat_leaves, sem_leaves)


def walk_back(root, domain):
    """Positions collected right to left from the end sentinel's neighbor,
    for the bidirectionality check."""
    nodes = walk_positions(root, domain)
    last = nodes[-1]
    out = []
    node = last.find()
    for _ in range(MAX_WORD):
        out.append(node)
        bundle = node.feats.get("self")
        ini = bundle.leaves("ini", domain) if bundle is not None \
            else domain.full("ini")
        if ini == frozenset(["+ini"]):
            return out
        prev = node.feats.get("left")
        if prev is None:
            raise ValueError("word has no +ini position and no left edge")
        node = prev.find()
    raise ValueError("word exceeds the maximum position count")
