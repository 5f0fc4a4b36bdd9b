"""Tonkawa verb fragment: three alternating stem vowels per stem.

Two stems, p(i)c(e)n(a) 'cut' and n(e)t(a)l(e) 'lick'.  The prefix we-
marks a plural object, the suffix -n- progressive aspect, and -o' (third
singular subject) closes every attested form.  The affix table lists the
three attested combinations: bare, we- and -n-; the unattested we-+-n-
combination has no row, and neither do bare stems.
"""

from __future__ import annotations

from functools import lru_cache

from .engine import Grammar, V, call, conj, feat
from .prosody import add_prosody_relations, declare_position_space
from .typespace import Atom, TypeDomain

VOWELS = ("i", "e", "a", "o")
CONSONANTS = ("p", "c", "n", "t", "l", "w", "'")

STEMS = ("CUT", "LICK")
# stem skeletons: (consonant, alternating vowel) pairs, last vowel included
SKELETONS = {
    "CUT": (("p", "i"), ("c", "e"), ("n", "a")),
    "LICK": (("n", "e"), ("t", "a"), ("l", "e")),
}

FLAG_NAMES = {"plural-object": "plobj", "plural_object": "plobj",
              "progressive": "prog"}


def build_domain() -> TypeDomain:
    domain = TypeDomain()
    # no glides in the data: onsets are plain consonants
    declare_position_space(domain, VOWELS + CONSONANTS, VOWELS, CONSONANTS)
    domain.declare_product(
        "cat", [("object", ("sgobj", "plobj")), ("aspect", ("noprog", "prog"))],
        bearer="category")
    # the stem selector shares the sem dimension: a stem id is its sense
    domain.declare_dimension("sem", STEMS, bearer="semantic")
    return domain


class TonkawaGrammar(Grammar):
    name = "tonkawa"
    lexicon_relations = frozenset({"stem"})

    def cat_expr(self, plural_object=False, progressive=False):
        parts = ["plobj" if plural_object else "sgobj",
                 "prog" if progressive else "noprog"]
        return " & ".join(parts)

    def stem_term(self, stem_id):
        if stem_id is None:
            return V("Stem")
        if stem_id not in STEMS:
            raise ValueError(f"unknown stem id {stem_id!r}")
        return self.ty(Atom(stem_id))

    def generation_goal(self, stem_id, cat_expr):
        return conj(feat("cat", self.ty(cat_expr)),
                    call("verbform", self.stem_term(stem_id), V("Cat")))

    def parse_goal(self, surface):
        return (conj(self.surface_term(surface),
                     call("verbform", V("StemId"), V("Cat"))),
                ("StemId",))

    def surface_term(self, surface):
        vowels = set(VOWELS)
        known = vowels | set(CONSONANTS)
        term = None
        chars = ["'" if ch == "?" else ch for ch in surface]
        if not chars:
            raise ValueError("empty surface")
        for i, ch in enumerate(reversed(chars)):
            if ch not in known:
                raise ValueError(f"unspellable character {ch!r}")
            here = [feat("self.seg", self.ty(Atom(ch)))]
            if ch in vowels:
                here.append(feat("self", self.ty("~onset")))
            if i == 0:
                here.append(feat("self", self.ty("+fin")))
            if term is not None:
                here.append(feat("right", term))
            term = conj(*here)
        return term

    def cells(self):
        for leaf in self.domain.dimensions["cat"]:
            yield leaf, self.generation_goal(None, Atom(leaf))

    def cell_goal(self, cat_leaf):
        return self.generation_goal(None, Atom(cat_leaf))

    def spell(self, seg_leaves, role_leaves):
        if len(seg_leaves) != 1:
            return "{" + "|".join(sorted(seg_leaves)) + "}"
        return next(iter(seg_leaves))

    def pretty_category(self, leaves):
        return self.domain.pretty_product("cat", leaves)

    def parse_analysis(self, solution):
        from .prosody import extract_word
        word = extract_word(solution.root, self.domain, self.spell)
        stem = solution.bindings.get("StemId")
        leaves = stem.leaves("sem", self.domain) if stem is not None \
            else self.domain.full("sem")
        root = next(iter(leaves)) if len(leaves) == 1 \
            else "{" + "|".join(sorted(leaves)) + "}"
        sem = word.sem
        return (root, word.category,
                next(iter(sem)) if len(sem) == 1 else
                "{" + "|".join(sorted(sem)) + "}")


def _skeleton(g, stem_id, suffix_var):
    term = V(suffix_var)
    for cons, vowel in reversed(SKELETONS[stem_id]):
        term = call("obl", call("is", g.ty(Atom(cons))),
                    call("x_0", call("is", g.ty(Atom(vowel))), term))
    return term


@lru_cache(maxsize=None)
def build_grammar(prosody=True) -> TonkawaGrammar:
    g = TonkawaGrammar(build_domain())
    add_prosody_relations(g, prosody=prosody)
    m = "tonkawa"
    ty = g.ty

    g.clause(m, "verbform", [V("StemId"), V("Category")], conj(
        call("word"),
        call("affixes", call("stem", V("StemId"), V("Suffixes")),
             V("Suffixes")),
        feat("cat", V("Category"))))

    for stem_id in STEMS:
        g.clause(m, "stem", [conj(V("S"), ty(Atom(stem_id))), V("Suffixes")],
                 conj(feat("cat.sem", ty(Atom(stem_id))),
                      _skeleton(g, stem_id, "Suffixes")))

    # attested affix rows: bare, we- (plural object), -n- (progressive);
    # the suffix's category is equated with the word's up front (conc
    # shares it anyway once the string closes)
    def row(suffix_term, body):
        g.clause(m, "affixes",
                 [V("Stem"), conj(suffix_term, feat("cat", V("RowCat")))],
                 conj(feat("cat", V("RowCat")), body))

    row(call("o'", call("end")),
        conj(call("#", V("Stem")), feat("cat", ty("~prog"))))
    row(call("o'", call("end")),
        conj(call("we", V("Stem")), feat("cat", ty("~prog"))))
    row(call("n", call("o'", call("end"))), call("#", V("Stem")))

    g.clause(m, "#", [V("More")], conj(
        V("More"), feat("self", ty("+ini")), feat("cat", ty("~plobj"))))
    g.clause(m, "we", [V("More")], conj(
        feat("self", ty("+ini")),
        call("obl", call("is", ty("w")),
             call("obl", call("is", ty("e")), V("More"))),
        feat("cat", ty("plobj"))))
    g.clause(m, "n", [V("More")], conj(
        call("obl", call("is", ty("n")), V("More")),
        feat("cat", ty("prog"))))
    g.clause(m, "o'", [V("More")],
             call("obl", call("is", ty("o")),
                  call("obl", conj(call("is", ty("'")),
                                   feat("self", ty("+fin"))),
                       V("More"))))

    return g.validate()
