"""Modern Hebrew verb fragment.

Triliteral stems interleave three obligatory root consonants with two
alternating stem vowels, C1 (V1) C2 (V2) C3.  A five-row table pairs the
toy fragment's prefixes and suffixes; suffixes police second-vowel
apophony by constraining the segment two positions to their left.  A
root letter tree maps known roots (g.m.r, g.d.r) to semantics and binyan
restrictions, with complement branches at every level yielding UNKNOWN.
Binyan 2 future/infinitive forms prespecify an onset role on the first
stem consonant, which blocks dropping the first stem vowel.
"""

from __future__ import annotations

from functools import lru_cache

from .engine import Grammar, ListT, V, W, call, conj, disj, feat
from .prosody import add_prosody_relations, declare_position_space
from .typespace import Atom, TypeDomain

VOWELS = ("a", "e", "i", "o", "u")
# g m r d k n t l s q and the glottal stop; s/q are demanded by unknown-root
# parsing even though the toy lexicon never lists them
CONSONANTS = ("g", "m", "r", "d", "k", "n", "t", "l", "s", "q", "'")

BINYAN = ("b1", "b2", "b3", "b4", "b5", "b6", "b7")
TENSE = ("past", "pres", "fut", "infinitive")
PERSON = ("first", "second", "third")
NUMBER = ("sg", "pl")
GENDER = ("masc", "fem")

SEMS = ("FINISH", "BE FINISHED", "ENCLOSE", "BE ENCLOSED", "FENCE IN",
        "BE FENCED IN", "DEFINE", "BE DEFINED", "EXCEL", "UNKNOWN")

GDR_SENSES = (("b1", "ENCLOSE"), ("b2", "BE ENCLOSED"), ("b3", "FENCE IN"),
              ("b4", "BE FENCED IN"), ("b5", "DEFINE"), ("b6", "BE DEFINED"),
              ("b7", "EXCEL"))


def build_domain() -> TypeDomain:
    domain = TypeDomain()
    # onsets are consonants or glide-capable high vowels (/i u/)
    declare_position_space(domain, VOWELS + CONSONANTS, VOWELS,
                           [c for c in CONSONANTS] + ["i", "u"])
    domain.declare_named("front", "phon", ["e", "i"])
    domain.declare_named("hi", "phon", ["i", "u"])
    domain.declare_named("-hi", "phon",
                         [v for v in VOWELS if v not in ("i", "u")])
    domain.declare_named("low", "phon", ["a"])
    domain.declare_named("round", "phon", ["o", "u"])
    domain.declare_product(
        "cat",
        [("binyan", BINYAN), ("tense", TENSE), ("person", PERSON),
         ("number", NUMBER), ("gender", GENDER)],
        bearer="category")
    domain.declare_dimension("sem", SEMS, bearer="semantic")
    return domain


class HebrewGrammar(Grammar):
    name = "hebrew"
    lexicon_relations = frozenset({
        "root_letter_tree", "root_letter_tree_g",
        "root_letter_tree_gm", "root_letter_tree_gd"})

    # -- goals ---------------------------------------------------------------

    def root_term(self, letters):
        """Root argument: three consonant constraints, or fresh variables
        when ``letters`` is None (paradigm compilation)."""
        if letters is None:
            return ListT((V("RootC1"), V("RootC2"), V("RootC3")))
        if len(letters) != 3:
            raise ValueError("a root has exactly three letters")
        items = []
        for l in letters:
            tc = self.domain.resolve(Atom(l))
            if not tc.leaves <= self.domain.resolve("consonant").leaves:
                raise ValueError(f"root letter {l!r} is not a consonant")
            items.append(self.ty(Atom(l)))
        return ListT(tuple(items))

    def generation_goal(self, letters, cat_expr):
        """Narrow the word category first, then describe the verb form; the
        early narrowing only prunes, the proofs are unchanged."""
        return conj(feat("cat", self.ty(cat_expr)),
                    call("verbform", self.root_term(letters), V("Cat")))

    def parse_goal(self, surface):
        return (conj(self.surface_term(surface),
                     call("verbform",
                          ListT((V("R1"), V("R2"), V("R3"))), V("Cat"))),
                ("R1", "R2", "R3"))

    def surface_term(self, surface):
        """Bind segments position by position; the last input position is
        +fin so the description cannot be longer or shorter than the input.
        Input ``j`` is onset /i/; input vowels are non-onset."""
        if not surface:
            raise ValueError("empty surface")
        vowels = set(VOWELS)
        known = vowels | set(CONSONANTS) | {"j"}
        term = None
        for i, ch in enumerate(reversed(surface)):
            if ch not in known:
                raise ValueError(f"unspellable character {ch!r}")
            here = []
            if ch == "j":
                here.append(feat("self", conj(feat("seg", self.ty("i")),
                                              self.ty("onset"))))
            elif ch in vowels:
                here.append(feat("self", conj(feat("seg", self.ty(Atom(ch))),
                                              self.ty("~onset"))))
            else:
                here.append(feat("self.seg", self.ty(Atom(ch))))
            if i == 0:
                here.append(feat("self", self.ty("+fin")))
            if term is not None:
                here.append(feat("right", term))
            term = conj(*here)
        return term

    # -- paradigm cells ------------------------------------------------------

    def cells(self):
        """Every atomic category; cells without solutions drop out."""
        import itertools
        for combo in itertools.product(BINYAN, TENSE, PERSON, NUMBER, GENDER):
            leaf = ".".join(combo)
            yield leaf, self.generation_goal(None, Atom(leaf))

    def cell_goal(self, cat_leaf):
        return self.generation_goal(None, Atom(cat_leaf))

    def cell_probe_goal(self, cat_leaf):
        """Cheap necessary condition for a cell to be non-empty: some affix
        row must carry its category.  Probe failures skip the full search."""
        return conj(feat("cat", self.ty(Atom(cat_leaf))),
                    call("affixes", V("S"), V("Sfx")))

    # -- rendering -----------------------------------------------------------

    def spell(self, seg_leaves, role_leaves):
        if len(seg_leaves) != 1:
            return "{" + "|".join(sorted(seg_leaves)) + "}"
        seg = next(iter(seg_leaves))
        if seg == "i" and role_leaves == frozenset(["onset"]):
            return "j"
        return seg

    def pretty_category(self, leaves):
        return self.domain.pretty_product("cat", leaves)

    def pretty_root(self, binding_nodes):
        letters = []
        for node in binding_nodes:
            leaves = node.leaves("phon", self.domain)
            letters.append(next(iter(leaves)) if len(leaves) == 1
                           else "{" + "|".join(sorted(leaves)) + "}")
        return ".".join(letters)

    def parse_analysis(self, solution):
        """(root, category tuple set, sem) triple of one parse solution."""
        from .prosody import extract_word
        word = extract_word(solution.root, self.domain, self.spell)
        root = self.pretty_root(
            [solution.bindings[k] for k in ("R1", "R2", "R3")])
        return (root, word.category, _only(word.sem))


def _only(leaves):
    if len(leaves) != 1:
        return "{" + "|".join(sorted(leaves)) + "}"
    return next(iter(leaves))


def _unknown_leaf(g):
    return feat("cat.sem", g.ty(Atom("UNKNOWN")))


@lru_cache(maxsize=None)
def build_grammar(prosody=True, prespecification=True) -> HebrewGrammar:
    g = HebrewGrammar(build_domain())
    add_prosody_relations(g, prosody=prosody)
    m = "hebrew"
    ty = g.ty

    # stem vowels.  v1 follows the fragment: /a/ for B1 past and all of B7,
    # /o/ for B1 non-past; the B2 future/infinitive clause is an extension,
    # without it the prespecified onset of B2 future forms is unsatisfiable.
    g.clause(m, "v1", [], conj(call("is", ty("low")),
                               feat("cat", ty("(past & b1) ; b7"))))
    g.clause(m, "v1", [], conj(call("is", ty("round & -hi")),
                               feat("cat", ty("b1 & ~past"))))
    g.clause(m, "v1", [], conj(call("is", ty("low")),
                               feat("cat", ty("b2 & (fut ; infinitive)"))))

    # v2: /a/ freely; a front vowel outside the present tense only after an
    # unrealized first stem vowel (the slot two positions left must then
    # hold a consonant).  The branches are exclusive so no cell ever gets
    # the same surface twice.
    g.clause(m, "v2", [], call("is", ty("low")))
    g.clause(m, "v2", [], conj(
        call("is", ty("front & -hi")),
        disj(feat("cat", ty("pres")),
             conj(feat("cat", ty("~pres")),
                  feat("left.left", call("is", ty("consonant")))))))

    # zero prefix
    g.clause(m, "#", [V("More")], conj(
        V("More"),
        feat("self", ty("+ini")),
        feat("cat", ty("~fut & ~infinitive & (b1 ; (~pres & (b3 ; b4)))"))))
    # zero suffix; apophony anchored two positions left of the end
    g.clause(m, "#", [V("More")], conj(
        V("More"),
        feat("self", ty("-ini")),
        feat("left.self", ty("+fin")),
        disj(conj(feat("cat", ty("sg & masc & third & past")),
                  feat("left.left", call("is", ty("~front")))),
             conj(feat("cat", ty("sg & masc & third & pres")),
                  feat("left.left", call("is", ty("front")))))))

    g.clause(m, "ji", [V("More")], conj(
        feat("self", ty("+ini")),
        call("obl", call("is", ty("i")),
             call("obl", call("is", ty("i")), V("More"))),
        feat("cat", ty("fut & third & ((sg & masc) ; pl) & (b1 ; b2)"))))

    g.clause(m, "u", [V("More")], conj(
        call("obl", conj(call("is", ty("u")), feat("self", ty("+fin"))),
             V("More")),
        feat("left.left", call("is", ty("~(vowel & ~front)"))),
        feat("cat", ty("pl & ((past & third) ; (fut & ~first))"))))

    g.clause(m, "a", [V("More")], conj(
        call("obl", conj(call("is", ty("a")), feat("self", ty("+fin"))),
             V("More")),
        feat("left.left", call("is", ty("~(vowel & ~front)"))),
        feat("cat", ty("(past & third & sg & fem) ; (pres & sg & fem & b5)"))))

    g.clause(m, "et", [V("More")], conj(
        call("obl", call("is", ty("e")),
             call("obl", conj(call("is", ty("t")), feat("self", ty("+fin"))),
                  V("More"))),
        feat("left.left", call("is", ty("front"))),
        feat("cat", ty("pres & sg & fem & ~b5"))))

    g.clause(m, "im", [V("More")], conj(
        call("obl", call("is", ty("i")),
             call("obl", conj(call("is", ty("m")), feat("self", ty("+fin"))),
                  V("More"))),
        feat("left.left", call("is", ty("~(vowel & ~front)"))),
        feat("cat", ty("pres & pl & masc"))))

    g.clause(m, "stem", [V("C1"), V("C2"), V("C3"), V("Suffixes")],
             call("obl", call("is", V("C1")),
                  call("x_0", call("v1"),
                       call("obl", call("is", V("C2")),
                            call("x_0", call("v2"),
                                 call("obl", call("is", V("C3")),
                                      V("Suffixes")))))))

    if prespecification:
        g.clause(m, "prosodic_prespecification", [], disj(
            conj(feat("cat", ty("(b2 & ~(past ; pres)) ; b3 ; b4")),
                 feat("self", ty("onset"))),
            feat("cat", ty("~((b2 & ~(past ; pres)) ; b3 ; b4)"))))
    else:
        g.clause(m, "prosodic_prespecification", [], conj())

    # each row also equates the suffix's category with the word's; conc
    # shares it anyway once the string closes, doing it here prunes rows
    # whose category cannot match before the stem search starts
    def row(suffix_term, prefix_name):
        g.clause(m, "affixes",
                 [V("Stem"), conj(suffix_term, feat("cat", V("RowCat")))],
                 conj(feat("cat", V("RowCat")),
                      call(prefix_name, V("Stem"))))

    row(call("#", call("end")), "#")
    row(call("a", call("end")), "#")
    row(call("et", call("end")), "#")
    row(call("im", call("end")), "#")
    row(call("u", call("end")), "ji")

    g.clause(m, "verbform",
             [ListT((conj(V("C1"), ty("consonant")),
                     conj(V("C2"), ty("consonant")),
                     conj(V("C3"), ty("consonant")))),
              V("Category")],
             conj(call("root_letter_tree", ListT((V("C1"), V("C2"), V("C3")))),
                  call("word"),
                  call("affixes",
                       conj(call("prosodic_prespecification"),
                            call("stem", V("C1"), V("C2"), V("C3"),
                                 V("Suffixes"))),
                       V("Suffixes")),
                  feat("cat", V("Category"))))

    g.clause(m, "root_letter_tree", [ListT((ty("g"),), tail=V("Rest"))],
             call("root_letter_tree_g", V("Rest")))
    g.clause(m, "root_letter_tree", [ListT((ty("~g"),), tail=W)],
             _unknown_leaf(g))
    g.clause(m, "root_letter_tree_g", [ListT((ty("m"),), tail=V("Rest"))],
             call("root_letter_tree_gm", V("Rest")))
    g.clause(m, "root_letter_tree_g", [ListT((ty("d"),), tail=V("Rest"))],
             call("root_letter_tree_gd", V("Rest")))
    g.clause(m, "root_letter_tree_g", [ListT((ty("~m & ~d"),), tail=W)],
             _unknown_leaf(g))
    g.clause(m, "root_letter_tree_gm", [ListT((ty("r"),))],
             feat("cat", disj(
                 conj(ty("b1"), feat("sem", ty(Atom("FINISH")))),
                 conj(ty("b2"), feat("sem", ty(Atom("BE FINISHED")))))))
    g.clause(m, "root_letter_tree_gm", [ListT((ty("~r"),), tail=W)],
             _unknown_leaf(g))
    g.clause(m, "root_letter_tree_gd", [ListT((ty("r"),))],
             feat("cat", disj(*[
                 conj(ty(b), feat("sem", ty(Atom(sense))))
                 for b, sense in GDR_SENSES])))
    g.clause(m, "root_letter_tree_gd", [ListT((ty("~r"),), tail=W)],
             _unknown_leaf(g))

    return g.validate()
