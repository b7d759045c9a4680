import random

import pytest
from hypothesis import given, settings

from cirquents import decide, inference as inf, sequents
from cirquents.cirquent import Sequent, embed_formula, parse_cirquent, parse_sequent, substitute_cirquent
from cirquents.errors import CapExceeded, UnsupportedError
from cirquents.formula import parse
from cirquents.semantics import is_normal_binary, is_tautology
from cirquents.sequents import SeqRule, seq_node

import helpers
from strategies import GENERAL, cirquents, formulas


class TestCouplings:
    def test_maximal_matchings(self):
        assert decide.maximal_matchings([1], [2, 3]) == [((1, 2),), ((1, 3),)]
        assert decide.maximal_matchings([1, 4], [2]) == [((1, 2),), ((4, 2),)]
        assert len(decide.maximal_matchings([1, 2, 3], [4, 5, 6])) == 6

    def test_couplings_monogamous(self):
        c = embed_formula(parse(helpers.ALL_P_BLASS))
        for cp in decide.couplings(c):
            flat = [x for pair in cp for x in pair]
            assert len(flat) == len(set(flat)) == 8

    def test_caps(self):
        f = parse(" | ".join(["P"] * 5 + ["!P"] * 4))
        with pytest.raises(CapExceeded):
            list(decide.couplings(embed_formula(f)))
        with pytest.raises(CapExceeded):
            list(decide.couplings(embed_formula(f), max_oliterals=4, max_occurrences=20))


class TestBinaryInstance:
    def test_identity(self):
        r = decide.decide_binary_instance(parse("!P | P"))
        assert r.coupling == ((1, 2),)
        assert r.tautology == parse_cirquent("[ !_g1 | _g1 ] {1}", reserved=True)

    def test_contraction_shape_fails(self):
        assert decide.decide_binary_instance(parse("!P | (P & P)")) is None

    def test_blass(self):
        r = decide.decide_binary_instance(parse(helpers.BLASS))
        assert r is not None and is_tautology(r.tautology) and is_normal_binary(r.tautology)
        assert r.coupling == ((1, 5), (2, 7), (3, 6), (4, 8))

    def test_rejects_elementary(self):
        with pytest.raises(UnsupportedError):
            decide.decide_binary_instance(parse("!p | p"))

    @settings(deadline=None, max_examples=60)
    @given(cirquents(names=GENERAL[:3]))
    def test_instance_postcondition(self, c):
        r = decide.decide_binary_instance(c)
        if r is None:
            return
        assert is_normal_binary(r.tautology) and is_tautology(r.tautology)
        assert substitute_cirquent(r.substitution, r.tautology) == c


class TestProveCCC:
    def test_contraction_example(self):
        p = decide.prove_ccc(parse("!P | (P & P)"))
        assert p is not None and not inf.check_proof(p, inf.CCC)
        assert "CONTR" in p.tags()

    def test_worked_cirquent(self):
        c = parse_cirquent(helpers.WORKED_CIRQUENT)
        assert is_tautology(c)
        p = decide.prove_ccc(c)
        assert p.conclusion == c and not inf.check_proof(p, inf.CCC)
        # the essentially literal stage C after introductions and weakenings
        want = tuple(parse(x) for x in ("P", "!P", "P", "Q", "!P", "!Q"))
        pools = set()
        stack = [p]
        while stack:
            q = stack.pop()
            pools.add(q.conclusion.pool)
            stack.extend(q.premises)
        assert want in pools

    def test_non_tautology(self):
        assert decide.prove_ccc(parse("!P | (P & Q)")) is None

    def test_empty_cirquent(self):
        p = decide.prove_ccc(parse_cirquent("[]"))
        assert p.rule.tag == "EMPTY" and not inf.check_proof(p, inf.CCC)

    def test_logical_atoms_unsupported(self):
        with pytest.raises(UnsupportedError):
            decide.prove_ccc(parse("$T | P"))

    @settings(deadline=None, max_examples=80)
    @given(cirquents(names=GENERAL[:3]))
    def test_completeness(self, c):
        p = decide.prove_ccc(c)
        assert (p is not None) == is_tautology(c)
        if p is not None:
            assert p.conclusion == c and not inf.check_proof(p, inf.CCC)


class TestProveCL5:
    @pytest.mark.parametrize("text", [helpers.BLASS, helpers.FUEL, helpers.ALL_P_BLASS, helpers.CONTRACTION])
    def test_provable(self, text):
        p = decide.prove_cl5(parse(text))
        assert p is not None and p.conclusion == embed_formula(parse(text))
        assert not inf.check_proof(p, inf.CL5) and "CONTR" not in p.tags()

    def test_unprovable(self):
        assert decide.prove_cl5(parse("!P | (P & P)")) is None
        assert decide.prove_cl5(parse(helpers.DUPLICATION)) is None

    @settings(deadline=None, max_examples=60)
    @given(formulas(names=GENERAL[:3], max_leaves=6))
    def test_agrees_with_binary_instance(self, f):
        p = decide.prove_cl5(f)
        assert (p is None) == (decide.decide_binary_instance(f) is None)
        if p is not None:
            assert not inf.check_proof(p, inf.CL5)


class TestAffine:
    def test_axiom(self):
        p = decide.prove_affine(parse_sequent("!P, P"))
        assert p.rule == SeqRule("AX", formula=parse("P"))

    def test_blass_not_affine(self):
        assert decide.prove_affine(parse(helpers.BLASS)) is None

    def test_formula_1_unprovable(self):
        assert decide.prove_affine(parse(helpers.ALL_P_BLASS)) is None
        assert decide.prove_cl5(parse(helpers.ALL_P_BLASS)) is not None

    def test_contraction_formula(self):
        p = decide.prove_affine(parse(helpers.CONTRACTION))
        assert p is not None and not sequents.check_sequent_proof(p, sequents.AFFINE_RULES)

    def test_needs_contraction(self):
        assert decide.prove_affine(parse("!P | (P & P)")) is None

    def test_cap(self):
        with pytest.raises(CapExceeded):
            decide.prove_affine(parse(helpers.ALL_P_BLASS), max_oliterals=4)

    def test_random_seeds(self):
        rng = random.Random(5)
        for _ in range(100):
            seed = helpers.rand_affine_proof(rng)
            p = decide.prove_affine(seed.conclusion)
            assert p is not None and p.conclusion == seed.conclusion
            assert not sequents.check_sequent_proof(p, sequents.AFFINE_RULES)

    def test_sound_against_cl5(self):
        # affine provability implies CL5 provability
        for f in helpers.small_corpus(4):
            if decide.prove_affine(f) is not None:
                assert decide.prove_cl5(f) is not None, f


class TestTranslate:
    def test_axiom(self):
        t = sequents.translate_sequent_proof(seq_node(SeqRule("AX", formula=parse("P & Q"))))
        assert t.rule == inf.ID(parse("P & Q"))

    def test_weakening_two_steps(self):
        p = seq_node(SeqRule("WEAK", 3, parse("Q")), seq_node(SeqRule("AX", formula=parse("P"))))
        t = sequents.translate_sequent_proof(p)
        assert [x for x in t.tags()][:2] == ["WEAK_G", "WEAK_P"]
        assert t.conclusion == parse_cirquent("[ !P ; P ; Q ] {1 2 3}")

    def test_and_two_steps(self):
        ax = seq_node(SeqRule("AX", formula=parse("P")))
        p = seq_node(SeqRule("AND"), ax, ax)
        t = sequents.translate_sequent_proof(p)
        assert t.rule.tag == "CONJ" and t.premises[0].rule.tag == "MIX"
        assert t.conclusion == parse_cirquent("[ !P ; P & !P ; P ] {1 2 3}")
        assert not inf.check_proof(t, inf.CL5.starred())

    def test_classical_to_ccc_star(self):
        ax = seq_node(SeqRule("AX", formula=parse("P")))
        p = seq_node(SeqRule("WEAK", 3, parse("P")), ax)         # !P, P, P
        p = seq_node(SeqRule("CONTR", 2), p)                     # !P, P
        assert sequents.uses_contraction(p)
        assert sequents.check_sequent_proof(p, sequents.AFFINE_RULES)
        assert not sequents.check_sequent_proof(p, sequents.CLASSICAL_RULES)
        t = sequents.translate_sequent_proof(p)
        assert t.rule == inf.CONTR(2)
        assert not inf.check_proof(t, inf.CCC.starred())
        assert inf.check_proof(t, inf.CL5.starred())

    def test_invalid_rejected(self):
        bad = sequents.SequentProof(Sequent((parse("P"),)), SeqRule("AX", formula=parse("P")))
        with pytest.raises(Exception):
            sequents.translate_sequent_proof(bad)

    def test_file_round_trip(self):
        p = decide.prove_affine(parse(helpers.FUEL))
        text = sequents.write_sequent_proof(p)
        assert sequents.read_sequent_proof(text) == p
