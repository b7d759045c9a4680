import pytest
from hypothesis import given, settings

from cirquents import cl2, decide
from cirquents.errors import CapExceeded, ProofFormatError
from cirquents.formula import Sort, atom, parse, to_text

import helpers
from strategies import ELEMENTARY, GENERAL, formulas


def el(text):
    return to_text(cl2.elementarize(parse(text)))


class TestElementarize:
    def test_examples(self):
        assert el("(!P | !p) | p") == "$F | !p | p"
        assert el("p | !p") == "p | !p"
        assert el("(P * Q) | R") == "$T | $F"
        assert el("(P + q) & !q") == "$F & !q"

    def test_choice_free_output(self):
        f = cl2.elementarize(parse("(P * (Q + R)) | (p & !S)"))
        assert cl2.measure(f) == 0


class TestStable:
    def test_examples(self):
        assert cl2.is_stable(parse("(!P | !p) | p"))
        assert not cl2.is_stable(parse("!p | (p & P)"))
        # both literals of a general atom turn false
        assert not cl2.is_stable(parse("!P | (P & P)"))
        assert not cl2.is_stable(parse(helpers.CONTRACTION))


class TestBackward:
    def test_contraction_candidates(self):
        cands = cl2.backward_cl2(parse("(!P | !P) | P"))
        assert [c.tag for c in cands] == ["C", "C"]
        e1 = atom("_e1")
        assert e1.sort is Sort.ELEMENTARY
        assert cands[0].premises == (parse("(!_e1 | !P) | _e1", reserved=True),)
        assert cands[1].premises == (parse("(!P | !_e1) | _e1", reserved=True),)

    def test_stable_choice_free(self):
        assert cl2.backward_cl2(parse("!p | p")) == [cl2.Candidate("A", (), ())]

    def test_no_candidates(self):
        assert cl2.backward_cl2(parse("!p | (p & P)")) == []

    def test_rule_a_premises(self):
        cands = cl2.backward_cl2(parse("(p * q) | !p"))
        a = [c for c in cands if c.tag == "A"]
        assert a and set(a[0].premises) == {parse("p | !p"), parse("q | !p")}

    def test_rule_b(self):
        cands = cl2.backward_cl2(parse("p + q"))
        assert [(c.tag, c.premises) for c in cands] == [("B", (parse("p"),)), ("B", (parse("q"),))]

    @given(formulas(names=GENERAL[:2] + ELEMENTARY[:1], choice=True, max_leaves=5))
    def test_measure_drops(self, f):
        for c in cl2.backward_cl2(f):
            for h in c.premises:
                assert cl2.measure(h) < cl2.measure(f)


class TestProve:
    def test_contraction(self):
        d = cl2.prove_cl2(parse(helpers.CONTRACTION))
        assert d is not None and d.tag == "C" and d.premises[0].tag == "A"
        assert not cl2.check_derivation(d)

    def test_duplication(self):
        assert cl2.prove_cl2(parse(helpers.DUPLICATION)) is None

    def test_choice(self):
        d = cl2.prove_cl2(parse("(P * Q) -> P"))
        assert d.tags() == ["B", "C", "A"]
        assert not cl2.check_derivation(d)

    def test_cap(self):
        with pytest.raises(CapExceeded):
            cl2.prove_cl2(parse(helpers.ALL_P_BLASS), max_size=4)

    @settings(deadline=None, max_examples=80)
    @given(formulas(names=GENERAL[:3], max_leaves=6))
    def test_agrees_with_binary_instance(self, f):
        d = cl2.prove_cl2(f)
        assert (d is None) == (decide.decide_binary_instance(f) is None)
        if d is not None:
            assert not cl2.check_derivation(d)

    @settings(deadline=None, max_examples=60)
    @given(formulas(names=GENERAL[:2] + ELEMENTARY[:1], choice=True, max_leaves=5))
    def test_choice_derivations_check(self, f):
        d = cl2.prove_cl2(f)
        if d is not None:
            assert not cl2.check_derivation(d)
            assert cl2.read_derivation(cl2.write_derivation(d)) == d


class TestDerivationFiles:
    def test_round_trip(self):
        d = cl2.prove_cl2(parse("(P * Q) -> P"))
        text = cl2.write_derivation(d)
        assert text.splitlines() == [
            "1: RULE_A expect !_e1 | _e1",
            "2: RULE_C R L _e1 from 1 expect !P | P",
            "3: RULE_B L 1 from 2 expect !P + !Q | P",
        ]
        assert cl2.read_derivation(text) == d

    def test_bad_step(self):
        with pytest.raises(ProofFormatError, match="instable"):
            cl2.read_derivation("1: RULE_A expect !P | P\n")
        with pytest.raises(ProofFormatError, match="fresh"):
            cl2.read_derivation("1: RULE_A expect (!p | p) | (!p | p)\n"
                                "2: RULE_C LR LL p from 1 expect (!P | P) | (!p | p)\n")
        with pytest.raises(ProofFormatError, match="undefined"):
            cl2.read_derivation("2: RULE_C R L _e1 from 1 expect !P | P\n")
        with pytest.raises(ProofFormatError, match="empty"):
            cl2.read_derivation("# nothing\n")

    def test_paths(self):
        assert cl2.parse_path(".") == () and cl2.path_text((1, 0)) == "RL"
        with pytest.raises(Exception):
            cl2.parse_path("X")
