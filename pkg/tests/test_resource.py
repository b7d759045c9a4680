import itertools
import random

import pytest
from hypothesis import given, settings

from cirquents import decide, inference as inf, resource as res
from cirquents.cirquent import EMPTY, embed_formula, make
from cirquents.errors import CapExceeded, ParseError, ResourceError, UnsupportedError
from cirquents.formula import parse
from cirquents.semantics import eval_situation, is_tautology

import helpers
from strategies import GENERAL, formulas

GEN = res.ports("-Fuel, Power")


def test_leq_generator():
    assert res.leq(GEN, "10", "00") and res.leq(GEN, "10", "11")
    assert not res.leq(GEN, "00", "10")
    outs = res.ports("P, Q")
    for s, t in itertools.product(("00", "01", "10", "11"), repeat=2):
        assert res.leq(GEN, s, s)
        assert res.leq(outs, s, t) == all(a <= b for a, b in zip(s, t))
    with pytest.raises(ResourceError):
        res.leq(GEN, "1", "10")


def test_ports():
    p = res.Port.of_literal(parse("!P"))
    assert p.is_input and str(p) == "-P" and p.literal() == parse("!P")
    with pytest.raises(UnsupportedError):
        res.Port.of_literal(parse("p"))
    with pytest.raises(ParseError):
        res.Port.parse("-$T")


class TestOperations:
    def test_generator_table(self):
        fuel, power = res.atomic("Fuel"), res.atomic("Power")
        g = res.impl(fuel, power)
        assert g.interface == GEN
        assert g.false_situations() == ["10"]
        assert g == res.formula_to_resource(parse(helpers.GENERATOR))

    def test_constants(self):
        assert res.zero().false_situations() == [""]
        assert res.one().true_situations() == [""]
        assert res.neg(res.zero()) == res.one()
        assert res.combine("conj", res.one(), res.zero()) == res.zero()

    def test_combine_names(self):
        a, b = res.atomic("P"), res.atomic("Q")
        assert res.combine("disj", a, b) == res.disj(a, b)
        assert res.combine("neg", a) == res.neg(a)
        with pytest.raises(ValueError):
            res.combine("xor", a, b)

    def test_non_monotone_rejected(self):
        with pytest.raises(ResourceError):
            res.Resource(res.ports("P"), b"\x01\x00")
        assert res.monotonicity_violation(res.ports("-P"), b"\x00\x01") == ("1", "0")

    def test_immutable(self):
        with pytest.raises(AttributeError):
            res.one().table = b"\x00"


class TestDenotation:
    def test_excluded_middle(self):
        a = res.formula_to_resource(parse("!P | P"))
        assert [str(p) for p in a.interface] == ["-P", "P"]
        assert a.false_situations() == ["10"]

    def test_literal(self):
        assert res.formula_to_resource(parse("P")).table == b"\x00\x01"

    def test_cirquent(self):
        beta = res.cirquent_to_resource(make(["P", "Q", "R"], [[1, 2], [1, 3], [2, 3]]))
        assert beta.false_situations() == ["000", "001", "010", "100"]
        assert res.cirquent_to_resource(EMPTY) == res.one()

    def test_rejects_elementary(self):
        with pytest.raises(UnsupportedError):
            res.formula_to_resource(parse("p | !P"))

    def test_cap(self):
        with pytest.raises(CapExceeded):
            res.formula_to_resource(parse("P | P | P"), max_ports=2)

    @given(formulas(names=GENERAL[:3], max_leaves=6))
    def test_singleton_and_situations(self, f):
        a = res.formula_to_resource(f)
        assert res.cirquent_to_resource(embed_formula(f)) == a
        for s, v in a.rows():
            assert eval_situation(f, s) == v


class TestRepresent:
    def test_two_of_three(self):
        beta = res.from_function(res.ports("P, Q, R"), lambda s: s.count("1") >= 2)
        assert res.critical_situations(beta) == ["001", "010", "100"]
        assert res.represent(beta) == make(["P", "Q", "R"], [[1, 2], [1, 3], [2, 3]])

    def test_constants(self):
        assert res.critical_situations(res.one()) == []
        assert res.represent(res.zero()) == make([], [[]])
        assert res.represent(res.one()) == EMPTY

    def test_generator(self):
        g = res.formula_to_resource(parse(helpers.GENERATOR))
        assert res.critical_situations(g) == ["10"]
        assert res.represent(g) == make(["!Fuel", "Power"], [[1, 2]])

    def test_round_trip_exhaustive_four_ports(self):
        outs = res.ports("P, Q, R, S")
        mono = [bytes(bits) for bits in itertools.product((0, 1), repeat=16)
                if not res.monotonicity_violation(outs, bytes(bits))]
        assert len(mono) == 168
        for genders in itertools.product((False, True), repeat=4):
            interface = tuple(res.Port(p.atom, g) for p, g in zip(outs, genders))
            flip = sum(1 << (3 - j) for j, g in enumerate(genders) if g)
            for t in mono:
                # an input reverses the order on its bit
                a = res.Resource(interface, bytes(t[r ^ flip] for r in range(16)))
                assert res.cirquent_to_resource(res.represent(a)) == a

    def test_round_trip_random(self):
        rng = random.Random(12)
        for _ in range(200):
            a = helpers.rand_resource(rng, rng.randint(0, 5))
            assert res.cirquent_to_resource(res.represent(a)) == a


class TestArrangements:
    def test_excluded_middle(self):
        a = res.formula_to_resource(parse("!P | P"))
        assert res.arrangement_checks(a, [(1, 2)]) == (True, True)
        assert not res.is_trivializing(a, [])
        assert res.consistent("01", [(1, 2)]) and not res.consistent("10", [(1, 2)])

    def test_empty_on_one(self):
        assert res.arrangement_checks(res.one(), []) == (True, True)

    def test_contraction_shape(self):
        a = res.formula_to_resource(parse("!P | (P & P)"))
        assert res.arrangement_checks(a, [(1, 2)]) == (True, False)
        assert not res.is_monogamous([(1, 2), (1, 3)])

    def test_ill_typed(self):
        a = res.formula_to_resource(parse("!P | Q"))
        with pytest.raises(ResourceError):
            res.arrangement_checks(a, [(1, 2)])
        with pytest.raises(ResourceError):
            res.arrangement_checks(a, [(2, 1)])

    def test_greedy(self):
        a = res.formula_to_resource(parse("!P | (P & P)"))
        g = res.greedy_arrangement(a)
        assert g == ((1, 2), (1, 3)) and res.is_trivializing(a, g)
        b = res.formula_to_resource(parse("!P | (P & Q)"))
        assert not res.is_trivializing(b, res.greedy_arrangement(b))
        c = res.formula_to_resource(parse("P | Q"))
        assert res.greedy_arrangement(c) == () and not res.is_trivializing(c, ())

    @pytest.mark.parametrize("text, arr", [
        (helpers.CONTRACTION, ((1, 3),)),
        (helpers.FUEL, ((1, 4), (3, 6), (5, 2))),
        (helpers.BLASS, ((1, 5), (2, 7), (3, 6), (4, 8))),
    ])
    def test_is_trivial(self, text, arr):
        assert res.is_trivial(parse(text)) == arr

    def test_not_trivial(self):
        assert res.is_trivial(parse(helpers.DUPLICATION)) is None
        assert res.is_trivial(parse("!P | (P & P)")) is None

    def test_trivial_cap(self):
        with pytest.raises(CapExceeded):
            res.is_trivial(res.formula_to_resource(parse("!P | P | P")), max_ports=2)

    @settings(deadline=None, max_examples=80)
    @given(formulas(names=GENERAL[:3], max_leaves=6))
    def test_trivial_iff_binary_instance(self, f):
        assert (res.is_trivial(f) is None) == (decide.decide_binary_instance(f) is None)
        a = res.formula_to_resource(f)
        assert res.is_trivializing(a, res.greedy_arrangement(a)) == is_tautology(f)


class TestText:
    def test_round_trip(self):
        rng = random.Random(4)
        for _ in range(100):
            a = helpers.rand_resource(rng, rng.randint(0, 4))
            assert res.parse_resource(res.to_resource_text(a)) == a

    def test_empty_situation(self):
        assert res.to_resource_text(res.one()) == "resource { ports: []; true: [e] }"
        assert res.parse_resource("resource { ports: []; true: [] }") == res.zero()

    def test_rejects_non_monotone(self):
        with pytest.raises(ResourceError, match="00 <= 10"):
            res.parse_resource("resource { ports: [P, Q]; true: [00] }")

    def test_bad_syntax(self):
        with pytest.raises(ParseError):
            res.parse_resource("resource { ports: [P]; true: [11] }")
        with pytest.raises(ParseError):
            res.parse_resource("ports: [P]")

    def test_arrangement_text(self):
        arr = ((1, 5), (2, 7))
        text = res.write_arrangement(arr)
        assert text == "alloc 1 -> 5\nalloc 2 -> 7\n"
        assert res.read_arrangement("# c\n" + text) == arr
        with pytest.raises(ParseError):
            res.read_arrangement("alloc 1 to 2")


class TestExtract:
    def test_identity(self):
        assert res.extract_arrangement(inf.node(inf.ID(parse("P")))) == ((1, 2),)

    def test_blass_hand_proof(self):
        p = helpers.blass_proof()
        arr = res.extract_arrangement(p)
        assert len(arr) == 4
        assert res.arrangement_checks(res.cirquent_to_resource(p.conclusion), arr) == (True, True)

    def test_formula_1(self):
        p = decide.prove_cl5(parse(helpers.ALL_P_BLASS))
        arr = res.extract_arrangement(p)
        assert len(arr) == 4
        assert res.arrangement_checks(res.formula_to_resource(parse(helpers.ALL_P_BLASS)), arr) == (True, True)

    def test_compound_identity(self):
        p = inf.node(inf.ID(parse("P & (Q | P)")))
        a = res.cirquent_to_resource(p.conclusion)
        arr = res.extract_arrangement(p)
        assert len(arr) == 3 and res.arrangement_checks(a, arr) == (True, True)

    def test_rejects_invalid(self):
        with pytest.raises(Exception):
            res.extract_arrangement(helpers.contraction_proof())

    def test_random_affine_translations(self):
        from cirquents import sequents
        rng = random.Random(8)
        for _ in range(100):
            p = sequents.translate_sequent_proof(helpers.rand_affine_proof(rng))
            arr = res.extract_arrangement(p)
            assert res.arrangement_checks(res.cirquent_to_resource(p.conclusion), arr) == (True, True)
