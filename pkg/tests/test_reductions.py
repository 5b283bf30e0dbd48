"""Hardness-reduction generators, mini-oracles, and the random generator."""

import pytest

from wspkit.core import ATLEAST
from wspkit.errors import DomainError, ResourceLimitError
from wspkit.reductions import (
    GADGETS,
    CnfFormula,
    MchsInstance,
    TernaryGadget,
    gen_random_instance,
    mchs_to_wsp,
    sat_to_wsp,
    solve_mchs_bruteforce,
    solve_sat_bruteforce,
)
from wspkit.solver import solve_bruteforce


class TestSatToWsp:
    def test_two_variable_formula_shape(self):
        f = CnfFormula(2, ((1, -2), (2,)))
        schema = sat_to_wsp(f)
        assert len(schema.tasks) == 5
        assert schema.users == ("t", "f")
        assert len(schema.constraints) == 4
        assert all(c.kind == ATLEAST and c.params == (2,)
                   for c in schema.constraints)
        clause_scopes = [c.scope for c in schema.constraints[2:]]
        assert clause_scopes == [("x1", "nx2", "d"), ("x2", "d")]
        assert schema.auth["d"] == {"f"}

    def test_single_positive_clause_satisfiable(self):
        outcome = solve_bruteforce(sat_to_wsp(CnfFormula(1, ((1,),))))
        assert outcome.satisfiable
        assert outcome.plan["x1"] == "t"

    def test_contradiction_unsatisfiable(self):
        schema = sat_to_wsp(CnfFormula(1, ((1,), (-1,))))
        assert not solve_bruteforce(schema).satisfiable

    @pytest.mark.parametrize("seed", range(25))
    def test_equivalence_random(self, seed):
        import random

        rng = random.Random(seed)
        n = rng.randint(1, 5)
        clauses = tuple(
            tuple(rng.choice((-1, 1)) * rng.randint(1, n)
                  for _ in range(rng.randint(1, 3)))
            for _ in range(rng.randint(1, 8))
        )
        f = CnfFormula(n, clauses)
        assert (solve_bruteforce(sat_to_wsp(f)).satisfiable
                == solve_sat_bruteforce(f))


class TestSatOracle:
    def test_satisfiable(self):
        assert solve_sat_bruteforce(CnfFormula(2, ((1, -2), (2,))))

    def test_unsatisfiable(self):
        assert not solve_sat_bruteforce(CnfFormula(1, ((1,), (-1,))))

    def test_variable_cap(self):
        with pytest.raises(ResourceLimitError):
            solve_sat_bruteforce(CnfFormula(25, ((1,),)), max_vars=20)


class TestGadgets:
    def test_shipped_gadgets_validate(self):
        assert set(GADGETS) == {"bind-singleton", "atmost2"}
        for gadget in GADGETS.values():
            gadget.validate()

    def test_nonconforming_gadget_rejected(self):
        from wspkit.core import disequality

        bad = TernaryGadget("neq-pair", lambda a, b, c: disequality(a, b))
        with pytest.raises(DomainError):
            bad.validate()


def two_color_instance():
    return MchsInstance(
        vertices=("a", "b", "c", "d"),
        sets=(frozenset({"a", "c"}), frozenset({"b", "d"})),
        num_colors=2,
        coloring={"a": 1, "b": 1, "c": 2, "d": 2},
    )


class TestMchsToWsp:
    def test_count_formulas(self):
        inst = two_color_instance()
        for gadget in GADGETS.values():
            schema = mchs_to_wsp(inst, gadget)
            assert len(schema.tasks) == 4  # (l-1)m + l
            assert len(schema.constraints) == 2  # (l-1)m

    def test_hittable_instance_satisfiable(self):
        inst = two_color_instance()
        for gadget in GADGETS.values():
            assert solve_bruteforce(mchs_to_wsp(inst, gadget)).satisfiable

    def test_unhittable_instance_unsatisfiable(self):
        inst = MchsInstance(
            vertices=("a", "b", "c", "d"),
            sets=(frozenset({"a"}), frozenset({"b"}), frozenset({"c"})),
            num_colors=2,
            coloring={"a": 1, "b": 1, "c": 2, "d": 2},
        )
        for gadget in GADGETS.values():
            assert not solve_bruteforce(mchs_to_wsp(inst, gadget)).satisfiable

    def test_degenerate_instances_normalized(self):
        single_set = MchsInstance(("v", "w"), (frozenset({"v"}),), 2,
                                  {"v": 1, "w": 2})
        single_color = MchsInstance(("v",), (frozenset({"v"}),) * 2, 1,
                                    {"v": 1})
        for inst in (single_set, single_color):
            schema = mchs_to_wsp(inst, GADGETS["atmost2"])
            assert (solve_bruteforce(schema).satisfiable
                    == solve_mchs_bruteforce(inst))

    def test_authorization_layout(self):
        inst = MchsInstance(
            vertices=("a", "b", "c"),
            sets=(frozenset({"a"}), frozenset({"b", "c"})),
            num_colors=3,
            coloring={"a": 1, "b": 2, "c": 3},
        )
        schema = mchs_to_wsp(inst, GADGETS["bind-singleton"])
        assert schema.auth["s1"] == {"a"}
        assert schema.auth["e1_3"] == {"a"}  # last chain task gets E_1
        assert schema.auth["e1_2"] == {"a", "b", "c"}


class TestMchsOracle:
    def test_hittable(self):
        assert solve_mchs_bruteforce(two_color_instance())

    def test_single_vertex(self):
        inst = MchsInstance(("v",), (frozenset({"v"}),), 1, {"v": 1})
        assert solve_mchs_bruteforce(inst)

    def test_empty_color_class_rejected(self):
        with pytest.raises(DomainError):
            MchsInstance(("v",), (), 2, {"v": 1})


class TestGenRandomInstance:
    def test_deterministic(self):
        a = gen_random_instance(4, 6, 3, ["neq", ("peruser", (1, 2))], seed=1)
        b = gen_random_instance(4, 6, 3, ["neq", ("peruser", (1, 2))], seed=1)
        assert a == b

    def test_density_extremes(self):
        full = gen_random_instance(3, 4, 0, ["neq"], seed=0, density=1.0)
        assert all(full.auth[t] == set(full.users) for t in full.tasks)
        empty = gen_random_instance(3, 4, 0, ["neq"], seed=0, density=0.0)
        assert all(not empty.auth[t] for t in empty.tasks)
        assert not solve_bruteforce(empty).satisfiable

    def test_unknown_kind_rejected(self):
        with pytest.raises(DomainError):
            gen_random_instance(3, 3, 1, ["mystery"], seed=0)
