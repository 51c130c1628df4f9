"""Truth conditions, model enumeration, and the bounded entailment oracle.

Derived expectations are checked against independent set-theoretic
computations on explicit models before the engine's own answer is
asserted, so the two routes never collapse into one.
"""

from __future__ import annotations

import pytest

from felicity import (
    ALL,
    AndConc,
    AndLF,
    AndSeq,
    Atom,
    DeclarationError,
    EpistemicContextRequired,
    Know,
    Model,
    MOST,
    NO,
    NotLF,
    NotP,
    Only,
    OrLF,
    PredicateSym,
    QI,
    Quant,
    ResourceBudgetError,
    ScaleError,
    SOME,
    TRUE,
    WellFormednessError,
    consistent,
    entails,
    enumerate_models,
    eval_pexpr,
    evaluate,
    expand_qi,
    is_intersective_conjunction,
    render_lf,
)
from conftest import BLOND, ITALIAN, ITALIAN_PREDS, LEFT, TALL, WARM, WON


def some(r, s):
    return Quant(SOME, r, s)


def all_(r, s):
    return Quant(ALL, r, s)


def most(r, s):
    return Quant(MOST, r, s)


def no(r, s):
    return Quant(NO, r, s)


# ---------------------------------------------------------------------------
# Predicate expressions
# ---------------------------------------------------------------------------


class TestEvalPexpr:
    def test_atom_membership(self):
        m = Model(["a"], {"warm": ["a"]})
        assert eval_pexpr(Atom(WARM), m, "a") is True

    def test_conc_empty_intersection_at_individual(self):
        m = Model(["a", "b"], {"warm": ["a"], "blond": ["b"]})
        assert eval_pexpr(AndConc(Atom(WARM), Atom(BLOND)), m, "a") is False

    def test_conc_intersection_member(self):
        # direct evaluation of the warm-and-blond intersection
        m = Model(["a", "b"], {"warm": ["a", "b"], "blond": ["b"]})
        assert eval_pexpr(AndConc(Atom(WARM), Atom(BLOND)), m, "b") is True

    def test_negation_is_complement(self):
        m = Model(["a", "b"], {"warm": ["a"]})
        assert eval_pexpr(NotP(Atom(WARM)), m, "b") is True
        assert eval_pexpr(NotP(Atom(WARM)), m, "a") is False

    def test_true_holds_everywhere(self):
        m = Model(["a"], {"warm": []})
        assert eval_pexpr(TRUE, m, "a") is True

    def test_undeclared_atom_raises(self):
        m = Model(["a"], {"warm": ["a"]})
        with pytest.raises(DeclarationError):
            eval_pexpr(Atom(BLOND), m, "a")

    def test_nonmember_individual_raises(self):
        m = Model(["a"], {"warm": ["a"]})
        with pytest.raises(DeclarationError):
            eval_pexpr(Atom(WARM), m, "z")

    def test_andseq_truth_is_conjunction(self):
        m = Model(["a"], {"won": ["a"], "left": ["a"]})
        assert eval_pexpr(AndSeq(Atom(WON), Atom(LEFT)), m, "a") is True

    def test_andseq_requires_eventive_conjuncts(self):
        with pytest.raises(WellFormednessError):
            AndSeq(Atom(WARM), Atom(BLOND))
        with pytest.raises(WellFormednessError):
            AndSeq(Atom(WON), Atom(TALL))


# ---------------------------------------------------------------------------
# Quantified forms
# ---------------------------------------------------------------------------


class TestEvaluate:
    def test_some_nonempty_intersection(self, full_registry):
        m = Model(["a", "b"], {"italian": ["a", "b"], "warm": ["b"]})
        assert evaluate(some(ITALIAN, Atom(WARM)), m, full_registry) is True

    def test_only_some_false_when_all_mate_true(self, full_registry):
        # hand check: every italian is warm, so the exhaustive reading fails
        m = Model(["a", "b"], {"italian": ["a", "b"], "warm": ["a", "b"]})
        assert evaluate(Only(some(ITALIAN, Atom(WARM))), m, full_registry) is False

    def test_only_some_true_on_proper_subset(self, full_registry):
        m = Model(["a", "b"], {"italian": ["a", "b"], "warm": ["a"]})
        assert evaluate(Only(some(ITALIAN, Atom(WARM))), m, full_registry) is True

    def test_all_with_conjunction_fails_on_nonblond(self, full_registry):
        m = Model(["a"], {"italian": ["a"], "warm": ["a"], "blond": []})
        lf = all_(ITALIAN, AndConc(Atom(WARM), Atom(BLOND)))
        assert evaluate(lf, m, full_registry) is False

    def test_most_is_strict_majority(self, full_registry):
        m = Model(["a", "b"], {"italian": ["a", "b"], "warm": ["a"]})
        assert evaluate(most(ITALIAN, Atom(WARM)), m, full_registry) is False
        m2 = Model(["a", "b", "c"], {"italian": ["a", "b", "c"], "warm": ["a", "b"]})
        assert evaluate(most(ITALIAN, Atom(WARM)), m2, full_registry) is True

    def test_no_means_empty_intersection(self, full_registry):
        m = Model(["a", "b"], {"italian": ["a"], "warm": ["b"]})
        assert evaluate(no(ITALIAN, Atom(WARM)), m, full_registry) is True

    def test_qi_is_existential(self, full_registry):
        m = Model(["a"], {"italian": ["a"], "warm": ["a"]})
        assert evaluate(Quant(QI, ITALIAN, Atom(WARM)), m, full_registry) is True

    def test_empty_restrictor_all_vacuously_true(self, full_registry):
        m = Model(["a"], {"italian": [], "warm": []})
        assert evaluate(all_(ITALIAN, Atom(WARM)), m, full_registry) is True

    def test_epistemic_node_rejected(self, full_registry):
        m = Model(["a"], {"italian": ["a"], "warm": ["a"]})
        with pytest.raises(EpistemicContextRequired):
            evaluate(Know(some(ITALIAN, Atom(WARM))), m, full_registry)

    def test_only_without_scale_rejected(self):
        m = Model(["a"], {"italian": ["a"], "warm": ["a"]})
        with pytest.raises(ScaleError):
            evaluate(Only(some(ITALIAN, Atom(WARM))), m, None)

    def test_classical_connectives(self, full_registry):
        m = Model(["a", "b"], {"italian": ["a", "b"], "warm": ["a"]})
        s, a = some(ITALIAN, Atom(WARM)), all_(ITALIAN, Atom(WARM))
        assert evaluate(NotLF(a), m, full_registry) is True
        assert evaluate(AndLF(s, NotLF(a)), m, full_registry) is True
        assert evaluate(OrLF((a, s)), m, full_registry) is True


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


class TestEnumerateModels:
    def test_count_two_preds_size_two(self):
        models = [m for m in enumerate_models((ITALIAN, WARM), 2) if len(m.universe) == 2]
        assert len(models) == 16  # 2^(2*2)

    def test_count_one_pred_sizes_zero_and_one(self):
        models = list(enumerate_models((ITALIAN,), 1))
        assert len(models) == 1 + 2

    def test_count_three_preds_size_four(self):
        models = [m for m in enumerate_models(ITALIAN_PREDS, 4) if len(m.universe) == 4]
        assert len(models) == 4096  # 2^(4*3)

    def test_budget_guard(self):
        preds = tuple(PredicateSym(f"p{i}") for i in range(5))
        with pytest.raises(ResourceBudgetError):
            list(enumerate_models(preds, 5))

    def test_deterministic_order(self):
        first = [m.extensions for m in enumerate_models((ITALIAN, WARM), 2)]
        second = [m.extensions for m in enumerate_models((ITALIAN, WARM), 2)]
        assert first == second

    def test_every_model_distinct(self):
        models = list(enumerate_models((ITALIAN, WARM), 2))
        assert len(set(models)) == len(models)

    def test_duplicate_predicate_names_rejected(self):
        with pytest.raises(WellFormednessError):
            list(enumerate_models((ITALIAN, PredicateSym("italian")), 2))


class TestModelConstruction:
    def test_extension_member_outside_universe(self):
        with pytest.raises(DeclarationError):
            Model(["a"], {"warm": ["z"]})

    def test_duplicate_universe_labels(self):
        with pytest.raises(WellFormednessError):
            Model(["a", "a"], {"warm": []})

    def test_extensions_materialize_as_frozensets(self):
        m = Model(["a", "b"], {"warm": ["b"], "blond": []})
        assert m.extensions == {"warm": frozenset({"b"}), "blond": frozenset()}
        assert m.predicates() == ("warm", "blond")


# ---------------------------------------------------------------------------
# Entailment and consistency
# ---------------------------------------------------------------------------


class TestEntails:
    def test_conjoined_scope_entails_single_conjunct(self):
        premise = some(ITALIAN, AndConc(Atom(WARM), Atom(BLOND)))
        conclusion = some(ITALIAN, Atom(WARM))
        assert entails([premise], conclusion, ITALIAN_PREDS, bound=4) is True

    def test_conjoined_scope_entails_indefinite(self):
        premise = some(ITALIAN, AndConc(Atom(WARM), Atom(BLOND)))
        conclusion = Quant(QI, ITALIAN, Atom(WARM))
        assert entails([premise], conclusion, ITALIAN_PREDS, bound=4) is True

    def test_some_does_not_entail_all(self):
        # countermodel first: the engine must agree with it
        counter = Model(["a", "b"], {"italian": ["a", "b"], "warm": ["a"]})
        assert evaluate(some(ITALIAN, Atom(WARM)), counter) is True
        assert evaluate(all_(ITALIAN, Atom(WARM)), counter) is False
        assert (
            entails([some(ITALIAN, Atom(WARM))], all_(ITALIAN, Atom(WARM)), (ITALIAN, WARM))
            is False
        )

    def test_epistemic_premise_rejected(self):
        with pytest.raises(EpistemicContextRequired):
            entails([Know(some(ITALIAN, Atom(WARM)))], some(ITALIAN, Atom(WARM)), (ITALIAN, WARM))

    def test_bad_bound_rejected(self):
        with pytest.raises(ValueError):
            entails([], some(ITALIAN, Atom(WARM)), (ITALIAN, WARM), bound=0)

    def test_budget_exceeded(self):
        preds = tuple(PredicateSym(f"p{i}") for i in range(7))
        with pytest.raises(ResourceBudgetError):
            entails([], some(preds[0], TRUE), preds, bound=4)

    def test_reflexive(self):
        forms = [
            some(ITALIAN, Atom(WARM)),
            all_(ITALIAN, AndConc(Atom(WARM), Atom(BLOND))),
            NotLF(most(ITALIAN, Atom(BLOND))),
        ]
        for lf in forms:
            assert entails([lf], lf, ITALIAN_PREDS) is True

    def test_transitive_on_pool(self):
        pool = [
            all_(ITALIAN, Atom(WARM)),
            most(ITALIAN, Atom(WARM)),
            some(ITALIAN, Atom(WARM)),
            no(ITALIAN, Atom(WARM)),
            NotLF(all_(ITALIAN, Atom(WARM))),
        ]
        preds = (ITALIAN, WARM)
        for x in pool:
            for y in pool:
                for z in pool:
                    if entails([x], y, preds) and entails([y], z, preds):
                        assert entails([x], z, preds)


class TestConsistent:
    def test_some_with_not_all(self):
        witness = Model(["a", "b"], {"italian": ["a", "b"], "warm": ["a"]})
        lfs = [some(ITALIAN, Atom(WARM)), NotLF(all_(ITALIAN, Atom(WARM)))]
        assert all(evaluate(lf, witness) for lf in lfs)
        assert consistent(lfs, (ITALIAN, WARM)) is True

    def test_all_nonempty_refutes_not_some(self):
        lfs = [
            all_(ITALIAN, Atom(WARM)),
            NotLF(some(ITALIAN, Atom(WARM))),
            some(ITALIAN, TRUE),
        ]
        assert consistent(lfs, (ITALIAN, WARM)) is False

    def test_not_all_conjoined_compatible_with_all_warm(self):
        # the negated conjoined universal lives happily with a warm-only universal
        lfs = [
            NotLF(all_(ITALIAN, AndConc(Atom(WARM), Atom(BLOND)))),
            all_(ITALIAN, Atom(WARM)),
        ]
        assert consistent(lfs, ITALIAN_PREDS) is True

    def test_cross_check_against_entails(self):
        # the set is unsatisfiable iff, for every choice of member, the rest
        # refute it; one refutation suffices and unsatisfiability forces all
        pool = [
            some(ITALIAN, Atom(WARM)),
            NotLF(all_(ITALIAN, Atom(WARM))),
            all_(ITALIAN, Atom(WARM)),
            no(ITALIAN, Atom(BLOND)),
            some(ITALIAN, AndConc(Atom(WARM), Atom(BLOND))),
        ]
        import itertools

        for lfs in itertools.combinations(pool, 3):
            sat = consistent(list(lfs), ITALIAN_PREDS)
            refutations = [
                entails(
                    [lf for j, lf in enumerate(lfs) if j != i],
                    NotLF(lfs[i]),
                    ITALIAN_PREDS,
                )
                for i in range(len(lfs))
            ]
            assert (not sat) == all(refutations)
            assert (not sat) == any(refutations)


# ---------------------------------------------------------------------------
# Quantifier properties
# ---------------------------------------------------------------------------


def _sets(m: Model) -> tuple[frozenset, frozenset]:
    return m.extension("italian"), m.extension("warm")


def _oracle(q, a: frozenset, b: frozenset) -> bool:
    if q is SOME or q is QI:
        return len(a & b) >= 1
    if q is ALL:
        return a <= b
    if q is MOST:
        return len(a & b) > len(a - b)
    if q is NO:
        return not (a & b)
    raise AssertionError(q)


class TestQuantifierProperties:
    def test_conservativity_exhaustive(self):
        # q(A)(B) <=> q(A)(A and B) on every model up to size 4, exactly
        preds = (ITALIAN, WARM)
        scope_b = Atom(WARM)
        scope_ab = AndConc(Atom(ITALIAN), Atom(WARM))
        for q in (SOME, ALL, MOST, NO):
            for m in enumerate_models(preds, 4):
                left = evaluate(Quant(q, ITALIAN, scope_b), m)
                right = evaluate(Quant(q, ITALIAN, scope_ab), m)
                assert left == right, (q, m)

    def test_quantifiers_match_set_oracle(self):
        for q in (SOME, ALL, MOST, NO, QI):
            for m in enumerate_models((ITALIAN, WARM), 3):
                a, b = _sets(m)
                assert evaluate(Quant(q, ITALIAN, Atom(WARM)), m) == _oracle(q, a, b)

    def test_some_conjunction_is_intersection(self):
        # some(A)(B' and B'') is the nonemptiness of the triple intersection
        lf = some(ITALIAN, AndConc(Atom(WARM), Atom(BLOND)))
        for m in enumerate_models(ITALIAN_PREDS, 4):
            expected = bool(
                m.extension("italian") & m.extension("warm") & m.extension("blond")
            )
            assert evaluate(lf, m) == expected

    def test_conc_commutes_everywhere(self):
        left = some(ITALIAN, AndConc(Atom(WARM), Atom(BLOND)))
        right = some(ITALIAN, AndConc(Atom(BLOND), Atom(WARM)))
        for m in enumerate_models(ITALIAN_PREDS, 3):
            assert evaluate(left, m) == evaluate(right, m)

    def test_seq_non_intersective_regardless_of_order(self):
        assert is_intersective_conjunction(AndSeq(Atom(WON), Atom(LEFT))) is False
        assert is_intersective_conjunction(AndSeq(Atom(LEFT), Atom(WON))) is False
        assert is_intersective_conjunction(AndConc(Atom(WARM), Atom(BLOND))) is True
        assert is_intersective_conjunction(Atom(WARM)) is True
        assert (
            is_intersective_conjunction(AndConc(Atom(WON), AndSeq(Atom(WON), Atom(LEFT))))
            is False
        )

    def test_scale_monotonicity_on_nonempty_restrictors(self):
        preds = (ITALIAN, WARM)
        exists = some(ITALIAN, TRUE)
        assert entails([all_(ITALIAN, Atom(WARM)), exists], most(ITALIAN, Atom(WARM)), preds)
        assert entails([most(ITALIAN, Atom(WARM))], some(ITALIAN, Atom(WARM)), preds)


# ---------------------------------------------------------------------------
# Indefinite-number expansion
# ---------------------------------------------------------------------------


class TestExpandQi:
    def test_three_member_scale(self, full_registry):
        expansion = expand_qi(ITALIAN, Atom(WARM), full_registry.scales[0])
        assert render_lf(expansion) == (
            "(or (all italian warm) (most italian warm) (some italian warm))"
        )

    def test_two_member_scale(self, short_registry):
        expansion = expand_qi(ITALIAN, Atom(WARM), short_registry.scales[0])
        assert render_lf(expansion) == "(or (all italian warm) (some italian warm))"

    def test_expansion_entailed_by_conjoined_some(self, full_registry):
        premise = some(ITALIAN, AndConc(Atom(WARM), Atom(BLOND)))
        expansion = expand_qi(ITALIAN, Atom(WARM), full_registry.scales[0])
        assert entails([premise], expansion, ITALIAN_PREDS, bound=4) is True

    def test_scale_without_some_rejected(self):
        from felicity import Scale

        scale = Scale((MOST, ALL))
        with pytest.raises(ScaleError):
            expand_qi(ITALIAN, Atom(WARM), scale)


class TestScales:
    def test_default_order_verified(self, full_registry):
        scale = full_registry.scales[0]
        assert scale.members == (SOME, MOST, ALL)
        assert scale.stronger_mates(SOME) == (MOST, ALL)
        assert scale.stronger_mates(ALL) == ()

    def test_unordered_scale_rejected(self):
        from felicity import Scale

        with pytest.raises(ScaleError):
            Scale((ALL, SOME))  # wrong direction
        with pytest.raises(ScaleError):
            Scale((SOME, QI))  # equivalent members, not strictly ordered
        with pytest.raises(ScaleError):
            Scale(())

    def test_duplicate_members_rejected(self):
        from felicity import Scale

        with pytest.raises(ScaleError):
            Scale((SOME, SOME, ALL))

    def test_only_on_quantifier_outside_every_scale(self, full_registry):
        m = Model(["a"], {"italian": ["a"], "warm": []})
        with pytest.raises(ScaleError):
            evaluate(Only(no(ITALIAN, Atom(WARM))), m, full_registry)

    def test_complexity_ranks_gate_substitution_and_expansion(self):
        from felicity import Scale, substitution_alternatives, ScaleRegistry

        # a costlier strong member is never substituted in for a cheap one
        lopsided = Scale((SOME, ALL), ranks=(1, 2))
        assert lopsided.mates_at_most_as_complex(SOME) == ()
        assert lopsided.mates_at_most_as_complex(ALL) == (SOME,)
        registry = ScaleRegistry((lopsided,))
        alts = substitution_alternatives(some(ITALIAN, Atom(WARM)), registry)
        assert alts.members == ()
        expansion = expand_qi(ITALIAN, Atom(WARM), lopsided)
        assert render_lf(expansion) == "(or (some italian warm))"
