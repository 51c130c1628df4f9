"""Reading analysis and the five oddness predictors.

Every predictor returns a verdict plus a trace of replayable derivation
steps: each step names a rule, the rendered forms it consumed, and the
rendered result. ``replay_step`` re-executes any recorded step against the
same context, so a trace can be audited mechanically.

Sentences whose top node conjoins two quantified clauses are routed through
each predictor one clause at a time; the sentence is odd if any clause
trips the predictor.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .alternatives import (
    AlternativeSet,
    Presup,
    PresupVariant,
    PresuppositionUndefinedError,
    disjunction_ignorance,
    exh,
    presup_strictly_stronger,
    presupposition,
    prune_settled,
    substitution_alternatives,
)
from .context import (
    ContextState,
    Verdict,
    contextually_entails,
    continuation_felicity,
    k_holds,
)
from .dsl import Scenario, THEORY_NAMES, parse_lf, parse_pexpr, render_lf, render_pexpr
from .logic import (
    AndConc,
    AndLF,
    FelicityError,
    Know,
    LogicalForm,
    NotLF,
    Only,
    OrLF,
    Poss,
    Quant,
    SOME,
    consistent,
    entails,
    entails_with_existential_import,
    expand_qi,
    is_intersective_conjunction,
)

(
    THEORY_MAGRI_BLIND,
    THEORY_PRESUPPOSED_IGNORANCE,
    THEORY_LOGICAL_INTEGRITY,
    THEORY_DEL_PINAL,
    THEORY_INDIRECT,
) = THEORY_NAMES


class Reading(Enum):
    CONCURRENT_COLLECTIVE = "concurrent-collective"
    SEQUENCED_SPLIT = "sequenced-split"
    DISTRIBUTIVE_SENTENTIAL = "distributive-sentential"
    SIMPLE = "simple"


class Mechanism(Enum):
    MISMATCHING_SI = "mismatching-SI"
    DIRECT_CONTEXTUAL_CONTRADICTION = "direct-contextual-contradiction"
    PRESUPPOSED_IGNORANCE = "presupposed-ignorance"
    LOGICAL_INTEGRITY = "logical-integrity"
    PRESUPPOSITION_UPDATE_CLASH = "presupposition-update-clash"
    INDIRECT_CONTEXTUAL_CONTRADICTION = "indirect-contextual-contradiction"
    NONE = "none"


@dataclass(frozen=True)
class TraceStep:
    rule: str
    inputs: tuple[str, ...]
    output: str


@dataclass(frozen=True)
class TheoryVerdict:
    theory: str
    verdict: Verdict
    mechanism: Mechanism
    trace: tuple[TraceStep, ...]

    def __post_init__(self):
        if (self.verdict is Verdict.ODD) != (self.mechanism is not Mechanism.NONE):
            raise ValueError("a verdict is odd exactly when a mechanism fired")

    @property
    def fired(self) -> bool:
        return self.mechanism is not Mechanism.NONE


@dataclass(frozen=True)
class Judgment:
    reading: Reading
    theories: tuple[TheoryVerdict, ...]
    aggregate: Verdict
    continuations: tuple[tuple[LogicalForm, Verdict], ...] = ()


# ---------------------------------------------------------------------------
# Reading analysis
# ---------------------------------------------------------------------------


def _clause_like(lf: LogicalForm) -> bool:
    return isinstance(lf, Quant) or isinstance(lf, Only)


def _clauses(lf: LogicalForm) -> tuple[LogicalForm, ...]:
    if isinstance(lf, AndLF) and _clause_like(lf.left) and _clause_like(lf.right):
        return (lf.left, lf.right)
    return (lf,)


def _scopes(lf: LogicalForm):
    if isinstance(lf, Quant):
        yield lf.scope
    elif isinstance(lf, (Only, NotLF, Know, Poss)):
        yield from _scopes(lf.body)
    elif isinstance(lf, AndLF):
        yield from _scopes(lf.left)
        yield from _scopes(lf.right)
    elif isinstance(lf, OrLF):
        for d in lf.disjuncts:
            yield from _scopes(d)


def analyze_reading(lf: LogicalForm) -> Reading:
    """Which situation reading the form supports.

    A top-level conjunction of two quantified clauses is distributive. A
    sequenced conjunction anywhere in a scope defeats concurrency, so it
    dominates a concurrent conjunction elsewhere.
    """
    if isinstance(lf, AndLF) and _clause_like(lf.left) and _clause_like(lf.right):
        return Reading.DISTRIBUTIVE_SENTENTIAL
    scopes = list(_scopes(lf))
    if any(not is_intersective_conjunction(s) for s in scopes):
        return Reading.SEQUENCED_SPLIT
    if any(_contains_conc(s) for s in scopes):
        return Reading.CONCURRENT_COLLECTIVE
    return Reading.SIMPLE


def _contains_conc(p) -> bool:
    if isinstance(p, AndConc):
        return True
    if hasattr(p, "body"):
        return _contains_conc(p.body)
    if hasattr(p, "left"):
        return _contains_conc(p.left) or _contains_conc(p.right)
    return False


# ---------------------------------------------------------------------------
# Trace helpers
# ---------------------------------------------------------------------------


def _fmt_alts(alts: AlternativeSet) -> str:
    if not alts.members:
        return "(none)"
    return "; ".join(f"{alt.tag.value} {render_lf(alt.form)}" for alt in alts.members)


def _fmt_forms(forms) -> str:
    rendered = [render_lf(f) for f in forms]
    return "; ".join(rendered) if rendered else "(none)"


# ---------------------------------------------------------------------------
# Predictors
# ---------------------------------------------------------------------------


def predict_magri_blind(lf: LogicalForm, ctx: ContextState) -> TheoryVerdict:
    """Blind mandatory implicature: strengthen first, look at the world later.

    Alternatives are pruned against the discourse record only, the
    strengthening itself never sees any context, and the verdict is a clash
    between the strengthened meaning and background common knowledge. An
    overt 'only' already carries the exhaustive meaning truth-conditionally,
    so there the clash is a direct contextual contradiction.
    """
    trace: list[TraceStep] = []
    mechanism = Mechanism.NONE
    for clause in _traced_clauses(lf, trace):
        if isinstance(clause, Only):
            ok = consistent(
                ctx.common_knowledge + (clause,), ctx.preds, ctx.bound, ctx.scales
            )
            trace.append(
                TraceStep(
                    "ck-consistency",
                    (render_lf(clause),),
                    "consistent" if ok else "inconsistent",
                )
            )
            if not ok and mechanism is Mechanism.NONE:
                mechanism = Mechanism.DIRECT_CONTEXTUAL_CONTRADICTION
            continue
        rendered = render_lf(clause)
        alts = substitution_alternatives(clause, ctx.scales, ctx.bound)
        trace.append(TraceStep("alternatives", (rendered,), _fmt_alts(alts)))
        pruned = prune_settled(alts, ctx)
        trace.append(TraceStep("prune-settled", (rendered,), _fmt_alts(pruned)))
        strengthened = exh(clause, pruned, ctx.bound, ctx.scales)
        trace.append(TraceStep("exh", (rendered,), render_lf(strengthened)))
        ok = consistent(
            ctx.common_knowledge + (strengthened,), ctx.preds, ctx.bound, ctx.scales
        )
        trace.append(
            TraceStep(
                "ck-consistency",
                (render_lf(strengthened),),
                "consistent" if ok else "inconsistent",
            )
        )
        if not ok and mechanism is Mechanism.NONE:
            mechanism = Mechanism.MISMATCHING_SI
    return _verdict(THEORY_MAGRI_BLIND, mechanism, trace)


def predict_presupposed_ignorance(lf: LogicalForm, ctx: ContextState) -> TheoryVerdict:
    """Infelicity from an alternative whose strictly stronger presupposition
    is already contextually established.

    Comparison is always against the weak presupposition of the assertion;
    alternatives without a presupposition rule are skipped.
    """
    trace: list[TraceStep] = []
    mechanism = Mechanism.NONE
    for clause in _traced_clauses(lf, trace):
        rendered = render_lf(clause)
        try:
            own = presupposition(clause, PresupVariant.WEAK)
        except PresuppositionUndefinedError:
            trace.append(TraceStep("presupposition", (rendered, "weak"), "undefined"))
            continue
        trace.append(
            TraceStep("presupposition", (rendered, "weak"), render_lf(own.content))
        )
        alts = substitution_alternatives(clause, ctx.scales, ctx.bound)
        trace.append(TraceStep("alternatives", (rendered,), _fmt_alts(alts)))
        for m in alts.forms():
            try:
                alt_presup = presupposition(m, PresupVariant.WEAK)
            except PresuppositionUndefinedError:
                trace.append(
                    TraceStep("presupposition", (render_lf(m), "weak"), "undefined")
                )
                continue
            trace.append(
                TraceStep(
                    "presupposition", (render_lf(m), "weak"), render_lf(alt_presup.content)
                )
            )
            stronger = presup_strictly_stronger(
                alt_presup, own, ctx.preds, ctx.bound, ctx.scales
            )
            trace.append(
                TraceStep(
                    "presup-strength",
                    (render_lf(alt_presup.content), render_lf(own.content)),
                    "strictly-stronger" if stronger else "not-stronger",
                )
            )
            if not stronger:
                continue
            established = contextually_entails(ctx, alt_presup.content)
            trace.append(
                TraceStep(
                    "contextual-entailment",
                    (render_lf(alt_presup.content),),
                    "entailed" if established else "not-entailed",
                )
            )
            if established and mechanism is Mechanism.NONE:
                mechanism = Mechanism.PRESUPPOSED_IGNORANCE
    return _verdict(THEORY_PRESUPPOSED_IGNORANCE, mechanism, trace)


def predict_logical_integrity(lf: LogicalForm, ctx: ContextState) -> TheoryVerdict:
    """Infelicity when the sentence contextually but not logically entails
    one of its alternatives.

    Logical entailment is taken with existential import on the restrictors;
    without it every universal clause would spuriously fail to entail its
    weaker mates through the empty-restrictor loophole. The contextual side
    checks the context hypothetically updated with the sentence itself.
    """
    trace: list[TraceStep] = []
    mechanism = Mechanism.NONE
    for clause in _traced_clauses(lf, trace):
        rendered = render_lf(clause)
        alts = substitution_alternatives(clause, ctx.scales, ctx.bound)
        trace.append(TraceStep("alternatives", (rendered,), _fmt_alts(alts)))
        for m in alts.forms():
            logical = entails_with_existential_import(
                [clause], m, ctx.preds, ctx.bound, ctx.scales
            )
            trace.append(
                TraceStep(
                    "logical-entailment",
                    (rendered, render_lf(m)),
                    "entailed" if logical else "not-entailed",
                )
            )
            if logical:
                continue
            contextual = entails(
                ctx.facts + (clause,), m, ctx.preds, ctx.bound, ctx.scales
            )
            trace.append(
                TraceStep(
                    "hypothetical-entailment",
                    (rendered, render_lf(m)),
                    "entailed" if contextual else "not-entailed",
                )
            )
            if contextual and mechanism is Mechanism.NONE:
                mechanism = Mechanism.LOGICAL_INTEGRITY
    return _verdict(THEORY_LOGICAL_INTEGRITY, mechanism, trace)


def predict_del_pinal(lf: LogicalForm, ctx: ContextState) -> TheoryVerdict:
    """Infelicity when updating the common ground with the exhaustified
    presupposition cannot be reconciled with the assertion.

    The sentence must itself be assertable (consistent with common
    knowledge); oddness is the joint update failing. When the exhaustified
    presupposition contains the assertion, joint failure degenerates to a
    presupposition-versus-common-ground clash, which is reported under the
    same mechanism.
    """
    trace: list[TraceStep] = []
    mechanism = Mechanism.NONE
    for clause in _traced_clauses(lf, trace):
        rendered = render_lf(clause)
        try:
            p = presupposition(clause, PresupVariant.EXHAUSTIFIED)
        except PresuppositionUndefinedError:
            trace.append(
                TraceStep("presupposition", (rendered, "exhaustified"), "undefined")
            )
            continue
        trace.append(
            TraceStep("presupposition", (rendered, "exhaustified"), render_lf(p.content))
        )
        assertable = consistent(
            ctx.common_knowledge + (clause,), ctx.preds, ctx.bound, ctx.scales
        )
        trace.append(
            TraceStep(
                "assertion-consistency",
                (rendered,),
                "consistent" if assertable else "inconsistent",
            )
        )
        joint = consistent(
            ctx.common_knowledge + (p.content, clause), ctx.preds, ctx.bound, ctx.scales
        )
        trace.append(
            TraceStep(
                "presupposition-update",
                (render_lf(p.content), rendered),
                "consistent" if joint else "inconsistent",
            )
        )
        if assertable and not joint and mechanism is Mechanism.NONE:
            mechanism = Mechanism.PRESUPPOSITION_UPDATE_CLASH
    return _verdict(THEORY_DEL_PINAL, mechanism, trace)


def predict_indirect_contradiction(
    lf: LogicalForm, ctx: ContextState, check_all_disjuncts: bool = True
) -> TheoryVerdict:
    """The concurrent-conjunction mechanism: an ignorance implicature drawn
    from an entailed scale-mate disjunction clashes with what the context
    makes certain.

    Hard reading gate: only a some-clause over a concurrent conjunction
    qualifies. For each conjunct branch, the clause entails the disjunction
    of scale-mate clauses over that branch alone; asserting only the weak
    clause therefore signals ignorance about the undecided disjuncts, and
    the sentence is odd if the context is in fact certain about one of
    them. With ``check_all_disjuncts`` false only the strongest surviving
    disjunct is clash-checked.
    """
    trace: list[TraceStep] = []
    mechanism = Mechanism.NONE
    for clause in _traced_clauses(lf, trace):
        prejacent = clause.body if isinstance(clause, Only) else clause
        reading = analyze_reading(clause)
        scale = ctx.scales.scale_for(SOME)
        gate_ok = (
            reading is Reading.CONCURRENT_COLLECTIVE
            and isinstance(prejacent, Quant)
            and prejacent.quantifier is SOME
            and isinstance(prejacent.scope, AndConc)
            and scale is not None
        )
        trace.append(
            TraceStep(
                "reading-gate",
                (render_lf(clause),),
                f"{reading.value}: proceed"
                if gate_ok
                else f"{reading.value}: predictor skipped",
            )
        )
        if not gate_ok:
            continue
        for branch in (prejacent.scope.left, prejacent.scope.right):
            expansion = expand_qi(prejacent.restrictor, branch, scale)
            trace.append(
                TraceStep(
                    "qi-expansion",
                    (prejacent.restrictor.name, render_pexpr(branch)),
                    render_lf(expansion),
                )
            )
            licensed = entails(
                [prejacent], expansion, ctx.preds, ctx.bound, ctx.scales
            )
            trace.append(
                TraceStep(
                    "expansion-licensed",
                    (render_lf(prejacent), render_lf(expansion)),
                    "entailed" if licensed else "not-entailed",
                )
            )
            if not licensed:
                continue
            ignorance = disjunction_ignorance(expansion, ctx)
            trace.append(
                TraceStep("ignorance", (render_lf(expansion),), _fmt_forms(ignorance))
            )
            targets = [i.body.body for i in ignorance]
            if not check_all_disjuncts:
                targets = targets[:1]
            for d in targets:
                clash = k_holds(ctx, d)
                trace.append(
                    TraceStep(
                        "clash-check",
                        (render_lf(d),),
                        "certain in context: contradiction"
                        if clash
                        else "not certain: no clash",
                    )
                )
                if clash and mechanism is Mechanism.NONE:
                    mechanism = Mechanism.INDIRECT_CONTEXTUAL_CONTRADICTION
    return _verdict(THEORY_INDIRECT, mechanism, trace)


def _traced_clauses(lf: LogicalForm, trace: list[TraceStep]) -> tuple[LogicalForm, ...]:
    clauses = _clauses(lf)
    if len(clauses) > 1:
        trace.append(
            TraceStep("distributive-split", (render_lf(lf),), _fmt_forms(clauses))
        )
    return clauses


def _verdict(theory: str, mechanism: Mechanism, trace: list[TraceStep]) -> TheoryVerdict:
    verdict = Verdict.ODD if mechanism is not Mechanism.NONE else Verdict.FELICITOUS
    return TheoryVerdict(theory, verdict, mechanism, tuple(trace))


_PREDICTORS = {
    THEORY_MAGRI_BLIND: predict_magri_blind,
    THEORY_PRESUPPOSED_IGNORANCE: predict_presupposed_ignorance,
    THEORY_LOGICAL_INTEGRITY: predict_logical_integrity,
    THEORY_DEL_PINAL: predict_del_pinal,
    THEORY_INDIRECT: predict_indirect_contradiction,
}


# ---------------------------------------------------------------------------
# Orchestration
# ---------------------------------------------------------------------------


def judge(scenario: Scenario, check_all_disjuncts: bool = True) -> Judgment:
    """Run every enabled predictor on the scenario target.

    The aggregate is odd iff at least one enabled theory fires. Continuation
    verdicts are computed against the context updated with the target.
    """
    ctx = ContextState(
        common_knowledge=scenario.common_knowledge,
        discourse=scenario.discourse,
        preds=scenario.preds,
        bound=scenario.max_universe,
        scales=scenario.scales,
    )
    reading = analyze_reading(scenario.target)
    unknown = [n for n in scenario.enabled_theories if n not in _PREDICTORS]
    if unknown:
        raise FelicityError(f"unknown theories {unknown}; pick from {THEORY_NAMES}")
    verdicts = []
    for name in scenario.enabled_theories:
        if name == THEORY_INDIRECT:
            verdicts.append(
                predict_indirect_contradiction(scenario.target, ctx, check_all_disjuncts)
            )
        else:
            verdicts.append(_PREDICTORS[name](scenario.target, ctx))
    aggregate = (
        Verdict.ODD if any(v.fired for v in verdicts) else Verdict.FELICITOUS
    )
    continuations = tuple(
        (c, continuation_felicity(ctx, scenario.target, c))
        for c in scenario.continuations
    )
    return Judgment(
        reading=reading,
        theories=tuple(verdicts),
        aggregate=aggregate,
        continuations=continuations,
    )


# ---------------------------------------------------------------------------
# Trace replay
# ---------------------------------------------------------------------------


def replay_step(step: TraceStep, ctx: ContextState) -> str:
    """Recompute a recorded trace step against the same context.

    Returns the output the rule produces for the recorded inputs; trace
    integrity means this equals ``step.output`` for every recorded step.
    """
    preds = {p.name: p for p in ctx.preds}

    def lf(text: str) -> LogicalForm:
        return parse_lf(text, preds)

    rule = step.rule
    if rule == "distributive-split":
        return _fmt_forms(_clauses(lf(step.inputs[0])))
    if rule == "alternatives":
        return _fmt_alts(substitution_alternatives(lf(step.inputs[0]), ctx.scales, ctx.bound))
    if rule == "prune-settled":
        alts = substitution_alternatives(lf(step.inputs[0]), ctx.scales, ctx.bound)
        return _fmt_alts(prune_settled(alts, ctx))
    if rule == "exh":
        alts = prune_settled(
            substitution_alternatives(lf(step.inputs[0]), ctx.scales, ctx.bound), ctx
        )
        return render_lf(exh(lf(step.inputs[0]), alts, ctx.bound, ctx.scales))
    if rule == "ck-consistency":
        ok = consistent(
            ctx.common_knowledge + (lf(step.inputs[0]),), ctx.preds, ctx.bound, ctx.scales
        )
        return "consistent" if ok else "inconsistent"
    if rule == "presupposition":
        try:
            p = presupposition(lf(step.inputs[0]), PresupVariant(step.inputs[1]))
        except PresuppositionUndefinedError:
            return "undefined"
        return render_lf(p.content)
    if rule == "presup-strength":
        p1 = Presup(lf(step.inputs[0]), PresupVariant.WEAK)
        p2 = Presup(lf(step.inputs[1]), PresupVariant.WEAK)
        stronger = presup_strictly_stronger(p1, p2, ctx.preds, ctx.bound, ctx.scales)
        return "strictly-stronger" if stronger else "not-stronger"
    if rule == "contextual-entailment":
        ok = contextually_entails(ctx, lf(step.inputs[0]))
        return "entailed" if ok else "not-entailed"
    if rule == "logical-entailment":
        ok = entails_with_existential_import(
            [lf(step.inputs[0])], lf(step.inputs[1]), ctx.preds, ctx.bound, ctx.scales
        )
        return "entailed" if ok else "not-entailed"
    if rule == "hypothetical-entailment":
        ok = entails(
            ctx.facts + (lf(step.inputs[0]),), lf(step.inputs[1]),
            ctx.preds, ctx.bound, ctx.scales,
        )
        return "entailed" if ok else "not-entailed"
    if rule == "assertion-consistency":
        ok = consistent(
            ctx.common_knowledge + (lf(step.inputs[0]),), ctx.preds, ctx.bound, ctx.scales
        )
        return "consistent" if ok else "inconsistent"
    if rule == "presupposition-update":
        ok = consistent(
            ctx.common_knowledge + (lf(step.inputs[0]), lf(step.inputs[1])),
            ctx.preds, ctx.bound, ctx.scales,
        )
        return "consistent" if ok else "inconsistent"
    if rule == "reading-gate":
        clause = lf(step.inputs[0])
        prejacent = clause.body if isinstance(clause, Only) else clause
        reading = analyze_reading(clause)
        gate_ok = (
            reading is Reading.CONCURRENT_COLLECTIVE
            and isinstance(prejacent, Quant)
            and prejacent.quantifier is SOME
            and isinstance(prejacent.scope, AndConc)
            and ctx.scales.scale_for(SOME) is not None
        )
        return f"{reading.value}: proceed" if gate_ok else f"{reading.value}: predictor skipped"
    if rule == "qi-expansion":
        restrictor = preds[step.inputs[0]]
        branch = parse_pexpr(step.inputs[1], preds)
        scale = ctx.scales.scale_for(SOME)
        return render_lf(expand_qi(restrictor, branch, scale))
    if rule == "expansion-licensed":
        ok = entails(
            [lf(step.inputs[0])], lf(step.inputs[1]), ctx.preds, ctx.bound, ctx.scales
        )
        return "entailed" if ok else "not-entailed"
    if rule == "ignorance":
        disj = lf(step.inputs[0])
        return _fmt_forms(disjunction_ignorance(disj, ctx))
    if rule == "clash-check":
        clash = k_holds(ctx, lf(step.inputs[0]))
        return "certain in context: contradiction" if clash else "not certain: no clash"
    raise ValueError(f"unknown trace rule {rule!r}")
