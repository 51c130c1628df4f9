"""Two-tier conversational context and epistemic evaluation.

Background common knowledge and the explicit discourse record are kept
apart on purpose: implicature computation is blind to the former but
sensitive to the latter. Everything that must ignore common knowledge
(relevance pruning, settledness) reads only the discourse tier, while
certainty/possibility and contextual entailment quantify over the worlds
compatible with both tiers.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache

from .logic import (
    DEFAULT_BOUND,
    FelicityError,
    LogicalForm,
    Model,
    NotLF,
    PredicateSym,
    Quant,
    SOME,
    TRUE,
    consistent,
    entails,
    enumerate_models,
    evaluate,
    is_epistemic_free,
    lf_restrictors,
)
from .scales import ScaleRegistry, default_registry


class Verdict(Enum):
    FELICITOUS = "felicitous"
    ODD = "odd"


class InconsistentContextError(FelicityError):
    """Common knowledge plus discourse admit no world at the bound."""


class UpdateContradictionError(FelicityError):
    """A discourse update contradicts the context it extends."""

    def __init__(self, lf: LogicalForm):
        super().__init__(f"discourse update contradicts the context: {lf!r}")
        self.lf = lf


class UnsupportedNestingError(FelicityError):
    """Certainty/possibility queries take epistemic-free forms only."""


WorldSet = tuple[Model, ...]


@dataclass(frozen=True)
class ContextState:
    """Immutable context: updates return fresh states.

    ``common_knowledge`` is the background tier, invisible to
    exhaustification and settledness; ``discourse`` is the ordered record
    of explicit utterances. Their union must be consistent at the bound.
    """

    common_knowledge: tuple[LogicalForm, ...] = ()
    discourse: tuple[LogicalForm, ...] = ()
    preds: tuple[PredicateSym, ...] = ()
    bound: int = DEFAULT_BOUND
    scales: ScaleRegistry = field(default_factory=default_registry)

    def __post_init__(self):
        object.__setattr__(self, "common_knowledge", tuple(self.common_knowledge))
        object.__setattr__(self, "discourse", tuple(self.discourse))
        object.__setattr__(self, "preds", tuple(self.preds))
        for lf in self.common_knowledge + self.discourse:
            if not is_epistemic_free(lf):
                raise UnsupportedNestingError(
                    f"context content must be epistemic-free: {lf!r}"
                )
        if not consistent(
            self.common_knowledge + self.discourse, self.preds, self.bound, self.scales
        ):
            raise InconsistentContextError(
                "common knowledge and discourse admit no world at the bound"
            )

    @property
    def facts(self) -> tuple[LogicalForm, ...]:
        return self.common_knowledge + self.discourse


def _require_plain(lf: LogicalForm):
    if not is_epistemic_free(lf):
        raise UnsupportedNestingError(f"nested epistemic operators unsupported: {lf!r}")


@lru_cache(maxsize=2048)
def _worlds(ctx: ContextState) -> WorldSet:
    return tuple(
        m
        for m in enumerate_models(ctx.preds, ctx.bound)
        if all(evaluate(lf, m, ctx.scales) for lf in ctx.facts)
    )


def worlds(ctx: ContextState) -> WorldSet:
    """All models of size <= bound satisfying both context tiers.

    Nonempty by the context consistency invariant; enumeration order is
    canonical, so the result is deterministic.
    """
    return _worlds(ctx)


def k_holds(ctx: ContextState, lf: LogicalForm) -> bool:
    """Certainty: lf is true in every world compatible with the context."""
    _require_plain(lf)
    return entails(ctx.facts, lf, ctx.preds, ctx.bound, ctx.scales)


def p_holds(ctx: ContextState, lf: LogicalForm) -> bool:
    """Possibility: lf is true in at least one compatible world."""
    _require_plain(lf)
    return consistent(ctx.facts + (lf,), ctx.preds, ctx.bound, ctx.scales)


def contextually_entails(ctx: ContextState, lf: LogicalForm) -> bool:
    """lf holds in every world of the context (both tiers consulted)."""
    _require_plain(lf)
    return entails(ctx.facts, lf, ctx.preds, ctx.bound, ctx.scales)


def _discourse_premises(ctx: ContextState) -> tuple[LogicalForm, ...]:
    # An utterance carries existential import for its own restrictors;
    # without it, "no(A)(B)" would fail to settle "all(A)(B)" negatively
    # through the empty-restrictor loophole.
    extra: list[LogicalForm] = []
    seen: set[str] = set()
    for fact in ctx.discourse:
        for r in lf_restrictors(fact):
            if r.name not in seen:
                seen.add(r.name)
                extra.append(Quant(SOME, r, TRUE))
    return ctx.discourse + tuple(extra)


def settled_by_discourse(ctx: ContextState, lf: LogicalForm) -> bool:
    """The discourse record alone decides lf, positively or negatively.

    Common knowledge is deliberately not consulted: this is the relevance
    test, and it must stay blind to the background tier.
    """
    _require_plain(lf)
    premises = _discourse_premises(ctx)
    return entails(premises, lf, ctx.preds, ctx.bound, ctx.scales) or entails(
        premises, NotLF(lf), ctx.preds, ctx.bound, ctx.scales
    )


def update_discourse(ctx: ContextState, lf: LogicalForm) -> ContextState:
    """Append lf to the discourse record; the original state is unchanged."""
    _require_plain(lf)
    if not consistent(ctx.facts + (lf,), ctx.preds, ctx.bound, ctx.scales):
        raise UpdateContradictionError(lf)
    return replace(ctx, discourse=ctx.discourse + (lf,))


def continuation_felicity(
    ctx: ContextState, prior: LogicalForm, continuation: LogicalForm
) -> Verdict:
    """Whether the continuation can follow the prior utterance in context.

    The prior is added to the discourse first; the continuation is then
    felicitous iff its own update goes through, and odd iff the update
    contradicts.
    """
    base = update_discourse(ctx, prior)
    try:
        update_discourse(base, continuation)
    except UpdateContradictionError:
        return Verdict.ODD
    return Verdict.FELICITOUS
