"""Horn scales: quantifier inventories ordered from weakest to strongest.

A scale is only well-formed if its members are strictly ordered by logical
strength on nonempty restrictors; construction verifies this by bounded
entailment so that a bad declaration fails immediately rather than producing
silently wrong alternatives.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .logic import (
    DEFAULT_BOUND,
    Atom,
    PredicateSym,
    Quant,
    Quantifier,
    ScaleError,
    SOME,
    MOST,
    ALL,
    entails_with_existential_import,
)

_CHECK_A = PredicateSym("_scale_check_a")
_CHECK_B = PredicateSym("_scale_check_b")
_CHECK_PREDS = (_CHECK_A, _CHECK_B)


@dataclass(frozen=True)
class Scale:
    members: tuple[Quantifier, ...]
    ranks: tuple[int, ...] = ()

    def __post_init__(self):
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        if not members:
            raise ScaleError("a scale needs at least one member")
        if len(set(members)) != len(members):
            raise ScaleError(f"duplicate members in scale {members}")
        ranks = tuple(self.ranks) or tuple(q.complexity_rank for q in members)
        if len(ranks) != len(members):
            raise ScaleError("one complexity rank per scale member required")
        object.__setattr__(self, "ranks", ranks)
        self._verify_strength_order()

    def _verify_strength_order(self):
        # Strictness of consecutive pairs gives strictness of the whole
        # chain by transitivity of bounded entailment.
        for weaker, stronger in zip(self.members, self.members[1:]):
            weak_clause = Quant(weaker, _CHECK_A, Atom(_CHECK_B))
            strong_clause = Quant(stronger, _CHECK_A, Atom(_CHECK_B))
            if not entails_with_existential_import(
                [strong_clause], weak_clause, _CHECK_PREDS, DEFAULT_BOUND
            ):
                raise ScaleError(
                    f"{stronger.value!r} does not entail {weaker.value!r}"
                    f" on nonempty restrictors; scale order is broken"
                )
            if entails_with_existential_import(
                [weak_clause], strong_clause, _CHECK_PREDS, DEFAULT_BOUND
            ):
                raise ScaleError(
                    f"{weaker.value!r} and {stronger.value!r} are not strictly"
                    f" ordered; scale members must differ in strength"
                )

    def __contains__(self, q: Quantifier) -> bool:
        return q in self.members

    def rank_of(self, q: Quantifier) -> int:
        try:
            return self.ranks[self.members.index(q)]
        except ValueError:
            raise ScaleError(f"{q.value!r} is not on this scale") from None

    def stronger_mates(self, q: Quantifier) -> tuple[Quantifier, ...]:
        """Members strictly after q, i.e. strictly stronger than it."""
        try:
            i = self.members.index(q)
        except ValueError:
            raise ScaleError(f"{q.value!r} is not on this scale") from None
        return self.members[i + 1 :]

    def mates_at_most_as_complex(self, q: Quantifier) -> tuple[Quantifier, ...]:
        """Substitution candidates for q: other members with rank <= q's."""
        cap = self.rank_of(q)
        return tuple(m for m in self.members if m is not q and self.rank_of(m) <= cap)


@dataclass(frozen=True)
class ScaleRegistry:
    scales: tuple[Scale, ...]

    def scale_for(self, q: Quantifier) -> Scale | None:
        for scale in self.scales:
            if q in scale:
                return scale
        return None


@lru_cache(maxsize=None)
def default_registry() -> ScaleRegistry:
    """The stock registry: the single scale (some, most, all)."""
    return ScaleRegistry((Scale((SOME, MOST, ALL)),))
