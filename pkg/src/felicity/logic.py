"""Quantified logical forms and their truth conditions over finite models.

This module is the truth-conditional substrate for everything else: a small
AST for predicate expressions and quantified clauses, labeled finite models,
exhaustive model enumeration, and bounded entailment/consistency checks that
act as the oracle for the pragmatic layers built on top.

The fragment is monadic with counting quantifiers, so entailment over all
models up to a size bound is decidable by brute force. Extensions are stored
as bitmasks over the universe, which keeps the enumeration loops cheap.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from itertools import product
from typing import TYPE_CHECKING, Iterable, Iterator, Mapping, Sequence, Union

if TYPE_CHECKING:
    from .scales import ScaleRegistry

DEFAULT_BOUND = 4
DEFAULT_BUDGET_BITS = 24

STATIVE = "stative"
EVENTIVE = "eventive"
TEMPORAL_CLASSES = (STATIVE, EVENTIVE)


class FelicityError(Exception):
    """Base class for all engine errors."""


class DeclarationError(FelicityError):
    """A predicate was used without a matching declaration."""


class EpistemicContextRequired(FelicityError):
    """A certainty/possibility operator reached plain model evaluation."""


class ScaleError(FelicityError):
    """A scale is missing, empty, ill-ordered, or lacks a required member."""


class ResourceBudgetError(FelicityError):
    """The requested model space exceeds the enumeration budget."""


class WellFormednessError(FelicityError):
    """A form violates a structural invariant."""


# ---------------------------------------------------------------------------
# Syntax
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PredicateSym:
    """A unary predicate symbol with a fixed temporal class."""

    name: str
    temporal_class: str = STATIVE

    def __post_init__(self):
        if self.temporal_class not in TEMPORAL_CLASSES:
            raise WellFormednessError(
                f"temporal class of {self.name!r} must be one of {TEMPORAL_CLASSES},"
                f" got {self.temporal_class!r}"
            )


@dataclass(frozen=True)
class Atom:
    pred: PredicateSym


@dataclass(frozen=True)
class TruePred:
    """The trivially true predicate (denotes the whole universe)."""


TRUE = TruePred()


@dataclass(frozen=True)
class NotP:
    body: "PredExpr"


@dataclass(frozen=True)
class AndConc:
    """Concurrent predicate conjunction; denotes set intersection."""

    left: "PredExpr"
    right: "PredExpr"


@dataclass(frozen=True)
class AndSeq:
    """Sequenced predicate conjunction: events in order, not an intersection.

    Truth-conditionally an individual must satisfy both conjuncts (the
    ordering itself is not modeled in extensions), but the node is flagged
    non-intersective for reading analysis. Each conjunct must contain at
    least one eventive atom; stative predicates cannot be sequenced.
    """

    left: "PredExpr"
    right: "PredExpr"

    def __post_init__(self):
        for side, sub in (("left", self.left), ("right", self.right)):
            if not _has_eventive_atom(sub):
                raise WellFormednessError(
                    f"and-seq requires an eventive atom in each conjunct;"
                    f" {side} conjunct has none"
                )


PredExpr = Union[Atom, TruePred, NotP, AndConc, AndSeq]


class Quantifier(Enum):
    SOME = "some"
    ALL = "all"
    MOST = "most"
    NO = "no"
    QI = "qi"

    @property
    def complexity_rank(self) -> int:
        # Single lexical items all share rank 1; QI ranks 1 by stipulation.
        return 1


SOME = Quantifier.SOME
ALL = Quantifier.ALL
MOST = Quantifier.MOST
NO = Quantifier.NO
QI = Quantifier.QI


@dataclass(frozen=True)
class Quant:
    quantifier: Quantifier
    restrictor: PredicateSym
    scope: PredExpr


@dataclass(frozen=True)
class Only:
    """Overt exhaustivity marker; applies only to a quantified clause."""

    body: "LogicalForm"

    def __post_init__(self):
        if not isinstance(self.body, Quant):
            raise WellFormednessError("only applies to a quantified clause")


@dataclass(frozen=True)
class NotLF:
    body: "LogicalForm"


@dataclass(frozen=True)
class AndLF:
    left: "LogicalForm"
    right: "LogicalForm"


@dataclass(frozen=True)
class OrLF:
    disjuncts: tuple["LogicalForm", ...]

    def __post_init__(self):
        if not self.disjuncts:
            raise WellFormednessError("or requires at least one disjunct")


@dataclass(frozen=True)
class Know:
    """Certainty operator over the context's worlds; opaque to plain eval."""

    body: "LogicalForm"


@dataclass(frozen=True)
class Poss:
    """Possibility operator, the dual of Know."""

    body: "LogicalForm"


LogicalForm = Union[Quant, Only, NotLF, AndLF, OrLF, Know, Poss]


def _has_eventive_atom(p: PredExpr) -> bool:
    if isinstance(p, Atom):
        return p.pred.temporal_class == EVENTIVE
    if isinstance(p, NotP):
        return _has_eventive_atom(p.body)
    if isinstance(p, (AndConc, AndSeq)):
        return _has_eventive_atom(p.left) or _has_eventive_atom(p.right)
    return False


def pexpr_atoms(p: PredExpr) -> tuple[PredicateSym, ...]:
    if isinstance(p, Atom):
        return (p.pred,)
    if isinstance(p, NotP):
        return pexpr_atoms(p.body)
    if isinstance(p, (AndConc, AndSeq)):
        return pexpr_atoms(p.left) + pexpr_atoms(p.right)
    return ()


def lf_predicates(lf: LogicalForm) -> tuple[PredicateSym, ...]:
    """All predicate symbols occurring in lf, restrictors included."""
    if isinstance(lf, Quant):
        return (lf.restrictor,) + pexpr_atoms(lf.scope)
    if isinstance(lf, (Only, NotLF, Know, Poss)):
        return lf_predicates(lf.body)
    if isinstance(lf, AndLF):
        return lf_predicates(lf.left) + lf_predicates(lf.right)
    if isinstance(lf, OrLF):
        out: tuple[PredicateSym, ...] = ()
        for d in lf.disjuncts:
            out += lf_predicates(d)
        return out
    raise TypeError(f"not a logical form: {lf!r}")


def lf_restrictors(lf: LogicalForm) -> tuple[PredicateSym, ...]:
    """Predicate symbols used as quantifier restrictors anywhere in lf."""
    if isinstance(lf, Quant):
        return (lf.restrictor,)
    if isinstance(lf, (Only, NotLF, Know, Poss)):
        return lf_restrictors(lf.body)
    if isinstance(lf, AndLF):
        return lf_restrictors(lf.left) + lf_restrictors(lf.right)
    if isinstance(lf, OrLF):
        out: tuple[PredicateSym, ...] = ()
        for d in lf.disjuncts:
            out += lf_restrictors(d)
        return out
    raise TypeError(f"not a logical form: {lf!r}")


def is_epistemic_free(lf: LogicalForm) -> bool:
    if isinstance(lf, (Know, Poss)):
        return False
    if isinstance(lf, Quant):
        return True
    if isinstance(lf, (Only, NotLF)):
        return is_epistemic_free(lf.body)
    if isinstance(lf, AndLF):
        return is_epistemic_free(lf.left) and is_epistemic_free(lf.right)
    if isinstance(lf, OrLF):
        return all(is_epistemic_free(d) for d in lf.disjuncts)
    raise TypeError(f"not a logical form: {lf!r}")


def _contains_andseq(p: PredExpr) -> bool:
    if isinstance(p, AndSeq):
        return True
    if isinstance(p, NotP):
        return _contains_andseq(p.body)
    if isinstance(p, AndConc):
        return _contains_andseq(p.left) or _contains_andseq(p.right)
    return False


def is_intersective_conjunction(p: PredExpr) -> bool:
    """False iff p contains a sequenced conjunction anywhere.

    Sequenced events are not commutative, so a scope containing and-seq does
    not denote an intersection and supports no concurrent-situation reading.
    """
    return not _contains_andseq(p)


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------


class Model:
    """A finite labeled universe plus an extension for each declared predicate.

    Extensions are stored as bitmasks over the universe ordering; the
    ``extensions`` property materializes them as frozensets on demand.
    """

    __slots__ = ("universe", "_index", "_masks")

    def __init__(self, universe: Sequence[str], extensions: Mapping[str, Iterable[str]]):
        self.universe: tuple[str, ...] = tuple(universe)
        self._index = {x: i for i, x in enumerate(self.universe)}
        if len(self._index) != len(self.universe):
            raise WellFormednessError("universe labels must be distinct")
        masks: dict[str, int] = {}
        for name, members in extensions.items():
            mask = 0
            for x in members:
                if x not in self._index:
                    raise DeclarationError(
                        f"extension of {name!r} contains {x!r}, not a universe member"
                    )
                mask |= 1 << self._index[x]
            masks[name] = mask
        self._masks = masks

    @classmethod
    def _from_masks(cls, universe: tuple[str, ...], masks: dict[str, int]) -> "Model":
        m = object.__new__(cls)
        m.universe = universe
        m._index = {x: i for i, x in enumerate(universe)}
        m._masks = masks
        return m

    @property
    def full_mask(self) -> int:
        return (1 << len(self.universe)) - 1

    def mask(self, name: str) -> int:
        try:
            return self._masks[name]
        except KeyError:
            raise DeclarationError(f"predicate {name!r} has no extension in this model") from None

    def extension(self, name: str) -> frozenset[str]:
        mask = self.mask(name)
        return frozenset(x for x in self.universe if mask & (1 << self._index[x]))

    @property
    def extensions(self) -> dict[str, frozenset[str]]:
        return {name: self.extension(name) for name in self._masks}

    def predicates(self) -> tuple[str, ...]:
        return tuple(self._masks)

    def __eq__(self, other):
        if not isinstance(other, Model):
            return NotImplemented
        return self.universe == other.universe and self._masks == other._masks

    def __hash__(self):
        return hash((self.universe, tuple(sorted(self._masks.items()))))

    def __repr__(self):
        exts = ", ".join(f"{k}={set(v) or '{}'}" for k, v in sorted(self.extensions.items()))
        return f"Model(universe={list(self.universe)}, {exts})"


def _universe_labels(n: int) -> tuple[str, ...]:
    if n <= 26:
        return tuple(string.ascii_lowercase[:n])
    return tuple(f"x{i + 1}" for i in range(n))


def enumerate_models(
    preds: Sequence[PredicateSym],
    max_universe: int,
    budget_bits: int = DEFAULT_BUDGET_BITS,
) -> Iterator[Model]:
    """Yield every model with universe size 0..max_universe.

    For a fixed size n and k predicates there are 2**(n*k) models. The
    enumeration order is deterministic: sizes ascending, then extension
    assignments in binary counting order with the last predicate varying
    fastest.
    """
    if max_universe < 0:
        raise ValueError("max_universe must be >= 0")
    names = [p.name for p in preds]
    if len(set(names)) != len(names):
        raise WellFormednessError(f"duplicate predicate names in {names}")
    if max_universe * len(names) > budget_bits:
        raise ResourceBudgetError(
            f"{max_universe} individuals x {len(names)} predicates exceeds the"
            f" {budget_bits}-bit enumeration budget"
        )
    for n in range(max_universe + 1):
        universe = _universe_labels(n)
        for assignment in product(range(1 << n), repeat=len(names)):
            yield Model._from_masks(universe, dict(zip(names, assignment)))


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def eval_pexpr(p: PredExpr, m: Model, x: str) -> bool:
    """Truth of a predicate expression at individual x.

    and-seq evaluates like a conjunction here: the individual did both, in
    order. The ordering itself lives at the reading level (see
    is_intersective_conjunction), not in extensions.
    """
    if x not in m._index:
        raise DeclarationError(f"{x!r} is not a member of the universe")
    bit = 1 << m._index[x]
    return bool(_pexpr_mask(p, m) & bit)


def _pexpr_mask(p: PredExpr, m: Model) -> int:
    if isinstance(p, Atom):
        return m.mask(p.pred.name)
    if isinstance(p, TruePred):
        return m.full_mask
    if isinstance(p, NotP):
        return m.full_mask & ~_pexpr_mask(p.body, m)
    if isinstance(p, (AndConc, AndSeq)):
        return _pexpr_mask(p.left, m) & _pexpr_mask(p.right, m)
    raise TypeError(f"not a predicate expression: {p!r}")


def evaluate(lf: LogicalForm, m: Model, scales: "ScaleRegistry | None" = None) -> bool:
    """Classical truth of an epistemic-free logical form in a single model.

    Quantifiers: some/qi nonempty intersection, all inclusion (vacuously true
    on an empty restrictor), most strict majority (|A&B| > |A-B|), no empty
    intersection. only(q-clause) is true iff the prejacent is true and every
    strictly stronger scale-mate of q is false.
    """
    if isinstance(lf, Quant):
        a = m.mask(lf.restrictor.name)
        b = _pexpr_mask(lf.scope, m)
        q = lf.quantifier
        if q in (SOME, QI):
            return bool(a & b)
        if q is ALL:
            return not (a & ~b)
        if q is MOST:
            return (a & b).bit_count() > (a & ~b).bit_count()
        if q is NO:
            return not (a & b)
        raise ScaleError(f"quantifier {q} has no truth conditions")
    if isinstance(lf, Only):
        body = lf.body
        scale = scales.scale_for(body.quantifier) if scales is not None else None
        if scale is None:
            raise ScaleError(
                f"only requires {body.quantifier.value!r} to belong to a declared scale"
            )
        if not evaluate(body, m, scales):
            return False
        return not any(
            evaluate(Quant(q, body.restrictor, body.scope), m, scales)
            for q in scale.stronger_mates(body.quantifier)
        )
    if isinstance(lf, NotLF):
        return not evaluate(lf.body, m, scales)
    if isinstance(lf, AndLF):
        return evaluate(lf.left, m, scales) and evaluate(lf.right, m, scales)
    if isinstance(lf, OrLF):
        return any(evaluate(d, m, scales) for d in lf.disjuncts)
    if isinstance(lf, (Know, Poss)):
        raise EpistemicContextRequired(
            "know/poss cannot be evaluated against a single model; use an epistemic context"
        )
    raise TypeError(f"not a logical form: {lf!r}")


# ---------------------------------------------------------------------------
# Bounded entailment and consistency
# ---------------------------------------------------------------------------


def _check_sequents(
    lfs: Sequence[LogicalForm],
    preds: Sequence[PredicateSym],
    bound: int,
    budget_bits: int,
) -> tuple[tuple[LogicalForm, ...], tuple[PredicateSym, ...]]:
    if bound < 1:
        raise ValueError("bound must be >= 1")
    preds = tuple(preds)
    declared = {p.name for p in preds}
    for lf in lfs:
        if not is_epistemic_free(lf):
            raise EpistemicContextRequired(
                "entailment and consistency are defined for epistemic-free forms"
            )
        used = {p.name for p in lf_predicates(lf)}
        if not used <= declared:
            raise DeclarationError(
                f"undeclared predicates {sorted(used - declared)} in {lf!r}"
            )
    if bound * len(preds) > budget_bits:
        raise ResourceBudgetError(
            f"bound {bound} x {len(preds)} predicates exceeds the"
            f" {budget_bits}-bit enumeration budget"
        )
    return tuple(lfs), preds


@lru_cache(maxsize=16384)
def _entails(
    premises: tuple[LogicalForm, ...],
    conclusion: LogicalForm,
    preds: tuple[PredicateSym, ...],
    bound: int,
    scales: "ScaleRegistry | None",
) -> bool:
    for m in enumerate_models(preds, bound):
        if all(evaluate(p, m, scales) for p in premises) and not evaluate(
            conclusion, m, scales
        ):
            return False
    return True


@lru_cache(maxsize=16384)
def _consistent(
    lfs: tuple[LogicalForm, ...],
    preds: tuple[PredicateSym, ...],
    bound: int,
    scales: "ScaleRegistry | None",
) -> bool:
    for m in enumerate_models(preds, bound):
        if all(evaluate(lf, m, scales) for lf in lfs):
            return True
    return False


def entails(
    premises: Sequence[LogicalForm],
    conclusion: LogicalForm,
    preds: Sequence[PredicateSym],
    bound: int = DEFAULT_BOUND,
    scales: "ScaleRegistry | None" = None,
    budget_bits: int = DEFAULT_BUDGET_BITS,
) -> bool:
    """True iff no model of size <= bound satisfies all premises and
    falsifies the conclusion."""
    prem, preds = _check_sequents(list(premises) + [conclusion], preds, bound, budget_bits)
    return _entails(prem[:-1], conclusion, preds, bound, scales)


def consistent(
    lfs: Sequence[LogicalForm],
    preds: Sequence[PredicateSym],
    bound: int = DEFAULT_BOUND,
    scales: "ScaleRegistry | None" = None,
    budget_bits: int = DEFAULT_BUDGET_BITS,
) -> bool:
    """True iff some model of size <= bound satisfies every member."""
    lfs, preds = _check_sequents(lfs, preds, bound, budget_bits)
    return _consistent(lfs, preds, bound, scales)


def entails_with_existential_import(
    premises: Sequence[LogicalForm],
    conclusion: LogicalForm,
    preds: Sequence[PredicateSym],
    bound: int = DEFAULT_BOUND,
    scales: "ScaleRegistry | None" = None,
    budget_bits: int = DEFAULT_BUDGET_BITS,
) -> bool:
    """Bounded entailment assuming every quantifier restrictor is nonempty.

    Scale strength (all > most > some) only holds on nonempty restrictors;
    a vacuously true universal otherwise breaks the ordering. Every strength
    comparison between scale-mates goes through this variant.
    """
    restrictors: dict[str, PredicateSym] = {}
    for lf in list(premises) + [conclusion]:
        for r in lf_restrictors(lf):
            restrictors.setdefault(r.name, r)
    existence = [Quant(SOME, r, TRUE) for _, r in sorted(restrictors.items())]
    return entails(list(premises) + existence, conclusion, preds, bound, scales, budget_bits)


# ---------------------------------------------------------------------------
# Indefinite-number expansion
# ---------------------------------------------------------------------------


def expand_qi(restrictor: PredicateSym, scope: PredExpr, scale) -> OrLF:
    """Disjunction of scale-mate clauses standing in for the covert
    indefinite-number quantifier.

    The disjuncts are every scale member at most as complex as ``some``
    (including ``some`` itself), strongest first. The pragmatic content of
    the indefinite lives entirely in this expansion; its truth conditions
    are existential.
    """
    members = tuple(scale.members)
    if not members:
        raise ScaleError("cannot expand over an empty scale")
    if SOME not in members:
        raise ScaleError("expansion scale must contain 'some'")
    cap = scale.rank_of(SOME)
    qs = [q for q in reversed(members) if scale.rank_of(q) <= cap]
    return OrLF(tuple(Quant(q, restrictor, scope) for q in qs))
