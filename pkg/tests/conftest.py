from __future__ import annotations

import pytest

from felicity import PredicateSym, Scale, ScaleRegistry, SOME, MOST, ALL

ITALIAN = PredicateSym("italian")
WARM = PredicateSym("warm")
BLOND = PredicateSym("blond")
PORTUGAL = PredicateSym("portugal")
WON = PredicateSym("won", "eventive")
TALL = PredicateSym("tall")
LEFT = PredicateSym("left", "eventive")

ITALIAN_PREDS = (ITALIAN, WARM, BLOND)
PORTUGAL_PREDS = (PORTUGAL, WON, TALL, LEFT)


@pytest.fixture(scope="session")
def full_registry() -> ScaleRegistry:
    return ScaleRegistry((Scale((SOME, MOST, ALL)),))


@pytest.fixture(scope="session")
def short_registry() -> ScaleRegistry:
    return ScaleRegistry((Scale((SOME, ALL)),))
