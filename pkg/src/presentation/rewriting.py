"""Normal forms of noncommutative polynomials under word rewriting rules."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from src.algebra.errors import NonTerminatingRewrite
from src.algebra.scalars import ZERO, RatFunc
from src.config.settings import settings
from src.presentation.expressions import Word

logger = logging.getLogger(__name__)

Polynomial = dict[Word, RatFunc]


class Strategy(str, Enum):
    leftmost = "leftmost"
    rightmost = "rightmost"


def word_text(word: Word) -> str:
    return "*".join(word) if word else "1"


@dataclass(frozen=True)
class RewriteRule:
    lhs: Word
    rhs: Mapping[Word, RatFunc]


class RewriteSystem:
    def __init__(self, rules: Sequence[RewriteRule], budget: int | None = None) -> None:
        self.rules = tuple(rules)
        self.budget = settings.rewrite_budget if budget is None else budget

    def find(self, word: Word, strategy: Strategy = Strategy.leftmost) -> tuple[int, RewriteRule] | None:
        positions = range(len(word)) if strategy is Strategy.leftmost else range(len(word) - 1, -1, -1)
        for start in positions:
            for rule in self.rules:
                if word[start : start + len(rule.lhs)] == rule.lhs:
                    return start, rule
        return None

    def is_reduced(self, word: Word) -> bool:
        return self.find(word) is None

    def normal_form(self, poly: Mapping[Word, RatFunc], strategy: Strategy = Strategy.leftmost) -> Polynomial:
        pending: Polynomial = {word: value for word, value in poly.items() if value}
        reduced: Polynomial = {}
        steps = 0
        while pending:
            word, coefficient = pending.popitem()
            match = self.find(word, strategy)
            if match is None:
                total = reduced.get(word, ZERO) + coefficient
                if total:
                    reduced[word] = total
                else:
                    reduced.pop(word, None)
                continue
            steps += 1
            if steps > self.budget:
                raise NonTerminatingRewrite(word_text(word), self.budget)
            start, rule = match
            prefix, suffix = word[:start], word[start + len(rule.lhs) :]
            for replacement, value in rule.rhs.items():
                target = prefix + replacement + suffix
                total = pending.get(target, ZERO) + coefficient * value
                if total:
                    pending[target] = total
                else:
                    pending.pop(target, None)
        logger.debug("Normal form reached in %d rewrite steps", steps)
        return reduced
