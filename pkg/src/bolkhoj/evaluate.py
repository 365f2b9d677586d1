"""Sentence-level scoring and accuracy reports.

accuracy = (S - E_s - E_d) / S * 100, where a sentence is correct only
on an exact token match, counts as a deletion error when the hypothesis
is a strict subsequence of the reference, and as a substitution error
otherwise (insertions included).
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Callable, Sequence

import numpy as np


class EvalError(ValueError):
    pass


def accuracy(s: int, e_s: int, e_d: int) -> float:
    """Percentage to one decimal place, rounding half away from zero."""
    if s < 1:
        raise EvalError(f"S must be >= 1, got {s}")
    if e_s < 0 or e_d < 0:
        raise EvalError("error counts must be non-negative")
    if e_s + e_d > s:
        raise EvalError(f"E_s + E_d = {e_s + e_d} exceeds S = {s}")
    percent = Decimal(s - e_s - e_d) / Decimal(s) * 100
    return float(percent.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def is_strict_subsequence(hyp: Sequence[str], ref: Sequence[str]) -> bool:
    """hyp is obtainable from ref by deletions alone (and differs)."""
    if len(hyp) >= len(ref):
        return False
    it = iter(ref)
    return all(any(token == r for r in it) for token in hyp)


def score_sentences(references: Sequence[Sequence[str]],
                    hypotheses: Sequence[Sequence[str]]) -> tuple[int, int, int]:
    """(S, E_s, E_d) over paired token lists."""
    if len(references) != len(hypotheses):
        raise EvalError(f"got {len(references)} references but {len(hypotheses)} hypotheses")
    e_s = e_d = 0
    for ref, hyp in zip(references, hypotheses):
        ref = list(ref)
        hyp = list(hyp)
        if hyp == ref:
            continue
        if is_strict_subsequence(hyp, ref):
            e_d += 1
        else:
            e_s += 1
    return len(references), e_s, e_d


@dataclass(frozen=True)
class GroupResult:
    label: str
    s: int
    e_s: int
    e_d: int
    accuracy_percent: float


@dataclass(frozen=True)
class EvalReport:
    groups: tuple[GroupResult, ...]
    overall_accuracy_percent: float

    def validate(self, tol: float = 0.05) -> None:
        for g in self.groups:
            if not 0 <= g.e_s + g.e_d <= g.s:
                raise EvalError(f"group '{g.label}' error counts out of range")
            if abs(accuracy(g.s, g.e_s, g.e_d) - g.accuracy_percent) > tol:
                raise EvalError(f"group '{g.label}' stored accuracy is inconsistent")

    def to_tsv(self) -> str:
        lines = ["label\tS\tE_s\tE_d\taccuracy"]
        for g in self.groups:
            lines.append(f"{g.label}\t{g.s}\t{g.e_s}\t{g.e_d}\t{g.accuracy_percent:.1f}")
        lines.append(f"overall\t{sum(g.s for g in self.groups)}"
                     f"\t{sum(g.e_s for g in self.groups)}"
                     f"\t{sum(g.e_d for g in self.groups)}"
                     f"\t{self.overall_accuracy_percent:.1f}")
        return "\n".join(lines)


def run_experiment(corpus: Sequence, system: Callable,
                   groups: Sequence[tuple[str, Sequence[int]]],
                   seed: int = 0) -> EvalReport:
    """Run `system(item, rng) -> hypothesis tokens` over every corpus
    item.  `groups` is a list of (label, item indices) and must
    partition the corpus.  Each item is (reference tokens, payload).
    Deterministic for a fixed seed."""
    if not corpus:
        raise EvalError("corpus is empty")
    seen: set[int] = set()
    for label, indices in groups:
        if not indices:
            raise EvalError(f"group '{label}' is empty")
        for i in indices:
            if not 0 <= i < len(corpus):
                raise EvalError(f"group '{label}' index {i} out of range")
            if i in seen:
                raise EvalError(f"item {i} appears in more than one group")
            seen.add(i)
    if len(seen) != len(corpus):
        raise EvalError("groups must cover the whole corpus")

    rng = np.random.default_rng(seed)
    hypotheses = [list(system(item, rng)) for item in corpus]

    results = []
    total_s = total_es = total_ed = 0
    for label, indices in groups:
        refs = [list(corpus[i][0]) for i in indices]
        hyps = [hypotheses[i] for i in indices]
        s, e_s, e_d = score_sentences(refs, hyps)
        results.append(GroupResult(label, s, e_s, e_d, accuracy(s, e_s, e_d)))
        total_s += s
        total_es += e_s
        total_ed += e_d
    report = EvalReport(groups=tuple(results),
                        overall_accuracy_percent=accuracy(total_s, total_es, total_ed))
    report.validate()
    return report
