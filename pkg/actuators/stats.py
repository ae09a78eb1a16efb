"""Rank-based comparisons: KS normality check, Kruskal-Wallis, Dunn post hoc."""
import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scikit_posthocs as sp
from django.db import models
from scipy import stats as sps

from .exceptions import DomainError
from .models import CellShape, Metric, format_cm

logger = logging.getLogger(__name__)

KS_NOTE = 'KS against a normal with estimated mean and SD, asymptotic Kolmogorov p (no Lilliefors correction)'
JERK_NOTE = 'jerk is the mean absolute time derivative of the acceleration magnitude'


class Factor(models.TextChoices):
    SHAPE = 'shape', 'Shape'
    SIZE = 'size', 'Size'
    CELL_COUNT = 'cells', 'Cell count'


class Pooling(models.TextChoices):
    TRIALS = 'trials', 'Pooled trials'
    MEANS = 'means', 'Variant means'


@dataclass(frozen=True)
class FactorSpec:
    name: Factor
    levels: tuple
    grouping: object = field(compare=False)

    @property
    def k(self):
        return len(self.levels)

    def group(self, spec):
        label = self.grouping(spec)
        if label not in self.levels:
            raise DomainError(f"{spec.label} has no {self.name.label.lower()} group")
        return label


def _size_label(spec):
    return f"{format_cm(spec.cell_length_p)} cm"


def _cell_label(spec):
    return f"{spec.n_cells}-cell"


def factor_spec(name):
    name = Factor(name)
    if name == Factor.SHAPE:
        return FactorSpec(name, tuple(shape.label for shape in CellShape), lambda spec: spec.shape.label)
    if name == Factor.SIZE:
        return FactorSpec(name, ('3 cm', '4 cm'), _size_label)
    return FactorSpec(name, ('8-cell', '10-cell', '12-cell'), _cell_label)


@dataclass(frozen=True)
class Comparison:
    group_a: str
    group_b: str
    z: float
    p_raw: float
    p_adjusted: float
    significant: bool


@dataclass(frozen=True)
class StatResult:
    test: str
    statistic: float
    df: int | None
    p_value: float
    pairwise: tuple = ()
    groups: tuple = ()
    sizes: tuple = ()
    note: str = ''


def _tie_sum(values):
    _, counts = np.unique(values, return_counts=True)
    counts = counts.astype(float)
    return float(np.sum(counts ** 3 - counts))


def _check_groups(groups, minimum_total):
    groups = [np.asarray(g, dtype=float).ravel() for g in groups]
    if len(groups) < 2:
        raise DomainError(f"need at least 2 groups, got {len(groups)}")
    if any(len(g) == 0 for g in groups):
        raise DomainError("every group must hold at least one observation")
    total = sum(len(g) for g in groups)
    if total < minimum_total:
        raise DomainError(f"need at least {minimum_total} observations, got {total}")
    return groups


def _mean_ranks(groups):
    pooled = np.concatenate(groups)
    ranks = sps.rankdata(pooled)
    bounds = np.cumsum([0] + [len(g) for g in groups])
    return pooled, [float(ranks[a:b].mean()) for a, b in zip(bounds, bounds[1:])]


def kruskal_wallis(groups):
    groups = _check_groups(groups, 3)
    sizes = tuple(len(g) for g in groups)
    df = len(groups) - 1
    if np.ptp(np.concatenate(groups)) == 0:
        # every observation tied: no rank information
        return StatResult('kruskal-wallis', 0.0, df, 1.0, sizes=sizes)
    h, p = sps.kruskal(*groups)
    return StatResult('kruskal-wallis', max(float(h), 0.0), df, float(p), sizes=sizes)


def dunn_posthoc(groups, alpha=0.05, correction='bonferroni', labels=None):
    """Pairwise rank-mean z tests, adjusted for k(k-1)/2 comparisons.

    Adjusted p values come from ``scikit_posthocs``; z is kept here since the
    package only reports p.
    """
    if correction != 'bonferroni':
        raise DomainError(f"unsupported correction {correction!r}")
    groups = _check_groups(groups, 2)
    labels = list(labels) if labels is not None else [str(i + 1) for i in range(len(groups))]
    pooled, mean_ranks = _mean_ranks(groups)
    n_total = len(pooled)
    variance = n_total * (n_total + 1) / 12.0
    if n_total > 1:
        variance -= _tie_sum(pooled) / (12.0 * (n_total - 1))
    adjusted = sp.posthoc_dunn(groups, p_adjust=correction).to_numpy() if variance > 0 else None
    table = []
    for i, j in itertools.combinations(range(len(groups)), 2):
        if adjusted is None:
            z, p_raw, p_adjusted = 0.0, 1.0, 1.0
        else:
            se = math.sqrt(variance * (1.0 / len(groups[i]) + 1.0 / len(groups[j])))
            z = (mean_ranks[i] - mean_ranks[j]) / se
            p_raw = float(min(1.0, 2.0 * sps.norm.sf(abs(z))))
            p_adjusted = float(min(1.0, adjusted[i, j]))
        table.append(Comparison(labels[i], labels[j], z, p_raw, p_adjusted, p_adjusted < alpha))
    return tuple(table)


def ks_normality(sample):
    x = np.asarray(sample, dtype=float).ravel()
    if len(x) < 4:
        raise DomainError(f"normality check needs at least 4 values, got {len(x)}")
    sd = x.std(ddof=1)
    if sd == 0:
        raise DomainError("sample has zero variance")
    d = float(sps.kstest((x - x.mean()) / sd, 'norm').statistic)
    p = float(np.clip(sps.kstwobign.sf(math.sqrt(len(x)) * d), 0.0, 1.0))
    return StatResult('kolmogorov-smirnov', d, None, p, sizes=(len(x),), note=KS_NOTE)


def factor_groups(records, metric, factor, pooling=Pooling.TRIALS):
    """Observations per factor level, in level order; absent levels are dropped."""
    metric = Metric(metric)
    buckets = {level: [] for level in factor.levels}
    if Pooling(pooling) == Pooling.MEANS:
        per_variant = {}
        for record in records:
            per_variant.setdefault(record.variant, []).append(record.value(metric))
        for variant, values in per_variant.items():
            buckets[factor.group(variant)].append(float(np.mean(values)))
    else:
        for record in records:
            buckets[factor.group(record.variant)].append(record.value(metric))
    return {level: values for level, values in buckets.items() if values}


def compare_by_factor(records, metric, factor, pooling=Pooling.TRIALS, alpha=0.05):
    if not isinstance(factor, FactorSpec):
        factor = factor_spec(factor)
    groups = factor_groups(records, metric, factor, pooling)
    if len(groups) < 2:
        raise DomainError(f"{factor.name.label} comparison needs at least 2 groups, got {len(groups)}")
    labels = list(groups)
    samples = [groups[label] for label in labels]
    omnibus = kruskal_wallis(samples)
    pairwise = dunn_posthoc(samples, alpha=alpha, labels=labels)
    logger.debug("%s by %s: H=%.3f p=%.4f", Metric(metric).value, factor.name.value, omnibus.statistic, omnibus.p_value)
    note = JERK_NOTE if Metric(metric) == Metric.JERK else ''
    return StatResult(
        'kruskal-wallis',
        omnibus.statistic,
        omnibus.df,
        omnibus.p_value,
        pairwise=pairwise,
        groups=tuple(labels),
        sizes=tuple(len(s) for s in samples),
        note=note,
    )


def format_p(p):
    return 'p<0.001' if p < 0.001 else f"p={p:.3f}"


def format_result(result):
    """``(χ²(2)=24.728, p<0.001)``"""
    return f"(χ²({result.df})={result.statistic:.3f}, {format_p(result.p_value)})"
