"""Markdown report mirroring the published tables.

Variants that do not fully inflate or deflate in the actuation window carry
an asterisk in every table.
"""
import logging
import math
from pathlib import Path

from .design_space import advisory_elongation_screen, required_elongation
from .exceptions import ExportError, MissingEntryError
from .geometry import ELONGATION_RATIO_BAND, elongation_ratio, estimated_elongation, measured_elongation
from .metrics import TrialMetrics
from .models import ActuatorSpec, CellShape, Completion, Metric, format_cm, report_key
from .pneumatics import fill_time, time_constant
from .stats import (
    JERK_NOTE,
    KS_NOTE,
    Factor,
    Pooling,
    compare_by_factor,
    factor_spec,
    format_result,
    ks_normality,
)

logger = logging.getLogger(__name__)

FOOTNOTE = '*Not fully inflated/deflated'
MISSING = '-'
METRIC_TITLES = {
    Metric.PATH: 'Path length (cm)',
    Metric.SI: 'Straightness index',
    Metric.JERK: 'Jerk (m/s³)',
    Metric.ANGLE: 'Elbow flexion range (deg)',
}


def summary_table(summaries):
    """{metric: {spec: (mean, sd)}} from VariantSummary objects."""
    table = {metric: {} for metric in Metric}
    for summary in summaries:
        for metric in Metric:
            table[metric][summary.variant] = (summary.mean[metric], summary.sd[metric])
    return table


def fixture_records(fixture):
    """One record per variant holding the published means, for factor comparisons."""
    variants = sorted({spec for values in fixture.values() for spec in values}, key=report_key)
    records = []
    for spec in variants:
        value = {metric: fixture.get(metric, {}).get(spec, (float('nan'), 0.0))[0] for metric in Metric}
        records.append(TrialMetrics(
            variant=spec,
            trial_id=0,
            path_length_cm=value[Metric.PATH],
            straightness_index=value[Metric.SI],
            mean_abs_jerk_ms3=value[Metric.JERK],
            flexion_range_deg=value[Metric.ANGLE],
        ))
    return records


def present_levels(records, factor):
    """Factor levels covered by ``records``, in level order."""
    spec = factor_spec(factor)
    seen = {spec.group(record.variant) for record in records}
    return tuple(level for level in spec.levels if level in seen)


def compare_all(records, metrics=tuple(Metric), pooling=Pooling.TRIALS, alpha=0.05):
    """Every metric by every factor that has at least two levels in ``records``."""
    comparable = []
    for factor in Factor:
        levels = present_levels(records, factor)
        if len(levels) < 2:
            logger.warning("%s not comparable: only %s present", factor.label.lower(), ', '.join(levels) or 'no level')
        else:
            comparable.append(factor)
    return [
        (Metric(metric), factor, pooling, compare_by_factor(records, metric, factor, pooling=pooling, alpha=alpha))
        for metric in metrics
        for factor in comparable
    ]


def _markdown_table(header, rows):
    lines = ['| ' + ' | '.join(header) + ' |', '|' + '|'.join('---' for _ in header) + '|']
    lines += ['| ' + ' | '.join(str(cell) for cell in row) + ' |' for row in rows]
    return lines


def _grid_keys(variants):
    return sorted({(spec.cell_length_p, spec.n_cells) for spec in variants})


def _flag(spec, completion):
    return '*' if completion and completion.get(spec) == Completion.INCOMPLETE else ''


def _cell(values, spec, completion, digits=2):
    if spec not in values:
        return MISSING
    mean, sd = values[spec]
    return f"{mean:.{digits}f}±{sd:.{digits}f}{_flag(spec, completion)}"


def metric_section(metric, values, variants, completion):
    header = ['Size', 'Cells'] + [shape.label for shape in CellShape]
    rows = []
    for p, n in _grid_keys(variants):
        rows.append([f"{format_cm(p)}cm", n] + [
            _cell(values, ActuatorSpec(shape, p, n), completion) for shape in CellShape
        ])
    return [f"## {METRIC_TITLES[metric]}", ''] + _markdown_table(header, rows) + ['']


def elongation_section(variants, table, measured):
    header = ['Size', 'Cells']
    for shape in CellShape:
        header += [f"{shape.label} Est.", f"{shape.label} Expt."]
    rows = []
    for p, n in _grid_keys(variants):
        row = [f"{format_cm(p)}cm", n]
        for shape in CellShape:
            spec = ActuatorSpec(shape, p, n)
            try:
                row.append(f"{estimated_elongation(spec, table):.2f}")
            except MissingEntryError:
                row.append(MISSING)
            try:
                row.append(f"{measured_elongation(spec, measured):.2f}" if measured is not None else MISSING)
            except MissingEntryError:
                row.append(MISSING)
        rows.append(row)
    return ['## Estimated and experimental elongation (cm)', ''] + _markdown_table(header, rows) + ['']


def advisory_section(variants, table, d_cm=5.0, theta_deg=90.0):
    required = required_elongation(theta_deg, d_cm)
    low, high = ELONGATION_RATIO_BAND
    rows = []
    for spec in sorted(variants, key=report_key):
        estimate = estimated_elongation(spec, table)
        ratio = elongation_ratio(spec, estimate)
        note = '' if low <= ratio <= high else 'outside band'
        rows.append([spec.label, f"{estimate:.2f}", advisory_elongation_screen(spec, table, d_cm, theta_deg).label,
                     f"{ratio:.1f}", note])
    lines = [
        '## Elongation screen (advisory)',
        '',
        f"Required elongation for {theta_deg:g}° at d={d_cm:g} cm: {required:.3f} cm.",
        '',
    ]
    return lines + _markdown_table(['Variant', 'Est. (cm)', 'Screen', 'Elongation ratio', 'Note'], rows) + ['']


def selection_section(selection, constraints):
    lines = [
        '## Down-selection',
        '',
        f"{len(selection.viable) + len(selection.rejected)} variants enumerated, {len(selection.viable)} viable.",
        '',
    ]
    lines += [f"- {c.id}: {c.rationale}" for c in constraints]
    lines.append('')
    rejected = sorted(selection.rejected, key=lambda item: report_key(item[0]))
    return lines + _markdown_table(['Rejected variant', 'Violated'], [[s.label, ', '.join(ids)] for s, ids in rejected]) + ['']


def pneumatics_section(variants, table, pneumatic, completion):
    rows = []
    for spec in sorted(variants, key=report_key):
        rows.append([
            spec.label,
            f"{time_constant(spec, table, pneumatic):.3f}",
            f"{fill_time(spec, table, pneumatic):.3f}",
            completion[spec].label,
        ])
    return (['## Pneumatics', '']
            + _markdown_table(['Variant', 'Time constant (s)', 'Fill time (s)', 'Status'], rows) + [''])


def comparison_section(comparisons, records=None):
    lines = ['## Factor comparisons', '']
    for metric, factor, pooling, result in comparisons:
        lines.append(f"- {metric.label}, {factor.label}: {format_result(result)} [{Pooling(pooling).label.lower()}]")
        for c in result.pairwise:
            marker = ' (significant)' if c.significant else ''
            lines.append(f"  - {c.group_a} vs {c.group_b}: z={c.z:.3f}, p={c.p_adjusted:.3f}{marker}")
    for factor in Factor if records else ():
        levels = present_levels(records, factor)
        if len(levels) < 2:
            lines.append(f"- {factor.label}: not comparable (only {', '.join(levels)} present)")
    if comparisons:
        lines += ['', f"Pairwise p values are Bonferroni adjusted; {JERK_NOTE}."]
    if records:
        lines += ['', '### Normality', '']
        for metric in Metric:
            values = [r.value(metric) for r in records if math.isfinite(r.value(metric))]
            if len(values) < 4 or len(set(values)) < 2:
                continue
            result = ks_normality(values)
            lines.append(f"- {metric.label}: D={result.statistic:.3f}, p={result.p_value:.3f}")
        lines += ['', f"{KS_NOTE}."]
    return lines + ['']


def render_report(metric_values, variants=(), completion=None, selection=None, constraints=(), table=None,
                  measured=None, pneumatic=None, comparisons=(), records=None, title='Bellow actuator evaluation',
                  metrics=tuple(Metric)):
    variants = sorted(variants, key=report_key)
    lines = [f"# {title}", '']
    if selection is not None:
        lines += selection_section(selection, constraints)
    if table is not None and variants:
        lines += elongation_section(variants, table, measured)
        lines += advisory_section(variants, table)
    if pneumatic is not None and completion and variants:
        lines += pneumatics_section(variants, table, pneumatic, completion)
    for metric in metrics:
        lines += metric_section(metric, metric_values.get(metric, {}), variants, completion)
    lines += [FOOTNOTE, '']
    if comparisons or records:
        lines += comparison_section(comparisons, records)
    return '\n'.join(lines)


def emit_report(selection, metric_values, comparisons, out_dir, name='report.md', **context):
    """Render the report and write it to ``out_dir``; returns the path and the text."""
    text = render_report(metric_values, selection=selection, comparisons=comparisons, **context)
    path = Path(out_dir) / name
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding='utf-8', newline='\n')
    except OSError as exc:
        raise ExportError(f"{path}: {exc.strerror or exc}") from None
    logger.info("report written to %s", path)
    return path, text
