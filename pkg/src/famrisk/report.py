"""Analysis of disease records and deterministic report/figure rendering.

Output formats: ``table`` (plain text, dichotomous columns in the published
table order), ``csv`` (the input schema with computed columns appended, so it
reloads through `dataset.load_records`), and ``json`` (machine-readable;
records round-trip via `records_from_structured`). All rendering is
byte-stable given identical inputs: fixed float formatting, no timestamps,
no environment-dependent content.

Figures are standalone SVG documents (fixed 800x600 viewBox, 1001-point
Lorenz polylines) written by hand rather than through a plotting library so
that identical inputs yield identical bytes.
"""

import io
import json
import math
import re
from dataclasses import dataclass

from .betarisk import BetaRiskModel, LorenzCurve, fit_from_risk_and_frr
from .dataset import SCHEMA, DiseaseRecord, record_to_row
from .dichotomous import RiskStructureSolution, solve_risk_structure
from .errors import FamriskError

TOP_FRACTION = 0.10
LORENZ_POINTS = 1001
SKYSCRAPER_SAMPLES = 400

# Lorenz comparison scenarios at 1% lifetime risk. The middle FRR of the
# published three-scenario figure is not stated; 2.0 reproduces its printed
# 33% top-decile burden share.
SCENARIO_MEAN_RISK = 0.01
SCENARIO_FRRS = (1.5, 2.0, 6.0)

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b", "#17becf", "#7f7f7f")

_FORMATS = ("table", "csv", "json")


@dataclass(frozen=True)
class ContinuousAnalysis:
    model: BetaRiskModel
    gini: float
    top10_share: float
    mean_risk_ratio10: float
    lorenz: LorenzCurve


@dataclass(frozen=True)
class AnalysisResult:
    record: DiseaseRecord
    dichotomous: RiskStructureSolution | None = None
    continuous: ContinuousAnalysis | None = None
    error: str | None = None


def analyze(record):
    """Run every analysis the record's inputs support.

    Solver failures propagate as `FamriskError` with the record name attached;
    use `analyze_many` to collect them as per-record annotations instead.
    """
    dichotomous = None
    continuous = None
    try:
        if record.has_dichotomous_inputs:
            dichotomous = solve_risk_structure(record.frr1, record.frr2)
        if record.has_continuous_inputs:
            model = fit_from_risk_and_frr(record.lifetime_risk, record.frr1)
            continuous = ContinuousAnalysis(
                model=model,
                gini=model.gini(),
                top10_share=model.top_share(TOP_FRACTION),
                mean_risk_ratio10=model.mean_risk_ratio(TOP_FRACTION),
                lorenz=model.lorenz_curve(LORENZ_POINTS),
            )
    except FamriskError as exc:
        raise type(exc)(f"{record.name}: {exc}") from exc
    return AnalysisResult(record=record, dichotomous=dichotomous,
                          continuous=continuous)


def analyze_many(records):
    """Analyze each record, annotating failures instead of raising.

    Every input record appears in the output, in input order.
    """
    results = []
    for record in records:
        try:
            results.append(analyze(record))
        except FamriskError as exc:
            results.append(AnalysisResult(record=record, error=str(exc)))
    return results


# ---------------------------------------------------------------------------
# Text / CSV / JSON rendering
# ---------------------------------------------------------------------------

def _fmt(value, precision):
    if value is None:
        return ""
    if isinstance(value, float) and math.isnan(value):
        return "undefined"
    return f"{value:.{precision}g}"


def _text_table(header, rows):
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) if rows else len(header[i])
              for i in range(len(header))]
    out = []
    for cells in [header] + [None] + rows:
        if cells is None:
            out.append("  ".join("-" * w for w in widths))
        else:
            out.append("  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip())
    return "\n".join(out)


def render_report(results, fmt="table", precision=6):
    """Deterministic document for a list of `AnalysisResult`."""
    if fmt not in _FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {_FORMATS}")
    if fmt == "table":
        return _render_table(results, precision)
    if fmt == "csv":
        return _render_csv(results, precision)
    return _render_json(results)


def _render_table(results, precision):
    sections = []
    dich = [r for r in results if r.dichotomous is not None]
    if dich:
        rows = []
        for r in dich:
            sol = r.dichotomous
            rows.append([
                r.record.name,
                r.record.relationship,
                _fmt(r.record.frr1, precision),
                _fmt(r.record.frr2, precision),
                _fmt(sol.irr, precision),
                "undefined" if sol.degenerate else _fmt(sol.q, precision),
            ])
        sections.append("Two-group risk structure solved from (FRR1, FRR2)\n"
                        + _text_table(
                            ["disease", "relationship", "FRR1", "FRR2", "IRR", "q"],
                            rows))
    cont = [r for r in results if r.continuous is not None]
    if cont:
        rows = []
        for r in cont:
            c = r.continuous
            rows.append([
                r.record.name,
                _fmt(r.record.lifetime_risk, precision),
                _fmt(r.record.frr1, precision),
                _fmt(c.model.alpha, precision) if not c.model.is_point_mass else "",
                _fmt(c.model.beta, precision) if not c.model.is_point_mass else "",
                _fmt(c.gini, precision),
                _fmt(c.top10_share, precision),
                _fmt(c.mean_risk_ratio10, precision),
            ])
        sections.append("Beta risk distribution fitted from (lifetime risk, FRR1)\n"
                        + _text_table(
                            ["disease", "risk", "FRR1", "alpha", "beta",
                             "gini", "top10%_share", "mean_ratio_top10%"],
                            rows))
    failed = [r for r in results if r.error is not None]
    if failed:
        lines = [f"{r.record.name}: {r.error}" for r in failed]
        sections.append("Records with errors\n" + "\n".join(lines))
    return "\n\n".join(sections) + "\n" if sections else ""


_CSV_COMPUTED = ("irr", "q", "solver_residual", "alpha", "beta", "gini",
                 "top10_share", "mean_risk_ratio10", "error")


def _render_csv(results, precision):
    buf = io.StringIO()
    buf.write(",".join(SCHEMA + _CSV_COMPUTED) + "\n")
    for r in results:
        cells = record_to_row(r.record)
        sol = r.dichotomous
        c = r.continuous
        cells += [
            _fmt(sol.irr if sol else None, precision),
            "" if sol is None or sol.degenerate else _fmt(sol.q, precision),
            _fmt(sol.residual_norm if sol else None, precision),
            _fmt(c.model.alpha if c and not c.model.is_point_mass else None, precision),
            _fmt(c.model.beta if c and not c.model.is_point_mass else None, precision),
            _fmt(c.gini if c else None, precision),
            _fmt(c.top10_share if c else None, precision),
            _fmt(c.mean_risk_ratio10 if c else None, precision),
            r.error or "",
        ]
        buf.write(",".join(_csv_quote(cell) for cell in cells) + "\n")
    return buf.getvalue()


def _csv_quote(cell):
    if any(ch in cell for ch in ',"\n'):
        return '"' + cell.replace('"', '""') + '"'
    return cell


def _record_dict(record):
    return {
        "name": record.name,
        "relationship": record.relationship,
        "frr1": record.frr1,
        "frr2": record.frr2,
        "lifetime_risk": record.lifetime_risk,
        "source": record.source,
        "expected": dict(record.expected),
    }


def _render_json(results):
    doc = {"records": [], "results": []}
    for r in results:
        doc["records"].append(_record_dict(r.record))
        entry = {"name": r.record.name, "error": r.error}
        if r.dichotomous is not None:
            sol = r.dichotomous
            entry["dichotomous"] = {
                "irr": sol.irr,
                "q": None if sol.degenerate else sol.q,
                "residual_norm": sol.residual_norm,
                "iterations": sol.iterations,
                "degenerate": sol.degenerate,
            }
        else:
            entry["dichotomous"] = None
        if r.continuous is not None:
            c = r.continuous
            entry["continuous"] = {
                "alpha": c.model.alpha,
                "beta": c.model.beta,
                "point_mass": c.model.point_mass,
                "gini": c.gini,
                "top10_share": c.top10_share,
                "mean_risk_ratio10": c.mean_risk_ratio10,
            }
        else:
            entry["continuous"] = None
        doc["results"].append(entry)
    return json.dumps(doc, indent=2) + "\n"


def records_from_structured(text):
    """Rebuild `DiseaseRecord` objects from a json-format report document."""
    doc = json.loads(text)
    records = []
    for entry in doc["records"]:
        records.append(DiseaseRecord(
            name=entry["name"],
            relationship=entry["relationship"],
            frr1=entry["frr1"],
            frr2=entry["frr2"],
            lifetime_risk=entry["lifetime_risk"],
            source=entry["source"],
            expected=dict(entry["expected"]),
        ))
    return records


# ---------------------------------------------------------------------------
# SVG figures
# ---------------------------------------------------------------------------

_VIEW_W, _VIEW_H = 800, 600
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 25, 25, 60


def _px(u):
    return _MARGIN_L + u * (_VIEW_W - _MARGIN_L - _MARGIN_R)


def _py(v):
    return _VIEW_H - _MARGIN_B - v * (_VIEW_H - _MARGIN_T - _MARGIN_B)


def render_lorenz_figure(curves, labels):
    """Standalone SVG with the equality diagonal and one path per Lorenz curve."""
    if len(curves) != len(labels):
        raise ValueError("need one label per curve")
    out = io.StringIO()
    out.write(f'<svg xmlns="http://www.w3.org/2000/svg" '
              f'viewBox="0 0 {_VIEW_W} {_VIEW_H}" font-family="sans-serif">\n')
    out.write(f'<rect width="{_VIEW_W}" height="{_VIEW_H}" fill="white"/>\n')
    x0, x1 = _px(0.0), _px(1.0)
    y0, y1 = _py(0.0), _py(1.0)
    out.write(f'<rect x="{x0:.2f}" y="{y1:.2f}" width="{x1 - x0:.2f}" '
              f'height="{y0 - y1:.2f}" fill="none" stroke="black"/>\n')
    for tick in range(6):
        v = tick / 5.0
        out.write(f'<text x="{_px(v):.2f}" y="{y0 + 22:.2f}" font-size="14" '
                  f'text-anchor="middle">{v:.1f}</text>\n')
        out.write(f'<text x="{x0 - 10:.2f}" y="{_py(v) + 5:.2f}" font-size="14" '
                  f'text-anchor="end">{v:.1f}</text>\n')
    out.write(f'<text x="{(x0 + x1) / 2:.2f}" y="{y0 + 45:.2f}" font-size="16" '
              f'text-anchor="middle">population fraction (lowest risk first)</text>\n')
    out.write(f'<text x="18" y="{(y0 + y1) / 2:.2f}" font-size="16" '
              f'text-anchor="middle" transform="rotate(-90 18 {(y0 + y1) / 2:.2f})">'
              f'share of disease burden</text>\n')
    out.write(f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x1:.2f}" y2="{y1:.2f}" '
              f'stroke="black" stroke-dasharray="6,4"/>\n')
    for i, (curve, label) in enumerate(zip(curves, labels)):
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(
            f"{_px(u):.2f},{_py(v):.2f}"
            for u, v in zip(curve.population_fraction, curve.burden_fraction))
        out.write(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                  f'stroke-width="2"/>\n')
        ly = _MARGIN_T + 22 + 20 * i
        out.write(f'<line x1="{x0 + 12:.2f}" y1="{ly}" x2="{x0 + 42:.2f}" y2="{ly}" '
                  f'stroke="{color}" stroke-width="2"/>\n')
        out.write(f'<text x="{x0 + 50:.2f}" y="{ly + 5}" font-size="14">'
                  f'{_xml_escape(label)}</text>\n')
    out.write("</svg>\n")
    return out.getvalue()


def _xml_escape(text):
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;"))


def slugify(name):
    slug = re.sub(r"[^a-z0-9]+", "-", name.lower()).strip("-")
    return slug or "record"


def write_figures(results, out_dir, seed):
    """One Lorenz SVG per continuous record, the scenario-comparison SVG, and
    a column-landscape sample CSV (400 seeded risk draws).

    Returns the list of written paths (deterministic order and content).
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    used = set()
    continuous = [r for r in results if r.continuous is not None]
    for r in continuous:
        slug = slugify(r.record.name)
        while slug in used:
            slug += "-x"
        used.add(slug)
        label = (f"{r.record.name} (risk {_fmt(r.record.lifetime_risk, 6)}, "
                 f"FRR {_fmt(r.record.frr1, 6)}, Gini {r.continuous.gini:.2f})")
        path = out_dir / f"lorenz_{slug}.svg"
        path.write_text(render_lorenz_figure([r.continuous.lorenz], [label]),
                        encoding="utf-8")
        written.append(path)

    curves, labels = [], []
    for frr in SCENARIO_FRRS:
        model = fit_from_risk_and_frr(SCENARIO_MEAN_RISK, frr)
        curves.append(model.lorenz_curve(LORENZ_POINTS))
        labels.append(f"FRR {frr:g} (Gini {model.gini():.2f})")
    path = out_dir / "lorenz_scenarios.svg"
    path.write_text(render_lorenz_figure(curves, labels), encoding="utf-8")
    written.append(path)

    sky = _skyscraper_source(continuous)
    if sky is not None:
        samples = sky.continuous.model.sample_risks(SKYSCRAPER_SAMPLES, seed)
        buf = io.StringIO()
        buf.write("family,risk\n")
        for i, v in enumerate(samples):
            buf.write(f"{i},{v:.10g}\n")
        path = out_dir / "skyscraper_samples.csv"
        path.write_text(buf.getvalue(), encoding="utf-8")
        written.append(path)
    return written


def _skyscraper_source(continuous_results):
    for r in continuous_results:
        if "parkinson" in r.record.name.lower():
            return r
    return continuous_results[0] if continuous_results else None
