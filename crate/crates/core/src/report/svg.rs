//! Minimal hand-rolled SVG figures: a PCA scatter and BFI boxplots.
//! Elements are emitted in a fixed order with fixed-precision coordinates
//! so regenerated figures are byte-identical.

use crate::experiment::RunArtifact;
use crate::liwc::CorpusMatrix;
use crate::persona::{Group, TraitName};

const CREATIVE_COLOR: &str = "#e06c3a";
const ANALYTICAL_COLOR: &str = "#3a78e0";

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

struct Extent {
    min: f64,
    max: f64,
}

impl Extent {
    fn of(values: impl Iterator<Item = f64>) -> Extent {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in values {
            min = min.min(v);
            max = max.max(v);
        }
        if !min.is_finite() || min == max {
            // Degenerate span; give the axis some room.
            min -= 1.0;
            max += 1.0;
        }
        Extent { min, max }
    }

    fn scale(&self, v: f64, lo: f64, hi: f64) -> f64 {
        lo + (v - self.min) / (self.max - self.min) * (hi - lo)
    }
}

/// Scatter of per-agent 2-D projections, colored by group.
pub fn pca_scatter(matrix: &CorpusMatrix, coords: &[Vec<f64>]) -> String {
    let (width, height, margin) = (480.0, 360.0, 40.0);
    let xs = Extent::of(coords.iter().map(|c| c[0]));
    let ys = Extent::of(coords.iter().map(|c| c[1]));

    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    );
    out.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    ));
    out.push_str(&format!(
        "  <line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"#444\"/>\n  <line \
         x1=\"{m}\" y1=\"{m}\" x2=\"{m}\" y2=\"{b}\" stroke=\"#444\"/>\n",
        m = margin,
        b = height - margin,
        r = width - margin,
    ));
    out.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"#222\">PC1</text>\n",
        width / 2.0,
        height - 10.0
    ));
    out.push_str(&format!(
        "  <text x=\"12\" y=\"{}\" font-size=\"12\" fill=\"#222\" transform=\"rotate(-90 12 \
         {y})\">PC2</text>\n",
        height / 2.0,
        y = height / 2.0
    ));
    for ((label, point), agent_id) in matrix.labels.iter().zip(coords).zip(&matrix.agent_ids) {
        let cx = xs.scale(point[0], margin, width - margin);
        let cy = ys.scale(point[1], height - margin, margin);
        let color = if *label == 1 {
            CREATIVE_COLOR
        } else {
            ANALYTICAL_COLOR
        };
        out.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{color}\" fill-opacity=\"0.7\"><title>\
             {agent_id}</title></circle>\n",
            fmt(cx),
            fmt(cy)
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

struct BoxGeometry<'a> {
    x: f64,
    box_width: f64,
    extent: &'a Extent,
    top: f64,
    bottom: f64,
}

fn boxplot(out: &mut String, values: &mut [f64], geometry: &BoxGeometry<'_>, color: &str) {
    if values.is_empty() {
        return;
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("scores are finite"));
    let BoxGeometry {
        x,
        box_width,
        extent,
        top,
        bottom,
    } = *geometry;
    let y = |v: f64| extent.scale(v, bottom, top);
    let (min, q1, med, q3, max) = (
        values[0],
        quantile(values, 0.25),
        quantile(values, 0.5),
        quantile(values, 0.75),
        values[values.len() - 1],
    );
    let half = box_width / 2.0;
    // Whisker, box, median tick.
    out.push_str(&format!(
        "  <line x1=\"{x0}\" y1=\"{ymin}\" x2=\"{x0}\" y2=\"{ymax}\" stroke=\"{color}\"/>\n",
        x0 = fmt(x),
        ymin = fmt(y(min)),
        ymax = fmt(y(max)),
    ));
    out.push_str(&format!(
        "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{color}\" \
         fill-opacity=\"0.35\" stroke=\"{color}\"/>\n",
        fmt(x - half),
        fmt(y(q3)),
        fmt(box_width),
        fmt((y(q1) - y(q3)).abs()),
    ));
    out.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{ym}\" x2=\"{}\" y2=\"{ym}\" stroke=\"{color}\" \
         stroke-width=\"2\"/>\n",
        fmt(x - half),
        fmt(x + half),
        ym = fmt(y(med)),
    ));
}

/// Per-trait boxplots of questionnaire scores by group, one panel for the
/// before-writing phase and one for the run's after phase.
pub fn bfi_boxplots(
    artifact: &RunArtifact,
    before: &super::ScoreTable,
    after: &super::ScoreTable,
) -> String {
    let (panel_width, height, margin) = (420.0, 320.0, 36.0);
    let width = panel_width * 2.0;
    let extent = Extent {
        min: 0.0,
        max: 50.0,
    };
    let phases: [(&str, &super::ScoreTable); 2] =
        [("Before writing", before), ("After writing", after)];

    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    );
    out.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    ));
    for (panel, (title, scores)) in phases.iter().enumerate() {
        let x0 = panel as f64 * panel_width;
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"20\" font-size=\"13\" fill=\"#222\">{title}</text>\n",
            x0 + margin
        ));
        for (t_idx, trait_name) in TraitName::ALL.iter().enumerate() {
            let slot = panel_width - 2.0 * margin;
            let center = x0 + margin + slot * (t_idx as f64 + 0.5) / 5.0;
            out.push_str(&format!(
                "  <text x=\"{}\" y=\"{}\" font-size=\"10\" fill=\"#222\" \
                 text-anchor=\"middle\">{}</text>\n",
                fmt(center),
                height - 8.0,
                trait_name.code()
            ));
            for (g_idx, group) in [Group::Analytical, Group::Creative].iter().enumerate() {
                let mut values: Vec<f64> = scores
                    .iter()
                    .filter(|(agent_id, _)| {
                        artifact
                            .agent(agent_id)
                            .map(|a| a.group == *group)
                            .unwrap_or(false)
                    })
                    .map(|(_, sums)| f64::from(sums[trait_name]))
                    .collect();
                let offset = if g_idx == 0 { -9.0 } else { 9.0 };
                let color = if *group == Group::Creative {
                    CREATIVE_COLOR
                } else {
                    ANALYTICAL_COLOR
                };
                let geometry = BoxGeometry {
                    x: center + offset,
                    box_width: 14.0,
                    extent: &extent,
                    top: 30.0,
                    bottom: height - margin,
                };
                boxplot(&mut out, &mut values, &geometry, color);
            }
        }
    }
    out.push_str("</svg>\n");
    out
}
