//! Minimal SVG rendering of learning curves. No plotting dependency: the
//! output is a fixed-layout chart built from a handful of elements, and
//! identical input always renders identical bytes.

use crate::harness::metrics::CurvePoint;

const W: f64 = 640.0;
const H: f64 = 400.0;
const ML: f64 = 52.0; // margins
const MR: f64 = 16.0;
const MT: f64 = 34.0;
const MB: f64 = 44.0;

fn fx(episode: u32, max_episode: u32) -> f64 {
    let span = max_episode.max(1) as f64;
    ML + (W - ML - MR) * (episode as f64 / span)
}

fn fy(rate: f64) -> f64 {
    let clamped = rate.clamp(0.0, 1.0);
    H - MB - (H - MT - MB) * clamped
}

fn poly(points: &[(f64, f64)]) -> String {
    points
        .iter()
        .map(|(x, y)| format!("{x:.1},{y:.1}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Render the success-rate curve: mean line, standard-error band, fixed
/// [0, 1] axis.
pub fn render_curve_svg(id: &str, curve: &[CurvePoint]) -> String {
    let max_episode = curve.last().map_or(0, |p| p.eval_episode);
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {H}\" \
         font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    svg.push_str(&format!(
        "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{ML}\" y=\"20\" font-size=\"14\">{id}: greedy success rate</text>\n"
    ));

    // Horizontal gridlines and y labels at 0, 0.25, .., 1.
    for i in 0..=4 {
        let rate = f64::from(i) * 0.25;
        let y = fy(rate);
        svg.push_str(&format!(
            "<line x1=\"{ML}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"#ddd\"/>\n",
            W - MR
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{rate}</text>\n",
            ML - 6.0,
            y + 4.0
        ));
    }
    // X labels at both ends and the middle.
    for episode in [0, max_episode / 2, max_episode] {
        let x = fx(episode, max_episode);
        svg.push_str(&format!(
            "<text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{episode}</text>\n",
            H - MB + 16.0
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">training episodes</text>\n",
        (ML + W - MR) / 2.0,
        H - 10.0
    ));

    if !curve.is_empty() {
        // Error band: mean + sem forward, mean - sem backward.
        let mut band: Vec<(f64, f64)> = curve
            .iter()
            .map(|p| {
                (
                    fx(p.eval_episode, max_episode),
                    fy(p.success.mean + p.success.sem),
                )
            })
            .collect();
        band.extend(curve.iter().rev().map(|p| {
            (
                fx(p.eval_episode, max_episode),
                fy(p.success.mean - p.success.sem),
            )
        }));
        svg.push_str(&format!(
            "<polygon points=\"{}\" fill=\"#9ecae1\" fill-opacity=\"0.5\"/>\n",
            poly(&band)
        ));

        let mean: Vec<(f64, f64)> = curve
            .iter()
            .map(|p| (fx(p.eval_episode, max_episode), fy(p.success.mean)))
            .collect();
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n",
            poly(&mean)
        ));

        let last = curve.last().unwrap();
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"20\" text-anchor=\"end\">final {:.3} +/- {:.3}</text>\n",
            W - MR,
            last.success.mean,
            last.success.sem
        ));
    }

    // Axis frame.
    svg.push_str(&format!(
        "<line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        H - MB
    ));
    svg.push_str(&format!(
        "<line x1=\"{ML}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        H - MB,
        W - MR,
        H - MB
    ));
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::metrics::SummaryStat;

    fn point(eval_episode: u32, mean: f64, sem: f64) -> CurvePoint {
        CurvePoint {
            eval_episode,
            success: SummaryStat { mean, sem },
            ret: SummaryStat { mean, sem },
        }
    }

    #[test]
    fn renders_curve_elements() {
        let curve = vec![
            point(0, 0.0, 0.0),
            point(50, 0.6, 0.1),
            point(100, 1.0, 0.0),
        ];
        let svg = render_curve_svg("demo", &curve);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("demo: greedy success rate"));
        assert!(svg.contains("<polyline"));
        assert!(svg.contains("<polygon"));
        assert!(svg.contains("final 1.000 +/- 0.000"));
        assert_eq!(svg, render_curve_svg("demo", &curve), "deterministic");
    }

    #[test]
    fn x_positions_are_monotone() {
        let curve: Vec<CurvePoint> = (0..=10).map(|i| point(i * 10, 0.5, 0.0)).collect();
        let svg = render_curve_svg("m", &curve);
        let line = svg
            .lines()
            .find(|l| l.starts_with("<polyline"))
            .expect("mean line present");
        let xs: Vec<f64> = line
            .split('"')
            .nth(1)
            .unwrap()
            .split(' ')
            .map(|pair| pair.split(',').next().unwrap().parse::<f64>().unwrap())
            .collect();
        assert_eq!(xs.len(), 11);
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn empty_curve_still_renders_axes() {
        let svg = render_curve_svg("empty", &[]);
        assert!(svg.contains("<line"));
        assert!(!svg.contains("<polyline"));
    }
}
