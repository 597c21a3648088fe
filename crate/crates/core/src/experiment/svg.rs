//! Train/validation accuracy curves as standalone SVG.

use std::fmt::Write;

use crate::training::RunRecord;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

pub const TRAIN_COLOR: &str = "#1f77b4";
pub const VAL_COLOR: &str = "#ff7f0e";

/// Per-step mean of train and validation accuracy over a group of runs.
///
/// Runs of unequal length are truncated to the shortest.
pub fn mean_curves(records: &[&RunRecord]) -> (Vec<f64>, Vec<f64>) {
    let n = records.iter().map(|r| r.steps.len()).min().unwrap_or(0);
    let k = records.len() as f64;
    (0..n)
        .map(|i| {
            let tr = records.iter().map(|r| r.steps[i].train_accuracy).sum::<f64>() / k;
            let va = records.iter().map(|r| r.steps[i].val_accuracy).sum::<f64>() / k;
            (tr, va)
        })
        .unzip()
}

fn x_pos(step: f64, steps: f64) -> f64 {
    LEFT + (WIDTH - LEFT - RIGHT) * if steps > 0.0 { step / steps } else { 0.0 }
}

fn y_pos(acc: f64) -> f64 {
    TOP + (HEIGHT - TOP - BOTTOM) * (1.0 - acc.clamp(0.0, 1.0))
}

fn polyline(out: &mut String, ys: &[f64], steps: f64, color: &str) {
    let points: Vec<String> = ys
        .iter()
        .enumerate()
        .map(|(i, &y)| format!("{:.2},{:.2}", x_pos((i + 1) as f64, steps), y_pos(y)))
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
        points.join(" ")
    );
}

/// Renders one chart. Step `i` (1-based) of each series is plotted at
/// `x = i` on an axis spanning `0..=steps`; the y axis spans accuracy 0 to 1.
pub fn emit_svg(title: &str, train: &[f64], val: &[f64]) -> String {
    let steps = train.len().max(val.len()) as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    for tick in 0..=4 {
        let acc = tick as f64 / 4.0;
        let y = y_pos(acc);
        let _ = writeln!(
            out,
            r##"<line class="grid" x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##,
            WIDTH - RIGHT
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{acc:.2}</text>"#,
            LEFT - 6.0,
            y + 4.0
        );
    }
    for tick in 0..=4 {
        let step = (steps * tick as f64 / 4.0).round();
        let x = x_pos(step, steps);
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{step}</text>"#,
            HEIGHT - BOTTOM + 18.0
        );
    }
    let _ = writeln!(
        out,
        r##"<rect x="{LEFT}" y="{TOP}" width="{:.2}" height="{:.2}" fill="none" stroke="#444444"/>"##,
        WIDTH - LEFT - RIGHT,
        HEIGHT - TOP - BOTTOM
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">step</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">accuracy</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );

    polyline(&mut out, train, steps, TRAIN_COLOR);
    polyline(&mut out, val, steps, VAL_COLOR);

    let lx = WIDTH - RIGHT - 130.0;
    let ly = HEIGHT - BOTTOM - 40.0;
    for (i, (label, color)) in [("train", TRAIN_COLOR), ("validation", VAL_COLOR)].iter().enumerate() {
        let y = ly + 16.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"/>"#,
            lx + 24.0
        );
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{label}</text>"#, lx + 30.0, y + 4.0);
    }
    out.push_str("</svg>\n");
    out
}

/// Chart for a group of runs sharing one configuration.
pub fn emit_group_svg(title: &str, records: &[&RunRecord]) -> String {
    let (train, val) = mean_curves(records);
    emit_svg(title, &train, &val)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
