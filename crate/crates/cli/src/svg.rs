//! Diverging red–white–blue heatmaps. White is zero; full red and full blue
//! are `+max|v|` and `−max|v|`.

use std::fmt::Write;

fn color(t: f64) -> String {
    let fade = |t: f64| (255.0 * (1.0 - t.abs().min(1.0))).round() as u8;
    if t >= 0.0 {
        format!("#ff{0:02x}{0:02x}", fade(t))
    } else {
        format!("#{0:02x}{0:02x}ff", fade(t))
    }
}

/// `values[i * n + j]` is the cell with horizontal index `i` and vertical
/// index `j`; `j = 0` is drawn at the bottom.
pub fn heatmap(values: &[f64], n: usize, labels: (&str, &str)) -> String {
    let cell = (512 / n).max(1);
    let side = cell * n;
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" shape-rendering="crispEdges">"#,
        w = side + 40,
        h = side + 40
    );
    let _ = writeln!(s, r#"<g transform="translate(30,10)">"#);
    for i in 0..n {
        for j in 0..n {
            let v = values[i * n + j];
            let t = if scale > 0.0 { v / scale } else { 0.0 };
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{}" width="{cell}" height="{cell}" fill="{}"/>"#,
                i * cell,
                (n - 1 - j) * cell,
                color(t)
            );
        }
    }
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{side}" height="{side}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="14" text-anchor="middle">{}</text>"#,
        side / 2,
        side + 22,
        labels.0
    );
    let _ = writeln!(
        s,
        r#"<text x="-12" y="{}" font-size="14" text-anchor="middle">{}</text>"#,
        side / 2,
        labels.1
    );
    s.push_str("</g>\n</svg>\n");
    s
}
