//! Minimal SVG line plots generated straight from report tables.

use crate::report::Table;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 54.0;

const SERIES_COLORS: &[&str] = &[
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Renders the table as polylines: first column on the x-axis, every other
/// column a series. No computation beyond scaling.
pub fn render_table(table: &Table) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out.push_str(&format!(
        "<text x=\"{}\" y=\"20\" font-family=\"monospace\" font-size=\"14\">{}</text>\n",
        MARGIN,
        escape(&table.name)
    ));

    if table.rows.is_empty() || table.columns.len() < 2 {
        out.push_str("</svg>\n");
        return out;
    }

    let xs: Vec<f64> = table.rows.iter().map(|r| r[0]).collect();
    let (x_min, x_max) = min_max(&xs);
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for row in &table.rows {
        for &v in &row[1..] {
            if v.is_finite() {
                y_min = y_min.min(v);
                y_max = y_max.max(v);
            }
        }
    }
    if !y_min.is_finite() || y_min == y_max {
        y_max = y_min + 1.0;
    }
    let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };
    let sx = |x: f64| MARGIN + (x - x_min) / x_span * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y_min) / (y_max - y_min) * (HEIGHT - 2.0 * MARGIN);

    // Axes.
    out.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n<line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN,
        t = MARGIN,
    ));
    out.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\">{}</text>\n",
        MARGIN,
        HEIGHT - MARGIN + 16.0,
        escape(&table.columns[0])
    ));

    for (s, color) in table.columns[1..].iter().zip(SERIES_COLORS.iter().cycle()) {
        let idx = table.columns.iter().position(|c| c == s).unwrap();
        let points: Vec<String> = table
            .rows
            .iter()
            .filter(|r| r[idx].is_finite())
            .map(|r| format!("{:.2},{:.2}", sx(r[0]), sy(r[idx])))
            .collect();
        out.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            points.join(" ")
        ));
    }
    // Legend.
    for (i, s) in table.columns[1..].iter().enumerate() {
        let color = SERIES_COLORS[i % SERIES_COLORS.len()];
        let y = MARGIN + 14.0 * i as f64;
        out.push_str(&format!(
            "<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{color}\"/>\n<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\">{}</text>\n",
            WIDTH - MARGIN - 150.0,
            y - 9.0,
            WIDTH - MARGIN - 136.0,
            y,
            escape(s)
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn min_max(values: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        if v.is_finite() {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    (lo, hi)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_wellformed_svg() {
        let mut t = Table::new("demo", &["x", "a", "b"]);
        for i in 0..10 {
            t.push(vec![i as f64, (i * i) as f64, 1.0 / (1.0 + i as f64)]);
        }
        let svg = render_table(&t);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
    }
}
