use std::fmt::Write;

use super::Floorplan;

const MARGIN: f64 = 10.0;

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Vector drawing of a floorplan in µm units. Blocks that leave the box
/// carry the `out-of-box` class; the box itself is dashed.
pub fn render_svg(plan: &Floorplan) -> String {
    let extent_w = plan.placements.iter().map(|p| p.x + p.width).fold(plan.bbox.width, f64::max);
    let extent_h = plan.placements.iter().map(|p| p.y + p.height).fold(plan.bbox.height, f64::max);
    let (w, h) = (extent_w + 2.0 * MARGIN, extent_h + 2.0 * MARGIN);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w:.3} {h:.3}" width="{w:.3}" height="{h:.3}" data-fit="{}">"#,
        plan.fit
    );
    s.push_str(
        "<style>.block{fill:#cfe3f7;stroke:#1f4e79;stroke-width:0.5}.out-of-box{fill:#f7c9c9;stroke:#b00020}\
         .bbox{fill:none;stroke:#c9a400;stroke-width:1;stroke-dasharray:6 4}text{font:4px sans-serif}</style>\n",
    );
    // y grows upward in floorplan coordinates, downward in SVG.
    let flip = |y: f64, height: f64| MARGIN + extent_h - y - height;
    let _ = writeln!(
        s,
        r#"<rect class="bbox" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
        MARGIN,
        flip(0.0, plan.bbox.height),
        plan.bbox.width,
        plan.bbox.height
    );
    for p in &plan.placements {
        let class = if p.inside { "block" } else { "block out-of-box" };
        let (x, y) = (MARGIN + p.x, flip(p.y, p.height));
        let label = escape(&format!("{}/{}", p.ip, p.variant));
        let _ = writeln!(
            s,
            r#"<g data-ip="{}"><rect class="{class}" x="{x:.3}" y="{y:.3}" width="{:.3}" height="{:.3}"/><text x="{:.3}" y="{:.3}">{label}</text></g>"#,
            escape(&p.ip),
            p.width,
            p.height,
            x + 1.0,
            y + 5.0
        );
    }
    s.push_str("</svg>\n");
    s
}
