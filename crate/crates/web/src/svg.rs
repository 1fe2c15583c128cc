use std::collections::BTreeMap;
use std::fmt::Write as _;

use pctgraph::Graph;

const SIZE: f64 = 280.0;
const RADIUS: f64 = 95.0;
const NODE_R: f64 = 17.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Nodes on a circle in id order, edges as arrows. Parallel edges bend apart
/// and loops stack above their node.
pub fn render(g: &Graph) -> String {
    let ids: Vec<&str> = g.node_ids().collect();
    let n = ids.len();
    let c = SIZE / 2.0;
    let pos: BTreeMap<&str, (f64, f64)> = ids
        .iter()
        .enumerate()
        .map(|(k, id)| {
            if n == 1 {
                (*id, (c, c + 20.0))
            } else {
                let a = std::f64::consts::TAU * k as f64 / n as f64 - std::f64::consts::FRAC_PI_2;
                (*id, (c + RADIUS * a.cos(), c + 10.0 + RADIUS * a.sin()))
            }
        })
        .collect();

    let mut out = String::new();
    let _ = write!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {SIZE} {SIZE}" width="{SIZE}" height="{SIZE}" font-family="sans-serif" font-size="11"><defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="7" markerHeight="7" orient="auto-start-reverse"><path d="M0,0 L10,5 L0,10 z" fill="#444"/></marker></defs>"##
    );

    // Group edges by unordered endpoint pair so parallel ones can fan out.
    let mut groups: BTreeMap<(&str, &str), Vec<(&str, &pctgraph::graph::Edge)>> = BTreeMap::new();
    for (id, e) in g.edges() {
        let key = if e.src <= e.tgt { (e.src.as_str(), e.tgt.as_str()) } else { (e.tgt.as_str(), e.src.as_str()) };
        groups.entry(key).or_default().push((id, e));
    }
    for ((a, b), edges) in &groups {
        let count = edges.len() as f64;
        for (k, (id, e)) in edges.iter().enumerate() {
            let text = escape(&format!("{id}:{}", e.label));
            let (sx, sy) = pos[e.src.as_str()];
            let (tx, ty) = pos[e.tgt.as_str()];
            if a == b {
                let h = 45.0 + 18.0 * k as f64;
                let w = 22.0 + 8.0 * k as f64;
                let _ = write!(
                    out,
                    r##"<path d="M{:.1},{:.1} C{:.1},{:.1} {:.1},{:.1} {:.1},{:.1}" fill="none" stroke="#444" marker-end="url(#arrow)"/><text x="{:.1}" y="{:.1}" text-anchor="middle" fill="#a33">{text}</text>"##,
                    sx - 6.0,
                    sy - NODE_R + 2.0,
                    sx - w,
                    sy - h,
                    sx + w,
                    sy - h,
                    sx + 6.0,
                    sy - NODE_R + 2.0,
                    sx,
                    sy - h * 0.75 - 3.0,
                );
                continue;
            }
            let (dx, dy) = (tx - sx, ty - sy);
            let len = (dx * dx + dy * dy).sqrt().max(1.0);
            let (ux, uy) = (dx / len, dy / len);
            // Bend relative to the canonical direction so opposite edges do not overlap.
            let sign = if e.src.as_str() == *a { 1.0 } else { -1.0 };
            let bend = (k as f64 - (count - 1.0) / 2.0) * 28.0 * sign;
            let (mx, my) = ((sx + tx) / 2.0 - uy * bend, (sy + ty) / 2.0 + ux * bend);
            let (x1, y1) = (sx + ux * NODE_R, sy + uy * NODE_R);
            let (x2, y2) = (tx - ux * NODE_R, ty - uy * NODE_R);
            let _ = write!(
                out,
                r##"<path d="M{x1:.1},{y1:.1} Q{mx:.1},{my:.1} {x2:.1},{y2:.1}" fill="none" stroke="#444" marker-end="url(#arrow)"/><text x="{mx:.1}" y="{my:.1}" text-anchor="middle" fill="#a33">{text}</text>"##
            );
        }
    }
    for (id, label) in g.nodes() {
        let (x, y) = pos[id];
        let _ = write!(
            out,
            r##"<circle cx="{x:.1}" cy="{y:.1}" r="{NODE_R}" fill="#e8eef8" stroke="#335"/><text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"##,
            y + 4.0,
            escape(&format!("{id}:{label}"))
        );
    }
    out.push_str("</svg>");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use pctgraph::graph::fixtures;

    #[test]
    fn counts_and_escaping() {
        let s = render(&fixtures::e2());
        assert_eq!(s.matches("<circle").count(), 2);
        assert_eq!(s.matches("marker-end").count(), 1);
        let g = Graph::new().with_node("<a&b>", "A");
        assert!(render(&g).contains("&lt;a&amp;b&gt;:A"));
        assert_eq!(render(&fixtures::lp()), render(&fixtures::lp()));
    }
}
