//! SVG pictures of two-dimensional blocks with anti-diagonal overlays.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::product2d::{Block2D, PairLetter};

/// Fill colors per pair letter, with a fallback for letters not listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Palette {
    pub fills: BTreeMap<PairLetter, String>,
    pub fallback: String,
}

impl Default for Palette {
    /// a green, b yellow, c blue, d red.
    fn default() -> Self {
        let fills = [
            (PairLetter::A, "#8fd18f"),
            (PairLetter::B, "#f5e57a"),
            (PairLetter::C, "#8fb8e8"),
            (PairLetter::D, "#ee8e8e"),
        ]
        .into_iter()
        .map(|(p, c)| (p, c.to_string()))
        .collect();
        Self {
            fills,
            fallback: "#cccccc".into(),
        }
    }
}

impl Palette {
    pub fn fill(&self, p: PairLetter) -> &str {
        self.fills.get(&p).map_or(&self.fallback, String::as_str)
    }
}

/// A line along the anti-diagonal `k + ℓ = offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlay {
    pub offset: usize,
    pub color: String,
}

#[derive(Debug, Clone)]
pub struct RenderSpec {
    pub block: Block2D,
    pub cell_size: u32,
    pub palette: Palette,
    pub overlays: Vec<Overlay>,
    pub label_cells: bool,
}

impl RenderSpec {
    pub fn new(block: Block2D) -> Self {
        Self {
            block,
            cell_size: 16,
            palette: Palette::default(),
            overlays: Vec::new(),
            label_cells: false,
        }
    }
}

pub const RED: &str = "#d00000";
pub const GREEN: &str = "#008000";

/// Overlays for the first `count` anti-diagonals, red where `target` is
/// absent and green where it occurs.
pub fn diagonal_overlays(block: &Block2D, target: PairLetter, count: usize) -> Vec<Overlay> {
    let total = block.width() + block.height() - 1;
    let mut hit = vec![false; total];
    for l in 0..block.height() {
        for k in 0..block.width() {
            if block.get(k, l) == target {
                hit[k + l] = true;
            }
        }
    }
    (0..count.min(total))
        .map(|o| Overlay {
            offset: o,
            color: if hit[o] { GREEN } else { RED }.to_string(),
        })
        .collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Renders the block as an SVG document. Row `ℓ = 0` is drawn at the bottom.
pub fn render_svg(spec: &RenderSpec) -> String {
    let b = &spec.block;
    let cs = spec.cell_size.max(1) as usize;
    let (w, h) = (b.width(), b.height());
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        w * cs,
        h * cs,
        w * cs,
        h * cs
    );
    out.push_str("<g stroke=\"#555555\" stroke-width=\"0.5\">\n");
    for l in 0..h {
        let y = (h - 1 - l) * cs;
        for k in 0..w {
            let p = b.get(k, l);
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{y}" width="{cs}" height="{cs}" fill="{}"/>"#,
                k * cs,
                escape(spec.palette.fill(p))
            );
        }
    }
    out.push_str("</g>\n");

    if spec.label_cells {
        let size = (cs as f64 * 0.6).max(1.0);
        let _ = writeln!(
            out,
            r#"<g font-family="monospace" font-size="{size:.1}" text-anchor="middle" dominant-baseline="central">"#
        );
        for l in 0..h {
            let cy = (h - 1 - l) * cs + cs / 2;
            for k in 0..w {
                let cx = k * cs + cs / 2;
                let _ = writeln!(out, r#"<text x="{cx}" y="{cy}">{}</text>"#, escape(&b.get(k, l).to_string()));
            }
        }
        out.push_str("</g>\n");
    }

    if !spec.overlays.is_empty() {
        out.push_str("<g stroke-width=\"2\" stroke-linecap=\"round\">\n");
        for ov in &spec.overlays {
            if ov.offset + 1 > w + h - 1 {
                continue;
            }
            let k_lo = ov.offset.saturating_sub(h - 1);
            let k_hi = ov.offset.min(w - 1);
            let l_hi = ov.offset - k_lo;
            let l_lo = ov.offset - k_hi;
            let (x1, y1) = (k_lo * cs, (h - 1 - l_hi) * cs);
            let (x2, y2) = ((k_hi + 1) * cs, (h - l_lo) * cs);
            let _ = writeln!(
                out,
                r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{}"/>"#,
                escape(&ov.color)
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product2d::{expand2d, product, DEFAULT_MAX_CELLS};
    use crate::system::MorphicSystem;

    fn count(svg: &str, tag: &str) -> usize {
        let doc = roxmltree::Document::parse(svg).expect("well-formed svg");
        doc.descendants().filter(|n| n.has_tag_name(tag)).count()
    }

    fn block(system: MorphicSystem, n: u32) -> Block2D {
        expand2d(&product(system.substitution()), PairLetter::A, n, DEFAULT_MAX_CELLS).unwrap()
    }

    #[test]
    fn fibonacci_square_block() {
        let mut spec = RenderSpec::new(block(MorphicSystem::fibonacci(), 2));
        spec.label_cells = true;
        let svg = render_svg(&spec);
        assert_eq!(count(&svg, "rect"), 9);
        assert_eq!(count(&svg, "text"), 9);
        assert_eq!(count(&svg, "line"), 0);
    }

    #[test]
    fn thue_morse_with_diagonal_lines() {
        let b = block(MorphicSystem::thue_morse(), 8);
        let mut spec = RenderSpec::new(b.clone());
        spec.cell_size = 2;
        spec.overlays = diagonal_overlays(&b, PairLetter::A, 16);
        let svg = render_svg(&spec);
        assert_eq!(count(&svg, "rect"), 65536);
        assert_eq!(count(&svg, "line"), 16);
    }

    #[test]
    fn overlay_colors_follow_the_target() {
        // τ²(a) = "adda" diagonal at offset 3, "bc" at offset 1
        let b = block(MorphicSystem::thue_morse(), 2);
        let ov = diagonal_overlays(&b, PairLetter::A, 7);
        let colors: Vec<&str> = ov.iter().map(|o| o.color.as_str()).collect();
        assert_eq!(colors[0], GREEN);
        assert_eq!(colors[1], RED);
        assert_eq!(colors[3], GREEN);
        assert_eq!(ov.len(), 7);
        assert_eq!(diagonal_overlays(&b, PairLetter::A, 100).len(), 7);
    }

    #[test]
    fn row_zero_is_at_the_bottom() {
        let b = Block2D::new(1, 2, vec![PairLetter::A, PairLetter::D]).unwrap();
        let mut spec = RenderSpec::new(b);
        spec.cell_size = 10;
        let svg = render_svg(&spec);
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let rects: Vec<_> = doc.descendants().filter(|n| n.has_tag_name("rect")).collect();
        let a = rects.iter().find(|r| r.attribute("fill") == Some("#8fd18f")).unwrap();
        assert_eq!(a.attribute("y"), Some("10"));
    }

    #[test]
    fn unknown_pairs_use_the_fallback() {
        let b = Block2D::single(PairLetter::new(2, 0));
        let svg = render_svg(&RenderSpec::new(b));
        assert!(svg.contains("#cccccc"));
    }
}
