//! Drawing of the base fundamental domain with its edge identifications.

use std::fmt::Write;

use lagfib::fibration::fundamental_domain;
use lagfib::{LatticeNF, Rat};

type P = (f64, f64);

/// How an edge is glued to its partner: same direction or reversed, with one
/// or two chevrons to tell the pairs apart.
struct Edge {
    from: P,
    to: P,
    chevrons: usize,
}

struct Scene {
    fill: Vec<P>,
    edges: Vec<Edge>,
    /// Boundary lines of an unbounded strip, drawn without identification marks.
    open: Vec<(P, P)>,
}

fn pt(v: &[Rat; 2]) -> P {
    (v[0].to_f64(), v[1].to_f64())
}

fn add(a: P, b: P) -> P {
    (a.0 + b.0, a.1 + b.1)
}

fn scale(a: P, s: f64) -> P {
    (a.0 * s, a.1 * s)
}

fn edge(from: P, to: P, chevrons: usize) -> Edge {
    Edge { from, to, chevrons }
}

/// A strip `{s·t + r·d : 0 ≤ s ≤ 1}` cut off at `|r| ≤ reach`, whose two long
/// sides are identified by `t`.
fn strip(t: P, d: P, reach: f64, reversed: bool) -> Scene {
    let lo = scale(d, -reach);
    let hi = scale(d, reach);
    let (a0, a1, b0, b1) = (lo, hi, add(t, lo), add(t, hi));
    let right = if reversed { edge(b1, b0, 1) } else { edge(b0, b1, 1) };
    Scene { fill: vec![a0, b0, b1, a1], edges: vec![edge(a0, a1, 1), right], open: vec![] }
}

fn scene(nf: &LatticeNF) -> Scene {
    let v = fundamental_domain(nf);
    if let [o, e1, e2, far] = v.as_slice() {
        let (o, e1, e2, far) = (pt(o), pt(e1), pt(e2), pt(far));
        let reversed = matches!(nf, LatticeNF::K2 { .. });
        let top = if reversed { edge(far, e2, 1) } else { edge(e2, far, 1) };
        return Scene {
            fill: vec![o, e1, far, e2],
            edges: vec![edge(o, e1, 1), top, edge(o, e2, 2), edge(e1, far, 2)],
            open: vec![],
        };
    }
    match nf {
        LatticeNF::C2uv { u, v } => {
            let t = (u.to_f64(), v.to_f64());
            let d = if t.0 == 0.0 { (1.0, 0.0) } else { (0.0, 1.0) };
            let reach = (t.0.abs() + t.1.abs()).max(1.0);
            strip(t, d, reach, false)
        }
        LatticeNF::C2ny { y, .. } => {
            let y = y.to_f64();
            strip((0.0, y), (1.0, 0.0), y.max(1.0), false)
        }
        LatticeNF::M2 { x, .. } => {
            let x = x.to_f64();
            strip((x, 0.0), (0.0, 1.0), x.max(1.0), true)
        }
        _ => Scene { fill: vec![], edges: vec![], open: vec![((-1.0, 0.0), (1.0, 0.0)), ((0.0, -1.0), (0.0, 1.0))] },
    }
}

impl Scene {
    fn points(&self) -> impl Iterator<Item = P> + '_ {
        self.fill
            .iter()
            .copied()
            .chain(self.edges.iter().flat_map(|e| [e.from, e.to]))
            .chain(self.open.iter().flat_map(|&(a, b)| [a, b]))
            .chain([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])
    }
}

/// Maps plane coordinates to the canvas, `y` pointing up.
struct View {
    min: P,
    scale: f64,
    height: f64,
    pad: P,
}

impl View {
    fn fit(scene: &Scene, width: f64, height: f64) -> View {
        let (mut lo, mut hi) = ((f64::MAX, f64::MAX), (f64::MIN, f64::MIN));
        for p in scene.points() {
            lo = (lo.0.min(p.0), lo.1.min(p.1));
            hi = (hi.0.max(p.0), hi.1.max(p.1));
        }
        let margin = 0.1 * width.min(height);
        let span = ((hi.0 - lo.0).max(1e-9), (hi.1 - lo.1).max(1e-9));
        let scale = ((width - 2.0 * margin) / span.0).min((height - 2.0 * margin) / span.1);
        let pad = ((width - scale * span.0) / 2.0, (height - scale * span.1) / 2.0);
        View { min: lo, scale, height, pad }
    }

    fn map(&self, p: P) -> P {
        let x = self.pad.0 + (p.0 - self.min.0) * self.scale;
        let y = self.height - (self.pad.1 + (p.1 - self.min.1) * self.scale);
        (x, y)
    }
}

fn fmt(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn line(out: &mut String, a: P, b: P, style: &str) {
    let _ = writeln!(out, r#"  <line x1="{}" y1="{}" x2="{}" y2="{}" {style}/>"#, fmt(a.0), fmt(a.1), fmt(b.0), fmt(b.1));
}

fn chevrons(out: &mut String, a: P, b: P, count: usize) {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len = (dx * dx + dy * dy).sqrt();
    if len == 0.0 {
        return;
    }
    let (ux, uy) = (dx / len, dy / len);
    let size = 7.0;
    for i in 0..count {
        let t = 0.5 + (i as f64 - (count as f64 - 1.0) / 2.0) * 1.6 * size / len;
        let tip = (a.0 + dx * t, a.1 + dy * t);
        let back = (tip.0 - ux * size, tip.1 - uy * size);
        let l = (back.0 - uy * size * 0.6, back.1 + ux * size * 0.6);
        let r = (back.0 + uy * size * 0.6, back.1 - ux * size * 0.6);
        let _ = writeln!(
            out,
            r#"  <polyline points="{},{} {},{} {},{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
            fmt(l.0),
            fmt(l.1),
            fmt(tip.0),
            fmt(tip.1),
            fmt(r.0),
            fmt(r.1)
        );
    }
}

pub fn render(nf: &LatticeNF, width: u32, height: u32) -> String {
    let scene = scene(nf);
    let (w, h) = (f64::from(width), f64::from(height));
    let view = View::fit(&scene, w, h);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, "  <title>{nf}</title>");
    if !scene.fill.is_empty() {
        let pts: Vec<String> = scene.fill.iter().map(|&p| view.map(p)).map(|(x, y)| format!("{},{}", fmt(x), fmt(y))).collect();
        let _ = writeln!(out, r##"  <polygon points="{}" fill="#e8eef7" stroke="none"/>"##, pts.join(" "));
    }
    for &(a, b) in &scene.open {
        line(&mut out, view.map(a), view.map(b), r#"stroke="gray" stroke-dasharray="4 3""#);
    }
    for e in &scene.edges {
        let (a, b) = (view.map(e.from), view.map(e.to));
        line(&mut out, a, b, r#"stroke="black" stroke-width="1.5""#);
        chevrons(&mut out, a, b, e.chevrons);
    }
    // standard lattice directions at the origin
    let o = view.map((0.0, 0.0));
    let unit = 0.12 * w.min(h);
    for (dir, label) in [((1.0, 0.0), "e₁"), ((0.0, -1.0), "e₂")] {
        let tip = (o.0 + dir.0 * unit, o.1 + dir.1 * unit);
        line(&mut out, o, tip, r##"stroke="#c0392b" stroke-width="2""##);
        let _ = writeln!(
            out,
            r##"  <text x="{}" y="{}" font-size="12" fill="#c0392b">{label}</text>"##,
            fmt(tip.0 + 4.0),
            fmt(tip.1 - 4.0)
        );
    }
    let _ = writeln!(out, r#"  <circle cx="{}" cy="{}" r="3" fill="black"/>"#, fmt(o.0), fmt(o.1));
    out.push_str("</svg>\n");
    out
}
