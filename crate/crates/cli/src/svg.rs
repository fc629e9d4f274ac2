use std::fmt::Write;

use sphere_distal::SpherePoint64;

const SIZE: f64 = 400.0;
const RADIUS: f64 = 180.0;

/// Axis dropped by the orthographic view of `S^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, serde::Serialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn index(self) -> usize {
        self as usize
    }
}

fn to_canvas(u: f64, v: f64) -> (f64, f64) {
    (SIZE / 2.0 + RADIUS * u, SIZE / 2.0 - RADIUS * v)
}

/// Orbit on the unit circle, or its orthographic projection for `S^2`
/// with points on the far hemisphere drawn hollow.
pub fn orbit(points: &[SpherePoint64], axis: Axis) -> String {
    let d = points.first().map_or(2, SpherePoint64::dim);
    let kept: Vec<usize> = (0..d).filter(|&i| d == 2 || i != axis.index()).collect();
    let planar: Vec<(f64, f64, bool)> = points
        .iter()
        .map(|p| {
            let c = p.coords();
            let (x, y) = to_canvas(c[kept[0]], c[kept[1]]);
            let near = d == 2 || c[axis.index()] >= 0.0;
            (x, y, near)
        })
        .collect();

    let mut s = String::new();
    let _ = writeln!(
        s,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"##
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="white"/>"##);
    let (cx, cy) = to_canvas(0.0, 0.0);
    let _ = writeln!(s, r##"<circle cx="{cx}" cy="{cy}" r="{RADIUS}" fill="none" stroke="#999" stroke-width="1"/>"##);
    let path: Vec<String> = planar.iter().map(|(x, y, _)| format!("{x:.3},{y:.3}")).collect();
    let _ = writeln!(s, r##"<polyline points="{}" fill="none" stroke="#1f77b4" stroke-width="0.8"/>"##, path.join(" "));
    for (k, (x, y, near)) in planar.iter().enumerate() {
        let fill = if k == 0 {
            "#d62728"
        } else if *near {
            "#1f77b4"
        } else {
            "white"
        };
        let _ = writeln!(
            s,
            r##"<circle cx="{x:.3}" cy="{y:.3}" r="2.5" fill="{fill}" stroke="#1f77b4" stroke-width="0.8"/>"##
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_orbit() {
        let pts = vec![SpherePoint64::basis(2, 0), SpherePoint64::basis(2, 1)];
        let svg = orbit(&pts, Axis::Z);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains(r#"points="380.000,200.000 200.000,20.000""#));
        assert_eq!(svg.matches("<circle").count(), 3);
    }

    #[test]
    fn far_side_is_hollow() {
        let pts = vec![SpherePoint64::basis(3, 0), SpherePoint64::from_vector(&[0.0, 0.6, -0.8]).unwrap()];
        let svg = orbit(&pts, Axis::Z);
        assert!(svg.contains(r#"fill="white" stroke"#));
        let svg = orbit(&pts, Axis::X);
        assert!(svg.contains("200.000,200.000 308.000,344.000"));
    }
}
