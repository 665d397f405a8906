use atoric::exactmath::num::rat;
use atoric::polygon::PolygonError;
use atoric::wedge::{realize, WedgeParams};
use atoric_workbench::render::{render_svg, Viewport};
use atoric_workbench::scenario::cp2_triangle;

const QUINTIC_PLUS: &str = include_str!("snapshots/quintic_plus.svg");

#[test]
fn quintic_plus_matches_snapshot() {
    let w = realize(&WedgeParams::new(2, 1, 1, 1, 3, rat(3, 2)));
    let svg = render_svg(&w, &Viewport::fit(&w)).unwrap();
    assert_eq!(svg, QUINTIC_PLUS);
}

fn attr<'a>(line: &'a str, name: &str) -> &'a str {
    let key = format!(" {name}=\"");
    let start = line.find(&key).unwrap_or_else(|| panic!("{name} missing in {line}")) + key.len();
    &line[start..start + line[start..].find('"').unwrap()]
}

fn coords(line: &str) -> [f64; 4] {
    ["x1", "y1", "x2", "y2"].map(|k| attr(line, k).parse().unwrap())
}

/// Plane point to SVG point for the fitted viewport `[-3, 9]²`.
fn to_svg(x: f64, y: f64) -> (f64, f64) {
    (x + 3.0, 9.0 - y)
}

#[test]
fn cp2_triangle_geometry() {
    let t = cp2_triangle();
    let vp = Viewport::fit(&t);
    assert_eq!(vp, Viewport::new(rat(-3, 1), rat(-3, 1), rat(9, 1), rat(9, 1)));
    let svg = render_svg(&t, &vp).unwrap();
    let lines: Vec<&str> = svg.lines().collect();

    let region = lines.iter().find(|l| l.contains("class=\"region\"")).unwrap();
    let pts: Vec<(f64, f64)> = attr(region, "points")
        .split(' ')
        .map(|p| {
            let (x, y) = p.split_once(',').unwrap();
            (x.parse().unwrap(), y.parse().unwrap())
        })
        .collect();
    let mut want = vec![to_svg(0.0, 0.0), to_svg(6.0, 0.0), to_svg(0.0, 6.0)];
    let mut got = pts.clone();
    want.sort_by(|a, b| a.partial_cmp(b).unwrap());
    got.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(got, want);

    // Each cut runs from its corner to its terminus; its extension continues
    // along the eigenray to the opposite side of the triangle.
    let cases = [
        ((0.0, 0.0), (2.0, 2.0), (3.0, 3.0)),
        ((6.0, 0.0), (4.0, 1.0), (0.0, 3.0)),
        ((0.0, 6.0), (1.0, 4.0), (3.0, 0.0)),
    ];
    for (i, (base, term, hit)) in cases.iter().enumerate() {
        let tag = format!("data-cut=\"{i}\"");
        let cut = lines.iter().find(|l| l.contains("class=\"cut\"") && l.contains(&tag)).unwrap();
        let ext = lines.iter().find(|l| l.contains("class=\"extension\"") && l.contains(&tag)).unwrap();
        let (b, t, h) = (to_svg(base.0, base.1), to_svg(term.0, term.1), to_svg(hit.0, hit.1));
        assert_eq!(coords(cut), [b.0, b.1, t.0, t.1], "cut {i}");
        assert_eq!(coords(ext), [t.0, t.1, h.0, h.1], "extension {i}");
    }
    assert_eq!(svg.matches("class=\"terminus\"").count(), 3);
}

#[test]
fn empty_or_degenerate_viewports_are_errors() {
    let t = cp2_triangle();
    for vp in [
        Viewport::new(rat(1, 1), rat(0, 1), rat(1, 1), rat(5, 1)),
        Viewport::new(rat(0, 1), rat(5, 1), rat(4, 1), rat(2, 1)),
    ] {
        assert_eq!(render_svg(&t, &vp), Err(PolygonError::EmptyViewport));
    }
}

#[test]
fn viewport_outside_the_polygon_draws_no_region() {
    let t = cp2_triangle();
    let vp = Viewport::new(rat(20, 1), rat(20, 1), rat(30, 1), rat(30, 1));
    let svg = render_svg(&t, &vp).unwrap();
    assert!(!svg.contains("class=\"region\""));
}
