use std::path::PathBuf;

use carousel_cli::{render_svg, Scenario};

fn scenario(name: &str) -> Scenario {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(format!("{name}.json"));
    Scenario::load(&p).unwrap()
}

/// Structural check of path data against the SVG 1.1 grammar for the
/// absolute commands we emit (M, L, A, Z), including arc flag values.
fn check_path(d: &str) -> Result<usize, String> {
    let toks: Vec<&str> = d.split([' ', ',']).filter(|t| !t.is_empty()).collect();
    let mut i = 0;
    let mut commands = 0;
    let number = |t: &str| t.parse::<f64>().ok().filter(|v| v.is_finite());
    let args = |i: usize, n: usize| -> Result<Vec<f64>, String> {
        (0..n)
            .map(|k| toks.get(i + k).and_then(|t| number(t)).ok_or(format!("bad number at token {}", i + k)))
            .collect()
    };
    if toks.first() != Some(&"M") {
        return Err("path must start with M".into());
    }
    while i < toks.len() {
        let cmd = toks[i];
        i += 1;
        commands += 1;
        match cmd {
            "M" | "L" => {
                args(i, 2)?;
                i += 2;
            }
            "A" => {
                let a = args(i, 7)?;
                if a[0] < 0.0 || a[1] < 0.0 {
                    return Err("negative arc radius".into());
                }
                if !(a[3] == 0.0 || a[3] == 1.0) || !(a[4] == 0.0 || a[4] == 1.0) {
                    return Err("arc flags must be 0 or 1".into());
                }
                i += 7;
            }
            "Z" => {}
            other => return Err(format!("unexpected token {other:?}")),
        }
    }
    Ok(commands)
}

fn paths(svg: &str) -> Vec<&str> {
    svg.split(" d=\"").skip(1).map(|s| &s[..s.find('"').unwrap()]).collect()
}

fn well_formed(svg: &str) {
    assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
    assert!(svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<g ").count(), svg.matches("</g>").count());
    for d in paths(svg) {
        check_path(d).unwrap_or_else(|e| panic!("{e}: {d}"));
    }
}

#[test]
fn every_scenario_renders_valid_svg() {
    for name in [
        "concentric",
        "theorem_general",
        "corollary",
        "points",
        "sweep",
        "reangle",
        "trapezoid",
        "ex41",
        "ex42_t4",
    ] {
        let svg = render_svg(&scenario(name)).unwrap();
        well_formed(&svg);
        assert_eq!(svg, render_svg(&scenario(name)).unwrap(), "{name}");
    }
}

#[test]
fn trapezoid_has_one_arc_and_three_sides() {
    let svg = render_svg(&scenario("trapezoid")).unwrap();
    let hull = svg.lines().find(|l| l.contains("class=\"hull\"")).unwrap();
    assert_eq!(hull.matches(" A ").count(), 1);
    assert_eq!(hull.matches(" L ").count(), 3);
}

#[test]
fn round_edged_angle_is_front_arc_and_two_rays() {
    let svg = render_svg(&scenario("reangle")).unwrap();
    let region = svg.lines().find(|l| l.contains("class=\"region\"")).unwrap();
    assert_eq!(region.matches(" A ").count(), 1);
    assert_eq!(region.matches(" L ").count(), 2);
    assert!(region.contains(" 0 0 0 "), "front arc is short and counterclockwise");
}

#[test]
fn cross_section_shows_every_sphere() {
    let svg = render_svg(&scenario("ex42_t4")).unwrap();
    for l in ["S-1", "S0", "S1", "S2"] {
        assert!(svg.contains(&format!(">{l}</text>")), "{l}");
    }
    assert!(svg.contains("class=\"guide\""));
}

#[test]
fn grammar_checker_rejects_garbage() {
    assert!(check_path("M 0,0 L 1,1 Z").is_ok());
    assert!(check_path("L 0,0").is_err());
    assert!(check_path("M 0,0 A 1 1 0 2 0 3,3").is_err());
    assert!(check_path("M 0,0 Q 1,1 2,2").is_err());
    assert!(check_path("M 0,nan").is_err());
}
