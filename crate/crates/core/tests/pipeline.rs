use voronoi_iso::families::family_params;
use voronoi_iso::{
    build_cell, canonical_representative, classify_point, embed_euclidean, export_obj, f_closed,
    f_geometric, minimize_f, ClassName, Classification, ClassifyConfig, Error, MinimizeConfig,
    SellingParams,
};

/// Parses `v` and `f` lines back into polygons.
fn parse_obj(text: &str) -> (Vec<[f64; 3]>, Vec<Vec<usize>>) {
    let mut vs = Vec::new();
    let mut fs = Vec::new();
    for line in text.lines() {
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let p: Vec<f64> = it.map(|x| x.parse().unwrap()).collect();
                vs.push([p[0], p[1], p[2]]);
            }
            Some("f") => fs.push(it.map(|x| x.parse::<usize>().unwrap() - 1).collect()),
            _ => {}
        }
    }
    (vs, fs)
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Volume and area of a closed outward-oriented mesh by fan triangulation.
fn mesh_volume_area(vs: &[[f64; 3]], fs: &[Vec<usize>]) -> (f64, f64) {
    let mut vol = 0.0;
    let mut area = 0.0;
    for f in fs {
        let mut n = [0.0; 3];
        for k in 1..f.len() - 1 {
            let t = cross(vs[f[k]], vs[f[k + 1]]);
            vol += dot(vs[f[0]], t) / 6.0;
            let e = cross(
                [vs[f[k]][0] - vs[f[0]][0], vs[f[k]][1] - vs[f[0]][1], vs[f[k]][2] - vs[f[0]][2]],
                [vs[f[k + 1]][0] - vs[f[0]][0], vs[f[k + 1]][1] - vs[f[0]][1], vs[f[k + 1]][2] - vs[f[0]][2]],
            );
            for i in 0..3 {
                n[i] += e[i];
            }
        }
        area += dot(n, n).sqrt() / 2.0;
    }
    (vol, area)
}

#[test]
fn obj_mesh_reproduces_volume_and_area() {
    for rho in [
        "1,1,1,1,1,1",
        "0,1,1,1,1,0",
        "1,1,1,0,0,0",
        "0.3,2,0.7,1.5,0.1,1.2",
    ] {
        let p: SellingParams = rho.parse().unwrap();
        let cell = build_cell(&p).unwrap();
        let obj = export_obj(&cell, &embed_euclidean(&p).unwrap());
        let (vs, fs) = parse_obj(&obj);
        assert_eq!(vs.len(), 24);
        let (vol, area) = mesh_volume_area(&vs, &fs);
        // the OBJ keeps 9 significant digits
        assert!((vol - p.det().sqrt()).abs() <= 1e-7 * vol, "{rho}: {vol}");
        let f = area / vol.powf(2.0 / 3.0);
        assert!((f - f_closed(&p)).abs() <= 1e-7 * f, "{rho}: {f}");
    }
}

#[test]
fn parse_errors_are_distinguished() {
    assert!(matches!("1,1,1".parse::<SellingParams>(), Err(Error::Parse(_))));
    assert!(matches!("1,1,1,1,1,x".parse::<SellingParams>(), Err(Error::Parse(_))));
    assert!(matches!("1,-1,1,1,1,1".parse::<SellingParams>(), Err(Error::NegativeParameter { .. })));
    let degenerate = "1,0,0,0,0,0".parse::<SellingParams>().unwrap_err();
    assert!(degenerate.is_degenerate());
}

#[test]
fn serde_round_trip_validates() {
    let p = SellingParams::new([0.3, 2.0, 0.7, 1.5, 0.1, 1.2]).unwrap();
    let text = serde_json::to_string(&p).unwrap();
    assert_eq!(serde_json::from_str::<SellingParams>(&text).unwrap(), p);
    assert!(serde_json::from_str::<SellingParams>("[1,0,0,0,0,0]").is_err());
}

#[test]
fn canonical_form_is_orbit_invariant() {
    let p = family_params(ClassName::P, 2.0, 1.0).unwrap();
    let c = canonical_representative(&p);
    assert!((f_closed(&c) - f_closed(&p)).abs() <= 1e-12 * f_closed(&p));
    assert_eq!(canonical_representative(&c), c);
}

#[test]
fn descent_lands_on_a_classified_minimum() {
    let start = SellingParams::new([0.2, 1.7, 0.6, 1.4, 0.9, 1.2]).unwrap();
    let r = minimize_f(&start, &MinimizeConfig::default());
    assert!(r.converged);
    let report = classify_point(&r.minimizer, &ClassifyConfig::default()).unwrap();
    assert_eq!(report.classification, Classification::InteriorStrictMin);
    let fg = f_geometric(&r.minimizer).unwrap();
    assert!((fg - r.f_value).abs() <= 1e-10 * fg);
}
