//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line
//! to stderr (outside the test harness capture) and the test fails if any
//! criterion fails.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use voronoi_iso::calculus::{gradient_with, hessian_with};
use voronoi_iso::families::{
    box_hessian_at_ones, f_box, f_rd, rd_hessian_at_ones, ScanGrid,
};
use voronoi_iso::quotient::reference_table;
use voronoi_iso::selling::permute_edges;
use voronoi_iso::{
    build_cell, classify_point, det_closed, det_direct, enumerate_two_value_orbits, f_closed,
    f_geometric, gradient_fd, gram_matrix, hessian_fd, psi, random_restart_survey,
    symmetric_eigen, tangent_spectrum, tilde_f, verify_opposite_monotonicity, Classification,
    ClassName, ClassifyConfig, DiffConfig, MinimizeConfig, Permutation, ReferenceConstants,
    SellingParams,
};

type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(x: f64, y: f64, tol: f64, what: &str) -> Check {
    ensure((x - y).abs() <= tol, || format!("{what}: {x} vs {y} (tol {tol:e})"))
}

fn rel_close(x: f64, y: f64, tol: f64, what: &str) -> Check {
    ensure((x - y).abs() <= tol * y.abs(), || {
        format!("{what}: {x} vs {y} (rel tol {tol:e})")
    })
}

fn spectrum_close(got: &[f64], want: &[f64], tol: f64, what: &str) -> Check {
    for (k, (g, w)) in got.iter().zip(want).enumerate() {
        close(*g, *w, tol, &format!("{what}[{k}]"))?;
    }
    Ok(())
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn random_rho(rng: &mut ChaCha8Rng) -> [f64; 6] {
    // (0, 2]
    std::array::from_fn(|_| 2.0 * (1.0 - rng.gen::<f64>()))
}

fn c01_exact_values() -> Check {
    let r = ReferenceConstants::exact();
    let bcc = 3.0 * (1.0 + 2.0 * 3f64.sqrt()) / 4f64.powf(2.0 / 3.0);
    let fcc = 3.0 * 2f64.powf(5.0 / 6.0);
    rel_close(f_closed(&SellingParams::bcc()), bcc, 1e-12, "F_BCC")?;
    rel_close(f_closed(&SellingParams::fcc()), fcc, 1e-12, "F_FCC")?;
    rel_close(f_closed(&SellingParams::sc()), 6.0, 1e-12, "F_SC")?;
    rel_close(r.f_bcc, bcc, 1e-15, "reference F_BCC")
}

fn c02_table() -> Check {
    let q: Vec<String> = reference_table().iter().map(|r| format!("{:.4}", r.q)).collect();
    ensure(q == ["0.5236", "0.7405", "0.7534"], || format!("Q column {q:?}"))
}

fn c03_dual_paths() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut strata = 0;
    for i in 0..2000 {
        let mut x = random_rho(&mut rng);
        if i >= 1000 {
            // zero up to three coordinates
            let zeros = rng.gen_range(1..=3);
            for _ in 0..zeros {
                x[rng.gen_range(0..6)] = 0.0;
            }
        }
        let Ok(rho) = SellingParams::new(x) else { continue };
        if i >= 1000 {
            strata += 1;
        }
        let fc = f_closed(&rho);
        let fg = f_geometric(&rho).map_err(|e| format!("{x:?}: {e}"))?;
        rel_close(fg, fc, 1e-10, &format!("F paths at {x:?}"))?;
        let d = det_direct(&gram_matrix(&rho).map_err(|e| e.to_string())?);
        rel_close(d, det_closed(&x), 1e-12, &format!("det paths at {x:?}"))?;
    }
    ensure(strata >= 500, || format!("only {strata} admissible strata samples"))
}

fn c04_bcc() -> Check {
    let r = ReferenceConstants::exact();
    let bcc = SellingParams::bcc();
    let d = DiffConfig::default();
    let g = gradient_fd(&bcc, &d).map_err(|e| e.to_string())?;
    ensure(sup(&g) <= 1e-7, || format!("gradient {g:?}"))?;
    let h = hessian_fd(&bcc, &d).map_err(|e| e.to_string())?;
    let e = symmetric_eigen(&h).map_err(|e| e.to_string())?;
    spectrum_close(&e.values, &r.bcc_spectrum, 1e-5, "BCC spectrum")?;
    spectrum_close(&e.values, &[0.0, 0.052278, 0.052278, 0.194864, 0.194864, 0.194864], 1e-5, "printed BCC spectrum")?;
    let t = tangent_spectrum(&bcc, &d).map_err(|e| e.to_string())?;
    ensure(t.iter().all(|&x| x > 0.0), || format!("tangent spectrum {t:?}"))
}

fn c05_fcc() -> Check {
    let r = ReferenceConstants::exact();
    let fcc = SellingParams::fcc();
    let d = DiffConfig::default();
    let g = gradient_fd(&fcc, &d).map_err(|e| e.to_string())?;
    ensure(sup(&g) <= 1e-6, || format!("gradient {g:?}"))?;
    let h = hessian_fd(&fcc, &d).map_err(|e| e.to_string())?;
    let e = symmetric_eigen(&h).map_err(|e| e.to_string())?;
    spectrum_close(
        &e.values,
        &[-0.262031, 0.0, 0.334087, 0.334087, 0.334087, 1.301413],
        1e-5,
        "FCC spectrum",
    )?;
    spectrum_close(&e.values, &r.fcc_spectrum, 1e-5, "exact FCC spectrum")?;
    let report = classify_point(&fcc, &ClassifyConfig::default()).map_err(|e| e.to_string())?;
    ensure(report.classification == Classification::Saddle, || {
        format!("classified as {}", report.classification)
    })?;
    let v = r.fcc_negative_direction;
    let moved = SellingParams::new(std::array::from_fn(|k| fcc[k] + 0.05 * v[k])).map_err(|e| e.to_string())?;
    let f = f_closed(&moved);
    ensure(f < r.f_fcc, || format!("F(FCC + 0.05 v) = {f} ≥ {}", r.f_fcc))
}

fn c06_sc() -> Check {
    let sc = SellingParams::sc();
    let g = gradient_fd(&sc, &DiffConfig::default()).map_err(|e| e.to_string())?;
    let v = -4.0 + 2.0 * 2f64.sqrt();
    spectrum_close(&g, &[0.0, 0.0, 0.0, v, v, v], 1e-6, "SC gradient")?;
    spectrum_close(&g, &[0.0, 0.0, 0.0, -1.171573, -1.171573, -1.171573], 1e-6, "printed SC gradient")?;
    let report = classify_point(&sc, &ClassifyConfig::default()).map_err(|e| e.to_string())?;
    ensure(report.classification == Classification::NonStationary, || {
        format!("classified as {}", report.classification)
    })?;
    let h = hessian_with(|x: &[f64; 3]| f_box(x[0], x[1], x[2]), &[1.0; 3], DiffConfig::default().h_hess)
        .map_err(|e| e.to_string())?;
    let e = symmetric_eigen(&h).map_err(|e| e.to_string())?;
    spectrum_close(&e.values, &[0.0, 0.5, 0.5], 1e-6, "F_box spectrum")?;
    let exact = symmetric_eigen(&box_hessian_at_ones()).map_err(|e| e.to_string())?;
    spectrum_close(&exact.values, &[0.0, 0.5, 0.5], 1e-12, "exact F_box spectrum")
}

fn c07_rd_stratum() -> Check {
    let h = hessian_with(
        |x: &[f64; 4]| f_rd(x[0], x[1], x[2], x[3]),
        &[1.0; 4],
        DiffConfig::default().h_hess,
    )
    .map_err(|e| e.to_string())?;
    let printed = rd_hessian_at_ones();
    for i in 0..4 {
        for j in 0..4 {
            close(h[i][j], printed[i][j], 1e-5, &format!("F_RD Hessian[{i}][{j}]"))?;
        }
    }
    let e = symmetric_eigen(&h).map_err(|e| e.to_string())?;
    spectrum_close(&e.values, &[0.0, 0.334087, 0.334087, 0.334087], 1e-5, "F_RD spectrum")
}

fn c08_orbits() -> Check {
    let classes = enumerate_two_value_orbits();
    ensure(classes.len() == 6, || format!("{} classes", classes.len()))?;
    let got: Vec<(ClassName, [bool; 6], usize)> =
        classes.iter().map(|c| (c.name, c.representative, c.orbit_size)).collect();
    let pattern = |s: &str| -> [bool; 6] { std::array::from_fn(|k| s.as_bytes()[k] == b'1') };
    let want = [
        (ClassName::C, pattern("100000"), 6),
        (ClassName::O, pattern("100001"), 3),
        (ClassName::A, pattern("110000"), 12),
        (ClassName::S, pattern("111000"), 4),
        (ClassName::T, pattern("110100"), 4),
        (ClassName::P, pattern("100101"), 12),
    ];
    ensure(got == want, || format!("{got:?}"))?;
    for (weight, total) in [(1, 6), (2, 15), (3, 20)] {
        let sum: usize = classes.iter().filter(|c| c.weight == weight).map(|c| c.orbit_size).sum();
        ensure(sum == total, || format!("weight {weight}: {sum}"))?;
        // every mask of this weight appears in exactly one class
        let members: usize = classes.iter().filter(|c| c.weight == weight).map(|c| c.members.len()).sum();
        ensure(members == total, || format!("weight {weight}: {members} members"))?;
    }
    Ok(())
}

fn c09_opposite_family() -> Check {
    let r = ReferenceConstants::exact();
    let grid = ScanGrid::default();
    let report = verify_opposite_monotonicity(&grid).map_err(|e| e.to_string())?;
    ensure(report.samples >= 50_000, || format!("{} samples", report.samples))?;
    close(psi(0.0), 0.0, 1e-10, "psi(0)")?;
    close(psi(1.0), 0.0, 1e-10, "psi(1)")?;
    ensure(report.min_psi2 >= 0.674175, || format!("min psi'' {}", report.min_psi2))?;
    close(report.argmin_u, 1.0, grid.step / 2.0, "argmin u")?;
    close(report.min_tilde_f, r.f_bcc, 1e-9, "min tilde F")?;
    close(tilde_f(0.0), r.f_fcc, 1e-12, "tilde F(0)")
}

fn c10_volume() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..1000 {
        let x = random_rho(&mut rng);
        let rho = SellingParams::new(x).map_err(|e| e.to_string())?;
        let cell = build_cell(&rho).map_err(|e| e.to_string())?;
        let v = rho.det().sqrt();
        rel_close(cell.volume, v, 1e-9, &format!("volume at {x:?}"))?;
    }
    Ok(())
}

fn c11_invariance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let d = DiffConfig::default();
    for _ in 0..100 {
        let x = random_rho(&mut rng);
        let rho = SellingParams::new(x).map_err(|e| e.to_string())?;
        let f = f_closed(&rho);
        for sigma in Permutation::all() {
            let y = SellingParams::new(permute_edges(&sigma, &x)).map_err(|e| e.to_string())?;
            rel_close(f_closed(&y), f, 1e-12, "S4 invariance")?;
        }
        for t in [1e-3, 0.5, 3.0, 1e3] {
            rel_close(f_closed(&rho.scaled(t).map_err(|e| e.to_string())?), f, 1e-12, "scaling")?;
        }
        let g = gradient_fd(&rho, &d).map_err(|e| e.to_string())?;
        let euler: f64 = (0..6).map(|k| x[k] * g[k]).sum();
        close(euler, 0.0, 1e-7, &format!("Euler residual at {x:?}"))?;
    }
    // the generic differencer agrees at a fixed point
    let g = gradient_with(|y: &[f64; 6]| SellingParams::new(*y).map(|p| f_closed(&p)), &[1.0; 6], d.h_grad)
        .map_err(|e| e.to_string())?;
    ensure(sup(&g) <= 1e-7, || format!("{g:?}"))
}

fn c12_optimization() -> Check {
    let r = ReferenceConstants::exact();
    let summary = random_restart_survey(100, 2024, &MinimizeConfig::default());
    for run in &summary.runs {
        ensure(run.f_value >= r.f_bcc - 1e-9, || {
            format!("run {} ended at F = {} below F_BCC", run.index, run.f_value)
        })?;
    }
    ensure(summary.counterexample_candidates.is_empty(), || {
        format!("candidates {:?}", summary.counterexample_candidates)
    })?;
    ensure(summary.converged_fraction >= 0.8, || {
        format!("only {:.0}% reached F_BCC", 100.0 * summary.converged_fraction)
    })?;
    let again = random_restart_survey(100, 2024, &MinimizeConfig::default());
    ensure(again == summary, || "survey not reproducible".into())
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Check, Duration); 12] = [
        ("1 exact quotient values", c01_exact_values, Duration::from_secs(1)),
        ("2 reference table Q column", c02_table, Duration::from_secs(1)),
        ("3 dual-path equivalence", c03_dual_paths, Duration::from_secs(10)),
        ("4 BCC analysis", c04_bcc, Duration::from_secs(1)),
        ("5 FCC analysis", c05_fcc, Duration::from_secs(1)),
        ("6 SC analysis", c06_sc, Duration::from_secs(1)),
        ("7 restricted FCC stratum", c07_rd_stratum, Duration::from_secs(1)),
        ("8 orbit enumeration", c08_orbits, Duration::from_secs(1)),
        ("9 opposite-family monotonicity", c09_opposite_family, Duration::from_secs(5)),
        ("10 volume conservation", c10_volume, Duration::from_secs(10)),
        ("11 invariance suite", c11_invariance, Duration::from_secs(10)),
        ("12 random-restart optimization", c12_optimization, Duration::from_secs(120)),
    ];
    let mut stderr = std::io::stderr();
    let mut failed = Vec::new();
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let line = match (&outcome, elapsed <= budget) {
            (Ok(()), true) => format!("PASS  {name}  ({:.3}s)\n", elapsed.as_secs_f64()),
            (Ok(()), false) => format!(
                "FAIL  {name}  ({:.3}s over budget {}s)\n",
                elapsed.as_secs_f64(),
                budget.as_secs()
            ),
            (Err(msg), _) => format!("FAIL  {name}  ({:.3}s): {msg}\n", elapsed.as_secs_f64()),
        };
        let _ = stderr.write_all(line.as_bytes());
        if line.starts_with("FAIL") {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
