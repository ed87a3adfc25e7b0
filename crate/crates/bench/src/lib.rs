//! Fixed parameter sets shared by the benchmarks.

use voronoi_iso::SellingParams;

/// BCC, FCC, SC and two generic points.
pub fn fixtures() -> Vec<(&'static str, SellingParams)> {
    vec![
        ("bcc", SellingParams::bcc()),
        ("fcc", SellingParams::fcc()),
        ("sc", SellingParams::sc()),
        ("generic", SellingParams::new([0.3, 2.0, 0.7, 1.5, 0.1, 1.2]).unwrap()),
        ("near_fcc", SellingParams::new([0.05, 1.0, 1.0, 1.0, 1.0, 0.05]).unwrap()),
    ]
}

#[cfg(test)]
mod tests {
    #[test]
    fn fixtures_are_valid() {
        assert_eq!(super::fixtures().len(), 5);
    }
}
