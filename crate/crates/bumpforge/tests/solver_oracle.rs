mod common;

use bumpforge::exceptional::find_exceptional;
use bumpforge::polyalg::{restrict_to_curve, CurveXi, WeightSignature};
use common::{curve_defect, domain, grid_oracle, same_curve_sets, solver_fixtures};

#[test]
fn solver_matches_grid_oracle() {
    for (text, m) in solver_fixtures() {
        let d = domain(text, m);
        let w = WeightSignature::new(m.0, m.1).unwrap();
        assert!(bumpforge::polyalg::pullback(&d.p, &w).total_degree() <= 12, "{text}");
        let curves = find_exceptional(&d.p, &w).unwrap();
        for c in &curves {
            assert!(restrict_to_curve(&d.p, &w, &c.xi).is_harmonic(), "{text}");
        }
        let solver: Vec<_> = curves.iter().map(|c| c.xi.to_c64()).collect();
        let oracle = grid_oracle(&d.p, &w);
        assert!(same_curve_sets(&solver, &oracle), "{text}: solver {solver:?} oracle {oracle:?}");
    }
}

#[test]
fn oracle_defect_vanishes_on_known_curves() {
    let d = domain("|z1^2 - z2^3|^2", (4, 6));
    let w = d.w;
    assert!(curve_defect(&d.p, &w, Some(num_complex::Complex64::new(1.0, 0.0))) < 1e-14);
    assert!(curve_defect(&d.p, &w, Some(num_complex::Complex64::new(2.0, 0.0))) > 1e-3);
    let curves = find_exceptional(&d.p, &w).unwrap();
    assert_eq!(curves.len(), 1);
    assert_eq!(curves[0].xi, CurveXi::Finite(bumpforge::polyalg::CRat::from_int(1)));
    assert_eq!(curves[0].lines.len(), 6);
}
