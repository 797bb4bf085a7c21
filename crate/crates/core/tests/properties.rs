use lempert_core::domains::{contains, quadratic_roots, sample, symmetrize};
use lempert_core::hyperbolic::{mobius_fit, pseudo_distance, pseudo_distance_raw};
use lempert_core::lempertize::{
    build_inverse, combine, field_from_inverse, AnalyticField, CovectorField, LempertCandidate, RootSolveConfig,
};
use lempert_core::metrics::{caratheodory_star, psi};
use lempert_core::numerics::radial_angular_grid;
use lempert_core::{DiscPoint, DomainKind, DomainPoint, GeodesicSpec, HSpec, LeftInverseSpec, MobiusMap};
use num_complex::Complex64;
use proptest::prelude::*;

fn disc(max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn unimodular() -> impl Strategy<Value = Complex64> {
    (0.0..std::f64::consts::TAU).prop_map(|t| Complex64::from_polar(1.0, t))
}

fn g2_point() -> impl Strategy<Value = DomainPoint> {
    (disc(0.999), disc(0.999)).prop_map(|(a, b)| {
        symmetrize(DiscPoint::new(a).unwrap(), DiscPoint::new(b).unwrap())
    })
}

fn bidisc_point() -> impl Strategy<Value = DomainPoint> {
    (disc(0.999), disc(0.999)).prop_map(|(a, b)| DomainPoint::two(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pseudo_distance_is_a_symmetric_invariant(w in disc(0.99), z in disc(0.99), a in disc(0.9), rot in unimodular()) {
        let (wp, zp) = (DiscPoint::new(w).unwrap(), DiscPoint::new(z).unwrap());
        let d = pseudo_distance(wp, zp);
        prop_assert!((0.0..1.0).contains(&d));
        prop_assert!((d - pseudo_distance(zp, wp)).abs() < 1e-15);
        let m = MobiusMap::new(rot, DiscPoint::new(a).unwrap()).unwrap();
        prop_assert!((pseudo_distance_raw(m.apply(w), m.apply(z)) - d).abs() < 1e-9);
    }

    #[test]
    fn mobius_inverse_round_trips(l in disc(0.99), a in disc(0.9), rot in unimodular()) {
        let m = MobiusMap::new(rot, DiscPoint::new(a).unwrap()).unwrap();
        prop_assert!((m.inverse().apply(m.apply(l)) - l).norm() < 1e-13);
        prop_assert!((m.apply(rot.conj()) .norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mobius_fit_recovers_automorphisms(a in disc(0.8), rot in unimodular()) {
        let m = MobiusMap::new(rot, DiscPoint::new(a).unwrap()).unwrap();
        let xs = [Complex64::new(0.1, 0.2), Complex64::new(-0.4, 0.1), Complex64::new(0.3, -0.5)];
        let pairs = xs.map(|x| (x, m.apply(x)));
        let fit = mobius_fit(&pairs).unwrap();
        for x in radial_angular_grid(16) {
            prop_assert!((fit.apply(x.value()) - m.apply(x.value())).norm() < 1e-9);
        }
    }

    #[test]
    fn quadratic_roots_reproduce_coefficients(a in disc(1.0), b in disc(1.0)) {
        let (r1, r2) = quadratic_roots(a + b, a * b);
        prop_assert!((r1 + r2 - (a + b)).norm() < 1e-12);
        prop_assert!((r1 * r2 - a * b).norm() < 1e-12);
    }

    #[test]
    fn psi_maps_g2_into_the_disc(z in g2_point(), omega in unimodular()) {
        prop_assert!(psi(omega, &z).norm() < 1.0);
        prop_assert!(LeftInverseSpec::RoyalPhi.eval(&z).unwrap().norm() < 1.0);
    }

    #[test]
    fn royal_psi_are_left_inverses(l in disc(0.99), omega in unimodular()) {
        let g = LeftInverseSpec::royal_minus_psi(omega).unwrap();
        let z = GeodesicSpec::Royal.eval(DiscPoint::new(l).unwrap());
        prop_assert!((g.eval(&z).unwrap() - l).norm() < 1e-12);
    }

    #[test]
    fn family_fields_are_constant_on_the_diagonal(t in 0.0..=1.0f64, h in disc(1.0), l in disc(0.99)) {
        let fam = LeftInverseSpec::bidisc_family(t, HSpec::constant(h).unwrap()).unwrap();
        let v = field_from_inverse(&fam, GeodesicSpec::Diagonal).unwrap().eval(l).unwrap();
        prop_assert!((v[0] - t).norm() < 1e-12 && (v[1] - (1.0 - t)).norm() < 1e-12);
    }

    #[test]
    fn combination_preserves_normalization(w1 in unimodular(), w2 in unimodular(), t in 0.0..=1.0f64) {
        let flat = GeodesicSpec::Flat { beta: DiscPoint::origin() };
        let f = |w| {
            let raw = CovectorField::analytic(AnalyticField::FlatPsi { omega: w }, flat);
            lempert_core::lempertize::normalize_field(&raw, flat).unwrap()
        };
        let v = combine(&f(w1), &f(w2), t).unwrap();
        prop_assert!(v.is_normalized());
        prop_assert!(v.pairing_defect().unwrap() < 1e-10);
    }

    #[test]
    fn caratheodory_is_symmetric(w in bidisc_point(), z in bidisc_point()) {
        let a = caratheodory_star(DomainKind::Bidisc, &w, &z).unwrap().value_star;
        let b = caratheodory_star(DomainKind::Bidisc, &z, &w).unwrap().value_star;
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn sampling_is_deterministic_and_inside(seed in any::<u64>(), n in 1usize..600) {
        for d in [DomainKind::UnitDisc, DomainKind::Bidisc, DomainKind::Ball2, DomainKind::SymBidisc] {
            let a = sample(d, n, seed);
            prop_assert_eq!(a.len(), n);
            prop_assert_eq!(&a, &sample(d, n, seed));
            for z in &a {
                prop_assert!(contains(d, z).unwrap().inside);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn constructed_affine_inverse_matches_formula(t in 0.0..=1.0f64, z in bidisc_point()) {
        let g = LeftInverseSpec::bidisc_affine(t).unwrap();
        let cand = LempertCandidate::new(field_from_inverse(&g, GeodesicSpec::Diagonal).unwrap());
        let h = build_inverse(&cand, &RootSolveConfig::default()).unwrap();
        prop_assert!((h.eval(&z).unwrap() - g.eval(&z).unwrap()).norm() < 1e-10);
    }
}
