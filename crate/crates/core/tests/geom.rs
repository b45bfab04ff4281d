use std::f64::consts::PI;

use meroconv::geom::*;
use meroconv::poly::{PolyTuple, SparsePoly};
use num_complex::Complex64 as C;
use proptest::prelude::*;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

fn poly_lift(nvars: usize, comps: &[&[(i64, &[u64])]]) -> PolyLift {
    let t = PolyTuple::new(comps.iter().map(|t| SparsePoly::from_int_terms(nvars, t)).collect()).unwrap();
    PolyLift::new(&t).unwrap()
}

/// `∫_0^r g(ρ) dρ` by composite Simpson, for radial oracles.
fn simpson(g: impl Fn(f64) -> f64, r: f64, n: usize) -> f64 {
    let h = r / n as f64;
    let mut s = g(0.0) + g(r);
    for i in 1..n {
        s += g(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn winding_number_of_powers() {
    for k in 1..=12u32 {
        let h = ScalarFn::new(move |z: C| z.powu(k));
        let r = zero_count_contour(&h, &ContourSpec::centered(0.5)).unwrap();
        assert_eq!(r.count, k as usize);
        assert!(r.residual < 1e-6);
    }
    let h = ScalarFn::new(|_| c(3.0));
    assert_eq!(zero_count_contour(&h, &ContourSpec::centered(1.0)).unwrap().count, 0);
}

#[test]
fn zero_on_the_contour_is_refused() {
    let h = ScalarFn::new(|z: C| z - 0.5);
    assert!(matches!(
        zero_count_contour(&h, &ContourSpec::centered(0.5)),
        Err(meroconv::Error::VanishingOnContour { .. })
    ));
}

#[test]
fn contour_roots_recover_multiplicities() {
    let h = ScalarFn::new(|z: C| (z - 0.2).powu(2) * (z + C::new(0.1, 0.4)) * (z - 3.0));
    let roots = contour_roots(&h, &ContourSpec::centered(1.0)).unwrap();
    assert_eq!(roots.len(), 2);
    assert_eq!(roots[0].multiplicity, 1);
    assert!((roots[0].z() - C::new(-0.1, -0.4)).norm() < 1e-6);
    assert_eq!(roots[1].multiplicity, 2);
    assert!((roots[1].z() - 0.2).norm() < 1e-6);
}

#[test]
fn line_area_interior_and_boundary() {
    let f = poly_lift(1, &[&[(1, &[0])], &[(1, &[1])]]);
    let b = QuadBudget::default();
    for r in [0.5, 1.0, 2.0] {
        let exact = r * r / (1.0 + r * r);
        let a = fs_area_interior(&f, &ContourSpec::centered(r), &b).unwrap();
        assert!((a.value - exact).abs() < 1e-6, "r={r}: {}", a.value);
        let bd = fs_area_boundary(&f, &ContourSpec::centered(r)).unwrap();
        assert!((bd.value - exact).abs() < 1e-9);
        assert_eq!(bd.lift_zeros, Some(0));
    }
    let a = fs_area_interior(&f, &ContourSpec::centered(100.0), &b).unwrap();
    assert!((a.value - 1.0).abs() < 1e-3);
}

#[test]
fn squared_map_area_matches_radial_oracle() {
    let f = poly_lift(1, &[&[(1, &[0])], &[(1, &[2])]]);
    for r in [0.6, 1.3] {
        // density of [1:z²] is 4ρ²/(1+ρ⁴)², so area = ∫ 8ρ³/(1+ρ⁴)² dρ
        let oracle = simpson(|p| 8.0 * p.powi(3) / (1.0 + p.powi(4)).powi(2), r, 20_000);
        assert!((oracle - 2.0 * r.powi(4) / (1.0 + r.powi(4))).abs() < 1e-10);
        let a = fs_area_interior(&f, &ContourSpec::centered(r), &QuadBudget::default()).unwrap();
        assert!((a.value - oracle).abs() < 1e-6);
    }
}

#[test]
fn non_reduced_lift_subtracts_its_zero() {
    let f = poly_lift(1, &[&[(1, &[1])], &[(1, &[2])]]);
    let r = 0.8;
    let bd = fs_area_boundary(&f, &ContourSpec::centered(r)).unwrap();
    assert_eq!(bd.lift_zeros, Some(1));
    assert!((bd.value - r * r / (1.0 + r * r)).abs() < 1e-9);
    let konst = poly_lift(1, &[&[(2, &[0])], &[(-1, &[0])]]);
    assert!(fs_area_boundary(&konst, &ContourSpec::centered(1.0)).unwrap().value.abs() < 1e-12);
}

#[test]
fn boundary_count_bounded_for_shifted_family() {
    // P(z, z - 1/k) with P(a, b) = a² b: at most three zeros
    for k in 1..=20 {
        let s = 1.0 / k as f64;
        let h = ScalarFn::new(move |z: C| z * z * (z - s));
        let n = zero_count_contour(&h, &ContourSpec::centered(2.0)).unwrap().count;
        assert!(n <= 3);
    }
}

#[test]
fn log_norm_of_identity_in_c2() {
    let f = poly_lift(2, &[&[(1, &[1, 0])], &[(1, &[0, 1])]]);
    let b = QuadBudget::default();
    let zs = ZeroSet::origin(2);
    // order 2: density vanishes off the origin
    let u = LogNormPotential::new(&f);
    for z in [[C::new(0.1, 0.2), C::new(-0.3, 0.0)], [C::new(0.01, 0.0), C::new(0.0, 0.02)]] {
        let j = u.jet(&z).unwrap();
        assert!(mixed_density(&j.hess, 2, 2).abs() <= 1e-10);
    }
    let dom = Domain::centered_ball(2, 0.7);
    let m2 = mixed_ma_mass(&f, &dom, 2, &zs, 0.1, &b).unwrap();
    assert!(m2.value.abs() < 1e-10);
    // order 1: tr H = 1/|z|², density 1/(π²|z|²), mass = r²
    let mut last = 0.0;
    for r in [0.3, 0.7, 1.0] {
        let m1 = mixed_ma_mass(&f, &Domain::centered_ball(2, r), 1, &zs, 0.1 * r, &b).unwrap();
        assert!((m1.value - r * r).abs() < 1e-6, "{} vs {}", m1.value, r * r);
        assert!(m1.value > last);
        last = m1.value;
    }
}

#[test]
fn mass_is_scale_invariant() {
    let f = poly_lift(2, &[&[(1, &[1, 1]), (1, &[0, 0])], &[(1, &[2, 0])], &[(1, &[0, 1])]]);
    let g = poly_lift(2, &[&[(7, &[1, 1]), (7, &[0, 0])], &[(7, &[2, 0])], &[(7, &[0, 1])]]);
    let dom = Domain::unit_polydisk(2);
    let b = QuadBudget::default();
    for p in 1..=2 {
        let a = mixed_ma_mass(&f, &dom, p, &ZeroSet::Empty, 0.0, &b).unwrap();
        let bb = mixed_ma_mass(&g, &dom, p, &ZeroSet::Empty, 0.0, &b).unwrap();
        assert!((a.value - bb.value).abs() < 1e-9 * a.value.abs().max(1.0));
        assert!(a.value > 0.0);
    }
}

#[test]
fn constant_maps_carry_no_mass() {
    let f = poly_lift(2, &[&[(1, &[0, 0])], &[(3, &[0, 0])]]);
    let dom = Domain::unit_polydisk(2);
    let b = QuadBudget::default();
    for p in 1..=2 {
        assert_eq!(mixed_ma_mass(&f, &dom, p, &ZeroSet::Empty, 0.0, &b).unwrap().value, 0.0);
    }
    let v = graph_volume(&f, &dom, &ZeroSet::Empty, 0.0, &b).unwrap();
    assert!((v.value - dom.euclidean_mass()).abs() < 1e-12);
}

#[test]
fn graph_of_line_over_unit_disk() {
    let f = poly_lift(1, &[&[(1, &[0])], &[(1, &[1])]]);
    let v = graph_volume(&f, &Domain::centered_ball(1, 1.0), &ZeroSet::Empty, 0.0, &QuadBudget::default()).unwrap();
    assert!((v.value - 1.5).abs() < 1e-6);
}

#[test]
fn king_atoms_are_local_degrees() {
    let b = QuadBudget::default();
    let id = poly_lift(2, &[&[(1, &[1, 0])], &[(1, &[0, 1])]]);
    for r in [0.3, 0.7] {
        let k = king_residue_check(&id, r, &b).unwrap();
        assert!((k.atom - 1.0).abs() < 0.05, "{k:?}");
    }
    let sq = poly_lift(2, &[&[(1, &[2, 0])], &[(1, &[0, 2])]]);
    let k = king_residue_check(&sq, 0.4, &b).unwrap();
    assert!((k.atom - 4.0).abs() < 0.05, "{k:?}");
    let free = poly_lift(2, &[&[(1, &[1, 0])], &[(1, &[0, 1])], &[(1, &[0, 0])]]);
    let k = king_residue_check(&free, 0.5, &b).unwrap();
    assert!(k.atom.abs() < 0.05, "{k:?}");
}

#[test]
fn rash_atoms_and_growth() {
    for k in [2u32, 4, 6] {
        let r = rashkovskii_mass(k, 0.0, &Domain::centered_ball(3, 0.5), &QuadBudget { samples: 20_000, ..Default::default() })
            .unwrap();
        assert_eq!(r.mass.atom, Some((k / 2) as f64));
        assert!(r.mass.value.abs() < 1e-6);
    }
    let b = QuadBudget { samples: 400_000, ..Default::default() };
    let dom = Domain::centered_ball(3, 0.5);
    let m2 = rashkovskii_mass(2, 0.1, &dom, &b).unwrap().mass;
    let m3 = rashkovskii_mass(3, 0.1, &dom, &b).unwrap().mass;
    assert!(m3.value - m3.error > m2.value + m2.error, "{m2:?} {m3:?}");
}

#[test]
fn gamma_potential_first_mass_matches_one_dimensional_reduction() {
    // first integral of the quadratic example at N = 2 over the ε-bidisk
    let (n, eps) = (2u32, 0.5f64);
    let pot = GammaPotential { n };
    let dom = Domain::polydisk(vec![c(0.0), c(0.0)], vec![eps, eps]).unwrap();
    let b = QuadBudget { angular: 4, ..Default::default() };
    let m = potential_mass(&pot, &dom, 1, &ZeroSet::origin(2), 0.05, &b).unwrap();
    let nf = n as f64;
    let inner = |r1: f64| {
        let a = r1.powf(2.0 * nf - 2.0);
        nf * nf * r1.powf(2.0 * nf - 1.0) * eps * eps / 2.0
            + (nf - 1.0).powi(2) * r1.powf(2.0 * nf - 3.0) * 0.5
                * ((a + eps * eps).ln() - (2.0 * nf - 2.0) * r1.ln() + a / (a + eps * eps) - 1.0)
            + r1 * eps * eps / (2.0 * (a + eps * eps))
    };
    let oracle = 4.0 * PI * PI * graded_toward(0.0, eps, 40, 12).iter().map(|&(x, w)| w * inner(x)).sum::<f64>();
    assert!((PI * PI * m.value - oracle).abs() < 1e-5 * oracle, "{} vs {oracle}", PI * PI * m.value);
}

fn cplx() -> impl Strategy<Value = C> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| C::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn levi_symmetric_functions_are_nonnegative(
        n in 1usize..=3,
        f in prop::collection::vec(cplx(), 4),
        df in prop::collection::vec(cplx(), 12),
    ) {
        let m = 4;
        let Some(j) = log_norm_jet(&f[..m], &df[..m * n], n) else { return Ok(()) };
        let tr = elementary_symmetric(&j.hess, n, 1);
        for p in 1..=n {
            let e = elementary_symmetric(&j.hess, n, p);
            prop_assert!(e >= -1e-8 * tr.abs().powi(p as i32).max(1.0), "p={p} e={e}");
            prop_assert!(mixed_density(&j.hess, n, p) >= -1e-8 * tr.abs().powi(p as i32).max(1.0));
        }
    }

    #[test]
    fn zero_count_ignores_nonvanishing_factors(
        inside in prop::collection::vec((0.0..0.8f64, 0.0..6.28f64), 0..5),
        outside in prop::collection::vec((1.2..3.0f64, 0.0..6.28f64), 0..4),
        c in (1.5..4.0f64, 0.0..6.28f64),
    ) {
        let roots: Vec<C> = inside.iter().chain(&outside).map(|&(r, t)| C::from_polar(r, t)).collect();
        let c = C::from_polar(c.0, c.1);
        let p = roots.clone();
        let h = ScalarFn::new(move |z: C| p.iter().map(|a| z - a).product());
        let g = ScalarFn::new(move |z: C| roots.iter().map(|a| z - a).product::<C>() * (c - z) * (z * z + 9.0));
        let d = ContourSpec::centered(1.0);
        let a = zero_count_contour(&h, &d).unwrap().count;
        let b = zero_count_contour(&g, &d).unwrap().count;
        prop_assert_eq!(a, inside.len());
        prop_assert_eq!(b, inside.len());
    }
}
