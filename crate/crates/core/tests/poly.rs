use meroconv::poly::{eval_log, poly_gcd, tuple_content, Exponents, GaussianRational, LogPolar, PolyTuple, SparsePoly};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

fn poly(terms: &[(i64, i64, u64, u64)]) -> SparsePoly {
    let mut p = SparsePoly::zero(2);
    for &(re, im, a, b) in terms {
        p = &p + &SparsePoly::monomial(GaussianRational::from_parts((re, 1), (im, 1)), Exponents::from_u64s(&[a, b]));
    }
    p
}

fn arb_poly() -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec((-3i64..=3, -3i64..=3, 0u64..=2, 0u64..=2), 1..=3)
        .prop_map(|t| poly(&t))
        .prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn gcd_divides_both(a in arb_poly(), b in arb_poly(), g in arb_poly()) {
        let (a, b) = (&a * &g, &b * &g);
        let d = poly_gcd(&a, &b);
        prop_assert!(a.div_exact(&d).is_some());
        prop_assert!(b.div_exact(&d).is_some());
        prop_assert!(d.div_exact(&g).is_some());
    }

    #[test]
    fn content_is_idempotent_and_absorbs_factors(
        comps in prop::collection::vec(arb_poly(), 2..=3),
        g in arb_poly(),
    ) {
        let t = PolyTuple::new(comps).unwrap();
        let c = tuple_content(&t);
        let reduced = t.div_exact(&c).unwrap();
        prop_assert!(tuple_content(&reduced).is_constant());
        let gt = t.mul_poly(&g).unwrap();
        prop_assert_eq!(tuple_content(&gt).monic(), (&g * &c).monic());
    }
}

/// `ln |x|` of a big rational through its leading bits.
fn ln_abs(x: &BigRational) -> f64 {
    fn ln_big(n: &BigInt) -> f64 {
        let bits = n.bits();
        let shift = bits.saturating_sub(60);
        let top: BigInt = n.abs() >> shift;
        let top: f64 = top.to_string().parse().unwrap();
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
    ln_big(x.numer()) - ln_big(x.denom())
}

#[test]
fn log_evaluation_of_monomials_matches_exact_powers() {
    let cases: [(i64, i64, u64); 5] = [(3, 7, 1 << 20), (-5, 4, (1 << 20) - 1), (11, 10, 777_777), (-1, 3, 1 << 19), (9, 2, 12_345)];
    for &(num, den, e) in &cases {
        let x = BigRational::new(BigInt::from(num), BigInt::from(den));
        let p = SparsePoly::monomial(GaussianRational::from_integer(1), Exponents::from_u64s(&[e]));
        let t = PolyTuple::new(vec![p]).unwrap();
        let z = Complex64::new(num as f64 / den as f64, 0.0);
        let v = &eval_log(&t, &[LogPolar::from_complex(z)]).unwrap()[0];
        let exact = BigRational::new_raw(x.numer().pow(e as u32), x.denom().pow(e as u32));
        let want = ln_abs(&exact);
        assert!((v.log_modulus - want).abs() <= 1e-12 * want.abs().max(1.0), "{num}/{den}^{e}: {} vs {want}", v.log_modulus);
        let negative = exact.is_negative();
        let phase = v.phase.rem_euclid(std::f64::consts::TAU);
        let want_phase = if negative { std::f64::consts::PI } else { 0.0 };
        assert!((phase - want_phase).abs() < 1e-6 || (!negative && (phase - std::f64::consts::TAU).abs() < 1e-6), "{phase}");
    }
}

#[test]
fn log_evaluation_of_a_monomial_tuple_in_two_variables() {
    let e = (1u64 << 20, 3u64 << 18);
    let c = GaussianRational::from_parts((2, 3), (1, 5));
    let p = SparsePoly::monomial(c.clone(), Exponents::from_u64s(&[e.0, e.1]));
    let t = PolyTuple::new(vec![p.clone(), SparsePoly::var(2, 1)]).unwrap();
    let z = [Complex64::new(0.9, 0.2), Complex64::new(-0.3, 1.05)];
    let x: Vec<LogPolar> = z.iter().map(|&w| LogPolar::from_complex(w)).collect();
    let v = eval_log(&t, &x).unwrap();
    let want = c.to_complex().norm().ln() + e.0 as f64 * z[0].norm().ln() + e.1 as f64 * z[1].norm().ln();
    assert!((v[0].log_modulus - want).abs() <= 1e-12 * want.abs());
    assert!((v[1].log_modulus - z[1].norm().ln()).abs() < 1e-15);
}
