use meroconv::convergence::*;
use meroconv::geom::{fs_area_boundary, fs_area_interior, ContourSpec, Domain, PolyLift, QuadBudget};
use meroconv::poly::{GaussianRational, PolyTuple, SparsePoly};
use meroconv::projmap::HomogRep;
use num_complex::Complex64 as C;

fn tuple(nvars: usize, comps: &[&[(i64, &[u64])]]) -> PolyTuple {
    PolyTuple::new(comps.iter().map(|t| SparsePoly::from_int_terms(nvars, t)).collect()).unwrap()
}

fn constant_family() -> MapFamily {
    let t = tuple(1, &[&[(1, &[0])], &[(1, &[2]), (1, &[0])]]);
    MapFamily::new("const", Domain::unit_polydisk(1), (1..=6).collect(), move |_| Ok(HomogRep::local(t.clone())))
}

#[test]
fn golden_verdicts() {
    let cases = [
        ("exp", Level::Divergent),
        ("exp-b", Level::Gamma),
        ("rash", Level::Weak),
        ("cremona", Level::Strong),
    ];
    for (name, want) in cases {
        let fam = lookup(name).unwrap().family.unwrap();
        let v = classify(&fam, &ClassifyConfig::default());
        assert_eq!(v.level, want, "{name}: {:?}", v.notes);
        assert!(v.is_consistent(), "{name}");
    }
}

#[test]
fn exp_counts_grow_like_k() {
    let fam = exp_family();
    let h = Hyperplane::coordinate(2, 0);
    let c = divisor_count_bound(&fam, &h, &fam.slice_panel(), None).unwrap();
    let counts: Vec<usize> = c.counts.iter().map(|x| x.unwrap()).collect();
    assert_eq!(counts, (1..=12).collect::<Vec<_>>());
    assert!(!c.bounded);
}

#[test]
fn rutish_second_component_vanishes_to_order_k() {
    let fam = rutish_family().unwrap();
    let h = Hyperplane::coordinate(2, 1);
    let raw = divisor_count_bound(&fam, &h, &fam.slice_panel(), None).unwrap();
    assert!(!raw.bounded);
    assert_eq!(raw.counts.last().copied().flatten(), Some(12));
    // the limit (z1, 0) lies in the hyperplane, which is then skipped
    let lim = fam.limit.clone().unwrap();
    let skipped = divisor_count_bound(&fam, &h, &fam.slice_panel(), Some(&lim)).unwrap();
    assert!(skipped.skipped.is_some() && skipped.counts.is_empty());
    let v = classify(&fam, &ClassifyConfig::default());
    assert!(v.divisors.iter().filter(|d| d.skipped.is_none()).all(|d| d.bounded));
}

#[test]
fn exp_b_limit_and_metric() {
    let fam = exp_b_family().unwrap();
    let r = rep_limit(&fam, &RepConfig::default()).unwrap();
    assert_eq!(r.trend, RepTrend::Cauchy);
    assert_eq!(r.limit.as_ref().unwrap().tuple(), &tuple(1, &[&[(1, &[1])], &[(1, &[1])]]));
    // distance between consecutive reps decays like 1/k²; k·d_k shrinks like 1/k
    let tail: Vec<f64> = r.metric.iter().rev().take(5).map(|m| m.distance * (m.k * m.k) as f64).collect();
    let (lo, hi) = tail.iter().fold((f64::MAX, 0f64), |(a, b), &x| (a.min(x), b.max(x)));
    assert!(hi / lo < 1.3, "{tail:?}");
    let v = classify(&fam, &ClassifyConfig::default());
    assert_eq!(v.reducedness.unwrap().divisor, "z0");
}

#[test]
fn rash_limit_is_reduced() {
    let fam = rash_family().unwrap();
    let r = rep_limit(&fam, &RepConfig::default()).unwrap();
    let want = tuple(3, &[&[(1, &[1, 0, 0])], &[(1, &[1, 0, 0])], &[(1, &[0, 1, 0])], &[]]);
    assert_eq!(r.limit.unwrap().tuple(), &want);
    assert!(reducedness_of_limit(&want).reduced);
}

#[test]
fn reducedness_examples() {
    let zz = reducedness_of_limit(&tuple(1, &[&[(1, &[1])], &[(1, &[1])]]));
    assert!(!zz.reduced);
    assert_eq!(zz.divisor_degree, "1");
    assert!(reducedness_of_limit(&tuple(1, &[&[(1, &[0])], &[(1, &[1])]])).reduced);
    let sq = reducedness_of_limit(&tuple(2, &[&[(2, &[2, 1])], &[(4, &[1, 2])]]));
    assert!(!sq.reduced);
    assert_eq!(sq.divisor_degree, "2");
}

#[test]
fn constant_family_is_strong_with_zero_metric() {
    let fam = constant_family();
    let r = rep_limit(&fam, &RepConfig::default()).unwrap();
    assert!(r.metric.iter().all(|m| m.distance == 0.0));
    let v = classify(&fam, &ClassifyConfig::default());
    assert_eq!(v.level, Level::Strong);
    assert!(v.masses.iter().all(|m| m.trend == MassTrend::Converging));
    let cr = classify(&cremona_family().unwrap(), &ClassifyConfig::default());
    assert!(cr.rep.metric.iter().all(|m| m.distance == 0.0));
}

#[test]
fn exp_b_first_mass_matches_boundary_areas() {
    let fam = exp_b_family().unwrap();
    let ks = [10u64, 20, 40];
    let s = &mass_convergence(&fam, &[1], &ks, None, &MassConfig::default())[0];
    assert_eq!(s.trend, MassTrend::Converging);
    for (i, &k) in ks.iter().enumerate() {
        let lift = PolyLift::new(fam.rep(k).unwrap().tuple()).unwrap();
        let oracle = fs_area_boundary(&lift, &ContourSpec::centered(1.0)).unwrap().value;
        assert!((s.values[i] - oracle).abs() < 1e-4, "k={k}: {} vs {oracle}", s.values[i]);
    }
}

#[test]
fn rash_order_three_masses_increase() {
    let fam = rash_family().unwrap();
    let s = &mass_convergence(&fam, &[3], &[1, 2, 3], fam.limit.as_ref(), &MassConfig::default())[0];
    assert_eq!(s.trend, MassTrend::Diverging);
    assert!(s.values.windows(2).all(|w| w[1] > w[0]));
    assert!(s.limit_mass.unwrap().abs() < 1e-9);
}

#[test]
fn classification_ignores_scalar_factors() {
    for fam in [exp_b_family().unwrap(), exp_family(), constant_family()] {
        let a = classify(&fam, &ClassifyConfig::default());
        let c = GaussianRational::from_parts((3, 1), (-2, 5));
        let b = classify(&fam.scaled(c), &ClassifyConfig::default());
        assert_eq!(a.level, b.level, "{}", fam.name);
        for (x, y) in a.rep.metric.iter().zip(&b.rep.metric) {
            assert!((x.distance - y.distance).abs() < 1e-12);
        }
    }
}

#[test]
fn slice_areas_bounded_for_gamma_families() {
    for fam in [exp_b_family().unwrap(), constant_family()] {
        let v = classify(&fam, &ClassifyConfig::default());
        assert!(v.level >= Level::Gamma);
        let areas: Vec<f64> = fam
            .ks
            .iter()
            .map(|&k| {
                let lift = PolyLift::new(fam.rep(k).unwrap().tuple()).unwrap();
                fs_area_interior(&lift, &ContourSpec::centered(0.9), &QuadBudget::default()).unwrap().value
            })
            .collect();
        assert!(areas.iter().all(|&a| (0.0..=2.0).contains(&a)), "{areas:?}");
    }
}

#[test]
fn separation_examples() {
    let fam = exp_b_family().unwrap();
    let h = hyperplane_panel(2, 0, 0);
    let s = uniform_separation(&fam, &h[0], &h[1], &fam.slice_panel()).unwrap();
    for p in &s.per_k {
        match p.distance {
            Some(d) => assert!((d - 1.0 / p.k as f64).abs() < 1e-6, "{p:?}"),
            // the zero 1/k lies outside the slices
            None => assert!(p.k <= 2),
        }
    }
    assert!(s.infimum.unwrap() <= 0.02 + 1e-9);

    let rash = rash_family().unwrap();
    let h = hyperplane_panel(4, 0, 0);
    let s = uniform_separation(&rash, &h[0], &h[2], &rash.slice_panel()).unwrap();
    assert!(s.infimum.unwrap() > 0.1);
    assert!(s.per_k.iter().all(|p| p.distance.unwrap() >= 0.0));

    let c = constant_family();
    let s = uniform_separation(&c, &Hyperplane::coordinate(2, 0), &Hyperplane::coordinate(2, 1), &c.slice_panel()).unwrap();
    assert!(s.per_k.iter().all(|p| p.distance.is_none()) || s.infimum.unwrap() > 0.0);
}

#[test]
fn bubbles_over_the_indeterminacy_line() {
    let fam = rash_family().unwrap();
    let cfg = BubbleConfig::default();
    let on = bubble_probe(&fam, &[C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.1, 0.0)], &cfg).unwrap();
    assert_eq!(on.status, BubbleStatus::Nonempty);
    assert!(on.clusters.iter().any(|c| c.limit_distance > 0.3));
    let off = bubble_probe(&fam, &[C::new(0.2, 0.0), C::new(0.1, 0.0), C::new(0.1, 0.0)], &cfg).unwrap();
    assert_eq!(off.status, BubbleStatus::Empty);
    for s in &on.stages {
        assert!(s.clusters.iter().all(|c| (c.center.iter().map(|z| z.norm()).fold(0.0, f64::max) - 1.0).abs() < 1e-12));
    }
    let strong = bubble_probe(&constant_family(), &[C::new(0.3, 0.1)], &cfg).unwrap();
    assert_eq!(strong.status, BubbleStatus::Empty);
}

#[test]
fn iterate_family_bubbles_along_the_axis_line() {
    let fam = lookup("deg2").unwrap().family.unwrap();
    let cfg = BubbleConfig {
        ks: Some(vec![4, 5]),
        ..BubbleConfig::default()
    };
    let r = bubble_probe(&fam, &[C::new(0.5, 0.0), C::new(0.0, 0.0)], &cfg).unwrap();
    assert_eq!(r.status, BubbleStatus::Nonempty);
    // clusters lie on the line {Z1 = 0}
    for c in &r.clusters {
        let norm = c.center.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(c.center[1].norm() / norm < 0.05, "{:?}", c.center);
    }
}
