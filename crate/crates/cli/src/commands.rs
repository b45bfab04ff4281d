use std::fmt::Write as _;
use std::path::Path;

use meroconv::convergence::{
    bubble_probe, classify, hyperplane_panel, lookup, mass_convergence, registry, uniform_separation, BubbleConfig,
    BubbleStatus, ClassifyConfig, Level, MapFamily, MassConfig, EXAMPLES,
};
use meroconv::dynamics::{fatou_scan, gamma_volume_series, ScanConfig, VolumeConfig};
use meroconv::geom::{
    fs_area_boundary, fs_area_interior, king_residue_check, rash_eps, rashkovskii_mass, ContourSpec, Domain, PolyLift,
    QuadBudget,
};
use meroconv::poly::{tuple_content, tuple_from_text, Exponents, GaussianRational, PolyTuple, SparsePoly};
use meroconv::projmap::{iterate_closed, reduce_rep, topological_degree, HomogRep};
use num_complex::Complex64;
use serde::Serialize;

use crate::report::Outcome;
use crate::{Command, RunConfig};

type Res<T> = Result<T, String>;

fn lib<T>(r: meroconv::error::Result<T>) -> Res<T> {
    r.map_err(|e| e.to_string())
}

fn listing() -> String {
    let mut s = String::from("available examples:\n");
    if let Ok(entries) = registry() {
        for e in entries {
            let _ = writeln!(s, "  {:<8} {}", e.name, e.description);
        }
    }
    s.push_str("  deg-<d>  the same map family for any d >= 1\n");
    s.push_str("a path to a map in text form is also accepted");
    s
}

/// A registry entry or a map read from a text file.
struct Target {
    map: Option<HomogRep>,
    family: Option<MapFamily>,
}

fn target(name: &str) -> Res<Target> {
    if let Ok(e) = lookup(name) {
        return Ok(Target {
            map: e.map,
            family: e.family,
        });
    }
    if Path::new(name).is_file() {
        let text = std::fs::read_to_string(name).map_err(|e| format!("{name}: {e}"))?;
        let (_, t) = lib(tuple_from_text(&text))?;
        let map = if t.is_homogeneous() { lib(HomogRep::new(t))? } else { HomogRep::local(t) };
        return Ok(Target {
            map: Some(map),
            family: None,
        });
    }
    Err(format!("unknown example {name:?}\n{}", listing()))
}

fn family(name: &str) -> Res<MapFamily> {
    target(name)?.family.ok_or_else(|| format!("{name} is a single map, not a family"))
}

fn map(name: &str) -> Res<HomogRep> {
    target(name)?.map.ok_or_else(|| format!("{name} is a family without a projective self-map"))
}

/// The map itself, or the family member at `--k` (first member by default).
fn member(name: &str, k: Option<u64>) -> Res<(Option<u64>, HomogRep)> {
    let t = target(name)?;
    match (t.map, t.family, k) {
        (Some(m), _, None) => Ok((None, m)),
        (_, Some(f), k) => {
            let k = k.unwrap_or(f.ks[0]);
            Ok((Some(k), lib(f.rep(k))?))
        }
        (Some(_), None, Some(_)) => Err(format!("{name} is a single map; --k does not apply")),
        (None, None, _) => unreachable!(),
    }
}

fn budget(cfg: &RunConfig, base: QuadBudget) -> Res<QuadBudget> {
    let mut b = base;
    if let Some(spec) = &cfg.budget {
        match spec.as_str() {
            "default" => b = QuadBudget::default(),
            "fast" => {
                b = QuadBudget {
                    radial_panels: 12,
                    nodes_per_panel: 6,
                    angular: 12,
                    samples: 200_000,
                    ..QuadBudget::default()
                }
            }
            "fine" => {
                b = QuadBudget {
                    radial_panels: 30,
                    nodes_per_panel: 10,
                    angular: 24,
                    samples: 10_000_000,
                    ..QuadBudget::default()
                }
            }
            _ => {
                for kv in spec.split(',') {
                    let (k, v) = kv.split_once('=').ok_or_else(|| format!("bad budget entry {kv:?}"))?;
                    let n: u64 = v.trim().parse().map_err(|_| format!("bad budget value {v:?}"))?;
                    match k.trim() {
                        "panels" => b.radial_panels = n as usize,
                        "nodes" => b.nodes_per_panel = n as usize,
                        "angular" => b.angular = n as usize,
                        "samples" => b.samples = n,
                        other => return Err(format!("unknown budget key {other:?}")),
                    }
                }
            }
        }
    }
    b.seed = cfg.seed;
    if b.radial_panels == 0 || b.nodes_per_panel == 0 || b.angular == 0 || b.samples == 0 {
        return Err("budget entries must be positive".into());
    }
    Ok(b)
}

fn parse_point(s: &str) -> Res<Vec<Complex64>> {
    s.split(',')
        .map(|p| p.trim().parse::<Complex64>().map_err(|_| format!("bad complex number {p:?}")))
        .collect()
}

fn parse_grid(s: &str) -> Res<(usize, usize)> {
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(|| format!("grid must look like 200x200, got {s:?}"))?;
    let p = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad grid size {t:?}"));
    Ok((p(a)?, p(b)?))
}

/// Shortest round-trip form; empty for non-finite values.
fn num(x: f64) -> String {
    serde_json::Number::from_f64(x).map(|n| n.to_string()).unwrap_or_default()
}

fn positive(name: &str, v: f64) -> Res<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("--{name} must be positive"))
    }
}

#[derive(Serialize)]
struct ExampleInfo {
    name: String,
    description: String,
    map: Option<String>,
    ks: Option<(u64, u64)>,
    domain: Option<Domain>,
}

#[derive(Serialize)]
struct ReduceResult {
    k: Option<u64>,
    input: String,
    content: String,
    reduced: String,
    degree: String,
}

#[derive(Serialize)]
struct IterateResult {
    map: String,
    k: u64,
    iterate: String,
    components: Vec<String>,
    degree: String,
}

#[derive(Serialize)]
struct DegreeResult {
    map: String,
    algebraic_degree: String,
    topological_degree: Option<String>,
    note: Option<String>,
}

#[derive(Serialize)]
struct AreaResult {
    k: u64,
    member: String,
    center: [f64; 2],
    radius: f64,
    interior: meroconv::geom::AreaReport,
    boundary: meroconv::geom::AreaReport,
}

#[derive(Serialize)]
struct MassEntry {
    order: usize,
    value: Option<f64>,
    error: Option<f64>,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct MassResult {
    k: u64,
    member: String,
    eps: f64,
    masses: Vec<MassEntry>,
}

#[derive(Serialize)]
struct KingResult {
    power: u64,
    expected_atom: f64,
    report: meroconv::geom::KingReport,
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> Res<Outcome> {
    match cmd {
        Command::Examples => {
            let mut out = Vec::new();
            for name in EXAMPLES {
                let e = lib(lookup(name))?;
                out.push(ExampleInfo {
                    name: e.name,
                    description: e.description,
                    map: e.map.map(|m| m.to_string()),
                    ks: e.family.as_ref().map(|f| (f.ks[0], *f.ks.last().unwrap())),
                    domain: e.family.map(|f| f.domain),
                });
            }
            Outcome::new(out)
        }
        Command::Reduce { target } => {
            let (k, rep) = member(target, cfg.k)?;
            let red = lib(reduce_rep(&rep))?;
            Outcome::new(ReduceResult {
                k,
                input: rep.to_string(),
                content: tuple_content(rep.tuple()).to_string(),
                degree: red.summary().degree,
                reduced: red.to_string(),
            })
        }
        Command::Iterate { target } => {
            let f = map(target)?;
            let k = cfg.k.unwrap_or(2);
            let g = lib(iterate_closed(&f, k))?;
            Outcome::new(IterateResult {
                map: f.to_string(),
                k,
                iterate: g.to_string(),
                components: g.tuple().components().iter().map(|p| p.to_string()).collect(),
                degree: g.summary().degree,
            })
        }
        Command::Degree { target } => {
            let f = map(target)?;
            let (topological_degree, note) = match topological_degree(&f) {
                Ok(d) => (Some(d.to_string()), None),
                Err(e) => (None, Some(e.to_string())),
            };
            Outcome::new(DegreeResult {
                map: f.to_string(),
                algebraic_degree: lib(reduce_rep(&f))?.summary().degree,
                topological_degree,
                note,
            })
        }
        Command::Classify { target } => {
            let mut fam = family(target)?;
            if let Some(kmax) = cfg.kmax {
                let ks: Vec<u64> = fam.ks.iter().copied().filter(|&k| k <= kmax).collect();
                if ks.len() < 3 {
                    return Err(format!("--kmax {kmax} leaves fewer than three members"));
                }
                fam = fam.with_ks(ks);
            }
            let b = budget(cfg, QuadBudget::default())?;
            let mut c = ClassifyConfig {
                seed: cfg.seed,
                ..ClassifyConfig::default()
            }
            .with_budget(b);
            if let Some(t) = cfg.tol {
                c.rep.cauchy_tol = positive("tol", t)?;
            }
            let v = classify(&fam, &c);
            let inconclusive = v.level == Level::Inconclusive;
            Ok(Outcome::new(v)?.with_budget(b).inconclusive(inconclusive))
        }
        Command::Area { target } => {
            let fam = family(target)?;
            if fam.dim() != 1 {
                return Err(format!("{target} is not a family of one variable"));
            }
            let k = cfg.k.unwrap_or(*fam.ks.last().unwrap());
            let rep = lib(fam.rep(k))?;
            let center = fam.domain.center()[0];
            let radius = positive("radius", cfg.radius.unwrap_or(fam.domain.min_radius()))?;
            let b = budget(cfg, QuadBudget::default())?;
            let lift = lib(PolyLift::new(rep.tuple()))?;
            let disk = ContourSpec::new(center, radius);
            Ok(Outcome::new(AreaResult {
                k,
                member: rep.to_string(),
                center: [center.re, center.im],
                radius,
                interior: lib(fs_area_interior(&lift, &disk, &b))?,
                boundary: lib(fs_area_boundary(&lift, &disk))?,
            })?
            .with_budget(b))
        }
        Command::Mass { target } => {
            let fam = family(target)?;
            let k = cfg.k.unwrap_or(*fam.ks.last().unwrap());
            let orders: Vec<usize> = match cfg.order {
                Some(p) if p >= 1 && p <= fam.dim() => vec![p],
                Some(p) => return Err(format!("--order {p} outside 1..={}", fam.dim())),
                None => (1..=fam.dim()).collect(),
            };
            let b = budget(cfg, QuadBudget::default())?;
            let mc = MassConfig {
                eps: positive("eps", cfg.eps.unwrap_or(MassConfig::default().eps))?,
                budget: b,
                ..MassConfig::default()
            };
            let masses = mass_convergence(&fam, &orders, &[k], None, &mc)
                .into_iter()
                .map(|s| MassEntry {
                    order: s.order,
                    value: s.values.first().copied(),
                    error: s.errors.first().copied(),
                    notes: s.notes,
                })
                .collect();
            Ok(Outcome::new(MassResult {
                k,
                member: lib(fam.rep(k))?.to_string(),
                eps: mc.eps,
                masses,
            })?
            .with_budget(b))
        }
        Command::King => {
            let m = cfg.k.unwrap_or(1);
            if m == 0 {
                return Err("--k must be at least 1".into());
            }
            let radius = positive("radius", cfg.radius.unwrap_or(0.3))?;
            let b = budget(cfg, QuadBudget::default())?;
            let one = GaussianRational::from_integer(1);
            let t = lib(PolyTuple::new(vec![
                SparsePoly::monomial(one.clone(), Exponents::from_u64s(&[m, 0])),
                SparsePoly::monomial(one, Exponents::from_u64s(&[0, m])),
            ]))?;
            let lift = lib(PolyLift::new(&t))?;
            Ok(Outcome::new(KingResult {
                power: m,
                expected_atom: (m * m) as f64,
                report: lib(king_residue_check(&lift, radius, &b))?,
            })?
            .with_budget(b))
        }
        Command::Rash => {
            let k = cfg.k.unwrap_or(2);
            let k = u32::try_from(k).map_err(|_| "--k too large".to_string())?;
            let eps = cfg.eps.unwrap_or(rash_eps(k));
            let radius = positive("radius", cfg.radius.unwrap_or(0.5))?;
            let b = budget(cfg, QuadBudget::default())?;
            let r = lib(rashkovskii_mass(k, eps, &Domain::centered_ball(3, radius), &b))?;
            Ok(Outcome::new(r)?.with_budget(b))
        }
        Command::FatouScan { target } => {
            let f = map(target)?;
            let mut sc = ScanConfig::default();
            if let Some(c) = cfg.chart {
                sc.chart = c;
            }
            if let Some(g) = &cfg.grid {
                sc.grid = parse_grid(g)?;
            }
            if let Some(k) = cfg.kmax {
                sc.kmax = k;
            }
            if let Some(t) = cfg.tol {
                sc.tol = positive("tol", t)?;
            }
            let g = lib(fatou_scan(&f, &sc))?;
            let table = g.to_csv();
            Ok(Outcome::new(g)?.with_table(table))
        }
        Command::GammaVolumes => {
            let eps = positive("eps", cfg.eps.unwrap_or(0.5))?;
            let kmax = cfg.kmax.unwrap_or(8);
            if kmax == 0 || kmax > 60 {
                return Err("--kmax must lie in 1..=60".into());
            }
            let base = VolumeConfig::default();
            let vc = VolumeConfig {
                budget: budget(cfg, base.budget)?,
                ..base
            };
            let ks: Vec<u64> = (1..=kmax).collect();
            let s = lib(gamma_volume_series(&ks, eps, &vc))?;
            let mut t = String::from("k,first,first_error,second,second_error,second_bound\n");
            for i in 0..s.ks.len() {
                let _ = writeln!(
                    t,
                    "{},{},{},{},{},{}",
                    s.ks[i],
                    num(s.first[i]),
                    num(s.first_error[i]),
                    num(s.second[i]),
                    num(s.second_error[i]),
                    num(s.second_bound[i])
                );
            }
            Ok(Outcome::new(s)?.with_table(t).with_budget(vc.budget))
        }
        Command::Bubble { target } => {
            let fam = family(target)?;
            let p = cfg.point.as_deref().ok_or("--point is required")?;
            let a = parse_point(p)?;
            if a.len() != fam.dim() {
                return Err(format!("--point needs {} coordinates", fam.dim()));
            }
            let mut bc = BubbleConfig::default();
            if let Some(kmax) = cfg.kmax {
                let ks: Vec<u64> = fam.ks.iter().copied().filter(|&k| k <= kmax).collect();
                if ks.len() < 2 {
                    return Err(format!("--kmax {kmax} leaves fewer than two members"));
                }
                bc.ks = Some(ks[ks.len().saturating_sub(3)..].to_vec());
            }
            let r = lib(bubble_probe(&fam, &a, &bc))?;
            let inconclusive = r.status == BubbleStatus::Inconclusive;
            Ok(Outcome::new(r)?.inconclusive(inconclusive))
        }
        Command::Separation { target, pair } => {
            let fam = family(target)?;
            let ncoords = lib(fam.rep(fam.ks[0]))?.target_dim() + 1;
            let panel = hyperplane_panel(ncoords, 3, cfg.seed);
            let (i, j) = pair.split_once(',').ok_or("--pair must look like 0,1")?;
            let idx = |s: &str| -> Res<usize> {
                let i: usize = s.trim().parse().map_err(|_| format!("bad index {s:?}"))?;
                (i < panel.len()).then_some(i).ok_or(format!("index {i} outside the panel of {}", panel.len()))
            };
            let (i, j) = (idx(i)?, idx(j)?);
            let r = lib(uniform_separation(&fam, &panel[i], &panel[j], &fam.slice_panel()))?;
            let mut t = String::from("k,distance\n");
            for p in &r.per_k {
                let _ = writeln!(t, "{},{}", p.k, p.distance.map(num).unwrap_or_default());
            }
            Ok(Outcome::new(r)?.with_table(t))
        }
    }
}
