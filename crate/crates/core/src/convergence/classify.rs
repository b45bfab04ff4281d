use serde::Serialize;

use super::divisors::{divisor_count_bound, hyperplane_panel, HyperplaneCounts};
use super::family::MapFamily;
use super::masses::{mass_convergence, MassConfig, MassSeries, MassTrend};
use super::replimit::{rep_limit, reducedness_on, RepConfig, RepLimit, RepTrend, Reducedness};
use crate::geom::QuadBudget;

/// Convergence levels, weakest first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Level {
    Divergent,
    Inconclusive,
    Gamma,
    Weak,
    Strong,
}

impl Level {
    pub fn name(self) -> &'static str {
        match self {
            Level::Divergent => "divergent",
            Level::Inconclusive => "inconclusive",
            Level::Gamma => "gamma",
            Level::Weak => "weak",
            Level::Strong => "strong",
        }
    }
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassifyConfig {
    pub rep: RepConfig,
    pub mass: MassConfig,
    /// Seeded random hyperplanes added to the coordinate ones.
    pub random_hyperplanes: usize,
    pub seed: u64,
    /// `k` values for mass series; overrides the family's own choice.
    pub mass_ks: Option<Vec<u64>>,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            rep: RepConfig::default(),
            mass: MassConfig::default(),
            random_hyperplanes: 3,
            seed: 7,
            mass_ks: None,
        }
    }
}

impl ClassifyConfig {
    pub fn with_budget(mut self, budget: QuadBudget) -> Self {
        self.mass.budget = budget;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub family: String,
    pub level: Level,
    /// Highest level whose evidence is complete; equals `level` unless the
    /// verdict is inconclusive.
    pub established: Level,
    pub rep: RepLimit,
    pub reducedness: Option<Reducedness>,
    pub divisors: Vec<HyperplaneCounts>,
    pub masses: Vec<MassSeries>,
    pub notes: Vec<String>,
}

impl Verdict {
    /// Checks that the recorded evidence supports every level up to the
    /// claimed one.
    pub fn is_consistent(&self) -> bool {
        let gamma = self.rep.trend == RepTrend::Cauchy
            && self.rep.limit.is_some()
            && !self.divisors.is_empty()
            && self.divisors.iter().all(|h| h.skipped.is_some() || h.bounded);
        let weak = gamma && self.reducedness.as_ref().is_some_and(|r| r.reduced);
        let strong = weak
            && !self.masses.is_empty()
            && self
                .masses
                .iter()
                .all(|m| m.trend == MassTrend::Converging && m.matches_limit != Some(false));
        let divergent = self.rep.trend == RepTrend::NonCauchy || self.divisors.iter().any(|h| h.skipped.is_none() && !h.bounded);
        match self.established {
            Level::Strong => strong,
            Level::Weak => weak,
            Level::Gamma => gamma,
            Level::Divergent => divergent,
            Level::Inconclusive => true,
        }
    }
}

/// Decides the convergence level of a family.
///
/// 1. Rep limit; no candidate means divergent (or inconclusive when the
///    series neither settles nor blows up).
/// 2. Divisor counts over the hyperplane panel; unbounded counts mean
///    divergent.
/// 3. A limit with bounded counts is Γ-convergent.
/// 4. A reduced limit makes it weakly convergent.
/// 5. Converging masses of every order, matching the limit's, make it strong.
pub fn classify(fam: &MapFamily, cfg: &ClassifyConfig) -> Verdict {
    let mut notes = Vec::new();
    let rep = match rep_limit(fam, &cfg.rep) {
        Ok(r) => r,
        Err(e) => {
            return Verdict {
                family: fam.name.clone(),
                level: Level::Inconclusive,
                established: Level::Inconclusive,
                rep: RepLimit {
                    metric: vec![],
                    trend: RepTrend::Inconclusive,
                    decay: "none".into(),
                    tail_estimate: f64::INFINITY,
                    limit: None,
                    limit_source: None,
                    limit_distance: None,
                },
                reducedness: None,
                divisors: vec![],
                masses: vec![],
                notes: vec![format!("representations: {e}")],
            }
        }
    };
    let limit = rep.limit.clone();
    let ncoords = fam.rep(fam.ks[0]).map(|r| r.target_dim() + 1).unwrap_or(2);
    let slices = fam.slice_panel();
    let mut divisors = Vec::new();
    let mut count_failure = false;
    for h in hyperplane_panel(ncoords, cfg.random_hyperplanes, cfg.seed) {
        match divisor_count_bound(fam, &h, &slices, limit.as_ref()) {
            Ok(c) => divisors.push(c),
            Err(e) => {
                notes.push(format!("{}: {e}", h.label));
                count_failure = true;
            }
        }
    }
    let unbounded = divisors.iter().any(|h| h.skipped.is_none() && !h.bounded);
    let mut v = Verdict {
        family: fam.name.clone(),
        level: Level::Inconclusive,
        established: Level::Inconclusive,
        rep,
        reducedness: None,
        divisors,
        masses: vec![],
        notes,
    };
    let settle = |mut v: Verdict, level: Level, established: Level| {
        v.level = level;
        v.established = established;
        v
    };
    if v.rep.trend == RepTrend::NonCauchy || unbounded {
        return settle(v, Level::Divergent, Level::Divergent);
    }
    let Some(limit) = limit else {
        v.notes.push("no limit candidate".into());
        return settle(v, Level::Inconclusive, Level::Inconclusive);
    };
    if count_failure || v.divisors.iter().all(|h| h.skipped.is_some()) {
        v.notes.push("divisor counts unavailable".into());
        return settle(v, Level::Inconclusive, Level::Inconclusive);
    }
    let red = reducedness_on(limit.tuple(), &fam.domain);
    let reduced = red.reduced;
    v.reducedness = Some(red);
    if !reduced {
        return settle(v, Level::Gamma, Level::Gamma);
    }
    let ks = cfg
        .mass_ks
        .clone()
        .or_else(|| fam.mass_ks.clone())
        .unwrap_or_else(|| fam.ks[fam.ks.len().saturating_sub(3)..].to_vec());
    for order in (1..=fam.dim()).rev() {
        let s = mass_convergence(fam, &[order], &ks, Some(&limit), &cfg.mass).remove(0);
        let ok = s.trend == MassTrend::Converging && s.matches_limit != Some(false);
        let trend = s.trend;
        v.masses.push(s);
        if !ok {
            return if trend == MassTrend::Inconclusive {
                settle(v, Level::Inconclusive, Level::Weak)
            } else {
                settle(v, Level::Weak, Level::Weak)
            };
        }
    }
    settle(v, Level::Strong, Level::Strong)
}
