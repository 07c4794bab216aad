//! Decision procedures for generating pairs over an infinite ground set.
//!
//! The inputs are symbolic: a [`SidedProfile`] describes one partition viewed
//! from its claimed side — for side `L` the step functions are
//! `μ ↦ k*(α,μ)` and `μ ↦ d*(α,μ)`, for side `R` they are `μ ↦ k(β,μ)` and
//! `μ ↦ d(β,μ)`.  Profiles for countable grounds can be computed exactly from
//! concrete finitary partitions; profiles for uncountable grounds are
//! user-supplied hypotheses validated against the step-function invariants.
//!
//! `classify_mod_s` decides `⟨S_X, α, β⟩ = P_X` (three ground classes:
//! countable, uncountable regular, singular), `classify_mod_e` decides
//! `⟨E_X, α, β⟩ = P_X` (equivalently with the units adjoined), and the
//! membership predicates decide `α ∈ ⟨E_X⟩` and `α ∈ ⟨E_X ∪ S_X⟩` from the
//! singularity data of a single element.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cardinal::Cardinal;
use crate::infinite::FinitaryPartition;
use crate::partition::Partition;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifierError {
    #[error("step thresholds must start at 1 and increase strictly")]
    BadThresholds,
    #[error("step values must be non-increasing in the threshold")]
    NotAntitone,
    #[error("profile value {value} exceeds the ground cardinal {ground}")]
    ValueAboveGround { value: Cardinal, ground: Cardinal },
    #[error("d(1) = {d_at_one} does not equal the declared total {d_total}")]
    TotalMismatch { d_at_one: Cardinal, d_total: Cardinal },
    #[error("ground cardinals differ: {left} vs {right}")]
    GroundMismatch { left: Cardinal, right: Cardinal },
    #[error("finite ground {0}: the finite case is handled by exhaustive closure, not by the classifier")]
    FiniteGround(Cardinal),
    #[error("invalid profile JSON: {0}")]
    Json(String),
}

/// A finite step description of an antitone function `μ ↦ value`, constant
/// from each threshold up to (not including) the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFunction {
    steps: Vec<(Cardinal, Cardinal)>,
}

impl StepFunction {
    pub fn new(steps: Vec<(Cardinal, Cardinal)>) -> Result<Self, ClassifierError> {
        if steps.is_empty() || steps[0].0 != Cardinal::Finite(1) {
            return Err(ClassifierError::BadThresholds);
        }
        for pair in steps.windows(2) {
            if pair[0].0 >= pair[1].0 {
                return Err(ClassifierError::BadThresholds);
            }
            if pair[0].1 < pair[1].1 {
                return Err(ClassifierError::NotAntitone);
            }
        }
        Ok(StepFunction { steps })
    }

    pub fn constant(value: Cardinal) -> Self {
        StepFunction { steps: vec![(Cardinal::Finite(1), value)] }
    }

    /// Value at `μ ≥ 1`: the value attached to the largest threshold `≤ μ`.
    pub fn value_at(&self, mu: &Cardinal) -> Cardinal {
        debug_assert!(*mu >= Cardinal::Finite(1));
        let mut current = self.steps[0].1;
        for (threshold, value) in &self.steps {
            if threshold <= mu {
                current = *value;
            } else {
                break;
            }
        }
        current
    }

    pub fn steps(&self) -> &[(Cardinal, Cardinal)] {
        &self.steps
    }

    pub fn max_value(&self) -> Cardinal {
        self.steps[0].1
    }

    fn thresholds(&self) -> impl Iterator<Item = Cardinal> + '_ {
        self.steps.iter().map(|&(t, _)| t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
}

/// One partition's worth of classification data, viewed from `side`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SidedProfile {
    pub side: Side,
    pub ground: Cardinal,
    pub k_fn: StepFunction,
    pub d_fn: StepFunction,
    pub d_total: Cardinal,
    pub in_side: bool,
    pub s_value: Cardinal,
}

impl SidedProfile {
    /// Validates `k(1) ≤ ground`, `d(1) = d_total`, and all values `≤ ground`.
    pub fn validate(&self) -> Result<(), ClassifierError> {
        let one = Cardinal::Finite(1);
        for f in [&self.k_fn, &self.d_fn] {
            for (_, v) in f.steps() {
                if *v > self.ground {
                    return Err(ClassifierError::ValueAboveGround { value: *v, ground: self.ground });
                }
            }
        }
        let d1 = self.d_fn.value_at(&one);
        if d1 != self.d_total {
            return Err(ClassifierError::TotalMismatch { d_at_one: d1, d_total: self.d_total });
        }
        if self.s_value > self.ground {
            return Err(ClassifierError::ValueAboveGround { value: self.s_value, ground: self.ground });
        }
        Ok(())
    }

    /// The same parameter data read as describing the `*`-image on the
    /// opposite side (`k*(α*,μ) = k(α,μ)` and dually).
    pub fn dualize(&self) -> SidedProfile {
        let mut out = self.clone();
        out.side = match self.side { Side::L => Side::R, Side::R => Side::L };
        out
    }
}

/// Which clause settled the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    CountableI,
    CountableII,
    RegularI,
    RegularII,
    SingularI,
    SingularII,
    /// `s*(α) = s(β) = |X|` (idempotent-base criterion).
    ExSingularityFull,
    /// No assignment with one profile in `L_X` and the other in `R_X`.
    NecessitySide,
    /// `d*(α)` or `d(β)` falls short of `|X|`.
    NecessityDTotal,
    /// Sides and totals fine, but neither parameter clause holds.
    ClausesFailed,
    /// `s*(α)` or `s(β)` falls short of `|X|`.
    NecessitySingularity,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            Clause::CountableI => "countable-i",
            Clause::CountableII => "countable-ii",
            Clause::RegularI => "regular-i",
            Clause::RegularII => "regular-ii",
            Clause::SingularI => "singular-i",
            Clause::SingularII => "singular-ii",
            Clause::ExSingularityFull => "ex-generating",
            Clause::NecessitySide => "necessity-side",
            Clause::NecessityDTotal => "necessity-d-total",
            Clause::ClausesFailed => "clauses-failed",
            Clause::NecessitySingularity => "necessity-singularity",
        };
        f.write_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub generates: bool,
    pub clause: Clause,
    /// Whether the arguments were renamed to obtain the `(L, R)` assignment.
    pub swapped: bool,
}

/// Normalizes an argument pair to (L-profile, R-profile); both orders are
/// tried, `swapped` records which one fit.
fn assign<'a>(
    p: &'a SidedProfile,
    q: &'a SidedProfile,
) -> Result<Option<(&'a SidedProfile, &'a SidedProfile, bool)>, ClassifierError> {
    p.validate()?;
    q.validate()?;
    if p.ground != q.ground {
        return Err(ClassifierError::GroundMismatch { left: p.ground, right: q.ground });
    }
    if p.ground.is_finite() {
        return Err(ClassifierError::FiniteGround(p.ground));
    }
    match (p.side, q.side) {
        (Side::L, Side::R) => Ok(Some((p, q, false))),
        (Side::R, Side::L) => Ok(Some((q, p, true))),
        _ => Ok(None),
    }
}

/// Probe points for a `∀ μ < ground` quantifier: every breakpoint of either
/// step function below the ground, plus one probe past the last breakpoint.
/// Step functions are constant between breakpoints, so this is exact.
fn probes_below(ground: Cardinal, funcs: [&StepFunction; 2]) -> Vec<Cardinal> {
    let mut probes: Vec<Cardinal> = funcs
        .iter()
        .flat_map(|f| f.thresholds())
        .filter(|t| *t < ground)
        .collect();
    probes.sort_unstable();
    probes.dedup();
    if let Some(&last) = probes.last() {
        if let Ok(succ) = last.successor() {
            if succ < ground && !probes.contains(&succ) {
                probes.push(succ);
            }
        }
    }
    probes
}

/// Decides `⟨S_X, α, β⟩ = P_X` from the two profiles.
pub fn classify_mod_s(p: &SidedProfile, q: &SidedProfile) -> Result<Verdict, ClassifierError> {
    let Some((alpha, beta, swapped)) = assign(p, q)? else {
        return Ok(Verdict { generates: false, clause: Clause::NecessitySide, swapped: false });
    };
    if !alpha.in_side || !beta.in_side {
        return Ok(Verdict { generates: false, clause: Clause::NecessitySide, swapped });
    }
    let ground = alpha.ground;
    if alpha.d_total != ground || beta.d_total != ground {
        return Ok(Verdict { generates: false, clause: Clause::NecessityDTotal, swapped });
    }

    let two = Cardinal::Finite(2);
    let three = Cardinal::Finite(3);
    let at = |f: &StepFunction, mu: &Cardinal| f.value_at(mu);
    let sum_is_ground = |k: Cardinal, d: Cardinal| k.add(d) == ground;

    let (clause_ii, clause_i) = match ground {
        Cardinal::Aleph(0) => {
            // (i)  k*(α,2)+d*(α,2) = ℵ0 = k(β,2)+d(β,3)
            // (ii) k*(α,2)+d*(α,3) = ℵ0 = k(β,2)+d(β,2)
            let i = sum_is_ground(at(&alpha.k_fn, &two), at(&alpha.d_fn, &two))
                && sum_is_ground(at(&beta.k_fn, &two), at(&beta.d_fn, &three));
            let ii = sum_is_ground(at(&alpha.k_fn, &two), at(&alpha.d_fn, &three))
                && sum_is_ground(at(&beta.k_fn, &two), at(&beta.d_fn, &two));
            (
                ii.then_some(Clause::CountableII),
                i.then_some(Clause::CountableI),
            )
        }
        Cardinal::Aleph(_) => {
            // (i)  k*(α,2)+d*(α,2) = |X| = k(β,|X|)+d(β,|X|)
            // (ii) k*(α,|X|)+d*(α,|X|) = |X| = k(β,2)+d(β,2)
            let i = sum_is_ground(at(&alpha.k_fn, &two), at(&alpha.d_fn, &two))
                && sum_is_ground(at(&beta.k_fn, &ground), at(&beta.d_fn, &ground));
            let ii = sum_is_ground(at(&alpha.k_fn, &ground), at(&alpha.d_fn, &ground))
                && sum_is_ground(at(&beta.k_fn, &two), at(&beta.d_fn, &two));
            (ii.then_some(Clause::RegularII), i.then_some(Clause::RegularI))
        }
        Cardinal::AlephOmega => {
            // (i)  k*(α,2)+d*(α,2) = |X| = k(β,μ)+d(β,μ) for all μ < |X|
            // (ii) the dual
            let forall = |prof: &SidedProfile| {
                probes_below(ground, [&prof.k_fn, &prof.d_fn])
                    .iter()
                    .all(|mu| sum_is_ground(at(&prof.k_fn, mu), at(&prof.d_fn, mu)))
            };
            let i = sum_is_ground(at(&alpha.k_fn, &two), at(&alpha.d_fn, &two)) && forall(beta);
            let ii = forall(alpha) && sum_is_ground(at(&beta.k_fn, &two), at(&beta.d_fn, &two));
            (ii.then_some(Clause::SingularII), i.then_some(Clause::SingularI))
        }
        Cardinal::Finite(_) => unreachable!("finite grounds rejected in assign"),
    };

    if let Some(clause) = clause_ii.or(clause_i) {
        Ok(Verdict { generates: true, clause, swapped })
    } else {
        Ok(Verdict { generates: false, clause: Clause::ClausesFailed, swapped })
    }
}

/// Decides `⟨E_X, α, β⟩ = P_X` (equivalently `⟨E_X ∪ S_X, α, β⟩ = P_X`):
/// after the side assignment the criterion is `s*(α) = s(β) = |X|`.
pub fn classify_mod_e(p: &SidedProfile, q: &SidedProfile) -> Result<Verdict, ClassifierError> {
    let Some((alpha, beta, swapped)) = assign(p, q)? else {
        return Ok(Verdict { generates: false, clause: Clause::NecessitySide, swapped: false });
    };
    if !alpha.in_side || !beta.in_side {
        return Ok(Verdict { generates: false, clause: Clause::NecessitySide, swapped });
    }
    let ground = alpha.ground;
    if alpha.s_value == ground && beta.s_value == ground {
        Ok(Verdict { generates: true, clause: Clause::ExSingularityFull, swapped })
    } else {
        Ok(Verdict { generates: false, clause: Clause::NecessitySingularity, swapped })
    }
}

/// Singularity data of a single element, for the `⟨E_X⟩` / `⟨E_X ∪ S_X⟩`
/// membership predicates.  For elements of genuinely uncountable support the
/// values are supplied, not computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementTraits {
    pub s: Cardinal,
    pub s_star: Cardinal,
    pub sh: Cardinal,
    pub finitary: bool,
    pub unit: bool,
}

impl ElementTraits {
    pub fn of_finitary(p: &FinitaryPartition) -> ElementTraits {
        ElementTraits {
            s: Cardinal::Finite(p.singularity()),
            s_star: Cardinal::Finite(p.cosingularity()),
            sh: Cardinal::Finite(p.shift()),
            finitary: true,
            unit: p.is_unit(),
        }
    }
}

/// Membership in `⟨E_X⟩`: the identity, or finitary non-units, or elements
/// with `s = s* ≥ max(ℵ0, sh)`.
pub fn in_e_closure(t: &ElementTraits) -> bool {
    let is_identity = t.unit && t.sh == Cardinal::Finite(0);
    let finitary_nonunit = t.finitary && !t.unit;
    let balanced_infinite =
        t.s == t.s_star && t.s >= Cardinal::ALEPH0.max(t.sh);
    is_identity || finitary_nonunit || balanced_infinite
}

/// Membership in `⟨E_X ∪ S_X⟩`: exactly the elements with `s = s*`.
pub fn in_es_closure(t: &ElementTraits) -> bool {
    t.s == t.s_star
}

fn step_function_from_sizes(sizes: &[u64], infinite_count_at_one: bool) -> StepFunction {
    // f(μ) = #{sizes ≥ μ}, described by its breakpoints
    let count_ge = |mu: u64| -> Cardinal {
        let c = sizes.iter().filter(|&&s| s >= mu).count() as u64;
        if mu <= 1 && infinite_count_at_one {
            Cardinal::ALEPH0
        } else {
            Cardinal::Finite(c)
        }
    };
    let mut steps = vec![(Cardinal::Finite(1), count_ge(1))];
    let mut cuts: Vec<u64> = sizes.iter().map(|&s| s + 1).collect();
    cuts.sort_unstable();
    cuts.dedup();
    for cut in cuts {
        let v = count_ge(cut);
        if v != steps.last().unwrap().1 {
            steps.push((Cardinal::Finite(cut), v));
        }
    }
    StepFunction::new(steps).expect("antitone by construction")
}

fn side_sizes(p: &Partition, side: Side) -> (Vec<u64>, Vec<u64>) {
    match side {
        // k*(α,μ) counts transversal blocks by |B_i|, d*(α,μ) the lower blocks
        Side::L => (p.transversal_lower_sizes(), p.lower_nontransversal_sizes()),
        // k(β,μ) counts transversal blocks by |A_i|, d(β,μ) the upper blocks
        Side::R => (p.transversal_upper_sizes(), p.upper_nontransversal_sizes()),
    }
}

/// Exact profile of a finite partition; the ground is the finite degree, so
/// this is only useful for inspecting the step functions.
pub fn profile_of_finite(p: &Partition, side: Side) -> SidedProfile {
    let (transversal_sizes, nontransversal_sizes) = side_sizes(p, side);
    let in_side = match side {
        Side::L => p.in_l(),
        Side::R => p.in_r(),
    };
    let s_value = match side {
        Side::L => Cardinal::Finite(p.cosingularity()),
        Side::R => Cardinal::Finite(p.singularity()),
    };
    SidedProfile {
        side,
        ground: Cardinal::Finite(p.degree() as u64),
        k_fn: step_function_from_sizes(&transversal_sizes, false),
        d_fn: step_function_from_sizes(&nontransversal_sizes, false),
        d_total: Cardinal::Finite(nontransversal_sizes.len() as u64),
        in_side,
        s_value,
    }
}

/// Exact profile of a finitary partition on ℕ, ground `ℵ0`.  The cofinite
/// identity part contributes `ℵ0` to the transversal count at `μ = 1` and
/// nothing anywhere else.
pub fn profile_of_finitary(p: &FinitaryPartition, side: Side) -> SidedProfile {
    let core = p.core();
    let (transversal_sizes, nontransversal_sizes) = side_sizes(core, side);
    let in_side = match side {
        Side::L => p.in_l(),
        Side::R => p.in_r(),
    };
    let s_value = match side {
        Side::L => Cardinal::Finite(p.cosingularity()),
        Side::R => Cardinal::Finite(p.singularity()),
    };
    SidedProfile {
        side,
        ground: Cardinal::ALEPH0,
        k_fn: step_function_from_sizes(&transversal_sizes, true),
        d_fn: step_function_from_sizes(&nontransversal_sizes, false),
        d_total: Cardinal::Finite(nontransversal_sizes.len() as u64),
        in_side,
        s_value,
    }
}

// --- JSON interchange -------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct ProfileJson {
    side: Side,
    ground: Cardinal,
    k: Vec<(Cardinal, Cardinal)>,
    d: Vec<(Cardinal, Cardinal)>,
    d_total: Cardinal,
    in_side: bool,
    s: Cardinal,
}

impl SidedProfile {
    /// Parses the profile interchange form, e.g.
    /// `{"side":"L","ground":"aleph1","k":[["2","aleph1"]],"d":[["1","aleph1"]],"dTotal":"aleph1","inSide":true,"s":"aleph1"}`.
    ///
    /// A step list whose first threshold exceeds 1 is extended leftward with
    /// its first value (the function is constant before its first listed
    /// breakpoint).
    pub fn from_json(text: &str) -> Result<SidedProfile, ClassifierError> {
        let raw: ProfileJson =
            serde_json::from_str(text).map_err(|e| ClassifierError::Json(e.to_string()))?;
        let lift = |mut steps: Vec<(Cardinal, Cardinal)>| -> Result<StepFunction, ClassifierError> {
            if steps.is_empty() {
                return Err(ClassifierError::BadThresholds);
            }
            if steps[0].0 > Cardinal::Finite(1) {
                let v = steps[0].1;
                steps.insert(0, (Cardinal::Finite(1), v));
            }
            StepFunction::new(steps)
        };
        let profile = SidedProfile {
            side: raw.side,
            ground: raw.ground,
            k_fn: lift(raw.k)?,
            d_fn: lift(raw.d)?,
            d_total: raw.d_total,
            in_side: raw.in_side,
            s_value: raw.s,
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn to_json(&self) -> String {
        let raw = ProfileJson {
            side: self.side,
            ground: self.ground,
            k: self.k_fn.steps().to_vec(),
            d: self.d_fn.steps().to_vec(),
            d_total: self.d_total,
            in_side: self.in_side,
            s: self.s_value,
        };
        serde_json::to_string(&raw).expect("profile serialization")
    }
}

impl Verdict {
    pub fn to_json(&self) -> String {
        format!(
            "{{\"generates\":{},\"clause\":\"{}\",\"swapped\":{}}}",
            self.generates, self.clause, self.swapped
        )
    }
}
