//! Support functions of lifted bodies, integrality audits over weight boxes,
//! Gomory–Chvátal floor cuts, and finite TDI checks for θ and for the
//! diagonal LP embedding.

use std::fmt::Write as _;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulations::{build_lp_embedding, build_theta_variant, embed_subset, LiftMap, LpData, ThetaVariant};
use crate::graph::{Graph, SubsetMask, WeightVec};
use crate::io::fmt_g9;
use crate::oracles::clique_cover_number;
use crate::sdp::{solve, SdpProblem, SolveOptions};

pub use crate::integrality::INT_TOL;
/// Largest box enumerated in full; bigger boxes must be sampled.
pub const MAX_BOX_POINTS: usize = 6561;
/// Feasibility tolerance for 0/1 points of a body.
const POINT_TOL: f64 = 1e-9;

type Builder = dyn Fn(&WeightVec) -> Result<SdpProblem> + Send + Sync;

/// A compact convex body seen through the objectives `⟨L(w), X̂⟩` of a lifted
/// SDP, i.e. its projection `L*(Ĉ)` in `ℝᵏ`.
#[derive(Clone)]
pub struct BodyOracle {
    pub name: String,
    pub lift: LiftMap,
    /// Length of the weight vectors.
    pub k: usize,
    /// Whether the feasible region is known to be bounded.
    pub compact: bool,
    pub opts: SolveOptions,
    builder: Arc<Builder>,
}

impl std::fmt::Debug for BodyOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BodyOracle")
            .field("name", &self.name)
            .field("k", &self.k)
            .field("compact", &self.compact)
            .finish()
    }
}

impl BodyOracle {
    pub fn new<F>(name: impl Into<String>, lift: LiftMap, compact: bool, builder: F) -> Self
    where
        F: Fn(&WeightVec) -> Result<SdpProblem> + Send + Sync + 'static,
    {
        let k = lift.weight_len();
        BodyOracle {
            name: name.into(),
            lift,
            k,
            compact,
            opts: SolveOptions::default(),
            builder: Arc::new(builder),
        }
    }

    pub fn with_options(mut self, opts: SolveOptions) -> Self {
        self.opts = opts;
        self
    }

    /// `TH(G)`, `TH′(G)` or `TH⁺(G)` through `w ↦ Diag(0 ⊕ w)`.
    pub fn theta(g: &Graph, variant: ThetaVariant) -> Self {
        let gc = g.clone();
        let name = match variant {
            ThetaVariant::Theta => "TH",
            ThetaVariant::ThetaPrime => "TH'",
            ThetaVariant::ThetaPlus => "TH+",
        };
        BodyOracle::new(name, LiftMap::diag(g.n()), true, move |w| {
            build_theta_variant(&gc, w, variant)
        })
    }

    /// `{x ∈ [0,1]ⁿ : Ax ≤ b}` through its diagonal SDP embedding.
    pub fn lp_embedding(lp: &LpData) -> Self {
        let lpc = lp.clone();
        BodyOracle::new("LP", LiftMap::diag(lp.n), true, move |c| {
            build_lp_embedding(&lpc, c).map(|(p, _)| p)
        })
    }

    pub fn problem(&self, w: &WeightVec) -> Result<SdpProblem> {
        if w.len() != self.k {
            return Err(Error::dims(self.k, w.len()));
        }
        (self.builder)(w)
    }

    /// Whether the lifted embedding of `U` satisfies every row of the body.
    pub fn contains_subset(&self, u: SubsetMask) -> Result<bool> {
        let p = self.problem(&WeightVec::zeros(self.k))?;
        let x = embed_subset(self.lift.n, u);
        Ok(p.primal_residual(&x)? <= POINT_TOL)
    }
}

/// `δ*(C | w) = max ⟨L(w), X̂⟩` over the lifted body; `0` for `w = 0`.
pub fn support_value(body: &BodyOracle, w: &WeightVec) -> Result<f64> {
    if !body.compact {
        return Err(Error::InvalidInput(format!("{} is not known to be compact", body.name)));
    }
    let p = body.problem(w)?;
    if w.0.iter().all(|&x| x == 0) {
        return Ok(0.0);
    }
    Ok(solve(&p, &body.opts)?.value())
}

pub fn int_distance(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// An inclusive integer range applied to every coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightBox {
    pub lo: i64,
    pub hi: i64,
}

impl Default for WeightBox {
    fn default() -> Self {
        WeightBox { lo: 0, hi: 2 }
    }
}

impl std::str::FromStr for WeightBox {
    type Err = Error;

    /// Parses `LO..HI`.
    fn from_str(s: &str) -> Result<Self> {
        let (lo, hi) = s
            .split_once("..")
            .ok_or_else(|| Error::Parse(format!("box `{s}` is not LO..HI")))?;
        let num = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("box bound `{t}`: {e}")))
        };
        WeightBox::new(num(lo)?, num(hi)?)
    }
}

impl WeightBox {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInput(format!("empty box {lo}..{hi}")));
        }
        Ok(WeightBox { lo, hi })
    }

    /// Number of points of the box in dimension `k`, saturating.
    pub fn size(&self, k: usize) -> usize {
        let side = (self.hi - self.lo + 1) as usize;
        (0..k).fold(1usize, |acc, _| acc.saturating_mul(side))
    }

    /// Every point in lexicographic order (last coordinate fastest).
    pub fn points(&self, k: usize) -> Result<Vec<WeightVec>> {
        let total = self.size(k);
        if total > MAX_BOX_POINTS {
            return Err(Error::SizeLimit {
                what: "weight box points",
                got: total,
                limit: MAX_BOX_POINTS,
            });
        }
        let side = (self.hi - self.lo + 1) as usize;
        Ok((0..total)
            .map(|mut code| {
                let mut w = vec![0i64; k];
                for slot in w.iter_mut().rev() {
                    *slot = self.lo + (code % side) as i64;
                    code /= side;
                }
                WeightVec(w)
            })
            .collect())
    }

    /// `count` seeded uniform draws from the box.
    pub fn sample(&self, k: usize, count: usize, seed: u64) -> Vec<WeightVec> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| WeightVec((0..k).map(|_| rng.gen_range(self.lo..=self.hi)).collect()))
            .collect()
    }

    /// The full box when it is small enough, otherwise `samples` draws.
    pub fn points_or_sample(&self, k: usize, samples: usize, seed: u64) -> Vec<WeightVec> {
        self.points(k)
            .unwrap_or_else(|_| self.sample(k, samples, seed))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightRecord {
    pub w: Vec<i64>,
    pub value: f64,
    pub int_distance: f64,
    pub integral_argmax: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditVerdict {
    AllIntegral,
    CounterexampleFound(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub body: String,
    pub records: Vec<WeightRecord>,
    pub verdict: AuditVerdict,
    pub tol: f64,
}

impl AuditReport {
    /// One row per weight: `w,value,int_distance,integral_argmax`, with the
    /// weight's entries separated by spaces.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("w,value,int_distance,integral_argmax\n");
        for r in &self.records {
            let w: Vec<String> = r.w.iter().map(i64::to_string).collect();
            let _ = writeln!(
                out,
                "{},{},{},{}",
                w.join(" "),
                fmt_g9(r.value),
                fmt_g9(r.int_distance),
                r.integral_argmax
            );
        }
        out
    }
}

/// Checks `dist(δ*(C|w), ℤ) ≤ tol` for every weight; the verdict names the
/// first failing weight in the given order.
pub fn integrality_audit(body: &BodyOracle, weights: &[WeightVec], tol: f64) -> Result<AuditReport> {
    let records = weights
        .par_iter()
        .map(|w| {
            let value = support_value(body, w)?;
            Ok(WeightRecord {
                w: w.0.clone(),
                value,
                int_distance: int_distance(value),
                integral_argmax: argmax_with_value(body, w, value)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = records
        .iter()
        .find(|r| r.int_distance > tol)
        .map_or(AuditVerdict::AllIntegral, |r| {
            AuditVerdict::CounterexampleFound(r.w.clone())
        });
    Ok(AuditReport {
        body: body.name.clone(),
        records,
        verdict,
        tol,
    })
}

/// [`integrality_audit`] over a box (full, or `samples` seeded draws when the
/// box is too large).
pub fn integrality_audit_box(
    body: &BodyOracle,
    wbox: &WeightBox,
    samples: usize,
    seed: u64,
) -> Result<AuditReport> {
    let weights = wbox.points_or_sample(body.k, samples, seed);
    integrality_audit(body, &weights, INT_TOL)
}

fn argmax_with_value(body: &BodyOracle, w: &WeightVec, value: f64) -> Result<bool> {
    let n = body.lift.n;
    if n > 20 {
        return Err(Error::SizeLimit {
            what: "0/1 enumeration dimension",
            got: n,
            limit: 20,
        });
    }
    let p = body.problem(&WeightVec::zeros(body.k))?;
    for mask in 0u32..1 << n {
        let u = SubsetMask(mask);
        if w.dot_mask(u) as f64 >= value - INT_TOL
            && p.primal_residual(&embed_subset(n, u))? <= POINT_TOL
        {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether some feasible 0/1 point `χ_U` attains `δ*(C|w)` within
/// [`INT_TOL`].
pub fn integral_argmax_exists(body: &BodyOracle, w: &WeightVec) -> Result<bool> {
    let value = support_value(body, w)?;
    argmax_with_value(body, w, value)
}

/// The Gomory–Chvátal inequality `wᵀx ≤ ⌊δ*(C|w)⌋`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GcCut {
    pub w: Vec<i64>,
    pub rhs: i64,
    pub support_value: f64,
    /// False when the support value is already integral, so the cut only
    /// restates a valid inequality.
    pub cutting: bool,
}

impl GcCut {
    pub fn satisfied_by(&self, x: &[f64]) -> bool {
        let lhs: f64 = self.w.iter().zip(x).map(|(&a, b)| a as f64 * b).sum();
        lhs <= self.rhs as f64 + INT_TOL
    }
}

/// Values within [`INT_TOL`] of an integer are rounded before flooring, so
/// solver noise below an integral support value does not cut.
pub fn gc_floor_cut(body: &BodyOracle, w: &WeightVec) -> Result<GcCut> {
    let value = support_value(body, w)?;
    let rhs = if int_distance(value) <= INT_TOL {
        value.round()
    } else {
        value.floor()
    };
    Ok(GcCut {
        w: w.0.clone(),
        rhs: rhs as i64,
        support_value: value,
        cutting: (rhs as f64) < value - INT_TOL,
    })
}

/// Membership of `x` in the intersection of the given cuts.
pub fn gc_membership(cuts: &[GcCut], x: &[f64]) -> bool {
    cuts.iter().all(|c| c.satisfied_by(x))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TdiVerdict {
    TdiOnBox,
    Counterexample {
        w: Vec<i64>,
        /// Best integral dual value (`χ̄` for θ, the LP value for the
        /// embedding when no integral dual exists).
        integral_dual: Option<i64>,
        sdp_value: f64,
    },
}

impl TdiVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, TdiVerdict::TdiOnBox)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TdiThetaReport {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub verdict: TdiVerdict,
    pub perfect: bool,
    /// Whether the verdict matches perfection.
    pub agreement: bool,
    /// Weights examined before the verdict was reached.
    pub tested: usize,
}

/// θ is TDI through `Diag(0 ⊕ ·)` on the tested weights iff for each `w` an
/// integral dual optimum exists. Integral duals are exactly clique covers with
/// `η = 1ᵀm`, so this means `χ̄(G,w) ≤ θ(G,w) + tol`. Stops at the first
/// failing weight in the given order.
pub fn tdi_check_theta_weights(
    g: &Graph,
    weights: &[WeightVec],
    tol: f64,
    opts: &SolveOptions,
) -> Result<TdiThetaReport> {
    if g.n() > 7 {
        return Err(Error::SizeLimit {
            what: "TDI check vertex count",
            got: g.n(),
            limit: 7,
        });
    }
    let body = BodyOracle::theta(g, ThetaVariant::Theta).with_options(opts.clone());
    let first_fail = weights
        .par_iter()
        .enumerate()
        .map(|(idx, w)| -> Result<Option<(usize, TdiVerdict)>> {
            let chi_bar = clique_cover_number(g, w)?.value;
            let theta = support_value(&body, w)?;
            Ok((chi_bar as f64 > theta + tol).then(|| {
                (
                    idx,
                    TdiVerdict::Counterexample {
                        w: w.0.clone(),
                        integral_dual: Some(chi_bar),
                        sdp_value: theta,
                    },
                )
            }))
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .transpose()?
        .flatten();
    let perfect = g.is_perfect()?;
    let (verdict, tested) = match first_fail {
        Some((idx, v)) => (v, idx + 1),
        None => (TdiVerdict::TdiOnBox, weights.len()),
    };
    Ok(TdiThetaReport {
        n: g.n(),
        edges: g.edges().to_vec(),
        agreement: verdict.passed() == perfect,
        verdict,
        perfect,
        tested,
    })
}

/// [`tdi_check_theta_weights`] over the full box with default tolerances.
pub fn tdi_check_theta(g: &Graph, wbox: &WeightBox) -> Result<TdiThetaReport> {
    tdi_check_theta_weights(g, &wbox.points(g.n())?, INT_TOL, &SolveOptions::default())
}

/// Range of the seeded draws appended to an audit box.
pub const EXTRA_SAMPLE_BOX: WeightBox = WeightBox { lo: 0, hi: 5 };
pub const DEFAULT_EXTRA_SAMPLES: usize = 50;

/// The full box followed by `extra` seeded draws from [`EXTRA_SAMPLE_BOX`].
pub fn audit_weights(k: usize, wbox: &WeightBox, extra: usize, seed: u64) -> Result<Vec<WeightVec>> {
    let mut weights = wbox.points(k)?;
    weights.extend(EXTRA_SAMPLE_BOX.sample(k, extra, seed));
    Ok(weights)
}

/// One objective of the LP-embedding check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpDualRecord {
    pub c: Vec<i64>,
    pub lp_value: f64,
    /// An integral `(y, u) ≥ 0` with `Aᵀy + u ≥ c` and `bᵀy + 1ᵀu` equal to
    /// the LP value, if one exists.
    pub dual: Option<(Vec<i64>, Vec<i64>)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpTdiReport {
    pub records: Vec<LpDualRecord>,
    pub verdict: TdiVerdict,
}

pub const MAX_LP_DIM: usize = 6;

/// For each `c` in the box, solves `max{cᵀx : Ax ≤ b, 0 ≤ x ≤ 1}` through the
/// diagonal SDP embedding and enumerates integral `y ≥ 0` with
/// `u = (c − Aᵀy)⁺`, looking for `bᵀy + 1ᵀu` equal to the LP value.
pub fn tdi_check_lp_embedding(lp: &LpData, wbox: &WeightBox) -> Result<LpTdiReport> {
    if lp.n > MAX_LP_DIM || lp.rows() > MAX_LP_DIM {
        return Err(Error::SizeLimit {
            what: "LP dimension",
            got: lp.n.max(lp.rows()),
            limit: MAX_LP_DIM,
        });
    }
    if lp.b.iter().any(|&b| b < 0) {
        // x = 0 must be feasible, otherwise the LP may be empty
        return Err(Error::InvalidInput("right-hand sides must be nonnegative".into()));
    }
    let body = BodyOracle::lp_embedding(lp);
    let records = wbox
        .points(lp.n)?
        .par_iter()
        .map(|c| {
            let lp_value = support_value(&body, c)?;
            let dual = if int_distance(lp_value) <= INT_TOL {
                integral_lp_dual(lp, &c.0, lp_value.round() as i64)
            } else {
                None
            };
            Ok(LpDualRecord {
                c: c.0.clone(),
                lp_value,
                dual,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = records
        .iter()
        .find(|r| r.dual.is_none())
        .map_or(TdiVerdict::TdiOnBox, |r| TdiVerdict::Counterexample {
            w: r.c.clone(),
            integral_dual: None,
            sdp_value: r.lp_value,
        });
    Ok(LpTdiReport { records, verdict })
}

/// Smallest-lexicographic integral dual of value `target`. Each `y_i` is
/// bounded by `target / b_i` when `b_i > 0` and by `max c` otherwise (a larger
/// `y_i` on a zero row never lowers `u`).
fn integral_lp_dual(lp: &LpData, c: &[i64], target: i64) -> Option<(Vec<i64>, Vec<i64>)> {
    let cmax = c.iter().copied().max().unwrap_or(0).max(0);
    let caps: Vec<i64> = lp
        .b
        .iter()
        .map(|&b| if b > 0 { target.max(0) / b } else { cmax })
        .collect();
    let m = lp.rows();
    let mut y = vec![0i64; m];
    loop {
        let by: i64 = lp.b.iter().zip(&y).map(|(b, v)| b * v).sum();
        if by <= target {
            let aty = lp.at_y(&y);
            let u: Vec<i64> = c.iter().zip(&aty).map(|(ci, a)| (ci - a).max(0)).collect();
            if by + u.iter().sum::<i64>() == target {
                return Some((y, u));
            }
        }
        // odometer, last coordinate fastest
        let mut pos = m;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            y[pos] += 1;
            if y[pos] <= caps[pos] {
                break;
            }
            y[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_values() {
        let k2 = BodyOracle::theta(&Graph::complete(2), ThetaVariant::Theta);
        assert!((support_value(&k2, &WeightVec::ones(2)).unwrap() - 1.0).abs() < 1e-7);
        let c5 = BodyOracle::theta(&Graph::cycle(5), ThetaVariant::Theta);
        let v = support_value(&c5, &WeightVec::ones(5)).unwrap();
        assert!((v - 5f64.sqrt()).abs() < 1e-7);
        assert_eq!(support_value(&c5, &WeightVec::zeros(5)).unwrap(), 0.0);
        let v2 = support_value(&c5, &WeightVec(vec![2; 5])).unwrap();
        assert!((v2 - 2.0 * v).abs() < 1e-6);
    }

    #[test]
    fn box_enumeration() {
        let b: WeightBox = "0..2".parse().unwrap();
        let pts = b.points(2).unwrap();
        assert_eq!(pts.len(), 9);
        assert_eq!(pts[1].0, vec![0, 1]);
        assert_eq!(pts[8].0, vec![2, 2]);
        assert!("3..1".parse::<WeightBox>().is_err());
        assert!("x".parse::<WeightBox>().is_err());
        assert!(b.points(9).is_err());
        assert_eq!(b.points_or_sample(9, 5, 0).len(), 5);
        assert_eq!(b.sample(4, 3, 7), b.sample(4, 3, 7));
    }

    #[test]
    fn audits() {
        let c4 = BodyOracle::theta(&Graph::cycle(4), ThetaVariant::Theta);
        let r = integrality_audit_box(&c4, &WeightBox::default(), 0, 0).unwrap();
        assert_eq!(r.verdict, AuditVerdict::AllIntegral);
        assert_eq!(r.records.len(), 81);
        assert!(r.records.iter().all(|x| x.integral_argmax));
        assert_eq!(r.to_csv().lines().count(), 82);

        let c5 = BodyOracle::theta(&Graph::cycle(5), ThetaVariant::Theta);
        let r = integrality_audit(&c5, &[WeightVec::ones(5)], INT_TOL).unwrap();
        assert_eq!(r.verdict, AuditVerdict::CounterexampleFound(vec![1; 5]));
        assert!(!r.records[0].integral_argmax);

        let k1 = BodyOracle::theta(&Graph::empty(1), ThetaVariant::Theta);
        let r = integrality_audit_box(&k1, &WeightBox::new(-2, 3).unwrap(), 0, 0).unwrap();
        assert_eq!(r.verdict, AuditVerdict::AllIntegral);
    }

    #[test]
    fn argmax_and_cuts() {
        let c4 = BodyOracle::theta(&Graph::cycle(4), ThetaVariant::Theta);
        let c5 = BodyOracle::theta(&Graph::cycle(5), ThetaVariant::Theta);
        assert!(integral_argmax_exists(&c4, &WeightVec::ones(4)).unwrap());
        assert!(!integral_argmax_exists(&c5, &WeightVec::ones(5)).unwrap());
        assert!(integral_argmax_exists(&c5, &WeightVec::zeros(5)).unwrap());

        let cut = gc_floor_cut(&c5, &WeightVec::ones(5)).unwrap();
        assert_eq!(cut.rhs, 2);
        assert!(cut.cutting);
        assert!(!cut.satisfied_by(&[0.5; 5]));
        let cut4 = gc_floor_cut(&c4, &WeightVec::ones(4)).unwrap();
        assert_eq!(cut4.rhs, 2);
        assert!(!cut4.cutting);
        let zero = gc_floor_cut(&c5, &WeightVec::zeros(5)).unwrap();
        assert_eq!((zero.rhs, zero.cutting), (0, false));
        assert!(gc_membership(&[cut4, zero], &[0.5; 4]));
    }

    #[test]
    fn theta_tdi_small() {
        let r = tdi_check_theta(&Graph::cycle(4), &WeightBox::default()).unwrap();
        assert!(r.verdict.passed() && r.perfect && r.agreement);
        let r = tdi_check_theta(&Graph::cycle(5), &WeightBox::default()).unwrap();
        assert!(!r.perfect && r.agreement);
        match r.verdict {
            TdiVerdict::Counterexample { w, integral_dual, .. } => {
                assert_eq!(w, vec![1; 5]);
                assert_eq!(integral_dual, Some(3));
            }
            TdiVerdict::TdiOnBox => panic!("C5 is not TDI on the box"),
        }
        assert!(tdi_check_theta(&Graph::complete(3), &WeightBox::default()).unwrap().verdict.passed());
        let ws = audit_weights(3, &WeightBox::default(), 4, 1).unwrap();
        assert_eq!(ws.len(), 31);
        assert!(ws[27..].iter().all(|w| w.0.iter().all(|&x| (0..=5).contains(&x))));
    }

    #[test]
    fn lp_embedding_tdi() {
        let edge = LpData::new(2, vec![vec![1, 1]], vec![1]).unwrap();
        let r = tdi_check_lp_embedding(&edge, &WeightBox::new(0, 1).unwrap()).unwrap();
        assert!(r.verdict.passed());
        let ones = r.records.iter().find(|x| x.c == vec![1, 1]).unwrap();
        assert_eq!(ones.dual, Some((vec![1], vec![0, 0])));

        let c3 = LpData::new(3, vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]], vec![1, 1, 1]).unwrap();
        let r = tdi_check_lp_embedding(&c3, &WeightBox::new(0, 1).unwrap()).unwrap();
        match r.verdict {
            TdiVerdict::Counterexample { w, sdp_value, .. } => {
                assert_eq!(w, vec![1, 1, 1]);
                assert!((sdp_value - 1.5).abs() < 1e-6);
            }
            TdiVerdict::TdiOnBox => panic!("the triangle system is not TDI"),
        }

        let free = LpData::new(2, vec![], vec![]).unwrap();
        let r = tdi_check_lp_embedding(&free, &WeightBox::new(0, 1).unwrap()).unwrap();
        assert!(r.verdict.passed());
        assert!(r.records.iter().all(|x| x.dual.as_ref().unwrap().1 == x.c));
    }
}
