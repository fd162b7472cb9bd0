//! The staged construction.
//!
//! From a base affine function f_0 through the point (x_P, y_P), each stage
//! adds a scaled correction M·α·h where h vanishes at every already-pinned
//! point. Odd stage n = 2k+1 steers the value f(w_k) onto a chosen rational
//! d in the dense class of w_k; even stage n = 2k+2 steers the preimage
//! f^{-1}(w_k) onto such a d (making f(d) = w_k exact by solving for M).
//! When the constraint already holds, the stage reuses f unchanged.
//!
//! The correction h is a product of linear factors: (z - x_P)^β, (z - w_a)
//! for forward-pinned points, and (z - u_b) for the registered exact
//! preimages u_b. All of these are rationals, so every stage stays in ℚ[z];
//! β ∈ {1, 2} makes deg h odd so the derivative of h is bounded below.

use crate::algebra::{pow2, rat_from_pair, Poly, PolyQ, PolyZ, Rat, RatInterval};
use crate::error::{Error, Result};
use crate::growth::{select_alpha, AlphaCertificate, GrowthFn};
use crate::partition::{ColorIndex, DensePartition};
use crate::records::rat_string;
use crate::roots::MonotoneSolver;
use num::{BigInt, One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

/// Validated inputs for one construction.
#[derive(Clone)]
pub struct ConstructionConfig {
    pub x_p: Rat,
    pub y_p: Rat,
    pub w: Vec<Rat>,
    pub partition: Arc<dyn DensePartition>,
    pub growth: GrowthFn,
    pub stages: usize,
    pub radius: Rat,
}

impl ConstructionConfig {
    pub fn new(
        x_p: Rat,
        y_p: Rat,
        w: Vec<Rat>,
        partition: Arc<dyn DensePartition>,
        growth: GrowthFn,
        stages: usize,
        radius: Rat,
    ) -> Result<ConstructionConfig> {
        // canonicalize all inputs (configs may arrive unreduced)
        let x_p = rat_from_pair(x_p.numer().clone(), x_p.denom().clone());
        let y_p = rat_from_pair(y_p.numer().clone(), y_p.denom().clone());
        let w: Vec<Rat> = w
            .into_iter()
            .map(|q| rat_from_pair(q.numer().clone(), q.denom().clone()))
            .collect();
        for i in 0..w.len() {
            for j in (i + 1)..w.len() {
                if w[i] == w[j] {
                    return Err(Error::Config(format!(
                        "w entries must be pairwise distinct (w[{i}] = w[{j}] = {})",
                        w[i]
                    )));
                }
            }
        }
        if stages > 2 * w.len() {
            return Err(Error::Config(format!(
                "stages = {stages} exceeds 2·|w| = {}",
                2 * w.len()
            )));
        }
        if !radius.is_positive() {
            return Err(Error::Config("radius must be positive".into()));
        }
        Ok(ConstructionConfig {
            x_p,
            y_p,
            w,
            partition,
            growth,
            stages,
            radius,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    #[serde(rename = "odd")]
    Odd,
    #[serde(rename = "even")]
    Even,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseTag {
    A,
    B,
}

/// A registry entry: index into w plus the recorded exact rational.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IndexedValue {
    pub index: usize,
    #[serde(with = "rat_string")]
    pub value: Rat,
}

/// Recorded enclosure endpoints (even-stage separation certificates).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecordedEnclosure {
    #[serde(with = "rat_string")]
    pub lo: Rat,
    #[serde(with = "rat_string")]
    pub hi: Rat,
}

impl RecordedEnclosure {
    fn from_interval(iv: &RatInterval) -> Self {
        RecordedEnclosure {
            lo: iv.lo().clone(),
            hi: iv.hi().clone(),
        }
    }
}

/// Complete trace of one stage.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StageRecord {
    pub n: usize,
    pub k: usize,
    pub parity: Parity,
    pub case: CaseTag,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub beta: Option<u8>,
    #[serde(with = "crate::records::opt_poly_strings", skip_serializing_if = "Option::is_none", default)]
    pub h: Option<Poly>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alpha_cert: Option<AlphaCertificate>,
    /// The interpolation weight M_n in (0, 1) (perturbing stages only).
    #[serde(with = "crate::records::opt_rat_string", skip_serializing_if = "Option::is_none", default)]
    pub m_weight: Option<Rat>,
    /// The chosen dense-class target d (perturbing stages only).
    #[serde(with = "crate::records::opt_rat_string", skip_serializing_if = "Option::is_none", default)]
    pub d: Option<Rat>,
    /// f_n, fully reduced.
    #[serde(with = "crate::records::poly_strings")]
    pub f: Poly,
    /// Indices of forward-pinned constraints after this stage.
    pub a_set: Vec<usize>,
    /// Indices of backward-pinned constraints after this stage.
    pub b_set: Vec<usize>,
    /// Odd stages: the recorded value f_n(w_k).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub forward_delta: Option<IndexedValue>,
    /// Even stages: the recorded exact preimage f_n^{-1}(w_k).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub preimage_delta: Option<IndexedValue>,
    /// Reuse-case witness: the index j with w_k = f^{-1}(w_j) (odd) or
    /// w_k = f(w_j) (even); None when the witness is the base point itself.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub case_b_witness: Option<usize>,
    /// Even perturbing stages: disjoint enclosures of the two endpoint
    /// preimages the target was picked between.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub separation: Option<[RecordedEnclosure; 2]>,
}

/// Running construction state.
pub struct Construction {
    pub config: ConstructionConfig,
    f: PolyQ,
    next_stage: usize,
    records: Vec<StageRecord>,
    forward: BTreeMap<usize, Rat>,
    preimage: BTreeMap<usize, Rat>,
    a_set: Vec<usize>,
    b_set: Vec<usize>,
}

/// f_0(z) = (3/2)(z - x_P) + y_P.
pub fn base_function(x_p: &Rat, y_p: &Rat) -> Poly {
    let slope = rat_from_pair(BigInt::from(3), BigInt::from(2));
    Poly::from_coeffs(vec![y_p - &slope * x_p, slope])
}

impl Construction {
    pub fn init(config: ConstructionConfig) -> Construction {
        let f0 = base_function(&config.x_p, &config.y_p);
        Construction {
            config,
            f: PolyQ::from_poly(&f0),
            next_stage: 1,
            records: Vec::new(),
            forward: BTreeMap::new(),
            preimage: BTreeMap::new(),
            a_set: Vec::new(),
            b_set: Vec::new(),
        }
    }

    pub fn current(&self) -> &PolyQ {
        &self.f
    }

    pub fn records(&self) -> &[StageRecord] {
        &self.records
    }

    /// Run one stage; `n` alternates odd (forward) / even (backward).
    pub fn step(&mut self) -> Result<&StageRecord> {
        let n = self.next_stage;
        let record = if n % 2 == 1 {
            self.odd_step(n, (n - 1) / 2)?
        } else {
            self.even_step(n, (n - 2) / 2)?
        };
        self.next_stage += 1;
        self.records.push(record);
        Ok(self.records.last().unwrap())
    }

    fn color_of(&self, q: &Rat) -> ColorIndex {
        self.config.partition.color(q)
    }

    /// Correction polynomial for stage n: (z-x_P)^β · Π_{a∈A}(z-w_a) ·
    /// Π_{b∈B}(z-u_b) with β ∈ {1,2} making the degree odd.
    fn build_correction(&self) -> (PolyZ, BigInt, Poly, u8) {
        let mut roots: Vec<Rat> = Vec::with_capacity(2 + self.a_set.len() + self.b_set.len());
        let base_count = 1 + self.a_set.len() + self.b_set.len();
        let beta: u8 = if base_count % 2 == 1 { 1 } else { 2 };
        for _ in 0..beta {
            roots.push(self.config.x_p.clone());
        }
        for &a in &self.a_set {
            roots.push(self.config.w[a].clone());
        }
        for &b in &self.b_set {
            roots.push(self.preimage[&b].clone());
        }
        let mut num = PolyZ::one();
        let mut den = BigInt::one();
        for r in &roots {
            num.mul_linear(r.numer(), r.denom());
            den *= r.denom();
        }
        let h_poly = Poly::from_coeffs(
            num.coeffs
                .iter()
                .map(|c| rat_from_pair(c.clone(), den.clone()))
                .collect(),
        );
        (num, den, h_poly, beta)
    }

    /// Exact h(x) from the linear factors (cheaper than coefficient Horner
    /// and keeps the arithmetic small).
    fn eval_correction(&self, beta: u8, x: &Rat) -> Rat {
        let mut acc = Rat::one();
        for _ in 0..beta {
            acc *= x - &self.config.x_p;
        }
        for &a in &self.a_set {
            acc *= x - &self.config.w[a];
        }
        for &b in &self.b_set {
            acc *= x - &self.preimage[&b];
        }
        acc
    }

    fn odd_step(&mut self, n: usize, k: usize) -> Result<StageRecord> {
        let wk = self.config.w[k].clone();
        // reuse case: w_k already pinned through x_P or a registered preimage
        let mut witness: Option<Option<usize>> = None;
        if wk == self.config.x_p {
            witness = Some(None);
        } else {
            let hits: Vec<usize> = self
                .b_set
                .iter()
                .copied()
                .filter(|b| self.preimage[b] == wk)
                .collect();
            if hits.len() > 1 {
                return Err(Error::Construction {
                    stage: n,
                    msg: "registered preimages are not distinct".into(),
                });
            }
            if let Some(&j) = hits.first() {
                witness = Some(Some(j));
            }
        }
        if let Some(w_case) = witness {
            let value = match w_case {
                None => self.config.y_p.clone(),
                Some(j) => self.config.w[j].clone(),
            };
            if wk != self.config.x_p {
                debug_assert_eq!(self.color_of(&value), self.color_of(&wk));
            }
            self.forward.insert(k, value.clone());
            self.a_set.push(k);
            return Ok(StageRecord {
                n,
                k,
                parity: Parity::Odd,
                case: CaseTag::B,
                beta: None,
                h: None,
                alpha_cert: None,
                m_weight: None,
                d: None,
                f: self.reduced_f(),
                a_set: self.a_set.clone(),
                b_set: self.b_set.clone(),
                forward_delta: Some(IndexedValue {
                    index: k,
                    value,
                }),
                preimage_delta: None,
                case_b_witness: w_case,
                separation: None,
            });
        }

        let (h_num, h_den, h_poly, beta) = self.build_correction();
        let cert = select_alpha(&h_poly, n, &self.config.growth).map_err(|e| {
            Error::Construction {
                stage: n,
                msg: format!("scaling certificate failed: {e}"),
            }
        })?;
        let (y0_num, y0_den) = self.f.eval_parts(&wk);
        let g_wk = &cert.alpha * self.eval_correction(beta, &wk);
        if g_wk.is_zero() {
            return Err(Error::Construction {
                stage: n,
                msg: "correction vanishes at w_k: case misclassified".into(),
            });
        }
        // open interval between f(w_k) and f(w_k) + g(w_k), unreduced ends
        let y0 = Rat::new_raw(y0_num.clone(), y0_den.clone());
        let y1 = Rat::new_raw(
            &y0_num * g_wk.denom() + g_wk.numer() * &y0_den,
            &y0_den * g_wk.denom(),
        );
        let interval = if g_wk.is_positive() {
            RatInterval::new(y0.clone(), y1)
        } else {
            RatInterval::new(y1, y0.clone())
        };
        let d = self.config.partition.pick(self.color_of(&wk), &interval);
        // M = (d - y0) / g(w_k), exact and in (0,1) since d is strictly
        // between the interval ends
        let m_weight = rat_from_pair(
            (d.numer() * &y0_den - &y0_num * d.denom()) * g_wk.denom(),
            (d.denom() * &y0_den) * g_wk.numer(),
        );
        if !(m_weight.is_positive() && m_weight < Rat::one()) {
            return Err(Error::Construction {
                stage: n,
                msg: format!("interpolation weight out of range: {m_weight}"),
            });
        }
        self.apply_correction(&m_weight, &cert.alpha, &h_num, &h_den);
        if self.f.eval_cmp(&wk, &d) != std::cmp::Ordering::Equal {
            return Err(Error::Construction {
                stage: n,
                msg: "forward target not hit exactly".into(),
            });
        }
        self.forward.insert(k, d.clone());
        self.a_set.push(k);
        Ok(StageRecord {
            n,
            k,
            parity: Parity::Odd,
            case: CaseTag::A,
            beta: Some(beta),
            h: Some(h_poly),
            alpha_cert: Some(cert),
            m_weight: Some(m_weight),
            d: Some(d.clone()),
            f: self.reduced_f(),
            a_set: self.a_set.clone(),
            b_set: self.b_set.clone(),
            forward_delta: Some(IndexedValue { index: k, value: d }),
            preimage_delta: None,
            case_b_witness: None,
            separation: None,
        })
    }

    fn even_step(&mut self, n: usize, k: usize) -> Result<StageRecord> {
        let wk = self.config.w[k].clone();
        // reuse case: w_k ∈ {y_P} ∪ f(A) (b_set values are distinct from w_k
        // since the enumeration is injective)
        let mut witness: Option<Option<usize>> = None;
        if wk == self.config.y_p {
            witness = Some(None);
        } else {
            let hits: Vec<usize> = self
                .a_set
                .iter()
                .copied()
                .filter(|a| self.forward[a] == wk)
                .collect();
            if hits.len() > 1 {
                return Err(Error::Construction {
                    stage: n,
                    msg: "forward values are not distinct".into(),
                });
            }
            if let Some(&j) = hits.first() {
                witness = Some(Some(j));
            }
        }
        if let Some(w_case) = witness {
            let value = match w_case {
                None => self.config.x_p.clone(),
                Some(j) => self.config.w[j].clone(),
            };
            if wk != self.config.y_p {
                debug_assert_eq!(self.color_of(&value), self.color_of(&wk));
            }
            self.preimage.insert(k, value.clone());
            self.b_set.push(k);
            return Ok(StageRecord {
                n,
                k,
                parity: Parity::Even,
                case: CaseTag::B,
                beta: None,
                h: None,
                alpha_cert: None,
                m_weight: None,
                d: None,
                f: self.reduced_f(),
                a_set: self.a_set.clone(),
                b_set: self.b_set.clone(),
                forward_delta: None,
                preimage_delta: Some(IndexedValue {
                    index: k,
                    value,
                }),
                case_b_witness: w_case,
                separation: None,
            });
        }

        let (h_num, h_den, h_poly, beta) = self.build_correction();
        let cert = select_alpha(&h_poly, n, &self.config.growth).map_err(|e| {
            Error::Construction {
                stage: n,
                msg: format!("scaling certificate failed: {e}"),
            }
        })?;
        // derivative floors from the certified induction: f' >= 1/2 + 2^(1-n)
        // and (f + α h)' >= that - 2^-n > 0
        let floor_prev = pow2(-1) + pow2(-(n as i64 - 1));
        let floor_pert = &floor_prev - pow2(-(n as i64));
        let f_pert = self.f.add_scaled(
            cert.alpha.numer(),
            cert.alpha.denom(),
            &h_num,
            &h_den,
        );
        let mut solver0 =
            MonotoneSolver::new(&self.f, wk.clone(), &floor_prev).map_err(|e| Error::Construction {
                stage: n,
                msg: format!("preimage bracketing failed: {e}"),
            })?;
        let mut solver1 =
            MonotoneSolver::new(&f_pert, wk.clone(), &floor_pert).map_err(|e| {
                Error::Construction {
                    stage: n,
                    msg: format!("perturbed preimage bracketing failed: {e}"),
                }
            })?;
        // refine until the two enclosures separate with an open gap between
        let mut eps = pow2(-8);
        let alpha_scale = cert.alpha.denom().magnitude().bits() as i64;
        let gap_budget = 512 + 4 * alpha_scale + h_den.magnitude().bits() as i64;
        let mut rounds: i64 = 0;
        let gap = loop {
            solver0.refine_to(&eps);
            solver1.refine_to(&eps);
            let e0 = solver0.enclosure();
            let e1 = solver1.enclosure();
            if e0.interval.strictly_below(&e1.interval) {
                break RatInterval::new(e0.interval.hi().clone(), e1.interval.lo().clone());
            }
            if e1.interval.strictly_below(&e0.interval) {
                break RatInterval::new(e1.interval.hi().clone(), e0.interval.lo().clone());
            }
            eps = eps / Rat::from_integer(BigInt::from(2));
            rounds += 1;
            if rounds > gap_budget {
                return Err(Error::Construction {
                    stage: n,
                    msg: "endpoint preimages failed to separate".into(),
                });
            }
        };
        let enc0 = solver0.enclosure();
        let enc1 = solver1.enclosure();
        let d = self.config.partition.pick(self.color_of(&wk), &gap);
        // M = (w_k - f(d)) / g(d)
        let (fd_num, fd_den) = self.f.eval_parts(&d);
        let g_d = &cert.alpha * self.eval_correction(beta, &d);
        debug_assert!(!g_d.is_zero());
        let m_weight = rat_from_pair(
            (wk.numer() * &fd_den - &fd_num * wk.denom()) * g_d.denom(),
            (wk.denom() * &fd_den) * g_d.numer(),
        );
        if !(m_weight.is_positive() && m_weight < Rat::one()) {
            return Err(Error::Construction {
                stage: n,
                msg: format!("interpolation weight out of range: {m_weight}"),
            });
        }
        self.apply_correction(&m_weight, &cert.alpha, &h_num, &h_den);
        if self.f.eval_cmp(&d, &wk) != std::cmp::Ordering::Equal {
            return Err(Error::Construction {
                stage: n,
                msg: "preimage target not hit exactly".into(),
            });
        }
        self.preimage.insert(k, d.clone());
        self.b_set.push(k);
        Ok(StageRecord {
            n,
            k,
            parity: Parity::Even,
            case: CaseTag::A,
            beta: Some(beta),
            h: Some(h_poly),
            alpha_cert: Some(cert),
            m_weight: Some(m_weight),
            d: Some(d.clone()),
            f: self.reduced_f(),
            a_set: self.a_set.clone(),
            b_set: self.b_set.clone(),
            forward_delta: None,
            preimage_delta: Some(IndexedValue { index: k, value: d }),
            case_b_witness: None,
            separation: Some([
                RecordedEnclosure::from_interval(&enc0.interval),
                RecordedEnclosure::from_interval(&enc1.interval),
            ]),
        })
    }

    /// f <- f + (M·α)·h, in cleared form with a cheap 2-adic normalization.
    fn apply_correction(&mut self, m: &Rat, alpha: &Rat, h_num: &PolyZ, h_den: &BigInt) {
        let scale_num = m.numer() * alpha.numer();
        let scale_den = m.denom() * alpha.denom();
        let (scale_num, scale_den) = strip_common_pow2(scale_num, scale_den);
        self.f = self.f.add_scaled(&scale_num, &scale_den, h_num, h_den);
        normalize_pow2(&mut self.f);
    }

    fn reduced_f(&self) -> Poly {
        reduce_poly_par(&self.f)
    }
}

/// Reduce all coefficients in parallel (the per-coefficient gcd dominates
/// late stages).
pub fn reduce_poly_par(f: &PolyQ) -> Poly {
    use rayon::prelude::*;
    let coeffs: Vec<Rat> = f
        .num
        .coeffs
        .par_iter()
        .map(|c| rat_from_pair(c.clone(), f.den.clone()))
        .collect();
    Poly::from_coeffs(coeffs)
}

fn strip_common_pow2(num: BigInt, den: BigInt) -> (BigInt, BigInt) {
    if num.is_zero() {
        return (num, den);
    }
    let t = num
        .trailing_zeros()
        .unwrap_or(0)
        .min(den.trailing_zeros().unwrap_or(0));
    (num >> t, den >> t)
}

/// Divide out the common power of two between all numerator coefficients
/// and the denominator.
fn normalize_pow2(f: &mut PolyQ) {
    let mut t = f.den.trailing_zeros().unwrap_or(0);
    for c in &f.num.coeffs {
        if t == 0 {
            return;
        }
        if !c.is_zero() {
            t = t.min(c.trailing_zeros().unwrap_or(0));
        }
    }
    if t > 0 {
        for c in f.num.coeffs.iter_mut() {
            *c = &*c >> t;
        }
        f.den = &f.den >> t;
    }
}

/// Run a full construction, returning the per-stage records.
pub fn run(config: ConstructionConfig) -> Result<Vec<StageRecord>> {
    let stages = config.stages;
    let mut c = Construction::init(config);
    for _ in 0..stages {
        c.step()?;
    }
    Ok(c.records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat_from_i64;
    use crate::partition::by_name;

    fn config(x: (i64, i64), y: (i64, i64), w: &[(i64, i64)], stages: usize) -> ConstructionConfig {
        ConstructionConfig::new(
            rat_from_i64(x.0, x.1),
            rat_from_i64(y.0, y.1),
            w.iter().map(|&(n, d)| rat_from_i64(n, d)).collect(),
            by_name("dyadic-valuation").unwrap(),
            GrowthFn::default(),
            stages,
            rat_from_i64(2, 1),
        )
        .unwrap()
    }

    #[test]
    fn base_function_examples() {
        // P = (0,0): f_0 = (3/2)z
        let f = base_function(&Rat::zero(), &Rat::zero());
        assert_eq!(f, Poly::from_coeffs(vec![Rat::zero(), rat_from_i64(3, 2)]));
        // P = (1,1): f_0 = (3/2)z - 1/2
        let f = base_function(&Rat::one(), &Rat::one());
        assert_eq!(
            f,
            Poly::from_coeffs(vec![rat_from_i64(-1, 2), rat_from_i64(3, 2)])
        );
        // f_0(x_P) = y_P on a sample of points
        for (x, y) in [(5, 7), (-3, 2), (0, 9)] {
            let (xp, yp) = (rat_from_i64(x, 3), rat_from_i64(y, 4));
            assert_eq!(base_function(&xp, &yp).eval(&xp), yp);
        }
    }

    #[test]
    fn worked_example_stage_one() {
        // P=(0,0), w_0=1: h_1 = z, α_1 = 1/2, interval (3/2, 2), d = 5/3,
        // M_1 = 1/3, f_1 = (5/3)z
        let cfg = config((0, 1), (0, 1), &[(1, 1)], 2);
        let mut c = Construction::init(cfg);
        let r = c.step().unwrap().clone();
        assert_eq!(r.case, CaseTag::A);
        assert_eq!(r.beta, Some(1));
        assert_eq!(r.h.as_ref().unwrap(), &Poly::x());
        assert_eq!(r.alpha_cert.as_ref().unwrap().alpha, rat_from_i64(1, 2));
        assert_eq!(r.d.as_ref().unwrap(), &rat_from_i64(5, 3));
        assert_eq!(r.m_weight.as_ref().unwrap(), &rat_from_i64(1, 3));
        assert_eq!(
            r.f,
            Poly::from_coeffs(vec![Rat::zero(), rat_from_i64(5, 3)])
        );
    }

    #[test]
    fn worked_example_stage_two() {
        // stage 2: h_2 = z^2(z-1), preimage registered exactly, color 0
        let cfg = config((0, 1), (0, 1), &[(1, 1)], 2);
        let mut c = Construction::init(cfg);
        c.step().unwrap();
        let r = c.step().unwrap().clone();
        assert_eq!(r.case, CaseTag::A);
        assert_eq!(r.beta, Some(2));
        let h2 = Poly::from_coeffs(vec![
            Rat::zero(),
            Rat::zero(),
            rat_from_i64(-1, 1),
            Rat::one(),
        ]);
        assert_eq!(r.h.as_ref().unwrap(), &h2);
        let d = r.d.as_ref().unwrap();
        // f_2(d) = 1 exactly
        assert_eq!(r.f.eval(d), Rat::one());
        // d lands in the class of w_0 = 1 (odd denominator)
        assert_eq!(d.denom().trailing_zeros().unwrap_or(0), 0);
        // d sits strictly between the separated preimage enclosures
        let sep = r.separation.as_ref().unwrap();
        assert!(sep[0].hi < *d || sep[1].hi < *d);
        // the unperturbed preimage is exactly 3/5
        assert_eq!(sep[0].lo, rat_from_i64(3, 5));
        assert_eq!(sep[0].hi, rat_from_i64(3, 5));
    }

    #[test]
    fn base_point_in_w_takes_reuse_cases() {
        // w_0 = x_P = 0: odd stage reuses; then w_0 = y_P = 5 at stage 2? no:
        // P=(0,5), w_0 = 0: stage 1 reuse through x_P; stage 2 perturbs.
        let cfg = config((0, 1), (5, 1), &[(0, 1)], 2);
        let recs = run(cfg).unwrap();
        assert_eq!(recs[0].case, CaseTag::B);
        assert_eq!(recs[0].forward_delta.as_ref().unwrap().value, rat_from_i64(5, 1));
        assert_eq!(recs[1].case, CaseTag::A);
    }

    #[test]
    fn y_p_in_w_takes_even_reuse() {
        // P=(0,0), w_0 = 0 = y_P: stage 1 reuse (w=x_P), stage 2 reuse (w=y_P),
        // registered preimage is x_P
        let cfg = config((0, 1), (0, 1), &[(0, 1)], 2);
        let recs = run(cfg).unwrap();
        assert_eq!(recs[0].case, CaseTag::B);
        assert_eq!(recs[1].case, CaseTag::B);
        assert_eq!(recs[1].preimage_delta.as_ref().unwrap().value, Rat::zero());
        assert_eq!(recs[1].f, recs[0].f);
    }

    #[test]
    fn registry_reuse_on_later_odd_stage() {
        // After stages 1-2 for w_0 = 1, the stage-2 preimage d is registered.
        // Make w_1 = d: stage 3 must take the reuse branch.
        let cfg = config((0, 1), (0, 1), &[(1, 1)], 2);
        let recs = run(cfg).unwrap();
        let d = recs[1].d.clone().unwrap();
        let w1 = (d.numer().clone(), d.denom().clone());
        let cfg2 = ConstructionConfig::new(
            Rat::zero(),
            Rat::zero(),
            vec![Rat::one(), rat_from_pair(w1.0, w1.1)],
            by_name("dyadic-valuation").unwrap(),
            GrowthFn::default(),
            3,
            rat_from_i64(2, 1),
        )
        .unwrap();
        let recs2 = run(cfg2).unwrap();
        assert_eq!(recs2[2].case, CaseTag::B);
        assert_eq!(recs2[2].case_b_witness, Some(0));
        // f_3(w_1) = w_0 and the colors match
        assert_eq!(recs2[2].forward_delta.as_ref().unwrap().value, Rat::one());
    }

    #[test]
    fn stage_count_validation() {
        let r = ConstructionConfig::new(
            Rat::zero(),
            Rat::zero(),
            vec![Rat::one()],
            by_name("dyadic-valuation").unwrap(),
            GrowthFn::default(),
            3,
            rat_from_i64(2, 1),
        );
        assert!(r.is_err());
        let r = ConstructionConfig::new(
            Rat::zero(),
            Rat::zero(),
            vec![Rat::one(), Rat::one()],
            by_name("dyadic-valuation").unwrap(),
            GrowthFn::default(),
            2,
            rat_from_i64(2, 1),
        );
        assert!(r.is_err());
    }

    #[test]
    fn determinism_bitwise() {
        let mk = || {
            run(config(
                (1, 2),
                (-3, 5),
                &[(1, 1), (7, 3), (-2, 7)],
                6,
            ))
            .unwrap()
        };
        let a = mk();
        let b = mk();
        let ja = serde_json::to_string(&a).unwrap();
        let jb = serde_json::to_string(&b).unwrap();
        assert_eq!(ja, jb);
    }

    #[test]
    fn interpolation_invariant_all_stages() {
        let cfg = config((1, 2), (-3, 5), &[(1, 1), (7, 3), (-2, 7)], 6);
        let xp = cfg.x_p.clone();
        let yp = cfg.y_p.clone();
        for r in run(cfg).unwrap() {
            assert_eq!(r.f.eval(&xp), yp, "stage {}", r.n);
        }
    }
}
