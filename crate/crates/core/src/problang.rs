//! Probabilistic languages over `{x}`: the identical-support pair `P1`/`P2`,
//! 0/1 embeddings of deterministic languages, seeded sampling, and the
//! i.i.d. likelihood-ratio contrast.
//!
//! Masses are exact dyadic rationals. `P1` and `P2` differ from `2^-n` by
//! `±2^-(n+1)` or `±2^-(n+2)` with opposite signs, so both sum to one and
//! both give every non-empty string positive mass.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::Learner;
use crate::lang::{Alphabet, Language, Sample};

/// An exact probability.
pub type Prob = BigRational;

/// Sampling truncates the unary pmfs here; the residual mass `2^-60` is
/// assigned to the last length.
pub const SAMPLING_CUTOFF: usize = 60;

fn dyadic(exponent: usize) -> Prob {
    Prob::new(BigInt::one(), BigInt::one() << exponent)
}

fn ratio(numer: i64, denom: i64) -> Prob {
    Prob::new(BigInt::from(numer), BigInt::from(denom))
}

fn unary_mass(n: usize, odd_sign: i8) -> Prob {
    // odd n: 2^-n ± 2^-(n+2); even n: 2^-n ∓ 2^-(n+1)
    let base = dyadic(n);
    match (n % 2 == 1, odd_sign > 0) {
        (true, true) => base + dyadic(n + 2),
        (true, false) => base - dyadic(n + 2),
        (false, true) => base - dyadic(n + 1),
        (false, false) => base + dyadic(n + 1),
    }
}

/// `P1(x^n)`: `2^-n − 2^-(n+2)` for odd `n`, `2^-n + 2^-(n+1)` for even `n`.
pub fn pmf_p1(n: usize) -> Result<Prob> {
    if n < 1 {
        return Err(Error::input("length must be at least 1"));
    }
    Ok(unary_mass(n, -1))
}

/// `P2(x^n)`: `2^-n + 2^-(n+2)` for odd `n`, `2^-n − 2^-(n+1)` for even `n`.
pub fn pmf_p2(n: usize) -> Result<Prob> {
    if n < 1 {
        return Err(Error::input("length must be at least 1"));
    }
    Ok(unary_mass(n, 1))
}

pub fn to_f64(p: &Prob) -> f64 {
    p.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pmf {
    P1,
    P2,
    /// Explicit masses; strings not listed have mass zero.
    Table(BTreeMap<String, Prob>),
}

impl Pmf {
    pub fn mass(&self, s: &str) -> Prob {
        match self {
            Pmf::P1 | Pmf::P2 => {
                let n = s.chars().count();
                if n == 0 || !s.chars().all(|c| c == 'x') {
                    return Prob::zero();
                }
                unary_mass(n, if matches!(self, Pmf::P1) { -1 } else { 1 })
            }
            Pmf::Table(table) => table.get(s).cloned().unwrap_or_else(Prob::zero),
        }
    }

    pub fn mass_f64(&self, s: &str) -> f64 {
        to_f64(&self.mass(s))
    }
}

/// A support language with a probability mass function over it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbLanguage {
    name: String,
    support: Language,
    pmf: Pmf,
}

impl ProbLanguage {
    /// Pairs a support with a pmf after checking `pmf(s) > 0 ⇔ s ∈ support`
    /// for every string up to `check_len` symbols.
    pub fn new(name: impl Into<String>, support: Language, pmf: Pmf, check_len: usize) -> Result<Self> {
        let lang = Self {
            name: name.into(),
            support,
            pmf,
        };
        for n in 0..=check_len {
            for s in lang.support.alphabet().words_of_length(n) {
                let positive = !lang.pmf.mass(&s).is_zero();
                if positive != lang.support.contains(&s)? {
                    return Err(Error::validation(format!(
                        "{}: mass of {s:?} disagrees with support membership",
                        lang.name
                    )));
                }
            }
        }
        Ok(lang)
    }

    pub fn p1() -> Self {
        Self {
            name: "P1".to_string(),
            support: Language::unary_all(Alphabet::unary()).expect("unary"),
            pmf: Pmf::P1,
        }
    }

    pub fn p2() -> Self {
        Self {
            name: "P2".to_string(),
            support: Language::unary_all(Alphabet::unary()).expect("unary"),
            pmf: Pmf::P2,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn support(&self) -> &Language {
        &self.support
    }

    pub fn pmf(&self) -> &Pmf {
        &self.pmf
    }

    pub fn mass(&self, s: &str) -> Prob {
        self.pmf.mass(s)
    }

    /// Strings carrying mass up to `max_len`, in length-lex order.
    fn positive_up_to(&self, max_len: usize) -> Vec<String> {
        match &self.pmf {
            Pmf::Table(table) => {
                let mut out: Vec<String> = table
                    .iter()
                    .filter(|(s, p)| s.chars().count() <= max_len && !p.is_zero())
                    .map(|(s, _)| s.clone())
                    .collect();
                self.support.alphabet().sort_length_lex(&mut out);
                out
            }
            _ => (1..=max_len).map(|n| "x".repeat(n)).collect(),
        }
    }

    /// Finite list of outcomes used for sampling, with the sampling cutoff
    /// applied to the unary pmfs.
    fn outcomes(&self) -> Vec<String> {
        match &self.pmf {
            Pmf::Table(table) => self.positive_up_to(table.keys().map(|s| s.chars().count()).max().unwrap_or(0)),
            _ => self.positive_up_to(SAMPLING_CUTOFF),
        }
    }
}

/// 0/1 embedding of a deterministic language: uniform mass over its members
/// of length at most `max_len`.
pub fn embed_deterministic(lang: &Language, max_len: usize) -> Result<ProbLanguage> {
    let members = lang.enumerate_up_to(max_len);
    if members.is_empty() {
        return Err(Error::validation("cannot embed a language with no members in range"));
    }
    let weight = ratio(1, members.len() as i64);
    let table: BTreeMap<String, Prob> = members.iter().map(|s| (s.clone(), weight.clone())).collect();
    let support = Language::finite(lang.alphabet().clone(), members)?;
    Ok(ProbLanguage {
        name: format!("embed({})", lang.describe()),
        support,
        pmf: Pmf::Table(table),
    })
}

/// `Σ_{|s| ≤ n} p(s)`.
pub fn partial_mass(p: &ProbLanguage, n: usize) -> Prob {
    p.positive_up_to(n).iter().fold(Prob::zero(), |acc, s| acc + p.mass(s))
}

/// The length-lex first string of length at most `n` carrying mass under
/// exactly one of `p`, `q`.
pub fn support_difference_up_to(p: &ProbLanguage, q: &ProbLanguage, n: usize) -> Option<String> {
    let mut candidates = p.positive_up_to(n);
    candidates.extend(q.positive_up_to(n));
    p.support.alphabet().sort_length_lex(&mut candidates);
    candidates
        .into_iter()
        .find(|s| p.mass(s).is_zero() != q.mass(s).is_zero())
}

pub fn support_equal_up_to(p: &ProbLanguage, q: &ProbLanguage, n: usize) -> bool {
    support_difference_up_to(p, q, n).is_none()
}

/// `Σ_{|s| ≤ n} p(s) ln(p(s)/q(s))`; infinite when `q` misses mass of `p`.
pub fn kl_truncated(p: &ProbLanguage, q: &ProbLanguage, n: usize) -> f64 {
    p.positive_up_to(n)
        .iter()
        .map(|s| {
            let (ps, qs) = (p.pmf.mass_f64(s), q.pmf.mass_f64(s));
            if qs == 0.0 {
                f64::INFINITY
            } else {
                ps * (ps / qs).ln()
            }
        })
        .sum()
}

fn log_ratio(s: &str, p: &ProbLanguage, q: &ProbLanguage) -> f64 {
    let (ps, qs) = (p.pmf.mass_f64(s), q.pmf.mass_f64(s));
    match (ps > 0.0, qs > 0.0) {
        (true, true) => (ps / qs).ln(),
        (true, false) => f64::INFINITY,
        (false, true) => f64::NEG_INFINITY,
        (false, false) => 0.0,
    }
}

/// Returns 1 when the log-likelihood ratio favours `p` (ties go to 1), else 2.
pub fn likelihood_ratio_classify<S: AsRef<str>>(samples: &[S], p: &ProbLanguage, q: &ProbLanguage) -> u8 {
    let llr: f64 = samples.iter().map(|s| log_ratio(s.as_ref(), p, q)).sum();
    if llr >= 0.0 {
        1
    } else {
        2
    }
}

/// Inverse-CDF sampler over a finite outcome list.
#[derive(Debug, Clone)]
pub struct Sampler {
    outcomes: Vec<String>,
    cdf: Vec<f64>,
}

impl Sampler {
    pub fn new(p: &ProbLanguage) -> Result<Self> {
        let outcomes = p.outcomes();
        let total = outcomes.iter().fold(Prob::zero(), |acc, s| acc + p.mass(s));
        if to_f64(&total) < 1.0 - 1e-6 {
            return Err(Error::validation(format!(
                "{}: mass at the sampling cutoff is {:.3e}, not normalized",
                p.name,
                to_f64(&total)
            )));
        }
        let mut acc = Prob::zero();
        let cdf = outcomes
            .iter()
            .map(|s| {
                acc += p.mass(s);
                to_f64(&acc)
            })
            .collect();
        Ok(Self { outcomes, cdf })
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> &str {
        let u: f64 = rng.random();
        let idx = self.cdf.partition_point(|&c| c <= u);
        // residual mass past the cutoff lands on the last outcome
        &self.outcomes[idx.min(self.outcomes.len() - 1)]
    }
}

/// `count` i.i.d. draws from `p` using a seeded ChaCha8 stream.
pub fn sample(p: &ProbLanguage, seed: u64, count: usize) -> Result<Vec<String>> {
    let sampler = Sampler::new(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).map(|_| sampler.draw(&mut rng).to_string()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AccuracyEstimate {
    pub sample_size: usize,
    pub trials: usize,
    pub accuracy: f64,
    /// Binomial standard error of `accuracy`.
    pub std_error: f64,
}

/// Fraction of `trials` in which `m` i.i.d. draws from `source` are
/// classified as coming from `source` by the likelihood-ratio test between
/// `p` (label 1) and `q` (label 2).
pub fn classifier_accuracy(
    source_label: u8,
    p: &ProbLanguage,
    q: &ProbLanguage,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<AccuracyEstimate> {
    let source = if source_label == 1 { p } else { q };
    let sampler = Sampler::new(source)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = Vec::with_capacity(m);
    let mut correct = 0usize;
    for _ in 0..trials {
        draws.clear();
        draws.extend((0..m).map(|_| sampler.draw(&mut rng)));
        if likelihood_ratio_classify(&draws, p, q) == source_label {
            correct += 1;
        }
    }
    let accuracy = correct as f64 / trials as f64;
    Ok(AccuracyEstimate {
        sample_size: m,
        trials,
        accuracy,
        std_error: (accuracy * (1.0 - accuracy) / trials as f64).sqrt(),
    })
}

/// Summary of the `P1`/`P2` contrast.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbLangReport {
    pub partial_mass_p1: f64,
    pub partial_mass_p2: f64,
    pub tail_p1: f64,
    pub tail_p2: f64,
    pub support_equal: bool,
    pub kl_12: f64,
    pub kl_21: f64,
    #[serde(rename = "classifier_accuracy_by_M")]
    pub classifier_accuracy_by_m: Vec<AccuracyEstimate>,
}

/// Builds the contrast report truncated at `n`, estimating classifier
/// accuracy (source `P1`) for each sample size in `sizes`.
pub fn verify_problang(n: usize, sizes: &[usize], trials: usize, seed: u64) -> Result<ProbLangReport> {
    let (p1, p2) = (ProbLanguage::p1(), ProbLanguage::p2());
    let (m1, m2) = (partial_mass(&p1, n), partial_mass(&p2, n));
    let classifier_accuracy_by_m = sizes
        .iter()
        .map(|&m| classifier_accuracy(1, &p1, &p2, m, trials, seed.wrapping_add(m as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProbLangReport {
        partial_mass_p1: to_f64(&m1),
        partial_mass_p2: to_f64(&m2),
        tail_p1: to_f64(&(Prob::one() - m1)),
        tail_p2: to_f64(&(Prob::one() - m2)),
        support_equal: support_equal_up_to(&p1, &p2, n),
        kl_12: kl_truncated(&p1, &p2, n),
        kl_21: kl_truncated(&p2, &p1, n),
        classifier_accuracy_by_m,
    })
}

/// Weights over candidate indices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisDistribution {
    pub weights: Vec<f64>,
}

impl HypothesisDistribution {
    /// Highest weight, lowest index on ties; `None` if every weight is zero.
    pub fn argmax(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, &w) in self.weights.iter().enumerate() {
            if w > 0.0 && best.is_none_or(|b| w > self.weights[b]) {
                best = Some(i);
            }
        }
        best
    }
}

/// Keeps a uniform distribution over the candidates whose support contains
/// every observation. Presentation order carries no frequency information,
/// so survivors are never reweighted.
#[derive(Debug, Clone)]
pub struct ProbLearner<'a> {
    candidates: &'a [ProbLanguage],
    alive: Vec<bool>,
}

pub fn make_prob_learner(candidates: &[ProbLanguage]) -> ProbLearner<'_> {
    ProbLearner {
        candidates,
        alive: vec![true; candidates.len()],
    }
}

impl ProbLearner<'_> {
    pub fn distribution(&self) -> HypothesisDistribution {
        let survivors = self.alive.iter().filter(|&&a| a).count();
        let w = if survivors == 0 { 0.0 } else { 1.0 / survivors as f64 };
        HypothesisDistribution {
            weights: self.alive.iter().map(|&a| if a { w } else { 0.0 }).collect(),
        }
    }
}

impl Learner for ProbLearner<'_> {
    fn name(&self) -> String {
        "posterior-uniform".to_string()
    }

    fn initial(&self) -> Option<usize> {
        self.distribution().argmax()
    }

    fn observe(&mut self, _sample: &Sample, latest: &str) -> Option<usize> {
        for (alive, cand) in self.alive.iter_mut().zip(self.candidates) {
            if *alive && !cand.support().contains(latest).unwrap_or(false) {
                *alive = false;
            }
        }
        self.distribution().argmax()
    }

    fn hypothesis_count(&self) -> usize {
        self.candidates.len()
    }

    fn support(&self, index: usize) -> &Language {
        self.candidates[index].support()
    }
}

/// Applies the likelihood-ratio test to the distinct strings seen so far,
/// treating them as if they were i.i.d. draws.
#[derive(Debug, Clone)]
pub struct LikelihoodRatioLearner<'a> {
    candidates: &'a [ProbLanguage; 2],
    llr: f64,
    seen: usize,
}

pub fn likelihood_ratio_learner(candidates: &[ProbLanguage; 2]) -> LikelihoodRatioLearner<'_> {
    LikelihoodRatioLearner {
        candidates,
        llr: 0.0,
        seen: 0,
    }
}

impl Learner for LikelihoodRatioLearner<'_> {
    fn name(&self) -> String {
        "likelihood-ratio".to_string()
    }

    fn initial(&self) -> Option<usize> {
        Some(0)
    }

    fn observe(&mut self, sample: &Sample, latest: &str) -> Option<usize> {
        // only the first occurrence of a string counts
        let [p, q] = self.candidates;
        if sample.len() > self.seen {
            self.seen = sample.len();
            self.llr += log_ratio(latest, p, q);
        }
        Some(if self.llr >= 0.0 { 0 } else { 1 })
    }

    fn hypothesis_count(&self) -> usize {
        2
    }

    fn support(&self, index: usize) -> &Language {
        self.candidates[index].support()
    }
}
