//! Teacher/learner simulation of identification from positive data.
//!
//! A run feeds `horizon` strings from a [`Teacher`] to a [`Learner`] and
//! records the hypothesis after every string. Infinite games are truncated
//! at the horizon; adversarial teachers certify non-identification with a
//! refuting completion: a family member that still explains the whole
//! transcript yet differs from the learner's final guess.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lang::{Language, LanguageFamily, LanguageKind, Sample};

/// A learner maps the growing sample to a hypothesis index, or `None` when
/// no hypothesis is offered.
pub trait Learner {
    fn name(&self) -> String;

    /// Hypothesis before any data has been seen.
    fn initial(&self) -> Option<usize>;

    /// Called after `latest` has been added to `sample`.
    fn observe(&mut self, sample: &Sample, latest: &str) -> Option<usize>;

    fn hypothesis_count(&self) -> usize;

    /// The language (or support) denoted by hypothesis `index`.
    fn support(&self, index: usize) -> &Language;
}

/// A source of strings. Adaptive teachers may inspect the learner's
/// current hypothesis before choosing the next string.
pub trait Teacher {
    fn name(&self) -> String;

    fn next_string(&mut self, current: Option<usize>) -> String;

    /// Fixes the target once the run has ended.
    fn settle(&self, final_hypothesis: Option<usize>, sample: &Sample) -> Settlement;
}

/// How a teacher resolves the target at the end of a run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Settlement {
    pub target: Option<usize>,
    pub refuting_completion: Option<RefutingCompletion>,
    pub escalations: Option<usize>,
    pub forced_error: bool,
}

/// A family member that contains the whole transcript and differs from the
/// learner's final hypothesis. Continuing the transcript with a fair
/// presentation of this language makes the final guess wrong.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefutingCompletion {
    pub index: usize,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub learner: String,
    pub teacher: String,
    pub horizon: usize,
    /// `null` entries mark the no-hypothesis sentinel.
    pub hypothesis_trace: Vec<Option<usize>>,
    pub mind_changes: usize,
    /// First step from which the trace stays on the target.
    pub converged_at: Option<usize>,
    pub target: Option<usize>,
    pub final_correct: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refuting_completion: Option<RefutingCompletion>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub escalations: Option<usize>,
    pub forced_error: bool,
    /// Steps at which the hypothesis did not contain the sample although
    /// some hypothesis did.
    pub consistency_violations: Vec<usize>,
    pub transcript: Vec<String>,
}

impl SimulationReport {
    pub const CSV_HEADER: [&'static str; 11] = [
        "learner",
        "teacher",
        "horizon",
        "final_hypothesis",
        "mind_changes",
        "converged_at",
        "target",
        "final_correct",
        "refuting_completion",
        "escalations",
        "consistency_violations",
    ];

    pub fn final_hypothesis(&self) -> Option<usize> {
        self.hypothesis_trace.last().copied().flatten()
    }

    /// One flat row matching [`Self::CSV_HEADER`].
    pub fn csv_record(&self) -> Vec<String> {
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        vec![
            self.learner.clone(),
            self.teacher.clone(),
            self.horizon.to_string(),
            opt(self.final_hypothesis()),
            self.mind_changes.to_string(),
            opt(self.converged_at),
            opt(self.target),
            self.final_correct.to_string(),
            self.refuting_completion
                .as_ref()
                .map(|c| c.name.clone())
                .unwrap_or_default(),
            opt(self.escalations),
            self.consistency_violations.len().to_string(),
        ]
    }

    /// The finite-horizon non-identification certificate: either the learner
    /// paid one mind change per escalation (with at least one escalation), or
    /// a named completion refutes its final guess.
    pub fn certifies_non_identification(&self) -> bool {
        let escalation_side = matches!(self.escalations, Some(e) if e > 0 && self.mind_changes >= e);
        let refutation_side = self.refuting_completion.is_some() && !self.final_correct;
        escalation_side || refutation_side
    }
}

pub fn count_mind_changes(trace: &[Option<usize>]) -> usize {
    trace.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Feeds exactly `horizon` strings and audits consistency at every step.
pub fn run_simulation(
    teacher: &mut dyn Teacher,
    learner: &mut dyn Learner,
    horizon: usize,
) -> Result<SimulationReport> {
    if horizon == 0 {
        return Err(Error::input("horizon must be at least 1"));
    }
    let mut sample = Sample::new();
    let mut current = learner.initial();
    let mut trace = Vec::with_capacity(horizon);
    let mut transcript = Vec::with_capacity(horizon);
    let mut violations = Vec::new();
    // Once no hypothesis is consistent, none ever will be again.
    let mut none_consistent = false;
    for step in 1..=horizon {
        let s = teacher.next_string(current);
        sample.insert(&s);
        current = learner.observe(&sample, &s);
        let consistent = match current {
            Some(i) if i < learner.hypothesis_count() => learner.support(i).contains_sample(&sample),
            Some(_) => false,
            None => {
                if !none_consistent {
                    none_consistent =
                        (0..learner.hypothesis_count()).all(|i| !learner.support(i).contains_sample(&sample));
                }
                none_consistent
            }
        };
        if !consistent {
            violations.push(step);
        }
        trace.push(current);
        transcript.push(s);
    }
    let settlement = teacher.settle(current, &sample);
    let final_correct = current.is_some() && settlement.target == current;
    let converged_at = final_correct.then(|| {
        let stable = trace.iter().rev().take_while(|&&h| h == current).count();
        horizon - stable + 1
    });
    Ok(SimulationReport {
        learner: learner.name(),
        teacher: teacher.name(),
        horizon,
        mind_changes: count_mind_changes(&trace),
        hypothesis_trace: trace,
        converged_at,
        target: settlement.target,
        final_correct,
        refuting_completion: settlement.refuting_completion,
        escalations: settlement.escalations,
        forced_error: settlement.forced_error,
        consistency_violations: violations,
        transcript,
    })
}

// ---------------------------------------------------------------------------
// Fair presentations

/// Order in which a fair teacher walks through its language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Schedule {
    /// Length-lex order; finite languages are cycled.
    #[default]
    LengthLex,
    /// Finite languages: a fresh seeded permutation per round. Infinite
    /// languages: each length stage is shuffled before it is emitted.
    Shuffled { seed: u64 },
}

/// Emits members of one language so that every member appears by a known step.
#[derive(Debug, Clone)]
pub struct FairTeacher {
    language: Language,
    schedule: Schedule,
    target: Option<usize>,
    rng: ChaCha8Rng,
    /// All members, for finite languages.
    members: Option<Vec<String>>,
    buffer: VecDeque<String>,
    next_len: usize,
    label: String,
}

pub fn fair_teacher(lang: &Language, schedule: Schedule) -> Result<FairTeacher> {
    if lang.is_empty() {
        return Err(Error::validation("a fair teacher needs a non-empty language"));
    }
    let members = lang.max_member_len().map(|max| lang.enumerate_up_to(max));
    let seed = match schedule {
        Schedule::LengthLex => 0,
        Schedule::Shuffled { seed } => seed,
    };
    let label = match schedule {
        Schedule::LengthLex => format!("fair({})", lang.describe()),
        Schedule::Shuffled { seed } => format!("fair-shuffled[{seed}]({})", lang.describe()),
    };
    Ok(FairTeacher {
        language: lang.clone(),
        schedule,
        target: None,
        rng: ChaCha8Rng::seed_from_u64(seed),
        members,
        buffer: VecDeque::new(),
        next_len: 0,
        label,
    })
}

impl FairTeacher {
    /// Declares which hypothesis index is the true target.
    pub fn with_target(mut self, index: usize) -> Self {
        self.target = Some(index);
        self
    }

    pub fn language(&self) -> &Language {
        &self.language
    }

    /// Step by which `s` is guaranteed to have appeared, or `None` if `s`
    /// is not a member.
    pub fn promised_step(&self, s: &str) -> Option<usize> {
        if !self.language.contains(s).ok()? {
            return None;
        }
        let len = s.chars().count();
        match (&self.members, self.schedule) {
            (Some(members), Schedule::Shuffled { .. }) => Some(members.len()),
            _ => Some(self.language.enumerate_up_to(len).len()),
        }
    }

    fn refill(&mut self) {
        if let Some(members) = &self.members {
            let mut round = members.clone();
            if let Schedule::Shuffled { .. } = self.schedule {
                round.shuffle(&mut self.rng);
            }
            self.buffer.extend(round);
            return;
        }
        // infinite: advance to the next non-empty length stage
        loop {
            let mut stage = self.language.members_of_length(self.next_len);
            self.next_len += 1;
            if stage.is_empty() {
                continue;
            }
            if let Schedule::Shuffled { .. } = self.schedule {
                stage.shuffle(&mut self.rng);
            }
            self.buffer.extend(stage);
            return;
        }
    }
}

impl Teacher for FairTeacher {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn next_string(&mut self, _current: Option<usize>) -> String {
        if self.buffer.is_empty() {
            self.refill();
        }
        self.buffer.pop_front().expect("refill yields at least one string")
    }

    fn settle(&self, _final_hypothesis: Option<usize>, _sample: &Sample) -> Settlement {
        Settlement {
            target: self.target,
            ..Settlement::default()
        }
    }
}

// ---------------------------------------------------------------------------
// Built-in learners

/// Always guesses the lowest-index language consistent with the sample.
/// The lowest consistent index can only grow as the sample grows, so the
/// scan resumes from the previous guess.
#[derive(Debug, Clone)]
pub struct MinConsistentLearner<'a> {
    family: &'a LanguageFamily,
    cursor: usize,
}

pub fn min_consistent_learner(family: &LanguageFamily) -> MinConsistentLearner<'_> {
    MinConsistentLearner { family, cursor: 0 }
}

impl Learner for MinConsistentLearner<'_> {
    fn name(&self) -> String {
        "min-consistent".to_string()
    }

    fn initial(&self) -> Option<usize> {
        Some(0)
    }

    fn observe(&mut self, sample: &Sample, _latest: &str) -> Option<usize> {
        let langs = self.family.languages();
        while self.cursor < langs.len() && !langs[self.cursor].contains_sample(sample) {
            self.cursor += 1;
        }
        (self.cursor < langs.len()).then_some(self.cursor)
    }

    fn hypothesis_count(&self) -> usize {
        self.family.len()
    }

    fn support(&self, index: usize) -> &Language {
        &self.family.languages()[index]
    }
}

/// Always guesses the highest-index consistent language. On the unary
/// nested family this is the over-general guess `L_inf`.
#[derive(Debug, Clone)]
pub struct MaxConsistentLearner<'a> {
    family: &'a LanguageFamily,
    cursor: Option<usize>,
}

pub fn max_consistent_learner(family: &LanguageFamily) -> MaxConsistentLearner<'_> {
    MaxConsistentLearner {
        family,
        cursor: family.len().checked_sub(1),
    }
}

impl Learner for MaxConsistentLearner<'_> {
    fn name(&self) -> String {
        "max-consistent".to_string()
    }

    fn initial(&self) -> Option<usize> {
        self.family.len().checked_sub(1)
    }

    fn observe(&mut self, sample: &Sample, _latest: &str) -> Option<usize> {
        let langs = self.family.languages();
        while let Some(i) = self.cursor {
            if langs[i].contains_sample(sample) {
                break;
            }
            self.cursor = i.checked_sub(1);
        }
        self.cursor
    }

    fn hypothesis_count(&self) -> usize {
        self.family.len()
    }

    fn support(&self, index: usize) -> &Language {
        &self.family.languages()[index]
    }
}

/// Guesses conservatively until it has seen `patience` distinct strings,
/// then jumps to the most general consistent language.
#[derive(Debug, Clone)]
pub struct ImpatientLearner<'a> {
    patience: usize,
    cautious: MinConsistentLearner<'a>,
    bold: MaxConsistentLearner<'a>,
}

pub fn impatient_learner(family: &LanguageFamily, patience: usize) -> ImpatientLearner<'_> {
    ImpatientLearner {
        patience,
        cautious: min_consistent_learner(family),
        bold: max_consistent_learner(family),
    }
}

impl Learner for ImpatientLearner<'_> {
    fn name(&self) -> String {
        format!("impatient-{}", self.patience)
    }

    fn initial(&self) -> Option<usize> {
        if self.patience == 0 {
            self.bold.initial()
        } else {
            self.cautious.initial()
        }
    }

    fn observe(&mut self, sample: &Sample, latest: &str) -> Option<usize> {
        let cautious = self.cautious.observe(sample, latest);
        let bold = self.bold.observe(sample, latest);
        if sample.len() >= self.patience {
            bold
        } else {
            cautious
        }
    }

    fn hypothesis_count(&self) -> usize {
        self.cautious.hypothesis_count()
    }

    fn support(&self, index: usize) -> &Language {
        self.cautious.support(index)
    }
}

// ---------------------------------------------------------------------------
// Adversaries

/// Diagonalizing teacher for the unary nested family `[L_1, …, L_K, L_inf]`.
///
/// The first string is `x`. Afterwards, if the learner guesses `L_k` the
/// teacher emits `x^(k+1)`, refuting it; if the learner guesses `L_inf` or
/// nothing, the teacher repeats `x`, leaving `L_m` (with `m` the longest
/// length so far) a valid target.
#[derive(Debug, Clone)]
pub struct NestedAdversary<'a> {
    family: &'a LanguageFamily,
    thresholds: Vec<Option<usize>>,
    top: usize,
    max_len: usize,
    escalations: usize,
}

impl<'a> NestedAdversary<'a> {
    pub fn new(family: &'a LanguageFamily) -> Result<Self> {
        let shape_error = || Error::validation("nested adversary needs the family [L_1, ..., L_K, L_inf]");
        let thresholds: Vec<Option<usize>> = family
            .languages()
            .iter()
            .map(|l| match l.kind() {
                LanguageKind::UnaryThreshold(k) => Some(*k),
                _ => None,
            })
            .collect();
        let top = family.len() - 1;
        if !matches!(family.languages()[top].kind(), LanguageKind::UnaryAll) {
            return Err(shape_error());
        }
        for (i, k) in thresholds[..top].iter().enumerate() {
            if *k != Some(i + 1) {
                return Err(shape_error());
            }
        }
        Ok(Self {
            family,
            thresholds,
            top,
            max_len: 0,
            escalations: 0,
        })
    }

    fn word(&self, n: usize) -> String {
        self.family.alphabet().unary_word(n)
    }
}

impl Teacher for NestedAdversary<'_> {
    fn name(&self) -> String {
        format!("nested-adversary(K={})", self.top)
    }

    fn next_string(&mut self, current: Option<usize>) -> String {
        if self.max_len == 0 {
            self.max_len = 1;
            return self.word(1);
        }
        match current.and_then(|i| self.thresholds.get(i).copied().flatten()) {
            Some(k) => {
                if k + 1 > self.max_len {
                    self.max_len = k + 1;
                    self.escalations += 1;
                }
                self.word(k + 1)
            }
            None => self.word(1),
        }
    }

    fn settle(&self, final_hypothesis: Option<usize>, sample: &Sample) -> Settlement {
        let m = self.max_len;
        let candidates: Vec<usize> = match final_hypothesis {
            Some(i) if i == self.top => vec![m.wrapping_sub(1)],
            Some(_) => vec![self.top],
            None => vec![m.wrapping_sub(1), self.top],
        };
        // Only name completions that actually contain the transcript.
        let completion = candidates.into_iter().find(|&i| {
            i < self.family.len() && Some(i) != final_hypothesis && self.family.languages()[i].contains_sample(sample)
        });
        Settlement {
            target: completion.or(final_hypothesis),
            refuting_completion: completion.map(|index| RefutingCompletion {
                index,
                name: self.family.name(index).to_string(),
            }),
            escalations: Some(self.escalations),
            forced_error: false,
        }
    }
}

/// Runs the diagonalizing adversary against `learner` on the unary nested family.
pub fn nested_adversary(
    learner: &mut dyn Learner,
    family: &LanguageFamily,
    horizon: usize,
) -> Result<SimulationReport> {
    let mut teacher = NestedAdversary::new(family)?;
    run_simulation(&mut teacher, learner, horizon)
}

/// Presents the shared support `{x, xx, xxx, …}` of two probabilistic
/// languages in a fixed order and only picks the target after seeing the
/// learner's final guess, choosing the model it did not guess.
#[derive(Debug, Clone)]
pub struct SupportAdversary {
    canonical: bool,
    provisional_target: usize,
    emitted: usize,
    next_new: usize,
}

pub fn support_adversary(canonical: bool) -> SupportAdversary {
    SupportAdversary::with_label(canonical, 0)
}

impl SupportAdversary {
    /// `provisional_target` is the label announced before the run. It never
    /// influences the emitted strings.
    pub fn with_label(canonical: bool, provisional_target: usize) -> Self {
        Self {
            canonical,
            provisional_target,
            emitted: 0,
            next_new: 1,
        }
    }

    pub fn provisional_target(&self) -> usize {
        self.provisional_target
    }
}

impl Teacher for SupportAdversary {
    fn name(&self) -> String {
        if self.canonical {
            "support-adversary(canonical)".to_string()
        } else {
            "support-adversary(interleaved)".to_string()
        }
    }

    fn next_string(&mut self, _current: Option<usize>) -> String {
        self.emitted += 1;
        // interleaved order: x, xx, x, xxx, x, xxxx, ...
        let n = if !self.canonical && self.emitted % 2 == 1 && self.emitted > 1 {
            1
        } else {
            let n = self.next_new;
            self.next_new += 1;
            n
        };
        "x".repeat(n)
    }

    fn settle(&self, final_hypothesis: Option<usize>, _sample: &Sample) -> Settlement {
        let target = match final_hypothesis {
            Some(0) => 1,
            _ => 0,
        };
        Settlement {
            target: Some(target),
            refuting_completion: None,
            escalations: None,
            forced_error: true,
        }
    }
}
