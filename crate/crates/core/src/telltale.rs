//! Tell-tale sets for finite families and the learner they induce.
//!
//! For each `L_i` the constructed `T_i` holds one canonical witness from
//! `L_i − L_j` for every `L_j` strictly contained in `L_i`. Once `T_i` has
//! been observed, no proper subset of `L_i` in the family can explain the
//! data, so guessing `L_i` cannot over-generalize.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::Learner;
use crate::lang::{Language, LanguageFamily, Sample};

/// One finite witness set per family member, parallel to family order.
/// Each set is kept in length-lex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TellTaleAssignment {
    sets: Vec<Vec<String>>,
}

impl TellTaleAssignment {
    pub fn new(family: &LanguageFamily, mut sets: Vec<Vec<String>>) -> Self {
        for set in &mut sets {
            family.alphabet().sort_length_lex(set);
        }
        Self { sets }
    }

    pub fn sets(&self) -> &[Vec<String>] {
        &self.sets
    }

    pub fn get(&self, index: usize) -> &[String] {
        &self.sets[index]
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn to_document(&self, family: &LanguageFamily) -> Vec<TellTaleEntry> {
        family
            .names()
            .iter()
            .zip(&self.sets)
            .map(|(name, set)| TellTaleEntry {
                name: name.clone(),
                telltale: set.clone(),
            })
            .collect()
    }
}

/// One row of the tell-tale output document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TellTaleEntry {
    pub name: String,
    pub telltale: Vec<String>,
}

pub fn construct_telltales(family: &LanguageFamily) -> Result<TellTaleAssignment> {
    let langs = family.languages();
    let mut sets = Vec::with_capacity(langs.len());
    for (i, outer) in langs.iter().enumerate() {
        let mut set = Vec::new();
        for (j, inner) in langs.iter().enumerate() {
            if i == j || !inner.is_subset(outer)? {
                continue;
            }
            // inner ⊆ outer; distinctness makes the containment proper
            match outer.difference_witness(inner)? {
                Some(w) => set.push(w),
                None => {
                    return Err(Error::validation(format!(
                        "languages {:?} and {:?} are indistinct; no witness exists",
                        family.name(i),
                        family.name(j)
                    )))
                }
            }
        }
        sets.push(set);
    }
    Ok(TellTaleAssignment::new(family, sets))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum AngluinViolation {
    /// The assignment and family have different lengths.
    Shape { family: usize, telltales: usize },
    /// `T_i` contains a string outside `L_i`.
    NotInOwnLanguage { i: usize, string: String },
    /// `T_i ⊆ L_j` while `L_j ⊊ L_i`.
    Overgeneral { i: usize, j: usize },
}

impl AngluinViolation {
    /// The offending `(i, j)` pair, with `j = i` for own-language failures.
    pub fn pair(&self) -> Option<(usize, usize)> {
        match self {
            AngluinViolation::Shape { .. } => None,
            AngluinViolation::NotInOwnLanguage { i, .. } => Some((*i, *i)),
            AngluinViolation::Overgeneral { i, j } => Some((*i, *j)),
        }
    }
}

impl fmt::Display for AngluinViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AngluinViolation::Shape { family, telltales } => {
                write!(f, "{telltales} tell-tale sets for {family} languages")
            }
            AngluinViolation::NotInOwnLanguage { i, string } => {
                write!(f, "T_{i} contains {string:?} which is not in L_{i}")
            }
            AngluinViolation::Overgeneral { i, j } => {
                write!(f, "T_{i} is contained in L_{j}, a proper subset of L_{i}")
            }
        }
    }
}

/// Checks Angluin's condition: `T_i ⊆ L_i`, and `T_i ⊆ L_j` implies `L_j`
/// is not a proper subset of `L_i`. Returns the first violation found,
/// scanning `i` then `j` in family order.
pub fn verify_angluin_condition(
    family: &LanguageFamily,
    telltales: &TellTaleAssignment,
) -> Result<Option<AngluinViolation>> {
    if family.len() != telltales.len() {
        return Ok(Some(AngluinViolation::Shape {
            family: family.len(),
            telltales: telltales.len(),
        }));
    }
    let langs = family.languages();
    for (i, own) in langs.iter().enumerate() {
        let set = telltales.get(i);
        for s in set {
            if !own.contains(s)? {
                return Ok(Some(AngluinViolation::NotInOwnLanguage { i, string: s.clone() }));
            }
        }
        for (j, other) in langs.iter().enumerate() {
            if i == j {
                continue;
            }
            let covered = set
                .iter()
                .try_fold(true, |acc, s| Ok::<_, Error>(acc && other.contains(s)?))?;
            if covered && other.is_proper_subset(own)? {
                return Ok(Some(AngluinViolation::Overgeneral { i, j }));
            }
        }
    }
    Ok(None)
}

/// Learner for a finite family with verified tell-tale sets.
///
/// Guesses the lowest index `i` with `T_i ⊆ S ⊆ L_i`; failing that the
/// lowest index consistent with `S`; failing that no hypothesis.
#[derive(Debug, Clone)]
pub struct FiniteClassLearner<'a> {
    family: &'a LanguageFamily,
    telltales: &'a TellTaleAssignment,
}

pub fn make_finite_class_learner<'a>(
    family: &'a LanguageFamily,
    telltales: &'a TellTaleAssignment,
) -> FiniteClassLearner<'a> {
    FiniteClassLearner { family, telltales }
}

impl<'a> FiniteClassLearner<'a> {
    pub fn guess(&self, sample: &Sample) -> Option<usize> {
        let langs = self.family.languages();
        let consistent: Vec<bool> = langs.iter().map(|l| l.contains_sample(sample)).collect();
        (0..langs.len())
            .find(|&i| consistent[i] && self.telltales.get(i).iter().all(|s| sample.contains(s)))
            .or_else(|| consistent.iter().position(|&c| c))
    }
}

impl Learner for FiniteClassLearner<'_> {
    fn name(&self) -> String {
        "finite-class".to_string()
    }

    fn initial(&self) -> Option<usize> {
        self.guess(&Sample::new())
    }

    fn observe(&mut self, sample: &Sample, _latest: &str) -> Option<usize> {
        self.guess(sample)
    }

    fn hypothesis_count(&self) -> usize {
        self.family.len()
    }

    fn support(&self, index: usize) -> &Language {
        &self.family.languages()[index]
    }
}
