//! Deterministic formal languages with exact membership, canonical
//! length-lex enumeration, and exact subset and difference procedures.
//!
//! Four kinds are supported: explicit finite sets, the unary thresholds
//! `L_k = { x^n : 0 < n <= k }`, the unary language of all non-empty strings,
//! and regular languages given by a complete DFA. The unary kinds never
//! contain the empty string.

mod dfa;
mod family;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

pub use dfa::Dfa;
pub use family::{build_unary_nested_family, parse_family, FamilyDocument, LanguageFamily};

use crate::error::{Error, Result};

/// An ordered set of distinct symbols. The order fixes the canonical
/// length-lex order of strings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::input("alphabet must not be empty"));
        }
        let distinct: BTreeSet<char> = symbols.iter().copied().collect();
        if distinct.len() != symbols.len() {
            return Err(Error::input("alphabet contains duplicate symbols"));
        }
        Ok(Self { symbols })
    }

    /// The one-letter alphabet `{x}`.
    pub fn unary() -> Self {
        Self { symbols: vec!['x'] }
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn is_unary(&self) -> bool {
        self.symbols.len() == 1
    }

    pub fn index_of(&self, symbol: char) -> Option<usize> {
        self.symbols.iter().position(|&c| c == symbol)
    }

    /// Maps a string to symbol indices.
    pub fn encode(&self, s: &str) -> Result<Vec<usize>> {
        s.chars()
            .map(|c| self.index_of(c).ok_or(Error::UnknownSymbol { symbol: c }))
            .collect()
    }

    pub fn decode(&self, word: &[usize]) -> String {
        word.iter().map(|&i| self.symbols[i]).collect()
    }

    /// Checks every character and returns the length in symbols.
    pub fn validate(&self, s: &str) -> Result<usize> {
        let mut len = 0;
        for c in s.chars() {
            if self.index_of(c).is_none() {
                return Err(Error::UnknownSymbol { symbol: c });
            }
            len += 1;
        }
        Ok(len)
    }

    /// Length-lex comparison: shorter first, then lexicographic by symbol order.
    pub fn cmp_length_lex(&self, a: &str, b: &str) -> Ordering {
        let key = |s: &str| {
            s.chars()
                .map(|c| self.index_of(c).unwrap_or(usize::MAX))
                .collect::<Vec<_>>()
        };
        a.chars()
            .count()
            .cmp(&b.chars().count())
            .then_with(|| key(a).cmp(&key(b)))
    }

    /// Sorts strings into length-lex order and removes duplicates.
    pub fn sort_length_lex(&self, strings: &mut Vec<String>) {
        strings.sort_by(|a, b| self.cmp_length_lex(a, b));
        strings.dedup();
    }

    /// All strings of exactly `len` symbols, in lexicographic order.
    pub fn words_of_length(&self, len: usize) -> impl Iterator<Item = String> + '_ {
        let base = self.symbols.len();
        let mut digits = Some(vec![0usize; len]);
        std::iter::from_fn(move || {
            let current = digits.as_mut()?;
            let word: String = current.iter().map(|&i| self.symbols[i]).collect();
            // odometer increment, most significant digit first
            let mut pos = current.len();
            loop {
                if pos == 0 {
                    digits = None;
                    break;
                }
                pos -= 1;
                current[pos] += 1;
                if current[pos] < base {
                    break;
                }
                current[pos] = 0;
            }
            Some(word)
        })
    }

    /// The unary string of `n` copies of the single symbol.
    pub fn unary_word(&self, n: usize) -> String {
        std::iter::repeat_n(self.symbols[0], n).collect()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LanguageKind {
    Finite(BTreeSet<String>),
    /// `{ x^n : 0 < n <= k }`
    UnaryThreshold(usize),
    /// All non-empty unary strings.
    UnaryAll,
    Regular(Dfa),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Language {
    alphabet: Alphabet,
    kind: LanguageKind,
}

impl Language {
    pub fn finite<I, S>(alphabet: Alphabet, strings: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let strings: BTreeSet<String> = strings.into_iter().map(Into::into).collect();
        for s in &strings {
            alphabet.validate(s)?;
        }
        Ok(Self {
            alphabet,
            kind: LanguageKind::Finite(strings),
        })
    }

    pub fn unary_threshold(alphabet: Alphabet, k: usize) -> Result<Self> {
        if !alphabet.is_unary() {
            return Err(Error::input("unary_threshold requires a one-symbol alphabet"));
        }
        if k == 0 {
            return Err(Error::input("unary_threshold needs k >= 1"));
        }
        Ok(Self {
            alphabet,
            kind: LanguageKind::UnaryThreshold(k),
        })
    }

    pub fn unary_all(alphabet: Alphabet) -> Result<Self> {
        if !alphabet.is_unary() {
            return Err(Error::input("unary_all requires a one-symbol alphabet"));
        }
        Ok(Self {
            alphabet,
            kind: LanguageKind::UnaryAll,
        })
    }

    pub fn regular(alphabet: Alphabet, dfa: Dfa) -> Result<Self> {
        if dfa.symbol_count() != alphabet.len() {
            return Err(Error::AlphabetMismatch(format!(
                "dfa has {} symbols, alphabet has {}",
                dfa.symbol_count(),
                alphabet.len()
            )));
        }
        Ok(Self {
            alphabet,
            kind: LanguageKind::Regular(dfa),
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn kind(&self) -> &LanguageKind {
        &self.kind
    }

    /// Exact membership test.
    pub fn contains(&self, s: &str) -> Result<bool> {
        let len = self.alphabet.validate(s)?;
        Ok(self.contains_valid(s, len))
    }

    /// Membership for a string already known to be over the alphabet.
    fn contains_valid(&self, s: &str, len: usize) -> bool {
        match &self.kind {
            LanguageKind::Finite(set) => set.contains(s),
            LanguageKind::UnaryThreshold(k) => len > 0 && len <= *k,
            LanguageKind::UnaryAll => len > 0,
            LanguageKind::Regular(dfa) => {
                let word: Vec<usize> = s
                    .chars()
                    .map(|c| self.alphabet.index_of(c).expect("validated"))
                    .collect();
                dfa.run(&word)
            }
        }
    }

    /// True iff every string of the sample is a member.
    pub fn contains_sample(&self, sample: &Sample) -> bool {
        if sample.is_empty() {
            return true;
        }
        if !sample.symbols.iter().all(|&c| self.alphabet.index_of(c).is_some()) {
            return false;
        }
        match &self.kind {
            LanguageKind::UnaryThreshold(k) => sample.min_len >= 1 && sample.max_len <= *k,
            LanguageKind::UnaryAll => sample.min_len >= 1,
            LanguageKind::Finite(set) => sample.len() <= set.len() && sample.strings.iter().all(|s| set.contains(s)),
            LanguageKind::Regular(_) => sample.strings.iter().all(|s| self.contains_valid(s, s.chars().count())),
        }
    }

    pub fn is_finite(&self) -> bool {
        match &self.kind {
            LanguageKind::Finite(_) | LanguageKind::UnaryThreshold(_) => true,
            LanguageKind::UnaryAll => false,
            LanguageKind::Regular(dfa) => !dfa.is_infinite(),
        }
    }

    pub fn is_empty(&self) -> bool {
        match &self.kind {
            LanguageKind::Finite(set) => set.is_empty(),
            LanguageKind::UnaryThreshold(_) | LanguageKind::UnaryAll => false,
            LanguageKind::Regular(dfa) => !dfa.useful_states()[dfa.start()],
        }
    }

    /// All members of length at most `max_len`, in length-lex order.
    pub fn enumerate_up_to(&self, max_len: usize) -> Vec<String> {
        match &self.kind {
            LanguageKind::Finite(set) => {
                let mut out: Vec<String> = set.iter().filter(|s| s.chars().count() <= max_len).cloned().collect();
                self.alphabet.sort_length_lex(&mut out);
                out
            }
            LanguageKind::UnaryThreshold(k) => (1..=max_len.min(*k)).map(|n| self.alphabet.unary_word(n)).collect(),
            LanguageKind::UnaryAll => (1..=max_len).map(|n| self.alphabet.unary_word(n)).collect(),
            LanguageKind::Regular(_) => (0..=max_len).flat_map(|n| self.members_of_length(n)).collect(),
        }
    }

    /// Members of exactly `len` symbols in lexicographic order.
    pub fn members_of_length(&self, len: usize) -> Vec<String> {
        match &self.kind {
            LanguageKind::Regular(dfa) => {
                let mut out = Vec::new();
                let useful = dfa.useful_states();
                let mut word = Vec::with_capacity(len);
                collect_words(dfa, &useful, dfa.start(), len, &mut word, &mut |w| {
                    out.push(self.alphabet.decode(w))
                });
                out
            }
            LanguageKind::Finite(set) => {
                let mut out: Vec<String> = set.iter().filter(|s| s.chars().count() == len).cloned().collect();
                self.alphabet.sort_length_lex(&mut out);
                out
            }
            _ => {
                let word = self.alphabet.unary_word(len);
                if self.contains_valid(&word, len) {
                    vec![word]
                } else {
                    Vec::new()
                }
            }
        }
    }

    /// Longest member length, or `None` when the language is infinite or empty.
    pub fn max_member_len(&self) -> Option<usize> {
        match &self.kind {
            LanguageKind::Finite(set) => set.iter().map(|s| s.chars().count()).max(),
            LanguageKind::UnaryThreshold(k) => Some(*k),
            LanguageKind::UnaryAll => None,
            LanguageKind::Regular(dfa) => {
                if dfa.is_infinite() || self.is_empty() {
                    return None;
                }
                // a finite regular language has no member longer than the state count
                (0..dfa.state_count())
                    .rev()
                    .find(|&n| !self.members_of_length(n).is_empty())
            }
        }
    }

    /// Equivalent complete DFA over the same alphabet.
    pub fn to_dfa(&self) -> Dfa {
        let symbols = self.alphabet.len();
        match &self.kind {
            LanguageKind::Regular(dfa) => dfa.clone(),
            LanguageKind::UnaryThreshold(k) => {
                // states 0..=k count symbols read, k+1 is the sink
                let transitions = (0..=k + 1).map(|q| vec![(q + 1).min(k + 1)]).collect();
                Dfa::new(0, 1..=*k, transitions, 1).expect("well-formed")
            }
            LanguageKind::UnaryAll => Dfa::new(0, [1], vec![vec![1], vec![1]], 1).expect("well-formed"),
            LanguageKind::Finite(set) => {
                // trie with a shared sink at index 0
                let mut transitions: Vec<Vec<usize>> = vec![vec![0; symbols], vec![0; symbols]];
                let mut accepting = Vec::new();
                for s in set {
                    let mut q = 1;
                    for c in s.chars() {
                        let sym = self.alphabet.index_of(c).expect("validated at construction");
                        if transitions[q][sym] == 0 {
                            transitions.push(vec![0; symbols]);
                            let fresh = transitions.len() - 1;
                            transitions[q][sym] = fresh;
                        }
                        q = transitions[q][sym];
                    }
                    accepting.push(q);
                }
                Dfa::new(1, accepting, transitions, symbols).expect("well-formed")
            }
        }
    }

    fn same_alphabet(&self, other: &Language) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "{} vs {}",
                self.alphabet, other.alphabet
            )));
        }
        Ok(())
    }

    /// Decides `self ⊆ other` exactly.
    pub fn is_subset(&self, other: &Language) -> Result<bool> {
        Ok(self.difference_witness(other)?.is_none())
    }

    /// Decides `self ⊊ other` exactly.
    pub fn is_proper_subset(&self, other: &Language) -> Result<bool> {
        Ok(self.is_subset(other)? && !other.is_subset(self)?)
    }

    /// The length-lex smallest string in `self − other`, if any.
    pub fn difference_witness(&self, other: &Language) -> Result<Option<String>> {
        use LanguageKind::*;
        self.same_alphabet(other)?;
        let unary = |n: usize| Some(self.alphabet.unary_word(n));
        let witness = match (&self.kind, &other.kind) {
            (Finite(set), _) => {
                let mut members: Vec<String> = set.iter().cloned().collect();
                self.alphabet.sort_length_lex(&mut members);
                members
                    .into_iter()
                    .find(|s| !other.contains_valid(s, s.chars().count()))
            }
            (UnaryThreshold(a), UnaryThreshold(b)) => (a > b).then(|| unary(b + 1)).flatten(),
            (UnaryThreshold(_), UnaryAll) | (UnaryAll, UnaryAll) => None,
            (UnaryAll, UnaryThreshold(b)) => unary(b + 1),
            (UnaryThreshold(_) | UnaryAll, Finite(set)) => {
                let limit = match &self.kind {
                    UnaryThreshold(k) => *k,
                    _ => set.iter().map(|s| s.chars().count()).max().unwrap_or(0) + 1,
                };
                (1..=limit)
                    .map(|n| self.alphabet.unary_word(n))
                    .find(|w| !set.contains(w))
            }
            _ => self
                .to_dfa()
                .difference_witness(&other.to_dfa())
                .map(|w| self.alphabet.decode(&w)),
        };
        Ok(witness)
    }

    /// Length bound under which comparing enumerations of `self` and `other`
    /// decides their subset relation exactly.
    pub fn exactness_bound(&self, other: &Language) -> usize {
        use LanguageKind::*;
        let own = |l: &Language| match &l.kind {
            Finite(set) => set.iter().map(|s| s.chars().count()).max().unwrap_or(0),
            UnaryThreshold(k) => *k,
            UnaryAll => 0,
            Regular(_) => 0,
        };
        match (&self.kind, &other.kind) {
            (Regular(_), _) | (_, Regular(_)) => self.to_dfa().state_count() * other.to_dfa().state_count(),
            _ => own(self).max(own(other)) + 1,
        }
    }

    /// Short human-readable description.
    pub fn describe(&self) -> String {
        match &self.kind {
            LanguageKind::Finite(set) => {
                let mut members: Vec<String> = set.iter().cloned().collect();
                self.alphabet.sort_length_lex(&mut members);
                let shown: Vec<String> = members.iter().map(|s| format!("{s:?}")).collect();
                format!("{{{}}}", shown.join(", "))
            }
            LanguageKind::UnaryThreshold(k) => format!("L_{k}"),
            LanguageKind::UnaryAll => "L_inf".to_string(),
            LanguageKind::Regular(dfa) => format!("dfa({} states)", dfa.state_count()),
        }
    }
}

fn collect_words(
    dfa: &Dfa,
    useful: &[bool],
    state: usize,
    remaining: usize,
    word: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if !useful[state] {
        return;
    }
    if remaining == 0 {
        if dfa.is_accepting(state) {
            emit(word);
        }
        return;
    }
    for sym in 0..dfa.symbol_count() {
        word.push(sym);
        collect_words(dfa, useful, dfa.step(state, sym), remaining - 1, word, emit);
        word.pop();
    }
}

/// The set of distinct strings observed so far, with cached length extremes
/// so that unary membership of the whole sample is constant time.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Sample {
    strings: BTreeSet<String>,
    symbols: BTreeSet<char>,
    min_len: usize,
    max_len: usize,
}

impl Sample {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a string; returns `true` if it was not already present.
    pub fn insert(&mut self, s: &str) -> bool {
        if self.strings.contains(s) {
            return false;
        }
        let len = s.chars().count();
        if self.strings.is_empty() {
            self.min_len = len;
            self.max_len = len;
        } else {
            self.min_len = self.min_len.min(len);
            self.max_len = self.max_len.max(len);
        }
        self.symbols.extend(s.chars());
        self.strings.insert(s.to_string());
        true
    }

    pub fn contains(&self, s: &str) -> bool {
        self.strings.contains(s)
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn max_len(&self) -> Option<usize> {
        (!self.is_empty()).then_some(self.max_len)
    }

    pub fn iter(&self) -> impl Iterator<Item = &String> {
        self.strings.iter()
    }
}

impl<S: AsRef<str>> FromIterator<S> for Sample {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let mut sample = Sample::new();
        for s in iter {
            sample.insert(s.as_ref());
        }
        sample
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new("ab".chars()).unwrap()
    }

    fn l(k: usize) -> Language {
        Language::unary_threshold(Alphabet::unary(), k).unwrap()
    }

    fn l_inf() -> Language {
        Language::unary_all(Alphabet::unary()).unwrap()
    }

    fn even_a() -> Language {
        let dfa = Dfa::from_triples(&ab(), 2, 0, [0], &[(0, 'a', 1), (0, 'b', 0), (1, 'a', 0), (1, 'b', 1)]).unwrap();
        Language::regular(ab(), dfa).unwrap()
    }

    fn all_ab() -> Language {
        Language::regular(ab(), Dfa::new(0, [0], vec![vec![0, 0]], 2).unwrap()).unwrap()
    }

    #[test]
    fn threshold_membership() {
        assert!(l(5).contains("xxx").unwrap());
        assert!(!l(5).contains("xxxxxx").unwrap());
        assert!(!l(5).contains("").unwrap());
    }

    #[test]
    fn unary_all_accepts_long_strings_but_not_empty() {
        assert!(l_inf().contains(&"x".repeat(42)).unwrap());
        assert!(!l_inf().contains("").unwrap());
    }

    #[test]
    fn foreign_symbol_is_an_input_error() {
        assert!(matches!(l(3).contains("xy"), Err(Error::UnknownSymbol { symbol: 'y' })));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(l(3).enumerate_up_to(10), vec!["x", "xx", "xxx"]);
        let fin = Language::finite(ab(), ["b", "a"]).unwrap();
        assert_eq!(fin.enumerate_up_to(1), vec!["a", "b"]);
        assert_eq!(even_a().enumerate_up_to(2), vec!["", "b", "aa", "bb"]);
        assert!(l_inf().enumerate_up_to(0).is_empty());
    }

    #[test]
    fn subset_examples() {
        assert!(l(3).is_subset(&l(5)).unwrap());
        assert!(!l(5).is_subset(&l(3)).unwrap());
        for k in 1..20 {
            assert!(l(k).is_proper_subset(&l_inf()).unwrap());
        }
        assert!(even_a().is_subset(&all_ab()).unwrap());
        assert!(!all_ab().is_subset(&even_a()).unwrap());
    }

    #[test]
    fn difference_examples() {
        assert_eq!(l(5).difference_witness(&l(3)).unwrap().as_deref(), Some("xxxx"));
        assert_eq!(l(3).difference_witness(&l(5)).unwrap(), None);
        let abc = Alphabet::new("abc".chars()).unwrap();
        let big = Language::finite(abc.clone(), ["a", "b", "c"]).unwrap();
        let small = Language::finite(abc, ["a"]).unwrap();
        assert_eq!(big.difference_witness(&small).unwrap().as_deref(), Some("b"));
        assert_eq!(all_ab().difference_witness(&even_a()).unwrap().as_deref(), Some("a"));
    }

    #[test]
    fn mixed_unary_and_finite() {
        let fin = Language::finite(Alphabet::unary(), ["x", "xx", "xxxx"]).unwrap();
        assert_eq!(l(4).difference_witness(&fin).unwrap().as_deref(), Some("xxx"));
        assert_eq!(l_inf().difference_witness(&fin).unwrap().as_deref(), Some("xxx"));
        assert_eq!(fin.difference_witness(&l(2)).unwrap().as_deref(), Some("xxxx"));
        assert!(l(2).is_subset(&fin).unwrap());
    }

    #[test]
    fn alphabet_mismatch_is_rejected() {
        assert!(matches!(l(3).is_subset(&even_a()), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn dfa_conversions_agree_with_direct_membership() {
        let fin = Language::finite(ab(), ["", "ab", "b", "bba"]).unwrap();
        for lang in [l(4), l_inf(), fin] {
            let as_regular = Language::regular(lang.alphabet().clone(), lang.to_dfa()).unwrap();
            for n in 0..7 {
                for w in lang.alphabet().words_of_length(n) {
                    assert_eq!(lang.contains(&w).unwrap(), as_regular.contains(&w).unwrap(), "{w:?}");
                }
            }
        }
    }

    #[test]
    fn finiteness() {
        assert!(l(3).is_finite());
        assert!(!l_inf().is_finite());
        assert!(!even_a().is_finite());
        assert_eq!(even_a().max_member_len(), None);
        let fin = Language::finite(ab(), ["abab"]).unwrap();
        let reg = Language::regular(ab(), fin.to_dfa()).unwrap();
        assert!(reg.is_finite());
        assert_eq!(reg.max_member_len(), Some(4));
    }

    #[test]
    fn sample_membership_uses_length_extremes() {
        let s: Sample = ["x", "xxx"].into_iter().collect();
        assert!(l(3).contains_sample(&s));
        assert!(!l(2).contains_sample(&s));
        assert!(l_inf().contains_sample(&s));
        assert!(l(1).contains_sample(&Sample::new()));
        let empty_word: Sample = [""].into_iter().collect();
        assert!(!l_inf().contains_sample(&empty_word));
    }

    #[test]
    fn words_of_length_is_lexicographic() {
        let words: Vec<String> = ab().words_of_length(2).collect();
        assert_eq!(words, vec!["aa", "ab", "ba", "bb"]);
        assert_eq!(ab().words_of_length(0).collect::<Vec<_>>(), vec![""]);
    }
}
