//! Shared generators and brute-force oracles for the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use attrib_core::lang::{Alphabet, Dfa, Language, LanguageFamily};
use rand::seq::IndexedRandom;
use rand::Rng;

/// Every string over `symbols` of length at most `max_len`, shortest first.
pub fn universe(symbols: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut frontier = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &c in symbols {
                let mut s = w.clone();
                s.push(c);
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// A random family of distinct finite languages, returned with the raw
/// member sets the oracle works on.
pub fn random_finite_family<R: Rng>(
    rng: &mut R,
    max_symbols: usize,
    max_languages: usize,
    max_len: usize,
) -> (LanguageFamily, Vec<BTreeSet<String>>) {
    let symbols: Vec<char> = "abc".chars().take(rng.random_range(1..=max_symbols)).collect();
    let alphabet = Alphabet::new(symbols.iter().copied()).unwrap();
    let pool = universe(&symbols, max_len);
    let wanted = rng.random_range(1..=max_languages);
    let mut sets: Vec<BTreeSet<String>> = Vec::new();
    let mut attempts = 0;
    while sets.len() < wanted && attempts < 50 {
        attempts += 1;
        let size = rng.random_range(0..=pool.len().min(6));
        let set: BTreeSet<String> = pool.choose_multiple(rng, size).cloned().collect();
        if !sets.contains(&set) {
            sets.push(set);
        }
    }
    (family_from_sets(&alphabet, &sets), sets)
}

pub fn family_from_sets(alphabet: &Alphabet, sets: &[BTreeSet<String>]) -> LanguageFamily {
    let names = (0..sets.len()).map(|i| format!("F{i}")).collect();
    let langs = sets
        .iter()
        .map(|s| Language::finite(alphabet.clone(), s.iter().cloned()).unwrap())
        .collect();
    LanguageFamily::new(names, langs).unwrap()
}

/// All families of 1 to `max_size` distinct subsets of `pool`, in
/// lexicographic index order.
pub fn exhaustive_families(pool: &[String], max_size: usize) -> Vec<Vec<BTreeSet<String>>> {
    let subsets: Vec<BTreeSet<String>> = (0u32..1 << pool.len())
        .map(|mask| {
            pool.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, s)| s.clone())
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn extend(
        subsets: &[BTreeSet<String>],
        start: usize,
        max_size: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<BTreeSet<String>>>,
    ) {
        if !stack.is_empty() {
            out.push(stack.iter().map(|&i| subsets[i].clone()).collect());
        }
        if stack.len() == max_size {
            return;
        }
        for i in start..subsets.len() {
            stack.push(i);
            extend(subsets, i + 1, max_size, stack, out);
            stack.pop();
        }
    }
    extend(&subsets, 0, max_size, &mut stack, &mut out);
    out
}

/// Angluin's condition checked directly on member sets.
pub fn oracle_angluin_holds(sets: &[BTreeSet<String>], telltales: &[Vec<String>]) -> bool {
    if sets.len() != telltales.len() {
        return false;
    }
    for (i, own) in sets.iter().enumerate() {
        let t: BTreeSet<&String> = telltales[i].iter().collect();
        if !t.iter().all(|s| own.contains(*s)) {
            return false;
        }
        for (j, other) in sets.iter().enumerate() {
            let proper = other.is_subset(own) && other != own;
            if i != j && proper && t.iter().all(|s| other.contains(*s)) {
                return false;
            }
        }
    }
    true
}

/// A random complete DFA with `states` states over `symbols` symbols.
pub fn random_dfa<R: Rng>(rng: &mut R, states: usize, symbols: usize) -> Dfa {
    let transitions = (0..states)
        .map(|_| (0..symbols).map(|_| rng.random_range(0..states)).collect())
        .collect();
    let accepting: Vec<usize> = (0..states).filter(|_| rng.random_bool(0.5)).collect();
    Dfa::new(0, accepting, transitions, symbols).unwrap()
}

/// Members of `lang` up to `max_len`, by testing every string.
pub fn brute_members(lang: &Language, max_len: usize) -> BTreeSet<String> {
    universe(lang.alphabet().symbols(), max_len)
        .into_iter()
        .filter(|s| lang.contains(s).unwrap())
        .collect()
}
