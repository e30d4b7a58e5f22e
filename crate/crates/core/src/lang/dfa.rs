use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::lang::Alphabet;

/// A complete deterministic automaton over the symbol indices of an [`Alphabet`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    start: usize,
    accepting: BTreeSet<usize>,
    /// `transitions[state][symbol]`
    transitions: Vec<Vec<usize>>,
}

impl Dfa {
    /// Builds a DFA from a dense transition table, checking that it is total.
    pub fn new(
        start: usize,
        accepting: impl IntoIterator<Item = usize>,
        transitions: Vec<Vec<usize>>,
        symbol_count: usize,
    ) -> Result<Self> {
        let state_count = transitions.len();
        if state_count == 0 {
            return Err(Error::input("dfa needs at least one state"));
        }
        if start >= state_count {
            return Err(Error::input(format!(
                "start state {start} out of range for {state_count} states"
            )));
        }
        let accepting: BTreeSet<usize> = accepting.into_iter().collect();
        if let Some(&bad) = accepting.iter().find(|&&q| q >= state_count) {
            return Err(Error::input(format!("accepting state {bad} out of range")));
        }
        for (state, row) in transitions.iter().enumerate() {
            if row.len() != symbol_count {
                return Err(Error::input(format!(
                    "state {state} has {} transitions, expected {symbol_count}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&q| q >= state_count) {
                return Err(Error::input(format!(
                    "transition from state {state} targets missing state {bad}"
                )));
            }
        }
        Ok(Self {
            start,
            accepting,
            transitions,
        })
    }

    /// Builds a DFA from `(from, symbol, to)` triples. Every `(state, symbol)`
    /// pair must appear exactly once.
    pub fn from_triples(
        alphabet: &Alphabet,
        state_count: usize,
        start: usize,
        accepting: impl IntoIterator<Item = usize>,
        triples: &[(usize, char, usize)],
    ) -> Result<Self> {
        let mut table: Vec<Vec<Option<usize>>> = vec![vec![None; alphabet.len()]; state_count];
        for &(from, symbol, to) in triples {
            let sym = alphabet.index_of(symbol).ok_or(Error::UnknownSymbol { symbol })?;
            let row = table
                .get_mut(from)
                .ok_or_else(|| Error::input(format!("transition from missing state {from}")))?;
            if row[sym].replace(to).is_some() {
                return Err(Error::input(format!(
                    "duplicate transition for state {from} on {symbol:?}"
                )));
            }
        }
        let mut transitions = Vec::with_capacity(state_count);
        for (state, row) in table.into_iter().enumerate() {
            let row: Option<Vec<usize>> = row.into_iter().collect();
            transitions.push(
                row.ok_or_else(|| Error::input(format!("state {state} is missing a transition (dfa must be total)")))?,
            );
        }
        Self::new(start, accepting, transitions, alphabet.len())
    }

    pub fn state_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting.contains(&state)
    }

    pub fn step(&self, state: usize, symbol: usize) -> usize {
        self.transitions[state][symbol]
    }

    pub fn symbol_count(&self) -> usize {
        self.transitions[0].len()
    }

    /// Transition triples in `(from, symbol index, to)` order.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.transitions
            .iter()
            .enumerate()
            .flat_map(|(from, row)| row.iter().enumerate().map(move |(sym, &to)| (from, sym, to)))
    }

    pub fn run(&self, word: &[usize]) -> bool {
        let end = word.iter().fold(self.start, |q, &a| self.step(q, a));
        self.is_accepting(end)
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut stack = vec![self.start];
        seen[self.start] = true;
        while let Some(q) = stack.pop() {
            for &r in &self.transitions[q] {
                if !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
        seen
    }

    fn coreachable(&self) -> Vec<bool> {
        let n = self.state_count();
        let mut reverse = vec![Vec::new(); n];
        for (from, _, to) in self.triples() {
            reverse[to].push(from);
        }
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = self.accepting.iter().copied().collect();
        for &q in &stack {
            seen[q] = true;
        }
        while let Some(q) = stack.pop() {
            for &p in &reverse[q] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// States that lie on some accepting path.
    pub(crate) fn useful_states(&self) -> Vec<bool> {
        self.reachable()
            .into_iter()
            .zip(self.coreachable())
            .map(|(r, c)| r && c)
            .collect()
    }

    /// True iff the accepted language is infinite: some cycle lies on an
    /// accepting path.
    pub fn is_infinite(&self) -> bool {
        let useful = self.useful_states();
        // Iterative DFS cycle detection restricted to useful states.
        let n = self.state_count();
        let mut color = vec![0u8; n];
        for root in 0..n {
            if !useful[root] || color[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            color[root] = 1;
            while let Some(&mut (q, ref mut next)) = stack.last_mut() {
                if *next == self.symbol_count() {
                    color[q] = 2;
                    stack.pop();
                    continue;
                }
                let r = self.transitions[q][*next];
                *next += 1;
                if !useful[r] {
                    continue;
                }
                match color[r] {
                    0 => {
                        color[r] = 1;
                        stack.push((r, 0));
                    }
                    1 => return true,
                    _ => {}
                }
            }
        }
        false
    }

    /// Length-lex smallest word accepted by `self` and rejected by `other`,
    /// found by breadth-first search over the product automaton. Symbols are
    /// expanded in alphabet order, so the first product state discovered in
    /// the difference carries the smallest witness.
    pub fn difference_witness(&self, other: &Dfa) -> Option<Vec<usize>> {
        let symbols = self.symbol_count();
        let m = other.state_count();
        let index = |p: usize, q: usize| p * m + q;
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.state_count() * m];
        let mut seen = vec![false; self.state_count() * m];
        let origin = (self.start, other.start);
        let mut queue = VecDeque::from([origin]);
        seen[index(origin.0, origin.1)] = true;
        while let Some((p, q)) = queue.pop_front() {
            if self.is_accepting(p) && !other.is_accepting(q) {
                let mut word = Vec::new();
                let mut at = index(p, q);
                while let Some((prev, sym)) = parent[at] {
                    word.push(sym);
                    at = prev;
                }
                word.reverse();
                return Some(word);
            }
            for sym in 0..symbols {
                let next = (self.step(p, sym), other.step(q, sym));
                let at = index(next.0, next.1);
                if !seen[at] {
                    seen[at] = true;
                    parent[at] = Some((index(p, q), sym));
                    queue.push_back(next);
                }
            }
        }
        None
    }
}
