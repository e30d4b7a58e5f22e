use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lang::{Alphabet, Dfa, Language, LanguageKind};

/// An indexed collection of pairwise distinct languages over one alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageFamily {
    alphabet: Alphabet,
    names: Vec<String>,
    languages: Vec<Language>,
}

impl LanguageFamily {
    /// Validates names and checks every pair for distinctness.
    pub fn new(names: Vec<String>, languages: Vec<Language>) -> Result<Self> {
        let family = Self::assemble(names, languages)?;
        for i in 0..family.len() {
            for j in i + 1..family.len() {
                let (a, b) = (&family.languages[i], &family.languages[j]);
                if a.is_subset(b)? && b.is_subset(a)? {
                    return Err(Error::validation(format!(
                        "languages {:?} and {:?} are indistinct",
                        family.names[i], family.names[j]
                    )));
                }
            }
        }
        Ok(family)
    }

    /// Like [`LanguageFamily::new`] but skips the quadratic distinctness
    /// check; callers guarantee distinctness by construction.
    pub(crate) fn assemble(names: Vec<String>, languages: Vec<Language>) -> Result<Self> {
        if languages.is_empty() {
            return Err(Error::validation("family must contain at least one language"));
        }
        if names.len() != languages.len() {
            return Err(Error::input("names and languages must be parallel"));
        }
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != names.len() {
            let mut seen = BTreeSet::new();
            let dup = names.iter().find(|n| !seen.insert(*n)).expect("duplicate exists");
            return Err(Error::validation(format!("duplicate language name {dup:?}")));
        }
        let alphabet = languages[0].alphabet().clone();
        if let Some(pos) = languages.iter().position(|l| *l.alphabet() != alphabet) {
            return Err(Error::AlphabetMismatch(format!(
                "language {:?} uses a different alphabet",
                names[pos]
            )));
        }
        Ok(Self {
            alphabet,
            names,
            languages,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.languages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.languages.is_empty()
    }

    pub fn languages(&self) -> &[Language] {
        &self.languages
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn get(&self, index: usize) -> Option<&Language> {
        self.languages.get(index)
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Language)> {
        self.names.iter().map(String::as_str).zip(&self.languages)
    }

    /// Serializable form of this family.
    pub fn to_document(&self) -> FamilyDocument {
        let symbol = |i: usize| self.alphabet.symbols()[i].to_string();
        FamilyDocument {
            alphabet: self.alphabet.symbols().iter().map(char::to_string).collect(),
            languages: self
                .iter()
                .map(|(name, lang)| LanguageEntry {
                    name: name.to_string(),
                    spec: match lang.kind() {
                        LanguageKind::Finite(set) => {
                            let mut strings: Vec<String> = set.iter().cloned().collect();
                            self.alphabet.sort_length_lex(&mut strings);
                            LanguageSpec::Finite { strings }
                        }
                        LanguageKind::UnaryThreshold(k) => LanguageSpec::UnaryThreshold { k: *k },
                        LanguageKind::UnaryAll => LanguageSpec::UnaryAll,
                        LanguageKind::Regular(dfa) => LanguageSpec::Dfa {
                            states: dfa.state_count(),
                            start: dfa.start(),
                            accepting: dfa.accepting().iter().copied().collect(),
                            transitions: dfa.triples().map(|(f, s, t)| (f, symbol(s), t)).collect(),
                        },
                    },
                })
                .collect(),
        }
    }
}

/// On-disk family schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDocument {
    pub alphabet: Vec<String>,
    pub languages: Vec<LanguageEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageEntry {
    pub name: String,
    #[serde(flatten)]
    pub spec: LanguageSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LanguageSpec {
    Finite {
        strings: Vec<String>,
    },
    UnaryThreshold {
        k: usize,
    },
    UnaryAll,
    Dfa {
        states: usize,
        start: usize,
        accepting: Vec<usize>,
        transitions: Vec<(usize, String, usize)>,
    },
}

impl FamilyDocument {
    pub fn into_family(self) -> Result<LanguageFamily> {
        let mut symbols = Vec::with_capacity(self.alphabet.len());
        for s in &self.alphabet {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => symbols.push(c),
                _ => return Err(Error::input(format!("alphabet entry {s:?} is not a single character"))),
            }
        }
        let alphabet = Alphabet::new(symbols)?;
        let mut names = Vec::with_capacity(self.languages.len());
        let mut languages = Vec::with_capacity(self.languages.len());
        for entry in self.languages {
            let context = |e: Error| Error::input(format!("language {:?}: {e}", entry.name));
            let lang = match entry.spec {
                LanguageSpec::Finite { strings } => Language::finite(alphabet.clone(), strings),
                LanguageSpec::UnaryThreshold { k } => Language::unary_threshold(alphabet.clone(), k),
                LanguageSpec::UnaryAll => Language::unary_all(alphabet.clone()),
                LanguageSpec::Dfa {
                    states,
                    start,
                    accepting,
                    transitions,
                } => {
                    let mut triples = Vec::with_capacity(transitions.len());
                    for (from, sym, to) in transitions {
                        let mut chars = sym.chars();
                        let c = match (chars.next(), chars.next()) {
                            (Some(c), None) => c,
                            _ => return Err(context(Error::input(format!("bad symbol {sym:?}")))),
                        };
                        triples.push((from, c, to));
                    }
                    Dfa::from_triples(&alphabet, states, start, accepting, &triples)
                        .and_then(|dfa| Language::regular(alphabet.clone(), dfa))
                }
            }
            .map_err(context)?;
            names.push(entry.name);
            languages.push(lang);
        }
        LanguageFamily::new(names, languages)
    }
}

/// Parses and validates a JSON family document.
pub fn parse_family(document: &str) -> Result<LanguageFamily> {
    let doc: FamilyDocument = serde_json::from_str(document)?;
    doc.into_family()
}

/// `[L_1, …, L_max_k, L_inf]` over `{x}`, in that index order.
pub fn build_unary_nested_family(max_k: usize) -> Result<LanguageFamily> {
    if max_k < 1 {
        return Err(Error::input("max_k must be at least 1"));
    }
    let unary = Alphabet::unary();
    let mut names: Vec<String> = (1..=max_k).map(|k| format!("L_{k}")).collect();
    let mut languages = (1..=max_k)
        .map(|k| Language::unary_threshold(unary.clone(), k))
        .collect::<Result<Vec<_>>>()?;
    names.push("L_inf".to_string());
    languages.push(Language::unary_all(unary)?);
    LanguageFamily::assemble(names, languages)
}
