//! Free-group word arithmetic over two disjoint symbol namespaces.
//!
//! Constants are the generators of the group H where concrete elements live;
//! variables generate the group F where equations are written. A
//! [`Substitution`] binds variables only, so a constant can never be
//! captured even when both namespaces use the same spelling.
//!
//! Words are kept freely reduced at all times; raw letter sequences are
//! reduced at construction.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("invalid symbol name {0:?} (want [A-Za-z][A-Za-z0-9_]*)")]
    InvalidName(String),
    #[error("malformed token {0:?}")]
    MalformedToken(String),
}

/// Namespace tag. Constants sort before variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    Constant,
    Variable,
}

/// A named generator of H (constant) or F (variable).
///
/// Equal names in different namespaces are distinct symbols. Ordering is
/// (kind, name lexicographic); this fixed order underlies every canonical
/// choice in the crate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    kind: SymbolKind,
    name: Arc<str>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Symbol {
    pub fn new(kind: SymbolKind, name: &str) -> Result<Symbol, WordError> {
        if !valid_name(name) {
            return Err(WordError::InvalidName(name.to_string()));
        }
        Ok(Symbol { kind, name: Arc::from(name) })
    }

    /// Constant symbol; panics on an invalid name (internal use).
    pub fn constant(name: &str) -> Symbol {
        Symbol::new(SymbolKind::Constant, name).expect("valid constant name")
    }

    /// Variable symbol; panics on an invalid name (internal use).
    pub fn variable(name: &str) -> Symbol {
        Symbol::new(SymbolKind::Variable, name).expect("valid variable name")
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_variable(&self) -> bool {
        self.kind == SymbolKind::Variable
    }
}

/// Sign of a letter; `Plus` sorts before `Minus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// One signed symbol occurrence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub symbol: Symbol,
    pub sign: Sign,
}

impl Letter {
    pub fn new(symbol: Symbol, sign: Sign) -> Letter {
        Letter { symbol, sign }
    }

    pub fn inverse(&self) -> Letter {
        Letter { symbol: self.symbol.clone(), sign: self.sign.flip() }
    }

    pub fn is_inverse_of(&self, other: &Letter) -> bool {
        self.symbol == other.symbol && self.sign != other.sign
    }
}

/// A freely reduced word. The reduced invariant holds for every value of
/// this type; constructors reduce their input.
///
/// `Ord` is shortlex: length first, then letterwise by the fixed symbol
/// order. This is "the word order" used whenever a least representative is
/// chosen.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Word {
        Word { letters: Vec::new() }
    }

    pub fn from_letter(letter: Letter) -> Word {
        Word { letters: vec![letter] }
    }

    /// Builds a word from a raw letter sequence, freely reducing it.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(iter: I) -> Word {
        let mut stack: Vec<Letter> = Vec::new();
        for letter in iter {
            match stack.last() {
                Some(top) if top.is_inverse_of(&letter) => {
                    stack.pop();
                }
                _ => stack.push(letter),
            }
        }
        Word { letters: stack }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(self.letters.iter().chain(other.letters.iter()).cloned())
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(Letter::inverse).collect() }
    }

    pub fn pow(&self, exponent: i64) -> Word {
        let base = if exponent < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..exponent.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// `u^-1 v^-1 u v`.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.inverse().concat(&v.inverse()).concat(u).concat(v)
    }

    pub fn subword(&self, start: usize, end: usize) -> Word {
        Word { letters: self.letters[start..end].to_vec() }
    }

    /// Splits into (core, conjugator) with `self = conjugator^-1 * core *
    /// conjugator` exactly and core cyclically reduced; the conjugator is
    /// the shortest word doing this.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let mut lo = 0;
        let mut hi = self.letters.len();
        while hi - lo >= 2 && self.letters[lo].is_inverse_of(&self.letters[hi - 1]) {
            lo += 1;
            hi -= 1;
        }
        let core = self.subword(lo, hi);
        // self = p * core * p^-1 where p is the stripped prefix, so the
        // conjugator is p^-1, i.e. the stripped suffix.
        let conjugator = self.subword(hi, self.letters.len());
        (core, conjugator)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(first), Some(last)) => self.len() == 1 || !first.is_inverse_of(last),
            _ => true,
        }
    }

    /// Exponent sum per symbol. All zero iff the word lies in the commutator
    /// subgroup; all even iff it lies in the subgroup generated by squares.
    pub fn exponent_vector(&self) -> BTreeMap<Symbol, i64> {
        let mut sums = BTreeMap::new();
        for letter in &self.letters {
            let delta = match letter.sign {
                Sign::Plus => 1,
                Sign::Minus => -1,
            };
            *sums.entry(letter.symbol.clone()).or_insert(0) += delta;
        }
        sums
    }

    pub fn in_commutator_subgroup(&self) -> bool {
        self.exponent_vector().values().all(|&s| s == 0)
    }

    pub fn in_square_subgroup(&self) -> bool {
        self.exponent_vector().values().all(|&s| s % 2 == 0)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.letters.iter().map(|l| &l.symbol)
    }

    /// Parses the text format: space-separated tokens, each an identifier
    /// optionally raised to an integer power (`a`, `b^-1`, `c^3`); the lone
    /// token `1` is the empty word. Every identifier gets namespace `kind`.
    pub fn parse(text: &str, kind: SymbolKind) -> Result<Word, WordError> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (name, exponent) = match token.split_once('^') {
                Some((name, exp)) => {
                    let exp: i64 = exp
                        .parse()
                        .map_err(|_| WordError::MalformedToken(token.to_string()))?;
                    (name, exp)
                }
                None => (token, 1),
            };
            let symbol = Symbol::new(kind, name)
                .map_err(|_| WordError::MalformedToken(token.to_string()))?;
            let sign = if exponent >= 0 { Sign::Plus } else { Sign::Minus };
            for _ in 0..exponent.unsigned_abs() {
                letters.push(Letter::new(symbol.clone(), sign));
            }
        }
        Ok(Word::from_letters(letters))
    }

    pub fn parse_constant(text: &str) -> Result<Word, WordError> {
        Word::parse(text, SymbolKind::Constant)
    }

    pub fn parse_variable(text: &str) -> Result<Word, WordError> {
        Word::parse(text, SymbolKind::Variable)
    }
}

impl fmt::Display for Word {
    /// Run-collapsed text format, losslessly parseable. The empty word
    /// prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        let mut first = true;
        while i < self.letters.len() {
            let letter = &self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == *letter {
                run += 1;
            }
            let exponent = match letter.sign {
                Sign::Plus => run as i64,
                Sign::Minus => -(run as i64),
            };
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if exponent == 1 {
                write!(f, "{}", letter.symbol.name())?;
            } else {
                write!(f, "{}^{}", letter.symbol.name(), exponent)?;
            }
            i += run;
        }
        Ok(())
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Word) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

/// Rotation class of a cyclically reduced word, stored at its
/// lexicographically least rotation so equality is letter identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord {
    core: Word,
}

impl CyclicWord {
    /// Cyclically reduces `w` (discarding the conjugator) and canonicalizes
    /// the rotation.
    pub fn from_word(w: &Word) -> CyclicWord {
        let (core, _) = w.cyclic_reduce();
        CyclicWord::from_cyclically_reduced(core)
    }

    pub fn from_cyclically_reduced(core: Word) -> CyclicWord {
        debug_assert!(core.is_cyclically_reduced());
        if core.is_empty() {
            return CyclicWord { core };
        }
        let best = (0..core.len())
            .map(|i| rotate_letters(core.letters(), i))
            .min()
            .expect("nonempty");
        CyclicWord { core: Word { letters: best } }
    }

    /// The canonical rotation as an ordinary word.
    pub fn canonical(&self) -> &Word {
        &self.core
    }

    pub fn len(&self) -> usize {
        self.core.len()
    }

    pub fn is_empty(&self) -> bool {
        self.core.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        self.core.letters()
    }

    /// Ordinary word reading the cycle from position `offset` of the
    /// canonical rotation.
    pub fn rotation(&self, offset: usize) -> Word {
        Word { letters: rotate_letters(self.core.letters(), offset % self.core.len().max(1)) }
    }

    pub fn inverse(&self) -> CyclicWord {
        CyclicWord::from_cyclically_reduced(self.core.inverse())
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.core.fmt(f)
    }
}

fn rotate_letters(letters: &[Letter], offset: usize) -> Vec<Letter> {
    let mut out = Vec::with_capacity(letters.len());
    out.extend_from_slice(&letters[offset..]);
    out.extend_from_slice(&letters[..offset]);
    out
}

/// Finitely supported map variable -> Word, acting on words as the induced
/// homomorphism (constants and unmapped variables are fixed).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Substitution {
    map: BTreeMap<Symbol, Word>,
}

impl Substitution {
    pub fn identity() -> Substitution {
        Substitution::default()
    }

    pub fn bind(mut self, var: Symbol, image: Word) -> Substitution {
        assert!(var.is_variable(), "substitutions bind variables only");
        self.map.insert(var, image);
        self
    }

    pub fn from_pairs<I: IntoIterator<Item = (Symbol, Word)>>(pairs: I) -> Substitution {
        pairs
            .into_iter()
            .fold(Substitution::identity(), |s, (v, w)| s.bind(v, w))
    }

    pub fn get(&self, var: &Symbol) -> Option<&Word> {
        self.map.get(var)
    }

    pub fn image_of(&self, var: &Symbol) -> Word {
        match self.map.get(var) {
            Some(w) => w.clone(),
            None => Word::from_letter(Letter::new(var.clone(), Sign::Plus)),
        }
    }

    pub fn support(&self) -> impl Iterator<Item = &Symbol> {
        self.map.keys()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Symbol, &Word)> {
        self.map.iter()
    }

    pub fn is_identity(&self) -> bool {
        self.map
            .iter()
            .all(|(v, w)| w.letters() == [Letter::new(v.clone(), Sign::Plus)])
    }

    pub fn apply(&self, w: &Word) -> Word {
        let mut letters = Vec::new();
        for letter in w.letters() {
            match self.map.get(&letter.symbol) {
                Some(image) => {
                    let image = match letter.sign {
                        Sign::Plus => image.clone(),
                        Sign::Minus => image.inverse(),
                    };
                    letters.extend(image.letters().iter().cloned());
                }
                None => letters.push(letter.clone()),
            }
        }
        Word::from_letters(letters)
    }

    /// `compose(s, t)` applies `s` first, then `t`:
    /// `apply(compose(s,t), w) = apply(t, apply(s, w))`.
    pub fn compose(&self, then: &Substitution) -> Substitution {
        let mut map = BTreeMap::new();
        for (var, image) in &self.map {
            map.insert(var.clone(), then.apply(image));
        }
        for (var, image) in &then.map {
            map.entry(var.clone()).or_insert_with(|| image.clone());
        }
        Substitution { map }
    }

    pub fn restrict<'a, I: IntoIterator<Item = &'a Symbol>>(&self, vars: I) -> Substitution {
        let mut map = BTreeMap::new();
        for var in vars {
            map.insert(var.clone(), self.image_of(var));
        }
        Substitution { map }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (var, image) in &self.map {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{} -> {}", var.name(), image)?;
        }
        if first {
            write!(f, "(identity)")?;
        }
        Ok(())
    }
}
