//! Wicks forms: irredundant quadratic cyclic words up to relabeling of
//! variables, enumerated exhaustively per (orientability, genus) and cached
//! in text tables.
//!
//! Relabelings are the automorphisms that permute the signed variable
//! letters: a bijective assignment of a possibly-inverted fresh letter per
//! variable. The canonical representative of a cyclic word is the least
//! word, over all rotations, produced by the first-occurrence scan that
//! names variables v1, v2, ... in order of appearance with positive first
//! sign. The scan of a fixed rotation is the lex-least relabeling of that
//! rotation, so the minimum over rotations is the class minimum.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::surface;
use crate::word::{CyclicWord, Letter, Sign, Symbol, Word};

#[derive(Debug, Error)]
pub enum WicksError {
    #[error("not a quadratic word: {0}")]
    NotQuadratic(String),
    #[error(
        "enumeration budget exhausted after {nodes} nodes \
         (orientable={orientable}, genus={genus}, max length {max_length}); partial results discarded"
    )]
    BudgetExceeded { nodes: u64, orientable: bool, genus: usize, max_length: usize },
    #[error("form table unavailable: {0}")]
    TableUnavailable(String),
    #[error("table io: {0}")]
    TableIo(#[from] std::io::Error),
}

/// Canonical irredundant quadratic cyclic word with cached surface data.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WicksForm {
    pub form: CyclicWord,
    pub orientable: bool,
    pub genus: usize,
    pub length: usize,
    /// Length meets the degree-three vertex bound 6(1 - chi).
    pub maximal: bool,
}

const MAX_VARS: usize = 16;

type Packed = (u8, bool);

fn pack(letters: &[Letter]) -> Result<(Vec<Packed>, Vec<Symbol>), WicksError> {
    let mut ids: BTreeMap<Symbol, u8> = BTreeMap::new();
    let mut order: Vec<Symbol> = Vec::new();
    let mut packed = Vec::with_capacity(letters.len());
    for letter in letters {
        if !letter.symbol.is_variable() {
            return Err(WicksError::NotQuadratic(
                Word::from_letters(letters.to_vec()).to_string(),
            ));
        }
        let next = ids.len() as u8;
        let id = *ids.entry(letter.symbol.clone()).or_insert_with(|| {
            order.push(letter.symbol.clone());
            next
        });
        packed.push((id, letter.sign == Sign::Minus));
    }
    if ids.len() > MAX_VARS || !quadratic_packed(&packed) {
        return Err(WicksError::NotQuadratic(
            Word::from_letters(letters.to_vec()).to_string(),
        ));
    }
    Ok((packed, order))
}

fn quadratic_packed(word: &[Packed]) -> bool {
    let mut counts = [0u8; MAX_VARS];
    for &(id, _) in word {
        counts[id as usize] += 1;
    }
    counts.iter().all(|&c| c == 0 || c == 2)
}

fn variable_name(index: u8) -> Symbol {
    Symbol::variable(&format!("v{}", index + 1))
}

fn unpack(word: &[Packed]) -> Vec<Letter> {
    word.iter()
        .map(|&(id, minus)| {
            Letter::new(variable_name(id), if minus { Sign::Minus } else { Sign::Plus })
        })
        .collect()
}

/// First-occurrence scan of a rotation: fresh ids in appearance order,
/// orientation flipped so first occurrences are positive.
fn scan(word: &[Packed], rot: usize) -> Vec<Packed> {
    let l = word.len();
    let mut assigned = [u8::MAX; MAX_VARS];
    let mut flip = [false; MAX_VARS];
    let mut next = 0u8;
    let mut out = Vec::with_capacity(l);
    for j in 0..l {
        let (id, minus) = word[(rot + j) % l];
        let slot = id as usize;
        if assigned[slot] == u8::MAX {
            assigned[slot] = next;
            flip[slot] = minus;
            next += 1;
        }
        out.push((assigned[slot], minus != flip[slot]));
    }
    out
}

/// Compares scan(rotate(word, rot)) with word itself without materializing
/// the scan; `Less` means the rotation provides a smaller representative.
fn scan_cmp(word: &[Packed], rot: usize) -> std::cmp::Ordering {
    let l = word.len();
    let mut assigned = [u8::MAX; MAX_VARS];
    let mut flip = [false; MAX_VARS];
    let mut next = 0u8;
    for j in 0..l {
        let (id, minus) = word[(rot + j) % l];
        let slot = id as usize;
        if assigned[slot] == u8::MAX {
            assigned[slot] = next;
            flip[slot] = minus;
            next += 1;
        }
        let this = (assigned[slot], minus != flip[slot]);
        match this.cmp(&word[j]) {
            std::cmp::Ordering::Equal => {}
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

fn canonical_packed(word: &[Packed]) -> Vec<Packed> {
    (0..word.len()).map(|r| scan(word, r)).min().unwrap_or_default()
}

/// Least representative of `w` under rotation and relabeling; idempotent,
/// and equal outputs characterize equivalent quadratic cyclic words.
pub fn canonical_form(w: &CyclicWord) -> Result<CyclicWord, WicksError> {
    let (packed, _) = pack(w.letters())?;
    let canonical = canonical_packed(&packed);
    Ok(CyclicWord::from_cyclically_reduced(Word::from_letters(unpack(&canonical))))
}

/// A relabeling of variables: each variable maps to a signed letter, with
/// signs extending multiplicatively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relabel {
    map: BTreeMap<Symbol, Letter>,
}

impl Relabel {
    pub fn apply_letter(&self, letter: &Letter) -> Letter {
        let image = self.map.get(&letter.symbol).cloned().unwrap_or_else(|| {
            Letter::new(letter.symbol.clone(), Sign::Plus)
        });
        match letter.sign {
            Sign::Plus => image,
            Sign::Minus => image.inverse(),
        }
    }

    pub fn apply_word(&self, w: &Word) -> Word {
        Word::from_letters(w.letters().iter().map(|l| self.apply_letter(l)))
    }

    pub fn inverse(&self) -> Relabel {
        let mut map = BTreeMap::new();
        for (sym, letter) in &self.map {
            map.insert(
                letter.symbol.clone(),
                Letter::new(sym.clone(), letter.sign),
            );
        }
        Relabel { map }
    }

    pub fn image_of(&self, sym: &Symbol) -> Letter {
        self.map
            .get(sym)
            .cloned()
            .unwrap_or_else(|| Letter::new(sym.clone(), Sign::Plus))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Symbol, &Letter)> {
        self.map.iter()
    }
}

/// One symmetry of a canonical form: relabeling the rotation by `rotation`
/// slots reproduces the form exactly.
#[derive(Debug, Clone)]
pub struct FormSymmetry {
    pub rotation: usize,
    pub relabel: Relabel,
}

/// All pairs (rotation, relabeling) fixing the stored rotation of a
/// quadratic cyclic word: relabeling the rotation by `rotation` slots
/// reproduces the word letter for letter. Always contains the identity at
/// rotation 0. Two rotations admit such a relabeling exactly when their
/// first-occurrence scans agree.
pub fn symmetries(form: &CyclicWord) -> Result<Vec<FormSymmetry>, WicksError> {
    let letters = form.letters();
    let (packed, _) = pack(letters)?;
    let l = letters.len();
    let scan0 = scan(&packed, 0);
    let mut out = Vec::new();
    for r in 0..l {
        if scan(&packed, r) != scan0 {
            continue;
        }
        // The relabeling sends the letter at slot r+j to the letter at j.
        let mut map: BTreeMap<Symbol, Letter> = BTreeMap::new();
        for j in 0..l {
            let from = &letters[(r + j) % l];
            let to = &letters[j];
            let image = match from.sign {
                Sign::Plus => to.clone(),
                Sign::Minus => to.inverse(),
            };
            if let Some(existing) = map.get(&from.symbol) {
                debug_assert_eq!(existing, &image, "inconsistent symmetry relabeling");
            }
            map.insert(from.symbol.clone(), image);
        }
        let relabel = Relabel { map };
        debug_assert_eq!(
            &relabel.apply_word(&form.rotation(r)),
            form.canonical(),
            "symmetry must reproduce the form"
        );
        out.push(FormSymmetry { rotation: r, relabel });
    }
    Ok(out)
}

/// Surface data of a packed quadratic word: (vertex count, same-sign pair
/// present).
fn packed_surface(word: &[Packed]) -> (usize, bool) {
    let l = word.len();
    let mut occ: [[(usize, bool); 2]; MAX_VARS] = [[(usize::MAX, false); 2]; MAX_VARS];
    let mut seen = [0u8; MAX_VARS];
    let mut nonorientable = false;
    for (i, &(id, minus)) in word.iter().enumerate() {
        let slot = id as usize;
        occ[slot][seen[slot] as usize] = (i, minus);
        seen[slot] += 1;
        if seen[slot] == 2 && occ[slot][0].1 == occ[slot][1].1 {
            nonorientable = true;
        }
    }
    let mut parent: [u8; 32] = [0; 32];
    for (i, p) in parent.iter_mut().enumerate().take(l) {
        *p = i as u8;
    }
    fn find(parent: &mut [u8; 32], mut i: u8) -> u8 {
        while parent[i as usize] != i {
            parent[i as usize] = parent[parent[i as usize] as usize];
            i = parent[i as usize];
        }
        i
    }
    let union = |parent: &mut [u8; 32], a: usize, b: usize| {
        let ra = find(parent, a as u8);
        let rb = find(parent, b as u8);
        if ra != rb {
            parent[ra.max(rb) as usize] = ra.min(rb);
        }
    };
    for slot in 0..MAX_VARS {
        if seen[slot] != 2 {
            continue;
        }
        let ends = |pos: usize, minus: bool| -> (usize, usize) {
            let next = (pos + 1) % l;
            if minus {
                (next, pos)
            } else {
                (pos, next)
            }
        };
        let (i0, m0) = occ[slot][0];
        let (i1, m1) = occ[slot][1];
        let (init0, term0) = ends(i0, m0);
        let (init1, term1) = ends(i1, m1);
        union(&mut parent, init0, init1);
        union(&mut parent, term0, term1);
    }
    let mut v = 0;
    for i in 0..l {
        if find(&mut parent, i as u8) == i as u8 {
            v += 1;
        }
    }
    (v, nonorientable)
}

/// Packed cyclic irredundancy test; mirrors the letter-level one.
fn packed_irredundant(word: &[Packed], var_count: u8) -> bool {
    let l = word.len();
    if l < 4 {
        return true;
    }
    let inv = |(id, minus): Packed| (id, !minus);
    let at = |i: isize| word[i.rem_euclid(l as isize) as usize];
    let blocks_only = |p: Packed, q: Packed| -> bool {
        for i in 0..l as isize {
            let letter = at(i);
            let ok = if letter == p {
                at(i + 1) == q
            } else if letter == inv(p) {
                inv(at(i - 1)) == q
            } else if letter == q {
                at(i - 1) == p
            } else if letter == inv(q) {
                inv(at(i + 1)) == p
            } else {
                true
            };
            if !ok {
                return false;
            }
        }
        true
    };
    for s in 0..var_count {
        for t in (s + 1)..var_count {
            for ps in [false, true] {
                for qs in [false, true] {
                    let p = (s, ps);
                    let q = (t, qs);
                    if blocks_only(p, q) || blocks_only(q, p) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

struct Enumerator {
    orientable: bool,
    genus: usize,
    max_len: usize,
    budget: u64,
    nodes: u64,
    word: Vec<Packed>,
    open: Vec<u8>,
    next_id: u8,
    found: Vec<Vec<Packed>>,
}

impl Enumerator {
    fn run(&mut self) -> Result<(), WicksError> {
        self.step()
    }

    fn step(&mut self) -> Result<(), WicksError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(WicksError::BudgetExceeded {
                nodes: self.nodes,
                orientable: self.orientable,
                genus: self.genus,
                max_length: self.max_len,
            });
        }
        let len = self.word.len();
        if self.open.is_empty() && len >= 2 {
            self.check_leaf();
        }
        if len == self.max_len {
            return Ok(());
        }
        // Open a fresh variable; the scan form forces the name and a
        // positive sign. Feasible only if the remaining positions can
        // close everything.
        if (self.next_id as usize) < MAX_VARS && len + self.open.len() + 2 <= self.max_len {
            let id = self.next_id;
            self.next_id += 1;
            self.open.push(id);
            self.word.push((id, false));
            self.step()?;
            self.word.pop();
            self.open.pop();
            self.next_id -= 1;
        }
        // Close an open variable.
        for idx in 0..self.open.len() {
            let id = self.open[idx];
            let signs: &[bool] = if self.orientable { &[true] } else { &[true, false] };
            for &minus in signs {
                let prev = *self.word.last().expect("nonempty before closing");
                if prev == (id, !minus) {
                    continue;
                }
                self.open.swap_remove(idx);
                self.word.push((id, minus));
                self.step()?;
                self.word.pop();
                self.open.push(id);
                let last = self.open.len() - 1;
                self.open.swap(idx, last);
            }
        }
        Ok(())
    }

    fn check_leaf(&mut self) {
        let word = &self.word;
        let l = word.len();
        // Cyclic reduction at the wrap: the first letter is v1 positive.
        if word[l - 1] == (0, true) {
            return;
        }
        let (v, nonorientable) = packed_surface(word);
        if nonorientable == self.orientable {
            return;
        }
        let e = l / 2;
        let chi = v as i64 - e as i64 + 1;
        let genus = if self.orientable { (2 - chi) / 2 } else { 2 - chi };
        if genus != self.genus as i64 {
            return;
        }
        for r in 1..l {
            if scan_cmp(word, r) == std::cmp::Ordering::Less {
                return;
            }
        }
        if !packed_irredundant(word, self.next_id) {
            return;
        }
        self.found.push(word.clone());
    }
}

/// Upper bound on the length of an irredundant quadratic word of the given
/// genus: every vertex of the glued surface has degree at least three,
/// giving |W| <= 6(1 - chi). The bound degenerates for the projective
/// plane, where a direct search up to length 4 leaves only the square.
pub fn max_form_length(orientable: bool, genus: usize) -> usize {
    if orientable {
        12 * genus - 6
    } else if genus == 1 {
        4
    } else {
        6 * (genus - 1)
    }
}

pub const DEFAULT_NODE_BUDGET: u64 = 500_000_000;

/// Exhaustively enumerates canonical Wicks forms of the given genus and
/// orientability with length at most `cap` (defaults to the theoretical
/// maximum). Results are sorted; an exceeded node budget is an error, never
/// a silent truncation.
pub fn enumerate_wicks_capped(
    orientable: bool,
    genus: usize,
    maximal_only: bool,
    cap: Option<usize>,
    budget: u64,
) -> Result<Vec<WicksForm>, WicksError> {
    if genus == 0 {
        return Ok(Vec::new());
    }
    let full = max_form_length(orientable, genus);
    let max_len = cap.unwrap_or(full).min(full);
    let mut enumerator = Enumerator {
        orientable,
        genus,
        max_len,
        budget,
        nodes: 0,
        word: Vec::with_capacity(max_len),
        open: Vec::new(),
        next_id: 0,
        found: Vec::new(),
    };
    if max_len >= 2 {
        enumerator.run()?;
    }
    let mut forms = Vec::with_capacity(enumerator.found.len());
    for packed in &enumerator.found {
        let form = CyclicWord::from_cyclically_reduced(Word::from_letters(unpack(packed)));
        let report = surface::classify_quadratic(&form);
        let data = surface::surface_data(&form).expect("enumerated forms are quadratic");
        assert!(report.is_quadratic && report.irredundant == Some(true));
        assert_eq!(report.orientable, Some(orientable));
        assert_eq!(data.orientable, orientable);
        assert_eq!(data.genus, genus);
        let maximal = form.len() as i64 == 6 * (1 - data.chi);
        forms.push(WicksForm { length: form.len(), form, orientable, genus, maximal });
    }
    forms.sort();
    forms.dedup();
    if maximal_only {
        forms.retain(|f| f.maximal);
    }
    Ok(forms)
}

pub fn enumerate_wicks(
    orientable: bool,
    genus: usize,
    maximal_only: bool,
) -> Result<Vec<WicksForm>, WicksError> {
    enumerate_wicks_capped(orientable, genus, maximal_only, None, DEFAULT_NODE_BUDGET)
}

const TABLE_VERSION: &str = "v1";

/// Table cache keyed by (orientability, genus). With a directory, full
/// tables are persisted as text files with a content hash and regenerated
/// when absent or tampered with. Query results are additionally memoized
/// in memory (shared across clones), so repeated scans are cheap.
#[derive(Debug, Clone, Default)]
pub struct FormStore {
    dir: Option<PathBuf>,
    budget: u64,
    memo: Arc<Mutex<BTreeMap<(bool, usize, usize), Vec<WicksForm>>>>,
}

impl FormStore {
    pub fn in_memory() -> FormStore {
        FormStore { dir: None, budget: DEFAULT_NODE_BUDGET, memo: Default::default() }
    }

    pub fn with_dir(dir: PathBuf) -> FormStore {
        FormStore { dir: Some(dir), budget: DEFAULT_NODE_BUDGET, memo: Default::default() }
    }

    pub fn with_budget(mut self, budget: u64) -> FormStore {
        self.budget = budget;
        self
    }

    fn table_path(&self, orientable: bool, genus: usize) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| {
            let kind = if orientable { "orientable" } else { "nonorientable" };
            d.join(format!("wicks-{kind}-{genus}.txt"))
        })
    }

    /// The complete form table for a key, loaded from disk when a valid
    /// file exists, regenerated (and persisted) otherwise. Directory-backed
    /// stores treat the file as the cache so that tampering is always
    /// detected; only memory-backed stores memoize.
    pub fn forms(&self, orientable: bool, genus: usize) -> Result<Vec<WicksForm>, WicksError> {
        let full = max_form_length(orientable, genus);
        if self.dir.is_none() {
            if let Some(hit) = self.memo.lock().unwrap().get(&(orientable, genus, full)) {
                return Ok(hit.clone());
            }
        }
        let forms = if let Some(loaded) = self
            .table_path(orientable, genus)
            .and_then(|path| self.try_load(&path, orientable, genus))
        {
            loaded
        } else {
            let generated = enumerate_wicks_capped(orientable, genus, false, None, self.budget)?;
            if let Some(path) = self.table_path(orientable, genus) {
                if let Some(parent) = path.parent() {
                    fs::create_dir_all(parent)?;
                }
                fs::write(&path, render_table(orientable, genus, &generated))?;
            }
            generated
        };
        if self.dir.is_none() {
            self.memo
                .lock()
                .unwrap()
                .insert((orientable, genus, full), forms.clone());
        }
        Ok(forms)
    }

    /// Forms of length at most `max_len`. Uses the full table when it is
    /// already on disk; otherwise runs a capped enumeration, which stays
    /// cheap precisely because the cap is small.
    pub fn forms_up_to_length(
        &self,
        orientable: bool,
        genus: usize,
        max_len: usize,
    ) -> Result<Vec<WicksForm>, WicksError> {
        if genus == 0 {
            return Ok(Vec::new());
        }
        let cap = max_len.min(max_form_length(orientable, genus));
        if cap >= max_form_length(orientable, genus) {
            return self.forms(orientable, genus);
        }
        if self.dir.is_none() {
            if let Some(hit) = self.memo.lock().unwrap().get(&(orientable, genus, cap)) {
                return Ok(hit.clone());
            }
        }
        if let Some(path) = self.table_path(orientable, genus) {
            if let Some(mut forms) = self.try_load(&path, orientable, genus) {
                forms.retain(|f| f.length <= cap);
                return Ok(forms);
            }
        }
        let forms = enumerate_wicks_capped(orientable, genus, false, Some(cap), self.budget)?;
        if self.dir.is_none() {
            self.memo
                .lock()
                .unwrap()
                .insert((orientable, genus, cap), forms.clone());
        }
        Ok(forms)
    }

    fn try_load(&self, path: &PathBuf, orientable: bool, genus: usize) -> Option<Vec<WicksForm>> {
        let text = fs::read_to_string(path).ok()?;
        parse_table(&text, orientable, genus)
    }
}

fn table_hash(lines: &[String]) -> String {
    let mut hasher = Sha256::new();
    for line in lines {
        hasher.update(line.as_bytes());
        hasher.update(b"\n");
    }
    format!("{:x}", hasher.finalize())
}

fn render_table(orientable: bool, genus: usize, forms: &[WicksForm]) -> String {
    let kind = if orientable { "orientable" } else { "nonorientable" };
    let lines: Vec<String> = forms.iter().map(|f| f.form.to_string()).collect();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "wicks {kind} genus={genus} count={} {TABLE_VERSION}",
        forms.len()
    );
    let _ = writeln!(out, "# sha256 {}", table_hash(&lines));
    for line in &lines {
        let _ = writeln!(out, "{line}");
    }
    out
}

fn parse_table(text: &str, orientable: bool, genus: usize) -> Option<Vec<WicksForm>> {
    let mut lines = text.lines();
    let header = lines.next()?;
    let kind = if orientable { "orientable" } else { "nonorientable" };
    let expected_prefix = format!("wicks {kind} genus={genus} count=");
    let rest = header.strip_prefix(&expected_prefix)?;
    let mut parts = rest.split_whitespace();
    let count: usize = parts.next()?.parse().ok()?;
    if parts.next() != Some(TABLE_VERSION) {
        return None;
    }
    let hash_line = lines.next()?;
    let stored_hash = hash_line.strip_prefix("# sha256 ")?;
    let body: Vec<String> = lines.map(str::to_string).collect();
    if body.len() != count || table_hash(&body) != stored_hash {
        return None;
    }
    let mut forms = Vec::with_capacity(count);
    for line in &body {
        let word = Word::parse_variable(line).ok()?;
        let form = CyclicWord::from_cyclically_reduced(word);
        let data = surface::surface_data(&form).ok()?;
        if data.orientable != orientable || data.genus != genus {
            return None;
        }
        let maximal = form.len() as i64 == 6 * (1 - data.chi);
        forms.push(WicksForm { length: form.len(), form, orientable, genus, maximal });
    }
    Some(forms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(text: &str) -> CyclicWord {
        CyclicWord::from_word(&Word::parse_variable(text).unwrap())
    }

    fn canon(text: &str) -> CyclicWord {
        canonical_form(&cyc(text)).unwrap()
    }

    #[test]
    fn canonical_form_identifies_relabelings() {
        assert_eq!(canon("y^-1 x^-1 y x"), canon("x^-1 y^-1 x y"));
        assert_eq!(canon("x x y y"), canon("y y x x"));
        assert_eq!(canon("x^2"), canon("q^2"));
        assert_ne!(canon("x x y y"), canon("x y^-1 x y"));
        // Idempotent.
        let c = canon("z^-1 x^2 z y^2");
        assert_eq!(canonical_form(&c).unwrap(), c);
    }

    #[test]
    fn canonical_form_handles_rotations() {
        let w = cyc("x x y y");
        for r in 0..w.len() {
            let rotated = CyclicWord::from_cyclically_reduced(w.rotation(r));
            assert_eq!(canonical_form(&rotated).unwrap(), canon("x x y y"));
        }
    }

    #[test]
    fn canonical_form_distinguishes_inverse_classes() {
        // A cyclic word need not be equivalent to its inverse under
        // relabeling alone; the six-letter genus-one form is.
        let w = canon("x^-1 y^-1 z^-1 x y z");
        let winv = canonical_form(&cyc("x^-1 y^-1 z^-1 x y z").inverse()).unwrap();
        assert_eq!(w, winv);
    }

    #[test]
    fn canonical_form_rejects_non_quadratic() {
        assert!(canonical_form(&cyc("x y")).is_err());
    }

    #[test]
    fn symmetries_of_commutator() {
        let form = canon("x^-1 y^-1 x y");
        let syms = symmetries(&form).unwrap();
        assert!(!syms.is_empty());
        assert!(syms.iter().any(|s| s.rotation == 0));
        for sym in &syms {
            assert_eq!(sym.relabel.apply_word(&form.rotation(sym.rotation)), *form.canonical());
        }
    }

    #[test]
    fn square_form_has_full_rotation_symmetry() {
        let form = canon("x^2");
        let syms = symmetries(&form).unwrap();
        assert_eq!(syms.len(), 2);
    }

    #[test]
    fn genus_one_orientable_forms() {
        let forms = enumerate_wicks(true, 1, false).unwrap();
        let expected = vec![canon("x^-1 y^-1 x y"), canon("x^-1 y^-1 z^-1 x y z")];
        let got: Vec<CyclicWord> = forms.iter().map(|f| f.form.clone()).collect();
        assert_eq!(got, expected);
        assert!(!forms[0].maximal);
        assert!(forms[1].maximal);
    }

    #[test]
    fn genus_one_nonorientable_forms() {
        let forms = enumerate_wicks(false, 1, false).unwrap();
        let got: Vec<CyclicWord> = forms.iter().map(|f| f.form.clone()).collect();
        assert_eq!(got, vec![canon("x^2")]);
    }

    #[test]
    fn genus_two_nonorientable_forms() {
        let forms = enumerate_wicks(false, 2, false).unwrap();
        let got: Vec<CyclicWord> = forms.iter().map(|f| f.form.clone()).collect();
        let expected: Vec<CyclicWord> = ["x^2 y^2", "x y^-1 x y", "z^-1 x^2 z y^2", "x z x y z^-1 y"]
            .iter()
            .map(|t| canon(t))
            .collect();
        for e in &expected {
            assert!(got.contains(e), "missing {e}");
        }
        assert_eq!(got.len(), 4);
    }

    #[test]
    fn genus_zero_is_empty() {
        assert!(enumerate_wicks(true, 0, false).unwrap().is_empty());
        assert!(enumerate_wicks(false, 0, false).unwrap().is_empty());
    }

    #[test]
    fn budget_error_is_explicit() {
        let err = enumerate_wicks_capped(true, 2, false, None, 10).unwrap_err();
        assert!(matches!(err, WicksError::BudgetExceeded { .. }));
    }

    #[test]
    fn capped_enumeration_prefix_of_full() {
        let capped = enumerate_wicks_capped(false, 2, false, Some(4), DEFAULT_NODE_BUDGET).unwrap();
        let full = enumerate_wicks(false, 2, false).unwrap();
        let full_short: Vec<&WicksForm> = full.iter().filter(|f| f.length <= 4).collect();
        assert_eq!(capped.len(), full_short.len());
        for (a, b) in capped.iter().zip(full_short) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn enumeration_matches_raw_filter_up_to_length_six() {
        // Raw generator: every pairing of positions with every sign
        // pattern, filtered to cyclically reduced words, canonicalized.
        let mut expected: std::collections::BTreeSet<(bool, usize, CyclicWord)> =
            Default::default();
        for len in [2usize, 4, 6] {
            for word in raw_quadratic_words(len) {
                let w = Word::from_letters(unpack(&word));
                if w.len() != len || !w.is_cyclically_reduced() {
                    continue;
                }
                let cyclic = CyclicWord::from_cyclically_reduced(w);
                let report = surface::classify_quadratic(&cyclic);
                if report.irredundant != Some(true) {
                    continue;
                }
                let data = surface::surface_data(&cyclic).unwrap();
                expected.insert((
                    data.orientable,
                    data.genus,
                    canonical_form(&cyclic).unwrap(),
                ));
            }
        }
        for (orientable, genus) in [(true, 1), (false, 1), (false, 2)] {
            let got: std::collections::BTreeSet<(bool, usize, CyclicWord)> =
                enumerate_wicks(orientable, genus, false)
                    .unwrap()
                    .into_iter()
                    .filter(|f| f.length <= 6)
                    .map(|f| (f.orientable, f.genus, f.form))
                    .collect();
            let want: std::collections::BTreeSet<_> = expected
                .iter()
                .filter(|(o, g, _)| *o == orientable && *g == genus)
                .cloned()
                .collect();
            assert_eq!(got, want, "key ({orientable}, {genus})");
        }
    }

    /// All raw quadratic packed words of the given even length: choose a
    /// pairing of positions and signs per occurrence, naming variables in
    /// first-occurrence order (relabeling freedom makes this lossless).
    fn raw_quadratic_words(len: usize) -> Vec<Vec<Packed>> {
        fn go(word: &mut Vec<Option<Packed>>, next_id: u8, out: &mut Vec<Vec<Packed>>) {
            let Some(pos) = word.iter().position(Option::is_none) else {
                out.push(word.iter().map(|l| l.unwrap()).collect());
                return;
            };
            let partner_positions: Vec<usize> =
                (pos + 1..word.len()).filter(|&j| word[j].is_none()).collect();
            for j in partner_positions {
                for s1 in [false, true] {
                    // First-occurrence sign can be fixed positive: flipping
                    // a variable is a relabeling and we only compare
                    // canonical forms.
                    word[pos] = Some((next_id, false));
                    word[j] = Some((next_id, s1));
                    go(word, next_id + 1, out);
                    word[pos] = None;
                    word[j] = None;
                }
            }
        }
        let mut out = Vec::new();
        let mut word = vec![None; len];
        go(&mut word, 0, &mut out);
        out
    }

    #[test]
    fn store_round_trips_tables() {
        let dir = std::env::temp_dir().join(format!("wicks-store-test-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        let store = FormStore::with_dir(dir.clone());
        let first = store.forms(false, 2).unwrap();
        let path = dir.join("wicks-nonorientable-2.txt");
        assert!(path.exists());
        let reloaded = store.forms(false, 2).unwrap();
        assert_eq!(first, reloaded);

        // Tampering invalidates the hash and triggers regeneration.
        let mut text = fs::read_to_string(&path).unwrap();
        text.push_str("v9 v9\n");
        fs::write(&path, text).unwrap();
        let regenerated = store.forms(false, 2).unwrap();
        assert_eq!(first, regenerated);
        let fresh = fs::read_to_string(&path).unwrap();
        assert!(!fresh.contains("v9"));
        let _ = fs::remove_dir_all(&dir);
    }

    #[test]
    fn store_capped_queries() {
        let store = FormStore::in_memory();
        let short = store.forms_up_to_length(false, 2, 4).unwrap();
        assert_eq!(short.len(), 2);
        let all = store.forms_up_to_length(false, 2, 100).unwrap();
        assert_eq!(all.len(), 4);
    }
}
