//! Surface structure of quadratic words.
//!
//! A quadratic word spells the boundary of a polygon; gluing the two edges
//! carrying each variable (respecting signs) yields a closed surface. The
//! vertex count after gluing gives the Euler characteristic
//! `chi = V - E + 1` and hence the genus. This module classifies quadratic
//! words (orientability, irredundancy), computes that surface data, and
//! performs the variable split needed to turn a cyclic-word factorization
//! into an ordinary-word one.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::word::{CyclicWord, Letter, Sign, Substitution, Symbol, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("not a quadratic word: {0}")]
    NotQuadratic(String),
    #[error("empty word has no surface")]
    EmptyWord,
    #[error("alignment offset {offset} outside image of length {len}")]
    OffsetOutOfRange { offset: usize, len: usize },
    #[error("variable {0} has an empty image in the factorization")]
    EmptyImage(String),
}

/// Outcome of quadratic classification. `orientable` and `irredundant` are
/// only set when the word is quadratic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticReport {
    pub is_quadratic: bool,
    pub orientable: Option<bool>,
    pub irredundant: Option<bool>,
    pub variables: Vec<Symbol>,
}

/// Counts occurrences per symbol; quadratic means every letter is a
/// variable and every occurring variable appears exactly twice.
fn occurrence_table(letters: &[Letter]) -> Option<BTreeMap<Symbol, Vec<(usize, Sign)>>> {
    let mut table: BTreeMap<Symbol, Vec<(usize, Sign)>> = BTreeMap::new();
    for (i, letter) in letters.iter().enumerate() {
        if !letter.symbol.is_variable() {
            return None;
        }
        table.entry(letter.symbol.clone()).or_default().push((i, letter.sign));
    }
    Some(table)
}

pub fn is_quadratic(letters: &[Letter]) -> bool {
    match occurrence_table(letters) {
        Some(table) => table.values().all(|occ| occ.len() == 2),
        None => false,
    }
}

/// Sign-pattern orientability: every variable occurs once with each sign.
/// For quadratic words this is equivalent to membership in the commutator
/// subgroup, and it is preserved by automorphisms.
fn orientable_by_signs(table: &BTreeMap<Symbol, Vec<(usize, Sign)>>) -> bool {
    table.values().all(|occ| occ[0].1 != occ[1].1)
}

/// Looks for a pair of distinct noninverse letters p, q such that every
/// occurrence of their symbols lies inside a block (pq) or (pq)^-1. Such a
/// pair makes the word redundant: the move p -> p q^-1 erases q.
///
/// `cyclic` controls whether blocks may wrap around the word boundary;
/// cyclic words read cyclically, ordinary words do not.
pub(crate) fn redundant_pair(letters: &[Letter], cyclic: bool) -> Option<(Letter, Letter)> {
    let k = letters.len();
    if k < 4 {
        return None;
    }
    let table = occurrence_table(letters)?;
    let symbols: Vec<&Symbol> = table.keys().collect();
    let at = |i: isize| -> Option<&Letter> {
        if cyclic {
            let i = i.rem_euclid(k as isize) as usize;
            Some(&letters[i])
        } else if (0..k as isize).contains(&i) {
            Some(&letters[i as usize])
        } else {
            None
        }
    };
    let blocks_only = |p: &Letter, q: &Letter| -> bool {
        for (i, letter) in letters.iter().enumerate() {
            let i = i as isize;
            let ok = if letter == p {
                at(i + 1) == Some(q)
            } else if *letter == p.inverse() {
                at(i - 1).map(Letter::inverse).as_ref() == Some(q)
            } else if letter == q {
                at(i - 1) == Some(p)
            } else if *letter == q.inverse() {
                at(i + 1).map(Letter::inverse).as_ref() == Some(p)
            } else {
                true
            };
            if !ok {
                return false;
            }
        }
        true
    };
    for s in &symbols {
        for t in &symbols {
            if s >= t {
                continue;
            }
            for ps in [Sign::Plus, Sign::Minus] {
                for qs in [Sign::Plus, Sign::Minus] {
                    let p = Letter::new((*s).clone(), ps);
                    let q = Letter::new((*t).clone(), qs);
                    if blocks_only(&p, &q) {
                        return Some((p, q));
                    }
                    if blocks_only(&q, &p) {
                        return Some((q, p));
                    }
                }
            }
        }
    }
    None
}

pub fn classify_quadratic(w: &CyclicWord) -> QuadraticReport {
    let letters = w.letters();
    let table = match occurrence_table(letters) {
        Some(t) if t.values().all(|occ| occ.len() == 2) => t,
        _ => {
            return QuadraticReport {
                is_quadratic: false,
                orientable: None,
                irredundant: None,
                variables: Vec::new(),
            }
        }
    };
    QuadraticReport {
        is_quadratic: true,
        orientable: Some(orientable_by_signs(&table)),
        irredundant: Some(redundant_pair(letters, true).is_none()),
        variables: table.keys().cloned().collect(),
    }
}

/// Vertex structure of the glued polygon. Corner `i` is the polygon vertex
/// between slots `i-1` and `i`; slot `i` runs from corner `i` to corner
/// `i+1 (mod k)`. For each variable the glued edge keeps one initial and
/// one terminal vertex class.
#[derive(Debug, Clone)]
pub struct CornerStructure {
    pub class_of: Vec<usize>,
    pub vertex_count: usize,
    pub edges: BTreeMap<Symbol, EdgeEnds>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeEnds {
    pub init_class: usize,
    pub term_class: usize,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Glues the polygon corners. The slot carrying `v` with sign `+` traverses
/// edge `v` forwards (initial vertex at the slot start), with sign `-`
/// backwards; the two slots of each variable identify initial with initial
/// and terminal with terminal.
pub fn corner_structure(letters: &[Letter]) -> Result<CornerStructure, SurfaceError> {
    let k = letters.len();
    if k == 0 {
        return Err(SurfaceError::EmptyWord);
    }
    let table = occurrence_table(letters)
        .filter(|t| t.values().all(|occ| occ.len() == 2))
        .ok_or_else(|| {
            SurfaceError::NotQuadratic(Word::from_letters(letters.to_vec()).to_string())
        })?;

    let ends = |slot: usize, sign: Sign| -> (usize, usize) {
        let next = (slot + 1) % k;
        match sign {
            Sign::Plus => (slot, next),
            Sign::Minus => (next, slot),
        }
    };

    let mut uf = UnionFind::new(k);
    for occ in table.values() {
        let (i0, s0) = occ[0];
        let (i1, s1) = occ[1];
        let (init0, term0) = ends(i0, s0);
        let (init1, term1) = ends(i1, s1);
        uf.union(init0, init1);
        uf.union(term0, term1);
    }

    let mut renumber: BTreeMap<usize, usize> = BTreeMap::new();
    let mut class_of = Vec::with_capacity(k);
    for i in 0..k {
        let root = uf.find(i);
        let next = renumber.len();
        let id = *renumber.entry(root).or_insert(next);
        class_of.push(id);
    }

    let mut edges = BTreeMap::new();
    for (symbol, occ) in &table {
        let (i0, s0) = occ[0];
        let (init0, term0) = ends(i0, s0);
        edges.insert(
            symbol.clone(),
            EdgeEnds { init_class: class_of[init0], term_class: class_of[term0] },
        );
    }

    Ok(CornerStructure { vertex_count: renumber.len(), class_of, edges })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceData {
    pub edge_count: usize,
    pub vertex_count: usize,
    pub chi: i64,
    pub orientable: bool,
    pub genus: usize,
}

pub fn surface_data(w: &CyclicWord) -> Result<SurfaceData, SurfaceError> {
    surface_data_of_letters(w.letters())
}

/// Surface data of a quadratic word read cyclically.
pub fn surface_data_of_letters(letters: &[Letter]) -> Result<SurfaceData, SurfaceError> {
    let corners = corner_structure(letters)?;
    let table = occurrence_table(letters).expect("checked quadratic");
    let orientable = orientable_by_signs(&table);
    let edge_count = letters.len() / 2;
    let vertex_count = corners.vertex_count;
    let chi = vertex_count as i64 - edge_count as i64 + 1;
    assert!(chi <= 1, "nonempty cyclically reduced quadratic word cannot give a sphere");
    let genus = if orientable {
        assert!(chi % 2 == 0, "orientable surface has even Euler characteristic");
        ((2 - chi) / 2) as usize
    } else {
        (2 - chi) as usize
    };
    Ok(SurfaceData { edge_count, vertex_count, chi, orientable, genus })
}

/// Record of one variable split performed by [`split_for_alignment`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitRecord {
    pub original: Symbol,
    pub first: Symbol,
    pub second: Symbol,
}

/// An ordinary-word factorization obtained from a cyclic one.
#[derive(Debug, Clone)]
pub struct AlignedSplit {
    pub word: Word,
    pub assignment: Substitution,
    pub split: Option<SplitRecord>,
}

/// Turns a cyclic factorization of an image word into an ordinary one that
/// starts reading at position `start` of the image.
///
/// The image is the concatenation of the slot images of `form`'s canonical
/// rotation under `assignment`. If `start` lands on a slot boundary the
/// result is just a rotation of the form. If it lands strictly inside the
/// image of a slot carrying variable `x`, that variable is split as
/// `x -> x_1 x_2` (both occurrences), with images chosen so that the new
/// ordinary word spells the image rotated to `start`.
pub fn split_for_alignment(
    form: &CyclicWord,
    assignment: &Substitution,
    start: usize,
) -> Result<AlignedSplit, SurfaceError> {
    let letters = form.letters();
    if !is_quadratic(letters) {
        return Err(SurfaceError::NotQuadratic(form.to_string()));
    }
    let k = letters.len();
    let slot_image = |i: usize| -> Word {
        let letter: &Letter = &letters[i];
        let image = assignment.image_of(&letter.symbol);
        match letter.sign {
            Sign::Plus => image,
            Sign::Minus => image.inverse(),
        }
    };
    let mut cuts = Vec::with_capacity(k + 1);
    let mut total = 0usize;
    cuts.push(0);
    for i in 0..k {
        let len = slot_image(i).len();
        if len == 0 {
            return Err(SurfaceError::EmptyImage(letters[i].symbol.name().to_string()));
        }
        total += len;
        cuts.push(total);
    }
    if start >= total {
        return Err(SurfaceError::OffsetOutOfRange { offset: start, len: total });
    }

    let slot = cuts.iter().rposition(|&c| c <= start).expect("cuts start at 0");
    debug_assert!(slot < k);
    if cuts[slot] == start {
        // Boundary: pure rotation, no split.
        let mut rotated = Vec::with_capacity(k);
        for j in 0..k {
            rotated.push(letters[(slot + j) % k].clone());
        }
        return Ok(AlignedSplit {
            word: Word::from_letters(rotated),
            assignment: assignment.clone(),
            split: None,
        });
    }

    let letter = &letters[slot];
    let x = letter.symbol.clone();
    let first = Symbol::variable(&format!("{}_1", x.name()));
    let second = Symbol::variable(&format!("{}_2", x.name()));
    assert!(
        letters.iter().all(|l| l.symbol != first && l.symbol != second),
        "split names collide with form variables"
    );

    // The slot image J splits as J1 J2 at the start position. For a plus
    // slot J = x psi, so x1 -> J1, x2 -> J2 and reading begins at x2.  For
    // a minus slot J = (x psi)^-1 and x^-1 becomes x2^-1 x1^-1, so reading
    // begins at x1^-1 with x2 -> J1^-1, x1 -> J2^-1.
    let image = slot_image(slot);
    let inner = start - cuts[slot];
    let j1 = image.subword(0, inner);
    let j2 = image.subword(inner, image.len());
    let (first_image, second_image) = match letter.sign {
        Sign::Plus => (j1.clone(), j2.clone()),
        Sign::Minus => (j2.inverse(), j1.inverse()),
    };

    let expand = |l: &Letter| -> Vec<Letter> {
        if l.symbol == x {
            match l.sign {
                Sign::Plus => vec![
                    Letter::new(first.clone(), Sign::Plus),
                    Letter::new(second.clone(), Sign::Plus),
                ],
                Sign::Minus => vec![
                    Letter::new(second.clone(), Sign::Minus),
                    Letter::new(first.clone(), Sign::Minus),
                ],
            }
        } else {
            vec![l.clone()]
        }
    };

    // Ordinary word: second half of the split slot, the other slots in
    // cyclic order (with x expanded), then the first half.
    let mut new_letters = Vec::with_capacity(k + 2);
    match letter.sign {
        Sign::Plus => new_letters.push(Letter::new(second.clone(), Sign::Plus)),
        Sign::Minus => new_letters.push(Letter::new(first.clone(), Sign::Minus)),
    }
    for j in 1..k {
        new_letters.extend(expand(&letters[(slot + j) % k]));
    }
    match letter.sign {
        Sign::Plus => new_letters.push(Letter::new(first.clone(), Sign::Plus)),
        Sign::Minus => new_letters.push(Letter::new(second.clone(), Sign::Minus)),
    }

    let mut new_assignment = Substitution::identity();
    for (var, image) in assignment.pairs() {
        if *var != x {
            new_assignment = new_assignment.bind(var.clone(), image.clone());
        }
    }
    new_assignment = new_assignment
        .bind(first.clone(), first_image)
        .bind(second.clone(), second_image);

    Ok(AlignedSplit {
        word: Word::from_letters(new_letters),
        assignment: new_assignment,
        split: Some(SplitRecord { original: x, first, second }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(text: &str) -> CyclicWord {
        CyclicWord::from_word(&Word::parse_variable(text).unwrap())
    }

    #[test]
    fn classify_commutator() {
        let report = classify_quadratic(&cyc("x^-1 y^-1 x y"));
        assert!(report.is_quadratic);
        assert_eq!(report.orientable, Some(true));
        assert_eq!(report.irredundant, Some(true));
        assert_eq!(report.variables.len(), 2);
    }

    #[test]
    fn classify_redundant_square_pattern() {
        // x and y occur only inside blocks (xy), so the word is redundant
        // even though it is quadratic.
        let report = classify_quadratic(&cyc("x y x y"));
        assert!(report.is_quadratic);
        assert_eq!(report.orientable, Some(false));
        assert_eq!(report.irredundant, Some(false));
    }

    #[test]
    fn classify_non_quadratic() {
        let report = classify_quadratic(&cyc("x^2 y^2 z"));
        assert!(!report.is_quadratic);
        assert_eq!(report.orientable, None);
        assert_eq!(report.irredundant, None);
    }

    #[test]
    fn redundancy_reads_cyclically() {
        // yzxyz^-1x: the blocks (xy) wrap around the boundary, so only the
        // cyclic reading detects the redundancy.
        let w = Word::parse_variable("y z x y z^-1 x").unwrap();
        assert!(redundant_pair(w.letters(), true).is_some());
        assert!(redundant_pair(w.letters(), false).is_none());
    }

    #[test]
    fn surface_of_torus_word() {
        let data = surface_data(&cyc("x^-1 y^-1 x y")).unwrap();
        assert_eq!(data.edge_count, 2);
        assert_eq!(data.vertex_count, 1);
        assert_eq!(data.chi, 0);
        assert!(data.orientable);
        assert_eq!(data.genus, 1);
    }

    #[test]
    fn surface_of_projective_plane_and_klein_bottle() {
        let data = surface_data(&cyc("x^2")).unwrap();
        assert_eq!((data.edge_count, data.vertex_count, data.chi), (1, 1, 1));
        assert!(!data.orientable);
        assert_eq!(data.genus, 1);

        let data = surface_data(&cyc("x^2 y^2")).unwrap();
        assert_eq!(data.chi, 0);
        assert!(!data.orientable);
        assert_eq!(data.genus, 2);
    }

    #[test]
    fn surface_of_six_letter_genus_one_word() {
        let w = Word::parse_variable("x^-1 y^-1 z^-1 x y z").unwrap();
        let data = surface_data_of_letters(w.letters()).unwrap();
        assert_eq!(data.vertex_count, 2);
        assert_eq!(data.chi, 0);
        assert!(data.orientable);
        assert_eq!(data.genus, 1);

        let corners = corner_structure(w.letters()).unwrap();
        assert_eq!(corners.class_of, vec![0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn surface_of_redundant_word_is_genus_one() {
        let w = Word::parse_variable("x y x y").unwrap();
        let data = surface_data_of_letters(w.letters()).unwrap();
        assert_eq!(data.vertex_count, 2);
        assert_eq!(data.chi, 1);
        assert!(!data.orientable);
        assert_eq!(data.genus, 1);
    }

    #[test]
    fn surface_of_mixed_crosscap_handle_word() {
        let w = Word::parse_variable("a^2 b c b^-1 c^-1").unwrap();
        let data = surface_data_of_letters(w.letters()).unwrap();
        assert_eq!(data.vertex_count, 1);
        assert_eq!(data.chi, -1);
        assert!(!data.orientable);
        assert_eq!(data.genus, 3);
    }

    #[test]
    fn genus_adds_over_disjoint_variables() {
        let data = surface_data(&cyc("x^2 y^2 z^2 w^2")).unwrap();
        assert!(!data.orientable);
        assert_eq!(data.genus, 4);
    }

    #[test]
    fn surface_rejects_non_quadratic_and_empty() {
        assert!(matches!(surface_data(&cyc("x y")), Err(SurfaceError::NotQuadratic(_))));
        assert!(matches!(
            surface_data(&CyclicWord::from_word(&Word::empty())),
            Err(SurfaceError::EmptyWord)
        ));
    }

    #[test]
    fn split_inside_minus_slot_image() {
        // The canonical rotation of the commutator is x y x^-1 y^-1; with
        // x -> ab, y -> c its cyclic image is a b c b^-1 a^-1 c^-1. The
        // rotation a^-1 c^-1 a b c b^-1 starts at position 4, one letter
        // into the slot of x^-1, so x splits.
        let form = cyc("x^-1 y^-1 x y");
        assert_eq!(form.canonical(), &Word::parse_variable("x y x^-1 y^-1").unwrap());
        let assignment = Substitution::identity()
            .bind(Symbol::variable("x"), Word::parse_constant("a b").unwrap())
            .bind(Symbol::variable("y"), Word::parse_constant("c").unwrap());
        let aligned = split_for_alignment(&form, &assignment, 4).unwrap();
        let expected = Word::parse_variable("x_1^-1 y^-1 x_1 x_2 y x_2^-1").unwrap();
        assert_eq!(aligned.word, expected);
        let x1 = Symbol::variable("x_1");
        let x2 = Symbol::variable("x_2");
        assert_eq!(aligned.assignment.image_of(&x1), Word::parse_constant("a").unwrap());
        assert_eq!(aligned.assignment.image_of(&x2), Word::parse_constant("b").unwrap());
        assert_eq!(
            aligned.assignment.apply(&aligned.word),
            Word::parse_constant("a^-1 c^-1 a b c b^-1").unwrap()
        );
        assert!(aligned.split.is_some());
    }

    #[test]
    fn split_at_boundary_is_rotation() {
        let form = cyc("x^-1 y^-1 x y");
        let assignment = Substitution::identity()
            .bind(Symbol::variable("x"), Word::parse_constant("a b").unwrap())
            .bind(Symbol::variable("y"), Word::parse_constant("c").unwrap());
        let aligned = split_for_alignment(&form, &assignment, 2).unwrap();
        assert!(aligned.split.is_none());
        assert_eq!(aligned.word, Word::parse_variable("y x^-1 y^-1 x").unwrap());
        assert_eq!(
            aligned.assignment.apply(&aligned.word),
            Word::parse_constant("c b^-1 a^-1 c^-1 a b").unwrap()
        );
    }

    #[test]
    fn split_inside_plus_slot_image() {
        // Start inside the image ab of the plus occurrence of x (slot 0 of
        // the canonical rotation x y x^-1 y^-1).
        let form = cyc("x^-1 y^-1 x y");
        let assignment = Substitution::identity()
            .bind(Symbol::variable("x"), Word::parse_constant("a b").unwrap())
            .bind(Symbol::variable("y"), Word::parse_constant("c").unwrap());
        let aligned = split_for_alignment(&form, &assignment, 1).unwrap();
        let expected = Word::parse_variable("x_2 y x_2^-1 x_1^-1 y^-1 x_1").unwrap();
        assert_eq!(aligned.word, expected);
        // Image must be the cyclic image rotated to start at position 1.
        assert_eq!(
            aligned.assignment.apply(&aligned.word),
            Word::parse_constant("b c b^-1 a^-1 c^-1 a").unwrap()
        );
        // Splitting preserves orientability and the ordinary-word reading
        // stays quadratic.
        assert!(is_quadratic(aligned.word.letters()));
        let report = classify_quadratic(&CyclicWord::from_cyclically_reduced(aligned.word.clone()));
        assert_eq!(report.orientable, Some(true));
    }

    #[test]
    fn split_images_out_of_range() {
        let form = cyc("x^2");
        let assignment =
            Substitution::identity().bind(Symbol::variable("x"), Word::parse_constant("a").unwrap());
        assert!(matches!(
            split_for_alignment(&form, &assignment, 2),
            Err(SurfaceError::OffsetOutOfRange { .. })
        ));
        let empty = Substitution::identity()
            .bind(Symbol::variable("x"), Word::empty());
        assert!(matches!(
            split_for_alignment(&form, &empty, 0),
            Err(SurfaceError::EmptyImage(_))
        ));
    }
}
