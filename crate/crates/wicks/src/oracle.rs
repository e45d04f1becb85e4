//! Reference genus computation by naive exhaustive search.
//!
//! Everything in this module is deliberately unsophisticated. Quadratic words
//! are enumerated as raw position pairings with sign patterns — no canonical
//! rotation, no irredundancy restriction, no symmetry pruning — and their
//! genus is read off a polygon-vertex union-find. Factorizations of a target
//! are found by trying every rotation and every way of cutting it into slot
//! images. The module shares no code with the enumerator or the matcher, so
//! that agreement between the two on small inputs is meaningful evidence.
//!
//! Intended only for short constant targets (lengths up to roughly 10); cost
//! grows with the number of raw pairings of the target length.

use crate::word::{Letter, Sign, Word};

/// One letter position of a raw quadratic word: which variable, and whether
/// this occurrence is inverted relative to the variable's first occurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Slot {
    var: usize,
    inverted: bool,
}

/// A quadratic word in raw form: a cyclic sequence of slots in which every
/// variable index occurs exactly twice. First occurrences are never marked
/// inverted (flipping both occurrences of a variable renames its image to its
/// inverse, so nothing is lost).
#[derive(Clone, Debug)]
struct Shape {
    slots: Vec<Slot>,
    orientable: bool,
    genus: usize,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }

    fn union(&mut self, i: usize, j: usize) {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri != rj {
            self.parent[ri] = rj;
        }
    }

    fn class_count(&mut self) -> usize {
        let n = self.parent.len();
        let mut count = 0;
        for i in 0..n {
            if self.find(i) == i {
                count += 1;
            }
        }
        count
    }
}

/// Orientability and genus of the surface obtained by spelling the slots
/// around a polygon and gluing the two edges of each variable so that their
/// letter directions agree. Vertex i sits between edges i-1 and i; edge i
/// runs from vertex i to vertex i+1 when upright, backwards when inverted.
fn surface_of(slots: &[Slot]) -> (bool, usize) {
    let n = slots.len();
    let var_count = n / 2;
    let mut occurrences: Vec<Vec<usize>> = vec![Vec::new(); var_count];
    for (i, slot) in slots.iter().enumerate() {
        occurrences[slot.var].push(i);
    }
    let head = |i: usize| -> usize {
        if slots[i].inverted {
            (i + 1) % n
        } else {
            i
        }
    };
    let tail = |i: usize| -> usize {
        if slots[i].inverted {
            i
        } else {
            (i + 1) % n
        }
    };
    let mut vertices = UnionFind::new(n);
    let mut orientable = true;
    for occ in &occurrences {
        let (i, j) = (occ[0], occ[1]);
        vertices.union(head(i), head(j));
        vertices.union(tail(i), tail(j));
        if slots[i].inverted == slots[j].inverted {
            orientable = false;
        }
    }
    let chi = vertices.class_count() as i64 - var_count as i64 + 1;
    let genus = if orientable {
        ((2 - chi) / 2) as usize
    } else {
        (2 - chi) as usize
    };
    (orientable, genus)
}

/// Every raw quadratic word of each even length up to `max_len`, except those
/// with a cyclically adjacent x·x⁻¹ (no assignment of nonempty images can
/// spell such a word without cancellation).
fn enumerate_shapes(max_len: usize) -> Vec<Shape> {
    let mut shapes = Vec::new();
    let mut slots: Vec<Option<Slot>> = Vec::new();
    for k in 1..=max_len / 2 {
        slots.clear();
        slots.resize(2 * k, None);
        let mut next_var = 0;
        fill_pairings(&mut slots, &mut next_var, &mut shapes);
    }
    shapes
}

fn fill_pairings(slots: &mut Vec<Option<Slot>>, next_var: &mut usize, out: &mut Vec<Shape>) {
    let first_free = match slots.iter().position(|s| s.is_none()) {
        Some(i) => i,
        None => {
            let fixed: Vec<Slot> = slots.iter().map(|s| s.unwrap()).collect();
            let n = fixed.len();
            let reducible = (0..n).any(|i| {
                let a = fixed[i];
                let b = fixed[(i + 1) % n];
                a.var == b.var && a.inverted != b.inverted
            });
            if !reducible {
                let (orientable, genus) = surface_of(&fixed);
                out.push(Shape {
                    slots: fixed,
                    orientable,
                    genus,
                });
            }
            return;
        }
    };
    let var = *next_var;
    *next_var += 1;
    slots[first_free] = Some(Slot {
        var,
        inverted: false,
    });
    for partner in first_free + 1..slots.len() {
        if slots[partner].is_some() {
            continue;
        }
        for inverted in [false, true] {
            slots[partner] = Some(Slot { var, inverted });
            fill_pairings(slots, next_var, out);
        }
        slots[partner] = None;
    }
    slots[first_free] = None;
    *next_var -= 1;
}

/// Can the cyclic word spelled by `target` be cut, after some rotation, into
/// contiguous nonempty arcs realizing the slots of `shape`? Arcs of a reduced
/// cyclic word concatenate without cancellation, so a successful cut is
/// exactly a cancellation-free assignment of nonempty images.
fn factors_cyclically(target: &[Letter], shape: &Shape) -> bool {
    let n = target.len();
    let m = shape.slots.len();
    if m > n || n == 0 {
        return false;
    }
    let var_count = m / 2;
    for rot in 0..n {
        let rotated: Vec<Letter> = (0..n).map(|i| target[(rot + i) % n].clone()).collect();
        let mut images: Vec<Option<Vec<Letter>>> = vec![None; var_count];
        if assign_slots(&rotated, &shape.slots, 0, 0, &mut images) {
            return true;
        }
    }
    false
}

fn assign_slots(
    target: &[Letter],
    slots: &[Slot],
    slot_index: usize,
    pos: usize,
    images: &mut Vec<Option<Vec<Letter>>>,
) -> bool {
    if slot_index == slots.len() {
        return pos == target.len();
    }
    let budget = target.len() - pos;
    let mut minimum = 0;
    for slot in &slots[slot_index..] {
        minimum += match &images[slot.var] {
            Some(image) => image.len(),
            None => 1,
        };
    }
    if minimum > budget {
        return false;
    }
    let slot = slots[slot_index];
    match images[slot.var].clone() {
        Some(image) => {
            let expected: Vec<Letter> = if slot.inverted {
                image.iter().rev().map(Letter::inverse).collect()
            } else {
                image
            };
            if target[pos..pos + expected.len()] == expected[..] {
                assign_slots(target, slots, slot_index + 1, pos + expected.len(), images)
            } else {
                false
            }
        }
        None => {
            debug_assert!(!slot.inverted, "first occurrences are upright");
            for len in 1..=budget {
                images[slot.var] = Some(target[pos..pos + len].to_vec());
                if assign_slots(target, slots, slot_index + 1, pos + len, images) {
                    return true;
                }
            }
            images[slot.var] = None;
            false
        }
    }
}

/// Shared shape table for repeated queries.
pub struct Oracle {
    shapes: Vec<Shape>,
    max_len: usize,
}

impl Oracle {
    /// Builds the table of every raw quadratic word of length up to `max_len`.
    pub fn new(max_len: usize) -> Oracle {
        Oracle {
            shapes: enumerate_shapes(max_len),
            max_len,
        }
    }

    fn search(&self, target: &[Letter], orientable: bool, genus: usize) -> bool {
        self.shapes
            .iter()
            .filter(|s| s.orientable == orientable && s.genus == genus)
            .any(|s| factors_cyclically(target, s))
    }

    /// Least number of commutators multiplying to `u`, or None if there is no
    /// such product. Derived by exhausting, genus by genus, every orientable
    /// raw quadratic word short enough to have a nonempty-image factorization
    /// of the conjugacy class of `u`.
    pub fn genus_plus(&self, u: &Word) -> Option<usize> {
        let (core, _) = u.cyclic_reduce();
        assert!(core.len() <= self.max_len, "target exceeds oracle table");
        if core.is_empty() {
            return Some(0);
        }
        let letters = core.letters();
        (1..=core.len() / 4).find(|&g| self.search(letters, true, g))
    }

    /// Least number of squares multiplying to `u`, or None if there is no
    /// such product. Searches nonorientable raw quadratic words genus by
    /// genus; a product of h commutators is always a product of 2h+1 squares
    /// ([U,V] = (U⁻¹)²(UV⁻¹)²V², applied h times), so once that many squares
    /// suffice the search below that count is conclusive.
    pub fn genus_minus(&self, u: &Word) -> Option<usize> {
        let (core, _) = u.cyclic_reduce();
        assert!(core.len() <= self.max_len, "target exceeds oracle table");
        if core.is_empty() {
            return Some(0);
        }
        let letters = core.letters();
        let commutator_cap = self.genus_plus(u).map(|h| 2 * h + 1);
        let search_cap = match commutator_cap {
            Some(cap) => (cap - 1).min(core.len() / 2),
            None => core.len() / 2,
        };
        (1..=search_cap)
            .find(|&g| self.search(letters, false, g))
            .or(commutator_cap)
    }
}

/// Every freely reduced constant word of length `len` over the given
/// one-letter alphabet names, in a fixed order.
pub fn reduced_words(alphabet: &[&str], len: usize) -> Vec<Word> {
    let mut letters = Vec::new();
    for name in alphabet {
        let symbol = crate::word::Symbol::constant(name);
        letters.push(Letter::new(symbol.clone(), Sign::Plus));
        letters.push(Letter::new(symbol, Sign::Minus));
    }
    let mut out = Vec::new();
    let mut current: Vec<Letter> = Vec::new();
    fn extend(letters: &[Letter], current: &mut Vec<Letter>, len: usize, out: &mut Vec<Word>) {
        if current.len() == len {
            out.push(Word::from_letters(current.iter().cloned()));
            return;
        }
        for letter in letters {
            if let Some(last) = current.last() {
                if last.is_inverse_of(letter) {
                    continue;
                }
            }
            current.push(letter.clone());
            extend(letters, current, len, out);
            current.pop();
        }
    }
    extend(&letters, &mut current, len, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str) -> Word {
        Word::parse_constant(text).unwrap()
    }

    #[test]
    fn shape_table_sizes_match_double_factorials() {
        // (2k-1)!! pairings times 2^k sign patterns, minus the x·x⁻¹-adjacent
        // ones, for k = 1..4.
        let oracle = Oracle::new(8);
        let by_len = |len: usize| oracle.shapes.iter().filter(|s| s.slots.len() == len).count();
        assert_eq!(by_len(2), 1); // xx survives, xx⁻¹ is reducible
        assert!(by_len(4) > 0 && by_len(4) < 12);
        let total: usize = oracle.shapes.len();
        assert!(total < 1814, "reducible shapes are dropped");
        assert!(total > 1000);
    }

    #[test]
    fn surface_reading_matches_known_words() {
        // x⁻¹y⁻¹xy
        let commutator = [
            Slot { var: 0, inverted: true },
            Slot { var: 1, inverted: true },
            Slot { var: 0, inverted: false },
            Slot { var: 1, inverted: false },
        ];
        assert_eq!(surface_of(&commutator), (true, 1));
        // x²
        let square = [
            Slot { var: 0, inverted: false },
            Slot { var: 0, inverted: false },
        ];
        assert_eq!(surface_of(&square), (false, 1));
        // x²y²
        let two_squares = [
            Slot { var: 0, inverted: false },
            Slot { var: 0, inverted: false },
            Slot { var: 1, inverted: false },
            Slot { var: 1, inverted: false },
        ];
        assert_eq!(surface_of(&two_squares), (false, 2));
        // x⁻¹y⁻¹z⁻¹xyz
        let six = [
            Slot { var: 0, inverted: true },
            Slot { var: 1, inverted: true },
            Slot { var: 2, inverted: true },
            Slot { var: 0, inverted: false },
            Slot { var: 1, inverted: false },
            Slot { var: 2, inverted: false },
        ];
        assert_eq!(surface_of(&six), (true, 1));
        // xyxy⁻¹ (Klein bottle)
        let klein = [
            Slot { var: 0, inverted: false },
            Slot { var: 1, inverted: false },
            Slot { var: 0, inverted: false },
            Slot { var: 1, inverted: true },
        ];
        assert_eq!(surface_of(&klein), (false, 2));
    }

    #[test]
    fn oracle_genus_of_small_words() {
        let oracle = Oracle::new(8);
        let commutator = w("a^-1 b^-1 a b");
        assert_eq!(oracle.genus_plus(&commutator), Some(1));
        assert_eq!(oracle.genus_minus(&commutator), Some(3));

        let squared = commutator.pow(2);
        assert_eq!(oracle.genus_plus(&squared), Some(2));
        assert_eq!(oracle.genus_minus(&squared), Some(1));

        assert_eq!(oracle.genus_plus(&w("a^2 b^4")), None);
        assert_eq!(oracle.genus_minus(&w("a^2 b^4")), Some(2));
        assert_eq!(oracle.genus_minus(&w("a^4")), Some(1));
        assert_eq!(oracle.genus_minus(&w("a^3")), None);
        assert_eq!(oracle.genus_plus(&w("a^-1 b^-2 a b^2")), Some(1));
        assert_eq!(oracle.genus_minus(&w("a^-1 b^-2 a b^2")), Some(2));
        assert_eq!(oracle.genus_plus(&Word::empty()), Some(0));
        assert_eq!(oracle.genus_minus(&Word::empty()), Some(0));
    }

    #[test]
    fn reduced_word_counts() {
        assert_eq!(reduced_words(&["a", "b"], 0).len(), 1);
        assert_eq!(reduced_words(&["a", "b"], 1).len(), 4);
        assert_eq!(reduced_words(&["a", "b"], 2).len(), 12);
        assert_eq!(reduced_words(&["a", "b"], 3).len(), 36);
    }
}
