//! Cancellation-free matching: all ways a cyclically reduced constant word
//! is spelled, letter for letter with no free reduction, by substituting
//! nonempty constant words for the variables of a quadratic cyclic word.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::surface;
use crate::wicks::{symmetries, FormSymmetry};
use crate::word::{CyclicWord, Letter, Sign, Substitution, Symbol, Word};

#[derive(Debug, Error)]
pub enum MatchError {
    #[error("form is not quadratic: {0}")]
    NotQuadratic(String),
    #[error("target word must use constants only: {0}")]
    VariablesInTarget(String),
    #[error("target word is empty")]
    EmptyTarget,
}

/// One cancellation-free factorization of the target along the form.
///
/// `boundary_cuts[j]` is the position, in the target's canonical rotation,
/// where the image of slot j starts; `rotation_offset == boundary_cuts[0]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Match {
    pub form: CyclicWord,
    pub rotation_offset: usize,
    pub boundary_cuts: Vec<usize>,
    pub assignment: Substitution,
}

/// Search instrumentation: `candidates` counts abandoned or completed
/// branches (leaves of the pruned search tree) and never exceeds `bound`,
/// the polynomial k·C(n+k, k).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchStats {
    pub candidates: u128,
    pub bound: u128,
}

fn binomial_saturating(n: u128, k: u128) -> u128 {
    let k = k.min(n - k.min(n));
    let mut result: u128 = 1;
    for i in 0..k {
        result = result.saturating_mul(n - i);
        result /= i + 1;
    }
    result
}

pub fn candidate_bound(target_len: usize, form_len: usize) -> u128 {
    let n = target_len as u128;
    let k = form_len as u128;
    k.saturating_mul(binomial_saturating(n + k, k))
}

struct Search<'a> {
    form_letters: &'a [Letter],
    rotated: Vec<Letter>,
    anchor: usize,
    n: usize,
    images: BTreeMap<Symbol, Word>,
    candidates: u128,
    out: Vec<(usize, Vec<usize>, Substitution)>,
}

impl Search<'_> {
    /// Minimum total length of slots j.. given current bindings.
    fn min_remaining(&self, j: usize) -> usize {
        self.form_letters[j..]
            .iter()
            .map(|l| self.images.get(&l.symbol).map_or(1, Word::len))
            .sum()
    }

    fn extend(&mut self, j: usize, pos: usize, cuts: &mut Vec<usize>) {
        if j == self.form_letters.len() {
            self.candidates += 1;
            if pos == self.n {
                let assignment = Substitution::from_pairs(
                    self.images.iter().map(|(s, w)| (s.clone(), w.clone())),
                );
                self.out.push((self.anchor, cuts.clone(), assignment));
            }
            return;
        }
        let letter = &self.form_letters[j];
        cuts.push((self.anchor + pos) % self.n);
        if let Some(image) = self.images.get(&letter.symbol).cloned() {
            let len = image.len();
            let segment_matches = pos + len + self.min_remaining(j + 1) <= self.n && {
                let want: Vec<Letter> = match letter.sign {
                    Sign::Plus => image.letters().to_vec(),
                    Sign::Minus => image.inverse().letters().to_vec(),
                };
                self.rotated[pos..pos + len] == want[..]
            };
            if segment_matches {
                self.extend(j + 1, pos + len, cuts);
            } else {
                self.candidates += 1;
            }
        } else {
            // The partner occurrence (if still ahead) will need the same
            // length, and every other unbound slot at least one letter.
            let rest_min = self.min_remaining(j + 1);
            let partner_ahead = self.form_letters[j + 1..]
                .iter()
                .filter(|l| l.symbol == letter.symbol)
                .count();
            let budget = self.n - pos;
            let mut tried = false;
            for len in 1..=budget {
                if pos + len + rest_min + partner_ahead * (len - 1) > self.n {
                    break;
                }
                tried = true;
                let segment = Word::from_letters(self.rotated[pos..pos + len].to_vec());
                debug_assert_eq!(segment.len(), len, "segments of a reduced word are reduced");
                let image = match letter.sign {
                    Sign::Plus => segment,
                    Sign::Minus => segment.inverse(),
                };
                self.images.insert(letter.symbol.clone(), image);
                self.extend(j + 1, pos + len, cuts);
                self.images.remove(&letter.symbol);
            }
            if !tried {
                self.candidates += 1;
            }
        }
        cuts.pop();
    }
}

/// Spells the images along the form rotation without reduction; used to
/// re-check every reported match.
fn spells_exactly(form: &CyclicWord, assignment: &Substitution, rotated: &[Letter]) -> bool {
    let mut spelled: Vec<Letter> = Vec::with_capacity(rotated.len());
    for letter in form.letters() {
        let image = assignment.apply(&Word::from_letter(letter.clone()));
        spelled.extend(image.letters().iter().cloned());
    }
    spelled == rotated
}

/// All cancellation-free matches of `form` against `u`, with search
/// instrumentation. Deterministic order: by anchor rotation, then cuts.
pub fn cancellation_free_matches(
    form: &CyclicWord,
    u: &CyclicWord,
) -> Result<(Vec<Match>, MatchStats), MatchError> {
    let report = surface::classify_quadratic(form);
    if !report.is_quadratic {
        return Err(MatchError::NotQuadratic(form.to_string()));
    }
    if u.is_empty() {
        return Err(MatchError::EmptyTarget);
    }
    if u.letters().iter().any(|l| l.symbol.is_variable()) {
        return Err(MatchError::VariablesInTarget(u.to_string()));
    }
    let n = u.len();
    let k = form.len();
    let bound = candidate_bound(n, k);
    if k > n {
        return Ok((Vec::new(), MatchStats { candidates: 0, bound }));
    }
    let mut collected: Vec<(usize, Vec<usize>, Substitution)> = Vec::new();
    let mut candidates: u128 = 0;
    for anchor in 0..n {
        let mut search = Search {
            form_letters: form.letters(),
            rotated: u.rotation(anchor).letters().to_vec(),
            anchor,
            n,
            images: BTreeMap::new(),
            candidates: 0,
            out: Vec::new(),
        };
        let mut cuts = Vec::with_capacity(k);
        search.extend(0, 0, &mut cuts);
        candidates += search.candidates;
        collected.extend(search.out);
    }
    assert!(
        candidates <= bound,
        "candidate count {candidates} exceeds bound {bound} (n={n}, k={k})"
    );
    let mut matches: Vec<Match> = collected
        .into_iter()
        .map(|(anchor, cuts, assignment)| Match {
            form: form.clone(),
            rotation_offset: anchor,
            boundary_cuts: cuts,
            assignment,
        })
        .collect();
    for m in &matches {
        debug_assert!(spells_exactly(
            form,
            &m.assignment,
            u.rotation(m.rotation_offset).letters()
        ));
        debug_assert!(m.assignment.pairs().all(|(_, w)| !w.is_empty()));
    }
    matches.sort_by(|a, b| {
        (a.rotation_offset, &a.boundary_cuts)
            .cmp(&(b.rotation_offset, &b.boundary_cuts))
    });
    Ok((matches, MatchStats { candidates, bound }))
}

fn apply_symmetry(m: &Match, sym: &FormSymmetry, n: usize) -> Match {
    let s = sym.rotation;
    let k = m.boundary_cuts.len();
    let inverse = sym.relabel.inverse();
    let assignment = Substitution::from_pairs(m.assignment.pairs().map(|(x, _)| {
        let source = inverse.image_of(x);
        let image = m.assignment.apply(&Word::from_letter(source));
        (x.clone(), image)
    }));
    let boundary_cuts: Vec<usize> = (0..k).map(|j| m.boundary_cuts[(s + j) % k]).collect();
    Match {
        form: m.form.clone(),
        rotation_offset: boundary_cuts.first().copied().unwrap_or(0) % n.max(1),
        boundary_cuts,
        assignment,
    }
}

fn match_key(m: &Match) -> (Vec<Word>, usize, Vec<usize>) {
    (
        m.assignment.pairs().map(|(_, w)| w.clone()).collect(),
        m.rotation_offset,
        m.boundary_cuts.clone(),
    )
}

/// One representative per orbit under the form's rotation-relabeling
/// symmetries; the representative has the least assignment in the word
/// order. Matches related by a symmetry describe the same factorization of
/// the target with the variables renamed.
pub fn dedupe_matches(matches: &[Match]) -> Result<Vec<Match>, MatchError> {
    let Some(first) = matches.first() else {
        return Ok(Vec::new());
    };
    let syms = symmetries(&first.form).map_err(|_| MatchError::NotQuadratic(first.form.to_string()))?;
    let n: usize = first
        .assignment
        .pairs()
        .map(|(_, w)| 2 * w.len())
        .sum();
    let mut reps: Vec<Match> = Vec::new();
    let mut seen: std::collections::BTreeSet<(Vec<Word>, usize, Vec<usize>)> =
        Default::default();
    for m in matches {
        let orbit: Vec<Match> = syms.iter().map(|sym| apply_symmetry(m, sym, n)).collect();
        let rep = orbit
            .into_iter()
            .min_by(|a, b| match_key(a).cmp(&match_key(b)))
            .expect("symmetries contain the identity");
        if seen.insert(match_key(&rep)) {
            reps.push(rep);
        }
    }
    reps.sort_by(|a, b| match_key(a).cmp(&match_key(b)));
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wicks::{canonical_form, enumerate_wicks};

    fn cyc_const(text: &str) -> CyclicWord {
        CyclicWord::from_word(&Word::parse_constant(text).unwrap())
    }

    fn form(text: &str) -> CyclicWord {
        canonical_form(&CyclicWord::from_word(&Word::parse_variable(text).unwrap())).unwrap()
    }

    fn image(m: &Match, var: &str) -> String {
        m.assignment
            .get(&Symbol::variable(var))
            .expect("bound")
            .to_string()
    }

    #[test]
    fn commutator_of_length_four_target() {
        let w = form("x^-1 y^-1 x y");
        let u = cyc_const("a^-1 b^-1 a b");
        let (matches, stats) = cancellation_free_matches(&w, &u).unwrap();
        assert_eq!(matches.len(), 4);
        assert!(stats.candidates <= stats.bound);
        let deduped = dedupe_matches(&matches).unwrap();
        assert_eq!(deduped.len(), 1);
        assert_eq!(image(&deduped[0], "v1"), "a");
        assert_eq!(image(&deduped[0], "v2"), "b");
    }

    #[test]
    fn commutator_of_longer_target() {
        let w = form("x^-1 y^-1 x y");
        let u = cyc_const("a^-1 c^-1 a b c b^-1");
        let (matches, _) = cancellation_free_matches(&w, &u).unwrap();
        // The single class contains the assignment v1↦ab, v2↦c.
        assert!(matches
            .iter()
            .any(|m| image(m, "v1") == "a b" && image(m, "v2") == "c"));
        let deduped = dedupe_matches(&matches).unwrap();
        assert_eq!(deduped.len(), 1);
        assert_eq!(image(&deduped[0], "v1"), "c");
        assert_eq!(image(&deduped[0], "v2"), "b^-1 a^-1");
    }

    #[test]
    fn commutator_is_never_a_square() {
        let u = cyc_const("a^-1 b^-1 a b");
        let (matches, _) = cancellation_free_matches(&form("x^2"), &u).unwrap();
        assert!(matches.is_empty());
    }

    #[test]
    fn commutator_is_not_a_product_of_two_squares() {
        let u = cyc_const("a^-1 b^-1 a b");
        for f in enumerate_wicks(false, 2, false).unwrap() {
            let (matches, _) = cancellation_free_matches(&f.form, &u).unwrap();
            assert!(matches.is_empty(), "unexpected match of {}", f.form);
        }
    }

    #[test]
    fn square_matches_come_in_symmetry_orbits() {
        let u = cyc_const("a b a b");
        let (matches, _) = cancellation_free_matches(&form("x^2"), &u).unwrap();
        assert_eq!(matches.len(), 4);
        let deduped = dedupe_matches(&matches).unwrap();
        assert_eq!(deduped.len(), 2);
    }

    #[test]
    fn form_longer_than_target_is_empty() {
        let u = cyc_const("a b");
        let w = form("x^-1 y^-1 x y");
        let (matches, _) = cancellation_free_matches(&w, &u).unwrap();
        assert!(matches.is_empty());
    }

    #[test]
    fn rejects_bad_inputs() {
        let u = cyc_const("a b");
        let not_quadratic = CyclicWord::from_word(&Word::parse_variable("x y x").unwrap());
        assert!(cancellation_free_matches(&not_quadratic, &u).is_err());
        let mixed = CyclicWord::from_word(&Word::parse_variable("x y").unwrap());
        assert!(cancellation_free_matches(&form("x^2"), &mixed).is_err());
    }

    /// Generate-and-test oracle: every rotation, every composition of the
    /// target length into k nonempty parts, checked by substitution.
    fn oracle_matches(w: &CyclicWord, u: &CyclicWord) -> Vec<(usize, Vec<usize>)> {
        let n = u.len();
        let k = w.len();
        let mut out = Vec::new();
        if k > n {
            return out;
        }
        fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
            if parts == 1 {
                return if total >= 1 { vec![vec![total]] } else { vec![] };
            }
            let mut all = Vec::new();
            for first in 1..=total.saturating_sub(parts - 1) {
                for mut rest in compositions(total - first, parts - 1) {
                    rest.insert(0, first);
                    all.push(rest);
                }
            }
            all
        }
        for anchor in 0..n {
            let rotated = u.rotation(anchor);
            for comp in compositions(n, k) {
                let mut images: BTreeMap<Symbol, Word> = BTreeMap::new();
                let mut pos = 0;
                let mut ok = true;
                let mut cuts = Vec::new();
                for (letter, &len) in w.letters().iter().zip(&comp) {
                    cuts.push((anchor + pos) % n);
                    let segment =
                        Word::from_letters(rotated.letters()[pos..pos + len].to_vec());
                    let oriented = match letter.sign {
                        Sign::Plus => segment,
                        Sign::Minus => segment.inverse(),
                    };
                    match images.get(&letter.symbol) {
                        None => {
                            images.insert(letter.symbol.clone(), oriented);
                        }
                        Some(existing) if *existing == oriented => {}
                        Some(_) => {
                            ok = false;
                            break;
                        }
                    }
                    pos += len;
                }
                if ok {
                    out.push((anchor, cuts));
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn search_agrees_with_generate_and_test() {
        let targets = [
            "a^-1 b^-1 a b",
            "a^-1 c^-1 a b c b^-1",
            "a b a b",
            "a a b b",
            "a b a^-1 b",
            "a b c a c b",
            "a^2 b^2 a^-1 c",
        ];
        let forms = ["x^-1 y^-1 x y", "x^2", "x x y y", "x y^-1 x y", "x^-1 y^-1 z^-1 x y z"];
        for t in targets {
            let u = cyc_const(t);
            for f in forms {
                let w = form(f);
                let (matches, stats) = cancellation_free_matches(&w, &u).unwrap();
                let got: Vec<(usize, Vec<usize>)> = matches
                    .iter()
                    .map(|m| (m.rotation_offset, m.boundary_cuts.clone()))
                    .collect();
                assert_eq!(got, oracle_matches(&w, &u), "form {f} target {t}");
                assert!(stats.candidates <= stats.bound);
            }
        }
    }

    #[test]
    fn dedupe_representative_is_least() {
        let w = form("x^-1 y^-1 x y");
        let u = cyc_const("a^-1 b^-1 a b");
        let (matches, _) = cancellation_free_matches(&w, &u).unwrap();
        let deduped = dedupe_matches(&matches).unwrap();
        // Orbit contains x↦b, y↦a⁻¹ and similar; the kept one is least.
        for m in &matches {
            let key_rep = match_key(&deduped[0]);
            let key_m = match_key(m);
            assert!(key_rep <= key_m);
        }
    }

    #[test]
    fn dedupe_of_empty_is_empty() {
        assert!(dedupe_matches(&[]).unwrap().is_empty());
    }
}
