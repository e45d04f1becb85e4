//! Invertible variable substitutions with tracked inverses, the move-by-move
//! rewriting loop that makes a solved quadratic equation cancellation-free,
//! and reduction of quadratic words to the standard genus form.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::surface::{self, corner_structure};
use crate::word::{CyclicWord, Letter, Sign, Substitution, Symbol, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NormalizeError {
    #[error("word is not quadratic: {0}")]
    NotQuadratic(String),
    #[error("target word must be nonempty")]
    TrivialTarget,
    #[error("target word must be cyclically reduced over the constants: {0}")]
    BadTarget(String),
    #[error("variable {0} must be bound to a constant word, found {1}")]
    NonConstantImage(String, String),
    #[error("substitution does not solve the equation: expected {expected}, got {got}")]
    SolutionMismatch { expected: String, got: String },
    #[error("{move_kind} move inapplicable: {detail}")]
    HypothesisViolation { move_kind: MoveKind, detail: String },
}

/// The three rewriting moves. Each one composes an automorphism of the
/// variable group onto the running solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    /// A pair of letters only ever appears as a block; the block is merged
    /// into its first letter and the second variable disappears.
    Redundancy,
    /// Two adjacent slot images cancel; the cancelled part is carried by a
    /// fresh variable (or absorbed into a conjugation when both slots belong
    /// to the same variable).
    Cancellation,
    /// A variable with empty image is deleted by conjugating the remaining
    /// variables through one of its endpoints.
    TrivialImage,
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            MoveKind::Redundancy => "redundancy",
            MoveKind::Cancellation => "cancellation",
            MoveKind::TrivialImage => "trivial-image",
        };
        f.write_str(name)
    }
}

/// An automorphism of the free group on the variables, stored as a pair of
/// mutually inverse substitutions so it can be applied in either direction
/// without inverting anything on the fly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackedAutomorphism {
    forward: Substitution,
    backward: Substitution,
}

impl TrackedAutomorphism {
    pub fn identity() -> TrackedAutomorphism {
        TrackedAutomorphism {
            forward: Substitution::identity(),
            backward: Substitution::identity(),
        }
    }

    /// Pairs a map with its inverse. Debug builds verify the two really are
    /// inverse on every symbol either of them moves.
    pub fn from_parts(forward: Substitution, backward: Substitution) -> TrackedAutomorphism {
        let auto = TrackedAutomorphism { forward, backward };
        debug_assert!(auto.roundtrips(), "forward and backward maps are not inverse");
        auto
    }

    pub fn forward(&self) -> &Substitution {
        &self.forward
    }

    pub fn backward(&self) -> &Substitution {
        &self.backward
    }

    pub fn apply(&self, w: &Word) -> Word {
        self.forward.apply(w)
    }

    pub fn unapply(&self, w: &Word) -> Word {
        self.backward.apply(w)
    }

    pub fn support(&self) -> BTreeSet<Symbol> {
        self.forward
            .support()
            .chain(self.backward.support())
            .cloned()
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.forward.is_identity() && self.backward.is_identity()
    }

    /// `self` first, then `next`.
    pub fn then(&self, next: &TrackedAutomorphism) -> TrackedAutomorphism {
        TrackedAutomorphism {
            forward: self.forward.compose(&next.forward),
            backward: next.backward.compose(&self.backward),
        }
    }

    pub fn inverse(&self) -> TrackedAutomorphism {
        TrackedAutomorphism {
            forward: self.backward.clone(),
            backward: self.forward.clone(),
        }
    }

    pub fn roundtrips(&self) -> bool {
        self.support().iter().all(|v| {
            let v_word = Word::from_letter(Letter::new(v.clone(), Sign::Plus));
            self.backward.apply(&self.forward.apply(&v_word)) == v_word
                && self.forward.apply(&self.backward.apply(&v_word)) == v_word
        })
    }
}

/// One applied move with the measure it reduced. The measure is the pair
/// (total image length over the variables present, number of variables),
/// ordered lexicographically.
#[derive(Debug, Clone)]
pub struct ReductionStep {
    pub kind: MoveKind,
    pub automorphism: TrackedAutomorphism,
    pub measure_before: (usize, usize),
    pub measure_after: (usize, usize),
}

#[derive(Debug, Clone, Default)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
}

/// Result of [`reduce_solution`]: the rewritten word, its cancellation-free
/// solution, and the automorphism connecting it back to the input
/// (`apply(automorphism.forward, w) = word`, and the original solution is
/// recovered as `automorphism.forward` followed by `assignment`).
#[derive(Debug, Clone)]
pub struct Reduction {
    pub word: Word,
    pub assignment: Substitution,
    pub automorphism: TrackedAutomorphism,
    pub trace: ReductionTrace,
}

/// Result of [`standard_form_automorphism`]: `apply(automorphism.forward, w)`
/// equals `standard`, which is the commutator word `[x1,y1]...[xg,yg]` or the
/// square word `x1^2...xg^2` depending on orientability.
#[derive(Debug, Clone)]
pub struct StandardForm {
    pub automorphism: TrackedAutomorphism,
    pub standard: Word,
    pub orientable: bool,
    pub genus: usize,
}

fn vars_of(w: &Word) -> BTreeSet<Symbol> {
    w.symbols().cloned().collect()
}

fn var_word(v: &Symbol) -> Word {
    Word::from_letter(Letter::new(v.clone(), Sign::Plus))
}

/// Occurrence positions (with signs) of every symbol, in reading order.
fn occurrences(w: &Word) -> std::collections::BTreeMap<Symbol, Vec<(usize, Sign)>> {
    let mut table: std::collections::BTreeMap<Symbol, Vec<(usize, Sign)>> = Default::default();
    for (i, l) in w.letters().iter().enumerate() {
        table.entry(l.symbol.clone()).or_default().push((i, l.sign));
    }
    table
}

fn measure(w: &Word, psi: &Substitution) -> (usize, usize) {
    let vars = vars_of(w);
    let total = vars.iter().map(|v| psi.image_of(v).len()).sum();
    (total, vars.len())
}

/// Image of a single signed letter.
fn oriented_image(psi: &Substitution, letter: &Letter) -> Word {
    psi.apply(&Word::from_letter(letter.clone()))
}

/// Euler characteristic and orientability of the cyclic closure; the pair a
/// valid move must preserve.
fn closure_profile(w: &Word) -> (i64, bool) {
    let closure = CyclicWord::from_word(w);
    let data = surface::surface_data(&closure).expect("closure of a quadratic word");
    (data.chi, data.orientable)
}

/// Picks fresh variable names z1, z2, ... skipping any suffix already in use.
struct FreshVars {
    next: u64,
}

impl FreshVars {
    fn avoiding<'a, I: IntoIterator<Item = &'a Symbol>>(taken: I) -> FreshVars {
        let mut next = 1;
        for sym in taken {
            if let Some(rest) = sym.name().strip_prefix('z') {
                if let Ok(n) = rest.parse::<u64>() {
                    next = next.max(n + 1);
                }
            }
        }
        FreshVars { next }
    }

    fn take(&mut self) -> Symbol {
        let sym = Symbol::variable(&format!("z{}", self.next));
        self.next += 1;
        sym
    }
}

/// Automorphism moving a single variable.
fn single_move(var: &Symbol, forward: Word, backward: Word) -> TrackedAutomorphism {
    TrackedAutomorphism::from_parts(
        Substitution::identity().bind(var.clone(), forward),
        Substitution::identity().bind(var.clone(), backward),
    )
}

fn sign_flip(var: &Symbol) -> TrackedAutomorphism {
    let inv = Word::from_letter(Letter::new(var.clone(), Sign::Minus));
    single_move(var, inv.clone(), inv)
}

/// `y -> c^-1 y c` for every listed variable except `fixed`. With `fixed`
/// equal to the single symbol of `c` this is the Whitehead-style conjugation
/// used to strip an outer letter; with `fixed` absent it is an inner
/// automorphism, used to rotate a cyclically reduced word.
fn conjugate_all(
    vars: &BTreeSet<Symbol>,
    c: &Word,
    fixed: Option<&Symbol>,
) -> TrackedAutomorphism {
    let c_inv = c.inverse();
    let mut fwd = Substitution::identity();
    let mut bwd = Substitution::identity();
    for v in vars {
        if Some(v) == fixed {
            continue;
        }
        let vw = var_word(v);
        fwd = fwd.bind(v.clone(), c_inv.concat(&vw).concat(c));
        bwd = bwd.bind(v.clone(), c.concat(&vw).concat(&c_inv));
    }
    TrackedAutomorphism::from_parts(fwd, bwd)
}

/// Deletes variable `v` from a cyclically reduced quadratic word by the
/// Whitehead automorphism determined by the endpoint classes of its glued
/// edge. Fails when the edge is a loop (equal endpoints); the corner classes
/// then give no consistent conjugation.
///
/// Every remaining variable `y` maps to `v^a y v^-b` where `a`/`b` are 1
/// exactly when the respective end of `y`'s edge lies at `v`'s initial
/// vertex. Both `v`-slots of the word collapse and the corner contributions
/// cancel pairwise, leaving the deleted word conjugated by a power of `v`
/// that one final inner twist removes.
fn whitehead_eliminate(
    w: &Word,
    v: &Symbol,
) -> Result<(TrackedAutomorphism, Word), String> {
    debug_assert!(w.is_cyclically_reduced());
    let corners = corner_structure(w.letters()).map_err(|e| e.to_string())?;
    let ends = corners.edges.get(v).ok_or("variable does not occur")?;
    if ends.init_class == ends.term_class {
        return Err(format!(
            "the edge of {} is a loop; no conjugation deletes it",
            v.name()
        ));
    }
    let apex = ends.init_class;
    let height = |class: usize| -> i64 { (class == apex) as i64 };
    let v_pow = |e: i64| Word::from_letter(Letter::new(v.clone(), Sign::Plus)).pow(e);

    let mut fwd = Substitution::identity();
    let mut bwd = Substitution::identity();
    for (y, edge) in &corners.edges {
        if y == v {
            continue;
        }
        let a = height(edge.init_class);
        let b = height(edge.term_class);
        if a == 0 && b == 0 {
            continue;
        }
        let yw = var_word(y);
        fwd = fwd.bind(y.clone(), v_pow(a).concat(&yw).concat(&v_pow(-b)));
        bwd = bwd.bind(y.clone(), v_pow(-a).concat(&yw).concat(&v_pow(b)));
    }
    let mut auto = TrackedAutomorphism::from_parts(fwd, bwd);

    // The raw image is v^s (deleted word) v^-s where s is the height of the
    // wrap corner; an inner twist by v^-s removes the residue. The twist is
    // harmless for solutions because it only fires when v's image is trivial
    // or v is being discarded.
    let s = height(corners.class_of[0]);
    if s != 0 {
        let rest: BTreeSet<Symbol> = vars_of(w).into_iter().filter(|y| y != v).collect();
        auto = auto.then(&conjugate_all(&rest, &v_pow(s), Some(v)));
    }

    let out = auto.apply(w);
    assert!(
        out.symbols().all(|s| s != v),
        "eliminated variable survived: {} in {}",
        v.name(),
        out
    );
    let expected = Word::from_letters(
        w.letters().iter().filter(|l| &l.symbol != v).cloned(),
    );
    assert_eq!(out, expected, "elimination must delete the two slots exactly");
    Ok((auto, out))
}

/// One move of the rewriting loop, chosen in the fixed order redundancy,
/// cancellation, trivial image.
enum ChosenMove {
    Found {
        kind: MoveKind,
        auto: TrackedAutomorphism,
        fresh_binding: Option<(Symbol, Word)>,
    },
    None,
    Violation(NormalizeError),
}

fn choose_move(w: &Word, psi: &Substitution, fresh: &mut FreshVars) -> ChosenMove {
    let letters = w.letters();

    // Redundancy: blocks read in the ordinary (non-wrapping) sense.
    if let Some((p, q)) = surface::redundant_pair(letters, false) {
        let sym = p.symbol.clone();
        let plus = Letter::new(sym.clone(), Sign::Plus);
        let (f, b) = match p.sign {
            Sign::Plus => (
                vec![plus.clone(), q.inverse()],
                vec![plus.clone(), q.clone()],
            ),
            Sign::Minus => (
                vec![q.clone(), plus.clone()],
                vec![q.inverse(), plus.clone()],
            ),
        };
        return ChosenMove::Found {
            kind: MoveKind::Redundancy,
            auto: single_move(&sym, Word::from_letters(f), Word::from_letters(b)),
            fresh_binding: None,
        };
    }

    // Cancellation at the leftmost adjacent pair of nonempty images.
    for i in 0..letters.len().saturating_sub(1) {
        let (lp, lq) = (&letters[i], &letters[i + 1]);
        let left = oriented_image(psi, lp);
        let right = oriented_image(psi, lq);
        if left.is_empty() || right.is_empty() {
            continue;
        }
        if !left.letters().last().unwrap().is_inverse_of(&right.letters()[0]) {
            continue;
        }
        if lp.symbol == lq.symbol {
            // Both slots of one variable meet; its image is not cyclically
            // reduced, and conjugating the variable by a fresh carrier for
            // the cancelled tail fixes the junction.
            let (_, conj) = left.cyclic_reduce();
            assert!(!conj.is_empty());
            let z = fresh.take();
            let zw = var_word(&z);
            let vw = var_word(&lp.symbol);
            let auto = single_move(
                &lp.symbol,
                zw.inverse().concat(&vw).concat(&zw),
                zw.concat(&vw).concat(&zw.inverse()),
            );
            return ChosenMove::Found {
                kind: MoveKind::Cancellation,
                auto,
                fresh_binding: Some((z, conj)),
            };
        }
        // Maximal cancelled part B: left = A B, right = B^-1 C.
        let (ll, rl) = (left.letters(), right.letters());
        let mut t = 0;
        while t < ll.len() && t < rl.len() && ll[ll.len() - 1 - t].is_inverse_of(&rl[t]) {
            t += 1;
        }
        let b_word = left.subword(left.len() - t, left.len());
        let z = fresh.take();
        let z_plus = Letter::new(z.clone(), Sign::Plus);
        let z_minus = z_plus.inverse();
        let p_plus = Letter::new(lp.symbol.clone(), Sign::Plus);
        let q_plus = Letter::new(lq.symbol.clone(), Sign::Plus);
        let (pf, pb) = match lp.sign {
            Sign::Plus => (
                vec![p_plus.clone(), z_plus.clone()],
                vec![p_plus.clone(), z_minus.clone()],
            ),
            Sign::Minus => (
                vec![z_minus.clone(), p_plus.clone()],
                vec![z_plus.clone(), p_plus.clone()],
            ),
        };
        let (qf, qb) = match lq.sign {
            Sign::Plus => (
                vec![z_minus.clone(), q_plus.clone()],
                vec![z_plus.clone(), q_plus.clone()],
            ),
            Sign::Minus => (
                vec![q_plus.clone(), z_plus.clone()],
                vec![q_plus.clone(), z_minus.clone()],
            ),
        };
        let fwd = Substitution::identity()
            .bind(lp.symbol.clone(), Word::from_letters(pf))
            .bind(lq.symbol.clone(), Word::from_letters(qf));
        let bwd = Substitution::identity()
            .bind(lp.symbol.clone(), Word::from_letters(pb))
            .bind(lq.symbol.clone(), Word::from_letters(qb));
        return ChosenMove::Found {
            kind: MoveKind::Cancellation,
            auto: TrackedAutomorphism::from_parts(fwd, bwd),
            fresh_binding: Some((z, b_word)),
        };
    }

    // Trivial images.
    let trivial: Vec<Symbol> = vars_of(w)
        .into_iter()
        .filter(|v| psi.image_of(v).is_empty())
        .collect();
    if trivial.is_empty() {
        return ChosenMove::None;
    }
    // An outer pair v ... v^-1 strips directly.
    for v in &trivial {
        let first = &letters[0];
        if &first.symbol == v && letters.last() == Some(&first.inverse()) {
            let vars = vars_of(w);
            let auto = conjugate_all(&vars, &Word::from_letter(first.clone()), Some(v));
            return ChosenMove::Found {
                kind: MoveKind::TrivialImage,
                auto,
                fresh_binding: None,
            };
        }
    }
    if w.is_cyclically_reduced() {
        let mut last_err = String::new();
        for v in &trivial {
            match whitehead_eliminate(w, v) {
                Ok((auto, _)) => {
                    return ChosenMove::Found {
                        kind: MoveKind::TrivialImage,
                        auto,
                        fresh_binding: None,
                    }
                }
                Err(e) => last_err = e,
            }
        }
        return ChosenMove::Violation(NormalizeError::HypothesisViolation {
            move_kind: MoveKind::TrivialImage,
            detail: last_err,
        });
    }
    ChosenMove::Violation(NormalizeError::HypothesisViolation {
        move_kind: MoveKind::TrivialImage,
        detail: "no deletable empty-image variable".to_string(),
    })
}

/// Rewrites a solved quadratic equation until the solution spells the target
/// with no cancellation: every remaining variable has a nonempty image,
/// adjacent images never cancel, and no letter pair is redundant. The
/// automorphism connects the input back: applying `automorphism.forward` to
/// `w` gives `word`, and following `automorphism.forward` by `assignment`
/// recovers `psi` on the variables of `w`.
///
/// Moves must preserve the closure's Euler characteristic and orientability;
/// a word/solution pair outside the theory's hypotheses trips the check and
/// reports which move detected it.
pub fn reduce_solution(
    w: &Word,
    psi: &Substitution,
    u: &Word,
) -> Result<Reduction, NormalizeError> {
    if u.is_empty() {
        return Err(NormalizeError::TrivialTarget);
    }
    if !u.is_cyclically_reduced() || u.symbols().any(Symbol::is_variable) {
        return Err(NormalizeError::BadTarget(u.to_string()));
    }
    if !surface::is_quadratic(w.letters()) {
        return Err(NormalizeError::NotQuadratic(w.to_string()));
    }
    for v in vars_of(w) {
        let image = match psi.get(&v) {
            Some(img) => img,
            None => {
                return Err(NormalizeError::NonConstantImage(
                    v.name().to_string(),
                    "unbound".to_string(),
                ))
            }
        };
        if image.symbols().any(Symbol::is_variable) {
            return Err(NormalizeError::NonConstantImage(
                v.name().to_string(),
                image.to_string(),
            ));
        }
    }
    let spelled = psi.apply(w);
    if spelled != *u {
        return Err(NormalizeError::SolutionMismatch {
            expected: u.to_string(),
            got: spelled.to_string(),
        });
    }

    let mut word = w.clone();
    let mut assignment = psi.clone();
    let mut gamma = TrackedAutomorphism::identity();
    let mut trace = ReductionTrace::default();
    let mut fresh = FreshVars::avoiding(vars_of(w).iter().chain(psi.support()));
    let profile = closure_profile(&word);
    let (n0, v0) = measure(&word, &assignment);
    let cap = 4 * (n0 + v0) + 16;

    for _ in 0..cap {
        let measure_before = measure(&word, &assignment);
        let (kind, auto, binding) = match choose_move(&word, &assignment, &mut fresh) {
            ChosenMove::None => break,
            ChosenMove::Violation(err) => return Err(err),
            ChosenMove::Found { kind, auto, fresh_binding } => (kind, auto, fresh_binding),
        };

        let mut extended = assignment.clone();
        if let Some((z, image)) = binding {
            extended = extended.bind(z, image);
        }
        let next_word = auto.apply(&word);
        let next_assignment = auto.backward().compose(&extended);

        assert!(!next_word.is_empty(), "rewriting emptied the word");
        assert!(
            surface::is_quadratic(next_word.letters()),
            "rewriting broke quadraticity: {next_word}"
        );
        assert_eq!(
            next_assignment.apply(&next_word),
            *u,
            "{kind} move lost the solution"
        );
        let measure_after = measure(&next_word, &next_assignment);
        if measure_after >= measure_before {
            return Err(NormalizeError::HypothesisViolation {
                move_kind: kind,
                detail: format!(
                    "measure failed to decrease: {measure_before:?} -> {measure_after:?}"
                ),
            });
        }
        if closure_profile(&next_word) != profile {
            return Err(NormalizeError::HypothesisViolation {
                move_kind: kind,
                detail: "the move changed the closure's characteristic".to_string(),
            });
        }

        trace.steps.push(ReductionStep {
            kind,
            automorphism: auto.clone(),
            measure_before,
            measure_after,
        });
        gamma = gamma.then(&auto);
        word = next_word;
        assignment = next_assignment;
    }

    // Final state sanity; the loop only exits when no move applies.
    debug_assert!(surface::redundant_pair(word.letters(), false).is_none());
    debug_assert!(vars_of(&word)
        .iter()
        .all(|v| !assignment.image_of(v).is_empty()));
    debug_assert!(vars_of(w)
        .iter()
        .all(|v| assignment.apply(&gamma.forward().image_of(v)) == psi.image_of(v)));

    Ok(Reduction { word, assignment, automorphism: gamma, trace })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BlockKind {
    Handle,
    Square,
}

#[derive(Debug, Clone, Copy)]
struct Block {
    start: usize,
    kind: BlockKind,
}

/// Greedy left-to-right pass marking collected blocks. `handles` enables
/// 4-letter patterns `p q p^-1 q^-1` (any signs), `squares` 2-letter patterns
/// `l l`. Letters outside blocks are reported by position.
fn scan_blocks(
    letters: &[Letter],
    handles: bool,
    squares: bool,
) -> (Vec<Block>, Vec<usize>) {
    let k = letters.len();
    let mut blocks = Vec::new();
    let mut loose = Vec::new();
    let mut i = 0;
    while i < k {
        if handles
            && i + 4 <= k
            && letters[i].symbol != letters[i + 1].symbol
            && letters[i + 2] == letters[i].inverse()
            && letters[i + 3] == letters[i + 1].inverse()
        {
            blocks.push(Block { start: i, kind: BlockKind::Handle });
            i += 4;
        } else if squares && i + 2 <= k && letters[i + 1] == letters[i] {
            blocks.push(Block { start: i, kind: BlockKind::Square });
            i += 2;
        } else {
            loose.push(i);
            i += 1;
        }
    }
    (blocks, loose)
}

/// Inner automorphism rotating a cyclically reduced word to start at `cut`.
fn rotation_move(w: &Word, cut: usize) -> (TrackedAutomorphism, Word) {
    if cut == 0 {
        return (TrackedAutomorphism::identity(), w.clone());
    }
    let prefix = w.subword(0, cut);
    let auto = conjugate_all(&vars_of(w), &prefix, None);
    let rotated = auto.apply(w);
    assert_eq!(rotated.len(), w.len(), "rotation cut a reducible point");
    (auto, rotated)
}

/// Applies a collection move and insists the word keeps its length; at one
/// vertex the word is already as short as its genus allows, so any free
/// cancellation here would mean the move was wrong.
fn apply_preserving(
    w: &Word,
    gamma: &mut TrackedAutomorphism,
    auto: &TrackedAutomorphism,
) -> Word {
    let next = auto.apply(w);
    assert_eq!(next.len(), w.len(), "collection move changed the length");
    assert!(surface::is_quadratic(next.letters()));
    *gamma = gamma.then(auto);
    next
}

/// Repeatedly strips outer pairs `l T l^-1 -> T` until cyclically reduced.
fn strip_outer(mut w: Word, gamma: &mut TrackedAutomorphism) -> Word {
    while !w.is_cyclically_reduced() {
        let first = w.letters()[0].clone();
        let vars = vars_of(&w);
        let auto = conjugate_all(&vars, &Word::from_letter(first.clone()), Some(&first.symbol));
        let next = auto.apply(&w);
        assert_eq!(next.len(), w.len() - 2);
        *gamma = gamma.then(&auto);
        w = next;
    }
    w
}

/// Contracts the glued surface to a single vertex by deleting variables
/// whose edges join distinct vertex classes. Genus and orientability are
/// untouched; the word shrinks by one variable per round.
fn contract_to_one_vertex(mut w: Word, gamma: &mut TrackedAutomorphism) -> Word {
    let cap = vars_of(&w).len() + 2;
    for _ in 0..cap {
        w = strip_outer(w, gamma);
        let corners = corner_structure(w.letters()).expect("quadratic by invariant");
        if corners.vertex_count == 1 {
            return w;
        }
        let candidate = corners
            .edges
            .iter()
            .find(|(_, ends)| ends.init_class != ends.term_class)
            .map(|(sym, _)| sym.clone())
            .expect("a connected one-face complex with several vertices has a joining edge");
        let (auto, next) = whitehead_eliminate(&w, &candidate).expect("edge joins two classes");
        *gamma = gamma.then(&auto);
        w = next;
    }
    unreachable!("vertex contraction failed to terminate");
}

/// Gathers every variable pair of an orientable one-vertex word into
/// commutator blocks `x y x^-1 y^-1`.
fn collect_handles(mut w: Word, gamma: &mut TrackedAutomorphism) -> Word {
    let cap = vars_of(&w).len() + 2;
    for _ in 0..cap {
        let (_, loose) = scan_blocks(w.letters(), true, false);
        let Some(&first_loose) = loose.first() else { return w };
        let x = w.letters()[first_loose].symbol.clone();
        let x_positions = occurrences(&w);
        let x_occ = &x_positions[&x];
        let plus_pos = x_occ
            .iter()
            .find(|(_, s)| *s == Sign::Plus)
            .expect("orientable words carry each sign once")
            .0;

        let (rot, rotated) = rotation_move(&w, plus_pos);
        *gamma = gamma.then(&rot);
        w = rotated;

        let table = occurrences(&w);
        let m = table[&x][1].0;
        debug_assert_eq!(table[&x][0], (0, Sign::Plus));
        let (_, loose) = scan_blocks(w.letters(), true, false);
        let loose: BTreeSet<usize> = loose.into_iter().collect();
        // A partner whose edges interlock with x: exactly one occurrence
        // strictly inside x ... x^-1. One-vertex gluing guarantees one.
        let y_pos = (1..m)
            .find(|j| {
                if !loose.contains(j) {
                    return false;
                }
                let sym = &w.letters()[*j].symbol;
                let occ = &table[sym];
                let inside = |p: usize| p > 0 && p < m;
                inside(occ[0].0) != inside(occ[1].0)
            })
            .expect("a loose variable interlocks across any loose variable's span");
        let y = w.letters()[y_pos].symbol.clone();
        if w.letters()[y_pos].sign == Sign::Minus {
            w = apply_preserving(&w, gamma, &sign_flip(&y));
        }

        let xw = var_word(&x);
        let yw = var_word(&y);
        let p1 = w.subword(1, y_pos);
        if !p1.is_empty() {
            let auto = single_move(&x, xw.concat(&p1.inverse()), xw.concat(&p1));
            w = apply_preserving(&w, gamma, &auto);
        }
        // Now w = x y P x^-1 Q1 y^-1 Q2.
        let table = occurrences(&w);
        let m = table[&x][1].0;
        let p = w.subword(2, m);
        if !p.is_empty() {
            let auto = single_move(&y, yw.concat(&p.inverse()), yw.concat(&p));
            w = apply_preserving(&w, gamma, &auto);
        }
        // Now w = x y x^-1 M y^-1 Q2.
        let table = occurrences(&w);
        let y_inv_pos = table[&y][1].0;
        let m_word = w.subword(3, y_inv_pos);
        if !m_word.is_empty() {
            let auto = single_move(&x, m_word.concat(&xw), m_word.inverse().concat(&xw));
            w = apply_preserving(&w, gamma, &auto);
        }
        let start = m_word.len();
        let letters = w.letters();
        assert_eq!(letters[start].symbol, x);
        assert_eq!(letters[start + 2], letters[start].inverse());
    }
    unreachable!("handle collection failed to terminate");
}

/// Gathers every variable of a nonorientable one-vertex word into square
/// blocks `v v`. Same-sign pairs square up directly; when only mixed pairs
/// remain, one square is pushed through a neighboring mixed variable to make
/// it same-sign and it is squared immediately.
fn collect_squares(mut w: Word, gamma: &mut TrackedAutomorphism) -> Word {
    let n_vars = vars_of(&w).len();
    let cap = 2 * n_vars * n_vars + 16;
    for _ in 0..cap {
        let (blocks, loose) = scan_blocks(w.letters(), false, true);
        if loose.is_empty() {
            return w;
        }
        let loose_set: BTreeSet<usize> = loose.iter().copied().collect();
        let table = occurrences(&w);
        let same_sign = loose.iter().find_map(|&pos| {
            let sym = &w.letters()[pos].symbol;
            let occ = &table[sym];
            (occ[0].1 == occ[1].1 && occ[0].0 == pos).then(|| sym.clone())
        });

        if let Some(v) = same_sign {
            if table[&v][0].1 == Sign::Minus {
                w = apply_preserving(&w, gamma, &sign_flip(&v));
            }
            let table = occurrences(&w);
            let (i, j) = (table[&v][0].0, table[&v][1].0);
            let q = w.subword(i + 1, j);
            assert!(!q.is_empty(), "an adjacent same-sign pair is already a block");
            let vw = var_word(&v);
            let auto = single_move(&v, vw.concat(&q.inverse()), vw.concat(&q));
            w = apply_preserving(&w, gamma, &auto);
            continue;
        }

        // Only mixed pairs are loose; seed with a square block followed
        // cyclically by a loose letter.
        let k = w.len();
        let seed = blocks
            .iter()
            .filter(|b| b.kind == BlockKind::Square)
            .find(|b| loose_set.contains(&((b.start + 2) % k)))
            .copied()
            .expect("a nonorientable word keeps at least one square next to loose letters");
        let (rot, rotated) = rotation_move(&w, seed.start);
        *gamma = gamma.then(&rot);
        w = rotated;

        let s_letter = w.letters()[0].clone();
        let b_letter = w.letters()[2].clone();
        let s = s_letter.symbol.clone();
        let s_plus = var_word(&s);
        let (f, b) = match s_letter.sign {
            Sign::Plus => (
                s_plus.concat(&Word::from_letter(b_letter.inverse())),
                s_plus.concat(&Word::from_letter(b_letter.clone())),
            ),
            Sign::Minus => (
                Word::from_letter(b_letter.clone()).concat(&s_plus),
                Word::from_letter(b_letter.inverse()).concat(&s_plus),
            ),
        };
        w = apply_preserving(&w, gamma, &single_move(&s, f, b));

        // The neighbor's pair is now same-sign; square it before anything
        // can undo the seed.
        let bsym = b_letter.symbol.clone();
        let table = occurrences(&w);
        assert_eq!(table[&bsym][0].1, table[&bsym][1].1, "seeding must equalize the signs");
        if table[&bsym][0].1 == Sign::Minus {
            w = apply_preserving(&w, gamma, &sign_flip(&bsym));
        }
        let table = occurrences(&w);
        let (i, j) = (table[&bsym][0].0, table[&bsym][1].0);
        let q = w.subword(i + 1, j);
        assert!(!q.is_empty());
        let bw = var_word(&bsym);
        let auto = single_move(&bsym, bw.concat(&q.inverse()), bw.concat(&q));
        w = apply_preserving(&w, gamma, &auto);
    }
    unreachable!("square collection failed to terminate");
}

/// The i-th standard variable of the given series ("x" or "y"), as used in
/// the standard words below and in every solution representative.
pub fn standard_symbol(base: &str, index: usize) -> Symbol {
    Symbol::variable(&format!("{base}{index}"))
}

/// The target word: `[x1,y1]...[xg,yg]` or `x1^2...xg^2`.
pub fn standard_word(orientable: bool, genus: usize) -> Word {
    let mut out = Word::empty();
    for i in 1..=genus {
        let block = if orientable {
            Word::commutator(
                &var_word(&standard_symbol("x", i)),
                &var_word(&standard_symbol("y", i)),
            )
        } else {
            var_word(&standard_symbol("x", i)).pow(2)
        };
        out = out.concat(&block);
    }
    out
}

/// Signed rename sending each `from` letter to the matching `to` letter,
/// completed to a bijection of symbols (leftover targets map back onto
/// leftover sources so the map stays invertible).
fn signed_rename(pairs: &[(Letter, Letter)]) -> TrackedAutomorphism {
    let mut fwd = Substitution::identity();
    let mut bwd = Substitution::identity();
    let domain: BTreeSet<Symbol> = pairs.iter().map(|(f, _)| f.symbol.clone()).collect();
    let codomain: BTreeSet<Symbol> = pairs.iter().map(|(_, t)| t.symbol.clone()).collect();
    assert_eq!(domain.len(), pairs.len(), "rename sources must be distinct");
    assert_eq!(codomain.len(), pairs.len(), "rename targets must be distinct");
    for (from, to) in pairs {
        let fwd_image = match from.sign {
            Sign::Plus => Word::from_letter(to.clone()),
            Sign::Minus => Word::from_letter(to.inverse()),
        };
        let bwd_image = match to.sign {
            Sign::Plus => Word::from_letter(from.clone()),
            Sign::Minus => Word::from_letter(from.inverse()),
        };
        fwd = fwd.bind(from.symbol.clone(), fwd_image);
        bwd = bwd.bind(to.symbol.clone(), bwd_image);
    }
    let spare_targets: Vec<&Symbol> = codomain.difference(&domain).collect();
    let spare_sources: Vec<&Symbol> = domain.difference(&codomain).collect();
    assert_eq!(spare_targets.len(), spare_sources.len());
    for (t, s) in spare_targets.into_iter().zip(spare_sources) {
        fwd = fwd.bind(t.clone(), var_word(s));
        bwd = bwd.bind(s.clone(), var_word(t));
    }
    TrackedAutomorphism::from_parts(fwd, bwd)
}

/// Finds an automorphism carrying a quadratic word to the standard word of
/// its genus: handle blocks for orientable words, squares otherwise. The
/// empty word maps to itself with genus 0.
pub fn standard_form_automorphism(w: &Word) -> Result<StandardForm, NormalizeError> {
    if !surface::is_quadratic(w.letters()) {
        return Err(NormalizeError::NotQuadratic(w.to_string()));
    }
    if w.is_empty() {
        return Ok(StandardForm {
            automorphism: TrackedAutomorphism::identity(),
            standard: Word::empty(),
            orientable: true,
            genus: 0,
        });
    }

    let mut gamma = TrackedAutomorphism::identity();
    let mut word = strip_outer(w.clone(), &mut gamma);
    let data = surface::surface_data_of_letters(word.letters()).expect("quadratic");
    let (orientable, genus) = (data.orientable, data.genus);

    word = contract_to_one_vertex(word, &mut gamma);
    word = if orientable {
        collect_handles(word, &mut gamma)
    } else {
        collect_squares(word, &mut gamma)
    };

    // All letters sit in blocks aligned at 0; rename block variables onto the
    // standard names in reading order.
    let letters = word.letters().to_vec();
    let mut pairs = Vec::new();
    if orientable {
        assert_eq!(letters.len(), 4 * genus);
        for i in 0..genus {
            pairs.push((letters[4 * i].clone(), Letter::new(standard_symbol("x", i + 1), Sign::Minus)));
            pairs.push((letters[4 * i + 1].clone(), Letter::new(standard_symbol("y", i + 1), Sign::Minus)));
        }
    } else {
        assert_eq!(letters.len(), 2 * genus);
        for i in 0..genus {
            pairs.push((letters[2 * i].clone(), Letter::new(standard_symbol("x", i + 1), Sign::Plus)));
        }
    }
    let rename = signed_rename(&pairs);
    word = rename.apply(&word);
    gamma = gamma.then(&rename);

    let target = standard_word(orientable, genus);
    assert_eq!(word, target, "normalization must land exactly on the standard word");
    assert_eq!(gamma.apply(w), target);

    Ok(StandardForm { automorphism: gamma, standard: word, orientable, genus })
}
