//! Minimal genus computation and complete solution-class enumeration for
//! the equations `[x1,y1]...[xg,yg] = u` and `x1^2...xg^2 = u` over a free
//! group of constants.
//!
//! Both solvers work the same way: cyclically reduce the target, find every
//! cancellation-free factorization of the cyclic core along the form tables
//! of increasing genus, and read each deduped factorization back through the
//! normalization automorphism onto the standard variables. Genus computation
//! and solving are fused: the classification below the minimal genus is a
//! by-product of the scan, and solving at any other genus is refused because
//! the class lists would be incomplete there.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::matcher::{self, Match};
use crate::normalize::{self, NormalizeError, TrackedAutomorphism};
use crate::subgroup;
use crate::surface::{self, SplitRecord};
use crate::wicks::{FormStore, WicksError, WicksForm};
use crate::word::{CyclicWord, Substitution, Symbol, Word};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("the trivial target has no nontrivial classification")]
    TrivialTarget,
    #[error("target must be a constant word, found variable in: {0}")]
    VariablesInTarget(String),
    #[error("no solutions: {0}")]
    NoSolution(String),
    #[error(
        "requested genus {requested} differs from the minimal genus {actual}; \
         only the minimal-genus classification is complete"
    )]
    GenusMismatch { requested: usize, actual: usize },
    #[error(transparent)]
    Table(#[from] WicksError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenusValue {
    Finite(usize),
    Infinite,
}

impl GenusValue {
    pub fn finite(&self) -> Option<usize> {
        match self {
            GenusValue::Finite(g) => Some(*g),
            GenusValue::Infinite => None,
        }
    }
}

impl fmt::Display for GenusValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenusValue::Finite(g) => write!(f, "{g}"),
            GenusValue::Infinite => write!(f, "infinity"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum GenusCertificate {
    /// The empty product realizes the trivial target.
    Trivial,
    /// A cancellation-free factorization of the cyclic core at the reported
    /// genus (constructive upper bound; the scan below is the lower bound).
    Witness(Box<Match>),
    /// A constant with nonzero exponent sum: the target is outside the
    /// commutator subgroup, so no product of commutators reaches it.
    ExponentSum { symbol: Symbol, sum: i64 },
    /// A constant with odd exponent sum: the target is outside the subgroup
    /// generated by squares.
    OddExponentSum { symbol: Symbol, sum: i64 },
    /// Forced value 2h+1 for a commutator-subgroup target of commutator
    /// genus h: the scan ruled out every g <= 2h, and a product of h
    /// commutators is always a product of 2h+1 squares.
    SquareBound { commutator_genus: usize },
}

/// Outcome of a minimal-genus computation. `exhausted_below` lists the
/// genera proven impossible by exhaustive match failure (or by the length
/// bound: a genus-g form needs at least 4g letters in the orientable case
/// and 2g otherwise).
#[derive(Debug, Clone)]
pub struct GenusResult {
    pub value: GenusValue,
    pub certificate: GenusCertificate,
    pub exhausted_below: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distinctness {
    /// The image subgroup differs from every other class's image subgroup,
    /// which certifies the classes as genuinely distinct.
    ResolvedDistinct,
    /// Some other class generates the same image subgroup; the invariant
    /// cannot separate them and no decision procedure is attempted.
    Unresolved,
}

/// How a class representative was obtained.
#[derive(Debug, Clone)]
pub enum Provenance {
    /// Read off a cancellation-free factorization: the matched form, the
    /// factorization, the variable split used to align the cyclic reading
    /// with the ordinary target, and the automorphism onto the standard word.
    Matched {
        form: WicksForm,
        matched: Match,
        split: Option<SplitRecord>,
        to_standard: TrackedAutomorphism,
    },
    /// Expanded from a commutator solution square-by-square via
    /// `[u,v] = (u^-1)^2 (u v^-1)^2 v^2`.
    SquareIdentity { from: Box<SolutionClassRep> },
}

#[derive(Debug, Clone)]
pub struct SolutionClassRep {
    /// Substitution on the standard variables; substituting it into the
    /// standard word freely reduces exactly to the original target.
    pub rep: Substitution,
    pub provenance: Provenance,
    /// Canonical hash of the folded graph of the image subgroup.
    pub subgroup_fingerprint: String,
    pub distinctness: Distinctness,
}

#[derive(Debug, Clone)]
pub struct Solutions {
    pub genus: usize,
    pub orientable: bool,
    pub classes: Vec<SolutionClassRep>,
    /// True when every stabilizer class is represented. False only for the
    /// nonorientable fallback witness, which realizes the product with three
    /// squares per commutator; that count equals the genus exactly when the
    /// commutator genus is one.
    pub complete: bool,
}

fn constant_core(u: &Word) -> Result<(Word, Word), SolveError> {
    if let Some(letter) = u.letters().iter().find(|l| l.symbol.is_variable()) {
        return Err(SolveError::VariablesInTarget(letter.symbol.name().to_string()));
    }
    Ok(u.cyclic_reduce())
}

fn nonzero_exponent(w: &Word) -> Option<(Symbol, i64)> {
    w.exponent_vector().into_iter().find(|(_, sum)| *sum != 0)
}

fn odd_exponent(w: &Word) -> Option<(Symbol, i64)> {
    w.exponent_vector().into_iter().find(|(_, sum)| sum.rem_euclid(2) == 1)
}

struct GenusHit {
    genus: usize,
    /// Forms (in table order) that matched, with their raw match lists.
    matched_forms: Vec<(WicksForm, Vec<Match>)>,
}

struct GenusScan {
    hit: Option<GenusHit>,
    exhausted: Vec<usize>,
}

/// Scans genera 1..=max_genus in order and stops at the first with a
/// nonempty match set. Only forms no longer than the target can match, so
/// each step enumerates a length-capped table.
fn scan_genera(
    store: &FormStore,
    orientable: bool,
    core: &CyclicWord,
    max_genus: usize,
) -> Result<GenusScan, SolveError> {
    let n = core.len();
    let mut exhausted = Vec::new();
    for genus in 1..=max_genus {
        let mut matched_forms: Vec<(WicksForm, Vec<Match>)> = Vec::new();
        for form in store.forms_up_to_length(orientable, genus, n)? {
            let (matches, stats) = matcher::cancellation_free_matches(&form.form, core)
                .expect("form tables are quadratic and the core is a nonempty constant word");
            assert!(stats.candidates <= stats.bound, "candidate count escaped its bound");
            if !matches.is_empty() {
                matched_forms.push((form, matches));
            }
        }
        if !matched_forms.is_empty() {
            return Ok(GenusScan { hit: Some(GenusHit { genus, matched_forms }), exhausted });
        }
        exhausted.push(genus);
    }
    Ok(GenusScan { hit: None, exhausted })
}

fn first_witness(hit: &GenusHit) -> GenusCertificate {
    GenusCertificate::Witness(Box::new(hit.matched_forms[0].1[0].clone()))
}

/// Minimal number of commutators whose product is `u`; infinite outside the
/// commutator subgroup. A minimal product always rewrites to a
/// cancellation-free factorization of the cyclic core along an orientable
/// form, whose length is then between 4g and |core|, so the scan bound
/// |core|/4 is exhaustive.
pub fn genus_plus(u: &Word, store: &FormStore) -> Result<GenusResult, SolveError> {
    let (core, _) = constant_core(u)?;
    if core.is_empty() {
        return Ok(GenusResult {
            value: GenusValue::Finite(0),
            certificate: GenusCertificate::Trivial,
            exhausted_below: Vec::new(),
        });
    }
    if let Some((symbol, sum)) = nonzero_exponent(&core) {
        return Ok(GenusResult {
            value: GenusValue::Infinite,
            certificate: GenusCertificate::ExponentSum { symbol, sum },
            exhausted_below: Vec::new(),
        });
    }
    let cyc = CyclicWord::from_cyclically_reduced(core);
    let scan = scan_genera(store, true, &cyc, cyc.len() / 4)?;
    let hit = scan
        .hit
        .expect("commutator-subgroup words admit a cancellation-free factorization at their genus");
    Ok(GenusResult {
        value: GenusValue::Finite(hit.genus),
        certificate: first_witness(&hit),
        exhausted_below: scan.exhausted,
    })
}

/// Minimal number of squares whose product is `u`; infinite outside the
/// subgroup generated by squares (detected by an odd exponent sum).
///
/// Scan conclusiveness: a minimal g-square product rewrites to a
/// cancellation-free factorization along a nonorientable form provided the
/// commutator genus of `u` is at least g/2. Outside the commutator subgroup
/// that holds for every g, so the scan up to |core|/2 (the length bound) is
/// exhaustive. Inside it, with commutator genus h, the hypothesis covers
/// every g <= 2h; if all of those fail, the square-count bound
/// genus_minus <= 2·genus_plus + 1 forces the value 2h+1.
pub fn genus_minus(u: &Word, store: &FormStore) -> Result<GenusResult, SolveError> {
    let (core, _) = constant_core(u)?;
    if core.is_empty() {
        return Ok(GenusResult {
            value: GenusValue::Finite(0),
            certificate: GenusCertificate::Trivial,
            exhausted_below: Vec::new(),
        });
    }
    if let Some((symbol, sum)) = odd_exponent(&core) {
        return Ok(GenusResult {
            value: GenusValue::Infinite,
            certificate: GenusCertificate::OddExponentSum { symbol, sum },
            exhausted_below: Vec::new(),
        });
    }
    let in_commutator_subgroup = core.in_commutator_subgroup();
    let cyc = CyclicWord::from_cyclically_reduced(core.clone());
    let n = cyc.len();
    if !in_commutator_subgroup {
        let scan = scan_genera(store, false, &cyc, n / 2)?;
        let hit = scan
            .hit
            .expect("even-exponent words admit a cancellation-free square factorization");
        return Ok(GenusResult {
            value: GenusValue::Finite(hit.genus),
            certificate: first_witness(&hit),
            exhausted_below: scan.exhausted,
        });
    }
    let h = genus_plus(&core, store)?
        .value
        .finite()
        .expect("zero exponent sums put the core in the commutator subgroup");
    let scan = scan_genera(store, false, &cyc, (2 * h).min(n / 2))?;
    match scan.hit {
        Some(hit) => Ok(GenusResult {
            value: GenusValue::Finite(hit.genus),
            certificate: first_witness(&hit),
            exhausted_below: scan.exhausted,
        }),
        None => Ok(GenusResult {
            value: GenusValue::Finite(2 * h + 1),
            certificate: GenusCertificate::SquareBound { commutator_genus: h },
            // Genera in (|core|/2, 2h] cannot match for length reasons, so
            // the whole range below 2h+1 is excluded.
            exhausted_below: (1..=2 * h).collect(),
        }),
    }
}

/// Standard variables of the genus-g standard word, in reading order.
fn standard_vars(orientable: bool, genus: usize) -> Vec<Symbol> {
    let mut vars = Vec::new();
    for i in 1..=genus {
        vars.push(normalize::standard_symbol("x", i));
        if orientable {
            vars.push(normalize::standard_symbol("y", i));
        }
    }
    vars
}

/// Conjugates every image by `conj`, turning a solution for the cyclic core
/// into one for `conj^-1 core conj`.
fn conjugate_rep(rep: &Substitution, conj: &Word) -> Substitution {
    if conj.is_empty() {
        return rep.clone();
    }
    let inv = conj.inverse();
    let mut out = Substitution::identity();
    for (var, image) in rep.pairs() {
        out = out.bind(var.clone(), inv.concat(image).concat(conj));
    }
    out
}

/// Reads one deduped factorization back onto the standard variables:
/// align the cyclic factorization with the ordinary core (splitting at most
/// one variable), normalize the aligned word onto the standard word, and
/// precompose the factorization with the inverse normalization.
fn rep_from_match(
    m: &Match,
    core: &Word,
    r_core: usize,
    orientable: bool,
    genus: usize,
) -> Result<(Substitution, Option<SplitRecord>, TrackedAutomorphism), SolveError> {
    let n = core.len();
    let start = (r_core + n - m.rotation_offset % n) % n;
    let aligned = surface::split_for_alignment(&m.form, &m.assignment, start)
        .expect("matched images are nonempty");
    debug_assert_eq!(aligned.assignment.apply(&aligned.word), *core);
    let standard = normalize::standard_form_automorphism(&aligned.word)?;
    assert_eq!(standard.orientable, orientable, "splitting preserves orientability");
    assert_eq!(standard.genus, genus, "splitting preserves genus");
    let vars = standard_vars(orientable, genus);
    let rep = standard
        .automorphism
        .backward()
        .compose(&aligned.assignment)
        .restrict(vars.iter());
    Ok((rep, aligned.split, standard.automorphism))
}

/// Generators of the image subgroup, in variable order.
fn image_generators(rep: &Substitution) -> Vec<Word> {
    rep.pairs().map(|(_, image)| image.clone()).collect()
}

/// Recomputes fingerprints and distinctness flags: classes whose image
/// subgroups differ from all others are resolved-distinct; members of any
/// coinciding pair are left unresolved.
fn annotate_distinctness(classes: &mut [SolutionClassRep]) {
    let graphs: Vec<subgroup::FoldedGraph> = classes
        .iter()
        .map(|c| subgroup::folded_graph(&image_generators(&c.rep)).expect("constant images"))
        .collect();
    let mut flags = vec![Distinctness::ResolvedDistinct; classes.len()];
    for i in 0..graphs.len() {
        for j in i + 1..graphs.len() {
            if graphs[i].same_graph(&graphs[j]) {
                flags[i] = Distinctness::Unresolved;
                flags[j] = Distinctness::Unresolved;
            }
        }
    }
    for (class, (graph, flag)) in classes.iter_mut().zip(graphs.iter().zip(flags)) {
        class.subgroup_fingerprint = graph.fingerprint();
        class.distinctness = flag;
    }
}

/// Re-runs the pairwise subgroup comparison on an arbitrary list of reps
/// (assumed to solve one common equation) and returns the annotated list.
pub fn verify_class_distinctness(reps: &[SolutionClassRep]) -> Vec<SolutionClassRep> {
    let mut annotated = reps.to_vec();
    annotate_distinctness(&mut annotated);
    annotated
}

/// Bounded search for an explicit stabilizer word carrying one solution of
/// `[x1,y1] = u` onto another. The generators all fix the left-hand side
/// exactly — `[y^-1 x, y] = [y x, y] = [x, x y] = [x, x^-1 y] = [x, y]`,
/// plus conjugating both images by `u` (precomposition with the inner
/// automorphism by `[x1,y1]`). Finding a witness proves the two solutions
/// lie in one stabilizer class; exhausting the bound proves nothing.
pub fn commutator_class_witness(
    from: &Substitution,
    to: &Substitution,
    u: &Word,
    max_steps: usize,
) -> Option<Vec<String>> {
    let x = normalize::standard_symbol("x", 1);
    let y = normalize::standard_symbol("y", 1);
    let standard = normalize::standard_word(true, 1);
    assert_eq!(from.apply(&standard), *u, "witness search requires solutions of the same equation");
    assert_eq!(to.apply(&standard), *u, "witness search requires solutions of the same equation");
    let pair = |s: &Substitution| (s.image_of(&x), s.image_of(&y));
    let start = pair(from);
    let goal = pair(to);
    if start == goal {
        return Some(Vec::new());
    }
    let budget = start.0.len() + start.1.len() + goal.0.len() + goal.1.len() + 2 * u.len() + 4;
    let mut seen = BTreeSet::from([start.clone()]);
    let mut frontier = vec![(start, Vec::new())];
    for _ in 0..max_steps {
        let mut next = Vec::new();
        for ((px, py), path) in frontier {
            let moves: [(&str, Word, Word); 6] = [
                ("x <- y^-1 x", py.inverse().concat(&px), py.clone()),
                ("x <- y x", py.concat(&px), py.clone()),
                ("y <- x y", px.clone(), px.concat(&py)),
                ("y <- x^-1 y", px.clone(), px.inverse().concat(&py)),
                ("conjugate by u", u.inverse().concat(&px).concat(u), u.inverse().concat(&py).concat(u)),
                ("conjugate by u^-1", u.concat(&px).concat(&u.inverse()), u.concat(&py).concat(&u.inverse())),
            ];
            for (name, qx, qy) in moves {
                let state = (qx, qy);
                if state.0.len() + state.1.len() > budget || !seen.insert(state.clone()) {
                    continue;
                }
                let mut extended = path.clone();
                extended.push(name.to_string());
                if state == goal {
                    return Some(extended);
                }
                next.push((state, extended));
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    None
}

/// All solution classes arising from the matched forms at the minimal
/// genus: one representative per deduped factorization, literal duplicates
/// collapsed, sorted by representative.
fn classes_from_matches(
    u: &Word,
    core: &Word,
    conj: &Word,
    orientable: bool,
    genus: usize,
    matched_forms: &[(WicksForm, Vec<Match>)],
) -> Result<Vec<SolutionClassRep>, SolveError> {
    let cyc = CyclicWord::from_cyclically_reduced(core.clone());
    let n = cyc.len();
    let r_core = (0..n)
        .find(|&r| cyc.rotation(r) == *core)
        .expect("the core is a rotation of its canonical form");
    let standard = normalize::standard_word(orientable, genus);
    let mut seen: BTreeSet<Substitution> = BTreeSet::new();
    let mut classes = Vec::new();
    for (form, matches) in matched_forms {
        let deduped = matcher::dedupe_matches(matches).expect("forms are quadratic");
        for m in &deduped {
            let (rep_core, split, to_standard) = rep_from_match(m, core, r_core, orientable, genus)?;
            assert!(
                rep_core.pairs().all(|(_, image)| !image.is_empty()),
                "a trivial image would contradict genus minimality"
            );
            let rep = conjugate_rep(&rep_core, conj);
            assert_eq!(rep.apply(&standard), *u, "every representative must solve the equation");
            if !seen.insert(rep.clone()) {
                continue;
            }
            classes.push(SolutionClassRep {
                rep,
                provenance: Provenance::Matched {
                    form: form.clone(),
                    matched: m.clone(),
                    split,
                    to_standard,
                },
                subgroup_fingerprint: String::new(),
                distinctness: Distinctness::Unresolved,
            });
        }
    }
    classes.sort_by(|a, b| a.rep.cmp(&b.rep));
    annotate_distinctness(&mut classes);
    Ok(classes)
}

/// Complete set of stabilizer-class representatives for
/// `[x1,y1]...[xg,yg] = u` at the minimal genus g. A requested genus other
/// than the minimal one is refused.
pub fn solve_commutators(
    u: &Word,
    requested_genus: Option<usize>,
    store: &FormStore,
) -> Result<Solutions, SolveError> {
    let (core, conj) = constant_core(u)?;
    if core.is_empty() {
        return Err(SolveError::TrivialTarget);
    }
    if let Some((symbol, sum)) = nonzero_exponent(&core) {
        return Err(SolveError::NoSolution(format!(
            "{u} is not in the commutator subgroup ({} has exponent sum {sum})",
            symbol.name()
        )));
    }
    let cyc = CyclicWord::from_cyclically_reduced(core.clone());
    let scan = scan_genera(store, true, &cyc, cyc.len() / 4)?;
    let hit = scan
        .hit
        .expect("commutator-subgroup words admit a cancellation-free factorization at their genus");
    if let Some(requested) = requested_genus {
        if requested != hit.genus {
            return Err(SolveError::GenusMismatch { requested, actual: hit.genus });
        }
    }
    let classes = classes_from_matches(u, &core, &conj, true, hit.genus, &hit.matched_forms)?;
    assert!(!classes.is_empty());
    Ok(Solutions { genus: hit.genus, orientable: true, classes, complete: true })
}

/// Complete set of stabilizer-class representatives for
/// `x1^2...xg^2 = u` at the minimal genus g, when the scan is conclusive
/// there; otherwise (a commutator-subgroup target whose square genus is
/// 2h+1) a constructive witness with `complete = false`.
pub fn solve_squares(
    u: &Word,
    requested_genus: Option<usize>,
    store: &FormStore,
) -> Result<Solutions, SolveError> {
    let (core, conj) = constant_core(u)?;
    if core.is_empty() {
        return Err(SolveError::TrivialTarget);
    }
    if let Some((symbol, sum)) = odd_exponent(&core) {
        return Err(SolveError::NoSolution(format!(
            "{u} is not a product of squares ({} has odd exponent sum {sum})",
            symbol.name()
        )));
    }
    let cyc = CyclicWord::from_cyclically_reduced(core.clone());
    let n = cyc.len();
    let scan_bound = if core.in_commutator_subgroup() {
        let h = genus_plus(&core, store)?
            .value
            .finite()
            .expect("zero exponent sums put the core in the commutator subgroup");
        (2 * h).min(n / 2)
    } else {
        n / 2
    };
    let scan = scan_genera(store, false, &cyc, scan_bound)?;
    if let Some(hit) = scan.hit {
        if let Some(requested) = requested_genus {
            if requested != hit.genus {
                return Err(SolveError::GenusMismatch { requested, actual: hit.genus });
            }
        }
        let classes = classes_from_matches(u, &core, &conj, false, hit.genus, &hit.matched_forms)?;
        assert!(!classes.is_empty());
        return Ok(Solutions { genus: hit.genus, orientable: false, classes, complete: true });
    }

    // No cancellation-free solution at any g <= 2h: the value is forced to
    // 2h+1, and a witness comes from any commutator solution by expanding
    // each commutator as three squares.
    let commutators = solve_commutators(&core, None, store)?;
    let h = commutators.genus;
    let genus = 2 * h + 1;
    if let Some(requested) = requested_genus {
        if requested != genus {
            return Err(SolveError::GenusMismatch { requested, actual: genus });
        }
    }
    let base = commutators.classes.first().expect("solutions exist").clone();
    let mut rep_core = Substitution::identity();
    for i in 1..=h {
        let p = base.rep.image_of(&normalize::standard_symbol("x", i));
        let q = base.rep.image_of(&normalize::standard_symbol("y", i));
        rep_core = rep_core
            .bind(normalize::standard_symbol("x", 3 * i - 2), p.inverse())
            .bind(normalize::standard_symbol("x", 3 * i - 1), p.concat(&q.inverse()))
            .bind(normalize::standard_symbol("x", 3 * i), q);
    }
    assert_eq!(
        rep_core.apply(&normalize::standard_word(false, 3 * h)),
        core,
        "the square expansion of a commutator solution must solve the square equation"
    );
    let rep = conjugate_rep(&rep_core, &conj);
    let mut classes = vec![SolutionClassRep {
        rep,
        provenance: Provenance::SquareIdentity { from: Box::new(base) },
        subgroup_fingerprint: String::new(),
        distinctness: Distinctness::Unresolved,
    }];
    annotate_distinctness(&mut classes);
    Ok(Solutions { genus, orientable: false, classes, complete: false })
}
