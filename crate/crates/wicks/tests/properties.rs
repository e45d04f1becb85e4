//! Randomized algebraic invariants of the word layer and the matcher.

use proptest::prelude::*;

use wicks::matcher::cancellation_free_matches;
use wicks::word::{CyclicWord, Letter, Sign, Substitution, Symbol, Word};

fn constant_word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..3usize, any::<bool>()), 0..=max_len).prop_map(|letters| {
        Word::from_letters(letters.into_iter().map(|(i, positive)| {
            Letter::new(
                Symbol::constant(["a", "b", "c"][i]),
                if positive { Sign::Plus } else { Sign::Minus },
            )
        }))
    })
}

fn substitution() -> impl Strategy<Value = Substitution> {
    prop::collection::vec(constant_word(4), 3).prop_map(|images| {
        let mut s = Substitution::identity();
        for (name, image) in ["x", "y", "z"].into_iter().zip(images) {
            s = s.bind(Symbol::variable(name), image);
        }
        s
    })
}

fn variable_word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..3usize, any::<bool>()), 0..=max_len).prop_map(|letters| {
        Word::from_letters(letters.into_iter().map(|(i, positive)| {
            Letter::new(
                Symbol::variable(["x", "y", "z"][i]),
                if positive { Sign::Plus } else { Sign::Minus },
            )
        }))
    })
}

proptest! {
    #[test]
    fn printing_and_parsing_are_inverse(w in constant_word(12)) {
        let printed = w.to_string();
        let reparsed = Word::parse_constant(&printed).unwrap();
        prop_assert_eq!(reparsed, w);
    }

    #[test]
    fn concatenation_with_the_inverse_cancels(w in constant_word(12)) {
        prop_assert!(w.concat(&w.inverse()).is_empty());
        prop_assert!(w.inverse().concat(&w).is_empty());
    }

    #[test]
    fn inversion_is_an_antihomomorphism(u in constant_word(10), v in constant_word(10)) {
        prop_assert_eq!(u.concat(&v).inverse(), v.inverse().concat(&u.inverse()));
        prop_assert!(u.concat(&v).len() <= u.len() + v.len());
    }

    #[test]
    fn concatenation_is_associative(
        u in constant_word(8),
        v in constant_word(8),
        w in constant_word(8),
    ) {
        prop_assert_eq!(u.concat(&v).concat(&w), u.concat(&v.concat(&w)));
    }

    #[test]
    fn cyclic_reduction_factors_the_word(w in constant_word(12)) {
        let (core, conj) = w.cyclic_reduce();
        prop_assert!(core.is_cyclically_reduced());
        prop_assert_eq!(conj.inverse().concat(&core).concat(&conj), w);
    }

    #[test]
    fn cyclic_words_forget_rotation(w in constant_word(12), r in 0..12usize) {
        prop_assume!(!w.is_empty());
        let r = r % w.len();
        let letters = w.letters();
        let rotated = Word::from_letters(
            (0..w.len()).map(|i| letters[(r + i) % w.len()].clone()),
        );
        prop_assert_eq!(CyclicWord::from_word(&rotated), CyclicWord::from_word(&w));
    }

    #[test]
    fn conjugation_preserves_the_cyclic_word(w in constant_word(10), g in constant_word(5)) {
        let conjugated = g.inverse().concat(&w).concat(&g);
        prop_assert_eq!(CyclicWord::from_word(&conjugated), CyclicWord::from_word(&w));
    }

    #[test]
    fn composition_applies_left_to_right(
        s in substitution(),
        t in substitution(),
        w in variable_word(8),
    ) {
        prop_assert_eq!(s.compose(&t).apply(&w), t.apply(&s.apply(&w)));
    }

    #[test]
    fn matches_spell_the_target_and_respect_the_bound(u in constant_word(10)) {
        let cyclic = CyclicWord::from_word(&u);
        prop_assume!(!cyclic.is_empty());
        let form = CyclicWord::from_word(&Word::parse_variable("x^-1 y^-1 x y").unwrap());
        let (matches, stats) = cancellation_free_matches(&form, &cyclic).unwrap();
        prop_assert!(stats.candidates <= stats.bound);
        for m in &matches {
            let image = m.assignment.apply(form.canonical());
            prop_assert_eq!(CyclicWord::from_word(&image), cyclic.clone());
        }
    }
}
