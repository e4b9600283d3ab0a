//! Algebraic invariants checked on generated words.

use proptest::prelude::*;

use scl_core::scl::{self, Mode};
use scl_core::word::{
    cyclic_reduce, is_homologically_trivial, is_proper_power, parse_word, Chain, CyclicWord,
    Letter, Word,
};
use scl_core::Rational;

fn letter(rank: usize) -> impl Strategy<Value = Letter> {
    (0..rank, any::<bool>()).prop_map(|(g, inv)| Letter::new(g, inv))
}

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(rank), 0..=max_len).prop_map(Word::new)
}

/// A word with zero exponent sums: a random prefix followed by letters that
/// cancel its abelianization, in shuffled order.
fn balanced(rank: usize, prefix_len: usize) -> impl Strategy<Value = Word> {
    word(rank, prefix_len)
        .prop_flat_map(move |w| {
            let mut fix: Vec<Letter> = Vec::new();
            for (g, s) in w.exponent_sums().iter().enumerate().take(rank) {
                for _ in 0..s.unsigned_abs() {
                    fix.push(Letter::new(g, *s > 0));
                }
            }
            (Just(w), Just(fix).prop_shuffle())
        })
        .prop_map(|(w, fix)| w.mul(&Word::new(fix)))
}

fn chain_of(w: &Word) -> Option<Chain> {
    if w.is_empty() {
        return None;
    }
    Chain::from_word(w).ok()
}

fn scl_fast(c: &Chain) -> Rational {
    scl::scl(c, Mode::Fast).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_parse_round_trip(w in word(4, 12)) {
        let text = w.to_string();
        if w.is_empty() {
            prop_assert!(parse_word(&text, 4).is_err());
        } else {
            prop_assert_eq!(parse_word(&text, 4).unwrap(), w);
        }
    }

    #[test]
    fn cyclic_reduction_ignores_rotation(w in word(3, 12), k in 0usize..12) {
        prop_assume!(!w.is_empty());
        let (core, conj) = cyclic_reduce(&w).unwrap();
        // conj · core · conj⁻¹ spells w again
        prop_assert_eq!(conj.mul(&core.to_word()).mul(&conj.inverse()), w.clone());
        let rotated = w.rotate(k % w.len());
        if !rotated.is_empty() {
            let (core2, _) = cyclic_reduce(&rotated).unwrap();
            prop_assert_eq!(core, core2);
        }
    }

    #[test]
    fn proper_powers_match_brute_force(base in word(2, 4), k in 1u32..4) {
        prop_assume!(!base.is_empty());
        let (root, _) = cyclic_reduce(&base).unwrap();
        let powered = CyclicWord::new(root.to_word().pow(k).letters().to_vec()).unwrap();
        let letters = powered.letters();
        let n = letters.len();
        // brute force: the largest e dividing n with letters n/e-periodic
        let best = (2..=n)
            .rev()
            .find(|e| n.is_multiple_of(*e) && (0..n).all(|i| letters[i] == letters[(i + n / e) % n]));
        prop_assert_eq!(is_proper_power(&powered).map(|(_, e)| e), best);
        if k >= 2 {
            prop_assert!(best.is_some_and(|e| e % k as usize == 0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn scl_is_homogeneous(w in balanced(2, 4)) {
        let Some(c) = chain_of(&w) else { return Ok(()) };
        let Some(c2) = chain_of(&w.pow(2)) else { return Ok(()) };
        prop_assert_eq!(scl_fast(&c2), Rational::from(2) * scl_fast(&c));
    }

    #[test]
    fn scl_has_the_expected_symmetries(
        w in balanced(3, 4),
        perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
        flips in prop::array::uniform3(any::<bool>()),
        k in 0usize..8,
    ) {
        let Some(c) = chain_of(&w) else { return Ok(()) };
        let value = scl_fast(&c);
        prop_assert!(is_homologically_trivial(&c));

        let inverse = chain_of(&w.inverse()).unwrap();
        prop_assert_eq!(scl_fast(&inverse), value.clone());

        let relabeled = w.substitute(|x| {
            let g = perm[x.generator()];
            Word::letter(Letter::new(g, x.is_inverted() ^ flips[g]))
        });
        prop_assert_eq!(scl_fast(&chain_of(&relabeled).unwrap()), value.clone());

        let rotated = w.rotate(k % w.len());
        prop_assert_eq!(scl_fast(&chain_of(&rotated).unwrap()), value.clone());

        // nontrivial single words sit at or above 1/2
        prop_assert!(value >= Rational::new(1, 2));
    }

    #[test]
    fn fast_and_oracle_agree(w in balanced(3, 5)) {
        let Some(c) = chain_of(&w) else { return Ok(()) };
        prop_assume!(c.total_length() <= 12);
        prop_assert_eq!(
            scl::scl(&c, Mode::Oracle).unwrap().value,
            scl::scl(&c, Mode::Fast).unwrap().value
        );
    }
}
