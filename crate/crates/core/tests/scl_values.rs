//! scl values with independent justification, and the solver's error paths.

use std::time::Duration;

use scl_core::scl::{self, Guidance, Mode, SclOptions};
use scl_core::word::{parse_chain, random_reduced_word, Chain, Word};
use scl_core::{Rational, SclError};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn scl_of(text: &str, mode: Mode) -> Rational {
    let chain = parse_chain(text, 26).unwrap();
    scl::scl(&chain, mode).unwrap().value
}

#[test]
fn products_of_commutators() {
    // a product of g commutators of free generators has scl g - 1/2
    assert_eq!(scl_of("[a,b]", Mode::Oracle), q(1, 2));
    assert_eq!(scl_of("[a,b]", Mode::Fast), q(1, 2));
    assert_eq!(scl_of("[a,b][c,d]", Mode::Fast), q(3, 2));
    assert_eq!(scl_of("[a,b][c,d][e,f]", Mode::Fast), q(5, 2));
}

#[test]
fn powers_and_multiples() {
    for k in 1..=3 {
        let text = format!("[a,b]^{k}");
        assert_eq!(scl_of(&text, Mode::Fast), q(k, 2), "{text}");
    }
    // scl(g + g) = scl(g^2)
    assert_eq!(scl_of("[a,b] + [a,b]", Mode::Fast), q(1, 1));
    assert_eq!(scl_of("2*[a,b]", Mode::Fast), q(1, 1));
}

#[test]
fn word_plus_inverse_bounds_an_annulus() {
    for seed in 0..6 {
        let w = random_reduced_word(5, 2, seed);
        let chain_text = format!("{w} + {}", w.inverse());
        let chain = parse_chain(&chain_text, 2).unwrap();
        assert_eq!(
            scl::scl(&chain, Mode::Fast).unwrap().value,
            Rational::zero(),
            "{chain_text}"
        );
    }
}

#[test]
fn known_family_values() {
    assert_eq!(scl_of("[a,b][c,aa]", Mode::Fast), q(1, 1));
    assert_eq!(scl_of("[a,b][c,aa]", Mode::Oracle), q(1, 1));
}

#[test]
fn guidance_does_not_change_values() {
    let chain = parse_chain("[a,b][c,abA]", 3).unwrap();
    let run = |guidance| {
        let opts = SclOptions {
            guidance,
            ..Default::default()
        };
        scl::scl_with(&chain, opts).unwrap().value
    };
    let exact = run(Guidance::Exact);
    assert_eq!(run(Guidance::Float), exact);
    assert_eq!(run(Guidance::Auto), exact);
}

#[test]
fn surfaces_realize_the_value() {
    let chain = parse_chain("[a,b]", 2).unwrap();
    let s = scl::extremal_surface(&chain, SclOptions::default()).unwrap();
    assert_eq!(s.euler_characteristic, -1);
    assert_eq!(s.euler_characteristic_traced, -1);
    assert_eq!(s.boundary_component_count(), 1);
    assert_eq!(s.genus, 1);
    assert_eq!(s.scl_bound(), q(1, 2));

    let annulus =
        scl::extremal_surface(&parse_chain("a + A", 1).unwrap(), SclOptions::default()).unwrap();
    assert_eq!(annulus.euler_characteristic, 0);
    assert_eq!(annulus.boundary_component_count(), 2);
    assert_eq!(annulus.genus, 0);

    for text in ["[a,b][c,aa]", "[a,b]^2", "abAABBab + BAba"] {
        let chain = parse_chain(text, 3).unwrap();
        let s = scl::extremal_surface(&chain, SclOptions::default()).unwrap();
        assert_eq!(
            s.euler_characteristic, s.euler_characteristic_traced,
            "{text}"
        );
        assert_eq!(s.scl_bound(), s.scl, "{text}");
    }
}

#[test]
fn error_paths() {
    let chain = parse_chain("aab", 2).unwrap();
    assert_eq!(
        scl::scl(&chain, Mode::Fast),
        Err(SclError::NotHomologicallyTrivial)
    );

    let long = parse_chain("[a,b][c,d][a,c][b,d]", 4).unwrap();
    assert!(matches!(
        scl::scl(&long, Mode::Oracle),
        Err(SclError::OracleTooLarge { length: 16, .. })
    ));

    let big = parse_chain("[a,b][c,bcABBcABCbbcACbcBcbb]", 3).unwrap();
    let opts = SclOptions {
        timeout: Some(Duration::from_millis(1)),
        ..Default::default()
    };
    assert!(matches!(
        scl::scl_with(&big, opts),
        Err(SclError::Timeout(_))
    ));

    assert!(parse_chain("aA", 2).is_err());
    assert!(Chain::from_word(&Word::identity()).is_err());
}
