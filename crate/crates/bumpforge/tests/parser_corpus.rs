mod common;

use bumpforge::cli_io::{parse_expression, print_expression, ParseError};
use bumpforge::polyalg::{CRat, MixedPolynomial};
use common::random_expression;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn generated_corpus_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..200 {
        let (text, expected) = random_expression(&mut rng, 3);
        let parsed = parse_expression(&text).unwrap_or_else(|e| panic!("{text}: {e}"));
        assert_eq!(parsed, expected, "{text}");
        let printed = print_expression(&parsed);
        assert_eq!(parse_expression(&printed).unwrap(), parsed, "{printed}");
    }
}

#[test]
fn literals_and_precedence() {
    let p = parse_expression("2.5*z1 - 3/4*z2^2").unwrap();
    let mut want = MixedPolynomial::z1().scale(&CRat::from_frac(5, 2));
    want = want.sub(&MixedPolynomial::z2().pow(2).scale(&CRat::from_frac(3, 4)));
    assert_eq!(p, want);
    assert_eq!(parse_expression("-z1^2").unwrap(), MixedPolynomial::z1().pow(2).neg());
    assert_eq!(parse_expression("(i*z1)^2").unwrap(), MixedPolynomial::z1().pow(2).neg());
    assert_eq!(parse_expression("|z1|^2").unwrap(), MixedPolynomial::z1().mul(&MixedPolynomial::z1().conj()));
    assert_eq!(parse_expression("Im(i*z2)").unwrap(), MixedPolynomial::z2().re());
}

#[test]
fn malformed_inputs() {
    assert!(matches!(parse_expression("|z1|^3"), Err(ParseError::NonPolynomialModulus { .. })));
    assert!(matches!(parse_expression("|z1|"), Err(ParseError::NonPolynomialModulus { .. })));
    for bad in ["z1 z2", "z1 +", "(z1", "z3", "z1/z2", "Re z1", "1/0", "z1^-1"] {
        assert!(parse_expression(bad).is_err(), "{bad}");
    }
}
