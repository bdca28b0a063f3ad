use gcdeq_core::brute;
use gcdeq_core::ffpoly::{
    degree_pattern_mod_p, is_prime, parse_polynomial, parse_polynomial_input, sieve_primes,
    FfError, IntPoly, PrimeIter,
};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn small_primes() -> Vec<u64> {
    sieve_primes(60)
}

proptest! {
    #[test]
    fn print_parse_roundtrip(coeffs in prop::collection::vec(-50i64..50, 1..8), lead in 1i64..4) {
        let mut c = coeffs;
        c.push(lead);
        let f = IntPoly::from_i64(&c).unwrap();
        let text = f.to_string();
        let again = parse_polynomial(&text).unwrap();
        prop_assert_eq!(&again, &f);
        prop_assert_eq!(again.to_string(), text);
    }

    #[test]
    fn structured_input_matches_text(coeffs in prop::collection::vec(-9i64..9, 1..6)) {
        let mut c = coeffs;
        c.push(1);
        let list = format!("[{}]", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "));
        let f = parse_polynomial_input(&list).unwrap();
        prop_assert_eq!(f, IntPoly::from_i64(&c).unwrap());
    }

    #[test]
    fn discriminant_detects_repeated_factors(coeffs in prop::collection::vec(-20i64..20, 1..5), pi in 0usize..17) {
        let mut c = coeffs;
        c.push(1);
        let f = IntPoly::from_i64(&c).unwrap();
        let p = small_primes()[pi];
        let disc = f.discriminant();
        let divisible = (disc % BigInt::from(p)).is_zero();
        let repeated = f.reduce(p).has_repeated_factor();
        prop_assert_eq!(divisible, repeated, "{} mod {}", f, p);
        match degree_pattern_mod_p(&f, p) {
            Ok(t) => {
                prop_assert!(!repeated);
                prop_assert_eq!(t.degree() as usize, f.degree());
                let residues: Vec<u64> = f.reduce(p).coeffs().to_vec();
                prop_assert_eq!(Some(t), brute::factor_pattern_exhaustive(&residues, p));
            }
            Err(FfError::Ramified(q)) => prop_assert!(repeated && q == p),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn primality_agrees_with_trial_division(n in 0u64..200_000) {
        prop_assert_eq!(is_prime(n), brute::is_prime_naive(n));
    }
}

#[test]
fn sieve_against_naive() {
    assert_eq!(sieve_primes(50_000), brute::naive_primes(50_000));
    assert_eq!(sieve_primes(10), vec![2, 3, 5, 7]);
    assert_eq!(sieve_primes(2), vec![2]);
    assert_eq!(PrimeIter::new(1_000_000).count(), 78498);
}

#[test]
fn segmented_iterator_crosses_segments() {
    let start = 1u64 << 20;
    let tail: Vec<u64> = PrimeIter::new(start + 1000).filter(|&p| p > start).collect();
    let naive: Vec<u64> = (start + 1..=start + 1000).filter(|&n| brute::is_prime_naive(n)).collect();
    assert_eq!(tail, naive);
}

#[test]
fn quartic_discriminants() {
    let f = parse_polynomial("x^4 - 3*x^2 - 3").unwrap();
    let g = parse_polynomial("x^4 - 3*x + 3").unwrap();
    assert_eq!(f.discriminant(), BigInt::from(-21168));
    // biquadratic formula 16 q (p^2 - 4q)^2 for x^4 + p x^2 + q
    let (p, q) = (-3i64, -3i64);
    assert_eq!(f.discriminant(), BigInt::from(16 * q * (p * p - 4 * q).pow(2)));
    assert_eq!(g.discriminant(), BigInt::from(4725));
    let primes = |d: &BigInt| -> Vec<u64> {
        let n: u64 = d.magnitude().try_into().unwrap();
        brute::factor_u64(n).into_iter().map(|(p, _)| p).collect()
    };
    assert_eq!(primes(&f.discriminant()), vec![2, 3, 7]);
    assert_eq!(primes(&g.discriminant()), vec![3, 5, 7]);
}

#[test]
fn octic_parses() {
    let f = parse_polynomial("x^8 + x^6 - 3*x^4 + x^2 + 1").unwrap();
    assert_eq!(f.degree(), 8);
    assert_eq!(parse_polynomial("x").unwrap().to_string(), "x");
}

#[test]
fn large_prime_modulus() {
    // p = 2^61 - 1 is 3 mod 4, so x^2 + 1 stays irreducible
    let p = (1u64 << 61) - 1;
    let f = parse_polynomial("x^2 + 1").unwrap();
    assert_eq!(degree_pattern_mod_p(&f, p).unwrap().to_string(), "(2)");
    // largest prime below 2^62 that is 1 mod 4
    let q = (0..1000u64)
        .map(|k| (1u64 << 62) - 1 - 2 * k)
        .find(|&n| n % 4 == 1 && is_prime(n))
        .unwrap();
    assert_eq!(degree_pattern_mod_p(&f, q).unwrap().to_string(), "(1,1)");
}
