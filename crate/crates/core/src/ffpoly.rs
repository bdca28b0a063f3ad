//! Integer polynomials and their reductions modulo primes.
//!
//! Splitting types of unramified primes are read off as the degree pattern of
//! the reduction `f mod p` (Dedekind). Only the pattern is computed: the
//! distinct-degree stages `gcd(g, x^(p^d) - x)` give the number of
//! irreducible factors of each degree without extracting them.
//!
//! Ramified primes are detected as divisors of the polynomial discriminant.
//! When `Z[x]/(f)` is not the maximal order this also flags some unramified
//! primes dividing the index; callers see those as excluded, never guessed.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::density::SplittingType;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("non-integer coefficient at position {position}")]
    NonInteger { position: usize },
    #[error("the zero polynomial is not allowed")]
    Zero,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FfError {
    #[error("polynomial is not monic")]
    NonMonic,
    #[error("polynomial has degree 0")]
    Constant,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds 2^62")]
    ModulusTooLarge(u64),
    #[error("p = {0} divides the discriminant (ramified or index divisor)")]
    Ramified(u64),
}

/// Nonzero polynomial with integer coefficients, ascending.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    /// Trailing zeros are dropped; an all-zero list is rejected.
    pub fn new(mut coeffs: Vec<BigInt>) -> Result<IntPoly, ParseError> {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(ParseError::Zero);
        }
        Ok(IntPoly { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<IntPoly, ParseError> {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonzero polynomial")
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    /// Formal derivative; `None` for constants.
    pub fn derivative(&self) -> Option<IntPoly> {
        let d: Vec<BigInt> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        IntPoly::new(d).ok()
    }

    /// Coefficients reduced into `[0, p)`.
    pub fn reduce(&self, p: u64) -> ModPoly {
        let m = BigInt::from(p);
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.mod_floor(&m).to_u64().expect("residue fits"))
            .collect();
        ModPoly::from_reduced(p, coeffs)
    }

    /// Discriminant `(-1)^(n(n-1)/2) · Res(f, f') / lc(f)`; `1` in degree 1.
    pub fn discriminant(&self) -> BigInt {
        discriminant(self)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            let unit = a.is_one();
            match (e, unit) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => f.write_str("x")?,
                (1, false) => write!(f, "{a}*x")?,
                (_, true) => write!(f, "x^{e}")?,
                (_, false) => write!(f, "{a}*x^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl FromStr for IntPoly {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<IntPoly, ParseError> {
        parse_polynomial(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigUint),
    X,
    Plus,
    Minus,
    Star,
    Caret,
}

const MAX_EXPONENT: usize = 4096;

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                if i < chars.len() && matches!(chars[i], '.' | '/' | 'e' | 'E') {
                    return Err(ParseError::NonInteger { position: start });
                }
                let digits: String = chars[start..i].iter().collect();
                let n = BigUint::parse_bytes(digits.as_bytes(), 10).expect("ascii digits");
                out.push((start, Tok::Int(n)));
            }
            '.' | '/' => return Err(ParseError::NonInteger { position: i }),
            'x' | 'X' => {
                out.push((i, Tok::X));
                i += 1;
            }
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' | '\u{2212}' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            other => {
                return Err(ParseError::Syntax {
                    position: i,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(out)
}

/// Parses integer polynomials in `x` with `+ - *` and `^` powers, e.g.
/// `x^4 - 3*x^2 - 3`. A coefficient may also be written directly before `x`
/// (`3x^2`). Like terms are combined.
pub fn parse_polynomial(text: &str) -> Result<IntPoly, ParseError> {
    let toks = tokenize(text)?;
    let end = text.chars().count();
    let syntax = |position: usize, message: &str| ParseError::Syntax {
        position,
        message: message.to_string(),
    };
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut k = 0;
    if toks.is_empty() {
        return Err(syntax(0, "empty input"));
    }
    let mut first = true;
    while k < toks.len() {
        let mut negative = false;
        match &toks[k].1 {
            Tok::Plus | Tok::Minus => {
                negative = toks[k].1 == Tok::Minus;
                k += 1;
            }
            _ if !first => return Err(syntax(toks[k].0, "expected '+' or '-'")),
            _ => {}
        }
        first = false;

        let mut coeff = BigInt::one();
        let mut exp = 0usize;
        let mut expect_factor = true;
        while expect_factor {
            let pos = toks.get(k).map_or(end, |t| t.0);
            match toks.get(k).map(|t| &t.1) {
                Some(Tok::Int(n)) => {
                    coeff *= BigInt::from_biguint(Sign::Plus, n.clone());
                    k += 1;
                    // implicit product such as 3x
                    if matches!(toks.get(k).map(|t| &t.1), Some(Tok::X)) {
                        continue;
                    }
                }
                Some(Tok::X) => {
                    k += 1;
                    if matches!(toks.get(k).map(|t| &t.1), Some(Tok::Caret)) {
                        k += 1;
                        let epos = toks.get(k).map_or(end, |t| t.0);
                        match toks.get(k).map(|t| &t.1) {
                            Some(Tok::Int(n)) => {
                                let e = n
                                    .to_usize()
                                    .filter(|&e| e <= MAX_EXPONENT)
                                    .ok_or_else(|| syntax(epos, "exponent too large"))?;
                                exp += e;
                                k += 1;
                            }
                            _ => return Err(syntax(epos, "expected exponent")),
                        }
                    } else {
                        exp += 1;
                    }
                    if exp > MAX_EXPONENT {
                        return Err(syntax(pos, "exponent too large"));
                    }
                }
                _ => return Err(syntax(pos, "expected integer or 'x'")),
            }
            expect_factor = matches!(toks.get(k).map(|t| &t.1), Some(Tok::Star));
            if expect_factor {
                k += 1;
            }
        }
        if negative {
            coeff = -coeff;
        }
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, BigInt::zero());
        }
        coeffs[exp] += coeff;
    }
    IntPoly::new(coeffs)
}

/// Accepts the text grammar or an ascending coefficient array such as `[-3, 0, -3, 0, 1]`.
pub fn parse_polynomial_input(text: &str) -> Result<IntPoly, ParseError> {
    let t = text.trim();
    let Some(inner) = t.strip_prefix('[') else {
        return parse_polynomial(t);
    };
    let open = text.find('[').unwrap_or(0);
    let inner = inner.strip_suffix(']').ok_or(ParseError::Syntax {
        position: text.chars().count(),
        message: "expected ']'".to_string(),
    })?;
    let mut coeffs = Vec::new();
    let mut offset = open + 1;
    for item in inner.split(',') {
        let s = item.trim();
        let pos = text[..offset].chars().count();
        if s.contains('.') || s.contains('/') {
            return Err(ParseError::NonInteger { position: pos });
        }
        let c: BigInt = s.parse().map_err(|_| ParseError::Syntax {
            position: pos,
            message: format!("invalid integer {s:?}"),
        })?;
        coeffs.push(c);
        offset += item.len() + 1;
    }
    IntPoly::new(coeffs)
}

// Bareiss fraction-free elimination; exact over the integers.
fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Resultant of two nonzero polynomials via the Sylvester matrix.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    let m = f.degree();
    let k = g.degree();
    let size = m + k;
    if size == 0 {
        return BigInt::one();
    }
    let mut rows = Vec::with_capacity(size);
    for shift in 0..k {
        let mut row = vec![BigInt::zero(); size];
        for (i, c) in f.coeffs.iter().rev().enumerate() {
            row[shift + i] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for (i, c) in g.coeffs.iter().rev().enumerate() {
            row[shift + i] = c.clone();
        }
        rows.push(row);
    }
    determinant(rows)
}

/// Discriminant of a polynomial of degree ≥ 1; constants give 0.
pub fn discriminant(f: &IntPoly) -> BigInt {
    let n = f.degree();
    let Some(df) = f.derivative() else {
        return BigInt::zero();
    };
    if n == 1 {
        return BigInt::one();
    }
    let res = resultant(f, &df);
    let d = res / f.leading();
    if (n * (n - 1) / 2) % 2 == 1 {
        -d
    } else {
        d
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const MAX_MODULUS: u64 = 1 << 62;

/// Polynomial over `F_p`, ascending, no trailing zeros (zero is empty).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ModPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl ModPoly {
    pub fn new(p: u64, coeffs: &[u64]) -> ModPoly {
        ModPoly::from_reduced(p, coeffs.iter().map(|&c| c % p).collect())
    }

    fn from_reduced(p: u64, mut coeffs: Vec<u64>) -> ModPoly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        ModPoly { p, coeffs }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn x(p: u64) -> ModPoly {
        ModPoly::from_reduced(p, vec![0, 1])
    }

    pub fn derivative(&self) -> ModPoly {
        let p = self.p;
        let d = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
            .collect();
        ModPoly::from_reduced(p, d)
    }

    pub fn sub(&self, other: &ModPoly) -> ModPoly {
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                if a >= b {
                    a - b
                } else {
                    a + (p - b)
                }
            })
            .collect();
        ModPoly::from_reduced(p, c)
    }

    pub fn mul(&self, other: &ModPoly) -> ModPoly {
        if self.is_zero() || other.is_zero() {
            return ModPoly::from_reduced(self.p, Vec::new());
        }
        let p = self.p as u128;
        let mut acc = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % p;
            }
        }
        ModPoly::from_reduced(self.p, acc.into_iter().map(|c| c as u64).collect())
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &ModPoly) -> (ModPoly, ModPoly) {
        let p = self.p;
        let db = divisor.degree().expect("division by zero polynomial");
        let inv_lead = inv_mod(divisor.coeffs[db], p);
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return (ModPoly::from_reduced(p, Vec::new()), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = mul_mod(rem[i], inv_lead, p);
            if c == 0 {
                continue;
            }
            quot[i - db] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let t = mul_mod(c, d, p);
                let slot = &mut rem[i - db + j];
                *slot = if *slot >= t { *slot - t } else { *slot + (p - t) };
            }
        }
        rem.truncate(db);
        (ModPoly::from_reduced(p, quot), ModPoly::from_reduced(p, rem))
    }

    pub fn rem(&self, divisor: &ModPoly) -> ModPoly {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> ModPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lead) => {
                let inv = inv_mod(lead, self.p);
                ModPoly::from_reduced(
                    self.p,
                    self.coeffs.iter().map(|&c| mul_mod(c, inv, self.p)).collect(),
                )
            }
        }
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &ModPoly) -> ModPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod modulus` by repeated squaring.
    pub fn pow_mod(&self, mut e: u64, modulus: &ModPoly) -> ModPoly {
        let mut result = ModPoly::from_reduced(self.p, vec![1]).rem(modulus);
        let mut base = self.rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).rem(modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(modulus);
            }
        }
        result
    }

    /// Whether `gcd(g, g')` is nonconstant.
    pub fn has_repeated_factor(&self) -> bool {
        self.gcd(&self.derivative()).degree().is_some_and(|d| d > 0)
    }

    /// Degrees of the irreducible factors of a monic squarefree polynomial,
    /// ascending, by distinct-degree splitting.
    pub fn distinct_degree_pattern(&self) -> Vec<u32> {
        let p = self.p;
        let x = ModPoly::x(p);
        let mut g = self.monic();
        let mut parts = Vec::new();
        let mut h = x.rem(&g);
        let mut d = 1usize;
        while g.degree().unwrap_or(0) >= 2 * d {
            h = h.pow_mod(p, &g);
            let t = g.gcd(&h.sub(&x));
            let td = t.degree().unwrap_or(0);
            if td > 0 {
                parts.extend(std::iter::repeat_n(d as u32, td / d));
                g = g.div_rem(&t).0;
                h = h.rem(&g);
            }
            d += 1;
        }
        if let Some(rest) = g.degree().filter(|&r| r > 0) {
            parts.push(rest as u32);
        }
        parts.sort_unstable();
        parts
    }
}

/// Splitting type of the prime `p` for the field defined by monic `f`: the
/// ascending degrees of the irreducible factors of `f mod p`.
pub fn degree_pattern_mod_p(f: &IntPoly, p: u64) -> Result<SplittingType, FfError> {
    if !f.is_monic() {
        return Err(FfError::NonMonic);
    }
    if f.degree() == 0 {
        return Err(FfError::Constant);
    }
    if p > MAX_MODULUS {
        return Err(FfError::ModulusTooLarge(p));
    }
    if !is_prime(p) {
        return Err(FfError::NotPrime(p));
    }
    let fbar = f.reduce(p);
    if fbar.has_repeated_factor() {
        return Err(FfError::Ramified(p));
    }
    Ok(pattern_unchecked(&fbar))
}

/// Pattern of a reduction already known to be squarefree of degree ≥ 1.
pub(crate) fn pattern_unchecked(fbar: &ModPoly) -> SplittingType {
    SplittingType::new(fbar.distinct_degree_pattern()).expect("degree ≥ 1")
}

/// All primes `≤ bound`, ascending.
pub fn sieve_primes(bound: u64) -> Vec<u64> {
    PrimeIter::new(bound).collect()
}

const SEGMENT: u64 = 1 << 16;

/// Segmented sieve of Eratosthenes over `[2, bound]`.
pub struct PrimeIter {
    bound: u64,
    base: Vec<u64>,
    lo: u64,
    segment: Vec<bool>,
    pos: usize,
}

impl PrimeIter {
    pub fn new(bound: u64) -> PrimeIter {
        let root = (bound as f64).sqrt() as u64 + 1;
        let mut small = vec![true; root as usize + 1];
        let mut base = Vec::new();
        for i in 2..=root as usize {
            if small[i] {
                base.push(i as u64);
                let mut j = i * i;
                while j <= root as usize {
                    small[j] = false;
                    j += i;
                }
            }
        }
        let mut it = PrimeIter {
            bound,
            base,
            lo: 2,
            segment: Vec::new(),
            pos: 0,
        };
        it.fill();
        it
    }

    fn fill(&mut self) {
        self.segment.clear();
        self.pos = 0;
        if self.lo > self.bound {
            return;
        }
        let hi = (self.lo + SEGMENT - 1).min(self.bound);
        self.segment.resize((hi - self.lo + 1) as usize, true);
        for &q in &self.base {
            if q * q > hi {
                break;
            }
            let start = (q * q).max(self.lo.div_ceil(q) * q);
            let mut m = start;
            while m <= hi {
                self.segment[(m - self.lo) as usize] = false;
                m += q;
            }
        }
    }
}

impl Iterator for PrimeIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if self.segment.is_empty() {
                return None;
            }
            while self.pos < self.segment.len() {
                let k = self.pos;
                self.pos += 1;
                if self.segment[k] {
                    return Some(self.lo + k as u64);
                }
            }
            self.lo += self.segment.len() as u64;
            self.fill();
        }
    }
}
