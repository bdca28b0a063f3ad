//! Empirical prime census for a monic integer polynomial.
//!
//! Every prime up to a bound is either excluded (it divides the polynomial
//! discriminant) or classified by the degree pattern of `f mod p`. Counts are
//! aggregated per splitting type and per gcd of the type; fractions are taken
//! over the classified primes only.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::thread;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::density::SplittingType;
use crate::ffpoly::{self, IntPoly};
use crate::rational::Rational;

/// Maximum number of inert primes kept in a report.
pub const INERT_CAP: usize = 10_000;

pub const REPORT_FORMAT: &str = "gcdeq.scan-report";
pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("polynomial must be monic")]
    NonMonic,
    #[error("polynomial must have degree at least 1")]
    Constant,
    #[error("polynomial is not squarefree (zero discriminant)")]
    NotSquarefree,
    #[error("bound must be between 2 and 2^62, got {0}")]
    InvalidBound(u64),
    #[error("reports cover different bounds: {0} vs {1}")]
    BoundMismatch(u64, u64),
    #[error("malformed report: {0}")]
    Format(String),
    #[error("unsupported report version {found} (expected {REPORT_VERSION})")]
    Version { found: u32 },
    #[error("report invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub polynomial: IntPoly,
    pub bound: u64,
    /// Number of primes `≤ bound`.
    pub prime_count: u64,
    pub counts: BTreeMap<SplittingType, u64>,
    /// Prime divisors of the discriminant up to the bound.
    pub excluded_primes: Vec<u64>,
    pub gcd_counts: BTreeMap<u32, u64>,
    /// Smallest classified primes with a single-part type, at most [`INERT_CAP`].
    pub inert_primes: Vec<u64>,
    pub inert_truncated: bool,
}

impl ScanReport {
    /// Number of classified (non-excluded) primes.
    pub fn unramified_count(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn inert_count(&self) -> u64 {
        self.counts
            .iter()
            .filter(|(t, _)| t.is_inert())
            .map(|(_, c)| c)
            .sum()
    }

    /// Exact fraction of classified primes with the given type.
    pub fn empirical_density(&self, t: &SplittingType) -> Rational {
        let total = self.unramified_count();
        if total == 0 {
            return Rational::zero();
        }
        Rational::from_counts(self.counts.get(t).copied().unwrap_or(0), total)
    }

    pub fn fraction(&self, t: &SplittingType) -> f64 {
        self.empirical_density(t).to_f64()
    }

    pub fn check_invariants(&self) -> Result<(), ScanError> {
        let bad = |m: String| Err(ScanError::Invariant(m));
        let classified = self.unramified_count();
        if classified + self.excluded_primes.len() as u64 != self.prime_count {
            return bad(format!(
                "{} classified + {} excluded != {} primes",
                classified,
                self.excluded_primes.len(),
                self.prime_count
            ));
        }
        let mut by_gcd: BTreeMap<u32, u64> = BTreeMap::new();
        for (t, &c) in &self.counts {
            if t.degree() as usize != self.polynomial.degree() {
                return bad(format!("type {t} does not sum to the degree"));
            }
            *by_gcd.entry(t.gcd()).or_insert(0) += c;
        }
        by_gcd.retain(|_, c| *c > 0);
        let gcds: BTreeMap<u32, u64> = self
            .gcd_counts
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(&k, &v)| (k, v))
            .collect();
        if by_gcd != gcds {
            return bad("gcd counts disagree with type counts".into());
        }
        let inert = self.inert_count();
        let expected_len = inert.min(INERT_CAP as u64);
        if self.inert_primes.len() as u64 != expected_len
            || self.inert_truncated != (inert > INERT_CAP as u64)
        {
            return bad("inert prime list inconsistent with counts".into());
        }
        if !self.inert_primes.windows(2).all(|w| w[0] < w[1])
            || !self.excluded_primes.windows(2).all(|w| w[0] < w[1])
        {
            return bad("prime lists must be strictly ascending".into());
        }
        if self
            .excluded_primes
            .iter()
            .chain(&self.inert_primes)
            .any(|&p| p > self.bound)
        {
            return bad("prime above the bound".into());
        }
        Ok(())
    }
}

/// Classification of one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeRecord {
    pub prime: u64,
    /// `None` when the prime divides the discriminant.
    pub splitting: Option<SplittingType>,
}

struct Prepared<'a> {
    poly: &'a IntPoly,
    disc: BigInt,
}

fn prepare(f: &IntPoly, bound: u64) -> Result<Prepared<'_>, ScanError> {
    if f.degree() == 0 {
        return Err(ScanError::Constant);
    }
    if !f.is_monic() {
        return Err(ScanError::NonMonic);
    }
    if !(2..=1u64 << 62).contains(&bound) {
        return Err(ScanError::InvalidBound(bound));
    }
    let disc = f.discriminant();
    if disc.is_zero() {
        return Err(ScanError::NotSquarefree);
    }
    Ok(Prepared { poly: f, disc })
}

impl Prepared<'_> {
    fn classify(&self, p: u64) -> Option<SplittingType> {
        let r = (&self.disc % BigInt::from(p)).to_i64().expect("residue fits");
        if r == 0 {
            return None;
        }
        Some(ffpoly::pattern_unchecked(&self.poly.reduce(p)))
    }
}

#[derive(Default)]
struct Partial {
    counts: BTreeMap<SplittingType, u64>,
    excluded: Vec<u64>,
    inert: Vec<u64>,
}

fn scan_chunk(prep: &Prepared<'_>, primes: &[u64]) -> Partial {
    let mut part = Partial::default();
    for &p in primes {
        match prep.classify(p) {
            None => part.excluded.push(p),
            Some(t) => {
                if t.is_inert() && part.inert.len() < INERT_CAP {
                    part.inert.push(p);
                }
                *part.counts.entry(t).or_insert(0) += 1;
            }
        }
    }
    part
}

/// Census of all primes `≤ bound`.
pub fn scan(f: &IntPoly, bound: u64) -> Result<ScanReport, ScanError> {
    scan_with_jobs(f, bound, 1)
}

/// Census with the prime range split into `jobs` contiguous chunks scanned
/// concurrently. The merged report is identical to a sequential scan.
pub fn scan_with_jobs(f: &IntPoly, bound: u64, jobs: usize) -> Result<ScanReport, ScanError> {
    let prep = prepare(f, bound)?;
    let primes = ffpoly::sieve_primes(bound);
    let jobs = jobs.clamp(1, 256);
    let chunk = primes.len().div_ceil(jobs).max(1);
    let partials: Vec<Partial> = if jobs == 1 {
        vec![scan_chunk(&prep, &primes)]
    } else {
        thread::scope(|s| {
            let handles: Vec<_> = primes
                .chunks(chunk)
                .map(|part| {
                    let prep = &prep;
                    s.spawn(move || scan_chunk(prep, part))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("scan worker panicked"))
                .collect()
        })
    };

    let mut counts: BTreeMap<SplittingType, u64> = BTreeMap::new();
    let mut excluded = Vec::new();
    let mut inert = Vec::new();
    for p in partials {
        for (t, c) in p.counts {
            *counts.entry(t).or_insert(0) += c;
        }
        excluded.extend(p.excluded);
        inert.extend(p.inert);
    }
    excluded.sort_unstable();
    inert.sort_unstable();
    inert.truncate(INERT_CAP);
    let mut gcd_counts: BTreeMap<u32, u64> = BTreeMap::new();
    for (t, &c) in &counts {
        *gcd_counts.entry(t.gcd()).or_insert(0) += c;
    }
    let inert_total: u64 = counts.iter().filter(|(t, _)| t.is_inert()).map(|(_, c)| c).sum();
    Ok(ScanReport {
        polynomial: f.clone(),
        bound,
        prime_count: primes.len() as u64,
        counts,
        excluded_primes: excluded,
        gcd_counts,
        inert_primes: inert,
        inert_truncated: inert_total > INERT_CAP as u64,
    })
}

/// Per-prime classification stream, ascending.
pub fn scan_stream(f: &IntPoly, bound: u64) -> Result<Vec<PrimeRecord>, ScanError> {
    let prep = prepare(f, bound)?;
    Ok(ffpoly::PrimeIter::new(bound)
        .map(|p| PrimeRecord {
            prime: p,
            splitting: prep.classify(p),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub bound: u64,
    /// Primes unramified for both polynomials.
    pub common_primes: u64,
    /// Inert for one iff inert for the other, on common primes.
    pub inert_sets_equal: bool,
    pub first_inert_disagreement: Option<u64>,
    pub first_gcd_disagreement: Option<u64>,
    pub first_type_disagreement: Option<u64>,
    pub type_agreement_fraction: Rational,
    pub gcd_agreement_fraction: Rational,
}

/// Compares two reports of equal bound prime by prime. Per-prime streams are
/// recomputed from the stored polynomials.
pub fn compare_scans(r1: &ScanReport, r2: &ScanReport) -> Result<ComparisonReport, ScanError> {
    if r1.bound != r2.bound {
        return Err(ScanError::BoundMismatch(r1.bound, r2.bound));
    }
    let s1 = scan_stream(&r1.polynomial, r1.bound)?;
    let s2 = scan_stream(&r2.polynomial, r2.bound)?;
    let mut common = 0u64;
    let mut type_agree = 0u64;
    let mut gcd_agree = 0u64;
    let mut first_inert = None;
    let mut first_gcd = None;
    let mut first_type = None;
    for (a, b) in s1.iter().zip(&s2) {
        debug_assert_eq!(a.prime, b.prime);
        let (Some(ta), Some(tb)) = (&a.splitting, &b.splitting) else {
            continue;
        };
        common += 1;
        if ta == tb {
            type_agree += 1;
        } else {
            first_type.get_or_insert(a.prime);
        }
        if ta.gcd() == tb.gcd() {
            gcd_agree += 1;
        } else {
            first_gcd.get_or_insert(a.prime);
        }
        if ta.is_inert() != tb.is_inert() {
            first_inert.get_or_insert(a.prime);
        }
    }
    let frac = |n: u64| {
        if common == 0 {
            Rational::one()
        } else {
            Rational::from_counts(n, common)
        }
    };
    Ok(ComparisonReport {
        bound: r1.bound,
        common_primes: common,
        inert_sets_equal: first_inert.is_none(),
        first_inert_disagreement: first_inert,
        first_gcd_disagreement: first_gcd,
        first_type_disagreement: first_type,
        type_agreement_fraction: frac(type_agree),
        gcd_agreement_fraction: frac(gcd_agree),
    })
}

#[derive(Serialize, Deserialize)]
struct DensityEntry {
    exact: Rational,
    approx_decimal: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReportFile {
    format: String,
    version: u32,
    polynomial: String,
    bound: u64,
    prime_count: u64,
    unramified_count: u64,
    counts: BTreeMap<SplittingType, u64>,
    /// Derived from `counts`; decimals are approximations.
    densities: BTreeMap<SplittingType, DensityEntry>,
    excluded_primes: Vec<u64>,
    gcd_counts: BTreeMap<u32, u64>,
    inert_primes: Vec<u64>,
    inert_truncated: bool,
    inert_cap: usize,
}

impl ScanReport {
    pub fn to_json(&self) -> String {
        let unramified = self.unramified_count();
        let densities = self
            .counts
            .keys()
            .map(|t| {
                let d = self.empirical_density(t);
                (
                    t.clone(),
                    DensityEntry {
                        exact: d,
                        approx_decimal: d.to_f64(),
                    },
                )
            })
            .collect();
        let file = ReportFile {
            format: REPORT_FORMAT.to_string(),
            version: REPORT_VERSION,
            polynomial: self.polynomial.to_string(),
            bound: self.bound,
            prime_count: self.prime_count,
            unramified_count: unramified,
            counts: self.counts.clone(),
            densities,
            excluded_primes: self.excluded_primes.clone(),
            gcd_counts: self.gcd_counts.clone(),
            inert_primes: self.inert_primes.clone(),
            inert_truncated: self.inert_truncated,
            inert_cap: INERT_CAP,
        };
        serde_json::to_string_pretty(&file).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<ScanReport, ScanError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| ScanError::Format(e.to_string()))?;
        match value.get("format").and_then(|v| v.as_str()) {
            Some(REPORT_FORMAT) => {}
            _ => return Err(ScanError::Format("missing or unknown format tag".into())),
        }
        let version = value
            .get("version")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| ScanError::Format("missing version".into()))?;
        if version != REPORT_VERSION as u64 {
            return Err(ScanError::Version {
                found: version as u32,
            });
        }
        let file: ReportFile =
            serde_json::from_value(value).map_err(|e| ScanError::Format(e.to_string()))?;
        let polynomial = ffpoly::parse_polynomial(&file.polynomial)
            .map_err(|e| ScanError::Format(format!("polynomial: {e}")))?;
        let report = ScanReport {
            polynomial,
            bound: file.bound,
            prime_count: file.prime_count,
            counts: file.counts,
            excluded_primes: file.excluded_primes,
            gcd_counts: file.gcd_counts,
            inert_primes: file.inert_primes,
            inert_truncated: file.inert_truncated,
        };
        if report.unramified_count() != file.unramified_count {
            return Err(ScanError::Invariant("unramified_count does not match counts".into()));
        }
        for (t, d) in &file.densities {
            if report.empirical_density(t) != d.exact {
                return Err(ScanError::Invariant(format!("density of {t} does not match counts")));
            }
        }
        report.check_invariants()?;
        Ok(report)
    }
}

pub fn write_report(path: &Path, report: &ScanReport) -> Result<(), ScanError> {
    fs::write(path, report.to_json() + "\n")?;
    Ok(())
}

pub fn read_report(path: &Path) -> Result<ScanReport, ScanError> {
    ScanReport::from_json(&fs::read_to_string(path)?)
}
