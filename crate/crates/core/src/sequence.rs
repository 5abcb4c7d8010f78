//! DHM sequences of period `N = 2q`.
//!
//! A sequence is described by a triple `(i, j, l)` of distinct class indices.
//! Under the CRT map `Z_2 × Z_q → Z_{2q}`, `(a, b) ↦ (q+1)b + qa`, the support
//! is `{0} × (D_i ∪ D_j)` together with `{1} × (D_l ∪ D_j)`. The "tilde"
//! variant additionally sets the bit at index 0.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cyclotomy::CyclotomicTable;
use crate::error::{domain, Error, Result};
use crate::gaussring::{GaussPeriodSet, IdentityFailure, RingElement};
use crate::ntheory::PrimeParams;

/// `(a, b) ↦ ((q+1)b + qa) mod 2q`.
pub fn crt_forward(q: u64, a: u64, b: u64) -> u64 {
    let n = 2 * q;
    (((q + 1) % n) * (b % q) + q * (a % 2)) % n
}

/// `λ ↦ (λ mod 2, λ mod q)`.
pub fn crt_inverse(q: u64, lambda: u64) -> (u64, u64) {
    (lambda % 2, lambda % q)
}

/// Three distinct class indices `(i, j, l)`, each in `0..4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub i: u8,
    pub j: u8,
    pub l: u8,
}

impl Triple {
    pub fn new(i: u8, j: u8, l: u8) -> Result<Self> {
        if i > 3 || j > 3 || l > 3 {
            return domain(format!("class indices must be in 0..=3, got ({i},{j},{l})"));
        }
        if i == j || j == l || i == l {
            return domain(format!("class indices must be distinct, got ({i},{j},{l})"));
        }
        Ok(Triple { i, j, l })
    }

    /// The class index not used by the triple.
    pub fn missing(&self) -> u8 {
        6 - self.i - self.j - self.l
    }

    const fn of(i: u8, j: u8, l: u8) -> Self {
        Triple { i, j, l }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.i, self.j, self.l)
    }
}

impl FromStr for Triple {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [i, j, l] = parts.as_slice() else {
            return domain(format!("expected i,j,l but got {s:?}"));
        };
        let digit = |x: &str| {
            x.parse::<u8>()
                .map_err(|_| Error::Domain(format!("{x:?} is not a class index")))
        };
        Triple::new(digit(i)?, digit(j)?, digit(l)?)
    }
}

impl Serialize for Triple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Triple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which hypothesis on `q = s^2 + 4t^2` a triple list requires.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `t = 1`
    T1,
    /// `s = 1`
    S1,
}

const PLAIN_T1: [Triple; 2] = [Triple::of(0, 1, 3), Triple::of(0, 2, 1)];
const PLAIN_S1: [Triple; 2] = [Triple::of(1, 0, 3), Triple::of(0, 1, 2)];
const TILDE_T1: [Triple; 4] = [
    Triple::of(0, 1, 3),
    Triple::of(0, 2, 3),
    Triple::of(1, 2, 0),
    Triple::of(1, 3, 0),
];
const TILDE_S1: [Triple; 4] = [
    Triple::of(0, 1, 2),
    Triple::of(0, 3, 2),
    Triple::of(1, 0, 3),
    Triple::of(1, 2, 3),
];

/// Triples known to give optimal autocorrelation under `family`.
pub fn condition_list(family: Family, tilde: bool) -> &'static [Triple] {
    match (family, tilde) {
        (Family::T1, false) => &PLAIN_T1,
        (Family::S1, false) => &PLAIN_S1,
        (Family::T1, true) => &TILDE_T1,
        (Family::S1, true) => &TILDE_S1,
    }
}

/// Result of matching `(triple, tilde)` against the optimal-autocorrelation lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionTag {
    pub family: Option<Family>,
    pub tilde: bool,
    pub triple: Triple,
}

impl ConditionTag {
    pub fn is_matched(&self) -> bool {
        self.family.is_some()
    }

    /// Short label: `t1`, `s1`, `tilde-t1`, `tilde-s1` or `none`.
    pub fn label(&self) -> &'static str {
        match (self.family, self.tilde) {
            (None, _) => "none",
            (Some(Family::T1), false) => "t1",
            (Some(Family::S1), false) => "s1",
            (Some(Family::T1), true) => "tilde-t1",
            (Some(Family::S1), true) => "tilde-s1",
        }
    }
}

/// Matches against the literal lists with the normalised `(s, t)`. The plain
/// lists are disjoint, as are the tilde lists, so at most one family applies.
pub fn condition_match(params: &PrimeParams, triple: Triple, tilde: bool) -> ConditionTag {
    let family = [(Family::T1, params.t == 1), (Family::S1, params.s == 1)]
        .into_iter()
        .find(|&(fam, holds)| holds && condition_list(fam, tilde).contains(&triple))
        .map(|(fam, _)| fam);
    ConditionTag {
        family,
        tilde,
        triple,
    }
}

/// Every condition-matched `(triple, tilde)` for `params`, ordered by
/// `(tilde, triple)`.
pub fn matched_conditions(params: &PrimeParams) -> Vec<ConditionTag> {
    let mut out = Vec::new();
    for tilde in [false, true] {
        for fam in [Family::T1, Family::S1] {
            for &triple in condition_list(fam, tilde) {
                let tag = condition_match(params, triple, tilde);
                if tag.family == Some(fam) {
                    out.push(tag);
                }
            }
        }
    }
    out.sort_by_key(|t| (t.tilde, t.triple));
    out
}

/// One period of a DHM sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DhmSequence {
    pub params: PrimeParams,
    pub triple: Triple,
    pub tilde: bool,
    pub bits: Vec<bool>,
}

/// Builds `S(i,j,l)` or, with `tilde`, `S̃(i,j,l)`.
pub fn build_sequence(
    params: &PrimeParams,
    table: &CyclotomicTable,
    triple: Triple,
    tilde: bool,
) -> DhmSequence {
    let q = params.q;
    let mut bits = vec![false; 2 * q as usize];
    for b in 1..q {
        let c = table.class_of(b);
        if c == triple.i || c == triple.j {
            bits[crt_forward(q, 0, b) as usize] = true;
        }
        if c == triple.l || c == triple.j {
            bits[crt_forward(q, 1, b) as usize] = true;
        }
    }
    if tilde {
        bits[0] = true;
    }
    DhmSequence {
        params: params.clone(),
        triple,
        tilde,
        bits,
    }
}

impl DhmSequence {
    pub fn period(&self) -> usize {
        self.bits.len()
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Bits as a `0`/`1` string, index 0 first.
    pub fn bit_string(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }

    /// Agreements minus disagreements between the sequence and its shift by `tau`.
    pub fn autocorrelation(&self, tau: usize) -> i64 {
        let n = self.period();
        (0..n)
            .map(|t| {
                if self.bits[(t + tau) % n] == self.bits[t] {
                    1
                } else {
                    -1
                }
            })
            .sum()
    }

    pub fn autocorr_spectrum(&self) -> Vec<i64> {
        (0..self.period())
            .map(|tau| self.autocorrelation(tau))
            .collect()
    }

    /// `max |A(τ)|` over `1 <= τ < N`.
    pub fn max_offpeak(&self) -> i64 {
        self.autocorr_spectrum()[1..]
            .iter()
            .map(|a| a.abs())
            .max()
            .unwrap_or(0)
    }

    /// `S(2) = Σ s_λ 2^λ`.
    pub fn evaluate_at_2(&self) -> BigUint {
        let mut v = BigUint::zero();
        for (idx, &b) in self.bits.iter().enumerate() {
            if b {
                v.set_bit(idx as u64, true);
            }
        }
        v
    }
}

/// Checks `S(2) ≡ η_{i-k} + η_{j-k} + 2^q (η_{l-k} + η_{j-k})` (plus 1 for
/// the tilde variant) in `Z / (2^N - 1)`.
pub fn check_s2_congruence(seq: &DhmSequence, gps: &GaussPeriodSet) -> Option<IdentityFailure> {
    let p = &seq.params;
    let n = gps.n();
    let k = p.k as i64;
    let (i, j, l) = (
        seq.triple.i as i64,
        seq.triple.j as i64,
        seq.triple.l as i64,
    );
    let mut rhs = gps.eta(i - k)
        + gps.eta(j - k)
        + RingElement::pow2(n, p.q) * (gps.eta(l - k) + gps.eta(j - k));
    if seq.tilde {
        rhs = rhs + RingElement::one(n);
    }
    let lhs = RingElement::new(n, seq.evaluate_at_2());
    (lhs != rhs).then(|| IdentityFailure {
        q: p.q,
        identity: S2_CONGRUENCE,
        detail: format!("ijl={} tilde={}", seq.triple, seq.tilde),
    })
}

pub const S2_CONGRUENCE: &str = "s2-congruence";

pub fn verify_s2_congruence(seq: &DhmSequence, gps: &GaussPeriodSet) -> bool {
    check_s2_congruence(seq, gps).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomy::build_classes;
    use crate::gaussring::gauss_periods;
    use crate::ntheory::{build_params, dhm_primes};

    fn q5(triple: &str, tilde: bool) -> DhmSequence {
        let p = build_params(5, Some(3)).unwrap();
        build_sequence(&p, &build_classes(&p), triple.parse().unwrap(), tilde)
    }

    /// Autocorrelation straight from the definition with signed exponents.
    fn autocorr_oracle(bits: &[bool], tau: usize) -> i64 {
        let n = bits.len();
        (0..n)
            .map(|t| {
                (-1i64).pow((bits[(t + tau) % n] as i64 - bits[t] as i64).unsigned_abs() as u32)
            })
            .sum()
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_forward(5, 0, 1), 6);
        assert_eq!(crt_forward(5, 0, 0), 0);
        assert_eq!(crt_forward(5, 1, 3), 3);
        assert_eq!(crt_inverse(5, 7), (1, 2));
        assert_eq!(crt_inverse(5, 0), (0, 0));
        assert_eq!(crt_inverse(5, 8), (0, 3));
    }

    #[test]
    fn crt_round_trip() {
        for q in dhm_primes(200) {
            let mut seen = vec![false; 2 * q as usize];
            for a in 0..2 {
                for b in 0..q {
                    let x = crt_forward(q, a, b);
                    assert_eq!(crt_inverse(q, x), (a, b));
                    seen[x as usize] = true;
                }
            }
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn triple_parsing() {
        assert_eq!(
            "1,0,3".parse::<Triple>().unwrap(),
            Triple::new(1, 0, 3).unwrap()
        );
        assert!("0,0,1".parse::<Triple>().is_err());
        assert!("0,1".parse::<Triple>().is_err());
        assert!("0,1,4".parse::<Triple>().is_err());
        assert!("a,1,2".parse::<Triple>().is_err());
        assert_eq!(Triple::new(1, 0, 3).unwrap().missing(), 2);
    }

    #[test]
    fn golden_bits() {
        assert_eq!(q5("1,0,3", true).bit_string(), "1100001110");
        assert_eq!(q5("1,2,3", true).bit_string(), "1000100111");
        assert_eq!(q5("1,0,3", false).weight(), 4);
    }

    #[test]
    fn weights_and_first_bit() {
        for q in dhm_primes(200) {
            let p = build_params(q, None).unwrap();
            let t = build_classes(&p);
            for tilde in [false, true] {
                let s = build_sequence(&p, &t, Triple::new(0, 1, 3).unwrap(), tilde);
                assert_eq!(s.weight() as u64, if tilde { q } else { q - 1 });
                assert_eq!(s.bits[0], tilde);
            }
        }
    }

    #[test]
    fn autocorrelation_examples() {
        let s = q5("1,0,3", true);
        assert_eq!(s.autocorrelation(0), 10);
        assert_eq!(s.autocorrelation(5), -2);
        assert_eq!(s.max_offpeak(), 2);
        assert_eq!(
            s.autocorr_spectrum(),
            vec![10, 2, -2, -2, -2, -2, -2, -2, -2, 2]
        );

        let p = build_params(13, None).unwrap();
        let s = build_sequence(&p, &build_classes(&p), "0,1,3".parse().unwrap(), false);
        assert_eq!(s.autocorr_spectrum().len(), 26);
        assert_eq!(s.max_offpeak(), 2);
    }

    #[test]
    fn autocorrelation_matches_definition_mod_4() {
        for q in [5, 13, 29] {
            let p = build_params(q, None).unwrap();
            let t = build_classes(&p);
            for tilde in [false, true] {
                let s = build_sequence(&p, &t, Triple::new(2, 3, 0).unwrap(), tilde);
                for tau in 0..s.period() {
                    let a = s.autocorrelation(tau);
                    assert_eq!(a, autocorr_oracle(&s.bits, tau));
                    assert_eq!((a - s.period() as i64).rem_euclid(4), 0);
                }
            }
        }
    }

    #[test]
    fn s2_examples() {
        assert_eq!(q5("1,0,3", true).evaluate_at_2(), BigUint::from(451u32));
        assert_eq!(q5("1,0,3", false).evaluate_at_2(), BigUint::from(450u32));
        let mut z = q5("1,0,3", false);
        z.bits.iter_mut().for_each(|b| *b = false);
        assert!(z.evaluate_at_2().is_zero());
    }

    #[test]
    fn condition_examples() {
        let p5 = build_params(5, Some(3)).unwrap();
        let tag = condition_match(&p5, "1,0,3".parse().unwrap(), true);
        assert_eq!(tag.family, Some(Family::S1));
        assert_eq!(tag.label(), "tilde-s1");

        let p13 = build_params(13, None).unwrap();
        assert!(!condition_match(&p13, "0,1,2".parse().unwrap(), false).is_matched());
        let tag = condition_match(&p13, "0,1,3".parse().unwrap(), false);
        assert_eq!((tag.family, tag.label()), (Some(Family::T1), "t1"));
        assert_eq!(
            condition_match(&p13, "3,1,0".parse().unwrap(), true).label(),
            "none"
        );
    }

    #[test]
    fn matched_counts() {
        assert_eq!(
            matched_conditions(&build_params(5, None).unwrap()).len(),
            12
        );
        assert_eq!(
            matched_conditions(&build_params(13, None).unwrap()).len(),
            6
        );
        assert_eq!(
            matched_conditions(&build_params(37, None).unwrap()).len(),
            6
        );
        assert!(matched_conditions(&build_params(61, None).unwrap()).is_empty());
    }

    #[test]
    fn s2_congruence_examples() {
        let p = build_params(5, Some(3)).unwrap();
        let t = build_classes(&p);
        let gps = gauss_periods(&p, &t);
        for (ijl, tilde) in [("1,0,3", false), ("0,1,2", false), ("1,0,3", true)] {
            let s = build_sequence(&p, &t, ijl.parse().unwrap(), tilde);
            assert!(verify_s2_congruence(&s, &gps), "{ijl} {tilde}");
        }
        // the congruence is insensitive to the autocorrelation hypothesis
        let p = build_params(29, None).unwrap();
        let t = build_classes(&p);
        let gps = gauss_periods(&p, &t);
        for i in 0..4 {
            for j in 0..4 {
                for l in 0..4 {
                    let Ok(tr) = Triple::new(i, j, l) else {
                        continue;
                    };
                    for tilde in [false, true] {
                        let s = build_sequence(&p, &t, tr, tilde);
                        assert!(verify_s2_congruence(&s, &gps));
                    }
                }
            }
        }
    }

    #[test]
    fn s2_congruence_detects_flipped_bit() {
        let p = build_params(13, None).unwrap();
        let t = build_classes(&p);
        let gps = gauss_periods(&p, &t);
        let mut s = build_sequence(&p, &t, "0,1,3".parse().unwrap(), false);
        s.bits[3] = !s.bits[3];
        let f = check_s2_congruence(&s, &gps).unwrap();
        assert_eq!(f.identity, S2_CONGRUENCE);
    }
}
