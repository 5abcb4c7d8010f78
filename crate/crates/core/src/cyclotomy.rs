//! Cyclotomic classes and cyclotomic numbers of order four over `F_q`.
//!
//! The brute-force count is the reference; the closed-form table in terms of
//! `q = s^2 + 4t^2` is checked against it, never the other way round.

use crate::error::{consistency, domain, Result};
use crate::ntheory::PrimeParams;

const UNCLASSED: u8 = u8::MAX;

/// Partition of `F_q^*` into `D_0..D_3` with the brute-force cyclotomic numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicTable {
    pub q: u64,
    pub theta: u64,
    /// Dense map from residue to class index; entry 0 is unused.
    pub class_of: Vec<u8>,
    /// `classes[λ]` lists `θ^{λ+4i} mod q` for `i = 0..f`, in that order.
    pub classes: [Vec<u64>; 4],
    /// `numbers[i][j] = |(D_i + 1) ∩ D_j|`.
    pub numbers: [[u64; 4]; 4],
}

impl CyclotomicTable {
    /// Labels classes by powers of `theta`, which must generate `F_q^*`.
    pub fn from_generator(q: u64, theta: u64) -> Self {
        let mut class_of = vec![UNCLASSED; q as usize];
        let mut classes: [Vec<u64>; 4] = Default::default();
        let mut x = 1u64;
        for e in 0..q - 1 {
            let lambda = (e % 4) as usize;
            class_of[x as usize] = lambda as u8;
            classes[lambda].push(x);
            x = x * theta % q;
        }
        debug_assert_eq!(x, 1, "theta must be a generator");
        let mut table = CyclotomicTable {
            q,
            theta,
            class_of,
            classes,
            numbers: [[0; 4]; 4],
        };
        for i in 0..4 {
            for j in 0..4 {
                table.numbers[i][j] = cyclotomic_number_bruteforce(&table, i, j);
            }
        }
        table
    }

    /// Class index of a nonzero residue.
    pub fn class_of(&self, x: u64) -> u8 {
        self.class_of[(x % self.q) as usize]
    }

    /// `(i, j)` with indices taken mod 4.
    pub fn number(&self, i: i64, j: i64) -> u64 {
        self.numbers[i.rem_euclid(4) as usize][j.rem_euclid(4) as usize]
    }

    pub fn f(&self) -> u64 {
        (self.q - 1) / 4
    }

    /// Entries that disagree with the closed-form pattern, as
    /// `(i, j, 16 * brute_force, closed_form)`.
    pub fn closed_form_mismatches(&self, cf: &ClosedForm) -> Vec<(usize, usize, i64, i64)> {
        let mut out = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                let got = 16 * self.numbers[i][j] as i64;
                let want = cf.slot(i, j);
                if got != want {
                    out.push((i, j, got, want));
                }
            }
        }
        out
    }
}

/// Cyclotomic classes for the generator recorded in `params`.
pub fn build_classes(params: &PrimeParams) -> CyclotomicTable {
    CyclotomicTable::from_generator(params.q, params.theta)
}

/// Counts `a ∈ D_i` with `a + 1 ∈ D_j`; `a = -1` contributes nothing.
pub fn cyclotomic_number_bruteforce(table: &CyclotomicTable, i: usize, j: usize) -> u64 {
    table.classes[i % 4]
        .iter()
        .filter(|&&a| {
            let b = (a + 1) % table.q;
            b != 0 && table.class_of[b as usize] as usize == j % 4
        })
        .count() as u64
}

/// The five constants of the order-four table, each equal to `16 * (i, j)`
/// for the slots it governs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosedForm {
    pub a: i64,
    pub b: i64,
    pub bbar: i64,
    pub c: i64,
    pub dnum: i64,
}

impl ClosedForm {
    /// Closed-form value of `16 * (i, j)`.
    pub fn slot(&self, i: usize, j: usize) -> i64 {
        match (i % 4, j % 4) {
            (0, 0) | (2, 2) | (2, 0) => self.a,
            (0, 1) | (1, 3) | (3, 2) => self.b,
            (1, 2) | (0, 3) | (3, 1) => self.bbar,
            (0, 2) => self.c,
            _ => self.dnum,
        }
    }
}

/// Evaluates the closed-form constants for `q = s^2 + 4t^2`, `s ≡ 1 (mod 4)`.
pub fn closed_form_numbers(q: u64, s: i64, t: i64) -> Result<ClosedForm> {
    let qi = q as i64;
    if s * s + 4 * t * t != qi || s.rem_euclid(4) != 1 {
        return domain(format!(
            "({s}, {t}) is not a normalised representation of {q}"
        ));
    }
    let cf = ClosedForm {
        a: qi - 7 + 2 * s,
        b: qi + 1 + 2 * s - 8 * t,
        bbar: qi + 1 + 2 * s + 8 * t,
        c: qi + 1 - 6 * s,
        dnum: qi - 3 - 2 * s,
    };
    for (name, v) in [
        ("A", cf.a),
        ("B", cf.b),
        ("Bbar", cf.bbar),
        ("C", cf.c),
        ("D", cf.dnum),
    ] {
        if v < 0 || v % 16 != 0 {
            return consistency(format!(
                "closed-form constant {name} = {v} is not a non-negative multiple of 16 (q = {q})"
            ));
        }
    }
    Ok(cf)
}

/// Reads `(s, t)` off the brute-force numbers: `16(0,0) = q - 7 + 2s` and
/// `16((0,3) - (0,1)) = 16t`. The sign of `t` follows the generator.
pub fn recover_st(table: &CyclotomicTable) -> Result<(i64, i64)> {
    let q = table.q as i64;
    let twice_s = 16 * table.numbers[0][0] as i64 - q + 7;
    if twice_s % 2 != 0 {
        return consistency(format!("16(0,0) - q + 7 = {twice_s} is odd (q = {q})"));
    }
    let s = twice_s / 2;
    let t = table.numbers[0][3] as i64 - table.numbers[0][1] as i64;
    if s * s + 4 * t * t != q {
        return consistency(format!(
            "recovered (s, t) = ({s}, {t}) but s^2 + 4t^2 != {q}"
        ));
    }
    Ok((s, t))
}

/// Legendre symbol via class parity: `+1` on `D_0 ∪ D_2`, `-1` on `D_1 ∪ D_3`.
pub fn quadratic_character(table: &CyclotomicTable, x: u64) -> Result<i8> {
    if x.is_multiple_of(table.q) {
        return domain("quadratic character is undefined at 0");
    }
    Ok(if table.class_of(x).is_multiple_of(2) {
        1
    } else {
        -1
    })
}
