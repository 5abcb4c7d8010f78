//! Runs every exact identity check for a range of primes and collects the
//! failures, itemised by prime, identity and index.

use rayon::prelude::*;
use serde::Serialize;

use crate::context::PrimeContext;
use crate::cyclotomy::closed_form_numbers;
use crate::error::Result;
use crate::gaussring::{
    check_difference_squares, check_gauss_sum_square, check_period_products,
    check_period_products_shifted, check_scaled_products, IdentityFailure,
};
use crate::ntheory::dhm_primes;
use crate::sequence::{check_s2_congruence, matched_conditions};

pub const CLOSED_FORM: &str = "cyclotomic-closed-form";

/// Results for one prime.
#[derive(Debug, Clone, Default, Serialize)]
pub struct PrimeOutcome {
    pub q: u64,
    pub checks: usize,
    pub failures: Vec<IdentityFailure>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SuiteReport {
    pub primes: Vec<u64>,
    pub checks: usize,
    pub failures: Vec<IdentityFailure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks one prime. The context is taken as given, so a caller may hand in
/// a deliberately altered table.
pub fn verify_context(ctx: &PrimeContext) -> PrimeOutcome {
    let q = ctx.q();
    let mut failures = Vec::new();
    let mut checks = 0;

    checks += 16;
    match closed_form_numbers(q, ctx.params.s, ctx.params.t) {
        Ok(cf) => {
            for (i, j, got, want) in ctx.table.closed_form_mismatches(&cf) {
                failures.push(IdentityFailure {
                    q,
                    identity: CLOSED_FORM,
                    detail: format!("i={i} j={j}: 16*count={got}, closed form={want}"),
                });
            }
        }
        Err(e) => failures.push(IdentityFailure {
            q,
            identity: CLOSED_FORM,
            detail: e.to_string(),
        }),
    }

    checks += 1;
    failures.extend(check_gauss_sum_square(&ctx.gps));
    checks += 16;
    failures.extend(check_period_products(&ctx.gps, &ctx.table));
    checks += 64;
    failures.extend(check_period_products_shifted(&ctx.gps, &ctx.table));
    checks += 36;
    failures.extend(check_scaled_products(&ctx.gps));
    checks += 4;
    failures.extend(check_difference_squares(&ctx.gps));

    for tag in matched_conditions(&ctx.params) {
        checks += 1;
        let seq = ctx.sequence(tag.triple, tag.tilde);
        failures.extend(check_s2_congruence(&seq, &ctx.gps));
    }

    PrimeOutcome {
        q,
        checks,
        failures,
    }
}

/// Runs the suite for every prime `q ≡ 5 (mod 8)` up to `q_max`.
pub fn run_identity_suite(q_max: u64) -> Result<SuiteReport> {
    run_identity_suite_with(q_max, |_| {})
}

/// As [`run_identity_suite`], passing each context through `alter` first.
/// Used for fault injection.
pub fn run_identity_suite_with<F>(q_max: u64, alter: F) -> Result<SuiteReport>
where
    F: Fn(&mut PrimeContext) + Sync,
{
    let primes = dhm_primes(q_max);
    let outcomes: Vec<PrimeOutcome> = primes
        .par_iter()
        .map(|&q| {
            let mut ctx = PrimeContext::new(q, None)?;
            alter(&mut ctx);
            Ok(verify_context(&ctx))
        })
        .collect::<Result<_>>()?;
    let mut report = SuiteReport {
        primes,
        ..Default::default()
    };
    for o in outcomes {
        report.checks += o.checks;
        report.failures.extend(o.failures);
    }
    Ok(report)
}
