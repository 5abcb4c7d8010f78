use crate::cyclotomy::{build_classes, CyclotomicTable};
use crate::error::Result;
use crate::gaussring::{gauss_periods, GaussPeriodSet};
use crate::ntheory::{build_params, PrimeParams};
use crate::sequence::{build_sequence, DhmSequence, Triple};

/// Everything derived from one prime: parameters, cyclotomic table and
/// Gauss periods. Built once and shared by the sequence and complexity code.
#[derive(Debug, Clone)]
pub struct PrimeContext {
    pub params: PrimeParams,
    pub table: CyclotomicTable,
    pub gps: GaussPeriodSet,
}

impl PrimeContext {
    pub fn new(q: u64, theta_override: Option<u64>) -> Result<Self> {
        let params = build_params(q, theta_override)?;
        let table = build_classes(&params);
        let gps = gauss_periods(&params, &table);
        Ok(PrimeContext { params, table, gps })
    }

    pub fn q(&self) -> u64 {
        self.params.q
    }

    pub fn sequence(&self, triple: Triple, tilde: bool) -> DhmSequence {
        build_sequence(&self.params, &self.table, triple, tilde)
    }
}
