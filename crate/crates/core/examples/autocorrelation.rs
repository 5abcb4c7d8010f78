//! Periodic autocorrelation of every condition-matched sequence for one prime.

use dhm::sequence::matched_conditions;
use dhm::PrimeContext;

fn main() -> dhm::Result<()> {
    let q = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(29);
    let ctx = PrimeContext::new(q, None)?;
    let tags = matched_conditions(&ctx.params);
    if tags.is_empty() {
        println!("q = {q}: no triple satisfies a condition");
    }
    for tag in tags {
        let seq = ctx.sequence(tag.triple, tag.tilde);
        let spectrum = seq.autocorr_spectrum();
        println!(
            "{:>9} ({})  weight {}  max |A| off-peak = {}  A = {:?}",
            tag.label(),
            tag.triple,
            seq.weight(),
            seq.max_offpeak(),
            &spectrum[..spectrum.len().min(12)]
        );
    }
    Ok(())
}
