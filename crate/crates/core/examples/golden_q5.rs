//! The smallest case end to end: q = 5, generator 3.

use dhm::adic::complexity;
use dhm::PrimeContext;

fn main() -> dhm::Result<()> {
    let ctx = PrimeContext::new(5, Some(3))?;
    println!("classes D0..D3 = {:?}", ctx.table.classes);

    for ijl in ["1,0,3", "1,2,3", "0,1,2"] {
        let seq = ctx.sequence(ijl.parse()?, true);
        let rep = complexity(&seq)?;
        println!(
            "tilde ({ijl}): {}  S(2) = {}  d = {}  C2 = {} ~ {:.3} bits",
            seq.bit_string(),
            rep.s2,
            rep.d,
            rep.exact_label(),
            rep.approx_bits
        );
    }
    Ok(())
}
