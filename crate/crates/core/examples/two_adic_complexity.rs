//! Exact 2-adic complexity via gcd(S(2), 2^N - 1), split over 2^q - 1 and
//! 2^q + 1.

use dhm::adic::{complexity, determine_exact};
use dhm::sequence::Triple;
use dhm::PrimeContext;

fn main() -> dhm::Result<()> {
    for (q, ijl, tilde) in [
        (5, "1,0,3", true),
        (13, "0,1,3", false),
        (29, "0,1,3", false),
    ] {
        let ctx = PrimeContext::new(q, None)?;
        let triple: Triple = ijl.parse()?;
        let rep = complexity(&ctx.sequence(triple, tilde))?;
        println!("q = {q} ({ijl}) tilde={tilde}");
        println!("  d = {} = {} * {}", rep.d, rep.d1, rep.d2);
        println!(
            "  C2 = log2((2^{} - 1) / {}) ~ {:.4}",
            rep.n, rep.d, rep.approx_bits
        );

        // same number, reached through the divisor criterion
        match determine_exact(&ctx, triple, tilde) {
            Ok(v) => println!(
                "  predicted d = {} (l = {}, prime {})",
                v.predicted_d, v.l_candidate, v.l_prime
            ),
            Err(e) => println!("  {e}"),
        }
    }
    Ok(())
}
