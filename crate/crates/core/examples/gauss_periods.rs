//! Gauss periods as residues modulo 2^N - 1 and the exact identities they
//! satisfy.

use dhm::gaussring::{
    verify_gauss_sum_square, verify_period_products, verify_scaled_products, RingElement,
};
use dhm::PrimeContext;

fn main() -> dhm::Result<()> {
    let ctx = PrimeContext::new(13, None)?;
    let gps = &ctx.gps;
    for (i, eta) in gps.eta.iter().enumerate() {
        println!("eta_{i} = {:#b}", eta.value());
    }
    println!("G = {}", gps.g.value());

    // ring arithmetic folds high bits back down
    let n = gps.n();
    let x = RingElement::pow2(n, 25) * RingElement::from_u64(n, 3);
    println!("3 * 2^25 mod 2^{n}-1 = {}", x.value());

    println!("G^2 identity:       {}", verify_gauss_sum_square(gps));
    println!(
        "period products:    {}",
        verify_period_products(gps, &ctx.table)
    );
    println!("scaled products:    {}", verify_scaled_products(gps));
    Ok(())
}
