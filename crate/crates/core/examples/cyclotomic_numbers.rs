//! Prints the 4x4 cyclotomic table for a prime and compares it with the
//! closed form in terms of q = s^2 + 4t^2.
//!
//!     cargo run --example cyclotomic_numbers -- 37

use dhm::cyclotomy::closed_form_numbers;
use dhm::PrimeContext;

fn main() -> dhm::Result<()> {
    let q = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(13);
    let ctx = PrimeContext::new(q, None)?;
    let p = &ctx.params;
    println!(
        "q = {q}  theta = {}  s = {}  t = {}  f = {}",
        p.theta, p.s, p.t, p.f
    );
    if p.relabeled {
        println!(
            "(generator {} replaced by its inverse to make t > 0)",
            p.requested_theta
        );
    }

    for i in 0..4 {
        let row: Vec<String> = (0..4)
            .map(|j| format!("{:4}", ctx.table.number(i, j)))
            .collect();
        println!("  ({i}, *) {}", row.join(""));
    }

    let cf = closed_form_numbers(q, p.s, p.t)?;
    let bad = ctx.table.closed_form_mismatches(&cf);
    println!(
        "closed form: {}",
        if bad.is_empty() {
            "matches".to_string()
        } else {
            format!("{bad:?}")
        }
    );
    Ok(())
}
