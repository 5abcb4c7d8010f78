//! Parallel scan of predicted against observed complexity, written as CSV to
//! stdout.

use dhm::adic::{scan, ScanOptions};

fn main() -> dhm::Result<()> {
    let q_max = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(101);
    let rows = scan(q_max, &ScanOptions { threads: Some(4) })?;
    println!("q,triple,tilde,tag,l,d,agree");
    for r in &rows {
        println!(
            "{},\"{}\",{},{},{},{},{}",
            r.q, r.triple, r.tilde, r.tag, r.l_candidate, r.observed_d, r.agree
        );
    }
    let off = rows.iter().filter(|r| !r.agree).count();
    eprintln!("{} rows, {off} disagreements", rows.len());
    Ok(())
}
