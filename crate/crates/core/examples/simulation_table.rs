//! Monte Carlo table of mean, variance and KS distance of the Studentized
//! bootstrap median for the three rules of m and three data mechanisms.
//!
//! cargo run --release --example simulation_table -- [n] [B] [seed] [out.csv]

use std::path::PathBuf;

use moonboot::harness::{
    emit_csv, records_to_csv, run_table, table_cases, table_grid, table_rules,
};

fn main() -> moonboot::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(10_000, |a| a.parse().expect("n"));
    let b: usize = args.next().map_or(200, |a| a.parse().expect("B"));
    let seed: u64 = args.next().map_or(42, |a| a.parse().expect("seed"));
    let out = args.next().map(PathBuf::from);

    let grid = table_grid(&[n], &table_rules(), &table_cases(), b, seed);
    let records = run_table(&grid)?;

    println!(
        "{:<6} {:>4} {:<13} {:>9} {:>8} {:>7}",
        "rule", "m", "case", "mean(T)", "var(T)", "KS"
    );
    for r in &records {
        println!(
            "{:<6} {:>4} {:<13} {:>9.4} {:>8.4} {:>7.4}",
            r.m_rule.to_string(),
            r.m,
            r.case.tag(),
            r.mean_t,
            r.var_t,
            r.ks
        );
    }
    match out {
        Some(path) => emit_csv(&records, &path)?,
        None => print!("\n{}", records_to_csv(&records)),
    }
    Ok(())
}
