use binic_core::minimal::MinimalityContext;
use binic_core::stats::*;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let xs: Vec<u64> = if args.len() > 1 {
        args[1..].iter().map(|s| s.parse().unwrap()).collect()
    } else {
        vec![2, 3]
    };
    let ctx = MinimalityContext::new(3).unwrap();
    let preds = SievePredicates::default();
    for x in xs {
        let t = std::time::Instant::now();
        let row = count_classes(3, x, &preds, &ctx, false, 192).unwrap();
        let sieve_time = t.elapsed();
        println!(
            "X={x}: forms={} primitive={} B={} C={} N={} uncert={} ratio={:.5} time={:?}",
            row.forms,
            row.primitive,
            row.in_b,
            row.in_c,
            row.minimal,
            row.uncertified,
            row.minimal as f64 / (x as f64).powi(4),
            sieve_time
        );
        if x <= 3 {
            let t = std::time::Instant::now();
            let oracle = class_count_oracle(x, 192).unwrap();
            println!("  oracle={} time={:?} match={}", oracle, t.elapsed(), oracle == row.minimal);
        }
    }
}
