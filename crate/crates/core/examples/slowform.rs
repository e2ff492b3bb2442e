use binic_core::minimal::*;
use binic_core::BinaryForm;

fn main() {
    let x = 2i64;
    let ctx = MinimalityContext::new(3).unwrap();
    let mut slow: Vec<(u128, String)> = Vec::new();
    for a in -x..=x {
        for b in -x..=x {
            for c in -x..=x {
                for d in -x..=x {
                    if (a, b, c, d) == (0, 0, 0, 0) {
                        continue;
                    }
                    let f = BinaryForm::from_i64(&[a, b, c, d]).unwrap();
                    let t = std::time::Instant::now();
                    let _ = is_minimal_representative(&ctx, &f);
                    let us = t.elapsed().as_micros();
                    if us > 20_000 {
                        slow.push((us, format!("{f}")));
                    }
                }
            }
        }
    }
    slow.sort();
    slow.reverse();
    for (us, f) in slow.iter().take(12) {
        println!("{us} us: {f}");
    }
    println!("total slow: {}", slow.len());
}
