//! Exact volumes of compact open subgroups and the constants c1 and C.

use newform_periods::suites::volume_summary;

fn main() -> newform_periods::Result<()> {
    for (q_f, n, c) in [(3, 1, 1), (5, 2, 3), (7, 3, 2)] {
        println!("q_F = {q_f}, n = {n}, c = {c}");
        for (name, v) in volume_summary(n, c, q_f)? {
            println!("  {name:<36} {v}");
        }
    }
    Ok(())
}
