use ringspec::linalg::{sym_eig, SymMatrix};
use std::time::Instant;
fn main() {
    let n: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse().unwrap())
        .unwrap_or(1000);
    let vecs = std::env::args().nth(2).is_some();
    let mut state = 12345u64;
    let mut rnd = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let a = SymMatrix::from_fn(n, |_, _| rnd());
    let t = Instant::now();
    let d = sym_eig(&a, vecs).unwrap();
    println!(
        "n={n} time={:?} trace err={}",
        t.elapsed(),
        (a.trace() - d.values.iter().sum::<f64>()).abs()
    );
}
