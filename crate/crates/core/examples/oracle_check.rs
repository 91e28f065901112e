//! Solver against exhaustive enumeration on a few generated networks.

use isovalve::generate::corpus;
use isovalve::oracle::{brute_force, DEFAULT_CAP};
use isovalve::solver::{solve, SolverOptions};

fn main() {
    for net in corpus(10, 1) {
        for nv in 2..=5 {
            let s = solve(&net, nv, &SolverOptions::default()).map(|s| s.ud);
            let o = brute_force(&net, nv, DEFAULT_CAP).map(|o| (o.ud, o.optimal.len(), o.count));
            match (s, o) {
                (Ok(a), Ok((b, ties, count))) => println!(
                    "{} nv={nv}: solver {a} oracle {b} ({ties} optimal of {count}) {}",
                    net.name().unwrap(),
                    if a == b { "ok" } else { "MISMATCH" }
                ),
                (Err(a), Err(b)) => println!("{} nv={nv}: {a} / {b}", net.name().unwrap()),
                (a, b) => println!("{} nv={nv}: MISMATCH {a:?} {b:?}", net.name().unwrap()),
            }
        }
    }
}
