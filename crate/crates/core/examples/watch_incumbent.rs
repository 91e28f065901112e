//! Polling the incumbent from another thread while a solve runs.

use std::thread;
use std::time::Duration;

use isovalve::generate::{generate, GenParams};
use isovalve::solver::{Solver, SolverOptions};

fn main() {
    let net = generate(GenParams {
        nodes: 12,
        edges: 20,
        seed: 8,
    })
    .unwrap();
    let opts = SolverOptions {
        time_limit: Some(Duration::from_secs(5)),
        ..SolverOptions::default()
    };
    let mut solver = Solver::new(&net, 8, &opts);
    let watch = solver.watch();
    let sol = thread::scope(|s| {
        let h = s.spawn(|| solver.run());
        while !h.is_finished() {
            if let Some(ud) = watch.get() {
                println!("incumbent {ud}");
            }
            thread::sleep(Duration::from_millis(20));
        }
        h.join().unwrap()
    });
    match sol {
        Ok(s) => println!("final {} ({:?}, {} nodes)", s.ud, s.status, s.stats.nodes),
        Err(e) => println!("{e}"),
    }
}
