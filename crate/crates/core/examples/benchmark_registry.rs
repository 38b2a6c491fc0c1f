//! The registered benchmark functions and their certified optima.
//!
//! cargo run --example benchmark_registry

use imgpo::benchfns::BENCHMARKS;

fn main() {
    println!(
        "{:<12} {:>3} {:>22} {:>12}  bounds",
        "name", "D", "f*", "f(x*)"
    );
    for b in &BENCHMARKS {
        let at_star = b.x_star.map(|x| b.evaluate(x)).unwrap_or(f64::NAN);
        println!(
            "{:<12} {:>3} {:>22.15} {:>12.8}  {:?}",
            b.name,
            b.dim,
            b.f_star,
            at_star,
            b.bounds()
        );
    }
}
