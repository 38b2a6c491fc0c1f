#![allow(dead_code)]

use imgpo::TraceEvent;

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// Radical inverse of `i` in `base`.
pub fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    r
}

/// The i-th Halton point in `[0,1)^dim` (dim ≤ 6), skipping the origin.
pub fn halton(i: u64, dim: usize) -> Vec<f64> {
    PRIMES[..dim]
        .iter()
        .map(|&b| radical_inverse(i + 1, b))
        .collect()
}

/// One line per trace event, in the golden-file format.
pub fn render_trace(events: &[TraceEvent]) -> Vec<String> {
    events
        .iter()
        .map(|e| match e {
            TraceEvent::Divide {
                t,
                depth,
                cell,
                children,
            } => format!(
                "divide t={t} depth={depth} cell={cell} children={},{},{}",
                children[0], children[1], children[2]
            ),
            TraceEvent::Resolve {
                t,
                cell,
                before,
                after,
            } => format!(
                "resolve t={t} cell={cell} before={},{} after={},{}",
                before.0, before.1, after.0, after.1
            ),
            TraceEvent::Screen {
                t,
                depth,
                cell,
                xi,
                ucb_calls,
                rejected,
            } => format!(
                "screen t={t} depth={depth} cell={cell} xi={xi} ucb_calls={ucb_calls} rejected={rejected}"
            ),
        })
        .collect()
}
