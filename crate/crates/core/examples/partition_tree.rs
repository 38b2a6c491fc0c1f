//! The ternary partition: dividing cells, counters and look-down centers.
//!
//! cargo run --example partition_tree

use imgpo::partition::{expanded_subtree_centers, CellValue};
use imgpo::{Domain, PartitionTree};

fn main() -> imgpo::Result<()> {
    let domain = Domain::from_bounds(&[(-5.0, 10.0), (0.0, 15.0)])?;
    let f = |x: &[f64]| -(x[0] - 2.0).powi(2) - (x[1] - 4.0).powi(2);
    let mut tree = PartitionTree::init(domain.clone(), |c| Ok(CellValue::evaluated(f(c))))?;

    // Greedily divide the best cell at the deepest level a few times.
    for _ in 0..6 {
        let h = tree.depth();
        let id = tree
            .select_max_at_depth(h)
            .map(|c| c.id)
            .expect("non-empty level");
        let children = tree.divide(id, |c| Ok(CellValue::evaluated(f(c))))?;
        println!("divided cell {id} at depth {h} -> {children:?}");
    }
    println!(
        "n = {}, N = {}, N_gp = {}, live cells = {}, live volume = {} (domain {})",
        tree.n,
        tree.n_evals,
        tree.n_gp,
        tree.len(),
        tree.live_volume(),
        domain.volume()
    );
    for h in 0..=tree.depth() {
        for c in tree.level(h) {
            println!(
                "  depth {h} cell {:>2} center {:?} value {:.3}",
                c.id, c.center, c.value
            );
        }
    }

    let root_like = &tree.level(1)[0];
    for xi in 0..=2 {
        println!(
            "look-down ξ={xi}: {} centers",
            expanded_subtree_centers(root_like, xi).len()
        );
    }
    Ok(())
}
