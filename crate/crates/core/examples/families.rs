//! Survey a collection of Puiseux families: hull size, stable-curve
//! shape, semistable locus and the GIT class of the reduction.
//!
//! Run with `cargo run -p newton-moduli --example families`.

use newton_moduli::berkovich::{kappa, marked_tree, semistable_locus, stable_curve};
use newton_moduli::parse::parse_series;

fn main() {
    let families: Vec<Vec<&str>> = vec![
        vec!["0", "1", "t"],
        vec!["0", "t^(1/2)", "2*t^(1/2)", "1"],
        vec!["i*t", "2*i*t", "1", "1+i"],
        vec!["0", "t", "t + t^2", "t + 2*t^2", "1"],
        vec!["t^(-2)", "2*t^(-2)", "t^(-1)", "0", "1"],
        vec!["0", "1", "2", "3", "t^(-1)"],
        vec!["1/2", "1/3", "1/2 + t^3", "5"],
        vec!["0", "t^(1/3)", "t^(2/3)", "1"],
        vec!["(1/2+1/3*i)*t", "(1/2-1/3*i)*t", "1", "2", "3+t"],
        vec!["0", "1", "1+t", "1+2*t", "1+t^2", "t^(-1)"],
        vec!["0", "0 + t^7", "1", "5"],
        vec!["2", "2+t", "2+t+t^2", "2+t+2*t^2", "7"],
    ];
    for f in families {
        let roots: Vec<_> = f.iter().map(|r| parse_series(r, None).unwrap()).collect();
        let report = match semistable_locus(&roots) {
            Ok(r) => r,
            Err(e) => {
                println!("{f:?}: LOCUS ERROR {e}");
                continue;
            }
        };
        let t = marked_tree(&roots).unwrap();
        let curve = stable_curve(&t).unwrap();
        let k = kappa(&roots);
        println!(
            "{f:?}: {} vertices, curve ({}, {}, {}), locus {:?}, kappa {}",
            report.tree.vertices().len(),
            curve.components.len(),
            curve.mark_count,
            curve.node_count,
            match &report.locus {
                newton_moduli::berkovich::SemistableLocus::UniqueStableVertex(v) =>
                    format!("stable@{}", report.tree.vertex(*v).label()),
                newton_moduli::berkovich::SemistableLocus::SemistableRegion { vertices, edges } =>
                    format!("region({} vertices, {} edges)", vertices.len(), edges.len()),
            },
            match k {
                Ok(c) => c.to_string(),
                Err(e) => format!("ERR {e}"),
            },
        );
    }
}
