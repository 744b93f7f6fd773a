//! Regenerates data/networks/child3.bif and child5.bif from child.bif.
//!
//! cargo run -p causalci-core --example tile_child

use std::fs;
use std::path::Path;

use causalci_core::bnmodel::{parse_bif, tile_network, to_bif};

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/networks");
    let child = parse_bif(&fs::read_to_string(dir.join("child.bif")).unwrap()).unwrap();
    for (copies, links, seed, file) in [(3, 4, 3, "child3.bif"), (5, 1, 5, "child5.bif")] {
        let net = tile_network(&child, copies, links, seed).unwrap();
        fs::write(dir.join(file), to_bif(&net)).unwrap();
        println!("{file}: {} nodes, {} edges", net.len(), net.dag().edge_count());
    }
}
