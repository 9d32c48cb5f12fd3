//! Emits the interferometer netlists as JSON, reloads them, and confirms the
//! recompiled channel unitaries are identical.
//!
//! ```sh
//! cargo run --release --example netlist_roundtrip
//! ```

use fredkin_sim::optics::{
    build_fredkin_interferometer, build_pswap_interferometer, load_netlist, netlist_document,
    NetlistDoc,
};

fn main() {
    for spec in [
        build_pswap_interferometer().unwrap(),
        build_fredkin_interferometer().unwrap(),
    ] {
        let json = serde_json::to_string_pretty(&netlist_document(&spec)).unwrap();
        let doc: NetlistDoc = serde_json::from_str(&json).unwrap();
        let reloaded = load_netlist(&doc).unwrap();
        let deviation = spec
            .compiled
            .iter()
            .zip(reloaded.compiled.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        println!(
            "{:>8}: {} bytes of JSON, {} elements, {} channels, recompile deviation {:.1e}",
            doc.gate,
            json.len(),
            doc.elements.len(),
            doc.channels.len(),
            deviation
        );
        assert!(deviation <= 1e-12);
    }
}
