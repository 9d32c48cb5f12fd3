//! Verifies the n-controlled Fredkin syntheses against the truth-table
//! oracle and prints the gate-count ledger.
//!
//! ```sh
//! cargo run --release --example verify_synthesis
//! ```

use fredkin_sim::synthesis::verify_synthesis;

fn main() {
    println!("{:>2} {:>9} {:>13} {:>9} {:>10} {:>12} {:>11}",
        "n", "verified", "max deviation", "leakage", "two-qubit", "single-qudit", "carrier dim");
    for n in 1..=6 {
        let r = verify_synthesis(n).expect("valid control count");
        println!(
            "{:>2} {:>9} {:>13.2e} {:>9.2e} {:>10} {:>12} {:>11}",
            r.n,
            r.verified,
            r.max_deviation,
            r.leakage,
            r.two_qubit_count,
            r.single_qudit_count,
            r.carrier_dim
        );
        assert!(r.verified);
    }
    println!("\nEvery circuit uses 2n+1 two-qubit and 2n single-qudit gates on an (n+2)-level carrier.");
}
