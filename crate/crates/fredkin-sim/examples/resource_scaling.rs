//! Closed-form resource scaling of the optical n-controlled gate.
//!
//! ```sh
//! cargo run --release --example resource_scaling
//! ```

use fredkin_sim::optics::resource_calculator;

fn main() {
    println!("{:>2} {:>16} {:>12} {:>6} {:>6} {:>7}",
        "n", "success", "decimal", "PBS", "CNOT", "p-swap");
    for n in 1..=10 {
        let r = resource_calculator(n).unwrap();
        println!(
            "{:>2} {:>16} {:>12.3e} {:>6} {:>6} {:>7}",
            r.n,
            r.success_probability.to_string(),
            r.success_probability_decimal,
            r.pbs_count,
            r.cnot_count,
            r.pswap_count
        );
    }
}
