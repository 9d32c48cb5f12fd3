//! Prints the coincidence expectation table of the partial swap: every
//! logical basis input lands on one detector pair with probability 1/8 in
//! each of the four accepted pattern families.
//!
//! ```sh
//! cargo run --release --example coincidence_table
//! ```

use fredkin_sim::optics::{build_pswap_interferometer, table_one};
use fredkin_sim::report::dyadic_string;

fn main() {
    let spec = build_pswap_interferometer().unwrap();
    let table = table_one(&spec).unwrap();

    print!("{:>10}", "input");
    for col in &table.columns {
        print!(" {col:>12}");
    }
    println!();
    for row in &table.rows {
        print!("{:>10}", row.input);
        for cell in &row.cells {
            print!(" {:>12}", dyadic_string(cell.probabilities[0]));
        }
        println!("   (total {})", dyadic_string(row.total_accepted_probability));
    }

    println!("\npattern families and the sign of the accepted amplitude per row:");
    for (f, (ca, ta)) in table.families.iter().enumerate() {
        let signs: Vec<i8> = table
            .rows
            .iter()
            .enumerate()
            .map(|(r, row)| row.cells[r].signs[f])
            .collect();
        println!("  arms ({ca:>2}, {ta}): {signs:?}");
    }
}
