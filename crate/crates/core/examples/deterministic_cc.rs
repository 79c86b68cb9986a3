//! Exact deterministic communication complexity of small functions.

use optical_smp::smp::{bruteforce_deterministic_cc, equality_function, FunctionTable, D_CONVENTION};

fn main() -> optical_smp::Result<()> {
    println!("# {D_CONVENTION}");
    for n in 1..=3 {
        println!("EQ_{n}: {}", bruteforce_deterministic_cc(&equality_function(n)?)?);
    }
    let inner_product = FunctionTable::from_fn(2, |x, y| (x & y).count_ones() % 2 == 1)?;
    println!("IP_2: {}", bruteforce_deterministic_cc(&inner_product)?);
    let greater = FunctionTable::from_fn(3, |x, y| x > y)?;
    println!("GT_3: {}", bruteforce_deterministic_cc(&greater)?);
    println!("const: {}", bruteforce_deterministic_cc(&FunctionTable::constant(2, true)?)?);
    Ok(())
}
