//! Kloosterman's delta identity at a few values of n and Q.

use gl2lab::deltasym::{delta_eval, frames, weight_sum};

fn main() -> gl2lab::Result<()> {
    let big_q = 3.5;
    println!("frames for Q = {big_q}:");
    for f in frames(big_q)? {
        println!("  q = {}, a = {}, a_bar = {}", f.q, f.a, f.a_bar);
    }
    println!("weight sum = {:.17}", weight_sum(big_q)?);
    for n in [-7, -1, 0, 1, 12, 40] {
        println!("delta({n:>3}, Q = {big_q}) = {:+.3e}", delta_eval(n, big_q)?);
    }
    Ok(())
}
