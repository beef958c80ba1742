use gl2lab::decomp::{character_sum, character_sum_closed};

fn main() -> gl2lab::Result<()> {
    let (q, qq, a, aa) = (4, 9, 3, 2);
    for n in -3..=8 {
        let z = character_sum(q, qq, a, aa, n)?;
        println!(
            "n = {n:>2}: sum = {:+.3e}{:+.3e}i, closed form {}",
            z.re,
            z.im,
            character_sum_closed(q, qq, a, aa, n)
        );
    }
    Ok(())
}
