//! `L(1/2 + it, Δ)` by the approximate functional equation and by the
//! long-smoothing oracle.

use gl2lab::forms::CuspForm;
use gl2lab::lcrit::{l_value_afe, l_value_oracle};

fn main() -> gl2lab::Result<()> {
    let form = CuspForm::delta(20_000)?;
    for t in [0.0, 10.0, 50.0, 100.0] {
        let l = l_value_afe(&form, t, 1e-10)?;
        let o = l_value_oracle(&form, t)?;
        println!(
            "t = {t:>5}: L = {:.14}, {} terms, oracle diff {:.1e} ({} terms)",
            l.value,
            l.terms,
            (l.value - o.value).norm(),
            o.terms
        );
    }
    let a = l_value_afe(&form, 37.0, 1e-10)?.value;
    let b = l_value_afe(&form, -37.0, 1e-10)?.value;
    println!("L(1/2 - 37i) - conj L(1/2 + 37i) = {:.1e}", (b - a.conj()).norm());
    Ok(())
}
