use gl2lab::forms::CuspForm;
use gl2lab::lcrit::{convexity_sweep, SweepPlan};

fn main() -> gl2lab::Result<()> {
    let form = CuspForm::delta(5_000)?;
    let plan = SweepPlan::linear(10.0, 200.0, 12)?;
    let table = convexity_sweep(&form, &plan)?;
    println!("{:>7} {:>10} {:>12} {:>14} {:>6}", "t", "|L|", "|L|/t^1/2", "sup |S|/N^1/2", "N");
    for r in &table.rows {
        println!(
            "{:>7.2} {:>10.5} {:>12.5} {:>14.5} {:>6}",
            r.t, r.abs_l, r.convexity_ratio, r.sup_s_ratio, r.n_at_sup
        );
    }
    println!("log-log slope of |L| against t: {:.3}", table.exponent_fit);
    Ok(())
}
