//! Ramanujan's tau from the product expansion, with the Hecke relations and
//! Rankin averages.

use gl2lab::forms::CuspForm;
use gl2lab::numerics::gcd;
use std::io::BufReader;
use std::time::Instant;

fn main() -> gl2lab::Result<()> {
    let t0 = Instant::now();
    let form = CuspForm::delta(100_000)?;
    println!("generated {} coefficients in {:.2}s", form.n_max(), t0.elapsed().as_secs_f64());
    for n in 1..=10 {
        println!("tau({n:>2}) = {:>12}   lambda = {:+.6}", form.tau(n)?, form.lambda(n)?);
    }

    let (m, n) = (12, 35);
    assert_eq!(gcd(m as i64, n as i64), 1);
    println!("tau(12) tau(35) = {} = tau(420) = {}", form.tau(m)? * form.tau(n)?, form.tau(m * n)?);
    let p = 2i128;
    let lhs = form.tau(2)? * form.tau(4)? - p.pow(11) * form.tau(2)?;
    println!("tau(2) tau(4) - 2^11 tau(2) = {lhs} = tau(8) = {}", form.tau(8)?);

    for x in [1_000, 10_000, 100_000] {
        println!("(1/x) sum lambda(n)^2, x = {x:>6}: {:.6}", form.rankin_average(x)? / x as f64);
    }
    println!("max |lambda(n)|/d(n) = {:.6}", form.deligne_ratio());

    let mut buf = Vec::new();
    CuspForm::delta(50)?.write_text(&mut buf)?;
    let back = CuspForm::read_text(BufReader::new(buf.as_slice()))?;
    println!("text round trip ok: tau(50) = {}", back.tau(50)?);
    Ok(())
}
