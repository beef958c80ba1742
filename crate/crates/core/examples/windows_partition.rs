use gl2lab::windows::{partition_of_unity, Window};

fn main() -> gl2lab::Result<()> {
    let v = Window::make_bump(1.0, 2.0, true)?;
    println!("normalized bump on [1, 2]: integral {:.15}, V(1.5) = {:.6}", v.integral(), v.value(1.5));
    println!("derivative bounds {:?}", v.derivative_bounds());

    let u = Window::make_plateau(0.5, 1.0, 2.0, 2.5)?;
    for x in [0.5, 0.75, 1.0, 2.0, 2.25, 2.5] {
        println!("U({x}) = {:.6}", u.value(x));
    }

    let pieces = partition_of_unity(100.0)?;
    println!("{} pieces cover [-100, 100]", pieces.len());
    for x in [-97.0, -3.3, 0.0, 0.7, 64.0] {
        let total: f64 = pieces.iter().map(|w| w.value(x)).sum();
        println!("  sum at {x:>6}: {total:.15}");
    }
    Ok(())
}
