use effrate::effective_rate::{evaluate, linspace, rate_curve};
use effrate::{AlphaMuParams, Execution, Method, MisoLink};

fn main() -> effrate::Result<()> {
    // Unit mean SNR per branch, two antennas, delay exponent 0.5.
    let link = MisoLink::new(AlphaMuParams::unit(4.0, 2.0)?, 2, 0.5)?;
    let (rate, used) = evaluate(&link, 10.0, Method::MeijerG)?; // `used` may be FoxH
    println!("{rate} bit/s/Hz via {used}");
    let curve = rate_curve(&link, &linspace(0.0, 20.0, 21), Method::FoxH, Execution::default())?;
    println!("{} points", curve.points().len());
    Ok(())
}
