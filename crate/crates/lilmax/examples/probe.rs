use lilmax::asymptotics::{expectation_u, LogIndex, TailSupLaw};
use lilmax::excursion::Sided;
fn main() {
    for d in [4.0, 8.0, 16.0, 32.0, 64.0] {
        let idx = LogIndex::from_log10(d).unwrap();
        let e = expectation_u(idx, Sided::One).unwrap();
        eprintln!("log10 n = {d}: E[U] = {e:.6}, gap = {:+.6}", e - 0.5772156649015329);
    }
    // Independent check at n = 1e4 via direct high-resolution integration of
    // the CDF from tail_cdf (tolerance 1e-9 law), trapezoid on a fine grid.
    let idx = LogIndex::from_log10(4.0).unwrap();
    let law = TailSupLaw::ou(idx, Sided::One).with_tolerance(1e-9);
    let sched = lilmax::asymptotics::NormalizationSchedule::new(idx, 0.0, Sided::One);
    let f = |x: f64| law.u_cdf_exact(x).unwrap();
    let (a, b) = (-sched.x_star, 40.0);
    let m = 40000usize;
    let h = (b - a) / m as f64;
    // E[U] = integral of x dF = b*F(b)... use E = int_0^inf (1-F) - int_{-inf}^0 F
    let mut upper = 0.0;
    let mut x = 0.0;
    while x < 40.0 {
        upper += h * 0.5 * ((1.0 - f(x)) + (1.0 - f(x + h)));
        x += h;
    }
    let mut lower = 0.0;
    let mut x = a;
    while x < 0.0 {
        lower += h * 0.5 * (f(x) + f(x + h));
        x += h;
    }
    eprintln!("independent trapezoid at 1e4: {:.6}", upper - lower);
}
