use std::time::Instant;
use zeta_moments::afe::{afe_evaluate, AfeParams};
use zeta_moments::moment::{cfkrs_zero_shift_limit, raw_moment};
use zeta_moments::weight::WeightSpec;
use zeta_moments::ShiftSet;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(|s| s.as_str()).unwrap_or("all");

    if which == "all" || which == "k1" {
        let zeros = ShiftSet::from_reals(&[0.0]).unwrap();
        let spec = WeightSpec::standard(5000.0).unwrap();
        let t0 = Instant::now();
        let raw = raw_moment(&zeros, &zeros, &spec, 0.02 / 5000.0f64.ln()).unwrap();
        println!("k=1 raw T=5000: {:.6e}  [{:?}]", raw.re, t0.elapsed());
        let t0 = Instant::now();
        let main = cfkrs_zero_shift_limit(1, &spec, 0.04, 100_000).unwrap();
        println!(
            "k=1 main: {:.6e} spread {:.2e} [{:?}]  ratio-1 = {:+.5e}",
            main.value,
            main.spread,
            t0.elapsed(),
            raw.re / main.value - 1.0
        );
    }
    if which == "all" || which == "k2" {
        let zeros = ShiftSet::from_reals(&[0.0, 0.0]).unwrap();
        let spec = WeightSpec::standard(2000.0).unwrap();
        let t0 = Instant::now();
        let raw = raw_moment(&zeros, &zeros, &spec, 0.02 / 2000.0f64.ln()).unwrap();
        println!("k=2 raw T=2000: {:.6e}  [{:?}]", raw.re, t0.elapsed());
        let t0 = Instant::now();
        let main = cfkrs_zero_shift_limit(2, &spec, 0.04, 100_000).unwrap();
        println!(
            "k=2 main: {:.6e} spread {:.2e} [{:?}]  ratio-1 = {:+.5e}",
            main.value,
            main.spread,
            t0.elapsed(),
            raw.re / main.value - 1.0
        );
    }
    if which == "all" || which == "k3" {
        for t_big in [1000.0f64, 2000.0, 4000.0] {
            let zeros = ShiftSet::from_reals(&[0.0, 0.0, 0.0]).unwrap();
            let spec = WeightSpec::standard(t_big).unwrap();
            let t0 = Instant::now();
            let raw = raw_moment(&zeros, &zeros, &spec, 0.02 / t_big.ln()).unwrap();
            let main = cfkrs_zero_shift_limit(3, &spec, 0.04, 100_000).unwrap();
            println!(
                "k=3 T={t_big}: raw {:.6e} main {:.6e} ratio-1 = {:+.5e} spread {:.2e} [{:?}]",
                raw.re,
                main.value,
                raw.re / main.value - 1.0,
                main.spread,
                t0.elapsed()
            );
        }
    }
    if which == "all" || which == "afe" {
        for t in [100.0f64, 200.0, 500.0, 1000.0] {
            let mu = 2.0 / (3.0 * t.ln());
            let i_set = ShiftSet::from_reals(&[1.0 * mu, -0.62 * mu, 0.21 * mu]).unwrap();
            let j_set = ShiftSet::from_reals(&[0.83 * mu, -0.37 * mu, -0.11 * mu]).unwrap();
            let t0 = Instant::now();
            let r = afe_evaluate(&i_set, &j_set, t, &AfeParams::default()).unwrap();
            println!(
                "afe t={t}: rel residual {:.3e} mn_max {} terms {:.2e} [{:?}]",
                r.residual / r.lhs.norm(),
                r.mn_max,
                r.terms as f64,
                t0.elapsed()
            );
        }
    }
}
