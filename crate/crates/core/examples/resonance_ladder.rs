//! Second-order resonance expansion and the quasi-energy ladder.
//!
//! Under driving, the embedded eigenvalues `E_0 + n omega` of the
//! quasi-energy ladder all move to the same complex resonance
//! `E_alpha = E_0 + alpha c1 - alpha^2 c2` (mod omega), with
//! `Im E_alpha = -alpha^2 Gamma / 2`. A drive without a static component
//! has `c1 = 0`; adding one shifts the ladder in first order.

use floquet_width::config::benchmark_config;
use floquet_width::floquet::{resonance_expansion, HarmonicKind};
use floquet_width::spectral::EpsilonLadder;

fn main() -> floquet_width::Result<()> {
    let mut config = benchmark_config();
    let alpha = 0.1;
    let ladder = EpsilonLadder::default();

    let data = resonance_expansion(&config.resolvent_model(alpha)?, alpha, 4, &ladder)?;
    println!("pure cos drive, alpha = {alpha}:");
    println!("  c1 = {:+.6e} (zero: no static component)", data.c1.unwrap());
    println!("  c2 = {:+.6e} {:+.6e} i", data.c2_re.unwrap(), data.c2_im);
    println!(
        "  E_alpha = {:.9} {:+.3e} i, lifetime 1/Gamma_alpha = {:.1}",
        data.e_alpha_re.unwrap(),
        data.e_alpha_im.unwrap(),
        1.0 / (2.0 * alpha * alpha * data.c2_im)
    );
    println!("  quasi-energy ladder (real parts):");
    for (n, e) in &data.quasi_energy_ladder {
        println!("    n = {n:>2}: {e:>12.6}");
    }

    // a static component moves the resonance in first order
    config.harmonics.push(floquet_width::config::HarmonicSpec {
        m: 0,
        kind: HarmonicKind::Static,
        amplitude: 0.5,
        center: 0.0,
        width: 1.0,
    });
    let shifted = resonance_expansion(&config.resolvent_model(alpha)?, alpha, 4, &ladder)?;
    println!("\nwith a static component (0.5 * gaussian):");
    println!("  c1 = {:+.6e}", shifted.c1.unwrap());
    println!(
        "  E_alpha = {:.9} {:+.3e} i",
        shifted.e_alpha_re.unwrap(),
        shifted.e_alpha_im.unwrap()
    );

    // first-order prediction of the shift
    let predicted = alpha * shifted.c1.unwrap();
    let observed = shifted.e_alpha_re.unwrap() - data.e_alpha_re.unwrap();
    println!("  shift: predicted {predicted:+.6e}, observed {observed:+.6e}");

    Ok(())
}
