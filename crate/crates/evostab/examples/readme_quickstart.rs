//! The end-to-end pipeline from the README: build an evolution cache for a
//! geometric contraction, bound the generator inverse, issue a decay
//! certificate, and re-verify it against the raw products.

use evostab::certificates::{certify_stability, verify_certificate};
use evostab::dynamics::FamilyFile;
use evostab::evolution_operators::{generator_inverse_bounds, ProbeConfig};
use evostab::{Cache, Context, VectorNorm};

fn main() -> evostab::Result<()> {
    // x_{n+1} = e^{-1} x_n, inspected on slots 0..=512 at rate alpha = 0
    let family = FamilyFile::Geometric { dimension: 1, data: (-1.0f64).exp() };
    let cache = Cache::build(family.into_family()?, 512, VectorNorm::Sup)?;
    let ctx = Context::new(&cache, 0.0, None)?;

    let bounds = generator_inverse_bounds(&ctx, &ProbeConfig { random: 256, seed: 42 })?;
    let cert = certify_stability(&ctx, &bounds)?;
    let report = verify_certificate(&cert, &cache)?;
    assert!(report.passes(1e-9));
    println!("decay rate {:.6}, prefactor {:.6}", cert.decay_rate, cert.prefactor);
    Ok(())
}
