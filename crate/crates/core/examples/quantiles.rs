//! The distribution layer on its own.

use pilotsize::dist::{chi2_quantile, f_quantile, normal_cdf, normal_quantile, t_cdf, t_quantile};
use pilotsize::types::DegreesOfFreedom;
use pilotsize::Probability;

fn main() -> pilotsize::Result<()> {
    let p = |x| Probability::new(x);
    let df = |x| DegreesOfFreedom::new(x);

    let z = normal_quantile(p(0.975)?);
    println!("z(0.975)        = {z:.6}  Phi(z) = {:.6}", normal_cdf(z));
    println!("chi2(0.025; 9)  = {:.6}", chi2_quantile(p(0.025)?, df(9.0)?)?);
    let t = t_quantile(p(0.975)?, df(4.0)?)?;
    println!("t(0.975; 4)     = {t:.4}  F(t) = {:.6}", t_cdf(t, df(4.0)?)?);
    println!("F(0.975; 2, 8)  = {:.4}", f_quantile(p(0.975)?, df(2.0)?, df(8.0)?)?);
    // Deep tails keep their relative accuracy.
    println!("z(1e-12)        = {:.6}", normal_quantile(p(1e-12)?));
    Ok(())
}
