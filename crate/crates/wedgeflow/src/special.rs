//! Special functions: generalized Laguerre polynomials.

/// Generalized Laguerre polynomial L_n^α(x) by the three-term recurrence
/// (k+1) L_{k+1}^α = (2k + 1 + α − x) L_k^α − (k + α) L_{k−1}^α.
pub fn generalized_laguerre(n: u32, alpha: f64, x: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => 1.0 + alpha - x,
        _ => {
            let mut lkm1 = 1.0;
            let mut lk = 1.0 + alpha - x;
            for k in 1..n {
                let kf = k as f64;
                let lkp1 = ((2.0 * kf + 1.0 + alpha - x) * lk - (kf + alpha) * lkm1) / (kf + 1.0);
                lkm1 = lk;
                lk = lkp1;
            }
            lk
        }
    }
}
