use rand::distr::{Distribution, Open01, Uniform};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformParams {
    a: f64,
    b: f64,
}

impl UniformParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidParameter(format!("uniform bounds need a < b, both finite; got [{a}, {b}]")));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn mean(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        let dist = Uniform::new_inclusive(self.a, self.b).expect("bounds validated at construction");
        dist.sample_iter(rng).take(n).collect()
    }
}

/// Burr type III law with cdf `(1 + x^{−c})^{−k}` on x > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BurrIIIParams {
    c: f64,
    k: f64,
}

impl BurrIIIParams {
    pub fn new(c: f64, k: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0 && k.is_finite() && k > 0.0) {
            return Err(Error::InvalidParameter(format!("BurrIII shapes must be positive, got c = {c}, k = {k}")));
        }
        Ok(Self { c, k })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::domain(format!("BurrIII density needs x > 0, got {x}")));
        }
        let (c, k) = (self.c, self.k);
        let t = x.powf(-c);
        Ok((c.ln() + k.ln() - (c + 1.0) * x.ln() - (k + 1.0) * t.ln_1p()).exp())
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::domain(format!("BurrIII cdf needs x > 0, got {x}")));
        }
        Ok((-self.k * x.powf(-self.c).ln_1p()).exp())
    }

    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::domain(format!("quantile level must lie in (0, 1), got {u}")));
        }
        Ok(self.invert(u))
    }

    fn invert(&self, u: f64) -> f64 {
        // u^{−1/k} − 1 computed as expm1 to keep precision for u near 1
        (-(u.ln()) / self.k).exp_m1().powf(-1.0 / self.c)
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        (0..n)
            .map(|_| {
                let u: f64 = rng.sample(Open01);
                self.invert(u)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, integrate_to_infinity, Tolerance};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn uniform_validation() {
        assert!(UniformParams::new(1.0, 1.0).is_err());
        assert!(UniformParams::new(2.0, 1.0).is_err());
        assert!(UniformParams::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn uniform_sampler() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let unit = UniformParams::new(0.0, 1.0).unwrap();
        assert!(unit.sample(0, &mut rng).is_empty());
        let n = 100_000;
        let xs = unit.sample(n, &mut rng);
        let mean = xs.iter().sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 3.0 / (12.0 * n as f64).sqrt());
        let xs = UniformParams::new(5.0, 10.0).unwrap().sample(1000, &mut rng);
        assert!(xs.iter().all(|&x| (5.0..=10.0).contains(&x)));
    }

    #[test]
    fn burr_median() {
        for &(c, k) in &[(2.0, 20.0), (1.0, 1.0), (3.5, 0.4)] {
            let b = BurrIIIParams::new(c, k).unwrap();
            let x = (2f64.powf(1.0 / k) - 1.0).powf(-1.0 / c);
            assert!((b.cdf(x).unwrap() - 0.5).abs() < 1e-14);
            assert!((b.quantile(0.5).unwrap() - x).abs() < 1e-12 * x);
        }
    }

    #[test]
    fn burr_pdf_normalized() {
        for &(c, k) in &[(2.0, 20.0), (1.5, 1.0), (4.0, 0.5)] {
            let b = BurrIIIParams::new(c, k).unwrap();
            let pdf = |x: f64| if x == 0.0 { 0.0 } else { b.pdf(x).unwrap() };
            let head = integrate(pdf, 0.0, 1.0, Tolerance::default()).unwrap().value;
            // tail ∝ x^{−c−1}: map x = 1/y onto (0, 1]
            let tail = integrate(|y: f64| if y == 0.0 { 0.0 } else { pdf(1.0 / y) / (y * y) }, 0.0, 1.0, Tolerance::default())
                .unwrap()
                .value;
            assert!((head + tail - 1.0).abs() < 1e-8, "{c} {k}: {}", head + tail);
        }
        let b = BurrIIIParams::new(2.0, 20.0).unwrap();
        let upper = integrate_to_infinity(|x| b.pdf(1.0 + x).unwrap(), 0.0, Tolerance::default());
        assert!(upper.is_err() || upper.unwrap().value < 1.0);
    }

    #[test]
    fn burr_single_peak() {
        let b = BurrIIIParams::new(2.0, 20.0).unwrap();
        let xs: Vec<f64> = (1..20_000).map(|i| i as f64 * 1e-3).collect();
        let slopes: Vec<f64> = xs.windows(2).map(|p| b.pdf(p[1]).unwrap() - b.pdf(p[0]).unwrap()).collect();
        let changes = slopes
            .windows(2)
            .filter(|s| s[0] > 0.0 && s[1] <= 0.0 || s[0] < 0.0 && s[1] >= 0.0)
            .count();
        assert_eq!(changes, 1);
    }

    #[test]
    fn burr_sampler_matches_cdf() {
        let b = BurrIIIParams::new(2.0, 20.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 20_000;
        let mut xs = b.sample(n, &mut rng);
        xs.sort_by(f64::total_cmp);
        let d = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = b.cdf(x).unwrap();
                ((i + 1) as f64 / n as f64 - f).max(f - i as f64 / n as f64)
            })
            .fold(0.0, f64::max);
        assert!(d < 1.63 / (n as f64).sqrt());
        assert!(b.pdf(0.0).is_err());
    }
}
