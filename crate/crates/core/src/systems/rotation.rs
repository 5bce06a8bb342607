use super::SystemError;

/// Circle rotation `x ↦ x + α (mod 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationSystem {
    alpha: f64,
    alpha_text: String,
    grid: usize,
}

impl RotationSystem {
    /// `alpha` is a decimal string; `grid` is the number of equally spaced
    /// sample angles used by sweeps.
    pub fn new(alpha: &str, grid: usize) -> Result<Self, SystemError> {
        let value: f64 = alpha
            .trim()
            .parse()
            .map_err(|_| SystemError::BadAlpha(alpha.to_string()))?;
        if !(value > 0.0 && value < 1.0) {
            return Err(SystemError::BadAlpha(alpha.to_string()));
        }
        Ok(Self {
            alpha: value,
            alpha_text: alpha.trim().to_string(),
            grid: grid.max(1),
        })
    }

    pub fn golden(grid: usize) -> Self {
        Self::new("0.61803398874989484820", grid).expect("valid rotation number")
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn alpha_text(&self) -> &str {
        &self.alpha_text
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn grid_angles(&self) -> Vec<f64> {
        (0..self.grid).map(|i| i as f64 / self.grid as f64).collect()
    }

    /// Fractional part of `x + k·α`. The product `k·α` is formed with its
    /// rounding error recovered by a fused multiply-add, so the result is
    /// accurate to a few ulps for every `k` below 2^53.
    pub fn orbit_angle(&self, x: f64, k: u64) -> f64 {
        let kf = k as f64;
        let product = kf * self.alpha;
        let error = kf.mul_add(self.alpha, -product);
        let whole = product.floor();
        let angle = ((product - whole) + x.rem_euclid(1.0)) + error;
        let reduced = angle.rem_euclid(1.0);
        if reduced >= 1.0 {
            0.0
        } else {
            reduced
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_is_validated() {
        assert!(RotationSystem::new("0", 10).is_err());
        assert!(RotationSystem::new("1.0", 10).is_err());
        assert!(RotationSystem::new("abc", 10).is_err());
        assert!(RotationSystem::new("0.25", 10).is_ok());
    }

    #[test]
    fn quarter_rotation_is_exact() {
        let r = RotationSystem::new("0.25", 4).unwrap();
        assert_eq!(r.orbit_angle(0.0, 1), 0.25);
        assert_eq!(r.orbit_angle(0.5, 3), 0.25);
        assert_eq!(r.orbit_angle(0.0, 4), 0.0);
        assert_eq!(r.grid_angles(), vec![0.0, 0.25, 0.5, 0.75]);
    }

    #[test]
    fn orbit_angle_matches_reduced_starting_angle() {
        let r = RotationSystem::golden(10);
        for k in [0u64, 1, 7, 1_000, 123_457, 1_000_000] {
            for x in [0.0, 0.3, 0.999_999] {
                let a = r.orbit_angle(x, k);
                let b = r.orbit_angle(x + 5.0, k);
                let d = (a - b).abs();
                assert!(d.min(1.0 - d) <= 1e-12, "k={k} x={x}");
                assert!((0.0..1.0).contains(&a));
            }
        }
    }

    #[test]
    fn orbit_angle_has_no_drift() {
        // Exact frac(k·α) for the binary value of α: α = m·2^-s, so
        // frac(k·α) = (k·m mod 2^s)/2^s in 128-bit integer arithmetic.
        let r = RotationSystem::golden(1);
        let alpha = r.alpha();
        let s = 53 - alpha.log2().floor() as i32 - 1;
        let m = (alpha * 2f64.powi(s)) as u128;
        assert_eq!(m as f64 / 2f64.powi(s), alpha);
        for k in [1u128, 999_999, 1_000_000, 777_777, 1 << 40] {
            let modulus = 1u128 << s;
            let exact = ((k * m) % modulus) as f64 / modulus as f64;
            let got = r.orbit_angle(0.0, k as u64);
            assert!((exact - got).abs() < 1e-15, "k={k}: {exact} vs {got}");
        }
    }
}
