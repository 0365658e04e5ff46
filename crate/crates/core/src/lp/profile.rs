use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Radial cutoff `chi` defining the dyadic family.
///
/// `chi = 1` on `[0, plateau]`, `chi = 0` on `[1, inf)`, with a smooth
/// monotone transition built from `exp(-1/x)`. The low block is `chi(|xi|)`
/// and the annulus profile is `chi(|xi|/2) - chi(|xi|)`, so the family sums
/// to one by telescoping.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LpProfile {
    #[serde(default = "default_plateau")]
    pub plateau: f64,
}

fn default_plateau() -> f64 {
    0.5
}

impl Default for LpProfile {
    fn default() -> Self {
        LpProfile {
            plateau: default_plateau(),
        }
    }
}

fn bump(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

impl LpProfile {
    /// The annulus support `[1/2, 2]` needs `plateau >= 1/2`, and the lower
    /// bound on `[3/5, 5/3]` needs `plateau < 3/5`.
    pub fn validate(&self) -> Result<()> {
        if !(0.5..0.6).contains(&self.plateau) {
            return Err(Error::param(
                "plateau",
                format!("{} is not in [0.5, 0.6)", self.plateau),
            ));
        }
        Ok(())
    }

    pub fn cutoff(&self, r: f64) -> f64 {
        let a = self.plateau;
        if r <= a {
            return 1.0;
        }
        if r >= 1.0 {
            return 0.0;
        }
        let t = (r - a) / (1.0 - a);
        let up = bump(1.0 - t);
        up / (up + bump(t))
    }

    /// Low-frequency block at radius `r`.
    pub fn low(&self, r: f64) -> f64 {
        self.cutoff(r)
    }

    /// Annulus profile at radius `r`.
    pub fn annulus(&self, r: f64) -> f64 {
        self.cutoff(0.5 * r) - self.cutoff(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn supports_and_lower_bounds() {
        let p = LpProfile::default();
        assert_eq!(p.low(0.0), 1.0);
        assert_eq!(p.low(1.0), 0.0);
        assert_eq!(p.annulus(0.5), 0.0);
        assert_eq!(p.annulus(2.0), 0.0);
        assert_eq!(p.annulus(0.3), 0.0);
        assert_eq!(p.annulus(2.5), 0.0);
        let lo_low = (0..=100).map(|i| p.low(i as f64 / 120.0)).fold(1.0, f64::min);
        assert!(lo_low > 0.15, "{lo_low}");
        let lo_ann = (0..=100)
            .map(|i| p.annulus(0.6 + i as f64 * (5.0 / 3.0 - 0.6) / 100.0))
            .fold(1.0, f64::min);
        assert!(lo_ann > 0.02, "{lo_ann}");
    }

    #[test]
    fn telescoping_partition() {
        let p = LpProfile::default();
        for r in [0.0, 0.4, 0.77, 1.3, 5.1, 100.0] {
            let sum = p.low(r) + (0..12).map(|j| p.annulus(r / 2f64.powi(j))).sum::<f64>();
            assert!((sum - 1.0).abs() < 1e-15, "r = {r}: {sum}");
        }
    }

    #[test]
    fn plateau_range() {
        assert!(LpProfile { plateau: 0.45 }.validate().is_err());
        assert!(LpProfile { plateau: 0.6 }.validate().is_err());
        assert!(LpProfile { plateau: 0.55 }.validate().is_ok());
    }
}
