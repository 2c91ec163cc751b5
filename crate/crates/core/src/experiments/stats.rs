//! Binomial confidence intervals and transition estimates.

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `trials` at 95%.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (f64::NAN, f64::NAN);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = (center - half).max(0.0).min(p);
    let hi = (center + half).min(1.0).max(p);
    (lo, hi)
}

/// Where a frequency curve crosses 1/2.
#[derive(Clone, Debug, PartialEq)]
pub enum Crossing {
    NoCrossing,
    Found {
        /// Linear interpolation of the crossing point.
        estimate: f64,
        /// Grid cells `(parameter, frequency)` on either side.
        low: (f64, f64),
        high: (f64, f64),
    },
}

impl Crossing {
    pub fn bracket(&self) -> Option<(f64, f64)> {
        match self {
            Crossing::NoCrossing => None,
            Crossing::Found { low, high, .. } => Some((low.0, high.0)),
        }
    }
}

/// First crossing of 1/2 along `points`, sorted by parameter.
pub fn find_crossing(points: &[(f64, f64)]) -> Crossing {
    for (i, w) in points.windows(2).enumerate() {
        let (d0, f0) = w[0];
        let (d1, f1) = w[1];
        let a = f0 - 0.5;
        let b = f1 - 0.5;
        if a == 0.0 {
            return Crossing::Found {
                estimate: d0,
                low: points[i],
                high: points[i + 1],
            };
        }
        if a * b < 0.0 || b == 0.0 {
            let estimate = d0 + (0.5 - f0) * (d1 - d0) / (f1 - f0);
            return Crossing::Found {
                estimate,
                low: w[0],
                high: w[1],
            };
        }
    }
    Crossing::NoCrossing
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn wilson_known_values() {
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo - 0.403_831_7).abs() < 1e-6, "{lo}");
        assert!((hi - 0.596_168_3).abs() < 1e-6, "{hi}");
        let (lo, hi) = wilson_interval(0, 20);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.1 && hi < 0.2);
    }

    #[test]
    fn crossing_examples() {
        let pts = [(0.1, 1.0), (0.2, 0.8), (0.3, 0.2), (0.4, 0.0)];
        match find_crossing(&pts) {
            Crossing::Found { estimate, low, high } => {
                assert!((estimate - 0.25).abs() < 1e-12);
                assert_eq!(low.0, 0.2);
                assert_eq!(high.0, 0.3);
            }
            Crossing::NoCrossing => panic!(),
        }
        assert_eq!(find_crossing(&[(0.1, 1.0), (0.2, 1.0)]), Crossing::NoCrossing);
        assert_eq!(find_crossing(&[]), Crossing::NoCrossing);
    }

    proptest! {
        #[test]
        fn interval_contains_frequency(trials in 1u64..500, s in 0u64..500) {
            let s = s.min(trials);
            let (lo, hi) = wilson_interval(s, trials);
            let p = s as f64 / trials as f64;
            prop_assert!(lo <= p && p <= hi);
            prop_assert!(lo >= 0.0 && hi <= 1.0);
        }
    }
}
