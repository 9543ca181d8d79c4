use crate::error::{QiError, Result};
use crate::scalar::{binomial, Real};

use super::{elementary_symmetric, KnotVector};

/// First and normalized second symmetric means of the interior knots of `B_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrevillePair<T> {
    pub theta: T,
    pub theta2: T,
}

impl<T: Real> GrevillePair<T> {
    /// `theta^2 - theta2`, the coefficient of the second-derivative correction.
    pub fn spread(&self) -> T {
        self.theta * self.theta - self.theta2
    }
}

/// Greville abscissa: mean of the `m` interior knots of `B_i`.
pub fn greville_abscissa<T: Real>(kv: &KnotVector<T>, i: usize) -> Result<T> {
    symmetric_mean(kv, i, 1)
}

pub fn greville<T: Real>(kv: &KnotVector<T>, i: usize) -> Result<GrevillePair<T>> {
    if kv.degree() < 2 {
        return Err(QiError::Undefined(format!(
            "second symmetric mean needs degree >= 2, got {}",
            kv.degree()
        )));
    }
    Ok(GrevillePair {
        theta: symmetric_mean(kv, i, 1)?,
        theta2: symmetric_mean(kv, i, 2)?,
    })
}

/// `sigma_r(t_{i+1}, ..., t_{i+m}) / C(m, r)`: the B-spline coefficient of `x^r`
/// carried by `B_i` (Marsden's identity). Requires `r <= m`.
pub fn symmetric_mean<T: Real>(kv: &KnotVector<T>, i: usize, r: usize) -> Result<T> {
    kv.check_index(i)?;
    let m = kv.degree();
    if r > m {
        return Err(QiError::Undefined(format!(
            "symmetric mean of order {r} needs degree >= {r}, got {m}"
        )));
    }
    let e = elementary_symmetric(kv.interior_knots(i), r);
    Ok(e[r] / binomial::<T>(m, r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_cubic_pair() {
        let kv = KnotVector::<f64>::uniform_integer(3, -1, 10).unwrap();
        // B_0 has knots -1..3, interior {0, 1, 2}
        let g = greville(&kv, 0).unwrap();
        assert!((g.theta - 1.0).abs() < 1e-15);
        assert!((g.theta2 - 2.0 / 3.0).abs() < 1e-15);
        assert!((g.spread() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn clamped_cubic_abscissae() {
        let kv = KnotVector::clamped(3, &[0.0, 0.5, 1.0]).unwrap();
        let th: Vec<f64> = (0..5).map(|i| greville_abscissa(&kv, i).unwrap()).collect();
        let want = [0.0, 1.0 / 6.0, 0.5, 5.0 / 6.0, 1.0];
        for (a, b) in th.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn low_degree_second_mean_undefined() {
        let kv = KnotVector::clamped_uniform(1, 3, 0.0, 1.0).unwrap();
        assert!(matches!(greville(&kv, 1), Err(QiError::Undefined(_))));
        assert!(greville_abscissa(&kv, 1).is_ok());
    }
}
