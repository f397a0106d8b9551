//! Harmonic-oscillator matrix elements in dimensionless coordinates,
//! `q = (a + a†)/√2` and `p = i(a† − a)/√2`.

use std::collections::BTreeMap;

/// Operators whose HO-basis matrix elements are available.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoOperator {
    Q,
    Q2,
    Q3,
    Q4,
    /// `d²/dq²`, i.e. `−p²`.
    D2,
}

impl HoOperator {
    /// `q^k` for `k = 1..=4`.
    pub fn power(k: usize) -> Option<Self> {
        match k {
            1 => Some(HoOperator::Q),
            2 => Some(HoOperator::Q2),
            3 => Some(HoOperator::Q3),
            4 => Some(HoOperator::Q4),
            _ => None,
        }
    }
}

type Ket = BTreeMap<usize, f64>;

/// Apply `(a + sign·a†)/√2` to a sparse ket.
fn apply_ladder_sum(ket: &Ket, sign: f64) -> Ket {
    let mut out = Ket::new();
    for (&n, &c) in ket {
        if n > 0 {
            *out.entry(n - 1).or_insert(0.0) += c * (n as f64).sqrt();
        }
        *out.entry(n + 1).or_insert(0.0) += sign * c * ((n + 1) as f64).sqrt();
    }
    out.values_mut().for_each(|c| *c *= std::f64::consts::FRAC_1_SQRT_2);
    out
}

/// `<m| op |n>`.
pub fn ho_matrix_element(op: HoOperator, m: usize, n: usize) -> f64 {
    let mut ket = Ket::from([(n, 1.0)]);
    match op {
        HoOperator::D2 => {
            // (a − a†)/√2 squared equals d²/dq²
            ket = apply_ladder_sum(&ket, -1.0);
            ket = apply_ladder_sum(&ket, -1.0);
        }
        _ => {
            let k = match op {
                HoOperator::Q => 1,
                HoOperator::Q2 => 2,
                HoOperator::Q3 => 3,
                _ => 4,
            };
            for _ in 0..k {
                ket = apply_ladder_sum(&ket, 1.0);
            }
        }
    }
    ket.get(&m).copied().unwrap_or(0.0)
}

/// Matrix element of `q^k` for any `k >= 0`.
pub fn q_power_element(k: usize, m: usize, n: usize) -> f64 {
    let mut ket = Ket::from([(n, 1.0)]);
    for _ in 0..k {
        ket = apply_ladder_sum(&ket, 1.0);
    }
    ket.get(&m).copied().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    /// Dense oracle in a basis of `dim` states.
    fn dense_q(dim: usize) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(dim, dim);
        for n in 1..dim {
            a[(n - 1, n)] = (n as f64).sqrt();
        }
        (&a + a.transpose()) * std::f64::consts::FRAC_1_SQRT_2
    }

    fn dense_d2(dim: usize) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(dim, dim);
        for n in 1..dim {
            a[(n - 1, n)] = (n as f64).sqrt();
        }
        let d = (&a - a.transpose()) * std::f64::consts::FRAC_1_SQRT_2;
        &d * &d
    }

    #[test]
    fn examples() {
        assert!((ho_matrix_element(HoOperator::Q, 0, 1) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        for n in 0..6 {
            assert_eq!(ho_matrix_element(HoOperator::Q, n, n), 0.0);
        }
        assert!((-0.5 * ho_matrix_element(HoOperator::D2, 0, 0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn matches_dense_powers() {
        // large enough basis that truncation cannot touch elements with m, n < 6
        let dim = 16;
        let q = dense_q(dim);
        let q2 = &q * &q;
        let q3 = &q2 * &q;
        let q4 = &q3 * &q;
        let d2 = dense_d2(dim);
        for m in 0..6 {
            for n in 0..6 {
                let cases = [
                    (HoOperator::Q, q[(m, n)]),
                    (HoOperator::Q2, q2[(m, n)]),
                    (HoOperator::Q3, q3[(m, n)]),
                    (HoOperator::Q4, q4[(m, n)]),
                    (HoOperator::D2, d2[(m, n)]),
                ];
                for (op, expected) in cases {
                    assert!((ho_matrix_element(op, m, n) - expected).abs() < 1e-12, "{op:?} {m} {n}");
                }
            }
        }
    }

    #[test]
    fn harmonic_spectrum() {
        // (p² + q²)/2 is diagonal with n + 1/2
        for m in 0..5 {
            for n in 0..5 {
                let h = 0.5 * (-ho_matrix_element(HoOperator::D2, m, n) + ho_matrix_element(HoOperator::Q2, m, n));
                let expect = if m == n { n as f64 + 0.5 } else { 0.0 };
                assert!((h - expect).abs() < 1e-12);
            }
        }
    }
}
