//! Exact root bound for a 3×3 path-count matrix.
//!
//! For a non-negative 3×3 matrix with characteristic polynomial `f`, the
//! signs `f(0) > 0`, `f(250000) < 0`, `f(T) > 0` (with `T = (100/3)^6`)
//! place a root in each of `(0, 250000)` and `(250000, T)` and, since `f` is
//! a monic cubic going to `-inf` on the left, the third root is negative.
//! Every root is then below `T`, so minimal paths of length `6n` grow no
//! faster than `(100/3)^(6n)`, which makes any 1-independent block model
//! with open probability below 3/100 fail to percolate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::transfer::TransferMatrix;
use crate::{Error, Result};

/// Monic cubic `λ³ + a2·λ² + a1·λ + a0`, stored as `[1, a2, a1, a0]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicPolynomial {
    pub coefficients: [BigInt; 4],
}

impl CharacteristicPolynomial {
    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coefficients
            .iter()
            .fold(BigRational::zero(), |acc, c| {
                acc * x + BigRational::from_integer(c.clone())
            })
    }

    /// `λ^3 - 3λ^2 + 3λ - 1` style rendering.
    pub fn render(&self) -> String {
        let mut out = String::from("λ^3");
        for (c, power) in self.coefficients[1..].iter().zip(["λ^2", "λ", ""]) {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { " - " } else { " + " };
            out.push_str(sign);
            out.push_str(&c.abs().to_string());
            if !power.is_empty() {
                out.push('·');
                out.push_str(power);
            }
        }
        out
    }
}

pub fn characteristic_polynomial_of(m: &[[BigInt; 3]; 3]) -> CharacteristicPolynomial {
    let trace = &m[0][0] + &m[1][1] + &m[2][2];
    let minor = |i: usize, j: usize| &m[i][i] * &m[j][j] - &m[i][j] * &m[j][i];
    let minors = minor(0, 1) + minor(0, 2) + minor(1, 2);
    let det = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
    CharacteristicPolynomial {
        coefficients: [BigInt::one(), -trace, minors, -det],
    }
}

pub fn characteristic_polynomial(m: &TransferMatrix) -> CharacteristicPolynomial {
    let entries = m.entries().clone().map(|row| row.map(BigInt::from));
    characteristic_polynomial_of(&entries)
}

/// Block-open probability certified by a successful sign check.
pub fn threshold_probability() -> BigRational {
    BigRational::new(3.into(), 100.into())
}

/// `(100/3)^6`, the growth rate matching [`threshold_probability`] for
/// paths of six steps.
pub fn growth_bound() -> BigRational {
    BigRational::new(BigInt::from(10u64.pow(12)), BigInt::from(3u64.pow(6)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignCheck {
    pub at: BigRational,
    pub value: BigRational,
    pub expect_positive: bool,
}

impl SignCheck {
    pub fn passes(&self) -> bool {
        if self.expect_positive {
            self.value.is_positive()
        } else {
            self.value.is_negative()
        }
    }
}

#[derive(Clone, Debug)]
pub struct ThresholdCertificate {
    pub k: usize,
    pub polynomial: CharacteristicPolynomial,
    pub checks: [SignCheck; 3],
    pub threshold: BigRational,
    pub dominant_eigenvalue: f64,
    pub per_step_growth: f64,
}

impl ThresholdCertificate {
    /// Bound from the crude count of 54 neighbours per block.
    pub fn trivial_bound() -> BigRational {
        BigRational::new(1.into(), 54.into())
    }

    /// `1 / per_step_growth`, sharper than the trivial bound and not
    /// rigorous by itself.
    pub fn numeric_bound(&self) -> f64 {
        1.0 / self.per_step_growth
    }

    pub fn render(&self) -> String {
        let fmt_q = |q: &BigRational| {
            if q.denom().is_one() {
                q.numer().to_string()
            } else {
                format!("{}/{}", q.numer(), q.denom())
            }
        };
        let mut out = String::new();
        out.push_str("certificate: block threshold\n");
        out.push_str(&format!("k: {}\n", self.k));
        out.push_str(&format!("polynomial: {}\n", self.polynomial.render()));
        for (name, c) in ["a2", "a1", "a0"]
            .iter()
            .zip(&self.polynomial.coefficients[1..])
        {
            out.push_str(&format!("coefficient.{name}: {c}\n"));
        }
        for check in &self.checks {
            let sign = if check.value.is_positive() {
                "+"
            } else if check.value.is_negative() {
                "-"
            } else {
                "0"
            };
            out.push_str(&format!(
                "f({}): {} [{}] {}\n",
                fmt_q(&check.at),
                fmt_q(&check.value),
                sign,
                if check.passes() { "ok" } else { "FAIL" }
            ));
        }
        out.push_str(&format!("largest root below: {}\n", fmt_q(&growth_bound())));
        out.push_str(&format!("threshold: {}\n", fmt_q(&self.threshold)));
        out.push_str(&format!(
            "trivial bound: {}\n",
            fmt_q(&Self::trivial_bound())
        ));
        out.push_str(&format!(
            "dominant eigenvalue (numeric): {:.6e}\n",
            self.dominant_eigenvalue
        ));
        out.push_str(&format!(
            "per-step growth (numeric): {:.6}\n",
            self.per_step_growth
        ));
        out.push_str(&format!("numeric bound: 1/{:.6}\n", self.per_step_growth));
        out
    }
}

/// Runs the exact sign check on a six-step matrix.
pub fn verify_threshold(m: &TransferMatrix) -> Result<ThresholdCertificate> {
    if m.k() != 6 {
        return Err(Error::Contract(format!(
            "threshold certificate needs the six-step matrix, got k = {}",
            m.k()
        )));
    }
    let polynomial = characteristic_polynomial(m);
    let points = [
        (BigRational::zero(), true),
        (BigRational::from_integer(250_000.into()), false),
        (growth_bound(), true),
    ];
    let checks = points.map(|(at, expect_positive)| SignCheck {
        value: polynomial.eval(&at),
        at,
        expect_positive,
    });
    if let Some(bad) = checks.iter().find(|c| !c.passes()) {
        return Err(Error::CertificationFailed(format!(
            "f({}) = {} has the wrong sign",
            bad.at, bad.value
        )));
    }
    let (dominant_eigenvalue, per_step_growth) = dominant_eigenvalue(m)?;
    Ok(ThresholdCertificate {
        k: m.k(),
        polynomial,
        checks,
        threshold: threshold_probability(),
        dominant_eigenvalue,
        per_step_growth,
    })
}

const MAX_POWER_ITERATIONS: usize = 100_000;

/// Largest eigenvalue of a non-negative matrix by power iteration, to
/// relative tolerance 1e-9.
pub fn power_iteration(m: &[[f64; 3]; 3]) -> Result<f64> {
    let mut v = [1.0f64; 3];
    let mut prev = f64::NAN;
    for _ in 0..MAX_POWER_ITERATIONS {
        let w: [f64; 3] = [0, 1, 2].map(|i| (0..3).map(|j| m[i][j] * v[j]).sum());
        let norm = w.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if norm <= 0.0 || !norm.is_finite() {
            return Err(Error::Numeric("power iteration collapsed to zero".into()));
        }
        v = w.map(|x| x / norm);
        // |λ - norm| shrinks geometrically; stop well inside the tolerance.
        if (norm - prev).abs() <= 1e-12 * norm {
            return Ok(norm);
        }
        prev = norm;
    }
    Err(Error::Numeric(format!(
        "power iteration did not converge in {MAX_POWER_ITERATIONS} steps"
    )))
}

/// Dominant eigenvalue and its `k`-th root (the per-step growth rate).
pub fn dominant_eigenvalue(m: &TransferMatrix) -> Result<(f64, f64)> {
    let value = power_iteration(&m.to_f64())?;
    let k = m.k().max(1) as f64;
    Ok((value, value.powf(1.0 / k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_matrix(rows: [[i64; 3]; 3]) -> [[BigInt; 3]; 3] {
        rows.map(|r| r.map(BigInt::from))
    }

    #[test]
    fn small_polynomials() {
        let id = characteristic_polynomial_of(&int_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]]));
        assert_eq!(id.coefficients, [1, -3, 3, -1].map(BigInt::from));
        let zero = characteristic_polynomial_of(&int_matrix([[0; 3]; 3]));
        assert_eq!(zero.coefficients, [1, 0, 0, 0].map(BigInt::from));
        assert_eq!(zero.render(), "λ^3");
        // Companion-like check: det and trace of a generic matrix.
        let m = int_matrix([[2, 1, 0], [1, 3, 1], [0, 1, 4]]);
        let f = characteristic_polynomial_of(&m);
        assert_eq!(f.coefficients, [1, -9, 24, -18].map(BigInt::from));
    }

    #[test]
    fn reference_matrix_certifies() {
        let cert = verify_threshold(&TransferMatrix::reference()).unwrap();
        assert_eq!(
            cert.polynomial.coefficients[1..],
            [
                BigInt::from(-1_349_435_298i64),
                BigInt::from(-574_193_103_868_851i64),
                "212282708057868352770".parse().unwrap()
            ]
        );
        assert_eq!(cert.checks[0].value.to_string(), "212282708057868352770");
        assert_eq!(cert.checks[1].value.to_string(), "-15589649034344397230");
        assert_eq!(cert.checks[2].value.denom(), &BigInt::from(387_420_489u64));
        assert!((cert.dominant_eigenvalue - 1.349860e9).abs() < 1e3);
        assert!((cert.per_step_growth - 33.244).abs() < 1e-3);
        let text = cert.render();
        assert!(text.contains("threshold: 3/100"));
        assert!(text.contains("trivial bound: 1/54"));
    }

    #[test]
    fn wrong_signs_fail() {
        let big = TransferMatrix::from_u64(6, None, [[2_000_000_000, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert!(matches!(
            verify_threshold(&big),
            Err(Error::CertificationFailed(_))
        ));
        let short = TransferMatrix::from_u64(5, None, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert!(matches!(verify_threshold(&short), Err(Error::Contract(_))));
    }

    #[test]
    fn power_iteration_examples() {
        let id = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        assert!((power_iteration(&id).unwrap() - 1.0).abs() < 1e-12);
        let d = [[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 3.0]];
        assert!((power_iteration(&d).unwrap() - 3.0).abs() < 1e-8);
        assert!(matches!(
            power_iteration(&[[0.0; 3]; 3]),
            Err(Error::Numeric(_))
        ));
    }

    #[test]
    fn transpose_has_same_polynomial() {
        let m = TransferMatrix::reference();
        let e = m.entries();
        let t = [0, 1, 2].map(|i| [0, 1, 2].map(|j| BigInt::from(e[j][i].clone())));
        assert_eq!(
            characteristic_polynomial_of(&t),
            characteristic_polynomial(&m)
        );
    }
}
