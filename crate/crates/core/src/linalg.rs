//! Small dense-vector helpers shared by the solvers.

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc + x * y)
}

#[inline]
pub fn norm2(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

#[inline]
pub fn norm1(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |acc, x| acc + x.abs())
}

#[inline]
pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |acc: f64, x| acc.max(x.abs()))
}

/// `||a - b||_2`.
#[inline]
pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    libm::sqrt(
        a.iter()
            .zip(b)
            .fold(0.0, |acc, (x, y)| acc + (x - y) * (x - y)),
    )
}
