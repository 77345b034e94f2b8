/// Fourth-order central difference of `f` at `x`.
///
/// # Panics
/// If `order` is not 1 or 2.
pub fn fd_derivative(f: impl Fn(f64) -> f64, x: f64, order: usize, h: f64) -> f64 {
    let [m2, m1, p1, p2] = [f(x - 2.0 * h), f(x - h), f(x + h), f(x + 2.0 * h)];
    match order {
        1 => (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h),
        2 => (-m2 + 16.0 * m1 - 30.0 * f(x) + 16.0 * p1 - p2) / (12.0 * h * h),
        _ => panic!("fd_derivative supports order 1 or 2, got {order}"),
    }
}

/// Componentwise [`fd_derivative`] for vector-valued functions.
pub fn fd_derivative_vec<const N: usize>(f: impl Fn(f64) -> [f64; N], x: f64, order: usize, h: f64) -> [f64; N] {
    let [m2, m1, p1, p2] = [f(x - 2.0 * h), f(x - h), f(x + h), f(x + 2.0 * h)];
    let mut out = [0.0; N];
    match order {
        1 => {
            for i in 0..N {
                out[i] = (m2[i] - 8.0 * m1[i] + 8.0 * p1[i] - p2[i]) / (12.0 * h);
            }
        }
        2 => {
            let c = f(x);
            for i in 0..N {
                out[i] = (-m2[i] + 16.0 * m1[i] - 30.0 * c[i] + 16.0 * p1[i] - p2[i]) / (12.0 * h * h);
            }
        }
        _ => panic!("fd_derivative supports order 1 or 2, got {order}"),
    }
    out
}
