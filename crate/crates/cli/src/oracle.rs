//! Brute-force eigenvalue oracle: roots of the characteristic polynomial
//! located by sign-change scanning and refined by bisection on the
//! polynomial value. Shares nothing with the Sturm-count path it checks.

/// `det(T − xI)` by the leading-minor recurrence.
pub fn char_poly(diag: &[f64], offdiag: &[f64], x: f64) -> f64 {
    let mut prev = 1.0;
    let mut cur = diag[0] - x;
    for i in 1..diag.len() {
        let next = (diag[i] - x) * cur - offdiag[i - 1] * offdiag[i - 1] * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All real roots in increasing order, or `None` if the scan cannot
/// separate `n` of them.
pub fn characteristic_roots(diag: &[f64], offdiag: &[f64]) -> Option<Vec<f64>> {
    let n = diag.len();
    let bound = diag.iter().map(|x| x.abs()).fold(0.0, f64::max)
        + 2.0 * offdiag.iter().map(|x| x.abs()).fold(0.0, f64::max)
        + 1.0;
    let mut samples = 4_000usize;
    while samples <= 4_000_000 {
        let roots = scan(diag, offdiag, -bound, bound, samples);
        if roots.len() == n {
            return Some(roots);
        }
        samples *= 10;
    }
    None
}

fn scan(diag: &[f64], offdiag: &[f64], lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let f = |x| char_poly(diag, offdiag, x);
    let step = (hi - lo) / samples as f64;
    let mut roots = Vec::new();
    let mut a = lo;
    let mut fa = f(a);
    for i in 1..=samples {
        let b = lo + i as f64 * step;
        let fb = f(b);
        if fb == 0.0 {
            roots.push(b);
        } else if fa != 0.0 && (fa < 0.0) != (fb < 0.0) {
            let (mut l, mut r, mut fl) = (a, b, fa);
            for _ in 0..200 {
                let mid = 0.5 * (l + r);
                if mid <= l || mid >= r {
                    break;
                }
                let fm = f(mid);
                if (fm < 0.0) == (fl < 0.0) {
                    l = mid;
                    fl = fm;
                } else {
                    r = mid;
                }
            }
            roots.push(0.5 * (l + r));
        }
        a = b;
        fa = fb;
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplacian_roots() {
        let roots = characteristic_roots(&[2.0, 2.0, 2.0], &[-1.0, -1.0]).unwrap();
        let s = std::f64::consts::SQRT_2;
        for (got, want) in roots.iter().zip([2.0 - s, 2.0, 2.0 + s]) {
            assert!((got - want).abs() < 1e-12);
        }
    }
}
