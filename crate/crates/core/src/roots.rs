//! Scalar root finding: Brent's bracketing method and a polished cubic solver.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Brent's method on a bracket `[a, b]` with `f(a)` and `f(b)` of opposite sign.
///
/// Converges when the bracket half-width drops below `xtol` (plus a few ulps of
/// the iterate) or an exact zero is hit.
pub fn brent<T, F>(mut f: F, a: T, b: T, fa: T, fb: T, xtol: T, max_iter: usize) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if (fa > T::zero()) == (fb > T::zero()) {
        return Err(Error::SolverFailure(format!(
            "root not bracketed: f({}) = {}, f({}) = {}",
            a.as_f64(),
            fa.as_f64(),
            b.as_f64(),
            fb.as_f64()
        )));
    }
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let three = T::lit(3.0);
    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    let (mut c, mut fc) = (b, fb);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if (fb > T::zero()) == (fc > T::zero()) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * T::epsilon() * b.abs() + half * xtol;
        let xm = half * (c - b);
        if xm.abs() <= tol1 || fb == T::zero() {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qq * (qq - r) - (b - a) * (r - T::one()));
                q = (qq - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = three * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 {
            b + d
        } else if xm > T::zero() {
            b + tol1
        } else {
            b - tol1
        };
        fb = f(b)?;
    }
    Err(Error::SolverFailure(format!(
        "Brent iteration did not converge in {max_iter} steps near {}",
        b.as_f64()
    )))
}

/// Up to three real roots, sorted ascending.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealRoots<T> {
    vals: [T; 3],
    len: usize,
}

impl<T: Real> RealRoots<T> {
    fn empty() -> Self {
        Self {
            vals: [T::zero(); 3],
            len: 0,
        }
    }

    fn push(&mut self, x: T) {
        if x.is_finite() {
            self.vals[self.len] = x;
            self.len += 1;
        }
    }

    pub fn as_slice(&self) -> &[T] {
        &self.vals[..self.len]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

fn horner<T: Real>(c: &[T; 4], x: T) -> (T, T) {
    let p = ((c[3] * x + c[2]) * x + c[1]) * x + c[0];
    let dp = (T::lit(3.0) * c[3] * x + T::lit(2.0) * c[2]) * x + c[1];
    (p, dp)
}

/// Real roots of `c[0] + c[1] x + c[2] x^2 + c[3] x^3`.
///
/// Uses the trigonometric form when three roots are real and Cardano's formula
/// otherwise, then polishes every root with Newton steps on the original
/// polynomial. A negligible leading coefficient falls back to the quadratic;
/// the dropped root is then huge and the polish absorbs the perturbation.
pub fn cubic_real_roots<T: Real>(c: [T; 4]) -> RealRoots<T> {
    let scale = c.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let mut out = RealRoots::empty();
    if !(scale > T::zero()) || !scale.is_finite() {
        return out;
    }
    let c = c.map(|x| x / scale);
    let small = T::tol(1e-8, 16.0);

    if c[3].abs() <= small {
        quadratic_into(c[2], c[1], c[0], &mut out);
    } else {
        let third = T::one() / T::lit(3.0);
        let a = c[2] / c[3];
        let b = c[1] / c[3];
        let cc = c[0] / c[3];
        let q = (a * a - T::lit(3.0) * b) / T::lit(9.0);
        let r = (T::lit(2.0) * a * a * a - T::lit(9.0) * a * b + T::lit(27.0) * cc) / T::lit(54.0);
        let q3 = q * q * q;
        if r * r < q3 {
            let theta = (r / q3.sqrt()).max(-T::one()).min(T::one()).acos();
            let m = -T::lit(2.0) * q.sqrt();
            let tau = T::TAU();
            out.push(m * (theta * third).cos() - a * third);
            out.push(m * ((theta + tau) * third).cos() - a * third);
            out.push(m * ((theta - tau) * third).cos() - a * third);
        } else {
            let big = -(r.signum()) * (r.abs() + (r * r - q3).sqrt()).cbrt();
            let small_term = if big != T::zero() { q / big } else { T::zero() };
            out.push(big + small_term - a * third);
        }
    }

    for x in out.vals[..out.len].iter_mut() {
        polish(&c, x);
    }
    out.vals[..out.len].sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

fn polish<T: Real>(c: &[T; 4], x: &mut T) {
    let (mut p, _) = horner(c, *x);
    for _ in 0..6 {
        let (_, dp) = horner(c, *x);
        if dp == T::zero() || p == T::zero() {
            break;
        }
        let next = *x - p / dp;
        let (pn, _) = horner(c, next);
        if !(pn.abs() < p.abs()) {
            break;
        }
        *x = next;
        p = pn;
    }
}

fn quadratic_into<T: Real>(a: T, b: T, c: T, out: &mut RealRoots<T>) {
    let small = T::tol(1e-14, 16.0);
    if a.abs() <= small {
        if b.abs() > small {
            out.push(-c / b);
        }
        return;
    }
    let disc = b * b - T::lit(4.0) * a * c;
    if disc < T::zero() {
        return;
    }
    let sq = disc.sqrt();
    let q = -T::lit(0.5) * (b + if b >= T::zero() { sq } else { -sq });
    if q == T::zero() {
        out.push(T::zero());
        out.push(T::zero());
        return;
    }
    out.push(q / a);
    out.push(c / q);
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn from_roots(r: [f64; 3], lead: f64) -> [f64; 4] {
        let [a, b, c] = r;
        [
            -lead * a * b * c,
            lead * (a * b + b * c + a * c),
            -lead * (a + b + c),
            lead,
        ]
    }

    #[test]
    fn three_distinct_roots() {
        let r = cubic_real_roots(from_roots([-0.7, 0.1, 0.9], 2.0));
        let want = [-0.7, 0.1, 0.9];
        assert_eq!(r.len(), 3);
        for (x, w) in r.as_slice().iter().zip(want) {
            assert!((x - w).abs() < 1e-15);
        }
    }

    #[test]
    fn one_real_root() {
        // (x - 0.5)(x^2 + 1)
        let r = cubic_real_roots::<f64>([-0.5, 1.0, -0.5, 1.0]);
        assert_eq!(r.len(), 1);
        assert!((r.as_slice()[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn nearly_quadratic() {
        // eps (x - 1e9)(x - 0.3)(x + 0.2) with eps tiny: the two small roots survive.
        let c = from_roots([1.0e9, 0.3, -0.2], 1.0e-12);
        let r = cubic_real_roots(c);
        let small: Vec<f64> = r
            .as_slice()
            .iter()
            .copied()
            .filter(|x| x.abs() < 10.0)
            .collect();
        assert_eq!(small.len(), 2);
        assert!((small[0] + 0.2).abs() < 1e-13 && (small[1] - 0.3).abs() < 1e-13);
    }

    #[test]
    fn zero_polynomial_has_no_roots() {
        assert!(cubic_real_roots::<f64>([0.0f64; 4]).is_empty());
    }

    #[test]
    fn brent_finds_cosine_fixed_point() {
        let f = |x: f64| Ok(x.cos() - x);
        let x = brent(f, 0.0, 1.0, 1.0, 1f64.cos() - 1.0, 1e-15, 100).unwrap();
        assert!((x.cos() - x).abs() < 1e-15);
    }

    #[test]
    fn brent_requires_bracket() {
        let f = |x: f64| Ok(x * x + 1.0);
        assert!(brent(f, -1.0, 1.0, 2.0, 2.0, 1e-12, 50).is_err());
    }

    proptest! {
        #[test]
        fn recovers_separated_roots(a in -0.99f64..0.99, d1 in 0.01f64..1.0, d2 in 0.01f64..1.0, lead in 0.1f64..10.0) {
            let roots = [a, a + d1, a + d1 + d2];
            let r = cubic_real_roots(from_roots(roots, lead));
            prop_assert_eq!(r.len(), 3);
            for (x, w) in r.as_slice().iter().zip(roots) {
                prop_assert!((x - w).abs() < 1e-12, "{} vs {}", x, w);
            }
        }
    }
}
