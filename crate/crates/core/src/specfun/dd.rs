//! Minimal double-double ("hi + lo") arithmetic, ~31 significant digits.
//!
//! The Maclaurin series for the Airy pair suffer catastrophic cancellation:
//! on the positive axis the partial sums are O(e^{+ζ}) while Ai is O(e^{−ζ})
//! (ζ = (2/3)x^{3/2}), so plain f64 loses ~e^{2ζ} of relative accuracy and
//! dies around x ≈ 3.4 for a 1e-12 target; the oscillatory side loses ~3e7
//! at x = −9. Summing in double-double keeps the series good to ~1e-16 out
//! to |x| = 9, where the asymptotic expansions take over. Only the handful
//! of operations the series needs are implemented. Error-free transforms
//! are the classical ones (Dekker/Knuth; products via `f64::mul_add`).

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Knuth two-sum: s + e == a + b exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Fast two-sum, valid when |a| >= |b|.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Exact product: p + e == a * b.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl Dd {
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Dd {
        Dd { hi, lo }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> f64 {
        self.to_f64().abs()
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn add(self, other: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, other.hi);
        let (t1, t2) = two_sum(self.lo, other.lo);
        let (s1, s2) = {
            let s2 = s2 + t1;
            quick_two_sum(s1, s2)
        };
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    pub fn mul(self, other: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, other.hi);
        let p2 = p2 + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, k: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, k);
        let p2 = p2 + self.lo * k;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    /// Division by an exactly representable f64 (series denominators are
    /// small integer products).
    pub fn div_f64(self, k: f64) -> Dd {
        let q1 = self.hi / k;
        let (p1, p2) = two_prod(q1, k);
        let r = self.sub(Dd::new(p1, p2));
        let q2 = (r.hi + r.lo) / k;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }

    /// Square root by one Newton step off the f64 seed; relative error
    /// ~1e-31 for normal positive inputs.
    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::from_f64(self.hi.sqrt()); // 0 or NaN, caller's problem
        }
        let y0 = self.hi.sqrt();
        let y = Dd::from_f64(y0);
        let r = self.sub(y.mul(y)).div_f64(2.0 * y0);
        y.add(r)
    }

    /// self − n·k for integer-valued n (used for range reduction).
    pub fn sub_mul(self, n: f64, k: Dd) -> Dd {
        self.sub(k.mul_f64(n))
    }
}
