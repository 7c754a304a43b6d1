//! Double-double arithmetic (≈31 significant digits) for test oracles.
//!
//! Error-free transforms follow the classic Dekker/Knuth constructions;
//! `two_prod` uses `mul_add`, which is correctly rounded with or without
//! hardware FMA.

#![allow(dead_code)] // shared by several integration-test crates; not all use every op

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Requires |a| ≥ |b|.
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn from_u64(x: u64) -> Dd {
        // Split so both halves are exactly representable.
        let hi = (x >> 32) as f64 * 4294967296.0;
        let lo = (x & 0xFFFF_FFFF) as f64;
        Dd::from_f64(hi).add(Dd::from_f64(lo))
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let p2 = p2 + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, x: f64) -> Dd {
        self.mul(Dd::from_f64(x))
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_f64(q1));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul_f64(q2));
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from_f64(q3))
    }

    pub fn sqrt(self) -> Dd {
        assert!(self.hi >= 0.0, "sqrt of negative double-double");
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        // One Newton step from the f64 seed reaches full precision.
        let y = Dd::from_f64(self.hi.sqrt());
        y.add(self.sub(y.mul(y)).div(y.mul_f64(2.0)))
    }

    /// Exact scaling by a power of two.
    pub fn scale_pow2(self, e: i32) -> Dd {
        let f = (e as f64).exp2();
        Dd {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            self.neg()
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representable_arithmetic_is_exact() {
        let a = Dd::from_f64(0.1); // the f64 nearest 0.1, exactly
        let ten = Dd::from_f64(10.0);
        let prod = a.mul(ten);
        // 0.1_f64 * 10 in double-double is not exactly 1.
        assert!((prod.to_f64() - 1.0).abs() < 1e-15);
        assert!(prod.sub(Dd::ONE).abs().to_f64() > 0.0);
    }

    #[test]
    fn sqrt_squares_back() {
        let x = Dd::from_f64(26.0);
        let r = x.sqrt();
        let back = r.mul(r).sub(x);
        assert!(back.abs().to_f64() < 1e-30);
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = Dd::from_f64(7.0).div(Dd::from_f64(3.0));
        let b = a.mul(Dd::from_f64(3.0));
        assert!(b.sub(Dd::from_f64(7.0)).abs().to_f64() < 1e-30);
    }
}
