//! High-precision Airy reference, implemented independently of the library:
//! the Maclaurin solution pair of y'' = xy summed in exact `BigRational`
//! arithmetic (no rounding, no cancellation), anchored by 50-digit origin
//! values from published tables (DLMF 9.2.3–9.2.6). Truncation is driven to
//! ~1e-50, so disagreement beyond ~1e-15 relative is the library's fault.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::Signed;

const AI0: &str = "0.35502805388781723926006318600418317639797917419918";
const AIP0: &str = "-0.25881940379280679840518356018920396347909113835493";
const BI0: &str = "0.6149266274460007351509223690936135535947281886486";
const BIP0: &str = "0.44828835735382635791482371039882839086622679921226";

fn parse_decimal(s: &str) -> BigRational {
    let (neg, s) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = s.split_once('.').unwrap();
    let digits: BigInt = format!("{int_part}{frac_part}").parse().unwrap();
    let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
    let r = BigRational::new(digits, denom);
    if neg {
        -r
    } else {
        r
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

/// Round a rational to f64 through a 32-digit decimal scaling, which the
/// float parser then rounds correctly; avoids `to_f64` overflow on the
/// enormous intermediate numerators.
fn to_f64(r: &BigRational) -> f64 {
    let scaled = (r * BigRational::from(BigInt::from(10u32).pow(32))).trunc();
    format!("{}e-32", scaled.to_integer()).parse().unwrap()
}

/// The fundamental pair f (f(0)=1, f'(0)=0) and g (g(0)=0, g'(0)=1) of
/// y'' = xy, with derivatives, at nonzero rational x.
fn fundamental_pair(x: &BigRational) -> (BigRational, BigRational, BigRational, BigRational) {
    let eps = BigRational::new(BigInt::from(1), BigInt::from(10u32).pow(50));
    let x3 = x * x * x;
    // Terms a_k x^{3k} and b_k x^{3k+1}; recurrences divide by the next two
    // integers in (3k)!-style products.
    let mut ta = int(1);
    let mut tb = x.clone();
    let (mut f, mut fp) = (ta.clone(), int(0));
    let (mut g, mut gp) = (tb.clone(), int(1));
    let growth_end = {
        let xf = to_f64(x).abs();
        (xf.powf(1.5) as i64) + 6
    };
    let mut k: i64 = 1;
    loop {
        ta = &ta * &x3 / int((3 * k - 1) * (3 * k));
        tb = &tb * &x3 / int((3 * k) * (3 * k + 1));
        f += &ta;
        fp += &ta * int(3 * k) / x;
        g += &tb;
        gp += &tb * int(3 * k + 1) / x;
        if 3 * k > growth_end && ta.abs() < eps && tb.abs() < eps {
            return (f, fp, g, gp);
        }
        k += 1;
        assert!(k < 4000, "series failed to terminate");
    }
}

/// (Ai, Ai', Bi, Bi') at x = n/8, exact rational evaluation. Any solution of
/// y'' = xy is y(0)·f + y'(0)·g, so the origin constants are the only
/// floating input.
pub fn airy_reference_eighths(n: i64) -> (f64, f64, f64, f64) {
    assert!(
        n != 0,
        "at x = 0 compare against the origin constants directly"
    );
    let x = BigRational::new(BigInt::from(n), BigInt::from(8));
    let (f, fp, g, gp) = fundamental_pair(&x);
    let (ai0, aip0) = (parse_decimal(AI0), parse_decimal(AIP0));
    let (bi0, bip0) = (parse_decimal(BI0), parse_decimal(BIP0));
    (
        to_f64(&(&ai0 * &f + &aip0 * &g)),
        to_f64(&(&ai0 * &fp + &aip0 * &gp)),
        to_f64(&(&bi0 * &f + &bip0 * &g)),
        to_f64(&(&bi0 * &fp + &bip0 * &gp)),
    )
}
