//! 128-bit binary floating point evaluation of `f(s) = sum_v n_v v^s`.

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive};

pub const PRECISION: usize = 128;
const RM: RoundingMode = RoundingMode::ToEven;

pub struct Ctx {
    cc: Consts,
}

impl Ctx {
    pub fn new() -> Self {
        Ctx { cc: Consts::new().expect("astro-float constant cache") }
    }

    pub fn from_big(&mut self, v: &BigUint) -> BigFloat {
        match v.to_u64() {
            Some(x) => BigFloat::from_u64(x, PRECISION),
            None => BigFloat::parse(&v.to_string(), Radix::Dec, PRECISION, RM, &mut self.cc),
        }
    }

    pub fn from_bigint(&mut self, v: &BigInt) -> BigFloat {
        let m = self.from_big(v.magnitude());
        if v.is_negative() {
            m.neg()
        } else {
            m
        }
    }

    pub fn ln(&mut self, x: &BigFloat) -> BigFloat {
        x.ln(PRECISION, RM, &mut self.cc)
    }

    pub fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(PRECISION, RM, &mut self.cc)
    }

    pub fn to_f64(&mut self, x: &BigFloat) -> f64 {
        to_f64(x)
    }
}

/// Nearest-below `f64` of `x`, read from the top mantissa word.
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.is_inf() {
        return if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    let Some((words, _, sign, exp, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    // value = 0.m * 2^exp with the top word holding the leading bits
    let top = *words.last().unwrap() as f64 / 2f64.powi(64);
    let mut v = top;
    let mut e = exp as i64;
    // powi on a huge exponent would overflow its i32 argument
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
        if v.is_infinite() {
            break;
        }
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
        if v == 0.0 {
            break;
        }
    }
    v *= 2f64.powi(e as i32);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

pub fn mul(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.mul(b, PRECISION, RM)
}

pub fn add(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.add(b, PRECISION, RM)
}

pub fn sub(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.sub(b, PRECISION, RM)
}

pub fn div(a: &BigFloat, b: &BigFloat) -> BigFloat {
    a.div(b, PRECISION, RM)
}

pub fn from_f64(v: f64) -> BigFloat {
    BigFloat::from_f64(v, PRECISION)
}

/// Below this magnitude the `f64` estimate is redone at full precision.
const RECHECK_BELOW: f64 = 1e-9;

/// Evaluates `f(s) / sum_v |n_v| v^s`, a value in `[-1, 1]` with the sign of
/// `f(s)`. Powers are taken relative to the largest value so nothing
/// overflows for large `s`.
///
/// A double-precision pass comes first. Its error is a small multiple of
/// machine epsilon relative to the denominator, so any estimate larger
/// than `RECHECK_BELOW` already has the right sign and size; smaller ones
/// are recomputed with 128-bit arithmetic.
pub struct RelativeEvaluator {
    ctx: Ctx,
    // (ln v - ln v_max, n_v)
    terms: Vec<(BigFloat, BigFloat)>,
    abs_terms: Vec<BigFloat>,
    ln_values: Vec<BigFloat>,
    fast: Vec<(f64, f64)>,
}

impl RelativeEvaluator {
    pub fn new(terms: &[(BigUint, BigInt)]) -> Self {
        let mut ctx = Ctx::new();
        let ln_values: Vec<BigFloat> = terms
            .iter()
            .map(|(v, _)| {
                let x = ctx.from_big(v);
                ctx.ln(&x)
            })
            .collect();
        let ln_max = ln_values
            .iter()
            .cloned()
            .reduce(|a, b| if a.cmp(&b).unwrap_or(0) >= 0 { a } else { b })
            .unwrap_or_else(|| from_f64(0.0));
        let mut shifted = Vec::with_capacity(terms.len());
        let mut abs_terms = Vec::with_capacity(terms.len());
        for ((_, n), l) in terms.iter().zip(&ln_values) {
            let nf = ctx.from_bigint(n);
            abs_terms.push(nf.abs());
            shifted.push((sub(l, &ln_max), nf));
        }
        let fast = shifted.iter().map(|(dl, n)| (to_f64(dl), to_f64(n))).collect();
        RelativeEvaluator { ctx, terms: shifted, abs_terms, ln_values, fast }
    }

    pub fn relative(&mut self, s: f64) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for &(dl, n) in &self.fast {
            let w = (dl * s).exp();
            num += n * w;
            den += n.abs() * w;
        }
        if den.is_finite() && den > 0.0 {
            let h = num / den;
            if h.abs() > RECHECK_BELOW {
                return h;
            }
        }
        self.relative_full(s)
    }

    /// The 128-bit evaluation alone.
    pub fn relative_full(&mut self, s: f64) -> f64 {
        let s = from_f64(s);
        let mut num = from_f64(0.0);
        let mut den = from_f64(0.0);
        for ((dl, n), a) in self.terms.iter().zip(&self.abs_terms) {
            let w = self.ctx.exp(&mul(dl, &s));
            num = add(&num, &mul(n, &w));
            den = add(&den, &mul(a, &w));
        }
        if den.is_zero() {
            return 0.0;
        }
        let r = div(&num, &den);
        self.ctx.to_f64(&r)
    }

    /// Sign of `f'(1) = sum_v n_v v ln v`.
    pub fn slope_sign_at_one(&mut self, terms: &[(BigUint, BigInt)]) -> i32 {
        let mut acc = from_f64(0.0);
        for ((v, n), l) in terms.iter().zip(&self.ln_values) {
            let c = self.ctx.from_bigint(&(BigInt::from(v.clone()) * n));
            acc = add(&acc, &mul(&c, l));
        }
        if acc.is_zero() {
            0
        } else if acc.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn ctx(&mut self) -> &mut Ctx {
        &mut self.ctx
    }
}
