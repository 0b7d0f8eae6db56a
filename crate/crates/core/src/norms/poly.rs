//! Dense univariate polynomials over the rationals with the pieces needed to
//! decide the sign of an integer polynomial on a half-line: square-free
//! decomposition, Sturm sequences and bisection-based root isolation.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients in ascending degree order; the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        self.eval(x).cmp(&BigRational::zero())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRational::zero();
        Self::new(
            (0..len)
                .map(|i| {
                    self.coeffs.get(i).unwrap_or(&zero) - other.coeffs.get(i).unwrap_or(&zero)
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Poly::new(vec![BigRational::one()]);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.lead().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(l) => {
                let l = l.clone();
                Poly { coeffs: self.coeffs.iter().map(|c| c / &l).collect() }
            }
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Integer coefficients with content 1 and positive leading term.
    pub fn primitive_ints(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let flip = ints.last().unwrap().is_negative();
        for c in &mut ints {
            *c = &*c / &content;
            if flip {
                *c = -&*c;
            }
        }
        ints
    }

    /// `1 + max |c_i / c_n|`: every complex root has smaller modulus.
    pub fn root_bound(&self) -> BigRational {
        let lead = self.lead().expect("nonzero polynomial").abs();
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(BigRational::zero);
        m + BigRational::one()
    }
}

/// Yun's square-free decomposition: `p = const * prod f_i^i` with the `f_i`
/// monic, square-free and pairwise coprime. Constant factors are omitted.
pub fn squarefree_decomposition(p: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    if p.is_constant() {
        return out;
    }
    let dp = p.derivative();
    let a0 = Poly::gcd(p, &dp);
    let mut b = p.div_rem(&a0).0;
    let c = dp.div_rem(&a0).0;
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while !b.is_constant() {
        let a = Poly::gcd(&b, &d);
        b = b.div_rem(&a).0;
        let c = d.div_rem(&a).0;
        d = c.sub(&b.derivative());
        if !a.is_constant() {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

pub struct Sturm {
    seq: Vec<Poly>,
}

impl Sturm {
    pub fn new(p: &Poly) -> Self {
        let mut seq = vec![p.clone(), p.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            seq.push(r.neg());
        }
        seq.pop();
        Sturm { seq }
    }

    pub fn variations(&self, x: &BigRational) -> usize {
        let mut count = 0;
        let mut last = Ordering::Equal;
        for p in &self.seq {
            let s = p.sign_at(x);
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct roots in `(a, b]`.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// Disjoint half-open intervals `(lo, hi]`, each holding exactly one root of
/// the square-free `p` inside `(lo, hi]`, in increasing order.
pub fn isolate_roots(p: &Poly, lo: &BigRational, hi: &BigRational) -> Vec<(BigRational, BigRational)> {
    let sturm = Sturm::new(p);
    let mut out = Vec::new();
    let mut stack = vec![(lo.clone(), hi.clone())];
    let two = BigRational::from_integer(BigInt::from(2));
    while let Some((a, b)) = stack.pop() {
        match sturm.count(&a, &b) {
            0 => {}
            1 => out.push((a, b)),
            _ => {
                let mid = (&a + &b) / &two;
                stack.push((mid.clone(), b));
                stack.push((a, mid));
            }
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// Shrinks an isolating interval of a square-free polynomial until it is
/// narrower than `width`. An exactly hit root collapses it to a point.
pub fn refine_root(
    p: &Poly,
    (mut a, mut b): (BigRational, BigRational),
    width: &BigRational,
) -> (BigRational, BigRational) {
    if p.sign_at(&b) == Ordering::Equal {
        return (b.clone(), b);
    }
    let sb = p.sign_at(&b);
    let two = BigRational::from_integer(BigInt::from(2));
    while &b - &a > *width {
        let mid = (&a + &b) / &two;
        match p.sign_at(&mid) {
            Ordering::Equal => return (mid.clone(), mid),
            s if s == sb => b = mid,
            _ => a = mid,
        }
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> Poly {
        Poly::from_ints(&c.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>())
    }

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn division_round_trips() {
        let a = ip(&[16, 16, -4, -4, 1]);
        let b = ip(&[-4, -2, 1]);
        let (q, rem) = a.div_rem(&b);
        assert!(rem.is_zero());
        assert_eq!(q, b);
    }

    #[test]
    fn squarefree_finds_the_double_factor() {
        // (x^2 - 2x - 4)^2
        let p = ip(&[16, 16, -4, -4, 1]);
        let sf = squarefree_decomposition(&p);
        assert_eq!(sf.len(), 1);
        assert_eq!(sf[0].1, 2);
        assert_eq!(sf[0].0.primitive_ints(), vec![BigInt::from(-4), BigInt::from(-2), BigInt::from(1)]);
    }

    #[test]
    fn squarefree_mixed_multiplicities() {
        // (x-1)(x-2)^2(x-3)^3
        let p = ip(&[-1, 1])
            .mul(&ip(&[-2, 1]).pow(2))
            .mul(&ip(&[-3, 1]).pow(3));
        let sf = squarefree_decomposition(&p);
        let mults: Vec<_> = sf.iter().map(|(_, m)| *m).collect();
        assert_eq!(mults, vec![1, 2, 3]);
        assert_eq!(sf[1].0, ip(&[-2, 1]));
    }

    #[test]
    fn sturm_counts_and_isolation() {
        // (x-1)(x-2)(x-5)
        let p = ip(&[-10, 17, -8, 1]);
        let s = Sturm::new(&p);
        assert_eq!(s.count(&r(0), &r(10)), 3);
        assert_eq!(s.count(&r(1), &r(10)), 2);
        let roots = isolate_roots(&p, &r(0), &p.root_bound());
        assert_eq!(roots.len(), 3);
        let width = BigRational::new(BigInt::from(1), BigInt::from(1_000_000));
        let (a, b) = refine_root(&p, roots[2].clone(), &width);
        assert!(a <= r(5) && r(5) <= b);
    }

    #[test]
    fn refine_brackets_irrational_root() {
        let f = ip(&[-4, -2, 1]); // root 1 + sqrt 5
        let roots = isolate_roots(&f, &r(2), &f.root_bound());
        assert_eq!(roots.len(), 1);
        let width = BigRational::new(BigInt::from(1), BigInt::from(1u64 << 40));
        let (a, b) = refine_root(&f, roots[0].clone(), &width);
        let root = 1.0 + 5f64.sqrt();
        let af: f64 = num_traits::ToPrimitive::to_f64(&a).unwrap();
        let bf: f64 = num_traits::ToPrimitive::to_f64(&b).unwrap();
        assert!(af <= root + 1e-12 && root - 1e-12 <= bf);
        assert!(&b - &a <= width);
    }
}
