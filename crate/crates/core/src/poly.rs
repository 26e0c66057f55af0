//! Exact univariate polynomials over the integers and real-root analysis.
//!
//! Root counting uses Sturm chains built from sign-preserving pseudo
//! remainders, so no step leaves the integers. Isolating intervals are exact
//! rationals produced by bisection.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_with::{serde_as, DisplayFromStr};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Dense integer polynomial; `coeffs[k]` is the coefficient of `x^k`.
///
/// Trailing zeros are always trimmed, so the zero polynomial has no
/// coefficients at all.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// `(x + 1)^i`, whose coefficients are the binomials `C(i, k)`.
    pub fn binomial_power(i: usize) -> Self {
        let mut coeffs = Vec::with_capacity(i + 1);
        let mut c = BigInt::one();
        coeffs.push(c.clone());
        for k in 1..=i {
            c = c * BigInt::from(i - k + 1) / BigInt::from(k);
            coeffs.push(c.clone());
        }
        Self::new(coeffs)
    }

    /// `x - r`.
    pub fn linear_root(r: &BigInt) -> Self {
        Self::new(vec![-r, BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    pub fn eval_at(&self, v: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * v + Rational::from_integer(c.clone()))
    }

    pub fn eval_int(&self, v: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * v + c)
    }

    /// Sign of the value at `v`, computed on the numerator only.
    fn sign_at(&self, v: &Rational) -> Sign {
        // sum a_k p^k q^(d-k) has the sign of p(v) because q > 0.
        let (p, q) = (v.numer(), v.denom());
        let mut acc = BigInt::zero();
        let mut q_pow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * p + c * &q_pow;
            q_pow *= q;
        }
        acc.sign()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content, keeping the sign of the leading coefficient.
    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// Positive multiple of the remainder of `self` by `divisor`.
    ///
    /// Each reduction step multiplies by the leading coefficient of the
    /// divisor; when that would flip the overall sign the result is negated,
    /// so the output is `lambda * rem` with `lambda > 0`.
    fn pseudo_rem(&self, divisor: &Self) -> Self {
        let d_deg = divisor.degree().expect("pseudo remainder by zero polynomial");
        let lead = divisor.leading();
        let mut r = self.clone();
        let mut steps = 0u32;
        while let Some(r_deg) = r.degree() {
            if r_deg < d_deg {
                break;
            }
            let shift = Self::monomial(r.leading().clone(), r_deg - d_deg);
            r = &r.scale(lead) - &(&shift * divisor);
            steps += 1;
        }
        if lead.is_negative() && steps % 2 == 1 {
            -r
        } else {
            r
        }
    }

    /// Exact quotient `self / divisor` if it lies in `Z[x]`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let d_deg = divisor.degree()?;
        let lead = divisor.leading();
        let mut r = self.clone();
        let mut q = vec![BigInt::zero(); self.coeffs.len().saturating_sub(d_deg)];
        while let Some(r_deg) = r.degree() {
            if r_deg < d_deg {
                return None;
            }
            let (c, rem) = r.leading().div_rem(lead);
            if !rem.is_zero() {
                return None;
            }
            let shift = Self::monomial(c.clone(), r_deg - d_deg);
            r = &r - &(&shift * divisor);
            q[r_deg - d_deg] = c;
        }
        Some(Self::new(q))
    }

    /// Greatest common divisor in `Z[x]`: primitive with positive leading
    /// coefficient (times the gcd of contents). `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalized_sign();
        }
        if other.is_zero() {
            return self.normalized_sign();
        }
        let content = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part().normalized_sign().scale(&content)
    }

    fn normalized_sign(&self) -> Self {
        if !self.is_zero() && self.leading().is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// `self / gcd(self, self')`, primitive.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive_part();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g)
            .expect("gcd divides its argument")
            .primitive_part()
    }

    /// Splits off the factor `(x - r)^k` with maximal `k`; returns the
    /// quotient and `k` (possibly 0).
    pub fn divide_out_root(&self, r: &BigInt) -> Result<(Self, usize)> {
        if self.is_zero() {
            return Err(Error::argument("cannot divide a root out of the zero polynomial"));
        }
        let mut q = self.clone();
        let mut mult = 0;
        while q.eval_int(r).is_zero() {
            q = q.synthetic_div(r);
            mult += 1;
        }
        Ok((q, mult))
    }

    /// Quotient of division by `x - r`, assuming `r` is a root.
    fn synthetic_div(&self, r: &BigInt) -> Self {
        let d = self.coeffs.len() - 1;
        let mut out = vec![BigInt::zero(); d];
        let mut carry = BigInt::zero();
        for k in (1..=d).rev() {
            carry = &carry * r + &self.coeffs[k];
            out[k - 1] = carry.clone();
        }
        Self::new(out)
    }

    /// Coefficients as decimal strings, lowest degree first.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let body = match k {
                0 => c.abs().to_string(),
                1 => format!("{}*x", c.abs()),
                _ => format!("{}*x^{k}", c.abs()),
            };
            match (first, c.is_negative()) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.coeffs.iter().map(ToString::to_string))
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(deserializer)?;
        let coeffs = raw
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.last().is_some_and(Zero::is_zero) {
            return Err(serde::de::Error::custom("polynomial has trailing zero coefficients"));
        }
        Ok(IntPolynomial { coeffs })
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for IntPolynomial {
            type Output = IntPolynomial;

            fn $method(self, rhs: IntPolynomial) -> IntPolynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for IntPolynomial {
    type Output = IntPolynomial;

    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

/// Interval endpoint for root counting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    NegInfinity,
    Finite(Rational),
    PosInfinity,
}

impl Bound {
    pub fn int(v: i64) -> Self {
        Bound::Finite(Rational::from_integer(BigInt::from(v)))
    }

    fn rank(&self) -> u8 {
        match self {
            Bound::NegInfinity => 0,
            Bound::Finite(_) => 1,
            Bound::PosInfinity => 2,
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Bound::Finite(a), Bound::Finite(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

/// Sturm chain of the squarefree part of a nonconstant polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<IntPolynomial>,
}

impl SturmChain {
    pub fn new(p: &IntPolynomial) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::argument("Sturm chain of the zero polynomial"));
        }
        let base = p.squarefree_part();
        let mut chain = vec![base.clone()];
        if base.degree() > Some(0) {
            chain.push(base.derivative().primitive_part());
            loop {
                let k = chain.len();
                let r = -chain[k - 2].pseudo_rem(&chain[k - 1]);
                if r.is_zero() {
                    break;
                }
                let c = r.content();
                chain.push(IntPolynomial::new(r.coeffs.into_iter().map(|a| a / &c).collect()));
            }
        }
        Ok(SturmChain { chain })
    }

    fn sign_at(p: &IntPolynomial, at: &Bound) -> Sign {
        match at {
            Bound::Finite(v) => p.sign_at(v),
            Bound::PosInfinity => p.leading().sign(),
            Bound::NegInfinity => {
                let s = p.leading().sign();
                if p.degree().unwrap_or(0) % 2 == 1 {
                    -s
                } else {
                    s
                }
            }
        }
    }

    /// Sign variations of the chain at `at`, zeros skipped.
    pub fn variations_at(&self, at: &Bound) -> usize {
        let mut last = Sign::NoSign;
        let mut count = 0;
        for p in &self.chain {
            let s = Self::sign_at(p, at);
            if s == Sign::NoSign {
                continue;
            }
            if last != Sign::NoSign && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Distinct real roots in `(lo, hi]`.
    pub fn count(&self, lo: &Bound, hi: &Bound) -> Result<usize> {
        if lo >= hi {
            return Err(Error::argument("root-count interval needs lo < hi"));
        }
        Ok(self.variations_at(lo) - self.variations_at(hi))
    }
}

/// Number of distinct real roots of `p` in `(lo, hi]`.
pub fn sturm_root_count(p: &IntPolynomial, lo: &Bound, hi: &Bound) -> Result<usize> {
    if lo >= hi {
        return Err(Error::argument("root-count interval needs lo < hi"));
    }
    SturmChain::new(p)?.count(lo, hi)
}

/// Real-root profile of a polynomial.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootAnalysis {
    #[serde_as(as = "DisplayFromStr")]
    pub degree: usize,
    #[serde_as(as = "DisplayFromStr")]
    pub real_root_count_with_multiplicity: usize,
    pub is_real_rooted: bool,
    #[serde_as(as = "DisplayFromStr")]
    pub multiplicity_at_minus_one: usize,
    /// A real root lies in `[-1, 0)`.
    pub has_root_in_unit_negative_interval: bool,
    /// Half-open `(lo, hi]` intervals, one per distinct real root, ascending.
    #[serde_as(as = "Vec<(DisplayFromStr, DisplayFromStr)>")]
    pub isolating_intervals: Vec<(Rational, Rational)>,
}

/// Computes every [`RootAnalysis`] field exactly.
pub fn analyze_roots(p: &IntPolynomial) -> Result<RootAnalysis> {
    let degree = p
        .degree()
        .ok_or_else(|| Error::argument("cannot analyze roots of the zero polynomial"))?;

    // A root of multiplicity k survives in the first k members of
    // p, gcd(p, p'), gcd of that with its derivative, ...
    let mut real_count = 0;
    let mut layer = p.clone();
    while layer.degree() > Some(0) {
        real_count += sturm_root_count(&layer, &Bound::NegInfinity, &Bound::PosInfinity)?;
        layer = layer.gcd(&layer.derivative());
    }

    let minus_one = -BigInt::one();
    let (_, multiplicity_at_minus_one) = p.divide_out_root(&minus_one)?;

    let zero_is_root = p.coeff(0).is_zero();
    let has_root_in_unit_negative_interval = multiplicity_at_minus_one > 0
        || sturm_root_count(p, &Bound::int(-1), &Bound::int(0))? > usize::from(zero_is_root);

    Ok(RootAnalysis {
        degree,
        real_root_count_with_multiplicity: real_count,
        is_real_rooted: real_count == degree,
        multiplicity_at_minus_one,
        has_root_in_unit_negative_interval,
        isolating_intervals: isolate_real_roots(p)?,
    })
}

/// Disjoint half-open rational intervals `(lo, hi]`, each holding exactly one
/// distinct real root of `p`, in ascending order.
pub fn isolate_real_roots(p: &IntPolynomial) -> Result<Vec<(Rational, Rational)>> {
    let chain = SturmChain::new(p)?;
    let base = &chain.chain[0];
    if base.degree() == Some(0) {
        return Ok(Vec::new());
    }
    // Cauchy: every root satisfies |z| < 1 + max |a_k / a_d| <= 1 + max |a_k|.
    let d = base.degree().unwrap_or(0);
    let bound = base.coeffs[..d]
        .iter()
        .map(Signed::abs)
        .max()
        .unwrap_or_default()
        + BigInt::one();
    let bound = Rational::from_integer(bound);

    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    let two = Rational::from_integer(BigInt::from(2));
    while let Some((lo, hi)) = stack.pop() {
        let count = chain.count(&Bound::Finite(lo.clone()), &Bound::Finite(hi.clone()))?;
        match count {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / &two;
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort();
    Ok(out)
}
