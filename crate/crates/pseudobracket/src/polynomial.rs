//! Exact sparse polynomial arithmetic for the bracket state sum.
//!
//! Two rings live here: [`LaurentPoly`] is `Z[A, A^-1]`, the coefficient ring
//! of the classical Kauffman bracket, and [`PseudoPoly`] is the polynomial
//! ring `Z[A, A^-1][V]` that the pseudo bracket takes values in. Coefficients
//! are arbitrary-precision integers: state sums add up `2^n` monomial
//! products and intermediate coefficients routinely exceed machine words.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Failure modes of [`LaurentPoly::exact_div`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DivisionError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("not divisible in Z[A, A^-1]")]
    NotDivisible,
}

/// A Laurent polynomial in `A` with integer coefficients.
///
/// Terms are stored sparsely as exponent -> coefficient and the map never
/// holds a zero coefficient, so structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `c * A^exp`.
    pub fn monomial(exp: i64, coeff: impl Into<BigInt>) -> Self {
        let mut terms = BTreeMap::new();
        let c = coeff.into();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    /// `A^exp`.
    pub fn a(exp: i64) -> Self {
        Self::monomial(exp, 1)
    }

    /// The loop value `d = -A^2 - A^-2` picked up by each closed curve.
    pub fn loop_value() -> Self {
        Self::monomial(2, -1) + Self::monomial(-2, -1)
    }

    /// `(-A^-3)^w`, the writhe normalization monomial; `w` may be negative.
    pub fn writhe_monomial(w: i64) -> Self {
        let sign = if w % 2 == 0 { 1 } else { -1 };
        Self::monomial(-3 * w, sign)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Iterate terms as `(exponent, coefficient)` in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    fn insert_add(&mut self, exp: i64, coeff: &BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// Multiply by `A^k`.
    pub fn shifted(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Substitute `A -> A^-1`.
    pub fn mirror_a(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division in `Z[A, A^-1]`: returns `r` with `q * r = self`, or
    /// `NotDivisible`. Monomials are units of the Laurent ring, so only the
    /// integer content and the polynomial part of `q` matter.
    pub fn exact_div(&self, q: &LaurentPoly) -> Result<LaurentPoly, DivisionError> {
        if q.is_zero() {
            return Err(DivisionError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        let p_min = *self.terms.keys().next().expect("nonzero");
        let q_min = *q.terms.keys().next().expect("nonzero");
        let q_deg = *q.terms.keys().next_back().expect("nonzero") - q_min;
        let q_lead = q.terms.values().next_back().expect("nonzero").clone();

        // Work with exponents shifted to start at zero; long division from the top.
        let mut rem: BTreeMap<i64, BigInt> = self
            .terms
            .iter()
            .map(|(e, c)| (e - p_min, c.clone()))
            .collect();
        let mut quot = LaurentPoly::zero();
        while let Some((&r_deg, r_lead)) = rem.iter().next_back() {
            if r_deg < q_deg {
                return Err(DivisionError::NotDivisible);
            }
            let c = r_lead / &q_lead;
            if (&c * &q_lead) != *r_lead {
                return Err(DivisionError::NotDivisible);
            }
            let shift = r_deg - q_deg;
            for (e, qc) in &q.terms {
                let exp = e - q_min + shift;
                let entry = rem.entry(exp).or_insert_with(BigInt::zero);
                *entry -= &c * qc;
                if entry.is_zero() {
                    rem.remove(&exp);
                }
            }
            quot.insert_add(shift, &c);
        }
        Ok(quot.shifted(p_min - q_min))
    }

    /// If `self = s * A^k * other` for a sign `s` and integer `k`, return `(s, k)`.
    pub fn unit_monomial_quotient(&self, other: &LaurentPoly) -> Option<(i8, i64)> {
        if self.is_zero() || other.is_zero() {
            return if self.is_zero() && other.is_zero() {
                Some((1, 0))
            } else {
                None
            };
        }
        let k = self.terms.keys().next()? - other.terms.keys().next()?;
        for sign in [1i8, -1] {
            let mut candidate = other.shifted(k);
            if sign < 0 {
                candidate = -&candidate;
            }
            if candidate == *self {
                return Some((sign, k));
            }
        }
        None
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_add(*e, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            let neg = -c;
            out.insert_add(*e, &neg);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let prod = c1 * c2;
                out.insert_add(e1 + e2, &prod);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_value_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}
forward_value_ops!(LaurentPoly);

/// A polynomial in `V` with [`LaurentPoly`] coefficients.
///
/// The bracket of a pseudo diagram lives here: each pseudo crossing
/// contributes a factor of `V`-degree at most one, so the `V`-degree of a
/// bracket never exceeds the number of pseudo crossings. No stored
/// coefficient is the zero polynomial.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PseudoPoly {
    coeffs: BTreeMap<u32, LaurentPoly>,
}

impl PseudoPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_laurent(LaurentPoly::one())
    }

    pub fn from_laurent(p: LaurentPoly) -> Self {
        let mut coeffs = BTreeMap::new();
        if !p.is_zero() {
            coeffs.insert(0, p);
        }
        PseudoPoly { coeffs }
    }

    /// The variable `V`.
    pub fn v() -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(1, LaurentPoly::one());
        PseudoPoly { coeffs }
    }

    /// The horizontal pseudo-smoothing weight `H = 1 - V*d`.
    pub fn h() -> Self {
        Self::one() - Self::v().scale(&LaurentPoly::loop_value())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    /// Iterate `(V-degree, coefficient)` in ascending degree order.
    pub fn coeffs(&self) -> impl Iterator<Item = (u32, &LaurentPoly)> {
        self.coeffs.iter().map(|(d, c)| (*d, c))
    }

    pub fn v_coeff(&self, degree: u32) -> LaurentPoly {
        self.coeffs.get(&degree).cloned().unwrap_or_default()
    }

    pub fn v_degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Everything of positive `V`-degree; zero iff `self` is `V`-free.
    pub fn v_part(&self) -> PseudoPoly {
        PseudoPoly {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(d, _)| **d > 0)
                .map(|(d, c)| (*d, c.clone()))
                .collect(),
        }
    }

    pub fn is_v_free(&self) -> bool {
        self.v_part().is_zero()
    }

    /// Multiply by a Laurent polynomial scalar.
    pub fn scale(&self, s: &LaurentPoly) -> PseudoPoly {
        let mut coeffs = BTreeMap::new();
        for (d, c) in &self.coeffs {
            let prod = c * s;
            if !prod.is_zero() {
                coeffs.insert(*d, prod);
            }
        }
        PseudoPoly { coeffs }
    }

    /// Substitute `A -> A^-1` in every coefficient.
    pub fn mirror_a(&self) -> PseudoPoly {
        PseudoPoly {
            coeffs: self.coeffs.iter().map(|(d, c)| (*d, c.mirror_a())).collect(),
        }
    }

    pub fn pow(&self, n: usize) -> PseudoPoly {
        let mut acc = PseudoPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    fn insert_add(&mut self, degree: u32, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(degree).or_default();
        *entry = &*entry + c;
        if entry.is_zero() {
            self.coeffs.remove(&degree);
        }
    }

    /// Render as a JSON object `{v_degree: [[a_exp, coeff_string], ...]}` with
    /// coefficients as decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (d, c) in &self.coeffs {
            let terms: Vec<serde_json::Value> = c
                .terms()
                .map(|(e, coeff)| serde_json::json!([e, coeff.to_string()]))
                .collect();
            map.insert(d.to_string(), serde_json::Value::Array(terms));
        }
        serde_json::Value::Object(map)
    }
}

impl From<LaurentPoly> for PseudoPoly {
    fn from(p: LaurentPoly) -> Self {
        Self::from_laurent(p)
    }
}

impl Add for &PseudoPoly {
    type Output = PseudoPoly;
    fn add(self, rhs: &PseudoPoly) -> PseudoPoly {
        let mut out = self.clone();
        for (d, c) in &rhs.coeffs {
            out.insert_add(*d, c);
        }
        out
    }
}

impl Sub for &PseudoPoly {
    type Output = PseudoPoly;
    fn sub(self, rhs: &PseudoPoly) -> PseudoPoly {
        let mut out = self.clone();
        for (d, c) in &rhs.coeffs {
            let neg = -c;
            out.insert_add(*d, &neg);
        }
        out
    }
}

impl Mul for &PseudoPoly {
    type Output = PseudoPoly;
    fn mul(self, rhs: &PseudoPoly) -> PseudoPoly {
        let mut out = PseudoPoly::zero();
        for (d1, c1) in &self.coeffs {
            for (d2, c2) in &rhs.coeffs {
                let prod = c1 * c2;
                out.insert_add(d1 + d2, &prod);
            }
        }
        out
    }
}

impl Neg for &PseudoPoly {
    type Output = PseudoPoly;
    fn neg(self) -> PseudoPoly {
        PseudoPoly {
            coeffs: self.coeffs.iter().map(|(d, c)| (*d, -c)).collect(),
        }
    }
}

forward_value_ops!(PseudoPoly);

// Canonical text rendering: terms sorted by (V-degree ascending, A-exponent
// ascending), e.g. `A^-6 + A^-8*V - A^4*V`. Golden tests depend on this
// exact format.

fn push_term(out: &mut String, first: bool, coeff: &BigInt, a_exp: i64, v_deg: u32) {
    let negative = coeff.is_negative();
    if first {
        if negative {
            out.push('-');
        }
    } else if negative {
        out.push_str(" - ");
    } else {
        out.push_str(" + ");
    }
    let mag = coeff.magnitude();
    let mut pieces: Vec<String> = Vec::new();
    if !mag.is_one() || (a_exp == 0 && v_deg == 0) {
        pieces.push(mag.to_string());
    }
    if a_exp == 1 {
        pieces.push("A".to_string());
    } else if a_exp != 0 {
        pieces.push(format!("A^{a_exp}"));
    }
    if v_deg == 1 {
        pieces.push("V".to_string());
    } else if v_deg != 0 {
        pieces.push(format!("V^{v_deg}"));
    }
    out.push_str(&pieces.join("*"));
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        PseudoPoly::from_laurent(self.clone()).fmt(f)
    }
}

impl fmt::Display for PseudoPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        let mut first = true;
        for (v_deg, c) in &self.coeffs {
            for (a_exp, coeff) in c.terms() {
                push_term(&mut out, first, coeff, a_exp, *v_deg);
                first = false;
            }
        }
        write!(f, "{out}")
    }
}
