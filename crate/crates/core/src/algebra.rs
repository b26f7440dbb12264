//! Exact rational coefficients and finite formal linear combinations.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = BigRational;

/// Builds the rational `n / d`.
///
/// # Panics
/// Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer rational `n`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Converts a rational to the nearest `f64`.
pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Parses `"3"`, `"-3/4"` style rationals.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// A graded basis family: canonical, totally ordered, with a degree.
pub trait Basis: Clone + Ord + fmt::Debug {
    fn degree(&self) -> usize;
}

impl<L: Basis, R: Basis> Basis for (L, R) {
    fn degree(&self) -> usize {
        self.0.degree() + self.1.degree()
    }
}

/// Finite rational linear combination of basis elements, with no zero
/// coefficients stored. Iteration follows the order of the keys.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradedVector<B: Ord> {
    terms: BTreeMap<B, Rational>,
}

/// Linear combination of ordered pairs of basis elements.
pub type Tensor2<L, R> = GradedVector<(L, R)>;

impl<B: Ord> Default for GradedVector<B> {
    fn default() -> Self {
        GradedVector { terms: BTreeMap::new() }
    }
}

impl<B: Ord + Clone> GradedVector<B> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The basis element `b` with coefficient one.
    pub fn basis(b: B) -> Self {
        Self::term(b, Rational::one())
    }

    pub fn term(b: B, c: Rational) -> Self {
        let mut v = Self::zero();
        v.add_term(b, c);
        v
    }

    /// Adds `c·b`, dropping the entry if it cancels.
    pub fn add_term(&mut self, b: B, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Adds `c·other` in place.
    pub fn add_scaled(&mut self, other: &Self, c: &Rational) {
        if c.is_zero() {
            return;
        }
        for (b, x) in &other.terms {
            self.add_term(b.clone(), x * c);
        }
    }

    pub fn coeff(&self, b: &B) -> Rational {
        self.terms.get(b).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&B, &Rational)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &B> {
        self.terms.keys()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        GradedVector { terms: self.terms.iter().map(|(b, x)| (b.clone(), x * c)).collect() }
    }

    /// Sum of all coefficients.
    pub fn mass(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    /// Applies a linear map given on basis elements.
    pub fn map_linear<C: Ord + Clone>(&self, mut f: impl FnMut(&B) -> GradedVector<C>) -> GradedVector<C> {
        let mut out = GradedVector::zero();
        for (b, c) in &self.terms {
            out.add_scaled(&f(b), c);
        }
        out
    }

    /// Keeps the terms satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&B) -> bool) -> Self {
        GradedVector {
            terms: self.terms.iter().filter(|(b, _)| keep(b)).map(|(b, c)| (b.clone(), c.clone())).collect(),
        }
    }

    /// Multiplies two combinations through a bilinear rule on basis pairs.
    pub fn bilinear<C: Ord + Clone, D: Ord + Clone>(
        &self,
        other: &GradedVector<C>,
        mut f: impl FnMut(&B, &C) -> GradedVector<D>,
    ) -> GradedVector<D> {
        let mut out = GradedVector::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_scaled(&f(a, b), &(x * y));
            }
        }
        out
    }
}

impl<B: Basis> GradedVector<B> {
    /// The degree-`n` component.
    pub fn grade_project(&self, n: usize) -> Self {
        self.filter(|b| b.degree() == n)
    }

    /// Largest degree present, if any.
    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(Basis::degree).max()
    }
}

impl<B: Ord + Clone> FromIterator<(B, Rational)> for GradedVector<B> {
    fn from_iter<I: IntoIterator<Item = (B, Rational)>>(iter: I) -> Self {
        let mut v = Self::zero();
        for (b, c) in iter {
            v.add_term(b, c);
        }
        v
    }
}

/// Coefficientwise sum.
pub fn lincomb_add<B: Ord + Clone>(a: &GradedVector<B>, b: &GradedVector<B>) -> GradedVector<B> {
    let mut out = a.clone();
    out.add_scaled(b, &Rational::one());
    out
}

/// Leg of a tensor a linear map acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Applies a linear map, given by its values on basis elements, to one
/// leg of a tensor.
pub fn tensor_contract<B: Ord + Clone>(
    map: impl Fn(&B) -> GradedVector<B>,
    t: &Tensor2<B, B>,
    side: Side,
) -> Tensor2<B, B> {
    match side {
        Side::Left => map_left(t, map),
        Side::Right => map_right(t, map),
    }
}

/// Applies a bilinear rewrite to every pair of a tensor.
pub fn tensor_map<L, R, L2, R2>(
    t: &Tensor2<L, R>,
    mut f: impl FnMut(&L, &R) -> Tensor2<L2, R2>,
) -> Tensor2<L2, R2>
where
    L: Ord + Clone,
    R: Ord + Clone,
    L2: Ord + Clone,
    R2: Ord + Clone,
{
    let mut out = Tensor2::zero();
    for ((l, r), c) in t.iter() {
        out.add_scaled(&f(l, r), c);
    }
    out
}

/// `(id ⊗ map)` applied to a tensor.
pub fn map_right<L, R, R2>(t: &Tensor2<L, R>, mut map: impl FnMut(&R) -> GradedVector<R2>) -> Tensor2<L, R2>
where
    L: Ord + Clone,
    R: Ord + Clone,
    R2: Ord + Clone,
{
    tensor_map(t, |l, r| map(r).iter().map(|(b, c)| ((l.clone(), b.clone()), c.clone())).collect())
}

/// `(map ⊗ id)` applied to a tensor.
pub fn map_left<L, R, L2>(t: &Tensor2<L, R>, mut map: impl FnMut(&L) -> GradedVector<L2>) -> Tensor2<L2, R>
where
    L: Ord + Clone,
    R: Ord + Clone,
    L2: Ord + Clone,
{
    tensor_map(t, |l, r| map(l).iter().map(|(a, c)| ((a.clone(), r.clone()), c.clone())).collect())
}

/// Tensor product of two linear combinations.
pub fn tensor<L: Ord + Clone, R: Ord + Clone>(a: &GradedVector<L>, b: &GradedVector<R>) -> Tensor2<L, R> {
    a.bilinear(b, |l, r| Tensor2::basis((l.clone(), r.clone())))
}

impl<B: Ord + Clone> Add for GradedVector<B> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<B: Ord + Clone> AddAssign for GradedVector<B> {
    fn add_assign(&mut self, rhs: Self) {
        for (b, c) in rhs.terms {
            self.add_term(b, c);
        }
    }
}

impl<B: Ord + Clone> Neg for GradedVector<B> {
    type Output = Self;
    fn neg(self) -> Self {
        GradedVector { terms: self.terms.into_iter().map(|(b, c)| (b, -c)).collect() }
    }
}

impl<B: Ord + Clone> Sub for GradedVector<B> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<B: Ord + Clone> Mul<&Rational> for &GradedVector<B> {
    type Output = GradedVector<B>;
    fn mul(self, rhs: &Rational) -> GradedVector<B> {
        self.scale(rhs)
    }
}

/// Writes `c·term` pieces joined by `+`/`-`, or `0` when empty.
pub fn write_terms<'a, B: 'a>(
    f: &mut dyn fmt::Write,
    terms: impl Iterator<Item = (&'a B, &'a Rational)>,
    mut show: impl FnMut(&B) -> String,
) -> fmt::Result {
    let mut first = true;
    for (b, c) in terms {
        let magnitude = c.abs();
        if first {
            if c.is_negative() {
                f.write_str("-")?;
            }
        } else if c.is_negative() {
            f.write_str(" - ")?;
        } else {
            f.write_str(" + ")?;
        }
        if !magnitude.is_one() {
            write!(f, "{} ", magnitude)?;
        }
        f.write_str(&show(b))?;
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl<B: Ord + Clone + fmt::Display> fmt::Display for GradedVector<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.iter(), |b| b.to_string())
    }
}

impl<B: Ord + fmt::Debug> fmt::Debug for GradedVector<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(b, c)| (b, c.to_string()))).finish()
    }
}

/// Renders a tensor as `c a (x) b + ...`.
pub fn format_tensor<L: Ord + Clone + fmt::Display, R: Ord + Clone + fmt::Display>(t: &Tensor2<L, R>) -> String {
    let mut s = String::new();
    write_terms(&mut s, t.iter(), |(l, r)| format!("{} (x) {}", l, r)).expect("string write");
    s
}

/// One tensor term in machine-readable form.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TensorRecord {
    pub left: String,
    pub right: String,
    pub coeff: String,
}

/// Flattens a tensor into `{left, right, coeff}` records.
pub fn tensor_records<L: Ord + Clone + fmt::Display, R: Ord + Clone + fmt::Display>(
    t: &Tensor2<L, R>,
) -> Vec<TensorRecord> {
    t.iter()
        .map(|((l, r), c)| TensorRecord { left: l.to_string(), right: r.to_string(), coeff: c.to_string() })
        .collect()
}
