//! Exact multivariate polynomials and truncated power series in a step
//! parameter `h`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::algebra::{Rational, rat};
use crate::error::{Error, Result};

/// A polynomial in `nvars` variables `y0, y1, ...` with rational coefficients.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Poly {
        Poly::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Poly {
        Poly::constant(nvars, Rational::one())
    }

    /// The coordinate function `y_i`.
    pub fn var(nvars: usize, i: usize) -> Poly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::monomial(nvars, e, Rational::one())
    }

    pub fn monomial(nvars: usize, exponents: Vec<u32>, c: Rational) -> Poly {
        assert_eq!(exponents.len(), nvars, "exponent vector length");
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exponents, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    /// `∂/∂y_i`.
    pub fn deriv(&self, i: usize) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                p.add_term(e2, c * Rational::from_integer(e[i].into()));
            }
        }
        p
    }

    /// Mixed derivative `∂^order`, `order[i]` times along `y_i`.
    pub fn deriv_multi(&self, order: &[u32]) -> Poly {
        let mut p = self.clone();
        for (i, &k) in order.iter().enumerate() {
            for _ in 0..k {
                p = p.deriv(i);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(self.nvars), |acc, _| &acc * self)
    }

    pub fn eval(&self, y: &[Rational]) -> Result<Rational> {
        self.check_arity(y.len())?;
        let mut s = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in y.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            s += t;
        }
        Ok(s)
    }

    pub fn eval_f64(&self, y: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(y).fold(crate::algebra::to_f64(c), |acc, (&k, x)| acc * x.powi(k as i32))
            })
            .sum()
    }

    /// Substitutes a series for every variable.
    pub fn eval_series(&self, y: &[Series]) -> Result<Series> {
        self.check_arity(y.len())?;
        let order = y.first().map_or(0, Series::order);
        let mut s = Series::zero(order);
        for (e, c) in &self.terms {
            let mut t = Series::constant(order, c.clone());
            for (x, &k) in y.iter().zip(e) {
                for _ in 0..k {
                    t = &t * x;
                }
            }
            s = &s + &t;
        }
        Ok(s)
    }

    fn check_arity(&self, n: usize) -> Result<()> {
        if n != self.nvars {
            return Err(Error::Dimension(format!("{} coordinates for a polynomial in {} variables", n, self.nvars)));
        }
        Ok(())
    }

    /// A random polynomial of total degree ≤ `max_degree` with small
    /// rational coefficients; each monomial is kept with probability 1/2.
    pub fn random<R: Rng>(rng: &mut R, nvars: usize, max_degree: u32) -> Poly {
        let mut p = Poly::zero(nvars);
        for e in exponents_up_to(nvars, max_degree) {
            if rng.gen_bool(0.5) {
                p.add_term(e, random_rational(rng));
            }
        }
        p
    }
}

/// Parses `2 y0^2 y1 - 1/3 y1 + 4` in `nvars` variables; `*` between
/// factors is optional and `y` alone means `y0`.
pub fn parse_poly(text: &str, nvars: usize) -> Result<Poly> {
    let chunks = crate::mindex::signed_chunks(text);
    if chunks.is_empty() {
        return Err(Error::parse(0, "empty polynomial"));
    }
    let mut p = Poly::zero(nvars);
    for (neg, chunk, pos) in chunks {
        let bytes = chunk.as_bytes();
        let mut i = 0;
        let mut coeff = Rational::one();
        let mut exps = vec![0u32; nvars];
        let skip = |i: &mut usize| {
            while *i < bytes.len() && (bytes[*i].is_ascii_whitespace() || bytes[*i] == b'*') {
                *i += 1;
            }
        };
        let number = |i: &mut usize| -> Option<u32> {
            let start = *i;
            while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                *i += 1;
            }
            chunk[start..*i].parse().ok()
        };
        skip(&mut i);
        while i < bytes.len() {
            let at = pos + i;
            if bytes[i].is_ascii_digit() {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'/') {
                    i += 1;
                }
                coeff *= crate::algebra::parse_rational(&chunk[start..i]).ok_or_else(|| Error::parse(at, "bad coefficient"))?;
            } else if bytes[i] == b'y' {
                i += 1;
                let var = if i < bytes.len() && bytes[i].is_ascii_digit() { number(&mut i).unwrap_or(u32::MAX) } else { 0 };
                let var = var as usize;
                if var >= nvars {
                    return Err(Error::parse(at, format!("variable index out of range for {} variables", nvars)));
                }
                skip(&mut i);
                let mut e = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    skip(&mut i);
                    e = number(&mut i).ok_or_else(|| Error::parse(pos + i, "expected an exponent"))?;
                }
                exps[var] += e;
            } else {
                return Err(Error::parse(at, format!("unexpected '{}'", bytes[i] as char)));
            }
            skip(&mut i);
        }
        p.add_term(exps, if neg { -coeff } else { coeff });
    }
    Ok(p)
}

/// A nonzero rational `n/d` with `|n| ≤ 4`, `1 ≤ d ≤ 3`.
pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    let n = loop {
        let n = rng.gen_range(-4i64..=4);
        if n != 0 {
            break n;
        }
    };
    rat(n, rng.gen_range(1..=3))
}

fn exponents_up_to(nvars: usize, max_degree: u32) -> Vec<Vec<u32>> {
    fn rec(nvars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == nvars {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(nvars, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(nvars, max_degree, &mut Vec::new(), &mut out);
    out
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut p = self.clone();
        for (e, c) in &rhs.terms {
            p.add_term(e.clone(), -c.clone());
        }
        p
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                p.add_term(e1.iter().zip(e2).map(|(a, b)| a + b).collect(), c1 * c2);
            }
        }
        p
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| if k == 1 { format!("y{}", j) } else { format!("y{}^{}", j, k) })
                .collect();
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            let mag = c.abs();
            match (vars.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{}", mag)?,
                (false, true) => f.write_str(&vars.join(" "))?,
                (false, false) => write!(f, "{} {}", mag, vars.join(" "))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

/// A power series in `h` truncated after `h^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Rational>,
}

impl Series {
    pub fn zero(order: usize) -> Series {
        Series { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn constant(order: usize, c: Rational) -> Series {
        let mut s = Series::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c h^k`, or zero when `k` exceeds the order.
    pub fn monomial(order: usize, k: usize, c: Rational) -> Series {
        let mut s = Series::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn scale(&self, c: &Rational) -> Series {
        Series { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        Series { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        let n = self.coeffs.len();
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Series { coeffs: out }
    }
}

/// An `m`-vector of truncated series, stored by component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet {
    pub components: Vec<Series>,
}

impl Jet {
    /// The constant jet at `y`.
    pub fn constant(order: usize, y: &[Rational]) -> Jet {
        Jet { components: y.iter().map(|c| Series::constant(order, c.clone())).collect() }
    }

    pub fn order(&self) -> usize {
        self.components.first().map_or(0, Series::order)
    }

    /// The coefficient vector of `h^k`.
    pub fn coefficient(&self, k: usize) -> Vec<Rational> {
        self.components.iter().map(|s| s.coeffs[k].clone()).collect()
    }

    pub fn add(&self, other: &Jet) -> Jet {
        Jet { components: self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect() }
    }
}
