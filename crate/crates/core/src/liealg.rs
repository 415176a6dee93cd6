//! Structure constants, grading, and pairing data for `sl(n, R)` with the
//! |1|-graded parabolic cut by one crossed node `p`.
//!
//! The basis is the off-diagonal matrix units `E[i,j]` together with the
//! simple coroots `H[i] = E_ii - E_{i+1,i+1}`. The block cut assigns degree
//! -1 to the lower-left block (rows > p, columns <= p), +1 to the upper-right
//! block, and 0 to everything else; both nilradicals are abelian.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;

use crate::{rint, Error, Rat, Result};

/// Basis element of `sl(n, R)`: an off-diagonal matrix unit or a simple
/// coroot. Indices are 1-based. The derived order (units by row then column,
/// then coroots) is the canonical letter order used everywhere downstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisElement {
    E(usize, usize),
    H(usize),
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisElement::E(i, j) => write!(f, "E[{i},{j}]"),
            BasisElement::H(i) => write!(f, "H[{i}]"),
        }
    }
}

/// Exact linear combination of basis elements, i.e. an element of the Lie
/// algebra expanded in the chosen basis.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LieElement(BTreeMap<BasisElement, Rat>);

impl LieElement {
    pub fn zero() -> Self {
        LieElement(BTreeMap::new())
    }

    pub fn basis(b: BasisElement) -> Self {
        let mut m = BTreeMap::new();
        m.insert(b, rint(1));
        LieElement(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_scaled(&mut self, b: BasisElement, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.0.entry(b).or_insert_with(Rat::zero);
        *entry += c.clone();
        if entry.is_zero() {
            self.0.remove(&b);
        }
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        for (b, c) in &other.0 {
            out.add_scaled(*b, c);
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> LieElement {
        if c.is_zero() {
            return LieElement::zero();
        }
        LieElement(self.0.iter().map(|(b, x)| (*b, x * c)).collect())
    }

    pub fn coeff(&self, b: &BasisElement) -> Rat {
        self.0.get(b).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisElement, &Rat)> {
        self.0.iter()
    }
}

/// The |1|-graded parabolic data: matrix size `n` and block cut `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Parabolic {
    n: usize,
    p: usize,
}

impl Parabolic {
    /// Validates `n >= 2` and `1 <= p <= n-1`; anything else is outside the
    /// supported |1|-graded type-A family.
    pub fn new(n: usize, p: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("matrix size n={n} must be at least 2")));
        }
        if p == 0 || p >= n {
            return Err(Error::invalid(format!(
                "block cut p={p} must satisfy 1 <= p <= {}",
                n - 1
            )));
        }
        Ok(Parabolic { n, p })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.n - self.p
    }

    /// Grading degree of a basis element under the block cut.
    pub fn degree(&self, b: &BasisElement) -> i32 {
        match *b {
            BasisElement::E(i, j) => {
                if i > self.p && j <= self.p {
                    -1
                } else if i <= self.p && j > self.p {
                    1
                } else {
                    0
                }
            }
            BasisElement::H(_) => 0,
        }
    }

    pub(crate) fn check_element(&self, b: &BasisElement) -> Result<()> {
        match *b {
            BasisElement::E(i, j) => {
                if i == 0 || j == 0 || i > self.n || j > self.n || i == j {
                    return Err(Error::invalid(format!("{b} out of range for n={}", self.n)));
                }
            }
            BasisElement::H(i) => {
                if i == 0 || i >= self.n {
                    return Err(Error::invalid(format!("{b} out of range for n={}", self.n)));
                }
            }
        }
        Ok(())
    }

    /// Full basis: matrix units by (row, column), then coroots.
    pub fn basis(&self) -> Vec<BasisElement> {
        let mut out = Vec::with_capacity(self.n * self.n - 1);
        for i in 1..=self.n {
            for j in 1..=self.n {
                if i != j {
                    out.push(BasisElement::E(i, j));
                }
            }
        }
        for i in 1..self.n {
            out.push(BasisElement::H(i));
        }
        out
    }

    /// Degree -1 letters in canonical (row, column) order.
    pub fn negative_letters(&self) -> Vec<BasisElement> {
        let mut out = Vec::with_capacity(self.p * self.q());
        for i in (self.p + 1)..=self.n {
            for j in 1..=self.p {
                out.push(BasisElement::E(i, j));
            }
        }
        out
    }

    /// Degree +1 generators in canonical (row, column) order.
    pub fn positive_letters(&self) -> Vec<BasisElement> {
        let mut out = Vec::with_capacity(self.p * self.q());
        for i in 1..=self.p {
            for j in (self.p + 1)..=self.n {
                out.push(BasisElement::E(i, j));
            }
        }
        out
    }

    /// Degree-0 part of the basis.
    pub fn levi_basis(&self) -> Vec<BasisElement> {
        self.basis()
            .into_iter()
            .filter(|b| self.degree(b) == 0)
            .collect()
    }

    /// Basis of the parabolic (degrees 0 and +1).
    pub fn parabolic_basis(&self) -> Vec<BasisElement> {
        self.basis()
            .into_iter()
            .filter(|b| self.degree(b) >= 0)
            .collect()
    }

    /// Simple raising operators of the semisimple part of the Levi factor:
    /// `E[i,i+1]` for i != p.
    pub fn raising_ops(&self) -> Vec<BasisElement> {
        (1..self.n)
            .filter(|&i| i != self.p)
            .map(|i| BasisElement::E(i, i + 1))
            .collect()
    }

    /// Simple lowering operators of the semisimple part: `E[i+1,i]`, i != p.
    pub fn lowering_ops(&self) -> Vec<BasisElement> {
        (1..self.n)
            .filter(|&i| i != self.p)
            .map(|i| BasisElement::E(i + 1, i))
            .collect()
    }

    /// Exact bracket of two basis elements, expanded in the basis.
    pub fn bracket(&self, a: &BasisElement, b: &BasisElement) -> Result<LieElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        let ua = to_units(a);
        let ub = to_units(b);
        let mut units: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
        for (ai, aj, ca) in &ua {
            for (bk, bl, cb) in &ub {
                let c = ca * cb;
                if aj == bk {
                    add_unit(&mut units, (*ai, *bl), &c);
                }
                if bl == ai {
                    add_unit(&mut units, (*bk, *aj), &(-c));
                }
            }
        }
        Ok(self.units_to_element(units))
    }

    /// Bilinear extension of [`Parabolic::bracket`].
    pub fn bracket_lie(&self, a: &LieElement, b: &LieElement) -> Result<LieElement> {
        let mut out = LieElement::zero();
        for (ba, ca) in a.iter() {
            for (bb, cb) in b.iter() {
                let term = self.bracket(ba, bb)?;
                out = out.add(&term.scale(&(ca * cb)));
            }
        }
        Ok(out)
    }

    fn units_to_element(&self, units: BTreeMap<(usize, usize), Rat>) -> LieElement {
        let mut out = LieElement::zero();
        let mut diag = vec![Rat::zero(); self.n];
        for ((i, j), c) in units {
            if i == j {
                diag[i - 1] = c;
            } else {
                out.add_scaled(BasisElement::E(i, j), &c);
            }
        }
        // A traceless diagonal expands over the coroots via partial sums.
        let mut partial = Rat::zero();
        for i in 1..self.n {
            partial += diag[i - 1].clone();
            out.add_scaled(BasisElement::H(i), &partial);
        }
        out
    }

    /// Diagonal of the grading element: q/n on the first p slots, -p/n after.
    pub fn grading_element(&self) -> Vec<Rat> {
        let n = self.n as i64;
        let p = self.p as i64;
        let q = n - p;
        let mut out = Vec::with_capacity(self.n);
        for i in 0..self.n {
            if i < self.p {
                out.push(Rat::new(q.into(), n.into()));
            } else {
                out.push(Rat::new((-p).into(), n.into()));
            }
        }
        out
    }

    /// The grading element expanded over the coroots; the coefficients are
    /// exactly row `p` of the inverse Cartan matrix.
    pub fn grading_element_coroots(&self) -> LieElement {
        let row = inverse_cartan_row(self.n, self.p).expect("valid by construction");
        let mut out = LieElement::zero();
        for (i, c) in row.iter().enumerate() {
            out.add_scaled(BasisElement::H(i + 1), c);
        }
        out
    }

    /// Density functional on the Levi factor: `tau(h)` is n/(pq) times the
    /// trace of `h` over the first p diagonal slots. It is the coefficient at
    /// the grading element, so `tau(E) = 1` and `tau` kills the semisimple
    /// part. Inputs with a nonzero-degree component are rejected.
    pub fn density_functional(&self, h: &LieElement) -> Result<Rat> {
        let mut out = Rat::zero();
        for (b, c) in h.iter() {
            self.check_element(b)?;
            if self.degree(b) != 0 {
                return Err(Error::contract(format!(
                    "density functional applied to {b} of degree {}",
                    self.degree(b)
                )));
            }
            if let BasisElement::H(i) = b {
                if *i == self.p {
                    let scale = Rat::new(
                        (self.n as i64).into(),
                        ((self.p * self.q()) as i64).into(),
                    );
                    out += c * scale;
                }
            }
        }
        Ok(out)
    }
}

/// Row `p` of the inverse of the type `A_{n-1}` Cartan matrix:
/// entry j is `min(p,j) * (n - max(p,j)) / n`.
pub fn inverse_cartan_row(n: usize, p: usize) -> Result<Vec<Rat>> {
    Parabolic::new(n, p)?;
    let mut out = Vec::with_capacity(n - 1);
    for j in 1..n {
        let a = p.min(j) as i64;
        let b = (n - p.max(j)) as i64;
        out.push(Rat::new((a * b).into(), (n as i64).into()));
    }
    Ok(out)
}

fn to_units(b: &BasisElement) -> Vec<(usize, usize, Rat)> {
    match *b {
        BasisElement::E(i, j) => vec![(i, j, rint(1))],
        BasisElement::H(i) => vec![(i, i, rint(1)), (i + 1, i + 1, rint(-1))],
    }
}

fn add_unit(map: &mut BTreeMap<(usize, usize), Rat>, key: (usize, usize), c: &Rat) {
    if c.is_zero() {
        return;
    }
    let entry = map.entry(key).or_insert_with(Rat::zero);
    *entry += c.clone();
    if entry.is_zero() {
        map.remove(&key);
    }
}
