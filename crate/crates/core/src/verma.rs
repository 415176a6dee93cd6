//! The symbolic engine: words over the algebra basis, holonomic and
//! semiholonomic rewriting to normal form, the left action on induced
//! modules, the symmetrization projection, and the order-two splitting.
//!
//! An element of an induced module is a rational combination of words in the
//! degree -1 letters tensored with a basis vector of a concrete parabolic
//! module realization. Normal form means every parabolic letter has been
//! bubbled to the right and absorbed into the module action (degree 0 via
//! the realization's matrices, degree +1 as zero); in the holonomic variant
//! the surviving letters are additionally kept in canonical sorted order
//! (they commute, the nilradical being abelian). Elements carry their
//! variant, and cross-variant arithmetic is rejected rather than coerced.
//!
//! Plain-text syntax for elements, round-tripped bit-exactly by the printer
//! and parser: terms like `3/2 * y[3,1] y[4,2] | e0`, letters left to right,
//! module basis index after `|` (omitted for one-dimensional realizations),
//! `1` for the empty word.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num::{One, Signed, Zero};

use crate::liealg::{BasisElement, LieElement, Parabolic};
use crate::linalg;
use crate::{Error, Matrix, Rat, Result};

/// Which enveloping algebra the element lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Holonomic,
    Semiholonomic,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Holonomic => write!(f, "holonomic"),
            Variant::Semiholonomic => write!(f, "semiholonomic"),
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "holonomic" => Ok(Variant::Holonomic),
            "semiholonomic" => Ok(Variant::Semiholonomic),
            other => Err(Error::invalid(format!("unknown variant `{other}`"))),
        }
    }
}

/// Word over the basis letters; in normal form only degree -1 letters occur.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<BasisElement>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A concrete irreducible parabolic module: basis, explicit degree-0 action
/// matrices, trivially acting nilradical, and the density weight parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleRealization {
    name: String,
    pd: Parabolic,
    dim: usize,
    weight: Rat,
    action: BTreeMap<BasisElement, Matrix>,
}

impl ModuleRealization {
    /// One-dimensional density module: every degree-0 element acts by
    /// `w * tau`, the nilradical by zero.
    pub fn density(pd: Parabolic, w: Rat) -> Arc<Self> {
        let mut action = BTreeMap::new();
        for b in pd.levi_basis() {
            let tau = pd
                .density_functional(&LieElement::basis(b))
                .expect("levi basis has degree zero");
            let mut m = Matrix::zeros(1, 1);
            *m.at_mut(0, 0) = &w * tau;
            action.insert(b, m);
        }
        Arc::new(ModuleRealization {
            name: format!("R[{w}]"),
            pd,
            dim: 1,
            weight: w,
            action,
        })
    }

    /// Standard representation of the first block, twisted by a density
    /// weight: degree-0 elements act by their upper-left block plus
    /// `twist * tau`.
    pub fn block1_standard(pd: Parabolic, twist: Rat) -> Arc<Self> {
        Self::block_module(pd, twist, 1, false)
    }

    pub fn block1_dual(pd: Parabolic, twist: Rat) -> Arc<Self> {
        Self::block_module(pd, twist, 1, true)
    }

    /// Standard representation of the second block with a density twist.
    pub fn block2_standard(pd: Parabolic, twist: Rat) -> Arc<Self> {
        Self::block_module(pd, twist, 2, false)
    }

    pub fn block2_dual(pd: Parabolic, twist: Rat) -> Arc<Self> {
        Self::block_module(pd, twist, 2, true)
    }

    fn block_module(pd: Parabolic, twist: Rat, block: usize, dual: bool) -> Arc<Self> {
        let (lo, dim) = if block == 1 {
            (1usize, pd.p())
        } else {
            (pd.p() + 1, pd.q())
        };
        let mut action = BTreeMap::new();
        for b in pd.levi_basis() {
            let mut m = Matrix::zeros(dim, dim);
            for (r, c, coeff) in block_entries(&b, lo, dim) {
                *m.at_mut(r, c) += coeff;
            }
            if dual {
                let mut t = m.transpose();
                for r in 0..dim {
                    for c in 0..dim {
                        let v = -t.at(r, c).clone();
                        *t.at_mut(r, c) = v;
                    }
                }
                m = t;
            }
            let tau = pd
                .density_functional(&LieElement::basis(b))
                .expect("levi basis has degree zero");
            let shift = &twist * tau;
            for i in 0..dim {
                *m.at_mut(i, i) += shift.clone();
            }
            action.insert(b, m);
        }
        let base = format!("{}{}", if dual { "dual" } else { "std" }, block);
        Arc::new(ModuleRealization {
            name: format!("{base}[{twist}]"),
            pd,
            dim,
            weight: twist,
            action,
        })
    }

    /// Tensor product of two realizations over the same parabolic.
    pub fn tensor(a: &Arc<Self>, b: &Arc<Self>) -> Result<Arc<Self>> {
        if a.pd != b.pd {
            return Err(Error::invalid("tensor factors over different parabolics"));
        }
        let dim = a.dim * b.dim;
        let mut action = BTreeMap::new();
        for basis in a.pd.levi_basis() {
            let ma = &a.action[&basis];
            let mb = &b.action[&basis];
            let mut m = Matrix::zeros(dim, dim);
            for r1 in 0..a.dim {
                for c1 in 0..a.dim {
                    if !ma.at(r1, c1).is_zero() {
                        for i in 0..b.dim {
                            *m.at_mut(r1 * b.dim + i, c1 * b.dim + i) += ma.at(r1, c1).clone();
                        }
                    }
                }
            }
            for r2 in 0..b.dim {
                for c2 in 0..b.dim {
                    if !mb.at(r2, c2).is_zero() {
                        for i in 0..a.dim {
                            *m.at_mut(i * b.dim + r2, i * b.dim + c2) += mb.at(r2, c2).clone();
                        }
                    }
                }
            }
            action.insert(basis, m);
        }
        Ok(Arc::new(ModuleRealization {
            name: format!("{}*{}", a.name, b.name),
            pd: a.pd,
            dim,
            weight: a.weight.clone() + b.weight.clone(),
            action,
        }))
    }

    /// Cuts the subrepresentation given by an idempotent projector commuting
    /// with the action; used for (anti)symmetrizer masks on tensor squares.
    pub fn sub_realization(base: &Arc<Self>, projector: &Matrix, name: &str) -> Result<Arc<Self>> {
        if projector.rows() != base.dim || projector.cols() != base.dim {
            return Err(Error::invalid("projector shape mismatch"));
        }
        if projector.matmul(projector) != *projector {
            return Err(Error::invalid("projector is not idempotent"));
        }
        for (b, m) in &base.action {
            if projector.matmul(m) != m.matmul(projector) {
                return Err(Error::invalid(format!(
                    "projector does not commute with the action of {b}"
                )));
            }
        }
        // Image basis from the reduced echelon form of the transpose: the
        // nonzero rows span the column space and have unit pivots, so the
        // pivot-coordinate selection is a left inverse of the inclusion.
        let mut rt = projector.transpose();
        let pivots = rt.rref_in_place();
        let dim = pivots.len();
        let include = Matrix::from_rows(rt.row_vecs()[..dim].to_vec()).transpose();
        let mut project = Matrix::zeros(dim, base.dim);
        for (k, &j) in pivots.iter().enumerate() {
            *project.at_mut(k, j) = Rat::one();
        }
        let mut action = BTreeMap::new();
        for (b, m) in &base.action {
            action.insert(*b, project.matmul(&m.matmul(&include)));
        }
        Ok(Arc::new(ModuleRealization {
            name: name.to_string(),
            pd: base.pd,
            dim,
            weight: base.weight.clone(),
            action,
        }))
    }

    /// (Anti)symmetrized tensor square of a realization.
    pub fn tensor_square_masked(base: &Arc<Self>, antisymmetric: bool) -> Result<Arc<Self>> {
        let square = Self::tensor(base, base)?;
        let d = base.dim;
        let mut proj = Matrix::zeros(d * d, d * d);
        let half = Rat::new(1.into(), 2.into());
        for i in 0..d {
            for j in 0..d {
                *proj.at_mut(i * d + j, i * d + j) += half.clone();
                let sign = if antisymmetric { -half.clone() } else { half.clone() };
                *proj.at_mut(i * d + j, j * d + i) += sign;
            }
        }
        let tag = if antisymmetric { "alt2" } else { "sym2" };
        Self::sub_realization(&square, &proj, &format!("{tag}({})", base.name))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn pd(&self) -> Parabolic {
        self.pd
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weight(&self) -> &Rat {
        &self.weight
    }

    pub fn action_of(&self, b: &BasisElement) -> &Matrix {
        &self.action[b]
    }

    /// Verifies the bracket representation property over the whole Levi
    /// basis: action([h1,h2]) = [action(h1), action(h2)].
    pub fn check_representation(&self) -> Result<()> {
        let levi = self.pd.levi_basis();
        for h1 in &levi {
            for h2 in &levi {
                let br = self.pd.bracket(h1, h2)?;
                let mut lhs = Matrix::zeros(self.dim, self.dim);
                for (b, c) in br.iter() {
                    let m = &self.action[b];
                    for r in 0..self.dim {
                        for col in 0..self.dim {
                            *lhs.at_mut(r, col) += c * m.at(r, col);
                        }
                    }
                }
                let m1 = &self.action[h1];
                let m2 = &self.action[h2];
                let mut rhs = m1.matmul(m2);
                let m2m1 = m2.matmul(m1);
                for r in 0..self.dim {
                    for col in 0..self.dim {
                        *rhs.at_mut(r, col) -= m2m1.at(r, col).clone();
                    }
                }
                if lhs != rhs {
                    return Err(Error::invalid(format!(
                        "action of [{h1},{h2}] is not the commutator in `{}`",
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Eigenvalue of the coroot `H[i]` on basis vector `m`; errors when the
    /// coroot actions are not diagonal in this realization.
    pub fn coroot_eigenvalue(&self, i: usize, m: usize) -> Result<Rat> {
        let mat = &self.action[&BasisElement::H(i)];
        for r in 0..self.dim {
            for c in 0..self.dim {
                if r != c && !mat.at(r, c).is_zero() {
                    return Err(Error::contract(format!(
                        "realization `{}` has non-diagonal coroot action",
                        self.name
                    )));
                }
            }
        }
        Ok(mat.at(m, m).clone())
    }
}

fn block_entries(b: &BasisElement, lo: usize, dim: usize) -> Vec<(usize, usize, Rat)> {
    let inside = |i: usize| i >= lo && i < lo + dim;
    match *b {
        BasisElement::E(i, j) => {
            if inside(i) && inside(j) {
                vec![(i - lo, j - lo, Rat::one())]
            } else {
                vec![]
            }
        }
        BasisElement::H(i) => {
            let mut out = Vec::new();
            if inside(i) {
                out.push((i - lo, i - lo, Rat::one()));
            }
            if inside(i + 1) {
                out.push((i + 1 - lo, i + 1 - lo, -Rat::one()));
            }
            out
        }
    }
}

/// How the rewriting engine picks the next reducible position; `Rightmost`
/// is the deterministic default, `Seeded` drives the confluence tests.
#[derive(Debug, Clone, Copy)]
pub enum RewriteStrategy {
    Rightmost,
    Seeded(u64),
}

type RawTerm = (Vec<BasisElement>, usize, Rat);

/// Element of a holonomic or semiholonomic induced module, kept in normal
/// form (zero coefficients never stored).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    realization: Arc<ModuleRealization>,
    variant: Variant,
    terms: BTreeMap<(Word, usize), Rat>,
}

impl AlgebraElement {
    pub fn zero(realization: &Arc<ModuleRealization>, variant: Variant) -> Self {
        AlgebraElement {
            realization: Arc::clone(realization),
            variant,
            terms: BTreeMap::new(),
        }
    }

    /// Empty word tensored with module basis vector `m`.
    pub fn generator(realization: &Arc<ModuleRealization>, variant: Variant, m: usize) -> Result<Self> {
        Self::from_raw_terms(realization, variant, vec![(Vec::new(), m, Rat::one())])
    }

    pub fn monomial(
        realization: &Arc<ModuleRealization>,
        variant: Variant,
        letters: Vec<BasisElement>,
        m: usize,
        coeff: Rat,
    ) -> Result<Self> {
        Self::from_raw_terms(realization, variant, vec![(letters, m, coeff)])
    }

    /// Expands arbitrary words to normal form with the default strategy.
    pub fn from_raw_terms(
        realization: &Arc<ModuleRealization>,
        variant: Variant,
        raw: Vec<RawTerm>,
    ) -> Result<Self> {
        Self::from_raw_terms_with(realization, variant, raw, RewriteStrategy::Rightmost)
    }

    /// Expands arbitrary words to normal form, picking reducible positions
    /// per the given strategy. All strategies agree (rewriting confluence);
    /// the seeded one exists so tests can assert exactly that.
    pub fn from_raw_terms_with(
        realization: &Arc<ModuleRealization>,
        variant: Variant,
        raw: Vec<RawTerm>,
        strategy: RewriteStrategy,
    ) -> Result<Self> {
        let pd = realization.pd;
        for (letters, m, _) in &raw {
            if *m >= realization.dim {
                return Err(Error::invalid(format!(
                    "module index e{m} out of range for `{}`",
                    realization.name
                )));
            }
            for l in letters {
                pd.check_element(l)?;
            }
        }
        let mut rng = match strategy {
            RewriteStrategy::Rightmost => None,
            RewriteStrategy::Seeded(seed) => Some(SplitMix64::new(seed)),
        };
        let mut out: BTreeMap<(Word, usize), Rat> = BTreeMap::new();
        let mut stack = raw;
        while let Some((mut word, m, coeff)) = stack.pop() {
            if coeff.is_zero() {
                continue;
            }
            // Reducible positions: a parabolic letter that is trailing or
            // followed by a degree -1 letter.
            let reducible: Vec<usize> = (0..word.len())
                .filter(|&i| {
                    pd.degree(&word[i]) >= 0
                        && (i + 1 == word.len() || pd.degree(&word[i + 1]) == -1)
                })
                .collect();
            let Some(&pos) = (match &mut rng {
                None => reducible.last(),
                Some(rng) => {
                    if reducible.is_empty() {
                        None
                    } else {
                        reducible.get(rng.below(reducible.len()))
                    }
                }
            }) else {
                if variant == Variant::Holonomic {
                    word.sort_unstable();
                }
                let entry = out.entry((Word(word), m)).or_insert_with(Rat::zero);
                *entry += coeff;
                if entry.is_zero() {
                    let removed: Vec<(Word, usize)> = out
                        .iter()
                        .filter(|(_, c)| c.is_zero())
                        .map(|(k, _)| k.clone())
                        .collect();
                    for k in removed {
                        out.remove(&k);
                    }
                }
                continue;
            };
            let letter = word[pos];
            if pos + 1 == word.len() {
                // Trailing parabolic letter acts on the module vector.
                word.pop();
                if pd.degree(&letter) == 0 {
                    let mat = realization.action_of(&letter);
                    for r in 0..realization.dim {
                        let a = mat.at(r, m);
                        if !a.is_zero() {
                            stack.push((word.clone(), r, &coeff * a));
                        }
                    }
                }
                // Degree +1 acts trivially: the term is dropped.
            } else {
                let next = word[pos + 1];
                let mut swapped = word.clone();
                swapped.swap(pos, pos + 1);
                stack.push((swapped, m, coeff.clone()));
                let bracket = pd.bracket(&letter, &next)?;
                for (g, c) in bracket.iter() {
                    let mut contracted = word.clone();
                    contracted.remove(pos + 1);
                    contracted[pos] = *g;
                    stack.push((contracted, m, &coeff * c));
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(AlgebraElement {
            realization: Arc::clone(realization),
            variant,
            terms: out,
        })
    }

    pub fn realization(&self) -> &Arc<ModuleRealization> {
        &self.realization
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, usize), &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.variant != other.variant {
            return Err(Error::contract(format!(
                "cross-variant arithmetic: {} vs {}",
                self.variant, other.variant
            )));
        }
        if self.realization != other.realization {
            return Err(Error::contract(format!(
                "elements over different realizations: `{}` vs `{}`",
                self.realization.name, other.realization.name
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let entry = terms.entry(k.clone()).or_insert_with(Rat::zero);
            *entry += c.clone();
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(AlgebraElement {
            realization: Arc::clone(&self.realization),
            variant: self.variant,
            terms,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(&self.realization, self.variant);
        }
        AlgebraElement {
            realization: Arc::clone(&self.realization),
            variant: self.variant,
            terms: self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect(),
        }
    }

    /// Left action of a basis element: concatenate and renormalize.
    pub fn act(&self, x: &BasisElement) -> Result<Self> {
        self.realization.pd.check_element(x)?;
        let raw = self
            .terms
            .iter()
            .map(|((w, m), c)| {
                let mut letters = Vec::with_capacity(w.len() + 1);
                letters.push(*x);
                letters.extend(w.0.iter().copied());
                (letters, *m, c.clone())
            })
            .collect();
        Self::from_raw_terms(&self.realization, self.variant, raw)
    }

    /// Linear extension of [`AlgebraElement::act`].
    pub fn act_lie(&self, x: &LieElement) -> Result<Self> {
        let mut out = Self::zero(&self.realization, self.variant);
        for (b, c) in x.iter() {
            out = out.add(&self.act(b)?.scale(c))?;
        }
        Ok(out)
    }

    /// Symmetrization projection onto the holonomic module: each word is
    /// sent to its sorted monomial. Surjective and intertwining the action.
    pub fn symmetrize_projection(&self) -> Result<Self> {
        if self.variant != Variant::Semiholonomic {
            return Err(Error::contract(
                "symmetrize_projection expects a semiholonomic element",
            ));
        }
        let mut terms: BTreeMap<(Word, usize), Rat> = BTreeMap::new();
        for ((w, m), c) in &self.terms {
            let mut sorted = w.0.clone();
            sorted.sort_unstable();
            let entry = terms.entry((Word(sorted), *m)).or_insert_with(Rat::zero);
            *entry += c.clone();
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(AlgebraElement {
            realization: Arc::clone(&self.realization),
            variant: Variant::Holonomic,
            terms,
        })
    }

    /// The order-two splitting of the symmetrization: identity on filtration
    /// degree <= 1, and `XY -> (XY + YX)/2` on degree two (the letters
    /// commute in the holonomic source, and their bracket vanishes).
    /// Elements of degree greater than two are rejected.
    pub fn split2(&self) -> Result<Self> {
        if self.variant != Variant::Holonomic {
            return Err(Error::contract("split2 expects a holonomic element"));
        }
        let half = Rat::new(1.into(), 2.into());
        let mut terms: BTreeMap<(Word, usize), Rat> = BTreeMap::new();
        for ((w, m), c) in &self.terms {
            match w.len() {
                0 | 1 => {
                    let entry = terms.entry((w.clone(), *m)).or_insert_with(Rat::zero);
                    *entry += c.clone();
                }
                2 => {
                    let xy = w.0.clone();
                    let yx = vec![w.0[1], w.0[0]];
                    for letters in [xy, yx] {
                        let entry = terms
                            .entry((Word(letters), *m))
                            .or_insert_with(Rat::zero);
                        *entry += c * &half;
                    }
                }
                d => {
                    return Err(Error::contract(format!(
                        "split2 is defined on filtration degree <= 2, found a degree-{d} word"
                    )));
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(AlgebraElement {
            realization: Arc::clone(&self.realization),
            variant: Variant::Semiholonomic,
            terms,
        })
    }

    /// Degree when the element is homogeneous (all words one length).
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(|(w, _)| w.len());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|(w, _)| w.len()).max().unwrap_or(0)
    }

    /// Joint coroot-eigenvalue vector (H[1], ..., H[n-1]) of the element;
    /// errors when terms mix weights or the realization is not diagonal.
    pub fn weight_vector(&self) -> Result<Vec<Rat>> {
        let pd = self.realization.pd;
        let n = pd.n();
        let mut result: Option<Vec<Rat>> = None;
        for ((w, m), _) in &self.terms {
            let mut vec = Vec::with_capacity(n - 1);
            for i in 1..n {
                let mut eig = self.realization.coroot_eigenvalue(i, *m)?;
                for l in &w.0 {
                    let BasisElement::E(r, c) = l else {
                        return Err(Error::contract("normal form contains a coroot letter"));
                    };
                    let root = (i == *r) as i64 - (i == *c) as i64 - (i + 1 == *r) as i64
                        + (i + 1 == *c) as i64;
                    eig += Rat::from_integer(root.into());
                }
                vec.push(eig);
            }
            match &result {
                None => result = Some(vec),
                Some(prev) if *prev == vec => {}
                Some(_) => {
                    return Err(Error::contract("element mixes distinct weights"));
                }
            }
        }
        result.ok_or_else(|| Error::contract("weight of the zero element is undefined"))
    }

    /// Rescales to integer coefficients with content one and positive
    /// leading coefficient (in term order).
    pub fn normalize_primitive(&self) -> Self {
        if self.terms.is_empty() {
            return self.clone();
        }
        let coeffs: Vec<Rat> = self.terms.values().cloned().collect();
        let normalized = linalg::normalize_primitive(&coeffs);
        AlgebraElement {
            realization: Arc::clone(&self.realization),
            variant: self.variant,
            terms: self
                .terms
                .keys()
                .cloned()
                .zip(normalized)
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Coordinates with respect to an ordered layer basis; errors if a term
    /// falls outside the basis.
    pub fn coords(&self, layer: &[(Word, usize)]) -> Result<Vec<Rat>> {
        let index: BTreeMap<&(Word, usize), usize> =
            layer.iter().enumerate().map(|(i, k)| (k, i)).collect();
        let mut v = vec![Rat::zero(); layer.len()];
        for (k, c) in &self.terms {
            let Some(&i) = index.get(k) else {
                return Err(Error::contract(format!(
                    "term outside the expected layer: {}",
                    term_to_string(k, c, self.realization.dim)
                )));
            };
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn from_coords(
        realization: &Arc<ModuleRealization>,
        variant: Variant,
        layer: &[(Word, usize)],
        coords: &[Rat],
    ) -> Self {
        let terms = layer
            .iter()
            .zip(coords)
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k.clone(), c.clone()))
            .collect();
        AlgebraElement {
            realization: Arc::clone(realization),
            variant,
            terms,
        }
    }

    /// Parses the plain-text element syntax.
    pub fn parse(src: &str, realization: &Arc<ModuleRealization>, variant: Variant) -> Result<Self> {
        let s = src.trim();
        if s.is_empty() {
            return Err(Error::invalid("empty element"));
        }
        if s == "0" {
            return Ok(Self::zero(realization, variant));
        }
        let pd = realization.pd;
        let mut raw: Vec<RawTerm> = Vec::new();
        let mut rest = s;
        let mut negative = false;
        if let Some(r) = rest.strip_prefix('-') {
            negative = true;
            rest = r.trim_start();
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r.trim_start();
        }
        loop {
            let mut depth = 0i32;
            let mut split = None;
            for (idx, ch) in rest.char_indices() {
                match ch {
                    '[' => depth += 1,
                    ']' => depth -= 1,
                    '+' | '-' if depth == 0 && idx > 0 => {
                        split = Some((idx, ch));
                        break;
                    }
                    _ => {}
                }
            }
            let (chunk, next) = match split {
                Some((idx, ch)) => (&rest[..idx], Some((ch, &rest[idx + 1..]))),
                None => (rest, None),
            };
            let (letters, m, mag) = parse_term(chunk.trim(), &pd, realization.dim)?;
            let coeff = if negative { -mag } else { mag };
            raw.push((letters, m, coeff));
            match next {
                Some((ch, tail)) => {
                    negative = ch == '-';
                    rest = tail.trim_start();
                }
                None => break,
            }
        }
        Self::from_raw_terms(realization, variant, raw)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let dim = self.realization.dim;
        let mut first = true;
        for (key, coeff) in &self.terms {
            if first {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{}", term_to_string(key, &coeff.abs(), dim))?;
        }
        Ok(())
    }
}

fn term_to_string(key: &(Word, usize), magnitude: &Rat, dim: usize) -> String {
    let (word, m) = key;
    let letters = if word.is_empty() {
        "1".to_string()
    } else {
        word.0
            .iter()
            .map(|b| match b {
                BasisElement::E(i, j) => format!("y[{i},{j}]"),
                BasisElement::H(i) => format!("H[{i}]"),
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    let body = if magnitude.is_one() && !word.is_empty() {
        letters
    } else if magnitude.is_one() {
        letters
    } else {
        format!("{magnitude} * {letters}")
    };
    if dim > 1 {
        format!("{body} | e{m}")
    } else {
        body
    }
}

fn parse_term(
    chunk: &str,
    pd: &Parabolic,
    dim: usize,
) -> Result<(Vec<BasisElement>, usize, Rat)> {
    if chunk.is_empty() {
        return Err(Error::invalid("empty term"));
    }
    let (head, m) = match chunk.split_once('|') {
        Some((left, right)) => {
            let right = right.trim();
            let idx = right
                .strip_prefix('e')
                .and_then(|d| d.parse::<usize>().ok())
                .ok_or_else(|| Error::invalid(format!("bad module index `{right}`")))?;
            (left.trim(), idx)
        }
        None => (chunk, 0),
    };
    if m >= dim {
        return Err(Error::invalid(format!(
            "module index e{m} out of range (dim {dim})"
        )));
    }
    let (coeff, letters_str) = match head.split_once('*') {
        Some((c, l)) => {
            let coeff = Rat::from_str(c.trim())
                .map_err(|_| Error::invalid(format!("bad coefficient `{}`", c.trim())))?;
            (coeff, l.trim())
        }
        None => (Rat::one(), head.trim()),
    };
    let mut letters = Vec::new();
    if letters_str != "1" {
        for tok in letters_str.split_whitespace() {
            let inner = tok
                .strip_prefix("y[")
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(|| Error::invalid(format!("bad letter `{tok}`")))?;
            let (i, j) = inner
                .split_once(',')
                .ok_or_else(|| Error::invalid(format!("bad letter `{tok}`")))?;
            let i: usize = i
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad letter `{tok}`")))?;
            let j: usize = j
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad letter `{tok}`")))?;
            let b = BasisElement::E(i, j);
            pd.check_element(&b)?;
            if pd.degree(&b) != -1 {
                return Err(Error::invalid(format!(
                    "letter {tok} is not in the degree -1 block for p={}",
                    pd.p()
                )));
            }
            letters.push(b);
        }
    }
    Ok((letters, m, coeff))
}

/// Ordered basis of the degree-k layer: sorted monomials (holonomic) or all
/// words of length k (semiholonomic) over the degree -1 letters, tensored
/// with the module basis. Lexicographic in the word, then the module index.
pub fn layer_basis(
    k: usize,
    realization: &Arc<ModuleRealization>,
    variant: Variant,
) -> Vec<(Word, usize)> {
    let letters = realization.pd.negative_letters();
    let words = enumerate_words(&letters, k, variant == Variant::Holonomic);
    let mut out = Vec::with_capacity(words.len() * realization.dim);
    for w in words {
        for m in 0..realization.dim {
            out.push((Word(w.clone()), m));
        }
    }
    out
}

fn enumerate_words(
    letters: &[BasisElement],
    k: usize,
    nondecreasing: bool,
) -> Vec<Vec<BasisElement>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(
        letters: &[BasisElement],
        k: usize,
        nondecreasing: bool,
        start: usize,
        current: &mut Vec<BasisElement>,
        out: &mut Vec<Vec<BasisElement>>,
    ) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        let from = if nondecreasing { start } else { 0 };
        for (idx, l) in letters.iter().enumerate().skip(from) {
            current.push(*l);
            rec(letters, k, nondecreasing, idx, current, out);
            current.pop();
        }
    }
    rec(letters, k, nondecreasing, 0, &mut current, &mut out);
    out
}

struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    fn next(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }
}
