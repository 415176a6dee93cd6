//! Singular-vector search in holonomic and semiholonomic induced modules,
//! critical-weight scanning over density families, and the covering
//! (lifting) decision with certificates.
//!
//! A singular vector is a highest-weight vector for the Levi factor that the
//! nilradical annihilates; each one generates a module homomorphism, i.e. an
//! invariant operator on the flat model. Kernels are computed by exact
//! fraction-free elimination on the stacked action matrices, and every
//! reported vector is normalized to primitive integer coefficients. The
//! density scan counts only singular vectors of density type (annihilated by
//! the raising and the lowering operators alike): those are the
//! density-to-density operators the critical-weight question is about.
//!
//! Covering: a holonomic singular vector lifts when some semiholonomic
//! highest-weight vector of the same weight projects onto it under
//! symmetrization and is itself singular. The affine space of candidate
//! preimages is computed exactly; failure comes with a certificate naming a
//! degree +1 generator whose action cannot be cancelled on any preimage.

use std::sync::Arc;

use num::Zero;
use serde_json::{json, Value};

use crate::liealg::BasisElement;
use crate::linalg::{self, in_span};
use crate::verma::{layer_basis, AlgebraElement, ModuleRealization, Variant, Word};
use crate::{Error, Matrix, Rat, Result};

/// Matrix of `act(b, .)` between ordered layer bases; degree 0 preserves the
/// layer, degree +1 maps layer k to layer k-1.
fn action_matrix(
    b: &BasisElement,
    k: usize,
    realization: &Arc<ModuleRealization>,
    variant: Variant,
) -> Result<Matrix> {
    let deg = realization.pd().degree(b);
    let target = match deg {
        0 => k,
        1 => k
            .checked_sub(1)
            .ok_or_else(|| Error::contract("degree +1 action needs k >= 1"))?,
        _ => {
            return Err(Error::contract(format!(
                "action matrices are assembled for parabolic letters, got {b}"
            )))
        }
    };
    let src = layer_basis(k, realization, variant);
    let dst = layer_basis(target, realization, variant);
    let mut m = Matrix::zeros(dst.len(), src.len());
    for (col, (word, idx)) in src.iter().enumerate() {
        let e =
            AlgebraElement::monomial(realization, variant, word.0.clone(), *idx, num::One::one())?;
        let coords = e.act(b)?.coords(&dst)?;
        for (row, c) in coords.into_iter().enumerate() {
            if !c.is_zero() {
                *m.at_mut(row, col) = c;
            }
        }
    }
    Ok(m)
}

/// Matrix of the action of a degree +1 generator from layer k to layer k-1,
/// in the canonical layer bases.
pub fn g1_action_matrix(
    z: &BasisElement,
    k: usize,
    realization: &Arc<ModuleRealization>,
    variant: Variant,
) -> Result<Matrix> {
    if realization.pd().degree(z) != 1 {
        return Err(Error::contract(format!(
            "{z} has degree {}, expected +1",
            realization.pd().degree(z)
        )));
    }
    if k == 0 {
        return Err(Error::contract("g1 action matrix needs k >= 1"));
    }
    action_matrix(z, k, realization, variant)
}

/// Result of a singular-vector search at one degree.
#[derive(Debug, Clone)]
pub struct SingularVectorReport {
    pub k: usize,
    pub weight: Rat,
    pub variant: Variant,
    /// Basis of the joint kernel of the degree +1 actions intersected with
    /// the highest-weight condition, primitive integer coefficients.
    pub vectors: Vec<AlgebraElement>,
    /// Dimension of the joint kernel of the degree +1 actions alone.
    pub kernel_dim: usize,
    /// Dimension after intersecting with the raising-operator kernel.
    pub highest_weight_dim: usize,
}

impl SingularVectorReport {
    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "weight": self.weight.to_string(),
            "variant": self.variant.to_string(),
            "kernel_dim": self.kernel_dim,
            "highest_weight_dim": self.highest_weight_dim,
            "vectors": self.vectors.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Exact null space of the stacked degree +1 action matrices intersected
/// with the joint kernel of the simple raising operators. The report carries
/// both dimensions and a normalized basis of the intersection.
pub fn find_singular_vectors(
    k: usize,
    realization: &Arc<ModuleRealization>,
    variant: Variant,
) -> Result<SingularVectorReport> {
    if k == 0 {
        return Err(Error::invalid("singular-vector search needs k >= 1"));
    }
    let pd = realization.pd();
    let layer = layer_basis(k, realization, variant);
    let mut z_mats = Vec::new();
    for z in pd.positive_letters() {
        z_mats.push(action_matrix(&z, k, realization, variant)?);
    }
    let z_refs: Vec<&Matrix> = z_mats.iter().collect();
    let z_stack = Matrix::vstack(&z_refs);
    let kernel_dim = linalg::null_space(&z_stack).len();

    let mut all_mats = z_mats;
    for r in pd.raising_ops() {
        all_mats.push(action_matrix(&r, k, realization, variant)?);
    }
    let all_refs: Vec<&Matrix> = all_mats.iter().collect();
    let stacked = Matrix::vstack(&all_refs);
    let kernel = linalg::null_space(&stacked);
    let vectors: Vec<AlgebraElement> = kernel
        .iter()
        .map(|v| {
            AlgebraElement::from_coords(realization, variant, &layer, v).normalize_primitive()
        })
        .collect();
    let highest_weight_dim = vectors.len();
    debug_assert!(vectors.iter().all(|v| verify_singular(v).unwrap_or(false)));
    Ok(SingularVectorReport {
        k,
        weight: realization.weight().clone(),
        variant,
        vectors,
        kernel_dim,
        highest_weight_dim,
    })
}

/// Independent recheck through the rewriting engine (not the assembled
/// matrices): all degree +1 actions and all raising actions vanish.
pub fn verify_singular(e: &AlgebraElement) -> Result<bool> {
    let pd = e.realization().pd();
    for z in pd.positive_letters() {
        if !e.act(&z)?.is_zero() {
            return Ok(false);
        }
    }
    for r in pd.raising_ops() {
        if !e.act(&r)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dimension of density-type singular vectors: the joint kernel of the
/// degree +1 actions, the raising operators, and the lowering operators.
/// This is what the critical-weight scan counts.
fn density_type_kernel_dim(
    k: usize,
    realization: &Arc<ModuleRealization>,
    variant: Variant,
) -> Result<usize> {
    let pd = realization.pd();
    let mut mats = Vec::new();
    for z in pd.positive_letters() {
        mats.push(action_matrix(&z, k, realization, variant)?);
    }
    for r in pd.raising_ops() {
        mats.push(action_matrix(&r, k, realization, variant)?);
    }
    for l in pd.lowering_ops() {
        mats.push(action_matrix(&l, k, realization, variant)?);
    }
    let refs: Vec<&Matrix> = mats.iter().collect();
    Ok(linalg::null_space(&Matrix::vstack(&refs)).len())
}

/// For each weight in the set, instantiates the density module and reports
/// the dimension of its density-type singular vectors at degree k.
pub fn scan_critical_weights(
    pd: crate::liealg::Parabolic,
    k: usize,
    variant: Variant,
    wset: &[Rat],
) -> Result<Vec<(Rat, usize)>> {
    if k == 0 {
        return Err(Error::invalid("critical-weight scan needs k >= 1"));
    }
    let mut out = Vec::with_capacity(wset.len());
    for w in wset {
        let r = ModuleRealization::density(pd, w.clone());
        let dim = density_type_kernel_dim(k, &r, variant)?;
        out.push((w.clone(), dim));
    }
    Ok(out)
}

/// Affine description of the semiholonomic highest-weight vectors of the
/// same weight projecting onto a fixed holonomic singular vector.
#[derive(Debug, Clone)]
pub struct CoverPreimages {
    pub particular: AlgebraElement,
    pub homogeneous: Vec<AlgebraElement>,
}

impl CoverPreimages {
    pub fn affine_dimension(&self) -> usize {
        self.homogeneous.len()
    }
}

/// Obstruction certificate: a degree +1 generator whose action is nonzero on
/// every admissible preimage. When `constant_on_preimages` is set the
/// residual is literally the same element on the whole affine space (its
/// action kills the homogeneous part).
#[derive(Debug, Clone)]
pub struct Obstruction {
    pub generator: BasisElement,
    pub residual: AlgebraElement,
    pub constant_on_preimages: bool,
}

/// Outcome of the lifting check.
#[derive(Debug, Clone)]
pub struct CoverReport {
    pub exists: bool,
    pub witness: Option<AlgebraElement>,
    pub obstruction: Option<Obstruction>,
}

impl CoverReport {
    pub fn to_json(&self) -> Value {
        json!({
            "exists": self.exists,
            "witness": self.witness.as_ref().map(|w| w.to_string()),
            "obstruction": self.obstruction.as_ref().map(|o| json!({
                "generator": o.generator.to_string(),
                "residual": o.residual.to_string(),
                "constant_on_preimages": o.constant_on_preimages,
            })),
        })
    }
}

fn weight_of_key(
    realization: &Arc<ModuleRealization>,
    word: &Word,
    m: usize,
) -> Result<Vec<Rat>> {
    let e = AlgebraElement::monomial(
        realization,
        Variant::Semiholonomic,
        word.0.clone(),
        m,
        num::One::one(),
    )?;
    e.weight_vector()
}

/// The affine space of semiholonomic highest-weight vectors of the same
/// weight whose symmetrization is `s`: one particular preimage plus a basis
/// of the homogeneous solution space. `s` must be homogeneous and singular.
pub fn cover_preimages(s: &AlgebraElement) -> Result<CoverPreimages> {
    if s.variant() != Variant::Holonomic {
        return Err(Error::contract("cover analysis expects a holonomic vector"));
    }
    let Some(k) = s.homogeneous_degree() else {
        return Err(Error::contract(
            "cover analysis expects a homogeneous nonzero vector",
        ));
    };
    if !verify_singular(s)? {
        return Err(Error::contract("cover analysis expects a singular vector"));
    }
    let realization = s.realization();
    let pd = realization.pd();
    let target_weight = s.weight_vector()?;

    // Unknowns: coordinates over the same-weight slice of the tensor layer.
    let sh_layer = layer_basis(k, realization, Variant::Semiholonomic);
    let mut slice = Vec::new();
    for key in &sh_layer {
        if weight_of_key(realization, &key.0, key.1)? == target_weight {
            slice.push(key.clone());
        }
    }
    if slice.is_empty() {
        return Err(Error::contract(
            "empty weight slice; vector cannot be reached",
        ));
    }

    let hol_layer = layer_basis(k, realization, Variant::Holonomic);
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();

    // Symmetrization constraint: sym(x) = s.
    let mut sym_cols = Vec::with_capacity(slice.len());
    for key in &slice {
        let e = AlgebraElement::monomial(
            realization,
            Variant::Semiholonomic,
            key.0 .0.clone(),
            key.1,
            num::One::one(),
        )?;
        sym_cols.push(e.symmetrize_projection()?.coords(&hol_layer)?);
    }
    let s_coords = s.coords(&hol_layer)?;
    for row in 0..hol_layer.len() {
        rows.push(sym_cols.iter().map(|col| col[row].clone()).collect());
        rhs.push(s_coords[row].clone());
    }

    // Highest-weight constraint: every raising operator annihilates x.
    for r in pd.raising_ops() {
        let mut cols = Vec::with_capacity(slice.len());
        for key in &slice {
            let e = AlgebraElement::monomial(
                realization,
                Variant::Semiholonomic,
                key.0 .0.clone(),
                key.1,
                num::One::one(),
            )?;
            cols.push(e.act(&r)?.coords(&sh_layer)?);
        }
        for row in 0..sh_layer.len() {
            rows.push(cols.iter().map(|col| col[row].clone()).collect());
            rhs.push(Rat::zero());
        }
    }

    let system = Matrix::from_rows(rows);
    let particular_coords = system
        .solve(&rhs)
        .ok_or_else(|| Error::contract("no highest-weight preimage exists"))?;
    let homogeneous_coords = linalg::null_space(&system);

    let particular = AlgebraElement::from_coords(
        realization,
        Variant::Semiholonomic,
        &slice,
        &particular_coords,
    );
    let homogeneous = homogeneous_coords
        .iter()
        .map(|v| AlgebraElement::from_coords(realization, Variant::Semiholonomic, &slice, v))
        .collect();
    Ok(CoverPreimages {
        particular,
        homogeneous,
    })
}

/// Decides whether a holonomic singular vector lifts to a semiholonomic one:
/// solves "all degree +1 generators annihilate the preimage" over the affine
/// preimage space. On failure, searches for a certificate generator whose
/// action is nonzero on every admissible preimage.
pub fn cover_check(s: &AlgebraElement) -> Result<CoverReport> {
    let pre = cover_preimages(s)?;
    let realization = s.realization();
    let pd = realization.pd();
    let k = s.homogeneous_degree().expect("checked in cover_preimages");
    let lower = layer_basis(k - 1, realization, Variant::Semiholonomic);

    let zs = pd.positive_letters();
    let mut residuals = Vec::new();
    let mut hom_actions: Vec<Vec<Vec<Rat>>> = Vec::new();
    for z in &zs {
        residuals.push(pre.particular.act(z)?);
        let mut cols = Vec::new();
        for h in &pre.homogeneous {
            cols.push(h.act(z)?.coords(&lower)?);
        }
        hom_actions.push(cols);
    }

    // Stacked feasibility system over the homogeneous coefficients.
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    for (zi, _) in zs.iter().enumerate() {
        let r_coords = residuals[zi].coords(&lower)?;
        for row in 0..lower.len() {
            rows.push(hom_actions[zi].iter().map(|col| col[row].clone()).collect());
            rhs.push(-r_coords[row].clone());
        }
    }
    let system = Matrix::from_rows(rows);
    if let Some(coeffs) = system.solve(&rhs) {
        let mut witness = pre.particular.clone();
        for (c, h) in coeffs.iter().zip(&pre.homogeneous) {
            witness = witness.add(&h.scale(c))?;
        }
        debug_assert!(verify_singular(&witness)?);
        debug_assert_eq!(&witness.symmetrize_projection()?, s);
        return Ok(CoverReport {
            exists: true,
            witness: Some(witness),
            obstruction: None,
        });
    }

    // Certificate search, constant residuals first.
    let mut fallback = None;
    for (zi, z) in zs.iter().enumerate() {
        if residuals[zi].is_zero() {
            continue;
        }
        let constant = hom_actions[zi]
            .iter()
            .all(|col| col.iter().all(Zero::is_zero));
        if constant {
            return Ok(CoverReport {
                exists: false,
                witness: None,
                obstruction: Some(Obstruction {
                    generator: *z,
                    residual: residuals[zi].clone(),
                    constant_on_preimages: true,
                }),
            });
        }
        if fallback.is_none() {
            let target = residuals[zi].coords(&lower)?;
            if !in_span(&hom_actions[zi], &target) {
                fallback = Some(Obstruction {
                    generator: *z,
                    residual: residuals[zi].clone(),
                    constant_on_preimages: false,
                });
            }
        }
    }
    Ok(CoverReport {
        exists: false,
        witness: None,
        obstruction: fallback,
    })
}
