//! Normalizer elements of the MAD-group `P_n = Ad(Π_n)` as explicit matrix lifts.
//!
//! An inner lift with matrix `A` is the automorphism `X ↦ A^{-1}·X·A`; an
//! outer lift is `X ↦ −(A^{-1}·X·A)^T`. Lifts never divide: each one carries
//! a companion matrix `A*` with `A*·A = λ·I`, where `λ` is a unit root times
//! a positive integer, and every conjugation is computed as `A*·X·A / λ`.
//!
//! `Φ` sends a lift to the 2×2 matrix `[[a, b], [c, d]]` read off from
//! `A^{-1}QA ∝ Q^a P^b` and `A^{-1}PA ∝ Q^c P^d`. On grading indices an
//! inner lift acts as `(r, s) ↦ (r, s)·Φ`.

mod action;
mod synth;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

pub use action::{IndexAction, IndexImage};
pub use synth::{lift_canonical, lift_of, lift_prime};

use crate::cyclotomic::{ring_order, CyclotomicScalar, UnitRoot};
use crate::error::{Error, Result};
use std::collections::BTreeMap;

use crate::grading::{as_basis_multiple, indices, AlgebraMode, GradedVector, GradingIndex};
use crate::pauli::{
    build_diagonal_d, build_diagonal_d_inverse, build_m, build_sylvester,
    build_sylvester_conjugate, clock_matrix, shift_matrix, CycMatrix, PauliElement,
};
use crate::exec::Execution;
use crate::sl2zn::{enumerate, BruhatCell, GeneratorWord, GroupVariant, Mat2Zn};

/// `λ = unit · factor` with `factor > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftScale {
    pub unit: UnitRoot,
    #[serde(serialize_with = "crate::cyclotomic::serialize_display")]
    pub factor: BigInt,
}

impl LiftScale {
    fn from_scalar(x: &CyclotomicScalar) -> Result<Self> {
        let (unit, factor) = x.as_scaled_unit().ok_or_else(|| {
            Error::Internal(format!("lift scale {x} is not a unit root times an integer"))
        })?;
        Ok(Self { unit, factor })
    }

    fn to_scalar(&self, order: u32) -> CyclotomicScalar {
        self.unit.to_scalar(order).scale(&self.factor)
    }

    /// `x / λ`, exact.
    fn divide(&self, x: &CyclotomicScalar) -> Result<CyclotomicScalar> {
        let order = x.order();
        x.mul_unit(self.unit.inverse(order))
            .div_exact_int(&self.factor)
            .ok_or_else(|| Error::Internal(format!("{x} is not divisible by the lift scale")))
    }
}

/// Where a lift came from, for display and export.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    Generator { name: String },
    Word { word: String, outer: bool },
    Bruhat { cell: BruhatCell },
    /// `Out_I` followed by the Bruhat lift.
    OuterBruhat { cell: BruhatCell },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomorphismLift {
    n: u32,
    outer: bool,
    matrix: CycMatrix,
    inverse: CycMatrix,
    scale: LiftScale,
    provenance: Option<Provenance>,
}

impl AutomorphismLift {
    /// Build from a matrix and a scaled inverse; checks `inverse·matrix = λ·I`
    /// with `λ` a unit root times an integer.
    pub fn from_parts(n: u32, outer: bool, matrix: CycMatrix, inverse: CycMatrix) -> Result<Self> {
        let dim = n as usize;
        if matrix.dim() != dim || inverse.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: n,
                right: matrix.dim() as u32,
            });
        }
        let lambda = inverse
            .try_mul(&matrix)?
            .as_scalar()
            .filter(|l| !l.is_zero())
            .ok_or_else(|| Error::InvalidInput("inverse·matrix is not a nonzero scalar".into()))?;
        let scale = LiftScale::from_scalar(&lambda)?;
        Ok(Self {
            n,
            outer,
            matrix,
            inverse,
            scale,
            provenance: None,
        }
        .normalized())
    }

    fn generator(n: u32, name: &str, outer: bool, matrix: CycMatrix, inverse: CycMatrix) -> Self {
        Self::from_parts(n, outer, matrix, inverse)
            .expect("generator lifts have scalar inverses")
            .with_provenance(Provenance::Generator { name: name.into() })
    }

    pub fn identity(n: u32) -> Self {
        let id = CycMatrix::identity(n as usize, ring_order(n));
        Self::generator(n, "I", false, id.clone(), id)
    }

    /// `Ad_x` for a Pauli group element.
    pub fn ad_pauli(x: &PauliElement) -> Self {
        Self::generator(x.n, &x.to_string(), false, x.to_matrix(), x.inverse().to_matrix())
    }

    pub fn ad_q(n: u32) -> Self {
        Self::ad_pauli(&PauliElement::q(n)).with_provenance(Provenance::Generator { name: "Q".into() })
    }

    pub fn ad_p(n: u32) -> Self {
        Self::ad_pauli(&PauliElement::p(n)).with_provenance(Provenance::Generator { name: "P".into() })
    }

    /// `Ad_S`, `Φ = [[0, -1], [1, 0]]`.
    pub fn ad_s(n: u32) -> Self {
        Self::generator(n, "S", false, build_sylvester(n), build_sylvester_conjugate(n))
    }

    /// `Ad_D`, `Φ = [[1, 0], [1, 1]]`.
    pub fn ad_d(n: u32) -> Self {
        Self::generator(n, "D", false, build_diagonal_d(n), build_diagonal_d_inverse(n))
    }

    /// `Ad_{M_s}` for prime `n`, `Φ = diag(s, s^{-1})`.
    pub fn ad_m(n: u32, s: i64) -> Result<Self> {
        let m = build_m(n, s)?;
        let t = m.transpose();
        Ok(Self::generator(n, &format!("M_{}", s.rem_euclid(n as i64)), false, m, t))
    }

    /// `X ↦ −X^T`, `Φ = diag(-1, 1)`.
    pub fn out_i(n: u32) -> Self {
        let id = CycMatrix::identity(n as usize, ring_order(n));
        Self::generator(n, "Out_I", true, id.clone(), id)
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_outer(&self) -> bool {
        self.outer
    }

    pub fn matrix(&self) -> &CycMatrix {
        &self.matrix
    }

    pub fn scaled_inverse(&self) -> &CycMatrix {
        &self.inverse
    }

    pub fn scale(&self) -> &LiftScale {
        &self.scale
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Strip common integer content from both matrices.
    fn normalized(mut self) -> Self {
        let g1 = self.matrix.content();
        let g2 = self.inverse.content();
        let g = &g1 * &g2;
        if g.is_one() {
            return self;
        }
        let factor = &self.scale.factor / &g;
        debug_assert_eq!(&factor * &g, self.scale.factor);
        self.matrix = self.matrix.div_exact_int(&g1).expect("content divides");
        self.inverse = self.inverse.div_exact_int(&g2).expect("content divides");
        self.scale.factor = factor;
        self
    }

    /// The lift of "apply `self`, then `next`". `Φ` is multiplicative in this order.
    pub fn compose(&self, next: &AutomorphismLift) -> Result<AutomorphismLift> {
        if self.n != next.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: next.n,
            });
        }
        // after an outer map, the next conjugation acts through a transpose:
        // −(A^{-1}XA)^T conjugated by B equals −((A B^{-T})^{-1} X (A B^{-T}))^T
        let (right, right_inv) = if self.outer {
            (next.inverse.transpose(), next.matrix.transpose())
        } else {
            (next.matrix.clone(), next.inverse.clone())
        };
        let matrix = self.matrix.try_mul(&right)?;
        let inverse = right_inv.try_mul(&self.inverse)?;
        let order = ring_order(self.n);
        let lambda = self.scale.to_scalar(order) * next.scale.to_scalar(order);
        Ok(AutomorphismLift {
            n: self.n,
            outer: self.outer ^ next.outer,
            matrix,
            inverse,
            scale: LiftScale::from_scalar(&lambda)?,
            provenance: None,
        }
        .normalized())
    }

    pub fn inverse_lift(&self) -> AutomorphismLift {
        let (matrix, inverse) = if self.outer {
            (self.matrix.transpose(), self.inverse.transpose())
        } else {
            (self.inverse.clone(), self.matrix.clone())
        };
        AutomorphismLift {
            n: self.n,
            outer: self.outer,
            matrix,
            inverse,
            scale: self.scale.clone(),
            provenance: None,
        }
    }

    /// `λ·φ(X)` for a matrix `X`; `outer` selects whether the transpose is applied.
    fn scaled_conjugate(&self, x: &CycMatrix, outer: bool) -> CycMatrix {
        let inner = self.inverse.mul(x).mul(&self.matrix);
        if outer {
            inner.transpose().neg()
        } else {
            inner
        }
    }

    fn apply_with(&self, x: &GradedVector, outer: bool) -> Result<GradedVector> {
        if x.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: x.n(),
            });
        }
        let scaled = self.scaled_conjugate(&x.to_matrix(), outer);
        let expanded = GradedVector::from_matrix(self.n, &scaled)
            .map_err(|e| Error::NotInNormalizer(format!("image has no integral expansion: {e}")))?;
        let mut out = GradedVector::zero(self.n);
        for (idx, c) in expanded.terms() {
            out.add_term(*idx, self.scale.divide(c)?);
        }
        Ok(out)
    }

    /// Exact image `φ(x)`.
    pub fn apply(&self, x: &GradedVector) -> Result<GradedVector> {
        self.apply_with(x, self.outer)
    }

    fn basis_image_with(&self, index: GradingIndex, outer: bool) -> Result<(GradingIndex, CyclotomicScalar)> {
        let image = self.apply_with(&GradedVector::basis(index), outer)?;
        image
            .single_term()
            .map(|(idx, c)| (idx, c.clone()))
            .ok_or_else(|| {
                Error::NotInNormalizer(format!(
                    "image of X{index} has {} terms",
                    image.terms().len()
                ))
            })
    }

    /// `φ(X_{rs}) = ρ·X_{r's'}`; fails if the image is not a single basis element.
    pub fn basis_image(&self, index: GradingIndex) -> Result<(GradingIndex, CyclotomicScalar)> {
        self.basis_image_with(index, self.outer)
    }

    pub fn phi(&self) -> Result<Mat2Zn> {
        let n = self.n;
        let (row_q, _) = self.basis_image_with(GradingIndex::new(n, 1, 0), false)?;
        let (row_p, _) = self.basis_image_with(GradingIndex::new(n, 0, 1), false)?;
        let inner = Mat2Zn::new(n, row_q.r as i64, row_q.s as i64, row_p.r as i64, row_p.s as i64);
        Ok(if self.outer {
            inner.mul(&Mat2Zn::reflection(n))
        } else {
            inner
        })
    }

    /// Exact `A^{-1}·X·A`.
    fn conjugate_exact(&self, x: &CycMatrix) -> Result<CycMatrix> {
        let scaled = self.inverse.mul(x).mul(&self.matrix);
        let dim = scaled.dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(self.scale.divide(scaled.get(i, j)).map_err(|_| {
                    Error::NotInNormalizer("conjugate has no integral entries".into())
                })?);
            }
        }
        Ok(CycMatrix::from_fn(dim, scaled.order(), |i, j| entries[i * dim + j].clone()))
    }

    /// `φ(X_{rs}) = ρ·X_{r's'}` for every index at once.
    ///
    /// Conjugation is multiplicative, so only `Q` and `P` are conjugated and
    /// `A^{-1}Q^rP^sA = (A^{-1}QA)^r·(A^{-1}PA)^s`; the outer sign and transpose
    /// are applied afterwards. Agrees with [`basis_image`](Self::basis_image).
    pub fn basis_images(&self) -> Result<BTreeMap<GradingIndex, (GradingIndex, CyclotomicScalar)>> {
        let n = self.n;
        let monomial = |x: CycMatrix, name: &str| -> Result<CycMatrix> {
            as_basis_multiple(n, &x)
                .map(|_| x)
                .ok_or_else(|| Error::NotInNormalizer(format!("image of {name} is not a multiple of a basis element")))
        };
        let psi_q = monomial(self.conjugate_exact(&clock_matrix(n))?, "Q")?;
        let psi_p = monomial(self.conjugate_exact(&shift_matrix(n))?, "P")?;
        let powers = |x: &CycMatrix| {
            let mut out = vec![CycMatrix::identity(n as usize, x.order())];
            for k in 1..n as usize {
                out.push(out[k - 1].mul(x));
            }
            out
        };
        let (q_pows, p_pows) = (powers(&psi_q), powers(&psi_p));
        let mut out = BTreeMap::new();
        for idx in indices(n, AlgebraMode::Gl) {
            let image = q_pows[idx.r as usize].mul(&p_pows[idx.s as usize]);
            let image = if self.outer { image.transpose().neg() } else { image };
            let found = as_basis_multiple(n, &image)
                .ok_or_else(|| Error::NotInNormalizer(format!("image of X{idx} is not a multiple of a basis element")))?;
            out.insert(idx, found);
        }
        Ok(out)
    }

    /// Permutation and phases on all `n^2` basis elements, read off from the images.
    pub fn index_action(&self) -> Result<IndexAction> {
        IndexAction::of_lift(self)
    }
}

/// `Φ` of a lift; see [`AutomorphismLift::phi`].
pub fn phi_of(lift: &AutomorphismLift) -> Result<Mat2Zn> {
    lift.phi()
}

/// The lift for a word in `A ↦ Ad_D`, `B ↦ Ad_S`.
pub fn lift_of_word(n: u32, word: &GeneratorWord) -> Result<AutomorphismLift> {
    let powers = |g: AutomorphismLift, count: u32| -> Result<Vec<AutomorphismLift>> {
        let mut out = vec![AutomorphismLift::identity(n)];
        for k in 1..count as usize {
            out.push(out[k - 1].compose(&g)?);
        }
        Ok(out)
    };
    let word = word.canonicalize(n);
    let d = powers(AutomorphismLift::ad_d(n), n)?;
    let s = powers(AutomorphismLift::ad_s(n), 4)?;
    let mut acc = AutomorphismLift::identity(n);
    for &(letter, exp) in &word.letters {
        let table = match letter {
            crate::sl2zn::Letter::A => &d,
            crate::sl2zn::Letter::B => &s,
        };
        acc = acc.compose(&table[exp.rem_euclid(table.len() as i64) as usize])?;
    }
    Ok(acc)
}

/// Index actions of lifts of every element of `SL(2,Z_n)` or `H`, in the
/// sorted order of [`enumerate`].
pub fn group_index_actions(
    n: u32,
    variant: GroupVariant,
    max_n: u32,
    exec: Execution,
) -> Result<Vec<IndexAction>> {
    let elements = enumerate(n, variant, max_n, exec)?;
    exec.map(&elements, |h| lift_of(h)?.index_action())
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::omega_power;

    fn gi(n: u32, r: i64, s: i64) -> GradingIndex {
        GradingIndex::new(n, r, s)
    }

    #[test]
    fn generator_images() {
        for n in [3u32, 5, 7] {
            assert_eq!(AutomorphismLift::ad_s(n).phi().unwrap(), Mat2Zn::new(n, 0, -1, 1, 0));
            assert_eq!(AutomorphismLift::ad_d(n).phi().unwrap(), Mat2Zn::new(n, 1, 0, 1, 1));
            assert_eq!(AutomorphismLift::out_i(n).phi().unwrap(), Mat2Zn::new(n, -1, 0, 0, 1));
            assert!(AutomorphismLift::ad_q(n).phi().unwrap().is_identity());
        }
        let m2 = AutomorphismLift::ad_m(5, 2).unwrap();
        assert_eq!(m2.phi().unwrap(), Mat2Zn::diag(5, 2, 3));
    }

    #[test]
    fn out_i_on_basis() {
        let n = 4;
        let lift = AutomorphismLift::out_i(n);
        for r in 0..n as i64 {
            for s in 0..n as i64 {
                let (idx, rho) = lift.basis_image(gi(n, r, s)).unwrap();
                assert_eq!(idx, gi(n, r, -s));
                assert_eq!(rho, -omega_power(n, -r * s));
            }
        }
    }

    #[test]
    fn basis_images_match_direct_conjugation() {
        for n in [3u32, 4, 5] {
            let s = AutomorphismLift::ad_s(n);
            let d = AutomorphismLift::ad_d(n);
            let o = AutomorphismLift::out_i(n);
            let lifts = [s.clone(), d.clone(), o.clone(), o.compose(&s).unwrap().compose(&d).unwrap(), d.compose(&o).unwrap()];
            for lift in &lifts {
                let fast = lift.basis_images().unwrap();
                for (idx, image) in &fast {
                    assert_eq!(&lift.basis_image(*idx).unwrap(), image);
                }
            }
        }
    }

    #[test]
    fn identity_is_trivial() {
        let lift = AutomorphismLift::identity(3);
        let x = GradedVector::basis(gi(3, 2, 1));
        assert_eq!(lift.apply(&x).unwrap(), x);
    }

    #[test]
    fn sylvester_square() {
        let s = AutomorphismLift::ad_s(3);
        let s2 = s.compose(&s).unwrap();
        assert_eq!(s2.phi().unwrap(), Mat2Zn::new(3, -1, 0, 0, -1));
        // S^2 = 3·parity, content stripped
        assert_eq!(s2.matrix(), &crate::pauli::build_parity(3));
        let o = AutomorphismLift::out_i(3);
        let oo = o.compose(&o).unwrap();
        assert!(!oo.is_outer());
        assert!(oo.phi().unwrap().is_identity());
    }

    #[test]
    fn non_normalizer_matrix_is_rejected() {
        // a unipotent shear spreads X_10 over several basis elements
        let m = ring_order(3);
        let one = CyclotomicScalar::one(m);
        let zero = CyclotomicScalar::zero(m);
        let shear = CycMatrix::from_fn(3, m, |i, j| if i == j || (i, j) == (0, 1) { one.clone() } else { zero.clone() });
        let shear_inv = CycMatrix::from_fn(3, m, |i, j| {
            if i == j {
                one.clone()
            } else if (i, j) == (0, 1) {
                -&one
            } else {
                zero.clone()
            }
        });
        let lift = AutomorphismLift::from_parts(3, false, shear, shear_inv).unwrap();
        let got = lift.phi();
        assert!(matches!(got, Err(Error::NotInNormalizer(_))), "{got:?}");
    }
}
