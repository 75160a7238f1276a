use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::AutomorphismLift;
use crate::cyclotomic::{ring_order, UnitRoot};
use crate::error::{Error, Result};
use crate::grading::{indices, AlgebraMode, GradingIndex};
use crate::sl2zn::Mat2Zn;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexImage {
    pub index: GradingIndex,
    pub phase: UnitRoot,
}

/// Induced action `X_{rs} ↦ ρ·X_{r's'}` of a normalizer element on the grading.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexAction {
    pub n: u32,
    pub outer: bool,
    pub phi: Mat2Zn,
    images: BTreeMap<GradingIndex, IndexImage>,
}

impl IndexAction {
    pub(super) fn of_lift(lift: &AutomorphismLift) -> Result<Self> {
        let n = lift.n();
        let mut images = BTreeMap::new();
        for (idx, (target, rho)) in lift.basis_images()? {
            let phase = rho.as_unit_root().ok_or_else(|| {
                Error::NotInNormalizer(format!("phase {rho} on X{idx} is not a unit root"))
            })?;
            images.insert(idx, IndexImage { index: target, phase });
        }
        Ok(Self {
            n,
            outer: lift.is_outer(),
            phi: lift.phi()?,
            images,
        })
    }

    /// Permutation-only action `(r, s) ↦ (r, s)·g`, all phases trivial.
    pub fn from_matrix(g: &Mat2Zn) -> Self {
        let one = UnitRoot {
            sign: 1,
            exponent: 0,
        };
        let images = indices(g.n, AlgebraMode::Gl)
            .into_iter()
            .map(|idx| {
                (
                    idx,
                    IndexImage {
                        index: idx.times(g),
                        phase: one,
                    },
                )
            })
            .collect();
        Self {
            n: g.n,
            outer: false,
            phi: *g,
            images,
        }
    }

    pub fn image(&self, index: &GradingIndex) -> GradingIndex {
        self.images[index].index
    }

    pub fn phase(&self, index: &GradingIndex) -> UnitRoot {
        self.images[index].phase
    }

    pub fn images(&self) -> impl Iterator<Item = (&GradingIndex, &IndexImage)> {
        self.images.iter()
    }

    pub fn is_bijection(&self) -> bool {
        let targets: BTreeSet<_> = self.images.values().map(|i| i.index).collect();
        targets.len() == self.images.len()
            && self
                .images
                .iter()
                .all(|(k, v)| k.is_zero() == v.index.is_zero())
    }

    /// True iff every index maps to `(r, s)·Φ`.
    pub fn matches_right_multiplication(&self) -> bool {
        self.images.iter().all(|(k, v)| v.index == k.times(&self.phi))
    }

    /// True iff every index maps to `−(r, s)·Φ`.
    pub fn matches_negated_right_multiplication(&self) -> bool {
        self.images
            .iter()
            .all(|(k, v)| v.index == k.times(&self.phi).neg())
    }

    /// True iff all phases are trivial, i.e. `φ` fixes every `X_{rs}`.
    pub fn is_phase_free(&self) -> bool {
        self.images.values().all(|v| v.phase.sign == 1 && v.phase.exponent == 0)
    }

    /// True iff the permutation is the identity.
    pub fn is_identity_permutation(&self) -> bool {
        self.images.iter().all(|(k, v)| *k == v.index)
    }

    pub fn ring_order(&self) -> u32 {
        ring_order(self.n)
    }
}
