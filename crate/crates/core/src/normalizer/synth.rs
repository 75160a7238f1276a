use super::{lift_of_word, AutomorphismLift, Provenance};
use crate::error::{Error, Result};
use crate::pauli::is_prime;
use crate::sl2zn::{bruhat_decompose, decompose_to_word, BruhatCell, Mat2Zn};

fn verified(lift: AutomorphismLift, target: &Mat2Zn) -> Result<AutomorphismLift> {
    let got = lift.phi()?;
    if got != *target {
        return Err(Error::Internal(format!(
            "synthesized lift has Φ = {got}, expected {target}"
        )));
    }
    Ok(lift)
}

/// A lift with `Φ = h` for any `h` of determinant `±1`.
///
/// The determinant `−1` coset is reduced through `Out_I`; the rest goes
/// through the generator word with `A ↦ Ad_D` and `B ↦ Ad_S`.
pub fn lift_of(h: &Mat2Zn) -> Result<AutomorphismLift> {
    let n = h.n;
    if !h.is_in_h() {
        return Err(Error::WrongDeterminant {
            det: h.det() as u64,
            n,
            expected: "±1",
        });
    }
    let (outer, sl_part) = if h.is_sl() {
        (false, *h)
    } else {
        (true, Mat2Zn::reflection(n).mul(h))
    };
    let word = decompose_to_word(&sl_part)?.word;
    let inner = lift_of_word(n, &word)?;
    let lift = if outer {
        AutomorphismLift::out_i(n).compose(&inner)?
    } else {
        inner
    };
    let lift = lift.with_provenance(Provenance::Word {
        word: word.to_string(),
        outer,
    });
    verified(lift, h)
}

/// Closed-form lift for prime `n` from the Bruhat cell of `h`:
/// `L(a) ↦ D^a`, `diag(b, b^{-1}) ↦ M_b`, `B ↦ S`.
pub fn lift_prime(h: &Mat2Zn) -> Result<AutomorphismLift> {
    let n = h.n;
    if !is_prime(n) {
        return Err(Error::NotPrime {
            n,
            what: "the closed-form lift",
        });
    }
    let cell = bruhat_decompose(h)?;
    let d = AutomorphismLift::ad_d(n);
    let d_pow = |k: u32| -> Result<AutomorphismLift> {
        (0..k).try_fold(AutomorphismLift::identity(n), |acc, _| acc.compose(&d))
    };
    let lift = match cell {
        BruhatCell::Small { a, b } => d_pow(a)?.compose(&AutomorphismLift::ad_m(n, b as i64)?)?,
        BruhatCell::Big { a, b, c } => d_pow(a)?
            .compose(&AutomorphismLift::ad_m(n, b as i64)?)?
            .compose(&AutomorphismLift::ad_s(n))?
            .compose(&d_pow(c)?)?,
    };
    verified(lift.with_provenance(Provenance::Bruhat { cell }), h)
}

/// Preferred lift for display: the closed Bruhat form for prime `n`
/// (through `Out_I` on the determinant `−1` coset), otherwise [`lift_of`].
pub fn lift_canonical(h: &Mat2Zn) -> Result<AutomorphismLift> {
    let n = h.n;
    if !is_prime(n) || !h.is_in_h() {
        return lift_of(h);
    }
    if h.is_sl() {
        return lift_prime(h);
    }
    let inner = lift_prime(&Mat2Zn::reflection(n).mul(h))?;
    let provenance = inner.provenance().cloned();
    let mut lift = AutomorphismLift::out_i(n).compose(&inner)?;
    if let Some(Provenance::Bruhat { cell }) = provenance {
        lift = lift.with_provenance(Provenance::OuterBruhat { cell });
    }
    verified(lift, h)
}
