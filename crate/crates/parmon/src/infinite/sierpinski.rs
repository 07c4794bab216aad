//! The two-element embedding of a finite family of finitary partitions.
//!
//! Fix the dyadic moiety `(X_n)` of ℕ (`X_n = {2^n · odd}`), a moiety `(Y_n)`
//! of `X_0` pulled back through the odd-number enumeration, and the
//! order-isomorphisms `φ_n : X_{n-1} → X_n` (doubling) and `ψ_n : X_n → Y_n`.
//! With `σ_n = φψφ^n : ℕ → X_n` and `τ_n = σ_nψ : ℕ → Y_n`, the pair
//!
//! * `β`: blocks `{x, (2x)'}` plus lower singletons on `X_0`,
//! * `γ`: the pairs `{x, (xψ_n)'}` on each `X_n` together with the image
//!   `δ_n` of the n-th target (upper side through `τ_n`, lower side through
//!   `σ_n`), every uncovered point a singleton,
//!
//! satisfies `β γ β^n γ² (β*)^n γ* β* = target_n` for every provided index.
//! The word has length `2n + 6`.

use std::sync::Arc;

use super::{
    compose_lazy_tagged, restrict_to_window, FinitaryPartition, InfiniteError, LazyPartition,
};
use crate::partition::Partition;

/// Alphabet of the embedding words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenLetter {
    Beta,
    Gamma,
    BetaStar,
    GammaStar,
}

impl GenLetter {
    pub fn symbol(&self) -> &'static str {
        match self {
            GenLetter::Beta => "beta",
            GenLetter::Gamma => "gamma",
            GenLetter::BetaStar => "beta*",
            GenLetter::GammaStar => "gamma*",
        }
    }
}

/// `β γ β^n γ γ (β*)^n γ* β*`, of length `2n + 6`.
pub fn sierpinski_word(n: usize) -> Vec<GenLetter> {
    assert!(n >= 1, "target indices start at 1");
    let mut word = vec![GenLetter::Beta, GenLetter::Gamma];
    word.extend(std::iter::repeat(GenLetter::Beta).take(n));
    word.push(GenLetter::Gamma);
    word.push(GenLetter::Gamma);
    word.extend(std::iter::repeat(GenLetter::BetaStar).take(n));
    word.push(GenLetter::GammaStar);
    word.push(GenLetter::BetaStar);
    word
}

fn nu2(x: u64) -> u32 {
    debug_assert!(x >= 1);
    x.trailing_zeros()
}

fn checked_double(x: u64) -> Result<u64, InfiniteError> {
    x.checked_mul(2).ok_or(InfiniteError::PointOverflow(i64::MAX))
}

/// `ψ : ℕ ∖ X_0 → X_0`, the union of the order-isomorphisms `ψ_n : X_n → Y_n`.
fn psi(x: u64) -> u64 {
    let n = nu2(x);
    debug_assert!(n >= 1, "psi is defined off X_0");
    let m = ((x >> n) + 1) / 2; // rank of x in X_n
    let r = (1u64 << (n - 1)) * (2 * m - 1); // rank pattern of Y_n inside the odds
    2 * r - 1
}

fn psi_inv(y: u64) -> u64 {
    debug_assert!(y % 2 == 1, "psi lands in X_0");
    let r = (y + 1) / 2;
    let n = nu2(r) + 1;
    let m = ((r >> (n - 1)) + 1) / 2;
    (1u64 << n) * (2 * m - 1)
}

/// Which `Y_m` an odd number belongs to.
fn y_part(y: u64) -> u32 {
    debug_assert!(y % 2 == 1);
    nu2((y + 1) / 2) + 1
}

/// `σ_n = φψφ^n : ℕ → X_n`.
fn sigma(n: u32, x: u64) -> Result<u64, InfiniteError> {
    let doubled = checked_double(x)?;
    if n >= 63 {
        return Err(InfiniteError::PointOverflow(i64::MAX));
    }
    psi(doubled)
        .checked_mul(1u64 << n)
        .ok_or(InfiniteError::PointOverflow(i64::MAX))
}

fn sigma_inv(n: u32, z: u64) -> u64 {
    debug_assert_eq!(nu2(z), n, "sigma_inv expects a point of X_n");
    psi_inv(z >> n) / 2
}

/// `τ_n = σ_n ψ : ℕ → Y_n`.
fn tau(n: u32, x: u64) -> Result<u64, InfiniteError> {
    Ok(psi(sigma(n, x)?))
}

fn tau_inv(n: u32, y: u64) -> u64 {
    sigma_inv(n, psi_inv(y))
}

/// Builds `(β, γ)` for the given finite list of finitary targets.
pub fn sierpinski_embed(targets: &[FinitaryPartition]) -> (LazyPartition, LazyPartition) {
    let beta = LazyPartition::new("sierpinski-beta", move |p| {
        if p == 0 {
            return Err(InfiniteError::ZeroPoint);
        }
        if p > 0 {
            let doubled = checked_double(p as u64)? as i64;
            Ok(vec![p, -doubled])
        } else {
            let y = (-p) as u64;
            if y % 2 == 0 {
                Ok(vec![(y / 2) as i64, p])
            } else {
                Ok(vec![p])
            }
        }
    });
    let targets: Arc<Vec<FinitaryPartition>> = Arc::new(targets.to_vec());
    let gamma = LazyPartition::new("sierpinski-gamma", move |p| gamma_block(&targets, p));
    (beta, gamma)
}

fn gamma_block(targets: &[FinitaryPartition], p: i64) -> Result<Vec<i64>, InfiniteError> {
    if p == 0 {
        return Err(InfiniteError::ZeroPoint);
    }
    let t = targets.len() as u32;
    if p > 0 {
        let x = p as u64;
        let n = nu2(x);
        if n >= 1 {
            // x ∈ X_n with n ≥ 1: the pair {x, (xψ_n)'}
            return Ok(vec![p, -(psi(x) as i64)]);
        }
        // x ∈ Y_m ⊆ X_0: upper side of δ_m when the m-th target exists
        let m = y_part(x);
        if m > t {
            return Ok(vec![p]);
        }
        let u = tau_inv(m, x);
        map_target_block(&targets[m as usize - 1], u as i64, m)
    } else {
        let z = (-p) as u64;
        let n = nu2(z);
        if n == 0 {
            // z' with z ∈ X_0 = ⊔Y_m: lower end of a ψ-pair
            return Ok(vec![psi_inv(z) as i64, p]);
        }
        if n > t {
            return Ok(vec![p]);
        }
        let u = sigma_inv(n, z);
        map_target_block(&targets[n as usize - 1], -(u as i64), n)
    }
}

/// The δ_n image of the target block containing `point`: upper labels map
/// through `τ_n`, lower labels through `σ_n`.
fn map_target_block(
    target: &FinitaryPartition,
    point: i64,
    n: u32,
) -> Result<Vec<i64>, InfiniteError> {
    let block = target.block_of(point)?;
    let mut out = Vec::with_capacity(block.len());
    for v in block {
        if v > 0 {
            out.push(tau(n, v as u64)? as i64);
        } else {
            out.push(-(sigma(n, (-v) as u64)? as i64));
        }
    }
    super::finitary::sort_signed(&mut out);
    Ok(out)
}

/// Folds the word over `{β, γ, β*, γ*}` with fuel-bounded lazy composition
/// and restricts the result to `{±1..±window}`.  Horizon errors carry the
/// 1-based index of the composition step that ran out of fuel.
pub fn evaluate_word(
    word: &[GenLetter],
    beta: &LazyPartition,
    gamma: &LazyPartition,
    fuel: usize,
    window: u32,
) -> Result<Partition, InfiniteError> {
    let letter = |l: GenLetter| match l {
        GenLetter::Beta => beta.clone(),
        GenLetter::Gamma => gamma.clone(),
        GenLetter::BetaStar => beta.star(),
        GenLetter::GammaStar => gamma.star(),
    };
    let mut iter = word.iter();
    let first = iter.next().expect("nonempty word");
    let mut acc = letter(*first);
    for (i, l) in iter.enumerate() {
        acc = compose_lazy_tagged(&acc, &letter(*l), fuel, Some(i + 2));
    }
    restrict_to_window(&acc, window)
}
