//! Entropy-typical subspaces of `ρ^{⊗N}`.
//!
//! In the eigenbasis of `ρ` the product state is diagonal with entries
//! `Πⱼ p_{iⱼ}`, so its high-probability subspace is spanned by the basis
//! sequences whose probability is `2^{−N(S±δ)}`. Sequences with the same
//! symbol counts share a probability, so everything here is computed per
//! type class with exact multinomial multiplicities; the `kᴺ`-dimensional
//! projector is never built except for tiny `N` (see [`typical_sequences`]).

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::math::{exp2, log2};
use crate::state::shannon_entropy;

pub const MAX_SYMBOLS: usize = 8;
pub const MAX_BLOCK: usize = 64;
/// Upper bound on the number of type classes enumerated in one call.
pub const MAX_CLASSES: usize = 2_000_000;
/// Largest `kᴺ` for which individual sequences are listed.
pub const MAX_SEQUENCES: usize = 256;

pub const DEFAULT_DELTA: f64 = 0.1;

/// All sequences with a given symbol composition.
#[derive(Clone, Debug, PartialEq)]
pub struct TypeClass {
    /// Occurrences of each symbol; sums to N.
    pub counts: Vec<u32>,
    /// `Σᵢ countsᵢ log₂ pᵢ`, the log-probability of one member sequence.
    pub log2_prob_per_sequence: f64,
    /// `N! / Πᵢ countsᵢ!`.
    pub multiplicity: BigUint,
}

impl TypeClass {
    /// Total probability of the class.
    pub fn mass(&self) -> f64 {
        scaled_count(&self.multiplicity, self.log2_prob_per_sequence)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TypicalSet {
    pub probs: Vec<f64>,
    pub n: usize,
    pub delta: f64,
    /// Shannon entropy of `probs` in bits.
    pub entropy: f64,
    pub classes: Vec<TypeClass>,
    pub total_mass: f64,
    /// Exact number of typical sequences.
    pub dimension: BigUint,
    /// `log₂ dimension`; `-∞` when no sequence is typical.
    pub log2_dimension: f64,
}

impl TypicalSet {
    /// `N(S + δ) + k log₂(N + 1)`, the type-counting bound on `log2_dimension`.
    pub fn dimension_bound(&self) -> f64 {
        let n = self.n as f64;
        n * (self.entropy + self.delta) + self.probs.len() as f64 * log2(n + 1.0)
    }
}

/// `count · 2^log2_weight` without overflowing for large counts.
fn scaled_count(count: &BigUint, log2_weight: f64) -> f64 {
    if count.is_zero() || log2_weight == f64::NEG_INFINITY {
        return 0.0;
    }
    exp2(big_log2(count) + log2_weight)
}

fn big_log2(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    // Keep the top 64 bits; the rest only affects digits beyond f64 precision.
    let bits = x.bits();
    if bits <= 64 {
        return log2(x.to_f64().unwrap_or(f64::INFINITY));
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    log2(top) + shift as f64
}

fn validate(probs: &[f64], n: usize) -> Result<()> {
    let sum: f64 = probs.iter().sum();
    if probs.is_empty()
        || probs.iter().any(|&p| !(p >= 0.0) || !p.is_finite())
        || (sum - 1.0).abs() > 1e-12
    {
        return Err(Error::InvalidProbabilities { sum });
    }
    if probs.len() > MAX_SYMBOLS {
        return Err(Error::SizeCap {
            what: "symbol count",
            size: probs.len(),
            cap: MAX_SYMBOLS,
        });
    }
    if n == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "n",
            value: 0.0,
        });
    }
    if n > MAX_BLOCK {
        return Err(Error::SizeCap {
            what: "block length",
            size: n,
            cap: MAX_BLOCK,
        });
    }
    let classes = class_count(n, probs.len());
    if classes > MAX_CLASSES {
        return Err(Error::SizeCap {
            what: "type class count",
            size: classes,
            cap: MAX_CLASSES,
        });
    }
    Ok(())
}

/// `C(n + k − 1, k − 1)`, saturating.
fn class_count(n: usize, k: usize) -> usize {
    let mut acc: u128 = 1;
    for i in 1..k as u128 {
        acc = acc * (n as u128 + i) / i;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

fn binomial_table(n: usize) -> Vec<Vec<BigUint>> {
    let mut table: Vec<Vec<BigUint>> = Vec::with_capacity(n + 1);
    for row in 0..=n {
        let mut r = vec![BigUint::one(); row + 1];
        for k in 1..row {
            r[k] = &table[row - 1][k - 1] + &table[row - 1][k];
        }
        table.push(r);
    }
    table
}

/// Every composition of `n` into `k` non-negative parts, in lexicographic
/// order of the counts vector.
fn compositions(n: usize, k: usize, mut visit: impl FnMut(&[u32])) {
    fn rec(remaining: u32, slot: usize, counts: &mut [u32], visit: &mut dyn FnMut(&[u32])) {
        if slot + 1 == counts.len() {
            counts[slot] = remaining;
            visit(counts);
            return;
        }
        for c in 0..=remaining {
            counts[slot] = c;
            rec(remaining - c, slot + 1, counts, visit);
        }
    }
    let mut counts = vec![0u32; k];
    rec(n as u32, 0, &mut counts, &mut visit);
}

/// All type classes of length-`n` sequences over `probs`, typical or not.
pub fn type_classes(probs: &[f64], n: usize) -> Result<Vec<TypeClass>> {
    validate(probs, n)?;
    let log_probs: Vec<f64> = probs.iter().map(|&p| log2(p)).collect();
    let binom = binomial_table(n);
    let mut out = Vec::new();
    compositions(n, probs.len(), |counts| {
        let mut remaining = n;
        let mut multiplicity = BigUint::one();
        let mut lp = 0.0;
        for (&c, &l) in counts.iter().zip(&log_probs) {
            let c = c as usize;
            multiplicity *= &binom[remaining][c];
            remaining -= c;
            if c > 0 {
                lp += c as f64 * l;
            }
        }
        out.push(TypeClass {
            counts: counts.to_vec(),
            log2_prob_per_sequence: lp,
            multiplicity,
        });
    });
    Ok(out)
}

fn is_typical(class: &TypeClass, n: usize, entropy: f64, delta: f64) -> bool {
    let rate = -class.log2_prob_per_sequence / n as f64;
    rate.is_finite() && (rate - entropy).abs() <= delta
}

/// The entropy-typical set `{x : |−log₂P(x)/N − S| ≤ δ}`.
pub fn typical_set(probs: &[f64], n: usize, delta: f64) -> Result<TypicalSet> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::ParameterOutOfRange {
            name: "delta",
            value: delta,
        });
    }
    let entropy = shannon_entropy(probs);
    let classes: Vec<TypeClass> = type_classes(probs, n)?
        .into_iter()
        .filter(|c| is_typical(c, n, entropy, delta))
        .collect();

    let total_mass = classes.iter().map(TypeClass::mass).sum::<f64>().min(1.0);
    let dimension: BigUint = classes.iter().map(|c| &c.multiplicity).sum();
    let log2_dimension = big_log2(&dimension);
    Ok(TypicalSet {
        probs: probs.to_vec(),
        n,
        delta,
        entropy,
        classes,
        total_mass,
        dimension,
        log2_dimension,
    })
}

/// Typical-set mass for each block length in `ns`.
pub fn typical_mass_convergence(probs: &[f64], delta: f64, ns: &[usize]) -> Result<Vec<(usize, f64)>> {
    ns.iter()
        .map(|&n| typical_set(probs, n, delta).map(|t| (n, t.total_mass)))
        .collect()
}

/// `Σ_{x typical} P(x)²`: the purity of `ρ^{⊗N}` restricted to its typical
/// subspace.
pub fn hp_purity(probs: &[f64], n: usize, delta: f64) -> Result<f64> {
    let set = typical_set(probs, n, delta)?;
    Ok(set
        .classes
        .iter()
        .map(|c| scaled_count(&c.multiplicity, 2.0 * c.log2_prob_per_sequence))
        .sum())
}

/// Indices of the typical basis sequences of `kᴺ` (first symbol most
/// significant), for materializing the projector at small sizes.
pub fn typical_sequences(probs: &[f64], n: usize, delta: f64) -> Result<Vec<usize>> {
    if !(delta > 0.0) {
        return Err(Error::ParameterOutOfRange {
            name: "delta",
            value: delta,
        });
    }
    validate(probs, n)?;
    let k = probs.len();
    let total = crate::channel::checked_pow(k, n).unwrap_or(usize::MAX);
    if total > MAX_SEQUENCES {
        return Err(Error::SizeCap {
            what: "sequence space",
            size: total,
            cap: MAX_SEQUENCES,
        });
    }
    let entropy = shannon_entropy(probs);
    let log_probs: Vec<f64> = probs.iter().map(|&p| log2(p)).collect();
    Ok((0..total)
        .filter(|&index| {
            let mut rem = index;
            let mut lp = 0.0;
            for _ in 0..n {
                lp += log_probs[rem % k];
                rem /= k;
            }
            let rate = -lp / n as f64;
            rate.is_finite() && (rate - entropy).abs() <= delta
        })
        .collect())
}
