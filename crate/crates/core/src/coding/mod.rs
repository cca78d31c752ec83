//! Variable-length prefix coding of `X` with side information `Y` at both
//! ends, allowed to fail with probability `ε`.
//!
//! The encoder for `y` sends `"0"` followed by a payload codeword for `x` with
//! probability `γ_xy = Q(x|y)/P(x|y)`, and the one-bit escape `"1"` otherwise.
//! `Q` is the optimal truncation at `α = 1/(1+ρ)`; payload lengths are Shannon
//! lengths `⌈−log₂ Q̃(x|y)⌉` of the tilted `Q̃ ∝ Q^α`. The cost measure is
//! `M_ρ = E[exp{ρ ℓ(X|Y)}]` with `ℓ` in nats.

mod bits;
mod canonical;

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use bits::BitString;
pub use canonical::{kraft_holds, Codeword, MAX_LENGTH};

use crate::dist::{check_block, mixture_block, JointDistribution, MixtureSource};
use crate::entropy::{smooth_conditional_entropy, EntropyQuery, EntropyResult};
use crate::guessing::{check_rho, evaluate, optimal_strategy};
use crate::math::{ceil, exp, ksum, ln, log2, powf};
use crate::{Error, Result};
use canonical::Decoder;

const LN_2: f64 = core::f64::consts::LN_2;

/// Payload entry for one symbol of `A_y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeEntry {
    pub symbol: usize,
    pub gamma: f64,
    pub codeword: Codeword,
}

/// The code for one value of the side information.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeSlice {
    /// Entries of `A_y` in canonical order (by length, then symbol).
    pub entries: Vec<CodeEntry>,
    /// Indices into `entries`, sorted by symbol.
    by_symbol: Vec<usize>,
    decoder: Decoder,
}

impl CodeSlice {
    fn new(pairs: Vec<(usize, u32, f64)>) -> Result<Self> {
        let gamma_of: Vec<(usize, f64)> = pairs.iter().map(|&(s, _, g)| (s, g)).collect();
        let codewords = canonical::assign(pairs.iter().map(|&(s, l, _)| (s, l)).collect())?;
        let entries: Vec<CodeEntry> = codewords
            .iter()
            .map(|&codeword| CodeEntry {
                symbol: codeword.symbol,
                gamma: gamma_of
                    .iter()
                    .find(|(s, _)| *s == codeword.symbol)
                    .map_or(0.0, |&(_, g)| g),
                codeword,
            })
            .collect();
        let mut by_symbol: Vec<usize> = (0..entries.len()).collect();
        by_symbol.sort_by_key(|&i| entries[i].symbol);
        Ok(Self {
            decoder: Decoder::new(&codewords),
            entries,
            by_symbol,
        })
    }

    pub fn entry(&self, x: usize) -> Option<&CodeEntry> {
        self.by_symbol
            .binary_search_by_key(&x, |&i| self.entries[i].symbol)
            .ok()
            .map(|i| &self.entries[self.by_symbol[i]])
    }

    /// `γ_xy`; zero outside `A_y`.
    pub fn gamma(&self, x: usize) -> f64 {
        self.entry(x).map_or(0.0, |e| e.gamma)
    }

    pub fn lengths(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.codeword.length).collect()
    }
}

/// A complete error-tolerant code: one [`CodeSlice`] per `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeSpec {
    x_size: usize,
    slices: Vec<CodeSlice>,
}

/// Outcome of decoding one transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decoded {
    Symbol(usize),
    Escape,
}

impl CodeSpec {
    /// A code that escapes on every input.
    pub fn escape_only(x_size: usize, y_size: usize) -> Self {
        let empty = CodeSlice::new(Vec::new()).expect("empty code is valid");
        Self {
            x_size,
            slices: alloc::vec![empty; y_size],
        }
    }

    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn y_size(&self) -> usize {
        self.slices.len()
    }

    pub fn slice(&self, y: usize) -> &CodeSlice {
        &self.slices[y]
    }

    /// Codeword sent for `x` under `y` when not escaping: `"0"` then the payload.
    pub fn payload_word(&self, x: usize, y: usize) -> Option<BitString> {
        let e = self.slices.get(y)?.entry(x)?;
        let mut out = BitString::new();
        out.push(false);
        out.push_word(e.codeword.bits, e.codeword.length);
        Some(out)
    }

    fn check_xy(&self, x: usize, y: usize) -> Result<()> {
        if x >= self.x_size {
            return Err(Error::SymbolOutOfRange {
                symbol: x,
                size: self.x_size,
            });
        }
        if y >= self.slices.len() {
            return Err(Error::SymbolOutOfRange {
                symbol: y,
                size: self.slices.len(),
            });
        }
        Ok(())
    }

    fn check_shape(&self, joint: &JointDistribution) -> Result<()> {
        if (self.x_size, self.slices.len()) != (joint.x_size(), joint.y_size()) {
            return Err(Error::AlphabetMismatch {
                expected: (joint.x_size(), joint.y_size()),
                got: (self.x_size, self.slices.len()),
            });
        }
        Ok(())
    }
}

/// Shannon lengths of `Q̃ ∝ Q^α`, nudged up if rounding broke Kraft.
fn tilted_lengths(q: &[f64], alpha: f64) -> Result<Vec<u32>> {
    let weights: Vec<f64> = q.iter().map(|&v| powf(v, alpha)).collect();
    let total = ksum(weights.iter().copied());
    let ideal: Vec<f64> = weights.iter().map(|&w| -log2(w / total)).collect();
    let mut lengths: Vec<u32> = ideal
        .iter()
        .map(|&l| {
            let c = ceil(l - 1e-12).max(0.0);
            if c > MAX_LENGTH as f64 {
                u32::MAX
            } else {
                c as u32
            }
        })
        .collect();
    if let Some(&l) = lengths.iter().find(|&&l| l > MAX_LENGTH) {
        return Err(Error::LengthOverflow(l));
    }
    while !kraft_holds(&lengths) {
        // lengthen the word whose rounding left the least slack
        let i = (0..lengths.len())
            .min_by(|&a, &b| (lengths[a] as f64 - ideal[a]).total_cmp(&(lengths[b] as f64 - ideal[b])))
            .expect("Kraft cannot fail on an empty code");
        lengths[i] += 1;
        if lengths[i] > MAX_LENGTH {
            return Err(Error::LengthOverflow(lengths[i]));
        }
    }
    Ok(lengths)
}

fn code_from_truncation(joint: &JointDistribution, h: &EntropyResult, alpha: f64) -> Result<CodeSpec> {
    let mut slices = Vec::with_capacity(joint.y_size());
    for y in 0..joint.y_size() {
        let pairs = match h.q.slice(y) {
            None => Vec::new(),
            Some(s) => {
                let t = s.truncation();
                let lengths = tilted_lengths(&s.q_desc[..t], alpha)?;
                (0..t)
                    .map(|r| {
                        let gamma = if s.q_desc[r] >= s.probs_desc[r] {
                            1.0
                        } else {
                            s.q_desc[r] / s.probs_desc[r]
                        };
                        (s.order[r], lengths[r], gamma)
                    })
                    .collect()
            }
        };
        slices.push(CodeSlice::new(pairs)?);
    }
    Ok(CodeSpec {
        x_size: joint.x_size(),
        slices,
    })
}

/// Builds the code for moment order `ρ` and error budget `ε`.
pub fn build_code(joint: &JointDistribution, rho: f64, epsilon: f64) -> Result<CodeSpec> {
    check_rho(rho)?;
    let alpha = 1.0 / (1.0 + rho);
    let h = smooth_conditional_entropy(joint, EntropyQuery::new(alpha, epsilon)?);
    code_from_truncation(joint, &h, alpha)
}

fn encode_with<R: Rng>(spec: &CodeSpec, x: usize, y: usize, rng: &mut R) -> Result<BitString> {
    spec.check_xy(x, y)?;
    let Some(e) = spec.slices[y].entry(x) else {
        return Ok(BitString::from_iter([true]));
    };
    let send = e.gamma >= 1.0 || (e.gamma > 0.0 && rng.random::<f64>() < e.gamma);
    if send {
        Ok(spec.payload_word(x, y).expect("entry exists"))
    } else {
        Ok(BitString::from_iter([true]))
    }
}

/// Encodes one symbol; the randomized escape decision is a function of `seed`.
pub fn encode(spec: &CodeSpec, x: usize, y: usize, seed: u64) -> Result<BitString> {
    encode_with(spec, x, y, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Encodes a sequence of `(x, y)` records from one seeded stream.
pub fn encode_all(spec: &CodeSpec, records: &[(usize, usize)], seed: u64) -> Result<Vec<BitString>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    records
        .iter()
        .map(|&(x, y)| encode_with(spec, x, y, &mut rng))
        .collect()
}

/// Decodes one transmission produced under side information `y`.
pub fn decode(spec: &CodeSpec, bits: &BitString, y: usize) -> Result<Decoded> {
    if y >= spec.slices.len() {
        return Err(Error::SymbolOutOfRange {
            symbol: y,
            size: spec.slices.len(),
        });
    }
    let malformed = Error::MalformedBitstring { y };
    match bits.get(0) {
        None => Err(malformed),
        Some(true) if bits.len() == 1 => Ok(Decoded::Escape),
        Some(true) => Err(malformed),
        Some(false) => spec.slices[y]
            .decoder
            .decode_exact(bits.iter().skip(1))
            .map(Decoded::Symbol)
            .ok_or(malformed),
    }
}

/// Exact performance of a code on a source.
#[derive(Debug, Clone, PartialEq)]
pub struct CodeEvaluation {
    pub error_prob: f64,
    /// `M_ρ = E[exp{ρ ℓ}]`, lengths in nats.
    pub moment: f64,
    /// Each `y`'s contribution to `moment`.
    pub per_y: Vec<f64>,
}

/// `p_e = 1 − Σ_{x,y} γ_xy P(x,y)`, summed as escape mass so that `γ ≡ 1`
/// gives exactly zero.
pub fn code_error_probability(spec: &CodeSpec, joint: &JointDistribution) -> Result<f64> {
    spec.check_shape(joint)?;
    let escaped = ksum((0..joint.y_size()).map(|y| escape_mass(&spec.slices[y], joint, y)));
    Ok(escaped.clamp(0.0, 1.0))
}

fn escape_mass(slice: &CodeSlice, joint: &JointDistribution, y: usize) -> f64 {
    ksum((0..joint.x_size()).map(|x| joint.p(x, y) * (1.0 - slice.gamma(x))))
}

/// `M_ρ = Σ P(x,y) [γ 2^{ρ(1+ℓ̂)} + (1−γ) 2^ρ]` with `ℓ̂` in bits.
pub fn code_moment(spec: &CodeSpec, joint: &JointDistribution, rho: f64) -> Result<f64> {
    Ok(evaluate_code(spec, joint, rho)?.moment)
}

pub fn evaluate_code(spec: &CodeSpec, joint: &JointDistribution, rho: f64) -> Result<CodeEvaluation> {
    check_rho(rho)?;
    spec.check_shape(joint)?;
    let escape_cost = exp(rho * LN_2);
    let mut per_y = Vec::with_capacity(joint.y_size());
    for y in 0..joint.y_size() {
        let s = &spec.slices[y];
        let mut terms: Vec<f64> = s
            .entries
            .iter()
            .map(|e| joint.p(e.symbol, y) * e.gamma * exp(rho * (1.0 + e.codeword.length as f64) * LN_2))
            .collect();
        terms.push(escape_mass(s, joint, y) * escape_cost);
        per_y.push(ksum(terms));
    }
    Ok(CodeEvaluation {
        error_prob: code_error_probability(spec, joint)?,
        moment: ksum(per_y.iter().copied()),
        per_y,
    })
}

/// Real-valued lengths `ℓ̄(x|y) = −log(Q(x|y)^α / Σ_{x'} Q(x'|y)^α)` (nats).
#[derive(Debug, Clone, PartialEq)]
pub struct LengthProfile {
    /// `lengths[y][x]`, `None` outside the support of `Q(·|y)`.
    pub lengths: Vec<Vec<Option<f64>>>,
    /// `Σ_x exp{−ℓ̄(x|y)}` per active `y` (zero for inactive `y`).
    pub kraft_sums: Vec<f64>,
    /// `Σ_{x,y} Q(x,y) exp{ρ ℓ̄(x|y)}`, which equals `exp{ρ H^ε_{1/(1+ρ)}(X|Y)}`.
    pub idealized_moment: f64,
}

pub fn converse_length_profile(joint: &JointDistribution, rho: f64, epsilon: f64) -> Result<LengthProfile> {
    check_rho(rho)?;
    let alpha = 1.0 / (1.0 + rho);
    let h = smooth_conditional_entropy(joint, EntropyQuery::new(alpha, epsilon)?);
    let mut lengths = alloc::vec![alloc::vec![None; joint.x_size()]; joint.y_size()];
    let mut kraft_sums = alloc::vec![0.0; joint.y_size()];
    let mut terms = Vec::new();
    for y in 0..joint.y_size() {
        let Some(s) = h.q.slice(y) else { continue };
        let total = ksum(s.q_desc.iter().map(|&v| powf(v, alpha)));
        let mut kraft = Vec::with_capacity(s.q_desc.len());
        for (r, &qv) in s.q_desc.iter().enumerate() {
            let l = ln(total) - alpha * ln(qv);
            lengths[y][s.order[r]] = Some(l);
            kraft.push(exp(-l));
            terms.push(s.py * qv * exp(rho * l));
        }
        kraft_sums[y] = ksum(kraft);
    }
    Ok(LengthProfile {
        lengths,
        kraft_sums,
        idealized_moment: ksum(terms),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeExponentPoint {
    pub n: u32,
    /// `(1/n) log M_ρ` of the built block code.
    pub exponent: f64,
    /// `(ρ/n) H_{1/(1+ρ)}^ε(X^n|Y^n)`.
    pub entropy_exponent: f64,
    /// `(1/n) log C̄*_ρ` of the optimal guessing strategy on the same block.
    pub guess_exponent: f64,
    pub error_prob: f64,
    pub moment: f64,
    /// `exp{ρ H}`, the converse bound on `M_ρ`.
    pub bound_lo: f64,
    /// `2^{2ρ} exp{ρ H} + ε 2^ρ`, the achievability bound.
    pub bound_hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CodeExponentCurve {
    pub points: Vec<CodeExponentPoint>,
    /// `ρ H(X_i|Y_i)` with `ε ∈ [A_i, A_{i+1})`.
    pub target: f64,
}

pub fn coding_exponent_curve(
    mix: &MixtureSource,
    rho: f64,
    epsilon: f64,
    n_list: &[u32],
    max_cells: usize,
) -> Result<CodeExponentCurve> {
    check_rho(rho)?;
    let alpha = 1.0 / (1.0 + rho);
    let query = EntropyQuery::new(alpha, epsilon)?;
    if let Some(&n) = n_list.iter().max() {
        check_block(mix.x_size(), mix.y_size(), n, max_cells)?;
    }
    let mut points = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let block = mixture_block(mix, n, max_cells)?;
        let h = smooth_conditional_entropy(&block, query);
        let spec = code_from_truncation(&block, &h, alpha)?;
        let ev = evaluate_code(&spec, &block, rho)?;
        let guess = evaluate(&optimal_strategy(&block, rho, epsilon)?, &block, rho, None)?;
        let nf = n as f64;
        let e_rho_h = exp(rho * h.value);
        points.push(CodeExponentPoint {
            n,
            exponent: ln(ev.moment) / nf,
            entropy_exponent: rho * h.value / nf,
            guess_exponent: ln(guess.cost) / nf,
            error_prob: ev.error_prob,
            moment: ev.moment,
            bound_lo: e_rho_h,
            bound_hi: powf(2.0, 2.0 * rho) * e_rho_h + epsilon * powf(2.0, rho),
        });
    }
    Ok(CodeExponentCurve {
        points,
        target: rho * crate::asymptotics::single_letter_target(mix, epsilon)?,
    })
}
