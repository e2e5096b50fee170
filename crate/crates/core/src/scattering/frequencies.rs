use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{self, CompensatedComplexSum};
use crate::model::DefectArray;

pub const MAX_FREQUENCY_DEFECTS: usize = 20;

/// Two frequencies closer than this are merged into one term.
pub const FREQUENCY_MERGE_TOLERANCE: f64 = 1e-12;

/// Visits every strictly decreasing index chain `i_1 > i_2 > ... > i_l`
/// (including the empty chain) in lexicographic order of the index
/// sequences. `extend(state, i, positive)` appends index `i` entering with a
/// `+` or `-` sign; `visit` receives the chain length and the folded state.
///
/// Chains of odd length build the reflection numerator, chains of even length
/// the common denominator; each family has `2^{N-1}` members for `N >= 1`.
pub(crate) fn fold_chains<S, G, F>(n: usize, init: S, extend: G, mut visit: F)
where
    S: Copy,
    G: Fn(S, usize, bool) -> S,
    F: FnMut(usize, S),
{
    fn descend<S: Copy, G: Fn(S, usize, bool) -> S, F: FnMut(usize, S)>(
        below: usize,
        len: usize,
        state: S,
        extend: &G,
        visit: &mut F,
    ) {
        for i in 0..below {
            let next = extend(state, i, len.is_multiple_of(2));
            visit(len + 1, next);
            descend(i, len + 1, next, extend, visit);
        }
    }
    visit(0, init);
    descend(n, 0, init, &extend, &mut visit);
}

/// [`fold_chains`] over the alternating sum `s_{i_1} - s_{i_2} + s_{i_3} - ...`.
pub(crate) fn for_each_chain<F: FnMut(usize, f64)>(positions: &[f64], visit: F) {
    fold_chains(
        positions.len(),
        0.0,
        |sum, i, positive| {
            if positive {
                sum + positions[i]
            } else {
                sum - positions[i]
            }
        },
        visit,
    );
}

/// One oscillatory term `c(beta) e^{i frequency k}` of a closed-form sum.
///
/// Distinct chains can share a frequency in commensurate geometries, so the
/// coefficient is kept as a polynomial in `beta`: `weights` lists
/// `(power, multiplicity)` pairs sorted by power.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyTerm {
    pub frequency: f64,
    pub weights: Vec<(u32, u64)>,
}

impl FrequencyTerm {
    pub fn coefficient(&self, beta: f64) -> f64 {
        self.weights
            .iter()
            .map(|&(power, count)| count as f64 * libm::pow(beta, power as f64))
            .sum()
    }

    /// Number of chains merged into this term.
    pub fn multiplicity(&self) -> u64 {
        self.weights.iter().map(|&(_, c)| c).sum()
    }
}

/// Term tables of the closed-form amplitudes `T = gamma^N / D`, `R = B / D`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormTerms {
    pub n_defects: usize,
    /// Denominator `D_N(k)`, sorted by frequency.
    pub d_terms: Vec<FrequencyTerm>,
    /// Reflection numerator `B_N(k)`, sorted by frequency.
    pub b_terms: Vec<FrequencyTerm>,
}

impl ClosedFormTerms {
    fn sum(terms: &[FrequencyTerm], beta: f64, k: f64) -> Complex64 {
        let mut acc = CompensatedComplexSum::new();
        for term in terms {
            acc.add(math::cis(term.frequency * k) * term.coefficient(beta));
        }
        acc.value()
    }

    pub fn denominator(&self, beta: f64, k: f64) -> Complex64 {
        Self::sum(&self.d_terms, beta, k)
    }

    pub fn numerator(&self, beta: f64, k: f64) -> Complex64 {
        Self::sum(&self.b_terms, beta, k)
    }
}

fn merge(mut raw: Vec<(f64, u32)>) -> Vec<FrequencyTerm> {
    raw.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut out: Vec<FrequencyTerm> = Vec::new();
    for (frequency, power) in raw {
        match out.last_mut() {
            Some(last) if frequency - last.frequency <= FREQUENCY_MERGE_TOLERANCE => {
                match last.weights.binary_search_by(|w| w.0.cmp(&power)) {
                    Ok(i) => last.weights[i].1 += 1,
                    Err(i) => last.weights.insert(i, (power, 1)),
                }
            }
            _ => out.push(FrequencyTerm {
                frequency,
                weights: alloc::vec![(power, 1)],
            }),
        }
    }
    out
}

/// Lists the `(beta^l, 2 * alternating sum)` terms of the closed-form
/// denominator and numerator, merging coincident frequencies.
pub fn enumerate_frequencies(defects: &DefectArray) -> Result<ClosedFormTerms> {
    let n = defects.len();
    if n == 0 {
        return Err(Error::invalid(
            "frequency enumeration needs at least one defect",
        ));
    }
    if n > MAX_FREQUENCY_DEFECTS {
        return Err(Error::Capacity {
            requested: n,
            max: MAX_FREQUENCY_DEFECTS,
        });
    }
    let half = 1usize << (n - 1);
    let mut even = Vec::with_capacity(half);
    let mut odd = Vec::with_capacity(half);
    for_each_chain(defects.positions(), |len, sum| {
        let entry = (2.0 * sum, len as u32);
        if len % 2 == 0 {
            even.push(entry);
        } else {
            odd.push(entry);
        }
    });
    Ok(ClosedFormTerms {
        n_defects: n,
        d_terms: merge(even),
        b_terms: merge(odd),
    })
}
