//! Smoothed conformal p-values for binary observations.
//!
//! The score of observation `i` is `x_i` itself and
//! `p_n = (#{i <= n : x_i > x_n} + tau_n * #{i <= n : x_i = x_n}) / n`.
//! A 1 therefore lands in `[0, k(n)/n]` and a 0 in `[k(n)/n, 1]`.

use alloc::vec::Vec;

use crate::model::BinarySequence;
use crate::rng::{self, Stream};
use crate::{Error, Result};

/// Conformal p-values `p_1..p_N` with the tie-breaking draws that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct PValueSequence {
    pub pvalues: Vec<f64>,
    pub taus: Vec<f64>,
}

impl PValueSequence {
    pub fn len(&self) -> usize {
        self.pvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pvalues.is_empty()
    }
}

/// Smoothed p-value of the `n`-th observation `x_n`, where `k_n` counts the
/// 1s among the first `n` observations including `x_n`.
pub fn smoothed_pvalue(k_n: usize, n: usize, x_n: u8, tau: f64) -> Result<f64> {
    if n == 0 || k_n > n {
        return Err(Error::Contract("smoothed p-value needs 1 <= n and k_n <= n"));
    }
    if !(0.0..=1.0).contains(&tau) {
        return Err(Error::Contract("tie-breaking draw must lie in [0, 1]"));
    }
    let n_f = n as f64;
    match x_n {
        1 if k_n >= 1 => Ok(tau * k_n as f64 / n_f),
        0 if k_n < n => Ok((k_n as f64 + tau * (n - k_n) as f64) / n_f),
        0 | 1 => Err(Error::Contract("k_n is inconsistent with x_n")),
        value => Err(Error::NonBinary { index: n - 1, value }),
    }
}

/// P-values for every prefix of `seq` given explicit tie-breaking draws.
pub fn pvalues_with_taus(seq: &BinarySequence, taus: Vec<f64>) -> Result<PValueSequence> {
    if taus.len() != seq.len() {
        return Err(Error::Contract("one tie-breaking draw per observation"));
    }
    let pvalues = seq
        .observations()
        .iter()
        .zip(&taus)
        .enumerate()
        .map(|(i, (&x, &tau))| smoothed_pvalue(seq.ones(i + 1), i + 1, x, tau))
        .collect::<Result<Vec<_>>>()?;
    Ok(PValueSequence { pvalues, taus })
}

/// P-values with tie-breaking draws taken from `stream`.
pub fn pvalue_sequence(seq: &BinarySequence, stream: &mut Stream) -> Result<PValueSequence> {
    let taus = (0..seq.len()).map(|_| stream.uniform()).collect();
    pvalues_with_taus(seq, taus)
}

/// [`pvalue_sequence`] on the tie-breaking substream of `seed`.
pub fn pvalue_sequence_seeded(seq: &BinarySequence, seed: u64) -> Result<PValueSequence> {
    pvalue_sequence(seq, &mut Stream::new(seed, rng::TIE_BREAKING))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn examples() {
        assert_eq!(smoothed_pvalue(1, 1, 1, 0.37).unwrap(), 0.37);
        assert!((smoothed_pvalue(3, 10, 1, 0.5).unwrap() - 0.15).abs() < 1e-15);
        assert!((smoothed_pvalue(3, 10, 0, 0.0).unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn contract_errors() {
        assert!(smoothed_pvalue(0, 0, 0, 0.5).is_err());
        assert!(smoothed_pvalue(0, 3, 1, 0.5).is_err());
        assert!(smoothed_pvalue(3, 3, 0, 0.5).is_err());
        assert!(smoothed_pvalue(4, 3, 1, 0.5).is_err());
        assert!(smoothed_pvalue(1, 3, 1, 1.5).is_err());
        assert!(smoothed_pvalue(1, 3, 2, 0.5).is_err());
    }

    #[test]
    fn constant_sequences_give_tau() {
        let taus = vec![0.1, 0.9, 0.5, 0.0, 0.33];
        for bit in [0u8, 1] {
            let seq = BinarySequence::new(vec![bit; 5]).unwrap();
            let p = pvalues_with_taus(&seq, taus.clone()).unwrap();
            for (pv, tau) in p.pvalues.iter().zip(&taus) {
                assert!((pv - tau).abs() < 1e-15, "{pv} vs {tau}");
            }
        }
    }

    #[test]
    fn range_property() {
        let seq = BinarySequence::new(vec![0, 1, 1, 0, 1, 0, 0, 1]).unwrap();
        let p = pvalue_sequence_seeded(&seq, 3).unwrap();
        for (i, (&x, &pv)) in seq.observations().iter().zip(&p.pvalues).enumerate() {
            let frac = seq.ones(i + 1) as f64 / (i + 1) as f64;
            if x == 1 {
                assert!((0.0..=frac).contains(&pv));
            } else {
                assert!((frac..=1.0).contains(&pv));
            }
        }
    }

    #[test]
    fn tau_length_mismatch() {
        let seq = BinarySequence::new(vec![0, 1]).unwrap();
        assert!(pvalues_with_taus(&seq, vec![0.5]).is_err());
    }
}
