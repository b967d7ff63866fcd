//! Naive reference implementations.
//!
//! Everything here evaluates its definition by direct quantifier sweep,
//! with no spectral shortcuts and no code shared with the fast paths.
//! The equivalence sweeps in the test suites and in `sboxkit-cli verify`
//! hold the fast implementations to these.

use alloc::vec;
use alloc::vec::Vec;

use crate::boolfn::{SBoxTable, TruthTable};
use crate::metrics::{CcModel, CcStatistic, SnrVariant};
use crate::{Error, Result};

/// Which metric [`naive_metric`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricTag {
    Balanced,
    Nonlinearity,
    Degree,
    CorrelationImmunity,
    DifferentialUniformity,
    Robustness,
    FixedPoints,
    OppositeFixedPoints,
    AbsoluteIndicator,
    SumOfSquares,
    AlgebraicImmunity,
    Snr,
    TransparencyOrder,
    ConfusionStatistic,
}

impl MetricTag {
    pub const ALL: [MetricTag; 14] = [
        MetricTag::Balanced,
        MetricTag::Nonlinearity,
        MetricTag::Degree,
        MetricTag::CorrelationImmunity,
        MetricTag::DifferentialUniformity,
        MetricTag::Robustness,
        MetricTag::FixedPoints,
        MetricTag::OppositeFixedPoints,
        MetricTag::AbsoluteIndicator,
        MetricTag::SumOfSquares,
        MetricTag::AlgebraicImmunity,
        MetricTag::Snr,
        MetricTag::TransparencyOrder,
        MetricTag::ConfusionStatistic,
    ];
}

/// Value of a naive metric evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricValue {
    Flag(bool),
    Int(i64),
    Real(f64),
}

#[inline]
fn dot(a: u32, b: u32) -> u32 {
    (a & b).count_ones() & 1
}

/// `W_f(w)` by the direct O(2^n) sum.
pub fn naive_walsh(f: &TruthTable, w: u32) -> i32 {
    let mut acc = 0i32;
    for x in 0..f.len() {
        let e = f.get(x) as u32 ^ dot(w, x as u32);
        acc += if e == 0 { 1 } else { -1 };
    }
    acc
}

fn naive_component(s: &SBoxTable, v: u32) -> Vec<u8> {
    (0..s.len()).map(|x| dot(v, s.get(x) as u32) as u8).collect()
}

fn naive_component_walsh(bits: &[u8], w: u32) -> i64 {
    let mut acc = 0i64;
    for (x, &b) in bits.iter().enumerate() {
        let e = b as u32 ^ dot(w, x as u32);
        acc += if e == 0 { 1 } else { -1 };
    }
    acc
}

fn naive_autocorr(bits: &[u8], a: usize) -> i64 {
    let mut acc = 0i64;
    for x in 0..bits.len() {
        acc += if bits[x] == bits[x ^ a] { 1 } else { -1 };
    }
    acc
}

/// ANF coefficient `a_I` by the inclusion sum over the subsets of `I`.
fn naive_anf_coeff(bits: &[u8], monomial: usize) -> u8 {
    let mut acc = 0u8;
    // Iterate the subsets of `monomial`.
    let mut sub = monomial;
    loop {
        acc ^= bits[sub];
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & monomial;
    }
    acc
}

fn naive_degree_of(bits: &[u8]) -> u32 {
    let mut deg = 0;
    for monomial in 0..bits.len() {
        if naive_anf_coeff(bits, monomial) == 1 {
            deg = deg.max(monomial.count_ones());
        }
    }
    deg
}

/// Permutation check by marking seen entries.
pub fn brute_bijectivity(s: &SBoxTable) -> bool {
    if s.input_bits() != s.output_bits() {
        return false;
    }
    let mut seen = vec![false; s.len()];
    for x in 0..s.len() {
        let y = s.get(x) as usize;
        if seen[y] {
            return false;
        }
        seen[y] = true;
    }
    true
}

/// Textbook Boolean-matrix rank, used as the independent route for the
/// annihilator existence check.
fn bool_matrix_rank(mut rows: Vec<Vec<bool>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let mut pivot = None;
        for (r, row) in rows.iter().enumerate().skip(rank) {
            if row[c] {
                pivot = Some(r);
                break;
            }
        }
        let Some(p) = pivot else { continue };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] {
                for i in 0..cols {
                    let v = rows[rank][i];
                    rows[r][i] ^= v;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn naive_has_annihilator(n: usize, points: &[usize], d: u32) -> bool {
    let monomials: Vec<usize> =
        (0..1usize << n).filter(|m| m.count_ones() <= d).collect();
    if monomials.len() > points.len() {
        return true;
    }
    let rows: Vec<Vec<bool>> = points
        .iter()
        .map(|&x| monomials.iter().map(|&m| x & m == m).collect())
        .collect();
    bool_matrix_rank(rows) < monomials.len()
}

fn naive_boolean_ai(bits: &[u8], n: usize) -> u32 {
    let support: Vec<usize> = (0..bits.len()).filter(|&x| bits[x] == 1).collect();
    let zeros: Vec<usize> = (0..bits.len()).filter(|&x| bits[x] == 0).collect();
    if support.is_empty() || zeros.is_empty() {
        return 0;
    }
    for d in 1..=n as u32 {
        if naive_has_annihilator(n, &support, d) || naive_has_annihilator(n, &zeros, d) {
            return d;
        }
    }
    n as u32
}

/// Direct-definition evaluation of one metric. Sizes: the O(2^(3n))-ish
/// sweeps (transparency order, confusion statistic) accept n <= 6, the
/// rest n <= 8.
pub fn naive_metric(s: &SBoxTable, tag: MetricTag) -> Result<MetricValue> {
    let n = s.input_bits();
    let m = s.output_bits();
    let size = 1usize << n;
    let heavy = matches!(tag, MetricTag::TransparencyOrder | MetricTag::ConfusionStatistic);
    let max = if heavy { 6 } else { 8 };
    if n > max {
        return Err(Error::UnsupportedSize { n, max });
    }

    let value = match tag {
        MetricTag::Balanced => {
            let mut ok = true;
            for v in 1..1u32 << m {
                if naive_component_walsh(&naive_component(s, v), 0) != 0 {
                    ok = false;
                    break;
                }
            }
            MetricValue::Flag(ok)
        }
        MetricTag::Nonlinearity => {
            let mut worst = 0i64;
            for v in 1..1u32 << m {
                let bits = naive_component(s, v);
                for w in 0..size {
                    worst = worst.max(naive_component_walsh(&bits, w as u32).abs());
                }
            }
            MetricValue::Int((1i64 << (n - 1)) - worst / 2)
        }
        MetricTag::Degree => {
            let mut deg = 0;
            for i in 0..m {
                let bits: Vec<u8> = (0..size).map(|x| ((s.get(x) >> i) & 1) as u8).collect();
                deg = deg.max(naive_degree_of(&bits));
            }
            MetricValue::Int(deg as i64)
        }
        MetricTag::CorrelationImmunity => {
            let mut t = 0i64;
            'outer: while (t as usize) < n {
                for v in 1..1u32 << m {
                    let bits = naive_component(s, v);
                    for w in 1..size {
                        if (w.count_ones() as i64) <= t + 1
                            && naive_component_walsh(&bits, w as u32) != 0
                        {
                            break 'outer;
                        }
                    }
                }
                t += 1;
            }
            MetricValue::Int(t)
        }
        MetricTag::DifferentialUniformity => {
            let mut worst = 0i64;
            for a in 1..size {
                for z in 0..1usize << m {
                    let count =
                        (0..size).filter(|&x| (s.get(x) ^ s.get(x ^ a)) as usize == z).count();
                    worst = worst.max(count as i64);
                }
            }
            MetricValue::Int(worst)
        }
        MetricTag::Robustness => {
            let mut l = 0u64;
            for a in 1..size {
                for z in 0..1usize << m {
                    let count =
                        (0..size).filter(|&x| (s.get(x) ^ s.get(x ^ a)) as usize == z).count();
                    l = l.max(count as u64);
                }
            }
            let r = (1..size)
                .filter(|&a| (0..size).any(|x| s.get(x) == s.get(x ^ a)))
                .count() as u64;
            MetricValue::Real(
                (1.0 - r as f64 / size as f64) * (1.0 - l as f64 / size as f64),
            )
        }
        MetricTag::FixedPoints => {
            MetricValue::Int((0..size).filter(|&x| s.get(x) as usize == x).count() as i64)
        }
        MetricTag::OppositeFixedPoints => MetricValue::Int(
            (0..size).filter(|&x| s.get(x) as usize == x ^ (size - 1)).count() as i64,
        ),
        MetricTag::AbsoluteIndicator => {
            let mut worst = 0i64;
            for v in 1..1u32 << m {
                let bits = naive_component(s, v);
                for a in 1..size {
                    worst = worst.max(naive_autocorr(&bits, a).abs());
                }
            }
            MetricValue::Int(worst)
        }
        MetricTag::SumOfSquares => {
            let mut worst = 0i64;
            for v in 1..1u32 << m {
                let bits = naive_component(s, v);
                let energy: i64 = (0..size)
                    .map(|a| {
                        let r = naive_autocorr(&bits, a);
                        r * r
                    })
                    .sum();
                worst = worst.max(energy);
            }
            MetricValue::Int(worst)
        }
        MetricTag::AlgebraicImmunity => {
            let mut best = u32::MAX;
            for v in 1..1u32 << m {
                let bits = naive_component(s, v);
                best = best.min(naive_boolean_ai(&bits, n));
            }
            MetricValue::Int(best as i64)
        }
        MetricTag::Snr => {
            // Direct sum over coordinates and points, sign transform.
            let mut sum4 = 0f64;
            for k in 0..size {
                let mut tot = 0f64;
                for i in 0..m {
                    let bits: Vec<u8> =
                        (0..size).map(|x| ((s.get(x) >> i) & 1) as u8).collect();
                    tot += naive_component_walsh(&bits, k as u32) as f64;
                }
                sum4 += tot * tot * tot * tot;
            }
            MetricValue::Real(m as f64 * (size as f64) * (size as f64) / libm::sqrt(sum4))
        }
        MetricTag::TransparencyOrder => {
            // Walsh values of the derivative boxes at mask pairs (0, v),
            // built from explicit derivative tables.
            let mut best = f64::NEG_INFINITY;
            let den = (size as f64) * (size as f64) - size as f64;
            for beta in 0..1usize << m {
                let mut total = 0f64;
                for a in 1..size {
                    let derivative: Vec<u16> =
                        (0..size).map(|x| s.get(x) ^ s.get(x ^ a)).collect();
                    let mut inner = 0f64;
                    for i in 0..m {
                        let v = 1u32 << i;
                        let mut walsh0 = 0i64;
                        for &d in &derivative {
                            walsh0 += if dot(v, d as u32) == 0 { 1 } else { -1 };
                        }
                        let sign = if dot(v, beta as u32) == 1 { -1.0 } else { 1.0 };
                        inner += sign * walsh0 as f64;
                    }
                    total += inner.abs();
                }
                let lead = (m as f64 - 2.0 * beta.count_ones() as f64).abs();
                best = best.max(lead - total / den);
            }
            MetricValue::Real(best)
        }
        MetricTag::ConfusionStatistic => {
            // Full pair grid, no reliance on the XOR-difference shortcut.
            if n != m {
                return Err(Error::NotSquare { n, m });
            }
            let kappa = |ki: usize, kj: usize| -> f64 {
                let mut acc = 0f64;
                for x in 0..size {
                    let a = (s.get(x ^ ki)).count_ones() as f64;
                    let b = (s.get(x ^ kj)).count_ones() as f64;
                    acc += (a - b) * (a - b);
                }
                acc / size as f64
            };
            let mut values = Vec::new();
            for ki in 0..size {
                for kj in ki + 1..size {
                    values.push(kappa(ki, kj));
                }
            }
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            let var =
                values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64;
            MetricValue::Real(var)
        }
    };
    Ok(value)
}

/// The naive counterpart of a confusion statistic under any offered model
/// and statistic, over the explicit pair grid.
pub fn naive_confusion_statistic(
    s: &SBoxTable,
    model: CcModel,
    statistic: CcStatistic,
) -> Result<f64> {
    let n = s.input_bits();
    let m = s.output_bits();
    if n != m {
        return Err(Error::NotSquare { n, m });
    }
    if n > 6 {
        return Err(Error::UnsupportedSize { n, max: 6 });
    }
    let size = 1usize << n;
    let kappa = |ki: usize, kj: usize| -> f64 {
        match model {
            CcModel::SingleBit => {
                let mut acc = 0f64;
                for b in 0..m {
                    let diff = (0..size)
                        .filter(|&x| (s.get(x ^ ki) >> b) & 1 != (s.get(x ^ kj) >> b) & 1)
                        .count();
                    acc += diff as f64 / size as f64;
                }
                acc / m as f64
            }
            CcModel::HwSquared | CcModel::HwSquaredNormalized => {
                let mut acc = 0f64;
                for x in 0..size {
                    let a = (s.get(x ^ ki)).count_ones() as f64;
                    let b = (s.get(x ^ kj)).count_ones() as f64;
                    acc += (a - b) * (a - b);
                }
                let base = acc / size as f64;
                if model == CcModel::HwSquaredNormalized {
                    base / m as f64
                } else {
                    base
                }
            }
        }
    };
    let mut values = Vec::new();
    for ki in 0..size {
        for kj in ki + 1..size {
            values.push(kappa(ki, kj));
        }
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    Ok(match statistic {
        CcStatistic::Min => values.iter().copied().fold(f64::INFINITY, f64::min),
        CcStatistic::Max => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        CcStatistic::Mean => mean,
        CcStatistic::Variance => {
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64
        }
    })
}

/// Naive SNR under either Walsh variant, direct sums throughout.
pub fn naive_snr(s: &SBoxTable, variant: SnrVariant) -> f64 {
    let n = s.input_bits();
    let m = s.output_bits();
    let size = 1usize << n;
    let mut sum4 = 0f64;
    for k in 0..size {
        let mut tot = 0f64;
        for i in 0..m {
            let mut acc = 0f64;
            for x in 0..size {
                let bit = (s.get(x) >> i) & 1;
                match variant {
                    SnrVariant::SignTransform => {
                        let e = bit as u32 ^ dot(k as u32, x as u32);
                        acc += if e == 0 { 1.0 } else { -1.0 };
                    }
                    SnrVariant::ZeroOne => {
                        if bit == 1 {
                            acc += if dot(k as u32, x as u32) == 0 { 1.0 } else { -1.0 };
                        }
                    }
                }
            }
            tot += acc;
        }
        sum4 += tot * tot * tot * tot;
    }
    m as f64 * (size as f64) * (size as f64) / libm::sqrt(sum4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::TruthTable;

    #[test]
    fn naive_walsh_conventions() {
        // Constant one: W(0) = -2^n under the sign convention.
        let ones = TruthTable::new(vec![1; 8]).unwrap();
        assert_eq!(naive_walsh(&ones, 0), -8);
        // Parity function: spectrum concentrated at the all-ones mask.
        let parity_fn =
            TruthTable::new((0..16u32).map(|x| (x.count_ones() & 1) as u8).collect()).unwrap();
        assert_eq!(naive_walsh(&parity_fn, 0b1111), 16);
    }

    #[test]
    fn brute_bijectivity_cases() {
        let ok = SBoxTable::square(vec![3, 0, 5, 15, 6, 13, 12, 1, 10, 4, 2, 14, 8, 7, 11, 9])
            .unwrap();
        assert!(brute_bijectivity(&ok));
        let bad = SBoxTable::square(vec![0, 0, 2, 3]).unwrap();
        assert!(!brute_bijectivity(&bad));
    }

    #[test]
    fn naive_du_identity() {
        let id = SBoxTable::identity(4).unwrap();
        assert_eq!(
            naive_metric(&id, MetricTag::DifferentialUniformity).unwrap(),
            MetricValue::Int(16)
        );
    }

    #[test]
    fn heavy_metrics_reject_large_n() {
        let s = SBoxTable::identity(7).unwrap();
        assert!(naive_metric(&s, MetricTag::TransparencyOrder).is_err());
        assert!(naive_metric(&s, MetricTag::Nonlinearity).is_ok());
    }
}
