//! Security properties of an S-box.
//!
//! Integer-valued properties (nonlinearity, degree, correlation immunity,
//! differential uniformity, autocorrelation indicators, algebraic immunity,
//! fixed-point counts) are computed exactly. The three side-channel
//! indicators (SNR, transparency order, confusion coefficients) are reals,
//! but each is derived from an exact integer kernel so that repeated
//! evaluations and the search fast paths agree bit for bit.
//!
//! Where the literature admits more than one reading, the variant is an
//! explicit enum ([`SnrVariant`], [`CcModel`], [`CcStatistic`]) and the
//! default is the calibrated choice that reproduces the published
//! reference values; `sboxkit-cli verify` re-derives those calibrations.

use alloc::vec;
use alloc::vec::Vec;

use crate::boolfn::{parity, SBoxTable, TruthTable};
use crate::{Error, Result};

/// Largest variable count supported by the algebraic-immunity and
/// confusion-coefficient computations.
pub const MAX_REPORT_VARS: usize = 8;

/// Which Walsh transform feeds the SNR kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SnrVariant {
    /// Sign transform `sum_x (-1)^(f(x) XOR w·x)` (calibrated default).
    #[default]
    SignTransform,
    /// 0/1 transform `sum_x f(x)·(-1)^(w·x)`.
    ZeroOne,
}

/// DPA selection model behind the confusion coefficient grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CcModel {
    /// Per-bit disagreement probability, averaged over output bits.
    SingleBit,
    /// Squared Hamming-weight distance of the two predictions
    /// (calibrated default).
    #[default]
    HwSquared,
    /// [`CcModel::HwSquared`] divided by the output width.
    HwSquaredNormalized,
}

/// Scalar statistic of the confusion grid reported as the kappa value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CcStatistic {
    Min,
    Mean,
    Max,
    /// Variance over distinct key pairs (calibrated default).
    #[default]
    Variance,
}

/// Variant selection for the real-valued metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MetricOptions {
    pub snr_variant: SnrVariant,
    pub cc_model: CcModel,
    pub cc_statistic: CcStatistic,
}

/// An exact nonnegative rational; robustness is reported this way so that
/// values like 15/16 survive without rounding.
#[derive(Debug, Clone, Copy, Eq, Hash)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        debug_assert!(den != 0);
        Self { num, den }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.num as u128 * other.den as u128 == other.num as u128 * self.den as u128
    }
}

/// One value per security property.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub balanced: bool,
    pub nl: u32,
    pub degree: u32,
    pub ci: u32,
    pub du: u32,
    pub robustness: Ratio,
    pub fp: u32,
    pub ofp: u32,
    pub abs_indicator: u32,
    pub sum_sq: u64,
    pub ai: u32,
    pub snr: f64,
    pub to: f64,
    pub cc_min: f64,
    pub cc_mean: f64,
    pub cc_max: f64,
    /// The scalar selected by `cc_statistic`.
    pub cc_reported: f64,
    pub cc_model: CcModel,
    pub cc_statistic: CcStatistic,
    pub snr_variant: SnrVariant,
}

/// `true` iff every nonzero component function is balanced. For n = m this
/// is equivalent to bijectivity.
pub fn is_balanced(s: &SBoxTable) -> bool {
    let m = s.output_bits();
    (1u32..1 << m).all(|v| {
        // W(0) = 0 without a transform: just count outputs.
        let ones: usize = s.entries().iter().map(|&e| parity(v & e as u32) as usize).sum();
        2 * ones == s.len()
    })
}

/// `NL(S) = 2^(n-1) - max |W_{v·S}(w)| / 2` over nonzero `v` and all `w`.
pub fn nonlinearity(s: &SBoxTable) -> u32 {
    let n = s.input_bits();
    let m = s.output_bits();
    let mut max_abs = 0i32;
    for v in 1u32..1 << m {
        let w = s.component(v).expect("mask in range").walsh_spectrum();
        max_abs = max_abs.max(w.max_abs());
    }
    (1u32 << (n - 1)) - (max_abs as u32) / 2
}

/// Maximum ANF monomial weight over the coordinate functions.
pub fn algebraic_degree(s: &SBoxTable) -> u32 {
    (0..s.output_bits())
        .map(|i| s.coordinate(i).expect("coordinate in range").anf().degree() as u32)
        .max()
        .unwrap_or(0)
}

/// Correlation immunity order: the largest `t` such that `W_{v·S}(w) = 0`
/// for every nonzero `v` and every `w` with `1 <= hw(w) <= t`; 0 when no
/// such `t >= 1` exists.
pub fn correlation_immunity(s: &SBoxTable) -> u32 {
    let n = s.input_bits();
    let m = s.output_bits();
    let mut min_weight = n as u32 + 1;
    for v in 1u32..1 << m {
        let w = s.component(v).expect("mask in range").walsh_spectrum();
        for mask in 1..1usize << n {
            if w.get(mask) != 0 {
                min_weight = min_weight.min((mask as u32).count_ones());
            }
        }
    }
    min_weight - 1
}

/// Differential uniformity: the largest difference-table entry over
/// nonzero input differences.
pub fn differential_uniformity(s: &SBoxTable) -> u32 {
    s.difference_table().max_nonzero_row()
}

/// Number of fixed points `S(x) = x`. Requires n = m.
pub fn fixed_points(s: &SBoxTable) -> Result<u32> {
    require_square(s)?;
    Ok(s.entries().iter().enumerate().filter(|&(x, &y)| y as usize == x).count() as u32)
}

/// Number of opposite fixed points `S(x) = complement(x)`. Requires n = m.
pub fn opposite_fixed_points(s: &SBoxTable) -> Result<u32> {
    require_square(s)?;
    let full = s.len() - 1;
    Ok(s.entries().iter().enumerate().filter(|&(x, &y)| y as usize == x ^ full).count() as u32)
}

fn require_square(s: &SBoxTable) -> Result<()> {
    if s.input_bits() != s.output_bits() {
        return Err(Error::NotSquare { n: s.input_bits(), m: s.output_bits() });
    }
    Ok(())
}

/// Robustness to differential cryptanalysis:
/// `(1 - R/2^n)(1 - L/2^n)` with `L` the largest difference-table entry
/// over nonzero rows and `R` the number of nonzero entries in column 0
/// excluding row 0.
pub fn robustness(s: &SBoxTable) -> Ratio {
    let ddt = s.difference_table();
    let size = 1u64 << s.input_bits();
    let l = ddt.max_nonzero_row() as u64;
    let r = ddt.zero_column_nonzero_count() as u64;
    Ratio::new((size - r) * (size - l), size * size)
}

/// Largest absolute autocorrelation over nonzero components and nonzero
/// shifts.
pub fn absolute_indicator(s: &SBoxTable) -> u32 {
    let m = s.output_bits();
    let mut best = 0i32;
    for v in 1u32..1 << m {
        let ac = s.component(v).expect("mask in range").autocorrelation();
        best = best.max(ac.max_abs_nonzero_shift());
    }
    best as u32
}

/// Sum-of-squares indicator: the largest autocorrelation energy
/// `sum_a r(a)^2` over nonzero components, the shift-0 term included.
pub fn sum_of_squares(s: &SBoxTable) -> u64 {
    let m = s.output_bits();
    let mut best = 0i64;
    for v in 1u32..1 << m {
        let ac = s.component(v).expect("mask in range").autocorrelation();
        best = best.max(ac.sum_of_squares());
    }
    best as u64
}

/// Algebraic immunity of a single Boolean function: the minimum degree of
/// a nonzero annihilator of `f` or of `f XOR 1`. Constant functions give 0.
pub fn boolean_algebraic_immunity(f: &TruthTable) -> Result<u32> {
    let n = f.variables();
    if n > MAX_REPORT_VARS {
        return Err(Error::UnsupportedSize { n, max: MAX_REPORT_VARS });
    }
    let weight = f.weight();
    if weight == 0 || weight == f.len() {
        return Ok(0);
    }
    let support: Vec<usize> = (0..f.len()).filter(|&x| f.get(x) == 1).collect();
    let zeros: Vec<usize> = (0..f.len()).filter(|&x| f.get(x) == 0).collect();
    for d in 1..=n as u32 {
        if has_annihilator(n, &support, d) || has_annihilator(n, &zeros, d) {
            return Ok(d);
        }
    }
    Ok(n as u32)
}

/// A nonzero function of degree <= d vanishing on `points` exists iff the
/// monomial evaluation matrix restricted to those points has column rank
/// below the monomial count.
fn has_annihilator(n: usize, points: &[usize], d: u32) -> bool {
    let mons: Vec<usize> = (0..1usize << n).filter(|i| (i.count_ones()) <= d).collect();
    if mons.len() > points.len() {
        return true;
    }
    // Rows are evaluation vectors over the monomial columns, bit-packed.
    // x^I evaluates to 1 at x iff I is a subset of x.
    let blocks = mons.len().div_ceil(64);
    let mut pivot_rows: Vec<Vec<u64>> = Vec::new();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for &x in points {
        let mut row = vec![0u64; blocks];
        for (j, &mon) in mons.iter().enumerate() {
            if x & mon == mon {
                row[j / 64] |= 1u64 << (j % 64);
            }
        }
        loop {
            let lead = match leading_bit(&row) {
                Some(l) => l,
                None => break,
            };
            match pivot_cols.iter().position(|&c| c == lead) {
                Some(k) => {
                    for (a, b) in row.iter_mut().zip(&pivot_rows[k]) {
                        *a ^= *b;
                    }
                }
                None => {
                    pivot_cols.push(lead);
                    pivot_rows.push(row);
                    rank += 1;
                    break;
                }
            }
        }
        if rank == mons.len() {
            return false;
        }
    }
    rank < mons.len()
}

fn leading_bit(row: &[u64]) -> Option<usize> {
    for (i, &b) in row.iter().enumerate() {
        if b != 0 {
            return Some(i * 64 + b.trailing_zeros() as usize);
        }
    }
    None
}

/// Algebraic immunity of the S-box: the minimum Boolean-function algebraic
/// immunity over nonzero component functions.
pub fn algebraic_immunity(s: &SBoxTable) -> Result<u32> {
    let n = s.input_bits();
    if n > MAX_REPORT_VARS {
        return Err(Error::UnsupportedSize { n, max: MAX_REPORT_VARS });
    }
    let m = s.output_bits();
    let mut best = u32::MAX;
    for v in 1u32..1 << m {
        let comp = s.component(v)?;
        best = best.min(boolean_algebraic_immunity(&comp)?);
        if best == 0 {
            break;
        }
    }
    Ok(best)
}

/// The preimage-annihilator reading of algebraic immunity: the minimum
/// degree of a nonzero function vanishing on some preimage set S^(-1)(b).
/// For a bijective box every preimage is a single point, so this is 1;
/// it is provided for comparison with [`algebraic_immunity`].
pub fn algebraic_immunity_preimage(s: &SBoxTable) -> Result<u32> {
    let n = s.input_bits();
    if n > MAX_REPORT_VARS {
        return Err(Error::UnsupportedSize { n, max: MAX_REPORT_VARS });
    }
    let mut best = u32::MAX;
    for b in 0..1u16 << s.output_bits() {
        let preimage: Vec<usize> =
            (0..s.len()).filter(|&x| s.get(x) == b).collect();
        if preimage.is_empty() {
            continue;
        }
        for d in 1..=n as u32 {
            if has_annihilator(n, &preimage, d) {
                best = best.min(d);
                break;
            }
        }
    }
    Ok(if best == u32::MAX { 0 } else { best })
}

// ---------------------------------------------------------------------------
// SNR, transparency order, confusion coefficients.
//
// Each real metric has an exact integer kernel; the search module compares
// candidates on the kernels so ties are exact.
// ---------------------------------------------------------------------------

/// Integer kernel of the SNR: `sum_k (sum_i W_i(k))^4` over the coordinate
/// spectra of the selected variant.
pub(crate) fn snr_kernel(coord_walsh: &[Vec<i32>], n: usize, variant: SnrVariant) -> i64 {
    let size = 1usize << n;
    let mut sum4 = 0i64;
    for k in 0..size {
        let mut tot = 0i64;
        for w in coord_walsh {
            let sign = w[k] as i64;
            tot += match variant {
                SnrVariant::SignTransform => sign,
                // 0/1 spectrum from the sign spectrum:
                // F(k) = (2^n·[k=0] - W(k)) / 2
                SnrVariant::ZeroOne => ((if k == 0 { size as i64 } else { 0 }) - sign) / 2,
            };
        }
        sum4 += tot * tot * tot * tot;
    }
    sum4
}

pub(crate) fn snr_from_kernel(n: usize, m: usize, sum4: i64) -> f64 {
    if sum4 == 0 {
        return f64::INFINITY;
    }
    (m as f64) * ((1u64 << (2 * n)) as f64) / libm::sqrt(sum4 as f64)
}

/// DPA signal-to-noise ratio
/// `SNR = m·2^(2n) · (sum_k (sum_i W_i(k))^4)^(-1/2)` over the coordinate
/// spectra. Lower values indicate better side-channel resistance.
pub fn snr_dpa(s: &SBoxTable, variant: SnrVariant) -> f64 {
    let n = s.input_bits();
    let m = s.output_bits();
    let coord_walsh: Vec<Vec<i32>> = (0..m)
        .map(|i| s.coordinate(i).expect("coordinate in range").walsh_spectrum().values().to_vec())
        .collect();
    snr_from_kernel(n, m, snr_kernel(&coord_walsh, n, variant))
}

/// Integer kernel of the transparency order: the maximized numerator over
/// the fixed denominator `2^(2n) - 2^n`.
///
/// For each output mask `beta` the score is
/// `|m - 2hw(beta)|·D - sum_{a != 0} |sum_i (-1)^(beta_i) r_i(a)|`
/// with `r_i` the autocorrelation of coordinate `i` and `D` the
/// denominator; the kernel is the maximum score.
pub(crate) fn to_kernel(coord_autocorr: &[Vec<i32>], n: usize) -> i64 {
    let m = coord_autocorr.len();
    let size = 1usize << n;
    let den = ((1u64 << (2 * n)) - (1u64 << n)) as i64;
    let mut best = i64::MIN;
    for beta in 0..1usize << m {
        let mut shifted = 0i64;
        for a in 1..size {
            let mut inner = 0i64;
            for (i, ac) in coord_autocorr.iter().enumerate() {
                let term = ac[a] as i64;
                inner += if beta >> i & 1 == 1 { -term } else { term };
            }
            shifted += inner.abs();
        }
        let lead = (m as i64 - 2 * (beta.count_ones() as i64)).abs();
        best = best.max(lead * den - shifted);
    }
    best
}

pub(crate) fn to_den(n: usize) -> i64 {
    ((1u64 << (2 * n)) - (1u64 << n)) as i64
}

/// Transparency order
/// `TO = max_beta (|m - 2hw(beta)| - (2^(2n) - 2^n)^(-1) ·
///  sum_{a != 0} |sum_{hw(v)=1} (-1)^(v·beta) W_{D_aS}(0, v)|)`.
/// Lower values indicate better DPA resistance.
pub fn transparency_order(s: &SBoxTable) -> f64 {
    let n = s.input_bits();
    let coord_autocorr: Vec<Vec<i32>> = (0..s.output_bits())
        .map(|i| s.coordinate(i).expect("coordinate in range").autocorrelation().values().to_vec())
        .collect();
    to_kernel(&coord_autocorr, n) as f64 / to_den(n) as f64
}

/// Confusion coefficients for all key pairs.
///
/// Every offered model depends on the two keys only through their XOR, so
/// the grid is stored as one value per difference; the pair view
/// `kappa(k_i, k_j) = deltas[k_i XOR k_j]` is symmetric with a zero
/// diagonal, and statistics over distinct pairs equal statistics over
/// nonzero differences.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionGrid {
    n: usize,
    model: CcModel,
    deltas: Vec<f64>,
}

impl ConfusionGrid {
    pub fn keys(&self) -> usize {
        1 << self.n
    }

    pub fn model(&self) -> CcModel {
        self.model
    }

    /// `kappa(k_i, k_j)`.
    pub fn get(&self, ki: usize, kj: usize) -> f64 {
        self.deltas[ki ^ kj]
    }

    /// The per-difference view; index 0 is the zero diagonal.
    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }
}

/// Integer kernels of the confusion grid: one numerator per key
/// difference over the model's fixed denominator.
pub(crate) fn cc_kernel(s: &SBoxTable, model: CcModel) -> (Vec<i64>, i64) {
    let n = s.input_bits();
    let size = 1usize << n;
    let hw: Vec<i64> = s.entries().iter().map(|&e| e.count_ones() as i64).collect();
    let m = s.output_bits() as i64;
    let mut nums = vec![0i64; size];
    match model {
        CcModel::SingleBit => {
            // sum over bits of #{x : bit differs}, denominator m·2^n
            for delta in 1..size {
                let mut acc = 0i64;
                for x in 0..size {
                    acc += (s.get(x) ^ s.get(x ^ delta)).count_ones() as i64;
                }
                nums[delta] = acc;
            }
            (nums, m * size as i64)
        }
        CcModel::HwSquared | CcModel::HwSquaredNormalized => {
            for delta in 1..size {
                let mut acc = 0i64;
                for x in 0..size {
                    let d = hw[x] - hw[x ^ delta];
                    acc += d * d;
                }
                nums[delta] = acc;
            }
            let den =
                if model == CcModel::HwSquared { size as i64 } else { m * size as i64 };
            (nums, den)
        }
    }
}

/// Scalar key of a confusion statistic over the integer kernels, exact up
/// to the statistic's fixed denominator.
pub(crate) fn cc_statistic_key(nums: &[i64], statistic: CcStatistic) -> i64 {
    let nz = &nums[1..];
    match statistic {
        CcStatistic::Min => nz.iter().copied().min().unwrap_or(0),
        CcStatistic::Max => nz.iter().copied().max().unwrap_or(0),
        CcStatistic::Mean => nz.iter().sum(),
        CcStatistic::Variance => {
            let k = nz.len() as i64;
            let sum: i64 = nz.iter().sum();
            let sum_sq: i64 = nz.iter().map(|&s| s * s).sum();
            k * sum_sq - sum * sum
        }
    }
}

pub(crate) fn cc_statistic_value(nums: &[i64], den: i64, statistic: CcStatistic) -> f64 {
    let k = (nums.len() - 1) as i64;
    let key = cc_statistic_key(nums, statistic);
    match statistic {
        CcStatistic::Min | CcStatistic::Max => key as f64 / den as f64,
        CcStatistic::Mean => key as f64 / (k as f64 * den as f64),
        CcStatistic::Variance => key as f64 / ((k * k) as f64 * (den as f64) * (den as f64)),
    }
}

/// The confusion grid under the given selection model. Requires n = m <= 8.
pub fn confusion_coefficients(s: &SBoxTable, model: CcModel) -> Result<ConfusionGrid> {
    let n = s.input_bits();
    require_square(s)?;
    if n > MAX_REPORT_VARS {
        return Err(Error::UnsupportedSize { n, max: MAX_REPORT_VARS });
    }
    let (nums, den) = cc_kernel(s, model);
    let deltas = nums.iter().map(|&v| v as f64 / den as f64).collect();
    Ok(ConfusionGrid { n, model, deltas })
}

/// Summary statistics of the confusion grid over distinct key pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CcSummary {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
    pub variance: f64,
}

pub fn confusion_statistics(s: &SBoxTable, model: CcModel) -> Result<CcSummary> {
    let n = s.input_bits();
    require_square(s)?;
    if n > MAX_REPORT_VARS {
        return Err(Error::UnsupportedSize { n, max: MAX_REPORT_VARS });
    }
    let (nums, den) = cc_kernel(s, model);
    Ok(CcSummary {
        min: cc_statistic_value(&nums, den, CcStatistic::Min),
        mean: cc_statistic_value(&nums, den, CcStatistic::Mean),
        max: cc_statistic_value(&nums, den, CcStatistic::Max),
        variance: cc_statistic_value(&nums, den, CcStatistic::Variance),
    })
}

/// Computes every field of the report. Requires n = m <= 8 (the algebraic
/// immunity and confusion computations set the bound). Each field equals
/// the corresponding standalone operation exactly.
pub fn full_report(s: &SBoxTable, opts: &MetricOptions) -> Result<MetricsReport> {
    require_square(s)?;
    let n = s.input_bits();
    let m = s.output_bits();
    if n > MAX_REPORT_VARS {
        return Err(Error::UnsupportedSize { n, max: MAX_REPORT_VARS });
    }
    let size = 1usize << n;

    // One spectral pass over the nonzero components covers balance, NL,
    // CI and both autocorrelation indicators; the coordinate spectra are
    // stashed for SNR and TO on the way through.
    let mut balanced = true;
    let mut max_walsh = 0i32;
    let mut min_ci_weight = n as u32 + 1;
    let mut abs_ind = 0i32;
    let mut sum_sq = 0i64;
    let mut coord_walsh: Vec<Vec<i32>> = vec![Vec::new(); m];
    let mut coord_autocorr: Vec<Vec<i32>> = vec![Vec::new(); m];
    for v in 1u32..1 << m {
        let comp = s.component(v)?;
        let spec = comp.walsh_spectrum();
        if spec.get(0) != 0 {
            balanced = false;
        }
        max_walsh = max_walsh.max(spec.max_abs());
        for mask in 1..size {
            if spec.get(mask) != 0 {
                min_ci_weight = min_ci_weight.min((mask as u32).count_ones());
            }
        }
        let ac = comp.autocorrelation();
        abs_ind = abs_ind.max(ac.max_abs_nonzero_shift());
        sum_sq = sum_sq.max(ac.sum_of_squares());
        if v.count_ones() == 1 {
            let i = v.trailing_zeros() as usize;
            coord_walsh[i] = spec.values().to_vec();
            coord_autocorr[i] = ac.values().to_vec();
        }
    }

    let snr = snr_from_kernel(n, m, snr_kernel(&coord_walsh, n, opts.snr_variant));
    let to = to_kernel(&coord_autocorr, n) as f64 / to_den(n) as f64;

    let (cc_nums, cc_den) = cc_kernel(s, opts.cc_model);
    let cc_min = cc_statistic_value(&cc_nums, cc_den, CcStatistic::Min);
    let cc_mean = cc_statistic_value(&cc_nums, cc_den, CcStatistic::Mean);
    let cc_max = cc_statistic_value(&cc_nums, cc_den, CcStatistic::Max);
    let cc_reported = cc_statistic_value(&cc_nums, cc_den, opts.cc_statistic);

    Ok(MetricsReport {
        balanced,
        nl: (1u32 << (n - 1)) - (max_walsh as u32) / 2,
        degree: algebraic_degree(s),
        ci: min_ci_weight - 1,
        du: differential_uniformity(s),
        robustness: robustness(s),
        fp: fixed_points(s)?,
        ofp: opposite_fixed_points(s)?,
        abs_indicator: abs_ind as u32,
        sum_sq: sum_sq as u64,
        ai: algebraic_immunity(s)?,
        snr,
        to,
        cc_min,
        cc_mean,
        cc_max,
        cc_reported,
        cc_model: opts.cc_model,
        cc_statistic: opts.cc_statistic,
        snr_variant: opts.snr_variant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const T7: [u16; 16] = [8, 0, 1, 10, 9, 4, 2, 6, 11, 7, 14, 12, 5, 15, 13, 3];
    const T8: [u16; 16] = [3, 0, 5, 15, 6, 13, 12, 1, 10, 4, 2, 14, 8, 7, 11, 9];

    fn t7() -> SBoxTable {
        SBoxTable::square(T7.to_vec()).unwrap()
    }

    fn t8() -> SBoxTable {
        SBoxTable::square(T8.to_vec()).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn balance() {
        assert!(is_balanced(&SBoxTable::identity(4).unwrap()));
        assert!(!is_balanced(&SBoxTable::new(4, 4, vec![7; 16]).unwrap()));
        assert!(is_balanced(&t8()));
    }

    #[test]
    fn nonlinearity_values() {
        let linear = SBoxTable::identity(4).unwrap();
        assert_eq!(nonlinearity(&linear), 0);
        assert_eq!(nonlinearity(&t7()), 4);
    }

    #[test]
    fn degree_values() {
        assert_eq!(algebraic_degree(&SBoxTable::identity(4).unwrap()), 1);
        assert_eq!(algebraic_degree(&t7()), 3);
    }

    #[test]
    fn ci_values() {
        assert_eq!(correlation_immunity(&t7()), 0);
        let tiny = SBoxTable::square(vec![0, 1]).unwrap();
        assert_eq!(correlation_immunity(&tiny), 0);
    }

    #[test]
    fn du_values() {
        assert_eq!(differential_uniformity(&t7()), 4);
        assert_eq!(differential_uniformity(&SBoxTable::identity(4).unwrap()), 16);
    }

    #[test]
    fn fp_ofp_values() {
        let id = SBoxTable::identity(4).unwrap();
        assert_eq!(fixed_points(&id).unwrap(), 16);
        assert_eq!(opposite_fixed_points(&id).unwrap(), 0);
        assert_eq!(fixed_points(&t7()).unwrap(), 0);
        assert_eq!(opposite_fixed_points(&t7()).unwrap(), 0);
        let rect = SBoxTable::new(2, 1, vec![0, 1, 1, 0]).unwrap();
        assert!(fixed_points(&rect).is_err());
    }

    #[test]
    fn robustness_values() {
        assert_eq!(robustness(&t7()), Ratio::new(3, 4));
        assert_eq!(robustness(&SBoxTable::identity(4).unwrap()), Ratio::new(0, 1));
    }

    #[test]
    fn autocorrelation_indicators() {
        let s = t7();
        assert_eq!(absolute_indicator(&s), 8);
        assert_eq!(sum_of_squares(&s), 640);
        let linear = SBoxTable::identity(4).unwrap();
        assert_eq!(absolute_indicator(&linear), 16);
        assert_eq!(sum_of_squares(&linear), 4096);
    }

    #[test]
    fn ai_values() {
        assert_eq!(algebraic_immunity(&t7()).unwrap(), 2);
        // Single-coordinate box holding f(x) = x0: x0·(x0 XOR 1) = 0.
        let single = SBoxTable::new(2, 1, vec![0, 1, 0, 1]).unwrap();
        assert_eq!(algebraic_immunity(&single).unwrap(), 1);
        // Bijective boxes always admit a degree-1 preimage annihilator.
        assert_eq!(algebraic_immunity_preimage(&t7()).unwrap(), 1);
    }

    #[test]
    fn snr_values() {
        assert!(close(snr_dpa(&t7(), SnrVariant::SignTransform), 1.612, 0.001));
        assert!(close(snr_dpa(&t8(), SnrVariant::SignTransform), 1.663, 0.001));
        assert!(close(snr_dpa(&SBoxTable::identity(4).unwrap(), SnrVariant::SignTransform), 2.0, 1e-12));
        // The 0/1 variant is a different statistic; it must disagree here.
        assert!(!close(snr_dpa(&t7(), SnrVariant::ZeroOne), 1.612, 0.1));
    }

    #[test]
    fn to_values() {
        assert!(close(transparency_order(&t7()), 3.533, 0.001));
        assert!(close(transparency_order(&t8()), 3.466, 0.001));
        // Exact value for a linear bijection on 4 bits: 8/3.
        let id = SBoxTable::identity(4).unwrap();
        assert!(close(transparency_order(&id), 8.0 / 3.0, 1e-12));
    }

    #[test]
    fn cc_values() {
        let s = t7();
        let grid = confusion_coefficients(&s, CcModel::HwSquared).unwrap();
        for k in 0..16 {
            assert_eq!(grid.get(k, k), 0.0);
            for j in 0..16 {
                assert_eq!(grid.get(k, j), grid.get(j, k));
            }
        }
        let single = confusion_coefficients(&s, CcModel::SingleBit).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                assert!((0.0..=1.0).contains(&single.get(i, j)));
            }
        }
        let stats = confusion_statistics(&s, CcModel::HwSquared).unwrap();
        assert!(close(stats.variance, 1.357, 0.001));
        assert!(close(stats.min, 0.5, 1e-12));
        assert!(close(stats.mean, 32.0 / 15.0, 1e-12));
        assert!(close(stats.max, 3.75, 1e-12));
    }

    #[test]
    fn full_report_matches_standalone_ops() {
        let s = t7();
        let r = full_report(&s, &MetricOptions::default()).unwrap();
        assert!(r.balanced);
        assert_eq!(r.nl, 4);
        assert_eq!(r.degree, 3);
        assert_eq!(r.ci, 0);
        assert_eq!(r.du, 4);
        assert_eq!(r.robustness, Ratio::new(3, 4));
        assert_eq!(r.fp, 0);
        assert_eq!(r.ofp, 0);
        assert_eq!(r.abs_indicator, 8);
        assert_eq!(r.sum_sq, 640);
        assert_eq!(r.ai, 2);
        assert_eq!(r.snr, snr_dpa(&s, SnrVariant::SignTransform));
        assert_eq!(r.to, transparency_order(&s));
        let stats = confusion_statistics(&s, CcModel::HwSquared).unwrap();
        assert_eq!(r.cc_reported, stats.variance);
        assert_eq!(r.cc_min, stats.min);
    }

    #[test]
    fn full_report_identity_box() {
        let r = full_report(&SBoxTable::identity(4).unwrap(), &MetricOptions::default()).unwrap();
        assert_eq!(r.nl, 0);
        assert_eq!(r.degree, 1);
        assert_eq!(r.du, 16);
        assert_eq!(r.robustness, Ratio::new(0, 1));
        assert_eq!(r.fp, 16);
    }
}
