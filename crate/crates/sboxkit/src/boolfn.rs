//! Truth tables, spectral transforms and GF(2) linear algebra for Boolean
//! and vectorial Boolean functions.
//!
//! Conventions used throughout the crate:
//!
//! - an input `x` is read as an `n`-bit little-endian integer, so variable
//!   `x_i` is bit `i` of `x`;
//! - coordinate function `i` of an S-box is bit `i` of the output word,
//!   bit 0 least significant;
//! - `v · y` denotes the GF(2) inner product `parity(v & y)`;
//! - the Walsh transform is the sign transform
//!   `W_f(w) = sum_x (-1)^(f(x) XOR w·x)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Largest supported variable count for truth tables and S-boxes.
pub const MAX_VARS: usize = 16;

#[inline]
pub(crate) fn parity(x: u32) -> u8 {
    (x.count_ones() & 1) as u8
}

/// A single Boolean function on `n` variables, stored as its 2^n-entry
/// truth table of 0/1 values indexed by the input integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    bits: Vec<u8>,
}

impl TruthTable {
    /// Builds a truth table from a 0/1 sequence of length 2^n.
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        let len = bits.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo { len });
        }
        let n = len.trailing_zeros() as usize;
        if n > MAX_VARS {
            return Err(Error::VariableCount { n, max: MAX_VARS });
        }
        if let Some(i) = bits.iter().position(|&b| b > 1) {
            return Err(Error::EntryOutOfRange { index: i, value: bits[i] as u32, limit: 2 });
        }
        Ok(Self { n, bits })
    }

    /// The constant-zero function on `n` variables.
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VARS {
            return Err(Error::VariableCount { n, max: MAX_VARS });
        }
        Ok(Self { n, bits: vec![0; 1 << n] })
    }

    pub fn variables(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, x: usize) -> u8 {
        self.bits[x]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Pointwise XOR of two functions on the same variable count.
    pub fn xor(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch);
        }
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect();
        Ok(Self { n: self.n, bits })
    }

    /// Number of inputs mapped to 1.
    pub fn weight(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    /// `true` iff exactly half the outputs are 1.
    pub fn is_balanced(&self) -> bool {
        2 * self.weight() == self.bits.len()
    }

    /// Walsh spectrum `W_f(w) = sum_x (-1)^(f(x) XOR w·x)` for all `w`,
    /// by the in-place butterfly in O(n·2^n).
    pub fn walsh_spectrum(&self) -> WalshSpectrum {
        let mut values: Vec<i32> = self.bits.iter().map(|&b| 1 - 2 * (b as i32)).collect();
        fwht(&mut values);
        WalshSpectrum { values }
    }

    /// Algebraic normal form coefficients via the Möbius transform.
    pub fn anf(&self) -> AnfTable {
        let mut coeffs = self.bits.clone();
        moebius_in_place(&mut coeffs);
        AnfTable { coeffs }
    }

    /// Autocorrelation spectrum `r(a) = sum_x (-1)^(f(x) XOR f(x XOR a))`.
    ///
    /// Computed through the Walsh spectrum (inverse transform of the
    /// squared spectrum divided by 2^n), which equals the direct sum
    /// exactly in integers.
    pub fn autocorrelation(&self) -> AutocorrTable {
        let mut sq: Vec<i64> = self
            .walsh_spectrum()
            .values
            .iter()
            .map(|&w| (w as i64) * (w as i64))
            .collect();
        fwht64(&mut sq);
        let scale = self.bits.len() as i64;
        let values = sq.iter().map(|&v| (v / scale) as i32).collect();
        AutocorrTable { values }
    }
}

/// Walsh (sign) spectrum of a Boolean function, indexed by the mask `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalshSpectrum {
    values: Vec<i32>,
}

impl WalshSpectrum {
    pub fn values(&self) -> &[i32] {
        &self.values
    }

    #[inline]
    pub fn get(&self, w: usize) -> i32 {
        self.values[w]
    }

    /// Largest absolute spectrum value.
    pub fn max_abs(&self) -> i32 {
        self.values.iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    /// `sum_w W(w)^2`, which Parseval fixes at 2^(2n).
    pub fn energy(&self) -> i64 {
        self.values.iter().map(|&v| (v as i64) * (v as i64)).sum()
    }
}

/// ANF coefficients indexed by monomial mask: bit set = variable present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnfTable {
    coeffs: Vec<u8>,
}

impl AnfTable {
    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    /// Maximum Hamming weight over monomials with a nonzero coefficient;
    /// 0 for the zero function.
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != 0)
            .map(|(i, _)| i.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Inverse direction of the Möbius transform (it is an involution).
    pub fn truth_table(&self) -> TruthTable {
        let mut bits = self.coeffs.clone();
        moebius_in_place(&mut bits);
        TruthTable { n: bits.len().trailing_zeros() as usize, bits }
    }
}

/// Self-inverse GF(2) Möbius transform between truth-table and ANF
/// representations. The input length must be a power of two.
pub fn moebius_transform(bits: &[u8]) -> Result<Vec<u8>> {
    if bits.is_empty() || !bits.len().is_power_of_two() {
        return Err(Error::NotPowerOfTwo { len: bits.len() });
    }
    let mut out = bits.to_vec();
    moebius_in_place(&mut out);
    Ok(out)
}

fn moebius_in_place(bits: &mut [u8]) {
    let len = bits.len();
    let mut h = 1;
    while h < len {
        for block in (0..len).step_by(h * 2) {
            for i in block..block + h {
                bits[i + h] ^= bits[i];
            }
        }
        h *= 2;
    }
}

fn fwht(data: &mut [i32]) {
    let len = data.len();
    let mut h = 1;
    while h < len {
        for block in (0..len).step_by(h * 2) {
            for i in block..block + h {
                let (a, b) = (data[i], data[i + h]);
                data[i] = a + b;
                data[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

fn fwht64(data: &mut [i64]) {
    let len = data.len();
    let mut h = 1;
    while h < len {
        for block in (0..len).step_by(h * 2) {
            for i in block..block + h {
                let (a, b) = (data[i], data[i + h]);
                data[i] = a + b;
                data[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Autocorrelation spectrum indexed by the shift `a`; entry 0 is always 2^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutocorrTable {
    values: Vec<i32>,
}

impl AutocorrTable {
    pub fn values(&self) -> &[i32] {
        &self.values
    }

    #[inline]
    pub fn get(&self, a: usize) -> i32 {
        self.values[a]
    }

    /// Largest absolute value over nonzero shifts.
    pub fn max_abs_nonzero_shift(&self) -> i32 {
        self.values[1..].iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    /// Sum of squared values over all shifts, the shift-0 term included.
    pub fn sum_of_squares(&self) -> i64 {
        self.values.iter().map(|&v| (v as i64) * (v as i64)).sum()
    }
}

/// An (n, m)-function stored as a lookup table of 2^n output words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SBoxTable {
    n: usize,
    m: usize,
    entries: Vec<u16>,
}

impl SBoxTable {
    /// Builds an S-box from its lookup table. The entry count must be 2^n
    /// and every entry must fit in `m` bits.
    pub fn new(n: usize, m: usize, entries: Vec<u16>) -> Result<Self> {
        if n == 0 || n > MAX_VARS {
            return Err(Error::VariableCount { n, max: MAX_VARS });
        }
        if m == 0 || m > MAX_VARS {
            return Err(Error::VariableCount { n: m, max: MAX_VARS });
        }
        if entries.len() != 1 << n {
            return Err(Error::WrongLength { expected: 1 << n, got: entries.len() });
        }
        let limit = (1u32 << m) as u32;
        if let Some(i) = entries.iter().position(|&e| (e as u32) >= limit) {
            return Err(Error::EntryOutOfRange { index: i, value: entries[i] as u32, limit });
        }
        Ok(Self { n, m, entries })
    }

    /// Builds an n-to-n box, inferring `n` from the entry count.
    pub fn square(entries: Vec<u16>) -> Result<Self> {
        let len = entries.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo { len });
        }
        let n = len.trailing_zeros() as usize;
        Self::new(n, n, entries)
    }

    /// The identity permutation on `n` bits.
    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VARS {
            return Err(Error::VariableCount { n, max: MAX_VARS });
        }
        Ok(Self { n, m: n, entries: (0..1u32 << n).map(|x| x as u16).collect() })
    }

    pub fn input_bits(&self) -> usize {
        self.n
    }

    pub fn output_bits(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn get(&self, x: usize) -> u16 {
        self.entries[x]
    }

    pub fn entries(&self) -> &[u16] {
        &self.entries
    }

    /// `true` iff n = m and the entries are a permutation of 0..2^n.
    pub fn is_bijective(&self) -> bool {
        if self.n != self.m {
            return false;
        }
        let mut seen = vec![false; self.entries.len()];
        for &e in &self.entries {
            if seen[e as usize] {
                return false;
            }
            seen[e as usize] = true;
        }
        true
    }

    /// Coordinate function `i` (bit `i` of each output word).
    pub fn coordinate(&self, i: usize) -> Result<TruthTable> {
        if i >= self.m {
            return Err(Error::MaskOutOfRange { mask: i as u32, limit: self.m as u32 });
        }
        self.component(1 << i)
    }

    /// Component function `g(x) = v · S(x)`; `v = 0` yields the constant
    /// zero function.
    pub fn component(&self, v: u32) -> Result<TruthTable> {
        if v >= (1u32 << self.m) {
            return Err(Error::MaskOutOfRange { mask: v, limit: 1 << self.m });
        }
        let bits = self.entries.iter().map(|&e| parity(v & e as u32)).collect();
        Ok(TruthTable { n: self.n, bits })
    }

    /// Derivative in direction `a`: `D_a S(x) = S(x) XOR S(x XOR a)`.
    pub fn derivative(&self, a: u32) -> Result<SBoxTable> {
        let size = self.entries.len();
        if a as usize >= size {
            return Err(Error::MaskOutOfRange { mask: a, limit: size as u32 });
        }
        let entries = (0..size).map(|x| self.entries[x] ^ self.entries[x ^ a as usize]).collect();
        Ok(SBoxTable { n: self.n, m: self.m, entries })
    }

    /// Difference distribution table: `counts[a][z] = #{x : S(x) XOR S(x XOR a) = z}`.
    pub fn difference_table(&self) -> DifferenceTable {
        let rows = 1usize << self.n;
        let cols = 1usize << self.m;
        let mut counts = vec![0u32; rows * cols];
        for a in 0..rows {
            let row = &mut counts[a * cols..(a + 1) * cols];
            for x in 0..rows {
                row[(self.entries[x] ^ self.entries[x ^ a]) as usize] += 1;
            }
        }
        DifferenceTable { n: self.n, m: self.m, counts }
    }

    /// Applies an output-side GF(2) mix: entry `y` becomes `M·y`, so
    /// coordinate `i` of the result is the component `row_i(M) · S`.
    pub fn apply_mix(&self, mix: &BinaryMatrix) -> Result<SBoxTable> {
        if self.n != self.m || mix.size() != self.n {
            return Err(Error::DimensionMismatch);
        }
        let entries = self
            .entries
            .iter()
            .map(|&y| {
                let mut out = 0u16;
                for (i, &row) in mix.rows().iter().enumerate() {
                    out |= (parity(row & y as u32) as u16) << i;
                }
                out
            })
            .collect();
        Ok(SBoxTable { n: self.n, m: self.m, entries })
    }
}

/// Difference distribution table of an S-box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceTable {
    n: usize,
    m: usize,
    counts: Vec<u32>,
}

impl DifferenceTable {
    pub fn input_bits(&self) -> usize {
        self.n
    }

    pub fn output_bits(&self) -> usize {
        self.m
    }

    /// Row for input difference `a`.
    pub fn row(&self, a: usize) -> &[u32] {
        let cols = 1usize << self.m;
        &self.counts[a * cols..(a + 1) * cols]
    }

    #[inline]
    pub fn get(&self, a: usize, z: usize) -> u32 {
        self.counts[a * (1usize << self.m) + z]
    }

    /// Largest entry over rows a != 0 (the differential uniformity).
    pub fn max_nonzero_row(&self) -> u32 {
        let cols = 1usize << self.m;
        self.counts[cols..].iter().copied().max().unwrap_or(0)
    }

    /// Number of nonzero entries in column z = 0, excluding row a = 0.
    pub fn zero_column_nonzero_count(&self) -> u32 {
        (1..1usize << self.n).filter(|&a| self.get(a, 0) != 0).count() as u32
    }
}

/// A square GF(2) matrix with bit-packed rows; row `i` is the output mask
/// assigned to coordinate `i` under [`SBoxTable::apply_mix`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    n: usize,
    rows: Vec<u32>,
}

impl BinaryMatrix {
    /// Builds an n x n matrix from bit-packed rows.
    pub fn new(rows: Vec<u32>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || n > MAX_VARS {
            return Err(Error::VariableCount { n, max: MAX_VARS });
        }
        let limit = 1u32 << n;
        if let Some(i) = rows.iter().position(|&r| r >= limit) {
            return Err(Error::EntryOutOfRange { index: i, value: rows[i], limit });
        }
        Ok(Self { n, rows })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| 1u32 << i).collect())
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    /// Rank over GF(2) by row elimination on the packed rows.
    pub fn rank(&self) -> usize {
        gf2_rank(&self.rows)
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n
    }
}

/// Rank of a set of bit-packed GF(2) row vectors, by xor-basis insertion.
pub fn gf2_rank(rows: &[u32]) -> usize {
    let mut basis: [u32; 32] = [0; 32];
    let mut rank = 0;
    for &row in rows {
        let mut v = row;
        while v != 0 {
            let high = 31 - v.leading_zeros() as usize;
            if basis[high] == 0 {
                basis[high] = v;
                rank += 1;
                break;
            }
            v ^= basis[high];
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const PAPER_4X4_INITIAL: [u16; 16] =
        [8, 0, 1, 10, 9, 4, 2, 6, 11, 7, 14, 12, 5, 15, 13, 3];

    fn t7() -> SBoxTable {
        SBoxTable::square(PAPER_4X4_INITIAL.to_vec()).unwrap()
    }

    #[test]
    fn walsh_constant_zero() {
        let f = TruthTable::zero(3).unwrap();
        let w = f.walsh_spectrum();
        assert_eq!(w.get(0), 8);
        for v in 1..8 {
            assert_eq!(w.get(v), 0);
        }
    }

    #[test]
    fn walsh_linear_function() {
        let w0 = 0b101u32;
        let bits = (0..8u32).map(|x| parity(x & w0)).collect();
        let f = TruthTable::new(bits).unwrap();
        let spec = f.walsh_spectrum();
        for w in 0..8 {
            assert_eq!(spec.get(w), if w == w0 as usize { 8 } else { 0 });
        }
    }

    #[test]
    fn walsh_parseval() {
        let bits = (0..16u32).map(|x| ((x * 7 + 3) % 5 % 2) as u8).collect();
        let f = TruthTable::new(bits).unwrap();
        assert_eq!(f.walsh_spectrum().energy(), 1 << 8);
    }

    #[test]
    fn moebius_zero_and_single_monomial() {
        assert_eq!(moebius_transform(&[0, 0, 0, 0]).unwrap(), vec![0, 0, 0, 0]);
        // f(x) = x0·x1 on two variables: truth table 0,0,0,1.
        let anf = moebius_transform(&[0, 0, 0, 1]).unwrap();
        assert_eq!(anf, vec![0, 0, 0, 1]);
        let f = TruthTable::new(vec![0, 0, 0, 1]).unwrap();
        assert_eq!(f.anf().degree(), 2);
    }

    #[test]
    fn moebius_rejects_bad_length() {
        assert_eq!(moebius_transform(&[0, 1, 0]), Err(Error::NotPowerOfTwo { len: 3 }));
    }

    #[test]
    fn component_unit_masks_are_coordinates() {
        let s = t7();
        for i in 0..4 {
            let c = s.component(1 << i).unwrap();
            for x in 0..16 {
                assert_eq!(c.get(x), ((s.get(x) >> i) & 1) as u8);
            }
        }
        assert!(s.component(16).is_err());
    }

    #[test]
    fn component_of_identity_is_input_parity() {
        let s = SBoxTable::identity(4).unwrap();
        let g = s.component(0b0011).unwrap();
        for x in 0..16u32 {
            assert_eq!(g.get(x as usize), ((x ^ (x >> 1)) & 1) as u8);
        }
    }

    #[test]
    fn component_is_linear_in_the_mask() {
        let s = t7();
        let a = s.component(0b0001).unwrap();
        let b = s.component(0b0100).unwrap();
        let ab = s.component(0b0101).unwrap();
        assert_eq!(ab, a.xor(&b).unwrap());
    }

    #[test]
    fn derivative_edges() {
        let s = t7();
        let d0 = s.derivative(0).unwrap();
        assert!(d0.entries().iter().all(|&e| e == 0));

        let id = SBoxTable::identity(4).unwrap();
        for a in 0..16u32 {
            let d = id.derivative(a).unwrap();
            assert!(d.entries().iter().all(|&e| e as u32 == a));
        }

        // Derivative values pair up x with x XOR a, so multiplicities are even.
        let d = s.derivative(1).unwrap();
        let mut mult = [0u32; 16];
        for &e in d.entries() {
            mult[e as usize] += 1;
        }
        assert!(mult.iter().all(|&c| c % 2 == 0));
    }

    #[test]
    fn autocorrelation_basics() {
        let s = t7();
        let f = s.component(3).unwrap();
        let ac = f.autocorrelation();
        assert_eq!(ac.get(0), 16);

        let lin = TruthTable::new((0..16u32).map(|x| parity(x & 0b1011)).collect()).unwrap();
        let ac = lin.autocorrelation();
        assert!(ac.values().iter().all(|&v| v.abs() == 16));
    }

    #[test]
    fn ddt_identity_and_row_sums() {
        let id = SBoxTable::identity(4).unwrap();
        let ddt = id.difference_table();
        for a in 0..16 {
            for z in 0..16 {
                assert_eq!(ddt.get(a, z), if a == z { 16 } else { 0 });
            }
        }

        let ddt = t7().difference_table();
        assert_eq!(ddt.max_nonzero_row(), 4);
        for a in 0..16 {
            assert_eq!(ddt.row(a).iter().sum::<u32>(), 16);
            assert!(ddt.row(a).iter().all(|&c| c % 2 == 0));
            if a != 0 {
                assert_eq!(ddt.get(a, 0), 0); // bijective
            }
        }
    }

    #[test]
    fn rank_basics() {
        assert_eq!(BinaryMatrix::identity(4).unwrap().rank(), 4);
        let with_zero_row = BinaryMatrix::new(vec![1, 0, 4, 8]).unwrap();
        assert!(with_zero_row.rank() < 4);
        // 1 ^ 2 = 3: dependent rows
        assert_eq!(gf2_rank(&[1, 2, 3, 4]), 3);
    }

    #[test]
    fn apply_mix_identity_and_swap() {
        let s = t7();
        let id = BinaryMatrix::identity(4).unwrap();
        assert_eq!(s.apply_mix(&id).unwrap(), s);

        let swap = BinaryMatrix::new(vec![2, 1, 4, 8]).unwrap();
        let mixed = s.apply_mix(&swap).unwrap();
        for x in 0..16 {
            let y = s.get(x);
            let expect = (y & 0b1100) | ((y & 1) << 1) | ((y >> 1) & 1);
            assert_eq!(mixed.get(x), expect);
        }
    }

    #[test]
    fn mix_bijectivity_matches_rank() {
        // Exhaustive over all 2^9 3x3 matrices on a bijective base box.
        let s = SBoxTable::square(vec![3, 0, 5, 1, 6, 2, 7, 4]).unwrap();
        assert!(s.is_bijective());
        for bits in 0..512u32 {
            let rows = vec![bits & 7, (bits >> 3) & 7, (bits >> 6) & 7];
            let m = BinaryMatrix::new(rows).unwrap();
            let mixed = s.apply_mix(&m).unwrap();
            assert_eq!(mixed.is_bijective(), m.rank() == 3);
        }
    }
}
