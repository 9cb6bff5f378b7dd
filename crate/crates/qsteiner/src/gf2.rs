//! Bit-level linear algebra over GF(2).
//!
//! Vectors of GF(2)^v are packed into a single `u64`: coordinate `i` of a
//! vector is bit `i` of the word (bit 0 = first coordinate). This encoding
//! is load-bearing: it fixes the text file formats and the canonical
//! enumeration order of subspaces, so it must not change.
//!
//! Matrices are row-major lists of packed rows and act on *row* vectors from
//! the right, `x -> x * A`. A subspace is identified with the unique reduced
//! row echelon form of any spanning set, which makes subspace equality plain
//! value equality.

use std::fmt;

/// Largest supported ambient dimension. One machine word per row.
pub const MAX_DIM: u32 = 63;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    /// Two operands live in different ambient spaces.
    DimensionMismatch { expected: u32, got: u32 },
    /// Inversion was requested for a singular matrix.
    Singular,
    /// Ambient dimension exceeds [`MAX_DIM`] or is zero where forbidden.
    BadDimension(u32),
    /// A serialized vector/matrix could not be parsed.
    Parse(String),
}

impl fmt::Display for Gf2Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gf2Error::DimensionMismatch { expected, got } => {
                write!(f, "ambient dimension mismatch: expected {expected}, got {got}")
            }
            Gf2Error::Singular => write!(f, "matrix is singular over GF(2)"),
            Gf2Error::BadDimension(v) => write!(f, "unsupported ambient dimension {v}"),
            Gf2Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for Gf2Error {}

fn check_dim(v: u32) -> Result<(), Gf2Error> {
    if v == 0 || v > MAX_DIM {
        return Err(Gf2Error::BadDimension(v));
    }
    Ok(())
}

/// A vector of GF(2)^v, packed little-endian (coordinate i = bit i).
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gf2Vector {
    bits: u64,
    dim: u32,
}

impl Gf2Vector {
    pub fn new(bits: u64, dim: u32) -> Result<Self, Gf2Error> {
        check_dim(dim)?;
        if dim < 64 && bits >> dim != 0 {
            return Err(Gf2Error::Parse(format!("vector 0x{bits:x} does not fit in {dim} bits")));
        }
        Ok(Gf2Vector { bits, dim })
    }

    pub fn zero(dim: u32) -> Self {
        Gf2Vector { bits: 0, dim }
    }

    /// Standard basis vector e_i (0-based).
    pub fn unit(i: u32, dim: u32) -> Self {
        assert!(i < dim, "basis index {i} out of range for dimension {dim}");
        Gf2Vector { bits: 1 << i, dim }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", (self.bits >> i) & 1)?;
        }
        write!(f, ")")
    }
}

/// A matrix over GF(2), stored as packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: Vec<u64>,
    cols: u32,
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{} [", self.rows.len(), self.cols)?;
        for &r in &self.rows {
            write!(f, "  ")?;
            for i in 0..self.cols {
                write!(f, "{}", (r >> i) & 1)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Gf2Matrix {
    pub fn from_rows(rows: Vec<u64>, cols: u32) -> Result<Self, Gf2Error> {
        check_dim(cols)?;
        for &r in &rows {
            if cols < 64 && r >> cols != 0 {
                return Err(Gf2Error::Parse(format!("row 0x{r:x} does not fit in {cols} bits")));
            }
        }
        Ok(Gf2Matrix { rows, cols })
    }

    /// Builds from explicit 0/1 entries, row by row, first coordinate first.
    /// Mirrors the visual layout of a written-out matrix.
    pub fn from_bit_rows<const W: usize>(rows: &[[u8; W]]) -> Self {
        let cols = W as u32;
        assert!((1..=MAX_DIM).contains(&cols));
        let packed = rows
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &b)| acc | (u64::from(b & 1) << i))
            })
            .collect();
        Gf2Matrix { rows: packed, cols }
    }

    pub fn identity(v: u32) -> Self {
        assert!((1..=MAX_DIM).contains(&v));
        Gf2Matrix { rows: (0..v).map(|i| 1u64 << i).collect(), cols: v }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> u32 {
        self.cols
    }

    pub fn shape(&self) -> (usize, u32) {
        (self.rows.len(), self.cols)
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    pub fn is_square(&self) -> bool {
        self.rows.len() == self.cols as usize
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && self.rows.iter().enumerate().all(|(i, &r)| r == 1 << i)
    }

    /// Row vector times matrix: `x * self`.
    ///
    /// The result is the XOR of the rows selected by the set bits of `x`.
    #[inline]
    pub fn apply(&self, x: u64) -> u64 {
        debug_assert!(
            self.rows.len() >= 64 || x >> self.rows.len() == 0,
            "vector has more coordinates than rows"
        );
        let mut acc = 0u64;
        let mut bits = x;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            acc ^= self.rows[i];
            bits &= bits - 1;
        }
        acc
    }

    /// Matrix product `self * rhs` (so that `x.apply(a*b) == x.apply(a).apply(b)`
    /// in row-vector convention).
    pub fn mul(&self, rhs: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols as usize, rhs.rows.len(), "inner dimensions differ");
        Gf2Matrix {
            rows: self.rows.iter().map(|&r| rhs.apply(r)).collect(),
            cols: rhs.cols,
        }
    }

    pub fn add(&self, rhs: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.shape(), rhs.shape());
        Gf2Matrix {
            rows: self.rows.iter().zip(&rhs.rows).map(|(a, b)| a ^ b).collect(),
            cols: self.cols,
        }
    }

    /// Reduced row echelon form with zero rows removed. Unique per row space.
    pub fn rref(&self) -> Gf2Matrix {
        let mut rows = self.rows.clone();
        let mut out: Vec<u64> = Vec::with_capacity(rows.len().min(self.cols as usize));
        for col in 0..self.cols {
            let mask = 1u64 << col;
            let Some(pos) = rows.iter().position(|&r| r & mask != 0) else {
                continue;
            };
            let pivot = rows.swap_remove(pos);
            for r in rows.iter_mut() {
                if *r & mask != 0 {
                    *r ^= pivot;
                }
            }
            for r in out.iter_mut() {
                if *r & mask != 0 {
                    *r ^= pivot;
                }
            }
            out.push(pivot);
            if rows.is_empty() {
                break;
            }
        }
        out.sort_unstable_by_key(|r| r.trailing_zeros());
        Gf2Matrix { rows: out, cols: self.cols }
    }

    pub fn rank(&self) -> u32 {
        self.rref().rows.len() as u32
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() as usize == self.rows.len()
    }

    /// Inverse by Gaussian elimination on `[self | I]`.
    pub fn inverse(&self) -> Result<Gf2Matrix, Gf2Error> {
        if !self.is_square() {
            return Err(Gf2Error::Singular);
        }
        let n = self.cols;
        let mut a = self.rows.clone();
        let mut b: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for col in 0..n {
            let mask = 1u64 << col;
            let Some(pos) = (col as usize..a.len()).find(|&i| a[i] & mask != 0) else {
                return Err(Gf2Error::Singular);
            };
            a.swap(col as usize, pos);
            b.swap(col as usize, pos);
            for i in 0..n as usize {
                if i != col as usize && a[i] & mask != 0 {
                    a[i] ^= a[col as usize];
                    b[i] ^= b[col as usize];
                }
            }
        }
        Ok(Gf2Matrix { rows: b, cols: n })
    }

    /// Basis of the left kernel `{ x : x * self = 0 }`, as rows in GF(2)^nrows.
    pub fn left_kernel(&self) -> Gf2Matrix {
        let n = self.rows.len();
        assert!(n <= MAX_DIM as usize, "too many rows for packed kernel computation");
        // Eliminate rows while tracking the combination that produced each one.
        let mut work: Vec<(u64, u64)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, &r)| (r, 1u64 << i))
            .collect();
        let mut kernel: Vec<u64> = Vec::new();
        let mut pivots: Vec<(u64, (u64, u64))> = Vec::new(); // (mask, (row, tag))
        for (mut row, mut tag) in work.drain(..) {
            loop {
                if row == 0 {
                    kernel.push(tag);
                    break;
                }
                let mask = 1u64 << row.trailing_zeros();
                match pivots.iter().find(|(m, _)| *m == mask) {
                    Some((_, (prow, ptag))) => {
                        row ^= prow;
                        tag ^= ptag;
                    }
                    None => {
                        pivots.push((mask, (row, tag)));
                        break;
                    }
                }
            }
        }
        Gf2Matrix { rows: kernel, cols: n as u32 }
        .rref()
    }

    /// Lowercase hex of each row, one row per line, padded to ceil(cols/4)
    /// nibbles. The companion of [`Gf2Matrix::parse_hex`].
    pub fn to_hex(&self) -> String {
        let width = self.cols.div_ceil(4) as usize;
        let mut s = format!("dim={} rows={}\n", self.cols, self.rows.len());
        for &r in &self.rows {
            s.push_str(&format!("{r:0width$x}\n"));
        }
        s
    }

    /// Parses the block format written by [`Gf2Matrix::to_hex`] from a line
    /// iterator, consuming exactly the block's lines.
    pub fn parse_hex<'a, I: Iterator<Item = &'a str>>(lines: &mut I) -> Result<Gf2Matrix, Gf2Error> {
        let header = lines
            .next()
            .ok_or_else(|| Gf2Error::Parse("missing matrix header".into()))?;
        let (dim, nrows) = parse_matrix_header(header)?;
        check_dim(dim)?;
        let mut rows = Vec::with_capacity(nrows);
        for _ in 0..nrows {
            let line = lines
                .next()
                .ok_or_else(|| Gf2Error::Parse("matrix block truncated".into()))?
                .trim();
            let bits = u64::from_str_radix(line, 16)
                .map_err(|e| Gf2Error::Parse(format!("bad hex row {line:?}: {e}")))?;
            if dim < 64 && bits >> dim != 0 {
                return Err(Gf2Error::Parse(format!("row {line:?} exceeds dimension {dim}")));
            }
            rows.push(bits);
        }
        Ok(Gf2Matrix { rows, cols: dim })
    }
}

fn parse_matrix_header(header: &str) -> Result<(u32, usize), Gf2Error> {
    let mut dim = None;
    let mut nrows = None;
    for tok in header.split_whitespace() {
        if let Some(v) = tok.strip_prefix("dim=") {
            dim = v.parse().ok();
        } else if let Some(v) = tok.strip_prefix("rows=") {
            nrows = v.parse().ok();
        }
    }
    match (dim, nrows) {
        (Some(d), Some(r)) => Ok((d, r)),
        _ => Err(Gf2Error::Parse(format!("bad matrix header {header:?}"))),
    }
}

/// A subspace of GF(2)^v, identified with its reduced-row-echelon basis.
///
/// `Ord` compares the basis rows lexicographically as little-endian integers;
/// this is the canonical subspace order used for orbit representatives and
/// file formats.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    rows: Vec<u64>,
    v: u32,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(v={}, k={}, rows={:x?})", self.v, self.rows.len(), self.rows)
    }
}

impl Subspace {
    pub fn zero(v: u32) -> Self {
        Subspace { rows: Vec::new(), v }
    }

    pub fn full(v: u32) -> Self {
        Subspace { rows: (0..v).map(|i| 1u64 << i).collect(), v }
    }

    /// Span of packed vectors in GF(2)^v.
    pub fn span_bits(v: u32, vectors: &[u64]) -> Result<Self, Gf2Error> {
        check_dim(v)?;
        for &x in vectors {
            if v < 64 && x >> v != 0 {
                return Err(Gf2Error::DimensionMismatch { expected: v, got: 64 - x.leading_zeros() });
            }
        }
        let m = Gf2Matrix::from_rows(vectors.to_vec(), v)?.rref();
        Ok(Subspace { rows: m.rows, v })
    }

    /// Span of a set of vectors; they must agree on the ambient dimension.
    pub fn span(vectors: &[Gf2Vector]) -> Result<Self, Gf2Error> {
        let Some(first) = vectors.first() else {
            return Err(Gf2Error::BadDimension(0));
        };
        let v = first.dim();
        for x in vectors {
            if x.dim() != v {
                return Err(Gf2Error::DimensionMismatch { expected: v, got: x.dim() });
            }
        }
        Subspace::span_bits(v, &vectors.iter().map(|x| x.bits()).collect::<Vec<_>>())
    }

    /// The 1-subspace spanned by a nonzero vector.
    pub fn point(v: u32, x: u64) -> Self {
        debug_assert!(x != 0);
        Subspace { rows: vec![x], v }
    }

    pub fn dim(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn ambient_dim(&self) -> u32 {
        self.v
    }

    pub fn basis(&self) -> &[u64] {
        &self.rows
    }

    pub fn basis_matrix(&self) -> Gf2Matrix {
        Gf2Matrix { rows: self.rows.clone(), cols: self.v }
    }

    /// Reduces `x` against the basis; the remainder is zero iff `x` lies in
    /// the subspace.
    #[inline]
    pub fn reduce(&self, mut x: u64) -> u64 {
        for &r in &self.rows {
            if x & (r & r.wrapping_neg()) != 0 {
                // pivot bit of r is set in x
                x ^= r;
            }
        }
        x
    }

    #[inline]
    pub fn contains_vector(&self, x: u64) -> bool {
        self.reduce(x) == 0
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.v, other.v, "ambient dimension mismatch");
        other.rows.iter().all(|&r| self.contains_vector(r))
    }

    /// Lattice meet.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, Gf2Error> {
        if self.v != other.v {
            return Err(Gf2Error::DimensionMismatch { expected: self.v, got: other.v });
        }
        // Coefficients a with a * basis(self) in `other` form the left kernel
        // of the reduced basis images.
        let reduced: Vec<u64> = self.rows.iter().map(|&r| other.reduce(r)).collect();
        let m = Gf2Matrix { rows: reduced, cols: self.v };
        let kernel = m.left_kernel();
        let vectors: Vec<u64> = kernel
            .rows()
            .iter()
            .map(|&coeff| self.basis_matrix().apply(coeff))
            .collect();
        Subspace::span_bits(self.v, &vectors)
    }

    /// Lattice join.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace, Gf2Error> {
        if self.v != other.v {
            return Err(Gf2Error::DimensionMismatch { expected: self.v, got: other.v });
        }
        let mut rows = self.rows.clone();
        rows.extend_from_slice(&other.rows);
        Subspace::span_bits(self.v, &rows)
    }

    /// Image under an invertible matrix, re-canonicalized.
    pub fn apply(&self, a: &Gf2Matrix) -> Subspace {
        assert_eq!(a.ncols(), self.v, "matrix does not act on this ambient space");
        assert!(a.is_square());
        let rows: Vec<u64> = self.rows.iter().map(|&r| a.apply(r)).collect();
        let m = Gf2Matrix { rows, cols: self.v }.rref();
        Subspace { rows: m.rows, v: self.v }
    }

    /// All 2^k member vectors, including zero.
    pub fn elements(&self) -> impl Iterator<Item = u64> + '_ {
        let k = self.rows.len();
        assert!(k < 32, "subspace too large to enumerate");
        (0u64..1 << k).map(move |coeff| {
            let mut acc = 0;
            let mut bits = coeff;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                acc ^= self.rows[i];
                bits &= bits - 1;
            }
            acc
        })
    }

    /// Nonzero member vectors (the projective points of the subspace).
    pub fn points(&self) -> impl Iterator<Item = u64> + '_ {
        self.elements().filter(|&x| x != 0)
    }

    /// All t-dimensional subspaces of this subspace, in canonical order.
    pub fn subspaces(&self, t: u32) -> Vec<Subspace> {
        let k = self.dim();
        if t > k {
            return Vec::new();
        }
        if k == 0 {
            return vec![self.clone()];
        }
        let inner = enumerate_subspaces(k, t);
        let basis = self.basis_matrix();
        let mut out: Vec<Subspace> = inner
            .iter()
            .map(|s| {
                let rows: Vec<u64> = s.rows.iter().map(|&coeff| basis.apply(coeff)).collect();
                let m = Gf2Matrix { rows, cols: self.v }.rref();
                Subspace { rows: m.rows, v: self.v }
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// One hex token per basis row, space separated ("-" for the zero space).
    pub fn to_hex_row(&self) -> String {
        if self.rows.is_empty() {
            return "-".to_string();
        }
        let width = self.v.div_ceil(4) as usize;
        self.rows
            .iter()
            .map(|r| format!("{r:0width$x}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn parse_hex_row(s: &str, v: u32) -> Result<Subspace, Gf2Error> {
        check_dim(v)?;
        let s = s.trim();
        if s == "-" {
            return Ok(Subspace::zero(v));
        }
        let mut rows = Vec::new();
        for tok in s.split_whitespace() {
            let bits = u64::from_str_radix(tok, 16)
                .map_err(|e| Gf2Error::Parse(format!("bad hex row {tok:?}: {e}")))?;
            if v < 64 && bits >> v != 0 {
                return Err(Gf2Error::Parse(format!("row {tok:?} exceeds dimension {v}")));
            }
            rows.push(bits);
        }
        let m = Gf2Matrix { rows: rows.clone(), cols: v }.rref();
        if m.rows != rows {
            return Err(Gf2Error::Parse(format!("rows {s:?} are not a canonical basis")));
        }
        Ok(Subspace { rows, v })
    }
}

/// Gaussian binomial coefficient for q = 2, exact.
///
/// Computed by the Pascal-type recurrence in integer arithmetic; panics on
/// u128 overflow rather than returning a wrong value.
pub fn gaussian_binomial(v: u32, k: i64) -> u128 {
    if k < 0 || k > v as i64 {
        return 0;
    }
    // by symmetry only the lower half of the row is ever needed, which keeps
    // intermediates no larger than the result
    let k = (k as u32).min(v - k as u32);
    // gauss(n, j) = gauss(n-1, j-1) + 2^j * gauss(n-1, j)
    let mut row: Vec<u128> = vec![1; (k + 1) as usize]; // gauss(j, j) pre-seeded
    for n in 1..=v {
        for j in (1..row.len().min(n as usize)).rev() {
            assert!(j < 128, "gaussian binomial overflow");
            let term = row[j].checked_mul(1u128 << j).expect("gaussian binomial overflow");
            row[j] = row[j - 1].checked_add(term).expect("gaussian binomial overflow");
        }
    }
    row[k as usize]
}

/// Every k-subspace of GF(2)^v exactly once, sorted in the canonical
/// subspace order ([`Subspace`]'s `Ord`).
///
/// Generation walks all pivot-column sets and all assignments of the free
/// entries of the reduced row echelon form, then sorts. Memory is one
/// `Subspace` per element of the Grassmannian, which stays comfortable for
/// the v <= 9 censuses this crate performs (788_035 planes at v = 9).
pub fn enumerate_subspaces(v: u32, k: u32) -> Vec<Subspace> {
    assert!((1..=MAX_DIM).contains(&v), "unsupported ambient dimension {v}");
    assert!(k <= v, "k = {k} exceeds v = {v}");
    if k == 0 {
        return vec![Subspace::zero(v)];
    }
    let mut out: Vec<Subspace> = Vec::new();
    let mut pivots: Vec<u32> = (0..k).collect();
    loop {
        emit_for_pivots(v, &pivots, &mut out);
        // next k-combination of {0..v-1}
        let mut i = k as i64 - 1;
        while i >= 0 && pivots[i as usize] == v - k + i as u32 {
            i -= 1;
        }
        if i < 0 {
            break;
        }
        let i = i as usize;
        pivots[i] += 1;
        for j in i + 1..k as usize {
            pivots[j] = pivots[j - 1] + 1;
        }
    }
    out.sort_unstable();
    out
}

fn emit_for_pivots(v: u32, pivots: &[u32], out: &mut Vec<Subspace>) {
    let k = pivots.len();
    let pivot_mask: u64 = pivots.iter().fold(0, |m, &p| m | (1 << p));
    // Free positions of row i: non-pivot columns strictly above its pivot.
    let mut free: Vec<Vec<u32>> = Vec::with_capacity(k);
    for &p in pivots {
        free.push((p + 1..v).filter(|c| pivot_mask & (1 << c) == 0).collect());
    }
    let total_free: u32 = free.iter().map(|f| f.len() as u32).sum();
    assert!(total_free < 32, "Grassmannian too large to materialize");
    for assign in 0u64..1 << total_free {
        let mut rows = Vec::with_capacity(k);
        let mut cursor = 0u32;
        for (i, &p) in pivots.iter().enumerate() {
            let mut row = 1u64 << p;
            for &c in &free[i] {
                if assign >> cursor & 1 != 0 {
                    row |= 1 << c;
                }
                cursor += 1;
            }
            rows.push(row);
        }
        out.push(Subspace { rows, v });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn random_matrix(rng: &mut SplitMix64, nrows: usize, v: u32) -> Gf2Matrix {
        let rows = (0..nrows).map(|_| rng.next_u64() & ((1 << v) - 1)).collect();
        Gf2Matrix::from_rows(rows, v).unwrap()
    }

    fn random_invertible(rng: &mut SplitMix64, v: u32) -> Gf2Matrix {
        loop {
            let m = random_matrix(rng, v as usize, v);
            if m.is_invertible() {
                return m;
            }
        }
    }

    #[test]
    fn rref_identity_is_fixed() {
        let id = Gf2Matrix::identity(3);
        assert_eq!(id.rref(), id);
    }

    #[test]
    fn rref_eliminates() {
        // rows {e1+e2, e2} -> {e1, e2}
        let m = Gf2Matrix::from_rows(vec![0b011, 0b010], 3).unwrap();
        assert_eq!(m.rref().rows(), &[0b001, 0b010]);
    }

    #[test]
    fn rref_preserves_row_space() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..50 {
            let m = random_matrix(&mut rng, 5, 7);
            let r = m.rref();
            // membership oracle: all 2^5 row combinations of m lie in span(r) and vice versa
            let s_m = Subspace::span_bits(7, m.rows()).unwrap();
            let s_r = Subspace::span_bits(7, r.rows()).unwrap();
            assert_eq!(s_r.basis(), r.rows(), "rref output is already canonical");
            for coeff in 0u64..1 << m.nrows() {
                let x = m.apply(coeff);
                assert!(s_r.contains_vector(x));
            }
            for coeff in 0u64..1 << r.nrows() {
                let x = r.apply(coeff);
                assert!(s_m.contains_vector(x));
            }
            assert_eq!(s_m, s_r);
        }
    }

    #[test]
    fn rref_idempotent() {
        let mut rng = SplitMix64::new(5);
        for _ in 0..50 {
            let m = random_matrix(&mut rng, 6, 9);
            let r = m.rref();
            assert_eq!(r.rref(), r);
        }
    }

    #[test]
    fn span_trivia() {
        let s = Subspace::span_bits(7, &[]).unwrap();
        assert_eq!(s.dim(), 0);
        assert_eq!(s, Subspace::zero(7));

        let e1 = Gf2Vector::unit(0, 3);
        let e2 = Gf2Vector::unit(1, 3);
        let e12 = Gf2Vector::new(0b011, 3).unwrap();
        let s = Subspace::span(&[e1, e2, e12]).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s, Subspace::span_bits(3, &[1, 2]).unwrap());
    }

    #[test]
    fn span_dimension_mismatch() {
        let a = Gf2Vector::unit(0, 3);
        let b = Gf2Vector::unit(0, 4);
        assert!(matches!(Subspace::span(&[a, b]), Err(Gf2Error::DimensionMismatch { .. })));
    }

    #[test]
    fn triangle_spans_whole_space() {
        // The length-3 point orbit {(1,0,1),(0,1,1),(1,1,1)} is a triangle:
        // its span is 3-dimensional, i.e. all of GF(2)^3.
        let s = Subspace::span_bits(3, &[0b101, 0b110, 0b111]).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(s, Subspace::full(3));
    }

    #[test]
    fn subspace_equality_is_row_space_equality() {
        // exhaustive at v <= 4: equal element sets iff equal canonical form
        for v in 1..=4u32 {
            let mut all: Vec<Subspace> = Vec::new();
            for k in 0..=v {
                all.extend(enumerate_subspaces(v, k));
            }
            for a in &all {
                for b in &all {
                    let same_set = a.elements().collect::<Vec<_>>() == b.elements().collect::<Vec<_>>()
                        || (a.dim() == b.dim() && a.elements().all(|x| b.contains_vector(x)));
                    assert_eq!(a == b, same_set, "a={a:?} b={b:?}");
                }
            }
        }
    }

    #[test]
    fn gaussian_binomial_known_values() {
        assert_eq!(gaussian_binomial(3, 1), 7);
        assert_eq!(gaussian_binomial(7, 3), 11811);
        assert_eq!(gaussian_binomial(7, 1), 127);
        assert_eq!(gaussian_binomial(5, 1), 31);
        assert_eq!(gaussian_binomial(7, 2), 2667);
        assert_eq!(gaussian_binomial(13, 3), 3_269_560_515);
        assert_eq!(gaussian_binomial(4, -1), 0);
        assert_eq!(gaussian_binomial(4, 5), 0);
        assert_eq!(gaussian_binomial(0, 0), 1);
    }

    #[test]
    fn gaussian_binomial_symmetry() {
        for v in 0..=20u32 {
            for k in 0..=v {
                assert_eq!(
                    gaussian_binomial(v, k as i64),
                    gaussian_binomial(v, (v - k) as i64),
                    "v={v} k={k}"
                );
            }
        }
    }

    #[test]
    fn enumerate_counts_match_gaussian_binomial() {
        for v in 1..=8u32 {
            for k in 0..=v {
                let subs = enumerate_subspaces(v, k);
                assert_eq!(subs.len() as u128, gaussian_binomial(v, k as i64), "v={v} k={k}");
                // sorted and unique
                for w in subs.windows(2) {
                    assert!(w[0] < w[1]);
                }
            }
        }
    }

    #[test]
    fn enumerate_small_examples() {
        assert_eq!(enumerate_subspaces(3, 1).len(), 7);
        assert_eq!(enumerate_subspaces(7, 2).len(), 2667);
        assert_eq!(enumerate_subspaces(7, 3).len(), 11811);
    }

    #[test]
    fn lattice_ops_trivia() {
        let e1 = Subspace::point(3, 0b001);
        let e2 = Subspace::point(3, 0b010);
        assert!(e1.contains(&e1));
        assert_eq!(e1.intersect(&e2).unwrap(), Subspace::zero(3));
        assert_eq!(e1.sum(&e2).unwrap(), Subspace::span_bits(3, &[1, 2]).unwrap());
    }

    #[test]
    fn modular_dimension_identity() {
        let mut rng = SplitMix64::new(99);
        for _ in 0..100 {
            let s = Subspace::span_bits(7, random_matrix(&mut rng, 3, 7).rows()).unwrap();
            let t = Subspace::span_bits(7, random_matrix(&mut rng, 4, 7).rows()).unwrap();
            let meet = s.intersect(&t).unwrap();
            let join = s.sum(&t).unwrap();
            assert_eq!(s.dim() + t.dim(), meet.dim() + join.dim());
            // brute-force element check of the meet
            for x in meet.points() {
                assert!(s.contains_vector(x) && t.contains_vector(x));
            }
            for x in s.points() {
                if t.contains_vector(x) {
                    assert!(meet.contains_vector(x));
                }
            }
        }
    }

    #[test]
    fn apply_identity_and_inverse() {
        let mut rng = SplitMix64::new(42);
        let id = Gf2Matrix::identity(7);
        for _ in 0..50 {
            let s = Subspace::span_bits(7, random_matrix(&mut rng, 3, 7).rows()).unwrap();
            assert_eq!(s.apply(&id), s);
            let a = random_invertible(&mut rng, 7);
            let ainv = a.inverse().unwrap();
            assert!(a.mul(&ainv).is_identity());
            assert_eq!(s.apply(&a).apply(&ainv), s);
            assert_eq!(s.apply(&a).dim(), s.dim());
        }
    }

    #[test]
    fn inverse_of_singular_fails() {
        let m = Gf2Matrix::from_rows(vec![0b01, 0b01], 2).unwrap();
        assert_eq!(m.inverse(), Err(Gf2Error::Singular));
    }

    #[test]
    fn apply_is_lattice_automorphism() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..50 {
            let a = random_invertible(&mut rng, 6);
            let s = Subspace::span_bits(6, random_matrix(&mut rng, 3, 6).rows()).unwrap();
            let t = Subspace::span_bits(6, random_matrix(&mut rng, 2, 6).rows()).unwrap();
            assert_eq!(s.contains(&t), s.apply(&a).contains(&t.apply(&a)));
            assert_eq!(s.intersect(&t).unwrap().apply(&a), s.apply(&a).intersect(&t.apply(&a)).unwrap());
            assert_eq!(s.sum(&t).unwrap().apply(&a), s.apply(&a).sum(&t.apply(&a)).unwrap());
        }
    }

    #[test]
    fn left_kernel_is_kernel() {
        let mut rng = SplitMix64::new(3);
        for _ in 0..50 {
            let m = random_matrix(&mut rng, 6, 5);
            let ker = m.left_kernel();
            for coeff in 0u64..1 << ker.nrows() {
                assert_eq!(m.apply(ker.apply(coeff)), 0);
            }
            // rank-nullity
            assert_eq!(ker.nrows() as u32 + m.rank(), m.nrows() as u32);
        }
    }

    #[test]
    fn hex_round_trip() {
        let mut rng = SplitMix64::new(123);
        for v in [3u32, 7, 13] {
            for _ in 0..20 {
                let m = random_matrix(&mut rng, v as usize, v);
                let text = m.to_hex();
                let back = Gf2Matrix::parse_hex(&mut text.lines()).unwrap();
                assert_eq!(m, back);
                assert_eq!(back.to_hex(), text);
            }
        }
    }

    #[test]
    fn subspace_hex_round_trip() {
        let s = Subspace::span_bits(7, &[0b0000011, 0b0001100]).unwrap();
        let text = s.to_hex_row();
        assert_eq!(Subspace::parse_hex_row(&text, 7).unwrap(), s);
        assert_eq!(Subspace::parse_hex_row("-", 7).unwrap(), Subspace::zero(7));
        // non-canonical rows are rejected
        assert!(Subspace::parse_hex_row("03 01", 7).is_err());
    }

    #[test]
    fn subspaces_of_subspace() {
        let s = Subspace::full(3);
        assert_eq!(s.subspaces(2).len(), 7);
        let plane = Subspace::span_bits(7, &[1, 2, 4]).unwrap();
        let lines = plane.subspaces(2);
        assert_eq!(lines.len(), 7);
        for l in &lines {
            assert!(plane.contains(l));
            assert_eq!(l.dim(), 2);
        }
    }
}
