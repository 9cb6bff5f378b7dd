//! Closed-form theory for q-Steiner triple systems over GF(2) and their
//! order-3 automorphisms.
//!
//! For an order-3 automorphism with fixed-space dimension `f` everything
//! counted here has an exact formula: point orbits split into fixed points,
//! orbit lines and orbit triangles; fixed planes split into type 7 (all
//! points fixed) and type 1 (one fixed point, one orbit line, one orbit
//! triangle); and in a hypothetical design the numbers of fixed blocks of
//! each type (`f7`, `f1`) are pinned down by counting arguments. Combining
//! the divisibility of `f7` with a fixed-block count bound excludes roughly
//! half of the order-3 types outright; the survivors are what the search
//! machinery in the rest of the crate attacks.
//!
//! All arithmetic is exact: wide integers, with every claimed divisibility
//! asserted rather than assumed.

use std::fmt;

use crate::gf2::{gaussian_binomial, Gf2Matrix, Subspace};
use crate::group::{representative, GroupElement, Order3Type};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TheoryError {
    /// `(v, f)` with `v - f` odd or `f` out of range is not an order-3 type.
    BadType { v: u32, f: u32 },
    /// The operation requires admissible parameters (v = 1, 3 mod 6, v >= 3).
    NotAdmissible(u32),
    /// No field model is wired up for this ambient dimension.
    UnsupportedDimension(u32),
}

impl fmt::Display for TheoryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoryError::BadType { v, f: fd } => {
                write!(f, "no order-3 type with ambient dimension {v} and fixed dimension {fd}")
            }
            TheoryError::NotAdmissible(v) => write!(f, "v = {v} is not admissible"),
            TheoryError::UnsupportedDimension(v) => {
                write!(f, "no field model for ambient dimension {v}")
            }
        }
    }
}

impl std::error::Error for TheoryError {}

/// Parameters of a t-(v,k,lambda) subspace design over GF(2).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct DesignParams {
    pub t: u32,
    pub v: u32,
    pub k: u32,
    pub lambda: u64,
}

impl DesignParams {
    pub fn new(t: u32, v: u32, k: u32, lambda: u64) -> Self {
        assert!(t <= k && k <= v, "need 0 <= t <= k <= v");
        assert!(lambda >= 1);
        DesignParams { t, v, k, lambda }
    }

    /// Steiner triple system parameters 2-(v,3,1).
    pub fn sts(v: u32) -> Self {
        DesignParams::new(2, v, 3, 1)
    }
}

/// An exact nonnegative rational, kept reduced.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Ratio {
    num: u128,
    den: u128,
}

impl Ratio {
    pub fn new(num: u128, den: u128) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num.max(1), den);
        Ratio { num: num / g, den: den / g }
    }

    pub fn numerator(&self) -> u128 {
        self.num
    }

    pub fn denominator(&self) -> u128 {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn as_integer(&self) -> Option<u128> {
        self.is_integer().then_some(self.num)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// Derived design parameter `lambda_s`: any t-(v,k,lambda) design is also an
/// s-(v,k,lambda_s) design for `0 <= s <= t`, where
/// `lambda_s = lambda * gauss(v-s, t-s) / gauss(k-s, t-s)`.
///
/// Exact rational; it is an integer exactly when the integrality condition
/// holds at `s`.
pub fn lambda_s(p: DesignParams, s: u32) -> Ratio {
    assert!(s <= p.t, "s = {s} exceeds t = {}", p.t);
    let num = gaussian_binomial(p.v - s, (p.t - s) as i64);
    let den = gaussian_binomial(p.k - s, (p.t - s) as i64);
    Ratio::new(u128::from(p.lambda) * num, den)
}

/// Number of blocks of a design with these parameters (`lambda_0`), when the
/// integrality conditions hold.
pub fn block_count(p: DesignParams) -> Option<u128> {
    lambda_s(p, 0).as_integer()
}

/// Admissibility of Steiner triple system parameters: v = 1, 3 (mod 6) and
/// v >= 3. Equivalent to the integrality of lambda_1 and lambda_0.
pub fn is_admissible_sts(v: u32) -> bool {
    v >= 3 && matches!(v % 6, 1 | 3)
}

/// Exact structure counts for the action of an order-3 automorphism of type
/// `(v, f)`, plus the fixed-block counts `f7`/`f1` forced on a hypothetical
/// design invariant under it.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct FixedStructureCounts {
    pub fixed_points: u128,
    pub orbit_lines: u128,
    pub orbit_triangles: u128,
    pub fixed_planes_type7: u128,
    pub fixed_planes_type1: u128,
    /// Fixed blocks of type 7 = block count of the restricted design on the
    /// fixed space; `None` when that count is not an integer (in which case
    /// the type is excluded outright).
    pub f7: Option<u128>,
    /// Fixed blocks of type 1 = number of orbit lines.
    pub f1: u128,
}

/// Evaluates the closed-form counts for type `(v, f)`.
pub fn o3_counts(v: u32, f: u32) -> Result<FixedStructureCounts, TheoryError> {
    if f >= v || !(v - f).is_multiple_of(2) {
        return Err(TheoryError::BadType { v, f });
    }
    let pow = |e: u32| -> u128 { 1u128 << e };
    let fixed_points = pow(f) - 1;
    let moved = pow(v - f) - 1;
    assert!(moved % 3 == 0, "2^(v-f) - 1 must be divisible by 3 for even v - f");
    let orbit_lines = moved / 3;
    let tri_num = moved * fixed_points;
    assert!(tri_num % 3 == 0);
    let orbit_triangles = tri_num / 3;
    let fixed_planes_type7 = gaussian_binomial(f, 3);
    // each type-1 fixed plane is spanned by its unique orbit triangle
    let fixed_planes_type1 = orbit_triangles;
    let f7 = if f == 0 {
        Some(0)
    } else {
        let num = (pow(f) - 1) * (pow(f - 1) - 1);
        (num % 21 == 0).then_some(num / 21)
    };
    let f1 = orbit_lines;
    Ok(FixedStructureCounts {
        fixed_points,
        orbit_lines,
        orbit_triangles,
        fixed_planes_type7,
        fixed_planes_type1,
        f7,
        f1,
    })
}

/// Why an order-3 type cannot be an automorphism of a design.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ExclusionReason {
    /// The ambient parameters themselves are inadmissible.
    Admissibility,
    /// f = 2 (mod 3): the fixed blocks of type 7 would form a Steiner triple
    /// system on the fixed space, whose parameters are inadmissible.
    FixedDimResidue,
    /// f > (v-3)/2 with f and v in different residue classes mod 3: each
    /// fixed point forces a distinct type-1 fixed block, overrunning the
    /// exact count of such blocks.
    FixedDimTooLarge,
    NotExcluded,
}

impl ExclusionReason {
    /// Stable token used in machine-readable output.
    pub fn token(&self) -> &'static str {
        match self {
            ExclusionReason::Admissibility => "admissibility",
            ExclusionReason::FixedDimResidue => "fixed-dim-residue",
            ExclusionReason::FixedDimTooLarge => "fixed-dim-too-large",
            ExclusionReason::NotExcluded => "-",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ExclusionVerdict {
    pub excluded: bool,
    pub reason: ExclusionReason,
}

/// Decides whether type `(v, f)` is excluded as an automorphism of a
/// Steiner triple system over GF(2).
///
/// Surviving types have f != 2 (mod 3), and additionally f <= (v-3)/2
/// whenever f != v (mod 3) (for v >= 7; the trivial v = 3 design is invariant
/// under the full linear group, so no bound applies there). In one residue
/// class the counting argument even forces two distinct type-1 blocks per
/// fixed point, but the resulting condition on f is the same, so only the
/// single bound is implemented.
pub fn o3_type_excluded(v: u32, f: u32) -> Result<ExclusionVerdict, TheoryError> {
    if f >= v || !(v - f).is_multiple_of(2) {
        return Err(TheoryError::BadType { v, f });
    }
    if !is_admissible_sts(v) {
        return Ok(ExclusionVerdict { excluded: true, reason: ExclusionReason::Admissibility });
    }
    if f % 3 == 2 {
        return Ok(ExclusionVerdict { excluded: true, reason: ExclusionReason::FixedDimResidue });
    }
    if v >= 7 && f % 3 != v % 3 && f > (v - 3) / 2 {
        return Ok(ExclusionVerdict { excluded: true, reason: ExclusionReason::FixedDimTooLarge });
    }
    Ok(ExclusionVerdict { excluded: false, reason: ExclusionReason::NotExcluded })
}

/// One row of the order-3 survey table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub ty: Order3Type,
    pub counts: FixedStructureCounts,
    pub verdict: ExclusionVerdict,
}

/// Survey of all order-3 types for ambient dimension `v`, ascending in `f`.
pub fn order3_table(v: u32) -> Result<Vec<TableRow>, TheoryError> {
    let mut rows = Vec::new();
    for f in 0..v {
        if !(v - f).is_multiple_of(2) {
            continue;
        }
        rows.push(TableRow {
            ty: Order3Type::new(v, f).expect("parity checked"),
            counts: o3_counts(v, f)?,
            verdict: o3_type_excluded(v, f)?,
        });
    }
    Ok(rows)
}

/// The fixed blocks every design with an automorphism of type `(v, 1)` must
/// contain: for each orbit line `L`, the plane spanned by `L` and the unique
/// fixed point. There are `(2^(v-1) - 1) / 3` of them, they pairwise meet
/// exactly in the fixed point, and each contains exactly one orbit line.
///
/// Uses the standard-basis representative of type `(v, 1)`; the fixed point
/// is the last coordinate axis.
pub fn forced_fixed_blocks_f1(v: u32) -> Result<Vec<Subspace>, TheoryError> {
    if !is_admissible_sts(v) {
        return Err(TheoryError::NotAdmissible(v));
    }
    if v.is_multiple_of(2) {
        return Err(TheoryError::BadType { v, f: 1 });
    }
    let a = representative(v, 1).map_err(|_| TheoryError::BadType { v, f: 1 })?;
    let m = a.matrix();
    let fixed_vector = 1u64 << (v - 1);
    debug_assert_eq!(m.apply(fixed_vector), fixed_vector);

    let mut seen = vec![false; 1usize << (v - 1)];
    let mut blocks = Vec::new();
    for x in 1u64..1 << (v - 1) {
        if seen[x as usize] {
            continue;
        }
        let x1 = m.apply(x);
        let x2 = m.apply(x1);
        debug_assert_eq!(x ^ x1 ^ x2, 0, "all orbits in the moved space are orbit lines");
        seen[x as usize] = true;
        seen[x1 as usize] = true;
        seen[x2 as usize] = true;
        let block = Subspace::span_bits(v, &[x, x1, fixed_vector]).expect("fits");
        debug_assert_eq!(block.dim(), 3);
        blocks.push(block);
    }
    blocks.sort_unstable();
    let expected = ((1u128 << (v - 1)) - 1) / 3;
    assert_eq!(blocks.len() as u128, expected);
    Ok(blocks)
}

/// Field model behind the forced-block structure for type `(v, 1)`: the
/// moved space is GF(2^(v-1)) with a fixed primitive polynomial, `zeta` is a
/// primitive third root of unity, and multiplication by `zeta` realizes the
/// order-3 action without fixed points. The GF(4)-subline structure turns
/// the orbit lines into a Desarguesian line spread.
///
/// Used as a cross-check against the direct span construction; the search
/// pipeline itself never needs it.
#[derive(Clone, Debug)]
pub struct SpreadModel {
    v: u32,
    w: u32,
    /// Modulus polynomial including the x^w term, bit i = coefficient of x^i.
    poly: u64,
    zeta: u64,
}

impl SpreadModel {
    pub fn new(v: u32) -> Result<Self, TheoryError> {
        if v < 3 || v.is_multiple_of(2) {
            return Err(TheoryError::BadType { v, f: 1 });
        }
        let w = v - 1;
        let poly = match w {
            2 => 0b111,
            4 => 0b1_0011,
            6 => 0b100_0011,
            8 => 0b1_0001_1101,
            10 => 0b100_0000_1001,
            12 => 0b1_0000_0101_0011,
            _ => return Err(TheoryError::UnsupportedDimension(v)),
        };
        let model = SpreadModel { v, w, poly, zeta: 0 };
        // x must generate the multiplicative group for zeta = x^((2^w-1)/3)
        // to have exact order 3; cheap to verify directly.
        let group_order = (1u64 << w) - 1;
        let mut acc = 1u64;
        for i in 1..=group_order {
            acc = model.gf_mul(acc, 0b10);
            if acc == 1 {
                assert_eq!(i, group_order, "modulus polynomial is not primitive");
                break;
            }
        }
        let zeta = model.gf_pow(0b10, group_order / 3);
        assert!(zeta != 1);
        assert_eq!(model.gf_pow(zeta, 3), 1);
        Ok(SpreadModel { zeta, ..model })
    }

    pub fn ambient_dim(&self) -> u32 {
        self.v
    }

    pub fn zeta(&self) -> u64 {
        self.zeta
    }

    /// Carryless multiplication modulo the model polynomial.
    pub fn gf_mul(&self, mut a: u64, mut b: u64) -> u64 {
        let mut acc = 0u64;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a >> self.w != 0 {
                a ^= self.poly;
            }
        }
        acc
    }

    pub fn gf_pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e != 0 {
            if e & 1 != 0 {
                acc = self.gf_mul(acc, base);
            }
            base = self.gf_mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The w x w matrix of multiplication by zeta in the monomial basis.
    pub fn mult_by_zeta_matrix(&self) -> Gf2Matrix {
        let rows: Vec<u64> = (0..self.w).map(|i| self.gf_mul(1 << i, self.zeta)).collect();
        Gf2Matrix::from_rows(rows, self.w).expect("rows fit")
    }

    /// The ambient order-3 automorphism: multiplication by zeta on the first
    /// w coordinates, identity on the last. Type `(v, 1)`.
    pub fn automorphism(&self) -> GroupElement {
        let zm = self.mult_by_zeta_matrix();
        let mut rows: Vec<u64> = zm.rows().to_vec();
        rows.push(1u64 << self.w);
        GroupElement::new(Gf2Matrix::from_rows(rows, self.v).expect("rows fit"))
            .expect("field multiplication is invertible")
    }

    /// The Desarguesian line spread: the GF(4)-sublines `{b, zeta b, zeta^2 b}`
    /// of the moved space, as 2-subspaces of GF(2)^w. Partitions the points.
    pub fn spread_lines(&self) -> Vec<Subspace> {
        let mut seen = vec![false; 1usize << self.w];
        let mut lines = Vec::new();
        for b in 1u64..1 << self.w {
            if seen[b as usize] {
                continue;
            }
            let b1 = self.gf_mul(b, self.zeta);
            let b2 = self.gf_mul(b1, self.zeta);
            seen[b as usize] = true;
            seen[b1 as usize] = true;
            seen[b2 as usize] = true;
            lines.push(Subspace::span_bits(self.w, &[b, b1]).expect("fits"));
        }
        lines.sort_unstable();
        lines
    }

    /// The spread lines lifted to blocks of the ambient space: the span of
    /// each line together with the fixed coordinate axis.
    pub fn lifted_blocks(&self) -> Vec<Subspace> {
        let fixed_vector = 1u64 << self.w;
        let mut blocks: Vec<Subspace> = self
            .spread_lines()
            .iter()
            .map(|l| {
                let mut rows = l.basis().to_vec();
                rows.push(fixed_vector);
                Subspace::span_bits(self.v, &rows).expect("fits")
            })
            .collect();
        blocks.sort_unstable();
        blocks
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{
        classify_fixed_plane, fixed_planes_by_construction, point_orbit_census, FixedPlaneClass,
    };
    use crate::group::{element_order, order3_type};

    #[test]
    fn lambda_values_for_sts() {
        let p7 = DesignParams::sts(7);
        assert_eq!(lambda_s(p7, 2).as_integer(), Some(1));
        assert_eq!(lambda_s(p7, 1).as_integer(), Some(21));
        assert_eq!(lambda_s(p7, 0).as_integer(), Some(381));
        let p13 = DesignParams::sts(13);
        assert_eq!(lambda_s(p13, 0).as_integer(), Some(1_597_245));
        let p9 = DesignParams::sts(9);
        assert_eq!(lambda_s(p9, 0).as_integer(), Some(6205));
    }

    #[test]
    fn lambda_non_integer_when_inadmissible() {
        let p5 = DesignParams::sts(5);
        assert!(!lambda_s(p5, 1).is_integer() || !lambda_s(p5, 0).is_integer());
    }

    #[test]
    fn admissibility() {
        for v in [3u32, 7, 9, 13, 15, 19] {
            assert!(is_admissible_sts(v), "v={v}");
            // matches integrality of the lambda formulas directly
            let p = DesignParams::sts(v);
            assert!(lambda_s(p, 1).is_integer() && lambda_s(p, 0).is_integer());
        }
        for v in [1u32, 2, 4, 5, 6, 8, 10, 11, 12] {
            assert!(!is_admissible_sts(v), "v={v}");
            if v >= 3 {
                let p = DesignParams::sts(v);
                assert!(!(lambda_s(p, 1).is_integer() && lambda_s(p, 0).is_integer()));
            }
        }
    }

    #[test]
    fn counts_for_known_types() {
        let c = o3_counts(7, 1).unwrap();
        assert_eq!(
            (c.fixed_points, c.orbit_lines, c.orbit_triangles, c.fixed_planes_type7, c.fixed_planes_type1),
            (1, 21, 21, 0, 21)
        );
        assert_eq!((c.f7, c.f1), (Some(0), 21));

        let c = o3_counts(13, 7).unwrap();
        assert_eq!(c.fixed_planes_type7, 11811);
        assert_eq!(c.f7, Some(381));
        assert_eq!(c.f1, 21);

        let c = o3_counts(9, 3).unwrap();
        assert_eq!(
            (c.fixed_points, c.orbit_lines, c.orbit_triangles, c.fixed_planes_type7, c.fixed_planes_type1),
            (7, 21, 147, 1, 147)
        );
        assert_eq!((c.f7, c.f1), (Some(1), 21));
    }

    #[test]
    fn counts_partition_the_point_set() {
        for v in 2..=31u32 {
            for f in (0..v).filter(|f| (v - f) % 2 == 0) {
                let c = o3_counts(v, f).unwrap();
                assert_eq!(
                    c.fixed_points + 3 * (c.orbit_lines + c.orbit_triangles),
                    (1u128 << v) - 1,
                    "v={v} f={f}"
                );
                // the fixed-block counts only apply where a design could exist
                if is_admissible_sts(v) && f % 2 == 1 {
                    if let Some(f7) = c.f7 {
                        assert!(f7 <= c.fixed_planes_type7, "v={v} f={f}");
                    }
                    assert!(c.f1 <= c.fixed_planes_type1, "v={v} f={f}");
                }
            }
        }
    }

    #[test]
    fn counts_match_census_small() {
        for v in 2..=9u32 {
            for f in (0..v).filter(|f| (v - f) % 2 == 0) {
                let c = o3_counts(v, f).unwrap();
                let a = representative(v, f).unwrap();
                let census = point_orbit_census(&a).unwrap();
                assert_eq!(u128::from(census.fixed_points), c.fixed_points, "v={v} f={f}");
                assert_eq!(u128::from(census.orbit_lines), c.orbit_lines, "v={v} f={f}");
                assert_eq!(u128::from(census.orbit_triangles), c.orbit_triangles, "v={v} f={f}");
            }
        }
    }

    #[test]
    fn counts_reject_bad_parity() {
        assert!(o3_counts(7, 2).is_err());
        assert!(o3_counts(7, 7).is_err());
    }

    #[test]
    fn exclusion_examples() {
        assert_eq!(
            o3_type_excluded(7, 5).unwrap(),
            ExclusionVerdict { excluded: true, reason: ExclusionReason::FixedDimResidue }
        );
        assert_eq!(
            o3_type_excluded(7, 3).unwrap(),
            ExclusionVerdict { excluded: true, reason: ExclusionReason::FixedDimTooLarge }
        );
        assert!(!o3_type_excluded(3, 1).unwrap().excluded);
        assert_eq!(
            o3_type_excluded(5, 1).unwrap().reason,
            ExclusionReason::Admissibility
        );
    }

    #[test]
    fn survivors_for_small_dimensions() {
        let mut survivors = Vec::new();
        for v in [7u32, 9, 13] {
            for f in (1..v).filter(|f| (v - f) % 2 == 0) {
                if !o3_type_excluded(v, f).unwrap().excluded {
                    survivors.push((v, f));
                }
            }
        }
        assert_eq!(survivors, vec![(7, 1), (9, 1), (9, 3), (13, 1), (13, 3), (13, 7)]);
    }

    #[test]
    fn residue_exclusion_always_fires() {
        for v in (3..=31u32).filter(|v| is_admissible_sts(*v)) {
            for f in (1..v).filter(|f| (v - f) % 2 == 0) {
                let verdict = o3_type_excluded(v, f).unwrap();
                if f % 3 == 2 {
                    assert!(verdict.excluded, "v={v} f={f}");
                }
            }
        }
        assert!(!o3_type_excluded(3, 1).unwrap().excluded);
    }

    #[test]
    fn table_rows_cover_all_types() {
        let rows = order3_table(7).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows.iter().map(|r| r.ty.f).collect::<Vec<_>>(), vec![1, 3, 5]);
    }

    #[test]
    fn forced_blocks_for_v7() {
        let blocks = forced_fixed_blocks_f1(7).unwrap();
        assert_eq!(blocks.len(), 21);
        let a = representative(7, 1).unwrap();
        let fixed_point = Subspace::point(7, 1 << 6);
        for (i, b) in blocks.iter().enumerate() {
            assert_eq!(classify_fixed_plane(b, &a).unwrap(), FixedPlaneClass::Type1);
            for b2 in &blocks[i + 1..] {
                assert_eq!(b.intersect(b2).unwrap(), fixed_point);
            }
        }
    }

    #[test]
    fn forced_blocks_cover_each_orbit_line_once() {
        for v in [7u32, 9] {
            let blocks = forced_fixed_blocks_f1(v).unwrap();
            let a = representative(v, 1).unwrap();
            let mut covered = std::collections::HashSet::new();
            for b in &blocks {
                let orbit_lines: Vec<Subspace> = b
                    .subspaces(2)
                    .into_iter()
                    .filter(|l| {
                        l.apply(a.matrix()) == *l && l.points().all(|x| a.matrix().apply(x) != x)
                    })
                    .collect();
                assert_eq!(orbit_lines.len(), 1, "each forced block contains one orbit line");
                assert!(covered.insert(orbit_lines[0].clone()), "line covered twice");
            }
            let expected_lines = o3_counts(v, 1).unwrap().orbit_lines;
            assert_eq!(covered.len() as u128, expected_lines);
        }
    }

    #[test]
    fn forced_blocks_rejects_bad_v() {
        assert!(forced_fixed_blocks_f1(5).is_err());
        assert!(forced_fixed_blocks_f1(6).is_err());
    }

    #[test]
    fn spread_model_invariants() {
        for v in [3u32, 5, 7, 9, 13] {
            let model = SpreadModel::new(v).unwrap();
            let zeta = model.zeta();
            assert_ne!(zeta, 1);
            assert_eq!(model.gf_pow(zeta, 3), 1);
            // multiplication by zeta has no nonzero fixed vector
            for x in 1u64..1 << (v - 1).min(10) {
                assert_ne!(model.gf_mul(x, zeta), x);
            }
            let lines = model.spread_lines();
            assert_eq!(lines.len() as u128, ((1u128 << (v - 1)) - 1) / 3);
            // spread: lines pairwise disjoint away from zero
            let mut seen = std::collections::HashSet::new();
            for l in &lines {
                for p in l.points() {
                    assert!(seen.insert(p), "spread lines overlap");
                }
            }
        }
    }

    #[test]
    fn spread_model_agrees_with_span_construction() {
        // The field-model automorphism has type (7,1); its type-1 fixed
        // planes are exactly the lifted spread lines, which is the same set
        // the direct span construction produces for it.
        let model = SpreadModel::new(7).unwrap();
        let a = model.automorphism();
        assert_eq!(element_order(&a), 3);
        assert_eq!(order3_type(&a).unwrap().f, 1);

        let lifted = model.lifted_blocks();
        let (type7, type1) = fixed_planes_by_construction(&a).unwrap();
        assert!(type7.is_empty());
        assert_eq!(lifted, type1);

        // and the standard-basis construction has the same structure counts
        let forced = forced_fixed_blocks_f1(7).unwrap();
        assert_eq!(forced.len(), lifted.len());
    }
}
