//! Orbits of matrix groups on Grassmannians.
//!
//! Orbits are computed by generator-BFS over canonical subspaces and are
//! keyed by their canonical representative: the lexicographically least
//! reduced-row-echelon encoding among the members. Determinism of that choice
//! is what makes file formats and job splits reproducible.
//!
//! The module also provides the point-orbit and fixed-plane classification
//! for order-3 automorphisms, and the induced action of a normalizer on the
//! set of orbits of the normalized group.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::gf2::{enumerate_subspaces, gaussian_binomial, Subspace};
use crate::group::{
    element_order, fixed_space_dim, is_normalizing, GroupElement, GroupError, MatrixGroup,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionError {
    Group(GroupError),
    /// A normalizer-action operation was given a non-normalizing group.
    NonNormalizing,
    /// Point-orbit classification applies to orbits of size 1 or 3 only.
    BadOrbitSize(usize),
    /// The element must have order 3.
    OrderNot3(u64),
    /// Fixed-plane classification got a subspace that is not a fixed plane.
    NotAFixedPlane,
}

impl fmt::Display for ActionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionError::Group(e) => write!(f, "{e}"),
            ActionError::NonNormalizing => write!(f, "group does not normalize the acting group"),
            ActionError::BadOrbitSize(n) => write!(f, "point orbit has size {n}, expected 1 or 3"),
            ActionError::OrderNot3(n) => write!(f, "element has order {n}, expected 3"),
            ActionError::NotAFixedPlane => write!(f, "subspace is not a fixed 3-subspace"),
        }
    }
}

impl std::error::Error for ActionError {}

impl From<GroupError> for ActionError {
    fn from(e: GroupError) -> Self {
        ActionError::Group(e)
    }
}

/// A group orbit of subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    representative: Subspace,
    members: Vec<Subspace>,
}

impl Orbit {
    /// Canonical representative: minimal member in subspace order.
    pub fn representative(&self) -> &Subspace {
        &self.representative
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Members sorted in canonical subspace order.
    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn contains(&self, s: &Subspace) -> bool {
        self.members.binary_search(s).is_ok()
    }
}

/// The orbit of `s` under the group generated by `group`'s generators.
///
/// Works from generators alone; the group need not be enumerated.
pub fn orbit(s: &Subspace, group: &MatrixGroup) -> Orbit {
    let mut members: Vec<Subspace> = vec![s.clone()];
    let mut seen: HashSet<Subspace> = [s.clone()].into_iter().collect();
    let mut cursor = 0;
    while cursor < members.len() {
        let current = members[cursor].clone();
        cursor += 1;
        for g in group.generators() {
            let image = current.apply(g.matrix());
            if !seen.contains(&image) {
                seen.insert(image.clone());
                members.push(image);
            }
        }
    }
    members.sort_unstable();
    Orbit { representative: members[0].clone(), members }
}

/// Canonical representative of the `group`-orbit of `s`, via the enumerated
/// element list.
pub fn canonical_in_orbit(s: &Subspace, group: &MatrixGroup) -> Result<Subspace, GroupError> {
    let mut best = s.clone();
    for g in group.elements()? {
        let image = s.apply(g.matrix());
        if image < best {
            best = image;
        }
    }
    Ok(best)
}

/// Partitions the full Grassmannian of k-subspaces of GF(2)^v into orbits.
///
/// Orbits come out sorted by canonical representative; the sum of their sizes
/// is the Gaussian binomial. Memory is one subspace per Grassmannian element
/// plus the assignment map (at v = 7, k = 3 that is 11811 planes times a
/// small constant).
pub fn orbit_partition(v: u32, k: u32, group: &MatrixGroup) -> Vec<Orbit> {
    let all = enumerate_subspaces(v, k);
    let mut assigned: HashSet<Subspace> = HashSet::with_capacity(all.len());
    let mut orbits = Vec::new();
    for s in &all {
        if assigned.contains(s) {
            continue;
        }
        let orb = orbit(s, group);
        debug_assert_eq!(orb.representative(), s, "enumeration order yields minimal reps");
        for m in orb.members() {
            assigned.insert(m.clone());
        }
        orbits.push(orb);
    }
    debug_assert_eq!(
        orbits.iter().map(|o| o.size() as u128).sum::<u128>(),
        gaussian_binomial(v, k as i64)
    );
    orbits
}

/// Shape of a point orbit under an order-3 automorphism.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PointOrbitClass {
    /// Size 1.
    FixedPoint,
    /// Size 3, the three points are collinear (span a 2-subspace).
    OrbitLine,
    /// Size 3, the three points span a 3-subspace.
    OrbitTriangle,
}

/// Classifies a point orbit (orbit of 1-subspaces) under `<a>`, `a` of order 3.
pub fn classify_point_orbit(o: &Orbit, a: &GroupElement) -> Result<PointOrbitClass, ActionError> {
    let order = element_order(a);
    if order != 3 {
        return Err(ActionError::OrderNot3(order));
    }
    match o.size() {
        1 => Ok(PointOrbitClass::FixedPoint),
        3 => {
            let span = o.members()[0]
                .sum(&o.members()[1])
                .and_then(|s| s.sum(&o.members()[2]))
                .expect("members share the ambient space");
            match span.dim() {
                2 => Ok(PointOrbitClass::OrbitLine),
                3 => Ok(PointOrbitClass::OrbitTriangle),
                d => unreachable!("length-3 point orbit spanning dimension {d}"),
            }
        }
        n => Err(ActionError::BadOrbitSize(n)),
    }
}

/// Shape of a plane fixed (setwise) by an order-3 automorphism.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum FixedPlaneClass {
    /// All 7 points of the plane are fixed.
    Type7,
    /// 1 fixed point, 1 orbit line, 1 orbit triangle.
    Type1,
}

/// Classifies a fixed plane by the census of its points.
pub fn classify_fixed_plane(e: &Subspace, a: &GroupElement) -> Result<FixedPlaneClass, ActionError> {
    let order = element_order(a);
    if order != 3 {
        return Err(ActionError::OrderNot3(order));
    }
    if e.dim() != 3 || e.apply(a.matrix()) != *e {
        return Err(ActionError::NotAFixedPlane);
    }
    let fixed = e.points().filter(|&x| a.matrix().apply(x) == x).count();
    match fixed {
        7 => Ok(FixedPlaneClass::Type7),
        1 => Ok(FixedPlaneClass::Type1),
        n => unreachable!("fixed plane with {n} fixed points under an order-3 element"),
    }
}

/// Point-orbit census of a full point set under an order-3 element.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PointCensus {
    pub fixed_points: u64,
    pub orbit_lines: u64,
    pub orbit_triangles: u64,
}

/// Walks all 2^v - 1 points and tallies their orbit classes under `<a>`.
pub fn point_orbit_census(a: &GroupElement) -> Result<PointCensus, ActionError> {
    let order = element_order(a);
    if order != 3 {
        return Err(ActionError::OrderNot3(order));
    }
    let v = a.dim();
    assert!(v <= 20, "point set of GF(2)^{v} too large for a direct census");
    let m = a.matrix();
    let mut seen = vec![false; 1usize << v];
    let mut census = PointCensus { fixed_points: 0, orbit_lines: 0, orbit_triangles: 0 };
    for x in 1u64..1 << v {
        if seen[x as usize] {
            continue;
        }
        let x1 = m.apply(x);
        let x2 = m.apply(x1);
        seen[x as usize] = true;
        if x1 == x {
            census.fixed_points += 1;
            continue;
        }
        seen[x1 as usize] = true;
        seen[x2 as usize] = true;
        // collinear iff x + xa + xa^2 = 0
        if x ^ x1 ^ x2 == 0 {
            census.orbit_lines += 1;
        } else {
            census.orbit_triangles += 1;
        }
    }
    Ok(census)
}

/// Fixed-plane census by brute force over the whole Grassmannian of planes.
/// Only feasible for v <= 9; see [`fixed_planes_by_construction`] for the
/// structural enumeration that scales further.
pub fn fixed_plane_census(a: &GroupElement) -> Result<(u64, u64), ActionError> {
    let v = a.dim();
    let mut type7 = 0;
    let mut type1 = 0;
    for e in enumerate_subspaces(v, 3.min(v)) {
        if e.dim() == 3 && e.apply(a.matrix()) == e {
            match classify_fixed_plane(&e, a)? {
                FixedPlaneClass::Type7 => type7 += 1,
                FixedPlaneClass::Type1 => type1 += 1,
            }
        }
    }
    Ok((type7, type1))
}

/// Enumerates the fixed planes of an order-3 element structurally, without
/// touching the full Grassmannian: type-7 planes are the planes of the fixed
/// space, type-1 planes are the spans of the orbit triangles.
///
/// Returns `(type7, type1)`, each sorted and duplicate-free.
pub fn fixed_planes_by_construction(
    a: &GroupElement,
) -> Result<(Vec<Subspace>, Vec<Subspace>), ActionError> {
    let order = element_order(a);
    if order != 3 {
        return Err(ActionError::OrderNot3(order));
    }
    let v = a.dim();
    assert!(v <= 20, "point set of GF(2)^{v} too large for a structural enumeration");
    let m = a.matrix();

    // Fixed space F = ker(a + I).
    let ident = crate::gf2::Gf2Matrix::identity(v);
    let fixed_space_basis = m.add(&ident).left_kernel();
    let fixed_space = Subspace::span_bits(v, fixed_space_basis.rows()).expect("kernel rows fit");
    debug_assert_eq!(fixed_space.dim(), fixed_space_dim(a));
    let type7 = if fixed_space.dim() >= 3 { fixed_space.subspaces(3) } else { Vec::new() };

    // Each orbit triangle spans a distinct type-1 plane, and every type-1
    // plane arises this way.
    let mut seen_points = vec![false; 1usize << v];
    let mut type1: Vec<Subspace> = Vec::new();
    for x in 1u64..1 << v {
        if seen_points[x as usize] {
            continue;
        }
        let x1 = m.apply(x);
        if x1 == x {
            continue; // fixed point
        }
        let x2 = m.apply(x1);
        seen_points[x as usize] = true;
        seen_points[x1 as usize] = true;
        seen_points[x2 as usize] = true;
        if x ^ x1 ^ x2 != 0 {
            let plane = Subspace::span_bits(v, &[x, x1, x2]).expect("fits");
            debug_assert_eq!(plane.dim(), 3);
            type1.push(plane);
        }
    }
    type1.sort_unstable();
    type1.dedup();
    Ok((type7, type1))
}

/// The induced action of `n_group` on the orbits of `g_group`.
///
/// Requires every generator of `n_group` to normalize `g_group` (verified
/// here); then mapping an orbit representative through a generator and
/// re-canonicalizing is well defined on orbits. Returns the partition of
/// orbit indices into classes, each class sorted, classes sorted by their
/// least member.
pub fn induced_orbits_on_orbits(
    n_group: &MatrixGroup,
    orbits: &[Orbit],
    g_group: &MatrixGroup,
) -> Result<Vec<Vec<usize>>, ActionError> {
    for n in n_group.generators() {
        if !is_normalizing(n, g_group)? {
            return Err(ActionError::NonNormalizing);
        }
    }
    let index: HashMap<&Subspace, usize> =
        orbits.iter().enumerate().map(|(i, o)| (o.representative(), i)).collect();

    // union-find over orbit indices
    let mut parent: Vec<usize> = (0..orbits.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, o) in orbits.iter().enumerate() {
        for n in n_group.generators() {
            let image = o.representative().apply(n.matrix());
            let canon = canonical_in_orbit(&image, g_group)?;
            let j = *index.get(&canon).expect("image orbit must be in the partition");
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: HashMap<usize, Vec<usize>> = HashMap::new();
    for i in 0..orbits.len() {
        let root = find(&mut parent, i);
        classes.entry(root).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = classes.into_values().collect();
    for class in &mut out {
        class.sort_unstable();
    }
    out.sort_unstable_by_key(|c| c[0]);
    Ok(out)
}

/// The stabilizer in `n_group` of a `g_group`-orbit (as a set of subspaces):
/// all n that map the orbit onto itself. Requires `n_group` enumerated.
pub fn stabilizer_of_orbit(
    n_group: &MatrixGroup,
    k_orbit: &Orbit,
    g_group: &MatrixGroup,
) -> Result<MatrixGroup, ActionError> {
    for n in n_group.generators() {
        if !is_normalizing(n, g_group)? {
            return Err(ActionError::NonNormalizing);
        }
    }
    let rep = k_orbit.representative();
    let mut elements = Vec::new();
    for n in n_group.elements()? {
        let image = rep.apply(n.matrix());
        if canonical_in_orbit(&image, g_group)? == *rep {
            elements.push(n.clone());
        }
    }
    Ok(MatrixGroup::from_elements_unchecked(n_group.dim(), elements))
}
