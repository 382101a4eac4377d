//! Exact lattice polytopes in dimension at most four.
//!
//! Hulls are computed by brute force over `d`-subsets of candidate points
//! with exact cofactor normals. That is quadratic-to-quartic in the number of
//! points, which is fine for the point counts that occur here (a few hundred
//! at most), and it never has to reason about degenerate configurations.

mod normal_form;

use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::small;
use crate::vector::IntVector;

pub use normal_form::{normal_form, NormalFormKey};

pub const MAX_DIM: usize = 4;

/// The half-space `{x : <normal, x> >= -offset}`.
///
/// `normal` is primitive. `offset` is positive exactly when the origin lies
/// strictly inside the half-space; for a facet of a reflexive polytope it is 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FacetInequality {
    pub normal: IntVector,
    pub offset: i64,
}

impl FacetInequality {
    /// `<normal, x> + offset`, the lattice distance of `x` from the facet.
    pub fn eval(&self, x: &IntVector) -> i64 {
        self.normal.dot(x) + self.offset
    }
}

/// Hull data for a polytope that is not full-dimensional: inequalities in the
/// coordinates `coords` of an injective coordinate projection of its affine
/// span, plus the span itself.
#[derive(Clone, Debug)]
struct RelativeHull {
    base: IntVector,
    directions: Vec<IntVector>,
    coords: Vec<usize>,
    facets: Vec<FacetInequality>,
}

/// Convex hull of finitely many lattice points.
#[derive(Clone, Debug)]
pub struct LatticePolytope {
    rank: usize,
    dim: usize,
    vertices: Vec<IntVector>,
    facets: Vec<FacetInequality>,
    relative: Option<RelativeHull>,
    lattice_points: OnceLock<Vec<IntVector>>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.vertices == other.vertices
    }
}

impl Eq for LatticePolytope {}

impl LatticePolytope {
    /// Ambient lattice rank.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Affine dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.rank
    }

    /// Vertices in lexicographic order.
    pub fn vertices(&self) -> &[IntVector] {
        &self.vertices
    }

    /// Facet inequalities, sorted. Empty unless the polytope is full-dimensional.
    pub fn facets(&self) -> &[FacetInequality] {
        &self.facets
    }

    pub fn contains(&self, x: &IntVector) -> bool {
        match &self.relative {
            None => self.facets.iter().all(|f| f.eval(x) >= 0),
            Some(rel) => rel.contains(x, false),
        }
    }

    /// Strict containment in the relative interior.
    pub fn contains_strictly(&self, x: &IntVector) -> bool {
        match &self.relative {
            None => self.facets.iter().all(|f| f.eval(x) > 0),
            Some(rel) => rel.contains(x, true),
        }
    }

    /// True iff the origin is an interior point (requires full dimension).
    pub fn origin_interior(&self) -> bool {
        self.is_full_dimensional() && self.facets.iter().all(|f| f.offset > 0)
    }

    /// All lattice points, sorted. Computed once by a bounding-box scan.
    pub fn lattice_points(&self) -> &[IntVector] {
        self.lattice_points.get_or_init(|| {
            let (lo, hi) = bounding_box(&self.vertices);
            let mut out = Vec::new();
            scan_box(&lo, &hi, &mut |x| {
                if self.contains(x) {
                    out.push(x.clone());
                }
            });
            out
        })
    }

    pub fn interior_lattice_points(&self) -> Vec<IntVector> {
        self.lattice_points()
            .iter()
            .filter(|x| self.contains_strictly(x))
            .cloned()
            .collect()
    }

    /// Reflexive: origin interior and every facet at lattice distance one.
    pub fn is_reflexive(&self) -> Result<bool> {
        if !self.is_full_dimensional() {
            return Err(Error::ReflexivityUndefined {
                dim: self.dim,
                rank: self.rank,
            });
        }
        Ok(self.facets.iter().all(|f| f.offset == 1))
    }

    /// Lattice points of the polar `{m : <m, v> >= -1 for all v}`.
    pub fn polar_lattice_points(&self) -> Result<Vec<IntVector>> {
        if !self.origin_interior() {
            return Err(Error::PolarUnbounded);
        }
        // Polar vertices are normal/offset for each facet.
        let d = self.rank;
        let mut lo = vec![i64::MAX; d];
        let mut hi = vec![i64::MIN; d];
        for f in &self.facets {
            for i in 0..d {
                let (n, c) = (f.normal[i], f.offset);
                lo[i] = lo[i].min(n.div_euclid(c));
                hi[i] = hi[i].max(-((-n).div_euclid(c)));
            }
        }
        let mut out = Vec::new();
        scan_box(&lo, &hi, &mut |m| {
            if self.vertices.iter().all(|v| m.dot(v) >= -1) {
                out.push(m.clone());
            }
        });
        Ok(out)
    }

    /// Hull of the lattice points of the (rational) polar polytope.
    pub fn polar_lattice_hull(&self) -> Result<LatticePolytope> {
        let pts = self.polar_lattice_points()?;
        convex_hull(&pts)
    }

    /// Lattice distances `<n_f, v> + c_f` with facets as rows and vertices as
    /// columns, in the stored orders.
    pub fn pairing_matrix(&self) -> Vec<Vec<i64>> {
        self.facets
            .iter()
            .map(|f| self.vertices.iter().map(|v| f.eval(v)).collect())
            .collect()
    }

    /// For each vertex `v`, the hull of the remaining lattice points. Since a
    /// vertex is never in the hull of the other lattice points, each child's
    /// lattice points are exactly the parent's minus `v`.
    pub fn subpolytope_children(&self) -> Vec<LatticePolytope> {
        let pts = self.lattice_points();
        self.vertices
            .iter()
            .filter_map(|v| {
                let rest: Vec<IntVector> = pts.iter().filter(|p| *p != v).cloned().collect();
                convex_hull(&rest).ok()
            })
            .collect()
    }

    /// Image under the linear map `x -> g x` (rows of `g`).
    pub fn transform(&self, g: &[Vec<i64>]) -> Result<LatticePolytope> {
        let pts: Vec<IntVector> = self
            .vertices
            .iter()
            .map(|v| {
                IntVector::new(
                    g.iter()
                        .map(|row| IntVector::new(row.clone()).dot(v))
                        .collect(),
                )
            })
            .collect();
        convex_hull(&pts)
    }
}

impl RelativeHull {
    fn contains(&self, x: &IntVector, strict: bool) -> bool {
        let diff = x - &self.base;
        let mut span: Vec<&IntVector> = self.directions.iter().collect();
        span.push(&diff);
        if small::rank(&span) != self.directions.len() {
            return false;
        }
        let y = project(x, &self.coords);
        self.facets.iter().all(|f| {
            if strict {
                f.eval(&y) > 0
            } else {
                f.eval(&y) >= 0
            }
        })
    }
}

fn project(x: &IntVector, coords: &[usize]) -> IntVector {
    IntVector::new(coords.iter().map(|&i| x[i]).collect())
}

pub(crate) fn bounding_box(points: &[IntVector]) -> (Vec<i64>, Vec<i64>) {
    let d = points[0].rank();
    let mut lo = vec![i64::MAX; d];
    let mut hi = vec![i64::MIN; d];
    for p in points {
        for i in 0..d {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    (lo, hi)
}

/// Calls `f` on every integer point of the box `[lo, hi]`, lexicographically.
pub(crate) fn scan_box(lo: &[i64], hi: &[i64], f: &mut dyn FnMut(&IntVector)) {
    let d = lo.len();
    if (0..d).any(|i| lo[i] > hi[i]) {
        return;
    }
    let mut cur = lo.to_vec();
    loop {
        f(&IntVector::new(cur.clone()));
        let mut i = d;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if cur[i] < hi[i] {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1).zip(lo.iter().skip(i + 1)) {
                    *c.0 = *c.1;
                }
                break;
            }
        }
    }
}

/// Convex hull of a nonempty set of lattice points of common rank.
pub fn convex_hull(points: &[IntVector]) -> Result<LatticePolytope> {
    let first = points.first().ok_or(Error::EmptyPointSet)?;
    let rank = first.rank();
    if let Some(p) = points.iter().find(|p| p.rank() != rank) {
        return Err(Error::RankMismatch {
            expected: rank,
            found: p.rank(),
        });
    }
    if rank > MAX_DIM {
        return Err(Error::UnsupportedDimension(rank));
    }
    let pts: Vec<IntVector> = points
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let base = pts[0].clone();

    // Greedy basis of the affine span.
    let mut directions: Vec<IntVector> = Vec::new();
    for p in &pts[1..] {
        let diff = p - &base;
        let mut trial: Vec<&IntVector> = directions.iter().collect();
        trial.push(&diff);
        if small::rank(&trial) > directions.len() {
            directions.push(diff);
            if directions.len() == rank {
                break;
            }
        }
    }
    let dim = directions.len();

    if dim == rank {
        let facets = full_dim_facets(&pts, rank);
        let vertices = vertices_from_facets(&pts, &facets, rank);
        return Ok(LatticePolytope {
            rank,
            dim,
            vertices,
            facets,
            relative: None,
            lattice_points: OnceLock::new(),
        });
    }

    if dim == 0 {
        return Ok(LatticePolytope {
            rank,
            dim,
            vertices: pts,
            facets: Vec::new(),
            relative: Some(RelativeHull {
                base,
                directions,
                coords: Vec::new(),
                facets: Vec::new(),
            }),
            lattice_points: OnceLock::new(),
        });
    }

    // Coordinate projection that is injective on the affine span.
    let coords = injective_coordinates(&directions, rank);
    let projected: Vec<IntVector> = pts.iter().map(|p| project(p, &coords)).collect();
    let facets = full_dim_facets(&projected, dim);
    let vmask = vertices_from_facets(&projected, &facets, dim);
    let vset: HashSet<&IntVector> = vmask.iter().collect();
    let vertices: Vec<IntVector> = pts
        .iter()
        .zip(&projected)
        .filter(|(_, q)| vset.contains(q))
        .map(|(p, _)| p.clone())
        .collect();
    Ok(LatticePolytope {
        rank,
        dim,
        vertices,
        facets: Vec::new(),
        relative: Some(RelativeHull {
            base,
            directions,
            coords,
            facets,
        }),
        lattice_points: OnceLock::new(),
    })
}

fn injective_coordinates(directions: &[IntVector], rank: usize) -> Vec<usize> {
    let k = directions.len();
    let mut chosen = Vec::with_capacity(k);
    // Smallest lexicographic k-subset of coordinates with a nonzero minor.
    fn search(
        directions: &[IntVector],
        rank: usize,
        start: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        let k = directions.len();
        if chosen.len() == k {
            let rows: Vec<Vec<i64>> = directions
                .iter()
                .map(|d| chosen.iter().map(|&i| d[i]).collect())
                .collect();
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            return small::det(&refs) != 0;
        }
        for i in start..rank {
            chosen.push(i);
            if search(directions, rank, i + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let found = search(directions, rank, 0, &mut chosen);
    debug_assert!(found && chosen.len() == k);
    chosen
}

/// Drops points that are midpoints of two other points; they can never be
/// vertices, and the hull of the rest is unchanged.
fn prune_midpoints(pts: &[IntVector]) -> Vec<IntVector> {
    if pts.len() <= 8 {
        return pts.to_vec();
    }
    let set: HashSet<&IntVector> = pts.iter().collect();
    let mut inner: HashSet<IntVector> = HashSet::new();
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let s = a + b;
            if s.coords().iter().all(|x| x % 2 == 0) {
                let mid = IntVector::new(s.coords().iter().map(|x| x / 2).collect());
                if set.contains(&mid) {
                    inner.insert(mid);
                }
            }
        }
    }
    pts.iter()
        .filter(|p| !inner.contains(*p))
        .cloned()
        .collect()
}

/// Facets of the hull of a full-dimensional point set in `Z^d`.
fn full_dim_facets(pts: &[IntVector], d: usize) -> Vec<FacetInequality> {
    let cand = prune_midpoints(pts);
    let mut found: BTreeSet<FacetInequality> = BTreeSet::new();
    if d == 1 {
        let lo = cand.iter().map(|p| p[0]).min().unwrap();
        let hi = cand.iter().map(|p| p[0]).max().unwrap();
        found.insert(FacetInequality {
            normal: IntVector::new(vec![1]),
            offset: -lo,
        });
        found.insert(FacetInequality {
            normal: IntVector::new(vec![-1]),
            offset: hi,
        });
        return found.into_iter().collect();
    }
    let n = cand.len();
    let mut idx: Vec<usize> = (0..d).collect();
    let mut diffs: Vec<IntVector> = Vec::with_capacity(d - 1);
    loop {
        diffs.clear();
        let p0 = &cand[idx[0]];
        diffs.extend(idx[1..].iter().map(|&i| &cand[i] - p0));
        let normal = small::cofactor_normal(&diffs, d);
        if !normal.is_zero() {
            let normal = normal.primitive().expect("nonzero normal");
            let b = normal.dot(p0);
            let (mut above, mut below) = (false, false);
            for p in &cand {
                let v = normal.dot(p);
                above |= v > b;
                below |= v < b;
                if above && below {
                    break;
                }
            }
            if !below {
                found.insert(FacetInequality { normal, offset: -b });
            } else if !above {
                found.insert(FacetInequality {
                    normal: -&normal,
                    offset: b,
                });
            }
        }
        // Next combination.
        let mut i = d;
        loop {
            if i == 0 {
                return found.into_iter().collect();
            }
            i -= 1;
            if idx[i] < n - d + i {
                idx[i] += 1;
                for j in i + 1..d {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// A point is a vertex iff the normals of the facets through it span.
fn vertices_from_facets(pts: &[IntVector], facets: &[FacetInequality], d: usize) -> Vec<IntVector> {
    pts.iter()
        .filter(|p| {
            let tight: Vec<&IntVector> = facets
                .iter()
                .filter(|f| f.eval(p) == 0)
                .map(|f| &f.normal)
                .collect();
            tight.len() >= d && small::rank(&tight) == d
        })
        .cloned()
        .collect()
}

/// `polar_lattice_hull(convex_hull(points))`.
pub fn polar_lattice_hull_of(points: &[IntVector]) -> Result<LatticePolytope> {
    convex_hull(points)?.polar_lattice_hull()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iv;

    pub(crate) fn cross_polytope3() -> LatticePolytope {
        convex_hull(&[
            iv![1, 0, 0],
            iv![-1, 0, 0],
            iv![0, 1, 0],
            iv![0, -1, 0],
            iv![0, 0, 1],
            iv![0, 0, -1],
        ])
        .unwrap()
    }

    fn p3_simplex() -> LatticePolytope {
        convex_hull(&[iv![1, 0, 0], iv![0, 1, 0], iv![0, 0, 1], iv![-1, -1, -1]]).unwrap()
    }

    #[test]
    fn hull_examples() {
        let sq = convex_hull(&[iv![0, 0], iv![1, 0], iv![0, 1], iv![1, 1], iv![0, 0]]).unwrap();
        assert_eq!(sq.vertices().len(), 4);
        assert_eq!(sq.facets().len(), 4);
        assert_eq!(sq.lattice_points().len(), 4);
        assert!(sq.interior_lattice_points().is_empty());

        let xi = [
            iv![-1, -1, -1],
            iv![1, 0, 0],
            iv![0, 1, 0],
            iv![0, 0, 1],
            iv![0, 0, 0],
        ];
        let d0 = convex_hull(&xi).unwrap();
        assert_eq!(d0.vertices().len(), 4);
        assert_eq!(d0.interior_lattice_points(), vec![iv![0, 0, 0]]);

        let pt = convex_hull(&[iv![3, 4, 5]]).unwrap();
        assert_eq!(pt.dim(), 0);
        assert!(pt.facets().is_empty());
        assert_eq!(pt.lattice_points(), &[iv![3, 4, 5]]);
    }

    #[test]
    fn hull_errors() {
        assert_eq!(convex_hull(&[]).unwrap_err(), Error::EmptyPointSet);
        assert!(matches!(
            convex_hull(&[iv![1, 2], iv![1, 2, 3]]),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn lower_dimensional_lattice_points() {
        let seg = convex_hull(&[iv![0, 0, 0], iv![2, 4, 6]]).unwrap();
        assert_eq!(seg.dim(), 1);
        assert_eq!(seg.vertices().len(), 2);
        assert_eq!(
            seg.lattice_points(),
            &[iv![0, 0, 0], iv![1, 2, 3], iv![2, 4, 6]]
        );
        let tri = convex_hull(&[iv![0, 0, 1], iv![2, 0, 1], iv![0, 2, 1], iv![1, 1, 1]]).unwrap();
        assert_eq!(tri.dim(), 2);
        assert_eq!(tri.vertices().len(), 3);
        assert_eq!(tri.lattice_points().len(), 6);
        assert_eq!(tri.interior_lattice_points().len(), 0);
    }

    #[test]
    fn lattice_point_counts() {
        assert_eq!(cross_polytope3().lattice_points().len(), 7);
        let quartic = p3_simplex().polar_lattice_hull().unwrap();
        assert_eq!(quartic.lattice_points().len(), 35);
        assert_eq!(quartic.vertices().len(), 4);
        assert_eq!(quartic.interior_lattice_points(), vec![iv![0, 0, 0]]);
        let sq = convex_hull(&[iv![-1, -1], iv![1, -1], iv![-1, 1], iv![1, 1]]).unwrap();
        assert_eq!(sq.interior_lattice_points(), vec![iv![0, 0]]);
    }

    #[test]
    fn reflexivity() {
        assert!(cross_polytope3().is_reflexive().unwrap());
        let sq = convex_hull(&[iv![0, 0], iv![1, 0], iv![0, 1], iv![1, 1]]).unwrap();
        assert!(!sq.is_reflexive().unwrap());
        let seg = convex_hull(&[iv![0, 0], iv![1, 1]]).unwrap();
        assert!(matches!(
            seg.is_reflexive(),
            Err(Error::ReflexivityUndefined { .. })
        ));
    }

    #[test]
    fn polar_examples() {
        let cube = cross_polytope3().polar_lattice_hull().unwrap();
        let mut expect = Vec::new();
        for a in [-1, 1] {
            for b in [-1, 1] {
                for c in [-1, 1] {
                    expect.push(iv![a, b, c]);
                }
            }
        }
        expect.sort();
        assert_eq!(cube.vertices(), expect.as_slice());
        let back = cube.polar_lattice_hull().unwrap();
        assert_eq!(back, cross_polytope3());

        let sq = convex_hull(&[iv![0, 0], iv![1, 0], iv![0, 1], iv![1, 1]]).unwrap();
        assert_eq!(sq.polar_lattice_hull().unwrap_err(), Error::PolarUnbounded);
    }

    #[test]
    fn children() {
        let seg = convex_hull(&[iv![-1], iv![1]]).unwrap();
        let ch = seg.subpolytope_children();
        assert_eq!(ch.len(), 2);
        assert!(ch.iter().all(|c| c.lattice_points().len() == 2));

        let tri = convex_hull(&[iv![0, 0], iv![1, 0], iv![0, 1]]).unwrap();
        let ch = tri.subpolytope_children();
        assert_eq!(ch.len(), 3);
        assert!(ch.iter().all(|c| c.dim() == 1));

        let quartic = p3_simplex().polar_lattice_hull().unwrap();
        let ch = quartic.subpolytope_children();
        assert_eq!(ch.len(), 4);
        for c in &ch {
            assert_eq!(c.lattice_points().len(), 34);
        }
    }

    #[test]
    fn four_dimensional_simplex_polar() {
        let xi = [
            iv![1, 0, 0, 0],
            iv![0, 1, 0, 0],
            iv![0, 0, 1, 0],
            iv![0, 0, 0, 1],
            iv![-1, -1, -1, -1],
        ];
        let p = polar_lattice_hull_of(&xi).unwrap();
        assert_eq!(p.vertices().len(), 5);
        assert_eq!(p.lattice_points().len(), 126);
        assert!(p.is_reflexive().unwrap());
    }
}
