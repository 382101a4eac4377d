//! Canonical form of a lattice polytope up to `GL(d, Z)` and vertex
//! relabelling.
//!
//! The facet/vertex pairing matrix is brought to its lexicographic maximum
//! over row and column permutations; every column order that attains the
//! maximum is a candidate vertex labelling. The vertex matrix in each
//! candidate order is row-reduced to Hermite normal form, and the smallest
//! result is the canonical matrix. The candidate set only depends on the
//! isomorphism class and the Hermite form is a complete invariant of the
//! `GL(d, Z)`-orbit of an ordered vertex matrix, so equal keys mean
//! isomorphic polytopes and vice versa.

use std::collections::HashSet;
use std::fmt;

use sha2::{Digest, Sha256};

use super::LatticePolytope;
use crate::error::{Error, Result};
use crate::linalg::{hnf, IntMatrix};

/// Canonical vertex matrix (`dim` rows, one column per vertex) and its
/// SHA-256 digest.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalFormKey {
    canonical_matrix: Vec<Vec<i64>>,
    digest: [u8; 32],
}

impl NormalFormKey {
    pub fn from_matrix(canonical_matrix: Vec<Vec<i64>>) -> Self {
        let digest = Sha256::digest(encode(&canonical_matrix).as_bytes()).into();
        NormalFormKey {
            canonical_matrix,
            digest,
        }
    }

    pub fn canonical_matrix(&self) -> &[Vec<i64>] {
        &self.canonical_matrix
    }

    pub fn digest(&self) -> &[u8; 32] {
        &self.digest
    }

    pub fn digest_hex(&self) -> String {
        hex::encode(self.digest)
    }

    /// Compact text form `rows x cols : entries`, used by the cache file.
    pub fn encode(&self) -> String {
        encode(&self.canonical_matrix)
    }

    pub fn decode(s: &str) -> Option<Self> {
        let (shape, body) = s.split_once(':')?;
        let (r, c) = shape.split_once('x')?;
        let (r, c): (usize, usize) = (r.trim().parse().ok()?, c.trim().parse().ok()?);
        let vals: Vec<i64> = if body.trim().is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(|t| t.trim().parse().ok())
                .collect::<Option<_>>()?
        };
        if vals.len() != r * c {
            return None;
        }
        let m = vals
            .chunks(c.max(1))
            .take(r)
            .map(|ch| ch.to_vec())
            .collect();
        Some(Self::from_matrix(m))
    }
}

fn encode(m: &[Vec<i64>]) -> String {
    let cols = m.first().map_or(0, |r| r.len());
    let body: Vec<String> = m.iter().flatten().map(|x| x.to_string()).collect();
    format!("{}x{}:{}", m.len(), cols, body.join(","))
}

impl fmt::Debug for NormalFormKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NormalFormKey({})", self.encode())
    }
}

impl fmt::Display for NormalFormKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.canonical_matrix {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct SearchState {
    used: u64,
    blocks: Vec<Vec<usize>>,
}

/// Column orders of the pairing matrix that attain its lexicographically
/// maximal row-and-column permuted form.
fn maximizing_column_orders(pm: &[Vec<i64>], ncols: usize) -> Vec<Vec<usize>> {
    let nrows = pm.len();
    let mut states = vec![SearchState {
        used: 0,
        blocks: vec![(0..ncols).collect()],
    }];
    for _ in 0..nrows {
        let mut best: Option<Vec<i64>> = None;
        let mut next: Vec<SearchState> = Vec::new();
        let mut seen: HashSet<SearchState> = HashSet::new();
        for s in &states {
            for (f, row_vals) in pm.iter().enumerate() {
                if s.used >> f & 1 == 1 {
                    continue;
                }
                let mut row = Vec::with_capacity(ncols);
                for b in &s.blocks {
                    let start = row.len();
                    row.extend(b.iter().map(|&j| row_vals[j]));
                    row[start..].sort_unstable_by(|a, b| b.cmp(a));
                }
                match best.as_ref().map(|b| row.cmp(b)) {
                    Some(std::cmp::Ordering::Less) => continue,
                    Some(std::cmp::Ordering::Greater) | None => {
                        best = Some(row);
                        next.clear();
                        seen.clear();
                    }
                    Some(std::cmp::Ordering::Equal) => {}
                }
                let mut blocks = Vec::with_capacity(s.blocks.len());
                for b in &s.blocks {
                    let mut sorted = b.clone();
                    sorted.sort_by(|&x, &y| row_vals[y].cmp(&row_vals[x]).then(x.cmp(&y)));
                    let mut cur: Vec<usize> = Vec::new();
                    for j in sorted {
                        if let Some(&last) = cur.last() {
                            if row_vals[last] != row_vals[j] {
                                blocks.push(std::mem::take(&mut cur));
                            }
                        }
                        cur.push(j);
                    }
                    if !cur.is_empty() {
                        blocks.push(cur);
                    }
                }
                let st = SearchState {
                    used: s.used | 1 << f,
                    blocks,
                };
                if seen.insert(st.clone()) {
                    next.push(st);
                }
            }
        }
        states = next;
    }
    states
        .into_iter()
        .map(|s| {
            debug_assert!(s.blocks.iter().all(|b| b.len() == 1));
            s.blocks.into_iter().flatten().collect()
        })
        .collect()
}

/// Canonical form under origin-fixing lattice isomorphisms.
pub fn normal_form(p: &LatticePolytope) -> Result<NormalFormKey> {
    if !p.is_full_dimensional() {
        return Err(Error::NotFullDimensional);
    }
    if !p.origin_interior() {
        return Err(Error::PolarUnbounded);
    }
    if p.facets().len() > 64 {
        return Err(Error::UnsupportedDimension(p.rank()));
    }
    let pm = p.pairing_matrix();
    let verts = p.vertices();
    let d = p.rank();
    let mut best: Option<Vec<Vec<i64>>> = None;
    for order in maximizing_column_orders(&pm, verts.len()) {
        let cols: Vec<_> = order.iter().map(|&j| verts[j].clone()).collect();
        let (h, _) = hnf(&IntMatrix::from_columns(&cols));
        let h = h.to_i64_rows().ok_or(Error::Overflow("normal form"))?;
        debug_assert_eq!(h.len(), d);
        if best.as_ref().is_none_or(|b| h < *b) {
            best = Some(h);
        }
    }
    Ok(NormalFormKey::from_matrix(
        best.expect("at least one maximizing order"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iv;
    use crate::polytope::convex_hull;

    #[test]
    fn invariant_under_unimodular_map() {
        let p = convex_hull(&[
            iv![1, 0, 0],
            iv![0, 1, 0],
            iv![0, 0, 1],
            iv![-1, -1, -1],
            iv![1, 1, 0],
        ])
        .unwrap();
        let g = vec![vec![1, 2, 0], vec![0, 1, 3], vec![1, 2, 1]];
        let q = p.transform(&g).unwrap();
        assert_ne!(p.vertices(), q.vertices());
        assert_eq!(normal_form(&p).unwrap(), normal_form(&q).unwrap());
    }

    #[test]
    fn cross_polytope_differs_from_cube() {
        let cross = convex_hull(&[
            iv![1, 0, 0],
            iv![-1, 0, 0],
            iv![0, 1, 0],
            iv![0, -1, 0],
            iv![0, 0, 1],
            iv![0, 0, -1],
        ])
        .unwrap();
        let cube = cross.polar_lattice_hull().unwrap();
        assert_ne!(normal_form(&cross).unwrap(), normal_form(&cube).unwrap());
    }

    #[test]
    fn encode_roundtrip() {
        let k = NormalFormKey::from_matrix(vec![vec![1, 0, -1], vec![0, 1, -1]]);
        assert_eq!(k.encode(), "2x3:1,0,-1,0,1,-1");
        assert_eq!(NormalFormKey::decode(&k.encode()), Some(k));
    }

    #[test]
    fn requires_origin_interior() {
        let sq = convex_hull(&[iv![0, 0], iv![1, 0], iv![0, 1], iv![1, 1]]).unwrap();
        assert!(normal_form(&sq).is_err());
        let seg = convex_hull(&[iv![-1, 0], iv![1, 0]]).unwrap();
        assert_eq!(normal_form(&seg).unwrap_err(), Error::NotFullDimensional);
    }
}
