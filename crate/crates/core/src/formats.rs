//! Text formats: PALP-style integer matrices, JSON fans, and multi-polytope
//! classification files.
//!
//! A PALP matrix starts with a header line `nrows ncols`, optionally followed
//! by a comment, then `nrows` lines of `ncols` integers. Points are the
//! columns when `nrows <= ncols` and the rows otherwise, unless the comment
//! says `rows` or `columns` explicitly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::par::Execution;
use crate::polytope::{convex_hull, normal_form, LatticePolytope, NormalFormKey};
use crate::vector::IntVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PalpMatrix {
    pub rows: Vec<Vec<i64>>,
    pub comment: String,
}

impl PalpMatrix {
    pub fn points(&self) -> Vec<IntVector> {
        let nrows = self.rows.len();
        let ncols = self.rows.first().map_or(0, |r| r.len());
        let c = self.comment.to_ascii_lowercase();
        let as_rows = if c.contains("columns") {
            false
        } else if c.contains("rows") {
            true
        } else {
            nrows > ncols
        };
        if as_rows {
            self.rows
                .iter()
                .map(|r| IntVector::new(r.clone()))
                .collect()
        } else {
            (0..ncols)
                .map(|j| IntVector::new(self.rows.iter().map(|r| r[j]).collect()))
                .collect()
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_ints(line_no: usize, text: &str) -> Result<Vec<i64>> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| parse_err(line_no, format!("not an integer: {t:?}")))
        })
        .collect()
}

/// Parses consecutive matrices; blank lines between them are skipped.
pub fn parse_palp_many(text: &str) -> Result<Vec<PalpMatrix>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable();
    let mut out = Vec::new();
    loop {
        while lines.peek().is_some_and(|(_, l)| l.trim().is_empty()) {
            lines.next();
        }
        let Some((hno, header)) = lines.next() else {
            break;
        };
        let mut toks = header.split_whitespace();
        let mut dim = |what: &str| -> Result<usize> {
            let t = toks
                .next()
                .ok_or_else(|| parse_err(hno, format!("header is missing {what}")))?;
            t.parse()
                .map_err(|_| parse_err(hno, format!("bad {what} in header: {t:?}")))
        };
        let (nrows, ncols) = (dim("row count")?, dim("column count")?);
        let comment = toks.collect::<Vec<_>>().join(" ");
        let mut rows = Vec::with_capacity(nrows);
        let mut last = hno;
        for _ in 0..nrows {
            let Some((no, l)) = lines.next() else {
                return Err(parse_err(
                    last + 1,
                    format!("expected {nrows} rows after header on line {hno}"),
                ));
            };
            last = no;
            let row = parse_ints(no, l)?;
            if row.len() != ncols {
                return Err(parse_err(
                    no,
                    format!("expected {ncols} integers, found {}", row.len()),
                ));
            }
            rows.push(row);
        }
        out.push(PalpMatrix { rows, comment });
    }
    Ok(out)
}

pub fn parse_palp(text: &str) -> Result<PalpMatrix> {
    let mut all = parse_palp_many(text)?;
    match all.len() {
        0 => Err(parse_err(1, "empty file")),
        1 => Ok(all.remove(0)),
        _ => Err(parse_err(1, "expected a single matrix")),
    }
}

pub fn parse_palp_points(text: &str) -> Result<Vec<IntVector>> {
    Ok(parse_palp(text)?.points())
}

/// Points as columns, with the convention named in the header comment.
pub fn emit_palp_points(points: &[IntVector]) -> String {
    let d = points.first().map_or(0, |p| p.rank());
    let mut s = format!("{} {} points as columns\n", d, points.len());
    for i in 0..d {
        let row: Vec<String> = points.iter().map(|p| p[i].to_string()).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

pub fn emit_palp(p: &LatticePolytope) -> String {
    emit_palp_points(p.vertices())
}

pub fn emit_palp_matrix(rows: &[Vec<i64>], comment: &str) -> String {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut s = format!("{} {}", rows.len(), ncols);
    if !comment.is_empty() {
        s.push(' ');
        s.push_str(comment);
    }
    s.push('\n');
    for r in rows {
        let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
        s.push_str(&cells.join(" "));
        s.push('\n');
    }
    s
}

#[derive(Serialize, Deserialize)]
struct FanFile {
    rays: Vec<IntVector>,
    cones: Vec<Vec<usize>>,
}

/// Reads a fan from JSON `{"rays": [[..], ..], "cones": [[..], ..]}`, or,
/// when the text is a PALP matrix, builds the complete simplicial fan whose
/// rays are the given points.
pub fn parse_fan(text: &str) -> Result<Fan> {
    if text.trim_start().starts_with('{') {
        let f: FanFile =
            serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
        Fan::new(f.rays, f.cones)
    } else {
        Fan::on_rays(&parse_palp_points(text)?)
    }
}

pub fn emit_fan(fan: &Fan) -> String {
    let f = FanFile {
        rays: fan.rays().to_vec(),
        cones: fan.max_cones().to_vec(),
    };
    serde_json::to_string(&f).expect("fan serializes") + "\n"
}

/// Ordered list of reflexive polytopes read from a classification file.
pub struct KSDatabase {
    dim: usize,
    polytopes: Vec<LatticePolytope>,
    keys: Vec<NormalFormKey>,
}

impl KSDatabase {
    pub fn parse(text: &str, exec: Execution) -> Result<Self> {
        let mats = parse_palp_many(text)?;
        let polys = exec
            .map(&mats, |m| convex_hull(&m.points()))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let dim = polys.first().map_or(0, |p| p.rank());
        for (i, p) in polys.iter().enumerate() {
            if p.rank() != dim || !p.is_full_dimensional() || !p.is_reflexive()? {
                return Err(Error::InvalidFan(format!(
                    "entry {i} is not a reflexive polytope of dimension {dim}"
                )));
            }
        }
        let keys = exec
            .map(&polys, normal_form)
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(KSDatabase {
            dim,
            polytopes: polys,
            keys,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.polytopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polytopes.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&LatticePolytope> {
        self.polytopes.get(i)
    }

    /// Position of the first entry isomorphic to `p`.
    pub fn index_of(&self, p: &LatticePolytope) -> Result<Option<usize>> {
        let k = normal_form(p)?;
        Ok(self.keys.iter().position(|x| *x == k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iv;

    fn cross() -> LatticePolytope {
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

    #[test]
    fn roundtrip() {
        let p = cross();
        let text = emit_palp(&p);
        assert!(text.starts_with("3 6 points as columns\n"));
        let q = convex_hull(&parse_palp_points(&text).unwrap()).unwrap();
        assert_eq!(p.vertices(), q.vertices());
    }

    #[test]
    fn conventions() {
        let cols = parse_palp_points("3 4\n1 0 0 -1\n0 1 0 -1\n0 0 1 -1\n").unwrap();
        assert_eq!(cols.len(), 4);
        assert_eq!(cols[3], iv![-1, -1, -1]);
        let rows = parse_palp_points("4 3\n1 0 0\n0 1 0\n0 0 1\n-1 -1 -1\n").unwrap();
        assert_eq!(rows, cols);
        let declared = parse_palp_points("2 2 rows\n1 2\n3 4\n").unwrap();
        assert_eq!(declared, vec![iv![1, 2], iv![3, 4]]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(
            parse_palp("3 4\n1 0 0 -1\n0 1 0 -1\n").unwrap_err(),
            Error::Parse {
                line: 4,
                message: "expected 3 rows after header on line 1".into()
            }
        );
        assert!(matches!(
            parse_palp("2 2\n1 x\n0 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_palp("2 2\n1 0 0\n0 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_palp("two 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn fan_files() {
        let p3 = Fan::projective_space(3);
        assert_eq!(parse_fan(&emit_fan(&p3)).unwrap(), p3);
        let from_points = parse_fan("3 4\n1 0 0 -1\n0 1 0 -1\n0 0 1 -1\n").unwrap();
        assert!(from_points.is_complete().unwrap());
        assert_eq!(from_points.rays().len(), 4);
        assert!(matches!(
            parse_fan("{\"rays\": [[1,0]], \"cones\": [[3]]}"),
            Err(Error::InvalidFan(_))
        ));
    }

    #[test]
    fn database() {
        let text = format!(
            "{}\n{}",
            emit_palp(&cross()),
            emit_palp(&cross().polar_lattice_hull().unwrap())
        );
        let db = KSDatabase::parse(&text, Execution::Sequential).unwrap();
        assert_eq!(db.len(), 2);
        let g = vec![vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let cube = cross().polar_lattice_hull().unwrap().transform(&g).unwrap();
        assert_eq!(db.index_of(&cube).unwrap(), Some(1));
        assert!(KSDatabase::parse("2 3\n0 1 0\n0 0 1\n", Execution::Sequential).is_err());
    }
}
