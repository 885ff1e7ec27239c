//! Sparse SDPA export of the density program.
//!
//! Variables `x_H` (one per 6-vertex class). Blocks: one PSD block per type with
//! `F_H = P_t(H)`, then a diagonal block holding `x_H >= 0`, `sum x >= 1` and
//! `-sum x >= -1`. The objective is `minimize -sum c_H x_H`. The SDPA dual of
//! this file is `minimize lambda` over `Q_t >= 0` with
//! `c_H + sum_t <Q_t, P_t(H)> <= lambda`: the solver's dual PSD blocks are the
//! `Q_t` and its optimum is `-lambda`.
//!
//! Coefficients are rendered as the shortest decimal that round-trips the
//! nearest `f64` of the exact rational.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::rational::{to_f64, Rational};

use super::basis::{FlagBasis, PRODUCT_DENOMINATOR};

#[derive(Debug, Clone, PartialEq)]
pub struct SdpaProblem {
    pub m: usize,
    /// Positive for dense symmetric blocks, negative for diagonal blocks.
    pub block_struct: Vec<i64>,
    pub objective: Vec<f64>,
    /// `(matrix, block, i, j, value)`, 1-based, `i <= j`; matrix 0 is `F_0`.
    pub entries: Vec<(usize, usize, usize, usize, f64)>,
}

pub fn build_sdpa(basis: &FlagBasis, target: &[Rational]) -> Result<SdpaProblem> {
    let m = basis.targets.len();
    if target.len() != m {
        return Err(Error::ShapeMismatch(format!(
            "target has {} entries for {m} classes",
            target.len()
        )));
    }
    let types = basis.types.len();
    let mut block_struct: Vec<i64> = (0..types).map(|t| basis.flag_count(t) as i64).collect();
    block_struct.push(-((m + 2) as i64));
    let diag = types + 1;
    let mut entries = vec![(0, diag, m + 1, m + 1, 1.0), (0, diag, m + 2, m + 2, -1.0)];
    for h in 0..m {
        let var = h + 1;
        for t in 0..types {
            for &(i, j, c) in basis.product_counts_of(t, h) {
                if i <= j {
                    let value = c as f64 / PRODUCT_DENOMINATOR as f64;
                    entries.push((var, t + 1, i + 1, j + 1, value));
                }
            }
        }
        entries.push((var, diag, var, var, 1.0));
        entries.push((var, diag, m + 1, m + 1, 1.0));
        entries.push((var, diag, m + 2, m + 2, -1.0));
    }
    Ok(SdpaProblem {
        m,
        block_struct,
        // `0.0 - x` keeps zero coefficients unsigned
        objective: target.iter().map(|c| 0.0 - to_f64(c)).collect(),
        entries,
    })
}

impl SdpaProblem {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "\"P4 density over 6-vertex T3-free classes\"");
        let _ = writeln!(s, "{}", self.m);
        let _ = writeln!(s, "{}", self.block_struct.len());
        let blocks: Vec<String> = self.block_struct.iter().map(|b| b.to_string()).collect();
        let _ = writeln!(s, "{}", blocks.join(" "));
        let obj: Vec<String> = self.objective.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "{}", obj.join(" "));
        for &(mat, blk, i, j, v) in &self.entries {
            let _ = writeln!(s, "{mat} {blk} {i} {j} {v}");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('"') && !l.starts_with('*'));
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| Error::parse(0, format!("missing {what}")))
        };
        let num = |line: usize, tok: &str| -> Result<i64> {
            tok.trim_matches(|c| "{}(),".contains(c))
                .parse()
                .map_err(|_| Error::parse(line, format!("bad integer `{tok}`")))
        };
        let (l, t) = next("mDIM")?;
        let m = num(l, t)? as usize;
        let (l, t) = next("nBLOCK")?;
        let nblock = num(l, t)? as usize;
        let (l, t) = next("block structure")?;
        let block_struct = split(t)
            .map(|tok| num(l, tok))
            .collect::<Result<Vec<_>>>()?;
        if block_struct.len() != nblock {
            return Err(Error::parse(l, "block structure length differs from nBLOCK"));
        }
        let (l, t) = next("objective")?;
        let objective = split(t)
            .map(|tok| parse_float(l, tok))
            .collect::<Result<Vec<_>>>()?;
        if objective.len() != m {
            return Err(Error::parse(l, "objective length differs from mDIM"));
        }
        let mut entries = Vec::new();
        for (l, t) in lines {
            let toks: Vec<&str> = split(t).collect();
            if toks.len() != 5 {
                return Err(Error::parse(l, "expected `matrix block i j value`"));
            }
            let idx = |k: usize| -> Result<usize> {
                usize::try_from(num(l, toks[k])?).map_err(|_| Error::parse(l, "negative index"))
            };
            let (mat, blk, i, j) = (idx(0)?, idx(1)?, idx(2)?, idx(3)?);
            if mat > m || blk == 0 || blk > nblock {
                return Err(Error::parse(l, "matrix or block index out of range"));
            }
            let size = block_struct[blk - 1].unsigned_abs() as usize;
            if i == 0 || j == 0 || i > size || j > size {
                return Err(Error::parse(l, "entry outside its block"));
            }
            entries.push((mat, blk, i, j, parse_float(l, toks[4])?));
        }
        Ok(SdpaProblem {
            m,
            block_struct,
            objective,
            entries,
        })
    }
}

fn split(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c.is_whitespace() || c == ',')
        .map(|t| t.trim_matches(|c| "{}()".contains(c)))
        .filter(|t| !t.is_empty())
}

fn parse_float(line: usize, tok: &str) -> Result<f64> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("bad number `{tok}`")))
}

pub fn export_sdp(basis: &FlagBasis, target: &[Rational], path: &std::path::Path) -> Result<()> {
    std::fs::write(path, build_sdpa(basis, target)?.to_text())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::basis::build_basis;
    use std::collections::HashMap;

    #[test]
    fn export_round_trip_and_shape() {
        let basis = build_basis().unwrap();
        let target = basis.target_vector();
        let sdp = build_sdpa(&basis, &target).unwrap();
        let family = crate::enumerate_family(6, crate::Constraint::T3Free).unwrap();
        assert_eq!(sdp.m, family.len());
        assert_eq!(sdp.block_struct.len(), basis.types.len() + 1);
        for t in 0..basis.types.len() {
            assert_eq!(sdp.block_struct[t], basis.flag_count(t) as i64);
        }
        let parsed = SdpaProblem::parse(&sdp.to_text()).unwrap();
        assert_eq!(parsed, sdp);

        // coefficients reproduce the exact tensor to rendering precision
        let mut coeff: HashMap<(usize, usize, usize, usize), f64> = HashMap::new();
        for &(mat, blk, i, j, v) in &parsed.entries {
            *coeff.entry((mat, blk, i, j)).or_default() += v;
        }
        for h in 0..sdp.m {
            for t in 0..basis.types.len() {
                let m = basis.product_matrix(t, h);
                for i in 0..m.len() {
                    for j in i..m.len() {
                        let got = coeff.get(&(h + 1, t + 1, i + 1, j + 1)).copied().unwrap_or(0.0);
                        assert!((got - to_f64(&m[i][j])).abs() < 1e-15);
                    }
                }
            }
            assert!((parsed.objective[h] + to_f64(&target[h])).abs() < 1e-15);
        }
    }

    #[test]
    fn parse_rejects_malformed() {
        let bad = "1\n1\n2\n0.5\n1 1 3 1 1.0\n";
        assert!(matches!(SdpaProblem::parse(bad), Err(Error::Parse { line: 5, .. })));
        let bad = "1\n1\n2\n0.5 0.5\n";
        assert!(SdpaProblem::parse(bad).is_err());
        let ok = "\"t\"\n1\n1\n{2}\n{0.5}\n1 1 1 2 0.25\n";
        assert_eq!(SdpaProblem::parse(ok).unwrap().entries, vec![(1, 1, 1, 2, 0.25)]);
    }
}
