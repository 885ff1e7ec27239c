//! Rational SDP certificates and their exact verification.
//!
//! Text format, one block per type (blocks may be split across files):
//!
//! ```text
//! type 2:1
//! size 7
//! 1/2 0 ...      # row-major, `size` rows of `size` entries
//! ```
//!
//! Rows and columns follow the basis flag order (increasing flag code). Types
//! without a block get the zero matrix.

use std::fmt::Write as _;
use std::path::Path;

use num_traits::Zero;
use rayon::prelude::*;

use crate::canon::CanonicalForm;
use crate::error::{Error, Result};
use crate::rational::{fmt_rational, parse_rational, Rational};

use super::basis::FlagBasis;
use super::psd::is_psd;

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateBlock {
    /// Compact code of the labelled type graph, e.g. `2:1`.
    pub type_code: String,
    pub matrix: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpCertificate {
    pub bound: Rational,
    pub blocks: Vec<CertificateBlock>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// Every class satisfies the inequality; `tight` lists those with zero slack.
    Proves { tight: Vec<CanonicalForm> },
    /// First class (in family order) whose value exceeds the bound.
    FailsAt { target: CanonicalForm, value: Rational },
    NotPsd { type_code: String },
}

impl SdpCertificate {
    /// The all-zero certificate for `bound`.
    pub fn zero(basis: &FlagBasis, bound: Rational) -> Self {
        let blocks = basis
            .types
            .iter()
            .enumerate()
            .map(|(t, ty)| {
                let k = basis.flag_count(t);
                CertificateBlock {
                    type_code: ty.code(),
                    matrix: vec![vec![Rational::zero(); k]; k],
                }
            })
            .collect();
        SdpCertificate { bound, blocks }
    }

    pub fn blocks_to_text(&self) -> String {
        let mut s = String::new();
        for b in &self.blocks {
            let _ = writeln!(s, "type {}", b.type_code);
            let _ = writeln!(s, "size {}", b.matrix.len());
            for row in &b.matrix {
                let cells: Vec<String> = row.iter().map(fmt_rational).collect();
                let _ = writeln!(s, "{}", cells.join(" "));
            }
        }
        s
    }

    pub fn parse_blocks(text: &str) -> Result<Vec<CertificateBlock>> {
        let mut blocks = Vec::new();
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        while let Some((l, line)) = lines.next() {
            let type_code = line
                .strip_prefix("type ")
                .ok_or_else(|| Error::parse(l, "expected `type <code>`"))?
                .trim()
                .to_string();
            let (l, line) = lines
                .next()
                .ok_or_else(|| Error::parse(l, "missing `size` line"))?;
            let size: usize = line
                .strip_prefix("size ")
                .and_then(|v| v.trim().parse().ok())
                .ok_or_else(|| Error::parse(l, "expected `size <k>`"))?;
            let mut matrix = Vec::with_capacity(size);
            for r in 0..size {
                let (l, line) = lines
                    .next()
                    .ok_or_else(|| Error::parse(l, format!("missing row {r}")))?;
                let row = line
                    .split_whitespace()
                    .map(|tok| parse_rational(tok).map_err(|_| Error::parse(l, format!("bad entry `{tok}`"))))
                    .collect::<Result<Vec<_>>>()?;
                if row.len() != size {
                    return Err(Error::parse(l, format!("row has {} entries, expected {size}", row.len())));
                }
                matrix.push(row);
            }
            blocks.push(CertificateBlock { type_code, matrix });
        }
        Ok(blocks)
    }

    /// Reads every regular file in `dir` (sorted by name) as blocks.
    pub fn read_dir(dir: &Path, bound: Rational) -> Result<Self> {
        let mut paths: Vec<_> = std::fs::read_dir(dir)?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<_>>()?;
        paths.retain(|p| p.is_file());
        paths.sort();
        let mut blocks = Vec::new();
        for p in paths {
            blocks.extend(Self::parse_blocks(&std::fs::read_to_string(p)?)?);
        }
        Ok(SdpCertificate { bound, blocks })
    }

    /// Writes one file per block, named after the type.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for b in &self.blocks {
            let single = SdpCertificate {
                bound: self.bound.clone(),
                blocks: vec![b.clone()],
            };
            let name = format!("type-{}.txt", b.type_code.replace(':', "-"));
            std::fs::write(dir.join(name), single.blocks_to_text())?;
        }
        Ok(())
    }
}

/// `c_H + sum_t <Q_t, P_t(H)>` for every class, with `Q_t` zero when absent.
pub fn certificate_values(
    basis: &FlagBasis,
    target: &[Rational],
    cert: &SdpCertificate,
) -> Result<Vec<Rational>> {
    let matrices = resolve_blocks(basis, cert)?;
    if target.len() != basis.targets.len() {
        return Err(Error::ShapeMismatch(format!(
            "target has {} entries for {} classes",
            target.len(),
            basis.targets.len()
        )));
    }
    Ok((0..basis.targets.len())
        .into_par_iter()
        .map(|h| {
            let mut v = target[h].clone();
            for (t, q) in matrices.iter().enumerate() {
                let Some(q) = q else { continue };
                for &(i, j, c) in basis.product_counts_of(t, h) {
                    if !q[i][j].is_zero() {
                        v += &q[i][j] * basis.product_density_of_count(c);
                    }
                }
            }
            v
        })
        .collect())
}

fn resolve_blocks<'a>(
    basis: &FlagBasis,
    cert: &'a SdpCertificate,
) -> Result<Vec<Option<&'a Vec<Vec<Rational>>>>> {
    let mut out = vec![None; basis.types.len()];
    for b in &cert.blocks {
        let t = basis
            .types
            .iter()
            .position(|ty| ty.code() == b.type_code)
            .ok_or_else(|| Error::ShapeMismatch(format!("unknown type `{}`", b.type_code)))?;
        if out[t].is_some() {
            return Err(Error::ShapeMismatch(format!("type `{}` given twice", b.type_code)));
        }
        let k = basis.flag_count(t);
        if b.matrix.len() != k || b.matrix.iter().any(|r| r.len() != k) {
            return Err(Error::ShapeMismatch(format!(
                "type `{}` needs a {k}x{k} matrix",
                b.type_code
            )));
        }
        out[t] = Some(&b.matrix);
    }
    Ok(out)
}

pub fn verify_certificate(basis: &FlagBasis, cert: &SdpCertificate) -> Result<Verdict> {
    let target = basis.target_vector();
    resolve_blocks(basis, cert)?;
    let psd = cert
        .blocks
        .par_iter()
        .map(|b| is_psd(&b.matrix))
        .collect::<Result<Vec<bool>>>()?;
    if let Some(pos) = psd.iter().position(|ok| !ok) {
        return Ok(Verdict::NotPsd {
            type_code: cert.blocks[pos].type_code.clone(),
        });
    }
    let values = certificate_values(basis, &target, cert)?;
    if let Some(h) = values.iter().position(|v| *v > cert.bound) {
        return Ok(Verdict::FailsAt {
            target: basis.targets[h],
            value: values[h].clone(),
        });
    }
    let tight = values
        .iter()
        .zip(&basis.targets)
        .filter(|(v, _)| **v == cert.bound)
        .map(|(_, h)| *h)
        .collect();
    Ok(Verdict::Proves { tight })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::basis::build_basis;
    use crate::format::to_compact;
    use crate::rational::{int, ratio};

    #[test]
    fn zero_certificate_proves_the_trivial_bound() {
        let basis = build_basis().unwrap();
        let max = basis.target_vector().into_iter().max().unwrap();
        assert_eq!(max, ratio(3, 5));
        let cert = SdpCertificate::zero(&basis, max.clone());
        let Verdict::Proves { tight } = verify_certificate(&basis, &cert).unwrap() else {
            panic!("zero certificate must prove max c_H");
        };
        // the tight classes are exactly the 6-vertex P4 maximisers
        let maximisers = crate::search::exhaustive_max(6, crate::Constraint::T3Free, &crate::graph::OrientedGraph::directed_path(4).unwrap()).unwrap();
        assert_eq!(tight.len(), maximisers.maximizers.len());
        for g in &maximisers.maximizers {
            assert!(tight.contains(&crate::canonical_form(g).unwrap()), "{}", to_compact(g));
        }
        // any smaller bound fails, at a maximiser
        let below = SdpCertificate::zero(&basis, &max - ratio(1, 1000));
        match verify_certificate(&basis, &below).unwrap() {
            Verdict::FailsAt { target, value } => {
                assert_eq!(value, max);
                assert!(tight.contains(&target));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn negative_diagonal_is_not_psd() {
        let basis = build_basis().unwrap();
        let mut cert = SdpCertificate::zero(&basis, int(1));
        cert.blocks[1].matrix[0][0] = ratio(-1, 7);
        assert_eq!(
            verify_certificate(&basis, &cert).unwrap(),
            Verdict::NotPsd {
                type_code: basis.types[1].code()
            }
        );
    }

    #[test]
    fn psd_certificate_values_match_dense_inner_products() {
        // Q = v v^T on each type; values computed through the dense matrices
        let basis = build_basis().unwrap();
        let target = basis.target_vector();
        let mut cert = SdpCertificate::zero(&basis, int(1));
        for (t, b) in cert.blocks.iter_mut().enumerate() {
            let v: Vec<Rational> = (0..basis.flag_count(t)).map(|i| ratio(i as i64 % 3 - 1, 2)).collect();
            for i in 0..v.len() {
                for j in 0..v.len() {
                    b.matrix[i][j] = &v[i] * &v[j];
                }
            }
        }
        let values = certificate_values(&basis, &target, &cert).unwrap();
        for h in (0..basis.targets.len()).step_by(50) {
            let mut expected = target[h].clone();
            for (t, b) in cert.blocks.iter().enumerate() {
                let p = basis.product_matrix(t, h);
                for i in 0..p.len() {
                    for j in 0..p.len() {
                        expected += &b.matrix[i][j] * &p[i][j];
                    }
                }
            }
            assert_eq!(values[h], expected);
        }
        assert!(matches!(verify_certificate(&basis, &cert).unwrap(), Verdict::Proves { .. } | Verdict::FailsAt { .. }));
    }

    #[test]
    fn text_and_directory_round_trip() {
        let basis = build_basis().unwrap();
        let mut cert = SdpCertificate::zero(&basis, ratio(24, 125));
        cert.blocks[0].matrix[1][2] = ratio(-3, 11);
        cert.blocks[0].matrix[2][1] = ratio(-3, 11);
        let text = cert.blocks_to_text();
        assert_eq!(SdpCertificate::parse_blocks(&text).unwrap(), cert.blocks);

        let dir = std::env::temp_dir().join(format!("dipath-cert-{}", std::process::id()));
        cert.write_dir(&dir).unwrap();
        let back = SdpCertificate::read_dir(&dir, ratio(24, 125)).unwrap();
        std::fs::remove_dir_all(&dir).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn shape_errors() {
        let basis = build_basis().unwrap();
        let mut cert = SdpCertificate::zero(&basis, int(1));
        cert.blocks[0].matrix.pop();
        assert!(matches!(verify_certificate(&basis, &cert), Err(Error::ShapeMismatch(_))));
        let mut cert = SdpCertificate::zero(&basis, int(1));
        cert.blocks[0].type_code = "3:000".into();
        assert!(matches!(verify_certificate(&basis, &cert), Err(Error::ShapeMismatch(_))));
        let bad = "type 2:0\nsize 2\n1 0\n0\n";
        assert!(matches!(SdpCertificate::parse_blocks(bad), Err(Error::Parse { line: 4, .. })));
    }
}
