use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::isoperimetry::{
    quantitative_check, random_fourier_corpus, symmetric_rearrangement_check, QuantitativeReport,
    RearrangementReport,
};
use crate::lemmas::SuiteRow;
use crate::nonlocal::QuadratureSpec;
use crate::parallel::map_slice;
use crate::potentials::Potential;
use crate::shapes::Shape;

/// Random corpus for the isoperimetric checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusConfig {
    pub s: f64,
    pub count: usize,
    /// Angular samples per shape.
    pub samples: usize,
    pub max_norm: f64,
    pub seed: u64,
    /// Shapes compared with their symmetric rearrangement.
    pub rearrangement_count: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self { s: 0.5, count: 50, samples: 256, max_norm: 0.3, seed: 1, rearrangement_count: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsoSuite {
    pub quantitative: QuantitativeReport,
    pub rearrangement: Vec<RearrangementReport>,
    pub pass: bool,
}

impl IsoSuite {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,index,asymmetry,deficit,error,pass\n");
        for (i, r) in self.quantitative.reports.iter().enumerate() {
            let _ = writeln!(
                out,
                "deficit,{i},{:.12e},{:.12e},{:.12e},{}",
                r.asymmetry,
                r.deficit,
                r.deficit_error,
                r.deficit >= -r.deficit_error
            );
        }
        let q = &self.quantitative;
        let _ = writeln!(out, "c_fit,,,{:.12e},{:.12e},{}", q.c_fit, q.c_fit_error, q.pass);
        for (i, r) in self.rearrangement.iter().enumerate() {
            let _ = writeln!(
                out,
                "rearrangement,{i},,{:.12e},{:.12e},{}",
                r.perimeter.value - r.perimeter_rearranged,
                r.potential - r.potential_rearranged,
                r.pass
            );
        }
        out
    }
}

/// Quantitative isoperimetric inequality on a seeded corpus, plus the
/// rearrangement inequalities for `g = |x|²` on translated corpus shapes.
pub fn isoperimetry_suite(cfg: &CorpusConfig) -> Result<IsoSuite> {
    let q = QuadratureSpec::with_s(cfg.s);
    let corpus: Vec<Shape> = random_fourier_corpus(cfg.count, cfg.samples, cfg.max_norm, cfg.seed)?
        .into_iter()
        .map(Shape::Radial)
        .collect();
    let quantitative = quantitative_check(&corpus, &q)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let shifted: Vec<Shape> = random_fourier_corpus(cfg.rearrangement_count, cfg.samples, cfg.max_norm, cfg.seed.wrapping_add(2))?
        .into_iter()
        .map(|r| {
            let shift = [rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)];
            Shape::Radial(r.translated(shift))
        })
        .collect();
    let g = Potential::power(2.0);
    let rearrangement: Vec<RearrangementReport> = map_slice(&shifted, |e| symmetric_rearrangement_check(e, &g, &q))
        .into_iter()
        .collect::<Result<_>>()?;
    let pass = quantitative.pass && rearrangement.iter().all(|r| r.pass);
    Ok(IsoSuite { quantitative, rearrangement, pass })
}

pub fn lemma_table_csv(rows: &[SuiteRow]) -> String {
    let mut out = String::from("check,probe,lhs,rhs,error,status,asserted,pass\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},\"{}\",{:.12e},{:.12e},{:.12e},{},{},{}",
            r.check, r.probe, r.lhs, r.rhs, r.error, r.status, r.asserted, r.pass
        );
    }
    out
}
