//! Size measurements over generated families, written as CSV.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instances::gen_hard_dual;
use crate::store::{build_structure, BuildOptions, StructureKind};
use crate::Words;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub structure: String,
    pub n: usize,
    pub m: usize,
    pub pairs: usize,
    pub k: usize,
    pub words: usize,
    pub edges_kept: usize,
    pub build_ms: u64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub structures: Vec<StructureKind>,
    pub seed: u64,
    /// Record build times; off gives byte-identical output across runs.
    pub timing: bool,
    pub build: BuildOptions,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig { structures: StructureKind::ALL.to_vec(), seed: 0, timing: true, build: BuildOptions::default() }
    }
}

/// Parses `N:r,N:r,...` (or `NxR`).
pub fn parse_sizes(text: &str) -> Result<Vec<(usize, usize)>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (a, b) = item
                .trim()
                .split_once([':', 'x'])
                .ok_or_else(|| Error::invalid(format!("size {item:?} is not of the form N:r")))?;
            let num = |t: &str| t.trim().parse::<usize>().map_err(|_| Error::invalid(format!("bad size number {t:?}")));
            Ok((num(a)?, num(b)?))
        })
        .collect()
}

pub fn bench_size_scaling(family: &str, sizes: &[(usize, usize)], cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    if family != "hard2" {
        return Err(Error::invalid(format!("unknown bench family {family:?} (expected hard2)")));
    }
    let mut rows = Vec::new();
    for &(levels, width) in sizes {
        let inst = gen_hard_dual(levels, width)?;
        let g = &inst.graph;
        for &kind in &cfg.structures {
            let opts = BuildOptions { seed: cfg.seed, ..cfg.build.clone() };
            let start = Instant::now();
            let built = build_structure(kind, g, &inst.pairs, &opts)?;
            let elapsed = start.elapsed().as_millis() as u64;
            rows.push(BenchRow {
                structure: kind.name().to_string(),
                n: g.n(),
                m: g.m(),
                pairs: inst.pairs.len(),
                k: kind.budget(opts.k),
                words: built.words(),
                edges_kept: built.edges_kept(),
                build_ms: if cfg.timing { elapsed } else { 0 },
                seed: cfg.seed,
            });
        }
    }
    rows.sort_by(|a, b| (&a.structure, a.n, a.m, a.pairs).cmp(&(&b.structure, b.n, b.m, b.pairs)));
    Ok(rows)
}

pub fn write_csv(rows: &[BenchRow]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(["structure", "n", "m", "pairs", "k", "words", "edges_kept", "build_ms", "seed"])
            .map_err(|e| Error::Format(e.to_string()))?;
    }
    for row in rows {
        w.serialize(row).map_err(|e| Error::Format(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
}
