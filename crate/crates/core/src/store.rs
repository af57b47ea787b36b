//! Building structures by name, saving and loading them, and answering
//! query lines.
//!
//! A structure file starts with `FTREACH v1 <structure-name>`. Preservers
//! follow with their kept edges in the graph text format; oracles follow
//! with one line of JSON.

use std::fmt;
use std::str::FromStr;

use crate::dual_oracle::{build_dual_oracle, DualOracle, DualOracleConfig};
use crate::dual_preserver::{build_dual_preserver, DualPreserverConfig};
use crate::error::{Error, Result};
use crate::graph::{reaches, DiGraph, FailureSet, Pair, Subgraph};
use crate::io::{check_pairs, parse_graph, write_graph};
use crate::kftrs::{build_k_ftrs, default_ell, KFtrsParams, DEFAULT_SAMPLE_C};
use crate::provider::provider_by_name;
use crate::segments::{pair_shape, PairShape};
use crate::single_oracle::{build_edge_ftro, build_vertex_ftro, EdgeFailOracle, VertexFailOracle};
use crate::verify::Failure;
use crate::Words;

pub const MAGIC: &str = "FTREACH v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StructureKind {
    PairSkel,
    DualOracle,
    Ftro1Vertex,
    Ftro1Edge,
    DualPreserver,
    KFtrs,
}

impl StructureKind {
    pub const ALL: [StructureKind; 6] = [
        StructureKind::PairSkel,
        StructureKind::DualOracle,
        StructureKind::Ftro1Vertex,
        StructureKind::Ftro1Edge,
        StructureKind::DualPreserver,
        StructureKind::KFtrs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StructureKind::PairSkel => "pair-skel",
            StructureKind::DualOracle => "dual-oracle",
            StructureKind::Ftro1Vertex => "ftro1-vertex",
            StructureKind::Ftro1Edge => "ftro1-edge",
            StructureKind::DualPreserver => "dual-preserver",
            StructureKind::KFtrs => "k-ftrs",
        }
    }

    pub fn is_preserver(self) -> bool {
        matches!(self, StructureKind::PairSkel | StructureKind::DualPreserver | StructureKind::KFtrs)
    }

    /// Failure budget the structure is built for.
    pub fn budget(self, k: usize) -> usize {
        match self {
            StructureKind::Ftro1Vertex | StructureKind::Ftro1Edge => 1,
            StructureKind::KFtrs => k,
            _ => 2,
        }
    }
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StructureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StructureKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<_> = StructureKind::ALL.iter().map(|k| k.name()).collect();
            Error::invalid(format!("unknown structure {s:?} (expected one of {})", names.join(", ")))
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BuildOptions {
    pub k: usize,
    pub ell: Option<usize>,
    pub sample_c: f64,
    pub seed: u64,
    pub provider: String,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { k: 2, ell: None, sample_c: DEFAULT_SAMPLE_C, seed: 0, provider: "baseline".into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Structure {
    Preserver { kind: StructureKind, kept: Subgraph },
    DualOracle(DualOracle),
    VertexOracle(VertexFailOracle),
    EdgeOracle(EdgeFailOracle),
}

/// Union of the single-pair skeletons.
pub fn pair_skeletons(g: &DiGraph, pairs: &[Pair]) -> Result<Subgraph> {
    let mut ids = Vec::new();
    for &p in pairs {
        if let PairShape::Strands(sk) = pair_shape(g, p)? {
            ids.extend_from_slice(sk.kept.parent_ids());
        }
    }
    Ok(Subgraph::from_edge_ids(g, ids))
}

pub fn build_structure(kind: StructureKind, g: &DiGraph, pairs: &[Pair], opts: &BuildOptions) -> Result<Structure> {
    check_pairs(g, pairs)?;
    let mut provider = provider_by_name(&opts.provider)?;
    Ok(match kind {
        StructureKind::PairSkel => Structure::Preserver { kind, kept: pair_skeletons(g, pairs)? },
        StructureKind::DualOracle => {
            Structure::DualOracle(build_dual_oracle(g, pairs, provider.as_mut(), &DualOracleConfig::default())?)
        }
        StructureKind::Ftro1Vertex => Structure::VertexOracle(build_vertex_ftro(g, pairs)?),
        StructureKind::Ftro1Edge => Structure::EdgeOracle(build_edge_ftro(g, pairs)?),
        StructureKind::DualPreserver => Structure::Preserver {
            kind,
            kept: build_dual_preserver(g, pairs, provider.as_mut(), &DualPreserverConfig::default())?,
        },
        StructureKind::KFtrs => {
            let params = KFtrsParams {
                k: opts.k,
                ell: opts.ell.unwrap_or_else(|| default_ell(g.n(), pairs.len(), opts.k)),
                c: opts.sample_c,
                seed: opts.seed,
            };
            Structure::Preserver { kind, kept: build_k_ftrs(g, pairs, &params, provider.as_mut())? }
        }
    })
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

impl Structure {
    pub fn kind(&self) -> StructureKind {
        match self {
            Structure::Preserver { kind, .. } => *kind,
            Structure::DualOracle(_) => StructureKind::DualOracle,
            Structure::VertexOracle(_) => StructureKind::Ftro1Vertex,
            Structure::EdgeOracle(_) => StructureKind::Ftro1Edge,
        }
    }

    /// Edges kept by a preserver, `None` for oracles.
    pub fn kept(&self) -> Option<&Subgraph> {
        match self {
            Structure::Preserver { kept, .. } => Some(kept),
            _ => None,
        }
    }

    pub fn save(&self) -> Result<String> {
        let body = match self {
            Structure::Preserver { kept, .. } => write_graph(kept.graph()),
            Structure::DualOracle(o) => serde_json::to_string(o).map_err(json_err)? + "\n",
            Structure::VertexOracle(o) => serde_json::to_string(o).map_err(json_err)? + "\n",
            Structure::EdgeOracle(o) => serde_json::to_string(o).map_err(json_err)? + "\n",
        };
        Ok(format!("{MAGIC} {}\n{body}", self.kind()))
    }

    pub fn load(text: &str) -> Result<Structure> {
        let (header, body) = text.split_once('\n').unwrap_or((text, ""));
        let name = header
            .trim_end()
            .strip_prefix(MAGIC)
            .and_then(|rest| rest.strip_prefix(' '))
            .ok_or_else(|| Error::Format(format!("expected `{MAGIC} <structure>` header, found {header:?}")))?;
        let kind: StructureKind = name.parse().map_err(|_| Error::Format(format!("unknown structure {name:?}")))?;
        Ok(match kind {
            k if k.is_preserver() => {
                let h = parse_graph(body)?;
                Structure::Preserver { kind, kept: Subgraph::whole(&h) }
            }
            StructureKind::DualOracle => Structure::DualOracle(serde_json::from_str(body).map_err(json_err)?),
            StructureKind::Ftro1Vertex => Structure::VertexOracle(serde_json::from_str(body).map_err(json_err)?),
            _ => Structure::EdgeOracle(serde_json::from_str(body).map_err(json_err)?),
        })
    }

    pub fn query(&self, pair: Pair, failure: &Failure) -> Result<bool> {
        let unsupported = || Error::invalid(format!("{} does not answer {failure} queries", self.kind()));
        match (self, failure) {
            (Structure::Preserver { kept, .. }, Failure::Edges(f)) => {
                let h = kept.graph();
                h.check_vertex(pair.0)?;
                h.check_vertex(pair.1)?;
                Ok(kept.reachable(pair.0, pair.1, f))
            }
            (Structure::Preserver { kept, .. }, Failure::Vertices(vs)) => {
                let h = kept.graph();
                for &v in [pair.0, pair.1].iter().chain(vs) {
                    h.check_vertex(v)?;
                }
                Ok(!vs.contains(&pair.0)
                    && !vs.contains(&pair.1)
                    && reaches(h, pair.0, pair.1, |_| true, |v| !vs.contains(&v)))
            }
            (Structure::DualOracle(o), Failure::Edges(f)) => o.query(pair, f),
            (Structure::VertexOracle(o), Failure::Vertices(vs)) => match vs.as_slice() {
                [] => o.intact(pair),
                [x] => o.query(pair, *x),
                _ => Err(unsupported()),
            },
            (Structure::EdgeOracle(o), Failure::Edges(f)) => match f.edges() {
                [] => o.inner.intact(pair),
                [e] => o.query(pair, *e),
                _ => Err(unsupported()),
            },
            _ => Err(unsupported()),
        }
    }

    pub fn edges_kept(&self) -> usize {
        self.kept().map_or(0, Subgraph::len)
    }
}

impl Words for Structure {
    fn words(&self) -> usize {
        match self {
            Structure::Preserver { kept, .. } => kept.words(),
            Structure::DualOracle(o) => o.words(),
            Structure::VertexOracle(o) => o.words(),
            Structure::EdgeOracle(o) => o.words(),
        }
    }
}

/// One query line: `s t`, `s t E u v [u v ...]` or `s t V x [x ...]`.
pub fn parse_query(line_no: usize, line: &str) -> Result<(Pair, Failure)> {
    let err = |msg: String| Error::Parse { line: line_no, msg };
    let toks: Vec<&str> = line.split_whitespace().collect();
    let num = |tok: &str| tok.parse::<usize>().map_err(|_| err(format!("not a non-negative integer: {tok:?}")));
    if toks.len() < 2 {
        return Err(err("expected `s t [E u v ...|V x ...]`".into()));
    }
    let pair = (num(toks[0])?, num(toks[1])?);
    let rest = &toks[2..];
    let failure = match rest.first() {
        None => Failure::Edges(FailureSet::empty()),
        Some(&"E") => {
            let ids = rest[1..].iter().map(|t| num(t)).collect::<Result<Vec<_>>>()?;
            if ids.len() % 2 != 0 {
                return Err(err("edge failures need an even number of endpoints".into()));
            }
            Failure::Edges(FailureSet::new(ids.chunks(2).map(|c| (c[0], c[1]))))
        }
        Some(&"V") => {
            let mut vs = rest[1..].iter().map(|t| num(t)).collect::<Result<Vec<_>>>()?;
            vs.sort_unstable();
            vs.dedup();
            Failure::Vertices(vs)
        }
        Some(other) => return Err(err(format!("expected `E` or `V`, found {other:?}"))),
    };
    Ok((pair, failure))
}

/// Query lines of a file, skipping blanks and `#` comments.
pub fn parse_queries(text: &str) -> Result<Vec<(Pair, Failure)>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let line = line.split('#').next().unwrap_or("").trim();
            (!line.is_empty()).then(|| parse_query(i + 1, line))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::instances::gen_hard_dual;

    #[test]
    fn names_round_trip() {
        for k in StructureKind::ALL {
            assert_eq!(k.name().parse::<StructureKind>().unwrap(), k);
        }
        assert!("nope".parse::<StructureKind>().is_err());
    }

    #[test]
    fn save_load_answers_identically() {
        let inst = gen_hard_dual(2, 2).unwrap();
        let g = &inst.graph;
        let queries = [
            "0 7 E 0 1 6 7",
            "0 7 E 0 1",
            "2 5",
            "0 6 E 4 5",
            "2 7 V 3",
            "0 7 V 6",
        ];
        for kind in StructureKind::ALL {
            let built = build_structure(kind, g, &inst.pairs, &BuildOptions::default()).unwrap();
            let text = built.save().unwrap();
            assert!(text.starts_with(&format!("FTREACH v1 {kind}\n")));
            let loaded = Structure::load(&text).unwrap();
            assert_eq!(loaded.save().unwrap(), text);
            for (i, q) in queries.iter().enumerate() {
                let (pair, f) = parse_query(i + 1, q).unwrap();
                let a = built.query(pair, &f).ok();
                let b = loaded.query(pair, &f).ok();
                assert_eq!(a, b, "{kind} {q}");
            }
        }
    }

    #[test]
    fn dual_oracle_example() {
        let inst = gen_hard_dual(2, 2).unwrap();
        let o = build_structure(StructureKind::DualOracle, &inst.graph, &inst.pairs, &BuildOptions::default()).unwrap();
        let (pair, f) = parse_query(1, "0 7 E 0 1 6 7").unwrap();
        assert!(!o.query(pair, &f).unwrap());
        let (pair, f) = parse_query(1, "0 7 E 0 1").unwrap();
        assert!(o.query(pair, &f).unwrap());
    }

    #[test]
    fn query_parsing() {
        assert_eq!(parse_query(1, "1 2").unwrap(), ((1, 2), Failure::Edges(FailureSet::empty())));
        assert_eq!(parse_query(1, "1 2 V 3 3").unwrap().1, Failure::Vertices(vec![3]));
        assert!(parse_query(1, "1 2 E 3").is_err());
        assert!(parse_query(1, "1 2 X 3").is_err());
        assert!(parse_query(1, "1").is_err());
        assert_eq!(parse_queries("# c\n\n0 1 # tail\n").unwrap().len(), 1);
    }

    #[test]
    fn load_rejects_bad_headers() {
        assert!(Structure::load("FTREACH v2 pair-skel\n1 0\n").is_err());
        assert!(Structure::load("FTREACH v1 mystery\n").is_err());
        assert!(Structure::load("FTREACH v1 dual-oracle\n{").is_err());
        let s = Structure::load("FTREACH v1 pair-skel\n2 1\n0 1\n").unwrap();
        assert!(s.query((0, 1), &Failure::Edges(FailureSet::empty())).unwrap());
        let o = build_structure(StructureKind::Ftro1Vertex, &loopy(), &[(0, 3)], &BuildOptions::default()).unwrap();
        assert!(o.query((0, 3), &Failure::Edges(FailureSet::empty())).is_err());
    }
}
