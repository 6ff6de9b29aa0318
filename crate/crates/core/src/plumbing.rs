//! A graph together with its lattice data, term guard and caches.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use crate::error::Result;
use crate::graph::Graph;
use crate::lattice::{HClass, Lattice};

pub const DEFAULT_MAX_TERMS: u64 = 10_000_000;
pub const MAX_TERMS_ENV: &str = "PLUMBCALC_MAX_TERMS";

/// Term guard from the environment, falling back to the default.
pub fn max_terms_from_env() -> u64 {
    std::env::var(MAX_TERMS_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_TERMS)
}

#[derive(Debug)]
pub struct Plumbing {
    graph: Graph,
    lattice: Lattice,
    max_terms: u64,
    terms: AtomicU64,
    pub(crate) sw_cache: Mutex<HashMap<HClass, i128>>,
}

impl Plumbing {
    /// Fails with `NotNegDefinite` on indefinite graphs.
    pub fn new(graph: Graph) -> Result<Plumbing> {
        Plumbing::with_limit(graph, max_terms_from_env())
    }

    pub fn with_limit(graph: Graph, max_terms: u64) -> Result<Plumbing> {
        let lattice = Lattice::new(&graph)?;
        Ok(Plumbing {
            graph,
            lattice,
            max_terms,
            terms: AtomicU64::new(0),
            sw_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn n(&self) -> usize {
        self.graph.len()
    }

    /// Per-enumeration term guard.
    pub fn max_terms(&self) -> u64 {
        self.max_terms
    }

    /// Terms enumerated so far by all operations on this value.
    pub fn terms_used(&self) -> u64 {
        self.terms.load(Ordering::Relaxed)
    }

    pub(crate) fn record_terms(&self, t: u64) {
        self.terms.fetch_add(t, Ordering::Relaxed);
    }

    /// A plumbing on another graph sharing this term guard.
    pub fn derived(&self, graph: Graph) -> Result<Plumbing> {
        Plumbing::with_limit(graph, self.max_terms)
    }

    /// Vertex index by id.
    pub fn vertex(&self, id: &str) -> Result<usize> {
        self.graph.index_of(id)
    }
}
