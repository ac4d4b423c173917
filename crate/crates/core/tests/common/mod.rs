//! Independent reference implementations for the integration tests.
//!
//! The oracle materializes the empirical joint distribution of (s, a, s')
//! and evaluates every quantity from its textbook definition with explicit
//! double and triple sums. It shares no code with the streaming path.

#![allow(dead_code)]

use std::collections::HashMap;

use rand::Rng;

use infosig::counts::CountTable;
use infosig::symbolizer::SymbolTriple;

pub struct OracleSignature {
    pub h_s: f64,
    pub h_a: f64,
    pub h_snext: f64,
    pub mi_sa: f64,
    pub mi_asnext: f64,
    pub mi_ssnext: f64,
    pub mi_sa_snext: f64,
}

/// Dense empirical joint p(s, a, s') over the observed alphabet.
struct Joint {
    p: Vec<Vec<Vec<f64>>>,
}

impl Joint {
    fn from_triples(triples: &[SymbolTriple]) -> Self {
        let index = |values: Vec<u32>| -> HashMap<u32, usize> {
            let mut v = values;
            v.sort_unstable();
            v.dedup();
            v.into_iter().enumerate().map(|(i, x)| (x, i)).collect()
        };
        let si = index(triples.iter().map(|t| t.s).collect());
        let ai = index(triples.iter().map(|t| t.a).collect());
        let ni = index(triples.iter().map(|t| t.s_next).collect());
        let mut p = vec![vec![vec![0.0; ni.len()]; ai.len()]; si.len()];
        let w = 1.0 / triples.len() as f64;
        for t in triples {
            p[si[&t.s]][ai[&t.a]][ni[&t.s_next]] += w;
        }
        Self { p }
    }

    fn dims(&self) -> (usize, usize, usize) {
        (self.p.len(), self.p[0].len(), self.p[0][0].len())
    }

    fn p_s(&self, s: usize) -> f64 {
        self.p[s].iter().flatten().sum()
    }

    fn p_a(&self, a: usize) -> f64 {
        self.p.iter().map(|plane| plane[a].iter().sum::<f64>()).sum()
    }

    fn p_n(&self, n: usize) -> f64 {
        self.p.iter().flat_map(|plane| plane.iter().map(move |row| row[n])).sum()
    }

    fn p_sa(&self, s: usize, a: usize) -> f64 {
        self.p[s][a].iter().sum()
    }

    fn p_an(&self, a: usize, n: usize) -> f64 {
        self.p.iter().map(|plane| plane[a][n]).sum()
    }

    fn p_sn(&self, s: usize, n: usize) -> f64 {
        self.p[s].iter().map(|row| row[n]).sum()
    }
}

fn h_term(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

fn mi_term(pxy: f64, px: f64, py: f64) -> f64 {
    if pxy > 0.0 {
        pxy * (pxy / (px * py)).log2()
    } else {
        0.0
    }
}

pub fn oracle_signature(triples: &[SymbolTriple]) -> OracleSignature {
    assert!(!triples.is_empty());
    let j = Joint::from_triples(triples);
    let (ns, na, nn) = j.dims();
    let h_s = (0..ns).map(|s| h_term(j.p_s(s))).sum();
    let h_a = (0..na).map(|a| h_term(j.p_a(a))).sum();
    let h_snext = (0..nn).map(|n| h_term(j.p_n(n))).sum();
    let mut mi_sa = 0.0;
    for s in 0..ns {
        for a in 0..na {
            mi_sa += mi_term(j.p_sa(s, a), j.p_s(s), j.p_a(a));
        }
    }
    let mut mi_asnext = 0.0;
    for a in 0..na {
        for n in 0..nn {
            mi_asnext += mi_term(j.p_an(a, n), j.p_a(a), j.p_n(n));
        }
    }
    let mut mi_ssnext = 0.0;
    for s in 0..ns {
        for n in 0..nn {
            mi_ssnext += mi_term(j.p_sn(s, n), j.p_s(s), j.p_n(n));
        }
    }
    let mut mi_sa_snext = 0.0;
    for s in 0..ns {
        for a in 0..na {
            for n in 0..nn {
                mi_sa_snext += mi_term(j.p[s][a][n], j.p_sa(s, a), j.p_n(n));
            }
        }
    }
    OracleSignature {
        h_s,
        h_a,
        h_snext,
        mi_sa,
        mi_asnext,
        mi_ssnext,
        mi_sa_snext,
    }
}

/// Plain entropy of a count list, for checking entropy-identity expansions.
pub fn entropy_of(counts: impl IntoIterator<Item = u64>) -> f64 {
    let counts: Vec<u64> = counts.into_iter().collect();
    let n: u64 = counts.iter().sum();
    counts.iter().map(|&c| h_term(c as f64 / n as f64)).sum()
}

/// Random stream over alphabets of the given sizes. Mixes in structure
/// (a partially deterministic policy and dynamics) so MI values are spread
/// across their range rather than all near zero.
pub fn random_triples<R: Rng>(rng: &mut R, n: usize, states: u32, actions: u32, next: u32) -> Vec<SymbolTriple> {
    let coupling: f64 = rng.random();
    (0..n)
        .map(|_| {
            let s = rng.random_range(0..states);
            let a = if rng.random::<f64>() < coupling {
                s % actions
            } else {
                rng.random_range(0..actions)
            };
            let s_next = if rng.random::<f64>() < coupling {
                (s + a) % next
            } else {
                rng.random_range(0..next)
            };
            SymbolTriple::new(s, a, s_next)
        })
        .collect()
}

pub fn random_table<R: Rng>(rng: &mut R, max_states: u32, max_actions: u32, max_next: u32, max_n: usize) -> CountTable {
    let states = rng.random_range(1..=max_states);
    let actions = rng.random_range(1..=max_actions);
    let next = rng.random_range(1..=max_next);
    let n = rng.random_range(1..=max_n);
    CountTable::from_triples(&random_triples(rng, n, states, actions, next))
}
