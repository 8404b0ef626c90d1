//! Exhaustive state-space analysis for small networks.
//!
//! States are all `N`-tuples over the codomain, ordered lexicographically with
//! neuron 1 most significant and the codomain in its constructed order. Labels
//! shown to users are 1-based.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rayon::prelude::*;

use crate::algebra::{HNumber, HVector};
use crate::error::{Error, Result};
use crate::rcnn::Network;
use crate::scalar::Scalar;

pub const STATE_LIMIT: u128 = 1 << 20;

/// All `|S|^N` states in canonical order.
pub fn enumerate_states<T: Scalar>(alphabet: &[HNumber<T>], n: usize) -> Result<Vec<HVector<T>>> {
    let size = state_count(alphabet.len(), n)?;
    let dim = alphabet
        .first()
        .map(HNumber::dim)
        .ok_or(Error::InvalidParameter("empty alphabet".into()))?;
    let base = alphabet.len();
    let mut states = Vec::with_capacity(size);
    let mut digits = vec![0usize; n];
    for _ in 0..size {
        let data = digits
            .iter()
            .flat_map(|&d| alphabet[d].coeffs().iter().copied())
            .collect();
        states.push(HVector::new(dim, data)?);
        // increment, last neuron least significant
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < base {
                break;
            }
            *d = 0;
        }
    }
    Ok(states)
}

fn state_count(base: usize, n: usize) -> Result<usize> {
    let size = (base as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > STATE_LIMIT {
        return Err(Error::StateSpaceTooLarge {
            size,
            limit: STATE_LIMIT,
        });
    }
    Ok(size as usize)
}

/// Transition graph of a network over its full state space. Indices are
/// 0-based; add one for display labels.
#[derive(Clone, Debug)]
pub struct StateGraph<T> {
    pub states: Vec<HVector<T>>,
    pub sync_edges: Vec<usize>,
    /// Successors under single-neuron updates that change the state, or a
    /// self-loop when no update changes it. Sorted, without duplicates.
    pub async_edges: Vec<Vec<usize>>,
    pub memory_indices: Vec<usize>,
}

impl<T: Scalar> StateGraph<T> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, x: &HVector<T>) -> Option<usize> {
        self.states.iter().position(|s| s == x)
    }
}

/// Builds the graph with the codomain in its constructed order.
pub fn build_graph<T: Scalar>(net: &Network<T>) -> Result<StateGraph<T>> {
    let dim = net.memories().dim();
    let codomain = net.config().activation.codomain(dim)?;
    let alphabet = codomain
        .elements()
        .ok_or_else(|| Error::InvalidParameter("state enumeration needs a finite codomain".into()))?
        .to_vec();
    build_graph_with_alphabet(net, &alphabet)
}

/// Builds the graph with an explicit alphabet order.
pub fn build_graph_with_alphabet<T: Scalar>(
    net: &Network<T>,
    alphabet: &[HNumber<T>],
) -> Result<StateGraph<T>> {
    let n = net.memories().len();
    let states = enumerate_states(alphabet, n)?;
    let digit: HashMap<Vec<u64>, usize> = alphabet
        .iter()
        .enumerate()
        .map(|(k, s)| (s.coeffs().iter().map(|c| c.bit_pattern()).collect(), k))
        .collect();
    let index = |x: &HVector<T>| -> Result<usize> {
        let mut idx = 0usize;
        for (i, c) in x.components().enumerate() {
            let key: Vec<u64> = c.iter().map(|v| v.bit_pattern()).collect();
            let d = digit.get(&key).ok_or_else(|| Error::NotInCodomain {
                neuron: i,
                value: x.get(i).to_string(),
            })?;
            idx = idx * alphabet.len() + d;
        }
        Ok(idx)
    };

    let edges: Vec<(usize, Vec<usize>)> = states
        .par_iter()
        .map(|x| -> Result<(usize, Vec<usize>)> {
            let (next, _) = net.step_sync(x)?;
            let sync = index(&next)?;
            let cache = net.weight_cache(x)?;
            let mut succ = Vec::new();
            for i in 0..n {
                let mut y = x.clone();
                let mut c = cache.clone();
                if net.step_async(&mut y, i, &mut c)? {
                    succ.push(index(&y)?);
                }
            }
            if succ.is_empty() {
                succ.push(index(x)?);
            }
            succ.sort_unstable();
            succ.dedup();
            Ok((sync, succ))
        })
        .collect::<Result<_>>()?;
    let (sync_edges, async_edges) = edges.into_iter().unzip();

    let memory_indices = net
        .memories()
        .memories()
        .iter()
        .map(&index)
        .collect::<Result<Vec<_>>>()?;
    Ok(StateGraph {
        states,
        sync_edges,
        async_edges,
        memory_indices,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateKind {
    Fixed,
    Cycle,
    Transient,
}

impl StateKind {
    pub fn label(self) -> &'static str {
        match self {
            StateKind::Fixed => "fixed",
            StateKind::Cycle => "cycle",
            StateKind::Transient => "transient",
        }
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// An attractor of the synchronous map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attractor {
    /// A fixed point or the states of a cycle, starting at the smallest index
    /// and following the map.
    pub states: Vec<usize>,
    /// Number of states whose synchronous trajectory ends here.
    pub basin_size: usize,
}

impl Attractor {
    pub fn is_fixed_point(&self) -> bool {
        self.states.len() == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    /// Fixed points of the synchronous map.
    pub fixed_points: Vec<usize>,
    /// States with only a self-loop in the asynchronous graph.
    pub async_fixed_points: Vec<usize>,
    /// Synchronous fixed points that are not memories.
    pub spurious: Vec<usize>,
    /// Synchronous cycles of length at least two.
    pub sync_cycles: Vec<Vec<usize>>,
    /// Strongly connected components of the asynchronous graph with at least
    /// two states, each sorted.
    pub async_cycles: Vec<Vec<usize>>,
    pub attractors: Vec<Attractor>,
    /// Attractor id (position in `attractors`) per state.
    pub attractor_of: Vec<usize>,
    pub kinds: Vec<StateKind>,
}

impl Classification {
    pub fn has_cycles(&self) -> bool {
        !self.sync_cycles.is_empty() || !self.async_cycles.is_empty()
    }
}

pub fn classify<T: Scalar>(graph: &StateGraph<T>) -> Classification {
    let len = graph.len();
    let next = &graph.sync_edges;

    // attractors of the functional graph
    const UNSEEN: usize = usize::MAX;
    let mut attractor_of = vec![UNSEEN; len];
    let mut attractors: Vec<Attractor> = Vec::new();
    let mut on_path = vec![usize::MAX; len];
    for start in 0..len {
        if attractor_of[start] != UNSEEN {
            continue;
        }
        let mut path = Vec::new();
        let mut x = start;
        while attractor_of[x] == UNSEEN && on_path[x] == usize::MAX {
            on_path[x] = path.len();
            path.push(x);
            x = next[x];
        }
        let id = if attractor_of[x] != UNSEEN {
            attractor_of[x]
        } else {
            let cycle = &path[on_path[x]..];
            let min_pos = (0..cycle.len()).min_by_key(|&k| cycle[k]).unwrap_or(0);
            let states = cycle[min_pos..]
                .iter()
                .chain(&cycle[..min_pos])
                .copied()
                .collect();
            attractors.push(Attractor {
                states,
                basin_size: 0,
            });
            attractors.len() - 1
        };
        for &s in &path {
            attractor_of[s] = id;
            on_path[s] = usize::MAX;
        }
    }
    for &id in &attractor_of {
        attractors[id].basin_size += 1;
    }
    // renumber attractors by their smallest state for a stable order
    let mut order: Vec<usize> = (0..attractors.len()).collect();
    order.sort_by_key(|&k| attractors[k].states[0]);
    let mut rank = vec![0; attractors.len()];
    for (r, &k) in order.iter().enumerate() {
        rank[k] = r;
    }
    let attractors: Vec<Attractor> = order.iter().map(|&k| attractors[k].clone()).collect();
    let attractor_of: Vec<usize> = attractor_of.iter().map(|&k| rank[k]).collect();

    let mut kinds = vec![StateKind::Transient; len];
    for a in &attractors {
        let kind = if a.is_fixed_point() {
            StateKind::Fixed
        } else {
            StateKind::Cycle
        };
        for &s in &a.states {
            kinds[s] = kind;
        }
    }

    let fixed_points: Vec<usize> = (0..len).filter(|&s| next[s] == s).collect();
    let spurious = fixed_points
        .iter()
        .copied()
        .filter(|s| !graph.memory_indices.contains(s))
        .collect();
    let sync_cycles = attractors
        .iter()
        .filter(|a| !a.is_fixed_point())
        .map(|a| a.states.clone())
        .collect();
    let async_fixed_points = (0..len)
        .filter(|&s| graph.async_edges[s].as_slice() == [s])
        .collect();

    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(len, len);
    let nodes: Vec<_> = (0..len).map(|_| g.add_node(())).collect();
    for (s, succ) in graph.async_edges.iter().enumerate() {
        for &t in succ {
            if t != s {
                g.add_edge(nodes[s], nodes[t], ());
            }
        }
    }
    let mut async_cycles: Vec<Vec<usize>> = tarjan_scc(&g)
        .into_iter()
        .filter(|c| c.len() > 1)
        .map(|c| {
            let mut v: Vec<usize> = c.iter().map(|n| n.index()).collect();
            v.sort_unstable();
            v
        })
        .collect();
    async_cycles.sort();

    Classification {
        fixed_points,
        async_fixed_points,
        spurious,
        sync_cycles,
        async_cycles,
        attractors,
        attractor_of,
        kinds,
    }
}

/// Which edge set to render.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeSet {
    Sync,
    Async,
}

impl EdgeSet {
    pub fn label(self) -> &'static str {
        match self {
            EdgeSet::Sync => "sync",
            EdgeSet::Async => "async",
        }
    }
}

/// DOT digraph with memories shaded gray. `labels` overrides the default
/// 1-based node labels; every line of `comment` becomes a `//` comment.
pub fn export_dot<T: Scalar>(
    graph: &StateGraph<T>,
    edges: EdgeSet,
    labels: Option<&[String]>,
    comment: &str,
) -> String {
    let mut out = String::new();
    for line in comment.lines() {
        let _ = writeln!(out, "// {line}");
    }
    let _ = writeln!(out, "digraph {} {{", edges.label());
    let _ = writeln!(out, "  node [shape=circle, style=filled, fillcolor=white];");
    for s in 0..graph.len() {
        let label = labels
            .and_then(|l| l.get(s).cloned())
            .unwrap_or_else(|| (s + 1).to_string());
        let label = label.replace('\\', "\\\\").replace('"', "\\\"");
        if graph.memory_indices.contains(&s) {
            let _ = writeln!(out, "  {} [label=\"{label}\", fillcolor=gray];", s + 1);
        } else {
            let _ = writeln!(out, "  {} [label=\"{label}\"];", s + 1);
        }
    }
    for s in 0..graph.len() {
        let succ: &[usize] = match edges {
            EdgeSet::Sync => std::slice::from_ref(&graph.sync_edges[s]),
            EdgeSet::Async => &graph.async_edges[s],
        };
        for &t in succ {
            let _ = writeln!(out, "  {} -> {};", s + 1, t + 1);
        }
    }
    out.push_str("}\n");
    out
}

/// CSV with columns `state_index,kind,attractor_id,basin_size` (1-based ids).
pub fn attractor_csv(classes: &Classification) -> String {
    let mut out = String::from("state_index,kind,attractor_id,basin_size\n");
    for (s, &id) in classes.attractor_of.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            s + 1,
            classes.kinds[s],
            id + 1,
            classes.attractors[id].basin_size
        );
    }
    out
}

/// 1-based labels for a list of 0-based indices.
pub fn labels_of(indices: &[usize]) -> Vec<usize> {
    indices.iter().map(|i| i + 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::activations::{ActivationFn, ActivationKind};
    use crate::algebra::{AlgebraSpec, Involution};
    use crate::rcnn::{ExcitationFn, MemorySet, NetworkConfig};

    fn bipolar_net(alpha: f64) -> Network<f64> {
        let act = ActivationFn::new(ActivationKind::BipolarSign).unwrap();
        let rows: [[f64; 4]; 3] = [
            [-1.0, -1.0, 1.0, 1.0],
            [-1.0, 1.0, -1.0, -1.0],
            [1.0, 1.0, -1.0, -1.0],
        ];
        let u = rows
            .iter()
            .map(|r| HVector::new(1, r.to_vec()).unwrap())
            .collect();
        let mem = MemorySet::new(u, &act).unwrap();
        let cfg = NetworkConfig::new(
            AlgebraSpec::reals(),
            Involution::Trivial,
            act,
            ExcitationFn::exponential(alpha, 1.0).unwrap(),
        );
        Network::new(cfg, mem).unwrap()
    }

    #[test]
    fn state_counts() {
        let b = [
            HNumber::<f64>::from_f64s(&[-1.0]),
            HNumber::from_f64s(&[1.0]),
        ];
        assert_eq!(enumerate_states(&b, 4).unwrap().len(), 16);
        assert_eq!(enumerate_states(&b, 1).unwrap().len(), 2);
        let c: Vec<_> = (0..4).map(|k| HNumber::<f64>::unit(2, k % 2)).collect();
        assert_eq!(enumerate_states(&c, 2).unwrap().len(), 16);
        assert!(matches!(
            enumerate_states(&b, 21),
            Err(Error::StateSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn first_neuron_is_most_significant() {
        let b = [
            HNumber::<f64>::from_f64s(&[-1.0]),
            HNumber::from_f64s(&[1.0]),
        ];
        let s = enumerate_states(&b, 4).unwrap();
        assert_eq!(s[0].as_slice(), &[-1.0, -1.0, -1.0, -1.0]);
        assert_eq!(s[1].as_slice(), &[-1.0, -1.0, -1.0, 1.0]);
        assert_eq!(s[8].as_slice(), &[1.0, -1.0, -1.0, -1.0]);
    }

    #[test]
    fn bipolar_example_graph() {
        let g = build_graph(&bipolar_net(0.25)).unwrap();
        assert_eq!(labels_of(&g.memory_indices), vec![4, 5, 13]);
        let c = classify(&g);
        assert_eq!(labels_of(&c.fixed_points), vec![4, 5, 13]);
        assert!(c.spurious.is_empty());
        assert!(!c.has_cycles());
        assert_eq!(c.async_fixed_points, c.fixed_points);
        assert_eq!(c.attractors.iter().map(|a| a.basin_size).sum::<usize>(), 16);
    }

    #[test]
    fn dot_shades_memories() {
        let g = build_graph(&bipolar_net(0.25)).unwrap();
        let dot = export_dot(&g, EdgeSet::Sync, None, "alpha = 0.25");
        assert!(dot.starts_with("// alpha = 0.25\ndigraph sync {"));
        assert_eq!(dot.matches("fillcolor=gray").count(), 3);
        assert_eq!(dot.matches("->").count(), 16);
        let dot = export_dot(&g, EdgeSet::Async, None, "");
        assert!(dot.matches("->").count() >= 16);
    }

    #[test]
    fn attractor_csv_rows() {
        let g = build_graph(&bipolar_net(0.25)).unwrap();
        let csv = attractor_csv(&classify(&g));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "state_index,kind,attractor_id,basin_size");
        assert_eq!(lines.len(), 17);
        assert!(lines[4].starts_with("4,fixed,"));
    }
}
