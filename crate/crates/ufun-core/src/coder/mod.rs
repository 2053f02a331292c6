//! Lazy construction of an injective coding `c` with `c(h(n)) = e(c(n))`.
//!
//! Components of the graph of `h` are enumerated over a window and each is
//! allocated a disjoint landing zone in the graph of `e`:
//!
//! - a cyclic component whose cycle has length `k` maps onto a `k`-cycle of
//!   `e` (the `i`-th such component, counted per length, gets the `i`-th
//!   `k`-cycle), with its hanging trees embedded below the cycle members;
//! - an acyclic component maps its anchor's forward iterates onto the
//!   non-periodic spine `2^(2^k * m)` (the `i`-th acyclic component gets the
//!   odd exponent `m = 2i - 1`), the anchor's predecessors below `2^m`, and
//!   each residual predecessor set below the corresponding spine target.
//!
//! Pairs are materialized on demand: coding `n` walks its forward path to
//! the component's cycle or spine and resolves targets top-down through
//! preimage ranks on the `h` side and fill-preimage enumeration (`beta`) on
//! the `e` side. Memoized pairs never change; any attempt to re-assign a
//! source or reuse a target aborts with a classification error rather than
//! silently overwriting.

pub mod oracle;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;

use crate::graph::{
    self, Classification, ComponentsReport, FunctionSpec, GraphCycle, GraphError,
};
use crate::numeral::Numeral;
use crate::sigma::{CycleDescriptor, Sigma, SigmaError};

/// Default cap on materialized spine iterates per acyclic component.
pub const DEFAULT_SPINE_BOUND: u64 = 64;

#[derive(Clone, Copy, Debug)]
pub struct CoderConfig {
    pub window: (u64, u64),
    pub spine_bound: u64,
}

impl Default for CoderConfig {
    fn default() -> Self {
        CoderConfig {
            window: (1, 500),
            spine_bound: DEFAULT_SPINE_BOUND,
        }
    }
}

/// Which part of the construction produced a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Tree embedding below a cycle member or the anchor.
    TreeDelta,
    /// Cycle-to-cycle alignment.
    CycleI,
    /// Spine iterate of an acyclic component.
    SpineI0,
    /// Residual tree below the `k`-th spine target.
    ResidualIk { k: u64 },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::TreeDelta => write!(f, "tree-delta"),
            Provenance::CycleI => write!(f, "cycle-i"),
            Provenance::SpineI0 => write!(f, "spine-i0"),
            Provenance::ResidualIk { k } => write!(f, "residual-i{k}"),
        }
    }
}

/// The partial injective map, source-keyed, with a reverse index for the
/// injectivity tripwire.
#[derive(Clone, Debug, Default)]
pub struct CodingMap {
    pairs: BTreeMap<Numeral, (Numeral, Provenance)>,
    by_target: BTreeMap<Numeral, Numeral>,
}

impl CodingMap {
    pub fn get(&self, source: &Numeral) -> Option<&Numeral> {
        self.pairs.get(source).map(|(t, _)| t)
    }

    pub fn provenance(&self, source: &Numeral) -> Option<Provenance> {
        self.pairs.get(source).map(|(_, p)| *p)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs in ascending source order.
    pub fn iter(&self) -> impl Iterator<Item = (&Numeral, &Numeral, Provenance)> {
        self.pairs.iter().map(|(s, (t, p))| (s, t, *p))
    }

    fn insert(
        &mut self,
        source: Numeral,
        target: Numeral,
        provenance: Provenance,
    ) -> Result<Numeral, CoderError> {
        if let Some((existing, _)) = self.pairs.get(&source) {
            if *existing == target {
                return Ok(target);
            }
            return Err(CoderError::Conflict {
                source,
                existing: existing.clone(),
                attempted: target,
            });
        }
        if let Some(other) = self.by_target.get(&target) {
            if *other != source {
                return Err(CoderError::InjectivityViolation {
                    target,
                    existing_source: other.clone(),
                    attempted_source: source,
                });
            }
        }
        self.by_target.insert(target.clone(), source.clone());
        self.pairs.insert(source, (target.clone(), provenance));
        Ok(target)
    }

    /// Deliberately perturbs the pair at `source` (negative-control
    /// support): the stored target is bumped without any consistency
    /// checks. Returns the new target.
    pub fn corrupt(&mut self, source: &Numeral) -> Option<Numeral> {
        let (target, prov) = self.pairs.get(source).cloned()?;
        self.by_target.remove(&target);
        let bumped = target
            .succ()
            .or_else(|_| target.double())
            .unwrap_or_else(|_| Numeral::from_u64(2));
        self.by_target.insert(bumped.clone(), source.clone());
        self.pairs.insert(source.clone(), (bumped.clone(), prov));
        Some(bumped)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoderError {
    Graph(GraphError),
    Sigma(SigmaError),
    /// The vertex does not belong to any component discovered over the
    /// window (or its orbit is unknown).
    UnknownComponent(Numeral),
    /// A source was about to receive a second distinct target: a
    /// classification bug upstream, never silently resolved.
    Conflict {
        source: Numeral,
        existing: Numeral,
        attempted: Numeral,
    },
    /// A target was about to be reused for a second source.
    InjectivityViolation {
        target: Numeral,
        existing_source: Numeral,
        attempted_source: Numeral,
    },
    /// The forward path needed a spine iterate beyond the bound.
    SpineBound { bound: u64 },
}

impl fmt::Display for CoderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoderError::Graph(e) => write!(f, "{e}"),
            CoderError::Sigma(e) => write!(f, "{e}"),
            CoderError::UnknownComponent(n) => {
                write!(f, "{n} belongs to no component discovered over the window")
            }
            CoderError::Conflict {
                source,
                existing,
                attempted,
            } => write!(
                f,
                "source {source} already maps to {existing}, refused {attempted} (classification bug)"
            ),
            CoderError::InjectivityViolation {
                target,
                existing_source,
                attempted_source,
            } => write!(
                f,
                "target {target} already taken by {existing_source}, refused for {attempted_source}"
            ),
            CoderError::SpineBound { bound } => {
                write!(f, "spine bound of {bound} iterates exceeded")
            }
        }
    }
}

impl From<GraphError> for CoderError {
    fn from(e: GraphError) -> Self {
        CoderError::Graph(e)
    }
}

impl From<SigmaError> for CoderError {
    fn from(e: SigmaError) -> Self {
        CoderError::Sigma(e)
    }
}

/// Landing zone allocated to one component.
#[derive(Clone, Debug)]
pub enum Allocation {
    /// Target cycle in the graph of `e`.
    Cycle { target: CycleDescriptor },
    /// Odd exponent `m`: the spine targets are `2^(2^k * m)`.
    Spine { odd_exponent: u64 },
}

struct SpineState {
    iterates: Vec<Numeral>,
    index: BTreeMap<Numeral, u64>,
    /// Evaluation error that stopped extension early, if any.
    stopped: Option<GraphError>,
}

/// Single-writer lazy coder for one `(spec, window, budgets)` triple.
pub struct Coder<'s> {
    spec: &'s FunctionSpec,
    config: CoderConfig,
    sigma: Sigma,
    components: ComponentsReport,
    allocations: Vec<Allocation>,
    cycle_pairs_done: Vec<bool>,
    by_cycle_smallest: BTreeMap<Numeral, usize>,
    spines: BTreeMap<usize, SpineState>,
    map: CodingMap,
}

impl<'s> Coder<'s> {
    /// Enumerates the window's components and allocates their landing
    /// zones; pair construction stays lazy.
    pub fn new(
        spec: &'s FunctionSpec,
        config: CoderConfig,
        mut sigma: Sigma,
    ) -> Result<Self, CoderError> {
        let components = graph::enumerate_components(spec, config.window)?;
        let mut allocations = Vec::with_capacity(components.components.len());
        let mut by_cycle_smallest = BTreeMap::new();
        let mut cyclic_counts: BTreeMap<u64, u64> = BTreeMap::new();
        let mut acyclic_count: u64 = 0;
        for (idx, comp) in components.components.iter().enumerate() {
            match &comp.classification {
                Classification::Cyclic { cycle } => {
                    let k = cycle.len();
                    let i = cyclic_counts.entry(k).or_insert(0);
                    *i += 1;
                    let target = sigma.kth_cycle(k, *i)?;
                    by_cycle_smallest.insert(cycle.smallest().clone(), idx);
                    allocations.push(Allocation::Cycle { target });
                }
                Classification::Acyclic { .. } => {
                    acyclic_count += 1;
                    allocations.push(Allocation::Spine {
                        odd_exponent: 2 * acyclic_count - 1,
                    });
                }
            }
        }
        let cycle_pairs_done = alloc::vec![false; allocations.len()];
        Ok(Coder {
            spec,
            config,
            sigma,
            components,
            allocations,
            cycle_pairs_done,
            by_cycle_smallest,
            spines: BTreeMap::new(),
            map: CodingMap::default(),
        })
    }

    pub fn components(&self) -> &ComponentsReport {
        &self.components
    }

    pub fn allocations(&self) -> &[Allocation] {
        &self.allocations
    }

    pub fn map(&self) -> &CodingMap {
        &self.map
    }

    pub fn into_map(self) -> (CodingMap, Sigma) {
        (self.map, self.sigma)
    }

    pub fn sigma_mut(&mut self) -> &mut Sigma {
        &mut self.sigma
    }

    pub fn spec(&self) -> &FunctionSpec {
        self.spec
    }

    pub fn config(&self) -> CoderConfig {
        self.config
    }

    /// `c(n)`. Computes exactly the pairs on `n`'s path; repeated calls are
    /// consistent (memoized pairs never change).
    pub fn code_of(&mut self, n: &Numeral) -> Result<Numeral, CoderError> {
        if let Some(t) = self.map.get(n) {
            return Ok(t.clone());
        }
        let idx = self.component_of(n)?;
        match &self.components.components[idx].classification {
            Classification::Cyclic { cycle } => {
                let cycle = cycle.clone();
                self.code_in_cyclic(idx, &cycle, n)
            }
            Classification::Acyclic { .. } => self.code_in_acyclic(idx, n),
        }
    }

    /// Identifies `n`'s component among the discovered ones.
    fn component_of(&mut self, n: &Numeral) -> Result<usize, CoderError> {
        if let Some(x) = n.to_u64() {
            if let Some(&idx) = self.components.membership.get(&x) {
                return Ok(idx);
            }
        }
        let report = graph::orbit(self.spec, n)?;
        match report.verdict {
            graph::OrbitVerdict::Cyclic { entry, .. } => {
                let cycle = graph::collect_cycle(self.spec, &entry)?;
                self.by_cycle_smallest
                    .get(cycle.smallest())
                    .copied()
                    .ok_or_else(|| CoderError::UnknownComponent(n.clone()))
            }
            graph::OrbitVerdict::Acyclic(_) => {
                for (idx, comp) in self.components.components.iter().enumerate() {
                    if let Classification::Acyclic { anchor, .. } = &comp.classification {
                        match graph::common_descendant(self.spec, anchor, n) {
                            Ok(Some(_)) => return Ok(idx),
                            Ok(None) => {}
                            Err(GraphError::OrbitBudget { .. }) => {}
                            Err(e) => return Err(e.into()),
                        }
                    }
                }
                Err(CoderError::UnknownComponent(n.clone()))
            }
            graph::OrbitVerdict::Unknown => Err(CoderError::UnknownComponent(n.clone())),
        }
    }

    /// Ensures the cycle-to-cycle alignment pairs of a cyclic component are
    /// in the map: the smallest `h`-cycle member pairs with the smallest
    /// target member, and successors follow successors.
    fn ensure_cycle_pairs(
        &mut self,
        idx: usize,
        cycle: &GraphCycle,
    ) -> Result<(), CoderError> {
        if self.cycle_pairs_done[idx] {
            return Ok(());
        }
        let Allocation::Cycle { target } = &self.allocations[idx] else {
            unreachable!("cyclic components get cycle allocations");
        };
        debug_assert_eq!(cycle.len(), target.length(), "length-preserving allocation");
        let target_order = target.successor_order();
        let sources = cycle.members();
        for (m, t) in sources.iter().zip(target_order.iter()) {
            self.map.insert(m.clone(), t.clone(), Provenance::CycleI)?;
        }
        self.cycle_pairs_done[idx] = true;
        Ok(())
    }

    fn code_in_cyclic(
        &mut self,
        idx: usize,
        cycle: &GraphCycle,
        n: &Numeral,
    ) -> Result<Numeral, CoderError> {
        self.ensure_cycle_pairs(idx, cycle)?;
        if let Some(t) = self.map.get(n) {
            return Ok(t.clone());
        }
        // Walk forward to the first memoized vertex (cycle members are
        // memoized now), then resolve targets back down the path.
        let path = self.forward_path(n)?;
        self.descend(&path, Some(cycle), None)
    }

    fn code_in_acyclic(&mut self, idx: usize, n: &Numeral) -> Result<Numeral, CoderError> {
        let Allocation::Spine { odd_exponent } = self.allocations[idx] else {
            unreachable!("acyclic components get spine allocations");
        };
        self.ensure_spine(idx)?;
        // Spine membership pairs are inserted on demand.
        if let Some(&k) = self.spines[&idx].index.get(n) {
            return self.insert_spine_pair(idx, k, odd_exponent);
        }
        if let Some(t) = self.map.get(n) {
            return Ok(t.clone());
        }
        let path = self.forward_path_to_spine(idx, n)?;
        // The path tail is either a memoized vertex or a spine vertex;
        // materialize the spine pair first when needed.
        let tail = path.last().expect("path contains n");
        if let Some(&k) = self.spines[&idx].index.get(tail) {
            self.insert_spine_pair(idx, k, odd_exponent)?;
        }
        let spine_snapshot: BTreeMap<Numeral, u64> = self.spines[&idx].index.clone();
        self.descend(&path, None, Some(&spine_snapshot))
    }

    /// Forward orbit from `n` (inclusive) to the first memoized vertex.
    fn forward_path(&self, n: &Numeral) -> Result<Vec<Numeral>, CoderError> {
        let budget = self.spec.budgets().orbit;
        let mut path = alloc::vec![n.clone()];
        let mut current = n.clone();
        for _ in 0..=budget {
            if self.map.get(&current).is_some() {
                return Ok(path);
            }
            current = self.spec.eval(&current)?;
            path.push(current.clone());
        }
        Err(GraphError::OrbitBudget { budget }.into())
    }

    /// Forward orbit from `n` to the first memoized or spine vertex.
    fn forward_path_to_spine(
        &self,
        idx: usize,
        n: &Numeral,
    ) -> Result<Vec<Numeral>, CoderError> {
        let budget = self.spec.budgets().orbit;
        let spine = &self.spines[&idx];
        let mut path = alloc::vec![n.clone()];
        let mut current = n.clone();
        for _ in 0..=budget {
            if self.map.get(&current).is_some() || spine.index.contains_key(&current) {
                return Ok(path);
            }
            current = self.spec.eval(&current)?;
            path.push(current.clone());
        }
        // The orbit never reached the materialized spine: either the spine
        // stopped early or the merge is beyond the bound.
        if let Some(stop) = &spine.stopped {
            return Err(stop.clone().into());
        }
        Err(CoderError::SpineBound {
            bound: self.config.spine_bound,
        })
    }

    /// Resolves targets down a forward path whose last vertex is memoized.
    /// `cycle` carries the component's cycle for root exclusions; `spine`
    /// carries the spine index map for acyclic components.
    fn descend(
        &mut self,
        path: &[Numeral],
        cycle: Option<&GraphCycle>,
        spine: Option<&BTreeMap<Numeral, u64>>,
    ) -> Result<Numeral, CoderError> {
        let mut target = self
            .map
            .get(path.last().expect("nonempty path"))
            .cloned()
            .expect("path tail is memoized");
        for s in (0..path.len() - 1).rev() {
            let child = &path[s];
            let parent = &path[s + 1];
            if let Some(t) = self.map.get(child) {
                target = t.clone();
                continue;
            }
            // Exclusions keep enumeration within the tree: a cycle member's
            // in-cycle predecessor, or a spine vertex's previous iterate.
            let exclusion = if let Some(c) = cycle {
                c.predecessor_of(parent).cloned()
            } else if let Some(sp) = spine {
                match sp.get(parent) {
                    Some(&k) if k >= 1 => {
                        let prev = sp
                            .iter()
                            .find(|(_, &kk)| kk == k - 1)
                            .map(|(v, _)| v.clone())
                            .expect("spine indices are contiguous");
                        Some(prev)
                    }
                    _ => None,
                }
            } else {
                None
            };
            let rank =
                graph::preimage_rank(self.spec, parent, child, exclusion.as_ref())?;
            let child_target = self.sigma.beta(&target, rank)?;
            let provenance = self.child_provenance(parent, spine);
            target = self
                .map
                .insert(child.clone(), child_target, provenance)?;
        }
        Ok(target)
    }

    /// Provenance of a pair hanging below `parent`.
    fn child_provenance(
        &self,
        parent: &Numeral,
        spine: Option<&BTreeMap<Numeral, u64>>,
    ) -> Provenance {
        if let Some(sp) = spine {
            if let Some(&k) = sp.get(parent) {
                return if k == 0 {
                    Provenance::TreeDelta
                } else {
                    Provenance::ResidualIk { k }
                };
            }
        }
        match self.map.provenance(parent) {
            Some(Provenance::ResidualIk { k }) => Provenance::ResidualIk { k },
            _ => Provenance::TreeDelta,
        }
    }

    fn insert_spine_pair(
        &mut self,
        idx: usize,
        k: u64,
        odd_exponent: u64,
    ) -> Result<Numeral, CoderError> {
        let vertex = self.spines[&idx].iterates[k as usize].clone();
        let target = spine_target(k, odd_exponent);
        self.map.insert(vertex, target, Provenance::SpineI0)
    }

    /// Materializes the spine of an acyclic component up to the bound.
    fn ensure_spine(&mut self, idx: usize) -> Result<(), CoderError> {
        if self.spines.contains_key(&idx) {
            return Ok(());
        }
        let Classification::Acyclic { anchor, .. } =
            &self.components.components[idx].classification
        else {
            unreachable!("spines belong to acyclic components");
        };
        let mut iterates = alloc::vec![anchor.clone()];
        let mut index = BTreeMap::new();
        index.insert(anchor.clone(), 0u64);
        let mut stopped = None;
        while (iterates.len() as u64) <= self.config.spine_bound {
            let last = iterates.last().expect("nonempty");
            match self.spec.eval(last) {
                Ok(next) => {
                    if let Some(&dup) = index.get(&next) {
                        // An acyclic component revisited a vertex: the
                        // witness was wrong. Surface it as a conflict.
                        return Err(CoderError::Conflict {
                            source: next.clone(),
                            existing: spine_target(dup, 1),
                            attempted: spine_target(iterates.len() as u64, 1),
                        });
                    }
                    index.insert(next.clone(), iterates.len() as u64);
                    iterates.push(next);
                }
                Err(e) => {
                    stopped = Some(e);
                    break;
                }
            }
        }
        self.spines.insert(
            idx,
            SpineState {
                iterates,
                index,
                stopped,
            },
        );
        Ok(())
    }
}

/// `2^(2^k * m)`: the target of the `k`-th spine iterate for odd base
/// exponent `m`.
pub fn spine_target(k: u64, m: u64) -> Numeral {
    let exponent = BigUint::from(m) << k;
    Numeral::pow2(Numeral::from_biguint(exponent))
}

/// Eagerly embeds a tree slice below `target`: the root maps to `target`,
/// and the `i`-th child (by ascending preimage rank, after the root
/// exclusion) of a vertex mapped to `v` maps to the `i`-th tree preimage of
/// `v`. Returns the pairs, root first.
pub fn embed_tree(
    spec: &FunctionSpec,
    sigma: &mut Sigma,
    tree: &graph::TreeSlice,
    target: &Numeral,
    exclude_at_root: Option<&Numeral>,
) -> Result<Vec<(Numeral, Numeral)>, CoderError> {
    let mut targets: BTreeMap<Numeral, Numeral> = BTreeMap::new();
    let mut pairs = Vec::with_capacity(tree.members.len() + 1);
    targets.insert(tree.root.clone(), target.clone());
    pairs.push((tree.root.clone(), target.clone()));
    for member in &tree.members {
        let parent = tree
            .edges
            .iter()
            .find(|(c, _)| c == member)
            .map(|(_, p)| p.clone())
            .expect("every member has an edge");
        let exclusion = if parent == tree.root {
            exclude_at_root
        } else {
            None
        };
        let parent_target = targets
            .get(&parent)
            .cloned()
            .expect("BFS order maps parents first");
        let rank = graph::preimage_rank(spec, &parent, member, exclusion)?;
        let member_target = sigma.beta(&parent_target, rank)?;
        targets.insert(member.clone(), member_target.clone());
        pairs.push((member.clone(), member_target));
    }
    Ok(pairs)
}

/// Eagerly embeds a cyclic component: aligns the `h`-cycle with `target`
/// (smallest member to smallest member, successors to successors) and
/// embeds each member's hanging tree, bounded by `tree_bound` vertices.
pub fn embed_cyclic_component(
    spec: &FunctionSpec,
    sigma: &mut Sigma,
    cycle: &GraphCycle,
    target: &CycleDescriptor,
    tree_bound: u64,
) -> Result<Vec<(Numeral, Numeral)>, CoderError> {
    assert_eq!(cycle.len(), target.length(), "cycle lengths must match");
    let target_order = target.successor_order();
    let mut pairs = Vec::new();
    for (m, t) in cycle.members().iter().zip(target_order.iter()) {
        pairs.push((m.clone(), t.clone()));
    }
    for (m, t) in cycle.members().iter().zip(target_order.iter()) {
        let slice = graph::tree_slice(spec, m, tree_bound)?;
        let exclusion = cycle.predecessor_of(m).cloned();
        let tree_pairs = embed_tree(spec, sigma, &slice, t, exclusion.as_ref())?;
        pairs.extend(tree_pairs.into_iter().skip(1)); // root pair already present
    }
    Ok(pairs)
}

/// Eagerly embeds an acyclic component anchored at `anchor` with odd base
/// exponent `m`: spine pairs for `k = 0..=spine_bound`, the anchor's tree
/// below `2^m`, and each residual predecessor set below its spine target.
pub fn embed_acyclic_component(
    spec: &FunctionSpec,
    sigma: &mut Sigma,
    anchor: &Numeral,
    odd_exponent: u64,
    spine_bound: u64,
    tree_bound: u64,
) -> Result<Vec<(Numeral, Numeral)>, CoderError> {
    assert!(odd_exponent % 2 == 1, "spine base exponents are odd");
    let mut pairs = Vec::new();
    let mut iterates = alloc::vec![anchor.clone()];
    for _ in 0..spine_bound {
        let next = spec.eval(iterates.last().expect("nonempty"))?;
        iterates.push(next);
    }
    for (k, u) in iterates.iter().enumerate() {
        pairs.push((u.clone(), spine_target(k as u64, odd_exponent)));
    }
    // Anchor tree: all predecessors of the anchor.
    let slice = graph::tree_slice(spec, anchor, tree_bound)?;
    let tree_pairs = embed_tree(
        spec,
        sigma,
        &slice,
        &spine_target(0, odd_exponent),
        None,
    )?;
    pairs.extend(tree_pairs.into_iter().skip(1));
    // Residual trees: predecessors of u_k except u_(k-1) and its
    // predecessors, i.e. the direct preimages of u_k minus u_(k-1), with
    // their own predecessor closures.
    for k in 1..iterates.len() {
        let u = &iterates[k];
        let prev = &iterates[k - 1];
        let residual_roots = graph::preimages_excluding(
            spec,
            u,
            Some(prev),
            spec.budgets().preimage_scan,
        )?;
        let u_target = spine_target(k as u64, odd_exponent);
        let mut rank = 0;
        for root in residual_roots {
            rank += 1;
            let root_rank = graph::preimage_rank(spec, u, &root, Some(prev))?;
            debug_assert_eq!(root_rank, rank);
            let root_target = sigma.beta(&u_target, root_rank)?;
            pairs.push((root.clone(), root_target.clone()));
            let sub = graph::tree_slice(spec, &root, tree_bound)?;
            let sub_pairs = embed_tree(spec, sigma, &sub, &root_target, None)?;
            pairs.extend(sub_pairs.into_iter().skip(1));
        }
    }
    Ok(pairs)
}

/// Status of one verification row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    /// `c(h(n)) != e(c(n))`.
    Violation,
    /// A budget or classification failure prevented the check.
    Error(String),
}

#[derive(Clone, Debug)]
pub struct VerifyRow {
    pub n: u64,
    pub c_n: Option<Numeral>,
    pub c_h_n: Option<Numeral>,
    pub e_c_n: Option<Numeral>,
    pub status: RowStatus,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
    /// Target collision found by the post-hoc injectivity recount, if any.
    pub injectivity_violation: Option<(Numeral, Numeral, Numeral)>,
    pub pairs: usize,
}

impl VerifyReport {
    pub fn checked(&self) -> usize {
        self.rows.len()
    }

    pub fn ok_count(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.status == RowStatus::Ok)
            .count()
    }

    pub fn violations(&self) -> impl Iterator<Item = &VerifyRow> {
        self.rows
            .iter()
            .filter(|r| r.status == RowStatus::Violation)
    }

    pub fn errors(&self) -> impl Iterator<Item = &VerifyRow> {
        self.rows
            .iter()
            .filter(|r| matches!(r.status, RowStatus::Error(_)))
    }

    pub fn injective(&self) -> bool {
        self.injectivity_violation.is_none()
    }

    /// Every row checked out and the map is injective.
    pub fn all_ok(&self) -> bool {
        self.injective() && self.rows.iter().all(|r| r.status == RowStatus::Ok)
    }

    /// No equality or injectivity violations (budget errors allowed).
    pub fn no_violations(&self) -> bool {
        self.injective() && !self.rows.iter().any(|r| r.status == RowStatus::Violation)
    }

    pub fn has_errors(&self) -> bool {
        self.rows
            .iter()
            .any(|r| matches!(r.status, RowStatus::Error(_)))
    }
}

/// Builds the coding over the window and checks `c(h(n)) = e(c(n))` for
/// every window element, plus global injectivity. Per-element failures are
/// carried in the report, never thrown.
pub fn verify_conjugacy(
    spec: &FunctionSpec,
    config: CoderConfig,
    sigma: Sigma,
) -> Result<VerifyReport, CoderError> {
    let mut coder = Coder::new(spec, config, sigma)?;
    let mut build_errors: BTreeMap<u64, String> = BTreeMap::new();
    for x in config.window.0..=config.window.1 {
        let n = Numeral::from_u64(x);
        if let Err(e) = coder.code_of(&n) {
            build_errors.insert(x, e.to_string());
            continue;
        }
        match coder.spec().eval(&n) {
            Ok(h_n) => {
                if let Err(e) = coder.code_of(&h_n) {
                    build_errors.insert(x, e.to_string());
                }
            }
            Err(e) => {
                build_errors.insert(x, e.to_string());
            }
        }
    }
    let (map, mut sigma) = coder.into_map();
    Ok(report_from_map(
        spec,
        &map,
        &mut sigma,
        config.window,
        &build_errors,
    ))
}

/// Checks an existing map against the spec and the function `e`: row-wise
/// conjugacy over the window plus a full injectivity recount. Used both by
/// [`verify_conjugacy`] and by negative controls that perturb the map
/// in between.
pub fn report_from_map(
    spec: &FunctionSpec,
    map: &CodingMap,
    sigma: &mut Sigma,
    window: (u64, u64),
    build_errors: &BTreeMap<u64, String>,
) -> VerifyReport {
    let mut rows = Vec::new();
    for x in window.0..=window.1 {
        let n = Numeral::from_u64(x);
        if let Some(reason) = build_errors.get(&x) {
            rows.push(VerifyRow {
                n: x,
                c_n: map.get(&n).cloned(),
                c_h_n: None,
                e_c_n: None,
                status: RowStatus::Error(reason.clone()),
            });
            continue;
        }
        let c_n = map.get(&n).cloned();
        let h_n = spec.eval(&n);
        let (c_h_n, e_c_n, status) = match (&c_n, h_n) {
            (Some(cn), Ok(hn)) => {
                let c_h_n = map.get(&hn).cloned();
                match (c_h_n.clone(), sigma.eval(cn)) {
                    (Some(chn), Ok(ecn)) => {
                        let status = if chn == ecn {
                            RowStatus::Ok
                        } else {
                            RowStatus::Violation
                        };
                        (Some(chn), Some(ecn), status)
                    }
                    (None, _) => (
                        None,
                        None,
                        RowStatus::Error("image pair missing".to_string()),
                    ),
                    (_, Err(e)) => (c_h_n, None, RowStatus::Error(e.to_string())),
                }
            }
            (None, _) => (
                None,
                None,
                RowStatus::Error("pair missing".to_string()),
            ),
            (_, Err(e)) => (None, None, RowStatus::Error(e.to_string())),
        };
        rows.push(VerifyRow {
            n: x,
            c_n,
            c_h_n,
            e_c_n,
            status,
        });
    }
    // Injectivity recount, independent of the construction-time tripwire.
    let mut seen: BTreeMap<&Numeral, &Numeral> = BTreeMap::new();
    let mut injectivity_violation = None;
    for (s, t, _) in map.iter() {
        if let Some(other) = seen.insert(t, s) {
            injectivity_violation = Some((t.clone(), other.clone(), s.clone()));
            break;
        }
    }
    VerifyReport {
        rows,
        injectivity_violation,
        pairs: map.len(),
    }
}

#[cfg(test)]
mod tests;
