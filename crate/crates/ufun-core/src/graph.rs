//! Analysis of the functional graph of a user function `h`.
//!
//! Every vertex of the graph of a function has exactly one outgoing edge
//! `n -> h(n)`, so a connected component either funnels into a unique cycle
//! or consists of trees threaded along an infinite simple path. Deciding
//! which is undecidable in general, so verdicts here are budgeted:
//!
//! - cyclic verdicts are exact, verified by walking the cycle once;
//! - acyclic verdicts require a strict-increase witness sustained to the
//!   orbit budget, or an explicit hint on the function spec;
//! - everything else is `Unknown` and downstream consumers refuse it.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::dsl;
use crate::numeral::Numeral;

/// Per-spec evaluation and search budgets.
#[derive(Clone, Copy, Debug)]
pub struct Budgets {
    /// Max `h` applications per orbit walk.
    pub orbit: u64,
    /// Largest argument scanned when enumerating preimages.
    pub preimage_scan: u64,
    /// Bit cap on values produced by expression evaluation.
    pub value_bits: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            orbit: 10_000,
            preimage_scan: 10_000,
            value_bits: dsl::DEFAULT_VALUE_BITS,
        }
    }
}

/// Behavior of a finite table outside its keys.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableDefault {
    /// Evaluation outside the table is an error (strict finite universe).
    Error,
    /// `h(n) = n` outside the table.
    Identity,
    /// Out-of-table arguments take the value at the largest key.
    ClampToMax,
}

#[derive(Clone, Debug)]
pub enum FnBody {
    Table {
        map: BTreeMap<u64, u64>,
        default: TableDefault,
    },
    Expr(dsl::Expr),
}

/// A user function `h` with evaluation budgets.
#[derive(Clone, Debug)]
pub struct FunctionSpec {
    body: FnBody,
    budgets: Budgets,
    acyclicity_hint: bool,
}

/// Failures of evaluation or budgeted search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphError {
    /// Strict table evaluated outside its keys.
    OutsideTable(Numeral),
    Dsl(dsl::EvalError),
    InvalidTable(String),
    /// An orbit walk ran out of budget with the question still open.
    OrbitBudget { budget: u64 },
    /// The orbit verdict was `Unknown` where a classification was required.
    UnknownOrbit(Numeral),
    /// Fewer preimages than requested within the scan bound.
    PreimageCount {
        found: u64,
        requested: u64,
        bound: u64,
    },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::OutsideTable(n) => write!(f, "h is not defined at {n} (strict table)"),
            GraphError::Dsl(e) => write!(f, "evaluation failed: {e}"),
            GraphError::InvalidTable(why) => write!(f, "invalid table: {why}"),
            GraphError::OrbitBudget { budget } => {
                write!(f, "orbit budget of {budget} steps exceeded")
            }
            GraphError::UnknownOrbit(n) => {
                write!(f, "orbit of {n} is unclassified within budget")
            }
            GraphError::PreimageCount {
                found,
                requested,
                bound,
            } => write!(
                f,
                "found only {found} of {requested} preimages scanning up to {bound}"
            ),
        }
    }
}

impl From<dsl::EvalError> for GraphError {
    fn from(e: dsl::EvalError) -> Self {
        GraphError::Dsl(e)
    }
}

impl FunctionSpec {
    pub fn from_expr(expr: dsl::Expr) -> Self {
        FunctionSpec {
            body: FnBody::Expr(expr),
            budgets: Budgets::default(),
            acyclicity_hint: false,
        }
    }

    pub fn from_expr_text(text: &str) -> Result<Self, dsl::ParseError> {
        Ok(Self::from_expr(dsl::parse(text)?))
    }

    pub fn from_table(
        map: BTreeMap<u64, u64>,
        default: TableDefault,
    ) -> Result<Self, GraphError> {
        if map.is_empty() {
            return Err(GraphError::InvalidTable("table is empty".to_string()));
        }
        if let Some((&k, _)) = map.iter().find(|&(&k, &v)| k == 0 || v == 0) {
            return Err(GraphError::InvalidTable(format!(
                "entry at key {k} leaves the domain (values start at 1)"
            )));
        }
        Ok(FunctionSpec {
            body: FnBody::Table { map, default },
            budgets: Budgets::default(),
            acyclicity_hint: false,
        })
    }

    pub fn with_budgets(mut self, budgets: Budgets) -> Self {
        self.budgets = budgets;
        self
    }

    /// Asserts that every component of this function is acyclic, lifting
    /// orbit walks that exhaust their budget to acyclic verdicts.
    pub fn with_acyclicity_hint(mut self, hint: bool) -> Self {
        self.acyclicity_hint = hint;
        self
    }

    pub fn budgets(&self) -> &Budgets {
        &self.budgets
    }

    pub fn body(&self) -> &FnBody {
        &self.body
    }

    pub fn acyclicity_hint(&self) -> bool {
        self.acyclicity_hint
    }

    /// `h(n)`. Deterministic and pure.
    pub fn eval(&self, n: &Numeral) -> Result<Numeral, GraphError> {
        match &self.body {
            FnBody::Table { map, default } => {
                if let Some(k) = n.to_u64() {
                    if let Some(&v) = map.get(&k) {
                        return Ok(Numeral::from_u64(v));
                    }
                }
                match default {
                    TableDefault::Error => Err(GraphError::OutsideTable(n.clone())),
                    TableDefault::Identity => Ok(n.clone()),
                    TableDefault::ClampToMax => {
                        let (_, &v) = map.last_key_value().expect("nonempty table");
                        Ok(Numeral::from_u64(v))
                    }
                }
            }
            FnBody::Expr(expr) => Ok(dsl::eval(expr, n, self.budgets.value_bits)?),
        }
    }

    /// Candidate arguments for preimage scans: strict tables only ever
    /// evaluate on their keys, everything else scans `1..=bound`.
    fn scan_domain(&self, bound: u64) -> Vec<u64> {
        match &self.body {
            FnBody::Table {
                map,
                default: TableDefault::Error,
            } => map.keys().copied().filter(|&k| k <= bound).collect(),
            _ => (1..=bound).collect(),
        }
    }
}

/// How an acyclic verdict was earned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AcyclicWitness {
    /// `h^(j+1)(n) > h^j(n)` for every inspected `j >= from`, sustained to
    /// the orbit budget.
    StrictIncrease { from: u64 },
    /// The spec carries an explicit acyclicity hint.
    Hint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrbitVerdict {
    /// Exact: the orbit enters a cycle of `cycle_length` after
    /// `tail_length` steps, verified by walking the cycle once.
    Cyclic {
        tail_length: u64,
        cycle_length: u64,
        entry: Numeral,
    },
    Acyclic(AcyclicWitness),
    Unknown,
}

#[derive(Clone, Debug)]
pub struct OrbitReport {
    pub start: Numeral,
    pub verdict: OrbitVerdict,
    /// Number of `h` applications performed.
    pub visited: u64,
}

/// Cycle of the graph of `h`, members in successor order from the smallest:
/// `members[i+1] = h(members[i])`, closing back to `members[0]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphCycle {
    members: Vec<Numeral>,
}

impl GraphCycle {
    fn from_walk(mut walk: Vec<Numeral>) -> Self {
        let smallest = walk
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(b.1))
            .map(|(i, _)| i)
            .expect("cycle is nonempty");
        walk.rotate_left(smallest);
        GraphCycle { members: walk }
    }

    pub fn len(&self) -> u64 {
        self.members.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn smallest(&self) -> &Numeral {
        &self.members[0]
    }

    /// Successor order starting at the smallest member.
    pub fn members(&self) -> &[Numeral] {
        &self.members
    }

    pub fn contains(&self, n: &Numeral) -> bool {
        self.members.iter().any(|m| m == n)
    }

    /// The in-cycle predecessor: the member mapping onto `n`.
    pub fn predecessor_of(&self, n: &Numeral) -> Option<&Numeral> {
        let idx = self.members.iter().position(|m| m == n)?;
        let k = self.members.len();
        Some(&self.members[(idx + k - 1) % k])
    }
}

#[derive(Clone, Debug)]
pub enum Classification {
    Cyclic { cycle: GraphCycle },
    Acyclic {
        anchor: Numeral,
        witness: AcyclicWitness,
    },
}

/// A connected component of the graph of `h`, as discovered over a window.
#[derive(Clone, Debug)]
pub struct ComponentDescriptor {
    /// Smallest member discovered in the window (the first, under an
    /// ascending scan); for a standalone classification of a cyclic vertex,
    /// the smallest cycle member.
    pub representative: Numeral,
    pub classification: Classification,
    /// 1-based discovery order over a window scan; `None` for standalone
    /// classifications.
    pub discovery_index: Option<u64>,
}

/// Walks the orbit of `n` with Brent's algorithm under the orbit budget.
pub fn orbit(spec: &FunctionSpec, n: &Numeral) -> Result<OrbitReport, GraphError> {
    let budget = spec.budgets().orbit;
    let mut evals: u64 = 0;
    let mut apply = |x: &Numeral| -> Result<Option<Numeral>, GraphError> {
        if evals >= budget {
            return Ok(None);
        }
        evals += 1;
        spec.eval(x).map(Some)
    };

    // Brent search with strict-increase bookkeeping along the hare's path
    // (the hare visits every orbit vertex in order).
    let mut power: u64 = 1;
    let mut lam: u64 = 1;
    let mut tortoise = n.clone();
    let Some(mut hare) = apply(n)? else {
        return Ok(OrbitReport {
            start: n.clone(),
            verdict: if spec.acyclicity_hint() {
                OrbitVerdict::Acyclic(AcyclicWitness::Hint)
            } else {
                OrbitVerdict::Unknown
            },
            visited: 0,
        });
    };
    let mut prev = n.clone();
    // Index of the first step of the currently sustained strict increase:
    // step j is the application producing h^(j+1).
    let mut increase_from: u64 = 0;
    let mut step: u64 = 0;
    if hare <= prev {
        increase_from = step + 1;
    }
    let found = loop {
        if tortoise == hare {
            break true;
        }
        if power == lam {
            tortoise = hare.clone();
            power = power.saturating_mul(2);
            lam = 0;
        }
        prev = hare.clone();
        match apply(&prev)? {
            Some(next) => {
                hare = next;
                lam += 1;
                step += 1;
                if hare <= prev {
                    increase_from = step + 1;
                }
            }
            None => break false,
        }
    };

    if !found {
        let verdict = if spec.acyclicity_hint() {
            OrbitVerdict::Acyclic(AcyclicWitness::Hint)
        } else if increase_from <= step {
            OrbitVerdict::Acyclic(AcyclicWitness::StrictIncrease {
                from: increase_from,
            })
        } else {
            OrbitVerdict::Unknown
        };
        return Ok(OrbitReport {
            start: n.clone(),
            verdict,
            visited: evals,
        });
    }

    // Cycle length is lam. Find the entry point by the standard offset walk.
    let cycle_length = lam;
    let mut ahead = n.clone();
    for _ in 0..cycle_length {
        ahead = spec.eval(&ahead)?;
        evals += 1;
    }
    let mut entry = n.clone();
    let mut tail_length: u64 = 0;
    while entry != ahead {
        entry = spec.eval(&entry)?;
        ahead = spec.eval(&ahead)?;
        evals += 2;
        tail_length += 1;
        if tail_length > budget {
            return Err(GraphError::OrbitBudget { budget });
        }
    }
    // Self-verification: the cycle closes in exactly cycle_length steps.
    let mut check = entry.clone();
    for _ in 0..cycle_length {
        check = spec.eval(&check)?;
        evals += 1;
    }
    debug_assert_eq!(check, entry, "cycle verification must close");
    if check != entry {
        return Ok(OrbitReport {
            start: n.clone(),
            verdict: OrbitVerdict::Unknown,
            visited: evals,
        });
    }
    Ok(OrbitReport {
        start: n.clone(),
        verdict: OrbitVerdict::Cyclic {
            tail_length,
            cycle_length,
            entry,
        },
        visited: evals,
    })
}

/// Collects the cycle through `entry` (which must lie on one) in successor
/// order, rotated to start at its smallest member.
pub fn collect_cycle(spec: &FunctionSpec, entry: &Numeral) -> Result<GraphCycle, GraphError> {
    let mut walk = Vec::new();
    let mut current = entry.clone();
    loop {
        walk.push(current.clone());
        current = spec.eval(&current)?;
        if current == *entry {
            return Ok(GraphCycle::from_walk(walk));
        }
        if walk.len() as u64 > spec.budgets().orbit {
            return Err(GraphError::OrbitBudget {
                budget: spec.budgets().orbit,
            });
        }
    }
}

/// Classifies the component of `n`. Refuses unknown orbits.
pub fn classify_component(
    spec: &FunctionSpec,
    n: &Numeral,
) -> Result<ComponentDescriptor, GraphError> {
    let report = orbit(spec, n)?;
    match report.verdict {
        OrbitVerdict::Cyclic { entry, .. } => {
            let cycle = collect_cycle(spec, &entry)?;
            Ok(ComponentDescriptor {
                representative: cycle.smallest().clone(),
                classification: Classification::Cyclic { cycle },
                discovery_index: None,
            })
        }
        OrbitVerdict::Acyclic(witness) => Ok(ComponentDescriptor {
            representative: n.clone(),
            classification: Classification::Acyclic {
                anchor: n.clone(),
                witness,
            },
            discovery_index: None,
        }),
        OrbitVerdict::Unknown => Err(GraphError::UnknownOrbit(n.clone())),
    }
}

/// The `i`-th element (ascending) of `h^-1(u)` within the preimage scan
/// bound.
pub fn alpha(spec: &FunctionSpec, u: &Numeral, i: u64) -> Result<Numeral, GraphError> {
    assert!(i >= 1);
    let bound = spec.budgets().preimage_scan;
    let mut found = 0;
    for y in spec.scan_domain(bound) {
        let candidate = Numeral::from_u64(y);
        if spec.eval(&candidate)? == *u {
            found += 1;
            if found == i {
                return Ok(candidate);
            }
        }
    }
    Err(GraphError::PreimageCount {
        found,
        requested: i,
        bound,
    })
}

/// All preimages of `u` within the scan bound, ascending, with an optional
/// exclusion (in-cycle or previous-spine predecessor).
pub fn preimages_excluding(
    spec: &FunctionSpec,
    u: &Numeral,
    exclude: Option<&Numeral>,
    bound: u64,
) -> Result<Vec<Numeral>, GraphError> {
    let mut out = Vec::new();
    for y in spec.scan_domain(bound) {
        let candidate = Numeral::from_u64(y);
        if exclude == Some(&candidate) {
            continue;
        }
        if spec.eval(&candidate)? == *u {
            out.push(candidate);
        }
    }
    Ok(out)
}

/// Rank (1-based) of `child` among the preimages of `u`, scanning only
/// arguments up to `child` itself, so the rank is exact regardless of the
/// scan bound.
pub fn preimage_rank(
    spec: &FunctionSpec,
    u: &Numeral,
    child: &Numeral,
    exclude: Option<&Numeral>,
) -> Result<u64, GraphError> {
    let child_u64 = child
        .to_u64()
        .ok_or_else(|| GraphError::PreimageCount {
            found: 0,
            requested: 1,
            bound: u64::MAX,
        })?;
    let mut rank = 0;
    for y in spec.scan_domain(child_u64) {
        let candidate = Numeral::from_u64(y);
        if exclude == Some(&candidate) {
            continue;
        }
        if spec.eval(&candidate)? == *u {
            rank += 1;
            if candidate == *child {
                return Ok(rank);
            }
        }
    }
    Err(GraphError::InvalidTable(format!(
        "{child} is not a preimage of {u}"
    )))
}

/// Where two orbits meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Meeting {
    pub steps_from_m: u64,
    pub steps_from_n: u64,
    pub vertex: Numeral,
}

/// First-visit index map of an orbit, and whether the orbit was fully
/// enumerated (closed into a cycle) within budget.
struct OrbitMap {
    first_visit: BTreeMap<Numeral, u64>,
    closed: bool,
}

fn orbit_map(spec: &FunctionSpec, start: &Numeral) -> Result<OrbitMap, GraphError> {
    let budget = spec.budgets().orbit;
    let mut first_visit = BTreeMap::new();
    let mut current = start.clone();
    for k in 0..=budget {
        if first_visit.contains_key(&current) {
            return Ok(OrbitMap {
                first_visit,
                closed: true,
            });
        }
        first_visit.insert(current.clone(), k);
        if k == budget {
            break;
        }
        current = spec.eval(&current)?;
    }
    Ok(OrbitMap {
        first_visit,
        closed: false,
    })
}

/// Least meeting point of the orbits of `m` and `n`: the first vertex of
/// `n`'s orbit that also lies on `m`'s orbit. `Ok(None)` is returned only
/// when both orbits were fully enumerated (certainly disjoint); an open
/// verdict is a budget error.
pub fn common_descendant(
    spec: &FunctionSpec,
    m: &Numeral,
    n: &Numeral,
) -> Result<Option<Meeting>, GraphError> {
    let m_orbit = orbit_map(spec, m)?;
    meet_against(spec, &m_orbit, n)
}

fn meet_against(
    spec: &FunctionSpec,
    m_orbit: &OrbitMap,
    n: &Numeral,
) -> Result<Option<Meeting>, GraphError> {
    let budget = spec.budgets().orbit;
    let mut seen = BTreeMap::new();
    let mut current = n.clone();
    for k2 in 0..=budget {
        if let Some(&k1) = m_orbit.first_visit.get(&current) {
            return Ok(Some(Meeting {
                steps_from_m: k1,
                steps_from_n: k2,
                vertex: current,
            }));
        }
        if seen.contains_key(&current) {
            // n's orbit closed without touching m's.
            return if m_orbit.closed {
                Ok(None)
            } else {
                Err(GraphError::OrbitBudget { budget })
            };
        }
        seen.insert(current.clone(), k2);
        if k2 == budget {
            break;
        }
        current = spec.eval(&current)?;
    }
    Err(GraphError::OrbitBudget { budget })
}

/// A window element whose orbit could not be classified.
#[derive(Clone, Debug)]
pub struct UnknownMember {
    pub n: u64,
    pub reason: String,
}

/// Component census over a window.
#[derive(Clone, Debug)]
pub struct ComponentsReport {
    /// Components in discovery order; `discovery_index` is set from 1.
    pub components: Vec<ComponentDescriptor>,
    /// Window element -> index into `components`.
    pub membership: BTreeMap<u64, usize>,
    /// Window elements with unknown orbits, reported rather than dropped.
    pub unknown: Vec<UnknownMember>,
}

/// Scans `window` in ascending order, assigning each element to a component.
///
/// Cyclic components are keyed by their cycle's smallest member; acyclic
/// elements are matched against the anchors of known acyclic components via
/// orbit meeting. An open (budget-exhausted) meeting verdict conservatively
/// starts a new component — a wrong split cannot corrupt downstream codings,
/// only fail their verification. Deterministic for fixed spec and budgets.
pub fn enumerate_components(
    spec: &FunctionSpec,
    window: (u64, u64),
) -> Result<ComponentsReport, GraphError> {
    assert!(window.0 >= 1 && window.0 <= window.1, "window must be nonempty");
    let mut components: Vec<ComponentDescriptor> = Vec::new();
    let mut membership = BTreeMap::new();
    let mut unknown = Vec::new();
    let mut by_cycle_smallest: BTreeMap<Numeral, usize> = BTreeMap::new();
    // Anchor orbit maps of acyclic components, for meeting tests.
    let mut acyclic: Vec<(usize, OrbitMap)> = Vec::new();

    for x in window.0..=window.1 {
        let n = Numeral::from_u64(x);
        let report = match orbit(spec, &n) {
            Ok(r) => r,
            Err(GraphError::OutsideTable(v)) => {
                unknown.push(UnknownMember {
                    n: x,
                    reason: format!("h undefined along the orbit at {v}"),
                });
                continue;
            }
            Err(GraphError::Dsl(e)) => {
                unknown.push(UnknownMember {
                    n: x,
                    reason: format!("evaluation failed along the orbit: {e}"),
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        match report.verdict {
            OrbitVerdict::Unknown => {
                unknown.push(UnknownMember {
                    n: x,
                    reason: "orbit budget exhausted without witness".to_string(),
                });
            }
            OrbitVerdict::Cyclic { entry, .. } => {
                let cycle = collect_cycle(spec, &entry)?;
                let key = cycle.smallest().clone();
                let idx = match by_cycle_smallest.get(&key) {
                    Some(&idx) => idx,
                    None => {
                        let idx = components.len();
                        components.push(ComponentDescriptor {
                            representative: n.clone(),
                            classification: Classification::Cyclic { cycle },
                            discovery_index: Some(idx as u64 + 1),
                        });
                        by_cycle_smallest.insert(key, idx);
                        idx
                    }
                };
                membership.insert(x, idx);
            }
            OrbitVerdict::Acyclic(witness) => {
                let mut assigned = None;
                for (idx, anchor_orbit) in &acyclic {
                    match meet_against(spec, anchor_orbit, &n) {
                        Ok(Some(_)) => {
                            assigned = Some(*idx);
                            break;
                        }
                        Ok(None) => {}
                        // Open verdict: treat as distinct (see above).
                        Err(GraphError::OrbitBudget { .. }) => {}
                        Err(e) => return Err(e),
                    }
                }
                let idx = match assigned {
                    Some(idx) => idx,
                    None => {
                        let idx = components.len();
                        components.push(ComponentDescriptor {
                            representative: n.clone(),
                            classification: Classification::Acyclic {
                                anchor: n.clone(),
                                witness,
                            },
                            discovery_index: Some(idx as u64 + 1),
                        });
                        acyclic.push((idx, orbit_map(spec, &n)?));
                        idx
                    }
                };
                membership.insert(x, idx);
            }
        }
    }
    Ok(ComponentsReport {
        components,
        membership,
        unknown,
    })
}

/// A bounded slice of the tree of predecessors of `root`.
#[derive(Clone, Debug)]
pub struct TreeSlice {
    pub root: Numeral,
    /// Predecessors in BFS discovery order (root excluded).
    pub members: Vec<Numeral>,
    /// `(child, parent)` pairs; every member has exactly one outgoing edge.
    pub edges: Vec<(Numeral, Numeral)>,
}

/// Breadth-first predecessor closure of `root`, excluding the in-cycle
/// predecessor when `root` lies on a cycle, truncated at `size_bound`
/// members. Preimages are scanned in ascending order within the spec's
/// scan bound.
pub fn tree_slice(
    spec: &FunctionSpec,
    root: &Numeral,
    size_bound: u64,
) -> Result<TreeSlice, GraphError> {
    let report = orbit(spec, root)?;
    let exclude = match &report.verdict {
        OrbitVerdict::Cyclic {
            tail_length: 0,
            entry,
            ..
        } => {
            let cycle = collect_cycle(spec, entry)?;
            cycle.predecessor_of(root).cloned()
        }
        OrbitVerdict::Cyclic { .. } | OrbitVerdict::Acyclic(_) => None,
        OrbitVerdict::Unknown => return Err(GraphError::UnknownOrbit(root.clone())),
    };
    let mut members = Vec::new();
    let mut edges = Vec::new();
    let mut queue: Vec<Numeral> = alloc::vec![root.clone()];
    let mut head = 0;
    'bfs: while head < queue.len() {
        let parent = queue[head].clone();
        head += 1;
        let exclusion = if parent == *root { exclude.as_ref() } else { None };
        let children =
            preimages_excluding(spec, &parent, exclusion, spec.budgets().preimage_scan)?;
        for child in children {
            if members.len() as u64 >= size_bound {
                break 'bfs;
            }
            members.push(child.clone());
            edges.push((child.clone(), parent.clone()));
            queue.push(child);
        }
    }
    Ok(TreeSlice {
        root: root.clone(),
        members,
        edges,
    })
}

/// Deterministic pseudo-random function tables on `{1..=vertices}`, for
/// seeded test batteries.
pub fn random_table(seed: u64, vertices: u64) -> BTreeMap<u64, u64> {
    let mut state = seed;
    let mut next = move || {
        // splitmix64
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    (1..=vertices).map(|v| (v, 1 + next() % vertices)).collect()
}
