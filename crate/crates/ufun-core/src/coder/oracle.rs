//! Exhaustive independent checker for codings of finite strict tables.
//!
//! Everything here is recomputed from first principles: components and
//! cycles by plain visited-set walks over the table, and an embedding by
//! direct greedy search over the raw sequence prefix (no phase log, no
//! analytic evaluator, no fill-preimage arithmetic). The oracle then runs
//! the lazy coder on the same table and fails on any structural
//! disagreement or on any coder pair that is not injective and
//! edge-preserving.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::coder::{Coder, CoderConfig};
use crate::graph::{Classification, FunctionSpec, TableDefault};
use crate::numeral::Numeral;
use crate::sigma::{nat, Sigma};

/// Default cap on the prefix the oracle is willing to materialize.
pub const DEFAULT_PREFIX_CAP: u64 = 1 << 22;

#[derive(Clone, Debug)]
pub struct OracleReport {
    pub ok: bool,
    pub notes: Vec<String>,
    pub components: usize,
    pub own_pairs: usize,
    pub coder_pairs: usize,
}

impl OracleReport {
    fn fail(notes: Vec<String>) -> Self {
        OracleReport {
            ok: false,
            notes,
            components: 0,
            own_pairs: 0,
            coder_pairs: 0,
        }
    }
}

struct OwnComponent {
    members: Vec<u64>,
    /// Successor order starting from the smallest cycle member.
    cycle: Vec<u64>,
}

/// Exhaustively decomposes a closed table into components with their cycles.
fn decompose(table: &BTreeMap<u64, u64>) -> Vec<OwnComponent> {
    let mut comp_of: BTreeMap<u64, usize> = BTreeMap::new();
    let mut components: Vec<Vec<u64>> = Vec::new();
    for &start in table.keys() {
        if comp_of.contains_key(&start) {
            continue;
        }
        let mut path = Vec::new();
        let mut current = start;
        let id = loop {
            if let Some(&id) = comp_of.get(&current) {
                break id;
            }
            if path.contains(&current) {
                let id = components.len();
                components.push(Vec::new());
                break id;
            }
            path.push(current);
            current = table[&current];
        };
        for v in path {
            comp_of.insert(v, id);
            components[id].push(v);
        }
    }
    components
        .into_iter()
        .map(|mut members| {
            members.sort_unstable();
            // Walk from any member until a vertex repeats: the repeat opens
            // the cycle.
            let mut seen: Vec<u64> = Vec::new();
            let mut current = members[0];
            let cycle = loop {
                if let Some(at) = seen.iter().position(|&v| v == current) {
                    break seen[at..].to_vec();
                }
                seen.push(current);
                current = table[&current];
            };
            // Rotate to the smallest member.
            let min_at = cycle
                .iter()
                .enumerate()
                .min_by_key(|&(_, v)| v)
                .map(|(i, _)| i)
                .expect("cycles are nonempty");
            let mut rotated = cycle.clone();
            rotated.rotate_left(min_at);
            OwnComponent {
                members,
                cycle: rotated,
            }
        })
        .collect()
}

/// Prefix access that grows the table on demand, up to the cap.
struct Prefix<'a> {
    sigma: &'a mut Sigma,
    cap: u64,
}

impl<'a> Prefix<'a> {
    fn value(&mut self, i: u64) -> Option<u64> {
        if i > self.sigma.table().len() {
            let want = (i.max(4096)).checked_next_power_of_two()?.min(self.cap);
            if want < i {
                return None;
            }
            self.sigma.extend_to(want).ok()?;
        }
        self.sigma.table().get_u64(i)
    }

    /// Whether `x` lies on a cycle of the sequence: its image orbit returns
    /// to `x`. Cycles reachable at oracle scale are short, so the walk is
    /// capped generously.
    fn on_cycle(&mut self, x: u64) -> bool {
        let mut current = x;
        for _ in 0..200 {
            match self.value(current) {
                Some(next) => current = next,
                None => return false,
            }
            if current == x {
                return true;
            }
        }
        false
    }

    /// First position after `from` (exclusive) whose image is `w`, skipping
    /// powers, cycle positions, and anything in `used`.
    fn next_tree_preimage(
        &mut self,
        w: u64,
        from: u64,
        used: &BTreeSet<u64>,
    ) -> Option<u64> {
        let mut x = from + 1;
        loop {
            if x > self.cap {
                return None;
            }
            if !nat::is_power_of_two(x) && self.value(x)? == w && x > w + 1 {
                if !used.contains(&x) && !self.on_cycle(x) {
                    return Some(x);
                }
            }
            x += 1;
        }
    }

    /// First unused cycle of exact length `k` starting after `from`:
    /// returns its positions in successor order from the smallest member.
    fn next_cycle(&mut self, k: u64, from: u64, used: &BTreeSet<u64>) -> Option<Vec<u64>> {
        let mut x = from + 1;
        loop {
            if x > self.cap {
                return None;
            }
            if !nat::is_power_of_two(x) && !used.contains(&x) {
                // Walk the image orbit; an exact return at step k with no
                // earlier return means an honest k-cycle.
                let mut walk = Vec::with_capacity(k as usize);
                let mut current = x;
                let mut hit = None;
                for step in 1..=k {
                    walk.push(current);
                    current = self.value(current)?;
                    if current == x {
                        hit = Some(step);
                        break;
                    }
                }
                if hit == Some(k) && walk.iter().all(|p| !used.contains(p)) {
                    // x is the smallest member: cycles occupy consecutive
                    // non-power positions and we scan upward.
                    return Some(walk);
                }
            }
            x += 1;
        }
    }
}

/// Independently recomputes components, cycles, and an embedding for a
/// finite strict table, then cross-examines the lazy coder on it.
/// Never errors: all failures are notes in the report.
pub fn brute_force_oracle(
    table: &BTreeMap<u64, u64>,
    sigma: &mut Sigma,
    prefix_cap: u64,
) -> OracleReport {
    let mut notes = Vec::new();
    if table.is_empty() {
        return OracleReport::fail(alloc::vec!["table is empty".to_string()]);
    }
    // Closure: every orbit stays inside the table.
    for (&k, &v) in table {
        if !table.contains_key(&v) {
            notes.push(format!("table is not closed: h({k}) = {v} is not a key"));
        }
    }
    if !notes.is_empty() {
        return OracleReport::fail(notes);
    }

    let own = decompose(table);
    let mut prefix = Prefix {
        sigma,
        cap: prefix_cap,
    };

    // Direct greedy embedding over the raw prefix.
    let mut own_map: BTreeMap<u64, u64> = BTreeMap::new();
    let mut used: BTreeSet<u64> = BTreeSet::new();
    for comp in &own {
        let k = comp.cycle.len() as u64;
        let Some(target_cycle) = prefix.next_cycle(k, 0, &used) else {
            return OracleReport::fail(alloc::vec![format!(
                "prefix cap {prefix_cap} exhausted looking for a {k}-cycle"
            )]);
        };
        for (&m, &t) in comp.cycle.iter().zip(target_cycle.iter()) {
            own_map.insert(m, t);
            used.insert(t);
        }
        // Trees: breadth-first from the cycle, assigning each child the
        // next free tree preimage of its parent's target.
        let mut queue: Vec<u64> = comp.cycle.clone();
        let mut head = 0;
        while head < queue.len() {
            let parent = queue[head];
            head += 1;
            let parent_target = own_map[&parent];
            let in_cycle_pred = comp
                .cycle
                .iter()
                .position(|&v| v == parent)
                .map(|at| comp.cycle[(at + comp.cycle.len() - 1) % comp.cycle.len()]);
            let mut cursor = parent_target + 1;
            for &child in comp.members.iter().filter(|&&c| {
                table[&c] == parent && Some(c) != in_cycle_pred && !own_map.contains_key(&c)
            }) {
                match prefix.next_tree_preimage(parent_target, cursor, &used) {
                    Some(t) => {
                        own_map.insert(child, t);
                        used.insert(t);
                        cursor = t;
                        queue.push(child);
                    }
                    None => {
                        return OracleReport::fail(alloc::vec![format!(
                            "prefix cap {prefix_cap} exhausted embedding below {parent_target}"
                        )]);
                    }
                }
            }
        }
    }

    // Self-check of the oracle's own embedding.
    for (&v, &t) in &own_map {
        let image = table[&v];
        let t_image = match prefix.value(t) {
            Some(x) => x,
            None => {
                notes.push(format!("own embedding left the prefix at {t}"));
                continue;
            }
        };
        if own_map[&image] != t_image {
            notes.push(format!(
                "own embedding broke an edge at {v}: {} != {}",
                own_map[&image], t_image
            ));
        }
    }

    // Now the coder, from scratch on its own sequence context.
    let spec = match FunctionSpec::from_table(table.clone(), TableDefault::Error) {
        Ok(s) => s,
        Err(e) => return OracleReport::fail(alloc::vec![format!("spec rejected: {e}")]),
    };
    let max_key = *table.keys().last().expect("nonempty");
    let config = CoderConfig {
        window: (1, max_key),
        ..CoderConfig::default()
    };
    let mut coder = match Coder::new(&spec, config, Sigma::new()) {
        Ok(c) => c,
        Err(e) => return OracleReport::fail(alloc::vec![format!("coder setup failed: {e}")]),
    };
    for &k in table.keys() {
        if let Err(e) = coder.code_of(&Numeral::from_u64(k)) {
            notes.push(format!("coder failed at {k}: {e}"));
        }
    }

    // Structural agreement: same partition into components, same cycles.
    let report = coder.components();
    if report.components.len() != own.len() {
        notes.push(format!(
            "component counts disagree: oracle {} vs coder {}",
            own.len(),
            report.components.len()
        ));
    }
    for comp in &own {
        let first = comp.members[0];
        let Some(&coder_idx) = report.membership.get(&first) else {
            notes.push(format!("coder did not classify {first}"));
            continue;
        };
        for &m in &comp.members {
            if report.membership.get(&m) != Some(&coder_idx) {
                notes.push(format!("membership of {m} disagrees"));
            }
        }
        match &report.components[coder_idx].classification {
            Classification::Cyclic { cycle } => {
                let coder_cycle: Vec<u64> =
                    cycle.members().iter().map(|m| m.to_u64().unwrap()).collect();
                if coder_cycle != comp.cycle {
                    notes.push(format!(
                        "cycle disagrees: oracle {:?} vs coder {:?}",
                        comp.cycle, coder_cycle
                    ));
                }
            }
            Classification::Acyclic { .. } => {
                notes.push(format!(
                    "coder called the component of {first} acyclic; finite closed tables cycle"
                ));
            }
        }
    }

    // The coder's map must be functional (by structure), injective, and
    // edge-preserving, with e evaluated from the raw prefix where it
    // reaches and the evaluator beyond.
    let (coder_map, mut coder_sigma) = coder.into_map();
    let mut targets_seen: BTreeMap<Numeral, Numeral> = BTreeMap::new();
    for (s, t, _) in coder_map.iter() {
        if let Some(prev) = targets_seen.insert(t.clone(), s.clone()) {
            notes.push(format!("coder map reuses target {t} for {prev} and {s}"));
        }
    }
    for (&v, &image) in table {
        let source = Numeral::from_u64(v);
        let Some(t) = coder_map.get(&source) else {
            notes.push(format!("coder map lacks a pair for {v}"));
            continue;
        };
        let Some(t_image_expected) = coder_map.get(&Numeral::from_u64(image)) else {
            notes.push(format!("coder map lacks a pair for h({v}) = {image}"));
            continue;
        };
        let e_of_t = if let Some(t64) = t.to_u64() {
            prefix
                .value(t64)
                .map(Numeral::from_u64)
                .or_else(|| coder_sigma.eval(t).ok())
        } else {
            coder_sigma.eval(t).ok()
        };
        match e_of_t {
            Some(e_t) => {
                if &e_t != t_image_expected {
                    notes.push(format!(
                        "coder pair at {v} is not edge-preserving: e({t}) = {e_t} but c(h({v})) = {t_image_expected}"
                    ));
                }
            }
            None => notes.push(format!("could not evaluate e at {t}")),
        }
    }
    // Cycle-length preservation: walking e around each component's target
    // cycle returns to start in exactly the cycle length.
    for comp in &own {
        let k = comp.cycle.len();
        let start = coder_map
            .get(&Numeral::from_u64(comp.cycle[0]))
            .cloned();
        if let Some(start) = start {
            let mut current = start.clone();
            let mut returned = false;
            for step in 1..=k {
                match coder_sigma.eval(&current) {
                    Ok(next) => current = next,
                    Err(e) => {
                        notes.push(format!("cycle walk failed: {e}"));
                        break;
                    }
                }
                if current == start {
                    returned = step == k;
                    break;
                }
            }
            if !returned {
                notes.push(format!(
                    "target of the {k}-cycle at {} does not close in {k} steps",
                    comp.cycle[0]
                ));
            }
        }
    }

    OracleReport {
        ok: notes.is_empty(),
        notes,
        components: own.len(),
        own_pairs: own_map.len(),
        coder_pairs: coder_map.len(),
    }
}
