//! Isomorphism of incidence structures by individualization and colour
//! refinement on the point-block incidence graph.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::affine::OrbitDesign;
use crate::bits::BitSet;
use crate::codes::{code_from_design, WeightEnumerator};
use crate::gf2n::FieldElem;

/// Result of an isomorphism or equivalence test.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum IsoOutcome {
    /// `map[x]` is the image of point `x`; it carries the blocks of the
    /// first structure onto the blocks of the second.
    Isomorphic { map: Vec<FieldElem> },
    NonIsomorphic { reason: String },
    Undetermined { reason: String },
}

impl IsoOutcome {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoOutcome::Isomorphic { .. })
    }

    pub fn is_undetermined(&self) -> bool {
        matches!(self, IsoOutcome::Undetermined { .. })
    }
}

/// Points `0..v` and a set of distinct blocks.
#[derive(Clone, Debug)]
pub struct Incidence {
    v: usize,
    blocks: Vec<BitSet>,
}

impl Incidence {
    pub fn new(v: usize, mut blocks: Vec<BitSet>) -> Self {
        blocks.sort();
        blocks.dedup();
        Incidence { v, blocks }
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn blocks(&self) -> &[BitSet] {
        &self.blocks
    }

    fn contains(&self, b: &BitSet) -> bool {
        self.blocks.binary_search(b).is_ok()
    }

    /// Whether `map` sends every block onto a block of `other`.
    pub fn maps_onto(&self, other: &Incidence, map: &[usize]) -> bool {
        self.blocks.len() == other.blocks.len()
            && self
                .blocks
                .iter()
                .all(|b| other.contains(&BitSet::from_indices(other.v, b.ones().map(|x| map[x]))))
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Points `0..fixed` are sent to themselves without branching. Sound
    /// when the second structure has an automorphism group that is
    /// `fixed`-transitive on points.
    pub fixed: usize,
    pub node_budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            fixed: 0,
            node_budget: 200_000,
        }
    }
}

/// Bipartite graph: vertices `0..v` are points, `v..v+b` blocks.
struct Graph {
    v: usize,
    adj: Vec<Vec<u32>>,
}

impl Graph {
    fn new(s: &Incidence) -> Self {
        let mut adj = vec![Vec::new(); s.v + s.blocks.len()];
        for (j, b) in s.blocks.iter().enumerate() {
            for x in b.ones() {
                adj[x].push((s.v + j) as u32);
                adj[s.v + j].push(x as u32);
            }
        }
        Graph { v: s.v, adj }
    }
}

fn mix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Joint refinement of two colourings to a common equitable partition.
/// The new colour of a vertex is a function of its old colour and the
/// multiset of neighbour colours, with identifiers shared between the two
/// graphs. Returns false as soon as the colour histograms differ.
fn refine(g1: &Graph, c1: &mut [u32], g2: &Graph, c2: &mut [u32]) -> bool {
    let mut classes = count_classes(c1, c2);
    loop {
        let sig = |g: &Graph, c: &[u32]| -> Vec<(u32, u64)> {
            g.adj
                .iter()
                .enumerate()
                .map(|(u, nb)| (c[u], nb.iter().fold(0u64, |h, &w| h.wrapping_add(mix(c[w as usize] as u64)))))
                .collect()
        };
        let s1 = sig(g1, c1);
        let s2 = sig(g2, c2);
        let mut all: Vec<(u32, u64)> = s1.iter().chain(&s2).copied().collect();
        all.sort_unstable();
        all.dedup();
        let id = |s: &(u32, u64)| all.binary_search(s).unwrap() as u32;
        let mut hist = vec![0i64; all.len()];
        for (u, s) in s1.iter().enumerate() {
            c1[u] = id(s);
            hist[c1[u] as usize] += 1;
        }
        for (u, s) in s2.iter().enumerate() {
            c2[u] = id(s);
            hist[c2[u] as usize] -= 1;
        }
        if hist.iter().any(|&h| h != 0) {
            return false;
        }
        if all.len() == classes {
            return true;
        }
        classes = all.len();
    }
}

fn count_classes(c1: &[u32], c2: &[u32]) -> usize {
    let mut all: Vec<u32> = c1.iter().chain(c2).copied().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

struct Search<'a> {
    a: &'a Incidence,
    b: &'a Incidence,
    g1: Graph,
    g2: Graph,
    nodes: u64,
    budget: u64,
}

enum Step {
    Found(Vec<usize>),
    Exhausted,
    OutOfBudget,
}

impl Search<'_> {
    fn individualize(&self, c1: &mut [u32], x1: usize, c2: &mut [u32], x2: usize) -> bool {
        let fresh = c1.iter().chain(c2.iter()).max().map_or(0, |m| m + 1);
        c1[x1] = fresh;
        c2[x2] = fresh;
        refine(&self.g1, c1, &self.g2, c2)
    }

    fn run(&mut self, c1: Vec<u32>, c2: Vec<u32>) -> Step {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Step::OutOfBudget;
        }
        let v = self.g1.v;
        let mut size: BTreeMap<u32, usize> = BTreeMap::new();
        for &c in &c1[..v] {
            *size.entry(c).or_default() += 1;
        }
        let target = size.iter().filter(|(_, &s)| s > 1).min_by_key(|(&c, &s)| (s, c)).map(|(&c, _)| c);
        let Some(target) = target else {
            let mut at = BTreeMap::new();
            for (x, &c) in c2[..v].iter().enumerate() {
                at.insert(c, x);
            }
            let map: Vec<usize> = c1[..v].iter().map(|c| at[c]).collect();
            return if self.a.maps_onto(self.b, &map) {
                Step::Found(map)
            } else {
                Step::Exhausted
            };
        };
        let x1 = (0..v).find(|&x| c1[x] == target).unwrap();
        let mut exhausted = true;
        for x2 in (0..v).filter(|&x| c2[x] == target) {
            let mut d1 = c1.clone();
            let mut d2 = c2.clone();
            if !self.individualize(&mut d1, x1, &mut d2, x2) {
                continue;
            }
            match self.run(d1, d2) {
                Step::Found(m) => return Step::Found(m),
                Step::OutOfBudget => exhausted = false,
                Step::Exhausted => {}
            }
            if self.nodes > self.budget {
                return Step::OutOfBudget;
            }
        }
        if exhausted {
            Step::Exhausted
        } else {
            Step::OutOfBudget
        }
    }
}

/// Backtracking search for a point bijection carrying the blocks of `a`
/// onto those of `b`. The search is complete, so exhausting it proves
/// non-isomorphism.
pub fn search_isomorphism(a: &Incidence, b: &Incidence, opts: &SearchOptions) -> IsoOutcome {
    if a.v != b.v || a.blocks.len() != b.blocks.len() {
        return IsoOutcome::NonIsomorphic {
            reason: "point or block counts differ".into(),
        };
    }
    let mut s = Search {
        a,
        b,
        g1: Graph::new(a),
        g2: Graph::new(b),
        nodes: 0,
        budget: opts.node_budget,
    };
    let v = a.v;
    let init = |g: &Graph| -> Vec<u32> { (0..g.adj.len()).map(|u| u32::from(u >= v)).collect() };
    let mut c1 = init(&s.g1);
    let mut c2 = init(&s.g2);
    let mut ok = refine(&s.g1, &mut c1, &s.g2, &mut c2);
    for x in 0..opts.fixed.min(v) {
        ok = ok && s.individualize(&mut c1, x, &mut c2, x);
    }
    if !ok {
        return IsoOutcome::NonIsomorphic {
            reason: "colour refinement separates the structures".into(),
        };
    }
    match s.run(c1, c2) {
        Step::Found(map) => IsoOutcome::Isomorphic {
            map: map.into_iter().map(|x| FieldElem::from_bits(x as u32)).collect(),
        },
        Step::Exhausted => IsoOutcome::NonIsomorphic {
            reason: format!("search exhausted after {} nodes", s.nodes),
        },
        Step::OutOfBudget => IsoOutcome::Undetermined {
            reason: format!("search budget of {} nodes exhausted", opts.node_budget),
        },
    }
}

/// Largest point count for which the search is run by default.
pub const SEARCH_MAX_POINTS: usize = 32;

/// Isomorphism invariants compared before any search.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct DesignInvariants {
    pub v: usize,
    pub k: usize,
    pub num_blocks: usize,
    pub stab_order: u64,
    /// `|B cap B'|` over all blocks `B'`, for the base block `B`. Every block
    /// has the same profile since the group is transitive on blocks.
    pub intersections: BTreeMap<usize, u64>,
    pub code_dim: usize,
    pub code_weights: Option<WeightEnumerator>,
}

pub fn invariants(d: &OrbitDesign) -> DesignInvariants {
    let base = d.base().bitset();
    let mut intersections = BTreeMap::new();
    for b in d.blocks() {
        *intersections.entry(base.intersection_count(b)).or_default() += 1;
    }
    let code = code_from_design(d);
    DesignInvariants {
        v: d.v(),
        k: d.k(),
        num_blocks: d.num_blocks(),
        stab_order: d.stab_order(),
        intersections,
        code_dim: code.dim(),
        code_weights: code.weight_enumerator(1 << 24).ok(),
    }
}

fn first_difference(a: &DesignInvariants, b: &DesignInvariants) -> Option<String> {
    let pairs = [
        ("v", a.v == b.v),
        ("k", a.k == b.k),
        ("block count", a.num_blocks == b.num_blocks),
        ("stabilizer order", a.stab_order == b.stab_order),
        ("intersection profile", a.intersections == b.intersections),
        ("code dimension", a.code_dim == b.code_dim),
        ("code weight enumerator", a.code_weights == b.code_weights),
    ];
    pairs.iter().find(|(_, same)| !same).map(|(name, _)| format!("{name} differs"))
}

/// Isomorphism of two orbit designs on the same field. Both are invariant
/// under `x -> ax + b`, which is 2-transitive, so any isomorphism can be
/// composed into one fixing 0 and 1 and the search starts from there.
pub fn are_isomorphic(d1: &OrbitDesign, d2: &OrbitDesign) -> IsoOutcome {
    are_isomorphic_with(d1, d2, &SearchOptions::default())
}

pub fn are_isomorphic_with(d1: &OrbitDesign, d2: &OrbitDesign, opts: &SearchOptions) -> IsoOutcome {
    if d1.blocks() == d2.blocks() {
        return IsoOutcome::Isomorphic {
            map: d1.ctx().elements().collect(),
        };
    }
    if let Some(reason) = first_difference(&invariants(d1), &invariants(d2)) {
        return IsoOutcome::NonIsomorphic { reason };
    }
    let a = Incidence::new(d1.v(), d1.blocks().to_vec());
    let b = Incidence::new(d2.v(), d2.blocks().to_vec());
    let opts = SearchOptions {
        fixed: opts.fixed.max(2),
        ..opts.clone()
    };
    match search_isomorphism(&a, &b, &opts) {
        IsoOutcome::Undetermined { reason } if d1.v() > SEARCH_MAX_POINTS => IsoOutcome::Undetermined {
            reason: format!("{reason}; v = {} is beyond exhaustive range", d1.v()),
        },
        other => other,
    }
}

/// Partition of labelled designs into isomorphism classes.
#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub classes: Vec<Vec<String>>,
    /// Pairs that could not be decided; each such design was kept apart.
    pub undetermined: Vec<(String, String)>,
}

impl Classification {
    pub fn is_complete(&self) -> bool {
        self.undetermined.is_empty()
    }

    pub fn class_of(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.iter().any(|l| l == label))
    }
}

pub fn classify(designs: &[(String, OrbitDesign)]) -> Classification {
    let invs: Vec<DesignInvariants> = designs.iter().map(|(_, d)| invariants(d)).collect();
    let mut reps: Vec<usize> = Vec::new();
    let mut classes: Vec<Vec<String>> = Vec::new();
    let mut undetermined = Vec::new();
    for (i, (label, d)) in designs.iter().enumerate() {
        let mut home = None;
        for (c, &r) in reps.iter().enumerate() {
            if invs[r] != invs[i] {
                continue;
            }
            match are_isomorphic(&designs[r].1, d) {
                IsoOutcome::Isomorphic { .. } => {
                    home = Some(c);
                    break;
                }
                IsoOutcome::Undetermined { .. } => undetermined.push((designs[r].0.clone(), label.clone())),
                IsoOutcome::NonIsomorphic { .. } => {}
            }
        }
        match home {
            Some(c) => classes[c].push(label.clone()),
            None => {
                reps.push(i);
                classes.push(vec![label.clone()]);
            }
        }
    }
    Classification { classes, undetermined }
}
