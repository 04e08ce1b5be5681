use super::certificate::{Anchor, Witness};
use super::search::{dfs, lasso, shortest_good_cycle, to_path};
use super::{twin, Property, Verdict};
use crate::composition::{diamond_with_labelings, Composition};
use crate::fsa::{Fsa, Labeling, ObserverSet};
use crate::graph::{tarjan, Sccs};

/// Co-detectability: search `CC^⋄(S; S1, …, SL)` for sequential cycles with
/// distinct observers followed by a state whose tracked entries are all dead.
pub fn verify_co_detectability(s: &Fsa, observers: &ObserverSet) -> Verdict {
    let labelings = observers.labelings(s);
    match detection_witness(s, &labelings) {
        Some(w) => Verdict::violated(Property::CoDetectability, w),
        None => Verdict::holds(Property::CoDetectability),
    }
}

/// Strong detectability under the global labeling.
///
/// Decided on the twin product of `S` with itself; a witness is extracted
/// from `CC^⋄(S; S)` only when the property fails.
pub fn verify_strong_detectability(s: &Fsa) -> Verdict {
    if twin::strongly_detectable(s) {
        return Verdict::holds(Property::StrongDetectability);
    }
    let w = detection_witness(s, &[Labeling::global(s)]).expect("twin product and ⋄-composition disagree");
    Verdict::violated(Property::StrongDetectability, w)
}

/// Observers `j` (bit `j - 1`) that have a visible entry-0 event on some
/// transition internal to each SCC, with entry `j` alive.
pub(crate) fn positive_masks(c: &Composition, sccs: &Sccs, labelings: &[Labeling]) -> Vec<u64> {
    let mut mask = vec![0u64; sccs.count];
    for u in 0..c.num_states() as u32 {
        let cu = sccs.component[u as usize];
        for e in c.edges(u) {
            if sccs.component[e.target as usize] != cu {
                continue;
            }
            debug_assert!(
                (1..c.width()).all(|j| c.is_alive(u, j) == c.is_alive(e.target, j)),
                "liveness is uniform inside an SCC"
            );
            let Some(t0) = e.moves[0].event() else { continue };
            for (j, lab) in labelings.iter().enumerate() {
                if c.is_alive(u, j + 1) && lab.is_visible(t0) {
                    mask[cu] |= 1 << j;
                }
            }
        }
    }
    mask
}

pub(crate) fn detection_witness(s: &Fsa, labelings: &[Labeling]) -> Option<Witness> {
    let c = diamond_with_labelings(s, labelings);
    let l = labelings.len();
    let full: u64 = if l == 64 { u64::MAX } else { (1u64 << l) - 1 };
    let sccs = tarjan(c.num_states(), |v| c.successors(v as u32).collect::<Vec<_>>().into_iter());
    let positive = positive_masks(&c, &sccs, labelings);
    let reaches_cycle = s.reaches_cycle();
    let pos = |v: u32| positive[sccs.component[v as usize]];

    let starts: Vec<(u32, u64)> = c.initial().iter().map(|&v| (v, pos(v))).collect();
    let walk = dfs(
        &c,
        &starts,
        |_, tag, e| Some(tag | pos(e.target)),
        |v, tag| tag == full && c.all_dead(v) && reaches_cycle[c.lead(v).index()],
    )?;

    let mut anchors = Vec::new();
    let mut last = 0;
    let mut prev_tag = 0u64;
    for (i, &tag) in walk.tags.iter().enumerate() {
        let gained = tag & !prev_tag;
        prev_tag = tag;
        for j in (0..l).filter(|j| gained >> j & 1 == 1) {
            let v = walk.vertex(&c, i);
            let comp = sccs.component[v as usize];
            let lab = &labelings[j];
            let cycle = shortest_good_cycle(
                &c,
                v,
                |w| sccs.component[w as usize] == comp,
                |_, e| e.moves[0].event().is_some_and(|t| lab.is_visible(t)),
            )
            .expect("positive SCC has a positive cycle");
            let approach = to_path(&c, walk.vertex(&c, last), &walk.edges[last..i]);
            last = i;
            anchors.push(Anchor { observer: j + 1, approach, cycle: to_path(&c, v, &cycle) });
        }
    }
    let finish = to_path(&c, walk.vertex(&c, last), &walk.edges[last..]);
    let end = walk.end(&c);
    let plant = lasso(s, c.lead(end), |_| true).expect("end state reaches a cycle");
    Some(Witness::Detection { anchors, finish, plant })
}
