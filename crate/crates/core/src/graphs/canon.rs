//! Canonical labeling of small simple graphs by individualization and refinement.

/// Adjacency rows of the canonically relabeled graph, as bitmasks.
pub type CanonicalForm = Vec<u64>;

type Cells = Vec<Vec<usize>>;

/// A labeling-independent form: two graphs are isomorphic iff their forms are equal.
///
/// Supports up to 64 vertices. The search has no automorphism pruning, so it is
/// meant for small or highly structured graphs.
pub fn canonical_form(adj: &[Vec<bool>]) -> CanonicalForm {
    let n = adj.len();
    assert!(n <= 64, "canonical_form supports at most 64 vertices");
    let mut best = None;
    search(adj, refine(adj, vec![(0..n).collect()]), &mut best);
    best.unwrap_or_default()
}

fn search(adj: &[Vec<bool>], cells: Cells, best: &mut Option<CanonicalForm>) {
    let Some(target) = cells.iter().position(|c| c.len() > 1) else {
        let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
        let form = relabel(adj, &order);
        if best.as_ref().is_none_or(|b| form < *b) {
            *best = Some(form);
        }
        return;
    };
    for &v in &cells[target] {
        let mut next = cells.clone();
        let rest: Vec<usize> = cells[target].iter().copied().filter(|&u| u != v).collect();
        next.splice(target..=target, [vec![v], rest]);
        search(adj, refine(adj, next), best);
    }
}

fn relabel(adj: &[Vec<bool>], order: &[usize]) -> CanonicalForm {
    order
        .iter()
        .map(|&u| order.iter().enumerate().filter(|&(_, &w)| adj[u][w]).fold(0u64, |m, (j, _)| m | 1 << j))
        .collect()
}

/// Splits cells by neighbor counts into every cell until stable. Split cells
/// are ordered by their count signature, so the result depends only on the
/// graph structure and the input cell order.
fn refine(adj: &[Vec<bool>], mut cells: Cells) -> Cells {
    loop {
        let mut changed = false;
        let mut next = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<usize>, usize)> = cell
                .iter()
                .map(|&v| (cells.iter().map(|c| c.iter().filter(|&&w| adj[v][w]).count()).collect(), v))
                .collect();
            keyed.sort();
            let mut group: Vec<usize> = vec![keyed[0].1];
            for w in keyed.windows(2) {
                if w[0].0 != w[1].0 {
                    next.push(std::mem::take(&mut group));
                    changed = true;
                }
                group.push(w[1].1);
            }
            next.push(group);
        }
        cells = next;
        if !changed {
            return cells;
        }
    }
}
