//! Arena-backed search tree whose interior statistics are always exact
//! aggregates over the live leaves below them.

use crate::bandit::{clark_extreme_moments, ArmStats, Direction};
use crate::task::{ActionId, State};

#[derive(Clone, Debug)]
pub struct TreeNode {
    pub state: State,
    pub parent: Option<usize>,
    /// Action that generated this node; None at the root (and in synthetic
    /// trees built directly for tests).
    pub action: Option<ActionId>,
    /// Live children in insertion order. Dead children are detached.
    pub children: Vec<usize>,
    /// Reward sample over the live leaf h-values of this subtree. For an
    /// unexpanded leaf that is exactly its own h.
    pub stats: ArmStats,
    /// This node's own heuristic value. Only finite values enter the tree.
    pub h: f64,
    pub expanded: bool,
    /// Generated by a preferred operator of its parent.
    pub preferred: bool,
    /// Gaussian estimate (μ, σ) of the subtree minimum, folded from the
    /// children's sample moments; (h, 0) at leaves. Maintained only when
    /// the tree tracks it.
    pub clark: (f64, f64),
    pub live: bool,
}

pub struct SearchTree {
    nodes: Vec<TreeNode>,
    root: Option<usize>,
    track_clark: bool,
}

impl SearchTree {
    pub fn new(root_state: State, h: f64, track_clark: bool) -> Self {
        let root = TreeNode {
            state: root_state,
            parent: None,
            action: None,
            children: Vec::new(),
            stats: ArmStats::from_samples(&[h]),
            h,
            expanded: false,
            preferred: false,
            clark: (h, 0.0),
            live: true,
        };
        SearchTree { nodes: vec![root], root: Some(0), track_clark }
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn track_clark(&self) -> bool {
        self.track_clark
    }

    pub fn node(&self, id: usize) -> &TreeNode {
        &self.nodes[id]
    }

    /// Marks a leaf as expanded. Children are attached afterwards; the
    /// caller refreshes the path (or removes the node if nothing attached).
    pub fn mark_expanded(&mut self, id: usize) {
        debug_assert!(self.nodes[id].live && !self.nodes[id].expanded);
        self.nodes[id].expanded = true;
    }

    /// Attaches a fresh leaf under `parent`. Ancestor statistics are stale
    /// until `refresh_upward(parent)` runs.
    pub fn add_child(
        &mut self,
        parent: usize,
        action: Option<ActionId>,
        state: State,
        h: f64,
        preferred: bool,
    ) -> usize {
        assert!(h.is_finite(), "dead ends are removed, not attached");
        debug_assert!(self.nodes[parent].live);
        let id = self.nodes.len();
        self.nodes.push(TreeNode {
            state,
            parent: Some(parent),
            action,
            children: Vec::new(),
            stats: ArmStats::from_samples(&[h]),
            h,
            expanded: false,
            preferred,
            clark: (h, 0.0),
            live: true,
        });
        self.nodes[parent].children.push(id);
        id
    }

    /// Rebuilds one node's aggregates from its live children.
    fn recompute(&mut self, id: usize) {
        if self.nodes[id].children.is_empty() {
            debug_assert!(
                !self.nodes[id].expanded,
                "childless expanded nodes must be removed, not refreshed"
            );
            return; // leaf keeps its own-sample stats
        }
        let mut agg = ArmStats::new();
        for i in 0..self.nodes[id].children.len() {
            let c = self.nodes[id].children[i];
            agg.absorb(&self.nodes[c].stats);
        }
        self.nodes[id].stats = agg;
        if self.track_clark {
            let children = &self.nodes[id].children;
            let first = &self.nodes[children[0]].stats;
            let mut m = (first.mean(), first.sigma_or_zero());
            for &c in &children[1..] {
                let s = &self.nodes[c].stats;
                m = clark_extreme_moments(m, (s.mean(), s.sigma_or_zero()), Direction::Minimize);
            }
            self.nodes[id].clark = m;
        }
    }

    /// Recomputes aggregates from `from` up to the root. Call after the
    /// children of `from` changed.
    pub fn refresh_upward(&mut self, from: usize) {
        let mut cur = Some(from);
        while let Some(id) = cur {
            self.recompute(id);
            cur = self.nodes[id].parent;
        }
    }

    /// Removes a childless dead node, cascading while a parent becomes
    /// childless. Returns true when the root itself dies (the whole space
    /// is exhausted).
    pub fn remove_dead_end(&mut self, id: usize) -> bool {
        debug_assert!(self.nodes[id].live);
        debug_assert!(self.nodes[id].children.is_empty(), "only childless nodes are removed");
        let mut cur = id;
        loop {
            self.nodes[cur].live = false;
            let parent = match self.nodes[cur].parent {
                None => {
                    self.root = None;
                    return true;
                }
                Some(p) => p,
            };
            self.nodes[parent].children.retain(|&c| c != cur);
            if self.nodes[parent].children.is_empty() {
                cur = parent;
            } else {
                self.refresh_upward(parent);
                return false;
            }
        }
    }
}
