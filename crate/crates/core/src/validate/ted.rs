//! Tree edit distance over tag trees.
//!
//! Exact distances use the Zhang–Shasha algorithm with unit costs
//! (insert 1, delete 1, relabel 1 when tags differ). Trees larger than
//! the exact-size cap fall back to a top-down alignment: identical
//! subtrees (by hash) cost 0, children are aligned with an edit-distance
//! DP whose substitution cost recurses, and unmatched subtrees cost their
//! size. The fallback is deterministic and never underestimates matching
//! subtrees, but is not guaranteed minimal.

use std::collections::HashMap;

use crate::html::{DomTree, NodeId, NodeKind};

/// Attribute- and text-free projection of a document: element labels and
/// structure only.
#[derive(Debug, Clone, Default)]
pub struct TagTree {
    labels: Vec<String>,
    children: Vec<Vec<usize>>,
}

impl TagTree {
    /// Project a document. Multiple top-level elements (possible only in
    /// programmatic trees) are wrapped under a synthetic root so the
    /// projection is always a single tree.
    pub fn from_document(doc: &DomTree) -> TagTree {
        let mut t = TagTree::default();
        let roots: Vec<NodeId> = doc
            .children(doc.root())
            .iter()
            .copied()
            .filter(|&c| doc.is_element(c))
            .collect();
        match roots.as_slice() {
            [] => {}
            [one] => {
                t.copy_from(doc, *one);
            }
            many => {
                let root = t.push("\u{0}root".to_string());
                for &r in many {
                    let c = t.copy_from(doc, r);
                    t.children[root].push(c);
                }
            }
        }
        t
    }

    fn copy_from(&mut self, doc: &DomTree, id: NodeId) -> usize {
        let label = match doc.kind(id) {
            NodeKind::Element { tag, .. } => tag.clone(),
            _ => unreachable!("only elements are projected"),
        };
        let me = self.push(label);
        for &c in doc.children(id) {
            if doc.is_element(c) {
                let child = self.copy_from(doc, c);
                self.children[me].push(child);
            }
        }
        me
    }

    fn push(&mut self, label: String) -> usize {
        self.labels.push(label);
        self.children.push(Vec::new());
        self.labels.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    fn root(&self) -> usize {
        0
    }

    /// Truncate to the given depth (root = depth 0), returning a new tree.
    pub fn truncated(&self, max_depth: usize) -> TagTree {
        let mut t = TagTree::default();
        if self.is_empty() {
            return t;
        }
        fn copy(src: &TagTree, node: usize, depth: usize, max: usize, out: &mut TagTree) -> usize {
            let me = out.push(src.labels[node].clone());
            if depth < max {
                for &c in &src.children[node] {
                    let cc = copy(src, c, depth + 1, max, out);
                    out.children[me].push(cc);
                }
            }
            me
        }
        copy(self, self.root(), 0, max_depth, &mut t);
        t
    }

    pub fn depth(&self) -> usize {
        if self.is_empty() {
            return 0;
        }
        fn d(t: &TagTree, n: usize) -> usize {
            1 + t.children[n].iter().map(|&c| d(t, c)).max().unwrap_or(0)
        }
        d(self, self.root()) - 1
    }

    fn subtree_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.len()];
        // children always have larger indices than their parent
        for i in (0..self.len()).rev() {
            sizes[i] = 1 + self.children[i].iter().map(|&c| sizes[c]).sum::<usize>();
        }
        sizes
    }

    fn subtree_hashes(&self) -> Vec<u64> {
        let mut hashes = vec![0u64; self.len()];
        for i in (0..self.len()).rev() {
            let mut h: u64 = 0xcbf2_9ce4_8422_2325;
            for b in self.labels[i].as_bytes() {
                h = (h ^ (*b as u64)).wrapping_mul(0x1000_0000_01b3);
            }
            for &c in &self.children[i] {
                h = (h ^ hashes[c]).wrapping_mul(0x1000_0000_01b3);
            }
            hashes[i] = h;
        }
        hashes
    }
}

/// Exact tree edit distance (Zhang–Shasha, unit costs).
pub fn zhang_shasha(a: &TagTree, b: &TagTree) -> u64 {
    if a.is_empty() {
        return b.len() as u64;
    }
    if b.is_empty() {
        return a.len() as u64;
    }
    let fa = Flattened::new(a);
    let fb = Flattened::new(b);
    let na = fa.labels.len();
    let nb = fb.labels.len();
    let mut tree_dist = vec![vec![0u64; nb]; na];

    for &ka in &fa.keyroots {
        for &kb in &fb.keyroots {
            forest_dist(&fa, &fb, ka, kb, &mut tree_dist);
        }
    }
    tree_dist[na - 1][nb - 1]
}

/// Postorder-numbered tree with leftmost-leaf indices and keyroots.
struct Flattened {
    labels: Vec<String>,
    /// l[i]: postorder index of the leftmost leaf of the subtree at i.
    lml: Vec<usize>,
    keyroots: Vec<usize>,
}

impl Flattened {
    fn new(t: &TagTree) -> Flattened {
        let mut labels = Vec::with_capacity(t.len());
        let mut lml = Vec::with_capacity(t.len());
        fn walk(t: &TagTree, node: usize, labels: &mut Vec<String>, lml: &mut Vec<usize>) -> usize {
            let mut leftmost = None;
            for &c in &t.children[node] {
                let child_lml = walk(t, c, labels, lml);
                leftmost.get_or_insert(child_lml);
            }
            labels.push(t.labels[node].clone());
            let me = labels.len() - 1;
            let my_lml = leftmost.unwrap_or(me);
            lml.push(my_lml);
            my_lml
        }
        walk(t, t.root(), &mut labels, &mut lml);
        // keyroots: nodes with no left sibling sharing the same lml,
        // i.e. the highest node for each leftmost leaf
        let mut last_for_lml: HashMap<usize, usize> = HashMap::new();
        for (i, &leftmost) in lml.iter().enumerate() {
            last_for_lml.insert(leftmost, i);
        }
        let mut keyroots: Vec<usize> = last_for_lml.into_values().collect();
        keyroots.sort_unstable();
        Flattened {
            labels,
            lml,
            keyroots,
        }
    }
}

fn forest_dist(fa: &Flattened, fb: &Flattened, i: usize, j: usize, tree_dist: &mut [Vec<u64>]) {
    let li = fa.lml[i];
    let lj = fb.lml[j];
    let m = i - li + 2;
    let n = j - lj + 2;
    let mut fd = vec![vec![0u64; n]; m];
    for di in 1..m {
        fd[di][0] = fd[di - 1][0] + 1;
    }
    for dj in 1..n {
        fd[0][dj] = fd[0][dj - 1] + 1;
    }
    for di in 1..m {
        for dj in 1..n {
            let ai = li + di - 1;
            let bj = lj + dj - 1;
            if fa.lml[ai] == li && fb.lml[bj] == lj {
                let relabel = u64::from(fa.labels[ai] != fb.labels[bj]);
                fd[di][dj] = (fd[di - 1][dj] + 1)
                    .min(fd[di][dj - 1] + 1)
                    .min(fd[di - 1][dj - 1] + relabel);
                tree_dist[ai][bj] = fd[di][dj];
            } else {
                let pa = fa.lml[ai] - li; // forest prefix before this subtree
                let pb = fb.lml[bj] - lj;
                fd[di][dj] = (fd[di - 1][dj] + 1)
                    .min(fd[di][dj - 1] + 1)
                    .min(fd[pa][pb] + tree_dist[ai][bj]);
            }
        }
    }
}

/// Top-down approximate distance for trees above the exact cap.
pub fn approx_ted(a: &TagTree, b: &TagTree) -> u64 {
    if a.is_empty() {
        return b.len() as u64;
    }
    if b.is_empty() {
        return a.len() as u64;
    }
    let ctx = ApproxCtx {
        a,
        b,
        size_a: a.subtree_sizes(),
        size_b: b.subtree_sizes(),
        hash_a: a.subtree_hashes(),
        hash_b: b.subtree_hashes(),
    };
    let mut memo = HashMap::new();
    approx_node(&ctx, a.root(), b.root(), &mut memo)
}

struct ApproxCtx<'a> {
    a: &'a TagTree,
    b: &'a TagTree,
    size_a: Vec<usize>,
    size_b: Vec<usize>,
    hash_a: Vec<u64>,
    hash_b: Vec<u64>,
}

fn approx_node(
    ctx: &ApproxCtx<'_>,
    x: usize,
    y: usize,
    memo: &mut HashMap<(usize, usize), u64>,
) -> u64 {
    if ctx.hash_a[x] == ctx.hash_b[y] {
        return 0;
    }
    if let Some(&d) = memo.get(&(x, y)) {
        return d;
    }
    let relabel = u64::from(ctx.a.labels[x] != ctx.b.labels[y]);
    let xs = &ctx.a.children[x];
    let ys = &ctx.b.children[y];
    // children sequence alignment: del/ins cost = subtree size,
    // substitution recurses
    let m = xs.len();
    let n = ys.len();
    let mut dp = vec![vec![0u64; n + 1]; m + 1];
    for i in 1..=m {
        dp[i][0] = dp[i - 1][0] + ctx.size_a[xs[i - 1]] as u64;
    }
    for j in 1..=n {
        dp[0][j] = dp[0][j - 1] + ctx.size_b[ys[j - 1]] as u64;
    }
    for i in 1..=m {
        for j in 1..=n {
            let del = dp[i - 1][j] + ctx.size_a[xs[i - 1]] as u64;
            let ins = dp[i][j - 1] + ctx.size_b[ys[j - 1]] as u64;
            let sub = dp[i - 1][j - 1] + approx_node(ctx, xs[i - 1], ys[j - 1], memo);
            dp[i][j] = del.min(ins).min(sub);
        }
    }
    let d = relabel + dp[m][n];
    memo.insert((x, y), d);
    d
}
