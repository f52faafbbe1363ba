use std::collections::VecDeque;

use super::{make_codes, BackendPolicy, DigitSeq};
use crate::huffman::{CodeShape, Codebook};
use crate::persist::{Persist, Reader, Writer};
use crate::seq::{check_access, check_rank, check_symbol, rank_error, validate_input, Rsa};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Child {
    Empty,
    Leaf(u32),
    Node(u32),
}

#[derive(Clone, Debug)]
struct Node {
    seq: DigitSeq,
    children: Vec<Child>,
}

/// Wavelet tree with explicit nodes, one per code prefix.
#[derive(Clone, Debug)]
pub struct WaveletTree {
    n: usize,
    sigma: u32,
    codes: Codebook,
    nodes: Vec<Node>,
}

impl WaveletTree {
    pub fn build(
        s: &[u32],
        sigma: u32,
        shape: CodeShape,
        arity: u32,
        policy: &BackendPolicy,
    ) -> Result<Self> {
        validate_input(s, sigma)?;
        let codes = make_codes(s, sigma, shape, arity)?;
        let k = arity as usize;
        let mut nodes = Vec::new();
        let mut queue = VecDeque::new();
        queue.push_back((s.to_vec(), 0usize));
        let mut next_id = 1u32;
        while let Some((syms, depth)) = queue.pop_front() {
            let digits: Vec<u8> = syms.iter().map(|&a| codes.code(a)[depth]).collect();
            let seq = DigitSeq::build(&digits, arity, policy, depth)?;
            let mut groups: Vec<Vec<u32>> = vec![Vec::new(); k];
            for (&a, &d) in syms.iter().zip(&digits) {
                groups[d as usize].push(a);
            }
            drop(syms);
            let mut children = vec![Child::Empty; k];
            for (d, g) in groups.into_iter().enumerate() {
                if g.is_empty() {
                    continue;
                }
                if codes.code(g[0]).len() == depth + 1 {
                    children[d] = Child::Leaf(g[0]);
                } else {
                    children[d] = Child::Node(next_id);
                    next_id += 1;
                    queue.push_back((g, depth + 1));
                }
            }
            nodes.push(Node { seq, children });
        }
        Ok(Self {
            n: s.len(),
            sigma,
            codes,
            nodes,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Length of the longest code.
    pub fn depth(&self) -> usize {
        self.codes.max_len()
    }

    pub fn codes(&self) -> &Codebook {
        &self.codes
    }

    /// Representation name of each node's sequence.
    pub fn node_kinds(&self) -> Vec<&'static str> {
        self.nodes.iter().map(|nd| nd.seq.kind_name()).collect()
    }

    fn rank_unchecked(&self, a: u32, i: usize) -> usize {
        let code = self.codes.code(a);
        let mut node = &self.nodes[0];
        let mut pos = i;
        for &d in code {
            pos = node.seq.rank(d, pos);
            if pos == 0 {
                return 0;
            }
            match node.children[d as usize] {
                Child::Leaf(_) => return pos,
                Child::Node(c) => node = &self.nodes[c as usize],
                Child::Empty => return 0,
            }
        }
        0
    }
}

impl Rsa for WaveletTree {
    fn len(&self) -> usize {
        self.n
    }

    fn sigma(&self) -> u32 {
        self.sigma
    }

    fn access(&self, i: usize) -> Result<u32> {
        check_access(i, self.n)?;
        let mut node = &self.nodes[0];
        let mut pos = i - 1;
        loop {
            let d = node.seq.get(pos);
            pos = node.seq.rank(d, pos);
            match node.children[d as usize] {
                Child::Leaf(a) => return Ok(a),
                Child::Node(c) => node = &self.nodes[c as usize],
                Child::Empty => {
                    return Err(Error::corrupt("wavelet tree path ends in an empty child"))
                }
            }
        }
    }

    fn rank(&self, a: u32, i: usize) -> Result<usize> {
        check_rank(a, i, self.n, self.sigma)?;
        Ok(self.rank_unchecked(a, i))
    }

    fn select(&self, a: u32, j: usize) -> Result<usize> {
        check_symbol(a, self.sigma)?;
        let count = self.rank_unchecked(a, self.n);
        if j > count {
            return Err(rank_error(a, j, count));
        }
        if j == 0 {
            return Ok(0);
        }
        let code = self.codes.code(a);
        let mut path = Vec::with_capacity(code.len());
        let mut node = 0usize;
        for &d in code {
            path.push(node);
            if let Child::Node(c) = self.nodes[node].children[d as usize] {
                node = c as usize;
            }
        }
        let mut pos = j;
        for (t, &nd) in path.iter().enumerate().rev() {
            pos = self.nodes[nd]
                .seq
                .select(code[t], pos)
                .expect("count checked above");
        }
        Ok(pos)
    }

    fn size_in_bits(&self) -> usize {
        let codes = match self.codes.shape() {
            CodeShape::Balanced => 0,
            CodeShape::Huffman => self.codes.size_in_bits(),
        };
        codes
            + self
                .nodes
                .iter()
                .map(|nd| nd.seq.size_in_bits() + 32 * nd.children.len())
                .sum::<usize>()
    }
}

impl Persist for WaveletTree {
    fn save(&self, w: &mut Writer) {
        w.usize(self.n);
        w.u32(self.sigma);
        self.codes.save(w);
        w.usize(self.nodes.len());
        for nd in &self.nodes {
            nd.seq.save(w);
            for c in &nd.children {
                match *c {
                    Child::Empty => w.u8(0),
                    Child::Leaf(a) => {
                        w.u8(1);
                        w.u32(a);
                    }
                    Child::Node(k) => {
                        w.u8(2);
                        w.u32(k);
                    }
                }
            }
        }
    }

    fn load(r: &mut Reader) -> Result<Self> {
        let n = r.usize()?;
        let sigma = r.u32()?;
        let codes = Codebook::load(r)?;
        let count = r.usize()?;
        if codes.sigma() != sigma || count == 0 || count > r.remaining() {
            return Err(Error::corrupt("wavelet tree header"));
        }
        let k = codes.arity() as usize;
        let mut nodes = Vec::with_capacity(count);
        for _ in 0..count {
            let seq = DigitSeq::load(r)?;
            let mut children = Vec::with_capacity(k);
            for _ in 0..k {
                children.push(match r.u8()? {
                    0 => Child::Empty,
                    1 => Child::Leaf(r.u32()?),
                    2 => Child::Node(r.u32()?),
                    _ => return Err(Error::corrupt("wavelet tree child tag")),
                });
            }
            nodes.push(Node { seq, children });
        }
        // children must point forward and agree with the node sizes
        for (id, nd) in nodes.iter().enumerate() {
            for (d, c) in nd.children.iter().enumerate() {
                let cnt = nd.seq.rank(d as u8, nd.seq.len());
                let ok = match *c {
                    Child::Empty => cnt == 0,
                    Child::Leaf(a) => a >= 1 && a <= sigma && cnt > 0,
                    Child::Node(t) => {
                        (t as usize) > id
                            && (t as usize) < count
                            && nodes[t as usize].seq.len() == cnt
                    }
                };
                if !ok {
                    return Err(Error::corrupt("wavelet tree structure"));
                }
            }
        }
        if nodes[0].seq.len() != n {
            return Err(Error::corrupt("wavelet tree length"));
        }
        Ok(Self {
            n,
            sigma,
            codes,
            nodes,
        })
    }
}
