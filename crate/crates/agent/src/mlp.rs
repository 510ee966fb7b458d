//! Multi-layer perceptron with tanh hidden layers and a linear head.
//!
//! Parameters live in one flat vector. Each layer stores its weights input-major
//! (`w[i * out + o]`) followed by its biases, so a sparse input touches only the
//! weight rows of its nonzero entries.

use rand::Rng;
use rand_distr::StandardNormal;

/// Sparse input vector.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseInput {
    pub dim: usize,
    pub idx: Vec<u32>,
    pub val: Vec<f64>,
}

impl SparseInput {
    pub fn from_dense(x: &[f64]) -> Self {
        let mut s = SparseInput {
            dim: x.len(),
            ..Default::default()
        };
        for (i, &v) in x.iter().enumerate() {
            s.push(i, v);
        }
        s
    }

    pub fn push(&mut self, i: usize, v: f64) {
        if v != 0.0 {
            self.idx.push(i as u32);
            self.val.push(v);
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.dim];
        for (&i, &v) in self.idx.iter().zip(&self.val) {
            x[i as usize] = v;
        }
        x
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    sizes: Vec<usize>,
    params: Vec<f64>,
}

/// Post-activation values of every layer from one forward pass.
#[derive(Debug, Clone, Default)]
pub struct ForwardCache {
    acts: Vec<Vec<f64>>,
}

impl ForwardCache {
    pub fn output(&self) -> &[f64] {
        self.acts.last().map(Vec::as_slice).unwrap_or(&[])
    }
}

pub fn num_params(sizes: &[usize]) -> usize {
    sizes.windows(2).map(|w| w[0] * w[1] + w[1]).sum()
}

impl Mlp {
    /// Orthogonal init: each weight matrix has orthonormal rows or columns scaled by
    /// `hidden_gain` (hidden layers) or `head_gain` (last layer); biases start at 0.
    pub fn new(sizes: &[usize], hidden_gain: f64, head_gain: f64, rng: &mut impl Rng) -> Self {
        assert!(sizes.len() >= 2 && sizes.iter().all(|&s| s > 0));
        let mut params = Vec::with_capacity(num_params(sizes));
        let layers = sizes.len() - 1;
        for l in 0..layers {
            let gain = if l + 1 == layers { head_gain } else { hidden_gain };
            params.extend(orthogonal(sizes[l], sizes[l + 1], gain, rng));
            params.extend(std::iter::repeat_n(0.0, sizes[l + 1]));
        }
        Mlp {
            sizes: sizes.to_vec(),
            params,
        }
    }

    pub fn from_params(sizes: &[usize], params: Vec<f64>) -> Option<Self> {
        (sizes.len() >= 2 && num_params(sizes) == params.len()).then(|| Mlp {
            sizes: sizes.to_vec(),
            params,
        })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn input_dim(&self) -> usize {
        self.sizes[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    fn offsets(&self) -> Vec<usize> {
        let mut offs = vec![0];
        for w in self.sizes.windows(2) {
            offs.push(offs.last().unwrap() + w[0] * w[1] + w[1]);
        }
        offs
    }

    pub fn forward(&self, x: &SparseInput, cache: &mut ForwardCache) {
        debug_assert_eq!(x.dim, self.input_dim());
        let layers = self.sizes.len() - 1;
        cache.acts.resize(layers, Vec::new());
        let mut off = 0;
        for l in 0..layers {
            let (inp, out) = (self.sizes[l], self.sizes[l + 1]);
            let w = &self.params[off..off + inp * out];
            let b = &self.params[off + inp * out..off + inp * out + out];
            off += inp * out + out;
            let mut z = b.to_vec();
            let mut add_row = |i: usize, v: f64| {
                for (zo, wo) in z.iter_mut().zip(&w[i * out..(i + 1) * out]) {
                    *zo += v * wo;
                }
            };
            if l == 0 {
                for (&i, &v) in x.idx.iter().zip(&x.val) {
                    add_row(i as usize, v);
                }
            } else {
                for (i, &v) in cache.acts[l - 1].iter().enumerate() {
                    if v != 0.0 {
                        add_row(i, v);
                    }
                }
            }
            if l + 1 < layers {
                z.iter_mut().for_each(|v| *v = v.tanh());
            }
            cache.acts[l] = z;
        }
    }

    pub fn predict(&self, x: &SparseInput) -> Vec<f64> {
        let mut cache = ForwardCache::default();
        self.forward(x, &mut cache);
        cache.acts.pop().unwrap()
    }

    /// Accumulates `∂(dout · output)/∂params` into `grad`, using the cache from the
    /// forward pass on `x`.
    pub fn backward(&self, x: &SparseInput, cache: &ForwardCache, dout: &[f64], grad: &mut [f64]) {
        debug_assert_eq!(grad.len(), self.params.len());
        let layers = self.sizes.len() - 1;
        let offs = self.offsets();
        let mut dz = dout.to_vec();
        for l in (0..layers).rev() {
            let (inp, out) = (self.sizes[l], self.sizes[l + 1]);
            let off = offs[l];
            let (gw, rest) = grad[off..offs[l + 1]].split_at_mut(inp * out);
            for (g, d) in rest.iter_mut().zip(&dz) {
                *g += d;
            }
            let mut add_outer = |i: usize, v: f64| {
                for (g, d) in gw[i * out..(i + 1) * out].iter_mut().zip(&dz) {
                    *g += v * d;
                }
            };
            if l == 0 {
                for (&i, &v) in x.idx.iter().zip(&x.val) {
                    add_outer(i as usize, v);
                }
                break;
            }
            let a = &cache.acts[l - 1];
            for (i, &v) in a.iter().enumerate() {
                if v != 0.0 {
                    add_outer(i, v);
                }
            }
            let w = &self.params[off..off + inp * out];
            dz = (0..inp)
                .map(|i| {
                    let da: f64 = w[i * out..(i + 1) * out]
                        .iter()
                        .zip(&dz)
                        .map(|(w, d)| w * d)
                        .sum();
                    da * (1.0 - a[i] * a[i])
                })
                .collect();
        }
    }
}

/// `inp × out` matrix (input-major) with orthonormal rows or columns, times `gain`.
fn orthogonal(inp: usize, out: usize, gain: f64, rng: &mut impl Rng) -> Vec<f64> {
    let (long, short) = (inp.max(out), inp.min(out));
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(short);
    while basis.len() < short {
        let mut v: Vec<f64> = (0..long).map(|_| rng.sample(StandardNormal)).collect();
        // Modified Gram-Schmidt, applied twice for numerical stability.
        for _ in 0..2 {
            for u in &basis {
                let dot: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(u).for_each(|(a, b)| *a -= dot * b);
            }
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-10 {
            v.iter_mut().for_each(|a| *a /= norm);
            basis.push(v);
        }
    }
    let mut w = vec![0.0; inp * out];
    for (k, u) in basis.iter().enumerate() {
        for (t, &val) in u.iter().enumerate() {
            // The short side indexes basis vectors, the long side their entries.
            let (i, o) = if inp >= out { (t, k) } else { (k, t) };
            w[i * out + o] = gain * val;
        }
    }
    w
}
