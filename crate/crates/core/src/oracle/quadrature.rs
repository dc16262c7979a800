use crate::scalar::{compensated_sum, Real};
use crate::su2::GroupElement;

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on
/// `P_n`. Nodes are returned in increasing order.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1);
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = T::from_usize_lossy(n);
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x =
            (T::PI() * (T::from_usize_lossy(i + 1) - T::lit(0.25)) / (nf + T::lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            // P_n(x) and P_n'(x) by the three-term recurrence
            let (mut p0, mut p1) = (T::one(), x);
            for k in 2..=n {
                let kf = T::from_usize_lossy(k);
                let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn_1 = if n == 1 { T::one() } else { p0 };
            dp = nf * (x * pn - pn_1) / (x * x - T::one());
            let dx = pn / dp;
            x -= dx;
            if dx.abs() <= T::epsilon() * T::lit(4.0) {
                break;
            }
        }
        let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    (nodes, weights)
}

/// Product quadrature for the normalized Haar measure on SU(2).
///
/// `K = 2L+2` uniform points in `α ∈ [0, 2π)`, `K` uniform points in
/// `γ ∈ [0, 4π)`, and `L+1` Gauss-Legendre points in `cos β`. The full
/// `γ` period keeps half-integer representations exact.
#[derive(Debug, Clone)]
pub struct QuadratureGrid<T> {
    level: usize,
    nodes: Vec<(GroupElement<T>, T)>,
}

impl<T: Real> QuadratureGrid<T> {
    pub fn new(level: usize) -> Self {
        let level = level.max(1);
        let k = 2 * level + 2;
        let (xs, ws) = gauss_legendre::<T>(level + 1);
        let kf = T::from_usize_lossy(k);
        let norm = T::lit(2.0) * kf * kf;
        let mut nodes = Vec::with_capacity(k * k * (level + 1));
        for (x, w) in xs.iter().zip(&ws) {
            let beta = x.max(-T::one()).min(T::one()).acos();
            let weight = *w / norm;
            for ia in 0..k {
                let alpha = T::TAU() * T::from_usize_lossy(ia) / kf;
                for ig in 0..k {
                    let gamma = T::lit(2.0) * T::TAU() * T::from_usize_lossy(ig) / kf;
                    nodes.push((
                        GroupElement::from_euler_unchecked(alpha, beta, gamma),
                        weight,
                    ));
                }
            }
        }
        QuadratureGrid { level, nodes }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn nodes(&self) -> &[(GroupElement<T>, T)] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> T {
        compensated_sum(self.nodes.iter().map(|(_, w)| *w))
    }
}

/// `quadrature_grid(L)`
pub fn quadrature_grid<T: Real>(level: usize) -> QuadratureGrid<T> {
    QuadratureGrid::new(level)
}
