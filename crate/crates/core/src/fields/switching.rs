use crate::space::KleinSpace;

/// Values of the switching pair for one toroidal coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Switching {
    pub t1: f64,
    pub t2: f64,
    pub s: f64,
}

/// `S_i(y) = Π_k cos(π y_k)^{B_ik}`, `T1 = (1 + S)/2`, `T2 = (1 − S)/2`.
///
/// `T1` and `T2` are non-negative, sum to one, equal `(1, 0)` at `y = 0` and
/// swap whenever some `y_k` with `B_ik = 1` moves by one.
///
/// # Panics
/// If the space is not in diagonal mode or `i ≥ k1`.
pub fn switching(space: &KleinSpace, i: usize, y: &[f64]) -> Switching {
    let b = space
        .binary_matrix()
        .expect("switching functions need a diagonal-mode space");
    assert_eq!(y.len(), space.k2());
    let s: f64 = b
        .row(i)
        .ones()
        .map(|k| (std::f64::consts::PI * y[k]).cos())
        .product();
    Switching {
        t1: 0.5 * (1.0 + s),
        t2: 0.5 * (1.0 - s),
        s,
    }
}
