use crate::error::{Error, Result};
use crate::Real;

/// Uniform nodes `x₁ + n·h` below 1, closed by the node 1.
///
/// For dyadic `h` and a common `x₁` the node sets nest.
pub fn uniform<T: Real>(x1: T, h: T) -> Result<Vec<T>> {
    if !(h > T::zero()) || !(x1 < T::one()) {
        return Err(Error::Config(format!("bad grid: x1 = {x1}, h = {h}")));
    }
    let one = T::one();
    let mut nodes = vec![x1];
    let mut n = 1usize;
    loop {
        let x = x1 + T::from_usize(n).unwrap() * h;
        if x >= one - h * T::lit(1e-9) {
            break;
        }
        nodes.push(x);
        n += 1;
    }
    nodes.push(one);
    Ok(nodes)
}

pub fn check_sorted<T: Real>(nodes: &[T]) -> Result<()> {
    if nodes.len() < 2 || nodes.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::Config(
            "grid nodes must be sorted with at least two entries".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn millesimal_grid_has_901_nodes() {
        let g = uniform(0.1f64, 1e-3).unwrap();
        assert_eq!(g.len(), 901);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert!((g[899] - 0.999).abs() < 1e-12);
    }

    #[test]
    fn dyadic_grids_nest() {
        let coarse = uniform(0.1, 0.125).unwrap();
        let fine = uniform(0.1, 0.0625).unwrap();
        for x in &coarse {
            assert!(fine.iter().any(|y| y == x));
        }
    }
}
