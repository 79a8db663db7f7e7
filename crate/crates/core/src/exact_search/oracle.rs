use super::SearchError;
use crate::graph_core::LayeredGraph;
use crate::power_structs::is_power_hamilton_cycle;

/// Largest n the oracle accepts.
pub const ORACLE_CAP: usize = 10;

/// Decides containment of the r-th power of a Hamilton cycle by trying all
/// (n−1)!/2 cyclic orders.
pub fn oracle_contains_power_ham_cycle(g: &LayeredGraph, r: usize) -> Result<bool, SearchError> {
    let n = g.n();
    if n > ORACLE_CAP {
        return Err(SearchError::TooLarge { n, cap: ORACLE_CAP });
    }
    if n < 3 || r == 0 {
        return Err(SearchError::InvalidInput("oracle needs n ≥ 3 and r ≥ 1"));
    }
    // Heap's algorithm over positions 1..n, vertex 0 stays in front.
    let mut order: alloc::vec::Vec<usize> = (0..n).collect();
    let m = n - 1;
    let mut c = alloc::vec![0usize; m];
    let check = |o: &[usize]| o[1] < o[n - 1] && is_power_hamilton_cycle(g, o, r) == Ok(true);
    if check(&order) {
        return Ok(true);
    }
    let mut i = 0;
    while i < m {
        if c[i] < i {
            let j = if i % 2 == 0 { 0 } else { c[i] };
            order.swap(1 + j, 1 + i);
            if check(&order) {
                return Ok(true);
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(false)
}
