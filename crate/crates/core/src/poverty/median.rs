use crate::error::{Error, Result};
use crate::money::Weight;

/// Lower weighted median: the smallest value whose cumulative weight
/// (over all items not above it) reaches half of the total weight.
pub fn weighted_median<T: Ord + Copy>(items: &[(T, Weight)]) -> Result<T> {
    if items.is_empty() {
        return Err(Error::InvalidInput("weighted median of an empty set".into()));
    }
    let mut sorted: Vec<(T, Weight)> = items.to_vec();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    let total: u128 = sorted.iter().map(|(_, w)| w.hundredths() as u128).sum();
    let mut cumulative = 0u128;
    for (value, weight) in &sorted {
        cumulative += weight.hundredths() as u128;
        if 2 * cumulative >= total {
            return Ok(*value);
        }
    }
    unreachable!("cumulative weight reaches the total")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(x: u64) -> Weight {
        Weight::from_hundredths(x * 100).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(weighted_median(&[(1, w(1)), (2, w(1)), (3, w(1))]).unwrap(), 2);
        // Cumulative weight 3 of 4 is reached at the first value.
        assert_eq!(weighted_median(&[(10, w(1)), (1, w(3))]).unwrap(), 1);
        assert_eq!(weighted_median(&[(7, w(5))]).unwrap(), 7);
        assert_eq!(weighted_median(&[(1, w(1)), (2, w(1))]).unwrap(), 1);
        assert!(weighted_median::<i32>(&[]).is_err());
    }

    #[test]
    fn order_independent() {
        let a = [(5, w(2)), (1, w(1)), (9, w(4)), (3, w(1))];
        let mut b = a;
        b.reverse();
        assert_eq!(weighted_median(&a).unwrap(), weighted_median(&b).unwrap());
        assert_eq!(weighted_median(&a).unwrap(), 5);
    }
}
