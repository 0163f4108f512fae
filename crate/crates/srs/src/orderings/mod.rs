//! Concrete total orders, registered by name.
//!
//! Names accepted by the lookup helpers (and the CLI configs): `"natural"`
//! on integers, `"lex"` / `"parity"` / `"ones"` on bit strings,
//! `"partition"` on set partitions, and `"ising-epm"` on spin lattices.
//! The `"optimal"` order is built from a pair of pmf tables with
//! [`optimal_order`] and therefore has no nullary registry entry.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use crate::domain::{BitString, Partition, SpinLattice};
use crate::error::{Result, SrsError};
use crate::order::TotalOrder;

fn check_bit_lengths(a: &BitString, b: &BitString) -> Result<()> {
    if a.len() != b.len() {
        return Err(SrsError::mismatch(format!(
            "cannot compare bit strings of lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// Dictionary order on equal-length bit strings, 0 < 1.
#[derive(Debug, Clone, Copy, Default)]
pub struct LexOrder;

impl TotalOrder<BitString> for LexOrder {
    fn name(&self) -> &str {
        "lex"
    }

    fn compare(&self, a: &BitString, b: &BitString) -> Result<Ordering> {
        check_bit_lengths(a, b)?;
        // x_1 is the most significant packed bit, so word order is lex order.
        Ok(a.word().cmp(&b.word()))
    }
}

/// Parity of ones (even < odd), ties broken lexicographically.
#[derive(Debug, Clone, Copy, Default)]
pub struct ParityOrder;

impl TotalOrder<BitString> for ParityOrder {
    fn name(&self) -> &str {
        "parity"
    }

    fn compare(&self, a: &BitString, b: &BitString) -> Result<Ordering> {
        check_bit_lengths(a, b)?;
        match (a.count_ones() % 2).cmp(&(b.count_ones() % 2)) {
            Ordering::Equal => LexOrder.compare(a, b),
            other => Ok(other),
        }
    }
}

/// Number of ones ascending, ties broken lexicographically.
#[derive(Debug, Clone, Copy, Default)]
pub struct OnesOrder;

impl TotalOrder<BitString> for OnesOrder {
    fn name(&self) -> &str {
        "ones"
    }

    fn compare(&self, a: &BitString, b: &BitString) -> Result<Ordering> {
        check_bit_lengths(a, b)?;
        match a.count_ones().cmp(&b.count_ones()) {
            Ordering::Equal => LexOrder.compare(a, b),
            other => Ok(other),
        }
    }
}

/// Total order on set partitions: fewer blocks first; among equal block
/// counts, walk blocks sorted by least element comparing sizes then sorted
/// elements.
#[derive(Debug, Clone, Copy, Default)]
pub struct PartitionOrder;

impl TotalOrder<Partition> for PartitionOrder {
    fn name(&self) -> &str {
        "partition"
    }

    fn compare(&self, a: &Partition, b: &Partition) -> Result<Ordering> {
        if a.ground_size() != b.ground_size() {
            return Err(SrsError::mismatch(format!(
                "cannot compare partitions of ground sets {} and {}",
                a.ground_size(),
                b.ground_size()
            )));
        }
        match a.block_count().cmp(&b.block_count()) {
            Ordering::Equal => {}
            other => return Ok(other),
        }
        // Partition stores blocks sorted by least element with elements
        // ascending, which is exactly the traversal the comparison needs.
        for (block_a, block_b) in a.blocks().iter().zip(b.blocks()) {
            match block_a.len().cmp(&block_b.len()) {
                Ordering::Equal => {}
                other => return Ok(other),
            }
            for (x, y) in block_a.iter().zip(block_b) {
                match x.cmp(y) {
                    Ordering::Equal => {}
                    other => return Ok(other),
                }
            }
        }
        Ok(Ordering::Equal)
    }
}

/// Row-major comparison of raw spins (-1 < +1); the deterministic tie-break
/// under the probe-composite lattice orders.
#[derive(Debug, Clone, Copy, Default)]
pub struct SpinLexOrder;

impl TotalOrder<SpinLattice> for SpinLexOrder {
    fn name(&self) -> &str {
        "spin-lex"
    }

    fn compare(&self, a: &SpinLattice, b: &SpinLattice) -> Result<Ordering> {
        if a.side() != b.side() {
            return Err(SrsError::mismatch(format!(
                "cannot compare lattices of sides {} and {}",
                a.side(),
                b.side()
            )));
        }
        Ok(a.spins().cmp(b.spins()))
    }
}

/// A real-valued summary used to build composite orders.
pub type Probe<T> = Box<dyn Fn(&T) -> f64 + Send + Sync>;

/// Lexicographic comparison of probe vectors with a total tie-break.
///
/// Elements are compared probe by probe; when every probe agrees the final
/// tie-break order decides, which keeps the composite a strict total order.
pub struct ProbeOrder<T> {
    name: String,
    probes: Vec<Probe<T>>,
    tiebreak: Arc<dyn TotalOrder<T>>,
}

/// Build a probe-composite order. Requires at least one probe.
pub fn probe_composite<T>(
    name: impl Into<String>,
    probes: Vec<Probe<T>>,
    tiebreak: Arc<dyn TotalOrder<T>>,
) -> Result<ProbeOrder<T>> {
    if probes.is_empty() {
        return Err(SrsError::invalid("probe-composite order needs >= 1 probe"));
    }
    Ok(ProbeOrder {
        name: name.into(),
        probes,
        tiebreak,
    })
}

impl<T: Send + Sync> TotalOrder<T> for ProbeOrder<T> {
    fn name(&self) -> &str {
        &self.name
    }

    fn compare(&self, a: &T, b: &T) -> Result<Ordering> {
        // Probes must agree with the tie-break about structural validity,
        // so run the tie-break first; it carries the domain checks.
        let fallthrough = self.tiebreak.compare(a, b)?;
        for probe in &self.probes {
            match probe(a).total_cmp(&probe(b)) {
                Ordering::Equal => {}
                other => return Ok(other),
            }
        }
        Ok(fallthrough)
    }
}

/// The lattice ordering used for Ising diagnostics: interaction energy,
/// then magnetization, then +1-component count, ties broken by raw spins.
pub fn ising_epm_order() -> ProbeOrder<SpinLattice> {
    probe_composite(
        "ising-epm",
        vec![
            Box::new(|l: &SpinLattice| l.interaction_sum() as f64),
            Box::new(|l: &SpinLattice| l.magnetization() as f64),
            Box::new(|l: &SpinLattice| l.plus_component_count() as f64),
        ],
        Arc::new(SpinLexOrder),
    )
    .expect("probes are non-empty")
}

/// The ordering that maximizes m = 1 detection for a known pair (p, q):
/// elements sorted by h(x) = q(x) - p(x) descending, ties by domain index.
pub struct OptimalOrder<T> {
    position: HashMap<T, u32>,
}

/// Build [`OptimalOrder`] from aligned pmf tables over `domain`.
///
/// Both tables must sum to 1 ± 1e-9 over the shared indexed domain.
pub fn optimal_order<T: Eq + Hash + Clone>(
    domain: &[T],
    p: &[f64],
    q: &[f64],
) -> Result<OptimalOrder<T>> {
    if domain.is_empty() || domain.len() != p.len() || p.len() != q.len() {
        return Err(SrsError::mismatch(format!(
            "domain/p/q lengths disagree: {}/{}/{}",
            domain.len(),
            p.len(),
            q.len()
        )));
    }
    for (label, table) in [("p", p), ("q", q)] {
        if table.iter().any(|&v| v < 0.0 || !v.is_finite()) {
            return Err(SrsError::invalid(format!("{label} has negative entries")));
        }
        let total: f64 = table.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(SrsError::invalid(format!(
                "{label} sums to {total}, expected 1 +/- 1e-9"
            )));
        }
    }
    let mut indices: Vec<usize> = (0..domain.len()).collect();
    indices.sort_by(|&i, &j| {
        let hi = q[i] - p[i];
        let hj = q[j] - p[j];
        hj.total_cmp(&hi).then(i.cmp(&j))
    });
    let mut position = HashMap::with_capacity(domain.len());
    for (pos, &i) in indices.iter().enumerate() {
        if position.insert(domain[i].clone(), pos as u32).is_some() {
            return Err(SrsError::invalid(
                "domain passed to optimal_order contains duplicates",
            ));
        }
    }
    Ok(OptimalOrder { position })
}

impl<T: Eq + Hash + Send + Sync> TotalOrder<T> for OptimalOrder<T> {
    fn name(&self) -> &str {
        "optimal"
    }

    fn compare(&self, a: &T, b: &T) -> Result<Ordering> {
        let pa = self
            .position
            .get(a)
            .ok_or_else(|| SrsError::mismatch("element not in the optimal-order domain"))?;
        let pb = self
            .position
            .get(b)
            .ok_or_else(|| SrsError::mismatch("element not in the optimal-order domain"))?;
        Ok(pa.cmp(pb))
    }
}

/// Look up a bit-string order by registry name.
pub fn bitstring_order(name: &str) -> Option<Arc<dyn TotalOrder<BitString>>> {
    match name {
        "lex" => Some(Arc::new(LexOrder)),
        "parity" => Some(Arc::new(ParityOrder)),
        "ones" => Some(Arc::new(OnesOrder)),
        _ => None,
    }
}

/// Look up a partition order by registry name.
pub fn partition_order(name: &str) -> Option<Arc<dyn TotalOrder<Partition>>> {
    match name {
        "partition" => Some(Arc::new(PartitionOrder)),
        _ => None,
    }
}

/// Look up a lattice order by registry name.
pub fn lattice_order(name: &str) -> Option<Arc<dyn TotalOrder<SpinLattice>>> {
    match name {
        "ising-epm" => Some(Arc::new(ising_epm_order())),
        "spin-lex" => Some(Arc::new(SpinLexOrder)),
        _ => None,
    }
}

/// Look up an integer order by registry name.
pub fn integer_order(name: &str) -> Option<Arc<dyn TotalOrder<i64>>> {
    match name {
        "natural" => Some(Arc::new(crate::order::NaturalOrder)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> BitString {
        let v: Vec<u8> = s.bytes().map(|b| b - b'0').collect();
        BitString::from_bits(&v).unwrap()
    }

    #[test]
    fn lex_examples() {
        assert_eq!(
            LexOrder.compare(&bits("0110"), &bits("0111")).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            LexOrder.compare(&bits("1000"), &bits("0111")).unwrap(),
            Ordering::Greater
        );
        assert_eq!(
            LexOrder.compare(&bits("1010"), &bits("1010")).unwrap(),
            Ordering::Equal
        );
        assert!(LexOrder.compare(&bits("101"), &bits("1010")).is_err());
    }

    #[test]
    fn parity_and_ones_examples() {
        // 0011 has even parity, 0001 odd; even < odd.
        assert_eq!(
            ParityOrder.compare(&bits("0011"), &bits("0001")).unwrap(),
            Ordering::Less
        );
        assert_eq!(
            OnesOrder.compare(&bits("0011"), &bits("0111")).unwrap(),
            Ordering::Less
        );
        // equal popcount falls through to lex
        assert_eq!(
            OnesOrder.compare(&bits("0110"), &bits("0101")).unwrap(),
            Ordering::Greater
        );
    }

    #[test]
    fn parity_and_ones_reduce_to_lex_on_equal_probe_classes() {
        for a in 0..64u64 {
            for b in 0..64u64 {
                let (x, y) = (
                    BitString::new(6, a).unwrap(),
                    BitString::new(6, b).unwrap(),
                );
                let lex = LexOrder.compare(&x, &y).unwrap();
                if x.count_ones() % 2 == y.count_ones() % 2 {
                    assert_eq!(ParityOrder.compare(&x, &y).unwrap(), lex);
                }
                if x.count_ones() == y.count_ones() {
                    assert_eq!(OnesOrder.compare(&x, &y).unwrap(), lex);
                }
            }
        }
    }

    #[test]
    fn partition_order_examples() {
        let p1 = Partition::new(3, vec![vec![1, 2, 3]]).unwrap();
        let p2 = Partition::new(3, vec![vec![1], vec![2, 3]]).unwrap();
        // fewer blocks compares less
        assert_eq!(PartitionOrder.compare(&p1, &p2).unwrap(), Ordering::Less);
        assert_eq!(PartitionOrder.compare(&p2, &p2).unwrap(), Ordering::Equal);

        // equal block count: first block sizes 1 vs 2 decide
        let a = Partition::new(3, vec![vec![1], vec![2, 3]]).unwrap();
        let b = Partition::new(3, vec![vec![1, 2], vec![3]]).unwrap();
        assert_eq!(PartitionOrder.compare(&a, &b).unwrap(), Ordering::Less);

        let p4 = Partition::new(4, vec![vec![1, 2, 3, 4]]).unwrap();
        assert!(PartitionOrder.compare(&p1, &p4).is_err());
    }

    #[test]
    fn probe_composite_lattice_example() {
        let order = ising_epm_order();
        let up = SpinLattice::new(2, vec![1, 1, 1, 1]).unwrap();
        let down = SpinLattice::new(2, vec![-1, -1, -1, -1]).unwrap();
        // energies tie at 4; magnetization +4 vs -4 decides
        assert_eq!(order.compare(&up, &down).unwrap(), Ordering::Greater);
        assert_eq!(order.compare(&up, &up).unwrap(), Ordering::Equal);
    }

    #[test]
    fn probe_composite_falls_through_to_tiebreak() {
        // A constant probe decides nothing; the spin-lex tiebreak must.
        let order = probe_composite::<SpinLattice>(
            "const-probe",
            vec![Box::new(|_| 1.0)],
            Arc::new(SpinLexOrder),
        )
        .unwrap();
        let a = SpinLattice::new(2, vec![-1, 1, 1, 1]).unwrap();
        let b = SpinLattice::new(2, vec![1, -1, -1, -1]).unwrap();
        assert_eq!(
            order.compare(&a, &b).unwrap(),
            SpinLexOrder.compare(&a, &b).unwrap()
        );
    }

    #[test]
    fn optimal_order_example() {
        // h = (-1/2, -1/2, +1/2, +1/2): order 2 < 3 < 0 < 1.
        let domain: Vec<i64> = vec![0, 1, 2, 3];
        let p = [0.5, 0.5, 0.0, 0.0];
        let q = [0.0, 0.0, 0.5, 0.5];
        let o = optimal_order(&domain, &p, &q).unwrap();
        assert_eq!(o.compare(&2, &3).unwrap(), Ordering::Less);
        assert_eq!(o.compare(&3, &0).unwrap(), Ordering::Less);
        assert_eq!(o.compare(&0, &1).unwrap(), Ordering::Less);
        assert!(o.compare(&0, &7).is_err());
    }

    #[test]
    fn optimal_order_with_equal_tables_is_index_order() {
        let domain: Vec<i64> = (0..6).collect();
        let p = [0.1, 0.2, 0.3, 0.1, 0.2, 0.1];
        let o = optimal_order(&domain, &p, &p).unwrap();
        for i in 0..6i64 {
            for j in 0..6i64 {
                assert_eq!(o.compare(&i, &j).unwrap(), i.cmp(&j));
            }
        }
    }

    #[test]
    fn optimal_order_separates_surplus_from_deficit() {
        // x before y whenever q(x) > p(x) and q(y) <= p(y).
        let mut rng = crate::rng::RandomSource::new(40);
        for _ in 0..200 {
            let (p, q) = crate::test_support::random_pmf_pair(8, &mut rng);
            let domain: Vec<i64> = (0..8).collect();
            let o = optimal_order(&domain, &p, &q).unwrap();
            for x in 0..8usize {
                for y in 0..8usize {
                    if q[x] > p[x] && q[y] <= p[y] {
                        assert_eq!(
                            o.compare(&(x as i64), &(y as i64)).unwrap(),
                            Ordering::Less
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn registry_lookup() {
        assert!(bitstring_order("lex").is_some());
        assert!(bitstring_order("parity").is_some());
        assert!(bitstring_order("ones").is_some());
        assert!(bitstring_order("nope").is_none());
        assert!(partition_order("partition").is_some());
        assert!(lattice_order("ising-epm").is_some());
        assert!(integer_order("natural").is_some());
    }
}
