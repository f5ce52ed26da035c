use std::sync::Arc;

use serde_json::{json, Value};

use super::MulticatError;
use crate::finset::FinSet;
use crate::report::{CheckOutcome, Report};

/// A finite monoid given by its full operation table. Commutativity and
/// the laws are not enforced on construction; see [`check_comm_monoid`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CommMonoid {
    name: String,
    carrier: Arc<FinSet>,
    table: Vec<usize>,
    unit: usize,
}

impl CommMonoid {
    /// `table[a][b]` is `a·b`; only shape and range are validated.
    pub fn new(
        name: impl Into<String>,
        carrier: Arc<FinSet>,
        table: &[Vec<usize>],
        unit: usize,
    ) -> Result<Self, MulticatError> {
        let name = name.into();
        let n = carrier.len();
        if unit >= n {
            return Err(MulticatError::Invalid(format!("{name}: unit {unit} out of range")));
        }
        if table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err(MulticatError::Invalid(format!("{name}: table is not {n}x{n}")));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (a, row) in table.iter().enumerate() {
            for (b, &c) in row.iter().enumerate() {
                if c >= n {
                    return Err(MulticatError::Invalid(format!(
                        "{name}: {}·{} = {c} out of range",
                        carrier.element(a),
                        carrier.element(b)
                    )));
                }
                flat.push(c);
            }
        }
        Ok(CommMonoid {
            name,
            carrier,
            table: flat,
            unit,
        })
    }

    /// A monoid on `0..n` with elements named by their index.
    pub fn from_fn(
        name: impl Into<String>,
        n: usize,
        op: impl Fn(usize, usize) -> usize,
        unit: usize,
    ) -> Result<Self, MulticatError> {
        let name = name.into();
        let carrier = Arc::new(
            FinSet::new(name.clone(), (0..n).map(|i| i.to_string())).expect("distinct indices"),
        );
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| op(a, b)).collect()).collect();
        Self::new(name, carrier, &table, unit)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn carrier(&self) -> &Arc<FinSet> {
        &self.carrier
    }

    pub fn order(&self) -> usize {
        self.carrier.len()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    /// Left-to-right product of a family; the empty family gives the unit.
    pub fn product(&self, xs: impl IntoIterator<Item = usize>) -> usize {
        xs.into_iter().fold(self.unit, |acc, x| self.op(acc, x))
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order().max(1)).take(self.order()).map(<[usize]>::to_vec).collect()
    }

    pub fn with_entry(mut self, a: usize, b: usize, c: usize) -> Self {
        let n = self.order();
        self.table[a * n + b] = c;
        self
    }

    pub fn rename(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn to_json(&self) -> Value {
        let e = |i: usize| self.carrier.element(i).to_string();
        json!({
            "name": self.name,
            "elements": self.carrier.elements(),
            "unit": e(self.unit),
            "table": (0..self.order())
                .map(|a| (0..self.order()).map(|b| e(self.op(a, b))).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn cyclic(n: usize) -> Self {
        Self::from_fn(format!("Z/{n}"), n, |a, b| (a + b) % n, 0).expect("cyclic group")
    }

    pub fn klein_four() -> Self {
        let carrier = Arc::new(FinSet::new("V4", ["e", "a", "b", "c"]).expect("distinct"));
        let table: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        Self::new("V4", carrier, &table, 0).expect("Klein four")
    }

    pub fn boolean_or() -> Self {
        Self::from_fn("OR", 2, |a, b| a | b, 0).expect("boolean or")
    }

    pub fn boolean_and() -> Self {
        Self::from_fn("AND", 2, |a, b| a & b, 1).expect("boolean and")
    }

    pub fn trivial() -> Self {
        Self::from_fn("1", 1, |_, _| 0, 0).expect("trivial monoid")
    }

    /// `{0..n-1}` under `max`, unit `0`.
    pub fn max_chain(n: usize) -> Self {
        Self::from_fn(format!("max{n}"), n, usize::max, 0).expect("max semilattice")
    }

    /// `{0..n-1}` under addition truncated at `n-1`.
    pub fn truncated_sum(n: usize) -> Self {
        Self::from_fn(format!("trunc{n}"), n, move |a, b| (a + b).min(n - 1), 0).expect("truncated sum")
    }

    /// `Z/n` under multiplication.
    pub fn cyclic_mult(n: usize) -> Self {
        Self::from_fn(format!("Z/{n}x"), n, move |a, b| a * b % n, 1 % n).expect("multiplicative")
    }
}

/// Every commutative monoid shipped with the crate, orders 1 to 4.
pub fn monoid_corpus() -> Vec<CommMonoid> {
    vec![
        CommMonoid::trivial(),
        CommMonoid::cyclic(2),
        CommMonoid::cyclic(3),
        CommMonoid::cyclic(4),
        CommMonoid::klein_four(),
        CommMonoid::boolean_or(),
        CommMonoid::boolean_and(),
        CommMonoid::max_chain(3),
        CommMonoid::truncated_sum(3),
        CommMonoid::cyclic_mult(3),
        CommMonoid::cyclic_mult(4),
    ]
}

/// Unit, commutativity and associativity over the whole table.
pub fn check_comm_monoid(m: &CommMonoid) -> Report {
    let n = m.order();
    let e = |i: usize| m.carrier.element(i).to_string();
    let mut report = Report::new(format!("commutative monoid {}", m.name), 0, 2);
    let mut unit = CheckOutcome::new("unit");
    for a in 0..n {
        let ok = m.op(m.unit, a) == a && m.op(a, m.unit) == a;
        unit.expect(ok, || json!({"a": e(a)}));
    }
    let mut comm = CheckOutcome::new("commutativity");
    for a in 0..n {
        for b in a + 1..n {
            comm.expect(m.op(a, b) == m.op(b, a), || {
                json!({"a": e(a), "b": e(b), "ab": e(m.op(a, b)), "ba": e(m.op(b, a))})
            });
        }
    }
    let mut assoc = CheckOutcome::new("associativity");
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (l, r) = (m.op(m.op(a, b), c), m.op(a, m.op(b, c)));
                assoc.expect(l == r, || json!({"a": e(a), "b": e(b), "c": e(c)}));
            }
        }
    }
    report.push(unit);
    report.push(comm);
    report.push(assoc);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_passes() {
        for m in monoid_corpus() {
            assert!(check_comm_monoid(&m).passed(), "{}", m.name());
        }
    }

    #[test]
    fn z3_table_scan() {
        let z3 = CommMonoid::cyclic(3);
        assert_eq!(z3.table(), vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]);
        assert_eq!(z3.product([2, 2, 2]), 0);
        assert_eq!(z3.product([]), 0);
    }

    #[test]
    fn noncommutative_entry_fails() {
        let m = CommMonoid::boolean_or().with_entry(0, 1, 0);
        let r = check_comm_monoid(&m);
        assert!(!r.check("commutativity").unwrap().passed());
        assert!(!r.passed());
    }

    #[test]
    fn shape_is_validated() {
        let c = Arc::new(FinSet::canonical(2));
        assert!(CommMonoid::new("bad", c.clone(), &[vec![0, 1]], 0).is_err());
        assert!(CommMonoid::new("bad", c, &[vec![0, 1], vec![1, 2]], 0).is_err());
    }
}
