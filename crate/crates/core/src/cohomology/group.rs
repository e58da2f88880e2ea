use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest group order [`FiniteGroup`] will build.
pub const MAX_GROUP_ORDER: usize = 48;

/// Presentations used for Galois groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum GroupKind {
    /// `<s | s^m>`.
    Cyclic(u32),
    /// `<t, c | t^m, c^2, ctct>`, order `2m`.
    Dihedral(u32),
    /// `<x, y | x^(2n), y^2 x^(-n), y x y^-1 x>`, order `4n`.
    Dicyclic(u32),
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Cyclic(m) => write!(f, "C{m}"),
            GroupKind::Dihedral(m) => write!(f, "D{}", 2 * m),
            GroupKind::Dicyclic(n) => write!(f, "Dic{}", 4 * n),
        }
    }
}

/// A word letter: generator index and exponent.
pub type Letter = (usize, i64);

/// A finite group from a presentation, with elements listed in normal form
/// and a full multiplication table. Element 0 is the identity.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    kind: GroupKind,
    generator_names: Vec<&'static str>,
    relations: Vec<Vec<Letter>>,
    words: Vec<String>,
    generators: Vec<usize>,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

fn power_word(name: &str, e: u32) -> String {
    match e {
        0 => String::new(),
        1 => name.to_string(),
        _ => format!("{name}^{e}"),
    }
}

impl FiniteGroup {
    pub fn new(kind: GroupKind) -> Result<Self> {
        let (m, order) = match kind {
            GroupKind::Cyclic(m) => (m, m as usize),
            GroupKind::Dihedral(m) => (m, 2 * m as usize),
            GroupKind::Dicyclic(n) => (n, 4 * n as usize),
        };
        let min = if matches!(kind, GroupKind::Dicyclic(_)) { 2 } else { 1 };
        if !(min..=12).contains(&m) || order > MAX_GROUP_ORDER {
            return Err(Error::domain(format!("group parameter {m} out of range for {kind:?}")));
        }
        let mu = m as usize;
        // normal forms (e, i) <-> index e * base + i
        let (names, relations, base, words, mul): (_, _, usize, Vec<String>, Box<dyn Fn(usize, usize) -> usize>) =
            match kind {
                GroupKind::Cyclic(_) => (
                    vec!["s"],
                    vec![vec![(0, m as i64)]],
                    mu,
                    (0..m).map(|i| power_word("s", i)).collect(),
                    Box::new(move |a, b| (a + b) % mu),
                ),
                GroupKind::Dihedral(_) => (
                    vec!["t", "c"],
                    vec![vec![(0, m as i64)], vec![(1, 2)], vec![(1, 1), (0, 1), (1, 1), (0, 1)]],
                    mu,
                    (0..2)
                        .flat_map(|e| (0..m).map(move |i| (e, i)))
                        .map(|(e, i)| format!("{}{}", power_word("c", e), power_word("t", i)))
                        .collect(),
                    // (c^e t^i)(c^f t^j) = c^(e+f) t^((-1)^f i + j)
                    Box::new(move |a, b| {
                        let (e, i) = (a / mu, a % mu);
                        let (f, j) = (b / mu, b % mu);
                        let i = if f == 1 { (mu - i) % mu } else { i };
                        ((e + f) % 2) * mu + (i + j) % mu
                    }),
                ),
                GroupKind::Dicyclic(_) => {
                    let two_n = 2 * mu;
                    (
                        vec!["x", "y"],
                        vec![
                            vec![(0, 2 * m as i64)],
                            vec![(1, 2), (0, -(m as i64))],
                            vec![(1, 1), (0, 1), (1, -1), (0, 1)],
                        ],
                        two_n,
                        (0..2)
                            .flat_map(|e| (0..2 * m).map(move |i| (e, i)))
                            .map(|(e, i)| format!("{}{}", power_word("x", i), power_word("y", e)))
                            .collect(),
                        // (x^i y^e)(x^j y^f) = x^(i + (-1)^e j) y^(e+f), with y^2 = x^n
                        Box::new(move |a, b| {
                            let (e, i) = (a / two_n, a % two_n);
                            let (f, j) = (b / two_n, b % two_n);
                            let j = if e == 1 { (two_n - j) % two_n } else { j };
                            let mut x = i + j;
                            if e + f == 2 {
                                x += mu;
                            }
                            ((e + f) % 2) * two_n + x % two_n
                        }),
                    )
                }
            };
        let words: Vec<String> = words.into_iter().map(|w| if w.is_empty() { "1".to_string() } else { w }).collect();
        assert_eq!(words.len(), order);
        let table: Vec<Vec<usize>> = (0..order).map(|a| (0..order).map(|b| mul(a, b)).collect()).collect();
        let generators = match kind {
            GroupKind::Cyclic(_) => vec![1 % order],
            GroupKind::Dihedral(_) => vec![1 % mu, mu],
            GroupKind::Dicyclic(_) => vec![1, base],
        };
        let inverse = (0..order)
            .map(|a| (0..order).find(|&b| table[a][b] == 0))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::internal("multiplication table has no inverses"))?;
        let group = FiniteGroup { kind, generator_names: names, relations, words, generators, table, inverse };
        group.verify()?;
        Ok(group)
    }

    fn verify(&self) -> Result<()> {
        let n = self.order();
        for a in 0..n {
            if self.table[0][a] != a || self.table[a][0] != a {
                return Err(Error::internal("element 0 is not the identity"));
            }
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::internal("multiplication table is not associative"));
                    }
                }
            }
        }
        for rel in &self.relations {
            if self.evaluate(rel) != 0 {
                return Err(Error::internal(format!("relation {rel:?} does not hold")));
            }
        }
        // generators generate
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(g) = stack.pop() {
            for &s in &self.generators {
                let h = self.mul(g, s);
                if !seen[h] {
                    seen[h] = true;
                    stack.push(h);
                }
            }
        }
        if seen.contains(&false) {
            return Err(Error::internal("generators do not generate"));
        }
        Ok(())
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.words.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn pow(&self, a: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(a) } else { a };
        (0..e.unsigned_abs()).fold(0, |acc, _| self.mul(acc, base))
    }

    /// Element indices of the generators, in presentation order.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_names(&self) -> &[&'static str] {
        &self.generator_names
    }

    pub fn relations(&self) -> &[Vec<Letter>] {
        &self.relations
    }

    pub fn evaluate(&self, word: &[Letter]) -> usize {
        word.iter().fold(0, |acc, &(g, e)| self.mul(acc, self.pow(self.generators[g], e)))
    }

    /// Normal-form word of each element.
    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn word(&self, a: usize) -> &str {
        &self.words[a]
    }

    pub fn element_order(&self, a: usize) -> usize {
        (1..=self.order()).find(|&k| self.pow(a, k as i64) == 0).expect("finite group")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let c3 = FiniteGroup::new(GroupKind::Cyclic(3)).unwrap();
        assert_eq!(c3.words(), ["1", "s", "s^2"]);
        let d8 = FiniteGroup::new(GroupKind::Dihedral(4)).unwrap();
        assert_eq!(d8.order(), 8);
        assert_eq!(d8.words()[4..], ["c", "ct", "ct^2", "ct^3"]);
        let c1 = FiniteGroup::new(GroupKind::Cyclic(1)).unwrap();
        assert_eq!(c1.order(), 1);
        assert!(FiniteGroup::new(GroupKind::Cyclic(13)).is_err());
        assert!(FiniteGroup::new(GroupKind::Cyclic(0)).is_err());
    }

    #[test]
    fn dihedral_relations() {
        for m in 1..=12 {
            let g = FiniteGroup::new(GroupKind::Dihedral(m)).unwrap();
            let [t, c] = [g.generators()[0], g.generators()[1]];
            // c t c^-1 = t^-1
            assert_eq!(g.mul(g.mul(c, t), g.inv(c)), g.inv(t));
            assert_eq!(g.order(), 2 * m as usize);
        }
    }

    #[test]
    fn dicyclic_has_unique_involution() {
        for n in 2..=12 {
            let g = FiniteGroup::new(GroupKind::Dicyclic(n)).unwrap();
            let involutions = (0..g.order()).filter(|&a| g.element_order(a) == 2).count();
            assert_eq!(involutions, 1, "Dic{}", 4 * n);
        }
    }
}
