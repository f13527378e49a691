//! Permutations of a fixed finite domain `{0..n-1}`.
//!
//! Permutations act on the right: the image of `x` under `p * q` is `(x^p)^q`,
//! so [`Permutation::compose`] applies `self` first and `other` second.
//! Text I/O uses 1-based disjoint-cycle notation such as `(1,2,3)(4,5)`.

use std::fmt;

use crate::error::PermError;

/// A bijection on `{0..degree-1}`, stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from its image array, checking that it is a bijection.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(PermError::NotBijection);
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Permutation::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Permutation of `degree` points given 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for &x in cycle {
                if x >= degree {
                    return Err(PermError::PointOutOfRange { point: x + 1, degree });
                }
                if used[x] {
                    return Err(PermError::RepeatedPoint { point: x + 1 });
                }
                used[x] = true;
            }
            for (i, &x) in cycle.iter().enumerate() {
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Permutation { images })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.then(other))
    }

    /// Unchecked composition for callers that already share a degree.
    #[inline]
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&x| other.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x] = i;
        }
        Permutation { images }
    }

    /// `p^-1 * self * p`.
    pub fn conjugate_by(&self, p: &Permutation) -> Permutation {
        p.inverse().then(self).then(p)
    }

    /// Points not fixed by the permutation, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i != x)
            .map(|(i, _)| i)
    }

    pub fn smallest_moved_point(&self) -> Option<usize> {
        self.support().next()
    }

    /// Disjoint 0-based cycles of length at least two. Cycles are ordered by
    /// their smallest point and each starts at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    /// 1-based cycle notation, `()` for the identity.
    pub fn format_cycles(&self) -> String {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return "()".to_string();
        }
        let mut s = String::new();
        for c in cycles {
            s.push('(');
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                s.push_str(&(x + 1).to_string());
            }
            s.push(')');
        }
        s
    }

    /// Parses 1-based disjoint cycle notation, e.g. `(1,2,3)(4,5)` or `(1 2 3)`.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Permutation, PermError> {
        let cycles = parse_cycle_list(text, degree)?;
        Permutation::from_cycles(degree, &cycles)
    }
}

fn parse_cycle_list(text: &str, degree: usize) -> Result<Vec<Vec<usize>>, PermError> {
    let bytes = text.as_bytes();
    let err = |pos: usize, msg: &str| PermError::Parse {
        pos,
        msg: msg.to_string(),
    };
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    let mut used = vec![false; degree];
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() || c == b',' {
            i += 1;
            continue;
        }
        if c != b'(' {
            return Err(err(i, "expected '('"));
        }
        i += 1;
        let mut cycle = Vec::new();
        loop {
            while i < bytes.len() && (bytes[i].is_ascii_whitespace() || bytes[i] == b',') {
                i += 1;
            }
            if i >= bytes.len() {
                return Err(err(i, "unterminated cycle"));
            }
            if bytes[i] == b')' {
                i += 1;
                break;
            }
            if !bytes[i].is_ascii_digit() {
                return Err(err(i, "expected a point"));
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let point: usize = text[start..i]
                .parse()
                .map_err(|_| err(start, "point does not fit in usize"))?;
            if point == 0 || point > degree {
                return Err(PermError::PointOutOfRange { point, degree });
            }
            if used[point - 1] {
                return Err(PermError::RepeatedPoint { point });
            }
            used[point - 1] = true;
            cycle.push(point - 1);
        }
        if cycle.len() > 1 {
            cycles.push(cycle);
        }
    }
    Ok(cycles)
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_cycles())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[deg {}]", self.format_cycles(), self.degree())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    #[test]
    fn compose_matches_pointwise_images() {
        // 1 -> 2 -> 1, 2 -> 3 -> 3, 3 -> 1 -> 2
        assert_eq!(p("(1,2,3)", 3).compose(&p("(1,2)", 3)).unwrap(), p("(2,3)", 3));
        let q = p("(1,4)(2,3)", 4);
        assert_eq!(Permutation::identity(4).compose(&q).unwrap(), q);
        assert!(q.compose(&q.inverse()).unwrap().is_identity());
    }

    #[test]
    fn compose_rejects_degree_mismatch() {
        let e = Permutation::identity(3).compose(&Permutation::identity(4));
        assert!(matches!(e, Err(PermError::DegreeMismatch { left: 3, right: 4 })));
    }

    #[test]
    fn inverse_examples() {
        assert!(Permutation::identity(5).inverse().is_identity());
        assert_eq!(p("(1,2)", 2).inverse(), p("(1,2)", 2));
        assert_eq!(p("(1,2,3)", 3).inverse(), p("(1,3,2)", 3));
    }

    #[test]
    fn parse_examples() {
        let q = p("(1,2,3)(4,5)", 6);
        assert_eq!(q.images(), &[1, 2, 0, 4, 3, 5]);
        assert!(p("()", 5).is_identity());
        assert!(p("", 5).is_identity());
        assert_eq!(p("(1 2 3), (4 5)", 6), q);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Permutation::parse_cycles("(1,2)(2,3)", 3),
            Err(PermError::RepeatedPoint { point: 2 })
        ));
        assert!(matches!(
            Permutation::parse_cycles("(1,7)", 6),
            Err(PermError::PointOutOfRange { point: 7, degree: 6 })
        ));
        assert!(matches!(
            Permutation::parse_cycles("(1,2", 3),
            Err(PermError::Parse { .. })
        ));
        assert!(matches!(
            Permutation::parse_cycles("1,2)", 3),
            Err(PermError::Parse { pos: 0, .. })
        ));
        assert!(matches!(
            Permutation::parse_cycles("(0,1)", 3),
            Err(PermError::PointOutOfRange { point: 0, .. })
        ));
    }

    #[test]
    fn format_is_canonical() {
        assert_eq!(p("(5,4)(3,1,2)", 5).format_cycles(), "(1,2,3)(4,5)");
        assert_eq!(Permutation::identity(3).format_cycles(), "()");
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn cycle_text_round_trips(q in (1usize..12).prop_flat_map(arb_perm)) {
            let back = Permutation::parse_cycles(&q.format_cycles(), q.degree()).unwrap();
            prop_assert_eq!(back, q);
        }

        #[test]
        fn group_laws((a, b, c) in (1usize..10).prop_flat_map(|n| (arb_perm(n), arb_perm(n), arb_perm(n)))) {
            prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
            let id = Permutation::identity(a.degree());
            prop_assert_eq!(&a.then(&id), &a);
            prop_assert_eq!(&id.then(&a), &a);
            prop_assert_eq!(&a.inverse().inverse(), &a);
        }
    }
}
