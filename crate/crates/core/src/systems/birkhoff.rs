use num_traits::Zero;

use super::EventuallyPeriodic;
use crate::numeric::Rational;

/// Exact Birkhoff sums `B_n = Σ_{k<n} g_k` of an eventually periodic sequence.
///
/// Past the head, `B_{m + jq + r} = B_m + C_r + j·S` where `C_r` are the
/// partial sums over the cycle and `S` the lap sum, so extrema over any range
/// of `n` are found in `O(m + q)` operations.
#[derive(Clone, Debug)]
pub struct BirkhoffProfile {
    head: Vec<Rational>,
    cycle: Vec<Rational>,
    lap: Rational,
}

/// An extreme Birkhoff sum and the first `n` attaining it.
#[derive(Clone, Debug, PartialEq)]
pub struct Extremum {
    pub value: Rational,
    pub n: u64,
}

impl BirkhoffProfile {
    pub fn new(values: &EventuallyPeriodic<Rational>) -> Self {
        let mut head = Vec::with_capacity(values.head.len() + 1);
        let mut acc = Rational::zero();
        head.push(acc.clone());
        for v in &values.head {
            acc += v;
            head.push(acc.clone());
        }
        let mut cycle = Vec::with_capacity(values.cycle.len());
        let mut acc = Rational::zero();
        for v in &values.cycle {
            cycle.push(acc.clone());
            acc += v;
        }
        Self { head, cycle, lap: acc }
    }

    pub fn head_len(&self) -> u64 {
        self.head.len() as u64 - 1
    }

    pub fn period(&self) -> u64 {
        self.cycle.len() as u64
    }

    pub fn lap_sum(&self) -> &Rational {
        &self.lap
    }

    /// `B_n`.
    pub fn sum(&self, n: u64) -> Rational {
        let m = self.head_len();
        if n <= m {
            return self.head[n as usize].clone();
        }
        let q = self.period();
        let (j, r) = ((n - m) / q, (n - m) % q);
        &self.head[m as usize] + &self.cycle[r as usize] + &self.lap * Rational::from_integer(j.into())
    }

    /// Minimum of `B_n` over `1 ≤ n ≤ n_max`.
    pub fn min_over(&self, n_max: u64) -> Option<Extremum> {
        self.extremum(n_max, |a, b| a < b)
    }

    /// Maximum of `B_n` over `1 ≤ n ≤ n_max`.
    pub fn max_over(&self, n_max: u64) -> Option<Extremum> {
        self.extremum(n_max, |a, b| a > b)
    }

    fn extremum(&self, n_max: u64, better: impl Fn(&Rational, &Rational) -> bool) -> Option<Extremum> {
        let m = self.head_len();
        let q = self.period();
        let mut best: Option<Extremum> = None;
        let mut offer = |n: u64, value: Rational| {
            let replace = match &best {
                None => true,
                Some(b) => better(&value, &b.value) || (value == b.value && n < b.n),
            };
            if replace {
                best = Some(Extremum { value, n });
            }
        };
        for n in 1..=m.min(n_max) {
            offer(n, self.head[n as usize].clone());
        }
        // Cycle residues: n = m + j·q + r.
        let lap_helps = better(&self.lap, &Rational::zero());
        for r in 0..q {
            let j_lo = u64::from(m == 0 && r == 0);
            let Some(room) = n_max.checked_sub(m + r) else { continue };
            let j_hi = room / q;
            if j_hi < j_lo {
                continue;
            }
            let j = if lap_helps { j_hi } else { j_lo };
            let n = m + j * q + r;
            offer(n, self.sum(n));
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn brute(seq: &EventuallyPeriodic<Rational>, n_max: u64) -> (Rational, Rational) {
        let mut acc = q(0);
        let mut lo = None::<Rational>;
        let mut hi = None::<Rational>;
        for k in 0..n_max {
            acc += seq.at(k);
            lo = Some(lo.map_or(acc.clone(), |v| v.min(acc.clone())));
            hi = Some(hi.map_or(acc.clone(), |v| v.max(acc.clone())));
        }
        (lo.unwrap(), hi.unwrap())
    }

    #[test]
    fn matches_direct_accumulation() {
        let cases = [
            (vec![], vec![1, -1]),
            (vec![3, -5], vec![2, -1, 0]),
            (vec![-2], vec![-1, 1, 1]),
            (vec![1, 1, 1], vec![-4]),
            (vec![], vec![0]),
        ];
        for (head, cycle) in cases {
            let seq = EventuallyPeriodic::new(head.into_iter().map(q).collect(), cycle.into_iter().map(q).collect());
            let profile = BirkhoffProfile::new(&seq);
            for n_max in 1..40 {
                let (lo, hi) = brute(&seq, n_max);
                assert_eq!(profile.min_over(n_max).unwrap().value, lo, "{seq:?} {n_max}");
                assert_eq!(profile.max_over(n_max).unwrap().value, hi, "{seq:?} {n_max}");
            }
            let mut acc = q(0);
            for n in 1..40u64 {
                acc += seq.at(n - 1);
                assert_eq!(profile.sum(n), acc);
            }
        }
    }

    #[test]
    fn attained_index_is_reported() {
        let seq = EventuallyPeriodic::new(vec![q(1)], vec![q(-1), q(1)]);
        // B: 1, 0, 1, 0, ...
        let min = BirkhoffProfile::new(&seq).min_over(100).unwrap();
        assert_eq!(min, Extremum { value: q(0), n: 2 });
    }
}
