use rug::{Float, Integer, Rational};

/// Even-index Bernoulli numbers `B_2, B_4, ...` held exactly and at a
/// working precision.
#[derive(Debug)]
pub struct BernoulliTable {
    exact: Vec<Rational>,
    floats: Vec<Float>,
    ln_abs: Vec<f64>,
}

impl BernoulliTable {
    /// Builds `B_2 .. B_{2 count}`.
    pub fn new(count: usize, prec: u32) -> Self {
        let all = bernoulli_upto(2 * count);
        let exact: Vec<Rational> = (1..=count).map(|j| all[2 * j].clone()).collect();
        let floats = exact.iter().map(|b| Float::with_val(prec, b)).collect();
        let ln_abs = exact
            .iter()
            .map(|b| Float::with_val(128, b).abs().ln().to_f64())
            .collect();
        BernoulliTable {
            exact,
            floats,
            ln_abs,
        }
    }

    pub fn len(&self) -> usize {
        self.exact.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exact.is_empty()
    }

    /// Exact `B_{2j}` for `j >= 1`.
    pub fn exact(&self, j: usize) -> &Rational {
        &self.exact[j - 1]
    }

    /// `B_{2j}` rounded to the working precision.
    pub fn float(&self, j: usize) -> &Float {
        &self.floats[j - 1]
    }

    /// `ln |B_{2j}|`.
    pub fn ln_abs(&self, j: usize) -> f64 {
        self.ln_abs[j - 1]
    }

    /// Checks the known leading values and the sign pattern.
    pub fn self_test(&self) -> bool {
        let known = [
            Rational::from((1, 6)),
            Rational::from((-1, 30)),
            Rational::from((1, 42)),
        ];
        let leading_ok = known
            .iter()
            .enumerate()
            .all(|(i, k)| self.exact.get(i).is_none_or(|b| b == k));
        let signs_ok = self.exact.iter().enumerate().all(|(i, b)| {
            // sign(B_2j) = (-1)^(j+1), j = i + 1
            let positive = i % 2 == 0;
            (b.cmp0() == std::cmp::Ordering::Greater) == positive
        });
        leading_ok && signs_ok
    }
}

/// `B_0 .. B_m` from the recurrence `sum_{k<=m} C(m+1, k) B_k = 0`.
fn bernoulli_upto(m: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(m + 1);
    b.push(Rational::from(1));
    for n in 1..=m {
        if n > 1 && n % 2 == 1 {
            b.push(Rational::new());
            continue;
        }
        let mut acc = Rational::new();
        for (k, bk) in b.iter().enumerate() {
            let c = Integer::from(n as u32 + 1).binomial(k as u32);
            acc += Rational::from(bk * c);
        }
        b.push(-acc / (n as u32 + 1));
    }
    b
}
