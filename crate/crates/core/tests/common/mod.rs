//! Shared test oracles, kept independent of the library's evaluation paths:
//! a scan-based LTL evaluator, an epsilon-augmented vertex-enumeration
//! feasibility decision, and sampling helpers for random systems.

#![allow(dead_code)]

use grnsynth::{
    Bounds, GrnState, LassoRun, LinearAtom, Ltl, Rational,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::Rng;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

// ---------------------------------------------------------------------------
// Scan-based LTL oracle on lasso runs
// ---------------------------------------------------------------------------

/// Evaluates a bound formula at `pos` of the lasso's infinite unrolling by
/// direct recursion: temporal operators scan forward over folded positions,
/// which cycle with the loop period, so scanning `len + 1` positions from any
/// start covers every reachable suffix. No fixpoints, no per-position tables.
pub fn oracle_eval_lasso(phi: &Ltl<usize>, run: &LassoRun, pos: usize) -> bool {
    let fold = |p: usize| -> usize {
        if p < run.len() {
            p
        } else {
            run.loop_start + (p - run.loop_start) % run.loop_len()
        }
    };
    let horizon = run.len() + 1;
    match phi {
        Ltl::True => true,
        Ltl::False => false,
        Ltl::Atom(g) => run.states[fold(pos)].is_active(*g),
        Ltl::Not(a) => !oracle_eval_lasso(a, run, pos),
        Ltl::And(a, b) => oracle_eval_lasso(a, run, pos) && oracle_eval_lasso(b, run, pos),
        Ltl::Or(a, b) => oracle_eval_lasso(a, run, pos) || oracle_eval_lasso(b, run, pos),
        Ltl::Implies(a, b) => !oracle_eval_lasso(a, run, pos) || oracle_eval_lasso(b, run, pos),
        Ltl::Next(a) => oracle_eval_lasso(a, run, fold(pos + 1)),
        Ltl::Eventually(a) => {
            (0..horizon).any(|k| oracle_eval_lasso(a, run, fold(pos + k)))
        }
        Ltl::Globally(a) => (0..horizon).all(|k| oracle_eval_lasso(a, run, fold(pos + k))),
        Ltl::Until(a, b) => (0..horizon).any(|k| {
            oracle_eval_lasso(b, run, fold(pos + k))
                && (0..k).all(|j| oracle_eval_lasso(a, run, fold(pos + j)))
        }),
    }
}

/// Random lasso over `gene_count` genes (including the always-on input).
pub fn random_lasso(rng: &mut StdRng, gene_count: usize) -> LassoRun {
    let len = rng.random_range(1..=6usize);
    let loop_start = rng.random_range(0..len);
    let states = (0..len)
        .map(|_| {
            let mut bits = 1u32;
            for g in 1..gene_count {
                if rng.random_bool(0.5) {
                    bits |= 1 << g;
                }
            }
            GrnState::from_bits(bits)
        })
        .collect();
    LassoRun { states, loop_start }
}

/// Random formula over genes `1..gene_count`, bounded depth.
pub fn random_formula(rng: &mut StdRng, gene_count: usize, depth: usize) -> Ltl<usize> {
    if depth == 0 {
        return match rng.random_range(0..4u8) {
            0 => Ltl::True,
            1 => Ltl::False,
            _ => Ltl::Atom(rng.random_range(1..gene_count)),
        };
    }
    let choice = rng.random_range(0..8u8);
    if choice == 0 {
        return Ltl::Atom(rng.random_range(1..gene_count));
    }
    let a = Box::new(random_formula(rng, gene_count, depth - 1));
    match choice {
        1 => Ltl::Not(a),
        2 => Ltl::And(a, Box::new(random_formula(rng, gene_count, depth - 1))),
        3 => Ltl::Or(a, Box::new(random_formula(rng, gene_count, depth - 1))),
        4 => Ltl::Next(a),
        5 => Ltl::Eventually(a),
        6 => Ltl::Globally(a),
        _ => Ltl::Until(a, Box::new(random_formula(rng, gene_count, depth - 1))),
    }
}

// ---------------------------------------------------------------------------
// Vertex-enumeration feasibility oracle with symbolic epsilon
// ---------------------------------------------------------------------------

/// Reduced `i128` fraction. The oracle only sees inputs with numerators and
/// denominators up to 8 and at most three eliminations, so magnitudes stay
/// far below the overflow point; arithmetic is checked and panics loudly if
/// a test ever violates that.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frac {
    n: i128,
    d: i128, // always positive
}

impl Frac {
    pub fn new(n: i128, d: i128) -> Frac {
        assert!(d != 0);
        let sign = if d < 0 { -1 } else { 1 };
        let g = gcd_i128(n.unsigned_abs(), d.unsigned_abs()).max(1) as i128;
        Frac {
            n: sign * n / g,
            d: sign * d / g,
        }
    }

    pub fn zero() -> Frac {
        Frac { n: 0, d: 1 }
    }

    pub fn one() -> Frac {
        Frac { n: 1, d: 1 }
    }

    pub fn from_rational(r: &Rational) -> Frac {
        use num_traits::ToPrimitive;
        Frac::new(
            r.numer().to_i128().expect("oracle numerator fits i128"),
            r.denom().to_i128().expect("oracle denominator fits i128"),
        )
    }

    fn add(self, o: Frac) -> Frac {
        Frac::new(
            self.n.checked_mul(o.d).and_then(|x| x.checked_add(o.n * self.d)).expect("no overflow"),
            self.d * o.d,
        )
    }

    fn sub(self, o: Frac) -> Frac {
        self.add(o.neg())
    }

    fn mul(self, o: Frac) -> Frac {
        Frac::new(self.n.checked_mul(o.n).expect("no overflow"), self.d * o.d)
    }

    fn div(self, o: Frac) -> Frac {
        assert!(o.n != 0);
        Frac::new(self.n.checked_mul(o.d).expect("no overflow"), self.d * o.n)
    }

    fn neg(self) -> Frac {
        Frac { n: -self.n, d: self.d }
    }

    fn is_zero(self) -> bool {
        self.n == 0
    }

    fn signum(self) -> i8 {
        self.n.signum() as i8
    }
}

fn gcd_i128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A number `a + b*eps` with `eps` an infinitesimal; ordering is
/// lexicographic. Strict inequalities shift their boundary by `eps`, turning
/// open polyhedra into closed ones whose vertices witness feasibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Eps {
    pub a: Frac,
    pub b: Frac,
}

impl Eps {
    pub fn exact(a: Frac) -> Eps {
        Eps { a, b: Frac::zero() }
    }

    pub fn zero() -> Eps {
        Eps::exact(Frac::zero())
    }

    fn add(self, o: Eps) -> Eps {
        Eps { a: self.a.add(o.a), b: self.b.add(o.b) }
    }

    fn sub(self, o: Eps) -> Eps {
        Eps { a: self.a.sub(o.a), b: self.b.sub(o.b) }
    }

    fn scale(self, k: Frac) -> Eps {
        Eps { a: self.a.mul(k), b: self.b.mul(k) }
    }

    fn is_nonneg(self) -> bool {
        match self.a.signum() {
            1 => true,
            0 => self.b.signum() >= 0,
            _ => false,
        }
    }
}

/// Decides feasibility of `atoms` within the box by enumerating candidate
/// vertices of the eps-shifted closed arrangement: every subset of `n`
/// hyperplanes (constraint boundaries and box faces) is solved exactly over
/// `Q[eps]`, and a candidate counts when it satisfies all shifted constraints.
/// The box keeps the region bounded, so a nonempty region has such a vertex.
pub fn oracle_feasible(atoms: &[LinearAtom], bounds: &Bounds, n: usize) -> bool {
    // Row form: sum coeff * x + constant (+ eps if strict) >= 0.
    struct Row {
        coeffs: Vec<Frac>,
        constant: Eps,
    }
    let mut rows: Vec<Row> = Vec::new();
    for a in atoms {
        let mut coeffs = vec![Frac::zero(); n];
        for (v, c) in a.coeffs() {
            coeffs[*v] = Frac::from_rational(c);
        }
        let constant = Eps {
            a: Frac::from_rational(a.constant()),
            b: if a.is_strict() { Frac::one().neg() } else { Frac::zero() },
        };
        rows.push(Row { coeffs, constant });
    }
    for v in 0..n {
        let mut lo = vec![Frac::zero(); n];
        lo[v] = Frac::one();
        rows.push(Row {
            coeffs: lo,
            constant: Eps::exact(Frac::from_rational(bounds.lower(v)).neg()),
        });
        let mut hi = vec![Frac::zero(); n];
        hi[v] = Frac::one().neg();
        rows.push(Row {
            coeffs: hi,
            constant: Eps::exact(Frac::from_rational(bounds.upper(v))),
        });
    }

    let satisfied = |point: &[Eps]| -> bool {
        rows.iter().all(|r| {
            let mut acc = r.constant;
            for (c, x) in r.coeffs.iter().zip(point) {
                acc = acc.add(x.scale(*c));
            }
            acc.is_nonneg()
        })
    };

    // Solve every n-subset of boundaries as an equality system over Q[eps].
    let m = rows.len();
    let mut chosen = vec![0usize; n];
    fn subsets(
        m: usize,
        n: usize,
        start: usize,
        k: usize,
        chosen: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        if k == n {
            return f(chosen);
        }
        for i in start..m {
            chosen[k] = i;
            if subsets(m, n, i + 1, k + 1, chosen, f) {
                return true;
            }
        }
        false
    }
    let mut check = |subset: &[usize]| -> bool {
        // Gaussian elimination: A x = -constant, RHS over Q[eps].
        let mut a: Vec<Vec<Frac>> = subset.iter().map(|&i| rows[i].coeffs.clone()).collect();
        let mut rhs: Vec<Eps> = subset
            .iter()
            .map(|&i| Eps::zero().sub(rows[i].constant))
            .collect();
        let mut col_of_row = Vec::new();
        let mut used = vec![false; n];
        for r in 0..n {
            let mut pivot = None;
            for c in 0..n {
                if !used[c] && !a[r][c].is_zero() {
                    pivot = Some(c);
                    break;
                }
            }
            let Some(c) = pivot else { return false }; // singular subset
            used[c] = true;
            col_of_row.push(c);
            let inv = a[r][c];
            for cc in 0..n {
                a[r][cc] = a[r][cc].div(inv);
            }
            rhs[r] = rhs[r].scale(Frac::one().div(inv));
            for rr in 0..n {
                if rr != r && !a[rr][c].is_zero() {
                    let f = a[rr][c];
                    for cc in 0..n {
                        a[rr][cc] = a[rr][cc].sub(f.mul(a[r][cc]));
                    }
                    let delta = rhs[r].scale(f);
                    rhs[rr] = rhs[rr].sub(delta);
                }
            }
        }
        let mut point = vec![Eps::zero(); n];
        for (r, &c) in col_of_row.iter().enumerate() {
            point[c] = rhs[r];
        }
        satisfied(&point)
    };
    subsets(m, n, 0, 0, &mut chosen, &mut check)
}

/// Random atom over `n` variables with numerators and denominators up to 8.
pub fn random_atom(rng: &mut StdRng, n: usize) -> LinearAtom {
    let mut coeffs = Vec::new();
    for v in 0..n {
        if rng.random_bool(0.7) {
            let num = rng.random_range(-8i64..=8);
            let den = rng.random_range(1i64..=8);
            if num != 0 {
                coeffs.push((v, rat(num, den)));
            }
        }
    }
    let constant = rat(rng.random_range(-8i64..=8), rng.random_range(1i64..=8));
    LinearAtom::new(coeffs, constant, rng.random_bool(0.5))
}
