//! Lattice checks: the minor polynomial against exact rank, `M ≤ L`, and witness listings.

use crate::report::Record;
use crate::Result;
use flatamp::lattice::{count_l, count_m, exact_rank, minor_polynomial_int, IntMat, LatticeQuery, Target, Witness};
use flatamp::lie::{random_traceless, GroupElement};
use flatamp::rng;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use serde_json::json;

pub const QUADRUPLES: usize = 1000;
pub const INSTANCES: usize = 100;

/// Labels `(a, b, c)` with `gcd = 1` and `abc ≤ 30`.
pub const LABELS: [[u64; 3]; 8] = [[2, 1, 1], [3, 1, 1], [5, 1, 1], [7, 1, 1], [4, 2, 1], [3, 3, 1], [6, 2, 1], [10, 2, 1]];

fn random_mat<R: Rng>(rng: &mut R, sparse: bool) -> IntMat {
    std::array::from_fn(|_| {
        std::array::from_fn(|_| {
            if sparse && rng.random_range(0..10) > 0 {
                0
            } else {
                rng.random_range(-5..=5)
            }
        })
    })
}

/// A third of the quadruples uniform, a third with `y₄ = ±y_j`, a third sparse.
fn quadruple<R: Rng>(rng: &mut R, i: usize) -> [IntMat; 4] {
    let mut ys: [IntMat; 4] = std::array::from_fn(|_| random_mat(rng, i % 3 == 2));
    if i % 3 == 1 {
        let j = rng.random_range(0..3);
        let s = if rng.random::<bool>() { 1 } else { -1 };
        ys[3] = ys[j].map(|row| row.map(|v| s * v));
    }
    ys
}

/// Criterion 5.
pub fn minor_polynomial(seed: u64, n: usize) -> Result<Record> {
    let mut rng = rng::stream(seed, "lattice.minor");
    let (mut low, mut agree, mut unit_floor) = (0usize, 0usize, true);
    for i in 0..n {
        let ys = quadruple(&mut rng, i);
        let p = minor_polynomial_int(&ys);
        let rows: Vec<Vec<BigInt>> = ys.iter().map(|y| y.iter().flatten().map(|&v| BigInt::from(v)).collect()).collect();
        let rank = exact_rank(&rows);
        low += (rank <= 3) as usize;
        agree += (p.is_zero() == (rank <= 3) && p >= BigInt::zero()) as usize;
        if rank == 4 {
            unit_floor &= p >= BigInt::one();
        }
    }
    let ok = agree == n && unit_floor;
    let measured = json!({"quadruples": n, "rank_at_most_3": low, "agree_with_rank": agree, "positive_is_at_least_1": unit_floor});
    Ok(Record::new("C5", "Lemma \"Akshay\", sums of the squares of the 4 × 4 minors", ok, measured, json!({"agree_with_rank": n, "positive_is_at_least_1": true})))
}

/// Criterion 6: `M(g, a, b, c, κ) ≤ L(g, abc, κ)` on seeded instances with `X = 2`.
pub fn return_lemma(seed: u64, n: usize) -> Result<Record> {
    let mut rng = rng::stream(seed, "lattice.returnlem");
    let (mut holds, mut max_m, mut max_l, mut nonzero_m) = (0usize, 0u64, 0u64, 0usize);
    for _ in 0..n {
        let g = GroupElement::exp_of(&random_traceless(&mut rng, 0.05))?;
        let label = LABELS[rng.random_range(0..LABELS.len())];
        let kappa = rng.random_range(1e-4..0.3);
        let c = count_m(&LatticeQuery::new(g, Target::Label(label), kappa, 2)?)?;
        holds += (c.count <= c.count_l) as usize;
        nonzero_m += (c.count > 0) as usize;
        max_m = max_m.max(c.count);
        max_l = max_l.max(c.count_l);
    }
    let measured = json!({"instances": n, "inequality_holds": holds, "instances_with_M_positive": nonzero_m, "max_M": max_m, "max_L": max_l});
    Ok(Record::new("C6", "Lemma \"returnlem\", M(g, a, b, c, κ) ≤ L(g, abc, κ)", holds == n, measured, json!({"inequality_holds": n})))
}

/// The identity and `diag(2,2,2)` witnesses, and the witness list written as JSONL.
pub fn witnesses(kappa: f64) -> Result<(Record, Vec<Witness>)> {
    let g = GroupElement::identity();
    let one = count_l(&LatticeQuery::new(g, Target::Norm(1), 1e-6, 2)?)?;
    let eight = count_l(&LatticeQuery::new(g, Target::Norm(8), 1e-6, 3)?)?;
    let id: IntMat = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let two: IntMat = [[2, 0, 0], [0, 2, 0], [0, 0, 2]];
    let has = |ws: &[Witness], x: &IntMat| ws.iter().any(|w| w.point.x == *x);
    let ok = has(&one.witnesses, &id) && has(&eight.witnesses, &two);
    let listing = count_l(&LatticeQuery::new(g, Target::Norm(2), kappa, 2)?)?;
    let measured = json!({
        "L(e,1,1e-6,X=2)": one.count,
        "L(e,8,1e-6,X=3)": eight.count,
        "identity_witness": has(&one.witnesses, &id),
        "diag_2_2_2_witness": has(&eight.witnesses, &two),
        "listing": {"n": 2, "kappa": kappa, "X": 2, "count": listing.count, "log_failures": listing.log_failures},
    });
    let rec = Record::new("lattice.witnesses", "§4, d(g⁻¹ x̄ g, e) ≤ 1, d(g⁻¹ x̄ g, MA) ≤ κ", ok, measured, json!({"identity_witness": true, "diag_2_2_2_witness": true}));
    Ok((rec, listing.witnesses))
}
