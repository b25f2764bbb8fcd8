//! Acceptance suite: one line per criterion, nonzero exit status if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wronski::dependence::{distinct_order_reduction, independence_witness, least_order_sides, rank_oracle};
use wronski::fermat::{degree_report, fermat_report, Checks, FermatConfig, Tails};
use wronski::polyring::{derivative_of_composition, infer_composition_constants, leibniz_expand, parse_poly};
use wronski::rational::parse_rat;
use wronski::vandermonde::{key_identity_sides, zero_set_certify, CertifyOptions, Direction, Variant};
use wronski::wordcomb::{
    canonical_full_set, enumerate_full_sets, foliation_ratio, full_set_size, full_set_weight, weight_density,
    words_of_length,
};
use wronski::wronskian::{
    det_power_law_check, eval_wronskian, is_geometric, linear_map, monomial_basis, wronskian_on_basis,
    GeometricMode, WronskianCombination, DEFAULT_EXACT_BUDGET, DEFAULT_TRIALS,
};
use wronski::{ExponentOrder, Polynomial, Rat, TruncatedSeries, Word, WordSet};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn monomials(alphas: &[Vec<u32>]) -> Vec<Polynomial> {
    alphas.iter().map(|a| Polynomial::monomial(a.clone(), Rat::one())).collect()
}

fn rats(v: &[u32]) -> Vec<Rat> {
    v.iter().map(|&x| int(x as i64)).collect()
}

fn full_set_combinatorics() -> Outcome {
    for m in 0..=8 {
        let n = ok(enumerate_full_sets(1, m))?.len();
        ensure!(n == 1, "|F_1,{m}| = {n}");
    }
    let f22 = ok(enumerate_full_sets(2, 2))?;
    ensure!(f22.len() == 3, "|F_2,2| = {}", f22.len());
    let mut compared = 0;
    for p in 1..=3 {
        for m in 0..=6 {
            let sets = ok(enumerate_full_sets(p, m))?;
            let ours: BTreeSet<BTreeSet<Vec<u32>>> = sets.iter().map(as_exponent_set).collect();
            ensure!(ours.len() == sets.len(), "duplicates in F_{p},{m}");
            let oracle = ideals_bfs(p, m);
            ensure!(ours == oracle, "F_{p},{m}: {} sets, oracle {}", ours.len(), oracle.len());
            if m <= 4 {
                ensure!(ideals_subsets(p, m) == oracle, "the two oracles disagree on F_{p},{m}");
            }
            for u in &sets {
                ensure!(u.is_admissible() && u.is_full(), "{u} is not an admissible full set");
            }
            compared += sets.len();
        }
    }
    Ok(format!("{compared} sets match the order-ideal oracle"))
}

/// Re-evaluates a reported counterexample with the permutation-expansion oracle.
fn counterexample_holds(set: &WordSet, c: &wronski::wronskian::Counterexample) -> Result<bool, String> {
    let p = set.p();
    let g = ok(parse_poly(&c.g, p))?;
    let fs = c.fs.iter().map(|f| parse_poly(f, p)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    let point = c.point.iter().map(|x| parse_rat(x)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
    let gfs: Vec<Polynomial> = fs.iter().map(|f| &g * f).collect();
    let lhs = wronskian_oracle(set, &gfs).eval(&point);
    let rhs = num_traits::pow(g.eval(&point), fs.len()) * wronskian_oracle(set, &fs).eval(&point);
    Ok(lhs != rhs && lhs == ok(parse_rat(&c.lhs))? && rhs == ok(parse_rat(&c.rhs))?)
}

fn geometricity() -> Outcome {
    let grid: Vec<(usize, usize)> = (1..=4).flat_map(|m| [(1, m), (2, m)]).chain((1..=3).map(|m| (3, m))).collect();
    let mut checked = 0;
    for (p, m) in grid {
        for u in ok(enumerate_full_sets(p, m))? {
            let w = ok(WronskianCombination::pure(u.clone()))?;
            let r = ok(is_geometric(&w, GeometricMode::Exact { budget: DEFAULT_EXACT_BUDGET }))?;
            ensure!(r.geometric, "W_{u} is not geometric");
            checked += 1;
        }
    }
    let bad = ok(WordSet::from_exponents(2, &[vec![1, 0], vec![1, 1]]))?;
    let w = ok(WronskianCombination::pure(bad.clone()))?;
    let r = ok(is_geometric(&w, GeometricMode::Randomized { trials: DEFAULT_TRIALS, seed: 0 }))?;
    ensure!(!r.geometric, "W_{bad} passed the randomized test");
    let c = r.counterexample.as_ref().ok_or("no counterexample")?;
    ensure!(counterexample_holds(&bad, c)?, "counterexample does not reproduce");
    let exact = ok(is_geometric(&w, GeometricMode::Exact { budget: DEFAULT_EXACT_BUDGET }))?;
    ensure!(!exact.geometric, "W_{bad} is geometric in exact mode");
    Ok(format!("{checked} full sets geometric, W_{bad} refuted by a verified counterexample"))
}

fn zero_set_certification() -> Outcome {
    let grid = [(1, 4), (2, 3), (3, 2)];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut runs = 0;
    for (p, max_m) in grid {
        for m in 1..=max_m {
            for variant in [Variant::A, Variant::B] {
                let opts = CertifyOptions { samples: 100, seed: 0, ..Default::default() };
                let r = ok(zero_set_certify(p, m, variant, Direction::Both, &opts))?;
                ensure!(r.passed(), "p={p} m={m} {variant:?}: {:?}", r.totals);
                ensure!(r.totals.samples == 100 && r.totals.witnesses == 100, "p={p} m={m}: {:?}", r.totals);
                runs += 1;
            }
            // spot check of the converse with the permutation oracle
            for u in ok(enumerate_full_sets(p, m))? {
                let mut cols: Vec<Vec<Rat>> = (0..=m).map(|_| (0..p).map(|_| int(rng.gen_range(-5..=5))).collect()).collect();
                let (i, j) = (rng.gen_range(0..=m), rng.gen_range(0..m));
                let j = if j >= i { j + 1 } else { j };
                cols[j] = cols[i].clone();
                ensure!(vandermonde_oracle(&u, &cols).is_zero(), "V_{u} nonzero with equal columns");
            }
        }
    }
    Ok(format!("{runs} certifications, 100 forward samples each"))
}

fn dependence_decision() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut mismatches, mut independent, mut reductions) = (0, 0, 0);
    for i in 0..200 {
        let forced = i < 100;
        let p = rng.gen_range(1..=3);
        let m = if forced { rng.gen_range(1..=4) } else { rng.gen_range(0..=4) };
        let deg = rng.gen_range(1..=4);
        let mut fs: Vec<Polynomial> = (0..=m).map(|_| random_poly(&mut rng, p, deg, 5, 0.6)).collect();
        if forced {
            let mut dep = Polynomial::zero(p);
            for f in &fs[..m] {
                dep = &dep + &f.scale(&int(rng.gen_range(-3..=3)));
            }
            fs[m] = dep;
        }
        let rank = rank_of(&fs);
        ensure!(ok(rank_oracle(&fs))? == rank, "family {i}: rank oracles disagree");
        let witness = ok(independence_witness(&fs))?;
        let indep = rank == m + 1;
        ensure!(!(forced && indep), "family {i} should be dependent");
        if witness.is_some() != indep {
            mismatches += 1;
            continue;
        }
        if let Some(u) = witness {
            independent += 1;
            ensure!(u.len() == m && u.is_full(), "family {i}: witness {u} is not in F_p,m");
            ensure!(!ok(eval_wronskian(&u, &fs))?.is_zero(), "family {i}: W_{u} vanishes");
            let order = ExponentOrder::default();
            let r = ok(distinct_order_reduction(&fs, order))?;
            ensure!(r.verify(&fs, order), "family {i}: reduction certificate rejected");
            let ts: Vec<Polynomial> = (0..=m)
                .map(|j| (0..=m).fold(Polynomial::zero(p), |acc, k| &acc + &fs[k].scale(&r.a[k][j])))
                .collect();
            ensure!(ts == r.ts, "family {i}: t != f·A");
            ensure!(!perm_det_rat(&r.a).is_zero(), "family {i}: A is singular");
            let orders: BTreeSet<Vec<u32>> = r.ts.iter().filter_map(|t| t.series_order(p, order)).collect();
            ensure!(orders.len() == m + 1, "family {i}: orders not distinct");
            reductions += 1;
        }
    }
    ensure!(mismatches == 0, "{mismatches} mismatches");
    Ok(format!("0 mismatches on 200 families ({independent} independent), {reductions} reductions verified"))
}

fn key_identity() -> Outcome {
    let grid = [(1, 4), (2, 3), (3, 2)];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let order = ExponentOrder::default();
    let (mut tuples, mut least) = (0, 0);
    for (p, max_m) in grid {
        for m in 1..=max_m {
            let sets = ok(enumerate_full_sets(p, m))?;
            for _ in 0..100 {
                let u = &sets[rng.gen_range(0..sets.len())];
                let alphas: Vec<Vec<u32>> = (0..=m).map(|_| (0..p).map(|_| rng.gen_range(0..=3)).collect()).collect();
                let (lhs, rhs) = ok(key_identity_sides(u, &alphas))?;
                let ones = vec![Rat::one(); p];
                let w1 = wronskian_oracle(u, &monomials(&alphas)).eval(&ones);
                let cols: Vec<Vec<Rat>> = alphas.iter().map(|a| rats(a)).collect();
                let v = vandermonde_oracle(u, &cols);
                ensure!(lhs == rhs && lhs == w1 && rhs == v, "{u} at {alphas:?}: {lhs} {rhs} {w1} {v}");
                tuples += 1;
                if v.is_zero() {
                    continue;
                }
                let zero_tails = vec![Polynomial::zero(p); m + 1];
                let tails: Vec<Polynomial> = alphas
                    .iter()
                    .map(|a| {
                        let terms = (0..rng.gen_range(1..=3)).map(|_| {
                            let mut e = a.clone();
                            let k = rng.gen_range(0..p);
                            e[k] += rng.gen_range(1..=2);
                            for x in e.iter_mut() {
                                *x += rng.gen_range(0..=1);
                            }
                            (e, int(rng.gen_range(1..=4)))
                        });
                        Polynomial::from_terms(p, terms.collect::<Vec<_>>())
                    })
                    .collect();
                for t in [&zero_tails, &tails] {
                    let (expected, found) = ok(least_order_sides(u, &alphas, t, order))?;
                    let direct: Vec<u32> = (0..p)
                        .map(|k| alphas.iter().map(|a| a[k]).sum::<u32>() - u.beta()[k] as u32)
                        .collect();
                    ensure!(expected == direct, "predicted order {expected:?} != {direct:?}");
                    ensure!(found == Some(expected.clone()), "{u} at {alphas:?}: least order {found:?}, expected {expected:?}");
                }
                least += 1;
            }
        }
    }
    Ok(format!("{tuples} tuples exact, least order verified on {least} nonvanishing ones with and without tails"))
}

fn nonvanishing_section() -> Outcome {
    let mut others = 0;
    for p in 1..=3 {
        for n in 1..=3u32 {
            let basis = monomial_basis(p, n);
            let un = ok(canonical_full_set(p, n))?;
            let w = ok(wronskian_on_basis(p, n, &basis))?;
            let c = w.as_constant().ok_or(format!("W_U{n} not constant for p={p}"))?;
            ensure!(!c.is_zero(), "W_U{n} vanishes for p={p}");
            if basis.len() <= 7 {
                ensure!(wronskian_oracle(&un, &basis) == w, "oracle disagrees for p={p} n={n}");
            }
            if p == 1 {
                ensure!(n != 1 || c == int(1), "p=1 n=1 gives {c}");
                ensure!(n != 2 || c == int(2), "p=1 n=2 gives {c}");
            }
            for u in ok(enumerate_full_sets(p, un.len()))? {
                if u == un {
                    continue;
                }
                ensure!(ok(eval_wronskian(&u, &basis))?.is_zero(), "W_{u} nonzero on the degree-{n} basis");
                others += 1;
            }
        }
    }
    Ok(format!("W_U_n nonzero constant for p,n <= 3, {others} other full sets vanish"))
}

fn det_power_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut count = 0;
    for p in 1..=3 {
        for n in 1..=2u32 {
            let basis = monomial_basis(p, n);
            let un = ok(canonical_full_set(p, n))?;
            let e = (1..=n as u64).map(|k| k * binomial(k + p as u64 - 1, p as u64 - 1).to_string().parse::<u64>().unwrap()).sum::<u64>() / p as u64;
            let base = ok(eval_wronskian(&un, &basis))?;
            for _ in 0..20 {
                let a = random_invertible(&mut rng, p);
                ensure!(ok(det_power_law_check(p, n, &a, &basis))?, "power law fails for p={p} n={n}");
                let map = linear_map(&a);
                let composed: Vec<Polynomial> = basis.iter().map(|f| f.compose(&map)).collect();
                let lhs = wronskian_oracle_or_fast(&un, &composed)?;
                let rhs = base.scale(&num_traits::pow(perm_det_rat(&a), e as usize));
                ensure!(lhs == rhs, "det(A)^{e} law fails for p={p} n={n}");
                count += 1;
            }
        }
    }
    Ok(format!("{count} matrices, exponent w(U_n)/p"))
}

fn wronskian_oracle_or_fast(u: &WordSet, fs: &[Polynomial]) -> Result<Polynomial, String> {
    if fs.len() <= 7 {
        Ok(wronskian_oracle(u, fs))
    } else {
        ok(eval_wronskian(u, fs))
    }
}

fn random_word(rng: &mut ChaCha8Rng, p: usize, max_len: u32) -> Word {
    let len = rng.gen_range(1..=max_len);
    let mut a = vec![0u32; p];
    for _ in 0..len {
        a[rng.gen_range(0..p)] += 1;
    }
    Word::new(a).expect("nonempty")
}

fn series(rng: &mut ChaCha8Rng, p: usize, n: usize, trunc: u32) -> Vec<TruncatedSeries> {
    (0..n).map(|_| TruncatedSeries::new(random_poly(rng, p, 3, 4, 0.5), p, trunc)).collect()
}

fn composition_formulas() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..200 {
        let p = rng.gen_range(1..=3);
        let u = random_word(&mut rng, p, 4);
        let f = random_poly(&mut rng, p, 3, 5, 0.5);
        let g = random_poly(&mut rng, p, 3, 5, 0.5);
        ensure!(leibniz_expand(&f, &g, &u) == diff_word(&(&f * &g), u.alpha()), "Leibniz case {i} fails");
    }
    let trunc = 2;
    for i in 0..100 {
        let (p, n) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let u = random_word(&mut rng, p, 3);
        let f = random_poly(&mut rng, n, 3, 5, 0.6);
        let phi = series(&mut rng, p, n, u.len() + trunc);
        let chain = ok(derivative_of_composition(&f, &phi, &u, trunc))?;
        let polys: Vec<Polynomial> = phi.iter().map(|s| s.poly().clone()).collect();
        let direct = TruncatedSeries::new(diff_word(&f.compose(&polys), u.alpha()), p, trunc);
        ensure!(chain.agrees_with(&direct), "composition case {i}: two paths differ");
    }
    let mut tables = 0;
    for p in 1..=2 {
        for n in 1..=2 {
            for len in 1..=3 {
                for u in words_of_length(p, len) {
                    let table = ok(infer_composition_constants(p, n, &u))?;
                    for t in &table.terms {
                        let parts: Vec<Vec<u32>> = t.parts.iter().map(|w| w.alpha().to_vec()).collect();
                        ensure!(t.constant == d_constant(u.alpha(), &parts), "D{parts:?} for {u}: {}", t.constant);
                    }
                    for _ in 0..3 {
                        let f = random_poly(&mut rng, n, 4, 7, 0.7);
                        let phi = series(&mut rng, p, n, len + trunc);
                        let via_table = ok(table.apply(&f, &phi, trunc))?;
                        let chain = ok(derivative_of_composition(&f, &phi, &u, trunc))?;
                        ensure!(via_table.agrees_with(&chain), "table for {u} fails on fresh input");
                    }
                    tables += 1;
                }
            }
        }
    }
    Ok(format!("200 Leibniz, 100 composition cases, {tables} D-tables"))
}

fn fermat() -> Outcome {
    let mut reports = 0;
    for n in 2..=3 {
        for p in 1..=2.min(n - 1) {
            for delta in 1..=8u32 {
                let cfg = ok(FermatConfig::new(n, p, delta))?;
                for tails in [Tails::Symbolic, Tails::Random { seed: delta as u64 }] {
                    let r = ok(fermat_report(&cfg, Checks::ALL, tails))?;
                    ensure!(r.passed(), "N={n} p={p} delta={delta} failed");
                    for s in &r.sets {
                        ensure!(s.multidegree_is_beta == Some(true), "multidegree of {:?}", s.set);
                        ensure!(s.restriction_identity == Some(true), "restriction for {:?}", s.set);
                        let exps = s.factor_exponents.as_ref().ok_or("no factorization")?;
                        ensure!(exps.iter().all(|&e| e == delta.saturating_sub(s.order)), "exponents {exps:?}");
                        ensure!(s.part == "F+" || s.fminus_vanishes == Some(true), "F- set {:?}", s.set);
                    }
                    reports += 1;
                }
            }
            let d = ok(degree_report(n, p, 8))?;
            ensure!(d.threshold == ((n + 1) * (n - p)) as u64, "threshold {}", d.threshold);
        }
    }
    ensure!(ok(degree_report(3, 1, 8))?.threshold == 8, "threshold for N=3 p=1");
    Ok(format!("{reports} reports, thresholds (N+1)(N-p)"))
}

fn asymptotics() -> Outcome {
    for p in 1..=4 {
        for n in 1..=8u32 {
            let words: Vec<Word> = (1..=n).flat_map(|k| words_of_length(p, k)).collect();
            let size = words.len() as u128;
            let weight: u128 = words.iter().map(|w| w.len() as u128).sum();
            let closed: u128 = binomial(n as u64 + p as u64, p as u64).to_string().parse::<u128>().unwrap() - 1;
            ensure!(size == closed && full_set_size(p, n) == size, "|U_{n}| for p={p}");
            ensure!(full_set_weight(p, n) == weight, "w(U_{n}) for p={p}");
            let un = ok(canonical_full_set(p, n))?;
            ensure!(un.len() as u128 == size && un.weight() as u128 == weight && un.is_full(), "U_{n} for p={p}");
        }
    }
    let mut gaps = Vec::new();
    for p in 1..=3 {
        let gap = (to_f64(&weight_density(p, 40)) - p as f64 / (p as f64 + 1.0)).abs();
        ensure!(gap < 0.05, "density gap {gap} for p={p}");
        gaps.push(format!("{gap:.4}"));
    }
    let ratios: Vec<Rat> = [100, 1000, 10000]
        .iter()
        .map(|&n| foliation_ratio(1, 1, n).map(|f| f.ratio))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure!(ratios[0] > ratios[1] && ratios[1] > ratios[2], "foliation ratio not decreasing");
    let last = to_f64(&ratios[2]);
    ensure!(last < 0.03, "foliation ratio {last} at n=10000");
    Ok(format!("density gaps at n=40: {}, ratio(10000) = {last:.5}", gaps.join(", ")))
}

struct Criterion {
    name: &'static str,
    limit: Option<u64>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { name: "full-set combinatorics", limit: Some(10), run: full_set_combinatorics },
        Criterion { name: "geometricity", limit: Some(60), run: geometricity },
        Criterion { name: "zero-set certification", limit: Some(120), run: zero_set_certification },
        Criterion { name: "dependence decision", limit: Some(60), run: dependence_decision },
        Criterion { name: "key identity and least order", limit: None, run: key_identity },
        Criterion { name: "non-vanishing section", limit: None, run: nonvanishing_section },
        Criterion { name: "determinant power law", limit: None, run: det_power_law },
        Criterion { name: "Leibniz and composition formulas", limit: None, run: composition_formulas },
        Criterion { name: "Fermat hypersurfaces", limit: Some(120), run: fermat },
        Criterion { name: "asymptotics", limit: None, run: asymptotics },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let result = match (result, c.limit) {
            (Ok(_), Some(limit)) if elapsed > Duration::from_secs(limit) => Err(format!("took longer than {limit} s")),
            (r, _) => r,
        };
        let limit = c.limit.map(|l| format!(", limit {l} s")).unwrap_or_default();
        let (status, detail) = match result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {status} {}: {detail} [{:.2} s{limit}]", i + 1, c.name, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
