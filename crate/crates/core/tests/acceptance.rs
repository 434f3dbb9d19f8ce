//! Exit criteria. Each one prints a single PASS/FAIL line; the process fails
//! if any criterion does.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quandle_hilbert::braid::{
    coloring_count, dominant_coloring_count, BraidAction, BraidWord, DEFAULT_STATE_BUDGET,
};
use quandle_hilbert::catalog::{self, enumerate_quandles, identify, table_degree, table_report};
use quandle_hilbert::invariants::{dim_q, pi0, DEFAULT_GROUP_CAP};
use quandle_hilbert::polyfit::{
    binomial, fit_hilbert, genfunc, pole_order, series_product, IntValuedPoly, RationalGenFunc,
    MIN_SURPLUS,
};
use quandle_hilbert::quandle::{dihedral, disjoint_union, product, trivial, Quandle};
use quandle_hilbert::series::{dominant_decomposition, graded_cardinality, graded_series};
use quandle_hilbert::stats::{
    burnside_exact, covariance, moment, monte_carlo_mean, BURNSIDE_STATE_LIMIT,
};
use quandle_hilbert::Error;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table_reproduction() -> Outcome {
    let rows = table_report(DEFAULT_STATE_BUDGET).map_err(|e| e.to_string())?;
    check(rows.len() == 12, || format!("{} rows", rows.len()))?;
    let mut reported = Vec::new();
    for r in &rows {
        let allowed_eta = r.name == "C3";
        let allowed_dom = r.name == "D3_plus";
        check(r.p_matches, || {
            format!(
                "{}: P printed {} computed {}",
                r.name, r.published.p, r.graded.poly
            )
        })?;
        check(r.p_dom_matches || allowed_dom, || {
            format!(
                "{}: P_dom printed {} computed {}",
                r.name, r.published.p_dom, r.dominant.poly
            )
        })?;
        check(r.eta_matches || allowed_eta, || {
            format!(
                "{}: eta printed {} computed {}",
                r.name, r.published.eta, r.graded.eta
            )
        })?;
        if allowed_eta {
            // the computed value must be reported, and it must be the one the pole order forces
            let forced = RationalGenFunc::from_i64(&[1, 1, -1], 3);
            check(r.graded.eta == forced, || {
                format!("C3 eta computed {}", r.graded.eta)
            })?;
            let d = r.discrepancies();
            check(
                !r.eta_matches && d.iter().any(|s| s.contains(&forced.to_string())),
                || format!("C3 eta discrepancy not reported: {d:?}"),
            )?;
            reported.push(d.join("; "));
        }
        if allowed_dom {
            reported.push(format!(
                "D3_plus P_dom: printed {}, computed {}{}",
                r.published.p_dom,
                r.dominant.poly,
                if r.p_dom_matches { " (agree)" } else { "" }
            ));
        }
    }
    Ok(format!("12 rows exact; reported: {}", reported.join(" | ")))
}

fn dihedral_closed_forms() -> Outcome {
    let mut checked = 0;
    for (l, p, r) in [
        (3usize, 3u64, 1u32),
        (4, 2, 2),
        (5, 5, 1),
        (8, 2, 3),
        (9, 3, 2),
    ] {
        for n in 3..=6usize {
            let got = graded_cardinality(&dihedral(l), n, DEFAULT_STATE_BUDGET)
                .map_err(|e| e.to_string())?;
            let want = if p == 2 {
                2u64.pow(r) + 2u64.pow(r - 1) * r as u64 * (n as u64 - 1)
            } else {
                (r as u64 + 1) * p.pow(r)
            };
            check(got == want, || format!("D{l} n={n}: {got} != {want}"))?;
            checked += 1;
        }
    }
    for n in 0..=5 {
        let a = |l| graded_cardinality(&dihedral(l), n, DEFAULT_STATE_BUDGET).unwrap();
        check(a(6) == a(2) * a(3), || {
            format!("D6 n={n}: {} != {}·{}", a(6), a(2), a(3))
        })?;
        checked += 1;
    }
    Ok(format!("{checked} exact values"))
}

fn burnside_identity() -> Outcome {
    let (mut checked, mut capped) = (0, 0);
    for e in catalog::all() {
        for n in 1..=16usize {
            if (e.quandle.size() as u128).pow(n as u32) > BURNSIDE_STATE_LIMIT as u128 {
                break;
            }
            match burnside_exact(&e.quandle, n, DEFAULT_GROUP_CAP) {
                Ok(rep) => {
                    check(rep.equal, || {
                        format!(
                            "{} n={n}: average {} vs {} orbits",
                            e.name, rep.average_fixed_points, rep.orbit_count
                        )
                    })?;
                    checked += 1;
                }
                Err(Error::GroupTooLarge(_)) => capped += 1,
                Err(err) => return Err(format!("{} n={n}: {err}", e.name)),
            }
        }
    }
    Ok(format!(
        "{checked} instances equal; {capped} beyond the group cap"
    ))
}

fn degree_theorems() -> Outcome {
    for e in catalog::all() {
        let q = &e.quandle;
        let n = table_degree(q.size());
        let dim = dim_q(q).map_err(|e| e.to_string())? as i64;
        let comps = pi0(q).len() as i64;
        // no expected degree: detection is independent of the theorem
        let s = graded_series(q, n, DEFAULT_STATE_BUDGET).map_err(|e| e.to_string())?;
        let (p, cert) = fit_hilbert(&s, None, MIN_SURPLUS).map_err(|e| e.to_string())?;
        check(p.degree() == dim - 1, || {
            format!("{}: deg P {} dim {dim}", e.name, p.degree())
        })?;
        let eta = genfunc(&s, &p, cert.n0).map_err(|e| e.to_string())?;
        check(pole_order(&eta) as i64 == dim, || {
            format!("{}: pole {} dim {dim}", e.name, pole_order(&eta))
        })?;
        let d = dominant_decomposition(q, n, DEFAULT_STATE_BUDGET).map_err(|e| e.to_string())?;
        let (pd, _) = fit_hilbert(d.full(), None, MIN_SURPLUS).map_err(|e| e.to_string())?;
        check(pd.degree() == comps - 1, || {
            format!("{}: deg P_dom {} |pi0| {comps}", e.name, pd.degree())
        })?;
    }
    Ok("12 quandles".into())
}

fn structural_identities() -> Outcome {
    let all = catalog::all();
    for e in &all {
        let q = &e.quandle;
        let n = table_degree(q.size());
        let d = dominant_decomposition(q, n, DEFAULT_STATE_BUDGET).map_err(|e| e.to_string())?;
        let total = graded_series(q, n, DEFAULT_STATE_BUDGET).map_err(|e| e.to_string())?;
        for k in 0..=8.min(n) {
            let sum: u64 = d.dominant.iter().map(|s| s.values[k]).sum();
            check(sum == total.values[k], || {
                format!("{} n={k}: {sum} != {}", e.name, total.values[k])
            })?;
        }
        let mut sum = IntValuedPoly::zero();
        for s in &d.dominant {
            let (p, _) =
                fit_hilbert(s, None, MIN_SURPLUS).map_err(|err| format!("{}: {err}", e.name))?;
            sum = &sum + &p;
        }
        let (p, _) = fit_hilbert(&total, None, MIN_SURPLUS).map_err(|e| e.to_string())?;
        check(sum == p, || {
            format!("{}: sum of P_dom {sum} vs P {p}", e.name)
        })?;
    }
    let eta = |q: &Quandle| -> Result<RationalGenFunc, String> {
        let s = graded_series(q, 10, DEFAULT_STATE_BUDGET).map_err(|e| e.to_string())?;
        let (p, c) = fit_hilbert(&s, None, MIN_SURPLUS).map_err(|e| e.to_string())?;
        genfunc(&s, &p, c.n0).map_err(|e| e.to_string())
    };
    let pairs = [
        ("J", "T1"),
        ("D3", "T1"),
        ("T2", "J"),
        ("J", "J"),
        ("D3", "D3"),
    ];
    for (a, b) in pairs {
        let (qa, qb) = (
            catalog::builtin(a).unwrap().quandle,
            catalog::builtin(b).unwrap().quandle,
        );
        let u = disjoint_union(&qa, &qb);
        let prod = series_product(&eta(&qa)?, &eta(&qb)?);
        let direct = graded_series(&u, 8, DEFAULT_STATE_BUDGET).map_err(|e| e.to_string())?;
        let want: Vec<BigInt> = direct.values.iter().map(|&v| v.into()).collect();
        check(prod.expand(9) == want, || {
            format!("{a}+{b}: product expansion differs")
        })?;
    }
    let mut pairs_checked = 0;
    for a in &all {
        for b in &all {
            let (q, r) = (&a.quandle, &b.quandle);
            if q.size() * r.size() > 12 {
                continue;
            }
            let p = product(q, r);
            check(pi0(&p).len() == pi0(q).len() * pi0(r).len(), || {
                format!("pi0 {} x {}", a.name, b.name)
            })?;
            let dims = (dim_q(&p).unwrap(), dim_q(q).unwrap() * dim_q(r).unwrap());
            check(dims.0 == dims.1, || {
                format!("dim {} x {}: {:?}", a.name, b.name, dims)
            })?;
            pairs_checked += 1;
        }
    }
    Ok(format!(
        "sum rule and decomposition on 12 quandles; 5 union pairs; {pairs_checked} product pairs"
    ))
}

fn random_word(rng: &mut ChaCha8Rng, strands: usize, max_len: usize) -> BraidWord {
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len)
        .map(|_| {
            let i = rng.gen_range(1..strands as i32);
            if rng.gen() {
                i
            } else {
                -i
            }
        })
        .collect();
    BraidWord::new(strands, letters).unwrap()
}

fn coloring_invariance() -> Outcome {
    let mut words = 0;
    for (k, e) in catalog::all().into_iter().enumerate() {
        let q = &e.quandle;
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + k as u64);
        let top = (2..=4)
            .filter(|&n| (q.size() as u64).pow(n as u32) <= 100_000)
            .max()
            .unwrap_or(2);
        for _ in 0..100 {
            let n = rng.gen_range(2..=top);
            let w = random_word(&mut rng, n, 12);
            let action = BraidAction::new(q, n, DEFAULT_STATE_BUDGET).map_err(|e| e.to_string())?;
            // splice a braid relation into w at a random point
            let cut = rng.gen_range(0..=w.len());
            let (head, tail) = w.letters().split_at(cut);
            let splice = |mid: &[i32]| {
                let v: Vec<i32> = head.iter().chain(mid).chain(tail).copied().collect();
                action.word_permutation(&BraidWord::new(n, v).unwrap())
            };
            let i = rng.gen_range(1..n as i32);
            if i + 1 < n as i32 {
                check(splice(&[i, i + 1, i]) == splice(&[i + 1, i, i + 1]), || {
                    format!("{} braid relation", e.name)
                })?;
            }
            if i + 2 < n as i32 {
                check(splice(&[i, i + 2]) == splice(&[i + 2, i]), || {
                    format!("{} far commutation", e.name)
                })?;
            }
            check(splice(&[i, -i]) == splice(&[]), || {
                format!("{} inverse letters", e.name)
            })?;
            let c = coloring_count(q, &w, DEFAULT_STATE_BUDGET).map_err(|e| e.to_string())?;
            let u = random_word(&mut rng, n, 12);
            let conj = coloring_count(q, &w.conjugate_by(&u), DEFAULT_STATE_BUDGET)
                .map_err(|e| e.to_string())?;
            check(conj == c, || format!("{} conjugation: {w} by {u}", e.name))?;
            let stab = coloring_count(q, &w.stabilize(rng.gen()), DEFAULT_STATE_BUDGET)
                .map_err(|e| e.to_string())?;
            check(stab == c, || format!("{} stabilization: {w}", e.name))?;
            words += 1;
        }
    }
    Ok(format!("{words} words"))
}

fn trefoil() -> Outcome {
    let w = BraidWord::parse(2, "1 1 1").map_err(|e| e.to_string())?;
    let c = coloring_count(&dihedral(3), &w, DEFAULT_STATE_BUDGET).map_err(|e| e.to_string())?;
    let d = dominant_coloring_count(&dihedral(3), &w, DEFAULT_STATE_BUDGET)
        .map_err(|e| e.to_string())?;
    check(c == 9 && d == 6, || format!("colorings {c}, dominant {d}"))?;
    Ok("9 colorings, 6 dominant".into())
}

fn moments() -> Outcome {
    for n in 0..=6usize {
        let m = moment(&trivial(2), n, 2, DEFAULT_STATE_BUDGET).map_err(|e| e.to_string())?;
        let want = binomial(n as i64 + 3, 3);
        check(BigInt::from(m) == want, || format!("n={n}: {m} != {want}"))?;
    }
    let c =
        covariance(&trivial(2), &trivial(2), 2, DEFAULT_STATE_BUDGET).map_err(|e| e.to_string())?;
    check(c.covariance == 1, || format!("Var = {}", c.covariance))?;
    Ok("E[c^2] = C(n+3,3) for n <= 6; Var(c_{T2,2}) = 1".into())
}

fn monte_carlo() -> Outcome {
    let seeds = [1u64, 2, 3, 4, 5];
    let mut hits = 0;
    let mut detail = Vec::new();
    for s in seeds {
        let e = monte_carlo_mean(&dihedral(3), 3, 10_000, 64, s, DEFAULT_STATE_BUDGET)
            .map_err(|e| e.to_string())?;
        let ok = e.within(6.0, 3.0);
        hits += ok as usize;
        detail.push(format!("{:.4}±{:.4}", e.mean_f64(), e.standard_error()));
    }
    check(hits >= 4, || {
        format!("{hits}/5 within 3 SE: {}", detail.join(", "))
    })?;
    Ok(format!("{hits}/5 within 3 SE: {}", detail.join(", ")))
}

fn classification() -> Outcome {
    let mut counts = Vec::new();
    let mut unmatched = Vec::new();
    for order in 0..=4 {
        let classes = enumerate_quandles(order).map_err(|e| e.to_string())?;
        counts.push(classes.len());
        let mut names: Vec<&str> = Vec::new();
        for q in &classes {
            match identify(q) {
                Some(n) => names.push(n),
                None => unmatched.push(format!("order {order}: {:?}", q.rows())),
            }
        }
        let len = names.len();
        names.sort();
        names.dedup();
        check(names.len() == len, || {
            format!("order {order}: two classes share a row")
        })?;
    }
    check(counts == [1, 1, 1, 3, 7], || {
        format!("class counts {counts:?}")
    })?;
    check(unmatched.is_empty(), || {
        format!(
            "counts {counts:?}; classes without a row: {}",
            unmatched.join(", ")
        )
    })?;
    Ok(format!("class counts {counts:?}, each matched to one row"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("table reproduction", table_reproduction),
        ("dihedral closed forms", dihedral_closed_forms),
        ("Burnside identity", burnside_identity),
        ("degree theorems", degree_theorems),
        ("structural identities", structural_identities),
        ("coloring invariance", coloring_invariance),
        ("trefoil", trefoil),
        ("moments", moments),
        ("Monte Carlo mean", monte_carlo),
        ("classification", classification),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {:>2} {name}: PASS ({msg}) [{secs:.2}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({msg}) [{secs:.2}s]", i + 1)
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
