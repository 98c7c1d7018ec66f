//! Acceptance suite: one pass/fail line per criterion, non-zero exit on any failure.

use std::f64::consts::FRAC_PI_2;
use std::time::{Duration, Instant};

use fermidim::algebra::{verify_algebra, verify_ybe};
use fermidim::counting::{enumerate_count, kasteleyn_count, rotated_count, rotated_traces};
use fermidim::cylinder::{
    verify_appendix_a, verify_braid, verify_commutation, verify_crossing, verify_inversion_cylinder,
};
use fermidim::linalg::{eigenvalues, C64};
use fermidim::qseries::{column_generating_function, continuum_compare, gaussian_binomial, verify_columns, verify_mipf};
use fermidim::spectra::{character_crosscheck, verify_selection_rules};
use fermidim::strip::{
    jordan_structure, strip_hamiltonian, verify_inversion_strip, verify_strip_commutation, verify_strip_forms,
    JordanMode,
};
use fermidim::thermo::{free_energy_hyperbolic, free_energy_trigonometric, residual_entropy};
use fermidim::cylinder::Class;
use fermidim::Report;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn points(count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(0.05..FRAC_PI_2 - 0.05)).collect()
}

fn big(s: &str) -> BigInt {
    s.parse().unwrap()
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    let t = start.elapsed();
    if t > budget {
        Err(format!("took {t:.2?}, budget {budget:.0?}"))
    } else {
        Ok(())
    }
}

fn require(rep: Report) -> Result<f64, String> {
    if rep.pass {
        Ok(rep.max_residual)
    } else {
        Err(format!("{}: residual {:.3e} > {:.0e}; {:?}", rep.name, rep.max_residual, rep.tolerance, rep.notes))
    }
}

fn rotated_table() -> Outcome {
    let start = Instant::now();
    let table: [&[u64]; 5] = [
        &[4, 8, 16, 32, 64],
        &[24, 80, 288, 1088],
        &[448, 2624, 15616],
        &[26752, 280832],
        &[5080064],
    ];
    for (i, row) in table.iter().enumerate() {
        let m = i + 1;
        for (k, &want) in row.iter().enumerate() {
            let n = m + k;
            for (a, b) in [(m, n), (n, m)] {
                let got = rotated_count(a, b, None).map_err(|e| e.to_string())?.value;
                if got != BigInt::from(want) {
                    return Err(format!("Z_{a}x{b} = {got}, expected {want}"));
                }
            }
        }
    }
    let z88 = rotated_count(8, 8, None).map_err(|e| e.to_string())?.value;
    if z88 != big("38735278017380352") {
        return Err(format!("Z_8x8 = {z88}"));
    }
    within(start, Duration::from_secs(10))?;
    Ok(format!("15 entries (both orders) and Z_8x8 = {z88}"))
}

fn standard_table() -> Outcome {
    let start = Instant::now();
    let table: [&[u64]; 4] = [&[8, 36, 200, 1156], &[272, 3108, 39952], &[90176, 3113860], &[311853312]];
    for (i, row) in table.iter().enumerate() {
        let m = 2 * (i + 1);
        for (k, &want) in row.iter().enumerate() {
            let n = m + 2 * k;
            for (a, b) in [(m, n), (n, m)] {
                let got = kasteleyn_count(a, b).map_err(|e| e.to_string())?.value;
                if got != BigInt::from(want) {
                    return Err(format!("standard Z_{a}x{b} = {got}, expected {want}"));
                }
            }
        }
    }
    within(start, Duration::from_secs(1))?;
    Ok("10 entries (both orders), Z_8x8 = 311853312".into())
}

fn oracle_triangle() -> Outcome {
    let start = Instant::now();
    let mut small = 0;
    for m in 1..=9 {
        for n in 1..=9 / m {
            let f = rotated_count(m, n, None).map_err(|e| e.to_string())?.value;
            let t = fermidim::counting::rotated_count_trace(m, n).map_err(|e| e.to_string())?.value;
            let e = enumerate_count(m, n).map_err(|e| e.to_string())?.value;
            if f != t || f != e {
                return Err(format!("{m}x{n}: formula {f}, trace {t}, enumeration {e}"));
            }
            small += 1;
        }
    }
    let mut large = 0;
    for n in 1..=12 {
        let traces = rotated_traces(12, n).map_err(|e| e.to_string())?;
        for (k, t) in traces.iter().enumerate() {
            let m = k + 1;
            let f = rotated_count(m, n, None).map_err(|e| e.to_string())?.value;
            if f != BigInt::from(t.clone()) {
                return Err(format!("{m}x{n}: formula {f}, trace {t}"));
            }
            large += 1;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{small} triple agreements (MN <= 9), {large} formula = trace (M, N <= 12)"))
}

fn identity_suite() -> Outcome {
    let start = Instant::now();
    let us = points(10, 4);
    let vs = points(10, 5);
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    let mut take = |rep: Report| -> Result<(), String> {
        worst = worst.max(require(rep)?);
        checks += 1;
        Ok(())
    };
    for n in 2..=8 {
        take(verify_algebra(n).map_err(|e| e.to_string())?)?;
        take(verify_braid(n).map_err(|e| e.to_string())?)?;
        for (&u, &v) in us.iter().zip(&vs) {
            if n >= 3 {
                take(verify_ybe(n, u, v).map_err(|e| e.to_string())?)?;
            }
            take(verify_crossing(n, u).map_err(|e| e.to_string())?)?;
            take(verify_commutation(n, u, v).map_err(|e| e.to_string())?)?;
            take(verify_inversion_cylinder(n, u, C64::new(1.0, 0.0)).map_err(|e| e.to_string())?)?;
            take(verify_inversion_strip(n, u).map_err(|e| e.to_string())?)?;
            take(verify_strip_commutation(n, u, v).map_err(|e| e.to_string())?)?;
        }
    }
    for &u in &us {
        take(verify_appendix_a(u).map_err(|e| e.to_string())?)?;
    }
    if worst > 1e-10 {
        return Err(format!("worst residual {worst:.3e}"));
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("{checks} checks, worst residual {worst:.2e}"))
}

fn spectral_coincidence() -> Outcome {
    let mut checks = 0;
    for n in 1..=8 {
        for u in points(3, 10 + n as u64) {
            require(verify_selection_rules(n, u).map_err(|e| e.to_string())?)?;
            checks += 1;
        }
    }
    Ok(format!("{checks} (N, u) pairs matched with selection rules"))
}

fn column_combinatorics() -> Outcome {
    require(verify_columns(9).map_err(|e| e.to_string())?)?;
    let printed = [(Class::Z4, 7, -2, 5), (Class::Ramond, 6, 1, 2), (Class::NeveuSchwarz, 7, 1, 2)];
    for (class, n, sigma, m) in printed {
        let col = column_generating_function(class, n, sigma).map_err(|e| e.to_string())?;
        if col != gaussian_binomial(n, m).map_err(|e| e.to_string())? {
            return Err(format!("{} n={n} sigma={sigma} is not [{n},{m}]", class.short()));
        }
    }
    Ok("all classes, n <= 9, all sigma; printed [7,5], [6,2], [7,2]".into())
}

fn finitized_mipf() -> Outcome {
    for n in [2, 4, 6, 8] {
        require(verify_mipf(n).map_err(|e| e.to_string())?)?;
    }
    let mut levels = Vec::new();
    for n in [8, 12] {
        let cutoff = (n / 4) as u32;
        require(continuum_compare(n, cutoff).map_err(|e| e.to_string())?)?;
        levels.push(format!("N={n} to level {cutoff}"));
    }
    Ok(format!("sector sum = product, Z(1) = 2^N; continuum agrees {}", levels.join(", ")))
}

fn character_crosschecks() -> Outcome {
    let mut sectors = 0;
    for n in 1..=6 {
        for ell in (n % 2..=n).step_by(2) {
            require(character_crosscheck(n, ell).map_err(|e| e.to_string())?)?;
            sectors += 1;
        }
    }
    Ok(format!("{sectors} sectors exact"))
}

fn thermodynamics() -> Outcome {
    let t = residual_entropy().map_err(|e| e.to_string())?;
    for (name, got, want) in [
        ("G", t.catalan, 0.915965594),
        ("S", t.entropy, 0.583121808),
        ("W", t.molecular_freedom, 1.791622812),
    ] {
        if (got - want).abs() > 1e-8 {
            return Err(format!("{name} = {got}, expected {want}"));
        }
    }
    let mut gap: f64 = 0.0;
    for k in 1..=20 {
        let u = FRAC_PI_2 * k as f64 / 21.0;
        let a = free_energy_hyperbolic(u).map_err(|e| e.to_string())?;
        let b = free_energy_trigonometric(u).map_err(|e| e.to_string())?;
        gap = gap.max((a - b).abs());
    }
    if gap > 1e-9 {
        return Err(format!("free-energy forms differ by {gap:.3e}"));
    }
    let mut prev = f64::INFINITY;
    let mut seq = Vec::new();
    for m in [4usize, 6, 8, 10, 12] {
        let z = rotated_count(m, m, None).map_err(|e| e.to_string())?.value;
        let per = fermidim::counting::ln_bigint(&z) / (m * m) as f64;
        let per = per.exp();
        if per >= prev || per <= t.molecular_freedom {
            return Err(format!("Z_{m}x{m}^(1/M^2) = {per} not decreasing towards W"));
        }
        prev = per;
        seq.push(format!("{per:.7}"));
    }
    Ok(format!("G, S, W to 1e-8; forms agree to {gap:.1e}; growth {}", seq.join(" > ")))
}

fn jordan() -> Outcome {
    let exact = |n| {
        jordan_structure(&strip_hamiltonian(n).unwrap().matrix, JordanMode::Exact).map_err(|e| e.to_string())
    };
    let s2 = exact(2)?;
    if s2.entries.len() != 1 || s2.entries[0].eigenvalue.norm() > 1e-12 || s2.entries[0].blocks != [2, 1, 1] {
        return Err(format!("N=2: {s2:?}"));
    }
    let s4 = exact(4)?;
    let r2 = std::f64::consts::SQRT_2;
    let expect: [(f64, &[usize]); 3] = [(0.0, &[2, 2, 1, 1, 1, 1]), (-r2, &[2, 1, 1]), (r2, &[2, 1, 1])];
    if s4.entries.len() != 3 {
        return Err(format!("N=4: {s4:?}"));
    }
    for (lambda, blocks) in expect {
        match s4.find(C64::new(lambda, 0.0), 1e-9) {
            Some(e) if e.blocks == blocks => {}
            other => return Err(format!("N=4 at {lambda}: {other:?}")),
        }
    }
    let mut max_imag: f64 = 0.0;
    for n in 2..=8 {
        require(verify_strip_forms(n).map_err(|e| e.to_string())?)?;
        let h = strip_hamiltonian(n).map_err(|e| e.to_string())?.matrix;
        for z in eigenvalues(&h) {
            max_imag = max_imag.max(z.im.abs());
        }
    }
    // defective eigenvalues split by O(sqrt(eps)) under rounding
    if max_imag > 1e-6 {
        return Err(format!("strip spectrum has imaginary part {max_imag:.3e}"));
    }
    Ok(format!("N=2, N=4 block-for-block; spectrum real (|Im| <= {max_imag:.1e}) for N <= 8; forms exact"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("rotated counting table", rotated_table),
        ("standard counting table", standard_table),
        ("oracle triangle", oracle_triangle),
        ("identity suite", identity_suite),
        ("spectral coincidence", spectral_coincidence),
        ("column q-combinatorics", column_combinatorics),
        ("finitized MIPF", finitized_mipf),
        ("character cross-check", character_crosschecks),
        ("thermodynamics", thermodynamics),
        ("Jordan structure", jordan),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let t = start.elapsed();
        match result {
            Ok(msg) => println!("criterion {:>2} PASS [{t:>9.2?}] {name}: {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL [{t:>9.2?}] {name}: {msg}", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
