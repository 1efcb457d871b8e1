use hypdisc::clifford::CliffordNumber;
use hypdisc::mobius::CliffordMatrix;
use hypdisc::sampling;
use rand::Rng;

fn pad(n: u32, parts: &[f64]) -> Vec<f64> {
    let mut v = parts.to_vec();
    v.resize(n as usize + 1, 0.0);
    v
}

fn main() {
    let mut rng = sampling::rng(3003);
    for i in 0..1000 {
        let (m, label): (CliffordMatrix, String) = match i % 4 {
            0 => {
                let n = 1 + (i / 4 % 2) as u32;
                let r: f64 = rng.random_range(1.1..2.5);
                let th: f64 = rng.random_range(0.05..1.2);
                let lam = CliffordNumber::vector(n, &pad(n, &[r * th.cos(), r * th.sin()]));
                (CliffordMatrix::diagonal(lam).unwrap(), format!("lox n={n} r={r:.3} th={th:.3}"))
            }
            1 => {
                let n = 1 + (i / 4 % 2) as u32;
                let th: f64 = rng.random_range(0.05..1.2);
                let lam = CliffordNumber::vector(n, &pad(n, &[th.cos(), th.sin()]));
                (CliffordMatrix::diagonal(lam).unwrap(), format!("ell n={n} th={th:.3}"))
            }
            2 => {
                let n = (i / 4 % 3) as u32;
                let mut parts = vec![0.0f64; n as usize + 1];
                for p in parts.iter_mut() { *p = rng.random_range(-1.5..1.5); }
                if parts.iter().all(|p| p.abs() < 0.2) { parts[0] = 1.0; }
                (CliffordMatrix::translation(CliffordNumber::vector(n, &parts)), format!("trans n={n}"))
            }
            _ => {
                let th: f64 = rng.random_range(0.05..1.2);
                let tl: f64 = rng.random_range(0.4..1.5);
                let rot = CliffordNumber::vector(2, &[th.cos(), th.sin(), 0.0]);
                let diag = CliffordMatrix::diagonal(rot).unwrap();
                let shift = CliffordMatrix::translation(CliffordNumber::vector(2, &[0.0, 0.0, tl]));
                (shift.mat_mul(&diag), format!("screw th={th:.3} tl={tl:.3}"))
            }
        };
        let r = std::panic::catch_unwind(|| hypdisc::lorentz::classify(&m));
        match r {
            Ok(Ok(_)) => {}
            Ok(Err(e)) => { println!("i={i} {label}: classify error {e}"); }
            Err(_) => { println!("i={i} {label}: PANIC"); println!("matrix {m:?}"); break; }
        }
        let s = sampling::random_matrix(&mut rng, m.n(), 3);
        let conj = m.conjugate_by(&s);
        let r = std::panic::catch_unwind(|| hypdisc::lorentz::classify(&conj));
        match r {
            Ok(Ok(_)) => {}
            Ok(Err(e)) => { println!("i={i} {label} conj: classify error {e}"); }
            Err(_) => {
                println!("i={i} {label} conj: PANIC");
                println!("conjugator {s:?}");
                let l = hypdisc::lorentz::to_lorentz(&conj);
                match l {
                    Ok(l) => println!("lorentz ok defect {:.3e} max {:.3e}", l.defect(), l.m.abs().max()),
                    Err(e) => println!("to_lorentz: {e}"),
                }
                break;
            }
        }
    }
    println!("done");
}
