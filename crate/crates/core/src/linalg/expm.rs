//! Matrix exponential by scaling and squaring with diagonal Padé
//! approximants (Higham 2005, "The scaling and squaring method for the
//! matrix exponential revisited").

use nalgebra::DMatrix;

use super::C64;

const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.539_398_330_063_23e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068e0;
const THETA_13: f64 = 5.371920351148152e0;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

pub fn norm1(a: &DMatrix<C64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn scaled(a: &DMatrix<C64>, s: f64) -> DMatrix<C64> {
    a * C64::new(s, 0.0)
}

/// Odd part `U` and even part `V` of a low-order Padé numerator.
fn low_order(a: &DMatrix<C64>, b: &[f64]) -> (DMatrix<C64>, DMatrix<C64>) {
    let n = a.nrows();
    let ident = DMatrix::<C64>::identity(n, n);
    let a2 = a * a;
    let mut powers = vec![ident, a2.clone()];
    for _ in 2..b.len() / 2 {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut u = DMatrix::<C64>::zeros(n, n);
    let mut v = DMatrix::<C64>::zeros(n, n);
    for (j, p) in powers.iter().enumerate() {
        u += scaled(p, b[2 * j + 1]);
        v += scaled(p, b[2 * j]);
    }
    (a * u, v)
}

fn pade13(a: &DMatrix<C64>) -> (DMatrix<C64>, DMatrix<C64>) {
    let n = a.nrows();
    let b = &B13;
    let ident = DMatrix::<C64>::identity(n, n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = scaled(&a6, b[13]) + scaled(&a4, b[11]) + scaled(&a2, b[9]);
    let u = a * (&a6 * inner_u
        + scaled(&a6, b[7])
        + scaled(&a4, b[5])
        + scaled(&a2, b[3])
        + scaled(&ident, b[1]));
    let inner_v = scaled(&a6, b[12]) + scaled(&a4, b[10]) + scaled(&a2, b[8]);
    let v = &a6 * inner_v
        + scaled(&a6, b[6])
        + scaled(&a4, b[4])
        + scaled(&a2, b[2])
        + scaled(&ident, b[0]);
    (u, v)
}

/// `exp(a)`. Returns `None` if the result is not finite.
pub fn expm(a: &DMatrix<C64>) -> Option<DMatrix<C64>> {
    assert!(a.is_square(), "expm: matrix must be square");
    let n = a.nrows();
    if n == 0 {
        return Some(a.clone());
    }
    let norm = norm1(a);
    let (u, v, squarings) = if norm <= THETA_3 {
        let (u, v) = low_order(a, &B3);
        (u, v, 0)
    } else if norm <= THETA_5 {
        let (u, v) = low_order(a, &B5);
        (u, v, 0)
    } else if norm <= THETA_7 {
        let (u, v) = low_order(a, &B7);
        (u, v, 0)
    } else if norm <= THETA_9 {
        let (u, v) = low_order(a, &B9);
        (u, v, 0)
    } else {
        let s = (norm / THETA_13).log2().ceil().max(0.0) as i32;
        let a = scaled(a, 2f64.powi(-s));
        let (u, v) = pade13(&a);
        (u, v, s)
    };

    // r = (V - U)^{-1} (V + U)
    let p = &v + &u;
    let q = v - u;
    let mut r = q.lu().solve(&p)?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    r.iter().all(|x| x.re.is_finite() && x.im.is_finite()).then_some(r)
}
