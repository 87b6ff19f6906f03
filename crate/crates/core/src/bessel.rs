//! Bessel functions of the first kind, orders zero and one.
//!
//! `j0` follows the Cephes rational/asymptotic split (rational approximation
//! on [0, 5], Hankel asymptotic expansion beyond); `j1` follows the FreeBSD
//! msun `e_j1.c` scheme. Both are accurate to a few ulp of the oscillation
//! envelope over the argument range used by the Hankel quadrature.
//!
//! The `j1` coefficient tables originate from FreeBSD msun:
//! Copyright (C) 1993 by Sun Microsystems, Inc. All rights reserved.
//! Developed at SunSoft. Permission to use, copy, modify, and distribute
//! this software is freely granted, provided that this notice is preserved.

#[allow(unused_imports)]
use num_traits::Float;

use core::f64::consts::{FRAC_PI_4, PI};

const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;

fn polevl(x: f64, coef: &[f64]) -> f64 {
    let mut r = coef[0];
    for &c in &coef[1..] {
        r = r * x + c;
    }
    r
}

/// Like `polevl` with an implicit leading coefficient of 1.
fn p1evl(x: f64, coef: &[f64]) -> f64 {
    let mut r = x + coef[0];
    for &c in &coef[1..] {
        r = r * x + c;
    }
    r
}

// j0 rational approximation on [0, 5]; DR1, DR2 are the first two zeros
// of J0 squared.
const DR1: f64 = 5.783185962946784;
const DR2: f64 = 30.471262343662087;

static RP: [f64; 4] = [
    -4.794432209782018e9,
    1.9561749194655657e12,
    -2.4924834436096772e14,
    9.708622510473064e15,
];
static RQ: [f64; 8] = [
    4.99563147152651e2,
    1.737854016763747e5,
    4.844096583399621e7,
    1.1185553704535683e10,
    2.112775201154892e12,
    3.1051822985742256e14,
    3.1812195594320496e16,
    1.7108629408104315e18,
];
static PP: [f64; 7] = [
    7.969367292973471e-4,
    8.283523921074408e-2,
    1.239533716464143,
    5.447250030587687,
    8.74716500199817,
    5.303240382353949,
    1.0,
];
static PQ: [f64; 7] = [
    9.244088105588637e-4,
    8.562884743544745e-2,
    1.2535274390105895,
    5.470977403304171,
    8.761908832370695,
    5.306052882353947,
    1.0,
];
static QP: [f64; 8] = [
    -1.1366383889846916e-2,
    -1.2825271867050931,
    -1.9553954425773597e1,
    -9.320601521237683e1,
    -1.7768116798048806e2,
    -1.4707750515495118e2,
    -5.141053267665993e1,
    -6.050143506007285,
];
static QQ: [f64; 7] = [
    6.43178256118178e1,
    8.564300259769806e2,
    3.8824018360540163e3,
    7.240467741956525e3,
    5.930727011873169e3,
    2.0620933166032783e3,
    2.420057402402914e2,
];

/// Bessel function of the first kind, order zero.
pub fn j0(x: f64) -> f64 {
    let x = x.abs();
    if x <= 5.0 {
        let z = x * x;
        if x < 1e-5 {
            return 1.0 - z / 4.0;
        }
        let p = (z - DR1) * (z - DR2);
        return p * polevl(z, &RP) / p1evl(z, &RQ);
    }
    let w = 5.0 / x;
    let q = 25.0 / (x * x);
    let p = polevl(q, &PP) / polevl(q, &PQ);
    let q = polevl(q, &QP) / p1evl(q, &QQ);
    let xn = x - FRAC_PI_4;
    let r = p * xn.cos() - w * q * xn.sin();
    r * SQRT_2_OVER_PI / x.sqrt()
}

// j1 on [0, 2]: j1(x) = x/2 + x*z*R(z)/S(z), z = x^2.
const R00: f64 = -6.25000000000000000000e-2;
const R01: f64 = 1.40705666955189706048e-3;
const R02: f64 = -1.59955631084035597520e-5;
const R03: f64 = 4.96727999609584448412e-8;
const S01: f64 = 1.91537599538363460805e-2;
const S02: f64 = 1.85946785588630915560e-4;
const S03: f64 = 1.17718464042623683263e-6;
const S04: f64 = 5.04636257076217042715e-9;
const S05: f64 = 1.23542274426137913908e-11;

static PR8: [f64; 6] = [
    0.0,
    1.17187499999988647970e-1,
    1.32394806593073575129e1,
    4.12051854307378562225e2,
    3.87474538913960532227e3,
    7.91447954031891731574e3,
];
static PS8: [f64; 5] = [
    1.14207370375678408436e2,
    3.65093083420853463394e3,
    3.69562060269033463555e4,
    9.76027935934950801311e4,
    3.08042720627888811578e4,
];
static PR5: [f64; 6] = [
    1.31990519556243522749e-11,
    1.17187493190614097638e-1,
    6.80275127868432871736,
    1.08308182990189109773e2,
    5.17636139533199752805e2,
    5.28715201363337541807e2,
];
static PS5: [f64; 5] = [
    5.92805987221131331921e1,
    9.91401418733614377743e2,
    5.35326695291487976647e3,
    7.84469031749551231769e3,
    1.50404688810361062679e3,
];
static PR3: [f64; 6] = [
    3.02503916137373618024e-9,
    1.17186865567253592491e-1,
    3.93297750033315640650,
    3.51194035591636932736e1,
    9.10550110750781271918e1,
    4.85590685197364919645e1,
];
static PS3: [f64; 5] = [
    3.47913095001251519989e1,
    3.36762458747825746741e2,
    1.04687139975775130551e3,
    8.90811346398256432622e2,
    1.03787932439639277504e2,
];
static PR2: [f64; 6] = [
    1.07710830106873743082e-7,
    1.17176219462683348094e-1,
    2.36851496667608785174,
    1.22426109148261232917e1,
    1.76939711271687727390e1,
    5.07352312588818499250,
];
static PS2: [f64; 5] = [
    2.14364859363821409488e1,
    1.25290227168402751090e2,
    2.32276469057162813669e2,
    1.17679373287147100768e2,
    8.36463893371618283368,
];

fn pone(x: f64) -> f64 {
    let (p, q): (&[f64; 6], &[f64; 5]) = if x >= 8.0 {
        (&PR8, &PS8)
    } else if x >= 4.5454 {
        (&PR5, &PS5)
    } else if x >= 2.857 {
        (&PR3, &PS3)
    } else {
        (&PR2, &PS2)
    };
    let z = 1.0 / (x * x);
    let r = p[0] + z * (p[1] + z * (p[2] + z * (p[3] + z * (p[4] + z * p[5]))));
    let s = 1.0 + z * (q[0] + z * (q[1] + z * (q[2] + z * (q[3] + z * q[4]))));
    1.0 + r / s
}

static QR8: [f64; 6] = [
    0.0,
    -1.02539062499992714161e-1,
    -1.62717534544589987888e1,
    -7.59601722513950107896e2,
    -1.18498066702429587167e4,
    -4.84385124285750353010e4,
];
static QS8: [f64; 6] = [
    1.61395369700722909556e2,
    7.82538599923348465381e3,
    1.33875336287249578163e5,
    7.19657723683240939863e5,
    6.66601232617776375264e5,
    -2.94490264303834643215e5,
];
static QR5: [f64; 6] = [
    -2.08979931141764104297e-11,
    -1.02539050241375426231e-1,
    -8.05644828123936029840,
    -1.83669607474888380239e2,
    -1.37319376065508163265e3,
    -2.61244440453215656817e3,
];
static QS5: [f64; 6] = [
    8.12765501384335777857e1,
    1.99179873460485964642e3,
    1.74684851924908907677e4,
    4.98514270910352279316e4,
    2.79480751638918118260e4,
    -4.71918354795128470869e3,
];
static QR3: [f64; 6] = [
    -5.07831226461766561369e-9,
    -1.02537829820837089745e-1,
    -4.61011581139473403113,
    -5.78472216562783643212e1,
    -2.28244540737631695038e2,
    -2.19210128478909325622e2,
];
static QS3: [f64; 6] = [
    4.76651550323729509273e1,
    6.73865112676699709482e2,
    3.38015286679526343505e3,
    5.54772909720722782367e3,
    1.90311919338810798763e3,
    -1.35201191444307340817e2,
];
static QR2: [f64; 6] = [
    -1.78381727510958865572e-7,
    -1.02517042607985553460e-1,
    -2.75220568278187460720,
    -1.96636162643703720221e1,
    -4.23253133372830490089e1,
    -2.13719211703704061733e1,
];
static QS2: [f64; 6] = [
    2.95333629060523854548e1,
    2.52981549982190529136e2,
    7.57502834868645436472e2,
    7.39393205320467245656e2,
    1.55949003336666123687e2,
    -4.95949898822628210127,
];

fn qone(x: f64) -> f64 {
    let (p, q): (&[f64; 6], &[f64; 6]) = if x >= 8.0 {
        (&QR8, &QS8)
    } else if x >= 4.5454 {
        (&QR5, &QS5)
    } else if x >= 2.857 {
        (&QR3, &QS3)
    } else {
        (&QR2, &QS2)
    };
    let z = 1.0 / (x * x);
    let r = p[0] + z * (p[1] + z * (p[2] + z * (p[3] + z * (p[4] + z * p[5]))));
    let s = 1.0 + z * (q[0] + z * (q[1] + z * (q[2] + z * (q[3] + z * (q[4] + z * q[5])))));
    (0.375 + r / s) / x
}

/// Bessel function of the first kind, order one.
pub fn j1(x: f64) -> f64 {
    let sign = x < 0.0;
    let x = x.abs();
    let r = if x >= 2.0 {
        // j1(x) = sqrt(2/(pi x)) (pone(x) cos(x1) - qone(x) sin(x1)),
        // x1 = x - 3pi/4, with the cancellation-safe evaluation of
        // sin(x1), cos(x1) from e_j1.c.
        let s = x.sin();
        let c = x.cos();
        let mut cc = s - c;
        let mut ss = -s - c;
        let z = (2.0 * x).cos();
        if s * c > 0.0 {
            cc = z / ss;
        } else {
            ss = z / cc;
        }
        let v = if x < 1.0e15 {
            pone(x) * cc - qone(x) * ss
        } else {
            cc
        };
        (1.0 / PI).sqrt() * v / x.sqrt()
    } else if x < 1e-5 {
        0.5 * x
    } else {
        let z = x * x;
        let r = z * (R00 + z * (R01 + z * (R02 + z * R03)));
        let s = 1.0 + z * (S01 + z * (S02 + z * (S03 + z * (S04 + z * S05))));
        (0.5 + r / s) * x
    };
    if sign {
        -r
    } else {
        r
    }
}

/// Order-`nu` Bessel function, `nu` restricted to 0 or 1.
pub fn jn(nu: u8, x: f64) -> f64 {
    match nu {
        0 => j0(x),
        1 => j1(x),
        _ => panic!("only orders 0 and 1 are supported"),
    }
}

/// The `k`-th positive zero of `J_nu` (k >= 1): McMahon expansion refined by
/// a few Newton steps.
pub fn jn_zero(nu: u8, k: usize) -> f64 {
    let mu = 4.0 * (nu as f64) * (nu as f64);
    let beta = (k as f64 + 0.5 * nu as f64 - 0.25) * PI;
    let b8 = 8.0 * beta;
    let mut z = beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8 * b8 * b8);
    for _ in 0..4 {
        // J0' = -J1; J1' = J0 - J1/x
        let deriv = match nu {
            0 => -j1(z),
            _ => j0(z) - j1(z) / z,
        };
        if deriv == 0.0 {
            break;
        }
        let dz = jn(nu, z) / deriv;
        z -= dz;
        if dz.abs() < 1e-13 * z {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Reference values computed with 50-digit arithmetic.
    #[test]
    fn j0_reference_values() {
        assert_relative_eq!(j0(0.0), 1.0);
        assert_relative_eq!(j0(0.5), 0.93846980724081290423, max_relative = 1e-14);
        assert_relative_eq!(j0(1.0), 0.76519768655796655145, max_relative = 1e-14);
        assert_relative_eq!(j0(5.0), -0.17759677131433830435, max_relative = 1e-13);
        assert_relative_eq!(j0(10.0), -0.24593576445134833520, max_relative = 1e-13);
        assert_relative_eq!(j0(100.0), 0.019985850304223122424, max_relative = 1e-12);
    }

    #[test]
    fn j1_reference_values() {
        assert_relative_eq!(j1(0.0), 0.0);
        assert_relative_eq!(j1(0.5), 0.24226845767487388638, max_relative = 1e-14);
        assert_relative_eq!(j1(1.0), 0.44005058574493351596, max_relative = 1e-14);
        assert_relative_eq!(j1(5.0), -0.32757913759146522204, max_relative = 1e-13);
        assert_relative_eq!(j1(10.0), 0.043472746168861436670, max_relative = 1e-12);
        assert_relative_eq!(j1(-1.0), -0.44005058574493351596, max_relative = 1e-14);
    }

    #[test]
    fn large_argument_envelope_accuracy() {
        // compare against the first-order Hankel asymptotic form, whose own
        // error is O(x^-2) relative to the envelope sqrt(2/(pi x))
        for &x in &[1.0e3, 1.0e4] {
            let env = SQRT_2_OVER_PI / x.sqrt();
            let x0 = x - FRAC_PI_4;
            let approx0 = env * (x0.cos() + x0.sin() / (8.0 * x));
            assert!(
                (j0(x) - approx0).abs() < 1e-5 * env,
                "x={x}: j0={} approx={approx0}",
                j0(x)
            );
            let x1 = x - 3.0 * FRAC_PI_4;
            let approx1 = env * (x1.cos() - 3.0 * x1.sin() / (8.0 * x));
            assert!(
                (j1(x) - approx1).abs() < 1e-5 * env,
                "x={x}: j1={} approx={approx1}",
                j1(x)
            );
        }
    }

    #[test]
    fn zeros_are_close_to_sign_changes() {
        for nu in 0..2u8 {
            for k in 1..30 {
                let z = jn_zero(nu, k);
                let eps = 1e-6 * z;
                assert!(
                    jn(nu, z - eps) * jn(nu, z + eps) < 0.0,
                    "zero {k} of J{nu} not bracketed"
                );
            }
        }
    }
}
