//! Faddeeva function and the scaled complementary error function.
//!
//! Far from the origin the Laplace continued fraction is used. Inside the
//! box |Re z| < 8, 0 <= Im z < 8 the value is a Taylor expansion around the
//! nearest node of a precomputed table. The table itself is filled by
//! marching each column downwards from the continued-fraction region with
//! small Taylor steps, along which the homogeneous solution e^{-z^2} shrinks.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;
const BOX: f64 = 8.0;
const NODE: f64 = 0.125;
const COLUMN_START: f64 = 11.0;
const MARCH_STEP: f64 = 0.025;

struct Table {
    columns: usize,
    rows: usize,
    values: Vec<Complex64>,
}

impl Table {
    fn get(&self, col: usize, row: usize) -> Complex64 {
        self.values[col * self.rows + row]
    }
}

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(build_table)
}

fn build_table() -> Table {
    let per_side = (BOX / NODE).round() as usize;
    let columns = 2 * per_side + 1;
    let rows = per_side + 1;
    let sub = (NODE / MARCH_STEP).round() as usize;
    let lead = ((COLUMN_START - BOX) / MARCH_STEP).round() as usize;
    let mut values = vec![Complex64::new(0.0, 0.0); columns * rows];
    for col in 0..columns {
        let x = -BOX + col as f64 * NODE;
        let mut z = Complex64::new(x, COLUMN_START);
        let mut w = continued_fraction(z, 200);
        let h = Complex64::new(0.0, -MARCH_STEP);
        for _ in 0..lead {
            w = taylor(z, w, h);
            z += h;
        }
        for row in (0..rows).rev() {
            values[col * rows + row] = w;
            if row > 0 {
                for _ in 0..sub {
                    w = taylor(z, w, h);
                    z += h;
                }
                // pin the imaginary part to the node to stop drift
                z = Complex64::new(x, (row - 1) as f64 * NODE);
            }
        }
    }
    Table {
        columns,
        rows,
        values,
    }
}

/// Taylor step of w from z0 to z0 + h using w' = -2 z w + 2i/sqrt(pi).
fn taylor(z0: Complex64, w0: Complex64, h: Complex64) -> Complex64 {
    let two_z = 2.0 * z0;
    let mut prev = w0;
    let mut cur = -two_z * w0 + Complex64::new(0.0, 2.0 * FRAC_1_SQRT_PI);
    let mut hp = h;
    let mut sum = w0 + cur * h;
    let mut quiet = 0;
    for n in 1..80 {
        let next = (-two_z * cur - 2.0 * prev) / (n as f64 + 1.0);
        prev = cur;
        cur = next;
        hp *= h;
        let term = cur * hp;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            quiet += 1;
            if quiet == 2 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    sum
}

/// Laplace continued fraction, valid for Im z >= 0 and |z| large.
fn continued_fraction(z: Complex64, terms: usize) -> Complex64 {
    let mut tail = z;
    for k in (1..=terms).rev() {
        tail = z - (k as f64 * 0.5) / tail;
    }
    Complex64::new(0.0, FRAC_1_SQRT_PI) / tail
}

fn cf_terms(z: Complex64) -> usize {
    let r = z.norm();
    if r > 40.0 {
        12
    } else if r > 20.0 {
        30
    } else {
        120
    }
}

fn faddeeva_upper(z: Complex64) -> Complex64 {
    if z.re.abs() >= BOX || z.im >= BOX {
        return continued_fraction(z, cf_terms(z));
    }
    let t = table();
    let col = (((z.re + BOX) / NODE).round() as usize).min(t.columns - 1);
    let row = ((z.im / NODE).round() as usize).min(t.rows - 1);
    let z0 = Complex64::new(-BOX + col as f64 * NODE, row as f64 * NODE);
    taylor(z0, t.get(col, row), z - z0)
}

/// Faddeeva function w(z) = e^{-z^2} erfc(-iz) on the whole plane.
pub fn faddeeva(z: Complex64) -> Complex64 {
    if z.im >= 0.0 {
        faddeeva_upper(z)
    } else {
        2.0 * (-z * z).exp() - faddeeva_upper(-z)
    }
}

/// Scaled complementary error function e^{z^2} erfc(z).
pub fn scaled_erfc_complex(z: Complex64) -> Complex64 {
    faddeeva(Complex64::new(-z.im, z.re))
}

/// Real complementary error function, accurate in the far tail.
pub fn erfc_real(x: f64) -> f64 {
    if x >= 0.0 {
        scaled_erfc_complex(Complex64::new(x, 0.0)).re * (-x * x).exp()
    } else {
        2.0 - erfc_real(-x)
    }
}

/// e^{c} times the half-line Gaussian integral of e^{-a y^2 + b y} over y > 0.
///
/// Needs Re a >= 0, with Re b < 0 when Re a = 0. Exponents are combined
/// before exponentiation so large cancelling magnitudes stay finite.
pub fn gaussian_half_line(a: Complex64, b: Complex64, c: Complex64) -> Complex64 {
    let ra = a.sqrt();
    let z = -b / (2.0 * ra);
    let pre = 0.5 * (PI / a).sqrt();
    if z.re >= 0.0 {
        pre * c.exp() * scaled_erfc_complex(z)
    } else {
        // erfcx(z) = 2 e^{z^2} - erfcx(-z)
        pre * (2.0 * (c + z * z).exp() - c.exp() * scaled_erfc_complex(-z))
    }
}
