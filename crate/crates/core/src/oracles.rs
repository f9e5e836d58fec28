//! Reference computations that avoid the closed formulas used by the library. They back
//! the test suite and the `verify` command.

/// Integer points of `M [0,1)^2`, found by scanning the bounding box column by column.
/// Equals the number of solutions of `M x ∈ Z^2` in the fundamental domain.
pub fn lattice_count(m: [[i128; 2]; 2]) -> u128 {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    assert!(det != 0);
    let s = det.signum();
    let big = det.abs();
    // x = adj(M) y / det
    let adj = [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]];
    let xs = [0, m[0][0], m[0][1], m[0][0] + m[0][1]];
    let ys = [0, m[1][0], m[1][1], m[1][0] + m[1][1]];
    let (x_lo, x_hi) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
    let (y_lo, y_hi) = (*ys.iter().min().unwrap(), *ys.iter().max().unwrap());
    let mut total = 0u128;
    for y1 in x_lo..=x_hi {
        let (mut lo, mut hi) = (y_lo, y_hi);
        for row in adj {
            // 0 <= s (row[0] y1 + row[1] y2) <= big − 1
            let (c, e) = (s * row[1], s * row[0] * y1);
            if c == 0 {
                if e < 0 || e > big - 1 {
                    hi = lo - 1;
                }
            } else if c > 0 {
                lo = lo.max(div_ceil(-e, c));
                hi = hi.min(div_floor(big - 1 - e, c));
            } else {
                lo = lo.max(div_ceil(big - 1 - e, c));
                hi = hi.min(div_floor(-e, c));
            }
        }
        if hi >= lo {
            total += (hi - lo + 1) as u128;
        }
    }
    total
}

fn div_floor(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn div_ceil(a: i128, b: i128) -> i128 {
    -div_floor(-a, b)
}

pub fn power_minus_identity(a: [[i64; 2]; 2], j: u32) -> [[i128; 2]; 2] {
    let a = a.map(|r| r.map(i128::from));
    let mut p = [[1i128, 0], [0, 1]];
    for _ in 0..j {
        p = [
            [p[0][0] * a[0][0] + p[0][1] * a[1][0], p[0][0] * a[0][1] + p[0][1] * a[1][1]],
            [p[1][0] * a[0][0] + p[1][1] * a[1][0], p[1][0] * a[0][1] + p[1][1] * a[1][1]],
        ];
    }
    [[p[0][0] - 1, p[0][1]], [p[1][0], p[1][1] - 1]]
}

/// Torsion of the twisted mapping torus from the fibre cohomology:
/// `|z − 1| |z det A − 1| / |det(zA − I)|`, with σ = +1.
pub fn mapping_torus_torsion(a: [[i64; 2]; 2], theta: f64) -> f64 {
    let z = num_complex::Complex64::from_polar(1.0, theta);
    let (tr, det) = ((a[0][0] + a[1][1]) as f64, (a[0][0] * a[1][1] - a[0][1] * a[1][0]) as f64);
    let char_poly = z * z * det - z * tr + 1.0;
    (z - 1.0).norm() * (z * det - 1.0).norm() / char_poly.norm()
}
