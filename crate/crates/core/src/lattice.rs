//! Exact rational linear algebra on small matrices.

use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Rat = Ratio<i128>;

pub fn to_rat(rows: &[Vec<i64>]) -> Vec<Vec<Rat>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| Rat::from_integer(x as i128)).collect())
        .collect()
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut [Vec<Rat>]) -> Vec<usize> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= inv;
        }
        let pivot_row = m[row].clone();
        for (r, line) in m.iter_mut().enumerate() {
            if r != row && !line[col].is_zero() {
                let f = line[col];
                for (x, p) in line.iter_mut().zip(&pivot_row) {
                    *x -= *p * f;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    rref(&mut to_rat(rows)).len()
}

/// Some `x` with `a x = b`, if one exists.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let ncols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&ncols) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][ncols];
    }
    Some(x)
}

/// A basis of `{x : a x = 0}`.
pub fn nullspace(a: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut m = a.to_vec();
    let pivots = if m.is_empty() { Vec::new() } else { rref(&mut m) };
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -m[r][free];
        }
        basis.push(v);
    }
    basis
}

/// Scales a rational vector to a primitive integer vector with the same
/// direction.
pub fn primitive(v: &[Rat]) -> Vec<i128> {
    let den = v.iter().fold(1i128, |l, x| lcm(l, *x.denom()));
    let ints: Vec<i128> = v.iter().map(|x| (x * Rat::from_integer(den)).to_integer()).collect();
    let g = ints.iter().fold(0i128, |g, &x| gcd(g, x.abs()));
    if g <= 1 {
        ints
    } else {
        ints.iter().map(|x| x / g).collect()
    }
}

pub fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i128, b: i128) -> i128 {
    (a / gcd(a, b) * b).abs()
}

pub fn det2(a: [i128; 2], b: [i128; 2]) -> i128 {
    a[0] * b[1] - a[1] * b[0]
}

/// Whether `d` is a nonnegative combination of `gens` (plane vectors).
pub fn in_plane_cone(d: [i128; 2], gens: &[[i128; 2]]) -> bool {
    if d == [0, 0] {
        return true;
    }
    for (i, &g) in gens.iter().enumerate() {
        if g != [0, 0] && det2(g, d) == 0 && g[0] * d[0] + g[1] * d[1] > 0 {
            return true;
        }
        for &h in &gens[i + 1..] {
            let det = det2(g, h);
            if det == 0 {
                continue;
            }
            let a = det2(d, h);
            let b = det2(g, d);
            if (a >= 0 && b >= 0 && det > 0) || (a <= 0 && b <= 0 && det < 0) {
                return true;
            }
        }
    }
    false
}

/// Counterclockwise angular order starting from the positive x axis.
pub fn angle_cmp(a: [i128; 2], b: [i128; 2]) -> std::cmp::Ordering {
    let half = |v: [i128; 2]| !(v[1] > 0 || (v[1] == 0 && v[0] > 0));
    half(a)
        .cmp(&half(b))
        .then_with(|| 0.cmp(&det2(a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_nullspace() {
        let rows = vec![vec![1, 0, 1, 0], vec![0, 1, 1, 0], vec![1, 0, 0, 1], vec![0, 1, 0, 1]];
        assert_eq!(rank(&rows), 3);
        let ns = nullspace(&to_rat(&rows), 4);
        assert_eq!(ns.len(), 1);
        assert_eq!(primitive(&ns[0]).iter().map(|x| x.abs()).collect::<Vec<_>>(), vec![1, 1, 1, 1]);
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = to_rat(&[vec![1, 1], vec![1, -1]]);
        let x = solve(&a, &[Rat::from_integer(2), Rat::from_integer(0)]).unwrap();
        assert_eq!(x, vec![Rat::one(), Rat::one()]);
        let a = to_rat(&[vec![1, 1], vec![2, 2]]);
        assert!(solve(&a, &[Rat::from_integer(1), Rat::from_integer(3)]).is_none());
    }

    #[test]
    fn plane_cones() {
        let quadrant = [[1, 0], [0, 1]];
        assert!(in_plane_cone([2, 3], &quadrant));
        assert!(in_plane_cone([0, 5], &quadrant));
        assert!(!in_plane_cone([-1, 1], &quadrant));
        let mut dirs = vec![[0, -1], [-1, 0], [1, 1], [1, 0]];
        dirs.sort_by(|a, b| angle_cmp(*a, *b));
        assert_eq!(dirs, vec![[1, 0], [1, 1], [-1, 0], [0, -1]]);
    }
}
