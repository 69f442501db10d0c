//! Stretch recurrences, the inverse-Ackermann hierarchy, and the parameter
//! schedules used by the recursive constructions.

/// max(1, ceil(log2 n)); log of 1 substitutes 1 so parameter formulas never
/// collapse to zero.
pub fn clog2(n: u64) -> u64 {
    if n <= 2 {
        return 1;
    }
    let f = n.ilog2() as u64;
    if n.is_power_of_two() {
        f
    } else {
        f + 1
    }
}

/// Inverse-Ackermann hierarchy: alpha_0(n) = ceil(n/2), and alpha_k(n) counts
/// the iterations of alpha_{k-1} needed to drive n down to 1.
pub fn alpha(k: u32, n: u64) -> u64 {
    if k == 0 {
        return n.div_ceil(2);
    }
    let mut m = n;
    let mut count = 0;
    while m > 1 {
        m = alpha(k - 1, m);
        count += 1;
    }
    count
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    String,
    Fat,
}

/// t_1 = 3; string: t_k = 5 t_{k-1} + 3; fat: t_k = 3 t_{k-1} + 3.
pub fn stretch_bound(family: Family, k: u32) -> u64 {
    assert!(k >= 1, "stretch schedule starts at k = 1");
    let mut t = 3u64;
    for _ in 2..=k {
        t = match family {
            Family::String => 5 * t + 3,
            Family::Fat => 3 * t + 3,
        };
    }
    t
}

/// Closed form (3/4)(5^k - 1) for the string schedule, exact in integers.
pub fn string_stretch_closed_form(k: u32) -> u64 {
    (5u64.pow(k) - 1) * 3 / 4
}

/// Whether the quantity (11/9) 3^k - 2/3 equals the fat recurrence value,
/// compared exactly as 9 t_k == 11 3^k - 6. It holds only at k = 1, which is
/// why declared stretches come from the recurrence alone.
pub fn fat_closed_form_matches(k: u32) -> bool {
    9 * stretch_bound(Family::Fat, k) == 11 * 3u64.pow(k) - 6
}

pub fn ceil_sqrt(n: usize) -> usize {
    if n == 0 {
        return 0;
    }
    let mut s = (n as f64).sqrt() as usize;
    while s * s < n {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= n {
        s -= 1;
    }
    s
}

pub fn ceil_pow(n: usize, e: f64) -> usize {
    (n as f64).powf(e).ceil() as usize
}

/// Degree threshold for the 3-hop string construction.
pub fn string_3hop_delta(n: usize) -> usize {
    let l = clog2(n as u64) as usize;
    (n / (l * l)).max(1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TkParams {
    pub delta: usize,
    pub r: usize,
}

/// Raw parameter schedule of the level-k string construction.
pub fn string_tk_params(k: u32, n: usize, c0: usize) -> TkParams {
    if k == 2 {
        let delta = clog2(n as u64).pow(3) as usize;
        TkParams {
            delta,
            r: delta.saturating_pow(3),
        }
    } else {
        let delta = c0 * alpha(k - 1, n as u64) as usize;
        TkParams {
            delta,
            r: delta.saturating_pow(3),
        }
    }
}

/// The schedules only make sense when the division capacity exceeds the
/// degree bound and still cuts the instance; otherwise callers fall back.
pub fn tk_params_usable(p: TkParams, n: usize) -> bool {
    p.delta >= 1 && p.r >= 2 && p.r > p.delta && p.r < n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_base_levels() {
        assert_eq!(alpha(0, 10), 5);
        assert_eq!(alpha(0, 1), 1);
        assert_eq!(alpha(1, 65536), 16);
        assert_eq!(alpha(1, 10), 4);
        assert_eq!(alpha(1, 1), 0);
        assert_eq!(alpha(2, 65536), 4);
        assert_eq!(alpha(3, 1), 0);
    }

    #[test]
    fn ceil_log_examples() {
        assert_eq!(clog2(1), 1);
        assert_eq!(clog2(2), 1);
        assert_eq!(clog2(3), 2);
        assert_eq!(clog2(1024), 10);
        assert_eq!(clog2(1025), 11);
    }

    #[test]
    fn string_stretch_table() {
        let want = [3u64, 18, 93, 468];
        for (i, &t) in want.iter().enumerate() {
            let k = i as u32 + 1;
            assert_eq!(stretch_bound(Family::String, k), t);
            assert_eq!(string_stretch_closed_form(k), t);
        }
    }

    #[test]
    fn fat_stretch_table() {
        assert_eq!(stretch_bound(Family::Fat, 1), 3);
        assert_eq!(stretch_bound(Family::Fat, 2), 12);
        assert_eq!(stretch_bound(Family::Fat, 3), 39);
    }

    #[test]
    fn fat_closed_form_only_matches_at_level_one() {
        assert!(fat_closed_form_matches(1));
        assert!(!fat_closed_form_matches(2));
        assert!(!fat_closed_form_matches(3));
    }

    #[test]
    fn integer_sqrt_roundtrip() {
        for n in 0..200usize {
            let s = ceil_sqrt(n);
            assert!(s * s >= n);
            if s > 0 {
                assert!((s - 1) * (s - 1) < n);
            }
        }
    }

    #[test]
    fn parameter_degeneracy_at_desk_scale() {
        // the level-2 schedule wants r = log^9 n, far above any desk-scale n
        let p = string_tk_params(2, 2000, 4);
        assert_eq!(p.delta, 11usize.pow(3));
        assert!(!tk_params_usable(p, 2000));
        // a hand-chosen override is usable and exercises the machinery
        assert!(tk_params_usable(TkParams { delta: 6, r: 60 }, 2000));
    }
}
