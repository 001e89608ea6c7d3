//! Uniform spatial hash over points in one or two coordinates, with cell
//! width `2^-level`. Periodic axes live on `[0, 1)` and wrap; other axes may
//! hold any finite value.

/// Coarsest level: cells of width 8, wider than any distance we index.
pub(crate) const MIN_LEVEL: i32 = -3;
/// Finest level: cells of width `2^-52`.
pub(crate) const MAX_LEVEL: i32 = 52;

const EMPTY: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub(crate) struct SpatialHash {
    dim: usize,
    wraps: [bool; 2],
    level: i32,
    scale: f64,
    coords: Vec<[f64; 2]>,
    tags: Vec<u32>,
    next: Vec<u32>,
    heads: Vec<u32>,
    shift: u32,
}

/// Largest `k` with `2^-k >= target`, clamped to the supported range.
pub(crate) fn level_for(target: f64) -> i32 {
    if !(target > 0.0) {
        return MAX_LEVEL;
    }
    if !target.is_finite() {
        return MIN_LEVEL;
    }
    let mut k = (-target.log2()).floor() as i32;
    // guard the log against rounding in either direction
    while k > MIN_LEVEL && width_of(k) < target {
        k -= 1;
    }
    while k < MAX_LEVEL && width_of(k + 1) >= target {
        k += 1;
    }
    k.clamp(MIN_LEVEL, MAX_LEVEL)
}

pub(crate) fn width_of(level: i32) -> f64 {
    2f64.powi(-level)
}

impl SpatialHash {
    pub(crate) fn new(dim: usize, wraps: [bool; 2]) -> Self {
        assert!(dim == 1 || dim == 2);
        let mut h = SpatialHash {
            dim,
            wraps,
            level: MIN_LEVEL,
            scale: width_of(-MIN_LEVEL),
            coords: Vec::new(),
            tags: Vec::new(),
            next: Vec::new(),
            heads: Vec::new(),
            shift: 0,
        };
        h.resize_buckets(16);
        h
    }

    pub(crate) fn width(&self) -> f64 {
        width_of(self.level)
    }

    pub(crate) fn level(&self) -> i32 {
        self.level
    }

    pub(crate) fn coords(&self, i: usize) -> &[f64; 2] {
        &self.coords[i]
    }

    pub(crate) fn tag(&self, i: usize) -> u32 {
        self.tags[i]
    }

    fn cells_per_axis(&self) -> i64 {
        if self.level <= 0 {
            1
        } else {
            1i64 << self.level
        }
    }

    #[inline]
    fn cell(&self, c: &[f64; 2]) -> [i64; 2] {
        let n = self.cells_per_axis();
        let mut out = [0i64; 2];
        for a in 0..self.dim {
            // multiplying by a power of two is exact
            let k = (c[a] * self.scale).floor() as i64;
            out[a] = if self.wraps[a] { k.rem_euclid(n) } else { k };
        }
        out
    }

    #[inline]
    fn bucket(&self, cell: [i64; 2]) -> usize {
        let h = (cell[0] as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
            ^ (cell[1] as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F).rotate_left(31);
        let h = h ^ (h >> 29);
        (h.wrapping_mul(0xBF58_476D_1CE4_E5B9) >> self.shift) as usize
    }

    fn resize_buckets(&mut self, count: usize) {
        let count = count.next_power_of_two().max(16);
        self.shift = 64 - count.trailing_zeros();
        self.heads = vec![EMPTY; count];
        self.next.clear();
        self.next.resize(self.coords.len(), EMPTY);
        for i in 0..self.coords.len() {
            self.link(i);
        }
    }

    #[inline]
    fn link(&mut self, i: usize) {
        let b = self.bucket(self.cell(&self.coords[i]));
        self.next[i] = self.heads[b];
        self.heads[b] = i as u32;
    }

    pub(crate) fn insert(&mut self, c: [f64; 2], tag: u32) {
        self.coords.push(c);
        self.tags.push(tag);
        self.next.push(EMPTY);
        if self.coords.len() > self.heads.len() {
            self.resize_buckets(self.heads.len() * 2);
        } else {
            self.link(self.coords.len() - 1);
        }
    }

    /// Re-index all entries at a new cell width.
    pub(crate) fn set_level(&mut self, level: i32) {
        let level = level.clamp(MIN_LEVEL, MAX_LEVEL);
        if level == self.level {
            return;
        }
        self.level = level;
        self.scale = width_of(-level);
        let n = self.heads.len();
        self.resize_buckets(n);
    }

    /// Visit every entry whose cell is adjacent to (or equal to) the cell of
    /// `c`. Any entry within `width()` of `c` along every axis is visited,
    /// each exactly once.
    pub(crate) fn for_each_near(&self, c: &[f64; 2], mut f: impl FnMut(usize)) {
        let base = self.cell(c);
        let n = self.cells_per_axis();
        let mut axis_cells = [[0i64; 3]; 2];
        let mut counts = [1usize; 2];
        for a in 0..2 {
            if a >= self.dim {
                axis_cells[a][0] = 0;
                continue;
            }
            let mut k = 0;
            for off in -1..=1 {
                let v = if self.wraps[a] { (base[a] + off).rem_euclid(n) } else { base[a] + off };
                if !axis_cells[a][..k].contains(&v) {
                    axis_cells[a][k] = v;
                    k += 1;
                }
            }
            counts[a] = k;
        }
        let mut buckets = [0usize; 9];
        let mut nb = 0;
        for &cx in &axis_cells[0][..counts[0]] {
            for &cy in &axis_cells[1][..counts[1]] {
                let b = self.bucket([cx, cy]);
                if !buckets[..nb].contains(&b) {
                    buckets[nb] = b;
                    nb += 1;
                }
            }
        }
        for &b in &buckets[..nb] {
            let mut i = self.heads[b];
            while i != EMPTY {
                f(i as usize);
                i = self.next[i as usize];
            }
        }
    }

    pub(crate) fn for_each(&self, mut f: impl FnMut(usize)) {
        (0..self.coords.len()).for_each(&mut f);
    }
}
