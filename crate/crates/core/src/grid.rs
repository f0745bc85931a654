//! The cellular automaton substrate.
//!
//! Every feature gets one grid axis, split into `bins_per_dim` evenly spaced
//! bins between the running minimum and maximum seen on that axis. Cells hold
//! a class label as state. Unassigned cells are filled by synchronous
//! generations of a majority vote over the von Neumann neighbourhood.
//!
//! Storage is dense: a grid has `bins_per_dim ^ dims` cells, so memory grows
//! exponentially with the number of features. Keep `dims` small (the intended
//! workloads have at most four features and twenty bins).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Label, Result};

/// Above this many cells a warning is logged on construction.
const LARGE_GRID_CELLS: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    /// One axis per feature.
    pub dims: usize,
    /// Bins per axis, uniform across axes.
    pub bins_per_dim: usize,
    /// Manhattan radius of the neighbourhood used while filling the grid.
    pub radius: usize,
    /// Ordered class labels. Order decides vote ties.
    pub alphabet: Vec<Label>,
}

impl GridConfig {
    pub fn new(dims: usize, bins_per_dim: usize, radius: usize, alphabet: Vec<Label>) -> Result<Self> {
        let config = Self { dims, bins_per_dim, radius, alphabet };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims < 1 {
            return Err(Error::InvalidConfig("grid needs at least one dimension".into()));
        }
        if self.bins_per_dim < 2 {
            return Err(Error::InvalidConfig("bins_per_dim must be at least 2".into()));
        }
        if self.radius < 1 {
            return Err(Error::InvalidConfig("radius must be at least 1".into()));
        }
        if self.alphabet.len() < 2 {
            return Err(Error::InvalidConfig("state alphabet needs at least two labels".into()));
        }
        let mut sorted = self.alphabet.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.alphabet.len() {
            return Err(Error::InvalidConfig("state alphabet has duplicate labels".into()));
        }
        self.checked_cell_count()
            .ok_or_else(|| Error::InvalidConfig("grid cell count overflows".into()))?;
        Ok(())
    }

    fn checked_cell_count(&self) -> Option<usize> {
        self.bins_per_dim.checked_pow(u32::try_from(self.dims).ok()?)
    }

    pub fn cell_count(&self) -> usize {
        self.checked_cell_count().expect("validated grid config")
    }

    /// Position of `label` in the alphabet.
    pub fn label_index(&self, label: Label) -> Option<usize> {
        self.alphabet.iter().position(|&l| l == label)
    }
}

/// Bin coordinates of a cell, one index per axis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coords(pub Vec<usize>);

impl Coords {
    pub fn manhattan(&self, other: &Coords) -> usize {
        self.0.iter().zip(&other.0).map(|(&a, &b)| a.abs_diff(b)).sum()
    }
}

impl fmt::Display for Coords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl From<Vec<usize>> for Coords {
    fn from(v: Vec<usize>) -> Self {
        Coords(v)
    }
}

/// Running per-axis minimum and maximum. An axis whose minimum equals its
/// maximum maps every value to bin 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionLimits {
    pub low: Vec<f64>,
    pub high: Vec<f64>,
}

impl DimensionLimits {
    /// Limits that contain nothing yet.
    pub fn empty(dims: usize) -> Self {
        Self { low: vec![f64::INFINITY; dims], high: vec![f64::NEG_INFINITY; dims] }
    }

    pub fn is_initialized(&self) -> bool {
        self.low.iter().zip(&self.high).all(|(l, h)| l <= h)
    }

    fn expand(&mut self, x: &[f64]) {
        for (n, &v) in x.iter().enumerate() {
            self.low[n] = self.low[n].min(v);
            self.high[n] = self.high[n].max(v);
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub state: Option<Label>,
    /// Labels of the preparatory instances that fell in this cell.
    pub hit_history: Vec<Label>,
    /// Time steps at which this cell mutated, strictly increasing.
    pub mutation_times: Vec<u64>,
}

impl Cell {
    pub fn last_mutation(&self) -> Option<u64> {
        self.mutation_times.last().copied()
    }
}

/// Manhattan-ball offsets of radius `radius` in `dims` dimensions, excluding
/// the origin, in lexicographic order.
pub fn von_neumann_offsets(dims: usize, radius: usize) -> Vec<Vec<isize>> {
    fn walk(dims: usize, budget: usize, prefix: &mut Vec<isize>, out: &mut Vec<Vec<isize>>) {
        if prefix.len() == dims {
            if prefix.iter().any(|&o| o != 0) {
                out.push(prefix.clone());
            }
            return;
        }
        let b = budget as isize;
        for o in -b..=b {
            prefix.push(o);
            walk(dims, budget - o.unsigned_abs(), prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    walk(dims, radius, &mut Vec::with_capacity(dims), &mut out);
    out
}

/// Majority vote over neighbour states. Unassigned entries are skipped.
///
/// Ties keep `current` when it is among the tied labels, otherwise the label
/// that comes first in `alphabet` wins. Returns `None` when no neighbour is
/// assigned.
pub fn majority_vote<I>(states: I, current: Option<Label>, alphabet: &[Label]) -> Option<Label>
where
    I: IntoIterator<Item = Option<Label>>,
{
    let mut counts = vec![0usize; alphabet.len()];
    let mut any = false;
    for s in states.into_iter().flatten() {
        if let Some(i) = alphabet.iter().position(|&l| l == s) {
            counts[i] += 1;
            any = true;
        }
    }
    if !any {
        return None;
    }
    let best = *counts.iter().max().expect("non-empty alphabet");
    if let Some(cur) = current {
        if let Some(i) = alphabet.iter().position(|&l| l == cur) {
            if counts[i] == best {
                return Some(cur);
            }
        }
    }
    counts.iter().position(|&c| c == best).map(|i| alphabet[i])
}

/// Modal label of a hit history. Ties go to the label hit most recently.
pub fn modal_label(history: &[Label]) -> Option<Label> {
    // (label, count, last position)
    let mut tally: Vec<(Label, usize, usize)> = Vec::new();
    for (pos, &l) in history.iter().enumerate() {
        match tally.iter_mut().find(|e| e.0 == l) {
            Some(e) => {
                e.1 += 1;
                e.2 = pos;
            }
            None => tally.push((l, 1, pos)),
        }
    }
    tally.into_iter().max_by_key(|&(_, count, last)| (count, last)).map(|e| e.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    config: GridConfig,
    limits: DimensionLimits,
    cells: Vec<Cell>,
    strides: Vec<usize>,
    fill_offsets: Vec<Vec<isize>>,
}

impl Grid {
    pub fn new(config: GridConfig) -> Result<Self> {
        config.validate()?;
        let n = config.cell_count();
        if n > LARGE_GRID_CELLS {
            log::warn!(
                "grid with {} dims x {} bins has {n} cells; dense storage grows exponentially with features",
                config.dims,
                config.bins_per_dim
            );
        }
        let mut strides = vec![1usize; config.dims];
        for i in (0..config.dims.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * config.bins_per_dim;
        }
        Ok(Self {
            limits: DimensionLimits::empty(config.dims),
            cells: vec![Cell::default(); n],
            strides,
            fill_offsets: von_neumann_offsets(config.dims, config.radius),
            config,
        })
    }

    pub fn config(&self) -> &GridConfig {
        &self.config
    }

    pub fn limits(&self) -> &DimensionLimits {
        &self.limits
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Drops states, histories, mutation logs and limits.
    pub fn clear(&mut self) {
        self.limits = DimensionLimits::empty(self.config.dims);
        for c in &mut self.cells {
            *c = Cell::default();
        }
    }

    pub fn index_of(&self, coords: &Coords) -> Option<usize> {
        if coords.0.len() != self.config.dims {
            return None;
        }
        let mut idx = 0;
        for (c, s) in coords.0.iter().zip(&self.strides) {
            if *c >= self.config.bins_per_dim {
                return None;
            }
            idx += c * s;
        }
        Some(idx)
    }

    pub fn coords_of(&self, index: usize) -> Coords {
        let g = self.config.bins_per_dim;
        Coords(self.strides.iter().map(|s| (index / s) % g).collect())
    }

    pub fn cell(&self, coords: &Coords) -> Option<&Cell> {
        self.index_of(coords).map(|i| &self.cells[i])
    }

    pub fn cell_mut(&mut self, coords: &Coords) -> Option<&mut Cell> {
        self.index_of(coords).map(move |i| &mut self.cells[i])
    }

    pub(crate) fn cell_at(&self, index: usize) -> &Cell {
        &self.cells[index]
    }

    pub(crate) fn cell_at_mut(&mut self, index: usize) -> &mut Cell {
        &mut self.cells[index]
    }

    /// All cells with their coordinates, in index order.
    pub fn iter(&self) -> impl Iterator<Item = (Coords, &Cell)> + '_ {
        self.cells.iter().enumerate().map(|(i, c)| (self.coords_of(i), c))
    }

    pub fn state(&self, coords: &Coords) -> Option<Label> {
        self.cell(coords).and_then(|c| c.state)
    }

    pub fn set_state(&mut self, coords: &Coords, state: Option<Label>) -> Result<()> {
        let i = self.checked_index(coords)?;
        self.cells[i].state = state;
        Ok(())
    }

    pub fn unassigned(&self) -> usize {
        self.cells.iter().filter(|c| c.state.is_none()).count()
    }

    fn checked_index(&self, coords: &Coords) -> Result<usize> {
        self.index_of(coords).ok_or_else(|| {
            Error::InvalidConfig(format!("coords [{coords}] outside the {}-bin grid", self.config.bins_per_dim))
        })
    }

    fn check_dims(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.config.dims {
            return Err(Error::DimensionMismatch { expected: self.config.dims, actual: x.len() });
        }
        if let Some(i) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteFeature(i));
        }
        Ok(())
    }

    /// Bin index along each axis for `x`; out-of-range values clamp to the
    /// edge bins. Bins are half-open on the right except the last one.
    pub fn locate_cell(&self, x: &[f64]) -> Result<Coords> {
        self.check_dims(x)?;
        if !self.limits.is_initialized() {
            return Err(Error::NotPrepared);
        }
        Ok(Coords(
            x.iter()
                .enumerate()
                .map(|(n, &v)| self.bin(n, v))
                .collect(),
        ))
    }

    pub(crate) fn locate_index(&self, x: &[f64]) -> Result<usize> {
        self.check_dims(x)?;
        if !self.limits.is_initialized() {
            return Err(Error::NotPrepared);
        }
        Ok(x.iter().enumerate().map(|(n, &v)| self.bin(n, v) * self.strides[n]).sum())
    }

    fn bin(&self, n: usize, v: f64) -> usize {
        let g = self.config.bins_per_dim;
        let (lo, hi) = (self.limits.low[n], self.limits.high[n]);
        let span = hi - lo;
        if span <= 0.0 {
            return 0;
        }
        let b = ((v - lo) / span * g as f64).floor();
        if b <= 0.0 {
            0
        } else if b >= (g - 1) as f64 {
            g - 1
        } else {
            b as usize
        }
    }

    /// In-bounds cells within Manhattan distance `radius`, excluding `coords`,
    /// in lexicographic order.
    pub fn von_neumann_neighbors(&self, coords: &Coords, radius: usize) -> Vec<Coords> {
        let offsets = if radius == self.config.radius {
            std::borrow::Cow::Borrowed(&self.fill_offsets)
        } else {
            std::borrow::Cow::Owned(von_neumann_offsets(self.config.dims, radius))
        };
        match self.index_of(coords) {
            Some(i) => self.neighbor_indices(i, &offsets).map(|j| self.coords_of(j)).collect(),
            None => Vec::new(),
        }
    }

    /// Indices of in-bounds cells at `offsets` from the cell at `index`.
    pub(crate) fn neighbor_indices<'a>(
        &'a self,
        index: usize,
        offsets: &'a [Vec<isize>],
    ) -> impl Iterator<Item = usize> + 'a {
        let g = self.config.bins_per_dim as isize;
        let base: Vec<isize> = self.strides.iter().map(|s| ((index / s) as isize) % g).collect();
        offsets.iter().filter_map(move |off| {
            let mut idx = 0usize;
            for ((b, o), s) in base.iter().zip(off).zip(&self.strides) {
                let c = b + o;
                if c < 0 || c >= g {
                    return None;
                }
                idx += c as usize * s;
            }
            Some(idx)
        })
    }

    /// Widens the limits to include `x`. Cell states stay with their indices.
    pub fn expand_limits(&mut self, x: &[f64]) -> Result<()> {
        self.check_dims(x)?;
        self.limits.expand(x);
        Ok(())
    }

    pub fn record_hit(&mut self, coords: &Coords, label: Label) -> Result<()> {
        if self.config.label_index(label).is_none() {
            return Err(Error::UnknownLabel(label));
        }
        let i = self.checked_index(coords)?;
        self.cells[i].hit_history.push(label);
        Ok(())
    }

    /// Assigns each seeded cell the modal label of its hit history.
    pub fn resolve_states(&mut self) {
        for cell in &mut self.cells {
            if let Some(l) = modal_label(&cell.hit_history) {
                cell.state = Some(l);
            }
        }
    }

    /// One synchronous generation over unassigned cells. Returns how many
    /// cells became assigned.
    pub fn evolve_step(&mut self) -> usize {
        let snapshot: Vec<Option<Label>> = self.cells.iter().map(|c| c.state).collect();
        let mut updates = Vec::new();
        for (i, s) in snapshot.iter().enumerate() {
            if s.is_some() {
                continue;
            }
            let votes = self.neighbor_indices(i, &self.fill_offsets).map(|j| snapshot[j]);
            if let Some(l) = majority_vote(votes, None, &self.config.alphabet) {
                updates.push((i, l));
            }
        }
        for &(i, l) in &updates {
            self.cells[i].state = Some(l);
        }
        updates.len()
    }

    /// Runs generations until every cell has a state. Returns the number of
    /// generations used.
    pub fn evolve_until_full(&mut self) -> Result<usize> {
        if self.cells.iter().all(|c| c.state.is_none()) {
            return Err(Error::EmptyPreparatorySet);
        }
        let cap = self.config.bins_per_dim * self.config.dims;
        let mut generations = 0;
        while self.unassigned() > 0 {
            if generations == cap {
                return Err(Error::GenerationCap(self.unassigned()));
            }
            self.evolve_step();
            generations += 1;
        }
        Ok(generations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(dims: usize, bins: usize, radius: usize) -> Grid {
        Grid::new(GridConfig::new(dims, bins, radius, vec![0, 1]).unwrap()).unwrap()
    }

    fn with_limits(mut g: Grid, lo: &[f64], hi: &[f64]) -> Grid {
        g.expand_limits(lo).unwrap();
        g.expand_limits(hi).unwrap();
        g
    }

    #[test]
    fn config_rejects_bad_values() {
        assert!(GridConfig::new(0, 10, 1, vec![0, 1]).is_err());
        assert!(GridConfig::new(2, 1, 1, vec![0, 1]).is_err());
        assert!(GridConfig::new(2, 10, 0, vec![0, 1]).is_err());
        assert!(GridConfig::new(2, 10, 1, vec![0]).is_err());
        assert!(GridConfig::new(2, 10, 1, vec![1, 1]).is_err());
        assert!(GridConfig::new(64, 10, 1, vec![0, 1]).is_err());
        assert_eq!(GridConfig::new(3, 5, 1, vec![0, 1]).unwrap().cell_count(), 125);
    }

    #[test]
    fn locate_unit_square() {
        let g = with_limits(grid(2, 2, 1), &[0.0, 0.0], &[1.0, 1.0]);
        assert_eq!(g.locate_cell(&[0.1, 0.9]).unwrap(), Coords(vec![0, 1]));
        assert_eq!(g.locate_cell(&[1.0, 1.0]).unwrap(), Coords(vec![1, 1]));
        assert_eq!(g.locate_cell(&[-5.0, 7.0]).unwrap(), Coords(vec![0, 1]));
    }

    #[test]
    fn locate_lower_corner_of_wide_limits() {
        let g = with_limits(grid(2, 10, 1), &[3.0, -3.0], &[7.0, 3.0]);
        assert_eq!(g.locate_cell(&[3.0, -3.0]).unwrap(), Coords(vec![0, 0]));
    }

    #[test]
    fn locate_matches_bin_edge_scan() {
        let g = with_limits(grid(2, 10, 1), &[3.0, -3.0], &[7.0, 3.0]);
        for n in 0..2 {
            let (lo, hi) = (g.limits().low[n], g.limits().high[n]);
            let w = (hi - lo) / 10.0;
            for k in 0..10 {
                let edge = lo + k as f64 * w;
                // just above the edge and just below the next one
                for v in [edge + 1e-9, edge + w - 1e-9] {
                    let mut x = vec![lo, lo];
                    x[n] = v;
                    x[1 - n] = g.limits().low[1 - n];
                    assert_eq!(g.locate_cell(&x).unwrap().0[n], k, "dim {n} value {v}");
                }
            }
        }
    }

    #[test]
    fn locate_rejects_dimension_mismatch() {
        let g = with_limits(grid(2, 2, 1), &[0.0, 0.0], &[1.0, 1.0]);
        assert!(matches!(g.locate_cell(&[0.1]), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(g.locate_cell(&[0.1, f64::NAN]), Err(Error::NonFiniteFeature(1))));
        assert!(matches!(grid(2, 2, 1).locate_cell(&[0.1, 0.2]), Err(Error::NotPrepared)));
    }

    #[test]
    fn neighbors_interior_corner_radius_two() {
        let g = grid(2, 10, 1);
        let n = g.von_neumann_neighbors(&Coords(vec![5, 5]), 1);
        let want: Vec<Coords> =
            [[4, 5], [5, 4], [5, 6], [6, 5]].iter().map(|c| Coords(c.to_vec())).collect();
        assert_eq!(n, want);
        let corner = g.von_neumann_neighbors(&Coords(vec![0, 0]), 1);
        assert_eq!(corner, vec![Coords(vec![0, 1]), Coords(vec![1, 0])]);
        assert_eq!(g.von_neumann_neighbors(&Coords(vec![5, 5]), 2).len(), 12);
    }

    #[test]
    fn majority_vote_cases() {
        let a = [0, 1];
        assert_eq!(majority_vote([0, 1, 1, 0, 1].map(Some), None, &a), Some(1));
        assert_eq!(majority_vote([Some(0), Some(1)], Some(0), &a), Some(0));
        assert_eq!(majority_vote([None, None], None, &a), None);
        assert_eq!(majority_vote(std::iter::empty(), Some(1), &a), None);
    }

    #[test]
    fn majority_vote_two_label_ties_exhaustive() {
        // every tied configuration over two labels
        let a = [0, 1];
        for n in 1..=4usize {
            let states: Vec<Option<Label>> =
                (0..2 * n).map(|i| Some((i % 2) as Label)).collect();
            assert_eq!(majority_vote(states.clone(), Some(0), &a), Some(0));
            assert_eq!(majority_vote(states.clone(), Some(1), &a), Some(1));
            assert_eq!(majority_vote(states, None, &a), Some(0));
        }
        // alphabet order, not numeric order, breaks ties
        assert_eq!(majority_vote([Some(0), Some(1)], None, &[1, 0]), Some(1));
    }

    #[test]
    fn expand_limits_cases() {
        let mut g = with_limits(grid(1, 4, 1), &[0.0], &[1.0]);
        g.expand_limits(&[1.5]).unwrap();
        assert_eq!((g.limits().low[0], g.limits().high[0]), (0.0, 1.5));
        g.expand_limits(&[0.5]).unwrap();
        assert_eq!((g.limits().low[0], g.limits().high[0]), (0.0, 1.5));

        let mut g = with_limits(grid(2, 10, 1), &[3.0, -3.0], &[7.0, 3.0]);
        g.expand_limits(&[8.0, -4.0]).unwrap();
        assert_eq!(g.limits().low, vec![3.0, -4.0]);
        assert_eq!(g.limits().high, vec![8.0, 3.0]);
    }

    #[test]
    fn degenerate_axis_is_widened() {
        let mut g = grid(2, 10, 1);
        g.expand_limits(&[2.0, 5.0]).unwrap();
        assert_eq!(g.limits().low, g.limits().high);
        assert_eq!(g.locate_cell(&[2.0, 5.0]).unwrap(), Coords(vec![0, 0]));
        assert_eq!(g.locate_cell(&[9.0, -1.0]).unwrap(), Coords(vec![0, 0]));
    }

    #[test]
    fn hits_and_resolution() {
        let mut g = with_limits(grid(1, 4, 1), &[0.0], &[1.0]);
        let c = Coords(vec![2]);
        g.record_hit(&c, 0).unwrap();
        g.record_hit(&c, 1).unwrap();
        assert_eq!(g.cell(&c).unwrap().hit_history, vec![0, 1]);
        g.record_hit(&c, 1).unwrap();
        assert_eq!(g.cell(&c).unwrap().hit_history, vec![0, 1, 1]);
        assert!(matches!(g.record_hit(&c, 7), Err(Error::UnknownLabel(7))));
        g.resolve_states();
        assert_eq!(g.state(&c), Some(1));
        assert_eq!(g.state(&Coords(vec![0])), None);
    }

    #[test]
    fn modal_label_ties_go_to_most_recent() {
        assert_eq!(modal_label(&[1, 1, 0]), Some(1));
        assert_eq!(modal_label(&[]), None);
        assert_eq!(modal_label(&[0, 1]), Some(1));
        assert_eq!(modal_label(&[1, 0]), Some(0));
        // all orderings of two 0s and two 1s: the last element decides
        for mask in 0u32..16 {
            if mask.count_ones() != 2 {
                continue;
            }
            let h: Vec<Label> = (0..4).map(|i| (mask >> i) & 1).collect();
            assert_eq!(modal_label(&h), Some(h[3]), "{h:?}");
        }
    }

    #[test]
    fn flood_fill_from_center() {
        let mut g = grid(2, 3, 1);
        g.set_state(&Coords(vec![1, 1]), Some(1)).unwrap();
        assert_eq!(g.evolve_until_full().unwrap(), 2);
        assert!(g.iter().all(|(_, c)| c.state == Some(1)));
    }

    #[test]
    fn one_dimensional_single_step() {
        let mut g = grid(1, 4, 1);
        g.set_state(&Coords(vec![1]), Some(0)).unwrap();
        g.set_state(&Coords(vec![2]), Some(1)).unwrap();
        assert_eq!(g.evolve_until_full().unwrap(), 1);
        let states: Vec<_> = g.iter().map(|(_, c)| c.state.unwrap()).collect();
        assert_eq!(states, vec![0, 0, 1, 1]);
    }

    #[test]
    fn full_grid_is_fixed_point() {
        let mut g = grid(2, 3, 1);
        for i in 0..9 {
            g.cell_at_mut(i).state = Some((i % 2) as Label);
        }
        let before = g.clone();
        assert_eq!(g.evolve_until_full().unwrap(), 0);
        assert_eq!(g, before);
    }

    #[test]
    fn evolve_rejects_empty_grid() {
        let mut g = grid(2, 3, 1);
        assert!(matches!(g.evolve_until_full(), Err(Error::EmptyPreparatorySet)));
    }

    #[test]
    fn coords_roundtrip_index() {
        let g = grid(3, 4, 1);
        for i in 0..g.len() {
            assert_eq!(g.index_of(&g.coords_of(i)), Some(i));
        }
        assert_eq!(g.index_of(&Coords(vec![4, 0, 0])), None);
    }
}
