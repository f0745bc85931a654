//! Plain-text dumps of grid and detector state, and their rendering.
//!
//! A snapshot is line oriented: a `curie-snapshot 1` magic line, `key value`
//! header lines, then one `cell` line per grid cell and one `mutations` line
//! per cell with a non-empty mutation log.
//!
//! ```text
//! curie-snapshot 1
//! clock 1044
//! dims 2
//! bins 10
//! radius 2
//! radius_mut 2
//! mutation_period 10
//! n_muts_allowed 2
//! alphabet 0 1
//! limit 0 0 10
//! limit 1 0 10
//! detection 1043 2,6 2,4@1037 3,7@1039
//! cell 0,0 0 3 -
//! mutations 2,4 1037
//! ```
//!
//! `cell` lines carry coordinates, state (`-` when unassigned), hit count and
//! last mutation time (`-` when none).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::curie::{CurieDetector, DetectionEvent};
use crate::grid::{Coords, Grid};
use crate::{Error, Label, Result};

const MAGIC: &str = "curie-snapshot 1";

#[derive(Debug, Clone, PartialEq)]
pub struct CellRecord {
    pub coords: Coords,
    pub state: Option<Label>,
    pub hits: usize,
    pub mutations: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub clock: u64,
    pub dims: usize,
    pub bins: usize,
    pub radius: usize,
    pub radius_mut: usize,
    pub mutation_period: u64,
    pub n_muts_allowed: usize,
    pub alphabet: Vec<Label>,
    pub limits: Vec<(f64, f64)>,
    pub detection: Option<DetectionEvent>,
    pub cells: Vec<CellRecord>,
}

/// One line per cell: coords, state, hit count, last mutation time.
pub fn dump_grid(grid: &Grid) -> String {
    let mut out = String::new();
    for (c, cell) in grid.iter() {
        write_cell_line(&mut out, &c, cell.state, cell.hit_history.len(), cell.last_mutation());
    }
    out
}

fn write_cell_line(out: &mut String, c: &Coords, state: Option<Label>, hits: usize, last: Option<u64>) {
    let state = state.map_or("-".to_string(), |s| s.to_string());
    let last = last.map_or("-".to_string(), |t| t.to_string());
    let _ = writeln!(out, "cell {c} {state} {hits} {last}");
}

impl Snapshot {
    pub(crate) fn of_detector(d: &CurieDetector) -> Self {
        let cfg = d.config();
        let grid = d.grid();
        let limits = grid.limits();
        Snapshot {
            clock: d.clock(),
            dims: cfg.grid.dims,
            bins: cfg.grid.bins_per_dim,
            radius: cfg.grid.radius,
            radius_mut: cfg.radius_mut,
            mutation_period: cfg.mutation_period,
            n_muts_allowed: cfg.n_muts_allowed,
            alphabet: cfg.grid.alphabet.clone(),
            limits: limits.low.iter().copied().zip(limits.high.iter().copied()).collect(),
            detection: d.last_detection().cloned(),
            cells: grid
                .iter()
                .map(|(coords, c)| CellRecord {
                    coords,
                    state: c.state,
                    hits: c.hit_history.len(),
                    mutations: c.mutation_times.clone(),
                })
                .collect(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{MAGIC}");
        let _ = writeln!(out, "clock {}", self.clock);
        let _ = writeln!(out, "dims {}", self.dims);
        let _ = writeln!(out, "bins {}", self.bins);
        let _ = writeln!(out, "radius {}", self.radius);
        let _ = writeln!(out, "radius_mut {}", self.radius_mut);
        let _ = writeln!(out, "mutation_period {}", self.mutation_period);
        let _ = writeln!(out, "n_muts_allowed {}", self.n_muts_allowed);
        let alphabet: Vec<String> = self.alphabet.iter().map(|l| l.to_string()).collect();
        let _ = writeln!(out, "alphabet {}", alphabet.join(" "));
        for (n, (lo, hi)) in self.limits.iter().enumerate() {
            let _ = writeln!(out, "limit {n} {lo} {hi}");
        }
        if let Some(ev) = &self.detection {
            let _ = write!(out, "detection {} {}", ev.time, ev.cell);
            for (c, t) in &ev.mutant_neighbors {
                let _ = write!(out, " {c}@{t}");
            }
            out.push('\n');
        }
        for c in &self.cells {
            write_cell_line(&mut out, &c.coords, c.state, c.hits, c.mutations.last().copied());
        }
        for c in self.cells.iter().filter(|c| !c.mutations.is_empty()) {
            let times: Vec<String> = c.mutations.iter().map(|t| t.to_string()).collect();
            let _ = writeln!(out, "mutations {} {}", c.coords, times.join(" "));
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        Parser { origin: origin.to_path_buf() }.parse(text)
    }

    fn glyph(&self, state: Option<Label>) -> char {
        const GLYPHS: &[u8] = b"0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";
        match state.and_then(|s| self.alphabet.iter().position(|&l| l == s)) {
            Some(i) if i < GLYPHS.len() => GLYPHS[i] as char,
            Some(_) => '#',
            None => '.',
        }
    }

    /// Text map of cell states sliced along the first two axes, followed by
    /// the recent mutations and the last detection.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "grid at t={} ({} dims x {} bins)", self.clock, self.dims, self.bins);
        let lim: Vec<String> = self
            .limits
            .iter()
            .enumerate()
            .map(|(n, (lo, hi))| format!("x{n} [{lo}, {hi}]"))
            .collect();
        let _ = writeln!(out, "limits: {}", lim.join("  "));
        let legend: Vec<String> = self
            .alphabet
            .iter()
            .map(|&l| format!("{}={l}", self.glyph(Some(l))))
            .collect();
        let _ = writeln!(out, "states: {}", legend.join(" "));

        let g = self.bins;
        let states: Vec<Option<Label>> = self.cells.iter().map(|c| c.state).collect();
        if self.dims == 1 {
            out.extend(states.iter().map(|&s| self.glyph(s)));
            out.push('\n');
        } else {
            let plane = g * g;
            for (slice, chunk) in states.chunks(plane).enumerate() {
                if self.dims > 2 {
                    let rest = &self.cells[slice * plane].coords.0[2..];
                    let label: Vec<String> =
                        rest.iter().enumerate().map(|(i, v)| format!("x{}={v}", i + 2)).collect();
                    let _ = writeln!(out, "slice {}", label.join(", "));
                }
                for row in chunk.chunks(g) {
                    out.extend(row.iter().map(|&s| self.glyph(s)));
                    out.push('\n');
                }
            }
        }

        let since = self.clock.saturating_sub(self.mutation_period);
        let recent: Vec<&CellRecord> = self
            .cells
            .iter()
            .filter(|c| c.mutations.iter().any(|&t| t > since && t <= self.clock))
            .collect();
        if recent.is_empty() {
            let _ = writeln!(out, "no recent mutations");
        } else {
            let _ = writeln!(out, "recent mutations (t > {since}):");
            for c in recent {
                let times: Vec<String> = c
                    .mutations
                    .iter()
                    .filter(|&&t| t > since && t <= self.clock)
                    .map(|t| t.to_string())
                    .collect();
                let mut flag = "";
                if let Some(ev) = &self.detection {
                    if ev.cell == c.coords && c.mutations.contains(&ev.time) {
                        flag = " (trigger)";
                    } else if ev
                        .mutant_neighbors
                        .iter()
                        .any(|(nc, t)| *nc == c.coords && c.mutations.contains(t))
                    {
                        flag = " (counted)";
                    }
                }
                let _ = writeln!(out, "  [{}] at {}{flag}", c.coords, times.join(", "));
            }
        }
        match &self.detection {
            Some(ev) => {
                let n: Vec<String> =
                    ev.mutant_neighbors.iter().map(|(c, t)| format!("[{c}]@{t}")).collect();
                let _ = writeln!(
                    out,
                    "last drift at t={}: cell [{}] with mutant neighbours {}",
                    ev.time,
                    ev.cell,
                    n.join(", ")
                );
            }
            None => {
                let _ = writeln!(out, "no drift declared");
            }
        }
        out
    }
}

struct Parser {
    origin: PathBuf,
}

impl Parser {
    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse { path: self.origin.clone(), line: line as u64, message: message.into() }
    }

    fn num<T: std::str::FromStr>(&self, line: usize, s: Option<&str>, what: &str) -> Result<T> {
        let s = s.ok_or_else(|| self.err(line, format!("missing {what}")))?;
        s.parse().map_err(|_| self.err(line, format!("bad {what} '{s}'")))
    }

    fn coords(&self, line: usize, s: Option<&str>) -> Result<Coords> {
        let s = s.ok_or_else(|| self.err(line, "missing coordinates"))?;
        s.split(',')
            .map(|p| p.parse::<usize>().map_err(|_| self.err(line, format!("bad coordinates '{s}'"))))
            .collect::<Result<Vec<_>>>()
            .map(Coords)
    }

    fn opt<T: std::str::FromStr>(&self, line: usize, s: Option<&str>, what: &str) -> Result<Option<T>> {
        match s {
            Some("-") => Ok(None),
            other => self.num(line, other, what).map(Some),
        }
    }

    fn parse(&self, text: &str) -> Result<Snapshot> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        match lines.next() {
            Some((_, l)) if l.trim() == MAGIC => {}
            _ => return Err(self.err(1, "missing snapshot header")),
        }
        let mut snap = Snapshot {
            clock: 0,
            dims: 0,
            bins: 0,
            radius: 0,
            radius_mut: 0,
            mutation_period: 0,
            n_muts_allowed: 0,
            alphabet: Vec::new(),
            limits: Vec::new(),
            detection: None,
            cells: Vec::new(),
        };
        let mut seen_dims = false;
        for (n, raw) in lines {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let key = it.next().unwrap_or_default();
            match key {
                "clock" => snap.clock = self.num(n, it.next(), "clock")?,
                "dims" => {
                    snap.dims = self.num(n, it.next(), "dims")?;
                    seen_dims = true;
                }
                "bins" => snap.bins = self.num(n, it.next(), "bins")?,
                "radius" => snap.radius = self.num(n, it.next(), "radius")?,
                "radius_mut" => snap.radius_mut = self.num(n, it.next(), "radius_mut")?,
                "mutation_period" => snap.mutation_period = self.num(n, it.next(), "mutation_period")?,
                "n_muts_allowed" => snap.n_muts_allowed = self.num(n, it.next(), "n_muts_allowed")?,
                "alphabet" => {
                    snap.alphabet =
                        it.by_ref().map(|s| self.num(n, Some(s), "label")).collect::<Result<_>>()?
                }
                "limit" => {
                    let dim: usize = self.num(n, it.next(), "limit axis")?;
                    if dim != snap.limits.len() {
                        return Err(self.err(n, format!("limit for axis {dim} out of order")));
                    }
                    let lo = self.num(n, it.next(), "low limit")?;
                    let hi = self.num(n, it.next(), "high limit")?;
                    snap.limits.push((lo, hi));
                }
                "detection" => {
                    let time = self.num(n, it.next(), "detection time")?;
                    let cell = self.coords(n, it.next())?;
                    let mut mutant_neighbors = Vec::new();
                    for tok in it.by_ref() {
                        let (c, t) = tok
                            .split_once('@')
                            .ok_or_else(|| self.err(n, format!("bad neighbour '{tok}'")))?;
                        mutant_neighbors.push((self.coords(n, Some(c))?, self.num(n, Some(t), "time")?));
                    }
                    snap.detection = Some(DetectionEvent { time, cell, mutant_neighbors });
                }
                "cell" => {
                    if !seen_dims {
                        return Err(self.err(n, "cell line before dims"));
                    }
                    let coords = self.coords(n, it.next())?;
                    if coords.0.len() != snap.dims || coords.0.iter().any(|&c| c >= snap.bins) {
                        return Err(self.err(n, format!("coordinates [{coords}] outside grid")));
                    }
                    let state = self.opt(n, it.next(), "state")?;
                    let hits = self.num(n, it.next(), "hit count")?;
                    let last: Option<u64> = self.opt(n, it.next(), "mutation time")?;
                    snap.cells.push(CellRecord { coords, state, hits, mutations: last.into_iter().collect() });
                }
                "mutations" => {
                    let coords = self.coords(n, it.next())?;
                    let times: Vec<u64> =
                        it.by_ref().map(|s| self.num(n, Some(s), "mutation time")).collect::<Result<_>>()?;
                    let cell = snap
                        .cells
                        .iter_mut()
                        .find(|c| c.coords == coords)
                        .ok_or_else(|| self.err(n, format!("mutations for unknown cell [{coords}]")))?;
                    if times.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(self.err(n, "mutation times not strictly increasing"));
                    }
                    if times.last() != cell.mutations.last() {
                        return Err(self.err(n, "mutation log disagrees with cell line"));
                    }
                    cell.mutations = times;
                }
                other => return Err(self.err(n, format!("unknown key '{other}'"))),
            }
            if it.next().is_some() {
                return Err(self.err(n, "trailing tokens"));
            }
        }
        let expected = snap.bins.checked_pow(snap.dims as u32).unwrap_or(usize::MAX);
        if snap.dims == 0 || snap.cells.len() != expected {
            return Err(self.err(
                text.lines().count(),
                format!("expected {expected} cell lines, found {}", snap.cells.len()),
            ));
        }
        if snap.limits.len() != snap.dims {
            return Err(self.err(text.lines().count(), "limit lines do not match dims"));
        }
        Ok(snap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curie::CurieConfig;
    use crate::grid::GridConfig;
    use crate::Instance;

    fn small_detector() -> CurieDetector {
        let cfg = CurieConfig {
            grid: GridConfig::new(2, 4, 1, vec![0, 1]).unwrap(),
            radius_mut: 2,
            mutation_period: 10,
            n_muts_allowed: 2,
            prep_size: 10,
        };
        let mut d = CurieDetector::new(cfg).unwrap();
        d.prepare(&[Instance::new(0, vec![0.0, 0.0], 0), Instance::new(1, vec![4.0, 4.0], 1)])
            .unwrap();
        d
    }

    #[test]
    fn text_roundtrip() {
        let mut d = small_detector();
        d.update(&[0.5, 0.5], 1).unwrap();
        let snap = d.snapshot();
        let back = Snapshot::parse(&snap.to_text(), Path::new("mem")).unwrap();
        assert_eq!(back, snap);
    }

    #[test]
    fn grid_dump_has_one_line_per_cell() {
        let d = small_detector();
        let dump = dump_grid(d.grid());
        assert_eq!(dump.lines().count(), 16);
        assert!(dump.lines().all(|l| l.starts_with("cell ")));
    }

    #[test]
    fn render_two_dims() {
        let d = small_detector();
        let text = d.snapshot().render();
        let rows: Vec<&str> = text.lines().skip(3).take(4).collect();
        assert!(rows.iter().all(|r| r.len() == 4 && r.chars().all(|c| c == '0' || c == '1')));
        assert!(text.contains("no recent mutations"));
        assert!(text.contains("no drift declared"));
    }

    #[test]
    fn malformed_snapshot_reports_line() {
        let d = small_detector();
        let text = d.snapshot().to_text().replace("cell 1,1 ", "cell 1,x ");
        match Snapshot::parse(&text, Path::new("snap.txt")) {
            Err(Error::Parse { line, .. }) => {
                let want = text.lines().position(|l| l.starts_with("cell 1,x")).unwrap() + 1;
                assert_eq!(line as usize, want);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(Snapshot::parse("nonsense", Path::new("x")).is_err());
    }
}
