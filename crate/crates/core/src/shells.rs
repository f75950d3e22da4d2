//! Norm shells `Λ_D^r = {(x, y) ∈ Z² : N_D(x, y) = r}`.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use num_integer::{Integer, Roots};
use serde::{Deserialize, Serialize};

use crate::arith::representation_count;
use crate::error::{Error, Result};
use crate::ring::{QuadInt, Ring};

/// A lattice point in integral-basis coordinates.
pub type Point = (i64, i64);

/// The shell of norm `r`, points sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shell {
    ring: Ring,
    r: u64,
    points: Vec<Point>,
}

/// One unit orbit `{ε·x₀ : ε a unit}` with its lexicographically least point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub representative: Point,
    pub points: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
struct ShellRecord {
    #[serde(rename = "D")]
    d: i64,
    r: u64,
    points: Vec<[i64; 2]>,
}

#[inline]
fn isqrt(n: u128) -> u128 {
    n.sqrt()
}

/// `|y|` bound for points of norm at most `r`.
fn y_bound(ring: Ring, r: u64) -> i64 {
    if ring.is_half_integral() {
        isqrt(4 * r as u128 / ring.d() as u128) as i64
    } else {
        isqrt(r as u128 / ring.d() as u128) as i64
    }
}

/// Enumerate `Λ_D^r` exactly.
pub fn enumerate_shell(ring: Ring, r: u64) -> Shell {
    let d = ring.d() as u128;
    let bound = y_bound(ring, r);
    let mut points = Vec::new();
    for y in -bound..=bound {
        let dy2 = d * (y as i128 * y as i128) as u128;
        if ring.is_half_integral() {
            // 4r = (2x + y)² + Dy²
            let Some(rem) = (4 * r as u128).checked_sub(dy2) else {
                continue;
            };
            let s = isqrt(rem);
            if s * s != rem || (s as i64 - y) % 2 != 0 {
                continue;
            }
            let s = s as i64;
            points.push(((s - y) / 2, y));
            points.push(((-s - y) / 2, y));
        } else {
            let Some(rem) = (r as u128).checked_sub(dy2) else {
                continue;
            };
            let s = isqrt(rem);
            if s * s != rem {
                continue;
            }
            let s = s as i64;
            points.push((s, y));
            points.push((-s, y));
        }
    }
    points.sort_unstable();
    points.dedup();
    Shell { ring, r, points }
}

/// Visit every lattice point of norm at most `r_max` exactly once.
pub fn for_each_point_up_to(ring: Ring, r_max: u64, mut f: impl FnMut(i64, i64, u64)) {
    let d = ring.d() as u128;
    let bound = y_bound(ring, r_max);
    for y in -bound..=bound {
        let dy2 = d * (y as i128 * y as i128) as u128;
        let (lo, hi) = if ring.is_half_integral() {
            let Some(rem) = (4 * r_max as u128).checked_sub(dy2) else {
                continue;
            };
            let s = isqrt(rem) as i64;
            (
                Integer::div_ceil(&(-s - y), &2),
                Integer::div_floor(&(s - y), &2),
            )
        } else {
            let Some(rem) = (r_max as u128).checked_sub(dy2) else {
                continue;
            };
            let s = isqrt(rem) as i64;
            (-s, s)
        };
        for x in lo..=hi {
            let n = ring.norm_form_i128(x, y);
            debug_assert!(n >= 0 && n as u64 <= r_max);
            f(x, y, n as u64);
        }
    }
}

impl Shell {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Partition into unit orbits, ordered by representative.
    pub fn orbits(&self) -> Result<Vec<Orbit>> {
        if self.r == 0 {
            return Err(Error::ZeroShell);
        }
        let units = self.ring.units();
        let mut seen = vec![false; self.points.len()];
        let mut orbits = Vec::new();
        for (i, &rep) in self.points.iter().enumerate() {
            if seen[i] {
                continue;
            }
            let x0 = QuadInt::from_i64(self.ring, rep.0, rep.1);
            let mut pts: Vec<Point> = units
                .iter()
                .map(|u| {
                    let p = u.mul(&x0).expect("same ring");
                    (
                        i64::try_from(p.a()).expect("orbit point fits"),
                        i64::try_from(p.b()).expect("orbit point fits"),
                    )
                })
                .collect();
            pts.sort_unstable();
            for p in &pts {
                let k = self
                    .points
                    .binary_search(p)
                    .expect("shell is closed under units");
                seen[k] = true;
            }
            orbits.push(Orbit {
                representative: rep,
                points: pts,
            });
        }
        Ok(orbits)
    }

    /// Serialize as one cache line (no trailing newline).
    pub fn to_json_line(&self) -> String {
        let rec = ShellRecord {
            d: self.ring.d() as i64,
            r: self.r,
            points: self.points.iter().map(|&(x, y)| [x, y]).collect(),
        };
        serde_json::to_string(&rec).expect("plain record")
    }

    /// Parse and validate one cache line.
    ///
    /// The record is rejected unless every point lies on the shell, points are
    /// strictly sorted, and the count equals the representation number.
    pub fn from_json_line(line: &str) -> Result<Shell> {
        let rec: ShellRecord =
            serde_json::from_str(line).map_err(|e| Error::BadRecord(e.to_string()))?;
        let ring = Ring::new(rec.d)?;
        let points: Vec<Point> = rec.points.iter().map(|&[x, y]| (x, y)).collect();
        if !points.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::BadRecord("points not strictly sorted".into()));
        }
        if let Some(&(x, y)) = points
            .iter()
            .find(|&&(x, y)| ring.norm_form_i128(x, y) != rec.r as i128)
        {
            return Err(Error::BadRecord(format!(
                "({x}, {y}) is not of norm {}",
                rec.r
            )));
        }
        if points.len() as u64 != representation_count(ring, rec.r) {
            return Err(Error::BadRecord(format!(
                "expected {} points, found {}",
                representation_count(ring, rec.r),
                points.len()
            )));
        }
        Ok(Shell {
            ring,
            r: rec.r,
            points,
        })
    }
}

/// JSON-lines shell cache. Lines that fail validation are dropped and reported.
#[derive(Debug, Default)]
pub struct ShellCache {
    path: PathBuf,
    entries: BTreeMap<(Ring, u64), Shell>,
    dirty: bool,
}

impl ShellCache {
    /// Load a cache file; a missing file yields an empty cache. Returns the
    /// cache and one warning per rejected line.
    pub fn load(path: impl AsRef<Path>) -> io::Result<(ShellCache, Vec<String>)> {
        let path = path.as_ref().to_path_buf();
        let mut entries = BTreeMap::new();
        let mut warnings = Vec::new();
        match fs::File::open(&path) {
            Ok(f) => {
                for (i, line) in BufReader::new(f).lines().enumerate() {
                    let line = line?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    match Shell::from_json_line(&line) {
                        Ok(s) => {
                            entries.insert((s.ring, s.r), s);
                        }
                        Err(e) => warnings.push(format!(
                            "{}:{}: skipping cache line: {e}",
                            path.display(),
                            i + 1
                        )),
                    }
                }
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(e),
        }
        let dirty = !warnings.is_empty();
        Ok((
            ShellCache {
                path,
                entries,
                dirty,
            },
            warnings,
        ))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Cached shell, or a fresh enumeration that is then recorded.
    pub fn get_or_enumerate(&mut self, ring: Ring, r: u64) -> &Shell {
        if !self.entries.contains_key(&(ring, r)) {
            self.dirty = true;
        }
        self.entries
            .entry((ring, r))
            .or_insert_with(|| enumerate_shell(ring, r))
    }

    pub fn get(&self, ring: Ring, r: u64) -> Option<&Shell> {
        self.entries.get(&(ring, r))
    }

    /// Rewrite the file in `(D, r)` order if anything changed.
    pub fn save(&mut self) -> io::Result<()> {
        if !self.dirty {
            return Ok(());
        }
        if let Some(dir) = self.path.parent() {
            if !dir.as_os_str().is_empty() {
                fs::create_dir_all(dir)?;
            }
        }
        let mut out = io::BufWriter::new(fs::File::create(&self.path)?);
        for shell in self.entries.values() {
            writeln!(out, "{}", shell.to_json_line())?;
        }
        out.flush()?;
        self.dirty = false;
        Ok(())
    }
}
