//! Gray codes, Karnaugh-map layout and prime-implicant sum-of-products covers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// Largest map size handled by [`KMap`] and [`sop_cover`].
pub const MAX_KMAP_VARS: usize = 4;

/// Reflected binary Gray code of width `n`, `1 <= n <= 16`.
pub fn gray_code(n: usize) -> Result<Vec<u32>> {
    if !(1..=16).contains(&n) {
        return Err(Error::Domain(format!("gray code width {n} outside 1..=16")));
    }
    Ok((0..1u32 << n).map(|i| i ^ (i >> 1)).collect())
}

/// Inverse of the Gray map: position of `g` in [`gray_code`].
pub fn gray_decode(mut g: u32) -> u32 {
    let mut shift = 1;
    while shift < 32 {
        g ^= g >> shift;
        shift <<= 1;
    }
    g
}

/// `n`-character binary string of `v`.
pub fn bit_string(v: u32, n: usize) -> String {
    (0..n)
        .map(|k| if (v >> (n - 1 - k)) & 1 == 1 { '1' } else { '0' })
        .collect()
}

fn check_truth_vector(tv: &[bool]) -> Result<usize> {
    let n = tv.len().trailing_zeros() as usize;
    if tv.len() != 1 << n {
        return Err(Error::Shape(format!(
            "truth vector length {} is not a power of two",
            tv.len()
        )));
    }
    if n > MAX_KMAP_VARS {
        return Err(Error::Resource {
            what: "k-map variables",
            requested: n,
            cap: MAX_KMAP_VARS,
        });
    }
    Ok(n)
}

/// Parses `0`/`1` entries separated by commas, whitespace or newlines.
/// A run such as `10010110` counts as one entry per digit.
pub fn parse_truth_vector(text: &str) -> Result<Vec<bool>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split(|c: char| c == ',' || c.is_whitespace()) {
            match tok {
                "" => {}
                bits if bits.bytes().all(|b| b == b'0' || b == b'1') => {
                    out.extend(bits.bytes().map(|b| b == b'1'));
                }
                other => {
                    return Err(Error::Domain(format!(
                        "line {}: truth vector entry {other:?} is not 0 or 1",
                        lineno + 1
                    )))
                }
            }
        }
    }
    if out.is_empty() || !out.len().is_power_of_two() {
        return Err(Error::Shape(format!(
            "truth vector length {} is not a power of two",
            out.len()
        )));
    }
    Ok(out)
}

/// Values laid out on a Gray-ordered grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KMap<T> {
    pub num_vars: usize,
    /// Leading variables index rows, the rest index columns.
    pub row_vars: Vec<usize>,
    pub col_vars: Vec<usize>,
    /// Row-major, `rows() * cols()` entries.
    pub cells: Vec<T>,
}

impl<T: Clone> KMap<T> {
    /// Lays out a truth vector (variable 0 most significant). `row_count`
    /// defaults to `n / 2` rounded down.
    pub fn new(values: &[T], row_count: Option<usize>) -> Result<Self> {
        let n = values.len().trailing_zeros() as usize;
        if values.len() != 1 << n || !(1..=MAX_KMAP_VARS).contains(&n) {
            return Err(Error::Shape(format!(
                "k-map needs 2^n values with 1 <= n <= {MAX_KMAP_VARS}, got {}",
                values.len()
            )));
        }
        let r = row_count.unwrap_or(n / 2);
        if r > n {
            return Err(Error::Domain(format!("{r} row variables for a {n}-variable map")));
        }
        let mut map = KMap {
            num_vars: n,
            row_vars: (0..r).collect(),
            col_vars: (r..n).collect(),
            cells: Vec::with_capacity(values.len()),
        };
        for row in 0..map.rows() {
            for col in 0..map.cols() {
                map.cells.push(values[map.index_at(row, col)].clone());
            }
        }
        Ok(map)
    }

    pub fn rows(&self) -> usize {
        1 << self.row_vars.len()
    }

    pub fn cols(&self) -> usize {
        1 << self.col_vars.len()
    }

    /// Truth-vector index shown at grid position `(row, col)`.
    pub fn index_at(&self, row: usize, col: usize) -> usize {
        let r = self.row_vars.len();
        let c = self.col_vars.len();
        let rg = (row ^ (row >> 1)) << c;
        let cg = col ^ (col >> 1);
        debug_assert!(row < 1 << r && col < 1 << c);
        rg | cg
    }

    pub fn cell(&self, row: usize, col: usize) -> &T {
        &self.cells[row * self.cols() + col]
    }

    pub fn row_label(&self, row: usize) -> String {
        bit_string((row ^ (row >> 1)) as u32, self.row_vars.len())
    }

    pub fn col_label(&self, col: usize) -> String {
        bit_string((col ^ (col >> 1)) as u32, self.col_vars.len())
    }

    /// Fixed-width text grid. `names` supplies one label per variable.
    pub fn render_with(&self, names: &[String], show: impl Fn(&T) -> String) -> String {
        let row_head: String = self.row_vars.iter().map(|&v| names[v].as_str()).collect();
        let col_head: String = self.col_vars.iter().map(|&v| names[v].as_str()).collect();
        let corner = format!("{row_head}\\{col_head}");
        let shown: Vec<String> = self.cells.iter().map(&show).collect();
        let width = shown
            .iter()
            .map(|s| s.chars().count())
            .chain(std::iter::once(self.col_vars.len()))
            .max()
            .unwrap_or(1)
            .max(1);
        let left = corner.chars().count().max(self.row_vars.len());
        let mut out = format!("{corner:>left$} |");
        for c in 0..self.cols() {
            out.push_str(&format!(" {:>width$}", self.col_label(c)));
        }
        out.push('\n');
        out.push_str(&"-".repeat(left + 1));
        out.push('+');
        out.push_str(&"-".repeat(self.cols() * (width + 1)));
        out.push('\n');
        for r in 0..self.rows() {
            out.push_str(&format!("{:>left$} |", self.row_label(r)));
            for c in 0..self.cols() {
                out.push_str(&format!(" {:>width$}", shown[r * self.cols() + c]));
            }
            out.push('\n');
        }
        out
    }
}

/// Default variable labels `x0 .. x{n-1}`.
pub fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

/// Renders a Boolean map with `.` on 1-cells and blanks elsewhere.
pub fn render_kmap(tv: &[bool], row_count: Option<usize>, names: Option<&[String]>) -> Result<String> {
    let map = KMap::new(tv, row_count)?;
    let names = match names {
        Some(n) if n.len() == map.num_vars => n.to_vec(),
        Some(n) => {
            return Err(Error::Dimension {
                expected: map.num_vars,
                found: n.len(),
            })
        }
        None => default_names(map.num_vars),
    };
    Ok(map.render_with(&names, |&b| if b { ".".into() } else { " ".into() }))
}

/// A product term: some variables fixed, the others free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Implicant {
    pub num_vars: usize,
    pub fixed: BTreeMap<usize, bool>,
}

impl Implicant {
    pub fn free(&self) -> BTreeSet<usize> {
        (0..self.num_vars).filter(|v| !self.fixed.contains_key(v)).collect()
    }

    pub fn covers(&self, index: usize) -> bool {
        self.fixed
            .iter()
            .all(|(&v, &b)| ((index >> (self.num_vars - 1 - v)) & 1 == 1) == b)
    }

    pub fn cells(&self) -> Vec<usize> {
        (0..1 << self.num_vars).filter(|&i| self.covers(i)).collect()
    }

    pub fn contains(&self, other: &Implicant) -> bool {
        self.fixed.iter().all(|(v, b)| other.fixed.get(v) == Some(b))
    }

    /// Smallest subcube containing every listed cell; `None` unless the
    /// cells form exactly one subcube.
    pub fn from_cells(cells: &[usize], num_vars: usize) -> Option<Self> {
        let first = *cells.first()?;
        let mut fixed = BTreeMap::new();
        for v in 0..num_vars {
            let bit = |i: usize| (i >> (num_vars - 1 - v)) & 1 == 1;
            if cells.iter().all(|&c| bit(c) == bit(first)) {
                fixed.insert(v, bit(first));
            }
        }
        let imp = Implicant { num_vars, fixed };
        let mut want: Vec<usize> = cells.to_vec();
        want.sort_unstable();
        want.dedup();
        (imp.cells() == want).then_some(imp)
    }

    /// Per-variable key: fixed 0 < fixed 1 < free.
    fn key(&self) -> Vec<u8> {
        (0..self.num_vars)
            .map(|v| match self.fixed.get(&v) {
                Some(false) => 0,
                Some(true) => 1,
                None => 2,
            })
            .collect()
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        ImplicantDisplay { imp: self, names }
    }
}

impl Ord for Implicant {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Implicant {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

struct ImplicantDisplay<'a> {
    imp: &'a Implicant,
    names: &'a [String],
}

impl fmt::Display for ImplicantDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.imp.fixed.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .imp
            .fixed
            .iter()
            .map(|(&v, &b)| {
                if b {
                    self.names[v].clone()
                } else {
                    format!("~{}", self.names[v])
                }
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

impl fmt::Display for Implicant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.num_vars);
        let text = self.display_with(&names).to_string();
        f.write_str(&text)
    }
}

/// Sum-of-products text, `0` for an empty cover.
pub fn format_sop(cover: &[Implicant], names: &[String]) -> String {
    if cover.is_empty() {
        return "0".into();
    }
    cover
        .iter()
        .map(|i| i.display_with(names).to_string())
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Evaluates a sum of products at a canonical index.
pub fn eval_sop(cover: &[Implicant], index: usize) -> bool {
    cover.iter().any(|i| i.covers(index))
}

/// All prime implicants of `tv`, sorted.
pub fn prime_implicants(tv: &[bool]) -> Result<Vec<Implicant>> {
    let n = check_truth_vector(tv)?;
    let mut valid = Vec::new();
    // Every subcube: each variable fixed 0, fixed 1 or free.
    for code in 0..3usize.pow(n as u32) {
        let mut fixed = BTreeMap::new();
        let mut c = code;
        for v in 0..n {
            match c % 3 {
                0 => {
                    fixed.insert(v, false);
                }
                1 => {
                    fixed.insert(v, true);
                }
                _ => {}
            }
            c /= 3;
        }
        let imp = Implicant { num_vars: n, fixed };
        if imp.cells().iter().all(|&i| tv[i]) {
            valid.push(imp);
        }
    }
    let mut primes: Vec<Implicant> = valid
        .iter()
        .filter(|a| !valid.iter().any(|b| b != *a && b.contains(a)))
        .cloned()
        .collect();
    primes.sort();
    Ok(primes)
}

/// Prime-implicant cover of the 1-cells: essential primes first, then
/// greedy by most newly covered cells, ties to the smaller implicant.
pub fn sop_cover(tv: &[bool]) -> Result<Vec<Implicant>> {
    let primes = prime_implicants(tv)?;
    let ones: BTreeSet<usize> = (0..tv.len()).filter(|&i| tv[i]).collect();
    let mut chosen: Vec<Implicant> = Vec::new();
    let mut covered: BTreeSet<usize> = BTreeSet::new();
    for &cell in &ones {
        let owners: Vec<&Implicant> = primes.iter().filter(|p| p.covers(cell)).collect();
        if owners.len() == 1 && !chosen.contains(owners[0]) {
            chosen.push(owners[0].clone());
            covered.extend(owners[0].cells());
        }
    }
    while covered.len() < ones.len() {
        let best = primes
            .iter()
            .filter(|p| !chosen.contains(p))
            .max_by(|a, b| {
                let gain = |p: &Implicant| p.cells().iter().filter(|c| !covered.contains(c)).count();
                gain(a).cmp(&gain(b)).then_with(|| b.cmp(a))
            })
            .expect("primes cover every 1-cell");
        covered.extend(best.cells());
        chosen.push(best.clone());
    }
    chosen.sort();
    Ok(chosen)
}

/// Parses a Boolean-valued vector given as `u8` entries, rejecting values
/// other than 0 and 1.
pub fn to_bool_vector(values: &[u8]) -> Result<Vec<bool>> {
    values
        .iter()
        .map(|&v| match v {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(Error::Domain(format!("truth vector entry {other} is not 0 or 1"))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(bits: &str) -> Vec<bool> {
        bits.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn four_bit_gray_code() {
        let g: Vec<String> = gray_code(4).unwrap().into_iter().map(|v| bit_string(v, 4)).collect();
        let expect = "0000,0001,0011,0010,0110,0111,0101,0100,1100,1101,1111,1110,1010,1011,1001,1000";
        assert_eq!(g.join(","), expect);
        assert_eq!(gray_code(1).unwrap(), vec![0, 1]);
        assert!(gray_code(0).is_err());
        assert!(gray_code(17).is_err());
    }

    #[test]
    fn gray_decode_inverts() {
        for (pos, g) in gray_code(10).unwrap().into_iter().enumerate() {
            assert_eq!(gray_decode(g) as usize, pos);
        }
    }

    #[test]
    fn majority_cover() {
        let names: Vec<String> = ["z", "x1", "x2"].iter().map(|s| s.to_string()).collect();
        let cover = sop_cover(&tv("00010111")).unwrap();
        assert_eq!(format_sop(&cover, &names), "z*x1 + z*x2 + x1*x2");
    }

    #[test]
    fn constant_maps() {
        let cover = sop_cover(&[true; 8]).unwrap();
        assert_eq!(cover.len(), 1);
        assert!(cover[0].fixed.is_empty());
        assert!(sop_cover(&[false; 4]).unwrap().is_empty());
    }

    #[test]
    fn circled_cubes_are_single_literals() {
        let names: Vec<String> = ["z", "x1", "x2"].iter().map(|s| s.to_string()).collect();
        let cubes: Vec<String> = [[4, 5, 7, 6], [1, 3, 5, 7], [3, 2, 7, 6]]
            .iter()
            .map(|c| Implicant::from_cells(c, 3).unwrap().display_with(&names).to_string())
            .collect();
        assert_eq!(cubes, vec!["z", "x2", "x1"]);
        assert!(Implicant::from_cells(&[1, 2], 3).is_none());
        let cover = sop_cover(&tv("01111111")).unwrap();
        assert_eq!(format_sop(&cover, &names), "z + x1 + x2");
    }

    #[test]
    fn layout_and_render() {
        let map = KMap::new(&(0..8).collect::<Vec<_>>(), None).unwrap();
        assert_eq!((map.rows(), map.cols()), (2, 4));
        assert_eq!(map.cells, vec![0, 1, 3, 2, 4, 5, 7, 6]);
        let names: Vec<String> = ["z", "x1", "x2"].iter().map(|s| s.to_string()).collect();
        // violations of z = x1 AND x2
        let text = render_kmap(&tv("00011110"), None, Some(&names)).unwrap();
        assert_eq!(
            text,
            "z\\x1x2 | 00 01 11 10\n-------+------------\n     0 |        .   \n     1 |  .  .     .\n"
        );
        let blank = render_kmap(&[false; 8], None, Some(&names)).unwrap();
        assert!(!blank.lines().skip(2).any(|l| l.contains('.')));
    }

    #[test]
    fn parse_vectors() {
        assert_eq!(parse_truth_vector("0,1\n1 0\n").unwrap(), tv("0110"));
        assert_eq!(parse_truth_vector("1\n0\n").unwrap(), tv("10"));
        assert_eq!(parse_truth_vector("1001 0110 # xor\n").unwrap(), tv("10010110"));
        assert!(matches!(parse_truth_vector("10x1"), Err(Error::Domain(_))));
        assert!(matches!(parse_truth_vector("0,2"), Err(Error::Domain(_))));
        assert!(matches!(parse_truth_vector("0,1,1"), Err(Error::Shape(_))));
        assert!(to_bool_vector(&[0, 1, 3]).is_err());
    }
}
