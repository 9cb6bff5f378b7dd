//! Kramer-Mesner orbit incidence matrices.
//!
//! For a prescribed group G, the matrix has one row per G-orbit of
//! t-subspaces and one column per G-orbit of k-subspaces; the entry at
//! (T^G, K^G) counts the members of K^G through a fixed representative of
//! T^G. A 0/1 column selection solves `M x = lambda 1` exactly when the
//! union of the selected orbits is a G-invariant t-(v,k,lambda) design.
//!
//! For lambda = 1, columns carrying an entry larger than 1 can never be part
//! of a solution and are dropped by [`filter_lambda1`]; the provenance map
//! keeps solver column indices traceable to orbit representatives.

use std::collections::HashMap;
use std::fmt;

use crate::action::{orbit, orbit_partition};
use crate::gf2::{enumerate_subspaces, gaussian_binomial, Subspace};
use crate::group::MatrixGroup;
use crate::theory::DesignParams;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KmError {
    /// Column filtering applies to lambda = 1 systems only.
    LambdaNotOne(u64),
    /// Selection vector length does not match the column count.
    SelectionLength { expected: usize, got: usize },
    Parse(String),
}

impl fmt::Display for KmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KmError::LambdaNotOne(l) => write!(f, "column filtering requires lambda = 1, got {l}"),
            KmError::SelectionLength { expected, got } => {
                write!(f, "selection has {got} entries, matrix has {expected} columns")
            }
            KmError::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl std::error::Error for KmError {}

/// Representative and size of one orbit, as carried by matrix rows/columns
/// and orbit files. Members are recomputable from the representative and the
/// group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitMeta {
    pub representative: Subspace,
    pub size: u64,
}

/// Sparse Kramer-Mesner matrix with orbit metadata.
#[derive(Clone, Debug)]
pub struct KMMatrix {
    pub params: DesignParams,
    pub group_order: u64,
    rows: Vec<OrbitMeta>,
    cols: Vec<OrbitMeta>,
    /// Triplets sorted by (row, col); entries are bounded by orbit sizes.
    entries: Vec<(u32, u32, u16)>,
    filtered: bool,
    /// For a filtered matrix: original column index per surviving column.
    col_provenance: Option<Vec<u32>>,
}

impl KMMatrix {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn rows(&self) -> &[OrbitMeta] {
        &self.rows
    }

    pub fn cols(&self) -> &[OrbitMeta] {
        &self.cols
    }

    pub fn is_filtered(&self) -> bool {
        self.filtered
    }

    pub fn entries(&self) -> &[(u32, u32, u16)] {
        &self.entries
    }

    pub fn col_provenance(&self) -> Option<&[u32]> {
        self.col_provenance.as_deref()
    }

    pub fn entry(&self, r: u32, c: u32) -> u16 {
        self.entries
            .binary_search_by(|&(er, ec, _)| (er, ec).cmp(&(r, c)))
            .map(|i| self.entries[i].2)
            .unwrap_or(0)
    }

    /// Incidences of one column: (row, entry) pairs, ascending row.
    pub fn column_incidences(&self, c: u32) -> Vec<(u32, u16)> {
        self.entries
            .iter()
            .filter(|&&(_, ec, _)| ec == c)
            .map(|&(r, _, val)| (r, val))
            .collect()
    }

    /// Matrix-vector product against a 0/1 selection.
    pub fn coverage(&self, selection: &[bool]) -> Result<Vec<u64>, KmError> {
        if selection.len() != self.cols.len() {
            return Err(KmError::SelectionLength { expected: self.cols.len(), got: selection.len() });
        }
        let mut cover = vec![0u64; self.rows.len()];
        for &(r, c, val) in &self.entries {
            if selection[c as usize] {
                cover[r as usize] += u64::from(val);
            }
        }
        Ok(cover)
    }
}

/// Builds the Kramer-Mesner matrix for an enumerated group.
///
/// Entries are computed by tallying (t-subspace, block) incidences over all
/// members of each column orbit and dividing by the row orbit length; the
/// division being exact is asserted, and doubles as a well-definedness check
/// independent of representative choice.
pub fn build_km_matrix(group: &MatrixGroup, params: DesignParams) -> KMMatrix {
    let DesignParams { t, v, k, .. } = params;
    let row_orbits = orbit_partition(v, t, group);
    let col_orbits = orbit_partition(v, k, group);

    let mut member_to_row: HashMap<Subspace, u32> = HashMap::with_capacity(
        usize::try_from(gaussian_binomial(v, t as i64)).expect("t-Grassmannian fits"),
    );
    for (i, o) in row_orbits.iter().enumerate() {
        for m in o.members() {
            member_to_row.insert(m.clone(), i as u32);
        }
    }

    let mut entries: Vec<(u32, u32, u16)> = Vec::new();
    let mut tally: HashMap<u32, u64> = HashMap::new();
    for (c, col) in col_orbits.iter().enumerate() {
        tally.clear();
        for block in col.members() {
            for sub in block.subspaces(t) {
                *tally.entry(member_to_row[&sub]).or_insert(0) += 1;
            }
        }
        let mut col_entries: Vec<(u32, u32, u16)> = tally
            .iter()
            .map(|(&r, &pairs)| {
                let row_size = row_orbits[r as usize].size() as u64;
                assert_eq!(pairs % row_size, 0, "incidence count must split evenly over the row orbit");
                let val = pairs / row_size;
                (r, c as u32, u16::try_from(val).expect("entry fits in u16"))
            })
            .collect();
        col_entries.sort_unstable();
        entries.extend(col_entries);
    }
    entries.sort_unstable();

    let meta = |o: &crate::action::Orbit| OrbitMeta {
        representative: o.representative().clone(),
        size: o.size() as u64,
    };
    KMMatrix {
        params,
        group_order: group.order().expect("group must be enumerated") as u64,
        rows: row_orbits.iter().map(meta).collect(),
        cols: col_orbits.iter().map(meta).collect(),
        entries,
        filtered: false,
        col_provenance: None,
    }
}

/// Drops every column containing an entry larger than 1. Only meaningful for
/// lambda = 1, where such orbits can never participate in a solution.
pub fn filter_lambda1(m: &KMMatrix) -> Result<KMMatrix, KmError> {
    if m.params.lambda != 1 {
        return Err(KmError::LambdaNotOne(m.params.lambda));
    }
    let ncols = m.cols.len();
    let mut keep = vec![true; ncols];
    for &(_, c, val) in &m.entries {
        if val > 1 {
            keep[c as usize] = false;
        }
    }
    let mut new_index = vec![u32::MAX; ncols];
    let mut provenance = Vec::new();
    let mut cols = Vec::new();
    for c in 0..ncols {
        if keep[c] {
            new_index[c] = cols.len() as u32;
            // trace through an earlier filtering if there was one
            let original = m.col_provenance.as_ref().map_or(c as u32, |p| p[c]);
            provenance.push(original);
            cols.push(m.cols[c].clone());
        }
    }
    let entries: Vec<(u32, u32, u16)> = m
        .entries
        .iter()
        .filter(|&&(_, c, _)| keep[c as usize])
        .map(|&(r, c, val)| (r, new_index[c as usize], val))
        .collect();
    Ok(KMMatrix {
        params: m.params,
        group_order: m.group_order,
        rows: m.rows.clone(),
        cols,
        entries,
        filtered: true,
        col_provenance: Some(provenance),
    })
}

/// A set of candidate blocks assembled from selected column orbits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DesignCandidate {
    pub params: DesignParams,
    pub blocks: Vec<Subspace>,
}

/// Union of the members of the selected column orbits. `selection` indexes
/// the matrix columns; the group is needed to expand representatives into
/// full orbits.
pub fn assemble_design(
    m: &KMMatrix,
    selection: &[bool],
    group: &MatrixGroup,
) -> Result<DesignCandidate, KmError> {
    if selection.len() != m.cols.len() {
        return Err(KmError::SelectionLength { expected: m.cols.len(), got: selection.len() });
    }
    let mut blocks = Vec::new();
    for (c, &take) in selection.iter().enumerate() {
        if take {
            let orb = orbit(&m.cols[c].representative, group);
            assert_eq!(orb.size() as u64, m.cols[c].size);
            blocks.extend_from_slice(orb.members());
        }
    }
    blocks.sort_unstable();
    blocks.dedup();
    Ok(DesignCandidate { params: m.params, blocks })
}

/// Coverage report from [`verify_design`].
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub ok: bool,
    pub subspaces_checked: u64,
    /// t-subspaces covered a wrong number of times, with their counts
    /// (capped at 100 entries).
    pub violations: Vec<(Subspace, u64)>,
}

/// Checks the defining property directly: every t-subspace of the ambient
/// space lies in exactly lambda blocks.
pub fn verify_design(d: &DesignCandidate) -> VerifyReport {
    let DesignParams { t, v, lambda, .. } = d.params;
    let mut coverage: HashMap<Subspace, u64> = HashMap::new();
    for block in &d.blocks {
        for sub in block.subspaces(t) {
            *coverage.entry(sub).or_insert(0) += 1;
        }
    }
    let mut violations = Vec::new();
    let mut checked = 0u64;
    for sub in enumerate_subspaces(v, t) {
        checked += 1;
        let count = coverage.get(&sub).copied().unwrap_or(0);
        if count != lambda && violations.len() < 100 {
            violations.push((sub, count));
        }
    }
    VerifyReport { ok: violations.is_empty(), subspaces_checked: checked, violations }
}

/// Blocks file: `v=<v> k=<k> blocks=<n>` header, then one block per line as
/// its canonical basis in hex.
pub fn write_blocks_file(d: &DesignCandidate) -> String {
    let mut s = format!("v={} k={} blocks={}\n", d.params.v, d.params.k, d.blocks.len());
    for b in &d.blocks {
        s.push_str(&b.to_hex_row());
        s.push('\n');
    }
    s
}

/// Parses a blocks file; `t` and `lambda` are supplied by the caller since
/// the file pins only the ambient data.
pub fn parse_blocks_file(text: &str, t: u32, lambda: u64) -> Result<DesignCandidate, KmError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| KmError::Parse("empty blocks file".into()))?;
    let mut v = None;
    let mut k = None;
    let mut n = None;
    for tok in header.split_whitespace() {
        if let Some(x) = tok.strip_prefix("v=") {
            v = x.parse::<u32>().ok();
        } else if let Some(x) = tok.strip_prefix("k=") {
            k = x.parse::<u32>().ok();
        } else if let Some(x) = tok.strip_prefix("blocks=") {
            n = x.parse::<usize>().ok();
        }
    }
    let (v, k, n) = match (v, k, n) {
        (Some(v), Some(k), Some(n)) => (v, k, n),
        _ => return Err(KmError::Parse(format!("bad blocks header {header:?}"))),
    };
    let mut blocks = Vec::with_capacity(n);
    for line in lines {
        let b = Subspace::parse_hex_row(line, v).map_err(|e| KmError::Parse(e.to_string()))?;
        if b.dim() != k {
            return Err(KmError::Parse(format!("block {line:?} has dimension {}", b.dim())));
        }
        blocks.push(b);
    }
    if blocks.len() != n {
        return Err(KmError::Parse(format!("expected {n} blocks, found {}", blocks.len())));
    }
    blocks.sort_unstable();
    Ok(DesignCandidate { params: DesignParams::new(t, v, k, lambda), blocks })
}

/// KM matrix file: header line, then `r c value` triplets sorted by (r, c).
/// Orbit metadata travels in companion orbit files.
pub fn write_km_file(m: &KMMatrix) -> String {
    let mut s = format!(
        "v={} t={} k={} lambda={} group_order={} rows={} cols={} filtered={}\n",
        m.params.v,
        m.params.t,
        m.params.k,
        m.params.lambda,
        m.group_order,
        m.rows.len(),
        m.cols.len(),
        u8::from(m.filtered)
    );
    for &(r, c, val) in &m.entries {
        s.push_str(&format!("{r} {c} {val}\n"));
    }
    s
}

/// Orbit file: `#orbits=<n> v=<v> k=<k>` header, then one line per orbit:
/// `<index> <size> <representative basis in hex>`.
pub fn write_orbit_file(metas: &[OrbitMeta], v: u32, k: u32) -> String {
    let mut s = format!("#orbits={} v={v} k={k}\n", metas.len());
    for (i, m) in metas.iter().enumerate() {
        s.push_str(&format!("{i} {} {}\n", m.size, m.representative.to_hex_row()));
    }
    s
}

pub fn parse_orbit_file(text: &str) -> Result<(Vec<OrbitMeta>, u32, u32), KmError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| KmError::Parse("empty orbit file".into()))?;
    let mut n = None;
    let mut v = None;
    let mut k = None;
    for tok in header.split_whitespace() {
        if let Some(x) = tok.strip_prefix("#orbits=") {
            n = x.parse::<usize>().ok();
        } else if let Some(x) = tok.strip_prefix("v=") {
            v = x.parse::<u32>().ok();
        } else if let Some(x) = tok.strip_prefix("k=") {
            k = x.parse::<u32>().ok();
        }
    }
    let (n, v, k) = match (n, v, k) {
        (Some(n), Some(v), Some(k)) => (n, v, k),
        _ => return Err(KmError::Parse(format!("bad orbit file header {header:?}"))),
    };
    let mut metas = Vec::with_capacity(n);
    for (i, line) in lines.enumerate() {
        let mut parts = line.splitn(3, ' ');
        let index: usize = parts
            .next()
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| KmError::Parse(format!("bad orbit line {line:?}")))?;
        if index != i {
            return Err(KmError::Parse(format!("orbit index {index} out of order")));
        }
        let size: u64 = parts
            .next()
            .and_then(|x| x.parse().ok())
            .ok_or_else(|| KmError::Parse(format!("bad orbit line {line:?}")))?;
        let rep = parts
            .next()
            .ok_or_else(|| KmError::Parse(format!("bad orbit line {line:?}")))
            .and_then(|hex| {
                Subspace::parse_hex_row(hex, v).map_err(|e| KmError::Parse(e.to_string()))
            })?;
        if rep.dim() != k {
            return Err(KmError::Parse(format!("orbit {index} representative has dimension {}", rep.dim())));
        }
        metas.push(OrbitMeta { representative: rep, size });
    }
    if metas.len() != n {
        return Err(KmError::Parse(format!("expected {n} orbits, found {}", metas.len())));
    }
    Ok((metas, v, k))
}

/// Reassembles a KM matrix from its file and the two companion orbit files.
pub fn parse_km_file(km_text: &str, rows_text: &str, cols_text: &str) -> Result<KMMatrix, KmError> {
    let mut lines = km_text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| KmError::Parse("empty KM file".into()))?;
    let mut fields: HashMap<&str, u64> = HashMap::new();
    for tok in header.split_whitespace() {
        if let Some((key, val)) = tok.split_once('=') {
            fields.insert(
                key,
                val.parse().map_err(|_| KmError::Parse(format!("bad header field {tok:?}")))?,
            );
        }
    }
    let get = |key: &str| -> Result<u64, KmError> {
        fields.get(key).copied().ok_or_else(|| KmError::Parse(format!("missing header field {key}")))
    };
    let (v, t, k, lambda) = (get("v")?, get("t")?, get("k")?, get("lambda")?);
    let params = DesignParams::new(t as u32, v as u32, k as u32, lambda);
    let (nrows, ncols) = (get("rows")? as usize, get("cols")? as usize);
    let filtered = get("filtered")? != 0;

    let (rows, rv, rk) = parse_orbit_file(rows_text)?;
    let (cols, cv, ck) = parse_orbit_file(cols_text)?;
    if rows.len() != nrows || cols.len() != ncols || rv != v as u32 || cv != v as u32
        || rk != t as u32 || ck != k as u32
    {
        return Err(KmError::Parse("orbit files do not match the KM header".into()));
    }

    let mut entries = Vec::new();
    for line in lines {
        let mut parts = line.split_whitespace();
        let (r, c, val) = match (parts.next(), parts.next(), parts.next()) {
            (Some(r), Some(c), Some(val)) => (
                r.parse::<u32>().map_err(|_| KmError::Parse(format!("bad triplet {line:?}")))?,
                c.parse::<u32>().map_err(|_| KmError::Parse(format!("bad triplet {line:?}")))?,
                val.parse::<u16>().map_err(|_| KmError::Parse(format!("bad triplet {line:?}")))?,
            ),
            _ => return Err(KmError::Parse(format!("bad triplet {line:?}"))),
        };
        if r as usize >= nrows || c as usize >= ncols {
            return Err(KmError::Parse(format!("triplet {line:?} out of range")));
        }
        entries.push((r, c, val));
    }
    entries.sort_unstable();
    Ok(KMMatrix {
        params,
        group_order: get("group_order")?,
        rows,
        cols,
        entries,
        filtered,
        col_provenance: None,
    })
}
