//! Exhaustive diagonal spectra, ground spaces, gaps, logical restrictions and
//! the projection-lemma check.
//!
//! Assignments are enumerated in canonical counting order with qubit 0 as the
//! most significant bit. All comparisons are exact.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polynomial::{ket_label, BooleanPoly, Convention, Monomial, SpinModel, SpinPoly, ENUMERATION_CAP};
use crate::scalar::{max_of, min_of, Scalar};

/// Below this many qubits enumeration stays on the calling thread.
const PARALLEL_THRESHOLD: usize = 14;

/// Flat `(mask, coeff)` form of a diagonal Hamiltonian for fast evaluation.
#[derive(Debug, Clone)]
pub struct CompiledDiagonal<S> {
    num_qubits: usize,
    terms: Vec<(u64, S)>,
    spin: Option<Convention>,
}

impl<S: Scalar> CompiledDiagonal<S> {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[inline]
    pub fn energy(&self, index: u64) -> S {
        let mut e = S::zero();
        match self.spin {
            None => {
                for (mask, c) in &self.terms {
                    if index & mask == *mask {
                        e = e + c.clone();
                    }
                }
            }
            Some(conv) => {
                // Negative spins are the 1-bits under s = 1-2x and the
                // 0-bits under s = 2x-1.
                let negatives = match conv {
                    Convention::OneMinusTwoX => index,
                    Convention::TwoXMinusOne => !index,
                };
                for (mask, c) in &self.terms {
                    if (negatives & mask).count_ones() % 2 == 1 {
                        e = e - c.clone();
                    } else {
                        e = e + c.clone();
                    }
                }
            }
        }
        e
    }
}

/// Anything with a diagonal energy per computational basis state.
pub trait Diagonal<S: Scalar> {
    fn num_qubits(&self) -> usize;
    fn compile(&self) -> CompiledDiagonal<S>;
}

fn compile_terms<'a, S: Scalar + 'a>(
    n: usize,
    terms: impl Iterator<Item = (&'a Monomial, &'a S)>,
    spin: Option<Convention>,
) -> CompiledDiagonal<S> {
    CompiledDiagonal {
        num_qubits: n,
        terms: terms.map(|(m, c)| (m.mask(n), c.clone())).collect(),
        spin,
    }
}

impl<S: Scalar> Diagonal<S> for BooleanPoly<S> {
    fn num_qubits(&self) -> usize {
        self.num_vars()
    }
    fn compile(&self) -> CompiledDiagonal<S> {
        compile_terms(self.num_vars(), self.terms(), None)
    }
}

impl<S: Scalar> Diagonal<S> for SpinPoly<S> {
    fn num_qubits(&self) -> usize {
        self.num_vars()
    }
    fn compile(&self) -> CompiledDiagonal<S> {
        compile_terms(self.num_vars(), self.terms(), Some(self.convention()))
    }
}

impl<S: Scalar> Diagonal<S> for SpinModel<S> {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }
    fn compile(&self) -> CompiledDiagonal<S> {
        self.to_spin_poly().compile()
    }
}

/// Full energy table with its ground space and gap.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport<S> {
    pub num_qubits: usize,
    /// Indexed by canonical assignment index.
    pub energies: Vec<S>,
    pub ground_energy: S,
    /// Canonical indices of all minimum-energy assignments, ascending.
    pub ground_space: Vec<u64>,
    /// Lowest energy above the ground energy, `None` when fully degenerate.
    pub first_excited: Option<S>,
}

impl<S: Scalar> SpectrumReport<S> {
    fn from_energies(num_qubits: usize, energies: Vec<S>) -> Self {
        let ground_energy = min_of(energies.iter().cloned()).expect("non-empty spectrum");
        let ground_space = energies
            .iter()
            .enumerate()
            .filter(|(_, e)| **e == ground_energy)
            .map(|(i, _)| i as u64)
            .collect();
        let first_excited = min_of(energies.iter().filter(|e| **e > ground_energy).cloned());
        SpectrumReport {
            num_qubits,
            energies,
            ground_energy,
            ground_space,
            first_excited,
        }
    }

    pub fn is_fully_degenerate(&self) -> bool {
        self.first_excited.is_none()
    }

    pub fn gap(&self) -> Option<S> {
        self.first_excited.clone().map(|e| e - self.ground_energy.clone())
    }

    pub fn energy(&self, index: u64) -> &S {
        &self.energies[index as usize]
    }

    /// Ground states as ket labels, e.g. `["000", "111"]`.
    pub fn ground_kets(&self) -> Vec<String> {
        self.ground_space
            .iter()
            .map(|&i| ket_label(i, self.num_qubits))
            .collect()
    }

    /// Distinct energies, ascending.
    pub fn levels(&self) -> Vec<S> {
        let mut v: Vec<S> = Vec::new();
        for e in &self.energies {
            if !v.contains(e) {
                v.push(e.clone());
            }
        }
        v.sort_by(|a, b| a.partial_cmp(b).expect("comparable energies"));
        v
    }

    /// Indices whose energy equals `e`.
    pub fn level_set(&self, e: &S) -> Vec<u64> {
        self.energies
            .iter()
            .enumerate()
            .filter(|(_, x)| *x == e)
            .map(|(i, _)| i as u64)
            .collect()
    }

    /// Comma-separated export: `index,ket,energy` (exact text and float).
    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,assignment,energy,energy_f64\n");
        for (i, e) in self.energies.iter().enumerate() {
            s.push_str(&format!(
                "{},{},{},{}\n",
                i,
                ket_label(i as u64, self.num_qubits),
                e.to_text(),
                e.to_f64()
            ));
        }
        s
    }
}

/// Energies of all `2^n` assignments, with the default cap.
pub fn enumerate<S: Scalar, H: Diagonal<S> + ?Sized>(h: &H) -> Result<SpectrumReport<S>> {
    enumerate_capped(h, ENUMERATION_CAP)
}

pub fn enumerate_capped<S: Scalar, H: Diagonal<S> + ?Sized>(h: &H, cap: usize) -> Result<SpectrumReport<S>> {
    let n = h.num_qubits();
    if n > cap.min(ENUMERATION_CAP) {
        return Err(Error::Resource {
            what: "qubit count",
            requested: n,
            cap: cap.min(ENUMERATION_CAP),
        });
    }
    let compiled = h.compile();
    let len = 1u64 << n;
    let energies: Vec<S> = if n >= PARALLEL_THRESHOLD {
        (0..len).into_par_iter().map(|i| compiled.energy(i)).collect()
    } else {
        (0..len).map(|i| compiled.energy(i)).collect()
    };
    Ok(SpectrumReport::from_energies(n, energies))
}

/// First excited energy minus ground energy.
pub fn spectral_gap<S: Scalar>(r: &SpectrumReport<S>) -> Result<S> {
    r.gap()
        .ok_or_else(|| Error::Domain("spectrum is fully degenerate; gap undefined".into()))
}

/// Minimum over ancillas for one logical assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct LandscapeEntry<S> {
    pub min: S,
    /// Ancilla assignments attaining `min`, as canonical indices over the
    /// ancilla qubits in ascending qubit order. May be truncated, see
    /// `degeneracy`.
    pub argmin: Vec<u64>,
    /// Total number of minimizing ancilla assignments.
    pub degeneracy: u128,
}

/// Per-logical-assignment minimum energy over all ancilla completions.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedLandscape<S> {
    pub num_qubits: usize,
    /// Logical qubits, in the order used to index `entries`.
    pub logical: Vec<usize>,
    /// Remaining qubits, ascending.
    pub ancillas: Vec<usize>,
    /// Indexed by canonical index over `logical`.
    pub entries: Vec<LandscapeEntry<S>>,
}

impl<S: Scalar> RestrictedLandscape<S> {
    pub fn mins(&self) -> Vec<S> {
        self.entries.iter().map(|e| e.min.clone()).collect()
    }

    /// `Some(c)` when `mins()[i] == target[i] + c` for every `i`.
    pub fn offset_from(&self, target: &[S]) -> Option<S> {
        if target.len() != self.entries.len() || target.is_empty() {
            return None;
        }
        let c = self.entries[0].min.clone() - target[0].clone();
        self.entries
            .iter()
            .zip(target)
            .all(|(e, t)| e.min.clone() - t.clone() == c)
            .then_some(c)
    }

    /// Full canonical index of a logical assignment combined with an ancilla
    /// assignment.
    pub fn full_index(&self, logical_index: u64, ancilla_index: u64) -> u64 {
        let n = self.num_qubits;
        let mut idx = 0u64;
        let l = self.logical.len();
        for (k, &q) in self.logical.iter().enumerate() {
            if (logical_index >> (l - 1 - k)) & 1 == 1 {
                idx |= 1 << (n - 1 - q);
            }
        }
        let a = self.ancillas.len();
        for (k, &q) in self.ancillas.iter().enumerate() {
            if (ancilla_index >> (a - 1 - k)) & 1 == 1 {
                idx |= 1 << (n - 1 - q);
            }
        }
        idx
    }
}

fn split_qubits(n: usize, logical: &[usize]) -> Result<Vec<usize>> {
    let mut seen = BTreeSet::new();
    for &q in logical {
        if q >= n {
            return Err(Error::IndexOutOfRange { index: q, bound: n });
        }
        if !seen.insert(q) {
            return Err(Error::Domain(format!("logical qubit {q} listed twice")));
        }
    }
    Ok((0..n).filter(|q| !seen.contains(q)).collect())
}

/// Groups `index` bits of `qubits` (in order) into a compact index.
#[inline]
fn gather(index: u64, n: usize, qubits: &[usize]) -> u64 {
    qubits
        .iter()
        .fold(0u64, |acc, &q| (acc << 1) | ((index >> (n - 1 - q)) & 1))
}

/// Cap on stored argmin ancilla assignments per logical row.
const ARGMIN_LIMIT: usize = 1 << 12;

/// Minimum over ancillas of a full spectrum.
pub fn restrict<S: Scalar>(r: &SpectrumReport<S>, logical: &[usize]) -> Result<RestrictedLandscape<S>> {
    let n = r.num_qubits;
    let ancillas = split_qubits(n, logical)?;
    let rows = 1usize << logical.len();
    let mut entries: Vec<Option<LandscapeEntry<S>>> = vec![None; rows];
    for (idx, e) in r.energies.iter().enumerate() {
        let idx = idx as u64;
        let l = gather(idx, n, logical) as usize;
        let a = gather(idx, n, &ancillas);
        match &mut entries[l] {
            slot @ None => {
                *slot = Some(LandscapeEntry {
                    min: e.clone(),
                    argmin: vec![a],
                    degeneracy: 1,
                })
            }
            Some(entry) => {
                if *e < entry.min {
                    *entry = LandscapeEntry {
                        min: e.clone(),
                        argmin: vec![a],
                        degeneracy: 1,
                    };
                } else if *e == entry.min {
                    entry.degeneracy += 1;
                    if entry.argmin.len() < ARGMIN_LIMIT {
                        entry.argmin.push(a);
                    }
                }
            }
        }
    }
    Ok(RestrictedLandscape {
        num_qubits: n,
        logical: logical.to_vec(),
        ancillas,
        entries: entries.into_iter().map(|e| e.expect("every row visited")).collect(),
    })
}

/// Restriction computed without the full `2^n` table.
///
/// For each logical assignment the logical values are substituted, the
/// ancillas split into connected components of the remaining interaction
/// graph, and each component is enumerated on its own. The result equals
/// `restrict(enumerate(p), logical)`; it only needs `2^|logical|` times the
/// largest component size to be enumerable.
pub fn restrict_poly<S: Scalar>(p: &BooleanPoly<S>, logical: &[usize]) -> Result<RestrictedLandscape<S>> {
    let n = p.num_vars();
    let ancillas = split_qubits(n, logical)?;
    if logical.len() > ENUMERATION_CAP {
        return Err(Error::Resource {
            what: "logical qubit count",
            requested: logical.len(),
            cap: ENUMERATION_CAP,
        });
    }
    let anc_pos: std::collections::BTreeMap<usize, usize> = ancillas.iter().enumerate().map(|(k, &q)| (q, k)).collect();

    // Components of the ancilla interaction graph (independent of logical values).
    let mut parent: Vec<usize> = (0..ancillas.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for (m, _) in p.terms() {
        let local: Vec<usize> = m.vars().iter().filter_map(|v| anc_pos.get(v).copied()).collect();
        for w in local.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a] = b;
            }
        }
    }
    let mut components: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for k in 0..ancillas.len() {
        let r = find(&mut parent, k);
        components.entry(r).or_default().push(k);
    }
    let components: Vec<Vec<usize>> = components.into_values().collect();
    if let Some(big) = components.iter().map(Vec::len).max() {
        if big > ENUMERATION_CAP {
            return Err(Error::Resource {
                what: "ancilla component size",
                requested: big,
                cap: ENUMERATION_CAP,
            });
        }
    }
    let comp_of: Vec<usize> = {
        let mut v = vec![0; ancillas.len()];
        for (ci, comp) in components.iter().enumerate() {
            for &k in comp {
                v[k] = ci;
            }
        }
        v
    };

    let l = logical.len();
    let mut entries = Vec::with_capacity(1 << l);
    for lidx in 0..(1u64 << l) {
        let logical_value = |q: usize| -> Option<bool> {
            logical
                .iter()
                .position(|&x| x == q)
                .map(|k| (lidx >> (l - 1 - k)) & 1 == 1)
        };
        // Residual polynomial per component, as (local mask, coeff) over the
        // component's own canonical order.
        let mut constant = S::zero();
        let mut comp_terms: Vec<Vec<(u64, S)>> = vec![Vec::new(); components.len()];
        'terms: for (m, c) in p.terms() {
            let mut anc_vars = Vec::new();
            for &v in m.vars() {
                match logical_value(v) {
                    Some(true) => {}
                    Some(false) => continue 'terms,
                    None => anc_vars.push(anc_pos[&v]),
                }
            }
            if anc_vars.is_empty() {
                constant = constant + c.clone();
                continue;
            }
            let ci = comp_of[anc_vars[0]];
            let comp = &components[ci];
            let size = comp.len();
            let mask = anc_vars.iter().fold(0u64, |acc, k| {
                let pos = comp.iter().position(|x| x == k).expect("member");
                acc | 1 << (size - 1 - pos)
            });
            comp_terms[ci].push((mask, c.clone()));
        }
        let mut total = constant;
        let mut comp_argmins: Vec<Vec<u64>> = Vec::with_capacity(components.len());
        let mut degeneracy: u128 = 1;
        for (ci, comp) in components.iter().enumerate() {
            let size = comp.len();
            let mut best: Option<S> = None;
            let mut arg: Vec<u64> = Vec::new();
            for local in 0..(1u64 << size) {
                let e = comp_terms[ci]
                    .iter()
                    .filter(|(mask, _)| local & mask == *mask)
                    .fold(S::zero(), |acc, (_, c)| acc + c.clone());
                match &best {
                    Some(b) if e > *b => {}
                    Some(b) if e == *b => arg.push(local),
                    _ => {
                        best = Some(e);
                        arg = vec![local];
                    }
                }
            }
            total = total + best.unwrap_or_else(S::zero);
            degeneracy = degeneracy.saturating_mul(arg.len() as u128);
            comp_argmins.push(arg);
        }
        // Cartesian product of component argmins, mapped to ancilla indices.
        let a = ancillas.len();
        let mut combos: Vec<u64> = vec![0];
        for (ci, comp) in components.iter().enumerate() {
            let mut next = Vec::new();
            'outer: for &base in &combos {
                for &local in &comp_argmins[ci] {
                    let mut idx = base;
                    for (pos, &k) in comp.iter().enumerate() {
                        if (local >> (comp.len() - 1 - pos)) & 1 == 1 {
                            idx |= 1 << (a - 1 - k);
                        }
                    }
                    next.push(idx);
                    if next.len() >= ARGMIN_LIMIT {
                        break 'outer;
                    }
                }
            }
            combos = next;
        }
        combos.sort_unstable();
        entries.push(LandscapeEntry {
            min: total,
            argmin: combos,
            degeneracy,
        });
    }
    Ok(RestrictedLandscape {
        num_qubits: n,
        logical: logical.to_vec(),
        ancillas,
        entries,
    })
}

/// Outcome of the diagonal projection-lemma check.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionReport<S> {
    /// `λ(H1 + H2)`.
    pub lambda_total: S,
    /// `min` of `H1` over the protected set.
    pub lambda_restricted: S,
    /// `‖H1‖ = max |H1|`.
    pub norm_h1: S,
    /// Minimum of `H2` off the protected set (`None` if the set is everything).
    pub delta: Option<S>,
    pub h2_vanishes_on_subspace: bool,
    /// `delta - 2‖H1‖`, when `delta` exists.
    pub margin: Option<S>,
    /// Whether the lemma's hypothesis holds for this instance.
    pub in_hypothesis: bool,
    /// `lambda_total == lambda_restricted`.
    pub equality_holds: bool,
}

/// Checks `λ(H1 + H2) = min_{L} H1` by enumeration. Hypothesis violations are
/// reported in the result, not raised.
pub fn check_projection_lemma<S: Scalar>(
    h1: &BooleanPoly<S>,
    h2: &BooleanPoly<S>,
    subspace: &[u64],
) -> Result<ProjectionReport<S>> {
    let n = h1.num_vars().max(h2.num_vars());
    let h1 = h1.with_num_vars(n)?;
    let h2 = h2.with_num_vars(n)?;
    if subspace.is_empty() {
        return Err(Error::Precondition("protected subspace is empty".into()));
    }
    if let Some(&bad) = subspace.iter().find(|&&i| i >> n != 0) {
        return Err(Error::IndexOutOfRange {
            index: bad as usize,
            bound: 1 << n,
        });
    }
    let r1 = enumerate(&h1)?;
    let r2 = enumerate(&h2)?;
    let total = enumerate(&(&h1 + &h2))?;
    let in_l: BTreeSet<u64> = subspace.iter().copied().collect();

    let norm_h1 = max_of(r1.energies.iter().map(|e| e.abs())).expect("non-empty");
    let lambda_restricted = min_of(in_l.iter().map(|&i| r1.energy(i).clone())).expect("non-empty");
    let h2_vanishes_on_subspace = in_l.iter().all(|&i| r2.energy(i).is_zero());
    let delta = min_of(
        (0..r2.energies.len() as u64)
            .filter(|i| !in_l.contains(i))
            .map(|i| r2.energy(i).clone()),
    );
    let margin = delta.clone().map(|d| d - S::two() * norm_h1.clone());
    let in_hypothesis = h2_vanishes_on_subspace && margin.as_ref().is_none_or(|m| m.is_positive());
    let lambda_total = total.ground_energy.clone();
    Ok(ProjectionReport {
        equality_holds: lambda_total == lambda_restricted,
        lambda_total,
        lambda_restricted,
        norm_h1,
        delta,
        h2_vanishes_on_subspace,
        margin,
        in_hypothesis,
    })
}
