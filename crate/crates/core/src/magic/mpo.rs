//! Matrix product operators whose entries are linear in a single field
//! operator, and exact accumulation of their two-field path weights.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalar combination `id·𝟙 + psi·ψ + psi_dag·ψ†` on one site.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FieldEntry {
    pub id: Complex64,
    pub psi: Complex64,
    pub psi_dag: Complex64,
}

impl FieldEntry {
    pub fn identity(c: f64) -> Self {
        FieldEntry {
            id: Complex64::from(c),
            ..Default::default()
        }
    }

    pub fn psi(c: Complex64) -> Self {
        FieldEntry {
            psi: c,
            ..Default::default()
        }
    }

    pub fn psi_dag(c: Complex64) -> Self {
        FieldEntry {
            psi_dag: c,
            ..Default::default()
        }
    }

    fn field(&self, f: Field) -> Complex64 {
        match f {
            Field::Psi => self.psi,
            Field::PsiDag => self.psi_dag,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Psi,
    PsiDag,
}

/// Ordered pair of fields: the first sits at the left site of the pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Species {
    PsiPsi,
    PsiDagPsiDag,
    PsiPsiDag,
    PsiDagPsi,
}

impl Species {
    pub const ALL: [Species; 4] = [Species::PsiPsi, Species::PsiDagPsiDag, Species::PsiPsiDag, Species::PsiDagPsi];

    fn fields(&self) -> (Field, Field) {
        match self {
            Species::PsiPsi => (Field::Psi, Field::Psi),
            Species::PsiDagPsiDag => (Field::PsiDag, Field::PsiDag),
            Species::PsiPsiDag => (Field::Psi, Field::PsiDag),
            Species::PsiDagPsi => (Field::PsiDag, Field::Psi),
        }
    }
}

/// A `χ × χ` matrix of [`FieldEntry`] attached to a site at `position`.
#[derive(Clone, Debug, PartialEq)]
pub struct MpoMatrix {
    chi: usize,
    entries: Vec<FieldEntry>,
    pub position: f64,
}

impl MpoMatrix {
    pub fn zeros(chi: usize, position: f64) -> Self {
        MpoMatrix {
            chi,
            entries: vec![FieldEntry::default(); chi * chi],
            position,
        }
    }

    pub fn chi(&self) -> usize {
        self.chi
    }

    pub fn get(&self, i: usize, j: usize) -> FieldEntry {
        self.entries[i * self.chi + j]
    }

    pub fn set(&mut self, i: usize, j: usize, e: FieldEntry) {
        self.entries[i * self.chi + j] = e;
    }

    /// Multiplies every field coefficient in row `i` by `c`.
    pub fn scale_row_fields(&mut self, i: usize, c: Complex64) {
        for j in 0..self.chi {
            let e = &mut self.entries[i * self.chi + j];
            e.psi *= c;
            e.psi_dag *= c;
        }
    }

    fn identity_part(&self) -> ScalarMatrix {
        ScalarMatrix {
            chi: self.chi,
            entries: self.entries.iter().map(|e| e.id).collect(),
        }
    }

    fn field_part(&self, f: Field) -> ScalarMatrix {
        ScalarMatrix {
            chi: self.chi,
            entries: self.entries.iter().map(|e| e.field(f)).collect(),
        }
    }
}

/// A `χ × χ` matrix of plain numbers, such as the defect insertion.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarMatrix {
    chi: usize,
    entries: Vec<Complex64>,
}

impl ScalarMatrix {
    pub fn from_real(rows: &[Vec<f64>]) -> Result<Self> {
        let chi = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != chi) {
            return Err(Error::DimensionMismatch {
                expected: chi,
                found: r.len(),
            });
        }
        Ok(ScalarMatrix {
            chi,
            entries: rows.iter().flatten().map(|&x| Complex64::from(x)).collect(),
        })
    }

    pub fn chi(&self) -> usize {
        self.chi
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.chi + j]
    }

    /// Row vector times matrix.
    fn left_mul(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.chi;
        let mut out = vec![Complex64::default(); n];
        for (i, &vi) in v.iter().enumerate() {
            if vi == Complex64::default() {
                continue;
            }
            for j in 0..n {
                out[j] += vi * self.entries[i * n + j];
            }
        }
        out
    }

    /// Matrix times column vector.
    fn right_mul(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.chi;
        (0..n)
            .map(|i| (0..n).map(|j| self.entries[i * n + j] * v[j]).sum())
            .collect()
    }

    fn abs(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.norm()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ChainElement {
    Site(MpoMatrix),
    Insertion(ScalarMatrix),
}

impl ChainElement {
    fn chi(&self) -> usize {
        match self {
            ChainElement::Site(m) => m.chi,
            ChainElement::Insertion(m) => m.chi,
        }
    }

    fn transfer(&self) -> ScalarMatrix {
        match self {
            ChainElement::Site(m) => m.identity_part(),
            ChainElement::Insertion(m) => m.clone(),
        }
    }
}

/// Ordered product of site matrices and scalar insertions.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MpoChain {
    pub elements: Vec<ChainElement>,
}

impl MpoChain {
    pub fn new() -> Self {
        MpoChain::default()
    }

    pub fn push_site(&mut self, m: MpoMatrix) {
        self.elements.push(ChainElement::Site(m));
    }

    pub fn push_insertion(&mut self, d: ScalarMatrix) {
        self.elements.push(ChainElement::Insertion(d));
    }

    pub fn extend(&mut self, other: MpoChain) {
        self.elements.extend(other.elements);
    }

    pub fn n_sites(&self) -> usize {
        self.elements.iter().filter(|e| matches!(e, ChainElement::Site(_))).count()
    }
}

/// Two-field content of `⟨v| A₁ ⋯ (D) ⋯ A_N |w⟩`, accumulated exactly.
#[derive(Clone, Debug)]
pub struct PathKernel {
    chain: MpoChain,
    /// Element index of every site, in chain order.
    sites: Vec<usize>,
    /// `⟨v|` propagated through the identity parts of elements `0..e`.
    left: Vec<Vec<Complex64>>,
    /// Identity parts of elements `e+1..` applied to `|w⟩`.
    right: Vec<Vec<Complex64>>,
    /// Weight of the field-free path, `⟨v| Π T |w⟩`.
    pub scalar: Complex64,
}

/// Accumulates the path kernel of a chain between boundary vectors.
pub fn mpo_path_product(chain: &MpoChain, v: &[Complex64], w: &[Complex64]) -> Result<PathKernel> {
    let chi = v.len();
    if w.len() != chi {
        return Err(Error::DimensionMismatch {
            expected: chi,
            found: w.len(),
        });
    }
    for e in &chain.elements {
        if e.chi() != chi {
            return Err(Error::DimensionMismatch {
                expected: chi,
                found: e.chi(),
            });
        }
    }
    check_degree(chain, v, w)?;

    let transfers: Vec<ScalarMatrix> = chain.elements.iter().map(|e| e.transfer()).collect();
    let n = transfers.len();
    let mut left = Vec::with_capacity(n + 1);
    left.push(v.to_vec());
    for t in &transfers {
        let next = t.left_mul(left.last().unwrap());
        left.push(next);
    }
    let mut right = vec![Vec::new(); n];
    let mut acc = w.to_vec();
    for e in (0..n).rev() {
        right[e] = acc.clone();
        acc = transfers[e].right_mul(&acc);
    }
    let scalar = left[n].iter().zip(w).map(|(a, b)| a * b).sum();
    left.truncate(n);
    let sites = chain
        .elements
        .iter()
        .enumerate()
        .filter_map(|(i, e)| matches!(e, ChainElement::Site(_)).then_some(i))
        .collect();
    Ok(PathKernel {
        chain: chain.clone(),
        sites,
        left,
        right,
        scalar,
    })
}

/// Rejects automata admitting paths with three or more field insertions,
/// propagating absolute values so that no cancellation can hide one.
fn check_degree(chain: &MpoChain, v: &[Complex64], w: &[Complex64]) -> Result<()> {
    let chi = v.len();
    let mut deg: [Vec<f64>; 4] = [v.iter().map(|x| x.norm()).collect(), vec![0.0; chi], vec![0.0; chi], vec![0.0; chi]];
    let mul = |vec: &[f64], m: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; chi];
        for (i, &vi) in vec.iter().enumerate() {
            if vi != 0.0 {
                for j in 0..chi {
                    out[j] += vi * m[i * chi + j];
                }
            }
        }
        out
    };
    for e in &chain.elements {
        let t = e.transfer().abs();
        let f: Vec<f64> = match e {
            ChainElement::Site(m) => m.entries.iter().map(|x| x.psi.norm() + x.psi_dag.norm()).collect(),
            ChainElement::Insertion(_) => vec![0.0; chi * chi],
        };
        let next3: Vec<f64> = mul(&deg[3], &t).iter().zip(mul(&deg[2], &f)).map(|(a, b)| a + b).collect();
        let next2: Vec<f64> = mul(&deg[2], &t).iter().zip(mul(&deg[1], &f)).map(|(a, b)| a + b).collect();
        let next1: Vec<f64> = mul(&deg[1], &t).iter().zip(mul(&deg[0], &f)).map(|(a, b)| a + b).collect();
        let next0 = mul(&deg[0], &t);
        // Keep magnitudes bounded; only the support matters.
        let norm = |x: &Vec<f64>| x.iter().cloned().fold(0.0, f64::max);
        let s = [norm(&next0), norm(&next1), norm(&next2)].into_iter().fold(1.0, f64::max);
        deg = [next0, next1, next2, next3].map(|x| x.iter().map(|y| y / s).collect());
        if deg[3].iter().any(|&x| x > 0.0) {
            // Degree ≥ 3 content may still be projected out by ⟨·|w⟩; keep going.
        }
    }
    let overflow: f64 = deg[3].iter().zip(w).map(|(a, b)| a * b.norm()).sum();
    if overflow > 0.0 {
        return Err(Error::DegreeOverflow(3));
    }
    Ok(())
}

impl PathKernel {
    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    pub fn positions(&self) -> Vec<f64> {
        self.sites.iter().map(|&e| self.site(e).position).collect()
    }

    fn site(&self, e: usize) -> &MpoMatrix {
        match &self.chain.elements[e] {
            ChainElement::Site(m) => m,
            ChainElement::Insertion(_) => unreachable!("site index points at an insertion"),
        }
    }

    /// Weight of `field₁(x_m) field₂(x_n)` for site indices `m < n`.
    pub fn weight(&self, species: Species, m: usize, n: usize) -> Result<Complex64> {
        if m >= n || n >= self.sites.len() {
            return Err(Error::domain(format!("need site indices m < n < {}, got ({m}, {n})", self.sites.len())));
        }
        let (f1, f2) = species.fields();
        let (em, en) = (self.sites[m], self.sites[n]);
        let mut r = self.site(em).field_part(f1).left_mul(&self.left[em]);
        for e in em + 1..en {
            r = self.chain.elements[e].transfer().left_mul(&r);
        }
        let r = self.site(en).field_part(f2).left_mul(&r);
        Ok(r.iter().zip(&self.right[en]).map(|(a, b)| a * b).sum())
    }

    /// Weights `(n, W_mn)` for every `n > m`, in one sweep.
    pub fn row(&self, species: Species, m: usize) -> Result<Vec<(usize, Complex64)>> {
        if m >= self.sites.len() {
            return Err(Error::domain("site index out of range"));
        }
        let (f1, f2) = species.fields();
        let em = self.sites[m];
        let mut r = self.site(em).field_part(f1).left_mul(&self.left[em]);
        let mut out = Vec::with_capacity(self.sites.len() - m - 1);
        let mut next_site = m + 1;
        for e in em + 1..self.chain.elements.len() {
            if next_site < self.sites.len() && self.sites[next_site] == e {
                let t = self.site(e).field_part(f2).left_mul(&r);
                out.push((next_site, t.iter().zip(&self.right[e]).map(|(a, b)| a * b).sum()));
                next_site += 1;
            }
            r = self.chain.elements[e].transfer().left_mul(&r);
        }
        Ok(out)
    }

    /// `Σ_{m<n} W_mn f(x_m) g(x_n)` in a single sweep.
    pub fn bilinear(&self, species: Species, f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64) -> Complex64 {
        let (f1, f2) = species.fields();
        let chi = self.left.first().map(|v| v.len()).unwrap_or(0);
        let mut source = vec![Complex64::default(); chi];
        let mut total = Complex64::default();
        for (e, el) in self.chain.elements.iter().enumerate() {
            match el {
                ChainElement::Site(m) => {
                    let t = m.field_part(f2).left_mul(&source);
                    let closed: Complex64 = t.iter().zip(&self.right[e]).map(|(a, b)| a * b).sum();
                    total += closed * g(m.position);
                    let mut next = m.identity_part().left_mul(&source);
                    let emit = m.field_part(f1).left_mul(&self.left[e]);
                    let fx = f(m.position);
                    for (a, b) in next.iter_mut().zip(emit) {
                        *a += b * fx;
                    }
                    source = next;
                }
                ChainElement::Insertion(d) => source = d.left_mul(&source),
            }
        }
        total
    }

    /// Total single-field weight `Σ_m |coefficient of field(x_m)|`, which must
    /// vanish for a purely quadratic automaton.
    pub fn linear_weight(&self, field: Field) -> f64 {
        self.sites
            .iter()
            .map(|&e| {
                let r = self.site(e).field_part(field).left_mul(&self.left[e]);
                r.iter().zip(&self.right[e]).map(|(a, b)| a * b).sum::<Complex64>().norm()
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::from(x)
    }

    /// The χ = 3 automaton with scalar E_m, F_m written as field entries.
    fn example_chain(e: &[f64], f: &[f64], lambda: f64) -> MpoChain {
        let mut chain = MpoChain::new();
        for (i, (&ei, &fi)) in e.iter().zip(f).enumerate() {
            let mut m = MpoMatrix::zeros(3, i as f64);
            m.set(0, 0, FieldEntry::identity(1.0));
            m.set(0, 1, FieldEntry::psi(c(ei)));
            m.set(1, 1, FieldEntry::identity(lambda));
            m.set(1, 2, FieldEntry::psi(c(fi)));
            m.set(2, 2, FieldEntry::identity(1.0));
            chain.push_site(m);
        }
        chain
    }

    #[test]
    fn three_site_corner_element() {
        let (e, f, l) = ([1.3, -0.7, 2.1], [0.4, 1.9, -1.1], 0.6);
        let chain = example_chain(&e, &f, l);
        let v = [c(1.0), c(0.0), c(0.0)];
        let w = [c(0.0), c(0.0), c(1.0)];
        let k = mpo_path_product(&chain, &v, &w).unwrap();
        let total: Complex64 = (0..3)
            .flat_map(|m| (m + 1..3).map(move |n| (m, n)))
            .map(|(m, n)| k.weight(Species::PsiPsi, m, n).unwrap())
            .sum();
        let expected = e[0] * f[1] + l * e[0] * f[2] + e[1] * f[2];
        assert!((total - expected).norm() < 1e-15);
        assert_eq!(k.weight(Species::PsiPsi, 0, 2).unwrap(), c(l * e[0] * f[2]));
        assert_eq!(k.weight(Species::PsiDagPsiDag, 0, 1).unwrap(), c(0.0));
        assert_eq!(k.scalar, c(0.0));
    }

    #[test]
    fn row_and_bilinear_agree_with_weights() {
        let e: Vec<f64> = (0..12).map(|i| 0.1 * i as f64 - 0.3).collect();
        let f: Vec<f64> = (0..12).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let chain = example_chain(&e, &f, 0.8);
        let v = [c(1.0), c(0.0), c(0.0)];
        let w = [c(0.0), c(0.0), c(1.0)];
        let k = mpo_path_product(&chain, &v, &w).unwrap();
        for m in 0..11 {
            for (n, wmn) in k.row(Species::PsiPsi, m).unwrap() {
                assert!((wmn - k.weight(Species::PsiPsi, m, n).unwrap()).norm() < 1e-15);
            }
        }
        let fx = |x: f64| (0.3 * x).sin() + 1.0;
        let gx = |x: f64| x * x;
        let direct: Complex64 = (0..12)
            .flat_map(|m| (m + 1..12).map(move |n| (m, n)))
            .map(|(m, n)| k.weight(Species::PsiPsi, m, n).unwrap() * fx(m as f64) * gx(n as f64))
            .sum();
        assert!((k.bilinear(Species::PsiPsi, fx, gx) - direct).norm() < 1e-13);
    }

    #[test]
    fn linearity_in_emission_entries() {
        let e = [0.5, 1.5, -0.2, 0.9];
        let f = [1.0, 0.3, 0.7, -0.4];
        let chain = example_chain(&e, &f, 0.5);
        let mut scaled = chain.clone();
        let factor = Complex64::new(0.3, -2.0);
        for el in &mut scaled.elements {
            if let ChainElement::Site(m) = el {
                m.scale_row_fields(0, factor);
            }
        }
        let v = [c(1.0), c(0.0), c(0.0)];
        let w = [c(0.0), c(0.0), c(1.0)];
        let a = mpo_path_product(&chain, &v, &w).unwrap();
        let b = mpo_path_product(&scaled, &v, &w).unwrap();
        for m in 0..4 {
            for n in m + 1..4 {
                let x = a.weight(Species::PsiPsi, m, n).unwrap() * factor;
                let y = b.weight(Species::PsiPsi, m, n).unwrap();
                assert!((x - y).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn shape_and_degree_errors() {
        let chain = example_chain(&[1.0, 1.0], &[1.0, 1.0], 1.0);
        let v3 = [c(1.0), c(0.0), c(0.0)];
        let w3 = [c(0.0), c(0.0), c(1.0)];
        assert!(matches!(
            mpo_path_product(&chain, &v3, &[c(1.0)]),
            Err(Error::DimensionMismatch { .. })
        ));
        let mut bad = chain.clone();
        bad.push_insertion(ScalarMatrix::from_real(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap());
        assert!(matches!(mpo_path_product(&bad, &v3, &w3), Err(Error::DimensionMismatch { .. })));

        // A self-loop carrying a field admits arbitrarily many insertions.
        let mut looped = MpoChain::new();
        for i in 0..3 {
            let mut m = MpoMatrix::zeros(1, i as f64);
            m.set(0, 0, FieldEntry { id: c(1.0), psi: c(1.0), psi_dag: c(0.0) });
            looped.push_site(m);
        }
        assert_eq!(mpo_path_product(&looped, &[c(1.0)], &[c(1.0)]).unwrap_err(), Error::DegreeOverflow(3));
        assert!(ScalarMatrix::from_real(&[vec![1.0], vec![0.0, 1.0]]).is_err());
    }
}
