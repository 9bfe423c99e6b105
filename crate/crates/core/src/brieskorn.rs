//! Degree-truncated presentation of the algebraic Brieskorn module
//! `G = Q[x,y] dx∧dy / span{J(f,g)}` of a polynomial in two variables, where
//! `t` acts as multiplication by `f`, together with its submodule
//! `G^(-1) = df∧Ω¹ / df∧dΩ⁰`.
//!
//! Module elements are the coefficients of `dx∧dy`. Monomials are indexed in
//! graded order, so polynomials of degree `<= d` are exactly the vectors
//! supported on the first `N(d) = (d+1)(d+2)/2` coordinates. Every span is
//! kept as a [`SparseEchelon`] whose pivots are largest indices; its rows with
//! pivot below `N(d)` then span the intersection with degree `<= d`.

use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{SparseEchelon, SparseVec, Subspace};
use crate::poly::{jacobian2, Monomial, MultiPoly, PolyError, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BrieskornError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("f is constant")]
    ConstantMap,
    #[error("result of degree {degree} exceeds the truncation bound {bound}")]
    TruncationOverflow { degree: usize, bound: usize },
}

/// Number of monomials of degree `<= d` in two variables.
pub fn mono_count(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

/// Graded index of `x^a y^b`.
pub fn mono_index(a: u32, b: u32) -> usize {
    let k = (a + b) as usize;
    k * (k + 1) / 2 + b as usize
}

/// Inverse of [`mono_index`].
pub fn index_mono(i: usize) -> (u32, u32) {
    let mut k = ((((8 * i + 1) as f64).sqrt() - 1.0) / 2.0) as usize;
    while mono_count(k) <= i {
        k += 1;
    }
    while k > 0 && mono_count(k - 1) > i {
        k -= 1;
    }
    let b = i - k * (k + 1) / 2;
    ((k - b) as u32, b as u32)
}

pub fn to_sparse(p: &MultiPoly) -> SparseVec {
    let mut v: SparseVec = p
        .terms()
        .map(|(m, c)| (mono_index(m.0[0], m.0[1]), c.clone()))
        .collect();
    v.sort_by_key(|(i, _)| *i);
    v
}

pub fn from_sparse(v: &SparseVec, vars: &Arc<Vec<String>>) -> MultiPoly {
    MultiPoly::from_terms(
        vars.clone(),
        v.iter().map(|(i, c)| {
            let (a, b) = index_mono(*i);
            (Monomial(vec![a, b]), c.clone())
        }),
    )
}

fn shifted(v: SparseVec, offset: usize) -> SparseVec {
    v.into_iter().map(|(i, c)| (i + offset, c)).collect()
}

fn monomial(vars: &Arc<Vec<String>>, a: u32, b: u32) -> MultiPoly {
    MultiPoly::from_terms(vars.clone(), [(Monomial(vec![a, b]), Scalar::one())])
}

fn degree_of(p: &MultiPoly) -> Option<usize> {
    p.total_degree().finite().map(|d| d as usize)
}

/// Truncation bounds and the plateau rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationParams {
    /// First ambient degree bound; `None` means `2 * deg f`.
    pub d_start: Option<usize>,
    /// Largest ambient degree bound; `None` means `6 * deg f`.
    pub d_max: Option<usize>,
    /// Number of consecutive equal values required for a plateau.
    pub window: usize,
    /// Generator degrees are capped at `d + deg f + cap_slack`.
    pub cap_slack: usize,
}

impl Default for TruncationParams {
    fn default() -> Self {
        TruncationParams {
            d_start: None,
            d_max: None,
            window: 3,
            cap_slack: 10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlateauStatus {
    /// Unchanged over the window in `e` and between the last two bounds `d`.
    Stable,
    /// Still changing in `e` at the generator-degree cap.
    NoPlateauInE,
    /// Plateaued in `e`, but the last two ambient bounds disagree (or only
    /// one bound was available).
    NoPlateauInD,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationSample {
    pub d: usize,
    pub e: usize,
    pub value: usize,
}

/// A truncation-computed dimension with its plateau status.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stabilized {
    pub value: usize,
    pub status: PlateauStatus,
    pub d: usize,
    pub e: usize,
    #[serde(skip)]
    pub trace: Vec<TruncationSample>,
}

impl Stabilized {
    pub fn is_stable(&self) -> bool {
        self.status == PlateauStatus::Stable
    }
}

/// Antiderivative used by [`inverse_dt`]: `ω' = (∫g dx) dy` or
/// `ω' = -(∫g dy) dx`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Antiderivative {
    AlongX,
    AlongY,
}

/// Class of `poly dx∧dy` inside the truncation of degree `<= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleElement {
    pub poly: MultiPoly,
    pub bound: usize,
}

impl ModuleElement {
    pub fn new(poly: MultiPoly, bound: usize) -> Result<ModuleElement, BrieskornError> {
        let degree = degree_of(&poly).unwrap_or(0);
        if degree > bound {
            return Err(BrieskornError::TruncationOverflow { degree, bound });
        }
        Ok(ModuleElement { poly, bound })
    }
}

/// `∂_t^{-1}[g dx∧dy] = df∧ω'` for a primitive `ω'` of `g dx∧dy`.
pub fn inverse_dt_poly(f: &MultiPoly, g: &MultiPoly, choice: Antiderivative) -> MultiPoly {
    match choice {
        Antiderivative::AlongX => &f.partial_index(0) * &g.integrate_index(0),
        Antiderivative::AlongY => &f.partial_index(1) * &g.integrate_index(1),
    }
}

/// [`inverse_dt_poly`] with the canonical choice, checked against the
/// truncation bound.
pub fn inverse_dt(g: &ModuleElement, f: &MultiPoly) -> Result<ModuleElement, BrieskornError> {
    ModuleElement::new(inverse_dt_poly(f, &g.poly, Antiderivative::AlongX), g.bound)
}

/// Relation span `{J(f, g) : deg g <= e}` intersected with degree `<= d`, as
/// a subspace of the `N(d)` monomial coordinates.
pub fn relation_space(f: &MultiPoly, d: usize, e: usize) -> Result<Subspace, BrieskornError> {
    let mut ech = SparseEchelon::new();
    for k in 0..=e as u32 {
        for b in 0..=k {
            ech.insert(to_sparse(&jacobian2(f, &monomial(f.vars_arc(), k - b, b))?));
        }
    }
    dense_below(&ech, mono_count(d))
}

fn dense_below(ech: &SparseEchelon, n: usize) -> Result<Subspace, BrieskornError> {
    let rows = ech
        .rows_below(n)
        .map(|r| {
            let mut v = vec![Scalar::zero(); n];
            for (i, c) in r {
                v[*i] = c.clone();
            }
            v
        })
        .collect();
    Ok(Subspace::span(n, rows).expect("rows fit the ambient space"))
}

/// Relation rows grown one generator degree at a time. Each pivot remembers
/// the generator degree at which it appeared, so counts for any smaller
/// generator bound can be read off later.
#[derive(Debug, Default)]
struct RelationTower {
    echelon: SparseEchelon,
    stage_of: Vec<(usize, usize)>,
    built: Option<usize>,
}

impl RelationTower {
    fn ensure(&mut self, f: &MultiPoly, e: usize) {
        let start = self.built.map_or(0, |b| b + 1);
        for k in start..=e {
            for b in 0..=k as u32 {
                let row = jacobian2(f, &monomial(f.vars_arc(), k as u32 - b, b)).expect("bivariate");
                if let Some(p) = self.echelon.insert(to_sparse(&row)) {
                    self.stage_of.push((p, k));
                }
            }
            self.built = Some(k);
        }
    }

    fn count_below(&self, bound: usize, stage: usize) -> usize {
        self.stage_of
            .iter()
            .filter(|&&(p, s)| p < bound && s <= stage)
            .count()
    }
}

/// Truncated Brieskorn module of a fixed `f`: answers stabilized cokernel and
/// kernel dimensions of `t - c`.
#[derive(Debug)]
pub struct BrieskornTruncation {
    f: MultiPoly,
    delta: usize,
    params: TruncationParams,
    tower: RwLock<RelationTower>,
}

impl BrieskornTruncation {
    pub fn new(f: &MultiPoly, params: TruncationParams) -> Result<BrieskornTruncation, BrieskornError> {
        if f.nvars() != 2 {
            return Err(PolyError::NotBivariate(f.nvars()).into());
        }
        let delta = match degree_of(f) {
            Some(d) if d > 0 => d,
            _ => return Err(BrieskornError::ConstantMap),
        };
        Ok(BrieskornTruncation {
            f: f.clone(),
            delta,
            params,
            tower: RwLock::new(RelationTower::default()),
        })
    }

    pub fn f(&self) -> &MultiPoly {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.delta
    }

    pub fn params(&self) -> &TruncationParams {
        &self.params
    }

    /// Ambient degree bounds tried in turn: doubling from the start value up
    /// to the maximum.
    pub fn schedule(&self) -> Vec<usize> {
        let d_max = self.params.d_max.unwrap_or(6 * self.delta).max(1);
        let mut d = self.params.d_start.unwrap_or(2 * self.delta).clamp(1, d_max);
        let mut out = vec![d];
        while d < d_max {
            d = (2 * d).min(d_max);
            out.push(d);
        }
        out
    }

    fn e_cap(&self, d: usize) -> usize {
        d + self.delta + self.params.cap_slack
    }

    /// Runs `sample(d, e)` over the schedule, applying the plateau rule in
    /// `e` (starting at `e = d`) and then comparing successive `d`.
    fn plateau(&self, mut sample: impl FnMut(usize, usize) -> usize) -> Stabilized {
        let w = self.params.window.max(1);
        let mut trace = Vec::new();
        let mut previous: Option<usize> = None;
        let mut last = (0, 0, 0);
        for d in self.schedule() {
            let mut values = Vec::new();
            let mut found = None;
            for e in d..=self.e_cap(d) {
                let value = sample(d, e);
                trace.push(TruncationSample { d, e, value });
                values.push(value);
                if values.len() >= w && values[values.len() - w..].iter().all(|&v| v == value) {
                    found = Some((value, e));
                    break;
                }
            }
            let Some((value, e)) = found else {
                return Stabilized {
                    value: *values.last().unwrap(),
                    status: PlateauStatus::NoPlateauInE,
                    d,
                    e: self.e_cap(d),
                    trace,
                };
            };
            if previous == Some(value) {
                return Stabilized {
                    value,
                    status: PlateauStatus::Stable,
                    d,
                    e,
                    trace,
                };
            }
            previous = Some(value);
            last = (value, d, e);
        }
        Stabilized {
            value: last.0,
            status: PlateauStatus::NoPlateauInD,
            d: last.1,
            e: last.2,
            trace,
        }
    }

    fn f_minus(&self, c: &Scalar) -> MultiPoly {
        &self.f - &MultiPoly::constant_in(self.f.vars_arc().clone(), c.clone())
    }

    fn relation_row(&self, a: u32, b: u32) -> SparseVec {
        to_sparse(&jacobian2(&self.f, &monomial(self.f.vars_arc(), a, b)).expect("bivariate"))
    }

    fn ensure_tower(&self, e: usize) {
        let built = self.tower.read().unwrap().built;
        if built.is_none_or(|b| b < e) {
            self.tower.write().unwrap().ensure(&self.f, e);
        }
    }

    /// `dim (R(e) ∩ P_{<=d})` for the relation span with generator degree
    /// `<= e`.
    pub fn relation_dim(&self, d: usize, e: usize) -> usize {
        self.ensure_tower(e);
        self.tower.read().unwrap().count_below(mono_count(d), e)
    }

    /// Exact membership of `p` in the relation span with generators of degree
    /// up to `deg p + cap_slack`.
    pub fn in_relations(&self, p: &MultiPoly) -> bool {
        let Some(deg) = degree_of(p) else {
            return true;
        };
        self.ensure_tower(deg + self.params.cap_slack);
        self.tower.read().unwrap().echelon.contains(&to_sparse(p))
    }

    /// `dim P_{<=d} / ((R + (f-c)P) ∩ P_{<=d})` with relation generators of
    /// degree `<= e` and multiples `(f-c)·m`, `deg m <= e - 2`, so both
    /// families reach degree `e + deg f - 2`.
    pub fn coker_dim_at(&self, c: &Scalar, d: usize, e: usize) -> usize {
        let mut state = CokerState::new(self, c);
        state.grow(self, e);
        mono_count(d) - state.echelon.count_pivots_below(mono_count(d))
    }

    /// `R'_c = dim Coker(t - c | G^(0))`, plateau-gated.
    pub fn coker_dim_t_minus_c(&self, c: &Scalar) -> Stabilized {
        let mut state = CokerState::new(self, c);
        self.plateau(|d, e| {
            state.grow(self, e);
            mono_count(d) - state.echelon.count_pivots_below(mono_count(d))
        })
    }

    /// `dim {g : deg g <= d, (f-c)g ∈ R(e + deg f)} - dim R(e) ∩ P_{<=d}`.
    pub fn ker_dim_at(&self, c: &Scalar, d: usize, e: usize) -> usize {
        let mut state = KernelState::new(self, c, d);
        state.grow(self, e + self.delta);
        state.kernel_dim() - self.relation_dim(d, e)
    }

    /// `N'_c = dim Ker(t - c | G^(0))`, plateau-gated.
    pub fn ker_dim_t_minus_c(&self, c: &Scalar) -> Stabilized {
        let mut state: Option<KernelState> = None;
        self.plateau(|d, e| {
            if state.as_ref().is_none_or(|s| s.d != d) {
                state = Some(KernelState::new(self, c, d));
            }
            let s = state.as_mut().unwrap();
            s.grow(self, e + self.delta);
            s.kernel_dim() - self.relation_dim(d, e)
        })
    }

    /// Kernel of `t - c` on `P_{<=d}` modulo `R(e + deg f)`: polynomials `g`
    /// of degree `<= d` with `(f-c)g ∈ R`.
    pub fn kernel_vectors(&self, c: &Scalar, d: usize, e: usize) -> Vec<MultiPoly> {
        let mut state = KernelState::new(self, c, d);
        state.grow(self, e + self.delta);
        state
            .echelon
            .rows_below(state.offset)
            .map(|r| from_sparse(r, self.f.vars_arc()))
            .collect()
    }

    /// `(J_f + R(e)) ∩ P_{<=d}` as a dense subspace, where `J_f` is spanned by
    /// `f_x m`, `f_y m` with `deg m <= e - 1`.
    pub fn g_minus_one_space(&self, d: usize, e: usize) -> Subspace {
        let mut state = GMinusOneState::new(self, None);
        state.grow(self, e);
        dense_below(&state.echelon, mono_count(d)).expect("consistent")
    }

    /// `dim Coker(t - c | G^(-1))`, plateau-gated.
    pub fn coker_dim_g_minus_one(&self, c: &Scalar) -> Stabilized {
        let mut whole = GMinusOneState::new(self, None);
        let mut image = GMinusOneState::new(self, Some(c.clone()));
        self.plateau(|d, e| {
            whole.grow(self, e);
            image.grow(self, e);
            let n = mono_count(d);
            whole.echelon.count_pivots_below(n) - image.echelon.count_pivots_below(n)
        })
    }

    /// `dim Ker(t - c | G^(-1))`, plateau-gated.
    pub fn ker_dim_g_minus_one(&self, c: &Scalar) -> Stabilized {
        let mut kernel: Option<KernelState> = None;
        let mut whole = GMinusOneState::new(self, None);
        self.plateau(|d, e| {
            if kernel.as_ref().is_none_or(|s| s.d != d) {
                kernel = Some(KernelState::new(self, c, d));
            }
            let k = kernel.as_mut().unwrap();
            k.grow(self, e + self.delta);
            whole.grow(self, e);
            let n = mono_count(d);
            let kernel_rows: Vec<SparseVec> = k.echelon.rows_below(k.offset).cloned().collect();
            let whole_rows: Vec<SparseVec> = whole.echelon.rows_below(n).cloned().collect();
            let mut sum = SparseEchelon::new();
            for r in kernel_rows.iter().chain(&whole_rows) {
                sum.insert(r.clone());
            }
            let meet = kernel_rows.len() + whole_rows.len() - sum.rank();
            meet - self.relation_dim(d, e)
        })
    }

    /// Codimensions `dim G^(0) / ∂_t^{-i} G^(0)` for `i = 1..=depth`, each
    /// plateau-gated. A finite-depth probe of the intersection of all
    /// `∂_t^{-i} G^(0)`.
    pub fn depth_probe(&self, depth: usize) -> Vec<Stabilized> {
        (1..=depth)
            .map(|i| {
                let mut ech = SparseEchelon::new();
                let mut relations_done: Option<usize> = None;
                let mut images_done: Option<usize> = None;
                self.plateau(|d, e| {
                    let start = relations_done.map_or(0, |x| x + 1);
                    for k in start..=e {
                        for b in 0..=k as u32 {
                            ech.insert(self.relation_row(k as u32 - b, b));
                        }
                    }
                    relations_done = Some(e);
                    // images of degree <= e + deg f - 2
                    let top = (e + self.delta).checked_sub(2 + i * self.delta);
                    if let Some(top) = top {
                        let start = images_done.map_or(0, |x| x + 1);
                        for k in start..=top {
                            for b in 0..=k as u32 {
                                let mut g = monomial(self.f.vars_arc(), k as u32 - b, b);
                                for _ in 0..i {
                                    g = inverse_dt_poly(&self.f, &g, Antiderivative::AlongX);
                                }
                                ech.insert(to_sparse(&g));
                            }
                        }
                        images_done = Some(top);
                    }
                    mono_count(d) - ech.count_pivots_below(mono_count(d))
                })
            })
            .collect()
    }
}

struct CokerState {
    echelon: SparseEchelon,
    f_minus_c: MultiPoly,
    done: Option<usize>,
}

impl CokerState {
    fn new(t: &BrieskornTruncation, c: &Scalar) -> CokerState {
        CokerState {
            echelon: SparseEchelon::new(),
            f_minus_c: t.f_minus(c),
            done: None,
        }
    }

    fn grow(&mut self, t: &BrieskornTruncation, e: usize) {
        let start = self.done.map_or(0, |x| x + 1);
        for k in start..=e {
            for b in 0..=k as u32 {
                self.echelon.insert(t.relation_row(k as u32 - b, b));
            }
            if k >= 2 {
                let m = k as u32 - 2;
                for b in 0..=m {
                    let row = self.f_minus_c.mul_monomial(&Monomial(vec![m - b, b]));
                    self.echelon.insert(to_sparse(&row));
                }
            }
        }
        self.done = Some(self.done.map_or(e, |x| x.max(e)));
    }
}

/// Tagged elimination for `{g : deg g <= d, (f-c)g ∈ R}`: rows
/// `((f-c)m, tag m)` and `(J, 0)` with tag coordinates below the image
/// coordinates, so rows with pivot below the offset are kernel vectors.
struct KernelState {
    d: usize,
    offset: usize,
    echelon: SparseEchelon,
    done: Option<usize>,
}

impl KernelState {
    fn new(t: &BrieskornTruncation, c: &Scalar, d: usize) -> KernelState {
        let offset = mono_count(d);
        let fc = t.f_minus(c);
        let mut echelon = SparseEchelon::new();
        for k in 0..=d as u32 {
            for b in 0..=k {
                let mut row = shifted(to_sparse(&fc.mul_monomial(&Monomial(vec![k - b, b]))), offset);
                row.insert(0, (mono_index(k - b, b), Scalar::one()));
                echelon.insert(row);
            }
        }
        KernelState {
            d,
            offset,
            echelon,
            done: None,
        }
    }

    fn grow(&mut self, t: &BrieskornTruncation, e: usize) {
        let start = self.done.map_or(0, |x| x + 1);
        for k in start..=e {
            for b in 0..=k as u32 {
                self.echelon.insert(shifted(t.relation_row(k as u32 - b, b), self.offset));
            }
        }
        self.done = Some(self.done.map_or(e, |x| x.max(e)));
    }

    fn kernel_dim(&self) -> usize {
        self.echelon.count_pivots_below(self.offset)
    }
}

/// Span of `J(f,m)` (`deg m <= e`) together with `h·f_x m`, `h·f_y m`
/// (`deg m <= e - 1 - deg h`), where `h = 1` or `h = f - c`.
struct GMinusOneState {
    echelon: SparseEchelon,
    fx: MultiPoly,
    fy: MultiPoly,
    shift: usize,
    done: Option<usize>,
}

impl GMinusOneState {
    fn new(t: &BrieskornTruncation, c: Option<Scalar>) -> GMinusOneState {
        let (fx, fy) = (t.f.partial_index(0), t.f.partial_index(1));
        match c {
            None => GMinusOneState {
                echelon: SparseEchelon::new(),
                fx,
                fy,
                shift: 0,
                done: None,
            },
            Some(c) => {
                let fc = t.f_minus(&c);
                GMinusOneState {
                    echelon: SparseEchelon::new(),
                    fx: &fx * &fc,
                    fy: &fy * &fc,
                    shift: t.delta,
                    done: None,
                }
            }
        }
    }

    fn grow(&mut self, t: &BrieskornTruncation, e: usize) {
        let start = self.done.map_or(0, |x| x + 1);
        for k in start..=e {
            for b in 0..=k as u32 {
                self.echelon.insert(t.relation_row(k as u32 - b, b));
            }
            if let Some(m) = k.checked_sub(1 + self.shift) {
                let m = m as u32;
                for b in 0..=m {
                    let mono = Monomial(vec![m - b, b]);
                    self.echelon.insert(to_sparse(&self.fx.mul_monomial(&mono)));
                    self.echelon.insert(to_sparse(&self.fy.mul_monomial(&mono)));
                }
            }
        }
        self.done = Some(self.done.map_or(e, |x| x.max(e)));
    }
}
