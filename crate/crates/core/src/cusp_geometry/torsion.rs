use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use serde::Serialize;

use super::torus::{koszul_complex, Coefficients, TorusBundle};
use crate::error::{Error, Result};
use crate::int::Int;
use crate::integer_homology::{
    integer_kernel, smith_with_transforms, snf_dense, unimodular_inverse,
};
use crate::linalg::ZMat;
use crate::quad_arith::{delta_d, QuadRat, QuadRing};
use crate::sym_modules::FVec;

/// Relative tolerance of the Cheeger comparison.
pub const CHEEGER_TOLERANCE: f64 = 1e-9;

/// Cochain complex `C^0 → C^1 → …` of lattices `Z^{n_q}` with real cohomology bases.
///
/// `cohomology_bases[q]` are real cocycles whose classes form an orthonormal basis of
/// `H^q(C; R)`; the metric only enters through them.
#[derive(Clone, Debug)]
pub struct BasedComplexR {
    dims: Vec<usize>,
    differentials: Vec<ZMat>,
    cohomology_bases: Vec<Vec<Vec<f64>>>,
}

fn rank(d: &ZMat) -> usize {
    if d.rows() == 0 || d.cols() == 0 {
        0
    } else {
        snf_dense(d).rank()
    }
}

fn column_f64(d: &ZMat, j: usize) -> Vec<f64> {
    d.column(j).iter().map(Int::to_f64).collect()
}

fn log_abs_det(cols: &[Vec<f64>], n: usize) -> Option<f64> {
    if cols.len() != n {
        return None;
    }
    if n == 0 {
        return Some(0.0);
    }
    let m = DMatrix::from_fn(n, n, |i, j| cols[j][i]);
    let scale = m.amax().max(1.0);
    let r = m.qr().r();
    let mut acc = 0.0;
    for i in 0..n {
        let x = r[(i, i)].abs();
        if x <= 1e-12 * scale {
            return None;
        }
        acc += x.ln();
    }
    Some(acc)
}

impl BasedComplexR {
    /// `differentials[q]` maps `C^q → C^{q+1}`; there are `dims.len() − 1` of them.
    pub fn new(
        dims: Vec<usize>,
        differentials: Vec<ZMat>,
        cohomology_bases: Vec<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        if dims.is_empty()
            || differentials.len() + 1 != dims.len()
            || cohomology_bases.len() != dims.len()
        {
            return Err(Error::Shape(
                "complex needs one differential between consecutive degrees".into(),
            ));
        }
        for (q, d) in differentials.iter().enumerate() {
            if d.cols() != dims[q] || d.rows() != dims[q + 1] {
                return Err(Error::Shape(format!("d^{q} is {}x{}", d.rows(), d.cols())));
            }
        }
        for q in 1..differentials.len() {
            if !differentials[q].mul(&differentials[q - 1]).is_zero() {
                return Err(Error::Shape(format!("d^{q} d^{} ≠ 0", q - 1)));
            }
        }
        let c = BasedComplexR {
            dims,
            differentials,
            cohomology_bases,
        };
        for q in 0..c.dims.len() {
            let b = c.betti(q);
            if c.cohomology_bases[q].len() != b {
                return Err(Error::Degenerate(format!(
                    "H^{q} has rank {b}, got {} basis vectors",
                    c.cohomology_bases[q].len()
                )));
            }
            for h in &c.cohomology_bases[q] {
                if h.len() != c.dims[q] {
                    return Err(Error::Shape(format!(
                        "cohomology vector of length {} in degree {q}",
                        h.len()
                    )));
                }
                if let Some(d) = c.differentials.get(q) {
                    let norm = h.iter().map(|x| x.abs()).fold(1.0, f64::max);
                    let worst = (0..d.rows())
                        .map(|i| {
                            d.row(i)
                                .iter()
                                .zip(h)
                                .map(|(a, x)| a.to_f64() * x)
                                .sum::<f64>()
                                .abs()
                        })
                        .fold(0.0, f64::max);
                    if worst > 1e-9 * norm * (1.0 + d.cols() as f64) {
                        return Err(Error::Degenerate(format!(
                            "basis vector in degree {q} is not a cocycle"
                        )));
                    }
                }
            }
        }
        Ok(c)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn differentials(&self) -> &[ZMat] {
        &self.differentials
    }

    pub fn cohomology_bases(&self) -> &[Vec<Vec<f64>>] {
        &self.cohomology_bases
    }

    fn incoming(&self, q: usize) -> Option<&ZMat> {
        q.checked_sub(1).map(|p| &self.differentials[p])
    }

    fn outgoing(&self, q: usize) -> Option<&ZMat> {
        self.differentials.get(q)
    }

    pub fn betti(&self, q: usize) -> usize {
        self.dims[q] - self.incoming(q).map_or(0, rank) - self.outgoing(q).map_or(0, rank)
    }

    /// Same complex with every cohomology basis replaced by `f(q, basis)`.
    pub fn with_bases(&self, f: impl Fn(usize, &[Vec<f64>]) -> Vec<Vec<f64>>) -> Result<Self> {
        let bases = (0..self.dims.len())
            .map(|q| f(q, &self.cohomology_bases[q]))
            .collect();
        BasedComplexR::new(self.dims.clone(), self.differentials.clone(), bases)
    }

    /// Direct sum of two complexes of the same length.
    pub fn direct_sum(&self, other: &BasedComplexR) -> Result<BasedComplexR> {
        if self.dims.len() != other.dims.len() {
            return Err(Error::Shape("complexes of different length".into()));
        }
        let dims: Vec<usize> = self
            .dims
            .iter()
            .zip(&other.dims)
            .map(|(a, b)| a + b)
            .collect();
        let diffs = self
            .differentials
            .iter()
            .zip(&other.differentials)
            .map(|(a, b)| {
                let mut d = ZMat::zeros(a.rows() + b.rows(), a.cols() + b.cols());
                d.set_block(0, 0, a);
                d.set_block(a.rows(), a.cols(), b);
                d
            })
            .collect();
        let bases = (0..dims.len())
            .map(|q| {
                let (na, nb) = (self.dims[q], other.dims[q]);
                let left = self.cohomology_bases[q].iter().map(|h| {
                    let mut v = h.clone();
                    v.resize(na + nb, 0.0);
                    v
                });
                let right = other.cohomology_bases[q].iter().map(|h| {
                    let mut v = vec![0.0; na];
                    v.extend_from_slice(h);
                    v
                });
                left.chain(right).collect()
            })
            .collect();
        BasedComplexR::new(dims, diffs, bases)
    }
}

fn pivot_columns(d: &ZMat) -> Vec<usize> {
    if d.rows() == 0 || d.cols() == 0 {
        return Vec::new();
    }
    d.to_q().rref().1
}

/// `log τ = Σ_q (−1)^{q+1} log |det(d b^{q−1}, h^q, b^q)|`, with `b^q` the standard basis
/// vectors at the pivot columns of `d^q`.
pub fn log_reidemeister_torsion(c: &BasedComplexR) -> Result<f64> {
    let mut total = 0.0;
    for q in 0..c.dims.len() {
        let n = c.dims[q];
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
        if let Some(d) = c.incoming(q) {
            cols.extend(pivot_columns(d).into_iter().map(|j| column_f64(d, j)));
        }
        cols.extend(c.cohomology_bases[q].iter().cloned());
        if let Some(d) = c.outgoing(q) {
            cols.extend(pivot_columns(d).into_iter().map(|j| {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                e
            }));
        }
        let l = log_abs_det(&cols, n).ok_or_else(|| {
            Error::Degenerate(format!("cohomology basis in degree {q} does not span"))
        })?;
        total += if q % 2 == 0 { -l } else { l };
    }
    Ok(total)
}

pub fn reidemeister_torsion(c: &BasedComplexR) -> Result<f64> {
    Ok(log_reidemeister_torsion(c)?.exp())
}

/// `H^q(C; Z)` against the metric of the cohomology basis.
#[derive(Clone, Debug, Serialize)]
pub struct IntegralCohomology {
    pub degree: usize,
    pub torsion: Vec<Int>,
    pub log_torsion_order: f64,
    pub log_free_covolume: f64,
}

fn solve_exact_integer(k: &[Vec<Int>], target: &[Int]) -> Result<Vec<Int>> {
    let n = target.len();
    let mut km = ZMat::zeros(n, k.len());
    for (j, col) in k.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            km.set(i, j, x.clone());
        }
    }
    let rhs: Vec<_> = target
        .iter()
        .map(|x| num_rational::BigRational::from(x.to_bigint()))
        .collect();
    let sol = km
        .to_q()
        .solve(&rhs)
        .ok_or_else(|| Error::Degenerate("coboundary outside the cocycle lattice".into()))?;
    sol.iter()
        .map(|x| {
            x.is_integer()
                .then(|| Int::from(x.to_integer()))
                .ok_or_else(|| Error::Degenerate("cocycle lattice is not saturated".into()))
        })
        .collect()
}

/// Torsion from the Smith form of `d^{q−1}` on `ker d^q`, covolume of the free part
/// in the coordinates of the cohomology basis.
pub fn integral_cohomology(c: &BasedComplexR, q: usize) -> Result<IntegralCohomology> {
    let n = c.dims[q];
    let kernel: Vec<Vec<Int>> = match c.outgoing(q) {
        Some(d) if d.rows() > 0 => integer_kernel(d),
        _ => (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Int::ONE } else { Int::ZERO })
                    .collect()
            })
            .collect(),
    };
    let k = kernel.len();
    let mut y = ZMat::zeros(k, c.incoming(q).map_or(0, ZMat::cols));
    if let Some(d) = c.incoming(q) {
        for j in 0..d.cols() {
            for (i, x) in solve_exact_integer(&kernel, &d.column(j))?
                .into_iter()
                .enumerate()
            {
                y.set(i, j, x);
            }
        }
    }
    let (torsion, adapted, r) = if y.cols() == 0 || k == 0 {
        (Vec::new(), ZMat::identity(k), 0)
    } else {
        let s = smith_with_transforms(&y);
        let torsion: Vec<Int> = s
            .diagonal
            .iter()
            .filter(|x| !x.is_unit())
            .cloned()
            .collect();
        (torsion, unimodular_inverse(&s.left)?, s.diagonal.len())
    };
    let log_torsion_order = torsion.iter().map(Int::ln_abs).sum();

    let b = c.cohomology_bases[q].len();
    if b != k - r {
        return Err(Error::Degenerate(format!(
            "H^{q} has rank {} but {b} basis vectors",
            k - r
        )));
    }
    if b == 0 {
        return Ok(IntegralCohomology {
            degree: q,
            torsion,
            log_torsion_order,
            log_free_covolume: 0.0,
        });
    }
    // [h | pivot columns of d^{q−1}] is a real basis of ker d^q.
    let mut basis: Vec<Vec<f64>> = c.cohomology_bases[q].clone();
    if let Some(d) = c.incoming(q) {
        basis.extend(pivot_columns(d).into_iter().map(|j| column_f64(d, j)));
    }
    let a = DMatrix::from_fn(n, basis.len(), |i, j| basis[j][i]);
    let qr = a.clone().qr();
    let (qm, rm) = (qr.q(), qr.r());
    let mut coords = DMatrix::zeros(b, b);
    for (col, t) in (r..k).enumerate() {
        let mut z = DVector::zeros(n);
        for (j, kv) in kernel.iter().enumerate() {
            let w = adapted.get(j, t).to_f64();
            if w != 0.0 {
                for i in 0..n {
                    z[i] += w * kv[i].to_f64();
                }
            }
        }
        let x = rm
            .solve_upper_triangular(&(qm.transpose() * &z))
            .ok_or_else(|| {
                Error::Degenerate(format!("cohomology basis in degree {q} does not span"))
            })?;
        let resid = (&a * &x - &z).amax();
        if resid > 1e-8 * (1.0 + z.amax()) {
            return Err(Error::Degenerate(format!(
                "cohomology basis in degree {q} does not span"
            )));
        }
        for i in 0..b {
            coords[(i, col)] = x[i];
        }
    }
    let det = coords.determinant().abs();
    if det == 0.0 {
        return Err(Error::Degenerate(format!(
            "cohomology basis in degree {q} does not span"
        )));
    }
    Ok(IntegralCohomology {
        degree: q,
        torsion,
        log_torsion_order,
        log_free_covolume: det.ln(),
    })
}

/// Both sides of `τ = ∏_q (|H^q_tor| / vol H^q_free)^{(−1)^{q+1}}`.
#[derive(Clone, Debug, Serialize)]
pub struct CheegerReport {
    pub log_torsion_direct: f64,
    pub log_torsion_integral: f64,
    pub degrees: Vec<IntegralCohomology>,
    pub consistent: bool,
}

pub fn cheeger_report(c: &BasedComplexR) -> Result<CheegerReport> {
    let direct = log_reidemeister_torsion(c)?;
    let degrees: Vec<IntegralCohomology> = (0..c.dims.len())
        .map(|q| integral_cohomology(c, q))
        .collect::<Result<_>>()?;
    let integral: f64 = degrees
        .iter()
        .map(|h| {
            let t = h.log_torsion_order - h.log_free_covolume;
            if h.degree % 2 == 0 {
                -t
            } else {
                t
            }
        })
        .sum();
    // Relative error of τ itself.
    let consistent = (direct - integral).abs().exp_m1() <= CHEEGER_TOLERANCE;
    Ok(CheegerReport {
        log_torsion_direct: direct,
        log_torsion_integral: integral,
        degrees,
        consistent,
    })
}

/// Hard failure when the two computations of the torsion disagree.
pub fn cheeger_consistency(c: &BasedComplexR) -> Result<CheegerReport> {
    let r = cheeger_report(c)?;
    if !r.consistent {
        return Err(Error::CheckFailed {
            name: "cheeger",
            detail: format!(
                "log τ = {} directly, {} from integral cohomology",
                r.log_torsion_direct, r.log_torsion_integral
            ),
        });
    }
    Ok(r)
}

fn to_complex(ring: &QuadRing, x: &QuadRat) -> Complex<f64> {
    let (re, im) = ring.field_to_complex(x);
    Complex::new(re, im)
}

/// Real `{1, ω}` coordinates of `λ·v`.
fn real_coordinates(ring: &QuadRing, v: &[FVec], lambda: Complex<f64>) -> Vec<f64> {
    let (re_w, im_w) = ring.omega_complex();
    v.iter()
        .flatten()
        .flat_map(|x| {
            let z = lambda * to_complex(ring, x);
            let b = z.im / im_w;
            [z.re - b * re_w, b]
        })
        .collect()
}

fn unit_line(m: usize, index: usize) -> FVec {
    let mut v = vec![QuadRat::zero(); m + 1];
    v[index] = QuadRat::one();
    v
}

/// The Koszul complex of one side with harmonic orthonormal cohomology bases.
fn side_complex(t: &TorusBundle, side: Coefficients) -> Result<BasedComplexR> {
    let ring = t.ring();
    let m = t.m();
    let n = 2 * (m + 1);
    let k = koszul_complex(t.actions(side))?;
    let vol = t.volume().to_f64();
    // Model coordinates are true coordinates divided by the twist.
    let untwist = match side {
        Coefficients::Standard => Complex::new(1.0, 0.0),
        Coefficients::Dual => to_complex(ring, &delta_d(ring).value),
    };
    let i = Complex::new(0.0, 1.0);
    let line = |s: Complex<f64>, v: &FVec| -> [Vec<f64>; 2] {
        [
            real_coordinates(ring, std::slice::from_ref(v), untwist * s),
            real_coordinates(ring, std::slice::from_ref(v), untwist * s * i),
        ]
    };

    let h0 = line(
        Complex::new(1.0 / vol.sqrt(), 0.0),
        &unit_line(m, t.invariant_index(side)),
    )
    .to_vec();
    let h2 = line(
        Complex::new(vol.sqrt(), 0.0),
        &unit_line(m, t.coinvariant_index(side)),
    )
    .to_vec();

    let s = Complex::new(1.0 / (2.0 * vol).sqrt(), 0.0);
    let plus: Vec<FVec> = (0..2).map(|j| t.plus_periods(side, j)).collect();
    let minus: Vec<FVec> = (0..2).map(|j| t.minus_periods(side, j)).collect();
    let mut h1 = Vec::new();
    for periods in [&plus, &minus] {
        for phase in [Complex::new(1.0, 0.0), i] {
            h1.push(real_coordinates(ring, periods, untwist * s * phase));
        }
    }
    BasedComplexR::new(vec![n, 2 * n, n], vec![k.d0, k.d1], vec![h0, h1, h2])
}

/// Cusp torus cochain complex with `Λ_m`, its dual, or both (`None`, the bundle `Ē`).
pub fn torus_based_complex(t: &TorusBundle, side: Option<Coefficients>) -> Result<BasedComplexR> {
    match side {
        Some(s) => side_complex(t, s),
        None => side_complex(t, Coefficients::Standard)?
            .direct_sum(&side_complex(t, Coefficients::Dual)?),
    }
}

fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> ZMat {
    let mut g = ZMat::identity(n);
    if n < 2 {
        return g;
    }
    for _ in 0..3 * n {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a == b {
            continue;
        }
        let k = Int::from(rng.gen_range(-2i64..=2));
        for j in 0..n {
            let v = g.get(a, j) + &(&k * g.get(b, j));
            g.set(a, j, v);
        }
    }
    g
}

/// A random complex `C^0 → … → C^{len−1}` with ranks at most `max_rank`: diagonal maps with
/// entries in `1..=4` conjugated by random unimodular changes of basis, and random real
/// cohomology bases (random combinations of free classes plus coboundaries).
pub fn random_based_complex<R: Rng>(
    rng: &mut R,
    len: usize,
    max_rank: usize,
) -> Result<BasedComplexR> {
    let dims: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=max_rank)).collect();
    // ranks[q] = rank d^q.
    let mut ranks = Vec::with_capacity(len.saturating_sub(1));
    let mut used_in = 0;
    for q in 0..len.saturating_sub(1) {
        let r = rng.gen_range(0..=(dims[q] - used_in).min(dims[q + 1]));
        ranks.push(r);
        used_in = r;
    }
    let g: Vec<ZMat> = dims.iter().map(|&n| random_unimodular(rng, n)).collect();
    let g_inv: Vec<ZMat> = g.iter().map(unimodular_inverse).collect::<Result<_>>()?;
    let incoming = |q: usize| if q == 0 { 0 } else { ranks[q - 1] };
    let mut diffs = Vec::new();
    for q in 0..ranks.len() {
        let mut d = ZMat::zeros(dims[q + 1], dims[q]);
        for i in 0..ranks[q] {
            // Source block sits at the end of C^q, target block at the start of C^{q+1}.
            d.set(
                i,
                dims[q] - ranks[q] + i,
                Int::from(rng.gen_range(1i64..=4)),
            );
        }
        diffs.push(g[q + 1].mul(&d).mul(&g_inv[q]));
    }
    let mut bases = Vec::new();
    for q in 0..len {
        let free: Vec<usize> =
            (incoming(q)..dims[q] - ranks.get(q).copied().unwrap_or(0)).collect();
        let mut h = Vec::new();
        for _ in 0..free.len() {
            let mut v = vec![0.0; dims[q]];
            for &j in &free {
                v[j] = rng.gen_range(-2.0..2.0);
            }
            for x in v.iter_mut().take(incoming(q)) {
                *x = rng.gen_range(-1.0..1.0);
            }
            h.push(
                (0..dims[q])
                    .map(|i| (0..dims[q]).map(|j| g[q].get(i, j).to_f64() * v[j]).sum())
                    .collect(),
            );
        }
        bases.push(h);
    }
    BasedComplexR::new(dims, diffs, bases)
}
