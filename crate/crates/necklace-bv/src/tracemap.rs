//! The algebra of matrices over the coordinate ring with totally
//! reversed composition, the M-matrices of arrows and of iota, the
//! supertrace morphism from the necklace side, and the intertwining
//! identities behind the main comparison theorem.

use crate::grading::Parity;
use crate::necklace::{Necklace, NecklaceError, NecklaceSum, Path};
use crate::quiver::{DArrow, DoubledQuiver, VertexId};
use crate::rat::{rat, Rat};
use crate::repbv::{
    poly_add, poly_const, poly_scale, poly_zero, Polynomial, RepAlgebra,
};
use crate::superlin::{IotaData, SuperSpace};
use crate::symbv::BVElement;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("non-composable path at step {0}")]
    NotComposable(usize),
    #[error(transparent)]
    Necklace(#[from] NecklaceError),
}

/// A single block of the matrix algebra over the coordinate ring:
/// polynomial entries indexed `entries[mu][nu]` with `mu` over the
/// source basis and `nu` over the target basis. Homogeneous: the entry
/// `(mu, nu)` has polynomial parity `degree + mu + nu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OMatrix {
    pub src: VertexId,
    pub tgt: VertexId,
    pub degree: Parity,
    pub entries: Vec<Vec<Polynomial>>,
}

/// The assembled representation-variety context shared by the trace
/// morphism and the verifiers.
pub struct TraceContext<'q> {
    pub quiver: &'q DoubledQuiver,
    pub space: SuperSpace,
    pub iota: IotaData,
    pub alg: RepAlgebra,
}

impl<'q> TraceContext<'q> {
    pub fn new(
        quiver: &'q DoubledQuiver,
        space: SuperSpace,
        iota: IotaData,
    ) -> Result<Self, crate::superlin::SuperlinError> {
        let alg = RepAlgebra::new(quiver, &space, &iota)?;
        Ok(TraceContext {
            quiver,
            space,
            iota,
            alg,
        })
    }

    pub fn zero_matrix(&self, src: VertexId, tgt: VertexId, degree: Parity) -> OMatrix {
        OMatrix {
            src,
            tgt,
            degree,
            entries: vec![vec![poly_zero(); self.space.dim(tgt)]; self.space.dim(src)],
        }
    }

    /// `M_a`: entries `(-1)^{mu+nu} X^a[mu][nu]` at `(mu, nu)`.
    pub fn m_of_arrow(&self, a: DArrow) -> OMatrix {
        let s = self.quiver.source(a);
        let t = self.quiver.target(a);
        let mut m = self.zero_matrix(s, t, self.quiver.degree(a));
        for mu in 0..self.space.dim(s) {
            for nu in 0..self.space.dim(t) {
                let sign = (self.space.basis_parity(s, mu) + self.space.basis_parity(t, nu))
                    .sign();
                m.entries[mu][nu] =
                    poly_scale(&self.alg.x_functional(self.quiver, a, mu, nu), &sign);
            }
        }
        m
    }

    /// `M_{e_i}`: the identity block at a vertex.
    pub fn m_of_vertex(&self, v: VertexId) -> OMatrix {
        let mut m = self.zero_matrix(v, v, Parity::EVEN);
        for i in 0..self.space.dim(v) {
            m.entries[i][i] = poly_const(rat(1));
        }
        m
    }

    /// The block of `M_iota` at a vertex (scalar entries, degree p+1).
    pub fn m_iota_at(&self, v: VertexId) -> OMatrix {
        self.scalar_block(v, &self.iota.maps[v.0].entries, self.iota.degree)
    }

    /// The block of `M_{iota^{-1}}` at a vertex.
    pub fn m_iota_inv_at(&self, v: VertexId) -> OMatrix {
        self.scalar_block(v, &self.iota.inverses[v.0].entries, self.iota.degree)
    }

    fn scalar_block(&self, v: VertexId, entries: &[Vec<Rat>], degree: Parity) -> OMatrix {
        let mut m = self.zero_matrix(v, v, degree);
        for mu in 0..self.space.dim(v) {
            for nu in 0..self.space.dim(v) {
                m.entries[mu][nu] = poly_const(entries[mu][nu].clone());
            }
        }
        m
    }

    /// Product in the reversed-composition algebra. Reads left to right
    /// like path concatenation: `M: i -> j` times `N: j -> l`. The Koszul
    /// signs of the tensor factors and of the reversed composition
    /// combine into `(-1)^{(mu+nu) |N|}` on each summand.
    pub fn mul(&self, m: &OMatrix, n: &OMatrix) -> OMatrix {
        assert_eq!(m.tgt, n.src, "block product vertex mismatch");
        let mut out = self.zero_matrix(m.src, n.tgt, m.degree + n.degree);
        let dm = self.space.dim(m.src);
        let dmid = self.space.dim(m.tgt);
        let dn = self.space.dim(n.tgt);
        for mu in 0..dm {
            let pmu = self.space.basis_parity(m.src, mu);
            for nu in 0..dmid {
                if m.entries[mu][nu].is_empty() {
                    continue;
                }
                let cross = (pmu + self.space.basis_parity(m.tgt, nu)) * n.degree;
                let left = if cross.is_odd() {
                    poly_scale(&m.entries[mu][nu], &rat(-1))
                } else {
                    m.entries[mu][nu].clone()
                };
                for sigma in 0..dn {
                    if n.entries[nu][sigma].is_empty() {
                        continue;
                    }
                    let prod = self.alg.poly_mul(&left, &n.entries[nu][sigma]);
                    out.entries[mu][sigma] = poly_add(&out.entries[mu][sigma], &prod);
                }
            }
        }
        out
    }

    /// Graded commutator `[m, n] = m n - (-1)^{|m||n|} n m` for blocks
    /// with matching endpoints.
    pub fn commutator(&self, m: &OMatrix, n: &OMatrix) -> OMatrix {
        let mn = self.mul(m, n);
        let nm = self.mul(n, m);
        let sign = (m.degree * n.degree + Parity::ODD).sign();
        self.add(&mn, &self.scale(&nm, &sign))
    }

    pub fn add(&self, m: &OMatrix, n: &OMatrix) -> OMatrix {
        assert_eq!((m.src, m.tgt, m.degree), (n.src, n.tgt, n.degree));
        let mut out = m.clone();
        for (r, row) in n.entries.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                out.entries[r][c] = poly_add(&out.entries[r][c], e);
            }
        }
        out
    }

    pub fn scale(&self, m: &OMatrix, c: &Rat) -> OMatrix {
        let mut out = m.clone();
        for row in &mut out.entries {
            for e in row.iter_mut() {
                *e = poly_scale(e, c);
            }
        }
        out
    }

    pub fn is_zero_matrix(&self, m: &OMatrix) -> bool {
        m.entries.iter().all(|r| r.iter().all(|e| e.is_empty()))
    }

    /// `M` of a path: ordered product of arrow blocks; the constant path
    /// gives the vertex idempotent.
    pub fn m_of_path(&self, path: &Path) -> Result<OMatrix, TraceError> {
        match path {
            Path::Constant(v) => Ok(self.m_of_vertex(*v)),
            Path::Word(w) => {
                let mut acc = self.m_of_arrow(w[0]);
                for (i, a) in w.iter().enumerate().skip(1) {
                    if self.quiver.source(*a) != acc.tgt {
                        return Err(TraceError::NotComposable(i));
                    }
                    acc = self.mul(&acc, &self.m_of_arrow(*a));
                }
                Ok(acc)
            }
        }
    }

    /// The supertrace of a square block, with the parity signs of the
    /// basis.
    pub fn str_block(&self, m: &OMatrix) -> Polynomial {
        assert_eq!(m.src, m.tgt);
        let mut out = poly_zero();
        for mu in 0..self.space.dim(m.src) {
            let s = self.space.basis_parity(m.src, mu).sign();
            out = poly_add(&out, &poly_scale(&m.entries[mu][mu], &s));
        }
        out
    }

    /// The trace morphism on a necklace: the supertrace of `M_iota`
    /// times the path matrix. Independent of the rotation representative
    /// up to the necklace relation signs.
    pub fn phi(&self, n: &Necklace) -> Result<Polynomial, TraceError> {
        let path = match n {
            Necklace::Constant(v) => Path::Constant(*v),
            Necklace::Word(w) => Path::Word(w.clone()),
        };
        self.phi_path(&path)
    }

    /// The trace of an arbitrary closed path representative.
    pub fn phi_path(&self, path: &Path) -> Result<Polynomial, TraceError> {
        let start = match path {
            Path::Constant(v) => *v,
            Path::Word(w) => self.quiver.source(w[0]),
        };
        let m = self.m_of_path(path)?;
        if m.tgt != start {
            return Err(TraceError::Necklace(NecklaceError::OpenPath));
        }
        Ok(self.str_block(&self.mul(&self.m_iota_at(start), &m)))
    }

    /// The multiplicative extension to the symmetric algebra: the product
    /// of the factor traces (their images supercommute in the coordinate
    /// ring, so sorted order is safe), extended linearly.
    pub fn phi_sym(&self, e: &BVElement) -> Result<Polynomial, TraceError> {
        let mut out = poly_zero();
        for (mono, c) in e {
            let mut term = poly_const(rat(1));
            for n in mono {
                term = self.alg.poly_mul(&term, &self.phi(n)?);
            }
            out = poly_add(&out, &poly_scale(&term, c));
        }
        Ok(out)
    }

    /// Linear extension of phi to necklace sums.
    pub fn phi_sum(&self, s: &NecklaceSum) -> Result<Polynomial, TraceError> {
        let mut out = poly_zero();
        for (n, c) in s {
            out = poly_add(&out, &poly_scale(&self.phi(n)?, c));
        }
        Ok(out)
    }

    /// `B` applied with `M_{iota^{-1}}` at block level:
    /// `M_{iota^{-1}} Phi + (-1)^{|iota|(|iota| + |Phi|) + |iota|} Phi M_{iota^{-1}}`.
    pub fn b_m_iota_inv(&self, m: &OMatrix) -> OMatrix {
        let deg = self.iota.degree;
        let left = self.mul(&self.m_iota_inv_at(m.src), m);
        let right = self.mul(m, &self.m_iota_inv_at(m.tgt));
        let sign = (deg * m.degree + deg).sign();
        self.add(&left, &self.scale(&right, &sign))
    }
}
