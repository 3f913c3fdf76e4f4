//! First, second and third Lyapunov coefficients by projection onto the
//! critical eigenspace.
//!
//! The center manifold is written `x = w q + conj(w) conj(q) + sum h_jk w^j conj(w)^k / (j! k!)`
//! and the restricted flow as
//! `w' = i omega0 w + G21 w|w|^2 / 2 + G32 w|w|^4 / 12 + G43 w|w|^6 / 144`.
//! Each `h_jk` solves a resolvent system `(i (j - k) omega0 I - A) h_jk = ...`;
//! the resonant ones (`j - k = 1`) go through the bordered system and their
//! solvability conditions produce the `G` coefficients. Then
//! `l1 = Re G21 / 2`, `l2 = Re G32 / 12`, `l3 = Re G43 / 144`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    bordered_solve, relative_residual, resolvent_solve, spectrum, ComplexMatrix, ComplexVec, EigenTriple,
    PhaseConvention, SOLVABILITY_TOLERANCE,
};
use crate::multilinear::{evaluate_form, FormSource, SmoothModel};

/// Critical data at a Hopf point.
#[derive(Debug, Clone, PartialEq)]
pub struct HopfFrame {
    pub a: ComplexMatrix,
    pub omega0: f64,
    pub q: ComplexVec,
    pub p: ComplexVec,
}

/// Residual bound for the eigen-relations of a frame.
pub const FRAME_TOLERANCE: f64 = 1e-10;
/// `|<p, q> - 1|` bound.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;
/// Minimum `|Re lambda|` of the non-critical spectrum.
pub const HYPERBOLICITY_TOLERANCE: f64 = 1e-8;

impl HopfFrame {
    /// Validate and build a frame.
    pub fn new(a: ComplexMatrix, omega0: f64, q: ComplexVec, p: ComplexVec) -> Result<Self> {
        let n = a.dim();
        if q.len() != n || p.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: q.len().min(p.len()) });
        }
        if !(omega0 > 0.0) {
            return Err(Error::InvalidFrame(format!("omega0 = {omega0} must be positive")));
        }
        let t = EigenTriple { omega0, q, p };
        let (rq, rp, rn) = t.residuals(&a);
        if rq > FRAME_TOLERANCE || rp > FRAME_TOLERANCE {
            return Err(Error::InvalidFrame(format!("eigen-relations fail: |Aq - iwq|/|q| = {rq:e}, |A^H p + iwp|/|p| = {rp:e}")));
        }
        if rn > NORMALIZATION_TOLERANCE {
            return Err(Error::InvalidFrame(format!("<p, q> differs from 1 by {rn:e}")));
        }
        let frame = HopfFrame { a, omega0, q: t.q, p: t.p };
        let rest = frame.noncritical_spectrum();
        if let Some(bad) = rest.iter().find(|l| l.re.abs() <= HYPERBOLICITY_TOLERANCE) {
            return Err(Error::InvalidFrame(format!("additional eigenvalue {bad} on the imaginary axis")));
        }
        Ok(frame)
    }

    /// Frame of a generic model: Jacobian from the model, eigen-triple by
    /// inverse iteration near `i*omega_guess`.
    pub fn from_model<M: SmoothModel + ?Sized>(model: &M, omega_guess: f64, convention: PhaseConvention) -> Result<Self> {
        let a = model.jacobian();
        let t = crate::linalg::eigen_triple(&a, omega_guess, convention)?;
        HopfFrame::new(a, t.omega0, t.q, t.p)
    }

    /// Spectrum of `A` with the pair `+-i omega0` removed.
    pub fn noncritical_spectrum(&self) -> Vec<Complex64> {
        let mut ev = spectrum(&self.a);
        for target in [Complex64::new(0.0, self.omega0), Complex64::new(0.0, -self.omega0)] {
            if let Some((idx, _)) = ev
                .iter()
                .enumerate()
                .min_by(|(_, x), (_, y)| (*x - target).norm().total_cmp(&(*y - target).norm()))
            {
                ev.remove(idx);
            }
        }
        ev
    }

    /// The same frame with `q -> e^{i theta} q`, `p -> e^{i theta} p`.
    pub fn rotated(&self, theta: f64) -> HopfFrame {
        let r = Complex64::from_polar(1.0, theta);
        HopfFrame { a: self.a.clone(), omega0: self.omega0, q: self.q.scale(r), p: self.p.scale(r) }
    }
}

/// Tolerances governing a certificate computation.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Tolerances {
    /// Bound on `|<p, rhs>|` for the bordered solves.
    pub solvability: f64,
    /// `l2` is strictly meaningful when `|Re G21|` is below this.
    pub l2_validity: f64,
    /// `l3` additionally needs `|Re G32|` below this.
    pub l3_validity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { solvability: SOLVABILITY_TOLERANCE, l2_validity: 1e-6, l3_validity: 1e-4 }
    }
}

/// Record of one bordered solve.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct BorderedCheck {
    pub label: &'static str,
    /// `|(i omega0 I - A) h - rhs|`.
    pub singular_residual: f64,
    /// `|s|`.
    pub border: f64,
    /// `|<p, h>|`.
    pub orthogonality: f64,
}

/// Residual of one nonsingular resolvent solve.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ResolventCheck {
    pub label: &'static str,
    pub relative_residual: f64,
}

/// Everything produced by the first-order stage.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrder {
    pub h11: ComplexVec,
    pub h20: ComplexVec,
    pub h30: ComplexVec,
    pub h21: ComplexVec,
    pub g21: Complex64,
    pub l1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrder {
    pub h40: ComplexVec,
    pub h31: ComplexVec,
    pub h22: ComplexVec,
    pub h32: ComplexVec,
    pub g32: Complex64,
    pub l2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThirdOrder {
    pub h41: ComplexVec,
    pub h42: ComplexVec,
    pub h33: ComplexVec,
    pub g43: Complex64,
    pub l3: f64,
}

/// Which coefficients are meaningful at this point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Validity {
    /// `l2` derivation assumes `Re G21 = 0`.
    pub l2_strict: bool,
    /// `l3` assumes `Re G21 = Re G32 = 0`.
    pub l3_strict: bool,
}

/// Full output of the projection method.
#[derive(Debug, Clone, PartialEq)]
pub struct HopfCertificate {
    pub omega0: f64,
    pub q: ComplexVec,
    pub p: ComplexVec,
    pub first: FirstOrder,
    pub second: SecondOrder,
    pub third: ThirdOrder,
    pub validity: Validity,
    pub source: FormSource,
    pub tolerances: Tolerances,
    pub bordered: Vec<BorderedCheck>,
    pub resolvents: Vec<ResolventCheck>,
}

impl HopfCertificate {
    pub fn l1(&self) -> f64 {
        self.first.l1
    }
    pub fn l2(&self) -> f64 {
        self.second.l2
    }
    pub fn l3(&self) -> f64 {
        self.third.l3
    }

    /// All `h_jk` vectors with their names, in computation order.
    pub fn h_vectors(&self) -> Vec<(&'static str, &ComplexVec)> {
        vec![
            ("h11", &self.first.h11),
            ("h20", &self.first.h20),
            ("h30", &self.first.h30),
            ("h21", &self.first.h21),
            ("h40", &self.second.h40),
            ("h31", &self.second.h31),
            ("h22", &self.second.h22),
            ("h32", &self.second.h32),
            ("h41", &self.third.h41),
            ("h42", &self.third.h42),
            ("h33", &self.third.h33),
        ]
    }

    pub fn max_resolvent_residual(&self) -> f64 {
        self.resolvents.iter().map(|r| r.relative_residual).fold(0.0, f64::max)
    }
}

/// The projection computation for one model at one frame.
pub struct Projection<'a, M: SmoothModel + ?Sized> {
    model: &'a M,
    frame: &'a HopfFrame,
    source: FormSource,
    tol: Tolerances,
    q: ComplexVec,
    qb: ComplexVec,
    bordered: Vec<BorderedCheck>,
    resolvents: Vec<ResolventCheck>,
}

impl<'a, M: SmoothModel + ?Sized> Projection<'a, M> {
    pub fn new(model: &'a M, frame: &'a HopfFrame, source: FormSource, tol: Tolerances) -> Self {
        // Fall back to jets when exact forms were asked for but are absent.
        let probe = ComplexVec::zeros(model.dim());
        let source = if source == FormSource::Exact && model.exact_multilinear(2, &[&probe, &probe]).is_none() {
            FormSource::Jet
        } else {
            source
        };
        Projection {
            model,
            frame,
            source,
            tol,
            q: frame.q.clone(),
            qb: frame.q.conj(),
            bordered: Vec::new(),
            resolvents: Vec::new(),
        }
    }

    pub fn source(&self) -> FormSource {
        self.source
    }

    fn form(&self, args: &[&ComplexVec]) -> ComplexVec {
        evaluate_form(self.model, self.source, args.len(), args).expect("arity and dimensions are fixed by construction")
    }

    fn b(&self, x: &ComplexVec, y: &ComplexVec) -> ComplexVec {
        self.form(&[x, y])
    }
    fn c(&self, x: &ComplexVec, y: &ComplexVec, z: &ComplexVec) -> ComplexVec {
        self.form(&[x, y, z])
    }
    fn d(&self, x: &ComplexVec, y: &ComplexVec, z: &ComplexVec, u: &ComplexVec) -> ComplexVec {
        self.form(&[x, y, z, u])
    }
    fn e(&self, args: [&ComplexVec; 5]) -> ComplexVec {
        self.form(&args)
    }
    fn k(&self, args: [&ComplexVec; 6]) -> ComplexVec {
        self.form(&args)
    }
    fn l(&self, args: [&ComplexVec; 7]) -> ComplexVec {
        self.form(&args)
    }

    fn inner_p(&self, v: &ComplexVec) -> Complex64 {
        self.frame.p.inner(v)
    }

    /// `(m i omega0 I - A)^{-1} rhs`.
    fn resolvent(&mut self, label: &'static str, m: f64, rhs: &ComplexVec) -> Result<ComplexVec> {
        let sigma = Complex64::new(0.0, m * self.frame.omega0);
        let h = resolvent_solve(&self.frame.a, sigma, rhs)?;
        let r = relative_residual(&self.frame.a.resolvent_matrix(sigma), &h, rhs);
        self.resolvents.push(ResolventCheck { label, relative_residual: r });
        Ok(h)
    }

    /// `-A^{-1} rhs`.
    fn neg_a_inverse(&mut self, label: &'static str, rhs: &ComplexVec) -> Result<ComplexVec> {
        self.resolvent(label, 0.0, rhs)
    }

    fn bordered(&mut self, label: &'static str, rhs: &ComplexVec) -> Result<ComplexVec> {
        let f = self.frame;
        let sol = bordered_solve(&f.a, f.omega0, &f.q, &f.p, rhs, self.tol.solvability)?;
        self.bordered.push(BorderedCheck {
            label,
            singular_residual: sol.singular_residual,
            border: sol.border.norm(),
            orthogonality: sol.orthogonality,
        });
        Ok(sol.h)
    }

    /// `h11, h20, h30, G21, h21` and `l1`.
    pub fn first_coefficient(&mut self) -> Result<FirstOrder> {
        let (q, qb) = (self.q.clone(), self.qb.clone());

        let h11 = self.neg_a_inverse("h11", &self.b(&q, &qb))?;
        let h20 = self.resolvent("h20", 2.0, &self.b(&q, &q))?;
        let rhs30 = 3.0 * &self.b(&q, &h20) + self.c(&q, &q, &q);
        let h30 = self.resolvent("h30", 3.0, &rhs30)?;

        let without_g = self.c(&q, &q, &qb) + self.b(&qb, &h20) + 2.0 * &self.b(&q, &h11);
        let g21 = self.inner_p(&without_g);
        let h21 = self.bordered("h21", &(&without_g - &q.scale(g21)))?;

        Ok(FirstOrder { h11, h20, h30, h21, g21, l1: g21.re / 2.0 })
    }

    /// `h40, h31, h22, G32, h32` and `l2`.
    ///
    /// `h22` omits `-2 h11 (G21 + conj G21)`, which vanishes on `l1 = 0`, and
    /// `G32` is taken from `H32` without its `h21` terms since `<p, h21> = 0`.
    pub fn second_coefficient(&mut self, f: &FirstOrder) -> Result<SecondOrder> {
        let (q, qb) = (self.q.clone(), self.qb.clone());
        let FirstOrder { h11, h20, h30, h21, g21, .. } = f;
        let h20b = h20.conj();
        let h21b = h21.conj();

        let rhs40 = 3.0 * &self.b(h20, h20) + 4.0 * &self.b(&q, h30) + 6.0 * &self.c(&q, &q, h20) + self.d(&q, &q, &q, &q);
        let h40 = self.resolvent("h40", 4.0, &rhs40)?;

        let rhs31 = 3.0 * &self.b(&q, h21)
            + self.b(&qb, h30)
            + 3.0 * &self.b(h20, h11)
            + 3.0 * &self.c(&q, &q, h11)
            + 3.0 * &self.c(&q, &qb, h20)
            + self.d(&q, &q, &q, &qb)
            - h20.scale(3.0 * g21);
        let h31 = self.resolvent("h31", 2.0, &rhs31)?;

        let rhs22 = self.d(&q, &q, &qb, &qb)
            + 4.0 * &self.c(&q, &qb, h11)
            + self.c(&qb, &qb, h20)
            + self.c(&q, &q, &h20b)
            + 2.0 * &self.b(h11, h11)
            + 2.0 * &self.b(&q, &h21b)
            + 2.0 * &self.b(&qb, h21)
            + self.b(&h20b, h20);
        let h22 = self.neg_a_inverse("h22", &rhs22)?;

        let h32_core = 6.0 * &self.b(h11, h21)
            + self.b(&h20b, h30)
            + 3.0 * &self.b(&h21b, h20)
            + 3.0 * &self.b(&q, &h22)
            + 2.0 * &self.b(&qb, &h31)
            + 6.0 * &self.c(&q, h11, h11)
            + 3.0 * &self.c(&q, &h20b, h20)
            + 3.0 * &self.c(&q, &q, &h21b)
            + 6.0 * &self.c(&q, &qb, h21)
            + 6.0 * &self.c(&qb, h20, h11)
            + self.c(&qb, &qb, h30)
            + self.d(&q, &q, &q, &h20b)
            + 6.0 * &self.d(&q, &q, &qb, h11)
            + 3.0 * &self.d(&q, &qb, &qb, h20)
            + self.e([&q, &q, &q, &qb, &qb]);
        let g32 = self.inner_p(&h32_core);
        let h32_full = &h32_core - &h21.scale(6.0 * g21 + 3.0 * g21.conj());
        let h32 = self.bordered("h32", &(&h32_full - &q.scale(g32)))?;

        Ok(SecondOrder { h40, h31, h22, h32, g32, l2: g32.re / 12.0 })
    }

    /// `h41, h42, h33, G43` and `l3`.
    pub fn third_coefficient(&mut self, f: &FirstOrder, s: &SecondOrder) -> Result<ThirdOrder> {
        let (q, qb) = (self.q.clone(), self.qb.clone());
        let FirstOrder { h11, h20, h30, h21, g21, .. } = f;
        let SecondOrder { h40, h31, h22, h32, g32, .. } = s;
        let (g21, g32) = (*g21, *g32);
        let h20b = h20.conj();
        let h21b = h21.conj();
        let h30b = h30.conj();
        let h31b = h31.conj();
        let h32b = h32.conj();

        let rhs41 = 4.0 * &self.b(h11, h30)
            + 6.0 * &self.b(h20, h21)
            + 4.0 * &self.b(&q, h31)
            + self.b(&qb, h40)
            + 12.0 * &self.c(&q, h11, h20)
            + 6.0 * &self.c(&q, &q, h21)
            + 4.0 * &self.c(&q, &qb, h30)
            + 3.0 * &self.c(&qb, h20, h20)
            + 4.0 * &self.d(&q, &q, &q, h11)
            + 6.0 * &self.d(&q, &q, &qb, h20)
            + self.e([&q, &q, &q, &q, &qb])
            - h30.scale(6.0 * g21);
        let h41 = self.resolvent("h41", 3.0, &rhs41)?;

        let rhs42 = 8.0 * &self.b(h11, h31)
            + 6.0 * &self.b(h20, h22)
            + self.b(&h20b, h40)
            + 6.0 * &self.b(h21, h21)
            + 4.0 * &self.b(&h21b, h30)
            + 4.0 * &self.b(&q, h32)
            + 2.0 * &self.b(&qb, &h41)
            + 12.0 * &self.c(h11, h11, h20)
            + 3.0 * &self.c(h20, h20, &h20b)
            + 24.0 * &self.c(&q, h11, h21)
            + 12.0 * &self.c(&q, h20, &h21b)
            + 4.0 * &self.c(&q, &h20b, h30)
            + 6.0 * &self.c(&q, &q, h22)
            + 8.0 * &self.c(&q, &qb, h31)
            + 8.0 * &self.c(&qb, h11, h30)
            + 12.0 * &self.c(&qb, h20, h21)
            + self.c(&qb, &qb, h40)
            + 12.0 * &self.d(&q, &q, h11, h11)
            + 6.0 * &self.d(&q, &q, h20, &h20b)
            + 4.0 * &self.d(&q, &q, &q, &h21b)
            + 12.0 * &self.d(&q, &q, &qb, h21)
            + 24.0 * &self.d(&q, &qb, h11, h20)
            + 4.0 * &self.d(&q, &qb, &qb, h30)
            + 3.0 * &self.d(&qb, &qb, h20, h20)
            + self.e([&q, &q, &q, &q, &h20b])
            + 8.0 * &self.e([&q, &q, &q, &qb, h11])
            + 6.0 * &self.e([&q, &q, &qb, &qb, h20])
            + self.k([&q, &q, &q, &q, &qb, &qb])
            - (h20.scale(g32) + h31.scale(3.0 * g21 + g21.conj())).scale(4.0);
        let h42 = self.resolvent("h42", 2.0, &rhs42)?;

        let rhs33 = 9.0 * &self.b(h11, h22)
            + 3.0 * &self.b(h20, &h31b)
            + 3.0 * &self.b(&h20b, h31)
            + 9.0 * &self.b(h21, &h21b)
            + self.b(&h30b, h30)
            + 3.0 * &self.b(&q, &h32b)
            + 3.0 * &self.b(&qb, h32)
            + 6.0 * &self.c(h11, h11, h11)
            + 9.0 * &self.c(h11, &h20b, h20)
            + 18.0 * &self.c(&q, h11, &h21b)
            + 3.0 * &self.c(&q, h20, &h30b)
            + 9.0 * &self.c(&q, &h20b, h21)
            + 3.0 * &self.c(&q, &q, &h31b)
            + 9.0 * &self.c(&q, &qb, h22)
            + 18.0 * &self.c(&qb, h11, h21)
            + 9.0 * &self.c(&qb, h20, &h21b)
            + 3.0 * &self.c(&qb, &h20b, h30)
            + 3.0 * &self.c(&qb, &qb, h31)
            + 9.0 * &self.d(&q, &q, &h20b, h11)
            + self.d(&q, &q, &q, &h30b)
            + self.d(&qb, &qb, &qb, h30)
            + 9.0 * &self.d(&q, &q, &qb, &h21b)
            + 18.0 * &self.d(&q, &qb, h11, h11)
            + 9.0 * &self.d(&q, &qb, &h20b, h20)
            + 9.0 * &self.d(&q, &qb, &qb, h21)
            + 9.0 * &self.d(&qb, &qb, h11, h20)
            + 3.0 * &self.e([&q, &q, &q, &qb, &h20b])
            + 9.0 * &self.e([&q, &q, &qb, &qb, h11])
            + 3.0 * &self.e([&q, &qb, &qb, &qb, h20])
            + self.k([&q, &q, &q, &qb, &qb, &qb])
            - h11.scale(3.0 * (g32 + g32.conj()))
            - h22.scale(9.0 * (g21 + g21.conj()));
        let h33 = self.neg_a_inverse("h33", &rhs33)?;

        let h43_core = 12.0 * &self.b(h11, h32)
            + 6.0 * &self.b(h20, &h32b)
            + 3.0 * &self.b(&h20b, &h41)
            + 18.0 * &self.b(h21, h22)
            + 12.0 * &self.b(&h21b, h31)
            + 4.0 * &self.b(h30, &h31b)
            + self.b(&h30b, h40)
            + 4.0 * &self.b(&q, &h33)
            + 3.0 * &self.b(&qb, &h42)
            + 36.0 * &self.c(h11, h11, h21)
            + 36.0 * &self.c(h11, h20, &h21b)
            + 12.0 * &self.c(h11, &h20b, h30)
            + 3.0 * &self.c(h20, h20, &h30b)
            + 18.0 * &self.c(h20, &h20b, h21)
            + 36.0 * &self.c(&q, h11, h22)
            + 12.0 * &self.c(&q, h20, &h31b)
            + 12.0 * &self.c(&q, &h20b, h31)
            + 36.0 * &self.c(&q, h21, &h21b)
            + 4.0 * &self.c(&q, h30, &h30b)
            + 6.0 * &self.c(&q, &q, &h32b)
            + 12.0 * &self.c(&q, &qb, h32)
            + 24.0 * &self.c(&qb, h11, h31)
            + 18.0 * &self.c(&qb, h20, h22)
            + 3.0 * &self.c(&qb, &h20b, h40)
            + 18.0 * &self.c(&qb, h21, h21)
            + 12.0 * &self.c(&qb, &h21b, h30)
            + 3.0 * &self.c(&qb, &qb, &h41)
            + 24.0 * &self.d(&q, h11, h11, h11)
            + 36.0 * &self.d(&q, h11, h20, &h20b)
            + 36.0 * &self.d(&q, &q, h11, &h21b)
            + 6.0 * &self.d(&q, &q, h20, &h30b)
            + 18.0 * &self.d(&q, &q, &h20b, h21)
            + 4.0 * &self.d(&q, &q, &q, &h31b)
            + 18.0 * &self.d(&q, &q, &qb, h22)
            + 72.0 * &self.d(&q, &qb, h11, h21)
            + 36.0 * &self.d(&q, &qb, h20, &h21b)
            + 12.0 * &self.d(&q, &qb, &h20b, h30)
            + 12.0 * &self.d(&q, &qb, &qb, h31)
            + 36.0 * &self.d(&qb, h11, h11, h20)
            + 9.0 * &self.d(&qb, h20, h20, &h20b)
            + 12.0 * &self.d(&qb, &qb, h11, h30)
            + 18.0 * &self.d(&qb, &qb, h20, h21)
            + self.d(&qb, &qb, &qb, h40)
            + 12.0 * &self.e([&q, &q, &q, h11, &h20b])
            + self.e([&q, &q, &q, &q, &h30b])
            + 12.0 * &self.e([&q, &q, &q, &qb, &h21b])
            + 36.0 * &self.e([&q, &q, &qb, h11, h11])
            + 18.0 * &self.e([&q, &q, &qb, h20, &h20b])
            + 18.0 * &self.e([&q, &q, &qb, &qb, h21])
            + 36.0 * &self.e([&q, &qb, &qb, h11, h20])
            + 4.0 * &self.e([&q, &qb, &qb, &qb, h30])
            + 3.0 * &self.e([&qb, &qb, &qb, h20, h20])
            + 3.0 * &self.k([&q, &q, &q, &q, &qb, &h20b])
            + 12.0 * &self.k([&q, &q, &q, &qb, &qb, h11])
            + 6.0 * &self.k([&q, &q, &qb, &qb, &qb, h20])
            + self.l([&q, &q, &q, &q, &qb, &qb, &qb]);
        let g43 = self.inner_p(&h43_core);

        Ok(ThirdOrder { h41, h42, h33, g43, l3: g43.re / 144.0 })
    }

    /// The fifteen real parts whose weighted sum is `Re G32`.
    pub fn g32_decomposition(&self, f: &FirstOrder, h31: &ComplexVec, h22: &ComplexVec) -> [f64; 15] {
        let (q, qb) = (&self.q, &self.qb);
        let FirstOrder { h11, h20, h30, h21, .. } = f;
        let h20b = h20.conj();
        let h21b = h21.conj();
        let re = |v: ComplexVec| self.inner_p(&v).re;
        [
            re(self.e([q, q, q, qb, qb])),
            re(self.d(q, q, q, &h20b)),
            re(self.d(q, qb, qb, h20)),
            re(self.d(q, q, qb, h11)),
            re(self.c(qb, qb, h30)),
            re(self.c(q, q, &h21b)),
            re(self.c(q, qb, h21)),
            re(self.c(q, &h20b, h20)),
            re(self.c(q, h11, h11)),
            re(self.c(qb, h20, h11)),
            re(self.b(qb, h31)),
            re(self.b(q, h22)),
            re(self.b(&h20b, h30)),
            re(self.b(&h21b, h20)),
            re(self.b(h11, h21)),
        ]
    }

    pub fn bordered_checks(&self) -> &[BorderedCheck] {
        &self.bordered
    }

    pub fn resolvent_checks(&self) -> &[ResolventCheck] {
        &self.resolvents
    }
}

/// Weights of `T1..T15` in `Re G32`.
pub const G32_WEIGHTS: [f64; 15] = [1.0, 1.0, 3.0, 6.0, 1.0, 3.0, 6.0, 3.0, 6.0, 6.0, 2.0, 3.0, 1.0, 3.0, 6.0];

pub fn weighted_g32(terms: &[f64; 15]) -> f64 {
    terms.iter().zip(G32_WEIGHTS.iter()).map(|(t, w)| t * w).sum()
}

/// Run all three stages.
pub fn certify<M: SmoothModel + ?Sized>(
    model: &M,
    frame: &HopfFrame,
    source: FormSource,
    tol: Tolerances,
) -> Result<HopfCertificate> {
    let mut proj = Projection::new(model, frame, source, tol);
    let first = proj.first_coefficient()?;
    let second = proj.second_coefficient(&first)?;
    let third = proj.third_coefficient(&first, &second)?;
    let l2_strict = first.g21.re.abs() < tol.l2_validity;
    let validity = Validity { l2_strict, l3_strict: l2_strict && second.g32.re.abs() < tol.l3_validity };
    Ok(HopfCertificate {
        omega0: frame.omega0,
        q: frame.q.clone(),
        p: frame.p.clone(),
        first,
        second,
        third,
        validity,
        source: proj.source,
        tolerances: tol,
        bordered: proj.bordered,
        resolvents: proj.resolvents,
    })
}

/// Certificate of the Watt governor at `(beta, alpha, eps_c)`, using the
/// closed-form frame.
pub fn certify_watt(beta: f64, alpha: f64, source: FormSource) -> Result<HopfCertificate> {
    let model = crate::watt::WattModel::critical(beta, alpha)?;
    let frame = crate::watt::critical_frame(beta, alpha)?;
    certify(&model, &frame, source, Tolerances::default())
}

/// Algorithmic `l1` only (cheap path for grid comparisons).
pub fn first_lyapunov<M: SmoothModel + ?Sized>(model: &M, frame: &HopfFrame, source: FormSource) -> Result<f64> {
    Projection::new(model, frame, source, Tolerances::default())
        .first_coefficient()
        .map(|f| f.l1)
}
