//! Python bindings: orbitals, densities, measures and the sweep/crossing drivers.

use confined2d::analysis::{self, reference_table as table, Crossing, CROSSOVER_TOL, INVERSION_TOL};
use confined2d::hydrogen2d::{self, optimize_alpha};
use confined2d::infotheory::{self, SHANNON_SUM_BOUND};
use confined2d::momentum::{momentum_amplitude, momentum_density_with};
use confined2d::{
    specfun, AnalysisOptions, ConfinedOrbital, ConfinementSetup, DensityMeasures, Error, MeasureRecord, MeasureSpec,
    MomentumOptions, QuantumState, RadialDensity, Space, VariationalProblem,
};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidState { .. }
        | Error::UnknownLabel(_)
        | Error::InvalidRadius(_)
        | Error::InvalidCharge(_)
        | Error::InvalidAlpha(_)
        | Error::OutsideDomain { .. }
        | Error::InvalidParameter(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn state(label: &str) -> PyResult<QuantumState> {
    label.parse().map_err(to_py)
}

fn spec(lam: f64, beta: f64) -> PyResult<MeasureSpec> {
    MeasureSpec::new(lam, beta).map_err(to_py)
}

/// Optimized variational orbital of one state at one confinement radius.
#[pyclass(name = "Orbital", frozen)]
struct PyOrbital {
    inner: ConfinedOrbital,
}

#[pymethods]
impl PyOrbital {
    #[new]
    #[pyo3(signature = (state, r0, z = 1.0))]
    fn new(py: Python<'_>, state: &str, r0: f64, z: f64) -> PyResult<Self> {
        let s = self::state(state)?;
        let setup = ConfinementSetup::new(r0, z).map_err(to_py)?;
        let inner = py.detach(|| VariationalProblem::new(s, setup)?.optimize()).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn state(&self) -> String {
        self.inner.state().label()
    }

    #[getter]
    fn r0(&self) -> f64 {
        self.inner.r0()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    #[getter]
    fn energy(&self) -> f64 {
        self.inner.energy()
    }

    #[getter]
    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    /// True when the optimum sits on the lower edge of the α window.
    #[getter]
    fn constrained(&self) -> bool {
        self.inner.is_constrained()
    }

    /// Normalized radial function R(r).
    fn radial(&self, r: f64) -> PyResult<f64> {
        if !(0.0..=self.inner.r0()).contains(&r) {
            return Err(to_py(Error::OutsideDomain { r, r0: self.inner.r0() }));
        }
        Ok(self.inner.radial(r))
    }

    /// Radial momentum amplitude φ(p).
    fn momentum_amplitude(&self, py: Python<'_>, p: f64) -> PyResult<f64> {
        py.detach(|| momentum_amplitude(&self.inner, p)).map_err(to_py)
    }

    fn position_density(&self) -> PyResult<Density> {
        self.inner.position_density().map(Density::from).map_err(to_py)
    }

    #[pyo3(signature = (rel_tol = None, asymptotic_tail = true))]
    fn momentum_density(&self, py: Python<'_>, rel_tol: Option<f64>, asymptotic_tail: bool) -> PyResult<Density> {
        let mut options = MomentumOptions {
            asymptotic_tail,
            ..MomentumOptions::default()
        };
        if let Some(tol) = rel_tol {
            options.rel_tol = tol;
        }
        py.detach(|| momentum_density_with(&self.inner, options))
            .map(Density::from)
            .map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "Orbital(state='{}', r0={}, alpha={}, energy={})",
            self.state(),
            self.r0(),
            self.alpha(),
            self.energy()
        )
    }
}

/// Radial profile f of a 2D density f/(2π) in position or momentum space.
#[pyclass(frozen)]
struct Density {
    inner: RadialDensity,
}

impl From<RadialDensity> for Density {
    fn from(inner: RadialDensity) -> Self {
        Self { inner }
    }
}

#[pymethods]
impl Density {
    #[getter]
    fn space(&self) -> &'static str {
        match self.inner.space() {
            Space::Position => "position",
            Space::Momentum => "momentum",
        }
    }

    #[getter]
    fn support_end(&self) -> f64 {
        self.inner.support_end()
    }

    #[getter]
    fn norm(&self) -> f64 {
        self.inner.norm()
    }

    #[getter]
    fn norm_defect(&self) -> f64 {
        self.inner.norm_defect()
    }

    fn profile(&self, x: f64) -> f64 {
        self.inner.profile(x)
    }

    /// `∫ f x^k x dx`.
    fn moment(&self, k: i32) -> f64 {
        self.inner.moment(k)
    }

    /// Tabulated `(x, weight, f, f')` quadruples.
    fn samples(&self) -> Vec<(f64, f64, f64, f64)> {
        self.inner.samples().collect()
    }

    fn shannon(&self) -> f64 {
        infotheory::shannon(&self.inner)
    }

    fn fisher(&self) -> PyResult<f64> {
        infotheory::fisher(&self.inner).map_err(to_py)
    }

    fn renyi(&self, order: f64) -> PyResult<f64> {
        infotheory::renyi(&self.inner, order).map_err(to_py)
    }

    fn disequilibrium(&self) -> f64 {
        infotheory::disequilibrium(&self.inner)
    }

    /// Every single-density measure as a dict.
    #[pyo3(signature = (lam = 2.0 / 3.0, beta = 3.0))]
    fn measures<'py>(&self, py: Python<'py>, lam: f64, beta: f64) -> PyResult<Bound<'py, PyDict>> {
        let m = DensityMeasures::compute(&self.inner, &spec(lam, beta)?).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("shannon", m.shannon)?;
        d.set_item("fisher", m.fisher)?;
        d.set_item("renyi_lambda", m.renyi_lambda)?;
        d.set_item("renyi_beta", m.renyi_beta)?;
        d.set_item("disequilibrium", m.disequilibrium)?;
        d.set_item("complexity_fs", m.complexity_fs)?;
        d.set_item("complexity_lmc", m.complexity_lmc)?;
        d.set_item("complexity_lmc_renyi", m.complexity_lmc_renyi)?;
        Ok(d)
    }
}

fn record_dict<'py>(py: Python<'py>, rec: &MeasureRecord) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("state", rec.state.label())?;
    d.set_item("r0", rec.r0)?;
    if let Some(v) = &rec.values {
        for (key, value) in [
            ("alpha", v.alpha),
            ("energy", v.energy),
            ("S_pos", v.s_pos),
            ("S_mom", v.s_mom),
            ("S_sum", v.s_sum),
            ("F_pos", v.f_pos),
            ("F_mom", v.f_mom),
            ("R_lambda_pos", v.r_lambda_pos),
            ("R_beta_pos", v.r_beta_pos),
            ("R_lambda_mom", v.r_lambda_mom),
            ("R_beta_mom", v.r_beta_mom),
            ("Dq_pos", v.dq_pos),
            ("Dq_mom", v.dq_mom),
            ("C_FS_pos", v.c_fs_pos),
            ("C_LMC_pos", v.c_lmc_pos),
            ("C_LR_pos", v.c_lr_pos),
            ("C_FS_mom", v.c_fs_mom),
            ("C_LMC_mom", v.c_lmc_mom),
            ("C_LR_mom", v.c_lr_mom),
            ("parseval_defect", v.parseval_defect),
            ("p_max", v.p_max),
        ] {
            d.set_item(key, value)?;
        }
        d.set_item("F_prod", v.f_prod)?;
    }
    let flags: Vec<&str> = rec.flags.iter().map(|f| f.token()).collect();
    d.set_item("flags", flags)?;
    d.set_item("error", rec.error.clone())?;
    Ok(d)
}

fn analysis_options(lam: f64, beta: f64) -> PyResult<AnalysisOptions> {
    Ok(AnalysisOptions {
        spec: spec(lam, beta)?,
        ..AnalysisOptions::default()
    })
}

/// Optimized orbital; same as `Orbital(state, r0, z)`.
#[pyfunction]
#[pyo3(signature = (state, r0, z = 1.0))]
fn optimize(py: Python<'_>, state: &str, r0: f64, z: f64) -> PyResult<PyOrbital> {
    PyOrbital::new(py, state, r0, z)
}

/// Energy E(α) of the trial function at fixed α.
#[pyfunction]
#[pyo3(signature = (state, r0, alpha, z = 1.0))]
fn energy(state: &str, r0: f64, alpha: f64, z: f64) -> PyResult<f64> {
    let setup = ConfinementSetup::new(r0, z).map_err(to_py)?;
    hydrogen2d::energy(self::state(state)?, setup, alpha).map_err(to_py)
}

/// Exact energy of the free 2D hydrogenic level n.
#[pyfunction]
#[pyo3(signature = (n, z = 1.0))]
fn free_energy(n: u32, z: f64) -> f64 {
    hydrogen2d::free_energy(n, z)
}

/// All measures of one (state, r0) point as a dict.
#[pyfunction]
#[pyo3(signature = (state, r0, lam = 2.0 / 3.0, beta = 3.0))]
fn measure_record<'py>(py: Python<'py>, state: &str, r0: f64, lam: f64, beta: f64) -> PyResult<Bound<'py, PyDict>> {
    let s = self::state(state)?;
    let options = analysis_options(lam, beta)?;
    let rec = py.detach(|| MeasureRecord::compute(s, r0, &options));
    record_dict(py, &rec)
}

/// Records for every (state, r0) pair, ordered by state, then radius.
#[pyfunction]
#[pyo3(signature = (states, radii, lam = 2.0 / 3.0, beta = 3.0))]
fn sweep<'py>(
    py: Python<'py>,
    states: Vec<String>,
    radii: Vec<f64>,
    lam: f64,
    beta: f64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let states = states.iter().map(|s| state(s)).collect::<PyResult<Vec<_>>>()?;
    if let Some(&bad) = radii.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
        return Err(to_py(Error::InvalidRadius(bad)));
    }
    let options = analysis_options(lam, beta)?;
    let records = py.detach(|| analysis::sweep(&states, &radii, &options));
    records.iter().map(|r| record_dict(py, r)).collect()
}

fn crossing_tuple(c: Crossing) -> (f64, f64, f64) {
    (c.estimate, c.lo, c.hi)
}

/// Radius where S_pos and S_mom of `state` cross, as `(estimate, lo, hi)`.
#[pyfunction]
#[pyo3(signature = (state, lo = 1.0, hi = 6.0, tol = CROSSOVER_TOL))]
fn crossover(py: Python<'_>, state: &str, lo: f64, hi: f64, tol: f64) -> PyResult<(f64, f64, f64)> {
    let s = self::state(state)?;
    let options = AnalysisOptions::default();
    py.detach(|| analysis::crossover(s, (lo, hi), tol, &options))
        .map(crossing_tuple)
        .map_err(to_py)
}

/// Radius where the 2s and 3d energies cross, as `(estimate, lo, hi)`.
#[pyfunction]
#[pyo3(signature = (lo = 0.5, hi = 2.0, tol = INVERSION_TOL))]
fn inversion(py: Python<'_>, lo: f64, hi: f64, tol: f64) -> PyResult<(f64, f64, f64)> {
    py.detach(|| analysis::inversion((lo, hi), tol, &Default::default()))
        .map(crossing_tuple)
        .map_err(to_py)
}

/// Optimized energies against the published table.
#[pyfunction]
fn reference_table<'py>(py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let rows = py.detach(|| table(&Default::default()));
    rows.iter()
        .map(|c| {
            let d = PyDict::new(py);
            d.set_item("state", c.state.label())?;
            d.set_item("r0", c.r0)?;
            d.set_item("reference", c.reference)?;
            d.set_item("alpha", c.alpha)?;
            d.set_item("computed", c.computed)?;
            d.set_item("deviation", c.deviation)?;
            d.set_item("error", c.error.clone())?;
            Ok(d)
        })
        .collect()
}

#[pyfunction]
fn bessel_j(m: u32, x: f64) -> f64 {
    specfun::bessel_j(m, x)
}

#[pyfunction]
fn assoc_laguerre(k: u32, a: f64, x: f64) -> f64 {
    specfun::assoc_laguerre(k, a, x)
}

/// `(alpha, energy)` of the optimized orbital.
#[pyfunction]
fn optimal_alpha(py: Python<'_>, state: &str, r0: f64) -> PyResult<(f64, f64)> {
    let s = self::state(state)?;
    let setup = ConfinementSetup::hydrogen(r0).map_err(to_py)?;
    let o = py.detach(|| optimize_alpha(s, setup)).map_err(to_py)?;
    Ok((o.alpha(), o.energy()))
}

#[pymodule]
fn confined2d_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOrbital>()?;
    m.add_class::<Density>()?;
    m.add_function(wrap_pyfunction!(optimize, m)?)?;
    m.add_function(wrap_pyfunction!(optimal_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(energy, m)?)?;
    m.add_function(wrap_pyfunction!(free_energy, m)?)?;
    m.add_function(wrap_pyfunction!(measure_record, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(crossover, m)?)?;
    m.add_function(wrap_pyfunction!(inversion, m)?)?;
    m.add_function(wrap_pyfunction!(reference_table, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_j, m)?)?;
    m.add_function(wrap_pyfunction!(assoc_laguerre, m)?)?;
    m.add("SHANNON_SUM_BOUND", SHANNON_SUM_BOUND)?;
    m.add("STATES", QuantumState::STUDIED.map(|s| s.label()).to_vec())?;
    Ok(())
}
