use pyo3::prelude::*;

#[pymodule]
fn hypdisc_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
