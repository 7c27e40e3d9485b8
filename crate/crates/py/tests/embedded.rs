use pyo3::prelude::*;
use pyo3::types::PyDict;
use quadfib_py::quadfib_py;

#[test]
fn module_from_embedded_interpreter() {
    pyo3::append_to_inittab!(quadfib_py);
    Python::initialize();
    Python::attach(|py| {
        let globals = PyDict::new(py);
        py.run(
            c"
import quadfib_py as q
assert q.jacobi(2, 7) == 1
assert q.count_n(100) == 15216
quad = q.Quadric([1, 1, 1, -7])
assert not quad.is_locally_soluble()
assert [p for p, f, h in quad.places() if not f] == ['2']
assert q.indicator_via_charsum([1, 1, 1, 3], [1, 1, 1, 1], [0, 0, 0, 0], 2) == q.direct_indicator([1, 1, 1, 3], [1, 1, 1, 1], [0, 0, 0, 0], 2)
assert q.sigma(2, 3, [1, 1, 1, 3], [0, 0, 0, 0]) == -64
try:
    q.Counter(10, ceiling=5)
except RuntimeError:
    pass
else:
    raise AssertionError('ceiling not enforced')
try:
    q.jacobi(1, 4)
except ValueError:
    pass
else:
    raise AssertionError('even modulus accepted')
",
            Some(&globals),
            None,
        )
        .unwrap();
    });
}
