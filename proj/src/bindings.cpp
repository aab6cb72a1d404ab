#include <pybind11/pybind11.h>
PYBIND11_MODULE(ogw, m) { m.doc() = "stub"; }
