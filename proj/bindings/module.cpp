#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "quermass/body_spec.hpp"
#include "quermass/mixed_volume.hpp"
#include "quermass/quermassintegrals.hpp"
#include "quermass/verify.hpp"

namespace py = pybind11;
using namespace quermass;

namespace {

// Python passes points row-per-point (m x d); the core stores columns.
Body hull_from_rows(const Eigen::MatrixXd& points, int dim) {
  return convex_hull(points.transpose(), dim);
}

Eigen::MatrixXd vertices_as_rows(const Body& b) {
  return b.vertices().transpose();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Affine and mixed affine quermassintegrals of convex bodies: Monte "
      "Carlo estimation over the Grassmannian and inequality verification.";

  py::register_exception<degenerate_body_error>(m, "DegenerateBodyError",
                                                PyExc_RuntimeError);

  py::class_<Body>(m, "Body")
      .def_static("ball",
                  py::overload_cast<int, double>(&Body::ball),
                  py::arg("dim"), py::arg("radius"))
      .def_static("ball",
                  py::overload_cast<int, double, Eigen::VectorXd>(&Body::ball),
                  py::arg("dim"), py::arg("radius"), py::arg("center"))
      .def_static("cube", &Body::cube, py::arg("dim"), py::arg("side"))
      .def_static("simplex", &Body::simplex, py::arg("dim"))
      .def_property_readonly("dim", &Body::dim)
      .def_property_readonly("is_ball", &Body::is_ball)
      .def_property_readonly("is_polytope", &Body::is_polytope)
      .def_property_readonly(
          "vertices", &vertices_as_rows,
          "Extreme points, one per row, in canonical order.")
      .def_property_readonly("radius", &Body::radius)
      .def_property_readonly("center", &Body::center)
      .def("__eq__",
           [](const Body& a, const Body& b) { return a == b; })
      .def("__repr__", [](const Body& b) {
        if (b.is_ball())
          return "<Body ball dim=" + std::to_string(b.dim()) +
                 " radius=" + std::to_string(b.radius()) + ">";
        return "<Body polytope dim=" + std::to_string(b.dim()) +
               " vertices=" + std::to_string(b.vertex_count()) + ">";
      });

  py::class_<LinearMap>(m, "LinearMap")
      .def(py::init<Eigen::MatrixXd>(), py::arg("matrix"))
      .def_static("identity", &LinearMap::identity, py::arg("dim"))
      .def_property_readonly("dim", &LinearMap::dim)
      .def_property_readonly("matrix", &LinearMap::matrix)
      .def_property_readonly("determinant", &LinearMap::determinant)
      .def_property_readonly("unimodular", &LinearMap::unimodular);

  py::class_<SampleStream>(m, "SampleStream")
      .def(py::init([](std::uint64_t seed, std::uint64_t index) {
             return SampleStream{seed, index};
           }),
           py::arg("master_seed"), py::arg("index") = 0)
      .def_readwrite("master_seed", &SampleStream::master_seed)
      .def_readwrite("index", &SampleStream::index);

  py::class_<Subspace>(m, "Subspace")
      .def_readonly("ambient", &Subspace::ambient)
      .def_readonly("dim", &Subspace::dim)
      .def_readonly("basis", &Subspace::basis);

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("value", &Estimate::value)
      .def_readonly("std_error", &Estimate::std_error)
      .def_readonly("samples", &Estimate::samples)
      .def_readonly("ambient", &Estimate::ambient)
      .def_readonly("subspace_dim", &Estimate::subspace_dim)
      .def_readonly("master_seed", &Estimate::master_seed)
      .def("__repr__", [](const Estimate& e) {
        return "<Estimate value=" + std::to_string(e.value) + " +- " +
               std::to_string(e.std_error) + ">";
      });

  py::class_<CheckParams>(m, "CheckParams")
      .def_readonly("ambient", &CheckParams::ambient)
      .def_readonly("subspace_dim", &CheckParams::subspace_dim)
      .def_readonly("samples", &CheckParams::samples)
      .def_readonly("master_seed", &CheckParams::master_seed)
      .def_readonly("r", &CheckParams::r)
      .def_readonly("i", &CheckParams::i)
      .def_readonly("epsilon", &CheckParams::epsilon);

  py::class_<InequalityReport>(m, "InequalityReport")
      .def_readonly("name", &InequalityReport::name)
      .def_readonly("lhs", &InequalityReport::lhs)
      .def_readonly("rhs", &InequalityReport::rhs)
      .def_readonly("margin", &InequalityReport::margin)
      .def_readonly("noise_bound", &InequalityReport::noise_bound)
      .def_readonly("satisfied", &InequalityReport::satisfied)
      .def_readonly("equality_expected", &InequalityReport::equality_expected)
      .def_readonly("params", &InequalityReport::params)
      .def("__repr__", [](const InequalityReport& r) {
        return "<InequalityReport " + r.name +
               " margin=" + std::to_string(r.margin) +
               " satisfied=" + (r.satisfied ? std::string("True")
                                            : std::string("False")) +
               ">";
      });

  py::class_<SuiteConfig>(m, "SuiteConfig")
      .def(py::init<>())
      .def_readwrite("suites", &SuiteConfig::suites)
      .def_readwrite("instances", &SuiteConfig::instances)
      .def_readwrite("ambient", &SuiteConfig::ambient)
      .def_readwrite("subspace_dim", &SuiteConfig::subspace_dim)
      .def_readwrite("samples", &SuiteConfig::samples)
      .def_readwrite("master_seed", &SuiteConfig::master_seed)
      .def_readwrite("epsilon", &SuiteConfig::epsilon)
      .def_readwrite("af_r", &SuiteConfig::af_r)
      .def_readwrite("homothetic", &SuiteConfig::homothetic)
      .def_readwrite("corpus_vertices", &SuiteConfig::corpus_vertices);

  py::class_<SuiteReport>(m, "SuiteReport")
      .def_readonly("reports", &SuiteReport::reports)
      .def_readonly("satisfied_count", &SuiteReport::satisfied_count)
      .def_readonly("violated_count", &SuiteReport::violated_count)
      .def_readonly("corpus_seed", &SuiteReport::corpus_seed);

  m.def("unit_ball_volume", &unit_ball_volume, py::arg("dim"));
  m.def("convex_hull", &hull_from_rows, py::arg("points"), py::arg("dim"),
        "Hull of points given one per row.");
  m.def("volume", &volume, py::arg("body"));
  m.def("affine_dim", &affine_dim, py::arg("body"));
  m.def("minkowski_sum", &minkowski_sum, py::arg("a"), py::arg("b"));
  m.def("scale", &scale, py::arg("body"), py::arg("factor"));
  m.def("translate", &translate, py::arg("body"), py::arg("v"));
  m.def("linear_image", &linear_image, py::arg("body"), py::arg("map"));
  m.def("ball_approx", &ball_approx, py::arg("dim"), py::arg("radius"),
        py::arg("point_count"), py::arg("seed"));

  m.def("haar_sample", &haar_sample, py::arg("stream"), py::arg("n"),
        py::arg("j"));
  m.def("project", &project, py::arg("body"), py::arg("subspace"));

  m.def("mixed_volume", &mixed_volume, py::arg("bodies"));
  m.def("mixed_volume_oracle", &mixed_volume_oracle, py::arg("bodies"),
        py::arg("grid_size"));

  m.def("set_max_threads", &set_max_threads, py::arg("threads"));
  m.def("phi", &phi, py::arg("body"), py::arg("j"), py::arg("samples") = 2000,
        py::arg("master_seed") = 0);
  m.def("phi_mixed", &phi_mixed, py::arg("bodies"), py::arg("samples") = 2000,
        py::arg("master_seed") = 0);
  m.def("phi_pair", &phi_pair, py::arg("k"), py::arg("l"), py::arg("j"),
        py::arg("samples") = 2000, py::arg("master_seed") = 0);
  m.def("phi_ith_mixed", &phi_ith_mixed, py::arg("k"), py::arg("l"),
        py::arg("i"), py::arg("j"), py::arg("ball_points") = 200,
        py::arg("samples") = 2000, py::arg("master_seed") = 0);
  m.def("phi_ith", &phi_ith, py::arg("k"), py::arg("i"), py::arg("j"),
        py::arg("ball_points") = 200, py::arg("samples") = 2000,
        py::arg("master_seed") = 0);
  m.def("phi_exact_2d", &phi_exact_2d, py::arg("polygon"),
        py::arg("quadrature_points") = 1024);
  m.def("paired_phi_batch", &paired_phi_batch, py::arg("tuples"), py::arg("j"),
        py::arg("samples"), py::arg("master_seed"));

  m.def("check_minkowski", &check_minkowski, py::arg("k"), py::arg("l"),
        py::arg("j"), py::arg("samples") = 2000, py::arg("master_seed") = 0);
  m.def("check_af", &check_af, py::arg("bodies"), py::arg("r"),
        py::arg("samples") = 2000, py::arg("master_seed") = 0);
  m.def("check_product", &check_product, py::arg("bodies"),
        py::arg("samples") = 2000, py::arg("master_seed") = 0);
  m.def("check_bm", &check_bm, py::arg("k"), py::arg("l"), py::arg("epsilon"),
        py::arg("j"), py::arg("samples") = 2000, py::arg("master_seed") = 0);
  m.def("check_sl_invariance", &check_sl_invariance, py::arg("bodies"),
        py::arg("g"), py::arg("samples") = 2000, py::arg("master_seed") = 0);
  m.def("is_homothetic", &is_homothetic, py::arg("a"), py::arg("b"),
        py::arg("tol") = 1e-9);
  m.def("random_polytope", &random_polytope, py::arg("stream"), py::arg("dim"),
        py::arg("vertex_count"));
  m.def("random_sl_matrix", &random_sl_matrix, py::arg("stream"), py::arg("n"));
  m.def("run_suite", &run_suite, py::arg("config"));
}
