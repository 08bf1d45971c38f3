#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pdtlab/circuits.hpp"
#include "pdtlab/solver.hpp"
#include "pdtlab/spectral.hpp"
#include "pdtlab/strategies.hpp"

namespace py = pybind11;
using namespace pdtlab;

namespace {

py::dict simulation_dict(const Strategy& s, const PointFunction& f) {
  const auto rep = simulate_all(s, f);
  py::dict d;
  d["name"] = s.name();
  d["correct"] = rep.correct;
  d["worst_case"] = rep.worst_case;
  d["budget"] = s.budget();
  d["inputs"] = rep.inputs;
  return d;
}

std::unique_ptr<Strategy> named_strategy(const std::string& name, int size) {
  if (name == "maj") return maj_strategy(size);
  if (name == "rmaj") return rmaj_strategy(size);
  if (name == "thr2") return thr2_strategy(size);
  if (name == "thr3") return thr3_strategy(size);
  throw Error("unknown strategy '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_pdtlab, m) {
  m.doc() = "Parity decision tree and Fourier toolkit";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<BooleanFunction>(m, "BooleanFunction")
      .def_static("named", [](const std::string& spec) { return build_named(parse_named(spec)); }, py::arg("spec"))
      .def_static("from_pdttt", &read_pdttt, py::arg("text"))
      .def_static(
          "from_values",
          [](const std::vector<int>& values) {
            const auto size = values.size();
            if (size == 0 || !std::has_single_bit(size)) throw Error("value list length must be a power of two");
            const int n = std::countr_zero(size);
            return BooleanFunction::from_predicate(n, [&values](Assignment x) { return values[x] == -1; });
          },
          py::arg("values"), "Build from f(x) in {-1, 1} listed by index.")
      .def_property_readonly("n", &BooleanFunction::num_vars)
      .def("__call__", &BooleanFunction::operator(), py::arg("x"))
      .def("values",
           [](const BooleanFunction& f) {
             std::vector<int> v(f.table_size());
             for (Assignment x = 0; x < v.size(); ++x) v[x] = f(x);
             return v;
           })
      .def("to_pdttt", &write_pdttt)
      .def("anf", [](const BooleanFunction& f) { return format_anf(anf(f)); })
      .def("__eq__", [](const BooleanFunction& a, const BooleanFunction& b) { return a == b; });

  m.def(
      "spectrum",
      [](const BooleanFunction& f) {
        const auto s = wht(f);
        py::dict d;
        d["coeffs"] = s.coeffs;
        d["spar"] = sparsity(s);
        d["gran"] = granularity(s);
        d["deg2"] = deg2(f);
        return d;
      },
      py::arg("f"), "Integer Walsh-Hadamard coefficients (scaled by 2^n) and derived measures.");

  m.def(
      "bound_profile",
      [](const BooleanFunction& f, bool certificate) {
        const auto b = bound_profile(f, certificate);
        py::dict d;
        d["spar"] = b.spar;
        d["gran"] = b.gran;
        d["deg2"] = b.deg2;
        d["sparsity_bound"] = b.sparsity_bound;
        d["deg2_bound"] = b.deg2_bound;
        d["gran_bound"] = b.gran_bound;
        d["cert_bound"] = b.cert_bound;
        d["best_lower"] = b.best_lower;
        return d;
      },
      py::arg("f"), py::arg("certificate") = false);

  m.def(
      "exact_depth",
      [](const BooleanFunction& f, double budget_seconds, int threads) {
        SolveOptions opt;
        opt.time_budget = std::chrono::milliseconds(static_cast<long long>(budget_seconds * 1000));
        opt.threads = threads;
        SolveReport r;
        {
          py::gil_scoped_release release;
          r = exact_depth(f, opt);
        }
        py::dict d;
        d["exact"] = r.exact;
        d["depth"] = r.exact ? py::object(py::int_(r.depth)) : py::object(py::none());
        d["lower"] = r.lower;
        d["upper"] = r.upper;
        d["tree"] = r.witness ? py::object(py::str(write_tree(*r.witness))) : py::object(py::none());
        d["nodes_expanded"] = r.nodes_expanded;
        return d;
      },
      py::arg("f"), py::arg("budget_seconds") = 0.0, py::arg("threads") = 1);

  m.def(
      "parity_certificate", [](const BooleanFunction& f) { return parity_certificate(f).value; }, py::arg("f"));

  m.def(
      "adversary_refute",
      [](const BooleanFunction& f, const std::string& tree) -> py::object {
        const auto r = adversary_refute(f, read_tree(tree, f.num_vars()));
        if (!r.applicable) return py::none();
        py::dict d;
        py::list path;
        for (const auto& step : r.path) path.append(py::make_tuple(step.query.bits, step.answer));
        d["path"] = path;
        d["leaf_label"] = r.leaf_label;
        d["points"] = py::make_tuple(r.first, r.second);
        return std::move(d);
      },
      py::arg("f"), py::arg("tree"), "Refutation of a claimed tree, or None when the depth exceeds gran(f).");

  m.def(
      "strategy_report",
      [](const std::string& name, int size) {
        const auto s = named_strategy(name, size);
        const int n = s->num_vars();
        PointFunction f;
        if (name == "maj") f = [n](Assignment x) { return 2 * std::popcount(x) >= n ? -1 : 1; };
        else if (name == "rmaj") f = [size](Assignment x) { return recursive_majority_value(size, x); };
        else if (name == "thr2") f = [](Assignment x) { return std::popcount(x) >= 2 ? -1 : 1; };
        else f = [](Assignment x) { return std::popcount(x) >= 3 ? -1 : 1; };
        return simulation_dict(*s, f);
      },
      py::arg("name"), py::arg("size"), "Exhaustive simulation of a built-in strategy.");

  m.def(
      "circuit_strategy",
      [](const std::string& netlist) {
        const auto c = parse_circuit(netlist);
        auto d = simulation_dict(*circuit_to_strategy(c), [&c](Assignment x) { return c.eval(x); });
        d["and_count"] = and_count(c);
        return d;
      },
      py::arg("netlist"));

  m.def(
      "reduce_threshold",
      [](const std::string& tree, int n, int k) {
        const auto s = thr_reduce(read_tree(tree, n + 2), n, k);
        return simulation_dict(*s, [k](Assignment x) { return std::popcount(x) >= k ? -1 : 1; });
      },
      py::arg("tree"), py::arg("n"), py::arg("k"));
}
