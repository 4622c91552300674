#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qrvc/field.hpp"
#include "qrvc/montecarlo.hpp"
#include "qrvc/search.hpp"
#include "qrvc/shatter.hpp"
#include "qrvc/weil.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace qrvc;

namespace {

ZeroConvention conv(const std::string& name) { return parse_convention(name); }

std::vector<Elem> to_vec(const Subset& y) { return {y.elems().begin(), y.elems().end()}; }

py::dict check_row(const CheckRow& r) {
  return py::dict("check"_a = r.check, "q"_a = r.q, "r"_a = r.r, "n"_a = r.n, "instances"_a = r.instances,
                  "measured"_a = r.measured, "bound"_a = r.bound, "margin"_a = r.margin,
                  "violations"_a = r.violations);
}

py::list report_rows(const VerifyReport& rep) {
  py::list out;
  for (const auto& row : rep.rows) out.append(check_row(row));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "VC dimension of power-residue sets in prime fields";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  m.def("is_prime", &is_prime, "n"_a);
  m.def("floor_log2", &floor_log2, "n"_a);

  py::class_<PrimeField>(m, "PrimeField")
      .def_property_readonly("q", &PrimeField::modulus)
      .def_property_readonly("generator", &PrimeField::generator)
      .def("dlog", [](const PrimeField& f, Elem x) {
        if (x == 0 || x >= f.modulus()) throw Error(ErrorCode::InvalidArgument, "dlog needs a nonzero element");
        return f.dlog(x);
      })
      .def("exp", [](const PrimeField& f, Elem a) { return f.exp(a % (f.modulus() - 1)); })
      .def("primitive_roots", &PrimeField::primitive_roots)
      .def("__repr__", [](const PrimeField& f) {
        return "PrimeField(q=" + std::to_string(f.modulus()) + ", g=" + std::to_string(f.generator()) + ")";
      });
  m.def("make_field", py::overload_cast<std::uint64_t>(&make_field), "q"_a);

  py::class_<ResidueTable>(m, "ResidueTable")
      .def_readonly("q", &ResidueTable::q)
      .def_readonly("r", &ResidueTable::r)
      .def_readonly("coset_rep", &ResidueTable::coset_rep)
      .def_property_readonly("convention", [](const ResidueTable& t) { return std::string(to_string(t.convention)); })
      .def_property_readonly("members", [](const ResidueTable& t) {
        std::vector<Elem> out;
        for (Elem x = 0; x < t.q; ++x)
          if (t.member[x]) out.push_back(x);
        return out;
      })
      .def("__contains__", [](const ResidueTable& t, Elem x) { return x < t.q && t.contains(x); });
  m.def(
      "residue_table",
      [](const PrimeField& f, Elem r, Elem t, const std::string& c) { return residue_table(f, r, t, conv(c)); },
      "field"_a, "r"_a, "t"_a = 1, "convention"_a = "zero-in");
  m.def(
      "squares", [](const PrimeField& f, const std::string& c) { return squares(f, conv(c)); }, "field"_a,
      "convention"_a = "zero-in");

  py::class_<Subset>(m, "Subset")
      .def(py::init([](Elem q, std::vector<Elem> elems) { return Subset(q, std::move(elems)); }), "q"_a, "elems"_a)
      .def_property_readonly("q", &Subset::modulus)
      .def_property_readonly("elems", &to_vec)
      .def("translated", &Subset::translated)
      .def("dilated", &Subset::dilated)
      .def("__len__", &Subset::size)
      .def("__contains__", &Subset::contains)
      .def("__eq__", [](const Subset& a, const Subset& b) { return a == b; })
      .def("__repr__", [](const Subset& y) {
        std::string s = "Subset(" + std::to_string(y.modulus()) + ", [";
        for (int i = 0; i < y.size(); ++i) s += (i ? ", " : "") + std::to_string(y[i]);
        return s + "])";
      });

  m.def(
      "pattern_counts", [](const Subset& y, const ResidueTable& t) { return pattern_counts(y, t).counts; }, "y"_a,
      "table"_a);
  m.def("is_shattered", &is_shattered, "y"_a, "table"_a);
  m.def("shattering_index", py::overload_cast<const Subset&, const ResidueTable&>(&shattering_index), "y"_a,
        "table"_a);
  m.def(
      "realized_patterns", [](const Subset& y, const ResidueTable& t) { return realized_patterns(y, t).bits; }, "y"_a,
      "table"_a);
  m.def(
      "fold_patterns",
      [](const std::vector<std::uint8_t>& bits) {
        int n = 0;
        while ((std::size_t{1} << n) < bits.size()) ++n;
        if ((std::size_t{1} << n) != bits.size()) throw Error(ErrorCode::InvalidArgument, "length must be 2^n");
        return fold_patterns(RealizedPatterns{n, bits}).bits;
      },
      "bits"_a);

  m.def(
      "vc_dimension",
      [](std::uint64_t q, const std::string& c, const std::string& canon, std::optional<int> early_exit_at, int jobs) {
        SearchOptions opts;
        opts.convention = conv(c);
        opts.canonicalization = parse_canonicalization(canon);
        opts.early_exit_at = early_exit_at;
        opts.jobs = jobs;
        VcResult r;
        {
          py::gil_scoped_release release;
          r = vc_dimension(q, opts);
        }
        return py::dict("q"_a = r.q, "vcdim"_a = r.vcdim, "alpha_q"_a = r.alpha_q, "witness"_a = to_vec(r.witness),
                        "lower_bound"_a = r.lower_bound, "convention"_a = std::string(to_string(r.convention)),
                        "nodes"_a = r.nodes, "elapsed_ms"_a = r.elapsed.count());
      },
      "q"_a, "convention"_a = "zero-in", "canonicalization"_a = "affine", "early_exit_at"_a = py::none(),
      "jobs"_a = 1);
  m.def(
      "testing_dimension",
      [](std::uint64_t q, const std::string& c, int cap) { return testing_dimension(q, conv(c), cap); }, "q"_a,
      "convention"_a = "zero-in", "cap"_a);
  m.def(
      "longest_shattered_ap",
      [](std::uint64_t q, const std::string& c) { return longest_shattered_ap(q, conv(c)).longest; }, "q"_a,
      "convention"_a = "zero-in");

  m.def(
      "estimate_p",
      [](std::uint64_t q, int n, std::uint64_t trials, std::uint64_t seed, const std::string& c, int jobs) {
        ProbPoint p;
        {
          py::gil_scoped_release release;
          p = estimate_p(q, n, trials, seed, conv(c), jobs);
        }
        return py::dict("q"_a = p.q, "n"_a = p.n, "trials"_a = p.trials, "hits"_a = p.hits, "ratio"_a = p.ratio,
                        "p_hat"_a = p.p_hat, "seed"_a = p.seed, "convention"_a = std::string(to_string(p.convention)));
      },
      "q"_a, "n"_a, "trials"_a = 1000, "seed"_a = 0, "convention"_a = "zero-in", "jobs"_a = 1);

  m.def(
      "char_sum",
      [](std::uint64_t q, Elem r, const Subset& y, std::vector<Elem> k) {
        const auto chi = character_table(make_field(q), r);
        return char_sum(chi, PolySpec{y, std::move(k)});
      },
      "q"_a, "r"_a, "roots"_a, "exponents"_a);
  m.def(
      "verify_weil",
      [](std::uint64_t q, Elem r, int n_max) { return report_rows(verify_weil(character_table(make_field(q), r), n_max)); },
      "q"_a, "r"_a, "n_max"_a);
  m.def(
      "verify_equidistribution",
      [](std::uint64_t q, Elem r, int n_max, std::uint64_t samples, std::uint64_t seed) {
        return report_rows(verify_equidistribution(character_table(make_field(q), r), n_max, samples, seed));
      },
      "q"_a, "r"_a, "n_max"_a, "samples"_a = 500, "seed"_a = 0);
  m.def(
      "verify_fourier_identity",
      [](std::uint64_t q, Elem r, int n_max, std::uint64_t samples, std::uint64_t seed) {
        return report_rows(verify_fourier_identity(character_table(make_field(q), r), n_max, samples, seed));
      },
      "q"_a, "r"_a, "n_max"_a, "samples"_a = 100, "seed"_a = 0);
  m.def(
      "verify_shattering_theorem",
      [](std::uint64_t q, Elem r, double epsilon) {
        const auto rep = verify_shattering_theorem(make_field(q), r, epsilon);
        return py::dict("q"_a = rep.q, "r"_a = rep.r, "epsilon"_a = rep.epsilon, "n_star"_a = rep.n_star,
                        "sets_checked"_a = rep.sets_checked, "passed"_a = rep.passed,
                        "counterexample"_a = to_vec(rep.counterexample));
      },
      "q"_a, "r"_a = 2, "epsilon"_a = 0.1);
}
