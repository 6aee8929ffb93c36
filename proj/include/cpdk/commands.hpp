#pragma once

// Command layer shared by the CLI binary and the tests.  Each command loads
// inputs, runs library routines, writes a JSON report to `out` and a short
// human summary to `err`, and returns the process exit code:
// 0 all checks pass, 1 a property failed, 2 bad input, 3 I/O failure.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "cpdk/io.hpp"
#include "cpdk/tensor.hpp"

namespace cpdk {

namespace detail {

template <typename F>
int run_command(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return 3;
  } catch (const PropertyViolation& e) {
    err << "property violation: " << e.what() << "\n";
    return 1;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

inline void print_check_table(std::ostream& err, const std::string& title,
                              const CheckReport& rep) {
  err << title << "\n";
  for (const CheckItem& c : rep.items)
    err << "  " << (c.pass ? "ok  " : "FAIL") << "  " << c.name << "  residual "
        << format_sig(c.residual, 3) << "\n";
}

}  // namespace detail

struct ValidateOptions {
  int samples = 200;
  double tol = 1e-8;
  std::uint64_t seed = 7;
};

inline int cmd_validate(const std::string& path, const ValidateOptions& opt, std::ostream& out,
                        std::ostream& err) {
  return detail::run_command(err, [&]() {
    const KernelSystem sys = load_system(path, /*enforce_symmetry=*/false);

    const SymmetryReport sym = check_symmetry(sys);
    const CcpdReport ccpd = check_ccpd(sys, opt.samples, opt.tol, opt.seed);
    const CheckReport axioms =
        check_module_axioms(sys, std::max(10, opt.samples / 8), 1e-9, opt.seed + 1);
    const CheckReport inner_rep =
        check_inner_properties(sys, std::max(20, opt.samples / 2), opt.seed + 2, opt.tol);

    const bool pass = sym.pass && ccpd.pass && axioms.passed() && inner_rep.passed();

    json doc = {{"file", path},
                {"pass", pass},
                {"suites",
                 {{"symmetry", symmetry_report_to_json(sym)},
                  {"ccpd", ccpd_report_to_json(ccpd)},
                  {"module_axioms", check_report_to_json(axioms)},
                  {"inner_products", check_report_to_json(inner_rep)}}}};
    out << doc.dump(1) << "\n";

    err << "validate " << path << "\n";
    err << "  " << (sym.pass ? "ok  " : "FAIL") << "  swap symmetry  residual "
        << format_sig(sym.max_residual, 3) << "\n";
    err << "  " << (ccpd.pass ? "ok  " : "FAIL") << "  conditional positivity  min eigenvalue "
        << format_sig(ccpd.min_eigenvalue, 3) << " over " << ccpd.samples << " tuples\n";
    detail::print_check_table(err, "  module axioms", axioms);
    detail::print_check_table(err, "  inner products", inner_rep);
    err << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 1;
  });
}

inline int cmd_index(const std::string& path, const std::vector<std::string>& expr_literals,
                     double tol, std::ostream& out, std::ostream& err) {
  return detail::run_command(err, [&]() {
    const KernelSystem sys = load_system(path);
    std::vector<UnitExprPtr> exprs;
    if (expr_literals.empty()) {
      for (const std::string& l : sys.labels) exprs.push_back(base(l));
    } else {
      for (const std::string& lit : expr_literals)
        exprs.push_back(parse_unit_expr(lit, sys.algebra, sys.reference_label()));
    }
    // Parsed expressions may reference unknown labels; surface that as an
    // input error before any spectra are computed.
    for (const UnitExprPtr& e : exprs) eval_kernel(sys, e, e);

    const IndexReport rep = index_report(sys, exprs, tol);
    out << index_report_to_json(rep).dump(1) << "\n";

    err << "index " << path << "\n";
    err << "  expressions " << exprs.size() << ", numerical rank " << rep.numerical_rank << "\n";
    err << "  eigenvalues";
    for (double v : rep.eigenvalues) err << " " << format_sig(v, 6);
    err << "\n";
    return 0;
  });
}

inline int cmd_tensor(const std::string& path_a, const std::string& path_b,
                      const std::string& out_path, std::ostream& out, std::ostream& err) {
  return detail::run_command(err, [&]() {
    const KernelSystem a = load_system(path_a);
    const KernelSystem b = load_system(path_b);
    const TensorSystem ts = tensor_system(a, b);
    save_json(out_path, system_to_json(ts.system));
    json doc = {{"out", out_path},
                {"labels", ts.system.label_count()},
                {"coord_dim", ts.system.algebra.coord_dim()}};
    out << doc.dump(1) << "\n";
    err << "tensor " << path_a << " x " << path_b << " -> " << out_path << " ("
        << ts.system.label_count() << " labels)\n";
    return 0;
  });
}

namespace detail {

inline json fock_demo_file() {
  const AlgebraDescriptor m2({2});
  const AlgebraElement zero = zero_element(m2);
  auto elem = [&](Complex e00, Complex e01, Complex e10, Complex e11) {
    AlgebraElement a = zero;
    a.blocks[0] << e00, e01, e10, e11;
    return a;
  };
  const AlgebraElement one = unit(m2);

  json units = json::array();
  units.push_back({{"name", "w"},
                   {"zeta", {element_to_json(zero), element_to_json(zero)}},
                   {"beta", element_to_json(zero)}});
  units.push_back({{"name", "u1"},
                   {"zeta", {element_to_json(one), element_to_json(zero)}},
                   {"beta", element_to_json(elem(0, 0.25, 0, 0))}});
  units.push_back({{"name", "u2"},
                   {"zeta", {element_to_json(zero), element_to_json(one)}},
                   {"beta", element_to_json(elem(0, 0, 0.25, 0))}});
  units.push_back({{"name", "u3"},
                   {"zeta", {element_to_json(one), element_to_json(one)}},
                   {"beta", element_to_json(0.5 * one)}});

  return {{"schema_version", 1},
          {"comment",
           "module-family demo over one 2x2 block; two independent module directions, "
           "index rank 4"},
          {"algebra", {{"block_sizes", {2}}}},
          {"reference", "w"},
          {"generator", {{"fock", {{"fock_dim", 2}, {"units", std::move(units)}}}}}};
}

inline json twisted_demo_file() {
  const AlgebraDescriptor m3({3});
  auto elem = [&](std::initializer_list<Complex> entries) {
    AlgebraElement a = zero_element(m3);
    int i = 0;
    for (Complex v : entries) {
      a.blocks[0](i / 3, i % 3) = v;
      ++i;
    }
    return a;
  };
  const AlgebraElement h = elem({1, 0.5, 0, 0.5, 2, 0, 0, 0, 3});
  const AlgebraElement a1 = elem({0, 1, 0, 0, 0, 0, 0, 0, 0});
  const AlgebraElement a2 = elem({0, 0, 0, 0, 0, 1, 0, -1, 0});
  const AlgebraElement a3 = elem({0, 0, Complex(0, 0.5), 0, 0, 0, 0, 0, 0});

  json units = json::array();
  units.push_back({{"name", "w"}, {"a", element_to_json(zero_element(m3))}});
  units.push_back({{"name", "x1"}, {"a", element_to_json(a1)}});
  units.push_back({{"name", "x2"}, {"a", element_to_json(a2)}});
  units.push_back({{"name", "x3"}, {"a", element_to_json(a3)}});

  return {{"schema_version", 1},
          {"comment", "twisted demo over one 3x3 block; every unit collapses, index rank 0"},
          {"algebra", {{"block_sizes", {3}}}},
          {"reference", "w"},
          {"generator", {{"twisted", {{"h", element_to_json(h)}, {"units", std::move(units)}}}}}};
}

inline json random_ce_file(std::uint64_t seed) {
  return {{"schema_version", 1},
          {"comment", "random inner-product-form system; conditionally positive by construction"},
          {"algebra", {{"block_sizes", {2}}}},
          {"reference", "w"},
          {"generator",
           {{"random_ce",
             {{"fock_dim", 2}, {"unit_count", 4}, {"seed", static_cast<int>(seed)}}}}}};
}

}  // namespace detail

inline int cmd_examples(const std::string& name, std::uint64_t seed, const std::string& out_path,
                        std::ostream& out, std::ostream& err) {
  return detail::run_command(err, [&]() {
    json doc;
    if (name == "fock-demo") {
      doc = detail::fock_demo_file();
    } else if (name == "twisted-demo") {
      doc = detail::twisted_demo_file();
    } else if (name == "random-ce") {
      doc = detail::random_ce_file(seed);
    } else {
      throw InputError("unknown example '" + name +
                       "' (expected fock-demo, twisted-demo, or random-ce)");
    }
    // Generated files must load back cleanly.
    system_from_json(doc);
    save_json(out_path, doc);
    json summary = {{"out", out_path}, {"example", name}};
    out << summary.dump(1) << "\n";
    err << "examples " << name << " -> " << out_path << "\n";
    return 0;
  });
}

}  // namespace cpdk
