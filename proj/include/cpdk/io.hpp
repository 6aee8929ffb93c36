#pragma once

// File schema and literal syntax.
//
// System files are JSON with schema_version 1.  Complex numbers are [re, im]
// pairs; elements are nested arrays of entries per block, blocks in
// descriptor order; kernels are d×d matrices over the column-stacked
// coordinates.  A file carries either an explicit kernel table (object keyed
// by "x,y" label pairs) or one generator spec (fock / twisted / random_ce).
//
// Expression literals are prefix s-expressions:
//   (base x) | (shift E ELEM) | (rcombo (E ELEM)...) | (lcombo (ELEM E)...)
//   (add E E) | (sub E E) | (neg E) | (mulr E ELEM) | (mull ELEM E)
// where ELEM is a JSON element literal; the sugar forms use the file's
// reference label.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpdk/examples.hpp"
#include "cpdk/index.hpp"
#include "cpdk/kernels.hpp"
#include "cpdk/units.hpp"

namespace cpdk {

using nlohmann::json;

// --- complex / element / matrix literals ------------------------------------

inline json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw SchemaError("complex entries must be [re, im] number pairs, got " + j.dump());
  return Complex(j[0].get<double>(), j[1].get<double>());
}

inline json element_to_json(const AlgebraElement& a) {
  json blocks = json::array();
  for (const Matrix& m : a.blocks) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
      rows.push_back(std::move(row));
    }
    blocks.push_back(std::move(rows));
  }
  return blocks;
}

inline AlgebraElement element_from_json(const AlgebraDescriptor& desc, const json& j) {
  if (!j.is_array() || static_cast<int>(j.size()) != desc.block_count())
    throw SchemaError("element literal must list one block per algebra block");
  std::vector<Matrix> blocks;
  for (int b = 0; b < desc.block_count(); ++b) {
    const int n = desc.block_sizes[b];
    const json& rows = j[b];
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
      throw SchemaError("block " + std::to_string(b) + " must have " + std::to_string(n) + " rows");
    Matrix m(n, n);
    for (int r = 0; r < n; ++r) {
      if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != n)
        throw SchemaError("block " + std::to_string(b) + " must be square");
      for (int c = 0; c < n; ++c) m(r, c) = complex_from_json(rows[r][c]);
    }
    blocks.push_back(std::move(m));
  }
  return AlgebraElement(desc, std::move(blocks));
}

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const json& j, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw SchemaError("matrix literal must have " + std::to_string(rows) + " rows");
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols)
      throw SchemaError("matrix row " + std::to_string(r) + " must have " + std::to_string(cols) +
                        " entries");
    for (int c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

// --- system files ------------------------------------------------------------

inline json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path + "'");
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON in '") + path + "': " + e.what());
  }
}

inline void save_json(const std::string& path, const json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << doc.dump(1) << "\n";
  out.flush();
  if (!out) throw IoError("write failure on '" + path + "'");
}

inline AlgebraDescriptor algebra_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("block_sizes") || !doc["block_sizes"].is_array())
    throw SchemaError("algebra must be an object with a block_sizes array");
  std::vector<int> sizes;
  for (const json& v : doc["block_sizes"]) {
    if (!v.is_number_integer() || v.get<int>() < 1)
      throw SchemaError("block sizes must be positive integers");
    sizes.push_back(v.get<int>());
  }
  return AlgebraDescriptor(std::move(sizes));
}

namespace detail {

inline std::string require_string(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_string())
    throw SchemaError(std::string("missing or non-string field '") + key + "'");
  return doc[key].get<std::string>();
}

inline int require_int(const json& doc, const char* key, int lo) {
  if (!doc.contains(key) || !doc[key].is_number_integer() || doc[key].get<int>() < lo)
    throw SchemaError(std::string("field '") + key + "' must be an integer >= " +
                      std::to_string(lo));
  return doc[key].get<int>();
}

inline KernelSystem explicit_system(const AlgebraDescriptor& desc, const json& doc,
                                    bool enforce_symmetry) {
  if (!doc.contains("labels") || !doc["labels"].is_array() || doc["labels"].empty())
    throw SchemaError("explicit kernel files need a nonempty labels array");
  std::vector<std::string> labels;
  for (const json& l : doc["labels"]) {
    if (!l.is_string()) throw SchemaError("labels must be strings");
    const std::string name = l.get<std::string>();
    if (name.empty() || name.find(',') != std::string::npos)
      throw SchemaError("label names must be nonempty and free of commas");
    labels.push_back(name);
  }
  const json& kernels = doc["kernels"];
  if (!kernels.is_object()) throw SchemaError("kernels must be an object keyed by label pairs");
  for (const auto& [key, val] : kernels.items()) {
    const size_t comma = key.find(',');
    if (comma == std::string::npos) throw SchemaError("kernel key '" + key + "' is not 'x,y'");
    const std::string x = key.substr(0, comma), y = key.substr(comma + 1);
    const auto known = [&](const std::string& n) {
      for (const std::string& l : labels)
        if (l == n) return true;
      return false;
    };
    if (!known(x) || !known(y)) throw SchemaError("kernel key '" + key + "' names unknown labels");
    (void)val;
  }
  const int d = desc.coord_dim();
  std::vector<SuperOperator> table;
  for (const std::string& x : labels)
    for (const std::string& y : labels) {
      const std::string key = x + "," + y;
      if (!kernels.contains(key)) throw IncompleteTableError("missing kernel for pair " + key);
      table.emplace_back(desc, matrix_from_json(kernels[key], d, d));
    }
  return make_kernel_system(desc, std::move(labels), std::move(table),
                            require_string(doc, "reference"), enforce_symmetry);
}

inline KernelSystem generated_system(const AlgebraDescriptor& desc, const json& doc,
                                     bool enforce_symmetry) {
  const json& gen = doc["generator"];
  if (!gen.is_object() || gen.size() != 1)
    throw SchemaError("generator must be an object with exactly one family key");
  KernelSystem sys;
  if (gen.contains("fock")) {
    const json& g = gen["fock"];
    FockSpec spec;
    spec.algebra = desc;
    spec.fock_dim = require_int(g, "fock_dim", 1);
    if (!g.contains("units") || !g["units"].is_array() || g["units"].empty())
      throw SchemaError("fock generator needs a nonempty units array");
    for (const json& u : g["units"]) {
      FockUnit fu;
      fu.name = require_string(u, "name");
      if (!u.contains("zeta") || !u["zeta"].is_array())
        throw SchemaError("fock unit '" + fu.name + "' needs a zeta array");
      for (const json& z : u["zeta"]) fu.zeta.push_back(element_from_json(desc, z));
      if (!u.contains("beta")) throw SchemaError("fock unit '" + fu.name + "' needs a beta");
      fu.beta = element_from_json(desc, u["beta"]);
      spec.units.push_back(std::move(fu));
    }
    sys = fock_system(spec);
  } else if (gen.contains("twisted")) {
    const json& g = gen["twisted"];
    TwistedSpec spec;
    spec.algebra = desc;
    if (!g.contains("h")) throw SchemaError("twisted generator needs a twist element h");
    spec.h = element_from_json(desc, g["h"]);
    if (!g.contains("units") || !g["units"].is_array() || g["units"].empty())
      throw SchemaError("twisted generator needs a nonempty units array");
    for (const json& u : g["units"]) {
      TwistedUnit tu;
      tu.name = require_string(u, "name");
      if (!u.contains("a")) throw SchemaError("twisted unit '" + tu.name + "' needs an element a");
      tu.a = element_from_json(desc, u["a"]);
      spec.units.push_back(std::move(tu));
    }
    sys = twisted_system(spec);
  } else if (gen.contains("random_ce")) {
    const json& g = gen["random_ce"];
    const int fock_dim = require_int(g, "fock_dim", 1);
    const int unit_count = require_int(g, "unit_count", 1);
    const int seed = require_int(g, "seed", 0);
    sys = random_ce_system(desc, fock_dim, unit_count, static_cast<std::uint64_t>(seed));
  } else {
    throw SchemaError("unknown generator family");
  }
  const std::string ref = require_string(doc, "reference");
  if (ref != sys.reference_label())
    throw SchemaError("reference '" + ref + "' does not name the generator's zero unit '" +
                      sys.reference_label() + "'");
  (void)enforce_symmetry;  // generated tables are symmetric by construction
  return sys;
}

}  // namespace detail

inline KernelSystem system_from_json(const json& doc, bool enforce_symmetry = true) {
  if (!doc.is_object()) throw SchemaError("system file must be a JSON object");
  if (detail::require_int(doc, "schema_version", 1) != 1)
    throw SchemaError("unsupported schema_version");
  if (!doc.contains("algebra")) throw SchemaError("missing algebra");
  const AlgebraDescriptor desc = algebra_from_json(doc["algebra"]);
  const bool has_kernels = doc.contains("kernels");
  const bool has_generator = doc.contains("generator");
  if (has_kernels == has_generator)
    throw SchemaError("file must carry exactly one of kernels/generator");
  return has_kernels ? detail::explicit_system(desc, doc, enforce_symmetry)
                     : detail::generated_system(desc, doc, enforce_symmetry);
}

inline KernelSystem load_system(const std::string& path, bool enforce_symmetry = true) {
  return system_from_json(load_json(path), enforce_symmetry);
}

inline json system_to_json(const KernelSystem& sys) {
  json doc;
  doc["schema_version"] = 1;
  doc["algebra"] = {{"block_sizes", sys.algebra.block_sizes}};
  doc["labels"] = sys.labels;
  doc["reference"] = sys.reference_label();
  json kernels = json::object();
  for (int i = 0; i < sys.label_count(); ++i)
    for (int j = 0; j < sys.label_count(); ++j)
      kernels[sys.labels[i] + "," + sys.labels[j]] = matrix_to_json(sys.kernel(i, j).mat);
  doc["kernels"] = std::move(kernels);
  return doc;
}

// --- expression literals -------------------------------------------------------

namespace detail {

struct ExprParser {
  const std::string& text;
  const AlgebraDescriptor& desc;
  const std::string& reference;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at offset " + std::to_string(pos));
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  char peek() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of expression");
    return text[pos];
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }

  std::string atom() {
    skip_ws();
    const size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '(' && text[pos] != ')' && text[pos] != '[')
      ++pos;
    if (pos == start) fail("expected a name");
    return text.substr(start, pos - start);
  }

  AlgebraElement element() {
    skip_ws();
    if (peek() != '[') fail("expected an element literal");
    const size_t start = pos;
    int depth = 0;
    while (pos < text.size()) {
      if (text[pos] == '[') ++depth;
      if (text[pos] == ']' && --depth == 0) {
        ++pos;
        break;
      }
      ++pos;
    }
    if (depth != 0) fail("unbalanced element literal");
    json j;
    try {
      j = json::parse(text.substr(start, pos - start));
    } catch (const json::parse_error& e) {
      fail(std::string("bad element literal: ") + e.what());
    }
    return element_from_json(desc, j);
  }

  UnitExprPtr expr() {
    expect('(');
    const std::string head = atom();
    UnitExprPtr result;
    const UnitExprPtr omega = base(reference);
    if (head == "base") {
      result = base(atom());
    } else if (head == "shift") {
      UnitExprPtr inner = expr();
      result = shifted(std::move(inner), element());
    } else if (head == "rcombo") {
      std::vector<std::pair<UnitExprPtr, AlgebraElement>> terms;
      while (peek() == '(') {
        // Lookahead: a term group "(expr ELEM)" also starts with '('.
        const size_t mark = pos;
        ++pos;
        if (peek() == '(') {
          UnitExprPtr e = expr();
          AlgebraElement k = element();
          expect(')');
          terms.emplace_back(std::move(e), std::move(k));
        } else {
          pos = mark;
          break;
        }
      }
      if (terms.empty()) fail("rcombo needs at least one (expr element) group");
      result = right_combo(std::move(terms));
    } else if (head == "lcombo") {
      std::vector<std::pair<AlgebraElement, UnitExprPtr>> terms;
      while (peek() == '(') {
        const size_t mark = pos;
        ++pos;
        if (peek() == '[') {
          AlgebraElement k = element();
          UnitExprPtr e = expr();
          expect(')');
          terms.emplace_back(std::move(k), std::move(e));
        } else {
          pos = mark;
          break;
        }
      }
      if (terms.empty()) fail("lcombo needs at least one (element expr) group");
      result = left_combo(std::move(terms));
    } else if (head == "add") {
      UnitExprPtr a = expr();
      UnitExprPtr b = expr();
      result = add(a, b, omega, desc);
    } else if (head == "sub") {
      UnitExprPtr a = expr();
      UnitExprPtr b = expr();
      result = sub(a, b, omega, desc);
    } else if (head == "neg") {
      result = neg(expr(), omega, desc);
    } else if (head == "mulr") {
      UnitExprPtr a = expr();
      result = mul_right(a, element(), omega);
    } else if (head == "mull") {
      AlgebraElement k = element();
      result = mul_left(k, expr(), omega);
    } else {
      fail("unknown expression head '" + head + "'");
    }
    expect(')');
    return result;
  }
};

}  // namespace detail

inline UnitExprPtr parse_unit_expr(const std::string& text, const AlgebraDescriptor& desc,
                                   const std::string& reference_label) {
  detail::ExprParser p{text, desc, reference_label};
  UnitExprPtr e = p.expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing characters after expression");
  return e;
}

inline std::string format_unit_expr(const UnitExprPtr& e) {
  if (!e) return "()";
  switch (e->kind) {
    case UnitExpr::Kind::Base:
      return "(base " + e->label + ")";
    case UnitExpr::Kind::Shift:
      return "(shift " + format_unit_expr(e->inner) + " " + element_to_json(e->shift).dump() + ")";
    case UnitExpr::Kind::RightCombo: {
      std::string s = "(rcombo";
      for (const auto& [x, k] : e->right_terms)
        s += " (" + format_unit_expr(x) + " " + element_to_json(k).dump() + ")";
      return s + ")";
    }
    case UnitExpr::Kind::LeftCombo: {
      std::string s = "(lcombo";
      for (const auto& [k, x] : e->left_terms)
        s += " (" + element_to_json(k).dump() + " " + format_unit_expr(x) + ")";
      return s + ")";
    }
  }
  return "()";
}

// --- report serialization ------------------------------------------------------

inline std::string format_sig(double v, int digits = 15) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline json check_report_to_json(const CheckReport& rep) {
  json items = json::array();
  for (const CheckItem& c : rep.items) {
    json it = {{"name", c.name}, {"residual", c.residual}, {"pass", c.pass}};
    if (!c.witness.empty()) it["witness"] = c.witness;
    items.push_back(std::move(it));
  }
  return {{"items", std::move(items)}, {"pass", rep.passed()}};
}

inline json symmetry_report_to_json(const SymmetryReport& rep) {
  json j = {{"max_residual", rep.max_residual}, {"pass", rep.pass}};
  if (!rep.pass) j["worst_pair"] = {rep.worst_x, rep.worst_y};
  return j;
}

inline json ccpd_report_to_json(const CcpdReport& rep) {
  json j = {{"samples", rep.samples},
            {"min_eigenvalue", rep.min_eigenvalue},
            {"pass", rep.pass}};
  if (rep.witness) {
    json w = {{"labels", rep.witness->labels}, {"min_eigenvalue", rep.witness->min_eig}};
    json as = json::array(), bs = json::array();
    for (const AlgebraElement& a : rep.witness->a) as.push_back(element_to_json(a));
    for (const AlgebraElement& b : rep.witness->b) bs.push_back(element_to_json(b));
    w["a"] = std::move(as);
    w["b"] = std::move(bs);
    w["value"] = element_to_json(rep.witness->value);
    j["witness"] = std::move(w);
  }
  return j;
}

inline json index_report_to_json(const IndexReport& rep) {
  json gram = json::array();
  const int m = static_cast<int>(rep.gram.exprs.size());
  for (int i = 0; i < m; ++i) {
    json row = json::array();
    for (int j2 = 0; j2 < m; ++j2)
      row.push_back(element_to_json(rep.gram.entries[static_cast<size_t>(i) * m + j2]));
    gram.push_back(std::move(row));
  }
  json exprs = json::array();
  for (const UnitExprPtr& e : rep.gram.exprs) exprs.push_back(format_unit_expr(e));
  json eigs = json::array();
  for (double v : rep.eigenvalues) eigs.push_back(format_sig(v));
  return {{"schema_version", 1},
          {"exprs", std::move(exprs)},
          {"numerical_rank", rep.numerical_rank},
          {"quotient_dim", rep.quotient_dim},
          {"null_mask", rep.null_mask},
          {"eigenvalues", std::move(eigs)},
          {"gram", std::move(gram)}};
}

}  // namespace cpdk
